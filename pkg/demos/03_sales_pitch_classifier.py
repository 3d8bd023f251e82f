"""Train the sales-pitch classifier on the bundled synthetic corpus and
poke at its behavior.

Six categories: Traffic (draw viewers), Interaction (engage), Selling
(describe the product), Order (prompt the purchase), Urge (scarcity
pressure), Atmosphere (mood). Training runs 5-fold stratified CV over a
small regularization grid and refits on everything with the winner.
"""

from retrolens.textpitch import classify, synth_labeled_corpus, train_classifier

corpus = synth_labeled_corpus(seed=7)  # 6 x 100 templated sentences
clf, report = train_classifier(corpus, seed=7)

print(f"corpus: {len(corpus)} sentences, vocabulary {len(clf.vocabulary)} terms")
print(f"fold accuracies: {report.fold_accuracies}")
print(f"mean accuracy:   {report.mean_accuracy:.3f}  (chosen l2 = {report.chosen_l2})")

probes = [
    "only three left hurry before they sell out",
    "tap the yellow cart and place your order now",
    "this jacket is pure cotton and fits true to size",
    "thank you all for the love tonight",
    "tell me your size in the comments",
    "welcome everyone who just joined",
]
print()
for text in probes:
    label, probs = classify(clf, text)
    print(f"  {label:12} p={probs.max():.2f}  {text!r}")

# out-of-vocabulary input degrades to a uniform distribution, never an error
label, probs = classify(clf, "zzz qqq xxx")
print(f"\nall out-of-vocabulary -> {label} with flat probabilities {probs.round(3)}")
