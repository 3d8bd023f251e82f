"""Sales-pitch sentence classification and per-segment pitch aggregation.

Six categories: Traffic (draw viewers), Interaction (engage), Selling
(describe product), Order (prompt purchase), Urge (scarcity pressure),
Atmosphere (mood). The classifier is a term-frequency/inverse-document-
frequency bag-of-terms model with multinomial logistic regression trained
by full-batch gradient descent; a heavier provider can be plugged behind
the same checkpoint interface.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import CategoryUnderfilled, EmptySentence
from .tokens import tokenize

CATEGORIES = ("Traffic", "Interaction", "Selling", "Order", "Urge", "Atmosphere")

CHECKPOINT_VERSION = 1

_L2_GRID = (1e-4, 1e-3, 1e-2, 1e-1)
_EPOCHS = 250
_LEARNING_RATE = 4.0


@dataclass(frozen=True)
class LabeledSentence:
    text: str
    label: str


@dataclass
class CvReport:
    fold_accuracies: list[float]
    mean_accuracy: float
    chosen_l2: float
    seed: int


@dataclass
class PitchClassifier:
    vocabulary: dict[str, int]
    idf: np.ndarray            # (V,)
    weights: np.ndarray        # (6, V)
    bias: np.ndarray           # (6,)
    classes: tuple[str, ...] = CATEGORIES
    metadata: dict = field(default_factory=dict)

    def featurize(self, text: str) -> np.ndarray:
        x = np.zeros(len(self.vocabulary))
        for tok in tokenize(text):
            idx = self.vocabulary.get(tok)
            if idx is not None:
                x[idx] += 1.0
        x *= self.idf
        norm = np.linalg.norm(x)
        return x / norm if norm > 0 else x

    def save(self, path: str | Path) -> None:
        doc = {
            "version": CHECKPOINT_VERSION,
            "classes": list(self.classes),
            "vocabulary": self.vocabulary,
            "idf": self.idf.tolist(),
            "weights": self.weights.tolist(),
            "bias": self.bias.tolist(),
            "metadata": self.metadata,
        }
        Path(path).write_text(json.dumps(doc, sort_keys=True), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "PitchClassifier":
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        if doc.get("version") != CHECKPOINT_VERSION:
            raise ValueError(f"unsupported checkpoint version {doc.get('version')}")
        return cls(
            vocabulary={k: int(v) for k, v in doc["vocabulary"].items()},
            idf=np.array(doc["idf"]),
            weights=np.array(doc["weights"]),
            bias=np.array(doc["bias"]),
            classes=tuple(doc["classes"]),
            metadata=doc["metadata"],
        )


def _build_vocab(token_lists: list[list[str]]) -> tuple[dict[str, int], np.ndarray]:
    terms = sorted({tok for toks in token_lists for tok in toks})
    vocab = {t: i for i, t in enumerate(terms)}
    df = np.zeros(len(vocab))
    for toks in token_lists:
        for t in set(toks):
            df[vocab[t]] += 1
    n = len(token_lists)
    idf = np.log((1.0 + n) / (1.0 + df)) + 1.0
    return vocab, idf


def _featurize_all(token_lists, vocab, idf) -> np.ndarray:
    X = np.zeros((len(token_lists), len(vocab)))
    for i, toks in enumerate(token_lists):
        for tok in toks:
            j = vocab.get(tok)
            if j is not None:
                X[i, j] += 1.0
    X *= idf
    norms = np.linalg.norm(X, axis=1, keepdims=True)
    norms[norms == 0] = 1.0
    return X / norms


def _fit_softmax(X: np.ndarray, y: np.ndarray, l2: float) -> tuple[np.ndarray, np.ndarray]:
    n, v = X.shape
    k = len(CATEGORIES)
    W = np.zeros((k, v))
    b = np.zeros(k)
    Y = np.zeros((n, k))
    Y[np.arange(n), y] = 1.0
    for _ in range(_EPOCHS):
        Z = X @ W.T + b
        Z -= Z.max(axis=1, keepdims=True)
        P = np.exp(Z)
        P /= P.sum(axis=1, keepdims=True)
        D = P - Y
        W -= _LEARNING_RATE * (D.T @ X / n + l2 * W)
        b -= _LEARNING_RATE * D.mean(axis=0)
    return W, b


def _stratified_folds(labels: list[str], seed: int, k: int = 5) -> list[np.ndarray]:
    """Fold assignment is a function of (corpus order, seed) only."""
    rng = np.random.default_rng(seed)
    folds: list[list[int]] = [[] for _ in range(k)]
    for cat in CATEGORIES:
        idx = np.array([i for i, lab in enumerate(labels) if lab == cat])
        rng.shuffle(idx)
        for pos, i in enumerate(idx):
            folds[pos % k].append(int(i))
    return [np.array(sorted(f)) for f in folds]


def train_classifier(corpus: list[LabeledSentence], seed: int) -> tuple[PitchClassifier, CvReport]:
    """5-fold stratified cross-validation over the regularization grid, then
    a final fit on the full corpus with the winning strength."""
    counts = {c: 0 for c in CATEGORIES}
    for s in corpus:
        if s.label not in counts:
            raise CategoryUnderfilled(f"unknown category {s.label!r}")
        counts[s.label] += 1
    for cat, c in counts.items():
        if c < 10:
            raise CategoryUnderfilled(f"category {cat} has {c} sentences, need >= 10")

    token_lists = [tokenize(s.text) for s in corpus]
    labels = [s.label for s in corpus]
    y = np.array([CATEGORIES.index(lab) for lab in labels])
    folds = _stratified_folds(labels, seed)

    grid_scores: dict[float, list[float]] = {}
    for l2 in _L2_GRID:
        accs = []
        for f in range(len(folds)):
            test_idx = folds[f]
            train_idx = np.array(sorted(set(range(len(corpus))) - set(test_idx.tolist())))
            vocab, idf = _build_vocab([token_lists[i] for i in train_idx])
            Xtr = _featurize_all([token_lists[i] for i in train_idx], vocab, idf)
            Xte = _featurize_all([token_lists[i] for i in test_idx], vocab, idf)
            W, b = _fit_softmax(Xtr, y[train_idx], l2)
            pred = np.argmax(Xte @ W.T + b, axis=1)
            accs.append(float(np.mean(pred == y[test_idx])))
        grid_scores[l2] = accs

    chosen_l2 = max(_L2_GRID, key=lambda l2: (np.mean(grid_scores[l2]), -l2))
    fold_accs = grid_scores[chosen_l2]
    vocab, idf = _build_vocab(token_lists)
    X = _featurize_all(token_lists, vocab, idf)
    W, b = _fit_softmax(X, y, chosen_l2)
    report = CvReport(
        fold_accuracies=[round(a, 6) for a in fold_accs],
        mean_accuracy=float(np.mean(fold_accs)),
        chosen_l2=chosen_l2,
        seed=seed,
    )
    clf = PitchClassifier(
        vocabulary=vocab, idf=idf, weights=W, bias=b,
        metadata={
            "fold_accuracies": report.fold_accuracies,
            "mean_accuracy": report.mean_accuracy,
            "chosen_l2": report.chosen_l2,
            "seed": seed,
            "n_sentences": len(corpus),
        },
    )
    return clf, report


def classify(clf: PitchClassifier, sentence: str) -> tuple[str, np.ndarray]:
    """Returns (category, probabilities over the six classes)."""
    text = sentence.strip()
    if not text:
        raise EmptySentence("cannot classify an empty sentence")
    x = clf.featurize(text)
    if not np.any(x):
        # every token out of vocabulary: fall back to a uniform prior
        probs = np.full(len(clf.classes), 1.0 / len(clf.classes))
    else:
        z = x @ clf.weights.T + clf.bias
        z -= z.max()
        probs = np.exp(z)
        probs /= probs.sum()
    return clf.classes[int(np.argmax(probs))], probs


def pitch_counts_per_segment(sentences, labels, grid, session_start_ts: int) -> np.ndarray:
    """Per-segment 6-vector of word counts; each sentence accrues wholly to
    the segment containing its midpoint."""
    segments = getattr(grid, "segments", grid)
    counts = np.zeros((len(segments), len(CATEGORIES)), dtype=int)
    for sent, label in zip(sentences, labels):
        mid_ts = session_start_ts + (sent.start_ms + sent.end_ms) / 2000.0
        for si, (a, b) in enumerate(segments):
            if a <= mid_ts < b:
                counts[si, CATEGORIES.index(label)] += len(tokenize(sent.text))
                break
    return counts


# -- synthetic labeled corpus --------------------------------------------------

_ITEMS = ("jacket", "dress", "sneaker", "scarf", "handbag", "hoodie")
_COLORS = ("red", "blue", "ivory", "olive", "black", "beige")

_TEMPLATES = {
    "Traffic": (
        "welcome everyone who just joined the stream",
        "hit the follow button so you never miss us",
        "share this room with your friends right now",
        "tell your friends to come watch us tonight",
        "new viewers welcome in say hi",
        "the stream goes live every evening at eight",
        "invite one friend and grow our little family",
        "glad to see so many new faces joining",
    ),
    "Interaction": (
        "type {n} in the chat if you want the {item}",
        "tell me your favourite {color} in the comments",
        "what size do you wear let me know below",
        "drop a comment with the style you like best",
        "answer the poll on your screen right now",
        "say yes in the chat if i should try it on",
        "which one do you prefer left or right",
        "send a heart if you can hear me clearly",
    ),
    "Selling": (
        "this {item} is made of pure cotton with double stitching",
        "the {item} comes in {color} and fits true to size",
        "feel the fabric it is soft and breathable",
        "the sole is real rubber with a cushioned insole",
        "this material keeps you warm without the bulk",
        "the zipper is metal and glides smoothly every time",
        "it weighs almost nothing and packs down small",
        "the {color} shade matches anything in your closet",
    ),
    "Order": (
        "tap the yellow cart and place your order now",
        "click link number {n} to check out",
        "the order button is at the bottom of your screen",
        "add it to your cart and pay within five minutes",
        "place the order first and choose the size later",
        "checkout takes ten seconds tap the cart",
        "use the coupon at checkout for the lower price",
        "orders placed tonight ship tomorrow morning",
    ),
    "Urge": (
        "only {n} left hurry before they sell out",
        "the price goes back up in three minutes",
        "stock is almost gone grab yours now",
        "last chance this deal ends when the timer hits zero",
        "half of the stock sold in one minute do not wait",
        "once these are gone we cannot restock this price",
        "the discount disappears at the top of the hour",
        "hurry only a handful remain in {color}",
    ),
    "Atmosphere": (
        "let us play a quick game while we wait",
        "thank you all for the love and support tonight",
        "here comes a little song for everyone watching",
        "happy holidays to every single one of you",
        "this energy tonight is absolutely amazing",
        "let me tell you a funny story from backstage",
        "big round of applause for the whole crew",
        "we are having so much fun tonight thank you",
    ),
}


def make_sentence(category: str, rng: np.random.Generator) -> str:
    template = _TEMPLATES[category][int(rng.integers(0, len(_TEMPLATES[category])))]
    return template.format(
        item=_ITEMS[int(rng.integers(0, len(_ITEMS)))],
        color=_COLORS[int(rng.integers(0, len(_COLORS)))],
        n=int(rng.integers(2, 40)),
    )


def synth_labeled_corpus(seed: int, per_category: int = 100) -> list[LabeledSentence]:
    """Templated corpus with category-distinctive vocabulary."""
    rng = np.random.default_rng(seed)
    corpus = []
    for cat in CATEGORIES:
        for _ in range(per_category):
            corpus.append(LabeledSentence(text=make_sentence(cat, rng), label=cat))
    return corpus


def save_labeled_corpus(corpus: list[LabeledSentence], path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for s in corpus:
            fh.write(json.dumps({"text": s.text, "label": s.label}, sort_keys=True, ensure_ascii=False) + "\n")


def load_labeled_corpus(path: str | Path) -> list[LabeledSentence]:
    corpus = []
    with Path(path).open(encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                obj = json.loads(line)
                corpus.append(LabeledSentence(text=obj["text"], label=obj["label"]))
    return corpus
