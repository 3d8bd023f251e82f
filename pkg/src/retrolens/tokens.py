"""Tokenizer shared by sentence classification, keywords, and ingestion filters.

Whitespace tokenization with a character-bigram fallback for CJK runs, so
transcripts without word boundaries still produce usable terms.
"""

import string

_PUNCT = string.punctuation + "。，！？；：“”‘’、"

_CJK_RANGES = (
    (0x4E00, 0x9FFF),   # unified ideographs
    (0x3400, 0x4DBF),   # extension A
    (0xF900, 0xFAFF),   # compatibility ideographs
    (0x3040, 0x30FF),   # hiragana + katakana
)


def _is_cjk(ch: str) -> bool:
    cp = ord(ch)
    return any(lo <= cp <= hi for lo, hi in _CJK_RANGES)


def tokenize(text: str) -> list[str]:
    """Lowercased whitespace tokens; CJK runs become character bigrams."""
    tokens: list[str] = []
    for chunk in text.lower().split():
        run = ""
        run_cjk = False
        for ch in chunk + "\x00":  # sentinel flushes the last run
            ch_cjk = _is_cjk(ch)
            if run and ch_cjk != run_cjk or ch == "\x00":
                if run_cjk:
                    if len(run) == 1:
                        tokens.append(run)
                    else:
                        tokens.extend(run[i:i + 2] for i in range(len(run) - 1))
                else:
                    word = run.strip(_PUNCT)
                    if word:
                        tokens.append(word)
                run = ""
            if ch != "\x00":
                run += ch
                run_cjk = ch_cjk
    return tokens
