"""TF-IDF vectorization over unigram/bigram tokens with top-k selection.

The exact weighting, stated so any run reproduces identical vectors:
tf is the raw count in the document, idf(t) = ln((1+N)/(1+df(t))) + 1,
document vectors are L2-normalized, and selection keeps the k terms with
the highest mean (normalized) TF-IDF over the corpus, ties broken
lexicographically.
"""

from __future__ import annotations

import json
import math
import warnings
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ..errors import ArgumentError

VOCAB_FILE_VERSION = 1


def ngrams(tokens: Sequence[str], ngram_range: tuple[int, int] = (1, 2)) -> list[str]:
    """N-grams of the token list; multiword grams are space-joined."""
    lo, hi = ngram_range
    if lo < 1 or hi < lo:
        raise ArgumentError(f"bad ngram range {ngram_range}")
    grams = []
    for n in range(lo, hi + 1):
        if n == 1:
            grams.extend(tokens)
        else:
            grams.extend(" ".join(tokens[i : i + n]) for i in range(len(tokens) - n + 1))
    return grams


@dataclass
class Vocabulary:
    terms: list[str]
    idf: list[float]
    k: int
    ngram_range: tuple[int, int] = (1, 2)

    def __post_init__(self):
        if len(self.terms) != len(self.idf):
            raise ArgumentError("terms and idf must align")
        if len(set(self.terms)) != len(self.terms):
            raise ArgumentError("vocabulary terms must be unique")
        if any(v <= 0 for v in self.idf):
            raise ArgumentError("smoothed idf values must be positive")
        self._index = {t: i for i, t in enumerate(self.terms)}

    def __len__(self):
        return len(self.terms)

    def save(self, path):
        payload = {
            "version": VOCAB_FILE_VERSION,
            "ngram_range": list(self.ngram_range),
            "k": self.k,
            "terms": [[t, v] for t, v in zip(self.terms, self.idf)],
        }
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, ensure_ascii=False, indent=1, sort_keys=True)
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "Vocabulary":
        with open(path, encoding="utf-8") as fh:
            payload = json.load(fh)
        if payload.get("version") != VOCAB_FILE_VERSION:
            raise ArgumentError(f"unsupported vocabulary file version in {path}")
        terms = [t for t, _ in payload["terms"]]
        idf = [v for _, v in payload["terms"]]
        return cls(terms=terms, idf=idf, k=payload["k"], ngram_range=tuple(payload["ngram_range"]))


def fit_tfidf(
    corpus: Iterable[Sequence[str]],
    ngram_range: tuple[int, int] = (1, 2),
    k: int = 100,
) -> Vocabulary:
    """Fit idf weights on tokenized documents and select the top-k terms."""
    docs = [Counter(ngrams(toks, ngram_range)) for toks in corpus]
    n_docs = len(docs)
    if n_docs == 0:
        raise ArgumentError("corpus is empty")
    df: Counter = Counter()
    for counts in docs:
        df.update(counts.keys())
    if not df:
        raise ArgumentError("corpus has no tokens")
    idf = {t: math.log((1 + n_docs) / (1 + d)) + 1.0 for t, d in df.items()}

    # corpus-level mean of the L2-normalized tf-idf values, zeros included
    sums = {t: 0.0 for t in idf}
    for counts in docs:
        vec = {t: c * idf[t] for t, c in counts.items()}
        norm = math.sqrt(sum(v * v for v in vec.values()))
        if norm > 0:
            for t, v in vec.items():
                sums[t] += v / norm
    mean = {t: s / n_docs for t, s in sums.items()}

    if k > len(df):
        warnings.warn(
            f"k={k} exceeds vocabulary size {len(df)}; keeping all terms",
            stacklevel=2,
        )
        k = len(df)
    selected = sorted(mean, key=lambda t: (-mean[t], t))[:k]
    selected.sort()
    return Vocabulary(
        terms=selected,
        idf=[idf[t] for t in selected],
        k=k,
        ngram_range=ngram_range,
    )


def transform(vocab: Vocabulary, tokens: Sequence[str]) -> np.ndarray:
    """L2-normalized tf-idf block for one tokenized document."""
    vec = np.zeros(len(vocab.terms))
    counts = Counter(ngrams(tokens, vocab.ngram_range))
    for term, count in counts.items():
        idx = vocab._index.get(term)
        if idx is not None:
            vec[idx] = count * vocab.idf[idx]
    norm = float(np.linalg.norm(vec))
    if norm > 0:
        vec /= norm
    return vec
