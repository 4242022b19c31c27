"""Text preprocessing, TF-IDF vectorization, and contextual features."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ArgumentError
from ..ingest.records import Account, Post
from .contextual import (
    ACCOUNT_FEATURES,
    BASE_FEATURES,
    REACTION_FEATURES,
    all_caps_count,
    contextual_features,
    feature_names,
    misspelled_count,
)
from .preprocess import (
    default_stopwords,
    noun_lexicon,
    preprocess,
    pronoun_list,
    spelling_dictionary,
    strip_markup,
)
from .tfidf import Vocabulary, fit_tfidf, ngrams, transform


@dataclass
class FeatureVector:
    """Dense [tfidf block | contextual block] with aligned names."""

    values: np.ndarray
    names: list[str]

    def __post_init__(self):
        if len(self.values) != len(self.names):
            raise ArgumentError("feature values and names must align")
        if not np.isfinite(self.values).all():
            raise ArgumentError("feature vector contains NaN or Inf")


def vector_names(vocab: Vocabulary, platform: str) -> list[str]:
    return [f"tfidf:{t}" for t in vocab.terms] + feature_names(platform)


def build_feature_vector(
    post: Post,
    account: Account | None,
    vocab: Vocabulary,
    platform: str | None = None,
    reference_time: int | None = None,
) -> FeatureVector:
    """Vectorize one post: tf-idf over preprocessed tokens + contextual map."""
    platform = platform or post.platform
    tfidf_block = transform(vocab, preprocess(post.text))
    ctx = contextual_features(post, account, platform, reference_time)
    names = vector_names(vocab, platform)
    ctx_values = [ctx[name] for name in feature_names(platform)]
    values = np.concatenate([tfidf_block, np.asarray(ctx_values, dtype=float)])
    return FeatureVector(values=values, names=names)


def vectorize_corpus(
    posts,
    accounts: dict[str, Account],
    vocab: Vocabulary,
    platform: str,
    reference_time: int | None = None,
) -> tuple[np.ndarray, list[str]]:
    """Feature matrix for many posts; rows align with the input order."""
    rows = []
    names = vector_names(vocab, platform)
    for post in posts:
        fv = build_feature_vector(
            post, accounts.get(post.author_id), vocab, platform, reference_time
        )
        rows.append(fv.values)
    if not rows:
        return np.zeros((0, len(names))), names
    return np.vstack(rows), names


__all__ = [
    "ACCOUNT_FEATURES",
    "BASE_FEATURES",
    "FeatureVector",
    "REACTION_FEATURES",
    "Vocabulary",
    "all_caps_count",
    "build_feature_vector",
    "contextual_features",
    "default_stopwords",
    "feature_names",
    "fit_tfidf",
    "misspelled_count",
    "ngrams",
    "noun_lexicon",
    "preprocess",
    "pronoun_list",
    "spelling_dictionary",
    "strip_markup",
    "transform",
    "vector_names",
    "vectorize_corpus",
]
