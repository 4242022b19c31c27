"""Groundtruth annotation workflow and taxonomy coding."""

from .agreement import AgreementReport, agreement_report
from .session import (
    DEFAULT_PROMPTS,
    LABELS,
    AnnotationSession,
    GroundtruthLabel,
    corpus_hash,
    derive_label,
    read_labels,
    write_labels,
)
from .taxonomy import (
    TaxonomyAssignment,
    load_taxonomy,
    subcategory_distribution,
    subcategory_parents,
    taxonomy_classes,
    taxonomy_distribution,
)

__all__ = [
    "AgreementReport",
    "AnnotationSession",
    "DEFAULT_PROMPTS",
    "GroundtruthLabel",
    "LABELS",
    "TaxonomyAssignment",
    "agreement_report",
    "corpus_hash",
    "derive_label",
    "load_taxonomy",
    "read_labels",
    "subcategory_distribution",
    "subcategory_parents",
    "taxonomy_classes",
    "taxonomy_distribution",
    "write_labels",
]
