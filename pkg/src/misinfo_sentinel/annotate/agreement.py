"""Inter-annotator agreement over label files."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from ..errors import ArgumentError
from ..stats import cohen_kappa, multi_coder_agreement
from .session import GroundtruthLabel


@dataclass
class AgreementReport:
    kappa: float  # mean pairwise Cohen's kappa
    multi_coder_score: float
    disagreements: list[dict]
    n_items: int


def agreement_report(
    label_sets: Sequence[Sequence[GroundtruthLabel]],
    possible_values: int | None = None,
) -> AgreementReport:
    """Agreement over the posts every annotator labeled.

    ``possible_values`` defaults to the size of the label vocabulary used
    across the annotators (the recommended reading of the multi-coder rule).
    """
    if len(label_sets) < 2:
        raise ArgumentError("agreement needs at least two annotators")
    maps = [{lab.post_id: lab.label for lab in labels} for labels in label_sets]
    shared = set(maps[0])
    for m in maps[1:]:
        shared &= set(m)
    if not shared:
        raise ArgumentError("annotators share no labeled posts")
    ordered = sorted(shared)

    kappas = [
        cohen_kappa([a[pid] for pid in ordered], [b[pid] for pid in ordered])
        for a, b in itertools.combinations(maps, 2)
    ]
    if possible_values is None:
        used = {m[pid] for m in maps for pid in ordered}
        possible_values = max(len(used), 1)
    matrix = [[m[pid] for m in maps] for pid in ordered]
    score = multi_coder_agreement(matrix, possible_values)

    disagreements = []
    for pid in ordered:
        votes = [m[pid] for m in maps]
        if len(set(votes)) > 1:
            disagreements.append({"post_id": pid, "labels": votes})
    return AgreementReport(
        kappa=sum(kappas) / len(kappas),
        multi_coder_score=score,
        disagreements=disagreements,
        n_items=len(ordered),
    )
