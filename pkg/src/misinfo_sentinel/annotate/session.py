"""Terminal-driven groundtruth annotation.

Each post walks three criteria: (a) is it about the topic, (b) is it
about the topic's security or privacy, (c) does it provide verifiable
evidence (or can the claim be verified against reputable sources).  The
label follows mechanically: failing (a) or (b) makes the post irrelevant,
failing only (c) makes it misinformation, passing all three makes it a
genuine security/privacy post.

Sessions append one decision per line to a session file, so an
interrupted session resumes at the first unanswered post; the corpus hash
in the header stops a session from being resumed against different data.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Sequence

from ..errors import SessionError, ValidationError
from ..ingest.records import Post

LABELS = ("security_privacy", "misinformation", "irrelevant")

DEFAULT_PROMPTS = (
    "(a) Is the post talking about the topic? [y/n] ",
    "(b) Is it talking about the topic's security or privacy? [y/n] ",
    "(c) Does it provide verifiable evidence, or can the claim be verified "
    "against reputable sources? [y/n] ",
)


@dataclass(slots=True)
class GroundtruthLabel:
    post_id: str
    label: str
    annotator_id: str
    rationale: str = ""
    evidence_urls: list[str] = field(default_factory=list)

    def __post_init__(self):
        if self.label not in LABELS:
            raise ValidationError(f"unknown label {self.label!r}")

    def to_record(self) -> dict:
        rec = {"post_id": self.post_id, "label": self.label, "annotator": self.annotator_id}
        if self.rationale:
            rec["rationale"] = self.rationale
        if self.evidence_urls:
            rec["evidence_urls"] = list(self.evidence_urls)
        return rec

    @classmethod
    def from_record(cls, rec: dict) -> "GroundtruthLabel":
        return cls(
            post_id=rec["post_id"],
            label=rec["label"],
            annotator_id=rec.get("annotator", ""),
            rationale=rec.get("rationale", ""),
            evidence_urls=list(rec.get("evidence_urls", [])),
        )


def derive_label(about_topic: bool, about_security: bool | None, has_evidence: bool | None) -> str:
    """Pure mapping from criterion answers to the label."""
    if not about_topic or not about_security:
        return "irrelevant"
    if not has_evidence:
        return "misinformation"
    return "security_privacy"


def corpus_hash(posts: Sequence[Post]) -> str:
    digest = hashlib.sha256()
    for post in posts:
        digest.update(post.id.encode("utf-8"))
        digest.update(b"\x00")
        digest.update(post.text.encode("utf-8"))
        digest.update(b"\x01")
    return digest.hexdigest()


class AnnotationSession:
    """Resumable three-criteria labeling session for one annotator."""

    def __init__(
        self,
        posts: Sequence[Post],
        annotator_id: str,
        session_path,
        prompts: tuple[str, str, str] = DEFAULT_PROMPTS,
        ask: Callable[[str], str] | None = None,
        show: Callable[[str], None] = print,
    ):
        self.posts = list(posts)
        self.annotator_id = annotator_id
        self.session_path = Path(session_path)
        self.prompts = prompts
        # resolved lazily so tests can swap builtins.input
        self.ask = ask if ask is not None else (lambda prompt: input(prompt))
        self.show = show
        self.hash = corpus_hash(self.posts)
        self.decisions: dict[str, dict] = {}
        if self.session_path.exists():
            self._load()
        else:
            self._write_header()

    def _write_header(self):
        header = {"annotator": self.annotator_id, "corpus_hash": self.hash}
        with open(self.session_path, "w", encoding="utf-8") as fh:
            fh.write(json.dumps(header, sort_keys=True) + "\n")

    def _load(self):
        with open(self.session_path, encoding="utf-8") as fh:
            lines = [json.loads(line) for line in fh if line.strip()]
        if not lines:
            raise SessionError(f"session file {self.session_path} is empty")
        header = lines[0]
        if header.get("corpus_hash") != self.hash:
            raise SessionError(
                "session was started on a different corpus "
                f"(hash {header.get('corpus_hash')!r} != {self.hash!r})"
            )
        for rec in lines[1:]:
            self.decisions[rec["post_id"]] = rec

    @property
    def pending(self) -> list[Post]:
        return [p for p in self.posts if p.id not in self.decisions]

    def _ask_bool(self, prompt: str) -> bool:
        while True:
            answer = self.ask(prompt).strip().lower()
            if answer in ("y", "yes"):
                return True
            if answer in ("n", "no"):
                return False
            self.show("please answer y or n")

    def run(self, limit: int | None = None) -> list[GroundtruthLabel]:
        """Prompt through pending posts (all of them unless ``limit``)."""
        done = 0
        for post in self.pending:
            if limit is not None and done >= limit:
                break
            self.show(f"\n--- post {post.id} ({post.platform}) ---")
            self.show(post.text)
            a = self._ask_bool(self.prompts[0])
            b = self._ask_bool(self.prompts[1]) if a else None
            c = self._ask_bool(self.prompts[2]) if (a and b) else None
            label = derive_label(a, b, c)
            rec = {
                "post_id": post.id,
                "answers": {"a": a, "b": b, "c": c},
                "label": label,
                "decided_at": datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ"),
            }
            with open(self.session_path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(rec, sort_keys=True) + "\n")
            self.decisions[post.id] = rec
            done += 1
        return self.labels()

    def labels(self) -> list[GroundtruthLabel]:
        return [
            GroundtruthLabel(
                post_id=post.id,
                label=self.decisions[post.id]["label"],
                annotator_id=self.annotator_id,
            )
            for post in self.posts
            if post.id in self.decisions
        ]


def write_labels(path, labels: Sequence[GroundtruthLabel]):
    with open(path, "w", encoding="utf-8") as fh:
        for label in labels:
            fh.write(json.dumps(label.to_record(), ensure_ascii=False, sort_keys=True) + "\n")


def read_labels(path) -> list[GroundtruthLabel]:
    labels = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                labels.append(GroundtruthLabel.from_record(json.loads(line)))
    return labels
