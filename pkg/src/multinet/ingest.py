"""Email-corpus ingestion into a two-layer dynamic network.

Messages are bucketed into weekly windows. Per window, a relational layer
comes from message headers (sender joined to each recipient) and a
behavioral layer from TF-IDF cosine similarity over each user's sent text,
thresholded to the top correlations.
"""

from __future__ import annotations

import csv
import json
import math
import re
from dataclasses import dataclass, field
from datetime import date, datetime, timedelta, timezone
from importlib import resources

import numpy as np

from .netcore import AdjacencyMatrix, BINARY, DynamicNetwork, MultiLayerGraph, Partition

_TOKEN_RE = re.compile(r"[a-z0-9]+")


def default_stopwords() -> frozenset:
    text = resources.files("multinet").joinpath("data/stopwords.txt").read_text("utf-8")
    return frozenset(w for w in text.split() if w)


@dataclass(frozen=True)
class Message:
    """One email: sender, merged recipient list, UTC timestamp, body text."""

    sender: str
    recipients: tuple
    timestamp: datetime
    body: str

    def __post_init__(self):
        if not self.sender:
            raise ValueError("message sender must be nonempty")
        object.__setattr__(self, "recipients", tuple(str(r) for r in self.recipients))
        ts = self.timestamp
        if not isinstance(ts, datetime):
            raise ValueError(f"timestamp must be a datetime, got {type(ts).__name__}")
        if ts.tzinfo is None:
            ts = ts.replace(tzinfo=timezone.utc)
        object.__setattr__(self, "timestamp", ts.astimezone(timezone.utc))


@dataclass(frozen=True)
class CorpusConfig:
    """Roster, window anchor, and text-processing knobs.

    idf_active_only=True counts only weekly-active users in the idf
    denominator; False counts the full roster. idf_log_base None means
    natural log.
    """

    roster: tuple
    week_origin: date
    threshold_quantile: float = 0.85
    min_token_length: int = 3
    stopwords: frozenset = field(default_factory=default_stopwords)
    idf_active_only: bool = True
    idf_log_base: float | None = None

    def __post_init__(self):
        roster = tuple((str(u), str(c)) for u, c in self.roster)
        if not roster:
            raise ValueError("roster must be nonempty")
        ids = [u for u, _ in roster]
        if len(set(ids)) != len(ids):
            raise ValueError("roster user ids must be unique")
        if not (0.0 < self.threshold_quantile < 1.0):
            raise ValueError("threshold_quantile must lie in (0, 1)")
        if self.min_token_length < 1:
            raise ValueError("min_token_length must be >= 1")
        if self.idf_log_base is not None and self.idf_log_base <= 1.0:
            raise ValueError("idf_log_base must exceed 1")
        object.__setattr__(self, "roster", roster)
        object.__setattr__(self, "stopwords", frozenset(self.stopwords))

    @property
    def user_ids(self) -> tuple:
        return tuple(u for u, _ in self.roster)

    def partition(self):
        """Roster classes as a Partition plus class names in first-seen order."""
        names: list = []
        index: dict = {}
        assignment = []
        for _, label in self.roster:
            if label not in index:
                index[label] = len(names)
                names.append(label)
            assignment.append(index[label])
        return Partition(tuple(assignment), num_classes=len(names)), tuple(names)


def _parse_timestamp(text: str) -> datetime:
    raw = text.strip()
    if raw.endswith(("Z", "z")):
        raw = raw[:-1] + "+00:00"
    ts = datetime.fromisoformat(raw)
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc)


def load_messages(path: str) -> list:
    """Read a JSON-lines corpus: one message object per line."""
    out = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
                out.append(Message(
                    sender=obj["sender"],
                    recipients=tuple(obj.get("recipients", ())),
                    timestamp=_parse_timestamp(obj["timestamp"]),
                    body=obj.get("body", ""),
                ))
            except (KeyError, ValueError, TypeError) as exc:
                raise ValueError(f"{path}:{lineno}: bad message record: {exc}") from exc
    return out


def load_roster(path: str) -> tuple:
    """Read a roster CSV with header user_id,class."""
    with open(path, "r", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    rows = [r for r in rows if r]
    if not rows or [c.strip() for c in rows[0]] != ["user_id", "class"]:
        raise ValueError("roster CSV must start with header 'user_id,class'")
    out = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != 2:
            raise ValueError(f"roster line {lineno}: expected 2 columns")
        out.append((row[0].strip(), row[1].strip()))
    return tuple(out)


def weekly_windows(messages: list, cfg: CorpusConfig,
                   num_weeks: int | None = None) -> list:
    """Bucket messages into consecutive 7-day windows from week_origin.

    Returns (window_id, messages) pairs where window_id is the ISO date of
    the window's first day. Empty weeks are retained so downstream dynamic
    networks have uniform time steps.
    """
    origin = datetime(cfg.week_origin.year, cfg.week_origin.month,
                      cfg.week_origin.day, tzinfo=timezone.utc)
    week = timedelta(days=7)
    indexed: dict = {}
    last = -1
    for msg in messages:
        delta = msg.timestamp - origin
        if delta < timedelta(0):
            raise ValueError(
                f"message at {msg.timestamp.isoformat()} precedes week_origin {cfg.week_origin}"
            )
        idx = delta // week
        if num_weeks is not None and idx >= num_weeks:
            raise ValueError(
                f"message at {msg.timestamp.isoformat()} falls outside the "
                f"{num_weeks}-week horizon"
            )
        indexed.setdefault(idx, []).append(msg)
        last = max(last, idx)
    total = num_weeks if num_weeks is not None else last + 1
    return [
        ((cfg.week_origin + timedelta(days=7 * i)).isoformat(), indexed.get(i, []))
        for i in range(total)
    ]


def relational_layer(messages: list, user_ids) -> AdjacencyMatrix:
    """Binary layer joining each sender to each distinct roster recipient."""
    user_ids = tuple(user_ids)
    index = {u: i for i, u in enumerate(user_ids)}
    p = len(user_ids)
    entries = np.zeros((p, p))
    for msg in messages:
        i = index.get(msg.sender)
        if i is None:
            continue
        for recipient in set(msg.recipients):
            j = index.get(recipient)
            if j is None or j == i:
                continue
            entries[i, j] = entries[j, i] = 1.0
    return AdjacencyMatrix(entries, kind=BINARY)


def tokenize(text: str, cfg: CorpusConfig) -> list:
    return [
        t for t in _TOKEN_RE.findall(text.lower())
        if len(t) >= cfg.min_token_length and t not in cfg.stopwords
    ]


def tfidf_scores(documents: dict, cfg: CorpusConfig) -> dict:
    """Per-user TF-IDF maps from sent-text documents.

    tf is frequency normalized by the user's max frequency; idf is
    log(|D| / doc-count of the term). Users whose documents tokenize to
    nothing are inactive: excluded from the result and from |D| under
    idf_active_only.
    """
    token_counts = {}
    for user, text in documents.items():
        tokens = tokenize(text, cfg)
        if tokens:
            counts: dict = {}
            for t in tokens:
                counts[t] = counts.get(t, 0) + 1
            token_counts[user] = counts
    if not token_counts:
        return {}
    num_docs = len(token_counts) if cfg.idf_active_only else len(cfg.roster)
    doc_freq: dict = {}
    for counts in token_counts.values():
        for term in counts:
            doc_freq[term] = doc_freq.get(term, 0) + 1
    log_scale = 1.0 if cfg.idf_log_base is None else math.log(cfg.idf_log_base)
    idf = {t: math.log(num_docs / n) / log_scale for t, n in doc_freq.items()}
    out = {}
    for user, counts in token_counts.items():
        peak = max(counts.values())
        out[user] = {t: (n / peak) * idf[t] for t, n in counts.items()}
    return out


def behavioral_layer(scores: dict, user_ids, cfg: CorpusConfig) -> AdjacencyMatrix:
    """Binary layer keeping the top (1 - threshold_quantile) fraction of
    cosine similarities over all roster pairs.

    Ties at the cutoff are all included. Zero similarity never forms an
    edge, so pairs involving inactive users stay absent. Fewer than two
    active users yields the empty graph.
    """
    user_ids = tuple(user_ids)
    p = len(user_ids)
    entries = np.zeros((p, p))
    active = [u for u in user_ids if scores.get(u)]
    if len(active) < 2 or p < 2:
        return AdjacencyMatrix(entries, kind=BINARY)

    vocab = sorted({t for u in active for t in scores[u]})
    term_index = {t: i for i, t in enumerate(vocab)}
    vecs = np.zeros((p, len(vocab)))
    for i, user in enumerate(user_ids):
        for term, value in scores.get(user, {}).items():
            vecs[i, term_index[term]] = value
    norms = np.linalg.norm(vecs, axis=1)
    safe = np.where(norms > 0, norms, 1.0)
    unit = vecs / safe[:, None]
    sim = unit @ unit.T

    iu = np.triu_indices(p, k=1)
    values = sim[iu]
    keep = math.ceil((1.0 - cfg.threshold_quantile) * values.size)
    if keep < 1:
        return AdjacencyMatrix(entries, kind=BINARY)
    cutoff = np.sort(values)[::-1][keep - 1]
    mask = (values >= cutoff) & (values > 0.0)
    entries[iu] = mask.astype(float)
    entries += entries.T
    return AdjacencyMatrix(entries, kind=BINARY)


def build_two_layer_network(messages: list, cfg: CorpusConfig,
                            num_weeks: int | None = None) -> DynamicNetwork:
    """Weekly two-layer dynamic network [relational, behavioral] over the roster."""
    user_ids = cfg.user_ids
    roster_set = set(user_ids)
    snapshots = []
    stamps = []
    for window_id, window_messages in weekly_windows(messages, cfg, num_weeks):
        relational = relational_layer(window_messages, user_ids)
        documents: dict = {}
        for msg in window_messages:
            if msg.sender in roster_set:
                documents[msg.sender] = (
                    documents[msg.sender] + "\n" + msg.body
                    if msg.sender in documents else msg.body
                )
        behavioral = behavioral_layer(tfidf_scores(documents, cfg), user_ids, cfg)
        snapshots.append(MultiLayerGraph((relational, behavioral),
                                         vertex_labels=user_ids))
        stamps.append(window_id)
    return DynamicNetwork(tuple(snapshots), tuple(stamps))
