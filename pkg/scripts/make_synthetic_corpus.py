#!/usr/bin/env python3
"""Generate the synthetic 30-user email corpus used by the test suite.

Three departments of ten users exchange messages over ten weekly windows
starting Monday 2001-01-01. Bodies mix a per-department vocabulary with
shared office vocabulary; roughly a quarter of user-weeks are silent, so
windows have both inactive users and empty behavioral rows. A few edge
records are planted deliberately: an off-roster sender, an off-roster
recipient, and a self-addressed message.

Output is byte-deterministic for a given seed: one JSON object per line,
keys sorted, messages ordered by (timestamp, sender, body).
"""

import argparse
import json
import os
from datetime import datetime, timedelta, timezone

import numpy as np

WEEK_ORIGIN = datetime(2001, 1, 1, tzinfo=timezone.utc)  # a Monday

DEPARTMENTS = {
    "exec": [
        "board", "strategy", "roadmap", "quarterly", "forecast", "merger",
        "acquisition", "budget", "headcount", "offsite", "keynote", "investor",
        "briefing", "milestone", "approval", "restructure", "synergy",
        "townhall", "initiative", "governance", "directive", "stakeholder",
        "charter", "oversight", "mandate",
    ],
    "legal": [
        "contract", "clause", "compliance", "statute", "filing", "counsel",
        "litigation", "deposition", "settlement", "indemnity", "arbitration",
        "regulator", "disclosure", "subpoena", "precedent", "liability",
        "covenant", "waiver", "amendment", "jurisdiction", "affidavit",
        "injunction", "redline", "notarize", "docket",
    ],
    "trading": [
        "position", "hedge", "futures", "spread", "margin", "volatility",
        "arbitrage", "liquidity", "portfolio", "derivative", "swap", "basis",
        "curve", "desk", "exposure", "limit", "ticker", "execution",
        "clearing", "rollover", "intraday", "backtest", "quant", "drawdown",
    ],
}

COMMON = [
    "meeting", "schedule", "review", "update", "report", "deadline",
    "project", "team", "office", "lunch", "call", "agenda", "notes",
    "draft", "version", "feedback", "morning", "afternoon", "friday",
    "monday", "thanks", "regards", "attached", "question", "reminder",
]


def roster():
    return [
        (f"{dept}{i:02d}@corp.example", dept)
        for dept in DEPARTMENTS
        for i in range(1, 11)
    ]


def _body(rng, dept_vocab):
    n_words = int(rng.integers(8, 21))
    words = []
    for _ in range(n_words):
        pool = dept_vocab if rng.random() < 0.6 else COMMON
        words.append(pool[int(rng.integers(len(pool)))])
    return " ".join(words)


def _stamp(rng, week):
    offset = timedelta(
        days=int(rng.integers(0, 7)),
        hours=int(rng.integers(8, 18)),
        minutes=int(rng.integers(0, 60)),
        seconds=int(rng.integers(0, 60)),
    )
    t = WEEK_ORIGIN + timedelta(days=7 * week) + offset
    return t.strftime("%Y-%m-%dT%H:%M:%SZ")


def generate(seed, weeks):
    rng = np.random.default_rng(seed)
    users = roster()
    by_dept = {}
    for uid, dept in users:
        by_dept.setdefault(dept, []).append(uid)

    records = []
    for week in range(weeks):
        for uid, dept in users:
            for _ in range(int(rng.integers(0, 4))):
                same = by_dept[dept]
                other = [u for u, d in users if d != dept]
                n_rcpt = int(rng.integers(1, 4))
                recipients = []
                while len(recipients) < n_rcpt:
                    pool = same if rng.random() < 0.7 else other
                    pick = pool[int(rng.integers(len(pool)))]
                    if pick != uid and pick not in recipients:
                        recipients.append(pick)
                records.append({
                    "sender": uid,
                    "recipients": recipients,
                    "timestamp": _stamp(rng, week),
                    "body": _body(rng, DEPARTMENTS[dept]),
                })

    # planted oddities: off-roster sender, off-roster recipient, self-send
    records.append({
        "sender": "newsletter@external.example",
        "recipients": [users[0][0], users[10][0], users[20][0]],
        "timestamp": _stamp(rng, 2),
        "body": "weekly market digest attached please review before friday",
    })
    records.append({
        "sender": users[1][0],
        "recipients": ["press@external.example", users[2][0]],
        "timestamp": _stamp(rng, 4),
        "body": "briefing draft for the investor keynote attached",
    })
    records.append({
        "sender": users[25][0],
        "recipients": [users[25][0]],
        "timestamp": _stamp(rng, 5),
        "body": "reminder to rebalance the portfolio hedge before clearing",
    })

    records.sort(key=lambda r: (r["timestamp"], r["sender"], r["body"]))
    lines = [json.dumps(r, sort_keys=True) for r in records]
    corpus = "\n".join(lines) + "\n"
    roster_csv = "user_id,class\n" + "".join(
        f"{uid},{dept}\n" for uid, dept in users
    )
    return corpus, roster_csv


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out-dir", default=".")
    parser.add_argument("--seed", type=int, default=2001)
    parser.add_argument("--weeks", type=int, default=10)
    args = parser.parse_args(argv)

    corpus, roster_csv = generate(args.seed, args.weeks)
    os.makedirs(args.out_dir, exist_ok=True)
    corpus_path = os.path.join(args.out_dir, "corpus.jsonl")
    roster_path = os.path.join(args.out_dir, "roster.csv")
    with open(corpus_path, "w", encoding="utf-8", newline="") as fh:
        fh.write(corpus)
    with open(roster_path, "w", encoding="utf-8", newline="") as fh:
        fh.write(roster_csv)
    print(f"wrote {corpus_path} ({corpus.count(chr(10))} messages)")
    print(f"wrote {roster_path}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
