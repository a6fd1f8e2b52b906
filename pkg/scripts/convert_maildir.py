"""Convert a maildir-style dump into the JSONL corpus format.

Best effort: walks a directory tree, parses every regular file as an
RFC 822 message, and keeps those with a parseable sender, date, and body.
Duplicate Message-IDs (common in real dumps, where the same mail sits in
both sent and inbox folders) are kept once. Alongside the corpus it writes
a roster template of the most active senders with the class column left
as "unknown" for hand-editing; ingest needs real class labels.
"""

import argparse
import email.policy
import json
import sys
from datetime import timezone
from email.parser import BytesParser
from email.utils import getaddresses, parseaddr, parsedate_to_datetime
from pathlib import Path


def extract_body(msg) -> str:
    if msg.is_multipart():
        part = msg.get_body(preferencelist=("plain",))
        if part is None:
            return ""
        msg = part
    try:
        return (msg.get_content() or "").strip()
    except (KeyError, LookupError, UnicodeDecodeError):
        return ""


def convert_file(path: Path, parser: BytesParser):
    msg = parser.parse(path.open("rb"))
    sender = parseaddr(msg.get("From", ""))[1].strip().lower()
    if not sender or "@" not in sender:
        return None
    stamp = parsedate_to_datetime(msg.get("Date", ""))
    if stamp.tzinfo is None:
        stamp = stamp.replace(tzinfo=timezone.utc)
    fields = [msg.get_all(h, []) for h in ("To", "Cc")]
    recipients = sorted({
        addr.strip().lower()
        for _, addr in getaddresses([v for f in fields for v in f])
        if addr and "@" in addr and addr.strip().lower() != sender
    })
    if not recipients:
        return None
    return {
        "sender": sender,
        "recipients": recipients,
        "timestamp": stamp.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ"),
        "body": extract_body(msg),
    }, msg.get("Message-ID", "")


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--root", required=True, help="maildir root to walk")
    ap.add_argument("--out-dir", default="results/converted")
    ap.add_argument("--domain", default=None,
                    help="keep only senders at this domain, e.g. enron.com")
    ap.add_argument("--top-senders", type=int, default=150,
                    help="roster template size")
    args = ap.parse_args(argv)

    root = Path(args.root)
    if not root.is_dir():
        print(f"not a directory: {root}", file=sys.stderr)
        return 1
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    parser = BytesParser(policy=email.policy.default)
    records = []
    seen_ids = set()
    skipped = 0
    for path in sorted(p for p in root.rglob("*") if p.is_file()):
        try:
            converted = convert_file(path, parser)
        except Exception:
            skipped += 1
            continue
        if converted is None:
            skipped += 1
            continue
        record, msg_id = converted
        if args.domain and not record["sender"].endswith("@" + args.domain):
            skipped += 1
            continue
        if msg_id and msg_id in seen_ids:
            continue
        seen_ids.add(msg_id)
        records.append(record)

    records.sort(key=lambda r: (r["timestamp"], r["sender"], r["body"]))
    corpus = out_dir / "corpus.jsonl"
    with open(corpus, "w") as fh:
        for record in records:
            fh.write(json.dumps(record, sort_keys=True) + "\n")

    counts: dict = {}
    for record in records:
        counts[record["sender"]] = counts.get(record["sender"], 0) + 1
    top = sorted(counts, key=lambda u: (-counts[u], u))[:args.top_senders]
    roster = out_dir / "roster_template.csv"
    with open(roster, "w") as fh:
        fh.write("user_id,class\n")
        for user in top:
            fh.write(f"{user},unknown\n")

    print(f"kept {len(records)} messages ({skipped} skipped), "
          f"{len(counts)} distinct senders")
    print(f"wrote {corpus} and {roster} - edit the class column, trim the "
          f"roster, then run multinet ingest")
    return 0


if __name__ == "__main__":
    sys.exit(main())
