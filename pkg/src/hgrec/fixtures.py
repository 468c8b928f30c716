"""Deterministic synthetic review-history fixture.

Fifty pull requests over 19 months (2019-01 through 2020-07), built around
directory specialists: each source area has one reviewer who comments on
almost every PR touching it, and each contributor mostly submits PRs in one
home area, so a sound recommender should surface the area specialist for new
PRs there. The export also carries the noise the cleaning stage must handle:
two open PRs, a CI bot commenter, and a one-shot reviewer who falls under
the participation threshold.

Run ``python -m hgrec.fixtures OUT.jsonl`` to materialize the JSONL export.
"""

from __future__ import annotations

import json
import random
import sys
from datetime import datetime, timezone

FIXTURE_SEED = 7

SPECIALISTS = {
    "src/net": "alice",
    "src/ui": "bob",
    "src/db": "carol",
    "docs": "dave",
}

FILE_POOLS = {
    "src/net": [
        "src/net/tcp.c",
        "src/net/udp.c",
        "src/net/socket.c",
        "src/net/dns.c",
        "src/net/http/client.c",
        "src/net/http/server.c",
    ],
    "src/ui": [
        "src/ui/window.c",
        "src/ui/widget.c",
        "src/ui/input.c",
        "src/ui/render/canvas.c",
        "src/ui/render/theme.c",
    ],
    "src/db": [
        "src/db/query.c",
        "src/db/index.c",
        "src/db/txn.c",
        "src/db/storage/page.c",
        "src/db/storage/wal.c",
    ],
    "docs": ["docs/guide.md", "docs/api.md", "docs/install.md", "docs/faq.md"],
}

GENERALISTS = ["eve", "frank", "grace", "heidi"]
HOME_AREA = {
    "eve": "src/net",
    "frank": "src/ui",
    "grace": "src/db",
    "heidi": "docs",
}
AREA_OWNER = {area: dev for dev, area in HOME_AREA.items()}
CROSS_REVIEWER = "judy"
ONE_SHOT_REVIEWER = "mallory"
BOT = "ci-robot[bot]"
BOT_PATTERN = r"\[bot\]$"

# PRs per month index (0 = 2019-01). Twelve training months, then seven test
# months; the last one carries five PRs so a single miss still clears 0.8.
MONTH_COUNTS = [2] * 9 + [1] * 3 + [4] * 6 + [5]

_DIR_CYCLE = ["src/net", "src/ui", "src/db", "src/net", "docs", "src/db", "src/ui"]
_FINAL_MONTH_DIRS = ["src/net", "src/ui", "src/db", "src/net", "docs"]


def _month_epoch(index: int) -> int:
    year = 2019 + (index // 12)
    month = index % 12 + 1
    return int(datetime(year, month, 1, tzinfo=timezone.utc).timestamp())


def _iso(epoch: int) -> str:
    return datetime.fromtimestamp(epoch, tz=timezone.utc).strftime(
        "%Y-%m-%dT%H:%M:%SZ"
    )


def generate_fixture_records(seed: int = FIXTURE_SEED) -> list[dict]:
    rng = random.Random(seed)
    records = []
    serial = 0
    dir_position = 0

    for month_index, count in enumerate(MONTH_COUNTS):
        base = _month_epoch(month_index)
        training = month_index < 12
        for slot in range(count):
            serial += 1
            if month_index == len(MONTH_COUNTS) - 1:
                area = _FINAL_MONTH_DIRS[slot]
            else:
                area = _DIR_CYCLE[dir_position % len(_DIR_CYCLE)]
                dir_position += 1
            specialist = SPECIALISTS[area]
            # Contributors are area-loyal; training months carry some
            # cross-area submissions, test months stay on home turf.
            if training and rng.random() < 0.2:
                contributor = rng.choice(
                    [g for g in GENERALISTS if g != AREA_OWNER[area]]
                )
            else:
                contributor = AREA_OWNER[area]
            pool = FILE_POOLS[area]
            files = rng.sample(pool, rng.randint(1, min(3, len(pool))))
            created = base + rng.randint(0, 26 * 86400) + rng.randint(0, 86399)

            comments = []
            offset = created
            for _ in range(rng.randint(1, 2)):
                offset += rng.randint(3600, 48 * 3600)
                comments.append({"author": specialist, "created_at": _iso(offset)})
            if rng.random() < (0.35 if training else 0.2):
                comments.append(
                    {
                        "author": CROSS_REVIEWER,
                        "created_at": _iso(created + rng.randint(3600, 96 * 3600)),
                    }
                )
            if rng.random() < 0.15:
                comments.append(
                    {"author": BOT, "created_at": _iso(created + 1800)}
                )

            records.append(
                {
                    "id": f"pr-{serial:03d}",
                    "contributor": contributor,
                    "created_at": _iso(created),
                    "state": rng.choice(["merged", "merged", "merged", "closed"]),
                    "files": sorted(files),
                    "comments": comments,
                }
            )

    # Cleaning fodder: two open training PRs and one sub-threshold reviewer.
    records[4]["state"] = "open"
    records[11]["state"] = "open"
    records[7]["comments"].append(
        {
            "author": ONE_SHOT_REVIEWER,
            "created_at": _iso(_month_epoch(3) + 5 * 86400),
        }
    )
    return records


def fixture_jsonl(seed: int = FIXTURE_SEED) -> str:
    return (
        "\n".join(json.dumps(r, sort_keys=True) for r in generate_fixture_records(seed))
        + "\n"
    )


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    if len(argv) != 1:
        print("usage: python -m hgrec.fixtures OUT.jsonl", file=sys.stderr)
        return 2
    with open(argv[0], "w", encoding="utf-8") as handle:
        handle.write(fixture_jsonl())
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
