"""Regenerate the bundled 50-tweet fixture and its golden statistics.

    python scripts/make_fixture.py tests/data/fixture50

Golden stats are counted straight from the written files (line splitting
only), not through the package's stats code.
"""
import sys
from pathlib import Path

from codemix_stance.corpus import StanceLabel, write_corpus
from codemix_stance.synthetic import synthetic_corpus

COUNTS = {StanceLabel.FAVOR: 14, StanceLabel.AGAINST: 9, StanceLabel.NONE: 27}


def golden(directory: Path) -> str:
    stance_lines = [
        line for line in (directory / "stance.txt").read_text(encoding="utf-8").splitlines()
        if line in ("FAVOR", "AGAINST", "NONE")
    ]
    tags = [
        line.split("\t")[1]
        for line in (directory / "lang.txt").read_text(encoding="utf-8").splitlines()
        if "\t" in line
    ]
    n = len(stance_lines)
    return (
        f"total={n}\n"
        f"favor={stance_lines.count('FAVOR')}\n"
        f"against={stance_lines.count('AGAINST')}\n"
        f"none={stance_lines.count('NONE')}\n"
        f"avg_tokens={len(tags) / n:.1f}\n"
        f"avg_en={tags.count('en') / n:.1f}\n"
        f"avg_hi={tags.count('hi') / n:.1f}\n"
        f"avg_rest={tags.count('rest') / n:.1f}\n"
    )


def main(out: str) -> None:
    directory = Path(out)
    write_corpus(synthetic_corpus(COUNTS, seed=50, signal=0.3), directory)
    (directory / "golden_stats.txt").write_text(golden(directory), encoding="utf-8")
    print((directory / "golden_stats.txt").read_text(), end="")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "tests/data/fixture50")
