"""Run the feature-subset x classifier accuracy grid with 10-fold cross-validation.

    python scripts/accuracy_grid.py CORPUS_DIR [--out-dir results/] [--model rbf-svm ...]
    python scripts/accuracy_grid.py --synthetic      # full-size synthetic stand-in

CORPUS_DIR holds text.txt, lang.txt and stance.txt. Every cell's report is
written next to the grid so runs can be diffed byte for byte.
"""
import argparse
import sys
import time
from pathlib import Path

from codemix_stance.classify import ModelConfig, ModelKind
from codemix_stance.corpus import load_corpus_dir
from codemix_stance.evaluate import GRID_COLS, GRID_ROWS, PipelineConfig, cross_validate, format_grid
from codemix_stance.preprocess import load_stopwords
from codemix_stance.synthetic import synthetic_corpus


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("corpus_dir", nargs="?")
    p.add_argument("--synthetic", action="store_true", help="use a seeded 3545-tweet synthetic corpus")
    p.add_argument("--model", action="append", choices=[k.value for k in ModelKind])
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", default="results")
    args = p.parse_args(argv)
    if not args.synthetic and not args.corpus_dir:
        p.error("give a corpus directory or --synthetic")

    corpus = synthetic_corpus(signal=0.06) if args.synthetic else load_corpus_dir(args.corpus_dir)
    stopwords = load_stopwords()
    kinds = [ModelKind(k) for k in args.model] if args.model else list(GRID_COLS)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    reports = {}
    for kind in kinds:
        for features, _ in GRID_ROWS:
            config = PipelineConfig(features, model=ModelConfig(kind), folds=args.folds, seed=args.seed)
            start = time.perf_counter()
            report = cross_validate(corpus, config, stopwords)
            reports[features, kind] = report
            (out / f"report_{features}_{kind.value}.txt").write_text(report.to_text(), encoding="utf-8")
            print(f"{features:>4} {kind.value:<13} {100 * report.mean_accuracy:5.1f}  ({time.perf_counter() - start:.0f}s)",
                  file=sys.stderr)
    grid = format_grid(reports)
    (out / "grid.txt").write_text(grid, encoding="utf-8")
    print(grid, end="")
    return 0


if __name__ == "__main__":
    sys.exit(main())
