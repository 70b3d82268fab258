"""Command-line entry point: ``codemix-stance <subcommand>``.

Exit codes: 0 success, 2 input/config error, 3 training error,
4 model / feature-space mismatch.
"""
from __future__ import annotations

import argparse
import sys
from collections import Counter
from pathlib import Path
from typing import Optional, Sequence

from .classify import ModelConfig, ModelKind, ModelMismatchError, TrainedModel, TrainingError, predict_matrix, train
from .corpus import (
    LANG_FILE,
    STANCE_FILE,
    TAGS,
    TEXT_FILE,
    Corpus,
    CorpusFormatError,
    Tweet,
    corpus_stats,
    format_lang_file,
    load_corpus,
    parse_stance_file,
    parse_text_file,
)
from .evaluate import (
    FoldError,
    PipelineConfig,
    agreement_matrix,
    cohens_kappa,
    cross_validate,
    format_grid,
)
from .features import (
    COUNT_MODES,
    FAMILIES,
    FeatureSpace,
    Thresholds,
    fit_feature_space,
    prepare_documents,
    vectorize_matrix,
)
from .langid import HASHTAG_POLICIES, ConfigError, load_lexicons, tag_tokens
from .preprocess import load_stopwords, tokenize
from .selection import METHODS, apply_remap, select_top_k

EXIT_INPUT = 2
EXIT_TRAINING = 3
EXIT_MISMATCH = 4


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_INPUT):
        super().__init__(message)
        self.code = code


def _gamma(value: str):
    if value == "auto":
        return value
    try:
        g = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError("gamma must be a positive number or 'auto'") from None
    if g <= 0:
        raise argparse.ArgumentTypeError("gamma must be positive")
    return g


def _echo_config(pairs: Sequence[str]) -> None:
    for line in pairs:
        print(f"# {line}", file=sys.stderr)


def _corpus_paths(args) -> tuple[Path, Optional[Path], Optional[Path]]:
    base = Path(args.corpus_dir) if args.corpus_dir else None
    text = Path(args.text) if args.text else (base / TEXT_FILE if base else None)
    lang = Path(args.lang) if args.lang else (base / LANG_FILE if base else None)
    stance = Path(args.stance) if args.stance else (base / STANCE_FILE if base else None)
    if text is None:
        raise CliError("give a corpus directory or --text")
    return text, lang, stance


def _load_full_corpus(args) -> Corpus:
    text, lang, stance = _corpus_paths(args)
    for p in (text, lang, stance):
        if p is None or not p.is_file():
            raise CliError(f"missing corpus file: {p}")
    return load_corpus(text, lang, stance)


def _stopwords(args):
    return load_stopwords(args.stopwords) if args.stopwords else load_stopwords()


def _thresholds(args) -> Thresholds:
    return Thresholds(args.char_min, args.word_min, args.si_min_count, args.si_min_score, args.count_mode)


def _model_config(args, kind: str) -> ModelConfig:
    return ModelConfig(
        ModelKind(kind), c=args.c, gamma=args.gamma, trees=args.trees, max_depth=args.max_depth, seed=args.seed
    )


# --------------------------------------------------------------------------
# subcommands

def cmd_stats(args) -> int:
    corpus = _load_full_corpus(args)
    _echo_config([f"text={corpus.provenance[0]}", *(f"annotation={p}" for p in corpus.provenance[1:])])
    report = corpus_stats(corpus)
    sys.stdout.write(report.format_table())
    sys.stdout.write("\n")
    sys.stdout.write(report.format_kv())
    return 0


def cmd_langid(args) -> int:
    lexicons = load_lexicons(args.lexicon_dir)
    _echo_config([f"lexicon_dir={args.lexicon_dir or 'default'}", f"hashtag_policy={args.hashtag_policy}"])
    records = parse_text_file(args.text_file)
    tweets = []
    counts = Counter()
    for tweet_id, raw in records:
        tokens = tag_tokens(tokenize(raw), lexicons, args.hashtag_policy)
        counts.update(t.tag for t in tokens)
        tweets.append(Tweet(tweet_id, raw, tuple(tokens)))
    payload = format_lang_file(Corpus(tuple(tweets)))
    if args.out:
        Path(args.out).write_text(payload, encoding="utf-8")
    else:
        sys.stdout.write(payload)
    out = sys.stderr if not args.out else sys.stdout
    for tag in TAGS:
        print(f"{tag.value}={counts[tag]}", file=out)
    return 0


def cmd_crossval(args) -> int:
    corpus = _load_full_corpus(args)
    stopwords = _stopwords(args)
    feature_sets = [args.features] if args.features else ["char", "word", "si", "all"]
    models = args.model or ["rbf-svm"]
    out_dir = Path(args.out_dir) if args.out_dir else None
    if out_dir:
        out_dir.mkdir(parents=True, exist_ok=True)
    reports = {}
    for kind in models:
        for features in feature_sets:
            config = PipelineConfig(
                features=features,
                thresholds=_thresholds(args),
                top_k=args.top_k,
                selection=args.selection,
                model=_model_config(args, kind),
                folds=args.folds,
                seed=args.seed,
                stratify=not args.no_stratify,
            )
            _echo_config(config.lines() + [f"stopwords_sha256={stopwords.sha256}"])
            report = cross_validate(corpus, config, stopwords)
            reports[(features, ModelKind(kind))] = report
            if out_dir:
                (out_dir / f"report_{features}_{kind}.txt").write_text(report.to_text(), encoding="utf-8")
            print(f"{features}\t{kind}\tmean_accuracy={100 * report.mean_accuracy:.1f}")
    grid = format_grid(reports)
    sys.stdout.write("\n" + grid)
    if out_dir:
        (out_dir / "grid.txt").write_text(grid, encoding="utf-8")
    return 0


def cmd_train(args) -> int:
    corpus = _load_full_corpus(args)
    stopwords = _stopwords(args)
    thresholds = _thresholds(args)
    config = _model_config(args, args.model)
    _echo_config(
        [f"features={args.features}", *thresholds.format().split(), f"top_k={args.top_k}"]
        + [f"{k}={v}" for k, v in config.as_dict().items()]
    )
    docs = prepare_documents(corpus, stopwords)
    labels = corpus.labels
    space = fit_feature_space(docs, FAMILIES[args.features], thresholds, stopwords.sha256)
    X = vectorize_matrix(docs, space)
    reduced, remap = select_top_k(X, labels, space, args.top_k, args.selection)
    model = train(config, apply_remap(X, remap), labels, reduced.fingerprint)
    reduced.save(args.space_out)
    model.save(args.model_out)
    print(f"features_fitted={len(space)} features_selected={len(reduced)}")
    return 0


def cmd_predict(args) -> int:
    try:
        model = TrainedModel.load(args.model)
        space = FeatureSpace.load(args.space)
    except (ValueError, KeyError) as exc:
        raise CliError(f"cannot read model or feature space: {exc}", EXIT_MISMATCH) from exc
    if model.space_fingerprint != space.fingerprint:
        raise CliError("model was not trained on this feature space", EXIT_MISMATCH)
    stopwords = _stopwords(args)
    if space.stopwords_sha256 and space.stopwords_sha256 != stopwords.sha256:
        raise CliError("stopword list differs from the one used in training", EXIT_MISMATCH)
    if args.lang:
        corpus = load_corpus(args.text_file, args.lang)
    else:
        lexicons = load_lexicons(args.lexicon_dir)
        tweets = tuple(
            Tweet(tweet_id, raw, tuple(tag_tokens(tokenize(raw), lexicons, args.hashtag_policy)))
            for tweet_id, raw in parse_text_file(args.text_file)
        )
        corpus = Corpus(tweets)
    docs = prepare_documents(corpus, stopwords)
    labels = predict_matrix(model, vectorize_matrix(docs, space)) if docs else []
    payload = "".join(f"{tw.id}\n{label.value}\n\n" for tw, label in zip(corpus, labels))
    if args.out:
        Path(args.out).write_text(payload, encoding="utf-8")
    else:
        sys.stdout.write(payload)
    return 0


def cmd_kappa(args) -> int:
    a = parse_stance_file(args.stance_file_a)
    b = parse_stance_file(args.stance_file_b)
    ids_a = [i for i, _ in a]
    ids_b = [i for i, _ in b]
    if sorted(ids_a) != sorted(ids_b) or len(set(ids_a)) != len(ids_a):
        raise CliError("stance files do not cover the same tweet ids")
    lookup = dict(b)
    labels_a = [label for _, label in a]
    labels_b = [lookup[i] for i in ids_a]
    kappa = cohens_kappa(labels_a, labels_b)
    cats, m = agreement_matrix(labels_a, labels_b)
    print(f"kappa={kappa:.4f}")
    width = max(len(c.value) for c in cats)
    print(" " * width + "".join(f" {c.value:>{width}}" for c in cats))
    for c, row in zip(cats, m):
        print(f"{c.value:>{width}}" + "".join(f" {int(v):>{width}}" for v in row))
    return 0


# --------------------------------------------------------------------------

def _add_corpus_args(p) -> None:
    p.add_argument("corpus_dir", nargs="?", help=f"directory holding {TEXT_FILE}, {LANG_FILE}, {STANCE_FILE}")
    p.add_argument("--text", help="text file (overrides the directory)")
    p.add_argument("--lang", help="language-annotated file")
    p.add_argument("--stance", help="stance file")


def _add_pipeline_args(p) -> None:
    p.add_argument("--char-min", type=int, default=8)
    p.add_argument("--word-min", type=int, default=10)
    p.add_argument("--si-min-count", type=int, default=5)
    p.add_argument("--si-min-score", type=float, default=0.6)
    p.add_argument("--count-mode", choices=COUNT_MODES, default="occurrence")
    p.add_argument("--top-k", type=int, default=500)
    p.add_argument("--selection", choices=METHODS, default="multiclass")
    p.add_argument("--c", type=float, default=1.0, help="SVM regularization")
    p.add_argument("--gamma", type=_gamma, default="auto", help="RBF width, or 'auto' (1/features)")
    p.add_argument("--trees", type=int, default=100)
    p.add_argument("--max-depth", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--stopwords", nargs="+", help="stopword files (default: bundled English + Hindi lists)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="codemix-stance", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    models = [k.value for k in ModelKind]

    p = sub.add_parser("stats", help="corpus statistics")
    _add_corpus_args(p)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("langid", help="tokenize and language-tag a text file")
    p.add_argument("text_file")
    p.add_argument("--lexicon-dir", help="directory of word lists (default: $CODEMIX_LEXICON_DIR or bundled)")
    p.add_argument("--hashtag-policy", choices=HASHTAG_POLICIES, default="rest")
    p.add_argument("--out", help="output lang file (default: stdout)")
    p.set_defaults(func=cmd_langid)

    p = sub.add_parser("crossval", help="k-fold cross-validation")
    _add_corpus_args(p)
    _add_pipeline_args(p)
    p.add_argument("--features", choices=sorted(FAMILIES), help="one feature family (default: all four rows)")
    p.add_argument("--model", choices=models, action="append", help="repeatable; default rbf-svm")
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--no-stratify", action="store_true")
    p.add_argument("--out-dir", help="write per-cell reports and grid.txt here")
    p.set_defaults(func=cmd_crossval)

    p = sub.add_parser("train", help="fit features, selection and a model on a corpus")
    _add_corpus_args(p)
    _add_pipeline_args(p)
    p.add_argument("--features", choices=sorted(FAMILIES), default="all")
    p.add_argument("--model", choices=models, default="rbf-svm")
    p.add_argument("--model-out", required=True)
    p.add_argument("--space-out", required=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="predict stance for a text file")
    p.add_argument("text_file")
    p.add_argument("--model", required=True)
    p.add_argument("--space", required=True)
    p.add_argument("--lang", help="language-annotated file; otherwise tokens are tagged automatically")
    p.add_argument("--lexicon-dir")
    p.add_argument("--hashtag-policy", choices=HASHTAG_POLICIES, default="rest")
    p.add_argument("--stopwords", nargs="+")
    p.add_argument("--out", help="output stance file (default: stdout)")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("kappa", help="Cohen's kappa between two stance files")
    p.add_argument("stance_file_a")
    p.add_argument("stance_file_b")
    p.set_defaults(func=cmd_kappa)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except ModelMismatchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except (FoldError, TrainingError) as exc:
        print(f"training error: {exc}", file=sys.stderr)
        return EXIT_TRAINING
    except (CorpusFormatError, ConfigError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
