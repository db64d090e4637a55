"""``addrbench`` command line: split, synth, train, parse, eval, bench."""
from __future__ import annotations

import argparse
import json
import logging
import secrets
import sys
from pathlib import Path

from .address import COMPONENTS, LabeledSequence
from .exceptions import AddrBenchError
from .lexicons import default_lexicons, load_lexicons

log = logging.getLogger("addrbench")

DEFAULT_SEED = 20231113

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _probability(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"{value} is not a probability")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _seed(args) -> int:
    if getattr(args, "entropy", False):
        return secrets.randbits(32)
    return args.seed


def _echo(command: str, **config) -> None:
    config = {k: str(v) if isinstance(v, Path) else v for k, v in config.items()}
    log.info("config %s", json.dumps({"command": command, **config}, sort_keys=True))


def _lexicons(args):
    return load_lexicons(args.lexicons) if args.lexicons else default_lexicons()


# --- commands ---------------------------------------------------------------

def cmd_split(args) -> int:
    from .dataset import dedupe_streets, load_reference, split, write_split_bundle

    seed = _seed(args)
    _echo("split", reference=args.reference, out_dir=args.out_dir, seed=seed)
    corpus = load_reference(args.reference)
    if corpus.rejects:
        log.warning("%d rows rejected", len(corpus.rejects))
    unique = dedupe_streets(corpus)
    info = write_split_bundle(split(unique, seed=seed), args.out_dir)
    print(json.dumps({"records": len(corpus), "unique": len(unique), **info}, indent=2))
    return EXIT_OK


def cmd_synth(args) -> int:
    from .dataset import export, read_split_bundle, synthesize
    from .injector import InjectionPolicy

    seed = _seed(args)
    policy = InjectionPolicy(args.p_corrupt, args.p_two, args.postal_weight, seed)
    _echo("synth", split_dir=args.split_dir, out_dir=args.out_dir, workers=args.workers, **policy.to_dict())
    datasets, manifest = synthesize(read_split_bundle(args.split_dir), policy, _lexicons(args), args.workers)
    export(datasets, manifest, args.out_dir)
    print(json.dumps(manifest.splits, indent=2))
    return EXIT_OK


def cmd_train(args) -> int:
    from .dataset import read_conll
    from .evaluation import chunk_prf
    from .tagger import TrainConfig, save_model, train, viterbi

    seed = _seed(args)
    _echo("train", train=args.train, validation=args.validation, model_out=args.model_out,
          epochs=args.epochs, seed=seed, average=not args.no_average)
    lex = _lexicons(args)
    data = read_conll(args.train)
    val = read_conll(args.validation) if args.validation else []

    def report(epoch, model, stats):
        if val:
            pred = [viterbi(s.tokens, model, lex) for s in val]
            stats["validation_f1"] = round(chunk_prf(val, pred).f1, 5)
        print(json.dumps(stats), flush=True)

    model = train(data, TrainConfig(args.epochs, seed, not args.no_average), lex, on_epoch=report)
    save_model(model, args.model_out)
    log.info("model written to %s", args.model_out)
    return EXIT_OK


def _make_parser(args):
    """Return a ``text -> LabeledSequence`` callable for --parser/--model."""
    lex = _lexicons(args)
    if args.parser == "tagger":
        if not args.model:
            raise UsageError("--parser tagger requires --model")
        from .tagger import load_model, parse_tagger

        model = load_model(args.model)
        return lambda text: parse_tagger(text, model, lex)
    from .rule_parser import RuleConfig, parse_rule

    config = RuleConfig(lexicons=lex)
    return lambda text: parse_rule(text, config)


def cmd_parse(args) -> int:
    if (args.text is None) == (args.file is None):
        raise UsageError("give either an address or --file")
    _echo("parse", parser=args.parser, model=args.model, format=args.format)
    parse = _make_parser(args)
    if args.file is not None:
        lines = Path(args.file).read_text(encoding="utf-8").splitlines()
        texts = [line for line in lines if line.strip()]
    else:
        texts = [args.text]
    results = [parse(text) for text in texts]
    if args.format == "json":
        for seq in results:
            print(json.dumps({"tokens": list(seq.tokens), "tags": seq.tag_strings}))
    else:
        from .dataset import conll_text

        sys.stdout.write(conll_text(results))
    return EXIT_OK


def _predictions(path, gold: list[LabeledSequence]):
    from .dataset import read_conll

    pred = read_conll(path)
    if len(pred) != len(gold):
        raise AddrBenchError(f"{len(gold)} gold sequences but {len(pred)} predictions")
    # evaluate_parser visits the gold records in order
    replay = iter(pred)
    return lambda text: next(replay)


def cmd_eval(args) -> int:
    from .evaluation import evaluate_parser, load_weights, parsing_score

    weights = load_weights(args.weights) if args.weights else None
    if args.score_only is not None:
        values = [v.strip() for v in args.score_only.split(",")]
        if len(values) != len(COMPONENTS):
            raise UsageError(f"--score-only needs {len(COMPONENTS)} comma-separated F1 values")
        try:
            f1s = dict(zip(COMPONENTS, map(float, values)))
        except ValueError:
            raise UsageError("--score-only values must be numbers")
        _echo("eval", score_only=values, weights=args.weights)
        print(f"{parsing_score(f1s, weights):.5f}")
        return EXIT_OK
    if args.test is None:
        raise UsageError("a test file is required unless --score-only is given")

    from .dataset import read_conll

    _echo("eval", test=args.test, parser=args.parser, model=args.model,
          predictions=args.predictions, weights=args.weights)
    gold = read_conll(args.test)
    if not gold:
        raise AddrBenchError(f"{args.test} holds no sequences")
    parse = _predictions(args.predictions, gold) if args.predictions else _make_parser(args)
    report = evaluate_parser(parse, gold, weights)
    if args.json_out:
        Path(args.json_out).write_text(report.to_json(), encoding="utf-8")
    else:
        sys.stdout.write(report.to_json())
    print(report.format_table())
    return EXIT_OK


def cmd_bench(args) -> int:
    from .benchmark import BenchmarkConfig, run_benchmark
    from .injector import InjectionPolicy

    seed = _seed(args)
    config = BenchmarkConfig(args.n_train, args.n_test, args.epochs, seed,
                             InjectionPolicy(seed=seed), args.workers)
    _echo("bench", reference=args.reference, out_dir=args.out_dir, **config.to_dict())
    result = run_benchmark(config, args.reference, _lexicons(args), args.out_dir)
    print(result.summary())
    log.info("finished in %.1f s", result.elapsed)
    return EXIT_OK


# --- wiring -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="addrbench", description="Address parsing benchmark toolkit.")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, seed=True):
        p.add_argument("--lexicons", type=Path, help="lexicon override file")
        if seed:
            p.add_argument("--seed", type=int, default=DEFAULT_SEED)
            p.add_argument("--entropy", action="store_true", help="draw a random seed instead")

    p = sub.add_parser("split", help="dedupe and split a reference CSV")
    p.add_argument("reference", type=Path)
    p.add_argument("out_dir", type=Path)
    common(p)
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("synth", help="corrupt and label a split")
    p.add_argument("split_dir", type=Path)
    p.add_argument("out_dir", type=Path)
    p.add_argument("--p-corrupt", type=_probability, default=0.5)
    p.add_argument("--p-two", type=_probability, default=0.3)
    p.add_argument("--postal-weight", type=_probability, default=0.2)
    p.add_argument("--workers", type=_positive_int, default=1)
    common(p)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("train", help="train the perceptron tagger")
    p.add_argument("train", type=Path)
    p.add_argument("validation", type=Path, nargs="?")
    p.add_argument("model_out", type=Path)
    p.add_argument("--epochs", type=_positive_int, default=25)
    p.add_argument("--no-average", action="store_true")
    common(p)
    p.set_defaults(func=cmd_train)

    def parser_choice(p):
        p.add_argument("--parser", choices=("rule", "tagger"), default="rule")
        p.add_argument("--model", type=Path)

    p = sub.add_parser("parse", help="tag addresses")
    p.add_argument("text", nargs="?")
    p.add_argument("--file", type=Path)
    p.add_argument("--format", choices=("conll", "json"), default="conll")
    parser_choice(p)
    common(p, seed=False)
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("eval", help="score a parser on a labeled test file")
    p.add_argument("test", type=Path, nargs="?")
    parser_choice(p)
    p.add_argument("--predictions", type=Path, help="CoNLL predictions instead of running a parser")
    p.add_argument("--weights", type=Path, help="JSON component weights")
    p.add_argument("--score-only", metavar="F1,...",
                   help="print the parsing score of 8 comma-separated component F1 values")
    p.add_argument("--json-out", type=Path)
    common(p, seed=False)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("bench", help="run the end-to-end benchmark")
    p.add_argument("--reference", type=Path)
    p.add_argument("--out-dir", type=Path)
    p.add_argument("--n-train", type=_positive_int, default=20_000)
    p.add_argument("--n-test", type=_positive_int, default=5_000)
    p.add_argument("--epochs", type=_positive_int, default=25)
    p.add_argument("--workers", type=_positive_int, default=1)
    common(p)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"addrbench: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_USAGE
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"addrbench: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (AddrBenchError, OSError, ValueError) as exc:
        print(f"addrbench: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DATA
    except Exception as exc:  # pragma: no cover - last resort
        log.exception("internal error")
        print(f"addrbench: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
