"""Command-line entry point.

Subcommands: generate, reduce, encode, check, split, export, score, stats.
Exit codes: 0 ok, 2 usage, 3 data error, 4 internal invariant violation.
Failures print a single machine-parsable line `error: <CODE>: <detail>` to
stderr and leave no partial output files behind.
"""

from __future__ import annotations

import argparse
import os
import sys

from .fileio import atomic_write
from .generator import GenConfig, load_config
from .metrics import (
    PredictionsError,
    exact_match,
    read_predictions,
    score_report,
)
from .pipeline import (
    PipelineError,
    TokenCounter,
    audit_corpus,
    build_corpus,
    corpus_report,
    load_token_counter,
    read_corpus,
    source_field,
    target_field,
)
from .reducer import FuelExhausted, reduce_term
from .splits import (
    SplitError,
    check_manifest,
    compose_split_manifest,
    random_split,
    read_manifest,
    split_by_steps,
    split_by_type,
    write_manifest,
)
from .syntax import ParseError, parse1, parse2, print1, print2
from .church import church_encode

CONFIG_ENV_VAR = "LCEVAL_CONFIG"

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_INTERNAL = 4


class CliError(Exception):
    def __init__(self, code: str, message: str, exit_code: int = EXIT_DATA):
        self.code = code
        self.exit_code = exit_code
        super().__init__(message)


def _load_cfg(args) -> GenConfig:
    path = args.config or os.environ.get(CONFIG_ENV_VAR)
    try:
        cfg = load_config(path) if path else GenConfig()
    except (OSError, ValueError) as exc:
        raise CliError("E_CONFIG", str(exc)) from exc
    if args.seed is not None:
        from dataclasses import replace

        cfg = replace(cfg, seed=args.seed)
    return cfg


def _counter(args) -> TokenCounter:
    try:
        return load_token_counter(args.tokens, getattr(args, "vocab", None))
    except (OSError, ValueError) as exc:
        raise CliError("E_CONFIG", str(exc)) from exc


def _read_corpus(path: str):
    try:
        return read_corpus(path)
    except (OSError, ValueError, KeyError) as exc:
        raise CliError("E_CORPUS", f"{path}: {exc}") from exc


def _read_manifest(path: str):
    try:
        return read_manifest(path)
    except (OSError, ValueError, SplitError) as exc:
        raise CliError("E_MANIFEST", f"{path}: {exc}") from exc


def _task(text: str) -> tuple[str, str, str]:
    parts = tuple(text.split(","))
    if (
        len(parts) != 3
        or parts[0] not in ("lc1", "lc2")
        or parts[1] not in ("whnf", "dnf")
        or parts[2] not in ("vr", "nvr")
    ):
        raise CliError(
            "E_TASK", f"bad task {text!r}; expected <lc1|lc2>,<whnf|dnf>,<vr|nvr>"
        )
    return parts  # type: ignore[return-value]


def _iter_lines(path: str | None):
    if path is None or path == "-":
        yield from sys.stdin
    else:
        with open(path, encoding="utf-8") as fh:
            yield from fh


def _emit_lines(lines, path: str | None) -> None:
    text = "".join(line + "\n" for line in lines)
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        atomic_write(path, text)


def cmd_generate(args) -> int:
    cfg = _load_cfg(args)
    tc = _counter(args)
    try:
        stats = build_corpus(cfg, args.n, args.out, tc, workers=args.workers)
    except PipelineError as exc:
        raise CliError("E_GENERATE", str(exc)) from exc
    print(
        f"wrote {stats.n} records to {args.out} "
        f"({stats.attempts} attempts, acceptance {stats.acceptance_rate:.1%})"
    )
    return EXIT_OK


def cmd_reduce(args) -> int:
    parse = parse1 if args.lang == "lc1" else parse2
    out = []
    for lineno, raw in enumerate(_iter_lines(args.infile), 1):
        line = raw.strip()
        if not line:
            continue
        try:
            result = reduce_term(parse(line), args.strategy, args.renaming, args.fuel)
        except ParseError as exc:
            raise CliError("E_PARSE", f"line {lineno}: {exc}") from exc
        except FuelExhausted as exc:
            raise CliError("E_FUEL", f"line {lineno}: {exc}", EXIT_INTERNAL) from exc
        rendered = print2(result.term)
        out.append(f"{rendered}\t{result.steps}" if args.steps else rendered)
    _emit_lines(out, args.out)
    return EXIT_OK


def cmd_encode(args) -> int:
    out = []
    for lineno, raw in enumerate(_iter_lines(args.infile), 1):
        line = raw.strip()
        if not line:
            continue
        try:
            out.append(print1(church_encode(parse2(line))))
        except ParseError as exc:
            raise CliError("E_PARSE", f"line {lineno}: {exc}") from exc
    _emit_lines(out, args.out)
    return EXIT_OK


def cmd_check(args) -> int:
    records = _read_corpus(args.corpus)
    problems = audit_corpus(records, _counter(args))
    for p in problems[:50]:
        print(p, file=sys.stderr)
    if problems:
        raise CliError("E_AUDIT", f"{len(problems)} corpus violations")
    print(f"{len(records)} records audited, no violations")
    return EXIT_OK


def cmd_split(args) -> int:
    records = _read_corpus(args.corpus)
    n_train = args.n_train
    n_test = args.n_test if args.n_test is not None else 500
    try:
        if args.kind == "random":
            manifest = random_split(
                records, n_train if n_train is not None else 90_000, n_test, args.seed
            )
        elif args.kind == "type":
            manifest = split_by_type(
                records,
                args.train_frac,
                n_train if n_train is not None else 80_000,
                n_test,
                args.seed,
            )
        elif args.kind == "steps":
            manifest = split_by_steps(
                records, args.strategy, args.train_max, args.test_min, args.test_max, args.seed
            )
        else:  # composition
            if not args.manifest:
                raise CliError("E_SPLIT", "composition needs --manifest with the training split")
            base = _read_manifest(args.manifest)
            by_id = {r.id: r for r in records}
            try:
                train_records = [by_id[i] for i in base.train_ids]
            except KeyError as exc:
                raise CliError("E_SPLIT", f"manifest id {exc} not in corpus") from exc
            manifest = compose_split_manifest(
                train_records,
                base.train_ids,
                max_uses_per_term=args.max_uses,
                n_out=n_test,
                seed=args.seed,
                tc=_counter(args),
            )
    except SplitError as exc:
        raise CliError("E_SPLIT", str(exc)) from exc
    problems = check_manifest(manifest, {r.id for r in records})
    if problems:
        raise CliError("E_SPLIT", "; ".join(problems), EXIT_INTERNAL)
    write_manifest(manifest, args.out)
    print(f"wrote {manifest.kind} manifest to {args.out}")
    return EXIT_OK


def cmd_export(args) -> int:
    lang, strategy, renaming = _task(args.task)
    records = _read_corpus(args.corpus)
    manifest = _read_manifest(args.manifest)
    if manifest.test_records is not None and args.side == "test":
        selected = manifest.test_records
    else:
        train_ids, test_ids = manifest.view(lang)
        wanted = train_ids if args.side == "train" else test_ids
        by_id = {r.id: r for r in records}
        try:
            selected = [by_id[i] for i in wanted]
        except KeyError as exc:
            raise CliError("E_MANIFEST", f"manifest id {exc} not in corpus") from exc
    src_name, tgt_name = source_field(lang), target_field(lang, strategy, renaming)
    _emit_lines([getattr(r, src_name) for r in selected], args.src_out)
    _emit_lines([getattr(r, tgt_name) for r in selected], args.tgt_out)
    _emit_lines([str(r.id) for r in selected], args.src_out + ".ids")
    print(f"exported {len(selected)} {args.side} pairs for {args.task}")
    return EXIT_OK


def cmd_score(args) -> int:
    task = _task(args.task)
    lang, strategy, renaming = task
    records = _read_corpus(args.gold)
    manifest = _read_manifest(args.manifest)
    if manifest.test_records is not None:
        selected = manifest.test_records
    else:
        _, test_ids = manifest.view(lang)
        by_id = {r.id: r for r in records}
        try:
            selected = [by_id[i] for i in test_ids]
        except KeyError as exc:
            raise CliError("E_MANIFEST", f"manifest id {exc} not in corpus") from exc
    try:
        preds = read_predictions(args.preds)
        tgt = target_field(lang, strategy, renaming)
        gold = [(r.id, getattr(r, tgt)) for r in selected]
        report = exact_match(preds, gold, lang)
    except PredictionsError as exc:
        raise CliError("E_PREDS", str(exc)) from exc
    matched = dict(report.verdicts)
    pairs_in = [(getattr(r, f"len_{source_field(lang)}"), matched[r.id]) for r in selected]
    pairs_out = [(getattr(r, f"len_{tgt}"), matched[r.id]) for r in selected]
    text, sidecars = score_report(report, task, pairs_in, pairs_out)
    if args.out:
        atomic_write(args.out, text)
        for name, content in sidecars.items():
            atomic_write(f"{args.out}.{name}", content)
    print(f"exact_match = {report.score:.4f} ({report.matches}/{report.total})")
    return EXIT_OK


def cmd_stats(args) -> int:
    records = _read_corpus(args.corpus)
    report, sidecars = corpus_report(records)
    if args.out:
        atomic_write(args.out, report)
        for name, content in sidecars.items():
            atomic_write(f"{args.out}.{name}", content)
    else:
        sys.stdout.write(report)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lceval", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def add_tokens(sp):
        sp.add_argument("--tokens", choices=["whitespace", "char", "external"],
                        default="whitespace", help="token counter mode")
        sp.add_argument("--vocab", help="vocabulary file for --tokens external")

    g = sub.add_parser("generate", help="generate a corpus")
    g.add_argument("--config", help=f"key=value config file (or ${CONFIG_ENV_VAR})")
    g.add_argument("--seed", type=int, help="override the config seed")
    g.add_argument("--n", type=int, required=True, help="number of unique records")
    g.add_argument("--out", required=True, help="corpus output path")
    g.add_argument("--workers", type=int, default=1)
    add_tokens(g)
    g.set_defaults(fn=cmd_generate)

    r = sub.add_parser("reduce", help="reduce terms, one per line")
    r.add_argument("--lang", choices=["lc1", "lc2"], required=True)
    r.add_argument("--strategy", choices=["whnf", "dnf"], required=True)
    r.add_argument("--renaming", choices=["vr", "nvr"], required=True)
    r.add_argument("--steps", action="store_true", help="append a step-count column")
    r.add_argument("--fuel", type=int, default=10_000)
    r.add_argument("--in", dest="infile", help="input file (default stdin)")
    r.add_argument("--out", help="output file (default stdout)")
    r.set_defaults(fn=cmd_reduce)

    e = sub.add_parser("encode", help="encode 2nd-calculus terms into the 1st")
    e.add_argument("--in", dest="infile", help="input file (default stdin)")
    e.add_argument("--out", help="output file (default stdout)")
    e.set_defaults(fn=cmd_encode)

    c = sub.add_parser("check", help="audit a corpus for self-consistency")
    c.add_argument("--corpus", required=True)
    add_tokens(c)
    c.set_defaults(fn=cmd_check)

    s = sub.add_parser("split", help="build a train/test manifest")
    s.add_argument("--kind", choices=["random", "type", "composition", "steps"], required=True)
    s.add_argument("--corpus", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--n-train", type=int, default=None)
    s.add_argument("--n-test", type=int, default=None)
    s.add_argument("--train-frac", type=float, default=0.8, help="type split boundary")
    s.add_argument("--strategy", choices=["whnf", "dnf"], default="whnf", help="steps split")
    s.add_argument("--train-max", type=int, default=None, help="steps split train band")
    s.add_argument("--test-min", type=int, default=None, help="steps split test band")
    s.add_argument("--test-max", type=int, default=None, help="steps split test band")
    s.add_argument("--manifest", help="composition: manifest providing the training side")
    s.add_argument("--max-uses", type=int, default=3, help="composition reuse cap")
    add_tokens(s)
    s.set_defaults(fn=cmd_split)

    x = sub.add_parser("export", help="emit aligned source/target text files")
    x.add_argument("--corpus", required=True)
    x.add_argument("--manifest", required=True)
    x.add_argument("--task", required=True, help="<lc1|lc2>,<whnf|dnf>,<vr|nvr>")
    x.add_argument("--side", choices=["train", "test"], default="train")
    x.add_argument("--out", nargs=2, required=True, metavar=("SRC", "TGT"))
    x.set_defaults(fn=cmd_export)

    sc = sub.add_parser("score", help="exact-match a predictions file")
    sc.add_argument("--gold", required=True, help="corpus path")
    sc.add_argument("--manifest", required=True)
    sc.add_argument("--task", required=True)
    sc.add_argument("--preds", required=True)
    sc.add_argument("--out", help="report path")
    sc.set_defaults(fn=cmd_score)

    st = sub.add_parser("stats", help="corpus histograms and medians")
    st.add_argument("--corpus", required=True)
    st.add_argument("--out", help="report path (default stdout)")
    st.set_defaults(fn=cmd_stats)

    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if hasattr(args, "out") and isinstance(getattr(args, "out", None), list):
        args.src_out, args.tgt_out = args.out
    try:
        return args.fn(args)
    except CliError as exc:
        print(f"error: {exc.code}: {exc}", file=sys.stderr)
        return exc.exit_code
    except ParseError as exc:
        print(f"error: E_PARSE: {exc}", file=sys.stderr)
        return EXIT_DATA
    except FuelExhausted as exc:
        print(f"error: E_FUEL: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except OSError as exc:
        print(f"error: E_IO: {exc}", file=sys.stderr)
        return EXIT_DATA
    except AssertionError as exc:
        print(f"error: E_INTERNAL: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
