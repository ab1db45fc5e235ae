"""Command-line interface: `lc-harness train` and `lc-harness predict`.

Both commands speak the reduction toolkit's file formats: line-aligned
source/target text (as produced by `lceval export`, whose `.ids` sidecar is
picked up automatically) and `id<TAB>prediction` output ready for
`lceval score`.
"""

from __future__ import annotations

import argparse
import sys

from .train import predict, train


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lc-harness", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("train", help="train a seq2seq model on aligned files")
    t.add_argument("--src", required=True, help="source lines")
    t.add_argument("--tgt", required=True, help="target lines, aligned")
    t.add_argument("--ckpt", required=True, help="checkpoint directory")
    t.add_argument("--preset", default="tiny", choices=["tiny", "small", "large"])
    t.add_argument("--epochs", type=int, default=10)
    t.add_argument("--batch-size", type=int, default=32,
                   help="examples per step (large-batch runs use e.g. 2048)")
    t.add_argument("--learning-rate", type=float, default=1e-4,
                   help="peak learning rate, decayed linearly to zero")
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--resume", action="store_true",
                   help="continue from --ckpt, verifying the saved loss first")
    t.add_argument("--max-source-len", type=int, default=512)
    t.add_argument("--max-target-len", type=int, default=256)
    t.add_argument("--dropout", type=float, default=0.1)

    d = sub.add_parser("predict", help="greedy-decode a predictions file")
    d.add_argument("--ckpt", required=True)
    d.add_argument("--src", required=True)
    d.add_argument("--out", required=True, help="predictions file (id<TAB>text)")
    d.add_argument("--ids", help="ids file (default: <src>.ids if present)")
    d.add_argument("--batch-size", type=int, default=32)
    d.add_argument("--seed", type=int, default=0)

    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "train":
            train(
                args.src,
                args.tgt,
                args.ckpt,
                preset=args.preset,
                epochs=args.epochs,
                batch_size=args.batch_size,
                learning_rate=args.learning_rate,
                seed=args.seed,
                resume=args.resume,
                max_source_len=args.max_source_len,
                max_target_len=args.max_target_len,
                dropout=args.dropout,
            )
        else:
            n = predict(
                args.ckpt,
                args.src,
                args.out,
                ids_path=args.ids,
                batch_size=args.batch_size,
                seed=args.seed,
            )
            print(f"wrote {n} predictions to {args.out}")
    except (OSError, ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
