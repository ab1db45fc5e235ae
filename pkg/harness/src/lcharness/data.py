"""Loading and batching of line-aligned source/target pairs."""

from __future__ import annotations

import sys
from dataclasses import dataclass
from typing import Optional

import torch

from .vocab import BOS, EOS, PAD, Vocab


def read_lines(path: str) -> list[str]:
    with open(path, encoding="utf-8") as fh:
        return [line.rstrip("\n") for line in fh]


@dataclass
class PairData:
    sources: list[str]
    targets: list[str]
    skipped: int  # pairs over the model's length limits (never truncated)


def load_pairs(
    src_path: str,
    tgt_path: str,
    max_source_len: int,
    max_target_len: int,
) -> PairData:
    sources = read_lines(src_path)
    targets = read_lines(tgt_path)
    if len(sources) != len(targets):
        raise ValueError(
            f"unaligned files: {len(sources)} sources vs {len(targets)} targets"
        )
    kept_s, kept_t, skipped = [], [], 0
    for s, t in zip(sources, targets):
        if len(s.split()) > max_source_len or len(t.split()) > max_target_len:
            skipped += 1
            continue
        kept_s.append(s)
        kept_t.append(t)
    if skipped:
        print(f"warning: skipped {skipped} over-length pairs", file=sys.stderr)
    return PairData(kept_s, kept_t, skipped)


def pad_batch(rows: list[list[int]], device: torch.device) -> torch.Tensor:
    width = max(len(r) for r in rows)
    out = torch.full((len(rows), width), PAD, dtype=torch.long)
    for i, row in enumerate(rows):
        out[i, : len(row)] = torch.tensor(row, dtype=torch.long)
    return out.to(device)


def make_batches(
    data: PairData,
    vocab: Vocab,
    batch_size: int,
    device: torch.device,
    shuffle_seed: Optional[int] = None,
):
    """(src, tgt_in, tgt_out) tensor triples, length-bucketed then batched."""
    encoded = [
        (vocab.encode(s), [BOS] + vocab.encode(t) + [EOS])
        for s, t in zip(data.sources, data.targets)
    ]
    order = sorted(range(len(encoded)), key=lambda i: len(encoded[i][0]))
    batches = [order[i : i + batch_size] for i in range(0, len(order), batch_size)]
    if shuffle_seed is not None:
        import random

        random.Random(shuffle_seed).shuffle(batches)
    for idxs in batches:
        src = pad_batch([encoded[i][0] for i in idxs], device)
        tgt = pad_batch([encoded[i][1] for i in idxs], device)
        yield src, tgt[:, :-1], tgt[:, 1:]
