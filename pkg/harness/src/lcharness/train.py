"""Training and prediction loops.

Training follows the reference recipe: Adafactor at a 1e-4 peak learning
rate with linear decay over the run, teacher forcing, cross-entropy ignoring
padding.  Checkpoints carry the model config, the vocabulary, the per-epoch
loss log, and an eval-mode loss snapshot so a resumed run can prove it
reloaded the same model.  Prediction is greedy decoding, one output line per
source line; sources over the model limit produce an empty prediction.
"""

from __future__ import annotations

import json
import os
from typing import Optional

import torch
from torch import nn

from .data import PairData, load_pairs, make_batches, pad_batch, read_lines
from .model import ModelConfig, Seq2SeqModel, config_for_preset
from .vocab import PAD, Vocab


def _device() -> torch.device:
    return torch.device("cuda" if torch.cuda.is_available() else "cpu")


def _loss_fn():
    return nn.CrossEntropyLoss(ignore_index=PAD)


def eval_loss(model: Seq2SeqModel, data: PairData, vocab: Vocab, batch_size: int) -> float:
    """Deterministic (eval-mode, unshuffled) mean batch loss over data."""
    model.eval()
    loss_fn = _loss_fn()
    total, count = 0.0, 0
    with torch.no_grad():
        for src, tgt_in, tgt_out in make_batches(data, vocab, batch_size, _device()):
            logits = model(src, tgt_in)
            total += float(loss_fn(logits.transpose(1, 2), tgt_out))
            count += 1
    return total / max(count, 1)


def save_checkpoint(
    ckpt_dir: str,
    model: Seq2SeqModel,
    vocab: Vocab,
    log: list[dict],
    eval_snapshot: float,
) -> None:
    os.makedirs(ckpt_dir, exist_ok=True)
    torch.save(model.state_dict(), os.path.join(ckpt_dir, "model.pt"))
    vocab.save(os.path.join(ckpt_dir, "vocab.txt"))
    with open(os.path.join(ckpt_dir, "config.json"), "w", encoding="utf-8") as fh:
        json.dump({"model": model.cfg.to_dict(), "eval_loss": eval_snapshot}, fh, indent=2)
    with open(os.path.join(ckpt_dir, "log.jsonl"), "w", encoding="utf-8") as fh:
        fh.write("".join(json.dumps(entry) + "\n" for entry in log))


def load_checkpoint(ckpt_dir: str) -> tuple[Seq2SeqModel, Vocab, dict]:
    with open(os.path.join(ckpt_dir, "config.json"), encoding="utf-8") as fh:
        meta = json.load(fh)
    vocab = Vocab.load(os.path.join(ckpt_dir, "vocab.txt"))
    model = Seq2SeqModel(ModelConfig(**meta["model"]))
    state = torch.load(os.path.join(ckpt_dir, "model.pt"), map_location=_device())
    model.load_state_dict(state)
    model.to(_device())
    return model, vocab, meta


def train(
    src_path: str,
    tgt_path: str,
    ckpt_dir: str,
    preset: str = "tiny",
    epochs: int = 10,
    batch_size: int = 32,
    learning_rate: float = 1e-4,
    seed: int = 0,
    resume: bool = False,
    max_source_len: int = 512,
    max_target_len: int = 256,
    dropout: float = 0.1,
) -> list[dict]:
    """Train (or continue training) and write a checkpoint; returns the log."""
    torch.manual_seed(seed)
    device = _device()
    if resume:
        model, vocab, meta = load_checkpoint(ckpt_dir)
        data = load_pairs(
            src_path, tgt_path, model.cfg.max_source_len, model.cfg.max_target_len
        )
        resumed_loss = eval_loss(model, data, vocab, batch_size)
        drift = abs(resumed_loss - meta["eval_loss"])
        print(f"resumed: eval loss {resumed_loss:.6f} (saved {meta['eval_loss']:.6f})")
        if drift > 1e-4:
            raise RuntimeError(f"checkpoint drift {drift:.2e} exceeds 1e-4")
        log = [json.loads(line) for line in read_lines(os.path.join(ckpt_dir, "log.jsonl")) if line]
    else:
        data = load_pairs(src_path, tgt_path, max_source_len, max_target_len)
        if not data.sources:
            raise ValueError("no trainable pairs after length filtering")
        vocab = Vocab.build(data.sources + data.targets)
        cfg = config_for_preset(
            preset,
            len(vocab),
            max_source_len=max_source_len,
            max_target_len=max_target_len,
            dropout=dropout,
        )
        model = Seq2SeqModel(cfg).to(device)
        log = []

    n_batches = max(1, (len(data.sources) + batch_size - 1) // batch_size)
    total_steps = epochs * n_batches
    optimizer = torch.optim.Adafactor(model.parameters(), lr=learning_rate)
    scheduler = torch.optim.lr_scheduler.LambdaLR(
        optimizer, lambda step: max(0.0, 1.0 - step / max(total_steps, 1))
    )
    loss_fn = _loss_fn()
    start_epoch = len(log)
    for epoch in range(start_epoch, start_epoch + epochs):
        model.train()
        total, count = 0.0, 0
        for src, tgt_in, tgt_out in make_batches(
            data, vocab, batch_size, device, shuffle_seed=seed + epoch
        ):
            optimizer.zero_grad()
            logits = model(src, tgt_in)
            loss = loss_fn(logits.transpose(1, 2), tgt_out)
            loss.backward()
            optimizer.step()
            scheduler.step()
            total += float(loss.detach())
            count += 1
        entry = {"epoch": epoch, "train_loss": total / max(count, 1)}
        log.append(entry)
        print(f"epoch {epoch}: loss {entry['train_loss']:.4f}")
    snapshot = eval_loss(model, data, vocab, batch_size)
    save_checkpoint(ckpt_dir, model, vocab, log, snapshot)
    return log


def predict(
    ckpt_dir: str,
    src_path: str,
    out_path: str,
    ids_path: Optional[str] = None,
    batch_size: int = 32,
    seed: int = 0,
) -> int:
    """Greedy-decode one prediction per source line into `id<TAB>prediction`."""
    torch.manual_seed(seed)
    model, vocab, _ = load_checkpoint(ckpt_dir)
    sources = read_lines(src_path)
    if ids_path is None and os.path.exists(src_path + ".ids"):
        ids_path = src_path + ".ids"
    ids = read_lines(ids_path) if ids_path else [str(i) for i in range(len(sources))]
    if len(ids) != len(sources):
        raise ValueError(f"ids/source count mismatch: {len(ids)} vs {len(sources)}")

    device = _device()
    rows: list[str] = []
    batch: list[tuple[str, str]] = []

    def flush():
        if not batch:
            return
        encoded = [vocab.encode(s) for _, s in batch]
        src = pad_batch(encoded, device)
        decoded = model.greedy_decode(src, model.cfg.max_target_len)
        for (ident, _), token_ids in zip(batch, decoded):
            rows.append(f"{ident}\t{vocab.decode(token_ids)}")
        batch.clear()

    for ident, line in zip(ids, sources):
        if len(line.split()) > model.cfg.max_source_len:
            flush()
            rows.append(f"{ident}\t")  # decode overflow: empty prediction
            continue
        batch.append((ident, line))
        if len(batch) >= batch_size:
            flush()
    flush()
    tmp = f"{out_path}.tmp.{os.getpid()}"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write("".join(row + "\n" for row in rows))
    os.replace(tmp, out_path)
    return len(rows)
