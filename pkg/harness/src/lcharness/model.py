"""A compact encoder-decoder transformer with size presets.

The `small` and `large` presets mirror the familiar 60M/770M
encoder-decoder shapes, but weights always start from the local checkpoint
(or random init); there is no hub download.  Desk-scale work uses `tiny`.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import torch
from torch import nn

from .vocab import BOS, EOS, PAD


@dataclass(frozen=True)
class ModelConfig:
    vocab_size: int
    d_model: int = 128
    n_heads: int = 4
    n_layers: int = 2
    d_ff: int = 256
    dropout: float = 0.1
    max_source_len: int = 512
    max_target_len: int = 256

    def to_dict(self) -> dict:
        return asdict(self)


PRESETS = {
    "tiny": dict(d_model=128, n_heads=4, n_layers=2, d_ff=256),
    "small": dict(d_model=512, n_heads=8, n_layers=6, d_ff=2048),
    "large": dict(d_model=1024, n_heads=16, n_layers=24, d_ff=4096),
}


def config_for_preset(preset: str, vocab_size: int, **overrides) -> ModelConfig:
    if preset not in PRESETS:
        raise ValueError(f"unknown preset {preset!r}; have {sorted(PRESETS)}")
    return ModelConfig(vocab_size=vocab_size, **{**PRESETS[preset], **overrides})


class Seq2SeqModel(nn.Module):
    def __init__(self, cfg: ModelConfig):
        super().__init__()
        self.cfg = cfg
        max_pos = max(cfg.max_source_len, cfg.max_target_len) + 2
        self.embed = nn.Embedding(cfg.vocab_size, cfg.d_model, padding_idx=PAD)
        self.pos = nn.Embedding(max_pos, cfg.d_model)
        layer_args = dict(
            d_model=cfg.d_model,
            nhead=cfg.n_heads,
            dim_feedforward=cfg.d_ff,
            dropout=cfg.dropout,
            batch_first=True,
            norm_first=True,
        )
        # pre-norm layers need a final norm, especially with tied projections
        self.encoder = nn.TransformerEncoder(
            nn.TransformerEncoderLayer(**layer_args),
            cfg.n_layers,
            norm=nn.LayerNorm(cfg.d_model),
            enable_nested_tensor=False,
        )
        self.decoder = nn.TransformerDecoder(
            nn.TransformerDecoderLayer(**layer_args),
            cfg.n_layers,
            norm=nn.LayerNorm(cfg.d_model),
        )
        self.out = nn.Linear(cfg.d_model, cfg.vocab_size, bias=False)
        self.out.weight = self.embed.weight  # tied projection
        # keep tied logits near unit scale at init
        nn.init.normal_(self.embed.weight, std=cfg.d_model**-0.5)
        nn.init.normal_(self.pos.weight, std=cfg.d_model**-0.5)
        with torch.no_grad():
            self.embed.weight[PAD].zero_()

    @staticmethod
    def _causal_mask(length: int, device: torch.device) -> torch.Tensor:
        return torch.triu(
            torch.ones(length, length, dtype=torch.bool, device=device), diagonal=1
        )

    def _embed(self, ids: torch.Tensor) -> torch.Tensor:
        positions = torch.arange(ids.shape[1], device=ids.device)
        return self.embed(ids) + self.pos(positions)[None, :, :]

    def encode(self, src: torch.Tensor) -> tuple[torch.Tensor, torch.Tensor]:
        pad_mask = src == PAD
        memory = self.encoder(self._embed(src), src_key_padding_mask=pad_mask)
        return memory, pad_mask

    def forward(self, src: torch.Tensor, tgt_in: torch.Tensor) -> torch.Tensor:
        """Logits for each target position given teacher-forced tgt_in."""
        memory, src_pad = self.encode(src)
        causal = self._causal_mask(tgt_in.shape[1], tgt_in.device)
        hidden = self.decoder(
            self._embed(tgt_in),
            memory,
            tgt_mask=causal,
            tgt_key_padding_mask=tgt_in == PAD,
            memory_key_padding_mask=src_pad,
        )
        return self.out(hidden)

    @torch.no_grad()
    def greedy_decode(self, src: torch.Tensor, max_len: int) -> list[list[int]]:
        """Greedy decoding of a batch; returns token ids without BOS/EOS."""
        self.eval()
        memory, src_pad = self.encode(src)
        batch = src.shape[0]
        ys = torch.full((batch, 1), BOS, dtype=torch.long, device=src.device)
        finished = torch.zeros(batch, dtype=torch.bool, device=src.device)
        for _ in range(max_len):
            causal = self._causal_mask(ys.shape[1], src.device)
            hidden = self.decoder(
                self._embed(ys), memory, tgt_mask=causal, memory_key_padding_mask=src_pad
            )
            nxt = self.out(hidden[:, -1, :]).argmax(dim=-1)
            nxt = torch.where(finished, torch.full_like(nxt, PAD), nxt)
            ys = torch.cat([ys, nxt[:, None]], dim=1)
            finished |= nxt == EOS
            if bool(finished.all()):
                break
        out = []
        for row in ys[:, 1:].tolist():
            ids = []
            for tok in row:
                if tok == EOS:
                    break
                if tok != PAD:
                    ids.append(tok)
            out.append(ids)
        return out
