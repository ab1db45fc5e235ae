"""Whitespace-lexeme vocabulary shared by source and target sides.

The reduction corpora are printed with single spaces between tokens, so
splitting on whitespace recovers the exact token stream; unseen lexemes at
prediction time map to <unk>.
"""

from __future__ import annotations

from typing import Iterable

PAD, BOS, EOS, UNK = 0, 1, 2, 3
SPECIALS = ("<pad>", "<s>", "</s>", "<unk>")


class Vocab:
    def __init__(self, tokens: list[str]):
        self.tokens = list(SPECIALS) + tokens
        self.index = {tok: i for i, tok in enumerate(self.tokens)}

    def __len__(self) -> int:
        return len(self.tokens)

    def encode(self, line: str) -> list[int]:
        return [self.index.get(tok, UNK) for tok in line.split()]

    def decode(self, ids: Iterable[int]) -> str:
        out = []
        for i in ids:
            if i == EOS:
                break
            if i not in (PAD, BOS):
                out.append(self.tokens[i])
        return " ".join(out)

    @classmethod
    def build(cls, lines: Iterable[str]) -> "Vocab":
        seen: dict[str, None] = {}
        for line in lines:
            for tok in line.split():
                seen.setdefault(tok, None)
        return cls(sorted(seen))

    def save(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("".join(tok + "\n" for tok in self.tokens[len(SPECIALS):]))

    @classmethod
    def load(cls, path: str) -> "Vocab":
        with open(path, encoding="utf-8") as fh:
            return cls([line.rstrip("\n") for line in fh if line.rstrip("\n")])
