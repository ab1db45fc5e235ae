"""Exact-match scoring and report rendering.

The metric is byte-exact string comparison between prediction and the
ground-truth normal form (a single trailing newline is trimmed from each
side); alpha-equivalent but differently named predictions do not count.  A
missing prediction counts as a mismatch; duplicate prediction ids are an
input error.  Reports add a diagnostic column: the share of mismatches that
are alpha-equal to the gold term, which is informative but not the metric.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .pipeline import length_buckets
from .syntax import parse1, parse2
from .terms import alpha_eq


class PredictionsError(Exception):
    pass


def read_predictions(path: str) -> dict[int, str]:
    """id -> prediction from `id<TAB>prediction` lines."""
    preds: dict[int, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line:
                continue
            ident, _, text = line.partition("\t")
            try:
                rec_id = int(ident)
            except ValueError:
                raise PredictionsError(f"{path}:{lineno}: bad id {ident!r}") from None
            if rec_id in preds:
                raise PredictionsError(f"{path}:{lineno}: duplicate prediction id {rec_id}")
            preds[rec_id] = text
    return preds


def write_predictions(preds: Sequence[tuple[int, str]], path: str) -> None:
    from .fileio import atomic_write

    atomic_write(path, "".join(f"{i}\t{s}\n" for i, s in preds))


def _normalize(s: str) -> str:
    return s[:-1] if s.endswith("\n") else s


@dataclass(frozen=True)
class MatchReport:
    score: float
    total: int
    matches: int
    verdicts: tuple[tuple[int, bool], ...]  # (id, matched), in gold order
    alpha_eq_mismatch_share: float  # diagnostic only


def exact_match(
    preds: dict[int, str],
    gold: Sequence[tuple[int, str]],
    lang: Optional[str] = None,
) -> MatchReport:
    """Average exact string match of predictions against (id, gold string) pairs."""
    if not gold:
        raise PredictionsError("no gold examples to score")
    verdicts = []
    alpha_hits = 0
    mismatches = 0
    for rec_id, want in gold:
        have = preds.get(rec_id)
        matched = have is not None and _normalize(have) == _normalize(want)
        verdicts.append((rec_id, matched))
        if not matched:
            mismatches += 1
            if have is not None and lang is not None:
                parse = parse1 if lang == "lc1" else parse2
                try:
                    if alpha_eq(parse(_normalize(have)), parse(_normalize(want))):
                        alpha_hits += 1
                except Exception:  # noqa: BLE001 - unparsable predictions never count
                    pass
    matches = sum(1 for _, ok in verdicts if ok)
    return MatchReport(
        score=matches / len(gold),
        total=len(gold),
        matches=matches,
        verdicts=tuple(verdicts),
        alpha_eq_mismatch_share=alpha_hits / mismatches if mismatches else 0.0,
    )


def render_task_table(cells: dict[tuple[str, str, str], Optional[float]]) -> str:
    """Exact-match table in the (strategy x renaming x calculus) layout."""
    lines = [
        "Target  " + "".join(f"{h:<20}" for h in ("VR", "NVR")).rstrip(),
        "        " + "".join(f"{h:<10}" for h in ("LC1", "LC2", "LC1", "LC2")).rstrip(),
    ]
    for strategy in ("whnf", "dnf"):
        row = f"{strategy.upper():<8}"
        for renaming in ("vr", "nvr"):
            for lang in ("lc1", "lc2"):
                value = cells.get((lang, strategy, renaming))
                row += f"{value:<10.3f}" if value is not None else f"{'---':<10}"
        lines.append(row.rstrip())
    return "\n".join(lines) + "\n"


def score_report(
    report: MatchReport,
    task: tuple[str, str, str],
    length_pairs_in: Sequence[tuple[int, bool]],
    length_pairs_out: Sequence[tuple[int, bool]],
    k: int = 10,
):
    """(text report, {csv name: csv text}) for one scored task."""
    lang, strategy, renaming = task
    lines = [
        f"task = {lang},{strategy},{renaming}",
        f"examples = {report.total}",
        f"matches = {report.matches}",
        f"exact_match = {report.score:.4f}",
        f"alpha_eq_mismatch_share = {report.alpha_eq_mismatch_share:.4f}",
        "",
        render_task_table({task: report.score}),
    ]
    sidecars = {}
    for label, pairs in (("input", length_pairs_in), ("output", length_pairs_out)):
        if len(pairs) >= k:
            rows = ["mean_length,exact_match,count"]
            rows += [
                f"{mean:.2f},{acc:.4f},{size}"
                for mean, acc, size in length_buckets(pairs, k)
            ]
            sidecars[f"length_{label}.csv"] = "\n".join(rows) + "\n"
    return "\n".join(lines), sidecars
