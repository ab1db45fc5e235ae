"""Record assembly, token counting, corpus persistence, and corpus statistics.

A corpus is a UTF-8 line-delimited file of flat JSON objects, one record per
line, ids ascending from 0.  Records carry both calculi's source strings, all
eight reduction targets (strategy x renaming per calculus), the four step
counts, the generation-time type, and a token length per string field.

Generation is deterministic for a given config: attempt i draws from its own
RNG stream, and candidates are committed (deduplicated and assigned ids) in
attempt order, so the output is byte-identical no matter how many workers
computed the drafts.
"""

from __future__ import annotations

import json
import multiprocessing
import statistics
from dataclasses import dataclass, fields
from typing import Callable, Iterable, Optional, Sequence

from .church import church_encode
from .fileio import atomic_write
from .generator import Draft, GenConfig, Rejected, attempt_rng, generate_example
from .reducer import dnf, rename_vr, whnf
from .syntax import parse1, parse2, print1, print2
from .types import render_type

STRING_FIELDS = (
    "lc1_src",
    "lc2_src",
    "lc1_whnf_vr",
    "lc1_whnf_nvr",
    "lc1_dnf_vr",
    "lc1_dnf_nvr",
    "lc2_whnf_vr",
    "lc2_whnf_nvr",
    "lc2_dnf_vr",
    "lc2_dnf_nvr",
)

TASKS = tuple(
    (lang, strategy, renaming)
    for lang in ("lc1", "lc2")
    for strategy in ("whnf", "dnf")
    for renaming in ("vr", "nvr")
)


def target_field(lang: str, strategy: str, renaming: str) -> str:
    return f"{lang}_{strategy}_{renaming}"


def source_field(lang: str) -> str:
    return f"{lang}_src"


@dataclass(frozen=True)
class ExampleRecord:
    id: int
    ty: str
    lc1_src: str
    lc2_src: str
    lc1_whnf_vr: str
    lc1_whnf_nvr: str
    lc1_dnf_vr: str
    lc1_dnf_nvr: str
    lc2_whnf_vr: str
    lc2_whnf_nvr: str
    lc2_dnf_vr: str
    lc2_dnf_nvr: str
    steps_whnf_lc1: int
    steps_dnf_lc1: int
    steps_whnf_lc2: int
    steps_dnf_lc2: int
    len_lc1_src: int
    len_lc2_src: int
    len_lc1_whnf_vr: int
    len_lc1_whnf_nvr: int
    len_lc1_dnf_vr: int
    len_lc1_dnf_nvr: int
    len_lc2_whnf_vr: int
    len_lc2_whnf_nvr: int
    len_lc2_dnf_vr: int
    len_lc2_dnf_nvr: int


FIELD_ORDER = tuple(f.name for f in fields(ExampleRecord))


def record_to_line(rec: ExampleRecord) -> str:
    obj = {name: getattr(rec, name) for name in FIELD_ORDER}
    return json.dumps(obj, separators=(",", ":"))


def record_from_line(line: str) -> ExampleRecord:
    obj = json.loads(line)
    return ExampleRecord(**{name: obj[name] for name in FIELD_ORDER})


def write_corpus(records: Sequence[ExampleRecord], path: str) -> None:
    atomic_write(path, "".join(record_to_line(r) + "\n" for r in records))


def read_corpus(path: str) -> list[ExampleRecord]:
    records = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                records.append(record_from_line(line))
    return records


# ---------------------------------------------------------------------------
# token counting


@dataclass(frozen=True)
class TokenCounter:
    """Deterministic token counting: whitespace lexemes, bytes, or a vocab file."""

    mode: str = "whitespace"
    vocab: Optional[tuple[str, ...]] = None

    def __post_init__(self):
        if self.mode not in ("whitespace", "char", "external"):
            raise ValueError(f"unknown token counter mode: {self.mode!r}")
        if self.mode == "external" and not self.vocab:
            raise ValueError("external mode needs a vocabulary")


def load_token_counter(mode: str, vocab_path: Optional[str] = None) -> TokenCounter:
    if mode != "external":
        return TokenCounter(mode)
    if vocab_path is None:
        raise ValueError("external token counter needs --vocab")
    with open(vocab_path, encoding="utf-8") as fh:
        vocab = tuple(line.rstrip("\n") for line in fh if line.rstrip("\n"))
    return TokenCounter("external", vocab)


def count_tokens(s: str, tc: TokenCounter) -> int:
    if tc.mode == "whitespace":
        return len(s.split())
    if tc.mode == "char":
        return len(s.encode("utf-8"))
    # external: greedy longest match, unknown bytes count one token each
    assert tc.vocab is not None
    by_len = sorted({len(v) for v in tc.vocab}, reverse=True)
    vocab = set(tc.vocab)
    n, i, count = len(s), 0, 0
    while i < n:
        for ln in by_len:
            if s[i : i + ln] in vocab:
                i += ln
                break
        else:
            i += 1
        count += 1
    return count


# ---------------------------------------------------------------------------
# corpus construction


class PipelineError(Exception):
    pass


def _draft_to_record(d: Draft, rec_id: int, count: Callable[[str], int]) -> ExampleRecord:
    strings = {"lc1_src": d.lc1_src, "lc2_src": d.lc2_src, **d.targets}
    kwargs = dict(
        id=rec_id,
        ty=render_type(d.ty),
        **{target_field(*t): d.targets[target_field(*t)] for t in TASKS},
        lc1_src=d.lc1_src,
        lc2_src=d.lc2_src,
    )
    for key, val in d.steps.items():
        kwargs[f"steps_{key}"] = val
    for name in STRING_FIELDS:
        kwargs[f"len_{name}"] = count(strings[name])
    return ExampleRecord(**kwargs)


@dataclass
class CorpusStats:
    n: int
    attempts: int
    rejected_generation_failure: int
    rejected_too_long: int
    rejected_duplicate: int

    @property
    def acceptance_rate(self) -> float:
        return self.n / self.attempts if self.attempts else 0.0


_WORKER_CFG: Optional[GenConfig] = None
_WORKER_TC: Optional[TokenCounter] = None


def _init_worker(cfg: GenConfig, tc: TokenCounter) -> None:
    global _WORKER_CFG, _WORKER_TC
    _WORKER_CFG = cfg
    _WORKER_TC = tc


def _run_attempt(index: int):
    assert _WORKER_CFG is not None and _WORKER_TC is not None
    rng = attempt_rng(_WORKER_CFG.seed, index)
    return generate_example(_WORKER_CFG, rng, lambda s: count_tokens(s, _WORKER_TC))


MIN_ACCEPTANCE_RATE = 0.01


def generate_corpus(
    cfg: GenConfig,
    n: int,
    tc: Optional[TokenCounter] = None,
    workers: int = 1,
) -> tuple[list[ExampleRecord], CorpusStats]:
    """Exactly n unique accepted records in commit order, plus run statistics."""
    if n < 1:
        raise ValueError("n must be >= 1")
    tc = tc or TokenCounter()
    count = lambda s: count_tokens(s, tc)
    seen: set[str] = set()
    records: list[ExampleRecord] = []
    rejected = {"generation_failure": 0, "too_long": 0, "duplicate": 0}
    attempts = 0

    def commit(result) -> None:
        if isinstance(result, Rejected):
            rejected[result.reason] += 1
        elif result.lc2_src in seen:
            rejected["duplicate"] += 1
        else:
            seen.add(result.lc2_src)
            records.append(_draft_to_record(result, len(records), count))

    def guard() -> None:
        if attempts >= max(1000, 4 * n) and len(records) / attempts < MIN_ACCEPTANCE_RATE:
            raise PipelineError(
                f"acceptance rate {len(records)}/{attempts} below "
                f"{MIN_ACCEPTANCE_RATE:.0%}; check the generation config"
            )

    if workers <= 1:
        while len(records) < n:
            rng = attempt_rng(cfg.seed, attempts)
            commit(generate_example(cfg, rng, count, seen))
            attempts += 1
            guard()
    else:
        with multiprocessing.Pool(workers, initializer=_init_worker, initargs=(cfg, tc)) as pool:
            while len(records) < n:
                # Batch sizing: aim past the target based on the observed rate.
                rate = len(records) / attempts if attempts else 0.5
                batch = max(workers * 8, int((n - len(records)) / max(rate, 0.05) * 1.2))
                indices = range(attempts, attempts + batch)
                for result in pool.imap(_run_attempt, indices, chunksize=32):
                    commit(result)
                    attempts += 1
                    guard()
                    if len(records) >= n:
                        break
    stats = CorpusStats(
        n=len(records),
        attempts=attempts,
        rejected_generation_failure=rejected["generation_failure"],
        rejected_too_long=rejected["too_long"],
        rejected_duplicate=rejected["duplicate"],
    )
    return records, stats


# ---------------------------------------------------------------------------
# statistics and reports


def _median(values: Iterable[int]) -> float:
    vals = list(values)
    return statistics.median(vals) if vals else 0.0


def _histogram(values: Iterable[int]) -> dict[int, int]:
    hist: dict[int, int] = {}
    for v in values:
        hist[v] = hist.get(v, 0) + 1
    return dict(sorted(hist.items()))


def corpus_report(records: Sequence[ExampleRecord], stats: Optional[CorpusStats] = None):
    """(key-value text report, {csv name: csv text}) for a corpus."""
    lines = []
    if stats is not None:
        lines += [
            f"records = {stats.n}",
            f"attempts = {stats.attempts}",
            f"acceptance_rate = {stats.acceptance_rate:.4f}",
            f"rejected_generation_failure = {stats.rejected_generation_failure}",
            f"rejected_too_long = {stats.rejected_too_long}",
            f"rejected_duplicate = {stats.rejected_duplicate}",
        ]
    else:
        lines.append(f"records = {len(records)}")
    for key in ("whnf_lc1", "whnf_lc2", "dnf_lc1", "dnf_lc2"):
        med = _median(getattr(r, f"steps_{key}") for r in records)
        lines.append(f"median_steps_{key} = {med:g}")
    mean_len = {
        name: statistics.mean(getattr(r, f"len_{name}") for r in records) if records else 0.0
        for name in STRING_FIELDS
    }
    for name in STRING_FIELDS:
        lines.append(f"mean_len_{name} = {mean_len[name]:.2f}")
    if records:
        lines.append(f"len_ratio_src = {mean_len['lc1_src'] / mean_len['lc2_src']:.3f}")
        lines.append(
            f"len_ratio_dnf_vr = {mean_len['lc1_dnf_vr'] / mean_len['lc2_dnf_vr']:.3f}"
        )

    type_counts: dict[str, int] = {}
    for r in records:
        type_counts[r.ty] = type_counts.get(r.ty, 0) + 1
    types_csv = "type,count\n" + "".join(
        f"\"{ty}\",{c}\n" for ty, c in sorted(type_counts.items(), key=lambda kv: (-kv[1], kv[0]))
    )

    steps_rows = ["language,strategy,steps,count"]
    for lang in ("lc1", "lc2"):
        for strategy in ("whnf", "dnf"):
            hist = _histogram(getattr(r, f"steps_{strategy}_{lang}") for r in records)
            steps_rows += [f"{lang},{strategy},{k},{v}" for k, v in hist.items()]
    steps_csv = "\n".join(steps_rows) + "\n"

    len_rows = ["field,tokens,count"]
    for name in STRING_FIELDS:
        hist = _histogram(getattr(r, f"len_{name}") for r in records)
        len_rows += [f"{name},{k},{v}" for k, v in hist.items()]
    lengths_csv = "\n".join(len_rows) + "\n"

    report = "\n".join(lines) + "\n"
    return report, {"types.csv": types_csv, "steps.csv": steps_csv, "lengths.csv": lengths_csv}


def build_corpus(
    cfg: GenConfig,
    n: int,
    out_path: str,
    tc: Optional[TokenCounter] = None,
    workers: int = 1,
) -> CorpusStats:
    """Generate, persist, and report on a corpus of exactly n records."""
    records, stats = generate_corpus(cfg, n, tc, workers)
    write_corpus(records, out_path)
    report, sidecars = corpus_report(records, stats)
    atomic_write(out_path + ".stats.txt", report)
    for name, text in sidecars.items():
        atomic_write(f"{out_path}.{name}", text)
    return stats


# ---------------------------------------------------------------------------
# self-consistency audit


def audit_corpus(records: Sequence[ExampleRecord], tc: Optional[TokenCounter] = None) -> list[str]:
    """Recompute every derived field from the stored sources; list violations."""
    tc = tc or TokenCounter()
    problems = []
    seen: set[str] = set()
    for pos, rec in enumerate(records):
        where = f"record {rec.id}"
        if rec.id != pos:
            problems.append(f"{where}: id out of order (position {pos})")
        if rec.lc2_src in seen:
            problems.append(f"{where}: duplicate lc2_src")
        seen.add(rec.lc2_src)
        try:
            t2 = parse2(rec.lc2_src)
            t1 = parse1(rec.lc1_src)
        except Exception as exc:  # noqa: BLE001 - reported, not raised
            problems.append(f"{where}: source does not parse: {exc}")
            continue
        if print2(t2) != rec.lc2_src or print1(t1) != rec.lc1_src:
            problems.append(f"{where}: source is not in canonical form")
            continue
        if print1(church_encode(t2)) != rec.lc1_src:
            problems.append(f"{where}: lc1_src is not the encoding of lc2_src")
        for lang, term in (("lc1", t1), ("lc2", t2)):
            for strategy, reducer in (("whnf", whnf), ("dnf", dnf)):
                nf, steps = reducer(term)
                if steps != getattr(rec, f"steps_{strategy}_{lang}"):
                    problems.append(f"{where}: steps_{strategy}_{lang} mismatch")
                if print2(nf) != getattr(rec, target_field(lang, strategy, "nvr")):
                    problems.append(f"{where}: {target_field(lang, strategy, 'nvr')} mismatch")
                if print2(rename_vr(nf)) != getattr(rec, target_field(lang, strategy, "vr")):
                    problems.append(f"{where}: {target_field(lang, strategy, 'vr')} mismatch")
        if rec.steps_whnf_lc1 > rec.steps_dnf_lc1 or rec.steps_whnf_lc2 > rec.steps_dnf_lc2:
            problems.append(f"{where}: WHNF steps exceed DNF steps")
        for name in STRING_FIELDS:
            if count_tokens(getattr(rec, name), tc) != getattr(rec, f"len_{name}"):
                problems.append(f"{where}: len_{name} mismatch")
        for name in ("lc1_src", "lc2_src"):
            if getattr(rec, f"len_{name}") > 512:
                problems.append(f"{where}: {name} exceeds 512 tokens")
        for t in TASKS:
            if getattr(rec, f"len_{target_field(*t)}") > 256:
                problems.append(f"{where}: {target_field(*t)} exceeds 256 tokens")
    return problems


# ---------------------------------------------------------------------------
# length-bucketed accuracy (figure reproduction data)


def length_buckets(
    pairs: Sequence[tuple[int, bool]],
    k: int,
) -> list[tuple[float, float, int]]:
    """Split (length, correct) pairs into k equal-population buckets by length.

    Returns (mean length, exact match, size) per bucket, lengths nondecreasing.
    """
    if k < 2:
        raise ValueError("need at least 2 buckets")
    if not pairs:
        return []
    ordered = sorted(pairs, key=lambda p: p[0])
    n = len(ordered)
    out = []
    start = 0
    for i in range(k):
        size = n // k + (1 if i < n % k else 0)
        if size == 0:
            continue
        chunk = ordered[start : start + size]
        start += size
        mean_len = sum(p[0] for p in chunk) / size
        acc = sum(1 for p in chunk if p[1]) / size
        out.append((mean_len, acc, size))
    return out
