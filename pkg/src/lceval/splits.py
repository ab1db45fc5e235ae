"""The four train/test partition constructions and their manifest format.

A manifest is a line-delimited file: a JSON header carrying the construction
kind, seed, and parameters, then one line per membership.  Random and
type-based splits list ids (`train<TAB>id` / `test<TAB>id`).  The
reduction-step split gates each calculus by its own step count, so its lines
are tagged per calculus (`train_lc1<TAB>id`, ...).  The composition split
synthesizes new records, embedded as JSON on `test` lines together with the
ids of the two source terms.
"""

from __future__ import annotations

import json
import random
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .church import church_encode
from .fileio import atomic_write
from .pipeline import (
    ExampleRecord,
    FIELD_ORDER,
    STRING_FIELDS,
    TokenCounter,
    count_tokens,
    record_to_line,
    target_field,
)
from .reducer import dnf, rename_vr, whnf
from .syntax import parse2, print1, print2
from .terms import App
from .types import TyArrow, parse_type, render_type, type_frequency_order


class SplitError(Exception):
    pass


@dataclass
class SplitManifest:
    kind: str  # "random" | "by-type" | "by-composition" | "by-steps"
    seed: int
    parameters: dict
    train_ids: list[int] = field(default_factory=list)
    test_ids: list[int] = field(default_factory=list)
    # by-steps only: per-calculus views, {"lc1": {"train": [...], "test": [...]}, ...}
    lang_views: Optional[dict[str, dict[str, list[int]]]] = None
    # by-composition only: synthesized records plus their source ids
    test_records: Optional[list[ExampleRecord]] = None
    provenance: Optional[list[tuple[int, int]]] = None

    def view(self, lang: str) -> tuple[list[int], list[int]]:
        """(train ids, test ids) as seen by one calculus' task."""
        if self.lang_views is not None:
            v = self.lang_views[lang]
            return v["train"], v["test"]
        return self.train_ids, self.test_ids


def write_manifest(manifest: SplitManifest, path: str) -> None:
    header = {"kind": manifest.kind, "seed": manifest.seed, "parameters": manifest.parameters}
    lines = [json.dumps(header, separators=(",", ":"))]
    if manifest.lang_views is not None:
        for lang in sorted(manifest.lang_views):
            for side in ("train", "test"):
                lines += [f"{side}_{lang}\t{i}" for i in manifest.lang_views[lang][side]]
    else:
        lines += [f"train\t{i}" for i in manifest.train_ids]
        if manifest.test_records is not None:
            prov = manifest.provenance or [(-1, -1)] * len(manifest.test_records)
            for rec, (e1, e2) in zip(manifest.test_records, prov):
                obj = json.loads(record_to_line(rec))
                obj["src1_id"], obj["src2_id"] = e1, e2
                lines.append("test\t" + json.dumps(obj, separators=(",", ":")))
        else:
            lines += [f"test\t{i}" for i in manifest.test_ids]
    atomic_write(path, "\n".join(lines) + "\n")


def read_manifest(path: str) -> SplitManifest:
    with open(path, encoding="utf-8") as fh:
        lines = [ln.rstrip("\n") for ln in fh if ln.strip()]
    if not lines:
        raise SplitError(f"{path}: empty manifest")
    header = json.loads(lines[0])
    manifest = SplitManifest(header["kind"], header["seed"], header["parameters"])
    for ln in lines[1:]:
        tag, _, payload = ln.partition("\t")
        if tag == "train":
            manifest.train_ids.append(int(payload))
        elif tag == "test":
            if payload.startswith("{"):
                obj = json.loads(payload)
                e1, e2 = obj.pop("src1_id", -1), obj.pop("src2_id", -1)
                rec = ExampleRecord(**{k: obj[k] for k in FIELD_ORDER})
                manifest.test_records = (manifest.test_records or []) + [rec]
                manifest.provenance = (manifest.provenance or []) + [(e1, e2)]
                manifest.test_ids.append(rec.id)
            else:
                manifest.test_ids.append(int(payload))
        elif tag.startswith(("train_", "test_")):
            side, lang = tag.split("_", 1)
            manifest.lang_views = manifest.lang_views or {
                "lc1": {"train": [], "test": []},
                "lc2": {"train": [], "test": []},
            }
            manifest.lang_views[lang][side].append(int(payload))
        else:
            raise SplitError(f"{path}: bad manifest line {ln!r}")
    return manifest


def _check_sizes(available: int, n_train: int, n_test: int) -> None:
    if n_train < 1 or n_test < 1:
        raise SplitError("split sides must be nonempty")
    if n_train + n_test > available:
        raise SplitError(f"corpus too small: need {n_train + n_test}, have {available}")


def random_split(
    records: Sequence[ExampleRecord],
    n_train: int = 90_000,
    n_test: int = 500,
    seed: int = 0,
) -> SplitManifest:
    """Uniform disjoint sample without replacement."""
    _check_sizes(len(records), n_train, n_test)
    rng = random.Random(seed)
    sampled = rng.sample([r.id for r in records], n_train + n_test)
    return SplitManifest(
        kind="random",
        seed=seed,
        parameters={"n_train": n_train, "n_test": n_test},
        train_ids=sorted(sampled[:n_train]),
        test_ids=sorted(sampled[n_train:]),
    )


def split_by_type(
    records: Sequence[ExampleRecord],
    train_frac: float = 0.8,
    n_train: int = 80_000,
    n_test: int = 500,
    seed: int = 0,
) -> SplitManifest:
    """Most common types covering train_frac of the corpus go to train only.

    Types are ranked by frequency and added greedily until the cumulative
    count first reaches the fraction; the boundary type lands in train.  The
    remaining (rarer) types are test-only, so no type crosses sides.
    """
    if not 0 < train_frac < 1:
        raise SplitError("train_frac must be in (0, 1)")
    ranked = type_frequency_order(parse_type(r.ty) for r in records)
    threshold = train_frac * len(records)
    train_types: set[str] = set()
    cum = 0
    for ty, count in ranked:
        if cum >= threshold:
            break
        if count > threshold and not train_types:
            warnings.warn(
                f"type {render_type(ty)} alone exceeds the {train_frac:.0%} boundary; "
                "keeping it in train"
            )
        train_types.add(render_type(ty))
        cum += count
    train_pool = [r.id for r in records if r.ty in train_types]
    test_pool = [r.id for r in records if r.ty not in train_types]
    if not test_pool:
        raise SplitError("no types left for the test side; lower train_frac")
    rng = random.Random(seed)
    if n_train < len(train_pool):
        train_pool = rng.sample(train_pool, n_train)
    if n_test < len(test_pool):
        test_pool = rng.sample(test_pool, n_test)
    return SplitManifest(
        kind="by-type",
        seed=seed,
        parameters={
            "train_frac": train_frac,
            "n_train": n_train,
            "n_test": n_test,
            "train_types": sorted(train_types),
        },
        train_ids=sorted(train_pool),
        test_ids=sorted(test_pool),
    )


def split_by_steps(
    records: Sequence[ExampleRecord],
    strategy: str = "whnf",
    train_max: Optional[int] = None,
    test_min: Optional[int] = None,
    test_max: Optional[int] = None,
    seed: int = 0,
) -> SplitManifest:
    """Few-step examples train, many-step examples test, per calculus.

    Each calculus' view is gated by its own step count.  Within each side the
    two views are subsampled to identical per-step-count histograms
    (count(k) = min over the calculi), so the proportion of examples per step
    count matches across calculi exactly.
    """
    defaults = {"whnf": (6, 7, 12), "dnf": (8, 9, 32)}
    if strategy not in defaults:
        raise SplitError(f"unknown strategy {strategy!r}")
    d_train, d_min, d_max = defaults[strategy]
    train_max = d_train if train_max is None else train_max
    test_min = d_min if test_min is None else test_min
    test_max = d_max if test_max is None else test_max
    if not train_max < test_min <= test_max:
        raise SplitError("need train_max < test_min <= test_max")

    rng = random.Random(seed)
    by_step: dict[str, dict[str, dict[int, list[int]]]] = {}
    for lang in ("lc1", "lc2"):
        buckets: dict[int, list[int]] = {}
        for r in records:
            steps = getattr(r, f"steps_{strategy}_{lang}")
            buckets.setdefault(steps, []).append(r.id)
        by_step[lang] = {
            "train": {k: v for k, v in buckets.items() if k <= train_max},
            "test": {k: v for k, v in buckets.items() if test_min <= k <= test_max},
        }

    views = {"lc1": {"train": [], "test": []}, "lc2": {"train": [], "test": []}}
    for side in ("train", "test"):
        counts = {}
        keys = set(by_step["lc1"][side]) | set(by_step["lc2"][side])
        for k in sorted(keys):
            counts[k] = min(
                len(by_step["lc1"][side].get(k, ())), len(by_step["lc2"][side].get(k, ()))
            )
        if sum(counts.values()) == 0:
            raise SplitError(f"empty {side} band for strategy {strategy}")
        for lang in ("lc1", "lc2"):
            chosen: list[int] = []
            for k in sorted(counts):
                if counts[k]:
                    chosen += rng.sample(sorted(by_step[lang][side][k]), counts[k])
            views[lang][side] = sorted(chosen)

    return SplitManifest(
        kind="by-steps",
        seed=seed,
        parameters={
            "strategy": strategy,
            "train_max": train_max,
            "test_min": test_min,
            "test_max": test_max,
        },
        lang_views=views,
    )


def compose_split(
    train_records: Sequence[ExampleRecord],
    max_uses_per_term: int = 3,
    n_out: int = 500,
    seed: int = 0,
    tc: Optional[TokenCounter] = None,
    max_input_tokens: int = 512,
    max_output_tokens: int = 256,
    fuel: int = 10_000,
) -> tuple[list[ExampleRecord], list[tuple[int, int]]]:
    """New examples built by applying one training term to another.

    Repeatedly samples e1 : a -> b and e2 : a from the training set, forms
    the application, and keeps it when it is new, within the token caps, and
    neither source has been used more than max_uses_per_term times.  Returns
    the synthesized records plus (e1 id, e2 id) provenance.
    """
    tc = tc or TokenCounter()
    count: Callable[[str], int] = lambda s: count_tokens(s, tc)
    rng = random.Random(seed)

    by_type: dict[str, list[ExampleRecord]] = {}
    for r in train_records:
        by_type.setdefault(r.ty, []).append(r)
    arrows = [r for r in train_records if isinstance(parse_type(r.ty), TyArrow)]
    if not arrows:
        raise SplitError("no arrow-typed terms in the training set")

    usage: dict[int, int] = {}
    train_strings = {r.lc2_src for r in train_records}
    out_strings: set[str] = set()
    out_records: list[ExampleRecord] = []
    provenance: list[tuple[int, int]] = []
    attempts_left = 1000 * n_out

    def usable(r: ExampleRecord) -> bool:
        return usage.get(r.id, 0) < max_uses_per_term

    while len(out_records) < n_out and attempts_left > 0:
        attempts_left -= 1
        e1 = rng.choice(arrows)
        if not usable(e1):
            continue
        ty1 = parse_type(e1.ty)
        assert isinstance(ty1, TyArrow)
        candidates = by_type.get(render_type(ty1.dom))
        if not candidates:
            continue
        e2 = rng.choice(candidates)
        if not usable(e2) or (e1.id == e2.id and usage.get(e1.id, 0) + 2 > max_uses_per_term):
            continue
        t2 = rename_vr(App(parse2(e1.lc2_src), parse2(e2.lc2_src)))
        lc2_src = print2(t2)
        if lc2_src in train_strings or lc2_src in out_strings:
            continue
        t1 = church_encode(t2)
        lc1_src = print1(t1)
        if count(lc1_src) > max_input_tokens or count(lc2_src) > max_input_tokens:
            continue
        targets: dict[str, str] = {}
        steps: dict[str, int] = {}
        for lang, term in (("lc1", t1), ("lc2", t2)):
            for strategy, reducer in (("whnf", whnf), ("dnf", dnf)):
                nf, nsteps = reducer(term, fuel)
                steps[f"{strategy}_{lang}"] = nsteps
                targets[target_field(lang, strategy, "nvr")] = print2(nf)
                targets[target_field(lang, strategy, "vr")] = print2(rename_vr(nf))
        if any(count(s) > max_output_tokens for s in targets.values()):
            continue
        strings = {"lc1_src": lc1_src, "lc2_src": lc2_src, **targets}
        rec = ExampleRecord(
            id=len(out_records),
            ty=render_type(ty1.cod),
            lc1_src=lc1_src,
            lc2_src=lc2_src,
            **targets,
            **{f"steps_{k}": v for k, v in steps.items()},
            **{f"len_{name}": count(strings[name]) for name in STRING_FIELDS},
        )
        out_strings.add(lc2_src)
        usage[e1.id] = usage.get(e1.id, 0) + 1
        usage[e2.id] = usage.get(e2.id, 0) + 1
        out_records.append(rec)
        provenance.append((e1.id, e2.id))
    if len(out_records) < n_out:
        warnings.warn(
            f"composition exhausted after budget: produced {len(out_records)} of {n_out}"
        )
    return out_records, provenance


def compose_split_manifest(
    train_records: Sequence[ExampleRecord],
    train_ids: Sequence[int],
    max_uses_per_term: int = 3,
    n_out: int = 500,
    seed: int = 0,
    tc: Optional[TokenCounter] = None,
) -> SplitManifest:
    records, provenance = compose_split(
        train_records, max_uses_per_term=max_uses_per_term, n_out=n_out, seed=seed, tc=tc
    )
    return SplitManifest(
        kind="by-composition",
        seed=seed,
        parameters={"max_uses_per_term": max_uses_per_term, "n_out": n_out},
        train_ids=list(train_ids),
        test_ids=[r.id for r in records],
        test_records=records,
        provenance=provenance,
    )


def check_manifest(manifest: SplitManifest, corpus_ids: set[int]) -> list[str]:
    """Structural invariants every manifest must satisfy; list of violations."""
    problems = []

    def check_view(label: str, train: Sequence[int], test: Sequence[int], test_embedded: bool):
        if not train or not test:
            problems.append(f"{label}: empty side")
        if set(train) & set(test) and not test_embedded:
            problems.append(f"{label}: train and test overlap")
        unknown = (set(train) | (set() if test_embedded else set(test))) - corpus_ids
        if unknown:
            problems.append(f"{label}: ids not in corpus: {sorted(unknown)[:5]}...")

    if manifest.lang_views is not None:
        for lang, v in manifest.lang_views.items():
            check_view(lang, v["train"], v["test"], test_embedded=False)
    else:
        check_view("split", manifest.train_ids, manifest.test_ids,
                   test_embedded=manifest.test_records is not None)
    return problems
