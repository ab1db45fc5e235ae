"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with `pytest tests/test_acceptance.py -v -s`.  The heavyweight fixtures
(a 100k-record default corpus) are session-scoped and shared, so the whole
suite stays well inside its time budgets on a small machine.
"""

import os
import statistics
import subprocess
import sys
import tempfile
from pathlib import Path

import pytest

from fixtures import GOLDEN_ROWS
from oracles import enumerate_closed, normalize_oracle, to_debruijn
from lceval.church import church_encode
from lceval.generator import GenConfig
from lceval.metrics import exact_match
from lceval.pipeline import generate_corpus
from lceval.reducer import dnf, reduce_term, rename_vr, whnf
from lceval.splits import compose_split, random_split, split_by_steps, split_by_type
from lceval.syntax import parse1, parse2, print1, print2
from lceval.types import TyArrow, parse_type


def ok(name: str, detail: str = "") -> None:
    suffix = f" ({detail})" if detail else ""
    print(f"ACCEPTANCE PASS: {name}{suffix}")


@pytest.fixture(scope="session")
def default_corpus():
    """The default-config corpus the distribution criteria are stated over."""
    records, _ = generate_corpus(
        GenConfig(seed=0), 100_000, workers=max(2, os.cpu_count() or 1)
    )
    return records


def test_golden_fixtures():
    for i, (lc1, lc1_dnf, lc2, lc2_dnf) in enumerate(GOLDEN_ROWS, 1):
        assert print1(rename_vr(dnf(parse1(lc1))[0])) == lc1_dnf, f"row {i} (a)"
        assert print2(rename_vr(dnf(parse2(lc2))[0])) == lc2_dnf, f"row {i} (b)"
        for s, parse, pr in (
            (lc1, parse1, print1),
            (lc1_dnf, parse1, print1),
            (lc2, parse2, print2),
            (lc2_dnf, parse2, print2),
        ):
            assert pr(parse(s)) == s, f"row {i} (c)"
    ok("golden fixtures", "5 rows: DNF+VR and round trips byte-exact")


def test_whnf_canonical_examples():
    redex = parse1(r"(\x0 -> x0) (\x1 -> x1)")
    nvr = reduce_term(redex, "whnf", "nvr")
    vr = reduce_term(redex, "whnf", "vr")
    assert print1(nvr.term) == r"\x1 -> x1" and nvr.steps == 1
    assert print1(vr.term) == r"\x0 -> x0" and vr.steps == 1
    fixed = parse1(r"\x1 -> (\x0 -> x0) x1")
    res = reduce_term(fixed, "whnf", "nvr")
    assert res.term == fixed and res.steps == 0
    for t in (redex, fixed):
        assert print1(reduce_term(t, "dnf", "vr").term) == r"\x0 -> x0"
    ok("WHNF canonical examples", "redex, fixed point, shared DNF")


def test_oracle_equivalence(default_corpus):
    small = enumerate_closed(7)
    for t in small:
        nf, steps = dnf(t)
        oracle_nf, oracle_steps = normalize_oracle(t)
        assert steps == oracle_steps and to_debruijn(nf) == oracle_nf
    for rec in default_corpus[:10_000]:
        t = parse1(rec.lc1_src)
        nf, steps = dnf(t)
        oracle_nf, oracle_steps = normalize_oracle(t)
        assert steps == oracle_steps, f"record {rec.id}"
        assert to_debruijn(nf) == oracle_nf, f"record {rec.id}"
    ok("oracle equivalence", f"{len(small)} enumerated + 10000 generated terms")


def test_church_commutation(default_corpus):
    for rec in default_corpus[:10_000]:
        lhs = rec.lc1_dnf_vr  # VR-DNF of the encoded source, by construction
        encoded_dnf = church_encode(parse2(rec.lc2_dnf_nvr))
        rhs = print1(rename_vr(dnf(encoded_dnf)[0]))
        assert lhs == rhs, f"record {rec.id}"
    ok("church commutation", "10000 generated terms")


def test_step_monotonicity(default_corpus):
    sample = default_corpus[:10_000]
    assert all(r.steps_whnf_lc1 <= r.steps_dnf_lc1 for r in sample)
    assert all(r.steps_whnf_lc2 <= r.steps_dnf_lc2 for r in sample)
    ok("step monotonicity", "10000 records per language")


def test_median_step_ordering(default_corpus):
    med = {
        key: statistics.median(getattr(r, f"steps_{key}") for r in default_corpus)
        for key in ("whnf_lc1", "whnf_lc2", "dnf_lc1", "dnf_lc2")
    }
    assert med["whnf_lc1"] >= med["whnf_lc2"]
    assert med["dnf_lc1"] >= med["dnf_lc2"]
    ok(
        "median step ordering",
        f"whnf {med['whnf_lc1']:g}/{med['whnf_lc2']:g} vs target 4/3, "
        f"dnf {med['dnf_lc1']:g}/{med['dnf_lc2']:g} vs target 6/4",
    )


def test_length_ratio(default_corpus):
    mean = lambda field: statistics.mean(getattr(r, field) for r in default_corpus)
    src_ratio = mean("len_lc1_src") / mean("len_lc2_src")
    dnf_ratio = mean("len_lc1_dnf_vr") / mean("len_lc2_dnf_vr")
    assert 1.8 <= src_ratio <= 3.5
    assert 1.8 <= dnf_ratio <= 3.5
    ok("length ratio", f"src {src_ratio:.2f}, dnf {dnf_ratio:.2f}, band [1.8, 3.5] around 2.5")


FOOTNOTE_TYPES = ["Bool", "Unit", "[Bool]", "[Unit]", "Unit -> Bool", "Bool -> Unit"]


def test_type_split_construction(default_corpus):
    manifest = split_by_type(default_corpus, 0.8, n_train=80_000, n_test=500, seed=0)
    by_id = {r.id: r for r in default_corpus}
    train_tys = {by_id[i].ty for i in manifest.train_ids}
    test_tys = {by_id[i].ty for i in manifest.test_ids}
    assert not train_tys & test_tys
    covered = sum(1 for r in default_corpus if r.ty in manifest.parameters["train_types"])
    assert covered >= 0.8 * len(default_corpus)
    missing = [ty for ty in FOOTNOTE_TYPES if ty not in manifest.parameters["train_types"]]
    assert not missing, f"footnote types not in train: {missing}"
    ok(
        "type-split construction",
        f"disjoint, boundary {covered / len(default_corpus):.1%}, six footnote types in train",
    )


def test_composition_split(default_corpus):
    base = random_split(default_corpus, 90_000, 500, seed=0)
    by_id = {r.id: r for r in default_corpus}
    train = [by_id[i] for i in base.train_ids]
    records, provenance = compose_split(train, max_uses_per_term=3, n_out=500, seed=0)
    assert len(records) == 500
    train_strings = {r.lc2_src for r in train}
    uses: dict[int, int] = {}
    for rec, (a, b) in zip(records, provenance):
        ty1, ty2 = parse_type(by_id[a].ty), parse_type(by_id[b].ty)
        assert isinstance(ty1, TyArrow) and ty1.dom == ty2  # well-typed by construction
        assert ty1.cod == parse_type(rec.ty)
        assert rec.lc2_src not in train_strings
        assert rec.len_lc1_src <= 512 and rec.len_lc2_src <= 512
        for field in (
            "len_lc1_whnf_vr",
            "len_lc1_whnf_nvr",
            "len_lc1_dnf_vr",
            "len_lc1_dnf_nvr",
            "len_lc2_whnf_vr",
            "len_lc2_whnf_nvr",
            "len_lc2_dnf_vr",
            "len_lc2_dnf_nvr",
        ):
            assert getattr(rec, field) <= 256
        uses[a] = uses.get(a, 0) + 1
        uses[b] = uses.get(b, 0) + 1
    assert len({r.lc2_src for r in records}) == 500
    assert max(uses.values()) <= 3
    ok("composition split", "500 records, typed, fresh, <=3 uses, inside caps")


def test_steps_split(default_corpus):
    by_id = {r.id: r for r in default_corpus}
    for strategy, bands in (("whnf", (6, 7, 12)), ("dnf", (8, 9, 32))):
        train_max, test_min, test_max = bands
        manifest = split_by_steps(default_corpus, strategy, seed=0)
        assert manifest.parameters["train_max"] == train_max
        hists = {"train": [], "test": []}
        for lang in ("lc1", "lc2"):
            train, test = manifest.view(lang)
            t_steps = [getattr(by_id[i], f"steps_{strategy}_{lang}") for i in train]
            s_steps = [getattr(by_id[i], f"steps_{strategy}_{lang}") for i in test]
            assert max(t_steps) <= train_max
            assert test_min <= min(s_steps) and max(s_steps) <= test_max
            for side, steps in (("train", t_steps), ("test", s_steps)):
                hist: dict[int, int] = {}
                for s in steps:
                    hist[s] = hist.get(s, 0) + 1
                hists[side].append(hist)
        for side in ("train", "test"):
            assert hists[side][0] == hists[side][1], f"{strategy} {side} histograms differ"
    ok("steps split", "whnf <=6 | 7-12, dnf <=8 | 9-32, per-step histograms equal")


def test_metric_criterion():
    gold = [(0, r"\x0 -> x0"), (1, "()"), (2, "True"), (3, "[()]")]
    assert exact_match(dict(gold), gold).score == 1.0
    preds = dict(gold)
    preds[3] = "[(), ()]"
    assert exact_match(preds, gold).score == 0.75
    preds[3] = r"\x9 -> x9"
    gold_alpha = gold[:3] + [(3, r"\x0 -> x0")]
    report = exact_match(preds, gold_alpha, lang="lc1")
    assert report.score == 0.75  # alpha-equal but string-different: mismatch
    assert report.alpha_eq_mismatch_share == 1.0
    ok("metric", "gold=1.0, 3/4=0.75, alpha-equal counts as mismatch")


def test_generate_determinism_across_workers():
    with tempfile.TemporaryDirectory() as d:
        outs = []
        for workers in ("1", "8"):
            out = Path(d) / f"c{workers}.jsonl"
            proc = subprocess.run(
                [
                    sys.executable,
                    "-m",
                    "lceval.cli",
                    "generate",
                    "--n",
                    "300",
                    "--seed",
                    "77",
                    "--workers",
                    workers,
                    "--out",
                    str(out),
                ],
                capture_output=True,
                text=True,
            )
            assert proc.returncode == 0, proc.stderr
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]
    ok("determinism", "workers 1 and 8 byte-identical")
