"""Type-driven random generation of closed, well-typed, normalizing terms.

A draw first samples a goal type, then produces a term top-down: at every
node the sampler picks among the constructors whose result type matches the
goal (introduction forms for the goal's head, in-scope variables of the goal
type, and the application / ite / foldr eliminations), recursing into the
subgoals.  At the term-depth limit only non-recursing choices remain; if none
exists the draw fails and the caller retries with a fresh stream.

Elimination forms need a subgoal type that is not part of the goal (the
argument type of an application, the element type of a fold); those are
sampled from the type grammar at a reduced depth.

Every accepted term is closed and checks at its goal type, binders are
renumbered in preorder, and the draw is a pure function of its RNG stream,
so generation parallelizes over per-attempt streams keyed by
(seed, attempt index).
"""

from __future__ import annotations

import hashlib
import itertools
import random
from dataclasses import dataclass, fields
from typing import Callable, Optional

from .church import church_encode
from .reducer import dnf, rename_vr, whnf
from .syntax import print1, print2
from .terms import (
    App,
    Cons,
    FalseLit,
    Foldr,
    Ite,
    Lam,
    Nil,
    Term,
    TrueLit,
    UnitLit,
    Var,
)
from .types import BOOL_TY, UNIT_TY, Ty, TyArrow, TyBool, TyList, TyUnit, render_type

TYPE_KINDS = ("unit", "bool", "list", "arrow")
TERM_KINDS = ("unit", "bool", "nil", "cons", "lam", "var", "app", "ite", "foldr")


@dataclass(frozen=True)
class GenConfig:
    """Sampler knobs.

    The default depths and weights are calibrated against three observable
    targets on a large default corpus: median step counts near (4, 3) for
    WHNF and (6, 4) for DNF across the two calculi, a mean token-length
    ratio between the calculi of about 2.5, and the six most common types
    ranking Bool, Unit, [Bool], [Unit], Unit -> Bool, Bool -> Unit.
    """

    seed: int = 0
    max_type_depth: int = 4
    max_term_depth: int = 5
    elim_type_depth: int = 2
    max_input_tokens: int = 512
    max_output_tokens: int = 256
    fuel: int = 10_000
    type_weights: tuple[float, ...] = (1.0, 1.0, 1.0, 1.0)  # by TYPE_KINDS
    # by TERM_KINDS: unit, bool, nil, cons, lam, var, app, ite, foldr
    term_weights: tuple[float, ...] = (1.0, 1.0, 1.0, 1.0, 1.0, 1.6, 0.65, 0.65, 0.65)

    def __post_init__(self):
        if self.max_type_depth < 1 or self.max_term_depth < 1:
            raise ValueError("depth limits must be >= 1")
        if self.max_input_tokens < 1 or self.max_output_tokens < 1:
            raise ValueError("token caps must be >= 1")
        if len(self.type_weights) != len(TYPE_KINDS):
            raise ValueError(f"need {len(TYPE_KINDS)} type weights")
        if len(self.term_weights) != len(TERM_KINDS):
            raise ValueError(f"need {len(TERM_KINDS)} term weights")
        if any(w <= 0 for w in self.type_weights + self.term_weights):
            raise ValueError("weights must be strictly positive")

    def type_weight(self, kind: str) -> float:
        return self.type_weights[TYPE_KINDS.index(kind)]

    def term_weight(self, kind: str) -> float:
        return self.term_weights[TERM_KINDS.index(kind)]


def load_config(path: str) -> GenConfig:
    """Load a GenConfig from a plain `key = value` file ('#' starts a comment)."""
    ints = {
        "seed",
        "max_type_depth",
        "max_term_depth",
        "elim_type_depth",
        "max_input_tokens",
        "max_output_tokens",
        "fuel",
    }
    known = {f.name for f in fields(GenConfig)}
    kwargs: dict = {}
    type_w = dict(zip(TYPE_KINDS, GenConfig().type_weights))
    term_w = dict(zip(TERM_KINDS, GenConfig().term_weights))
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected `key = value`")
            key, val = (part.strip() for part in line.split("=", 1))
            if key in ints:
                kwargs[key] = int(val)
            elif key.startswith("type_weight_") and key[len("type_weight_"):] in type_w:
                type_w[key[len("type_weight_"):]] = float(val)
            elif key.startswith("term_weight_") and key[len("term_weight_"):] in term_w:
                term_w[key[len("term_weight_"):]] = float(val)
            elif key in known:
                raise ValueError(f"{path}:{lineno}: {key} is not settable from a file")
            else:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
    kwargs["type_weights"] = tuple(type_w[k] for k in TYPE_KINDS)
    kwargs["term_weights"] = tuple(term_w[k] for k in TERM_KINDS)
    return GenConfig(**kwargs)


def attempt_rng(seed: int, index: int) -> random.Random:
    """Per-attempt RNG stream, stable across platforms and worker counts."""
    digest = hashlib.sha256(f"{seed}:{index}".encode()).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


def _weighted(rng: random.Random, kinds: list[str], weight: Callable[[str], float]) -> str:
    weights = [weight(k) for k in kinds]
    return rng.choices(kinds, weights=weights, k=1)[0]


def generate_type(cfg: GenConfig, rng: random.Random, max_depth: Optional[int] = None) -> Ty:
    """Sample a type of depth <= max_depth (leaves are forced at the limit)."""

    def go(depth_left: int) -> Ty:
        kinds = ["unit", "bool"]
        if depth_left > 1:
            kinds += ["list", "arrow"]
        kind = _weighted(rng, kinds, cfg.type_weight)
        if kind == "unit":
            return UNIT_TY
        if kind == "bool":
            return BOOL_TY
        if kind == "list":
            return TyList(go(depth_left - 1))
        return TyArrow(go(depth_left - 1), go(depth_left - 1))

    return go(max_depth if max_depth is not None else cfg.max_type_depth)


class GenerationFailure(Exception):
    """The depth limit left no compatible constructor; retry with a fresh draw."""


def generate_term(ty: Ty, cfg: GenConfig, rng: random.Random) -> Term:
    """A closed, fully annotated term of the given type (binders in preorder).

    Dead ends (an arrow goal at the depth limit with no matching variable in
    scope) are handled by re-picking among the node's remaining constructors;
    the draw as a whole fails only when every option at some node fails.
    """
    counter = itertools.count()

    def build(kind: str, goal: Ty, env: list[tuple[int, Ty]], depth: int) -> Term:
        if kind == "unit":
            return UnitLit()
        if kind == "bool":
            return TrueLit() if rng.random() < 0.5 else FalseLit()
        if kind == "nil":
            assert isinstance(goal, TyList)
            return Nil(goal.elem)
        if kind == "cons":
            assert isinstance(goal, TyList)
            return Cons(go(goal.elem, env, depth + 1), go(goal, env, depth + 1))
        if kind == "lam":
            assert isinstance(goal, TyArrow)
            name = next(counter)
            return Lam(name, go(goal.cod, env + [(name, goal.dom)], depth + 1), goal.dom)
        if kind == "app":
            arg_ty = generate_type(cfg, rng, cfg.elim_type_depth)
            fun = go(TyArrow(arg_ty, goal), env, depth + 1)
            return App(fun, go(arg_ty, env, depth + 1))
        if kind == "ite":
            return Ite(
                go(BOOL_TY, env, depth + 1),
                go(goal, env, depth + 1),
                go(goal, env, depth + 1),
            )
        assert kind == "foldr"
        elem_ty = generate_type(cfg, rng, cfg.elim_type_depth)
        step = go(TyArrow(elem_ty, TyArrow(goal, goal)), env, depth + 1)
        init = go(goal, env, depth + 1)
        lst = go(TyList(elem_ty), env, depth + 1)
        return Foldr(step, init, lst)

    def go(goal: Ty, env: list[tuple[int, Ty]], depth: int) -> Term:
        at_limit = depth >= cfg.max_term_depth
        kinds: list[str] = []
        match goal:
            case TyUnit():
                kinds.append("unit")
            case TyBool():
                kinds.append("bool")
            case TyList(_):
                kinds.append("nil")
                if not at_limit:
                    kinds.append("cons")
            case TyArrow(_, _):
                if not at_limit:
                    kinds.append("lam")
        matching = [name for name, vty in env if vty == goal]
        if matching:
            kinds.append("var")
        if not at_limit:
            kinds += ["app", "ite", "foldr"]
        while kinds:
            kind = _weighted(rng, kinds, cfg.term_weight)
            if kind == "var":
                return Var(rng.choice(matching))
            try:
                return build(kind, goal, env, depth)
            except GenerationFailure:
                kinds.remove(kind)
        raise GenerationFailure(f"no constructor for {render_type(goal)} at depth {depth}")

    return go(ty, [], 1)


@dataclass(frozen=True)
class Rejected:
    reason: str  # "generation_failure" | "too_long" | "duplicate"


@dataclass(frozen=True)
class Draft:
    """A fully evaluated example, not yet committed to a corpus (no id)."""

    ty: Ty
    lc1_src: str
    lc2_src: str
    targets: dict[str, str]  # keyed lc{1,2}_{whnf,dnf}_{vr,nvr}
    steps: dict[str, int]  # keyed {whnf,dnf}_lc{1,2}


def generate_example(
    cfg: GenConfig,
    rng: random.Random,
    count_tokens: Callable[[str], int],
    seen: Optional[set[str]] = None,
) -> Draft | Rejected:
    """One full draw: type -> term -> encode -> reduce -> print, with filters."""
    ty = generate_type(cfg, rng)
    try:
        t2 = generate_term(ty, cfg, rng)
    except GenerationFailure:
        return Rejected("generation_failure")
    t2 = rename_vr(t2)
    lc2_src = print2(t2)
    if seen is not None and lc2_src in seen:
        return Rejected("duplicate")
    t1 = church_encode(t2)
    lc1_src = print1(t1)
    if count_tokens(lc1_src) > cfg.max_input_tokens or count_tokens(lc2_src) > cfg.max_input_tokens:
        return Rejected("too_long")

    targets: dict[str, str] = {}
    steps: dict[str, int] = {}
    for lang, term in (("lc1", t1), ("lc2", t2)):
        for strategy, reducer in (("whnf", whnf), ("dnf", dnf)):
            nf, n = reducer(term, cfg.fuel)
            steps[f"{strategy}_{lang}"] = n
            targets[f"{lang}_{strategy}_nvr"] = print2(nf)
            targets[f"{lang}_{strategy}_vr"] = print2(rename_vr(nf))
    if any(count_tokens(s) > cfg.max_output_tokens for s in targets.values()):
        return Rejected("too_long")
    return Draft(ty=ty, lc1_src=lc1_src, lc2_src=lc2_src, targets=targets, steps=steps)
