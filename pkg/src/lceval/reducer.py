"""Lazy (WHNF) and eager (DNF) normal-order reduction with step accounting.

One reduction step is a single rule firing: a beta step, an ite branch
selection, or a foldr rule (``foldr f e [] -> e`` and
``foldr f e (h:t) -> f h (foldr f e t)``).  WHNF performs head reduction
only: arguments under a stuck head, bodies under lambdas, and constructor
fields stay untouched.  DNF reduces to WHNF and then recursively normalizes
every immediate subterm, left to right; its step count therefore equals the
number of leftmost-outermost rule firings to full normal form.

Reduction preserves binder names except where capture avoidance forces a
fresh index (the NVR view); the VR view renumbers binders ``x0, x1, ...``
in order of first appearance afterwards.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

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
    Var,
    substitute,
)

DEFAULT_FUEL = 10_000


class FuelExhausted(Exception):
    """The step budget ran out; generated terms must never trip this."""


@dataclass(frozen=True)
class ReductionResult:
    term: Term
    steps: int
    strategy: str  # "whnf" | "dnf"
    renaming: str  # "vr" | "nvr"


def whnf(t: Term, fuel: int = DEFAULT_FUEL) -> tuple[Term, int]:
    """Head-reduce t, returning the weak head normal form and the step count."""
    steps = 0
    spine: list[Term] = []
    cur = t
    while True:
        if isinstance(cur, App):
            spine.append(cur.arg)
            cur = cur.fun
            continue
        if isinstance(cur, Lam) and spine:
            if steps >= fuel:
                raise FuelExhausted(f"no WHNF within {fuel} steps")
            steps += 1
            cur = substitute(cur.body, cur.binder, spine.pop())
            continue
        if isinstance(cur, Ite):
            cond, s = whnf(cur.cond, fuel - steps)
            steps += s
            if isinstance(cond, (TrueLit, FalseLit)):
                if steps >= fuel:
                    raise FuelExhausted(f"no WHNF within {fuel} steps")
                steps += 1
                cur = cur.then if isinstance(cond, TrueLit) else cur.els
                continue
            cur = Ite(cond, cur.then, cur.els)  # stuck on an open condition
            break
        if isinstance(cur, Foldr):
            lst, s = whnf(cur.lst, fuel - steps)
            steps += s
            if isinstance(lst, (Nil, Cons)):
                if steps >= fuel:
                    raise FuelExhausted(f"no WHNF within {fuel} steps")
                steps += 1
                if isinstance(lst, Nil):
                    cur = cur.init
                else:
                    cur = App(App(cur.step, lst.head), Foldr(cur.step, cur.init, lst.tail))
                continue
            cur = Foldr(cur.step, cur.init, lst)  # stuck on an open list
            break
        break  # Var, Lam with empty spine, literal, Nil or Cons: head is stable
    while spine:
        cur = App(cur, spine.pop())
    return cur, steps


def dnf(t: Term, fuel: int = DEFAULT_FUEL) -> tuple[Term, int]:
    """Deep normal form of t and the total step count over all subterms."""
    t, steps = whnf(t, fuel)

    def sub(u: Term) -> Term:
        nonlocal steps
        r, s = dnf(u, fuel - steps)
        steps += s
        return r

    match t:
        case Lam(b, body, ty):
            t = Lam(b, sub(body), ty)
        case App(f, a):
            t = App(sub(f), sub(a))
        case Ite(c, a, b):
            t = Ite(sub(c), sub(a), sub(b))
        case Foldr(f, e, l):
            t = Foldr(sub(f), sub(e), sub(l))
        case Cons(h, tl):
            t = Cons(sub(h), sub(tl))
        case _:
            pass
    return t, steps


def rename_vr(t: Term) -> Term:
    """Renumber binders x0, x1, ... in order of first appearance (preorder)."""
    counter = itertools.count()

    def go(u: Term, env: dict[int, int]) -> Term:
        match u:
            case Var(n):
                return Var(env.get(n, n))
            case Lam(b, body, ty):
                n = next(counter)
                return Lam(n, go(body, {**env, b: n}), ty)
            case App(f, a):
                return App(go(f, env), go(a, env))
            case Ite(c, a, b):
                return Ite(go(c, env), go(a, env), go(b, env))
            case Cons(h, tl):
                return Cons(go(h, env), go(tl, env))
            case Foldr(f, e, l):
                return Foldr(go(f, env), go(e, env), go(l, env))
            case _:
                return u

    return go(t, {})


def reduce_term(
    t: Term,
    strategy: str = "dnf",
    renaming: str = "nvr",
    fuel: int = DEFAULT_FUEL,
) -> ReductionResult:
    """Reduce t under the given strategy and apply the requested renaming mode."""
    if strategy == "whnf":
        nf, steps = whnf(t, fuel)
    elif strategy == "dnf":
        nf, steps = dnf(t, fuel)
    else:
        raise ValueError(f"unknown strategy: {strategy!r}")
    if renaming == "vr":
        nf = rename_vr(nf)
    elif renaming != "nvr":
        raise ValueError(f"unknown renaming mode: {renaming!r}")
    return ReductionResult(nf, steps, strategy, renaming)
