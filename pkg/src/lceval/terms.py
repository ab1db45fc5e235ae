"""ASTs for both calculi plus the binding operations everything else builds on.

The first calculus is the Var/Lam/App fragment; the second adds unit, booleans,
ite, lists and foldr.  One set of node classes covers both: a term belongs to
the first calculus iff it only uses the shared constructors (see ``is_lc1``).

Variables are bare non-negative indices, rendered ``x<i>``.  Binder type
annotations (``Lam.binder_type``, ``Nil.elem_type``) are internal: the surface
syntax never shows them, parsing leaves them ``None``, and ``alpha_eq``
ignores them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Optional, Union

if TYPE_CHECKING:
    from .types import Ty


@dataclass(frozen=True, slots=True)
class Var:
    name: int


@dataclass(frozen=True, slots=True)
class Lam:
    binder: int
    body: "Term"
    binder_type: Optional["Ty"] = None


@dataclass(frozen=True, slots=True)
class App:
    fun: "Term"
    arg: "Term"


@dataclass(frozen=True, slots=True)
class UnitLit:
    pass


@dataclass(frozen=True, slots=True)
class TrueLit:
    pass


@dataclass(frozen=True, slots=True)
class FalseLit:
    pass


@dataclass(frozen=True, slots=True)
class Ite:
    cond: "Term"
    then: "Term"
    els: "Term"


@dataclass(frozen=True, slots=True)
class Nil:
    elem_type: Optional["Ty"] = None


@dataclass(frozen=True, slots=True)
class Cons:
    head: "Term"
    tail: "Term"


@dataclass(frozen=True, slots=True)
class Foldr:
    step: "Term"
    init: "Term"
    lst: "Term"


Term = Union[Var, Lam, App, UnitLit, TrueLit, FalseLit, Ite, Nil, Cons, Foldr]

UNIT = UnitLit()
TRUE = TrueLit()
FALSE = FalseLit()


def children(t: Term) -> tuple[Term, ...]:
    """Immediate subterms in surface (print) order."""
    match t:
        case Lam(_, body, _):
            return (body,)
        case App(fun, arg):
            return (fun, arg)
        case Ite(c, a, b):
            return (c, a, b)
        case Cons(h, tl):
            return (h, tl)
        case Foldr(f, e, l):
            return (f, e, l)
        case _:
            return ()


def is_lc1(t: Term) -> bool:
    """True iff t uses only the Var/Lam/App fragment."""
    if not isinstance(t, (Var, Lam, App)):
        return False
    return all(is_lc1(c) for c in children(t))


def node_count(t: Term) -> int:
    return 1 + sum(node_count(c) for c in children(t))


def term_depth(t: Term) -> int:
    kids = children(t)
    return 1 + (max(term_depth(c) for c in kids) if kids else 0)


def free_vars(t: Term, _cache: Optional[dict] = None) -> frozenset[int]:
    """The set of variable indices occurring free in t."""
    if _cache is None:
        _cache = {}
    got = _cache.get(id(t))
    if got is not None:
        return got
    match t:
        case Var(n):
            fv = frozenset((n,))
        case Lam(b, body, _):
            fv = free_vars(body, _cache) - {b}
        case _:
            fv = frozenset()
            for c in children(t):
                fv |= free_vars(c, _cache)
    _cache[id(t)] = fv
    return fv


def max_index(t: Term) -> int:
    """Largest variable index occurring anywhere in t (binder or use); -1 if none."""
    match t:
        case Var(n):
            return n
        case Lam(b, body, _):
            return max(b, max_index(body))
        case _:
            kids = children(t)
            return max((max_index(c) for c in kids), default=-1)


def _rebuild(t: Term, kids: tuple[Term, ...]) -> Term:
    match t:
        case App(_, _):
            return App(*kids)
        case Ite(_, _, _):
            return Ite(*kids)
        case Cons(_, _):
            return Cons(*kids)
        case Foldr(_, _, _):
            return Foldr(*kids)
        case _:
            raise AssertionError(f"not a rebuildable node: {t!r}")


def substitute(t: Term, v: int, s: Term) -> Term:
    """Capture-avoiding substitution of s for free occurrences of v in t.

    A binder that would capture a free variable of s is renamed to the
    smallest index strictly greater than every index in scope (the binder's
    body, s, and the binder itself), so no second collision is possible.
    Untouched subtrees are returned as-is, which keeps preserved-name (NVR)
    output stable.
    """
    fv_s = free_vars(s)
    cache: dict = {}

    def go(u: Term) -> Term:
        if v not in free_vars(u, cache):
            return u
        match u:
            case Var(_):
                return s
            case Lam(b, body, ty):
                # v free under the binder, so b != v here.
                if b in fv_s:
                    fresh = max(max_index(body), max_index(s), b) + 1
                    body = substitute(body, b, Var(fresh))
                    return Lam(fresh, go(body), ty)
                return Lam(b, go(body), ty)
            case _:
                return _rebuild(u, tuple(go(c) for c in children(u)))

    return go(t)


def alpha_eq(a: Term, b: Term) -> bool:
    """Equality up to consistent renaming of bound variables.

    Internal type annotations are ignored; free variables must match by name.
    """

    def go(x: Term, y: Term, mx: dict[int, int], my: dict[int, int], depth: int) -> bool:
        match x, y:
            case (Var(n), Var(m)):
                return mx.get(n, ("free", n)) == my.get(m, ("free", m))
            case (Lam(bx, tx, _), Lam(by, ty_, _)):
                return go(tx, ty_, {**mx, bx: depth}, {**my, by: depth}, depth + 1)
            case (App(f1, a1), App(f2, a2)):
                return go(f1, f2, mx, my, depth) and go(a1, a2, mx, my, depth)
            case (Ite(c1, t1, e1), Ite(c2, t2, e2)):
                return (
                    go(c1, c2, mx, my, depth)
                    and go(t1, t2, mx, my, depth)
                    and go(e1, e2, mx, my, depth)
                )
            case (Cons(h1, l1), Cons(h2, l2)):
                return go(h1, h2, mx, my, depth) and go(l1, l2, mx, my, depth)
            case (Foldr(f1, e1, l1), Foldr(f2, e2, l2)):
                return (
                    go(f1, f2, mx, my, depth)
                    and go(e1, e2, mx, my, depth)
                    and go(l1, l2, mx, my, depth)
                )
            case (UnitLit(), UnitLit()) | (TrueLit(), TrueLit()) | (FalseLit(), FalseLit()):
                return True
            case (Nil(), Nil()):
                return True
            case _:
                return False

    return go(a, b, {}, {}, 0)
