"""The 2nd calculus' type language, its checker, and frequency ranking.

Types render as ``Unit``, ``Bool``, ``[t]`` and ``t -> t`` with
right-associative arrows; an arrow in domain position is parenthesized.
Checking requires fully annotated binders (generator output); terms that come
back from the parser have unknown annotations and cannot be checked.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Union

from . import terms
from .terms import Term


@dataclass(frozen=True, slots=True)
class TyUnit:
    pass


@dataclass(frozen=True, slots=True)
class TyBool:
    pass


@dataclass(frozen=True, slots=True)
class TyList:
    elem: "Ty"


@dataclass(frozen=True, slots=True)
class TyArrow:
    dom: "Ty"
    cod: "Ty"


Ty = Union[TyUnit, TyBool, TyList, TyArrow]

UNIT_TY = TyUnit()
BOOL_TY = TyBool()


def render_type(ty: Ty) -> str:
    match ty:
        case TyUnit():
            return "Unit"
        case TyBool():
            return "Bool"
        case TyList(e):
            return f"[{render_type(e)}]"
        case TyArrow(d, c):
            dom = f"({render_type(d)})" if isinstance(d, TyArrow) else render_type(d)
            return f"{dom} -> {render_type(c)}"
    raise AssertionError(f"unprintable type: {ty!r}")


_TYPE_TOKEN = re.compile(r"\s*(Unit|Bool|\[|\]|\(|\)|->)")


def parse_type(s: str) -> Ty:
    """Inverse of render_type (redundant parentheses allowed)."""
    toks: list[str] = []
    i = 0
    while i < len(s):
        if s[i].isspace():
            i += 1
            continue
        m = _TYPE_TOKEN.match(s, i)
        if not m:
            raise ValueError(f"bad type syntax at offset {i} in {s!r}")
        toks.append(m.group(1))
        i = m.end()
    pos = 0

    def atom() -> Ty:
        nonlocal pos
        if pos >= len(toks):
            raise ValueError(f"unexpected end of type in {s!r}")
        t = toks[pos]
        pos += 1
        if t == "Unit":
            return UNIT_TY
        if t == "Bool":
            return BOOL_TY
        if t == "[":
            inner = arrow()
            expect("]")
            return TyList(inner)
        if t == "(":
            inner = arrow()
            expect(")")
            return inner
        raise ValueError(f"unexpected {t!r} in type {s!r}")

    def expect(tok: str) -> None:
        nonlocal pos
        if pos >= len(toks) or toks[pos] != tok:
            raise ValueError(f"expected {tok!r} in type {s!r}")
        pos += 1

    def arrow() -> Ty:
        dom = atom()
        if pos < len(toks) and toks[pos] == "->":
            expect("->")
            return TyArrow(dom, arrow())
        return dom

    ty = arrow()
    if pos != len(toks):
        raise ValueError(f"trailing tokens in type {s!r}")
    return ty


def ty_order_key(ty: Ty):
    """Total order on types: Unit < Bool < List < Arrow, recursing lexicographically."""
    match ty:
        case TyUnit():
            return (0,)
        case TyBool():
            return (1,)
        case TyList(e):
            return (2, ty_order_key(e))
        case TyArrow(d, c):
            return (3, ty_order_key(d), ty_order_key(c))
    raise AssertionError


def type_depth(ty: Ty) -> int:
    match ty:
        case TyList(e):
            return 1 + type_depth(e)
        case TyArrow(d, c):
            return 1 + max(type_depth(d), type_depth(c))
        case _:
            return 1


class TypeCheckError(Exception):
    """Raised on ill-typed or unannotated input; carries the offending path."""

    def __init__(self, path: tuple[str, ...], message: str):
        self.path = path
        super().__init__(f"at {'/'.join(path) or 'root'}: {message}")


def check(env: dict[int, Ty], t: Term) -> Ty:
    """The unique type of t under the simply-typed rules, or TypeCheckError."""

    def go(env: dict[int, Ty], t: Term, path: tuple[str, ...]) -> Ty:
        match t:
            case terms.Var(n):
                if n not in env:
                    raise TypeCheckError(path, f"unbound variable x{n}")
                return env[n]
            case terms.Lam(b, body, ann):
                if ann is None:
                    raise TypeCheckError(path, f"binder x{b} has no type annotation")
                return TyArrow(ann, go({**env, b: ann}, body, path + ("body",)))
            case terms.App(f, a):
                tf = go(env, f, path + ("fun",))
                ta = go(env, a, path + ("arg",))
                if not isinstance(tf, TyArrow):
                    raise TypeCheckError(
                        path + ("fun",), f"expected a function, got {render_type(tf)}"
                    )
                if tf.dom != ta:
                    raise TypeCheckError(
                        path + ("arg",),
                        f"expected {render_type(tf.dom)}, got {render_type(ta)}",
                    )
                return tf.cod
            case terms.UnitLit():
                return UNIT_TY
            case terms.TrueLit() | terms.FalseLit():
                return BOOL_TY
            case terms.Ite(c, a, b):
                tc = go(env, c, path + ("cond",))
                if tc != BOOL_TY:
                    raise TypeCheckError(
                        path + ("cond",), f"expected Bool, got {render_type(tc)}"
                    )
                ta = go(env, a, path + ("then",))
                tb = go(env, b, path + ("else",))
                if ta != tb:
                    raise TypeCheckError(
                        path, f"branch types differ: {render_type(ta)} vs {render_type(tb)}"
                    )
                return ta
            case terms.Nil(ann):
                if ann is None:
                    raise TypeCheckError(path, "nil has no element type annotation")
                return TyList(ann)
            case terms.Cons(h, tl):
                th = go(env, h, path + ("head",))
                tt = go(env, tl, path + ("tail",))
                if tt != TyList(th):
                    raise TypeCheckError(
                        path + ("tail",),
                        f"expected {render_type(TyList(th))}, got {render_type(tt)}",
                    )
                return tt
            case terms.Foldr(f, e, l):
                tf = go(env, f, path + ("step",))
                te = go(env, e, path + ("init",))
                tl = go(env, l, path + ("list",))
                if not isinstance(tl, TyList):
                    raise TypeCheckError(
                        path + ("list",), f"expected a list, got {render_type(tl)}"
                    )
                want = TyArrow(tl.elem, TyArrow(te, te))
                if tf != want:
                    raise TypeCheckError(
                        path + ("step",),
                        f"expected {render_type(want)}, got {render_type(tf)}",
                    )
                return te
        raise AssertionError(f"unknown node: {t!r}")

    return go(env, t, ())


def type_frequency_order(types: Iterable[Ty]) -> list[tuple[Ty, int]]:
    """(type, count) pairs, most frequent first; ties broken by ty_order_key."""
    counts: dict[Ty, int] = {}
    for ty in types:
        counts[ty] = counts.get(ty, 0) + 1
    return sorted(counts.items(), key=lambda kv: (-kv[1], ty_order_key(kv[0])))
