r"""Meaning-preserving translation from the sugared calculus to the pure one.

Lists become their right fold, so a fold is application and the data
constructors become combinators:

    []        ->  \c -> \n -> n
    (:) h t   ->  (\h -> \t -> \c -> \n -> c h (t c n)) h' t'
    foldr f e l -> l' f' e'

Booleans are the standard Church booleans applied directly by ite, and unit
is the identity:

    True  -> \t -> \f -> t        False -> \t -> \f -> f
    ite c a b -> c' a' b'         ()    -> \x -> x

The cons cell stays an application of the four-binder cons combinator rather
than being inlined; that is the shape the golden examples pin down, and it is
what keeps the pure calculus' step counts strictly above the sugared ones.
Fresh binders continue the input's numbering, and the result is renumbered
in order of appearance, so encoding a term whose binders are x0..xN in
preorder yields a term whose binders are again x0..xM in preorder.
"""

from __future__ import annotations

import itertools

from .reducer import rename_vr
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
    max_index,
)


def church_encode(t: Term) -> Term:
    """Encode a 2nd-calculus term as a pure term, renumbered in preorder."""
    counter = itertools.count(max_index(t) + 1)

    def fresh() -> int:
        return next(counter)

    def enc(u: Term) -> Term:
        match u:
            case Var(_):
                return u
            case Lam(b, body, _):
                return Lam(b, enc(body))
            case App(f, a):
                return App(enc(f), enc(a))
            case UnitLit():
                k = fresh()
                return Lam(k, Var(k))
            case TrueLit():
                k1, k2 = fresh(), fresh()
                return Lam(k1, Lam(k2, Var(k1)))
            case FalseLit():
                k1, k2 = fresh(), fresh()
                return Lam(k1, Lam(k2, Var(k2)))
            case Nil():
                k1, k2 = fresh(), fresh()
                return Lam(k1, Lam(k2, Var(k2)))
            case Ite(c, a, b):
                return App(App(enc(c), enc(a)), enc(b))
            case Cons(h, tl):
                ch, ct, cc, cn = fresh(), fresh(), fresh(), fresh()
                comb = Lam(
                    ch,
                    Lam(
                        ct,
                        Lam(
                            cc,
                            Lam(
                                cn,
                                App(
                                    App(Var(cc), Var(ch)),
                                    App(App(Var(ct), Var(cc)), Var(cn)),
                                ),
                            ),
                        ),
                    ),
                )
                return App(App(comb, enc(h)), enc(tl))
            case Foldr(f, e, l):
                return App(App(enc(l), enc(f)), enc(e))
        raise AssertionError(f"unencodable node: {u!r}")

    return rename_vr(enc(t))
