r"""Surface syntax: canonical pretty-printer and parser for both calculi.

The surface grammar is Haskell-flavoured:

    \x0 -> e        lambda (body extends maximally right)
    e1 e2           application, left-associative
    ite e1 e2 e3    if-then-else, prefix
    foldr e1 e2 e3  right fold, prefix
    () True False   literals
    []              empty list
    [e1, e2]        cons chain ending in the empty list
    (:) e1 e2       cons whose chain does not end in the empty list
    e1 : e2         infix cons (accepted on input, never printed)

Printing is canonical: single spaces between tokens, parentheses only where
application precedence requires them ('(' around lambdas in function position
and around any non-atomic argument).  Parsing accepts redundant parentheses
and arbitrary whitespace; re-printing normalizes them away.
"""

from __future__ import annotations

import re
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
    UnitLit,
    Var,
)

# ---------------------------------------------------------------------------
# printing


def _bracket_elems(t: Term) -> list[Term] | None:
    """Elements of a cons chain ending in Nil, or None if the chain does not."""
    elems = []
    while isinstance(t, Cons):
        elems.append(t.head)
        t = t.tail
    return elems if isinstance(t, Nil) else None


def _atomic(t: Term) -> bool:
    """Terms that print self-delimited and never need argument parentheses."""
    if isinstance(t, (Var, UnitLit, TrueLit, FalseLit, Nil)):
        return True
    return isinstance(t, Cons) and _bracket_elems(t) is not None


def render(t: Term) -> str:
    """Canonical surface string of t (top-level context)."""
    match t:
        case Var(n):
            return f"x{n}"
        case Lam(b, body, _):
            return f"\\x{b} -> {render(body)}"
        case App(f, a):
            return f"{_head(f)} {_arg(a)}"
        case UnitLit():
            return "()"
        case TrueLit():
            return "True"
        case FalseLit():
            return "False"
        case Nil():
            return "[]"
        case Ite(c, a, b):
            return f"ite {_arg(c)} {_arg(a)} {_arg(b)}"
        case Foldr(f, e, l):
            return f"foldr {_arg(f)} {_arg(e)} {_arg(l)}"
        case Cons(h, tl):
            elems = _bracket_elems(t)
            if elems is not None:
                return "[" + ", ".join(render(e) for e in elems) + "]"
            return f"(:) {_arg(h)} {_arg(tl)}"
    raise AssertionError(f"unprintable node: {t!r}")


def _head(t: Term) -> str:
    # Function position: only lambdas need wrapping; applications and the
    # prefix forms stay flat and re-parse with the same grouping.
    if isinstance(t, Lam):
        return f"({render(t)})"
    return render(t)


def _arg(t: Term) -> str:
    if _atomic(t):
        return render(t)
    return f"({render(t)})"


def print1(t: Term) -> str:
    """Print a 1st-calculus term."""
    return render(t)


def print2(t: Term) -> str:
    """Print a 2nd-calculus term (annotations are never shown)."""
    return render(t)


# ---------------------------------------------------------------------------
# lexing


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: int


_WORD = re.compile(r"[A-Za-z][A-Za-z0-9]*")
_KEYWORDS = {"ite": "ITE", "foldr": "FOLDR", "True": "TRUE", "False": "FALSE"}
_VARNAME = re.compile(r"x(\d+)$")


class ParseError(Exception):
    """Syntax error with byte offset and the set of expected tokens."""

    def __init__(self, pos: int, expected: set[str], found: str):
        self.pos = pos
        self.expected = frozenset(expected)
        self.found = found
        exp = ", ".join(sorted(expected))
        super().__init__(f"at byte {pos}: expected one of {{{exp}}}, found {found}")


def tokenize(s: str) -> list[Token]:
    toks: list[Token] = []
    i, n = 0, len(s)
    while i < n:
        c = s[i]
        if c.isspace():
            i += 1
            continue
        if c == "\\":
            toks.append(Token("LAMBDA", "\\", i))
            i += 1
        elif s.startswith("->", i):
            toks.append(Token("ARROW", "->", i))
            i += 2
        elif s.startswith("(:)", i):
            toks.append(Token("CONSOP", "(:)", i))
            i += 3
        elif s.startswith("()", i):
            toks.append(Token("UNIT", "()", i))
            i += 2
        elif c == "(":
            toks.append(Token("LPAREN", "(", i))
            i += 1
        elif c == ")":
            toks.append(Token("RPAREN", ")", i))
            i += 1
        elif s.startswith("[]", i):
            toks.append(Token("NIL", "[]", i))
            i += 2
        elif c == "[":
            toks.append(Token("LBRACK", "[", i))
            i += 1
        elif c == "]":
            toks.append(Token("RBRACK", "]", i))
            i += 1
        elif c == ",":
            toks.append(Token("COMMA", ",", i))
            i += 1
        elif c == ":":
            toks.append(Token("COLON", ":", i))
            i += 1
        else:
            m = _WORD.match(s, i)
            if not m:
                raise ParseError(i, {"term"}, repr(c))
            word = m.group(0)
            if word in _KEYWORDS:
                toks.append(Token(_KEYWORDS[word], word, i))
            elif _VARNAME.match(word):
                toks.append(Token("VAR", word, i))
            else:
                raise ParseError(i, {"variable", "keyword"}, repr(word))
            i = m.end()
    toks.append(Token("EOF", "", n))
    return toks


# ---------------------------------------------------------------------------
# parsing

_ATOM_START = {"VAR", "UNIT", "TRUE", "FALSE", "NIL", "LPAREN", "LBRACK"}
_LC1_TOKENS = {"LAMBDA", "ARROW", "LPAREN", "RPAREN", "VAR", "EOF"}


class _Parser:
    def __init__(self, s: str, lc1_only: bool):
        self.toks = tokenize(s)
        self.i = 0
        self.lc1_only = lc1_only
        if lc1_only:
            for t in self.toks:
                if t.kind not in _LC1_TOKENS:
                    raise ParseError(t.pos, {"1st-calculus token"}, t.text)

    def peek(self) -> Token:
        return self.toks[self.i]

    def next(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, kind: str, what: str) -> Token:
        t = self.peek()
        if t.kind != kind:
            raise ParseError(t.pos, {what}, t.text or "end of input")
        return self.next()

    def parse(self) -> Term:
        t = self.term()
        tok = self.peek()
        if tok.kind != "EOF":
            raise ParseError(tok.pos, {"end of input"}, tok.text)
        return t

    def term(self) -> Term:
        if self.peek().kind == "LAMBDA":
            self.next()
            var = self.expect("VAR", "variable")
            self.expect("ARROW", "'->'")
            return Lam(int(var.text[1:]), self.term())
        left = self.application()
        if self.peek().kind == "COLON":
            self.next()
            return Cons(left, self.term())
        return left

    def application(self) -> Term:
        tok = self.peek()
        if tok.kind == "ITE":
            self.next()
            t: Term = Ite(self.atom(), self.atom(), self.atom())
        elif tok.kind == "FOLDR":
            self.next()
            t = Foldr(self.atom(), self.atom(), self.atom())
        elif tok.kind == "CONSOP":
            self.next()
            t = Cons(self.atom(), self.atom())
        else:
            t = self.atom()
        while self.peek().kind in _ATOM_START:
            t = App(t, self.atom())
        return t

    def atom(self) -> Term:
        tok = self.peek()
        if tok.kind == "VAR":
            self.next()
            return Var(int(tok.text[1:]))
        if tok.kind == "UNIT":
            self.next()
            return UnitLit()
        if tok.kind == "TRUE":
            self.next()
            return TrueLit()
        if tok.kind == "FALSE":
            self.next()
            return FalseLit()
        if tok.kind == "NIL":
            self.next()
            return Nil()
        if tok.kind == "LPAREN":
            self.next()
            t = self.term()
            self.expect("RPAREN", "')'")
            return t
        if tok.kind == "LBRACK":
            self.next()
            elems = [self.term()]
            while self.peek().kind == "COMMA":
                self.next()
                elems.append(self.term())
            self.expect("RBRACK", "']'")
            t = Nil()
            for e in reversed(elems):
                t = Cons(e, t)
            return t
        raise ParseError(tok.pos, {"term"}, tok.text or "end of input")


def parse1(s: str) -> Term:
    """Parse a 1st-calculus term; the sugared constructs are syntax errors."""
    return _Parser(s, lc1_only=True).parse()


def parse2(s: str) -> Term:
    """Parse a 2nd-calculus term; binder annotations come back unknown."""
    return _Parser(s, lc1_only=False).parse()
