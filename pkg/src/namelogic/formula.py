"""Formulas of epistemic logic with group names.

The language has propositional atoms, the constants ``true``/``false``, the
usual connectives, and five naming modalities:

* ``E[n] f``  -- everyone currently named n knows f
* ``S[n] f``  -- someone currently named n knows f
* ``C[n] f``  -- f is common knowledge among those named n
* ``D[n] f``  -- f is distributed knowledge among a subgroup named n
* ``B[i;n] f`` -- agent i knows that f holds wherever i is named n

Concrete syntax, loosest to tightest: ``<->``, ``->``, ``|``, ``&``, then the
unary operators ``!`` and the modalities, which bind their immediate
argument.  ``->`` and ``<->`` associate to the right.  Atoms are lowercase
identifiers; ``true`` and ``false`` are reserved.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .errors import ParseError, UnsupportedFragmentError


class Formula:
    """Base class for all formula nodes. Instances are immutable."""

    __slots__ = ()

    def __str__(self) -> str:
        return print_formula(self)


@dataclass(frozen=True)
class Prop(Formula):
    name: str


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Bot(Formula):
    pass


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class E(Formula):
    name: str
    arg: Formula


@dataclass(frozen=True)
class S(Formula):
    name: str
    arg: Formula


@dataclass(frozen=True)
class C(Formula):
    name: str
    arg: Formula


@dataclass(frozen=True)
class D(Formula):
    name: str
    arg: Formula


@dataclass(frozen=True)
class B(Formula):
    agent: str
    name: str
    arg: Formula


TRUE = Top()
FALSE = Bot()

_MODAL_HEADS = {"E": E, "S": S, "C": C, "D": D}


# ---------------------------------------------------------------------------
# Parsing


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    line: int
    column: int


_PUNCT = {
    "<->": "IFF",
    "->": "IMPLIES",
    "&": "AND",
    "|": "OR",
    "!": "NOT",
    "(": "LPAREN",
    ")": "RPAREN",
    "[": "LBRACK",
    "]": "RBRACK",
    ";": "SEMI",
}


def _tokenize(text: str) -> Iterator[_Token]:
    line, col = 1, 1
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            col += 1
            i += 1
            continue
        if text.startswith("<->", i):
            yield _Token("IFF", "<->", line, col)
            i += 3
            col += 3
            continue
        if text.startswith("->", i):
            yield _Token("IMPLIES", "->", line, col)
            i += 2
            col += 2
            continue
        if ch in _PUNCT:
            yield _Token(_PUNCT[ch], ch, line, col)
            i += 1
            col += 1
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            kind = "CONST" if word in ("true", "false") else "IDENT"
            yield _Token(kind, word, line, col)
            col += j - i
            i = j
            continue
        raise ParseError(f"unknown token {ch!r}", line, col)
    yield _Token("EOF", "", line, col)


class _Parser:
    def __init__(self, text: str):
        self.tokens = list(_tokenize(text))
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str, what: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            got = tok.text or "end of input"
            raise ParseError(f"expected {what}, got {got!r}", tok.line, tok.column)
        return self.advance()

    def parse(self) -> Formula:
        f = self.iff()
        tok = self.peek()
        if tok.kind != "EOF":
            raise ParseError(f"unexpected {tok.text!r}", tok.line, tok.column)
        return f

    def iff(self) -> Formula:
        left = self.implies()
        if self.peek().kind == "IFF":
            self.advance()
            return Iff(left, self.iff())
        return left

    def implies(self) -> Formula:
        left = self.disj()
        if self.peek().kind == "IMPLIES":
            self.advance()
            return Implies(left, self.implies())
        return left

    def disj(self) -> Formula:
        f = self.conj()
        while self.peek().kind == "OR":
            self.advance()
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.peek().kind == "AND":
            self.advance()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        tok = self.peek()
        if tok.kind == "NOT":
            self.advance()
            return Not(self.unary())
        if tok.kind == "IDENT" and tok.text in ("E", "S", "C", "D", "B"):
            nxt = self.tokens[self.pos + 1]
            if nxt.kind == "LBRACK":
                return self.modality()
        return self.primary()

    def modality(self) -> Formula:
        head = self.advance()
        self.expect("LBRACK", "'['")
        first = self.expect("IDENT", "identifier").text
        if head.text == "B":
            self.expect("SEMI", "';'")
            name = self.expect("IDENT", "identifier").text
            self.expect("RBRACK", "']'")
            return B(first, name, self.unary())
        self.expect("RBRACK", "']'")
        return _MODAL_HEADS[head.text](first, self.unary())

    def primary(self) -> Formula:
        tok = self.advance()
        if tok.kind == "CONST":
            return TRUE if tok.text == "true" else FALSE
        if tok.kind == "IDENT":
            if not tok.text[0].islower():
                raise ParseError(
                    f"propositions are lowercase identifiers, got {tok.text!r}",
                    tok.line,
                    tok.column,
                )
            return Prop(tok.text)
        if tok.kind == "LPAREN":
            f = self.iff()
            self.expect("RPAREN", "')'")
            return f
        got = tok.text or "end of input"
        raise ParseError(f"expected a formula, got {got!r}", tok.line, tok.column)


def parse_formula(text: str) -> Formula:
    """Parse concrete syntax into a formula. Raises ParseError with position."""
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# Printing

_LVL_IFF, _LVL_IMPLIES, _LVL_OR, _LVL_AND, _LVL_UNARY, _LVL_ATOM = range(6)


def _fmt(f: Formula, required: int) -> str:
    match f:
        case Prop(name):
            text, level = name, _LVL_ATOM
        case Top():
            text, level = "true", _LVL_ATOM
        case Bot():
            text, level = "false", _LVL_ATOM
        case Not(arg):
            text, level = "!" + _fmt(arg, _LVL_UNARY), _LVL_UNARY
        case E(name, arg):
            text, level = f"E[{name}] " + _fmt(arg, _LVL_UNARY), _LVL_UNARY
        case S(name, arg):
            text, level = f"S[{name}] " + _fmt(arg, _LVL_UNARY), _LVL_UNARY
        case C(name, arg):
            text, level = f"C[{name}] " + _fmt(arg, _LVL_UNARY), _LVL_UNARY
        case D(name, arg):
            text, level = f"D[{name}] " + _fmt(arg, _LVL_UNARY), _LVL_UNARY
        case B(agent, name, arg):
            text, level = f"B[{agent};{name}] " + _fmt(arg, _LVL_UNARY), _LVL_UNARY
        case And(left, right):
            text = _fmt(left, _LVL_AND) + " & " + _fmt(right, _LVL_AND + 1)
            level = _LVL_AND
        case Or(left, right):
            text = _fmt(left, _LVL_OR) + " | " + _fmt(right, _LVL_OR + 1)
            level = _LVL_OR
        case Implies(left, right):
            text = _fmt(left, _LVL_IMPLIES + 1) + " -> " + _fmt(right, _LVL_IMPLIES)
            level = _LVL_IMPLIES
        case Iff(left, right):
            text = _fmt(left, _LVL_IFF + 1) + " <-> " + _fmt(right, _LVL_IFF)
            level = _LVL_IFF
        case _:
            raise TypeError(f"not a formula: {f!r}")
    if level < required:
        return "(" + text + ")"
    return text


def print_formula(f: Formula) -> str:
    """Render a formula so that parse_formula(print_formula(f)) == f."""
    return _fmt(f, 0)


# ---------------------------------------------------------------------------
# Structure

def children(f: Formula) -> tuple[Formula, ...]:
    match f:
        case Not(arg) | E(_, arg) | S(_, arg) | C(_, arg) | D(_, arg) | B(_, _, arg):
            return (arg,)
        case And(l, r) | Or(l, r) | Implies(l, r) | Iff(l, r):
            return (l, r)
        case _:
            return ()


def walk(f: Formula) -> Iterator[Formula]:
    """All subterms of f, including f, without deduplication of leaves."""
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        stack.extend(children(g))


def names_in(f: Formula) -> frozenset[str]:
    return frozenset(g.name for g in walk(f) if isinstance(g, (E, S, C, D, B)))


def props_in(f: Formula) -> frozenset[str]:
    return frozenset(g.name for g in walk(f) if isinstance(g, Prop))


def agents_in(f: Formula) -> frozenset[str]:
    return frozenset(g.agent for g in walk(f) if isinstance(g, B))


def modal_depth(f: Formula) -> int:
    match f:
        case E(_, arg) | S(_, arg) | C(_, arg) | D(_, arg) | B(_, _, arg):
            return 1 + modal_depth(arg)
        case _:
            kids = children(f)
            return max((modal_depth(g) for g in kids), default=0)


def desugar(f: Formula) -> Formula:
    """Rewrite ->, |, <-> into the !/& core. Idempotent."""
    match f:
        case Or(l, r):
            return Not(And(Not(desugar(l)), Not(desugar(r))))
        case Implies(l, r):
            return Not(And(desugar(l), Not(desugar(r))))
        case Iff(l, r):
            return And(desugar(Implies(l, r)), desugar(Implies(r, l)))
        case Not(arg):
            return Not(desugar(arg))
        case And(l, r):
            return And(desugar(l), desugar(r))
        case E(name, arg):
            return E(name, desugar(arg))
        case S(name, arg):
            return S(name, desugar(arg))
        case C(name, arg):
            return C(name, desugar(arg))
        case D(name, arg):
            return D(name, desugar(arg))
        case B(agent, name, arg):
            return B(agent, name, desugar(arg))
        case _:
            return f


def subformulas(f: Formula) -> frozenset[Formula]:
    """The reflexive-transitive subterm set of the desugared formula."""
    f = desugar(f)
    seen: set[Formula] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if g in seen:
            continue
        seen.add(g)
        stack.extend(children(g))
    return frozenset(seen)


# ---------------------------------------------------------------------------
# Closure

@dataclass(frozen=True)
class Closure:
    """The finite formula set the decision procedure works inside.

    Closed under subterms, single negations of non-negations, witness seeds
    S[n] true / E[n] false for every name occurring in the input, S-weakening
    of E members, and the one-step unfolding members of C.
    """

    formulas: frozenset[Formula]
    names: frozenset[str]
    props: frozenset[str]

    def __len__(self) -> int:
        return len(self.formulas)

    def __contains__(self, f: Formula) -> bool:
        return f in self.formulas

    def __iter__(self) -> Iterator[Formula]:
        return iter(self.formulas)


def closure(chi: Formula) -> Closure:
    """Compute the closure of chi over the !/&/E/S/C core.

    chi is desugared first; D and B are outside the supported fragment.
    """
    chi = desugar(chi)
    for g in walk(chi):
        if isinstance(g, (D, B)):
            raise UnsupportedFragmentError(
                f"closure is defined for the E/S/C fragment, got {print_formula(g)}"
            )
    names = names_in(chi)
    formulas: set[Formula] = set()
    queue: list[Formula] = [chi]
    queue.extend(S(n, TRUE) for n in sorted(names))
    queue.extend(E(n, FALSE) for n in sorted(names))
    while queue:
        g = queue.pop()
        if g in formulas:
            continue
        formulas.add(g)
        queue.extend(children(g))
        if not isinstance(g, Not):
            queue.append(Not(g))
        match g:
            case E(n, arg):
                queue.append(S(n, arg))
            case C(n, arg):
                queue.append(E(n, arg))
                queue.append(E(n, C(n, arg)))
    return Closure(frozenset(formulas), names, props_in(chi))
