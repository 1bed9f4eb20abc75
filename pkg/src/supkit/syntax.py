"""AST, parser, printer and well-formedness classes for superposition logic.

Terms and formulas are immutable dataclasses compared structurally (no
alpha-equivalence, no normalization).  The superposition connective is
written ``sup`` infix in text form; ``|`` is accepted as an input alias.

Formulas fall into four nested well-formedness classes:

* CLASSICAL    -- no ``sup`` node anywhere
* BASIC        -- built from classical formulas by connectives (incl. sup)
                  but no new quantifiers
* RESTRICTED   -- built from basic formulas by connectives and quantifiers
                  but no new sup
* UNRESTRICTED -- everything else
"""

import re
from dataclasses import dataclass
from enum import IntEnum


class SupkitError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(SupkitError):
    def __init__(self, message, pos=None):
        self.pos = pos
        if pos is not None:
            message = f"{message} (at position {pos})"
        super().__init__(message)


class UnknownSymbolError(ParseError):
    pass


class ArityError(ParseError):
    pass


class CaptureError(SupkitError):
    """A substituted term's variable would be captured by a binder."""


# ---------------------------------------------------------------------------
# Terms

PARAM_PREFIX = "@"


@dataclass(frozen=True)
class Term:
    pass


@dataclass(frozen=True)
class Variable(Term):
    name: str


@dataclass(frozen=True)
class Constant(Term):
    name: str


@dataclass(frozen=True)
class FuncApp(Term):
    name: str
    args: tuple


@dataclass(frozen=True)
class Parameter(Term):
    """A domain element used as a name of itself, printed with an ``@``.

    Parameters keep formulas over an extended language separate from the
    base language: no declared symbol may start with ``@``.
    """

    element: str


# ---------------------------------------------------------------------------
# Formulas


@dataclass(frozen=True)
class Formula:
    pass


@dataclass(frozen=True)
class PropAtom(Formula):
    name: str


@dataclass(frozen=True)
class PredAtom(Formula):
    name: str
    args: tuple


@dataclass(frozen=True)
class Equality(Formula):
    lhs: Term
    rhs: Term


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


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
class Sup(Formula):
    """The superposition connective.  Commutativity is a property of choice
    tables, never applied to the AST itself."""

    left: Formula
    right: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula


BINARY_NODES = (And, Or, Implies, Iff, Sup)
QUANTIFIER_NODES = (Forall, Exists)
ATOM_NODES = (PropAtom, PredAtom, Equality)


class SyntaxClass(IntEnum):
    CLASSICAL = 0
    BASIC = 1
    RESTRICTED = 2
    UNRESTRICTED = 3

    def __str__(self):
        return self.name.lower()


# ---------------------------------------------------------------------------
# Signature

_IMPLICIT_PROP_ATOM = re.compile(r"p[0-9]+\Z")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z_0-9]*\Z")


@dataclass(frozen=True)
class Signature:
    """Declares the non-logical vocabulary used by the parser.

    Names of the form ``p<digits>`` are treated as propositional atoms even
    when not declared, unless claimed by another category.
    """

    constants: frozenset = frozenset()
    functions: dict = None
    predicates: dict = None
    prop_atoms: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "constants", frozenset(self.constants))
        object.__setattr__(self, "functions", dict(self.functions or {}))
        object.__setattr__(self, "predicates", dict(self.predicates or {}))
        object.__setattr__(self, "prop_atoms", frozenset(self.prop_atoms))
        seen = {}
        groups = [
            ("constant", self.constants),
            ("function", self.functions),
            ("predicate", self.predicates),
            ("prop_atom", self.prop_atoms),
        ]
        for kind, names in groups:
            for name in names:
                if not _IDENT.match(name):
                    raise SupkitError(f"illegal {kind} name {name!r}")
                if name.startswith(PARAM_PREFIX):
                    raise SupkitError(
                        f"{kind} name {name!r} uses the reserved parameter prefix"
                    )
                if name in seen:
                    raise SupkitError(
                        f"name {name!r} declared both as {seen[name]} and {kind}"
                    )
                seen[name] = kind
        for name, arity in list(self.functions.items()) + list(self.predicates.items()):
            if not isinstance(arity, int) or arity < 1:
                raise SupkitError(f"arity of {name!r} must be a positive integer")

    def is_prop_atom(self, name):
        if name in self.prop_atoms:
            return True
        return bool(_IMPLICIT_PROP_ATOM.match(name)) and name not in self.constants \
            and name not in self.functions and name not in self.predicates

    def to_json(self):
        return {
            "constants": sorted(self.constants),
            "functions": dict(sorted(self.functions.items())),
            "predicates": dict(sorted(self.predicates.items())),
            "prop_atoms": sorted(self.prop_atoms),
        }

    @classmethod
    def from_json(cls, data):
        return cls(
            constants=frozenset(data.get("constants", ())),
            functions=dict(data.get("functions", {})),
            predicates=dict(data.get("predicates", {})),
            prop_atoms=frozenset(data.get("prop_atoms", ())),
        )


DEFAULT_SIGNATURE = Signature(
    constants=frozenset({"c1", "c2", "c3"}),
    functions={"g": 1},
    predicates={"P": 1, "Q": 1, "R": 2},
)


# ---------------------------------------------------------------------------
# Free variables and substitution


def term_vars(t):
    if isinstance(t, Variable):
        return frozenset((t.name,))
    if isinstance(t, FuncApp):
        out = frozenset()
        for a in t.args:
            out |= term_vars(a)
        return out
    return frozenset()


def free_vars(phi):
    """Free variable names of a formula; sentences are exactly the formulas
    with an empty result."""
    if isinstance(phi, PropAtom):
        return frozenset()
    if isinstance(phi, PredAtom):
        out = frozenset()
        for a in phi.args:
            out |= term_vars(a)
        return out
    if isinstance(phi, Equality):
        return term_vars(phi.lhs) | term_vars(phi.rhs)
    if isinstance(phi, Not):
        return free_vars(phi.body)
    if isinstance(phi, BINARY_NODES):
        return free_vars(phi.left) | free_vars(phi.right)
    if isinstance(phi, QUANTIFIER_NODES):
        return free_vars(phi.body) - {phi.var}
    raise SupkitError(f"not a formula: {phi!r}")


def is_sentence(phi):
    return not free_vars(phi)


def is_closed_term(t):
    return not term_vars(t)


def substitute_term(t, mapping):
    if isinstance(t, Variable):
        return mapping.get(t.name, t)
    if isinstance(t, FuncApp):
        return FuncApp(t.name, tuple(substitute_term(a, mapping) for a in t.args))
    return t


def substitute_map(phi, mapping):
    """Simultaneously substitute terms for free variables, refusing capture."""
    mapping = {v: t for v, t in mapping.items() if t != Variable(v)}
    return _subst(phi, mapping)


def substitute(phi, var, term):
    """Replace every free occurrence of ``var`` in ``phi`` by ``term``."""
    return substitute_map(phi, {var: term})


def _subst(phi, mapping):
    if not mapping:
        return phi
    if isinstance(phi, PropAtom):
        return phi
    if isinstance(phi, PredAtom):
        return PredAtom(phi.name, tuple(substitute_term(a, mapping) for a in phi.args))
    if isinstance(phi, Equality):
        return Equality(substitute_term(phi.lhs, mapping), substitute_term(phi.rhs, mapping))
    if isinstance(phi, Not):
        return Not(_subst(phi.body, mapping))
    if isinstance(phi, BINARY_NODES):
        return type(phi)(_subst(phi.left, mapping), _subst(phi.right, mapping))
    if isinstance(phi, QUANTIFIER_NODES):
        inner = {v: t for v, t in mapping.items() if v != phi.var}
        if inner:
            body_free = free_vars(phi.body)
            for v, t in inner.items():
                if v in body_free and phi.var in term_vars(t):
                    raise CaptureError(
                        f"substituting {to_text_term(t)} for {v} would capture "
                        f"{phi.var} in {to_text(phi)}"
                    )
        return type(phi)(phi.var, _subst(phi.body, inner))
    raise SupkitError(f"not a formula: {phi!r}")


def is_substitutable(phi, var, term):
    try:
        substitute(phi, var, term)
    except CaptureError:
        return False
    return True


# ---------------------------------------------------------------------------
# Well-formedness classes (basic / restricted hierarchy)


def is_classical(phi):
    """True when the formula contains no superposition node."""
    if isinstance(phi, ATOM_NODES):
        return True
    if isinstance(phi, Not):
        return is_classical(phi.body)
    if isinstance(phi, Sup):
        return False
    if isinstance(phi, BINARY_NODES):
        return is_classical(phi.left) and is_classical(phi.right)
    if isinstance(phi, QUANTIFIER_NODES):
        return is_classical(phi.body)
    raise SupkitError(f"not a formula: {phi!r}")


def is_basic(phi):
    """Connective combinations of classical formulas; quantifiers only
    inside classical subformulas."""
    if is_classical(phi):
        return True
    if isinstance(phi, Not):
        return is_basic(phi.body)
    if isinstance(phi, BINARY_NODES):
        return is_basic(phi.left) and is_basic(phi.right)
    return False


def is_restricted(phi):
    """Connective and quantifier combinations of basic formulas; every sup
    node must have basic operands."""
    if is_basic(phi):
        return True
    if isinstance(phi, Not):
        return is_restricted(phi.body)
    if isinstance(phi, Sup):
        return False
    if isinstance(phi, BINARY_NODES):
        return is_restricted(phi.left) and is_restricted(phi.right)
    if isinstance(phi, QUANTIFIER_NODES):
        return is_restricted(phi.body)
    return False


def classify(phi):
    """The tightest syntax class containing ``phi``."""
    if is_classical(phi):
        return SyntaxClass.CLASSICAL
    if is_basic(phi):
        return SyntaxClass.BASIC
    if is_restricted(phi):
        return SyntaxClass.RESTRICTED
    return SyntaxClass.UNRESTRICTED


# ---------------------------------------------------------------------------
# Printer

_LEVEL_QUANT = 0
_LEVEL_IFF = 1
_LEVEL_IMPLIES = 2
_LEVEL_OR = 3
_LEVEL_AND = 4
_LEVEL_SUP = 5
_LEVEL_NOT = 6
_LEVEL_ATOM = 7


def to_text_term(t):
    if isinstance(t, Variable):
        return t.name
    if isinstance(t, Constant):
        return t.name
    if isinstance(t, Parameter):
        return PARAM_PREFIX + t.element
    if isinstance(t, FuncApp):
        return f"{t.name}({','.join(to_text_term(a) for a in t.args)})"
    raise SupkitError(f"not a term: {t!r}")


def to_text(phi):
    """Canonical text form; ``parse(to_text(phi))`` returns ``phi``."""
    return _pp(phi, 0)


def _pp(phi, min_level):
    if isinstance(phi, PropAtom):
        text, level = phi.name, _LEVEL_ATOM
    elif isinstance(phi, PredAtom):
        text = f"{phi.name}({','.join(to_text_term(a) for a in phi.args)})"
        level = _LEVEL_ATOM
    elif isinstance(phi, Equality):
        text = f"{to_text_term(phi.lhs)} = {to_text_term(phi.rhs)}"
        level = _LEVEL_ATOM
    elif isinstance(phi, Not):
        text, level = "~" + _pp(phi.body, _LEVEL_NOT), _LEVEL_NOT
    elif isinstance(phi, Sup):
        text = _pp(phi.left, _LEVEL_SUP) + " sup " + _pp(phi.right, _LEVEL_SUP + 1)
        level = _LEVEL_SUP
    elif isinstance(phi, And):
        text = _pp(phi.left, _LEVEL_AND) + " /\\ " + _pp(phi.right, _LEVEL_AND + 1)
        level = _LEVEL_AND
    elif isinstance(phi, Or):
        text = _pp(phi.left, _LEVEL_OR) + " \\/ " + _pp(phi.right, _LEVEL_OR + 1)
        level = _LEVEL_OR
    elif isinstance(phi, Implies):
        text = _pp(phi.left, _LEVEL_IMPLIES + 1) + " -> " + _pp(phi.right, _LEVEL_IMPLIES)
        level = _LEVEL_IMPLIES
    elif isinstance(phi, Iff):
        text = _pp(phi.left, _LEVEL_IFF + 1) + " <-> " + _pp(phi.right, _LEVEL_IFF)
        level = _LEVEL_IFF
    elif isinstance(phi, Forall):
        text, level = f"forall {phi.var}. {_pp(phi.body, 0)}", _LEVEL_QUANT
    elif isinstance(phi, Exists):
        text, level = f"exists {phi.var}. {_pp(phi.body, 0)}", _LEVEL_QUANT
    else:
        raise SupkitError(f"not a formula: {phi!r}")
    if level < min_level:
        return "(" + text + ")"
    return text


def canonical_key(phi):
    """Injective string key for a formula, used to canonicalize pairs."""
    return to_text(phi)


def pair_key(a, b):
    """Order-insensitive key of an unordered pair; collapses to a singleton
    when both members are structurally equal."""
    ka, kb = canonical_key(a), canonical_key(b)
    if ka == kb:
        return (ka,)
    return (ka, kb) if ka < kb else (kb, ka)


# ---------------------------------------------------------------------------
# Definitional expansion into the ~ / -> / forall / sup fragment
#
# Used by the proof systems, whose propositional axiom basis is complete
# only for that fragment: a /\ b := ~(a -> ~b), a \/ b := ~a -> b,
# a <-> b := (a -> b) /\ (b -> a), exists v := ~forall v~.


def primitive_form(phi):
    if isinstance(phi, ATOM_NODES):
        return phi
    if isinstance(phi, Not):
        return Not(primitive_form(phi.body))
    if isinstance(phi, And):
        return Not(Implies(primitive_form(phi.left), Not(primitive_form(phi.right))))
    if isinstance(phi, Or):
        return Implies(Not(primitive_form(phi.left)), primitive_form(phi.right))
    if isinstance(phi, Implies):
        return Implies(primitive_form(phi.left), primitive_form(phi.right))
    if isinstance(phi, Iff):
        a, b = primitive_form(phi.left), primitive_form(phi.right)
        return Not(Implies(Implies(a, b), Not(Implies(b, a))))
    if isinstance(phi, Sup):
        return Sup(primitive_form(phi.left), primitive_form(phi.right))
    if isinstance(phi, Forall):
        return Forall(phi.var, primitive_form(phi.body))
    if isinstance(phi, Exists):
        return Not(Forall(phi.var, Not(primitive_form(phi.body))))
    raise SupkitError(f"not a formula: {phi!r}")


# ---------------------------------------------------------------------------
# Parser

_TOKEN_RE = re.compile(
    r"(?P<WS>\s+)"
    r"|(?P<ARROW2><->)"
    r"|(?P<ARROW>->)"
    r"|(?P<OR>\\/)"
    r"|(?P<AND>/\\)"
    r"|(?P<NOT>~)"
    r"|(?P<BAR>\|)"
    r"|(?P<LPAR>\()"
    r"|(?P<RPAR>\))"
    r"|(?P<COMMA>,)"
    r"|(?P<DOT>\.)"
    r"|(?P<EQ>=)"
    r"|(?P<PARAM>@[A-Za-z_0-9]+)"
    r"|(?P<IDENT>[A-Za-z_][A-Za-z_0-9]*)"
)

_KEYWORDS = {"forall", "exists", "sup"}


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "WS":
            value = m.group()
            if kind == "IDENT" and value in _KEYWORDS:
                kind = value.upper()
            if kind == "BAR":
                kind = "SUP"
            tokens.append((kind, value, pos))
        pos = m.end()
    tokens.append(("EOF", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text, sig):
        self.sig = sig
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self, k=0):
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind):
        tok = self.next()
        if tok[0] != kind:
            raise ParseError(f"expected {kind}, found {tok[1]!r}", tok[2])
        return tok

    def formula(self):
        return self.iff()

    def iff(self):
        left = self.implies()
        if self.peek()[0] == "ARROW2":
            self.next()
            return Iff(left, self.iff())
        return left

    def implies(self):
        left = self.disj()
        if self.peek()[0] == "ARROW":
            self.next()
            return Implies(left, self.implies())
        return left

    def disj(self):
        left = self.conj()
        while self.peek()[0] == "OR":
            self.next()
            left = Or(left, self.conj())
        return left

    def conj(self):
        left = self.sup()
        while self.peek()[0] == "AND":
            self.next()
            left = And(left, self.sup())
        return left

    def sup(self):
        left = self.neg()
        while self.peek()[0] == "SUP":
            self.next()
            left = Sup(left, self.neg())
        return left

    def neg(self):
        if self.peek()[0] == "NOT":
            self.next()
            return Not(self.neg())
        return self.atom()

    def atom(self):
        kind, value, pos = self.peek()
        if kind == "LPAR":
            self.next()
            phi = self.formula()
            self.expect("RPAR")
            return phi
        if kind in ("FORALL", "EXISTS"):
            self.next()
            var_tok = self.expect("IDENT")
            var = var_tok[1]
            if var in _KEYWORDS or not self._is_free_name(var):
                raise ParseError(f"cannot bind declared symbol {var!r}", var_tok[2])
            self.expect("DOT")
            body = self.formula()
            return (Forall if kind == "FORALL" else Exists)(var, body)
        if kind == "IDENT":
            if value in self.sig.predicates and self.peek(1)[0] == "LPAR":
                self.next()
                args = self.args(value, self.sig.predicates[value], pos)
                return PredAtom(value, args)
            if self.sig.is_prop_atom(value) and self.peek(1)[0] not in ("EQ", "LPAR"):
                self.next()
                return PropAtom(value)
            lhs = self.term()
            self.expect("EQ")
            return Equality(lhs, self.term())
        if kind == "PARAM":
            lhs = self.term()
            self.expect("EQ")
            return Equality(lhs, self.term())
        raise ParseError(f"expected a formula, found {value!r}", pos)

    def args(self, name, arity, pos):
        self.expect("LPAR")
        out = [self.term()]
        while self.peek()[0] == "COMMA":
            self.next()
            out.append(self.term())
        self.expect("RPAR")
        if len(out) != arity:
            raise ArityError(f"{name!r} expects {arity} argument(s), got {len(out)}", pos)
        return tuple(out)

    def term(self):
        kind, value, pos = self.next()
        if kind == "PARAM":
            return Parameter(value[len(PARAM_PREFIX):])
        if kind != "IDENT":
            raise ParseError(f"expected a term, found {value!r}", pos)
        if value in _KEYWORDS:
            raise ParseError(f"expected a term, found keyword {value!r}", pos)
        if value in self.sig.functions:
            args = self.args(value, self.sig.functions[value], pos)
            return FuncApp(value, args)
        if value in self.sig.constants:
            return Constant(value)
        if self.peek()[0] == "LPAR":
            raise UnknownSymbolError(f"unknown function or predicate {value!r}", pos)
        if value in self.sig.predicates or self.sig.is_prop_atom(value):
            raise ParseError(f"{value!r} cannot appear inside a term", pos)
        return Variable(value)

    def _is_free_name(self, name):
        return (
            name not in self.sig.constants
            and name not in self.sig.functions
            and name not in self.sig.predicates
            and not self.sig.is_prop_atom(name)
        )


def parse(text, sig=None):
    """Parse the text grammar into a Formula; round-trips with to_text."""
    parser = _Parser(text, sig or DEFAULT_SIGNATURE)
    phi = parser.formula()
    kind, value, pos = parser.peek()
    if kind != "EOF":
        raise ParseError(f"trailing input {value!r}", pos)
    return phi


def parse_term(text, sig=None):
    parser = _Parser(text, sig or DEFAULT_SIGNATURE)
    t = parser.term()
    kind, value, pos = parser.peek()
    if kind != "EOF":
        raise ParseError(f"trailing input {value!r}", pos)
    return t
