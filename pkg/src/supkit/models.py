"""Finite structures, propositional valuations, and classical evaluation.

Structures have named domain elements; equality is always identity.
Parameter terms denote themselves, so they are only meaningful against a
structure whose domain contains the element — except that an enumerated
structure may carry an explicit interpretation for a parameter under its
printed name (used when parameters must range over candidate structures,
e.g. inside the bounded equivalence oracle).
"""

import itertools
from dataclasses import dataclass, field

from .syntax import (
    And,
    Constant,
    Equality,
    Exists,
    Forall,
    FuncApp,
    Iff,
    Implies,
    Not,
    Or,
    PARAM_PREFIX,
    Parameter,
    PredAtom,
    PropAtom,
    Sup,
    SupkitError,
    Variable,
    is_classical,
    to_text_term,
)


class EvalError(SupkitError):
    pass


@dataclass(frozen=True)
class Valuation:
    """Truth assignment for propositional atoms."""

    assignment: dict

    def truth(self, name):
        if name not in self.assignment:
            raise EvalError(f"valuation does not cover atom {name!r}")
        return bool(self.assignment[name])

    def to_json(self):
        return {"atoms": {k: int(v) for k, v in sorted(self.assignment.items())}}

    @classmethod
    def from_json(cls, data):
        return cls({k: bool(v) for k, v in data["atoms"].items()})

    def describe(self):
        return ", ".join(f"{k}={int(v)}" for k, v in sorted(self.assignment.items()))


@dataclass(frozen=True)
class Structure:
    """Finite first-order structure with named elements.

    functions maps a name to a dict from argument tuples to an element;
    predicates maps a name to the set of tuples where it holds.
    """

    domain: tuple
    constants: dict = field(default_factory=dict)
    functions: dict = field(default_factory=dict)
    predicates: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.domain:
            raise SupkitError("structure domain must be nonempty")

    def to_json(self):
        return {
            "domain": list(self.domain),
            "constants": dict(sorted(self.constants.items())),
            "functions": {
                name: {",".join(args): val for args, val in sorted(table.items())}
                for name, table in sorted(self.functions.items())
            },
            "predicates": {
                name: sorted(list(t) for t in tuples)
                for name, tuples in sorted(self.predicates.items())
            },
        }

    @classmethod
    def from_json(cls, data):
        return cls(
            domain=tuple(data["domain"]),
            constants=dict(data.get("constants", {})),
            functions={
                name: {tuple(k.split(",")): v for k, v in table.items()}
                for name, table in data.get("functions", {}).items()
            },
            predicates={
                name: frozenset(tuple(t) for t in tuples)
                for name, tuples in data.get("predicates", {}).items()
            },
        )

    def describe(self):
        bits = [f"domain={{{','.join(self.domain)}}}"]
        for name, el in sorted(self.constants.items()):
            bits.append(f"{name}={el}")
        for name, table in sorted(self.functions.items()):
            inner = ",".join(f"{'/'.join(k)}->{v}" for k, v in sorted(table.items()))
            bits.append(f"{name}:{{{inner}}}")
        for name, tuples in sorted(self.predicates.items()):
            inner = ",".join("(" + ",".join(t) + ")" for t in sorted(tuples))
            bits.append(f"{name}={{{inner}}}")
        return " ".join(bits)


def eval_term(structure, term, env):
    if isinstance(term, Variable):
        if term.name not in env:
            raise EvalError(f"unbound variable {term.name!r}")
        return env[term.name]
    if isinstance(term, Constant):
        if term.name not in structure.constants:
            raise EvalError(f"structure does not interpret constant {term.name!r}")
        return structure.constants[term.name]
    if isinstance(term, Parameter):
        pseudo = PARAM_PREFIX + term.element
        if pseudo in structure.constants:
            return structure.constants[pseudo]
        if term.element in structure.domain:
            return term.element
        raise EvalError(f"parameter {to_text_term(term)} not in domain")
    if isinstance(term, FuncApp):
        if term.name not in structure.functions:
            raise EvalError(f"structure does not interpret function {term.name!r}")
        args = tuple(eval_term(structure, a, env) for a in term.args)
        table = structure.functions[term.name]
        if args not in table:
            raise EvalError(f"function {term.name!r} undefined on {args}")
        return table[args]
    raise EvalError(f"not a term: {term!r}")


def eval_classical(model, phi, env=None):
    """Standard Tarskian truth of a classical formula.

    ``model`` is a Structure (first-order formulas) or a Valuation
    (propositional formulas); ``env`` maps free variables to elements.
    """
    if not is_classical(phi):
        raise EvalError("eval_classical requires a sup-free formula")
    env = env or {}
    return _eval(model, phi, env)


def _eval(model, phi, env):
    if isinstance(phi, PropAtom):
        if not isinstance(model, Valuation):
            raise EvalError("propositional atom requires a valuation")
        return model.truth(phi.name)
    if isinstance(model, Valuation) and not isinstance(phi, (Not, And, Or, Implies, Iff, PropAtom)):
        raise EvalError(f"valuations cannot evaluate {type(phi).__name__} nodes")
    if isinstance(phi, PredAtom):
        args = tuple(eval_term(model, a, env) for a in phi.args)
        return args in model.predicates.get(phi.name, frozenset())
    if isinstance(phi, Equality):
        return eval_term(model, phi.lhs, env) == eval_term(model, phi.rhs, env)
    if isinstance(phi, Not):
        return not _eval(model, phi.body, env)
    if isinstance(phi, And):
        return _eval(model, phi.left, env) and _eval(model, phi.right, env)
    if isinstance(phi, Or):
        return _eval(model, phi.left, env) or _eval(model, phi.right, env)
    if isinstance(phi, Implies):
        return (not _eval(model, phi.left, env)) or _eval(model, phi.right, env)
    if isinstance(phi, Iff):
        return _eval(model, phi.left, env) == _eval(model, phi.right, env)
    if isinstance(phi, Forall):
        return all(_eval(model, phi.body, {**env, phi.var: x}) for x in model.domain)
    if isinstance(phi, Exists):
        return any(_eval(model, phi.body, {**env, phi.var: x}) for x in model.domain)
    if isinstance(phi, Sup):
        raise EvalError("classical evaluation reached a sup node")
    raise EvalError(f"not a formula: {phi!r}")


# ---------------------------------------------------------------------------
# Vocabulary extraction and model enumeration


@dataclass(frozen=True)
class Vocabulary:
    prop_atoms: tuple = ()
    constants: tuple = ()
    functions: tuple = ()   # (name, arity) pairs
    predicates: tuple = ()  # (name, arity) pairs
    parameters: tuple = ()
    fo_syntax: bool = False  # equality/quantifiers/variables seen

    @property
    def first_order(self):
        return bool(self.constants or self.functions or self.predicates
                    or self.parameters or self.fo_syntax)

    def describe(self):
        return {
            "prop_atoms": list(self.prop_atoms),
            "constants": list(self.constants),
            "functions": [list(f) for f in self.functions],
            "predicates": [list(p) for p in self.predicates],
            "parameters": list(self.parameters),
        }


def vocabulary_of(formulas):
    atoms, consts, funcs, preds, params = set(), set(), set(), set(), set()
    fo_syntax = [False]

    def walk_term(t):
        if isinstance(t, Constant):
            consts.add(t.name)
        elif isinstance(t, Parameter):
            params.add(t.element)
        elif isinstance(t, FuncApp):
            funcs.add((t.name, len(t.args)))
            for a in t.args:
                walk_term(a)

    def walk(phi):
        if isinstance(phi, PropAtom):
            atoms.add(phi.name)
        elif isinstance(phi, PredAtom):
            fo_syntax[0] = True
            preds.add((phi.name, len(phi.args)))
            for a in phi.args:
                walk_term(a)
        elif isinstance(phi, Equality):
            fo_syntax[0] = True
            walk_term(phi.lhs)
            walk_term(phi.rhs)
        elif isinstance(phi, Not):
            walk(phi.body)
        elif isinstance(phi, (And, Or, Implies, Iff, Sup)):
            walk(phi.left)
            walk(phi.right)
        elif isinstance(phi, (Forall, Exists)):
            fo_syntax[0] = True
            walk(phi.body)

    for phi in formulas:
        walk(phi)
    if atoms and fo_syntax[0]:
        raise EvalError(
            "vocabulary mixes propositional atoms with first-order symbols; "
            "search spaces support one kind at a time"
        )
    return Vocabulary(
        prop_atoms=tuple(sorted(atoms)),
        constants=tuple(sorted(consts)),
        functions=tuple(sorted(funcs)),
        predicates=tuple(sorted(preds)),
        parameters=tuple(sorted(params)),
        fo_syntax=fo_syntax[0],
    )


def valuations_over(atoms):
    """All truth assignments of the given atoms, in lexicographic order."""
    atoms = tuple(sorted(atoms))
    for bits in itertools.product((False, True), repeat=len(atoms)):
        yield Valuation(dict(zip(atoms, bits)))


def element_names(n):
    return tuple(f"e{i}" for i in range(n))


def structures_over(vocab, max_domain=3, domain=None):
    """All structures interpreting the vocabulary, domains of size 1..max.

    Parameters are interpreted like constants under their printed ``@`` name.
    Enumeration order is deterministic: domain size ascending, then
    interpretations in sorted symbol order.
    """
    if vocab.prop_atoms:
        raise EvalError("structures cannot interpret propositional atoms")
    sizes = [len(domain)] if domain is not None else range(1, max_domain + 1)
    const_names = list(vocab.constants) + [PARAM_PREFIX + p for p in vocab.parameters]
    for n in sizes:
        elems = tuple(domain) if domain is not None else element_names(n)
        const_choices = [elems] * len(const_names)
        func_tables = []
        for fname, arity in vocab.functions:
            keys = list(itertools.product(elems, repeat=arity))
            func_tables.append((fname, keys))
        pred_tuples = []
        for pname, arity in vocab.predicates:
            keys = list(itertools.product(elems, repeat=arity))
            pred_tuples.append((pname, keys))
        for const_vals in itertools.product(*const_choices):
            constants = dict(zip(const_names, const_vals))
            func_value_spaces = [
                itertools.product(elems, repeat=len(keys)) for _, keys in func_tables
            ]
            for func_vals in itertools.product(*func_value_spaces):
                functions = {
                    name: dict(zip(keys, vals))
                    for (name, keys), vals in zip(func_tables, func_vals)
                }
                pred_subsets = [
                    itertools.product((False, True), repeat=len(keys))
                    for _, keys in pred_tuples
                ]
                for picks in itertools.product(*pred_subsets):
                    predicates = {
                        name: frozenset(k for k, keep in zip(keys, pick) if keep)
                        for (name, keys), pick in zip(pred_tuples, picks)
                    }
                    yield Structure(elems, constants, functions, predicates)
