"""Choice tables over unordered pairs of classical formulas, the collapsing
map that eliminates sup nodes, membership/extendability checks for the
table classes (all / regular / associative / regular+associative /
negation-decreasing), and lazy enumeration of admissible tables.

Tables are immutable values; pair keys are canonicalized so symmetry and
idempotence hold by construction.
"""

import itertools
from dataclasses import dataclass, field

from . import models
from .syntax import (
    And,
    Exists,
    Forall,
    Iff,
    Implies,
    Not,
    Or,
    Sup,
    SupkitError,
    SyntaxClass,
    canonical_key,
    classify,
    free_vars,
    is_classical,
    is_sentence,
    parse,
    to_text,
)


class MissingEntryError(SupkitError):
    """Raised when a table has no entry for a pair it is asked about.

    Enumeration treats this as a branch point; ``pair`` is in canonical
    order (smaller key first).
    """

    def __init__(self, pair):
        self.pair = pair
        a, b = pair
        super().__init__(f"no entry for pair {{{to_text(a)}, {to_text(b)}}}")


class NotBasicError(SupkitError):
    pass


class NotRestrictedError(SupkitError):
    pass


class OracleRequiredError(SupkitError):
    pass


class ChoiceDomainError(SupkitError):
    pass


SENTENCE_MODE = "sentence"
FORMULA_MODE = "formula"


def _ordered(a, b):
    ka, kb = canonical_key(a), canonical_key(b)
    return ((a, ka), (b, kb)) if ka <= kb else ((b, kb), (a, ka))


@dataclass(frozen=True)
class ChoiceTable:
    """Finite partial map from unordered pairs of classical formulas to a
    chosen member.  Sentence-mode tables hold closed formulas only;
    formula-mode tables may hold open formulas."""

    mode: str = SENTENCE_MODE
    entries: dict = field(default_factory=dict)   # (key1,key2) -> chosen key
    formulas: dict = field(default_factory=dict)  # key -> Formula

    def __post_init__(self):
        if self.mode not in (SENTENCE_MODE, FORMULA_MODE):
            raise ChoiceDomainError(f"unknown table mode {self.mode!r}")

    def _check_member(self, phi):
        if not is_classical(phi):
            raise ChoiceDomainError(
                f"choice tables hold classical formulas, got {to_text(phi)}")
        if self.mode == SENTENCE_MODE and not is_sentence(phi):
            raise ChoiceDomainError(
                f"sentence-mode table given open formula {to_text(phi)}")

    def defined_on(self, a, b):
        (_, ka), (_, kb) = _ordered(a, b)
        return ka == kb or (ka, kb) in self.entries

    def with_entry(self, a, b, choice):
        """A new table extended by one entry; the choice must be a member."""
        self._check_member(a)
        self._check_member(b)
        (fa, ka), (fb, kb) = _ordered(a, b)
        kc = canonical_key(choice)
        if kc not in (ka, kb):
            raise ChoiceDomainError(
                f"choice {to_text(choice)} is not a member of the pair")
        if ka == kb:
            return self
        old = self.entries.get((ka, kb))
        if old is not None and old != kc:
            raise ChoiceDomainError(
                f"conflicting entry for pair {{{ka}, {kb}}}")
        entries = dict(self.entries)
        entries[(ka, kb)] = kc
        formulas = dict(self.formulas)
        formulas[ka] = fa
        formulas[kb] = fb
        return ChoiceTable(self.mode, entries, formulas)

    def pairs(self):
        """Iterate (member, member, chosen) triples in canonical order."""
        for (ka, kb), kc in sorted(self.entries.items()):
            fa, fb = self.formulas[ka], self.formulas[kb]
            yield fa, fb, fa if kc == ka else fb

    def __len__(self):
        return len(self.entries)

    def to_json(self):
        return {
            "mode": self.mode,
            "entries": [
                {"pair": [to_text(a), to_text(b)], "choice": to_text(c)}
                for a, b, c in self.pairs()
            ],
        }

    @classmethod
    def from_json(cls, data, sig=None):
        table = cls(mode=data.get("mode", SENTENCE_MODE))
        for entry in data.get("entries", ()):
            a = parse(entry["pair"][0], sig)
            b = parse(entry["pair"][1], sig)
            c = parse(entry["choice"], sig)
            table = table.with_entry(a, b, c)
        return table

    def describe(self):
        return "; ".join(
            f"{{{to_text(a)}, {to_text(b)}}} -> {to_text(c)}" for a, b, c in self.pairs()
        )


def choose(table, a, b):
    """The table's pick from {a, b}; structurally equal arguments pick a."""
    table._check_member(a)
    table._check_member(b)
    (fa, ka), (fb, kb) = _ordered(a, b)
    if ka == kb:
        return a
    kc = table.entries.get((ka, kb))
    if kc is None:
        raise MissingEntryError((fa, fb))
    return fa if kc == ka else fb


def collapse(table, phi):
    """Eliminate every sup node by applying the table bottom-up.

    Classical subformulas are returned verbatim; connectives commute with
    the collapse; in sentence mode the input must be a basic sentence
    (quantifiers may only occur inside classical subformulas), in formula
    mode quantifiers commute as well.
    """
    if table.mode == SENTENCE_MODE:
        if free_vars(phi):
            raise NotBasicError(
                f"sentence-mode collapse requires a sentence: {to_text(phi)}")
        if classify(phi) > SyntaxClass.BASIC:
            raise NotBasicError(
                f"sentence-mode collapse requires a basic sentence: {to_text(phi)}")
    return _collapse(table, phi)


def _collapse(table, phi):
    if is_classical(phi):
        return phi
    if isinstance(phi, Not):
        return Not(_collapse(table, phi.body))
    if isinstance(phi, (And, Or, Implies, Iff)):
        return type(phi)(_collapse(table, phi.left), _collapse(table, phi.right))
    if isinstance(phi, Sup):
        return choose(table, _collapse(table, phi.left), _collapse(table, phi.right))
    if isinstance(phi, (Forall, Exists)):
        if table.mode != FORMULA_MODE:
            raise NotBasicError(
                f"collapse undefined for quantified non-classical {to_text(phi)}")
        return type(phi)(phi.var, _collapse(table, phi.body))
    raise SupkitError(f"not a formula: {phi!r}")


# ---------------------------------------------------------------------------
# Equivalence oracles


class TruthTableOracle:
    """Exact classical equivalence for propositional formulas."""

    def __init__(self):
        self._cache = {}

    def equivalent(self, a, b):
        if a == b:
            return True
        key = tuple(sorted((canonical_key(a), canonical_key(b))))
        hit = self._cache.get(key)
        if hit is None:
            vocab = models.vocabulary_of([a, b])
            if vocab.first_order:
                raise SupkitError(
                    "truth-table oracle supports propositional formulas only")
            hit = all(
                models.eval_classical(v, a) == models.eval_classical(v, b)
                for v in models.valuations_over(vocab.prop_atoms)
            )
            self._cache[key] = hit
        return hit

    def describe(self):
        return {"kind": "truth-table"}


class BoundedModelOracle:
    """Classical equivalence decided over all structures with domain size up
    to a bound (exact for propositional inputs).  Open formulas are compared
    under every assignment of their free variables."""

    def __init__(self, max_domain=3):
        self.max_domain = max_domain
        self._cache = {}

    def equivalent(self, a, b):
        if a == b:
            return True
        key = tuple(sorted((canonical_key(a), canonical_key(b))))
        hit = self._cache.get(key)
        if hit is None:
            hit = self._compute(a, b)
            self._cache[key] = hit
        return hit

    def _compute(self, a, b):
        vocab = models.vocabulary_of([a, b])
        if not vocab.first_order:
            return all(
                models.eval_classical(v, a) == models.eval_classical(v, b)
                for v in models.valuations_over(vocab.prop_atoms)
            )
        fv = sorted(free_vars(a) | free_vars(b))
        for structure in models.structures_over(vocab, self.max_domain):
            for values in itertools.product(structure.domain, repeat=len(fv)):
                env = dict(zip(fv, values))
                if models.eval_classical(structure, a, env) != \
                        models.eval_classical(structure, b, env):
                    return False
        return True

    def describe(self):
        return {"kind": "bounded-model", "max_domain": self.max_domain}


# ---------------------------------------------------------------------------
# Class specifications and membership


CLASS_NAMES = ("all", "reg", "asso", "regstar", "dec")
_NEEDS_ORACLE = {"reg": True, "regstar": True, "dec": True, "all": False, "asso": False}


@dataclass(frozen=True)
class ClassSpec:
    """A table class plus the equivalence oracle needed to decide it."""

    name: str
    oracle: object = None

    def __post_init__(self):
        if self.name not in CLASS_NAMES:
            raise SupkitError(f"unknown table class {self.name!r}")

    def require_oracle(self):
        if _NEEDS_ORACLE[self.name] and self.oracle is None:
            raise OracleRequiredError(
                f"class {self.name!r} requires an equivalence oracle")
        return self.oracle

    def describe(self):
        out = {"class": self.name}
        if self.oracle is not None and _NEEDS_ORACLE[self.name]:
            out["oracle"] = self.oracle.describe()
        return out


@dataclass(frozen=True)
class ClassVerdict:
    ok: bool
    kind: str = ""
    witness: tuple = ()
    detail: str = ""

    def __bool__(self):
        return self.ok


@dataclass(frozen=True)
class PreferenceGraph:
    """Winner -> loser digraph induced by a table's entries."""

    nodes: frozenset
    edges: frozenset

    @classmethod
    def from_table(cls, table):
        nodes, edges = set(), set()
        for a, b, c in table.pairs():
            ka, kb, kc = canonical_key(a), canonical_key(b), canonical_key(c)
            loser = kb if kc == ka else ka
            nodes.update((ka, kb))
            edges.add((kc, loser))
        return cls(frozenset(nodes), frozenset(edges))

    def has_cycle(self):
        return _has_cycle(self.nodes, self.edges)


def _has_cycle(nodes, edges):
    succ = {}
    for a, b in edges:
        succ.setdefault(a, set()).add(b)
    WHITE, GREY, BLACK = 0, 1, 2
    color = {n: WHITE for n in nodes}
    for a, b in edges:
        color.setdefault(a, WHITE)
        color.setdefault(b, WHITE)

    def visit(n):
        color[n] = GREY
        for m in succ.get(n, ()):
            if color[m] == GREY:
                return True
            if color[m] == WHITE and visit(m):
                return True
        color[n] = BLACK
        return False

    return any(color[n] == WHITE and visit(n) for n in list(color))


def class_representatives(oracle, formulas):
    """Map canonical key -> representative key (lexicographically least
    member of each equivalence class within the given collection)."""
    reps = {}            # key -> rep key
    rep_formulas = []    # (rep key, formula)
    items = sorted({canonical_key(f): f for f in formulas}.items())
    for key, phi in items:
        assigned = None
        for rep_key, rep_phi in rep_formulas:
            if oracle.equivalent(phi, rep_phi):
                assigned = rep_key
                break
        if assigned is None:
            assigned = key
            rep_formulas.append((key, phi))
        reps[key] = assigned
    return reps


def _entry_triples(table):
    return [(a, b, c) for a, b, c in table.pairs()]


def _reg_violation(table, oracle):
    """Two entries whose class-pairs coincide must choose equivalent sides."""
    triples = _entry_triples(table)
    members = [f for a, b, _ in triples for f in (a, b)]
    reps = class_representatives(oracle, members)
    seen = {}
    for a, b, c in triples:
        ra, rb = reps[canonical_key(a)], reps[canonical_key(b)]
        rc = reps[canonical_key(c)]
        class_pair = (ra, rb) if ra <= rb else (rb, ra)
        if class_pair[0] == class_pair[1]:
            continue
        prev = seen.get(class_pair)
        if prev is not None and prev[0] != rc:
            return (prev[1], (a, b, c))
        seen[class_pair] = (rc, (a, b, c))
    return None


def _class_graphs(table, oracle):
    """Split entry constraints into an inter-class digraph over representative
    keys and per-class sentence-level digraphs; also return the rep map
    extended with single negations (for the duality closure)."""
    triples = _entry_triples(table)
    members = [f for a, b, _ in triples for f in (a, b)]
    negs = [Not(f) for f in members]
    reps = class_representatives(oracle, members + negs)
    neg_rep = {}
    for f in members:
        neg_rep[reps[canonical_key(f)]] = reps[canonical_key(Not(f))]
    inter_edges, intra_edges = set(), set()
    for a, b, c in triples:
        ka, kb, kc = canonical_key(a), canonical_key(b), canonical_key(c)
        ra, rb = reps[ka], reps[kb]
        loser_key = kb if kc == ka else ka
        if ra == rb:
            intra_edges.add((kc, loser_key))
        else:
            winner_rep = reps[kc]
            loser_rep = rb if winner_rep == ra else ra
            inter_edges.add((winner_rep, loser_rep))
    return reps, neg_rep, inter_edges, intra_edges


def _dec_closure(inter_edges, neg_rep):
    """Close class edges under the duality rule: A beats B forces not-B to
    beat not-A (inequivalent classes only; the involution is fixed-point
    free classically)."""
    closed = set(inter_edges)
    frontier = list(inter_edges)
    while frontier:
        a, b = frontier.pop()
        na, nb = neg_rep.get(a), neg_rep.get(b)
        if na is None or nb is None or na == nb:
            continue
        dual = (nb, na)
        if dual not in closed:
            closed.add(dual)
            frontier.append(dual)
    return closed


def check_class(table, spec, universe):
    """Membership of a table in a class, relative to a finite universe of
    classical sentences.  Returns the first violation found as a witness."""
    name = spec.name
    if name == "all":
        return ClassVerdict(True)
    if name in ("asso", "regstar", "dec"):
        verdict = _check_asso(table, universe)
        if not verdict:
            return verdict
    if name in ("reg", "regstar", "dec"):
        oracle = spec.require_oracle()
        violation = _reg_violation(table, oracle)
        if violation is not None:
            return ClassVerdict(
                False, kind="reg", witness=violation,
                detail="entries on equivalent pairs choose inequivalent sides",
            )
    if name == "dec":
        oracle = spec.require_oracle()
        reps, neg_rep, inter, intra = _class_graphs(table, oracle)
        if _has_cycle(set(), intra):
            return ClassVerdict(False, kind="dec", detail="cyclic choices inside a class")
        closed = _dec_closure(inter, neg_rep)
        if _has_cycle(set(), closed):
            return ClassVerdict(
                False, kind="dec",
                detail="duality-closed preference graph is cyclic",
            )
    return ClassVerdict(True)


def _check_asso(table, universe):
    for a, b, c in itertools.product(universe, repeat=3):
        left = choose(table, choose(table, a, b), c)
        right = choose(table, a, choose(table, b, c))
        if left != right:
            return ClassVerdict(
                False, kind="asso", witness=(a, b, c),
                detail="f(f(a,b),c) != f(a,f(b,c))",
            )
    return ClassVerdict(True)


def extendable(table, spec):
    """Whether some total table in the class agrees with this partial table.

    all: always; reg: class-pair choices consistent; asso: preference graph
    acyclic; regstar: both plus per-class acyclicity; dec: additionally the
    duality-closed class graph is acyclic.
    """
    name = spec.name
    if name == "all":
        return True
    if name == "asso":
        return not PreferenceGraph.from_table(table).has_cycle()
    oracle = spec.require_oracle()
    if _reg_violation(table, oracle) is not None:
        return False
    if name == "reg":
        return True
    reps, neg_rep, inter, intra = _class_graphs(table, oracle)
    if _has_cycle(set(), intra) or _has_cycle(set(), inter):
        return False
    if name == "regstar":
        return True
    return not _has_cycle(set(), _dec_closure(inter, neg_rep))


def enumerate_tables(task, spec, seed=None, mode=SENTENCE_MODE):
    """Run ``task`` (a callable taking a table) under every admissible total
    extension of the seed table on the pairs the task actually reaches.

    Branch points are discovered lazily from MissingEntryError; each branch
    is pruned through ``extendable``.  Yields (table, result) pairs in
    deterministic order (canonically smaller choice first).
    """
    base = seed if seed is not None else ChoiceTable(mode=mode)

    def run(table):
        try:
            result = task(table)
        except MissingEntryError as exc:
            a, b = exc.pair
            for pick in (a, b):
                extended = table.with_entry(a, b, pick)
                if extendable(extended, spec):
                    yield from run(extended)
            return
        yield table, result

    yield from run(base)
