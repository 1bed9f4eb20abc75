from hilbertlib import dn_iff_proof
from supkit.choice import ChoiceTable, ClassSpec, TruthTableOracle, collapse, extendable
from supkit.proofs import (
    GR,
    MP,
    SV,
    Axiom,
    Hyp,
    Proof,
    ProofLine,
    check_proof,
    derives,
    match_axiom,
    proof_from_json,
    proof_to_json,
)
from supkit.syntax import (
    And,
    Constant,
    Forall,
    Iff,
    Implies,
    Not,
    Or,
    PredAtom,
    PropAtom,
    Sup,
    Variable,
    parse,
    to_text,
)

p0, p1, p2 = PropAtom("p0"), PropAtom("p1"), PropAtom("p2")


def proof(system, lines, hypotheses=(), **kw):
    return Proof(system=system, hypotheses=tuple(hypotheses),
                 lines=tuple(ProofLine(f, j) for f, j in lines), **kw)


# ---------------------------------------------------------------------------
# Axiom matching


def test_match_s1():
    binding = match_axiom(Implies(And(p0, p1), Sup(p0, p1)), "S1")
    assert binding == {"phi": p0, "psi": p1}
    assert match_axiom(Implies(And(p0, p1), Sup(p1, p0)), "S1") is None


def test_match_p_schemes_through_sugar():
    # sugar on the metavariable side is fine: the instance is compared
    # after definitional expansion
    phi = Or(p0, p1)
    assert match_axiom(Implies(phi, Implies(p2, phi)), "P1") is not None
    assert match_axiom(parse("(~p0 -> p1) -> (p2 -> (~p0 -> p1))"), "P1") is not None


def test_match_ui():
    inst = parse("(forall v. P(v)) -> P(c1)")
    binding = match_axiom(inst, "UI")
    assert binding["t"] == Constant("c1")
    # the instantiating term must be closed
    assert match_axiom(parse("(forall v. P(v)) -> P(u)"), "UI") is None
    # vacuous instantiation is legal
    assert match_axiom(parse("(forall v. p0) -> p0"), "UI") is not None
    # mixed instantiation is not an instance
    assert match_axiom(parse("(forall v. R(v,v)) -> R(c1,c2)"), "UI") is None


def test_match_d_side_condition():
    good = parse("(forall v. (p0 -> Q(v))) -> (p0 -> forall v. Q(v))")
    assert match_axiom(good, "D") is not None
    bad = parse("(forall v. (Q(v) -> Q(v))) -> (Q(v) -> forall v. Q(v))")
    assert match_axiom(bad, "D") is None


def test_match_equality_schemes():
    assert match_axiom(parse("forall v. v = v"), "I1") is not None
    assert match_axiom(parse("forall v. forall u. (v = u -> u = v)"), "I2") is not None
    assert match_axiom(
        parse("forall v. forall u. forall w. (v = u /\\ u = w -> v = w)"), "I3"
    ) is not None
    assert match_axiom(
        parse("forall v. forall u. (v = u -> g(v) = g(u))"), "I4"
    ) is not None
    assert match_axiom(
        parse("forall v. forall u. (v = u -> (P(v) -> P(u)))"), "I5"
    ) is not None
    assert match_axiom(
        parse("forall v. forall u. (v = u -> (P(v) -> P(v)))"), "I5"
    ) is None


# ---------------------------------------------------------------------------
# Proof checking


def s1_proof(system="K0"):
    return proof(system, [
        (And(p0, p1), Hyp()),
        (Implies(And(p0, p1), Sup(p0, p1)), Axiom("S1")),
        (Sup(p0, p1), MP(1, 2)),
    ], hypotheses=[And(p0, p1)])


def test_three_line_s1_proof():
    assert check_proof(s1_proof()).ok


def test_mp_misalignment_diagnosed():
    bad = proof("K0", [
        (And(p0, p1), Hyp()),
        (Implies(And(p0, p1), Sup(p0, p1)), Axiom("S1")),
        (Sup(p0, p2), MP(1, 2)),
    ], hypotheses=[And(p0, p1)])
    verdict = check_proof(bad)
    assert not verdict.ok and verdict.line == 3 and "MP" in verdict.reason


def test_identity_chain():
    aa = Implies(p0, p0)
    t1 = Implies(p0, Implies(aa, p0))
    t3 = Implies(Implies(p0, aa), aa)
    lines = [
        (Implies(t1, t3), Axiom("P2")),
        (t1, Axiom("P1")),
        (t3, MP(2, 1)),
        (Implies(p0, aa), Axiom("P1")),
        (aa, MP(4, 3)),
    ]
    assert check_proof(proof("K0", lines)).ok


def sv_proof(system="K1"):
    cert = dn_iff_proof("K0", p0)
    lines = [(line.formula, line.just) for line in cert.lines]
    premise_index = len(lines)
    lines.append((Iff(Sup(Not(Not(p0)), p1), Sup(p0, p1)), SV(premise_index, cert)))
    return proof(system, lines)


def test_sv_with_certificate():
    assert check_proof(sv_proof()).ok


def test_sv_rejected_in_k0():
    verdict = check_proof(sv_proof(system="K0"))
    assert not verdict.ok and "SV not available in K0" in verdict.reason


def test_sv_certificate_must_be_hypothesis_free():
    cert = dn_iff_proof("K0", p0)
    tainted = Proof("K0", hypotheses=(p2,), lines=cert.lines)
    lines = [(line.formula, line.just) for line in cert.lines]
    lines.append((Iff(Sup(Not(Not(p0)), p1), Sup(p0, p1)), SV(len(cert.lines), tainted)))
    verdict = check_proof(proof("K1", lines))
    assert not verdict.ok and "hypotheses" in verdict.reason


def test_k_system_rejects_first_order_syntax():
    bad = proof("K0", [(parse("P(c1) -> P(c1)"), Axiom("P1"))])
    verdict = check_proof(bad)
    assert not verdict.ok and "propositional" in verdict.reason


def test_restricted_mode_default():
    unrestricted_formula = Sup(
        Forall("v", Sup(PredAtom("P", (Variable("v"),)), PredAtom("Q", (Variable("v"),)))),
        PropAtom("p0") if False else PredAtom("P", (Constant("c1"),)),
    )
    bad = proof("L0", [(unrestricted_formula, Hyp())], hypotheses=[unrestricted_formula])
    verdict = check_proof(bad)
    assert not verdict.ok and "restricted" in verdict.reason
    ok = proof("L0", [(unrestricted_formula, Hyp())],
               hypotheses=[unrestricted_formula], unrestricted=True)
    assert check_proof(ok).ok


def test_gr_eigenvariable_discipline():
    ui = parse("(forall v. P(v)) -> P(c1)")
    base = [
        (parse("forall v. P(v)"), Hyp()),
        (ui, Axiom("UI")),
        (parse("P(c1)"), MP(1, 2)),
        (parse("forall u. P(c1)"), GR(3, "u")),
    ]
    assert check_proof(proof("L0", base, hypotheses=[parse("forall v. P(v)")])).ok
    # open hypotheses need the explicit flag, and the variable must stay clear
    open_hyp = PredAtom("P", (Variable("v"),))
    lines = [(open_hyp, Hyp()), (Forall("v", open_hyp), GR(1, "v"))]
    verdict = check_proof(proof("L0", lines, hypotheses=[open_hyp]))
    assert not verdict.ok and "sentence" in verdict.reason
    verdict = check_proof(proof("L0", lines, hypotheses=[open_hyp],
                                allow_open_hypotheses=True))
    assert not verdict.ok and "occurs free" in verdict.reason
    lines_ok = [(open_hyp, Hyp()), (Forall("u", open_hyp), GR(1, "u"))]
    assert check_proof(proof("L0", lines_ok, hypotheses=[open_hyp],
                             allow_open_hypotheses=True)).ok


def test_monotonicity_across_systems():
    for stronger in ("K1", "K2", "K3"):
        assert check_proof(s1_proof(system=stronger)).ok
    for stronger in ("K2", "K3"):
        assert check_proof(sv_proof(system=stronger)).ok


def test_derives():
    premises = {Sup(p0, p1)}
    p = proof("K0", [
        (Sup(p0, p1), Hyp()),
        (Implies(Sup(p0, p1), Or(p0, p1)), Axiom("S2")),
        (Or(p0, p1), MP(1, 2)),
    ], hypotheses=[Sup(p0, p1)])
    assert derives(premises, Or(p0, p1), p)
    assert not derives(premises, And(p0, p1), p)
    assert not derives(set(), Or(p0, p1), p)  # hypothesis outside the premise set


def test_proof_json_roundtrip():
    p = sv_proof()
    data = proof_to_json(p)
    again = proof_from_json(data)
    assert check_proof(again).ok
    assert [to_text(l.formula) for l in again.lines] == [to_text(l.formula) for l in p.lines]


def test_sv_semantic_core():
    # regular tables respect equivalence through the superposition collapse
    oracle = TruthTableOracle()
    sigma, rho, tau = p0, Not(Not(p0)), p1
    for first in (sigma, tau):
        for second in (rho, tau):
            table = (ChoiceTable()
                     .with_entry(sigma, tau, first)
                     .with_entry(rho, tau, second))
            if not extendable(table, ClassSpec("reg", oracle)):
                continue
            left = collapse(table, Sup(sigma, tau))
            right = collapse(table, Sup(rho, tau))
            assert oracle.equivalent(left, right)
