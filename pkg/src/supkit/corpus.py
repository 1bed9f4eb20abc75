"""Bundled Hilbert-proof corpus and deliberately broken variants.

The valid entries cover every axiom scheme and every inference rule of the
K/L systems, including salva-veritate lines backed by embedded
double-negation certificates.  Each entry names the table class its system
answers to (K0/L0 -> all, K1/L1 -> reg, K2/L2 -> regstar, K3/L3 -> dec) so
the test suite can cross-check every accepted proof against the
enumeration-based consequence checker.  The mutants are minimal edits the
checker must reject with a precise line diagnosis.
"""

import dataclasses
import json
from dataclasses import dataclass
from importlib import resources

from .proofs import MP, Hyp, Proof, ProofLine, SV, proof_from_json
from .syntax import PropAtom, Sup, parse

SYSTEM_CLASS = {
    "K0": "all", "L0": "all",
    "K1": "reg", "L1": "reg",
    "K2": "regstar", "L2": "regstar",
    "K3": "dec", "L3": "dec",
}


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    table_class: str
    proof: Proof


@dataclass(frozen=True)
class MutantEntry:
    name: str
    proof: Proof
    expect_line: int
    expect_reason: str  # substring of the diagnosis


def _load(name):
    path = resources.files("supkit") / "corpus" / name
    return json.loads(path.read_text())


def corpus_entries():
    """The bundled valid proofs, in index order."""
    out = []
    for item in _load("index.json"):
        proof = proof_from_json(_load(item["file"]))
        out.append(CorpusEntry(item["name"], item["class"], proof))
    return out


def _by_name(entries, name):
    for entry in entries:
        if entry.name == name:
            return entry.proof
    raise KeyError(name)


def _replace_line(proof, number, formula=None, just=None):
    lines = list(proof.lines)
    old = lines[number - 1]
    lines[number - 1] = ProofLine(
        formula if formula is not None else old.formula,
        just if just is not None else old.just,
    )
    return dataclasses.replace(proof, lines=tuple(lines))


def mutant_entries():
    """Broken variants of corpus proofs with their expected diagnoses."""
    entries = corpus_entries()
    sv_proof = _by_name(entries, "k1_sv_double_negation")
    sv_line = len(sv_proof.lines)
    mutants = []

    mutants.append(MutantEntry(
        "sv_line_submitted_in_k0",
        dataclasses.replace(sv_proof, system="K0"),
        sv_line, "SV not available in K0",
    ))

    mutants.append(MutantEntry(
        "mp_premises_misaligned",
        _replace_line(_by_name(entries, "k0_s1_from_hyp"), 3, just=MP(2, 2)),
        3, "MP premises do not align",
    ))

    mutants.append(MutantEntry(
        "s4_below_k2",
        dataclasses.replace(_by_name(entries, "k2_s4_instance"), system="K1"),
        1, "axiom S4 not available in K1",
    ))

    mutants.append(MutantEntry(
        "s1_operands_swapped",
        _replace_line(_by_name(entries, "k0_s1_from_hyp"), 2,
                      formula=parse("p0 /\\ p1 -> p1 sup p0")),
        2, "does not instantiate scheme S1",
    ))

    mutants.append(MutantEntry(
        "ui_with_open_term",
        _replace_line(_by_name(entries, "l0_ui_instance"), 1,
                      formula=parse("(forall v. P(v)) -> P(u)")),
        1, "does not instantiate scheme UI",
    ))

    mutants.append(MutantEntry(
        "d_with_free_variable",
        _replace_line(_by_name(entries, "l0_d_instance"), 1,
                      formula=parse(
                          "(forall v. (Q(v) -> P(v))) -> (Q(v) -> forall v. P(v))")),
        1, "does not instantiate scheme D",
    ))

    broken_cert_just = None
    old_just = sv_proof.lines[-1].just
    broken_cert = dataclasses.replace(old_just.cert, lines=old_just.cert.lines[1:])
    broken_cert_just = SV(old_just.premise, broken_cert)
    mutants.append(MutantEntry(
        "sv_certificate_truncated",
        _replace_line(sv_proof, sv_line, just=broken_cert_just),
        sv_line, "SV certificate invalid",
    ))

    unrestricted = Sup(
        parse("forall v. (P(v) sup Q(v))"),
        parse("R(c1,c1)"),
    )
    mutants.append(MutantEntry(
        "unrestricted_hypothesis_line",
        Proof("L0", hypotheses=(unrestricted,),
              lines=(ProofLine(unrestricted, Hyp()),)),
        1, "not a restricted formula",
    ))

    mutants.append(MutantEntry(
        "hypothesis_not_declared",
        _replace_line(_by_name(entries, "k0_s2_from_hyp"), 1,
                      formula=Sup(PropAtom("p0"), PropAtom("p2"))),
        1, "not among the hypotheses",
    ))

    return mutants
