"""Entanglement-capability rate dP/dtau and the per-generator classification."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import linalg as la
from .clifford import GammaRepresentation
from .conformal import LABELS, Generator, all_generators, branch_sign
from .errors import InvalidArgumentError, NotDecomposableError
from .jsonio import sig, spinor_to_json
from .schmidt import (
    SchmidtDecomposition,
    decompose,
    density_operator,
    partial_trace_b,
    sample_decomposable,
    tracked_coefficient,
)

FD_STEP = 1e-4
LOCAL_TOL = 1e-10
WITNESS_MIN = 1e-3
ENTROPY = "entropy-log2"

# Generators with vanishing capability as reported for the two built-in
# gamma representations.
REFERENCE_VANISHING = {
    "RepA": frozenset({"M12", "M14", "M24", "D", "P3", "K3"}),
    "RepB": frozenset({"M23", "M24", "M34", "D", "P1", "K1"}),
}


def _matrix(h):
    return la.as_matrix(getattr(h, "matrix", h), 4)


def pdot_analytic(d: SchmidtDecomposition, h, rep: GammaRepresentation) -> float:
    """Closed-form rate at tau = 0.

    ``2 sqrt(P(1-P)) Im<a (x) b, H (a' (x) b')> / <psi, psi>`` with the
    indefinite spinor product.
    """
    weight = d.P * (1.0 - d.P)
    if weight <= 0.0:
        return 0.0
    left = np.kron(d.psi_a, d.psi_b)
    right = _matrix(h) @ np.kron(d.psi_a_perp, d.psi_b_perp)
    cross = la.spinor_inner(rep.gamma4, left, right)
    return 2.0 * math.sqrt(weight) * cross.imag / d.norm


def reduced_rate(psi, h, rep: GammaRepresentation) -> np.ndarray:
    """``d rho_A / d tau`` at 0, i.e. ``-i tr_B [H, rho]``."""
    rho = density_operator(psi, rep)
    return -1j * partial_trace_b(la.commutator(_matrix(h), rho), rep.kappa_b)


def pdot_density(psi, h, rep: GammaRepresentation, d: SchmidtDecomposition | None = None) -> float:
    """Rate from the reduced operator: ``<a, rho_A' a>_kA / <a, a>_kA``."""
    if d is None:
        d = decompose(psi, rep)
    rate = reduced_rate(psi, h, rep)
    a = d.psi_a
    num = la.kappa_inner(rep.kappa_a, a, rate @ a)
    return (num / la.kappa_inner(rep.kappa_a, a, a)).real


def pdot_fd(psi, h, rep: GammaRepresentation, step: float = FD_STEP,
            d: SchmidtDecomposition | None = None) -> float:
    """Central difference of the Schmidt weight along ``exp(-i H tau) psi``.

    The weight at each side is the one continuously connected to
    ``psi_a``; off ``P = 1/2`` that is just ``decompose(...).P``.
    """
    if not 1e-6 <= step <= 1e-2:
        raise InvalidArgumentError(f"finite-difference step must lie in [1e-6, 1e-2], got {step}")
    if d is None:
        d = decompose(psi, rep)
    m = _matrix(h)
    psi = np.asarray(psi, dtype=complex)
    try:
        plus = tracked_coefficient(la.mat_exp(m, step) @ psi, rep, d.psi_a)
        minus = tracked_coefficient(la.mat_exp(m, -step) @ psi, rep, d.psi_a)
    except NotDecomposableError as exc:
        raise NotDecomposableError(
            "not-decomposable-at-tau", f"evolution leaves the decomposable set ({exc.code})"
        ) from exc
    return (plus - minus) / (2.0 * step)


@dataclass
class CapabilityRecord:
    generator: str
    branch: str
    pdot_analytic: float
    pdot_density: float
    pdot_fd: float
    spinor: np.ndarray

    @property
    def residuals(self) -> dict:
        return {
            "analytic-density": abs(self.pdot_analytic - self.pdot_density),
            "analytic-fd": abs(self.pdot_analytic - self.pdot_fd),
            "density-fd": abs(self.pdot_density - self.pdot_fd),
        }


def capability_record(psi, gen: Generator, rep: GammaRepresentation, step: float = FD_STEP) -> CapabilityRecord:
    d = decompose(psi, rep)
    return CapabilityRecord(
        generator=gen.name,
        branch=gen.branch,
        pdot_analytic=pdot_analytic(d, gen, rep),
        pdot_density=pdot_density(psi, gen, rep, d),
        pdot_fd=pdot_fd(psi, gen, rep, step, d),
        spinor=np.asarray(psi, dtype=complex),
    )


@dataclass(frozen=True)
class RateOfChange:
    gamma: float
    measure: str
    P: float
    pdot: float
    boundary: bool = False


def entropy(P: float) -> float:
    """Base-2 entropy of the Schmidt weights (P, 1-P)."""
    return -sum(x * math.log2(x) for x in (P, 1.0 - P) if x > 0.0)


def entropy_slope(P: float) -> float:
    """dE/dP = log2((1-P)/P); diverges at P = 1."""
    return math.log2((1.0 - P) / P)


def entanglement_rate(d: SchmidtDecomposition, h, rep: GammaRepresentation, measure: str = "entropy") -> RateOfChange:
    """Chain rule ``dE/dtau = dE/dP * dP/dtau`` for the entropy measure.

    At ``P = 1`` the slope diverges while the rate vanishes identically;
    the result is reported as 0 with ``boundary=True``.
    """
    if measure not in ("entropy", ENTROPY):
        raise InvalidArgumentError(f"unsupported entanglement measure {measure!r}")
    return chain_rule(d.P, pdot_analytic(d, h, rep))


def chain_rule(P: float, pdot: float) -> RateOfChange:
    if P >= 1.0 - 1e-15:
        return RateOfChange(0.0, ENTROPY, P, pdot, boundary=True)
    return RateOfChange(entropy_slope(P) * pdot, ENTROPY, P, pdot)


def local_form_check(h, tol: float = LOCAL_TOL) -> bool:
    """True iff ``h = X (x) 1 + 1 (x) Y`` within ``tol``."""
    return la.local_residual(_matrix(h)) < tol


@dataclass
class ClassificationEntry:
    generator: str
    verdict: str
    max_abs_pdot: float
    witness: np.ndarray | None = None
    witness_pdot: float | None = None
    witness_P: float | None = None

    def to_json(self, digits: int = 12) -> dict:
        witness = None
        if self.witness is not None:
            witness = {
                **spinor_to_json(self.witness, digits),
                "pdot": sig(self.witness_pdot, digits),
                "P": sig(self.witness_P, digits),
            }
        return {
            "generator": self.generator,
            "verdict": self.verdict,
            "max_abs_pdot": sig(self.max_abs_pdot, digits),
            "witness": witness,
        }


@dataclass
class ClassificationTable:
    rep: str
    branch: str
    tolerance: float
    samples: int
    seed: int
    entries: list = field(default_factory=list)

    @property
    def vanishing(self) -> frozenset:
        return frozenset(e.generator for e in self.entries if e.verdict == "vanishing")

    def entry(self, name: str) -> ClassificationEntry:
        for e in self.entries:
            if e.generator == name:
                return e
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "rep": self.rep,
            "branch": self.branch,
            "tolerance": self.tolerance,
            "samples": self.samples,
            "seed": self.seed,
            "entries": [e.to_json() for e in self.entries],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["generator", "verdict", "max_abs_pdot", "witness_pdot", "witness_P"])
        for e in self.entries:
            w.writerow([
                e.generator,
                e.verdict,
                f"{e.max_abs_pdot:.12g}",
                "" if e.witness_pdot is None else f"{e.witness_pdot:.12g}",
                "" if e.witness_P is None else f"{e.witness_P:.12g}",
            ])
        return buf.getvalue()

    def _rows(self):
        for e in self.entries:
            yield (
                e.generator,
                e.verdict,
                f"{e.max_abs_pdot:.12g}",
                "-" if e.witness_pdot is None else f"{e.witness_pdot:.12g}",
            )

    def to_markdown(self) -> str:
        lines = [
            f"**{self.rep}**, branch {self.branch}, {self.samples} samples, tol {self.tolerance:g}",
            "",
            "| generator | verdict | max abs Pdot | witness Pdot |",
            "|---|---|---|---|",
        ]
        lines += [f"| {a} | {b} | {c} | {d} |" for a, b, c, d in self._rows()]
        return "\n".join(lines) + "\n"

    def to_text(self) -> str:
        header = ("generator", "verdict", "max|Pdot|", "witness Pdot")
        rows = [header, *self._rows()]
        widths = [max(len(r[i]) for r in rows) for i in range(4)]
        out = [f"rep {self.rep}  branch {self.branch}  samples {self.samples}  tol {self.tolerance:g}  seed {self.seed}"]
        for r in rows:
            out.append("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
        out.append("vanishing: " + ", ".join(n for n in LABELS if n in self.vanishing))
        return "\n".join(out) + "\n"

    def render(self, fmt: str) -> str:
        renderers = {"json": self.to_json, "csv": self.to_csv, "md": self.to_markdown, "text": self.to_text}
        if fmt not in renderers:
            raise InvalidArgumentError(f"unknown format {fmt!r}")
        return renderers[fmt]()


def sample_seeds(seed: int, samples: int) -> list:
    """Independent per-sample seeds derived from one master seed."""
    return [int(s) for s in np.random.SeedSequence(seed).generate_state(samples, dtype=np.uint64)]


def classify(rep: GammaRepresentation, branch: str = "upper", samples: int = 200,
             tol: float = 1e-10, seed: int = 1) -> ClassificationTable:
    """Sweep every generator over random entangled decomposable spinors.

    A generator is "vanishing" iff ``|Pdot| < tol`` on every sample;
    otherwise the sample with the largest ``|Pdot|`` is kept as witness.
    """
    if samples < 50:
        raise InvalidArgumentError("classification needs at least 50 samples")
    branch_sign(branch)
    gens = all_generators(rep, branch)
    worst = {g.name: (0.0, None, None, None) for g in gens}
    for s in sample_seeds(seed, samples):
        psi = sample_decomposable(None, s, rep)
        d = decompose(psi, rep)
        for g in gens:
            val = pdot_analytic(d, g, rep)
            if abs(val) > worst[g.name][0]:
                worst[g.name] = (abs(val), psi, val, d.P)
    table = ClassificationTable(getattr(rep, "label", "Custom"), branch, tol, samples, seed)
    for g in gens:
        mx, psi, val, P = worst[g.name]
        if mx < tol:
            table.entries.append(ClassificationEntry(g.name, "vanishing", mx))
        else:
            table.entries.append(ClassificationEntry(g.name, "non-vanishing", mx, psi, val, P))
    return table


def branch_dependence(upper: ClassificationTable, lower: ClassificationTable) -> list:
    """Generators whose verdict differs between the two sign branches."""
    return [e.generator for e in upper.entries if e.verdict != lower.entry(e.generator).verdict]


def reference_mismatch(table: ClassificationTable) -> dict | None:
    """Compare a table with the reference vanishing set for its representation.

    Returns ``None`` on agreement, otherwise the sets of missing and
    unexpected vanishing generators.  Raises KeyError for custom reps.
    """
    expected = REFERENCE_VANISHING[table.rep]
    got = table.vanishing
    if got == expected:
        return None
    return {"missing": sorted(expected - got), "unexpected": sorted(got - expected)}
