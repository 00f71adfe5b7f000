"""Spin representation of the 15 conformal generators M, D, P, K.

Both sign branches are supported, with ``s = +1`` for ``"upper"`` and
``s = -1`` for ``"lower"``::

    M_{mu nu} = (i/4) [g_mu, g_nu]
    D         = -(s/2) g5
    P_mu      =  (s/2) g_mu (1 - s i g5)
    K_mu      =  (s/2) g_mu (1 + s i g5)
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from . import linalg as la
from .clifford import CheckReport, GammaRepresentation
from .errors import InvalidArgumentError

BRANCHES = ("upper", "lower")
LABELS = (
    "M12", "M13", "M23", "M14", "M24", "M34",
    "D",
    "P1", "P2", "P3", "P4",
    "K1", "K2", "K3", "K4",
)
PSEUDO_HERMITIAN_TOL = 1e-12
CLOSURE_TOL = 1e-10

_LABEL_RE = re.compile(r"^(?:(M)([1-4])([1-4])|(D)|([PK])([1-4]))$")


@dataclass(frozen=True)
class GeneratorLabel:
    kind: str
    indices: tuple = ()

    @classmethod
    def parse(cls, text) -> "GeneratorLabel":
        if isinstance(text, GeneratorLabel):
            return text
        m = _LABEL_RE.match(str(text).strip().upper())
        if m is None:
            raise InvalidArgumentError(f"malformed generator label {text!r}")
        if m.group(1):
            mu, nu = int(m.group(2)), int(m.group(3))
            if mu >= nu:
                raise InvalidArgumentError(
                    f"M labels are stored with mu < nu, got {text!r}; use lorentz() for other orders"
                )
            return cls("M", (mu, nu))
        if m.group(4):
            return cls("D")
        return cls(m.group(5), (int(m.group(6)),))

    def __str__(self):
        return self.kind + "".join(str(i) for i in self.indices)


@dataclass(frozen=True, eq=False)
class Generator:
    label: GeneratorLabel
    branch: str
    matrix: np.ndarray

    @property
    def name(self) -> str:
        return str(self.label)

    def __repr__(self):
        return f"Generator({self.name}, {self.branch})"


def branch_sign(branch: str) -> int:
    if branch not in BRANCHES:
        raise InvalidArgumentError(f"branch must be 'upper' or 'lower', got {branch!r}")
    return 1 if branch == "upper" else -1


def lorentz(rep: GammaRepresentation, mu: int, nu: int) -> np.ndarray:
    """``M_{mu nu}`` for any index order (antisymmetric, zero on the diagonal)."""
    if not (1 <= mu <= 4 and 1 <= nu <= 4):
        raise InvalidArgumentError("Lorentz indices run over 1..4")
    a, b = rep.gamma[mu - 1], rep.gamma[nu - 1]
    return 0.25j * la.commutator(a, b)


def generator(rep: GammaRepresentation, label, branch: str = "upper") -> Generator:
    label = GeneratorLabel.parse(label)
    s = branch_sign(branch)
    eye = np.eye(4, dtype=complex)
    if label.kind == "M":
        m = lorentz(rep, *label.indices)
    elif label.kind == "D":
        m = -0.5 * s * rep.gamma5
    else:
        g = rep.gamma[label.indices[0] - 1]
        chir = -1 if label.kind == "P" else 1
        m = 0.5 * s * g @ (eye + chir * s * 1j * rep.gamma5)
    m = np.array(m, dtype=complex)
    m.setflags(write=False)
    return Generator(label, branch, m)


def all_generators(rep: GammaRepresentation, branch: str = "upper") -> list:
    return [generator(rep, lab, branch) for lab in LABELS]


def check_pseudo_hermiticity(rep: GammaRepresentation, h) -> float:
    """Max-entry size of ``g4 h^dagger g4 - h``."""
    h = la.as_matrix(getattr(h, "matrix", h), 4)
    g4 = rep.gamma4
    return la.max_abs(g4 @ la.dagger(h) @ g4 - h)


def conjugation_table(gens) -> list:
    """The Hermitian-conjugation relations among one branch's generators.

    Returns ``(relation, violation)`` pairs:  M_k4 anti-Hermitian, M_kl
    Hermitian, D anti-Hermitian, P_4^dag = K_4, P_k^dag = -K_k and the
    mirrored K relations.
    """
    by = {g.name: g.matrix for g in gens}
    out = []
    for name, m in by.items():
        if name.startswith("M"):
            if name.endswith("4"):
                out.append((f"{name}^dagger = -{name}", la.max_abs(la.dagger(m) + m)))
            else:
                out.append((f"{name}^dagger = {name}", la.max_abs(la.dagger(m) - m)))
        elif name == "D":
            out.append(("D^dagger = -D", la.max_abs(la.dagger(m) + m)))
    for k in range(1, 5):
        sign = 1.0 if k == 4 else -1.0
        sym = "" if k == 4 else "-"
        p, kk = by[f"P{k}"], by[f"K{k}"]
        out.append((f"P{k}^dagger = {sym}K{k}", la.max_abs(la.dagger(p) - sign * kk)))
        out.append((f"K{k}^dagger = {sym}P{k}", la.max_abs(la.dagger(kk) - sign * p)))
    return out


def check_closure(gens, tol: float = CLOSURE_TOL) -> CheckReport:
    """Check that the generators close under commutation.

    For pseudo-Hermitian generators ``[H_i, H_j] = i sum_k c_ijk H_k`` with
    real ``c``.  Each ``-i [H_i, H_j]`` is fitted by real least squares
    on the span of the inputs; one check per unordered pair records the
    fit residual.
    """
    mats = [np.asarray(getattr(g, "matrix", g), dtype=complex) for g in gens]
    names = [getattr(g, "name", str(i)) for i, g in enumerate(gens)]
    basis = np.stack([m.ravel() for m in mats], axis=1)
    real_basis = np.vstack([basis.real, basis.imag])
    report = CheckReport("closure", tol)
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            target = (-1j * la.commutator(mats[i], mats[j])).ravel()
            rhs = np.concatenate([target.real, target.imag])
            coeff, *_ = np.linalg.lstsq(real_basis, rhs, rcond=None)
            resid = rhs - real_basis @ coeff
            report.add(f"[{names[i]},{names[j]}]", float(np.max(np.abs(resid))))
    return report
