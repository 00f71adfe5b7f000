"""Gamma-matrix representations with a tensor-factorized gamma4."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg as la
from .errors import EntangledGammaError, InvalidArgumentError, RepresentationError
from .jsonio import matrix_from_json

METRIC = (-1.0, -1.0, -1.0, 1.0)
CLIFFORD_TOL = 1e-12

_S0, _S1, _S2, _S3 = la.PAULI


def _frozen(m) -> np.ndarray:
    a = np.array(m, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class GammaRepresentation:
    """gamma_1..gamma_4 plus gamma5 and the factors of gamma4 = kA (x) kB."""

    gamma: tuple
    gamma5: np.ndarray
    kappa_a: np.ndarray
    kappa_b: np.ndarray
    label: str = "Custom"
    metric: tuple = field(default=METRIC)

    @property
    def gamma4(self) -> np.ndarray:
        return self.gamma[3]

    def __repr__(self):
        return f"GammaRepresentation(label={self.label!r})"


def _make(gammas, kappa_a, kappa_b, label, gamma5=None) -> GammaRepresentation:
    gammas = tuple(_frozen(la.as_matrix(g, 4)) for g in gammas)
    if len(gammas) != 4:
        raise InvalidArgumentError("a representation needs exactly four gamma matrices")
    if gamma5 is None:
        gamma5 = gammas[0] @ gammas[1] @ gammas[2] @ gammas[3]
    return GammaRepresentation(
        gamma=gammas,
        gamma5=_frozen(la.as_matrix(gamma5, 4)),
        kappa_a=_frozen(la.as_matrix(kappa_a, 2)),
        kappa_b=_frozen(la.as_matrix(kappa_b, 2)),
        label=label,
    )


def _rep_a() -> GammaRepresentation:
    g = (
        1j * np.kron(_S3, _S1),
        1j * np.kron(_S3, _S2),
        1j * np.kron(_S2, _S0),
        np.kron(_S3, _S3),
    )
    return _make(g, _S3, _S3, "RepA")


def _rep_b() -> GammaRepresentation:
    # spatial gammas of RepA permuted cyclically
    g = (
        1j * np.kron(_S2, _S0),
        1j * np.kron(_S3, _S1),
        1j * np.kron(_S3, _S2),
        np.kron(_S3, _S3),
    )
    return _make(g, _S3, _S3, "RepB")


_ALIASES = {"a": "RepA", "repa": "RepA", "b": "RepB", "repb": "RepB", "custom": "Custom"}


def normalize_rep_id(rep_id: str) -> str:
    key = str(rep_id).strip().lower()
    if key not in _ALIASES:
        raise InvalidArgumentError(f"unknown representation {rep_id!r} (expected A, B or custom)")
    return _ALIASES[key]


def custom_from_payload(payload: dict, validate: bool = True) -> GammaRepresentation:
    """Build a representation from the custom JSON payload.

    ``payload`` holds ``gamma`` (four 4x4 matrices), ``kappaA`` and
    ``kappaB``; an optional ``gamma5`` is checked against the product
    gamma1 gamma2 gamma3 gamma4.
    """
    try:
        gammas = [matrix_from_json(m, 4) for m in payload["gamma"]]
        ka = matrix_from_json(payload["kappaA"], 2)
        kb = matrix_from_json(payload["kappaB"], 2)
    except (KeyError, TypeError) as exc:
        raise InvalidArgumentError(f"custom representation payload is incomplete: {exc}") from exc
    g5 = matrix_from_json(payload["gamma5"], 4) if "gamma5" in payload else None
    rep = _make(gammas, ka, kb, "Custom", gamma5=g5)
    if validate:
        validate_rep(rep)
    return rep


def build_rep(rep_id="A", payload: dict | None = None, validate: bool = True) -> GammaRepresentation:
    """Return RepA, RepB, or a validated custom representation."""
    name = normalize_rep_id(rep_id)
    if name == "RepA":
        return _rep_a()
    if name == "RepB":
        return _rep_b()
    if payload is None:
        raise InvalidArgumentError("a custom representation needs a payload")
    return custom_from_payload(payload, validate=validate)


@dataclass
class CheckReport:
    """Named max-violation checks; passes iff every violation is below tol."""

    title: str
    tol: float
    checks: list = field(default_factory=list)

    def add(self, name: str, violation: float):
        self.checks.append((name, float(violation)))

    @property
    def passed(self) -> bool:
        return all(v < self.tol for _, v in self.checks)

    @property
    def max_violation(self) -> float:
        return max((v for _, v in self.checks), default=0.0)

    @property
    def first_failure(self):
        for name, v in self.checks:
            if not v < self.tol:
                return name, v
        return None

    def lines(self):
        for name, v in self.checks:
            yield f"{'PASS' if v < self.tol else 'FAIL'}  {name}  max violation {v:.3e}"


def verify_clifford(rep: GammaRepresentation, tol: float = CLIFFORD_TOL) -> CheckReport:
    """Check every defining identity of ``rep`` and report the violations."""
    report = CheckReport("clifford", tol)
    eye = np.eye(4)
    g = rep.gamma
    for mu in range(4):
        for nu in range(mu, 4):
            target = 2.0 * (rep.metric[mu] if mu == nu else 0.0) * eye
            report.add(
                f"{{g{mu + 1},g{nu + 1}}} = 2 g{mu + 1}{nu + 1} 1",
                la.max_abs(la.anticommutator(g[mu], g[nu]) - target),
            )
    report.add("g5 = g1 g2 g3 g4", la.max_abs(rep.gamma5 - g[0] @ g[1] @ g[2] @ g[3]))
    report.add("g4^dagger = g4", la.max_abs(la.dagger(g[3]) - g[3]))
    for k in range(3):
        report.add(f"g{k + 1}^dagger = -g{k + 1}", la.max_abs(la.dagger(g[k]) + g[k]))
    for name, kappa in (("kappaA", rep.kappa_a), ("kappaB", rep.kappa_b)):
        report.add(f"{name}^dagger = {name}", la.max_abs(la.dagger(kappa) - kappa))
        report.add(f"{name}^2 = 1", la.max_abs(kappa @ kappa - np.eye(2)))
    report.add("g4 = kappaA (x) kappaB", la.max_abs(g[3] - np.kron(rep.kappa_a, rep.kappa_b)))
    return report


def validate_rep(rep: GammaRepresentation, tol: float = CLIFFORD_TOL) -> None:
    """Raise if ``rep`` breaks any identity; entangled gamma4 gets its own error."""
    if la.operator_schmidt_rank(rep.gamma4, atol=tol) > 1:
        raise EntangledGammaError(
            "g4 = kappaA (x) kappaB",
            message="gamma4 is entangled (operator Schmidt rank > 1); a factorized gamma4 is required",
        )
    failure = verify_clifford(rep, tol).first_failure
    if failure is not None:
        raise RepresentationError(*failure)


def chiral_projectors(rep: GammaRepresentation):
    """``(P_L, P_R) = (1 - i g5)/2, (1 + i g5)/2``."""
    eye = np.eye(4, dtype=complex)
    return 0.5 * (eye - 1j * rep.gamma5), 0.5 * (eye + 1j * rep.gamma5)
