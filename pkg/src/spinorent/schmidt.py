"""Generalized Schmidt decomposition under an indefinite metric.

A spinor is written as ``sqrt(P) a (x) b + sqrt(1-P) a' (x) b'`` where
``a, a'`` are kappa_A-orthonormal (up to sign) and ``b, b'`` are
kappa_B-orthonormal.  The frame comes from the eigenvectors of the
reduced operator ``rho_A``, which is kappa_A-self-adjoint rather than
Hermitian; its spectrum may turn complex or its eigenvectors null, and
then no decomposition exists.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import linalg as la
from .clifford import GammaRepresentation, build_rep
from .errors import InvalidArgumentError, NotDecomposableError, NullSpinorError, UnsupportedTPSError
from .jsonio import sig, vector_to_json

NULL_TOL = 1e-8
IMAG_TOL = 1e-9
RANGE_TOL = 1e-9
DEGENERACY_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class SchmidtDecomposition:
    """Schmidt data of a spinor rescaled to ``|<psi, psi>| = 1``.

    ``norm`` is ``<psi, psi>`` after rescaling (so +1 or -1) and ``scale``
    the factor that was divided out.  The signs ``s_*`` are the kappa-norms
    of the four frame vectors.
    """

    P: float
    psi_a: np.ndarray
    psi_a_perp: np.ndarray
    psi_b: np.ndarray
    psi_b_perp: np.ndarray
    s_a: int
    s_a_perp: int
    s_b: int
    s_b_perp: int
    norm: float
    scale: float = 1.0
    residual: float = 0.0

    @property
    def is_product(self) -> bool:
        return self.P >= 1.0 - 1e-12

    def to_json(self, digits: int = 12) -> dict:
        return {
            "P": sig(self.P, digits),
            "psiA": vector_to_json(self.psi_a, digits),
            "psiAperp": vector_to_json(self.psi_a_perp, digits),
            "psiB": vector_to_json(self.psi_b, digits),
            "psiBperp": vector_to_json(self.psi_b_perp, digits),
            "sA": self.s_a,
            "sAperp": self.s_a_perp,
            "sB": self.s_b,
            "sBperp": self.s_b_perp,
            "norm": sig(self.norm, digits),
            "scale": sig(self.scale, digits),
            "residual": sig(self.residual, digits),
        }


def coefficient_matrix(psi) -> np.ndarray:
    """``C[i, k]`` = component ``(i, k)``; ``C(a (x) b) = a b^T``."""
    return la.as_vector(psi, 4).reshape(2, 2)


def _sign(x: float) -> int:
    return 1 if x >= 0 else -1


def fix_phase(v: np.ndarray) -> np.ndarray:
    """Rotate ``v`` so that its largest component is real and positive."""
    mags = np.abs(v)
    k = int(np.flatnonzero(mags >= mags.max() - 1e-12)[0])
    if mags[k] == 0:
        return v
    return v * (abs(v[k]) / v[k])


def kappa_normalize(v, kappa) -> tuple:
    """Scale ``v`` to ``|<v, v>_kappa| = 1``; returns ``(v, sign)``."""
    n = la.kappa_inner(kappa, v, v).real
    if abs(n) < NULL_TOL * float(np.vdot(v, v).real):
        raise NotDecomposableError("null-eigenvector", "frame vector is kappa-null")
    return v / np.sqrt(abs(n)), _sign(n)


def kappa_complement(v, kappa) -> np.ndarray:
    """A nonzero vector ``w`` with ``<v, w>_kappa = 0``."""
    u = np.asarray(kappa) @ v
    return np.array([-np.conj(u[1]), np.conj(u[0])])


def require_hyperbolic_tps(rep: GammaRepresentation) -> None:
    """Refuse factorizations where kappa_A and kappa_B differ in kind.

    The decomposition relies on both factor spaces carrying an indefinite
    product of the same signature.  Pairing an indefinite kappa with a
    definite one (e.g. sigma3 with the identity) has no decomposition of
    this form.
    """
    for name, kappa in (("kappaA", rep.kappa_a), ("kappaB", rep.kappa_b)):
        ev = np.linalg.eigvalsh(np.asarray(kappa))
        if not (ev[0] < 0 < ev[1]):
            raise UnsupportedTPSError(
                f"{name} is definite; a generalized Schmidt decomposition needs "
                "indefinite metrics on both factors"
            )


def _null_check(psi, gamma4) -> float:
    n = la.spinor_norm(gamma4, psi)
    scale = float(np.vdot(psi, psi).real)
    if scale == 0.0 or abs(n) < NULL_TOL * scale:
        raise NullSpinorError(f"null spinor: <psi, psi> = {n:.3e}")
    return n


def partial_trace_b(x, kappa_b) -> np.ndarray:
    """Trace out factor B of a 4x4 operator with the kappa_B basis sum.

    ``sum_b <b, X b>_kappa_B / <b, b>_kappa_B`` over a kappa_B-orthogonal
    basis; the result is an operator on factor A.
    """
    x = la.as_matrix(x, 4).reshape(2, 2, 2, 2)
    kappa_b = la.as_matrix(kappa_b, 2)
    _, basis = np.linalg.eigh(kappa_b)
    out = np.zeros((2, 2), dtype=complex)
    for k in range(2):
        b = basis[:, k]
        kb = kappa_b @ b
        out += np.einsum("k,ikjl,l->ij", np.conj(kb), x, b) / np.vdot(b, kb).real
    return out


def density_operator(psi, rep: GammaRepresentation) -> np.ndarray:
    """``psi psi^dagger g4 / <psi, psi>``."""
    psi = la.as_vector(psi, 4)
    n = _null_check(psi, rep.gamma4)
    return np.outer(psi, la.adjoint_row(psi, rep.gamma4)) / n


def reduced_density_a(psi, rep: GammaRepresentation) -> np.ndarray:
    """Reduced operator on factor A; satisfies ``kA rho^dag kA = rho``."""
    return partial_trace_b(density_operator(psi, rep), rep.kappa_b)


def _spectrum(psi, rep):
    psi = la.as_vector(psi, 4)
    n = _null_check(psi, rep.gamma4)
    scale = float(np.sqrt(abs(n)))
    psi_n = psi / scale
    rho_a = reduced_density_a(psi_n, rep)
    lam, vecs = np.linalg.eig(rho_a)
    if np.max(np.abs(lam.imag)) > IMAG_TOL:
        raise NotDecomposableError(
            "complex-spectrum", f"reduced operator has complex eigenvalues {lam}"
        )
    return psi_n, _sign(n), scale, rho_a, lam.real, vecs


def _lex_key(v):
    return tuple(x for z in v for x in (round(z.real, 12), round(z.imag, 12)))


def decompose(psi, rep: GammaRepresentation | None = None) -> SchmidtDecomposition:
    """Generalized Schmidt decomposition of ``psi``.

    The input is rescaled to ``|<psi, psi>| = 1`` first.  ``psi_a`` is the
    eigenvector of ``rho_A`` with the larger eigenvalue, ``psi_a_perp`` its
    kappa_A-complement, and the B vectors follow by contracting ``psi``
    against the A frame; they absorb every phase so the coefficients are
    non-negative.  At ``P = 1/2`` with ``rho_A`` proportional to the
    identity, the kappa_A eigenbasis is used and the lexicographically
    larger vector becomes ``psi_a``.

    Raises NullSpinorError for null input and NotDecomposableError when
    the spectrum is complex, an eigenvector is null, or the eigenvalues
    leave [0, 1].
    """
    rep = rep if rep is not None else build_rep("A")
    require_hyperbolic_tps(rep)
    psi_n, nsign, scale, rho_a, lam, vecs = _spectrum(psi, rep)
    ka, kb = np.asarray(rep.kappa_a), np.asarray(rep.kappa_b)

    if lam.min() < -RANGE_TOL or lam.max() > 1.0 + RANGE_TOL:
        raise NotDecomposableError(
            "coefficient-range", f"Schmidt weights {lam} fall outside [0, 1]"
        )
    if la.max_abs(rho_a - 0.5 * np.eye(2)) < DEGENERACY_TOL:
        _, kbasis = np.linalg.eigh(ka)
        cands = [fix_phase(kbasis[:, k]) for k in range(2)]
        a = max(cands, key=_lex_key)
    else:
        a = vecs[:, int(np.argmax(lam))]
    a, s_a = kappa_normalize(fix_phase(a), ka)
    a_perp, s_ap = kappa_normalize(fix_phase(kappa_complement(a, ka)), ka)

    c = psi_n.reshape(2, 2)
    b1 = s_a * (np.conj(a) @ ka @ c)
    b2 = s_ap * (np.conj(a_perp) @ ka @ c)
    b, s_b = kappa_normalize(b1, kb)
    c1 = float(np.sqrt(abs(la.kappa_inner(kb, b1, b1).real)))
    b_perp, s_bp = kappa_normalize(fix_phase(kappa_complement(b, kb)), kb)
    proj = la.kappa_inner(kb, b_perp, b2) * s_bp
    c2 = abs(proj)
    if c2 > 0.0:
        b_perp = b_perp * (proj / c2)

    total = c1 * c1 + c2 * c2
    P = c1 * c1 / total
    d = SchmidtDecomposition(
        P=float(P),
        psi_a=a,
        psi_a_perp=a_perp,
        psi_b=b,
        psi_b_perp=b_perp,
        s_a=s_a,
        s_a_perp=s_ap,
        s_b=s_b,
        s_b_perp=s_bp,
        norm=float(nsign),
        scale=scale,
    )
    residual = la.max_abs(reconstruct(d) - psi_n)
    return replace(d, residual=residual)


def reconstruct(d: SchmidtDecomposition) -> np.ndarray:
    """``sqrt(P) a (x) b + sqrt(1-P) a' (x) b'`` (the rescaled spinor)."""
    q = max(0.0, 1.0 - d.P)
    return np.sqrt(d.P) * np.kron(d.psi_a, d.psi_b) + np.sqrt(q) * np.kron(d.psi_a_perp, d.psi_b_perp)


def tracked_frame(psi, rep: GammaRepresentation, reference) -> tuple:
    """Schmidt weight and eigenvector of ``rho_A`` closest to ``reference``.

    Equal to ``decompose(psi).P`` away from ``P = 1/2``.  Near a crossing
    it follows the branch continuously connected to ``reference`` and may
    drop below 1/2, which is what a derivative along a trajectory needs.
    """
    require_hyperbolic_tps(rep)
    _, _, _, _, lam, vecs = _spectrum(psi, rep)
    ref = la.as_vector(reference, 2)
    overlaps = [abs(np.vdot(ref, vecs[:, k])) / np.linalg.norm(vecs[:, k]) for k in range(2)]
    k = int(np.argmax(overlaps))
    v = vecs[:, k]
    if abs(la.kappa_inner(rep.kappa_a, v, v).real) < NULL_TOL * float(np.vdot(v, v).real):
        raise NotDecomposableError("null-eigenvector", "tracked eigenvector is kappa-null")
    return float(lam[k]), v / np.linalg.norm(v)


def tracked_coefficient(psi, rep: GammaRepresentation, reference) -> float:
    return tracked_frame(psi, rep, reference)[0]


def random_pseudo_unitary(kappa, rng: np.random.Generator, spread: float = 0.3) -> np.ndarray:
    """A kappa-orthonormal frame ``exp(X) W``.

    ``X`` is a random matrix with ``kappa X^dag kappa = -X`` (so ``exp(X)``
    preserves kappa) and ``W`` is the kappa eigenbasis.
    """
    kappa = la.as_matrix(kappa, 2)
    x = spread * (rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)))
    x = 0.5 * (x - kappa @ la.dagger(x) @ kappa)
    _, w = np.linalg.eigh(kappa)
    return la.mat_exp(1j * x, 1.0) @ w


def sample_decomposable(p: float | None = None, seed: int = 0, rep: GammaRepresentation | None = None,
                        spread: float = 0.3) -> np.ndarray:
    """Random spinor with a known generalized Schmidt decomposition.

    Frames for A and B are random pseudo-unitary images of the kappa
    eigenbases, with the two columns swapped at random and independent
    random phases on all four vectors.  ``p`` defaults to a uniform draw
    from (1/2, 1).  Deterministic for a given seed.
    """
    if p is not None and not 0.5 <= p <= 1.0:
        raise InvalidArgumentError(f"p must lie in [1/2, 1], got {p}")
    rep = rep if rep is not None else build_rep("A")
    rng = np.random.default_rng(seed)
    frames = []
    for kappa in (rep.kappa_a, rep.kappa_b):
        u = random_pseudo_unitary(kappa, rng, spread)
        if rng.random() < 0.5:
            u = u[:, ::-1]
        frames.append(u * np.exp(2j * np.pi * rng.random(2)))
    if p is None:
        p = float(rng.uniform(0.5, 1.0))
    ua, ub = frames
    return np.sqrt(p) * np.kron(ua[:, 0], ub[:, 0]) + np.sqrt(1.0 - p) * np.kron(ua[:, 1], ub[:, 1])
