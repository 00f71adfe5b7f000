import json

import numpy as np
import pytest

from spinorent import linalg as la
from spinorent.clifford import build_rep, chiral_projectors, custom_from_payload, verify_clifford
from spinorent.errors import EntangledGammaError, InvalidArgumentError, RepresentationError
from spinorent.jsonio import matrix_to_json

from conftest import S0, S1, S2, S3


def payload_from(gammas, ka, kb):
    return {
        "gamma": [matrix_to_json(g) for g in gammas],
        "kappaA": matrix_to_json(ka),
        "kappaB": matrix_to_json(kb),
    }


def test_rep_a_matrices(rep_a):
    assert np.array_equal(rep_a.gamma[0], 1j * np.kron(S3, S1))
    assert np.array_equal(rep_a.gamma[1], 1j * np.kron(S3, S2))
    assert np.array_equal(rep_a.gamma[2], 1j * np.kron(S2, S0))
    assert np.array_equal(rep_a.gamma4, np.kron(S3, S3))
    assert np.array_equal(rep_a.gamma5, 1j * np.kron(S1, S0))


def test_rep_b_matrices(rep_b):
    assert np.array_equal(rep_b.gamma[0], 1j * np.kron(S2, S0))
    assert np.array_equal(rep_b.gamma[1], 1j * np.kron(S3, S1))
    assert np.array_equal(rep_b.gamma[2], 1j * np.kron(S3, S2))
    assert np.array_equal(rep_b.gamma5, 1j * np.kron(S1, S0))


def test_representations_are_immutable(rep_a):
    with pytest.raises(ValueError):
        rep_a.gamma[0][0, 0] = 5


def test_builtin_reps_verify_exactly(rep):
    report = verify_clifford(rep)
    assert report.passed
    assert report.max_violation == 0.0
    # 10 anticommutators + g5 + 4 Hermiticity rules + kappa checks + factorization
    assert sum(1 for name, _ in report.checks if name.startswith("{")) == 10


def test_gamma4_not_entangled(rep):
    assert la.operator_schmidt_rank(rep.gamma4) == 1


def test_gamma5_properties(rep):
    for g in rep.gamma:
        assert la.max_abs(la.anticommutator(rep.gamma5, g)) < 1e-12
    assert la.max_abs(rep.gamma5 @ rep.gamma5 + np.eye(4)) < 1e-12


def test_missing_i_fails_on_g1_square(rep_a):
    gammas = list(rep_a.gamma)
    gammas[0] = np.kron(S3, S1)
    # (s3 x s1)^2 = +1 instead of -1
    assert la.max_abs(gammas[0] @ gammas[0] - np.eye(4)) == 0
    rep = custom_from_payload(payload_from(gammas, S3, S3), validate=False)
    report = verify_clifford(rep)
    assert not report.passed
    assert report.first_failure[0] == "{g1,g1} = 2 g11 1"
    assert report.first_failure[1] == pytest.approx(4.0)
    with pytest.raises(RepresentationError, match=r"\{g1,g1\}"):
        custom_from_payload(payload_from(gammas, S3, S3))


def test_custom_payload_roundtrip(rep_b):
    payload = json.loads(json.dumps(payload_from(rep_b.gamma, S3, S3)))
    rep = build_rep("custom", payload)
    assert rep.label == "Custom"
    assert verify_clifford(rep).passed


def test_custom_payload_flat_matrices(rep_a):
    flat = {
        "gamma": [[[z.real, z.imag] for z in g.ravel()] for g in rep_a.gamma],
        "kappaA": [[1, 0], [0, 0], [0, 0], [-1, 0]],
        "kappaB": [[1, 0], [0, 0], [0, 0], [-1, 0]],
    }
    assert verify_clifford(build_rep("custom", flat)).passed


def test_custom_incomplete_payload():
    with pytest.raises(InvalidArgumentError):
        build_rep("custom", {"gamma": []})
    with pytest.raises(InvalidArgumentError):
        build_rep("custom")


def test_entangled_gamma4_rejected(rep_a):
    # a unitary change of basis keeps the Clifford algebra but entangles gamma4
    u = la.mat_exp(np.kron(S3, S1), np.pi / 8)
    gammas = [u @ g @ u.conj().T for g in rep_a.gamma]
    assert la.operator_schmidt_rank(gammas[3]) == 2
    with pytest.raises(EntangledGammaError):
        custom_from_payload(payload_from(gammas, S3, S3))


def test_wrong_kappa_factors_rejected(rep_a):
    with pytest.raises(RepresentationError, match="kappaA"):
        custom_from_payload(payload_from(rep_a.gamma, 2 * S3, 0.5 * S3))


def test_unknown_rep_id():
    with pytest.raises(InvalidArgumentError):
        build_rep("C")


def test_chiral_projectors_rep_a(rep_a):
    pl, pr = chiral_projectors(rep_a)
    assert la.max_abs(pl - 0.5 * (np.eye(4) + np.kron(S1, S0))) < 1e-15
    assert la.max_abs(pl + pr - np.eye(4)) == 0
    assert la.max_abs(pl @ pr) < 1e-15


def test_chiral_projectors_idempotent(rep):
    pl, pr = chiral_projectors(rep)
    assert la.max_abs(pl @ pl - pl) < 1e-15
    assert la.max_abs(pr @ pr - pr) < 1e-15
