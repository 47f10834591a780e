import math

import numpy as np
import pytest

from gwavelets.errors import EmptySequence, InconsistentRatio, ModelMismatch, ZeroGamma
from gwavelets.fourier import FourierExpansion, dilate, omega
from gwavelets.digits import digit_set
from gwavelets.mra import (ScalingSequence, check_linear_independence, check_orthonormal,
                           check_scaling_conditions, gamma_table, gram_is_identity, gram_matrix,
                           mu_relation_defects, mu_table, translates)
from gwavelets.msf import build_msf_ladder, msf_scaling_sequence

from helpers import smooth_sequence


@pytest.fixture(scope="module")
def msf_doubling(doubling):
    return msf_scaling_sequence(build_msf_ladder(doubling, 5))


def test_msf_sequence_passes_all_conditions(doubling, msf_doubling):
    probe = [(k,) for k in range(-8, 9)]
    report = check_scaling_conditions(msf_doubling, probe)
    assert report.ok, report.to_json()
    assert "probe points" in report.conditions["3"].note


def test_condition_one_failure(doubling, msf_doubling):
    phis = list(msf_doubling.phis)
    phis[0] = phis[0] + FourierExpansion.delta(doubling, (1,))
    report = check_scaling_conditions(ScalingSequence(doubling, phis))
    assert report.conditions["1"].verdict == "FAIL"
    assert report.conditions["1"].witness["chi"] == [1]


def test_condition_two_failure(doubling, msf_doubling):
    phis = list(msf_doubling.phis)
    chi = phis[2].support()[1]
    phis[2] = FourierExpansion(doubling, {c: v for c, v in phis[2].items() if c != chi})
    report = check_scaling_conditions(ScalingSequence(doubling, phis))
    cond = report.conditions["2"]
    assert cond.verdict == "FAIL"
    assert cond.witness["j"] == 2
    assert doubling.coset_key(doubling.decode_dual(cond.witness["eta"]), 2) == doubling.coset_key(chi, 2)
    # every other condition is still evaluated
    assert set(report.conditions) == {"1", "2", "3", "4", "5"}


def test_mu_examples(msf_doubling):
    t = mu_table(msf_doubling, 1)
    assert t[0] == pytest.approx(math.sqrt(2))
    assert t[1] == 0
    for j in range(1, msf_doubling.J + 1):
        assert np.all(mu_relation_defects(mu_table(msf_doubling, j), 2) < 1e-12)


def test_mu_of_constant_sequence(doubling, msf_doubling):
    phi = msf_doubling[2]
    seq = ScalingSequence(doubling, [phi, phi, phi])
    assert all(v == pytest.approx(1) for v in mu_table(seq, 1).values + mu_table(seq, 2).values)


def test_gamma_examples(doubling, msf_doubling):
    assert gamma_table(msf_doubling, 0)[0] == pytest.approx(2 ** -0.5)
    phi = msf_doubling[2]
    seq = ScalingSequence(doubling, [phi, dilate(phi)])
    assert all(v == pytest.approx(1) for v in gamma_table(seq, 0).values)
    scaled = ScalingSequence(doubling, [msf_doubling[0], msf_doubling[1] * 3])
    assert gamma_table(scaled, 0)[0] == pytest.approx(3 * 2 ** -0.5)


def test_inconsistent_ratio(doubling):
    phi0 = FourierExpansion.delta(doubling, (0,))
    phi1 = FourierExpansion(doubling, {(0,): 1.0, (2,): 1.0})
    phi0b = FourierExpansion(doubling, {(0,): 1.0, (2,): 2.0})
    with pytest.raises(InconsistentRatio):
        mu_table(ScalingSequence(doubling, [phi0b, phi1]), 1)
    with pytest.raises(ZeroGamma):
        gamma_table(ScalingSequence(doubling, [phi0, FourierExpansion.delta(doubling, (1,))]), 0)


def test_sequence_errors(doubling, quincunx):
    with pytest.raises(EmptySequence):
        ScalingSequence(doubling, [])
    with pytest.raises(ModelMismatch):
        ScalingSequence(doubling, [FourierExpansion.delta(quincunx, (0, 0))])


def test_check_orthonormal_examples(doubling, msf_doubling):
    for j in range(msf_doubling.J + 1):
        assert check_orthonormal(msf_doubling[j], j)
    assert not check_orthonormal(msf_doubling[2] * 2, 2)
    assert check_orthonormal(FourierExpansion.delta(doubling, (0,)), 0)


def test_linear_independence_examples(doubling):
    assert check_linear_independence(FourierExpansion.indicator(doubling, [(0,), (1,)]), 1)
    assert not check_linear_independence(FourierExpansion.indicator(doubling, [(0,), (2,)]), 1)
    assert check_linear_independence(FourierExpansion.delta(doubling, (5,)), 0)


def test_gram_examples(doubling, msf_doubling):
    assert gram_is_identity(gram_matrix(translates(msf_doubling[3], 3)))
    f = FourierExpansion.delta(doubling, (4,))
    assert gram_matrix([f]).tolist() == [[1]]
    G = gram_matrix([f, f])
    assert np.allclose(G, np.ones((2, 2))) and np.linalg.matrix_rank(G) == 1


def test_refinement_identity(doubling, msf_doubling):
    for seq in (msf_doubling, smooth_sequence(doubling, 4)):
        model = seq.model
        for j in range(seq.J):
            mus = mu_table(seq, j + 1)
            ds1 = digit_set(model, j + 1)
            for eta in digit_set(model, j):
                lhs = omega(seq[j], j, eta)
                rhs = FourierExpansion(model, {})
                for pi in digit_set(model, 1):
                    child = model.dual_add(eta, model.ahat_power(pi, j))
                    mu = mus[ds1.index_of_key(model.coset_key(child, j + 1))]
                    rhs = rhs + omega(seq[j + 1], j + 1, child) * mu
                assert lhs.allclose(rhs, 1e-12)


def test_smooth_sequence_is_valid(doubling):
    seq = smooth_sequence(doubling, 4)
    assert check_scaling_conditions(seq, doubling.probe_box(4)).ok
    for j in range(5):
        assert check_orthonormal(seq[j], j)
        assert gram_is_identity(gram_matrix(translates(seq[j], j)))
    # non-MSF: more support points than cosets
    assert len(seq[3]) > 2 ** 3


def test_nonzero_coset_restrictions(quincunx):
    seq = msf_scaling_sequence(build_msf_ladder(quincunx, 3))
    for j in range(4):
        for eta in digit_set(quincunx, j):
            assert len(omega(seq[j], j, eta)) > 0
