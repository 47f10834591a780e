import pytest

from gwavelets.errors import AdmissibilityFailed, CapacityExceeded
from gwavelets.groups import BandSpec, cantor_model, torus_model
from gwavelets.mra import check_orthonormal, check_scaling_conditions, gram_is_identity, gram_matrix, translates
from gwavelets.msf import (Enumeration, MsfLadder, build_msf_ladder, check_msf_conditions,
                           msf_scaling_sequence, msf_wavelet_partition, msf_wavelets)


def ints(K):
    return sorted(c[0] for c in K)


def test_doubling_ladder_trace(doubling):
    ladder = build_msf_ladder(doubling, 3)
    assert ints(ladder.K(1)) == [0, 1]
    assert ints(ladder.K(2)) == [-1, 0, 1, 2]
    assert ints(ladder.K(3)) == list(range(-3, 5))
    assert [(lvl, c[0]) for lvl, c in ladder.audit] == [(1, 1), (2, -1), (3, 3), (3, -3)]


def test_canonical_odd_enumeration(doubling):
    it = iter(Enumeration(doubling))
    assert [next(it)[0] for _ in range(6)] == [1, -1, 3, -3, 5, -5]


def test_level_zero_ladder(cantor_band):
    assert build_msf_ladder(cantor_band, 0).levels == [[cantor_band.dual_zero()]]


def test_cantor_shift_level_two(cantor_shift):
    K2 = build_msf_ladder(cantor_shift, 2).K(2)
    expected = {cantor_shift.dual(p) for p in ([], [(1, 1)], [(2, 1)], [(1, 1), (2, 1)])}
    assert set(K2) == expected


MODELS = [
    torus_model([[2]]),
    torus_model([[3]]),
    torus_model([[1, -1], [1, 1]]),
    torus_model([[2, 1], [0, 3]]),
    cantor_model(2, BandSpec.shift()),
    cantor_model(3, BandSpec.shift()),
    cantor_model(2, BandSpec.constant(2, [1])),
]


@pytest.mark.parametrize("model", MODELS, ids=lambda m: str(m.to_json()))
@pytest.mark.parametrize("seed", [None, 4])
def test_ladder_invariants(model, seed):
    J = 3 if model.m <= 3 else 2
    ladder = build_msf_ladder(model, J, seed=seed)
    report = check_msf_conditions(ladder, ladder.K(J))
    assert report.ok, report.to_json()
    for j in range(J + 1):
        assert len(ladder.K(j)) == model.m ** j
    seq = msf_scaling_sequence(ladder)
    assert check_scaling_conditions(seq, model.probe_box(1)).conditions["4"].ok
    assert all(check_orthonormal(seq[j], j) for j in range(J + 1))


def test_seeded_ladders_are_reproducible(quincunx):
    a = build_msf_ladder(quincunx, 3, seed=9).to_json()
    b = build_msf_ladder(quincunx, 3, seed=9).to_json()
    assert a == b
    assert a["enumeration"] == {"kind": "seeded", "seed": 9}


@pytest.mark.parametrize("seed", [None, 2])
def test_audit_replays_greedy_minimality(quincunx, seed):
    ladder = build_msf_ladder(quincunx, 4, seed=seed)
    enum = list(_take(Enumeration(quincunx, seed), 400))
    covered = {}
    for lvl, chi in ladder.audit:
        if lvl not in covered:
            base = ladder.K(lvl - 1) + [quincunx.ahat(c) for c in ladder.K(lvl - 1)]
            covered[lvl] = {quincunx.coset_key(c, lvl) for c in base}
        first = next(c for c in enum if quincunx.coset_key(c, lvl) not in covered[lvl])
        assert chi == first
        covered[lvl].add(quincunx.coset_key(chi, lvl))


def _take(it, n):
    for _, x in zip(range(n), it):
        yield x


def test_json_roundtrip(cantor_band):
    ladder = build_msf_ladder(cantor_band, 2, seed=1)
    again = MsfLadder.from_json(ladder.to_json())
    assert again.to_json() == ladder.to_json()


def test_deleting_an_element_fails_ii(doubling):
    ladder = build_msf_ladder(doubling, 3)
    levels = [list(K) for K in ladder.levels]
    levels[2].remove((2,))
    report = check_msf_conditions(MsfLadder(doubling, levels))
    assert report.conditions["ii"].verdict == "FAIL"
    assert report.conditions["ii"].witness["eta"] == [2]


def test_coverage_probe(doubling):
    ladder = build_msf_ladder(doubling, 3)
    assert check_msf_conditions(ladder, [(k,) for k in range(-3, 5)]).conditions["v"].ok
    assert not check_msf_conditions(ladder, [(k,) for k in range(-4, 5)]).conditions["v"].ok


def test_rejected_model_refused():
    with pytest.raises(AdmissibilityFailed):
        build_msf_ladder(torus_model([[1, 1], [1, 0]]), 2)


def test_capacity(doubling):
    with pytest.raises(CapacityExceeded):
        build_msf_ladder(torus_model([[2]], cap=64), 7)


def test_msf_sequence_examples(doubling):
    seq = msf_scaling_sequence(build_msf_ladder(doubling, 2))
    assert seq[0].to_json()["coeffs"] == [{"chi": [0], "re": 1.0, "im": 0.0}]
    assert seq[1].support() == [(0,), (1,)]
    assert all(v == pytest.approx(2 ** -0.5) for _, v in seq[1].items())


def test_partition_examples(doubling):
    ladder = build_msf_ladder(doubling, 3)
    assert msf_wavelet_partition(ladder, 0)[1] == [(1,)]
    assert ints(msf_wavelet_partition(ladder, 1)[1]) == [-1, 2]
    for j in range(3):
        part = msf_wavelet_partition(ladder, j)
        assert all(len(p) == 2 ** j for p in part.parts)
        union = [c for p in part.parts for c in p]
        assert sorted(union) == sorted(ladder.K(j + 1))


def test_msf_wavelet_examples(doubling):
    ladder = build_msf_ladder(doubling, 3)
    (psi0,) = msf_wavelets(ladder, 0)
    assert psi0.support() == [(1,)] and psi0[(1,)] == 1
    (psi1,) = msf_wavelets(ladder, 1)
    assert ints(psi1.support()) == [-1, 2]
    assert psi1[(2,)] == pytest.approx(2 ** -0.5)
    for j in range(3):
        assert gram_is_identity(gram_matrix(translates(msf_wavelets(ladder, j)[0], j)))


def test_partition_for_m_three():
    model = torus_model([[3]])
    ladder = build_msf_ladder(model, 2)
    part = msf_wavelet_partition(ladder, 1)
    assert len(part.parts) == 3
    assert set(part[0]) == set(ladder.K(1))
