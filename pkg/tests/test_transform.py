import numpy as np
import pytest

from gwavelets.errors import IndexMismatch, NotInVJ
from gwavelets.fourier import FourierExpansion, random_expansion, translate
from gwavelets.msf import build_msf_ladder, msf_scaling_sequence
from gwavelets.transform import CoefficientTree, analyze, project, synthesize
from gwavelets.wavelets import build_wavelet_system

from helpers import smooth_sequence


@pytest.fixture(scope="module")
def msf_system(doubling):
    return build_wavelet_system(msf_scaling_sequence(build_msf_ladder(doubling, 3)))


@pytest.fixture(scope="module")
def smooth_system(doubling):
    return build_wavelet_system(smooth_sequence(doubling, 3))


def test_analyze_phi0(msf_system):
    tree = analyze(msf_system.seq[0], msf_system)
    assert tree.c0 == pytest.approx(1)
    assert all(np.all(d == 0) for d in tree.details.values())


def test_analyze_basis_member(msf_system, doubling):
    a = doubling.kernel_elements(2)[3]
    tree = analyze(translate(msf_system.psis[2][0], a), msf_system)
    assert tree.details[2][0, 3] == pytest.approx(1)
    assert tree.energy() == pytest.approx(1)


@pytest.mark.parametrize("name", ["msf_system", "smooth_system"])
def test_parseval_and_roundtrip(name, request):
    system = request.getfixturevalue(name)
    J = system.J
    for seed in range(20):
        # a random combination of V_J basis translates
        rng = np.random.default_rng(seed)
        f = FourierExpansion(system.model, {})
        for a in system.model.kernel_elements(J):
            f = f + translate(system.seq[J], a) * complex(rng.standard_normal(), rng.standard_normal())
        tree = analyze(f, system)
        assert tree.energy() == pytest.approx(f.norm() ** 2, rel=1e-9)
        assert (synthesize(tree, system) - f).norm() <= 1e-9 * f.norm()


def test_zero_and_unit_trees(msf_system, doubling):
    m = doubling.m
    zero = CoefficientTree(doubling, 0j, {j: np.zeros((m - 1, m ** j), complex) for j in range(3)})
    assert len(synthesize(zero, msf_system)) == 0
    unit = CoefficientTree(doubling, 0j, {j: np.zeros((m - 1, m ** j), complex) for j in range(3)})
    unit.details[1][0, 1] = 1
    a = doubling.kernel_elements(1)[1]
    assert synthesize(unit, msf_system).allclose(translate(msf_system.psis[1][0], a), 0)


def test_not_in_vj(msf_system, doubling):
    with pytest.raises(NotInVJ) as err:
        analyze(FourierExpansion.delta(doubling, (100,)), msf_system)
    assert err.value.residual == pytest.approx(1)


def test_projection_examples(msf_system, doubling):
    inside = random_expansion(doubling, msf_system.seq[2].support(), seed=1)
    assert project(inside, msf_system, 2).allclose(inside, 1e-12)
    outside = FourierExpansion.delta(doubling, (40,))
    assert len(project(outside, msf_system, 2)) == 0
    f = random_expansion(doubling, [(k,) for k in range(-6, 7)], seed=2)
    p = project(f, msf_system, 2)
    assert (f - p).norm() ** 2 + p.norm() ** 2 == pytest.approx(f.norm() ** 2, rel=1e-9)


def test_telescoping(smooth_system):
    model = smooth_system.model
    f = random_expansion(model, [(k,) for k in range(-8, 9)], seed=4)
    for j in range(smooth_system.J):
        diff = project(f, smooth_system, j + 1) - project(f, smooth_system, j)
        rebuilt = FourierExpansion(model, {})
        for psi in smooth_system.psis[j]:
            for a in model.kernel_elements(j):
                t = translate(psi, a)
                c = sum(diff[chi] * np.conj(t[chi]) for chi in t.support())
                rebuilt = rebuilt + t * complex(c)
        assert (diff - rebuilt).norm() < 1e-9


def test_tree_json_roundtrip(msf_system, doubling):
    f = random_expansion(doubling, msf_system.seq[3].support(), seed=8)
    tree = analyze(f, msf_system)
    again = CoefficientTree.from_json(tree.to_json())
    assert again.c0 == tree.c0
    for j in tree.details:
        assert np.array_equal(again.details[j], tree.details[j])


def test_tree_index_mismatch(msf_system, doubling):
    obj = analyze(msf_system.seq[0], msf_system).to_json()
    obj["details"].append({"j": 1, "nu": 2, "a": ["0"], "re": 1.0, "im": 0.0})
    with pytest.raises(IndexMismatch):
        CoefficientTree.from_json(obj)


def test_threads_give_identical_results(msf_system, doubling, monkeypatch):
    f = random_expansion(doubling, msf_system.seq[3].support(), seed=5)
    serial = analyze(f, msf_system)
    monkeypatch.setenv("GWAVELETS_THREADS", "4")
    parallel = analyze(f, msf_system)
    for j in serial.details:
        assert np.array_equal(serial.details[j], parallel.details[j])
