import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import YY_REF, ref_concurrence, random_state, random_unitary
from swapnet.entanglement import (
    concurrence,
    concurrence_batch,
    concurrence_closed_form,
    concurrence_spectrum,
    param_for_concurrence,
    spin_flip,
)
from swapnet.errors import NotPSD, ParamOutOfRange, UnsupportedFamily
from swapnet.states import (
    MAXIMALLY_MIXED,
    Family,
    StateFamily,
    bell_projector,
    family_state,
    local_rotate,
    make_x_state,
)


def test_spin_flip_examples():
    assert np.allclose(spin_flip(bell_projector(0)), bell_projector(0))
    assert np.allclose(spin_flip(MAXIMALLY_MIXED), MAXIMALLY_MIXED)
    p00 = np.zeros((4, 4), complex)
    p00[0, 0] = 1
    p11 = np.zeros((4, 4), complex)
    p11[3, 3] = 1
    assert np.allclose(spin_flip(p00), p11)


@pytest.mark.parametrize("i", range(4))
def test_bell_states_are_maximally_entangled(i):
    assert concurrence(bell_projector(i)) == pytest.approx(1.0, abs=1e-12)


def test_spectrum_is_descending_and_nonnegative(gen):
    mu = concurrence_spectrum(random_state(gen)).mu
    assert np.all(np.diff(mu) <= 0) and np.all(mu >= 0)


def test_matches_textbook_formula_on_random_states(gen):
    for _ in range(100):
        rho = random_state(gen, 4)
        assert concurrence(rho) == pytest.approx(ref_concurrence(rho), abs=1e-9)
    # zero eigenvalues cost the reference sqrt(eps) accuracy
    for rank in (2, 3):
        for _ in range(50):
            rho = random_state(gen, rank)
            assert concurrence(rho) == pytest.approx(ref_concurrence(rho), abs=1e-7)


def test_pure_states_match_overlap_formula(gen):
    for _ in range(200):
        psi = gen.standard_normal(4) + 1j * gen.standard_normal(4)
        psi /= np.linalg.norm(psi)
        exact = abs(psi @ YY_REF @ psi)
        assert concurrence(np.outer(psi, psi.conj())) == pytest.approx(exact, abs=1e-12)


def test_batch_is_homogeneous(gen):
    rhos = np.stack([random_state(gen) for _ in range(20)])
    p = gen.uniform(0.01, 1, 20)
    c = concurrence_batch(rhos)
    assert np.allclose(concurrence_batch(rhos * p[:, None, None]), p * c, atol=1e-14)
    assert concurrence_batch(rhos.reshape(4, 5, 4, 4)).shape == (4, 5)


def test_non_psd_rejected():
    with pytest.raises(NotPSD):
        concurrence(np.diag([0.5, 0.6, -0.1, 0.0]).astype(complex))


def test_closed_form_examples():
    assert concurrence_closed_form(StateFamily(Family.PURE_SCHMIDT, (0.5,))) == 1.0
    assert concurrence_closed_form(StateFamily(Family.BELL_DIAGONAL, (0.7, 0.1, 0.1, 0.1))) == pytest.approx(0.4)
    assert concurrence_closed_form(StateFamily(Family.ISOTROPIC, (2 / 3,))) == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(UnsupportedFamily):
        concurrence_closed_form(StateFamily(Family.GENERAL, tuple(np.eye(4).ravel() / 4)))


def test_inverse_examples():
    assert param_for_concurrence("werner", 0.5).params[0] == pytest.approx(1 / 3)
    assert param_for_concurrence("pure", 1.0).params[0] == pytest.approx(0.5)
    assert param_for_concurrence("isotropic", 0.0).params[0] == pytest.approx(2 / 3)
    with pytest.raises(ParamOutOfRange):
        param_for_concurrence("werner", 1.5)
    with pytest.raises(UnsupportedFamily):
        param_for_concurrence("x_state", 0.5)


@pytest.mark.parametrize("tag", ["pure", "werner", "isotropic"])
def test_inverse_round_trip(tag):
    for c in np.linspace(0, 1, 50):
        fam = param_for_concurrence(tag, c)
        assert concurrence_closed_form(fam) == pytest.approx(c, abs=1e-12)


def _grid_families():
    ts = np.linspace(0, 1, 50)
    for t in ts:
        yield StateFamily(Family.PURE_SCHMIDT, (t,))
        yield StateFamily(Family.WERNER, (t,))
        yield StateFamily(Family.ISOTROPIC, (t,))
        a = 0.1 + 0.8 * t
        r = (1 - a) / 3
        yield StateFamily(Family.BELL_DIAGONAL, (a, r, r * 0.5, r * 1.5))
        d = np.array([0.4, 0.1 * t + 0.05, 0.1, 0.4])
        d = d / d.sum()
        yield StateFamily(Family.X_STATE, (*d, np.sqrt(d[0] * d[3]) * t, -np.sqrt(d[1] * d[2]) * (1 - t)))


def test_engine_agrees_with_closed_forms_on_parameter_grid():
    for fam in _grid_families():
        assert concurrence(family_state(fam)) == pytest.approx(concurrence_closed_form(fam), abs=1e-9)


def test_diagonal_states_are_separable(gen):
    for _ in range(20):
        d = gen.dirichlet(np.ones(4))
        assert concurrence(make_x_state(*d, 0, 0)) == 0.0


@given(st.integers(0, 2**32 - 1))
def test_local_unitary_invariance(seed):
    g = np.random.default_rng(seed)
    rho = random_state(g, rank=int(g.integers(1, 5)))
    rot = local_rotate(rho, random_unitary(g), random_unitary(g))
    assert abs(concurrence(rot) - concurrence(rho)) <= 1e-9


@given(st.integers(0, 2**32 - 1), st.floats(0, 1))
def test_convexity(seed, t):
    g = np.random.default_rng(seed)
    r1, r2 = random_state(g, 2), random_state(g, 1)
    mix = t * r1 + (1 - t) * r2
    assert concurrence(mix) <= t * concurrence(r1) + (1 - t) * concurrence(r2) + 1e-9


@given(st.integers(0, 2**32 - 1))
def test_range(seed):
    g = np.random.default_rng(seed)
    c = concurrence(random_state(g, rank=int(g.integers(1, 5))))
    assert 0.0 <= c <= 1.0 + 1e-12
