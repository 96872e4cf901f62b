import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import random_state, random_unitary, ref_average, ref_swap
from swapnet.entanglement import concurrence
from swapnet.errors import InvalidState, PathTooLong
from swapnet.states import bell_projector, local_rotate, make_isotropic, make_pure_schmidt, make_werner
from swapnet.swap import (
    OracleKind,
    PathSpec,
    average_swap_concurrence,
    average_swap_concurrence_batch,
    evaluate_path,
    path_average_batch,
    path_average_concurrence,
    predicted_single_swap,
    swap_operators,
    swap_pair,
    werner_path_concurrence,
    werner_threshold,
)


def werner_c(c):
    return make_werner(2 * (1 - c) / 3)


def pure_c(c):
    lam = (1 + math.sqrt(1 - c * c)) / 2
    return make_pure_schmidt(lam).density()


def test_bell_pair_swap():
    outs = swap_pair(bell_projector(0), bell_projector(0))
    for i, o in enumerate(outs):
        assert o.probability == pytest.approx(0.25)
        assert np.allclose(o.state.mat, bell_projector(i), atol=1e-12)


def test_werner_pair_outputs_are_werner():
    gamma = 0.2
    outs = swap_pair(make_werner(gamma), make_werner(gamma))
    g2 = 2 * gamma - gamma**2
    for i, o in enumerate(outs):
        assert o.probability == pytest.approx(0.25, abs=1e-12)
        # two singlets measured in outcome i leave Bell state i plus white noise
        w = np.full(4, g2 / 4)
        w[i] = 1 - 3 * g2 / 4
        expected = sum(w[k] * bell_projector(k) for k in range(4))
        assert np.allclose(o.state.mat, expected, atol=1e-12)


def test_product_inputs_give_product_outputs():
    p00 = np.zeros((4, 4), complex)
    p00[0, 0] = 1
    outs = swap_pair(p00, p00)
    assert [round(o.probability, 12) for o in outs] == [0.5, 0.5, 0.0, 0.0]
    assert outs[2].degenerate and outs[2].state is None
    for o in outs[:2]:
        assert np.allclose(o.state.mat, p00)
        assert concurrence(o.state) == 0.0
    assert average_swap_concurrence(p00, p00) == 0.0


def test_engine_matches_dense_projection_oracle(gen):
    for _ in range(50):
        r1, r2 = random_state(gen), random_state(gen, 2)
        ours = swap_pair(r1, r2)
        ref = ref_swap(r1, r2)
        for o, (p, st_) in zip(ours, ref):
            assert o.probability == pytest.approx(p, abs=1e-13)
            assert np.allclose(o.state.mat, st_, atol=1e-12)


def test_measured_qubit_convention_with_asymmetric_states():
    # Amplitudes differ on every basis index, so any swap of the roles of
    # (a, b) or (c, d) changes the outcome operators.
    psi = np.array([0.1, 0.3 + 0.2j, 0.5, 0.7 - 0.1j])
    psi /= np.linalg.norm(psi)
    phi = np.array([0.6, -0.2j, 0.4, 0.1 + 0.3j])
    phi /= np.linalg.norm(phi)
    r1, r2 = np.outer(psi, psi.conj()), np.outer(phi, phi.conj())
    ops = swap_operators(r1, r2)
    bell = np.array([[1, 0, 0, 1], [1, 0, 0, -1], [0, 1, 1, 0], [0, 1, -1, 0]]) / math.sqrt(2)
    for i in range(4):
        # explicit index formula: joint index 8a + 4b + 2c + d, measurement on (b, c)
        v = np.zeros(4, complex)
        for a in range(2):
            for d in range(2):
                v[2 * a + d] = sum(
                    np.conj(bell[i, 2 * b + c]) * psi[2 * a + b] * phi[2 * c + d] for b in range(2) for c in range(2)
                )
        assert np.allclose(ops[i], np.outer(v, v.conj()), atol=1e-14)
    swapped = swap_operators(r2, r1)
    assert not np.allclose(ops, swapped)


def test_probabilities_complete(gen):
    for _ in range(50):
        outs = swap_pair(random_state(gen), random_state(gen))
        assert sum(o.probability for o in outs) == pytest.approx(1.0, abs=1e-9)


def test_pure_pair_example():
    v = average_swap_concurrence(make_pure_schmidt(0.3).density(), make_pure_schmidt(0.2).density())
    assert v == pytest.approx(2 * math.sqrt(0.21) * 2 * math.sqrt(0.16), abs=1e-12)
    assert v == pytest.approx(0.73321, abs=1e-5)


def test_werner_pair_examples():
    assert average_swap_concurrence(werner_c(0.7), werner_c(0.7)) == pytest.approx(0.46, abs=1e-12)
    assert average_swap_concurrence(werner_c(0.2), werner_c(0.2)) == pytest.approx(0.0, abs=1e-12)


def test_isotropic_pair_uses_werner_formula():
    a = make_isotropic(2 * (1 - 0.8) / 3)
    b = make_isotropic(2 * (1 - 0.6) / 3)
    assert average_swap_concurrence(a, b) == pytest.approx(predicted_single_swap("werner_pair", 0.8, 0.6), abs=1e-12)


def test_predicted_single_swap_examples():
    assert predicted_single_swap(OracleKind.PRODUCT, 1, 1) == 1
    assert predicted_single_swap(OracleKind.WERNER_PAIR, 1, 1) == pytest.approx(1)
    assert predicted_single_swap(OracleKind.WERNER_PAIR, 0.5, 0.5) == pytest.approx(1 / 6)


def test_werner_path_formula_examples():
    assert werner_path_concurrence([1, 1, 1]) == pytest.approx(1.0)
    assert werner_path_concurrence([0.7, 0.7]) == pytest.approx(predicted_single_swap("werner_pair", 0.7, 0.7))
    assert werner_path_concurrence([0.8] * 3) == pytest.approx(0.476444, abs=1e-6)
    with pytest.raises(ValueError):
        werner_path_concurrence([])


def test_werner_threshold_examples():
    assert werner_threshold(1) == 0.0
    assert werner_threshold(2) == pytest.approx((math.sqrt(3) - 1) / 2, abs=1e-15)
    ts = [werner_threshold(l) for l in range(1, 40)]
    assert all(b > a for a, b in zip(ts, ts[1:])) and ts[-1] < 1
    # at threshold the path formula vanishes
    for l in range(2, 7):
        assert werner_path_concurrence([werner_threshold(l)] * l) == pytest.approx(0.0, abs=1e-12)


def test_path_examples():
    assert path_average_concurrence([pure_c(0.9)] * 3) == pytest.approx(0.729, abs=1e-12)
    assert path_average_concurrence([werner_c(0.8)] * 3) == pytest.approx(0.476444, abs=1e-6)
    assert path_average_concurrence([make_werner(1 / 3)]) == pytest.approx(0.5, abs=1e-12)


@pytest.mark.parametrize("l", [2, 3, 4, 5])
def test_werner_paths_mixed_concurrences(l, gen):
    cs = gen.uniform(0.5, 1.0, l)
    v = path_average_concurrence([werner_c(c) for c in cs])
    assert v == pytest.approx(werner_path_concurrence(cs), abs=1e-10)


def test_two_edge_path_equals_single_swap(gen):
    r1, r2 = random_state(gen), random_state(gen)
    assert path_average_concurrence([r1, r2]) == pytest.approx(average_swap_concurrence(r1, r2), abs=1e-12)


def test_three_edge_path_matches_nested_dense_oracle(gen):
    r1, r2, r3 = (random_state(gen) for _ in range(3))
    total = 0.0
    for p, mid in ref_swap(r1, r2):
        total += p * ref_average(mid, r3)
    res = evaluate_path([r1, r2, r3])
    assert res.value == pytest.approx(total, abs=1e-9)
    assert res.n_branches == 16 and res.pruned_mass == 0.0


def test_pruned_mass_bounds_dropped_branches():
    p00 = np.zeros((4, 4), complex)
    p00[0, 0] = 1
    res = evaluate_path([p00, p00, bell_projector(0)])
    assert res.value == 0.0
    assert 0.0 <= res.pruned_mass <= 1e-11


def test_path_length_cap():
    with pytest.raises(PathTooLong):
        evaluate_path([werner_c(0.9)] * 9)
    with pytest.raises(InvalidState):
        PathSpec(())


def test_batch_path_matches_single(gen):
    edges = np.stack([np.stack([random_state(gen) for _ in range(3)]) for _ in range(5)])
    values, pruned = path_average_batch(edges)
    for k in range(5):
        assert values[k] == pytest.approx(path_average_concurrence(list(edges[k])), abs=1e-13)
    assert pruned.shape == (5,)


def test_batch_swap_broadcasts(gen):
    left = np.stack([random_state(gen) for _ in range(6)])
    right = random_state(gen)
    v = average_swap_concurrence_batch(left, right)
    assert v.shape == (6,)
    assert v[2] == pytest.approx(average_swap_concurrence(left[2], right), abs=1e-14)


@given(st.integers(0, 2**32 - 1))
def test_upper_bound_product_of_concurrences(seed):
    g = np.random.default_rng(seed)
    r1 = random_state(g, int(g.integers(1, 5)))
    r2 = random_state(g, int(g.integers(1, 5)))
    assert average_swap_concurrence(r1, r2) <= concurrence(r1) * concurrence(r2) + 1e-9


@given(st.integers(0, 2**32 - 1))
def test_pure_times_mixed_product_law(seed):
    g = np.random.default_rng(seed)
    lam = g.uniform(0, 1)
    pure = local_rotate(make_pure_schmidt(lam).density().mat, random_unitary(g), random_unitary(g))
    mixed = random_state(g, int(g.integers(1, 5)))
    v = average_swap_concurrence(pure, mixed)
    assert v == pytest.approx(concurrence(pure) * concurrence(mixed), abs=1e-6)


@given(st.integers(0, 2**32 - 1))
def test_swap_is_invariant_under_outer_local_unitaries(seed):
    g = np.random.default_rng(seed)
    r1, r2 = random_state(g), random_state(g)
    ua, ud = random_unitary(g), random_unitary(g)
    eye = np.eye(2)
    v = average_swap_concurrence(r1, r2)
    w = average_swap_concurrence(local_rotate(r1, ua, eye), local_rotate(r2, eye, ud))
    assert w == pytest.approx(v, abs=1e-9)
