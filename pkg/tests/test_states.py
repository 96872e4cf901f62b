import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import random_state, random_unitary
from swapnet.entanglement import concurrence
from swapnet.errors import NotHermitian, NotNormalized, NotPSD, ParamOutOfRange
from swapnet.experiments import REFERENCE_FIDUCIAL
from swapnet.states import (
    BELL_VECTORS,
    MAXIMALLY_MIXED,
    DensityMatrix,
    Family,
    PureState,
    StateFamily,
    bell_projector,
    family_state,
    format_state,
    local_rotate,
    make_bell_diagonal,
    make_isotropic,
    make_pure_schmidt,
    make_werner,
    make_x_state,
    parse_state,
    project_to_state,
    purity,
    read_state_file,
    validate_density_matrix,
    write_state_file,
)


def test_bell_basis_order_and_orthonormality():
    assert np.allclose(BELL_VECTORS @ BELL_VECTORS.conj().T, np.eye(4))
    # Phi+, Phi-, Psi+, Psi- in |00>,|01>,|10>,|11> order
    s = 1 / math.sqrt(2)
    assert np.allclose(BELL_VECTORS[0], [s, 0, 0, s])
    assert np.allclose(BELL_VECTORS[1], [s, 0, 0, -s])
    assert np.allclose(BELL_VECTORS[2], [0, s, s, 0])
    assert np.allclose(BELL_VECTORS[3], [0, s, -s, 0])


def test_pure_schmidt_examples():
    assert np.allclose(make_pure_schmidt(0.5).vec, BELL_VECTORS[0])
    assert np.allclose(make_pure_schmidt(0.0).vec, [0, 0, 0, 1])
    assert concurrence(make_pure_schmidt(0.1).density()) == pytest.approx(0.6, abs=1e-12)
    with pytest.raises(ParamOutOfRange):
        make_pure_schmidt(1.2)


def test_pure_state_norm_checked():
    with pytest.raises(ValueError):
        PureState(np.array([1, 1, 0, 0], dtype=complex))


def test_werner_examples():
    assert np.allclose(make_werner(0.0).mat, bell_projector(3))
    assert np.allclose(make_werner(1.0).mat, MAXIMALLY_MIXED)
    assert concurrence(make_werner(0.2)) == pytest.approx(0.7, abs=1e-12)
    with pytest.raises(ParamOutOfRange):
        make_werner(-0.1)


def test_isotropic_examples():
    assert np.allclose(make_isotropic(0.0).mat, bell_projector(0))
    assert np.allclose(make_isotropic(1.0).mat, MAXIMALLY_MIXED)
    assert concurrence(make_isotropic(2 / 3)) == pytest.approx(0.0, abs=1e-12)


def test_bell_diagonal_examples():
    assert np.allclose(make_bell_diagonal((1, 0, 0, 0)).mat, bell_projector(0))
    assert np.allclose(make_bell_diagonal((0.25,) * 4).mat, MAXIMALLY_MIXED)
    assert concurrence(make_bell_diagonal((0.7, 0.1, 0.1, 0.1))) == pytest.approx(0.4, abs=1e-12)
    with pytest.raises((ParamOutOfRange, NotNormalized)):
        make_bell_diagonal((0.5, 0.5, 0.5, 0.0))
    with pytest.raises(ParamOutOfRange):
        make_bell_diagonal((1.1, -0.1, 0, 0))


def test_x_state_examples():
    assert np.allclose(make_x_state(0.5, 0, 0, 0.5, 0.5, 0).mat, bell_projector(0))
    rho = make_x_state(0.45, 0.05, 0.05, 0.45, 0.4, 0.0)
    assert concurrence(rho) == pytest.approx(0.7, abs=1e-12)
    assert concurrence(make_x_state(0.1, 0.2, 0.3, 0.4, 0, 0)) == 0.0
    with pytest.raises(NotPSD):
        make_x_state(0.25, 0.25, 0.25, 0.25, 0.4, 0.0)
    with pytest.raises(NotNormalized):
        make_x_state(0.5, 0.5, 0.5, 0.5, 0, 0)


@pytest.mark.parametrize("gamma", np.linspace(0, 1, 11))
def test_werner_and_isotropic_are_bell_diagonal(gamma):
    w = (gamma / 4, gamma / 4, gamma / 4, 1 - 3 * gamma / 4)
    assert np.max(np.abs(make_werner(gamma).mat - make_bell_diagonal(w).mat)) <= 1e-12
    iso = (1 - 3 * gamma / 4, gamma / 4, gamma / 4, gamma / 4)
    assert np.max(np.abs(make_isotropic(gamma).mat - make_bell_diagonal(iso).mat)) <= 1e-12


def test_validation_errors_name_the_invariant():
    validate_density_matrix(MAXIMALLY_MIXED)
    with pytest.raises(NotPSD, match="eigenvalue"):
        validate_density_matrix(np.diag([0.5, 0.6, -0.1, 0.0]))
    with pytest.raises(NotNormalized):
        validate_density_matrix(np.eye(4) / 2)
    m = np.array(MAXIMALLY_MIXED)
    m[0, 1] = 0.1j
    with pytest.raises(NotHermitian):
        validate_density_matrix(m)
    with pytest.raises(ValueError):
        validate_density_matrix(np.eye(3) / 3)


def test_invalid_state_errors_are_value_errors():
    assert issubclass(NotPSD, ValueError)


def test_density_matrix_checks_on_construction():
    with pytest.raises(NotNormalized):
        DensityMatrix(np.eye(4, dtype=complex))
    rho = DensityMatrix(MAXIMALLY_MIXED)
    assert np.asarray(rho).shape == (4, 4)


def test_printed_fiducial_accepted_at_print_precision():
    rho = validate_density_matrix(REFERENCE_FIDUCIAL, trace_tol=1e-3, psd_tol=1e-3, herm_tol=1e-3)
    assert abs(np.trace(rho.mat).real - 1.0) <= 1e-3


def test_purity_examples():
    assert purity(MAXIMALLY_MIXED) == pytest.approx(0.25)
    assert purity(bell_projector(2)) == pytest.approx(1.0)
    rho = make_werner(0.5)
    assert purity(rho) == pytest.approx(np.trace(rho.mat @ rho.mat).real, abs=1e-14)
    assert purity(rho) == pytest.approx(0.4375, abs=1e-14)


def test_family_dispatch():
    fam = StateFamily(Family.WERNER, (0.2,))
    assert np.allclose(family_state(fam).mat, make_werner(0.2).mat)
    with pytest.raises(ParamOutOfRange):
        StateFamily("x_state", (0.1, 0.2))
    general = StateFamily(Family.GENERAL, tuple(np.eye(4).ravel() / 4))
    assert np.allclose(family_state(general).mat, MAXIMALLY_MIXED)


def test_projection_is_identity_on_valid_states(gen):
    rho = random_state(gen)
    proj, dist = project_to_state(rho)
    assert dist < 1e-14
    assert np.allclose(proj.mat, rho)


def test_projection_repairs_slightly_negative_matrix():
    m = np.diag([0.6, 0.41, 0.0, -0.01]).astype(complex)
    proj, dist = project_to_state(m)
    w = np.linalg.eigvalsh(proj.mat)
    assert w.min() >= -1e-15
    assert np.trace(proj.mat).real == pytest.approx(1.0)
    assert 0 < dist < 0.02


def test_text_roundtrip_is_exact(gen, tmp_path):
    rho = random_state(gen)
    assert np.array_equal(parse_state(format_state(rho)), rho)
    path = tmp_path / "s.txt"
    write_state_file(rho, path)
    assert np.array_equal(read_state_file(path), rho)
    assert b"\r" not in path.read_bytes()


def test_parse_accepts_real_entries_and_comments():
    text = "# fiducial\n" + "\n".join(" ".join(str(x) for x in row) for row in REFERENCE_FIDUCIAL)
    assert np.allclose(parse_state(text), REFERENCE_FIDUCIAL)
    with pytest.raises(ValueError):
        parse_state("1 2 3\n")


@given(st.integers(0, 2**32 - 1))
def test_purity_invariant_under_local_unitaries(seed):
    g = np.random.default_rng(seed)
    rho = random_state(g, rank=int(g.integers(1, 5)))
    rot = local_rotate(rho, random_unitary(g), random_unitary(g))
    assert abs(purity(rot) - purity(rho)) <= 1e-10
    assert 0.25 - 1e-12 <= purity(rot) <= 1 + 1e-12


@given(
    st.floats(0, 1),
    st.floats(0, 1),
    st.floats(0, 1),
    st.floats(-1, 1),
    st.floats(-1, 1),
)
def test_every_x_state_constructor_output_is_valid(a, b, c, s14, s23):
    w = np.array([a, b, c, 1.0]) + 1e-3
    w = w / w.sum()
    g14 = s14 * math.sqrt(w[0] * w[3])
    g23 = s23 * math.sqrt(w[1] * w[2])
    rho = make_x_state(*w, g14, g23)
    validate_density_matrix(rho.mat)
