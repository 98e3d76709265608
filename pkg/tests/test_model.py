import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from kerrjcm.exceptions import NonIdenticalAtoms, ParameterError
from kerrjcm.model import (ModelParams, block_coefficients, rotated_frame,
                           rotation_angle)

finite = st.floats(-50, 50, allow_nan=False)


def test_rotation_angle_example():
    assert rotation_angle(5.0, 3.0, 1.0) == pytest.approx(math.pi / 8, abs=1e-15)


def test_rotation_angle_degenerate_modes():
    assert rotation_angle(2.0, 2.0, 0.7) == pytest.approx(math.pi / 4)
    assert rotation_angle(2.0, 2.0, -0.7) == pytest.approx(-math.pi / 4)
    assert rotation_angle(2.0, 2.0, 0.0) == 0.0


@given(finite, finite, finite)
def test_rotation_angle_odd_and_bounded(O1, O2, g):
    th = rotation_angle(O1, O2, g)
    assert abs(th) <= math.pi / 4 + 1e-15
    assert rotation_angle(O1, O2, -g) == pytest.approx(-th, abs=1e-15)


def test_frame_without_mode_coupling():
    p = ModelParams(omega1=3.0, omega2=4.5, Omega1=2.0, Omega2=1.25, lambda12=0.0)
    f = rotated_frame(p)
    assert (f.OmegaBar1, f.OmegaBar2) == (2.0, 1.25)
    assert f.delta1 == pytest.approx(3.0 - (1.25 - 2.0))
    assert f.delta2 == pytest.approx(4.5 - (1.25 - 2.0))


def test_frame_degenerate_modes():
    # theta = pi/4 puts the symmetric combination on mode 1
    f = rotated_frame(ModelParams(Omega1=3.0, Omega2=3.0, lambda12=0.5))
    assert f.OmegaBar1 == pytest.approx(3.5)
    assert f.OmegaBar2 == pytest.approx(2.5)
    assert f.delta1 == pytest.approx(4.0 - (2.5 - 3.5))


def test_frame_against_eigenvalues():
    p = ModelParams(Omega1=5.0, Omega2=3.0, lambda12=1.0)
    f = rotated_frame(p)
    m = np.array([[5.0, 1.0], [1.0, 3.0]])
    c, s = math.cos(f.theta), math.sin(f.theta)
    # (c, s) and (-s, c) are the normal modes belonging to OmegaBar1, OmegaBar2
    np.testing.assert_allclose(m @ [c, s], f.OmegaBar1 * np.array([c, s]), atol=1e-13)
    np.testing.assert_allclose(m @ [-s, c], f.OmegaBar2 * np.array([-s, c]), atol=1e-13)
    np.testing.assert_allclose(sorted([f.OmegaBar1, f.OmegaBar2]), np.linalg.eigvalsh(m), atol=1e-13)


@given(finite, finite, finite)
def test_frame_preserves_trace(O1, O2, g):
    f = rotated_frame(ModelParams(Omega1=O1, Omega2=O2, lambda12=g))
    scale = max(1.0, abs(O1) + abs(O2) + abs(g))
    assert abs((f.OmegaBar1 + f.OmegaBar2) - (O1 + O2)) <= 1e-12 * scale


@given(finite, finite, finite)
def test_frame_matches_eigenvalues(O1, O2, g):
    f = rotated_frame(ModelParams(Omega1=O1, Omega2=O2, lambda12=g))
    ev = np.linalg.eigvalsh(np.array([[O1, g], [g, O2]]))
    scale = max(1.0, abs(O1) + abs(O2) + abs(g))
    np.testing.assert_allclose(sorted([f.OmegaBar1, f.OmegaBar2]), ev, atol=1e-12 * scale)


def test_block_coefficients_vacuum_block():
    b = block_coefficients(0, 0, 1.0, 1.0)
    assert (b.f1, b.f2) == pytest.approx((math.sqrt(2), math.sqrt(2)))
    assert (b.V1, b.V2, b.V3) == (2.0, 2.0, 2.0)


def test_block_coefficients_without_kerr():
    b = block_coefficients(7, 3, 1.3, 0.0)
    assert (b.V1, b.V2, b.V3) == (0.0, 0.0, 0.0)


def test_block_coefficients_worked_example():
    b = block_coefficients(1, 2, 2.0, 0.5)
    assert b.f1 == pytest.approx(6.0)
    assert b.f2 == pytest.approx(2.0 * math.sqrt(8.0))
    assert b.V1 == pytest.approx(10.0)
    assert b.V2 == pytest.approx(10.0)
    # the |gg, 1, 4> ket: 0 + 4*3 + 2*1*4 = 20, times 0.5
    assert b.V3 == pytest.approx(10.0)


@pytest.mark.parametrize("n1", range(6))
@pytest.mark.parametrize("n2", range(6))
def test_block_coefficients_table(n1, n2):
    lam, chi = 1.7, 0.3
    b = block_coefficients(n1, n2, lam, chi)
    assert b.f1 == pytest.approx(lam * math.sqrt((n1 + 2) * (n2 + 1)), rel=1e-15)
    assert b.f2 == pytest.approx(lam * math.sqrt((n1 + 1) * (n2 + 2)), rel=1e-15)
    assert b.V1 == pytest.approx(chi * ((n1 + 2) * (n1 + 1) + n2 * (n2 - 1) + 2 * (n1 + 2) * n2))
    assert b.V2 == pytest.approx(chi * (n1 * (n1 + 1) + n2 * (n2 + 1) + 2 * (n1 + 1) * (n2 + 1)))
    assert b.V3 == pytest.approx(chi * (n1 * (n1 - 1) + (n2 + 1) * (n2 + 2) + 2 * n1 * (n2 + 2)))


def _kerr_diagonal(chi, a, b):
    # chi (a1+^2 a1^2 + a2+^2 a2^2) + 2 chi a1+ a1 a2+ a2 on |a, b>
    size = max(a, b) + 1
    num = np.diag(np.arange(size, dtype=float))
    pair = num @ (num - np.eye(size))
    return chi * (pair[a, a] + pair[b, b] + 2.0 * num[a, a] * num[b, b])


@pytest.mark.parametrize("n1,n2", [(0, 0), (1, 2), (4, 0), (3, 7)])
def test_kerr_shifts_are_diagonal_energies(n1, n2):
    chi = 0.35
    b = block_coefficients(n1, n2, 1.0, chi)
    assert b.V1 == pytest.approx(_kerr_diagonal(chi, n1 + 2, n2))
    assert b.V2 == pytest.approx(_kerr_diagonal(chi, n1 + 1, n2 + 1))
    assert b.V3 == pytest.approx(_kerr_diagonal(chi, n1, n2 + 2))


def test_edge_blocks_have_no_missing_couplings():
    b = block_coefficients(-2, 3, 1.0, 0.4)
    assert (b.f1, b.f2) == (0.0, 0.0)
    assert b.is_edge
    b = block_coefficients(-1, 3, 1.0, 0.4)
    assert b.f1 > 0 and b.f2 == 0.0
    with pytest.raises(ParameterError):
        block_coefficients(-3, 0, 1.0, 0.0)


@pytest.mark.parametrize("kw", [dict(beta=4.0), dict(beta=-0.1), dict(lambda1=0.0),
                                dict(n_max=0), dict(tail_tol=0.0), dict(chi=float("nan"))])
def test_params_rejected(kw):
    with pytest.raises(ParameterError):
        ModelParams(**kw)


def test_identical_atom_checks():
    p = ModelParams()
    assert p.require_identical() == pytest.approx(5.0)
    with pytest.raises(NonIdenticalAtoms):
        ModelParams(omega2=4.5).require_identical()
    with pytest.raises(NonIdenticalAtoms):
        ModelParams(lambda2=1.2).require_identical()


@pytest.mark.parametrize("chi,delta", [(0.0, 0.0), (0.4, 5.0), (1.5, -2.0)])
def test_with_scaled(chi, delta):
    p = ModelParams(lambda1=2.0, lambda2=2.0).with_scaled(chi, delta)
    assert p.chi == pytest.approx(2.0 * chi)
    assert p.require_identical() == pytest.approx(2.0 * delta, abs=1e-12)
