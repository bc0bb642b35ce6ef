import numpy as np
import pytest

from cdsurface import (CyclicUniform, MatrixPolynomial, ScalarMonomial,
                       circle_quadrature, unit_circle_quadrature)
from cdsurface import mops

TWO_PI_I = 2j * np.pi


def eye_poly(deg, r):
    coeffs = np.zeros((deg + 1, r, r), dtype=complex)
    coeffs[deg] = np.eye(r)
    return MatrixPolynomial(coeffs)


# --- pairing and moments ------------------------------------------------

def test_pairing_residue_identity(quad256):
    fam = ScalarMonomial(r_size=2, N=1)
    val = mops.pairing(eye_poly(0, 2), eye_poly(0, 2), fam, quad256)
    np.testing.assert_allclose(val, TWO_PI_I * np.eye(2), atol=1e-12)


def test_pairing_monomial(quad256):
    fam = ScalarMonomial(r_size=2, N=3)
    val = mops.pairing(eye_poly(1, 2), eye_poly(1, 2), fam, quad256)
    np.testing.assert_allclose(val, TWO_PI_I * np.eye(2), atol=1e-12)


def test_pairing_noncommutative(quad256):
    # <zI, I> != <I, zI> for the cyclic weight: W z dz picks different
    # residues on the two sides of the (matrix-valued) product
    fam = CyclicUniform(r_size=2, L=1, R=1)
    P, Q = eye_poly(1, 2), eye_poly(0, 2)
    lhs = mops.pairing(P, Q, fam, quad256)
    rhs = mops.pairing(Q, P, fam, quad256)
    np.testing.assert_allclose(lhs, rhs, atol=1e-12)
    # the genuine witness: a non-scalar constant polynomial does not
    # commute with the zeroth moment
    C = MatrixPolynomial(np.array([[[1.0, 0.0], [1.0, 1.0]]]))
    lhs = mops.pairing(C, Q, fam, quad256)
    rhs = mops.pairing(Q, C, fam, quad256)
    assert np.max(np.abs(lhs - rhs)) > 1e-3


def test_moments_scalar_monomial(quad256):
    fam = ScalarMonomial(r_size=1, N=2)
    m = mops.compute_moments(fam, quad256, 2)
    expect = np.zeros((5, 1, 1), dtype=complex)
    expect[1, 0, 0] = TWO_PI_I
    np.testing.assert_allclose(m, expect, atol=1e-12)


def test_moments_cyclic_residues(quad256):
    fam = CyclicUniform(r_size=2, L=1, R=1)
    m = mops.compute_moments(fam, quad256, 1)
    # z^{k-1} [[1, 1], [z, 1]]: residues by inspection; every moment
    # with k >= 1 has a polynomial integrand and vanishes
    np.testing.assert_allclose(m[0], TWO_PI_I * np.array([[1, 1], [0, 1]]),
                               atol=1e-12)
    np.testing.assert_allclose(m[1], np.zeros((2, 2)), atol=1e-12)
    np.testing.assert_allclose(m[2], np.zeros((2, 2)), atol=1e-12)


def test_moment_quadrature_convergence(families, quad128, quad256):
    for name, fam in families.items():
        m1 = mops.compute_moments(fam, quad128, 2)
        m2 = mops.compute_moments(fam, quad256, 2)
        assert np.max(np.abs(m1 - m2)) < 1e-12, name


# --- the four MOP families ----------------------------------------------

def test_monomial_weight_closed_form(quad256):
    fam = ScalarMonomial(r_size=2, N=2)
    system = mops.mop_system(fam, quad256, 2)
    z = 1.7 - 0.3j
    np.testing.assert_allclose(system.PL[2](z), z ** 2 * np.eye(2),
                               atol=1e-12)
    np.testing.assert_allclose(system.QL[1](z), np.eye(2) / TWO_PI_I,
                               atol=1e-12)


def test_scalar_hand_solution(quad256):
    # w = z^{-2}(1+z): the monic degree-1 condition reads
    # 0 = (2 pi i)^{-1} oint (z + c0)(1+z) z^{-2} dz = c0 + 1,
    # so p_1(z) = z - 1
    nodes = quad256.nodes
    moms = np.stack([
        np.sum(quad256.weights * nodes ** k * (1 + nodes) / nodes ** 2)
        .reshape(1, 1) for k in range(3)])
    system = mops.solve_mops(moms, 1)
    np.testing.assert_allclose(system.PL[1].coeffs[:, 0, 0], [-1.0, 1.0],
                               atol=1e-12)


def test_biorthogonality(quad256):
    # L=4, R=3 keeps every moment system through degree 3 invertible
    # (the pole order has to match the degree window)
    fam = CyclicUniform(r_size=2, L=4, R=3)
    system = mops.mop_system(fam, quad256, 3)
    assert mops.biorthogonality_residual(system, fam, quad256) < 1e-10


def test_monic_leading_coefficients(quad256):
    fam = CyclicUniform(r_size=2, L=2, R=2)
    system = mops.mop_system(fam, quad256, 2)
    for j in range(3):
        np.testing.assert_allclose(system.PL[j].leading, np.eye(2),
                                   atol=1e-13)
        np.testing.assert_allclose(system.PR[j].leading, np.eye(2),
                                   atol=1e-13)


def test_transpose_symmetry(quad256):
    # if W = W^T then the left monic family is the transpose of the right
    def wsym(z):
        base = np.array([[2.0, 1.0], [1.0, 3.0]])
        return (np.asarray(z)[..., None, None] ** (-2) * base
                + np.asarray(z)[..., None, None] ** (-1) * np.eye(2))

    nodes = quad256.nodes
    moms = np.stack([np.tensordot(quad256.weights,
                                  nodes[:, None, None] ** k * wsym(nodes),
                                  axes=(0, 0)) for k in range(5)])
    system = mops.solve_mops(moms, 2)
    for j in range(3):
        np.testing.assert_allclose(
            system.PL[j].coeffs,
            np.transpose(system.PR[j].coeffs, (0, 2, 1)), atol=1e-11)


def test_weight_scaling(quad256):
    fam = CyclicUniform(r_size=2, L=2, R=2)
    moms = mops.compute_moments(fam, quad256, 2)
    s1 = mops.solve_mops(moms, 2)
    s3 = mops.solve_mops(3.0 * moms, 2)
    w, z = 1.3 + 0.1j, 0.4 - 0.2j
    np.testing.assert_allclose(mops.cd_kernel(s3, w, z),
                               mops.cd_kernel(s1, w, z) / 3, atol=1e-12)


# --- CD kernel: three routes --------------------------------------------

def test_kernel_monomial_closed_form(quad256):
    fam = ScalarMonomial(r_size=2, N=2)
    system = mops.mop_system(fam, quad256, 2)
    expect = (9 - 4) / (TWO_PI_I * 1) * np.eye(2)
    # degree-0 duals of z^{-2} I do not exist (zeroth moment vanishes),
    # so the biorthogonal-sum route is unavailable here; the block and
    # CD-formula routes still give the kernel
    for route in (mops.cd_kernel, mops.cd_kernel_formula):
        np.testing.assert_allclose(route(system, 2.0, 3.0), expect,
                                   atol=1e-12)
    assert ("Q", 0) in system.missing


def test_kernel_sum_two_forms_agree(quad256, rng):
    fam = CyclicUniform(r_size=2, L=2, R=2)
    system = mops.mop_system(fam, quad256, 2)
    for _ in range(10):
        w = 1.3 * np.exp(2j * np.pi * rng.random())
        z = 0.8 * np.exp(2j * np.pi * rng.random())
        a = mops.cd_kernel_sum(system, w, z)
        b = mops.cd_kernel_sum(system, w, z, alt=True)
        np.testing.assert_allclose(a, b, atol=1e-10)


def test_kernel_three_routes(quad256, rng):
    fam = CyclicUniform(r_size=2, L=2, R=2)
    system = mops.mop_system(fam, quad256, 2)
    for _ in range(50):
        w = 1.4 * np.exp(2j * np.pi * rng.random())
        z = 0.7 * np.exp(2j * np.pi * rng.random())
        Kf = mops.cd_kernel_formula(system, w, z)
        np.testing.assert_allclose(mops.cd_kernel_sum(system, w, z), Kf,
                                   atol=1e-10)
        np.testing.assert_allclose(mops.cd_kernel(system, w, z), Kf,
                                   atol=1e-10)
        np.testing.assert_allclose(
            mops.kernel_from_Y(system, fam, quad256, w, z), Kf, atol=1e-7)


def test_kernel_removable_singularity(quad256):
    fam = CyclicUniform(r_size=2, L=2, R=2)
    system = mops.mop_system(fam, quad256, 2)
    z = 0.9 + 0.2j
    near = mops.cd_kernel_formula(system, z + 1e-9, z)
    np.testing.assert_allclose(near, mops.cd_kernel_sum(system, z, z),
                               atol=1e-8)


# --- Riemann-Hilbert assembly -------------------------------------------

def test_Y_unimodular_and_inverse(quad256):
    fam = CyclicUniform(r_size=2, L=2, R=2)
    system = mops.mop_system(fam, quad256, 2)
    z = 2.0 * np.exp(0.6j)
    Y = mops.assemble_Y(system, fam, quad256, z)
    Yi = mops.assemble_Yinv(system, fam, quad256, z)
    assert abs(np.linalg.det(Y) - 1) < 1e-8
    np.testing.assert_allclose(Y @ Yi, np.eye(4), atol=1e-8)


def test_Y_asymptotics(quad256):
    fam = CyclicUniform(r_size=2, L=2, R=2)
    system = mops.mop_system(fam, quad256, 2)
    z = 1e3 * np.exp(0.3j)
    Y = mops.assemble_Y(system, fam, quad256, z)
    scale = np.diag([z ** -2, z ** -2, z ** 2, z ** 2])
    assert np.max(np.abs(Y @ scale - np.eye(4))) < 1e-2


def test_Y_jump_condition(quad256):
    # boundary values from deformed contours on either side of the unit
    # circle satisfy Y+ = Y- [[I, W], [0, I]]
    fam = CyclicUniform(r_size=2, L=2, R=2)
    system = mops.mop_system(fam, quad256, 2)
    inner = circle_quadrature(0, 0.8, 256)
    outer = circle_quadrature(0, 1.25, 256)
    s = np.exp(0.7j)
    Yp = mops.assemble_Y(system, fam, quad256, s, cauchy_quad=outer)
    Ym = mops.assemble_Y(system, fam, quad256, s, cauchy_quad=inner)
    J = np.eye(4, dtype=complex)
    J[:2, 2:] = fam.weight(s)
    assert np.max(np.abs(Yp - Ym @ J)) < 1e-6


# --- reproducing properties ---------------------------------------------

def test_reproducing_and_dual(quad256, rng):
    for fam in (CyclicUniform(r_size=2, L=2, R=2),
                ScalarMonomial(r_size=2, N=2)):
        system = mops.mop_system(fam, quad256, 2)
        for _ in range(20):
            C = (rng.standard_normal((2, 2, 2))
                 + 1j * rng.standard_normal((2, 2, 2)))
            P = MatrixPolynomial(C)
            z = 0.8 * np.exp(2j * np.pi * rng.random())
            assert mops.reproducing_residual(system, fam, quad256, P, z) \
                < 1e-8
            assert mops.dual_reproducing_residual(system, fam, quad256,
                                                  P, z) < 1e-8
