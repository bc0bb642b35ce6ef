"""Matrix orthogonal polynomials and the matrix CD kernel.

The bilinear (non-Hermitian) pairing is <P, Q> = int_gamma P(z) W(z) Q(z) dz.
Four polynomial families are computed from the moment linear systems:

  P^L_j, P^R_j : monic degree-j, left/right orthogonal to all lower powers;
  Q^L_j, Q^R_j : degree <= j with <Q^L_j, z^k I> = <z^k I, Q^R_j> = delta_{kj} I.

The degree-N CD (reproducing) kernel is evaluated by three independent
routes: the biorthogonal sum, the Christoffel-Darboux two-term formula,
and assembly from the 2r x 2r Riemann-Hilbert matrix Y.  Existence of the
polynomials is *not* guaranteed; singular moment systems raise
SingularSystemError instead of returning NaNs.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .contour import ContourQuadrature
from .errors import NearContourWarning, SingularSystemError
from .weights import WeightFamily

TWO_PI_I = 2j * np.pi
EPS_SWITCH = 1e-6        # |z - w| below which the CD formula falls back
COND_MAX = 1e12
NEAR_CONTOUR_DIST = 1e-3


@dataclass(frozen=True)
class MatrixPolynomial:
    """Polynomial with r x r matrix coefficients, low degree first."""

    coeffs: np.ndarray  # shape (d+1, r, r)

    def __post_init__(self):
        object.__setattr__(self, "coeffs",
                           np.asarray(self.coeffs, dtype=complex))
        if self.coeffs.ndim != 3 or self.coeffs.shape[1] != self.coeffs.shape[2]:
            raise ValueError("coeffs must have shape (d+1, r, r)")

    @property
    def degree(self) -> int:
        return self.coeffs.shape[0] - 1

    @property
    def r(self) -> int:
        return self.coeffs.shape[1]

    @property
    def leading(self) -> np.ndarray:
        return self.coeffs[-1]

    def __call__(self, z):
        """Horner evaluation; z scalar or ndarray -> z.shape + (r, r)."""
        z = np.asarray(z, dtype=complex)
        out = np.broadcast_to(self.coeffs[-1], z.shape + self.coeffs.shape[1:]).copy()
        for C in self.coeffs[-2::-1]:
            out = out * z[..., None, None] + C
        return out

    @staticmethod
    def monomial(k: int, r: int) -> "MatrixPolynomial":
        coeffs = np.zeros((k + 1, r, r), dtype=complex)
        coeffs[k] = np.eye(r)
        return MatrixPolynomial(coeffs)


def pairing(P: MatrixPolynomial, Q: MatrixPolynomial,
            family: WeightFamily, quad: ContourQuadrature) -> np.ndarray:
    """<P, Q> = int P(z) W(z) Q(z) dz by quadrature."""
    z = quad.nodes
    vals = P(z) @ family.weight(z) @ Q(z)
    return np.tensordot(quad.weights, vals, axes=(0, 0))


def compute_moments(family: WeightFamily, quad: ContourQuadrature,
                    N: int) -> np.ndarray:
    """M_k = int z^k W(z) dz for k = 0..2N, shape (2N+1, r, r)."""
    z = quad.nodes
    W = family.weight(z)
    powers = z[None, :] ** np.arange(2 * N + 1)[:, None]
    return np.einsum("kn,n,nab->kab", powers, quad.weights, W)


def _block(moments: np.ndarray, rows, cols) -> np.ndarray:
    """Assemble the block matrix [M_{rows[i] + cols[j]}]_{ij} flattened."""
    r = moments.shape[1]
    out = np.empty((len(rows) * r, len(cols) * r), dtype=complex)
    for i, ri in enumerate(rows):
        for j, cj in enumerate(cols):
            out[i * r:(i + 1) * r, j * r:(j + 1) * r] = moments[ri + cj]
    return out


def _check_singular(A, scale, cond_max, what):
    """Singularity test that is robust to moment matrices which are tiny
    relative to the overall moment scale (pure condition numbers can look
    benign on a block of quadrature noise)."""
    s = np.linalg.svd(A, compute_uv=False)
    cond = s[0] / s[-1] if s[-1] > 0 else np.inf
    if not np.isfinite(cond) or s[-1] <= scale / cond_max:
        raise SingularSystemError(
            f"{what}: moment system of size {A.shape[0]} is numerically "
            f"singular (smallest singular value {s[-1]:.2e} vs moment scale "
            f"{scale:.2e}); the polynomials need not exist")
    return cond


def _solve_right(moments, rhs_blocks, size, cond_max, what):
    """Solve sum_m M_{k+m} C_m = RHS_k for k = 0..size-1."""
    r = moments.shape[1]
    A = _block(moments, range(size), range(size))
    scale = float(np.max(np.abs(moments))) or 1.0
    cond = _check_singular(A, scale, cond_max, what)
    rhs = np.concatenate(rhs_blocks, axis=0)
    X = np.linalg.solve(A, rhs)
    return [X[m * r:(m + 1) * r] for m in range(size)], cond


def _solve_left(moments, rhs_blocks, size, cond_max, what):
    """Solve sum_m C_m M_{m+k} = RHS_k via the blockwise transpose."""
    mT = np.transpose(moments, (0, 2, 1))
    rhsT = [B.T for B in rhs_blocks]
    blocks, cond = _solve_right(mT, rhsT, size, cond_max, what)
    return [B.T for B in blocks], cond


class _PolyRow(tuple):
    """Tuple of MatrixPolynomial-or-None; indexing a missing degree raises
    instead of silently returning None."""

    def __getitem__(self, j):
        item = tuple.__getitem__(self, j)
        if item is None:
            raise SingularSystemError(
                f"the degree-{j} moment system was singular; this MOP "
                f"does not exist (kernel evaluation via the block-inverse "
                f"route is still available)")
        return item


@dataclass(frozen=True)
class MOPSystem:
    """Moments, the four MOP families through degree N, and the kernel
    coefficient table from the block-moment-matrix inverse.

    The degree-N reproducing kernel exists iff the N r x N r block moment
    matrix [M_{j+k}] is invertible; individual lower-degree MOPs may fail
    to exist even then (missing degrees are recorded in `missing` and
    raise on access)."""

    N: int
    r: int
    moments: np.ndarray
    PL: _PolyRow  # monic, PL[j] degree j, j = 0..N
    PR: _PolyRow
    QL: _PolyRow  # QL[j] degree <= j, j = 0..N-1
    QR: _PolyRow
    kernel_coeffs: np.ndarray  # (N, N, r, r): R_N(w,z) = sum w^a C_ab z^b
    conditions: dict = field(default_factory=dict)
    missing: dict = field(default_factory=dict)

    def kappa_L(self, j: int) -> np.ndarray:
        """Leading (degree-j) coefficient of Q^L_j."""
        return self.QL[j].coeffs[j]

    def kappa_R(self, j: int) -> np.ndarray:
        return self.QR[j].coeffs[j]


def solve_mops(moments: np.ndarray, N: int,
               cond_max: float = COND_MAX) -> MOPSystem:
    """Solve the moment systems for degrees up to N.

    Requires moments M_0..M_{2N-1} at least (compute_moments provides
    2N+1).  Raises SingularSystemError when the size-N block moment
    matrix is singular (no reproducing kernel); singular lower-degree
    systems are tolerated and recorded in `missing`.
    """
    r = moments.shape[1]
    eye = np.eye(r, dtype=complex)
    conds, missing = {}, {}
    PL, PR, QL, QR = [], [], [], []
    scale = float(np.max(np.abs(moments))) or 1.0

    # kernel from the block inverse: sum_a M_{c+a} C_ab = delta_cb I
    big = _block(moments, range(N), range(N))
    conds["kernel"] = _check_singular(big, scale, cond_max,
                                      f"degree-{N} kernel")
    Cflat = np.linalg.inv(big)
    kernel_coeffs = (Cflat.reshape(N, r, N, r)
                     .transpose(0, 2, 1, 3).copy())

    for j in range(N + 1):
        if j == 0:
            PL.append(MatrixPolynomial(eye[None]))
            PR.append(MatrixPolynomial(eye[None]))
        else:
            rhs = [-moments[j + k] for k in range(j)]
            try:
                blocksL, condL = _solve_left(moments, rhs, j, cond_max,
                                             f"P^L_{j}")
                blocksR, condR = _solve_right(moments, rhs, j, cond_max,
                                              f"P^R_{j}")
                conds[("P", j)] = max(condL, condR)
                PL.append(MatrixPolynomial(np.stack(blocksL + [eye])))
                PR.append(MatrixPolynomial(np.stack(blocksR + [eye])))
            except SingularSystemError as exc:
                missing[("P", j)] = str(exc)
                PL.append(None)
                PR.append(None)
        if j <= N - 1:
            rhs = [eye if k == j else np.zeros((r, r)) for k in range(j + 1)]
            try:
                blocksL, condL = _solve_left(moments, rhs, j + 1, cond_max,
                                             f"Q^L_{j}")
                blocksR, condR = _solve_right(moments, rhs, j + 1, cond_max,
                                              f"Q^R_{j}")
                conds[("Q", j)] = max(condL, condR)
                QL.append(MatrixPolynomial(np.stack(blocksL)))
                QR.append(MatrixPolynomial(np.stack(blocksR)))
            except SingularSystemError as exc:
                missing[("Q", j)] = str(exc)
                QL.append(None)
                QR.append(None)
    return MOPSystem(N=N, r=r, moments=moments,
                     PL=_PolyRow(PL), PR=_PolyRow(PR),
                     QL=_PolyRow(QL), QR=_PolyRow(QR),
                     kernel_coeffs=kernel_coeffs,
                     conditions=conds, missing=missing)


def mop_system(family: WeightFamily, quad: ContourQuadrature, N: int,
               cond_max: float = COND_MAX) -> MOPSystem:
    """Convenience: moments by quadrature, then solve."""
    return solve_mops(compute_moments(family, quad, N), N, cond_max)


# --- CD kernel: three routes --------------------------------------------

def cd_kernel_sum(system: MOPSystem, w, z, alt: bool = False) -> np.ndarray:
    """sum_{j<N} Q^R_j(w) P^L_j(z); with alt=True the equal alternative
    sum_{j<N} P^R_j(w) Q^L_j(z)."""
    if alt:
        terms = (system.PR[j](w) @ system.QL[j](z) for j in range(system.N))
    else:
        terms = (system.QR[j](w) @ system.PL[j](z) for j in range(system.N))
    return sum(terms)


def cd_kernel_formula(system: MOPSystem, w, z,
                      eps_switch: float = EPS_SWITCH) -> np.ndarray:
    """(z-w)^{-1} (Q^R_{N-1}(w) P^L_N(z) - P^R_N(w) Q^L_{N-1}(z)),
    falling back to the sum near the removable singularity."""
    if abs(z - w) < eps_switch:
        return cd_kernel_sum(system, w, z)
    N = system.N
    num = (system.QR[N - 1](w) @ system.PL[N](z)
           - system.PR[N](w) @ system.QL[N - 1](z))
    return num / (z - w)


def _powers(x, N):
    x = np.asarray(x, dtype=complex)
    return x[..., None] ** np.arange(N)


def cd_kernel(system: MOPSystem, w, z) -> np.ndarray:
    """R_N(w, z) from the block-moment-matrix inverse.

    This route requires only invertibility of the size-N block moment
    matrix (it works even when intermediate-degree MOPs fail to exist)
    and has no removable singularity at w = z."""
    wp = _powers(w, system.N)
    zp = _powers(z, system.N)
    return np.einsum("...a,abcd,...b->...cd", wp, system.kernel_coeffs, zp)


def cd_kernel_w_nodes(system: MOPSystem, w_nodes: np.ndarray,
                      z) -> np.ndarray:
    """R_N(w_j, z) for an array of w nodes, shape (n, r, r)."""
    wp = _powers(w_nodes, system.N)
    zp = _powers(z, system.N)
    return np.einsum("na,abcd,b->ncd", wp, system.kernel_coeffs, zp)


def cd_kernel_z_nodes(system: MOPSystem, w,
                      z_nodes: np.ndarray) -> np.ndarray:
    """R_N(w, z_j) for an array of z nodes."""
    wp = _powers(w, system.N)
    zp = _powers(z_nodes, system.N)
    return np.einsum("a,abcd,nb->ncd", wp, system.kernel_coeffs, zp)


def cd_kernel_table(system: MOPSystem, w_nodes: np.ndarray,
                    z_nodes: np.ndarray) -> np.ndarray:
    """R_N(w_k, z_j) on a product grid, shape (nw, nz, r, r)."""
    wp = _powers(w_nodes, system.N)
    zp = _powers(z_nodes, system.N)
    return np.einsum("ka,abcd,jb->kjcd", wp, system.kernel_coeffs, zp,
                     optimize=True)


def cd_kernel_sum_table(system: MOPSystem, w_nodes: np.ndarray,
                        z_nodes: np.ndarray) -> np.ndarray:
    """Same table via the biorthogonal sum and the accelerated backend
    (requires all MOPs through degree N-1; used for cross-checks and as
    the benchmarked hot path)."""
    QRw = np.stack([system.QR[j](w_nodes) for j in range(system.N)])
    PLz = np.stack([system.PL[j](z_nodes) for j in range(system.N)])
    return _backend.kernel_table(QRw, PLz)


# --- Riemann-Hilbert assembly -------------------------------------------

def _cauchy(quad: ContourQuadrature, g_nodes: np.ndarray, z) -> np.ndarray:
    """int_gamma g(s) / (s - z) ds by quadrature; g_nodes: (n, r, r)."""
    z = np.asarray(z, dtype=complex)
    denom = quad.nodes - z[..., None]
    coef = quad.weights / denom
    return np.einsum("...n,nab->...ab", coef, g_nodes)


def _warn_near(quad, z):
    d = np.min(np.abs(quad.nodes - np.asarray(z, dtype=complex)[..., None]))
    if d < NEAR_CONTOUR_DIST:
        warnings.warn(
            f"point within {d:.2e} of the contour; Cauchy-transform "
            f"quadrature loses accuracy", NearContourWarning, stacklevel=3)


def assemble_Y(system: MOPSystem, family: WeightFamily,
               quad: ContourQuadrature, z,
               cauchy_quad: ContourQuadrature | None = None) -> np.ndarray:
    """The 2r x 2r matrix Y(z) built from P^L_N and Q^L_{N-1}.

    cauchy_quad optionally replaces the contour used for the Cauchy
    transforms (a deformation, valid while no poles of W are crossed) --
    used to evaluate boundary values accurately from either side.
    """
    cq = cauchy_quad if cauchy_quad is not None else quad
    _warn_near(cq, z)
    N, r = system.N, system.r
    PN, Qm = system.PL[N], system.QL[N - 1]
    Wn = family.weight(cq.nodes)
    Y = np.empty(np.shape(z) + (2 * r, 2 * r), dtype=complex)
    Y[..., :r, :r] = PN(z)
    Y[..., :r, r:] = _cauchy(cq, PN(cq.nodes) @ Wn, z) / TWO_PI_I
    Y[..., r:, :r] = -TWO_PI_I * Qm(z)
    Y[..., r:, r:] = -_cauchy(cq, Qm(cq.nodes) @ Wn, z)
    return Y


def assemble_Yinv(system: MOPSystem, family: WeightFamily,
                  quad: ContourQuadrature, z,
                  cauchy_quad: ContourQuadrature | None = None) -> np.ndarray:
    """Y(z)^{-1} built directly from the right MOPs P^R_N, Q^R_{N-1}."""
    cq = cauchy_quad if cauchy_quad is not None else quad
    _warn_near(cq, z)
    N, r = system.N, system.r
    PN, Qm = system.PR[N], system.QR[N - 1]
    Wn = family.weight(cq.nodes)
    Yi = np.empty(np.shape(z) + (2 * r, 2 * r), dtype=complex)
    Yi[..., :r, :r] = -_cauchy(cq, Wn @ Qm(cq.nodes), z)
    Yi[..., :r, r:] = -_cauchy(cq, Wn @ PN(cq.nodes), z) / TWO_PI_I
    Yi[..., r:, :r] = TWO_PI_I * Qm(z)
    Yi[..., r:, r:] = PN(z)
    return Yi


def kernel_from_Y(system: MOPSystem, family: WeightFamily,
                  quad: ContourQuadrature, w, z) -> np.ndarray:
    """(2 pi i (z - w))^{-1} (0 I) Y^{-1}(w) Y(z) (I 0)^T."""
    r = system.r
    Yi = assemble_Yinv(system, family, quad, w)
    Y = assemble_Y(system, family, quad, z)
    return (Yi[r:, :] @ Y[:, :r]) / (TWO_PI_I * (z - w))


# --- verification helpers -----------------------------------------------

def reproducing_residual(system: MOPSystem, family: WeightFamily,
                         quad: ContourQuadrature, P: MatrixPolynomial,
                         z) -> float:
    """|| int P(w) W(w) R_N(w, z) dw - P(z) ||_max for deg P <= N-1."""
    Kw = cd_kernel_w_nodes(system, quad.nodes, z)
    integrand = P(quad.nodes) @ family.weight(quad.nodes) @ Kw
    val = np.tensordot(quad.weights, integrand, axes=(0, 0))
    return float(np.max(np.abs(val - P(z))))


def dual_reproducing_residual(system: MOPSystem, family: WeightFamily,
                              quad: ContourQuadrature, Q: MatrixPolynomial,
                              w) -> float:
    """|| int R_N(w, z) W(z) Q(z) dz - Q(w) ||_max for deg Q <= N-1."""
    Kz = cd_kernel_z_nodes(system, w, quad.nodes)
    integrand = Kz @ family.weight(quad.nodes) @ Q(quad.nodes)
    val = np.tensordot(quad.weights, integrand, axes=(0, 0))
    return float(np.max(np.abs(val - Q(w))))


def biorthogonality_residual(system: MOPSystem, family: WeightFamily,
                             quad: ContourQuadrature) -> float:
    """max_{j,k} || <P^L_j, Q^R_k> - delta_{jk} I ||_max."""
    res = 0.0
    eye = np.eye(system.r)
    for j in range(system.N):
        for k in range(system.N):
            val = pairing(system.PL[j], system.QR[k], family, quad)
            res = max(res, float(np.max(np.abs(val - (eye if j == k else 0)))))
    return res
