"""Hexagon lozenge-tiling models with r x q periodic edge weights.

A tiling of the (L, M, N) hexagon is encoded as N non-intersecting
monotone lattice paths; the induced determinantal point process has a
correlation kernel given by a double contour integral built from the
matrix CD kernel of W(z) = z^{-(M+N)/r} A(z)^{L/q}, where A is the
product of the r x r column-transfer matrices of one period.

This module provides:

  * HexagonModel       -- geometry, edge weights, transfer matrices;
  * DKEvaluator / dk_kernel -- the matrix double-contour kernel;
  * simplified_kernel_general -- the scalarized forms (sheet sum on the
    spectral curve, and the genus-0 plane form through a chart);
  * simplified_kernel_2x1 / simplified_kernel_2x2 -- fully explicit
    formulas whose integrands contain only a *scalar* CD kernel;
  * uniform_scalar_kernel -- the classical scalar-weight kernel of the
    uniform measure (independent oracle route through `sops`);
  * enumerate_path_systems, point_probability, lgv_partition_function,
    macmahon_count -- brute-force and closed-form oracles.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import comb

import numpy as np

from . import _backend, mops, sops
from .contour import ContourQuadrature, circle_quadrature, default_n, \
    unit_circle_quadrature
from .errors import InvalidArgumentError, SizeGuardError, \
    UnsupportedFamilyError
from .surface import Genus0Chart, build_chart
from .weights import CyclicUniform, Periodic2x1, Periodic2x2, WeightFamily

TWO_PI_I = 2j * np.pi

#: largest number of candidate lattice configurations the brute-force
#: path enumeration will attempt.
ENUMERATION_GUARD = 10_000_000


# ---------------------------------------------------------------------------
# model
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HexagonModel:
    """(L, M, N) hexagon with vertically r-periodic, horizontally
    q-periodic edge weights a[l][j] (up-steps) and b[l][j] (flat steps).

    Requires L a multiple of q and M, N multiples of r."""

    r: int
    q: int
    L: int
    M: int
    N: int
    a: tuple   # q rows of r up-step weights
    b: tuple   # q rows of r flat-step weights

    def __post_init__(self):
        a = tuple(tuple(float(x) for x in row) for row in self.a)
        b = tuple(tuple(float(x) for x in row) for row in self.b)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        if self.r < 1 or self.q < 1:
            raise InvalidArgumentError("hexagon: need r, q >= 1")
        if len(a) != self.q or len(b) != self.q \
                or any(len(row) != self.r for row in a + b):
            raise InvalidArgumentError(
                "hexagon: weight tables must have shape (q, r)")
        if any(x <= 0 for row in a + b for x in row):
            raise InvalidArgumentError("hexagon: edge weights must be > 0")
        if self.L < 1 or self.M < 1 or self.N < 1:
            raise InvalidArgumentError("hexagon: need L, M, N >= 1")
        if self.L % self.q != 0:
            raise InvalidArgumentError("hexagon: L must be a multiple of q")
        if self.M % self.r != 0 or self.N % self.r != 0:
            raise InvalidArgumentError(
                "hexagon: M and N must be multiples of r")
        if self.L < self.M:
            raise InvalidArgumentError("hexagon: need L >= M")

    @classmethod
    def uniform(cls, L: int, M: int, N: int, r: int = 1,
                q: int = 1) -> "HexagonModel":
        ones = tuple(tuple(1.0 for _ in range(r)) for _ in range(q))
        return cls(r=r, q=q, L=L, M=M, N=N, a=ones, b=ones)

    @property
    def is_uniform(self) -> bool:
        return all(x == 1.0 for row in self.a + self.b for x in row)

    def transition(self, ell: int, z):
        """Column-transfer matrix A_ell(z): b on the diagonal, a on the
        superdiagonal, z * a[ell][r-1] in the bottom-left corner."""
        ell = ell % self.q
        arr = np.asarray(z, dtype=complex)
        scalar = arr.ndim == 0
        arr = np.atleast_1d(arr)
        r = self.r
        A = np.zeros(arr.shape + (r, r), dtype=complex)
        for j in range(r):
            A[..., j, j] = self.b[ell][j]
            if j + 1 < r:
                A[..., j, j + 1] = self.a[ell][j]
        A[..., r - 1, 0] += self.a[ell][r - 1] * arr
        return A[0] if scalar else A

    def period_matrix(self, z):
        """A(z) = A_0(z) ... A_{q-1}(z)."""
        A = self.transition(0, z)
        for ell in range(1, self.q):
            A = A @ self.transition(ell, z)
        return A

    def weight(self, z):
        """W(z) = z^{-(M+N)/r} A(z)^{L/q}."""
        arr = np.asarray(z, dtype=complex)
        scalar = arr.ndim == 0
        arr = np.atleast_1d(arr)
        W = np.linalg.matrix_power(self.period_matrix(arr), self.L // self.q)
        W = W * (arr ** (-(self.M + self.N) // self.r))[..., None, None]
        return W[0] if scalar else W

    def family(self) -> WeightFamily:
        """Matching closed-form weight family, when one exists."""
        if self.r == 2 and self.q == 1:
            return Periodic2x1(a0=self.a[0][0], a1=self.a[0][1],
                               b0=self.b[0][0], b1=self.b[0][1],
                               L=self.L, M=self.M, N=self.N)
        if self.r == 2 and self.q == 2:
            return Periodic2x2(a=self.a, b=self.b,
                               L=self.L, M=self.M, N=self.N)
        if self.q == 1 and self.r >= 2 and self.is_uniform:
            return CyclicUniform(r_size=self.r, L=self.L,
                                 R=(self.M + self.N) // self.r)
        raise UnsupportedFamilyError(
            f"no closed-form weight family for r={self.r}, q={self.q}")

    # --- path geometry ---------------------------------------------------

    def column_range(self, x: int) -> range:
        """Heights available to path vertices in column x."""
        lo = max(0, x - (self.L - self.M))
        hi = min(self.N + self.M - 1, x + self.N - 1)
        return range(lo, hi + 1)

    @property
    def starts(self) -> tuple:
        return tuple(range(self.N))

    @property
    def ends(self) -> tuple:
        return tuple(self.M + j for j in range(self.N))


def edge_weight(model: HexagonModel, edge) -> float:
    """Weight of the directed edge ((x, y), (x+1, y+d)), d in {0, 1}."""
    try:
        (x1, y1), (x2, y2) = edge
    except (TypeError, ValueError) as exc:
        raise InvalidArgumentError(f"malformed edge {edge!r}") from exc
    if x2 != x1 + 1 or y2 - y1 not in (0, 1):
        raise InvalidArgumentError(f"malformed edge {edge!r}")
    table = model.b if y2 == y1 else model.a
    return table[x1 % model.q][y1 % model.r]


# ---------------------------------------------------------------------------
# kernel queries
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class KernelQuery:
    """Block query: the r x r matrix [K(x1, r y1 + j, x2, r y2 + i)]_{i,j}."""

    x1: int
    y1: int
    x2: int
    y2: int

    def indices(self, model: HexagonModel):
        """(L1, L2, L3, chi) exponent data for the double-contour formula."""
        q = model.q
        L1 = self.x1 // q
        ceil2 = -(-self.x2 // q)
        L2 = model.L // q - ceil2
        L3 = max(L1 - ceil2, 0)
        if L1 < 0 or L2 < 0:
            raise InvalidArgumentError(
                f"query columns out of range: {self.x1}, {self.x2}")
        return L1, L2, L3, self.x1 > self.x2


# ---------------------------------------------------------------------------
# DK matrix-kernel evaluator
# ---------------------------------------------------------------------------

class DKEvaluator:
    """Double-contour kernel evaluator with per-model node caches.

    Precomputes, on the n-point unit-circle quadrature: the transfer
    matrices A_ell, the full period matrix A, the matrix CD kernel table
    of W at degree N/r, and a cache of integer powers of A."""

    def __init__(self, model: HexagonModel, n: int | None = None,
                 cond_max: float = mops.COND_MAX):
        self.model = model
        self.quad = unit_circle_quadrature(n)
        nodes = self.quad.nodes
        self._A_ell = [model.transition(ell, nodes)
                       for ell in range(model.q)]
        self._A = self._A_ell[0]
        for ell in range(1, model.q):
            self._A = self._A @ self._A_ell[ell]
        W = model.weight(nodes)
        deg = 2 * (model.N // model.r)
        powers = nodes[None, :] ** np.arange(deg + 1)[:, None]
        moments = np.einsum("kn,n,nab->kab", powers, self.quad.weights, W)
        self.system = mops.solve_mops(moments, model.N // model.r, cond_max)
        self.Ktab = mops.cd_kernel_table(self.system, nodes, nodes)
        self._Apow = {0: np.broadcast_to(np.eye(model.r, dtype=complex),
                                         self._A.shape).copy(),
                      1: self._A}

    def A_power(self, p: int) -> np.ndarray:
        if p not in self._Apow:
            self._Apow[p] = np.linalg.matrix_power(self._A, p)
        return self._Apow[p]

    def partial_product(self, lo: int, hi: int) -> np.ndarray:
        """A_lo(z) A_{lo+1}(z) ... A_{hi-1}(z) at the nodes (I if lo >= hi)."""
        out = np.broadcast_to(np.eye(self.model.r, dtype=complex),
                              self._A.shape).copy()
        for ell in range(lo, hi):
            out = out @ self._A_ell[ell % self.model.q]
        return out

    def block(self, query: KernelQuery) -> np.ndarray:
        """[K(x1, r y1 + j, x2, r y2 + i)]_{i,j=0}^{r-1}."""
        model = self.model
        q = model.q
        L1, L2, L3, chi = query.indices(model)
        z = self.quad.nodes
        wts = self.quad.weights
        ceil2 = -(-query.x2 // q)

        prod1 = self.partial_product(q * L1, query.x1)
        prod2 = self.partial_product(query.x2, q * ceil2)

        # double integral: B2(w) A(w)^{L2} R(w, z) A(z)^{L1} B1(z)
        cw = wts * z ** (query.y2 - (model.M + model.N) // model.r)
        cz = wts * z ** (-query.y1 - 1) / TWO_PI_I
        Lw = prod2 @ self.A_power(L2)
        Rz = self.A_power(L1) @ prod1
        out = _backend.double_contract(cw, Lw, self.Ktab, Rz, cz)

        if chi:
            if L1 >= ceil2:
                B4m, B3m = prod2, prod1
            else:
                B4m = self.partial_product(query.x2, query.x1 + 1)
                B3m = np.broadcast_to(np.eye(model.r, dtype=complex),
                                      self._A.shape)
            c = wts * z ** (query.y2 - query.y1 - 1) / TWO_PI_I
            out = out - np.einsum("n,nab,nbc,ncd->ad",
                                  c, B4m, self.A_power(L3), B3m)
        return out

    def scalar(self, x1: int, Y1: int, x2: int, Y2: int) -> complex:
        """K(x1, Y1, x2, Y2) for general integer heights Y1, Y2."""
        r = self.model.r
        blk = self.block(KernelQuery(x1, Y1 // r, x2, Y2 // r))
        return blk[Y2 % r, Y1 % r]


@lru_cache(maxsize=16)
def _dk_evaluator(model: HexagonModel, n: int) -> DKEvaluator:
    return DKEvaluator(model, n)


def dk_evaluator(model: HexagonModel, n: int | None = None) -> DKEvaluator:
    return _dk_evaluator(model, n if n is not None else default_n())


def dk_kernel(model: HexagonModel, query: KernelQuery,
              n: int | None = None) -> np.ndarray:
    """Matrix correlation-kernel block via the double-contour formula."""
    return dk_evaluator(model, n).block(query)


# ---------------------------------------------------------------------------
# scalarized kernel routes
# ---------------------------------------------------------------------------

def _query_prefactors(model, query, ev, z):
    """Shared B-product data for the scalarized forms (at plane points z)."""
    q = model.q
    L1, L2, L3, chi = query.indices(model)
    ceil2 = -(-query.x2 // q)
    prod1 = ev.partial_product(q * L1, query.x1)
    prod2 = ev.partial_product(query.x2, q * ceil2)
    return L1, L2, L3, chi, prod1, prod2


def simplified_kernel_general(model: HexagonModel, query: KernelQuery,
                              form: str = "plane",
                              n: int | None = None) -> np.ndarray:
    """Scalarized double-contour kernel.

    form="sheets": sum over sheet pairs of the spectral curve; the
    integrand couples the sheets only through the scalar kernel
    einv_k(w) R(w, z) e_j(z) and the eigenvalue powers.

    form="plane": genus-0 plane form over the pulled-back contour
    gamma_C, with all large exponents on scalar functions of zeta."""
    fam = model.family()
    ev = dk_evaluator(model, n)
    L1, L2, L3, chi, _, _ = _query_prefactors(model, query, ev, None)
    half = (model.M + model.N) // model.r

    if form == "sheets":
        spectral = fam.spectral()
        quad = ev.quad
        z = quad.nodes
        q = model.q
        ceil2 = -(-query.x2 // q)
        prod1 = ev.partial_product(q * L1, query.x1)
        prod2 = ev.partial_product(query.x2, q * ceil2)
        scalarR = _sheet_kernel_tables(model, quad.size)
        cw = quad.weights * z ** (query.y2 - half)
        cz = quad.weights * z ** (-query.y1 - 1) / TWO_PI_I
        out = np.zeros((model.r, model.r), dtype=complex)
        for k in range(model.r):
            ew = spectral.evec(k, z)
            cu = cw * spectral.lambda_hat(k, z) ** L2
            u = np.einsum("nab,nb->na", prod2, ew)
            for j in range(model.r):
                einvz = spectral.evec_inv(j, z)
                cv = cz * spectral.lambda_hat(j, z) ** L1
                v = np.einsum("na,nab->nb", einvz, prod1)
                out += np.einsum("n,na,nm,m,mb->ab", cu, u, scalarR[k][j],
                                 cv, v)
        if chi:
            if L1 >= ceil2:
                B4m, B3m = prod2, prod1
            else:
                B4m = ev.partial_product(query.x2, query.x1 + 1)
                B3m = np.broadcast_to(np.eye(model.r, dtype=complex),
                                      B4m.shape)
            c = quad.weights * z ** (query.y2 - query.y1 - 1) / TWO_PI_I
            for j in range(model.r):
                cj = c * spectral.lambda_hat(j, z) ** L3
                uj = np.einsum("nab,nb->na", B4m, spectral.evec(j, z))
                vj = np.einsum("na,nab->nb", spectral.evec_inv(j, z), B3m)
                out -= np.einsum("n,na,nb->ab", cj, uj, vj)
        return out

    if form != "plane":
        raise InvalidArgumentError(f"unknown form {form!r}")

    nq = n if n is not None else default_n()
    chart, quadC, scalarR = _plane_tables(model, nq)
    zeta = quadC.nodes
    phi = chart.phi(zeta)
    dphi = chart.dphi(zeta)
    lamh = chart.lamhat_phi(zeta)
    e = chart.e_phi(zeta)
    einv = chart.einv_phi(zeta)

    q = model.q
    ceil2 = -(-query.x2 // q)
    prod1 = _partial_at(model, q * L1, query.x1, phi)
    prod2 = _partial_at(model, query.x2, q * ceil2, phi)

    cu = quadC.weights * dphi * lamh ** L2 * phi ** (query.y2 - half)
    cv = quadC.weights * dphi * lamh ** L1 * phi ** (-query.y1 - 1) / TWO_PI_I
    u = np.einsum("nab,nb->na", prod2, e)
    v = np.einsum("na,nab->nb", einv, prod1)
    out = np.einsum("n,na,nm,m,mb->ab", cu, u, scalarR, cv, v)

    if chi:
        if L1 >= ceil2:
            B4m, B3m = prod2, prod1
        else:
            B4m = _partial_at(model, query.x2, query.x1 + 1, phi)
            B3m = np.broadcast_to(np.eye(model.r, dtype=complex), B4m.shape)
        c = quadC.weights * dphi * lamh ** L3 \
            * phi ** (query.y2 - query.y1 - 1) / TWO_PI_I
        uj = np.einsum("nab,nb->na", B4m, e)
        vj = np.einsum("na,nab->nb", einv, B3m)
        out -= np.einsum("n,na,nb->ab", c, uj, vj)
    return out


@lru_cache(maxsize=16)
def _sheet_kernel_tables(model: HexagonModel, n: int):
    """scalarR[k][j] = einv_k(w) . R(w, z) . e_j(z) on the node grid."""
    ev = dk_evaluator(model, n)
    spectral = model.family().spectral()
    z = ev.quad.nodes
    return [[np.einsum("na,nmab,mb->nm", spectral.evec_inv(k, z),
                       ev.Ktab, spectral.evec(j, z))
             for j in range(model.r)] for k in range(model.r)]


@lru_cache(maxsize=16)
def _plane_tables(model: HexagonModel, n: int):
    """Cached chart, contour and kernel tables for the plane form."""
    fam = model.family()
    chart = build_chart(fam, model.N // model.r)
    quadC = chart.gamma_C(n)
    zeta = quadC.nodes
    phi = chart.phi(zeta)
    ev = dk_evaluator(model, n)
    Ktab = mops.cd_kernel_table(ev.system, phi, phi)
    e = chart.e_phi(zeta)
    einv = chart.einv_phi(zeta)
    scalarR = np.einsum("na,nmab,mb->nm", einv, Ktab, e)
    return chart, quadC, scalarR


@lru_cache(maxsize=16)
def _sops_tables(model: HexagonModel, n: int):
    """Cached chart, contour and scalar CD table for the explicit routes."""
    chart = build_chart(model.family(), model.N // model.r)
    quadC = chart.gamma_C(n)
    system = sops.solve_scalar_ops(chart.scalar_weight, quadC, model.N)
    Ks = sops.scalar_cd_table(system, quadC.nodes, quadC.nodes)
    return chart, quadC, Ks


def _partial_at(model, lo, hi, z):
    """A_lo(z) ... A_{hi-1}(z) at arbitrary plane points z."""
    out = np.broadcast_to(np.eye(model.r, dtype=complex),
                          np.shape(z) + (model.r, model.r)).copy()
    for ell in range(lo, hi):
        out = out @ model.transition(ell, z)
    return out


# --- explicit 2 x 1 formula -------------------------------------------------

def simplified_kernel_2x1(model: HexagonModel, query: KernelQuery,
                          n: int | None = None) -> np.ndarray:
    """Explicit scalarized kernel for r=2, q=1 models.

    The integrand contains only the scalar CD kernel of
    Ws(zeta) = (2 a0 a1)^{-1} ((b0+b1+zeta)/2)^L
               (4 a0 a1 / (zeta^2 - (b0-b1)^2))^{(M+N)/2}
    on a circle enclosing +-(b0 - b1); all matrix factors are constant-
    degree rational functions of the integration variables."""
    if model.r != 2 or model.q != 1:
        raise UnsupportedFamilyError("explicit 2x1 kernel needs r=2, q=1")
    a0, a1 = model.a[0]
    b0, b1 = model.b[0]
    L, M, N = model.L, model.M, model.N
    d = b1 - b0
    half = (M + N) // 2

    def phi(zeta):
        return (zeta ** 2 - d ** 2) / (4 * a0 * a1)

    def ws(zeta):
        return ((b0 + b1 + zeta) / 2) ** L * phi(zeta) ** (-half) \
            / (2 * a0 * a1)

    nq = n if n is not None else default_n()
    quad = circle_quadrature(0.0, abs(d) + 1.0, nq)
    zeta = quad.nodes
    system = sops.solve_scalar_ops(ws, quad, N)
    Ks = sops.scalar_cd_table(system, zeta, zeta)

    # rank-one matrix part: column (1, (omega+d)/(2 a0)), row ((zeta-d)/2, a0)
    col = np.stack([np.ones_like(zeta), (zeta + d) / (2 * a0)], axis=-1)
    row = np.stack([(zeta - d) / 2, a0 * np.ones_like(zeta)], axis=-1)

    cu = quad.weights * ((b0 + b1 + zeta) / 2) ** (L - query.x2) \
        * phi(zeta) ** (query.y2 - half)
    cv = quad.weights * ((b0 + b1 + zeta) / 2) ** query.x1 \
        * phi(zeta) ** (-query.y1 - 1) / TWO_PI_I
    out = np.einsum("n,ni,nm,m,mj->ij", cu, col, Ks, cv, row) \
        / (4 * a0 ** 2 * a1 ** 2)

    if query.x1 > query.x2:
        c = quad.weights * ((b0 + b1 + zeta) / 2) ** (query.x1 - query.x2) \
            * phi(zeta) ** (query.y2 - query.y1 - 1) / TWO_PI_I
        out -= np.einsum("n,ni,nj->ij", c, col, row) / (2 * a0 * a1)
    return out


# --- explicit 2 x 2 formula -------------------------------------------------

def simplified_kernel_2x2(model: HexagonModel, query: KernelQuery,
                          n: int | None = None) -> np.ndarray:
    """Explicit scalarized kernel for r=2, q=2 models.

    Columns are re-indexed as x1 = 2 m1 + eps1 and x2 = 2 m2 - eps2 so
    the partial transfer products reduce to single factors A_0^{eps1},
    A_1^{eps2}.  The scalar CD kernel of the chart weight is computed
    with `sops` on the pulled-back contour, which keeps this route
    numerically independent of the matrix-kernel path."""
    if model.r != 2 or model.q != 2:
        raise UnsupportedFamilyError("explicit 2x2 kernel needs r=2, q=2")
    L, M, N = model.L, model.M, model.N
    half = (M + N) // 2

    m1, eps1 = divmod(query.x1, 2)
    m2c = -(-query.x2 // 2)
    eps2 = 2 * m2c - query.x2

    nq = n if n is not None else default_n()
    # chart degree = matrix MOP degree N/2; the scalar CD kernel then has
    # degree r * (N/2) = N
    chart, quad, Ks = _sops_tables(model, nq)
    zeta = quad.nodes
    phi = chart.phi(zeta)
    dphi = chart.dphi(zeta)
    lamh = chart.lamhat_phi(zeta)
    e = chart.e_phi(zeta)
    einv = chart.einv_phi(zeta)
    h = chart.h(zeta)
    hhat = chart.hhat(zeta)

    system = sops.solve_scalar_ops(chart.scalar_weight, quad, N)
    Ks = sops.scalar_cd_table(system, zeta, zeta)

    A0p = model.transition(0, phi) if eps1 else None
    A1p = model.transition(1, phi) if eps2 else None
    col = np.einsum("nab,nb->na", A1p, e) if eps2 else e
    row = np.einsum("na,nab->nb", einv, A0p) if eps1 else einv

    cu = quad.weights * dphi / hhat * lamh ** (L // 2 - m2c) \
        * phi ** (query.y2 - half)
    cv = quad.weights * dphi / h * lamh ** m1 \
        * phi ** (-query.y1 - 1) / TWO_PI_I
    out = np.einsum("n,ni,nm,m,mj->ij", cu, col, Ks, cv, row)

    if query.x1 > query.x2:
        c = quad.weights * dphi * lamh ** (m1 - m2c) \
            * phi ** (query.y2 - query.y1 - 1) / TWO_PI_I
        out -= np.einsum("n,ni,nj->ij", c, col, row)
    return out


# --- uniform measure, scalar route ------------------------------------------

def uniform_scalar_kernel(L: int, M: int, N: int, x1: int, y1: int,
                          x2: int, y2: int,
                          n: int | None = None) -> complex:
    """Correlation kernel of the uniform measure through the scalar
    weight (1+z)^L z^{-M-N}; independent of the matrix-kernel path."""

    def wtilde(z):
        return (1 + z) ** L * z ** (-(M + N))

    quad = unit_circle_quadrature(n)
    z = quad.nodes
    system = sops.solve_scalar_ops(wtilde, quad, N)
    Ks = sops.scalar_cd_table(system, z, z)
    cu = quad.weights * (1 + z) ** (L - x2) * z ** (y2 - M - N)
    cv = quad.weights * (1 + z) ** x1 * z ** (-y1 - 1) / TWO_PI_I
    out = _backend.scalar_double_contract(cu, Ks, cv)
    if x1 > x2:
        c = quad.weights * (1 + z) ** (x1 - x2) * z ** (y2 - y1 - 1)
        out -= np.sum(c) / TWO_PI_I
    return out


# ---------------------------------------------------------------------------
# brute-force path oracle
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PathSystem:
    """N strictly ordered monotone paths; paths[i][x] is the height of
    path i in column x."""

    paths: tuple
    weight: float

    def passes_through(self, x: int, y: int) -> bool:
        return any(p[x] == y for p in self.paths)


def enumerate_path_systems(model: HexagonModel) -> list:
    """All systems of N non-intersecting paths with their weights."""
    L, M, N = model.L, model.M, model.N
    if comb(L, M) ** N > ENUMERATION_GUARD:
        raise SizeGuardError(
            f"enumeration guard exceeded: C({L},{M})^{N} > "
            f"{ENUMERATION_GUARD}")
    target = model.ends
    ranges = [model.column_range(x) for x in range(L + 1)]
    out = []

    def step_weight(x, ys, steps):
        w = 1.0
        for y, dlt in zip(ys, steps):
            table = model.a if dlt else model.b
            w *= table[x % model.q][y % model.r]
        return w

    def rec(x, ys, weight, hist):
        if x == L:
            if ys == target:
                paths = tuple(tuple(row[i] for row in hist)
                              for i in range(N))
                out.append(PathSystem(paths=paths, weight=weight))
            return
        rng = ranges[x + 1]
        for steps in product((0, 1), repeat=N):
            nys = tuple(y + dlt for y, dlt in zip(ys, steps))
            if any(n2 <= n1 for n1, n2 in zip(nys, nys[1:])):
                continue
            if nys[0] < rng.start or nys[-1] >= rng.stop:
                continue
            rec(x + 1, nys, weight * step_weight(x, ys, steps),
                hist + (nys,))

    start = model.starts
    rec(0, start, 1.0, (start,))
    return out


def partition_function(model: HexagonModel) -> float:
    return sum(s.weight for s in enumerate_path_systems(model))


def lgv_partition_function(model: HexagonModel) -> float:
    """Partition function as the determinant of the single-path
    weighted-count matrix (Lindstrom-Gessel-Viennot)."""
    L, N = model.L, model.N

    def path_counts(y0):
        dp = {y0: 1.0}
        for x in range(L):
            rng = model.column_range(x + 1)
            ndp = {}
            for y, w in dp.items():
                for dlt in (0, 1):
                    ny = y + dlt
                    if rng.start <= ny < rng.stop:
                        table = model.a if dlt else model.b
                        ndp[ny] = ndp.get(ny, 0.0) \
                            + w * table[x % model.q][y % model.r]
            dp = ndp
        return dp

    mat = np.zeros((N, N))
    for i, y0 in enumerate(model.starts):
        dp = path_counts(y0)
        for j, y1 in enumerate(model.ends):
            mat[i, j] = dp.get(y1, 0.0)
    return float(np.linalg.det(mat))


def macmahon_count(L: int, M: int, N: int) -> int:
    """Number of lozenge tilings of the uniform (L, M, N) hexagon
    (boxed-plane-partition product formula with box M x N x (L-M))."""
    a, b, c = M, N, L - M
    total = Fraction(1)
    for i in range(1, a + 1):
        for j in range(1, b + 1):
            for k in range(1, c + 1):
                total *= Fraction(i + j + k - 1, i + j + k - 2)
    assert total.denominator == 1
    return int(total)


# ---------------------------------------------------------------------------
# determinantal probabilities
# ---------------------------------------------------------------------------

def point_probability(model: HexagonModel, points,
                      route: str = "determinant",
                      n: int | None = None) -> float:
    """P(a path passes through every point in `points`).

    route="determinant": det[K(x_i, y_i, x_j, y_j)] via the matrix
    double-contour kernel.  route="enumeration": exhaustive-path ratio."""
    points = list(points)
    if len(set(points)) != len(points):
        raise InvalidArgumentError("points must be distinct")
    if not points:
        return 1.0
    for x, y in points:
        if not 0 <= x <= model.L:
            raise InvalidArgumentError(f"point column {x} outside [0, L]")

    if route == "enumeration":
        systems = enumerate_path_systems(model)
        Z = sum(s.weight for s in systems)
        hit = sum(s.weight for s in systems
                  if all(s.passes_through(x, y) for x, y in points))
        return hit / Z

    if route != "determinant":
        raise InvalidArgumentError(f"unknown route {route!r}")

    ev = dk_evaluator(model, n)
    m = len(points)
    mat = np.empty((m, m), dtype=complex)
    for i, (xi, yi) in enumerate(points):
        for j, (xj, yj) in enumerate(points):
            mat[i, j] = ev.scalar(xi, yi, xj, yj)
    return float(np.linalg.det(mat).real)


def column_probabilities(model: HexagonModel, x: int,
                         route: str = "determinant",
                         n: int | None = None) -> dict:
    """{y: P(point at (x, y))} over the admissible heights of column x."""
    return {y: point_probability(model, [(x, y)], route=route, n=n)
            for y in model.column_range(x)}
