"""Plane contours and quadrature rules.

A contour is stored directly as a quadrature rule: complex nodes plus
complex weights with the dz measure absorbed, so that

    integrate(f, quad) == sum_j weights[j] * f(nodes[j])

approximates the oriented contour integral of f.  Circles use the
trapezoid rule, which is spectrally accurate for integrands analytic in
an annulus around the circle and *exact* for Laurent monomials z^k with
-n < k < n-1 (it returns 2*pi*i exactly for k = -1).
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgumentError

DEFAULT_N = 256
MIN_NODES_PER_COMPONENT = 8


def default_n() -> int:
    """Default node count per component; CDSURFACE_QUAD_N overrides."""
    env = os.environ.get("CDSURFACE_QUAD_N")
    if env is None:
        return DEFAULT_N
    n = int(env)
    if n < 1:
        raise InvalidArgumentError(f"CDSURFACE_QUAD_N must be >= 1, got {n}")
    return n


@dataclass(frozen=True)
class ContourQuadrature:
    """Quadrature rule for a finite union of oriented curves."""

    nodes: np.ndarray          # complex nodes, shape (n,)
    weights: np.ndarray        # complex weights absorbing dz, shape (n,)
    component_ids: np.ndarray  # int id of the curve piece each node sits on
    orientation: np.ndarray    # +1 / -1 per component
    n_per_component: np.ndarray

    def __post_init__(self):
        for name in ("nodes", "weights", "component_ids", "orientation",
                     "n_per_component"):
            arr = getattr(self, name)
            object.__setattr__(self, name, np.asarray(arr))
        if self.nodes.shape != self.weights.shape:
            raise InvalidArgumentError("nodes/weights shape mismatch")

    @property
    def size(self) -> int:
        return self.nodes.size

    def reversed(self) -> "ContourQuadrature":
        """Same curve with opposite orientation (negated weights)."""
        return ContourQuadrature(self.nodes, -self.weights,
                                 self.component_ids, -self.orientation,
                                 self.n_per_component)

    def integrate(self, f) -> complex | np.ndarray:
        """Integrate a callable (vectorized over nodes if possible)."""
        try:
            vals = f(self.nodes)
            vals = np.asarray(vals)
            if vals.shape[:1] != self.nodes.shape:
                raise ValueError
        except Exception:
            vals = np.array([f(z) for z in self.nodes])
        return np.tensordot(self.weights, vals, axes=(0, 0))


def circle_quadrature(center: complex, radius: float, n: int | None = None,
                      orientation: int = +1) -> ContourQuadrature:
    """Trapezoid rule on a circle; weights are (2*pi*i/n)*(z_j - center)."""
    if n is None:
        n = default_n()
    if n < 1:
        raise InvalidArgumentError(f"need n >= 1 nodes, got {n}")
    if radius <= 0:
        raise InvalidArgumentError(f"radius must be positive, got {radius}")
    if orientation not in (+1, -1):
        raise InvalidArgumentError("orientation must be +1 or -1")
    j = np.arange(n)
    unit = np.exp(2j * np.pi * j / n)
    nodes = center + radius * unit
    weights = orientation * (2j * np.pi / n) * (nodes - center)
    return ContourQuadrature(nodes, weights,
                             np.zeros(n, dtype=int),
                             np.array([orientation]),
                             np.array([n]))


def unit_circle_quadrature(n: int | None = None) -> ContourQuadrature:
    """Positively oriented unit circle, nodes exp(2*pi*i*j/n)."""
    return circle_quadrature(0.0, 1.0, n)


def union_quadrature(parts: list[ContourQuadrature]) -> ContourQuadrature:
    """Concatenate quadratures with distinct component ids."""
    if not parts:
        raise InvalidArgumentError("union of zero contours")
    nodes, weights, comp_ids, orient, npc = [], [], [], [], []
    offset = 0
    for part in parts:
        nodes.append(part.nodes)
        weights.append(part.weights)
        comp_ids.append(part.component_ids + offset)
        orient.append(part.orientation)
        npc.append(part.n_per_component)
        offset += len(part.n_per_component)
    return ContourQuadrature(np.concatenate(nodes), np.concatenate(weights),
                             np.concatenate(comp_ids), np.concatenate(orient),
                             np.concatenate(npc))


def integrate(f, quad: ContourQuadrature):
    return quad.integrate(f)
