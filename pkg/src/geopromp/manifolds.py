"""Riemannian manifolds: Euclidean space, unit spheres, and products thereof.

Points live in ambient coordinates (unit vectors for spheres). Tangent
vectors are stored in intrinsic coordinates against a deterministic
orthonormal basis of the tangent space at their base point, so that
covariance matrices over tangent data are full rank.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InvalidArgumentError, SingularityError

# Below this tangent norm, exp/transport short-circuit to avoid 0/0 in u/|u|.
_TINY_NORM = 1e-12
# Sphere log/transport are singular at antipodes; fail loudly inside this band.
_ANTIPODAL_TOL = 1e-8


class Manifold:
    """Common interface. Subclasses set ambient_dim and intrinsic_dim."""

    ambient_dim: int
    intrinsic_dim: int

    def _check(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape != (self.ambient_dim,):
            raise InvalidArgumentError(
                f"expected ambient vector of length {self.ambient_dim}, got shape {x.shape}"
            )
        return x

    def _check_tangent(self, v):
        v = np.asarray(v, dtype=float)
        if v.shape != (self.intrinsic_dim,):
            raise InvalidArgumentError(
                f"expected intrinsic vector of length {self.intrinsic_dim}, got shape {v.shape}"
            )
        return v

    def distance(self, x, y) -> float:
        raise NotImplementedError

    def exp(self, x, v):
        """Exponential map; v in intrinsic coordinates at x."""
        raise NotImplementedError

    def log(self, x, y):
        """Logarithmic map; returns intrinsic coordinates at x."""
        raise NotImplementedError

    def tangent_basis(self, x):
        """(ambient_dim x intrinsic_dim) matrix with orthonormal columns.

        Deterministic: the same point always yields the same basis.
        """
        raise NotImplementedError

    def transport_matrix(self, x, y):
        """Orthogonal intrinsic-coordinate matrix of parallel transport x -> y."""
        raise NotImplementedError

    def transport(self, x, y, v):
        """Parallel transport of intrinsic vector v from T_x to T_y."""
        return self.transport_matrix(x, y) @ self._check_tangent(v)

    def transport_spd(self, x, y, V):
        """Parallel transport of a symmetric PSD matrix (factor-wise transport
        of V = L^T L in closed form: R V R^T with R the transport matrix)."""
        V = np.asarray(V, dtype=float)
        m = self.intrinsic_dim
        if V.shape != (m, m) or not np.allclose(V, V.T, atol=1e-10):
            raise InvalidArgumentError("transport_spd expects a symmetric m x m matrix")
        R = self.transport_matrix(x, y)
        W = R @ V @ R.T
        return 0.5 * (W + W.T)

    def project(self, x):
        """Map an ambient vector onto the manifold (normalization for spheres)."""
        raise NotImplementedError

    def random_point(self, rng):
        raise NotImplementedError

    def random_tangent(self, x, scale, rng):
        """Isotropic Gaussian in intrinsic coordinates, scaled."""
        if scale <= 0:
            raise InvalidArgumentError("scale must be positive")
        rng = np.random.default_rng(rng)
        return scale * rng.standard_normal(self.intrinsic_dim)


@dataclass(frozen=True)
class Euclidean(Manifold):
    """Flat space R^n: exp is addition, log subtraction, transport identity."""

    n: int

    @property
    def ambient_dim(self):
        return self.n

    @property
    def intrinsic_dim(self):
        return self.n

    def distance(self, x, y):
        return float(np.linalg.norm(self._check(x) - self._check(y)))

    def exp(self, x, v):
        return self._check(x) + self._check_tangent(v)

    def log(self, x, y):
        return self._check(y) - self._check(x)

    def tangent_basis(self, x):
        self._check(x)
        return np.eye(self.n)

    def transport_matrix(self, x, y):
        self._check(x)
        self._check(y)
        return np.eye(self.n)

    def project(self, x):
        return self._check(x)

    def random_point(self, rng):
        rng = np.random.default_rng(rng)
        return rng.standard_normal(self.n)


@dataclass(frozen=True)
class Sphere(Manifold):
    """Unit sphere S^m embedded in R^(m+1)."""

    m: int

    @property
    def ambient_dim(self):
        return self.m + 1

    @property
    def intrinsic_dim(self):
        return self.m

    def _dot(self, x, y):
        return float(np.clip(np.dot(x, y), -1.0, 1.0))

    def distance(self, x, y):
        return math.acos(self._dot(self._check(x), self._check(y)))

    def project(self, x):
        x = self._check(x)
        n = np.linalg.norm(x)
        if n < _TINY_NORM:
            raise InvalidArgumentError("cannot project the zero vector onto a sphere")
        return x / n

    def tangent_basis(self, x):
        x = self._check(x)
        # Drop the canonical axis most aligned with x (first index on ties),
        # then Gram-Schmidt the remaining axes against x in index order.
        drop = int(np.argmax(np.abs(x)))
        cols = []
        for i in range(self.ambient_dim):
            if i == drop:
                continue
            v = np.zeros(self.ambient_dim)
            v[i] = 1.0
            v -= np.dot(v, x) * x
            for c in cols:
                v -= np.dot(v, c) * c
            v /= np.linalg.norm(v)
            cols.append(v)
        return np.column_stack(cols)

    def _exp_ambient(self, x, u):
        nu = np.linalg.norm(u)
        if nu < _TINY_NORM:
            return x
        y = x * math.cos(nu) + (u / nu) * math.sin(nu)
        return y / np.linalg.norm(y)

    def _log_ambient(self, x, y):
        dot = self._dot(x, y)
        if dot <= -1.0 + _ANTIPODAL_TOL:
            raise SingularityError("log map undefined between (near-)antipodal sphere points")
        d = math.acos(dot)
        if d < _TINY_NORM:
            return np.zeros(self.ambient_dim)
        u = y - dot * x
        return d * u / np.linalg.norm(u)

    def exp(self, x, v):
        x = self._check(x)
        B = self.tangent_basis(x)
        return self._exp_ambient(x, B @ self._check_tangent(v))

    def log(self, x, y):
        x = self._check(x)
        B = self.tangent_basis(x)
        return B.T @ self._log_ambient(x, self._check(y))

    def _transport_ambient_matrix(self, x, y):
        u = self._log_ambient(x, y)
        nu = np.linalg.norm(u)
        eye = np.eye(self.ambient_dim)
        if nu < _TINY_NORM:
            return eye
        ub = u / nu
        outer = np.outer(ub, ub)
        return (
            -np.outer(x, ub) * math.sin(nu)
            + outer * math.cos(nu)
            + (eye - outer)
        )

    def transport_matrix(self, x, y):
        x = self._check(x)
        y = self._check(y)
        G = self._transport_ambient_matrix(x, y)
        return self.tangent_basis(y).T @ G @ self.tangent_basis(x)

    def random_point(self, rng):
        rng = np.random.default_rng(rng)
        v = rng.standard_normal(self.ambient_dim)
        return v / np.linalg.norm(v)


@dataclass(frozen=True)
class Product(Manifold):
    """Product of non-product factors, e.g. R^3 x S^3 for full poses.

    Ambient and intrinsic coordinates are the concatenations of the
    factors'; every operation factors exactly.
    """

    factors: tuple[Manifold, ...]

    def __init__(self, factors: Sequence[Manifold]):
        factors = tuple(factors)
        if any(isinstance(f, Product) for f in factors):
            raise InvalidArgumentError("product factors must not be nested products")
        if not factors:
            raise InvalidArgumentError("product needs at least one factor")
        object.__setattr__(self, "factors", factors)

    @property
    def ambient_dim(self):
        return sum(f.ambient_dim for f in self.factors)

    @property
    def intrinsic_dim(self):
        return sum(f.intrinsic_dim for f in self.factors)

    def _ambient_slices(self):
        out, k = [], 0
        for f in self.factors:
            out.append(slice(k, k + f.ambient_dim))
            k += f.ambient_dim
        return out

    def _intrinsic_slices(self):
        out, k = [], 0
        for f in self.factors:
            out.append(slice(k, k + f.intrinsic_dim))
            k += f.intrinsic_dim
        return out

    def distance(self, x, y):
        x, y = self._check(x), self._check(y)
        return math.sqrt(
            sum(
                f.distance(x[s], y[s]) ** 2
                for f, s in zip(self.factors, self._ambient_slices())
            )
        )

    def exp(self, x, v):
        x, v = self._check(x), self._check_tangent(v)
        return np.concatenate(
            [
                f.exp(x[sa], v[si])
                for f, sa, si in zip(self.factors, self._ambient_slices(), self._intrinsic_slices())
            ]
        )

    def log(self, x, y):
        x, y = self._check(x), self._check(y)
        return np.concatenate(
            [f.log(x[s], y[s]) for f, s in zip(self.factors, self._ambient_slices())]
        )

    def tangent_basis(self, x):
        x = self._check(x)
        B = np.zeros((self.ambient_dim, self.intrinsic_dim))
        for f, sa, si in zip(self.factors, self._ambient_slices(), self._intrinsic_slices()):
            B[sa, si] = f.tangent_basis(x[sa])
        return B

    def transport_matrix(self, x, y):
        x, y = self._check(x), self._check(y)
        R = np.zeros((self.intrinsic_dim, self.intrinsic_dim))
        for f, sa, si in zip(self.factors, self._ambient_slices(), self._intrinsic_slices()):
            R[si, si] = f.transport_matrix(x[sa], y[sa])
        return R

    def project(self, x):
        x = self._check(x)
        return np.concatenate(
            [f.project(x[s]) for f, s in zip(self.factors, self._ambient_slices())]
        )

    def random_point(self, rng):
        rng = np.random.default_rng(rng)
        return np.concatenate([f.random_point(rng) for f in self.factors])


def manifold_from_tag(tag: str) -> Manifold:
    """Parse a manifold tag such as "S3", "S2", "R3", or "R3xS3"."""
    parts = tag.split("x")
    factors = []
    for part in parts:
        part = part.strip()
        if part.startswith("S") and part[1:].isdigit():
            factors.append(Sphere(int(part[1:])))
        elif part.startswith("R") and part[1:].isdigit():
            factors.append(Euclidean(int(part[1:])))
        else:
            raise InvalidArgumentError(f"unrecognized manifold tag component: {part!r}")
    if len(factors) == 1:
        return factors[0]
    return Product(factors)


def manifold_tag(manifold: Manifold) -> str:
    if isinstance(manifold, Sphere):
        return f"S{manifold.m}"
    if isinstance(manifold, Euclidean):
        return f"R{manifold.n}"
    if isinstance(manifold, Product):
        return "x".join(manifold_tag(f) for f in manifold.factors)
    raise InvalidArgumentError(f"cannot tag manifold {manifold!r}")
