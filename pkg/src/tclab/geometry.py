"""Concrete spaces for planners: points are flat float vectors in an ambient R^D.

* ``SphereSpace(m)``: unit vectors in R^(m+1).
* ``EuclideanSpace(n)``: R^n.
* ``ProductSpace``: coordinates of the factors concatenated.
* ``WedgeSpace(m)``: S^1 v S^m inside S^1 x S^m as (S^1 x {P}) u ({x0} x S^m).
* ``PuncturedCylinder(n)``: S^1 x R^n minus the identity (1, 0; 0).
* ``ConfigCylinder(n)``: ordered pairs of distinct points of S^1 x R^n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "MEMBERSHIP_TOL",
    "ENDPOINT_TOL",
    "HEIGHT_BOX",
    "GeometricSpace",
    "SphereSpace",
    "EuclideanSpace",
    "ProductSpace",
    "WedgeSpace",
    "PuncturedCylinder",
    "ConfigCylinder",
    "cylinder_distance",
]

MEMBERSHIP_TOL = 1e-12  # constraint residual for points handed to planners
ENDPOINT_TOL = 1e-9  # |gamma(0) - A|, |gamma(1) - B|, and residuals along paths
HEIGHT_BOX = 3.0  # heights on cylinders are sampled uniformly from [-3, 3]


def _unit_error(X: np.ndarray) -> np.ndarray:
    return np.abs(np.sqrt(np.sum(X * X, axis=-1)) - 1.0)


def _random_unit(rng: np.random.Generator, d: int) -> np.ndarray:
    while True:
        v = rng.standard_normal(d)
        n = np.linalg.norm(v)
        if n > 1e-8:
            return v / n


class GeometricSpace:
    ambient: int
    name: str
    has_collisions = False  # whether collision_margin is meaningful

    def membership_error(self, X: np.ndarray) -> np.ndarray:
        """Constraint residual per row of ``X``."""
        raise NotImplementedError

    def collision_margin(self, X: np.ndarray) -> np.ndarray | None:
        return None

    def sample(self, rng: np.random.Generator) -> np.ndarray:
        raise NotImplementedError

    def perturb(self, x: np.ndarray, eps: float, rng: np.random.Generator) -> np.ndarray:
        """A point of the space within ambient distance about ``eps`` of ``x``."""
        raise NotImplementedError

    def contains(self, x: np.ndarray, tol: float = MEMBERSHIP_TOL) -> bool:
        x = np.asarray(x, dtype=float)
        return x.shape == (self.ambient,) and float(self.membership_error(x[None, :])[0]) <= tol

    def to_json(self):
        return {"kind": type(self).__name__, "name": self.name, "ambient_dim": self.ambient}


@dataclass(frozen=True)
class SphereSpace(GeometricSpace):
    m: int

    @property
    def ambient(self):
        return self.m + 1

    @property
    def name(self):
        return f"S{self.m}"

    def membership_error(self, X):
        return _unit_error(np.atleast_2d(X))

    def sample(self, rng):
        return _random_unit(rng, self.m + 1)

    def perturb(self, x, eps, rng):
        v = rng.standard_normal(self.m + 1)
        v -= np.dot(v, x) * x
        v /= np.linalg.norm(v)
        return math.cos(eps) * x + math.sin(eps) * v


@dataclass(frozen=True)
class EuclideanSpace(GeometricSpace):
    n: int

    @property
    def ambient(self):
        return self.n

    @property
    def name(self):
        return f"R^{self.n}"

    def membership_error(self, X):
        return np.zeros(np.atleast_2d(X).shape[0])

    def sample(self, rng):
        return rng.uniform(-HEIGHT_BOX, HEIGHT_BOX, self.n)

    def perturb(self, x, eps, rng):
        return x + eps * _random_unit(rng, self.n)


@dataclass(frozen=True)
class ProductSpace(GeometricSpace):
    factors: tuple[GeometricSpace, ...]

    @property
    def ambient(self):
        return sum(f.ambient for f in self.factors)

    @property
    def name(self):
        return " x ".join(f.name for f in self.factors)

    def split(self, X):
        out, k = [], 0
        for f in self.factors:
            out.append(X[..., k : k + f.ambient])
            k += f.ambient
        return out

    def membership_error(self, X):
        X = np.atleast_2d(X)
        return np.max([f.membership_error(p) for f, p in zip(self.factors, self.split(X))], axis=0)

    def sample(self, rng):
        return np.concatenate([f.sample(rng) for f in self.factors])

    def perturb(self, x, eps, rng):
        k = len(self.factors)
        parts = self.split(x)
        return np.concatenate([f.perturb(p, eps / math.sqrt(k), rng) for f, p in zip(self.factors, parts)])


@dataclass(frozen=True)
class WedgeSpace(GeometricSpace):
    """S^1 v S^m; the circle lobe is S^1 x {P}, the sphere lobe {x0} x S^m."""

    m: int

    @property
    def ambient(self):
        return self.m + 3

    @property
    def name(self):
        return f"S1 v S{self.m}"

    @property
    def x0(self) -> np.ndarray:
        return np.array([1.0, 0.0])

    @property
    def P(self) -> np.ndarray:
        p = np.zeros(self.m + 1)
        p[0] = p[1] = math.sqrt(0.5)
        return p

    @property
    def basepoint(self) -> np.ndarray:
        return np.concatenate([self.x0, self.P])

    def split(self, X):
        return X[..., :2], X[..., 2:]

    def circle_point(self, u):
        return np.concatenate([u, self.P])

    def sphere_point(self, v):
        return np.concatenate([self.x0, v])

    def lobes(self, x, tol: float = 1e-9) -> tuple[bool, bool]:
        u, v = self.split(x)
        return bool(np.linalg.norm(v - self.P) <= tol), bool(np.linalg.norm(u - self.x0) <= tol)

    def membership_error(self, X):
        X = np.atleast_2d(X)
        u, v = self.split(X)
        off = np.minimum(np.linalg.norm(u - self.x0, axis=1), np.linalg.norm(v - self.P, axis=1))
        return np.maximum(np.maximum(_unit_error(u), _unit_error(v)), off)

    def sample(self, rng):
        # lobe chosen in proportion to its volume
        vol_s = 2 * math.pi ** ((self.m + 1) / 2) / math.gamma((self.m + 1) / 2)
        if rng.uniform() < 2 * math.pi / (2 * math.pi + vol_s):
            return self.circle_point(_random_unit(rng, 2))
        return self.sphere_point(_random_unit(rng, self.m + 1))

    def perturb(self, x, eps, rng):
        on_circle, on_sphere = self.lobes(x)
        u, v = self.split(x)
        if on_circle and (not on_sphere or rng.uniform() < 0.5):
            return self.circle_point(SphereSpace(1).perturb(u, eps, rng))
        return self.sphere_point(SphereSpace(self.m).perturb(v, eps, rng))


def cylinder_distance(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Intrinsic distance on S^1 x R^n for rows (cos, sin, h...)."""
    cross = X[..., 0] * Y[..., 1] - X[..., 1] * Y[..., 0]
    dot = X[..., 0] * Y[..., 0] + X[..., 1] * Y[..., 1]
    ang = np.arctan2(cross, dot)
    dh = X[..., 2:] - Y[..., 2:]
    return np.sqrt(ang * ang + np.sum(dh * dh, axis=-1))


def _cylinder_sample(rng, n):
    a = rng.uniform(-math.pi, math.pi)
    return np.concatenate([[math.cos(a), math.sin(a)], rng.uniform(-HEIGHT_BOX, HEIGHT_BOX, n)])


def _cylinder_perturb(x, eps, rng, n):
    d = _random_unit(rng, n + 1) * eps
    c, s = math.cos(d[0]), math.sin(d[0])
    rot = np.array([c * x[0] - s * x[1], s * x[0] + c * x[1]])
    return np.concatenate([rot, x[2:] + d[1:]])


@dataclass(frozen=True)
class PuncturedCylinder(GeometricSpace):
    n: int

    @property
    def ambient(self):
        return self.n + 2

    @property
    def name(self):
        return f"S1 x R^{self.n} minus a point"

    @property
    def puncture(self) -> np.ndarray:
        e = np.zeros(self.n + 2)
        e[0] = 1.0
        return e

    def membership_error(self, X):
        X = np.atleast_2d(X)
        err = _unit_error(X[:, :2])
        gap = cylinder_distance(X, self.puncture)
        return np.where(gap > 0.0, err, np.inf)

    has_collisions = True

    def collision_margin(self, X):
        return cylinder_distance(np.atleast_2d(X), self.puncture)

    def sample(self, rng):
        while True:
            x = _cylinder_sample(rng, self.n)
            if cylinder_distance(x, self.puncture) > 0.0:
                return x

    def perturb(self, x, eps, rng):
        return _cylinder_perturb(x, eps, rng, self.n)


@dataclass(frozen=True)
class ConfigCylinder(GeometricSpace):
    """Two labelled bodies on S^1 x R^n that never coincide."""

    n: int

    @property
    def ambient(self):
        return 2 * (self.n + 2)

    @property
    def name(self):
        return f"F(S1 x R^{self.n}, 2)"

    def bodies(self, X):
        k = self.n + 2
        return X[..., :k], X[..., k:]

    def membership_error(self, X):
        X = np.atleast_2d(X)
        a, b = self.bodies(X)
        err = np.maximum(_unit_error(a[:, :2]), _unit_error(b[:, :2]))
        return np.where(cylinder_distance(a, b) > 0.0, err, np.inf)

    has_collisions = True

    def collision_margin(self, X):
        a, b = self.bodies(np.atleast_2d(X))
        return cylinder_distance(a, b)

    def sample(self, rng):
        while True:
            a, b = _cylinder_sample(rng, self.n), _cylinder_sample(rng, self.n)
            if cylinder_distance(a, b) > 0.0:
                return np.concatenate([a, b])

    def perturb(self, x, eps, rng):
        a, b = self.bodies(x)
        s = eps / math.sqrt(2)
        while True:
            y = np.concatenate([_cylinder_perturb(a, s, rng, self.n), _cylinder_perturb(b, s, rng, self.n)])
            if float(self.collision_margin(y)[0]) > 0.0:
                return y
