"""Closed-form paths, evaluated on arrays of times in [0, 1].

Every path reports a ``length``: a continuous, nonnegative weight that vanishes
exactly when the path is constant.  Concatenation splits [0, 1] in proportion
to these weights, so a constant piece takes no time and a concatenation with
a constant piece is literally the other piece.  This is what keeps sections
continuous where two pieces of a cover meet.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "PathFn",
    "Constant",
    "Geodesic",
    "Semicircle",
    "StereoLine",
    "Line",
    "Concat",
    "ProductPath",
    "Mapped",
    "Reverse",
    "Track",
    "stereo",
    "stereo_inverse",
]


class PathFn:
    dim: int
    length: float

    def __call__(self, t) -> np.ndarray:
        t = np.atleast_1d(np.asarray(t, dtype=float))
        return self.eval(t)

    def eval(self, t: np.ndarray) -> np.ndarray:  # pragma: no cover - abstract
        raise NotImplementedError

    def sample(self, resolution: int) -> list[dict]:
        ts = np.linspace(0.0, 1.0, resolution + 1)
        pts = self(ts)
        return [{"t": float(t), "point": [float(x) for x in p]} for t, p in zip(ts, pts)]


@dataclass(frozen=True, eq=False)
class Constant(PathFn):
    point: np.ndarray

    @property
    def dim(self):
        return self.point.shape[0]

    @property
    def length(self):
        return 0.0

    def eval(self, t):
        return np.broadcast_to(self.point, (t.shape[0], self.dim)).copy()


@dataclass(frozen=True, eq=False)
class Geodesic(PathFn):
    """Constant-speed minimal great-circle arc; ``a`` and ``b`` must not be antipodal."""

    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        u = self.b - np.dot(self.a, self.b) * self.a
        s = 0.0 if np.array_equal(self.a, self.b) else float(np.linalg.norm(u))
        theta = math.atan2(s, float(np.dot(self.a, self.b)))
        object.__setattr__(self, "_theta", theta)
        object.__setattr__(self, "_dir", u / s if s > 0.0 else np.zeros_like(u))
        object.__setattr__(self, "_scale", s)

    @property
    def dim(self):
        return self.a.shape[0]

    @property
    def length(self):
        return self._theta

    def eval(self, t):
        if self._scale == 0.0:
            return np.broadcast_to(self.a, (t.shape[0], self.dim)).copy()
        ang = self._theta * t
        out = np.cos(ang)[:, None] * self.a + np.sin(ang)[:, None] * self._dir
        # pin the far end to b exactly; rounding in cos/sin is ~1e-16 anyway
        out[t == 1.0] = self.b
        return out


@dataclass(frozen=True, eq=False)
class Semicircle(PathFn):
    """s -> -cos(pi s) b + sin(pi s) w, from -b to b; ``w`` is a unit vector orthogonal to ``b``."""

    b: np.ndarray
    w: np.ndarray

    @property
    def dim(self):
        return self.b.shape[0]

    @property
    def length(self):
        return math.pi

    def eval(self, t):
        out = -np.cos(math.pi * t)[:, None] * self.b + np.sin(math.pi * t)[:, None] * self.w
        out[t == 1.0] = self.b
        return out


def stereo(x: np.ndarray, pole: int) -> np.ndarray:
    """Stereographic chart from the basis pole ``e_pole`` (rows or single point)."""
    x = np.asarray(x, dtype=float)
    rest = np.delete(x, pole, axis=-1)
    return rest / (1.0 - x[..., pole : pole + 1])


def stereo_inverse(y: np.ndarray, pole: int) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    n2 = np.sum(y * y, axis=-1, keepdims=True)
    head = (n2 - 1.0) / (n2 + 1.0)
    rest = 2.0 * y / (n2 + 1.0)
    return np.insert(rest, pole, head[..., 0], axis=-1)


@dataclass(frozen=True, eq=False)
class StereoLine(PathFn):
    """Straight segment in the stereographic chart from ``e_pole``, pulled back to the sphere."""

    a: np.ndarray
    b: np.ndarray
    pole: int

    def __post_init__(self):
        object.__setattr__(self, "_ya", stereo(self.a, self.pole))
        object.__setattr__(self, "_yb", stereo(self.b, self.pole))

    @property
    def dim(self):
        return self.a.shape[0]

    @property
    def length(self):
        return float(np.linalg.norm(self._yb - self._ya))

    def eval(self, t):
        y = (1.0 - t)[:, None] * self._ya + t[:, None] * self._yb
        out = stereo_inverse(y, self.pole)
        out[t == 0.0] = self.a
        out[t == 1.0] = self.b
        return out


@dataclass(frozen=True, eq=False)
class Line(PathFn):
    a: np.ndarray
    b: np.ndarray

    @property
    def dim(self):
        return self.a.shape[0]

    @property
    def length(self):
        return float(np.linalg.norm(self.b - self.a))

    def eval(self, t):
        out = (1.0 - t)[:, None] * self.a + t[:, None] * self.b
        out[t == 1.0] = self.b
        return out


@dataclass(frozen=True, eq=False)
class Concat(PathFn):
    parts: tuple[PathFn, ...]

    def __post_init__(self):
        lengths = np.array([p.length for p in self.parts], dtype=float)
        total = float(lengths.sum())
        object.__setattr__(self, "_lengths", lengths)
        object.__setattr__(self, "_total", total)
        ends = np.cumsum(lengths) / total if total > 0 else np.zeros_like(lengths)
        object.__setattr__(self, "_ends", ends)

    @property
    def dim(self):
        return self.parts[0].dim

    @property
    def length(self):
        return self._total

    def eval(self, t):
        if self._total == 0.0:
            return self.parts[0].eval(t)
        out = np.empty((t.shape[0], self.dim))
        idx = np.searchsorted(self._ends, t, side="left")
        idx = np.minimum(idx, len(self.parts) - 1)
        starts = np.concatenate(([0.0], self._ends[:-1]))
        for k in np.unique(idx):
            mask = idx == k
            width = self._lengths[k] / self._total
            s = np.zeros(mask.sum()) if width == 0.0 else np.clip((t[mask] - starts[k]) / width, 0.0, 1.0)
            out[mask] = self.parts[k].eval(s)
        return out


@dataclass(frozen=True, eq=False)
class ProductPath(PathFn):
    """Componentwise path in a product, coordinates concatenated."""

    parts: tuple[PathFn, ...]

    @property
    def dim(self):
        return sum(p.dim for p in self.parts)

    @property
    def length(self):
        return float(math.sqrt(sum(p.length ** 2 for p in self.parts)))

    def eval(self, t):
        return np.concatenate([p.eval(t) for p in self.parts], axis=1)


@dataclass(frozen=True, eq=False)
class Mapped(PathFn):
    """Pointwise image of a path under a row-wise map ``fn``."""

    inner: PathFn
    fn: Callable[[np.ndarray], np.ndarray]
    out_dim: int

    @property
    def dim(self):
        return self.out_dim

    @property
    def length(self):
        return self.inner.length

    def eval(self, t):
        return self.fn(self.inner.eval(t))


@dataclass(frozen=True, eq=False)
class Reverse(PathFn):
    inner: PathFn

    @property
    def dim(self):
        return self.inner.dim

    @property
    def length(self):
        return self.inner.length

    def eval(self, t):
        return self.inner.eval(1.0 - t)


@dataclass(frozen=True, eq=False)
class Track(PathFn):
    """Straight line in model coordinates, mapped through ``to_space``."""

    start: np.ndarray
    end: np.ndarray
    to_space: Callable[[np.ndarray], np.ndarray]
    out_dim: int
    exact_start: np.ndarray | None = None

    @property
    def dim(self):
        return self.out_dim

    @property
    def length(self):
        return float(np.linalg.norm(self.end - self.start))

    def eval(self, t):
        m = (1.0 - t)[:, None] * self.start + t[:, None] * self.end
        out = self.to_space(m)
        if self.exact_start is not None:
            out[t == 0.0] = self.exact_start
        return out


def concat(*parts: PathFn) -> PathFn:
    return Concat(tuple(parts))


def as_point(x: Sequence[float]) -> np.ndarray:
    return np.asarray(x, dtype=float)
