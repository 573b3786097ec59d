"""Statistical certification of planners.

For N seeded random pairs plus a fixed list of boundary cases, a report
records coverage, endpoint exactness, membership along the path, collision
margin (configuration spaces), the reserved property on diagonal pairs, a
continuity table over time resolutions, and input-perturbation stability.

Randomness comes from one generator per sample index, seeded by
``(seed, stream, index)``, so reports are reproducible and independent of the
evaluation order.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ._accel import NUMBA_ENABLED, njit
from .geometry import (
    ENDPOINT_TOL,
    HEIGHT_BOX,
    ConfigCylinder,
    EuclideanSpace,
    GeometricSpace,
    ProductSpace,
    PuncturedCylinder,
    SphereSpace,
    WedgeSpace,
)
from .planner import Planner

__all__ = [
    "SCHEMA_VERSION",
    "VerificationConfig",
    "VerificationReport",
    "Failure",
    "sample_pair",
    "adversarial_pairs",
    "verify",
    "path_metrics",
    "max_deviation",
    "max_row_gap",
    "kernel_backend",
    "step_profile",
]

SCHEMA_VERSION = 1

_MAIN, _DIAG, _PERTURB = 0, 1, 2  # rng streams


# -- kernels ------------------------------------------------------------------
# Loop kernels compiled by numba, with vectorised numpy twins used when
# TCLAB_DISABLE_NUMBA is set.  Both return identical values up to rounding.


@njit
def _path_metrics_loop(X, A, B):
    n, d = X.shape
    e0 = 0.0
    e1 = 0.0
    for j in range(d):
        e0 += (X[0, j] - A[j]) ** 2
        e1 += (X[n - 1, j] - B[j]) ** 2
    step = 0.0
    for i in range(n - 1):
        s = 0.0
        for j in range(d):
            s += (X[i + 1, j] - X[i, j]) ** 2
        if s > step:
            step = s
    return max(math.sqrt(e0), math.sqrt(e1)), math.sqrt(step)


@njit
def _max_row_gap_loop(X, Y):
    best = 0.0
    for i in range(X.shape[0]):
        s = 0.0
        for j in range(X.shape[1]):
            s += (X[i, j] - Y[i, j]) ** 2
        if s > best:
            best = s
    return math.sqrt(best)


def _path_metrics_np(X, A, B):
    ends = max(float(np.linalg.norm(X[0] - A)), float(np.linalg.norm(X[-1] - B)))
    steps = np.sqrt(np.sum(np.diff(X, axis=0) ** 2, axis=1))
    return ends, float(steps.max()) if steps.size else 0.0


def _max_row_gap_np(X, Y):
    return float(np.sqrt(np.max(np.sum((X - Y) ** 2, axis=1))))


if NUMBA_ENABLED:
    path_metrics, max_row_gap = _path_metrics_loop, _max_row_gap_loop
else:
    path_metrics, max_row_gap = _path_metrics_np, _max_row_gap_np

path_metrics.__doc__ = "(endpoint error, largest step) of a sampled path X from A to B."


def max_deviation(X, x):
    """Largest distance from rows of ``X`` to the point ``x``."""
    return max_row_gap(X, np.broadcast_to(x, X.shape).copy())


def step_profile(path, resolutions) -> list[float]:
    out = []
    for r in resolutions:
        X = np.ascontiguousarray(path(np.linspace(0.0, 1.0, r + 1)))
        out.append(path_metrics(X, X[0], X[-1])[1])
    return out


# -- sampling -----------------------------------------------------------------


def _rng(seed: int, stream: int, i: int) -> np.random.Generator:
    return np.random.default_rng([seed, stream, i])


def sample_pair(space: GeometricSpace, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    return space.sample(rng), space.sample(rng)


def _cyl(angle: float, heights) -> np.ndarray:
    return np.concatenate([[math.cos(angle), math.sin(angle)], np.asarray(heights, float)])


def _sphere_cases(m: int) -> list[tuple[np.ndarray, np.ndarray]]:
    out = []
    eye = np.eye(m + 1)
    for i in range(m + 1):
        p = eye[i]
        out += [(p, -p), (-p, p), (p, p), (p, eye[(i + 1) % (m + 1)])]
    return out


def adversarial_pairs(space: GeometricSpace) -> list[tuple[np.ndarray, np.ndarray]]:
    """Hand-picked pairs on the strata where covers switch rules."""
    if isinstance(space, SphereSpace):
        return _sphere_cases(space.m)
    if isinstance(space, EuclideanSpace):
        z = np.zeros(space.n)
        return [(z, z), (z, np.ones(space.n))]
    if isinstance(space, WedgeSpace):
        bp, x0, P = space.basepoint, space.x0, space.P
        c = space.circle_point
        s = space.sphere_point
        tiny = 1e-7
        near_c = c(np.array([math.cos(tiny), math.sin(tiny)]))
        near_s = s(SphereSpace(space.m).perturb(P, tiny, np.random.default_rng(0)))
        out = [
            (bp, bp),
            (bp, c(-x0)),
            (c(-x0), bp),
            (bp, s(-P)),
            (s(-P), bp),
            (c(np.array([0.0, 1.0])), c(np.array([0.0, -1.0]))),
            (c(-x0), s(-P)),
            (s(-P), c(-x0)),
            (near_c, near_s),
            (near_s, near_c),
            (c(np.array([0.0, 1.0])), c(np.array([0.0, 1.0]))),
        ]
        out += [(s(a), s(b)) for a, b in _sphere_cases(space.m)]
        return out
    if isinstance(space, PuncturedCylinder):
        h0 = np.zeros(space.n)
        e = np.zeros(space.n)
        e[0] = 1.0
        pts = [_cyl(math.pi, h0), _cyl(1e-6, h0), _cyl(0.0, 1e-6 * e), _cyl(math.pi / 2, h0), _cyl(0.0, e), _cyl(0.0, -e)]
        return [(a, b) for a in pts for b in pts]
    if isinstance(space, ConfigCylinder):
        n = space.n
        e = np.zeros(n)
        e[-1] = 1.0
        a, b = _cyl(0.0, -e), _cyl(math.pi, e)
        close = _cyl(1e-6, -e)
        out = [
            (np.concatenate([a, b]), np.concatenate([b, a])),  # swap
            (np.concatenate([a, b]), np.concatenate([a, b])),
            (np.concatenate([a, close]), np.concatenate([close, a])),
            (np.concatenate([a, close]), np.concatenate([b, a])),
            (np.concatenate([a, _cyl(0.0, e)]), np.concatenate([_cyl(0.0, e), a])),
            (np.concatenate([a, _cyl(math.pi, -e)]), np.concatenate([_cyl(math.pi, -e), a])),
        ]
        return out
    if isinstance(space, ProductSpace):
        parts = [adversarial_pairs(f) for f in space.factors]
        k = max(len(p) for p in parts)
        return [
            (np.concatenate([p[i % len(p)][0] for p in parts]), np.concatenate([p[i % len(p)][1] for p in parts]))
            for i in range(k)
        ]
    return []


# -- report -------------------------------------------------------------------


@dataclass(frozen=True)
class VerificationConfig:
    samples: int = 10_000
    seed: int = 0
    time_steps: int = 64
    epsilon: float = 1e-6
    endpoint_tol: float = ENDPOINT_TOL
    membership_tol: float = ENDPOINT_TOL
    diagonal_samples: int = 200
    continuity_samples: int = 64
    resolutions: tuple[int, ...] = (16, 32, 64, 128, 256)
    perturbation_samples: int = 200
    adversarial: bool = True
    workers: int = 1


@dataclass(frozen=True)
class Failure:
    source: str  # "random" | "adversarial" | "diagonal"
    index: int
    rule: int | None
    reason: str
    A: tuple[float, ...]
    B: tuple[float, ...]

    def to_json(self):
        return {
            "source": self.source,
            "index": self.index,
            "rule": self.rule,
            "reason": self.reason,
            "A": list(self.A),
            "B": list(self.B),
        }


@dataclass
class _Acc:
    covered: int = 0
    usage: dict = field(default_factory=dict)
    endpoint: float = 0.0
    membership: float = 0.0
    collision: float = math.inf
    failures: list = field(default_factory=list)

    def merge(self, o: "_Acc"):
        self.covered += o.covered
        for k, v in o.usage.items():
            self.usage[k] = self.usage.get(k, 0) + v
        self.endpoint = max(self.endpoint, o.endpoint)
        self.membership = max(self.membership, o.membership)
        self.collision = min(self.collision, o.collision)
        self.failures += o.failures


@dataclass
class VerificationReport:
    planner: str
    space: dict
    rule_count: int
    reserved_claimed: bool
    config: VerificationConfig
    coverage_fraction: float
    rule_usage: list[int]
    worst_endpoint_error: float
    worst_membership_error: float
    min_collision_margin: float | None
    reserved_ok: list[bool | None] | None
    continuity: list[dict]
    continuity_monotone: bool
    perturbation: dict
    adversarial_checked: int
    failures: list[Failure]

    @property
    def passed(self) -> bool:
        return (
            self.coverage_fraction == 1.0
            and not self.failures
            and self.worst_endpoint_error < self.config.endpoint_tol
            and self.worst_membership_error < self.config.membership_tol
            and (self.min_collision_margin is None or self.min_collision_margin > 0.0)
            and (self.reserved_ok is None or all(ok is not False for ok in self.reserved_ok))
            and self.continuity_monotone
        )

    def summary(self) -> str:
        cm = "n/a" if self.min_collision_margin is None else f"{self.min_collision_margin:.3g}"
        return (
            f"{self.planner}: {'PASS' if self.passed else 'FAIL'}  rules={self.rule_count}"
            f"  coverage={self.coverage_fraction:.4f}  endpoint={self.worst_endpoint_error:.2e}"
            f"  membership={self.worst_membership_error:.2e}  collision_margin={cm}"
            f"  reserved={self.reserved_ok if self.reserved_claimed else 'not claimed'}"
        )

    def to_json(self, max_failures: int = 20) -> dict:
        cfg = self.config
        return {
            "schema_version": SCHEMA_VERSION,
            "planner": self.planner,
            "space": self.space,
            "rules": self.rule_count,
            "reserved_claimed": self.reserved_claimed,
            "samples": cfg.samples,
            "seed": cfg.seed,
            "time_steps": cfg.time_steps,
            "height_box": [-HEIGHT_BOX, HEIGHT_BOX],
            "tolerances": {"endpoint": cfg.endpoint_tol, "membership": cfg.membership_tol},
            "coverage_fraction": self.coverage_fraction,
            "rule_usage": self.rule_usage,
            "worst_endpoint_error": self.worst_endpoint_error,
            "worst_membership_error": self.worst_membership_error,
            "min_collision_margin": self.min_collision_margin,
            "reserved_ok": self.reserved_ok,
            "continuity": self.continuity,
            "continuity_monotone": self.continuity_monotone,
            "perturbation": self.perturbation,
            "adversarial_checked": self.adversarial_checked,
            "failure_count": len(self.failures),
            "failures": [f.to_json() for f in self.failures[:max_failures]],
            "passed": self.passed,
        }


# -- checks -------------------------------------------------------------------


def _check_pair(planner: Planner, cfg: VerificationConfig, ts, A, B, source, index, acc: _Acc):
    space = planner.space
    m = planner.margins(A, B)
    k = int(np.argmax(m))
    if not m[k] > 0.0:
        acc.failures.append(Failure(source, index, None, "not covered", tuple(A), tuple(B)))
        return
    acc.covered += 1
    acc.usage[k] = acc.usage.get(k, 0) + 1
    X = np.ascontiguousarray(planner.section(k, A, B)(ts))
    end_err, _ = path_metrics(X, A, B)
    mem = float(np.max(space.membership_error(X)))
    acc.endpoint = max(acc.endpoint, end_err)
    acc.membership = max(acc.membership, mem)
    reasons = []
    if not end_err < cfg.endpoint_tol:
        reasons.append(f"endpoint error {end_err:.3g}")
    if not mem < cfg.membership_tol:
        reasons.append(f"membership error {mem:.3g}")
    cm = space.collision_margin(X)
    if cm is not None:
        c = float(np.min(cm))
        acc.collision = min(acc.collision, c)
        if not c > 0.0:
            reasons.append("collision along path")
    if reasons:
        acc.failures.append(Failure(source, index, k, "; ".join(reasons), tuple(A), tuple(B)))


def _random_chunk(planner, cfg, ts, lo, hi) -> _Acc:
    acc = _Acc()
    for i in range(lo, hi):
        A, B = sample_pair(planner.space, _rng(cfg.seed, _MAIN, i))
        _check_pair(planner, cfg, ts, A, B, "random", i, acc)
    return acc


def _reserved(planner: Planner, cfg: VerificationConfig, ts, acc: _Acc) -> list[bool | None]:
    ok: list[bool | None] = [None] * len(planner)
    points = [planner.space.sample(_rng(cfg.seed, _DIAG, j)) for j in range(cfg.diagonal_samples)]
    if cfg.adversarial:
        points += [a for a, _ in adversarial_pairs(planner.space)]
    for j, x in enumerate(points):
        m = planner.margins(x, x)
        for k in np.flatnonzero(m > 0.0):
            dev = max_deviation(np.ascontiguousarray(planner.section(int(k), x, x)(ts)), x)
            good = dev < cfg.endpoint_tol
            ok[k] = good if ok[k] is None else (ok[k] and good)
            if not good:
                acc.failures.append(Failure("diagonal", j, int(k), f"non-constant on diagonal ({dev:.3g})", tuple(x), tuple(x)))
    return ok


def _continuity(planner: Planner, cfg: VerificationConfig) -> tuple[list[dict], bool]:
    worst = np.zeros(len(cfg.resolutions))
    monotone = True
    for i in range(min(cfg.continuity_samples, cfg.samples)):
        A, B = sample_pair(planner.space, _rng(cfg.seed, _MAIN, i))
        m = planner.margins(A, B)
        k = int(np.argmax(m))
        if not m[k] > 0.0:
            continue
        prof = np.array(step_profile(planner.section(k, A, B), cfg.resolutions))
        # refinement never increases the largest step (beyond rounding)
        monotone &= bool(np.all(np.diff(prof) <= 1e-12))
        worst = np.maximum(worst, prof)
    table = [{"resolution": r, "max_step": float(w)} for r, w in zip(cfg.resolutions, worst)]
    return table, monotone and bool(np.all(np.diff(worst) <= 1e-12))


def _perturbation(planner: Planner, cfg: VerificationConfig, ts) -> dict:
    """Informational: pairs with margin >= 4 eps, perturbed by eps."""
    eps = cfg.epsilon
    checked = selectable = 0
    ratio = 0.0
    for i in range(min(cfg.perturbation_samples, cfg.samples)):
        A, B = sample_pair(planner.space, _rng(cfg.seed, _MAIN, i))
        m = planner.margins(A, B)
        k = int(np.argmax(m))
        if not m[k] >= 4 * eps:
            continue
        rng = _rng(cfg.seed, _PERTURB, i)
        A2, B2 = planner.space.perturb(A, eps, rng), planner.space.perturb(B, eps, rng)
        checked += 1
        if not planner.margins(A2, B2)[k] > 0.0:
            continue
        selectable += 1
        X = np.ascontiguousarray(planner.section(k, A, B)(ts))
        Y = np.ascontiguousarray(planner.section(k, A2, B2)(ts))
        ratio = max(ratio, max_row_gap(X, Y) / eps)
    return {
        "epsilon": eps,
        "checked": checked,
        "same_rule_selectable": selectable,
        "max_displacement_over_epsilon": ratio,
    }


def verify(planner: Planner, config: VerificationConfig | None = None) -> VerificationReport:
    cfg = config or VerificationConfig()
    ts = np.linspace(0.0, 1.0, cfg.time_steps + 1)
    acc = _Acc()

    workers = max(1, cfg.workers)
    bounds = np.linspace(0, cfg.samples, workers + 1).astype(int)
    if workers == 1:
        acc.merge(_random_chunk(planner, cfg, ts, 0, cfg.samples))
    else:
        with ThreadPoolExecutor(workers) as pool:
            for part in pool.map(lambda lh: _random_chunk(planner, cfg, ts, *lh), zip(bounds[:-1], bounds[1:])):
                acc.merge(part)
    covered_random = acc.covered

    adv = adversarial_pairs(planner.space) if cfg.adversarial else []
    for j, (A, B) in enumerate(adv):
        _check_pair(planner, cfg, ts, A, B, "adversarial", j, acc)

    reserved_ok = _reserved(planner, cfg, ts, acc) if planner.reserved else None
    table, monotone = _continuity(planner, cfg)
    acc.failures.sort(key=lambda f: ({"random": 0, "adversarial": 1, "diagonal": 2}[f.source], f.index))

    return VerificationReport(
        planner=planner.name,
        space=planner.space.to_json(),
        rule_count=len(planner),
        reserved_claimed=planner.reserved,
        config=cfg,
        coverage_fraction=covered_random / cfg.samples if cfg.samples else 1.0,
        rule_usage=[acc.usage.get(k, 0) for k in range(len(planner))],
        worst_endpoint_error=acc.endpoint,
        worst_membership_error=acc.membership,
        min_collision_margin=acc.collision if planner.space.has_collisions else None,
        reserved_ok=reserved_ok,
        continuity=table,
        continuity_monotone=monotone,
        perturbation=_perturbation(planner, cfg, ts),
        adversarial_checked=len(adv),
        failures=acc.failures,
    )


def kernel_backend() -> str:
    return "numba" if NUMBA_ENABLED else "numpy"
