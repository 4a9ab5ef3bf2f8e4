"""Walk-on-spheres solver: path generation, scoring, aggregation, diagnostics.

A path started at x0 iterates

    r_k    = dist_boundary(x_k)
    Y_h{k+1} ~ interior law on B(x_k, r_k)          (only when f is given)
    x_{k+1} = x_k + gamma * theta                    (heavy-tailed jump)
    acc    += r_k^alpha * zeta_unit * f(Y_{k+1})

and stops when the jump lands outside the domain (score = acc + g(x_{k+1}))
or inside the epsilon-shell along the boundary (score = acc + g(projected
point)).  The estimate at x0 is the sample mean of the path scores.

Reproducibility contract: path i of a run draws from the addressed stream
(seed, stream_id = i, substream = hash(x0)), consuming randomness per step
in a fixed order:

    1. interior-radius rejection rounds, one counter block each (f given)
    2. interior direction, n Gaussians                           (f given)
    3. exit direction, n Gaussians
    4. exit radius, one uniform

so a path replays bit-identically whether it runs alone (run_path), inside
any chunk of estimate_point, or under any thread count.  Aggregation sums
full score arrays in path-index order, which keeps the reduction
independent of scheduling as well.
"""

from __future__ import annotations

import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
import scipy.special as sc

from . import sampling
from .geometry import Domain
from .kernels import KernelConstants
from .specfun import BetaParams, beta, inc_beta

__all__ = [
    "ProblemSpec",
    "WalkConfig",
    "PathRealization",
    "Estimate",
    "StepCapExceeded",
    "run_path",
    "estimate_point",
    "estimate_field",
    "step_bound",
    "error_metric",
]

_CHUNK_PATHS = 65536
_REJECTION_CAP = 500_000


class StepCapExceeded(RuntimeError):
    """A path exceeded max_steps without leaving the domain."""


@dataclass(frozen=True)
class ProblemSpec:
    """The problem: exponent alpha, source f on the domain, exterior data g.

    f maps points in the domain to reals (None means f == 0); g maps points
    of the complement, boundary included, to reals and must be evaluable
    arbitrarily far out because the jump law is heavy-tailed.
    """

    n: int
    alpha: float
    f: Optional[Callable]
    g: Callable
    domain: Domain

    def __post_init__(self):
        if self.n != self.domain.n:
            raise ValueError("problem dimension disagrees with the domain")
        if not 0.0 < self.alpha < 2.0:
            raise ValueError("alpha must lie in (0, 2)")
        if self.g is None:
            raise ValueError("exterior data g is required (use lambda x: 0.0)")


@dataclass(frozen=True)
class WalkConfig:
    """Run parameters: shell width, path count, seed, safety caps."""

    epsilon: float
    num_paths: int
    seed: int
    max_steps: int = 1_000_000
    zeta_quad_points: int = 64

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if self.num_paths < 1:
            raise ValueError("num_paths must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 bits")
        if self.max_steps < 1 or self.zeta_quad_points < 1:
            raise ValueError("max_steps and zeta_quad_points must be >= 1")


@dataclass(frozen=True)
class PathRealization:
    score: float
    steps: int
    exit_point: np.ndarray
    stopped_in_shell: bool


@dataclass(frozen=True)
class Estimate:
    """Aggregated Monte Carlo estimate at one point.

    variance is the unbiased sample variance (N-1 denominator; 0.0 when a
    single path survives), stderr = sqrt(variance / n_paths).  n_dropped
    counts paths discarded at the step cap; they are excluded from all
    moments.
    """

    mean: float
    variance: float
    stderr: float
    n_paths: int
    mean_steps: float
    n_dropped: int = 0


class _FieldEval:
    """Adapter calling a scalar or batch field on (m, n) point arrays.

    The first call decides the mode: a callable that accepts the array and
    returns shape (m,) is used vectorized, anything else is looped per
    point.  Later failures propagate untouched."""

    def __init__(self, fn):
        self._fn = fn
        self._mode = None

    def __call__(self, pts):
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        if self._mode is None:
            try:
                out = np.asarray(self._fn(pts), dtype=float)
                if out.shape == (pts.shape[0],):
                    self._mode = "batch"
                    return out
            except Exception:
                pass
            self._mode = "scalar"
        if self._mode == "batch":
            out = np.asarray(self._fn(pts), dtype=float)
            if out.shape != (pts.shape[0],):
                raise ValueError("field returned a wrong-shaped batch")
            return out
        return np.array([float(self._fn(p)) for p in pts])


def _check_consistency(problem: ProblemSpec, constants: KernelConstants):
    if constants.n != problem.n or constants.alpha != problem.alpha:
        raise ValueError("constants were built for a different (n, alpha)")


def _batch_interior_radii(batch: sampling.StreamBatch, idx, n: int, alpha: float):
    """Per-path rejection sampling of the interior radial coordinate.

    Each pending path burns one counter block (two proposal/acceptance
    pairs) per round; the first accepted proposal wins."""
    out = np.empty(idx.shape[0])
    pending = np.arange(idx.shape[0])
    inv_alpha = 1.0 / alpha
    for _ in range(_REJECTION_CAP):
        if pending.size == 0:
            return out
        u = batch.uniforms(idx[pending], 4)
        accepted = np.full(pending.size, False)
        for j in (0, 2):
            s = u[:, j] ** inv_alpha
            ok = (~accepted) & (
                u[:, j + 1] <= sampling.interior_accept_prob(s, n, alpha)
            )
            out[pending[ok]] = s[ok]
            accepted |= ok
        pending = pending[~accepted]
    raise RuntimeError("interior radius rejection exceeded the proposal cap")


def _unit_rows(z):
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def _walk_chunk(problem, config, constants, path_ids, x0, substream):
    """Run one lockstep chunk of paths, all started at x0.

    Returns (scores, steps, exit_points, shell_flags, dropped_flags) as
    arrays indexed like path_ids."""
    dom = problem.domain
    n, alpha = problem.n, problem.alpha
    zeta_unit = constants.zeta_unit
    f = _FieldEval(problem.f) if problem.f is not None else None
    g = _FieldEval(problem.g)

    m = path_ids.shape[0]
    batch = sampling.StreamBatch(config.seed, path_ids, substream)
    x = np.tile(np.asarray(x0, dtype=float), (m, 1))
    acc = np.zeros(m)
    steps = np.zeros(m, dtype=np.int64)
    score = np.zeros(m)
    exit_pt = np.zeros((m, n))
    shell = np.zeros(m, dtype=bool)
    dropped = np.zeros(m, dtype=bool)
    live = np.ones(m, dtype=bool)
    local = np.arange(m)

    while np.any(live):
        li = local[live]
        xa = x[li]
        r = dom.dist_boundary(xa)

        if f is not None:
            s = _batch_interior_radii(batch, li, n, alpha)
            ydir = _unit_rows(batch.normals(li, n))
            y = xa + (r * s)[:, None] * ydir
            acc[li] += (r**alpha) * zeta_unit * f(y)

        theta = _unit_rows(batch.normals(li, n))
        u = batch.uniforms(li, 1)[:, 0]
        gamma = sampling.exit_radius_from_uniform(r, alpha, u)
        xnew = xa + gamma[:, None] * theta
        steps[li] += 1

        inside = dom.contains(xnew)
        out_idx = li[~inside]
        if out_idx.size:
            score[out_idx] = acc[out_idx] + g(xnew[~inside])
            exit_pt[out_idx] = xnew[~inside]
            live[out_idx] = False
        if np.any(inside):
            xin = xnew[inside]
            in_idx = li[inside]
            d = dom.dist_boundary(xin)
            in_shell = d < config.epsilon
            stop_idx = in_idx[in_shell]
            if stop_idx.size:
                proj = dom.project_boundary(xin[in_shell])
                score[stop_idx] = acc[stop_idx] + g(proj)
                exit_pt[stop_idx] = proj
                shell[stop_idx] = True
                live[stop_idx] = False
            x[in_idx[~in_shell]] = xin[~in_shell]

        capped = live & (steps >= config.max_steps)
        if np.any(capped):
            dropped |= capped
            live &= ~capped

    return score, steps, exit_pt, shell, dropped


def _validate_start(problem, config, x0):
    x0 = np.asarray(x0, dtype=float)
    if x0.shape != (problem.n,):
        raise ValueError(f"start point must have shape ({problem.n},)")
    if not problem.domain.contains(x0):
        raise ValueError("start point lies outside the domain")
    if problem.domain.dist_boundary(x0) < config.epsilon:
        raise ValueError("start point lies inside the epsilon-shell")
    return x0


def run_path(problem, config, constants, x0, path_idx: int) -> PathRealization:
    """Run a single path; bit-identical to path path_idx of estimate_point."""
    _check_consistency(problem, constants)
    x0 = _validate_start(problem, config, x0)
    ids = np.array([path_idx], dtype=np.uint64)
    sub = sampling.point_substream(x0)
    score, steps, exit_pt, shell, dropped = _walk_chunk(
        problem, config, constants, ids, x0, sub
    )
    if dropped[0]:
        raise StepCapExceeded(f"path {path_idx} exceeded {config.max_steps} steps")
    return PathRealization(
        score=float(score[0]),
        steps=int(steps[0]),
        exit_point=exit_pt[0],
        stopped_in_shell=bool(shell[0]),
    )


def estimate_point(
    problem,
    config,
    constants,
    x0,
    threads: int | None = None,
    chunk_paths: int = _CHUNK_PATHS,
) -> Estimate:
    """Monte Carlo estimate of the solution at x0 from num_paths paths.

    Scores land in a full array indexed by path and are reduced with a
    single pairwise sum, so the result is deterministic for fixed
    (seed, num_paths, config) regardless of threads or chunking."""
    _check_consistency(problem, constants)
    x0 = _validate_start(problem, config, x0)
    N = config.num_paths
    sub = sampling.point_substream(x0)

    scores = np.empty(N)
    steps = np.empty(N, dtype=np.int64)
    dropped = np.zeros(N, dtype=bool)

    def work(start, stop):
        ids = np.arange(start, stop, dtype=np.uint64)
        s, st, _, _, dr = _walk_chunk(problem, config, constants, ids, x0, sub)
        scores[start:stop] = s
        steps[start:stop] = st
        dropped[start:stop] = dr

    spans = [(a, min(a + chunk_paths, N)) for a in range(0, N, chunk_paths)]
    if threads and threads > 1 and len(spans) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(lambda ab: work(*ab), spans))
    else:
        for a, b in spans:
            work(a, b)

    keep = ~dropped
    n_kept = int(keep.sum())
    n_drop = N - n_kept
    if n_drop:
        warnings.warn(
            f"{n_drop} of {N} paths hit max_steps={config.max_steps} and were dropped",
            RuntimeWarning,
            stacklevel=2,
        )
    if n_kept == 0:
        raise RuntimeError("every path hit the step cap; no estimate available")

    kept_scores = scores[keep]
    mean = float(np.sum(kept_scores) / n_kept)
    if n_kept > 1:
        var = float(np.sum((kept_scores - mean) ** 2) / (n_kept - 1))
    else:
        var = 0.0
    return Estimate(
        mean=mean,
        variance=var,
        stderr=float(np.sqrt(var / n_kept)),
        n_paths=n_kept,
        mean_steps=float(steps[keep].mean()),
        n_dropped=n_drop,
    )


def estimate_field(
    problem,
    config,
    constants,
    points: Sequence,
    threads: int | None = None,
) -> list[Estimate]:
    """Independent estimates at several points.

    Each point uses substream = hash(point), so results are independent of
    evaluation order and duplicated points reproduce identical estimates.
    All points are validated up front."""
    _check_consistency(problem, constants)
    pts = [_validate_start(problem, config, p) for p in points]
    if threads and threads > 1 and len(pts) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(
                pool.map(lambda p: estimate_point(problem, config, constants, p), pts)
            )
    return [estimate_point(problem, config, constants, p) for p in pts]


def step_bound(n: int, alpha: float, r: float, epsilon: float):
    """Analytic walk-length diagnostic for a ball domain of radius r.

    Returns (p_star, q_star, bound) with

        pref   = (pi^(n/2) / Gamma(n/2)) * c_tilde(n, alpha)
        p_star = pref * [B(alpha/2, 1-alpha/2) - B(eps^2/r^2; alpha/2, 1-alpha/2)]
        q_star = 1 - pref * [B(alpha/2, 1-alpha/2) - B((r-eps)^2/r^2; ...)]
        bound  = 1 + q_star / (1 - p_star)^2

    bound is an upper bound on the expected number of steps; it is loose
    (the underlying comparison walk uses smaller balls than the solver)."""
    if not 0 < epsilon < r:
        raise ValueError("need 0 < epsilon < r")
    # pref * complete Beta == 1 by the reflection formula; written out the
    # long way to mirror the analytic expression
    pref = (
        np.pi ** (n / 2.0)
        / sc.gamma(n / 2.0)
        * (sc.gamma(n / 2.0) * np.sin(np.pi * alpha / 2.0) / np.pi ** (n / 2.0 + 1.0))
    )
    p = BetaParams(alpha / 2.0, 1.0 - alpha / 2.0)
    complete = beta(p.a, p.b)
    p_star = pref * (complete - inc_beta((epsilon / r) ** 2, p))
    q_star = 1.0 - pref * (complete - inc_beta(((r - epsilon) / r) ** 2, p))
    bound = 1.0 + q_star / (1.0 - p_star) ** 2
    return float(p_star), float(q_star), float(bound)


def error_metric(estimates, exact):
    """Aggregate deviation of estimates from reference values.

    Returns (scaled_error, rmse): scaled_error = (1/N) * sqrt(sum d^2) is
    the convention used in the experiment tables (it decays like the
    per-point error divided by sqrt(N)); rmse = sqrt(mean d^2) is the
    standard root mean square error."""
    est = np.asarray(estimates, dtype=float)
    ref = np.asarray(exact, dtype=float)
    if est.shape != ref.shape or est.ndim != 1 or est.size < 1:
        raise ValueError("estimates and exact must be equal-length 1-d vectors")
    d2 = np.sum((est - ref) ** 2)
    n = est.size
    return float(np.sqrt(d2) / n), float(np.sqrt(d2 / n))
