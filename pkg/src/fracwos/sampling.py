"""Reproducible sampling of jump distances and interior points on balls.

The random plumbing is a vectorized Philox4x64-10 counter-based generator
(same keyed algorithm as numpy.random.Philox, validated against it in the
tests).  Streams are addressed, not seeded: a draw is a pure function of

    (seed, stream_id, substream, block position)

so paths replay identically no matter how they are batched or scheduled.
The solver keys stream_id by path index and substream by a hash of the
evaluation point, which makes whole-field runs order-independent and
duplicate points bit-identical.

Distributions implemented on top:

* ``sample_exit_radius``  - the heavy-tailed jump distance out of a ball,
  gamma = r * x^(-1/2) with x = I^(-1)(u; alpha/2, 1-alpha/2).  (The jump
  CDF is F(gamma) = 1 - I_{r^2/gamma^2}(alpha/2, 1-alpha/2); drawing u
  uniform and inverting the complement is equivalent because 1-u is also
  uniform.  The tail is P(gamma > G) ~ G^(-alpha), the stable index.)
* ``sample_interior_radius`` - the normalized radial Green density
  s^(alpha-1) w(s) / Z on (0, 1), by rejection from the proposal
  alpha * s^(alpha-1) (i.e. s = U^(1/alpha)) with acceptance probability
  w(s)/w(0+) = I_{1-s^2}(alpha/2, (n-alpha)/2), which is a provable
  envelope because w is decreasing.
* ``unit_direction`` - uniform on the sphere via normalized Gaussians.
"""

from __future__ import annotations

import hashlib

import numpy as np
import scipy.special as sc

__all__ = [
    "RngStream",
    "StreamBatch",
    "philox4x64",
    "unit_direction",
    "exit_radius_from_uniform",
    "interior_accept_prob",
    "sample_exit_radius",
    "sample_exit_point",
    "sample_interior_radius",
    "sample_interior_point",
    "point_substream",
]

# Philox4x64 round constants (Random123 / numpy.random.Philox).
_M0 = np.uint64(0xD2E7470EE14C6C93)
_M1 = np.uint64(0xCA5A826395121157)
_W0 = np.uint64(0x9E3779B97F4A7C15)
_W1 = np.uint64(0xBB67AE8584CAA73B)

_MASK32 = np.uint64(0xFFFFFFFF)
_SH32 = np.uint64(32)

# Smallest exit-radius quantile kept after inverting the incomplete Beta.
# For small alpha the inverse underflows to exactly 0 at tiny u (the true
# quantile behaves like u^(2/alpha)), which would send the jump to literal
# infinity; clamping keeps the point finite (|jump| <= r * 1e150) without
# measurably distorting the law.
_MIN_INV_BETA = 1e-300

# Rejection-cap for the interior radial sampler: 5e5 rounds of 2 proposals.
_MAX_REJECTION_ROUNDS = 500_000


def _mulhilo(a, m):
    """128-bit product of uint64 array a with uint64 scalar m -> (hi, lo)."""
    lo = a * m  # wrapping multiply
    a_lo = a & _MASK32
    a_hi = a >> _SH32
    m_lo = m & _MASK32
    m_hi = m >> _SH32
    x0 = a_lo * m_lo
    x1 = a_lo * m_hi
    x2 = a_hi * m_lo
    x3 = a_hi * m_hi
    t = x1 + (x0 >> _SH32)
    u = x2 + (t & _MASK32)
    hi = x3 + (t >> _SH32) + (u >> _SH32)
    return hi, lo


def philox4x64(c0, c1, c2, c3, k0, k1):
    """One Philox4x64-10 block per element; inputs broadcast as uint64 arrays.

    Returns the four uint64 output words of the Random123 block function.
    numpy.random.Philox emits the block at counter+1 first (it advances
    before generating); the known-answer test accounts for that offset.
    """
    c0 = np.atleast_1d(np.asarray(c0, dtype=np.uint64))
    shape = c0.shape
    c1 = np.broadcast_to(np.asarray(c1, dtype=np.uint64), shape).copy()
    c2 = np.broadcast_to(np.asarray(c2, dtype=np.uint64), shape).copy()
    c3 = np.broadcast_to(np.asarray(c3, dtype=np.uint64), shape).copy()
    k0 = np.broadcast_to(np.asarray(k0, dtype=np.uint64), shape).copy()
    k1 = np.broadcast_to(np.asarray(k1, dtype=np.uint64), shape).copy()
    c0 = c0.copy()
    for rnd in range(10):
        if rnd > 0:
            k0 = k0 + _W0
            k1 = k1 + _W1
        hi0, lo0 = _mulhilo(c0, _M0)
        hi1, lo1 = _mulhilo(c2, _M1)
        c0, c1, c2, c3 = hi1 ^ c1 ^ k0, lo1, hi0 ^ c3 ^ k1, lo0
    return c0, c1, c2, c3


def _to_unit_open(bits):
    """uint64 -> float64 uniform on the open interval (0, 1)."""
    return (bits >> np.uint64(11)) * (0.5**53) + 0.5**54


class StreamBatch:
    """Per-path Philox streams with independent block counters.

    One instance manages P streams keyed (seed, stream_id[i]) with counter
    words (position[i], substream[i], 0, 0).  Draws address a subset of
    paths by index and advance only those counters, so a path consumes
    the same randomness whether it runs alone or inside any batch.
    """

    def __init__(self, seed: int, stream_ids, substreams=0):
        stream_ids = np.atleast_1d(np.asarray(stream_ids, dtype=np.uint64))
        self.seed = np.uint64(seed)
        self.stream_ids = stream_ids
        self.substreams = np.broadcast_to(
            np.asarray(substreams, dtype=np.uint64), stream_ids.shape
        ).copy()
        self.position = np.zeros(stream_ids.shape, dtype=np.uint64)

    def __len__(self):
        return self.stream_ids.shape[0]

    def uniforms(self, idx, m: int):
        """Draw m uniforms in (0,1) for each path in idx -> (len(idx), m)."""
        idx = np.asarray(idx, dtype=np.intp)
        nblocks = -(-m // 4)
        c0 = self.position[idx, None] + np.arange(nblocks, dtype=np.uint64)[None, :]
        o = philox4x64(
            c0,
            self.substreams[idx, None],
            np.uint64(0),
            np.uint64(0),
            self.seed,
            self.stream_ids[idx, None],
        )
        self.position[idx] += np.uint64(nblocks)
        bits = np.stack(o, axis=2).reshape(idx.shape[0], 4 * nblocks)
        return _to_unit_open(bits[:, :m])

    def normals(self, idx, m: int):
        """Draw m standard normals per path in idx (Box-Muller on pairs)."""
        npairs = -(-m // 2)
        u = self.uniforms(idx, 2 * npairs)
        rad = np.sqrt(-2.0 * np.log(u[:, 0::2]))
        ang = (2.0 * np.pi) * u[:, 1::2]
        z = np.empty((u.shape[0], 2 * npairs))
        z[:, 0::2] = rad * np.cos(ang)
        z[:, 1::2] = rad * np.sin(ang)
        return z[:, :m]


class RngStream:
    """A single addressed random stream: (seed, stream_id[, substream]).

    Replays identically for equal addresses; streams with different
    addresses are independent (distinct Philox counter blocks).
    """

    def __init__(self, seed: int, stream_id: int, substream: int = 0):
        self._batch = StreamBatch(seed, [stream_id], substream)
        self._idx = np.array([0], dtype=np.intp)

    @property
    def seed(self):
        return int(self._batch.seed)

    @property
    def stream_id(self):
        return int(self._batch.stream_ids[0])

    @property
    def substream(self):
        return int(self._batch.substreams[0])

    @property
    def position(self):
        """Number of counter blocks consumed so far."""
        return int(self._batch.position[0])

    def uniforms(self, m: int):
        return self._batch.uniforms(self._idx, m)[0]

    def normals(self, m: int):
        return self._batch.normals(self._idx, m)[0]


def unit_direction(n: int, rng: RngStream, size: int | None = None):
    """Uniform direction(s) on the unit sphere S^(n-1).

    Returns shape (n,) for size=None, else (size, n).  n = 1 draws a
    fair sign; n >= 2 normalizes a Gaussian vector.
    """
    if n < 1:
        raise ValueError("dimension must be >= 1")
    k = 1 if size is None else int(size)
    if n == 1:
        u = rng.uniforms(k)
        d = np.where(u < 0.5, -1.0, 1.0)[:, None]
    else:
        z = rng.normals(k * n).reshape(k, n)
        d = z / np.linalg.norm(z, axis=1, keepdims=True)
    return d[0] if size is None else d


def exit_radius_from_uniform(r, alpha: float, u):
    """Map uniforms in (0,1) to jump distances; pure transform, broadcasts."""
    x = sc.betaincinv(alpha / 2.0, 1.0 - alpha / 2.0, u)
    x = np.maximum(x, _MIN_INV_BETA)
    return r / np.sqrt(x)


def sample_exit_radius(r: float, alpha: float, rng: RngStream, size: int | None = None):
    """Jump distance(s) gamma > r out of a ball of radius r (from its center).

    gamma = r * x^(-1/2), x = I^(-1)(u; alpha/2, 1 - alpha/2), u uniform.
    """
    if not r > 0:
        raise ValueError("ball radius must be positive")
    k = 1 if size is None else int(size)
    gamma = exit_radius_from_uniform(r, alpha, rng.uniforms(k))
    return float(gamma[0]) if size is None else gamma


def sample_exit_point(ball, alpha: float, rng: RngStream):
    """Exit point of one jump from the ball center: center + gamma * u."""
    center = np.asarray(ball.center, dtype=float)
    gamma = sample_exit_radius(ball.radius, alpha, rng)
    d = unit_direction(center.shape[0], rng)
    return center + gamma * d


def interior_accept_prob(s, n, alpha):
    """Acceptance probability w(s)/w(0+) = I_{1-s^2}(alpha/2, (n-alpha)/2).

    Regularized incomplete Beta evaluated on the complement to avoid
    cancellation near s = 1.  Broadcasts over s."""
    return sc.betainc(alpha / 2.0, (n - alpha) / 2.0, 1.0 - s * s)


def sample_interior_radius(n: int, alpha: float, rng: RngStream, size: int | None = None):
    """Radial coordinate s in (0,1) of the interior (source) sample.

    Density s^(alpha-1) w(s) / Z.  Rejection sampling: each round draws one
    counter block (two proposal/acceptance pairs); a sample takes the first
    accepted proposal.  The round cap (5e5 rounds, 1e6 proposals) is a
    diagnostic safeguard, never reached for supported (n, alpha).
    """
    if n < 1:
        raise ValueError("dimension must be >= 1")
    if not 0 < alpha < 2 or alpha >= n + 2:  # alpha < n required by w
        raise ValueError("alpha outside supported range")
    if alpha >= n:
        raise ValueError("interior radial law requires alpha < n")
    k = 1 if size is None else int(size)
    out = np.empty(k)
    pending = np.arange(k)
    inv_alpha = 1.0 / alpha
    for _ in range(_MAX_REJECTION_ROUNDS):
        if pending.size == 0:
            break
        u = rng.uniforms(4 * pending.size).reshape(pending.size, 4)
        accepted = np.full(pending.size, False)
        for j in (0, 2):
            s = u[:, j] ** inv_alpha
            ok = (~accepted) & (u[:, j + 1] <= interior_accept_prob(s, n, alpha))
            out[pending[ok]] = s[ok]
            accepted |= ok
        pending = pending[~accepted]
    if pending.size:
        raise RuntimeError("interior radius rejection exceeded the proposal cap")
    return float(out[0]) if size is None else out


def sample_interior_point(ball, n: int, alpha: float, rng: RngStream):
    """Interior (source) sample of one jump: center + (radius * s) * u."""
    center = np.asarray(ball.center, dtype=float)
    if center.shape[0] != n:
        raise ValueError("ball center dimension disagrees with n")
    s = sample_interior_radius(n, alpha, rng)
    d = unit_direction(n, rng)
    return center + (ball.radius * s) * d


def point_substream(x) -> int:
    """Stable 64-bit substream label for an evaluation point.

    Hashes the float64 bytes of the coordinates (with -0.0 normalized to
    +0.0) so that equal points always share their random streams.
    """
    x = np.ascontiguousarray(np.asarray(x, dtype=float) + 0.0)
    h = hashlib.blake2b(x.tobytes(), digest_size=8)
    return int.from_bytes(h.digest(), "little")
