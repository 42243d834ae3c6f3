"""Counter-based random streams.

Every random number is a pure function of ``(seed, index)``, so paths are
reproducible bit-for-bit and replicate batches can be generated in any order
or in parallel.

Stream definition (fixed, do not change without bumping the package major
version):

* ``splitmix64(z) = fmix64(z + GOLDEN)`` with the SplitMix64 finalizer.
* Replicate seeds: ``derive_seed(seed, r) = splitmix64(seed ^ splitmix64(r))``.
* Uniform ``j`` of the stream keyed by ``s``: the top 53 bits of
  ``fmix64(s + (j + 1) * GOLDEN)`` scaled to ``[0, 1)``, i.e. the ``j``-th
  output of a SplitMix64 generator started at state ``s``.
* Gaussians: Box-Muller on consecutive uniform pairs ``(u0, u1)``:
  ``sqrt(-2 log(1 - u0)) * (cos(2 pi u1), sin(2 pi u1))``.
"""

from __future__ import annotations

import numpy as np

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_TWO_M53 = 1.0 / 9007199254740992.0
MASK64 = (1 << 64) - 1


def fmix64(z):
    """SplitMix64 output finalizer, elementwise on ``uint64`` arrays."""
    z = np.asarray(z, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = (z ^ (z >> _S30)) * _M1
        z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


def splitmix64(z):
    with np.errstate(over="ignore"):
        return fmix64(np.asarray(z, dtype=np.uint64) + GOLDEN)


def derive_seed(seed: int, replicate):
    """Seed of replicate ``r`` in a batch keyed by ``seed``.

    ``replicate`` may be an int or an integer array; the result has the same
    shape (``np.uint64``).
    """
    s = np.uint64(int(seed) & MASK64)
    r = np.asarray(replicate, dtype=np.uint64)
    return splitmix64(s ^ splitmix64(r))


def replicate_seeds(seed: int, start: int, stop: int) -> np.ndarray:
    return derive_seed(seed, np.arange(start, stop, dtype=np.uint64))


def uniforms(seeds, count: int) -> np.ndarray:
    """``(len(seeds), count)`` array of uniforms in ``[0, 1)``."""
    seeds = np.atleast_1d(np.asarray(seeds, dtype=np.uint64))
    j = np.arange(1, count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        state = seeds[:, None] + j[None, :] * GOLDEN
    bits = fmix64(state) >> _S11
    return bits.astype(np.float64) * _TWO_M53


def normals(seeds, count: int) -> np.ndarray:
    """``(len(seeds), count)`` standard normals via Box-Muller."""
    pairs = (count + 1) // 2
    u = uniforms(seeds, 2 * pairs)
    radius = np.sqrt(-2.0 * np.log1p(-u[:, 0::2]))
    angle = 2.0 * np.pi * u[:, 1::2]
    z = np.empty((u.shape[0], 2 * pairs))
    z[:, 0::2] = radius * np.cos(angle)
    z[:, 1::2] = radius * np.sin(angle)
    return z[:, :count]
