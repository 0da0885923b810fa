"""Symmetric dependence kernels over coordinate pairs.

Each built-in kernel maps r observations in R^p to one value per unordered
coordinate pair (j, k), j < k, flattened row-major over the upper triangle:
(0,1), (0,2), ..., (0,p-1), (1,2), ...  Evaluators enumerate the full
permutation sum explicitly (6, 24, or 120 terms); since every term is a
product of signs or indicators, sums are accumulated in small integers and
divided once at the end, so batch results are exact and independent of
chunking or thread counts.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DomainError

__all__ = [
    "Kernel",
    "get_kernel",
    "register_kernel",
    "pair_count",
    "pair_indices",
    "pair_index",
    "pair_labels",
    "eval_kendall",
    "eval_spearman",
    "eval_bergsma_dassios",
    "eval_hoeffding_d",
]

_CHUNK = 4096


# ----------------------------------------------------------------------
# Coordinate-pair addressing
# ----------------------------------------------------------------------

def pair_count(p: int) -> int:
    """Number of unordered coordinate pairs, p*(p-1)/2."""
    return p * (p - 1) // 2


def pair_indices(p: int):
    """0-based (j, k) index arrays for the row-major upper triangle."""
    return np.triu_indices(p, k=1)


def pair_index(j: int, k: int, p: int) -> int:
    """Flat position of 0-based pair (j, k), j < k, in the fixed ordering."""
    if not 0 <= j < k < p:
        raise DomainError(f"need 0 <= j < k < p, got ({j}, {k}) with p={p}")
    return j * (2 * p - j - 1) // 2 + (k - j - 1)


def pair_labels(p: int):
    """1-based (j, k) labels per flat coordinate, for serialized output."""
    ju, ku = pair_indices(p)
    return [(int(j) + 1, int(k) + 1) for j, k in zip(ju, ku)]


# ----------------------------------------------------------------------
# Kernel abstraction
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class Kernel:
    """A symmetric kernel of `order` observations with vector output.

    `batch_fn(data, tuples)` evaluates the kernel at each row of `tuples`
    (an (m, order) array of 0-based row indices into `data`) and returns an
    (m, d) float64 array.  Evaluators must be pure.
    """

    name: str
    order: int
    degeneracy_order: int
    batch_fn: Callable = field(repr=False)
    output_dim_fn: Callable = field(repr=False)

    def output_dim(self, p: int) -> int:
        return self.output_dim_fn(p)

    def batch(self, data, tuples) -> np.ndarray:
        """Evaluate at many index tuples, chunked to bound temporaries."""
        data = np.ascontiguousarray(data, dtype=np.float64)
        tuples = np.asarray(tuples, dtype=np.int64)
        if tuples.ndim != 2 or tuples.shape[1] != self.order:
            raise DomainError(
                f"tuples must be (m, {self.order}), got {tuples.shape}")
        m = tuples.shape[0]
        d = self.output_dim(data.shape[1])
        out = np.empty((m, d), dtype=np.float64)
        for start in range(0, m, _CHUNK):
            stop = min(start + _CHUNK, m)
            out[start:stop] = self.batch_fn(data, tuples[start:stop])
        return out

    def __call__(self, *observations) -> np.ndarray:
        """Evaluate at a single tuple of 1-D observations."""
        if len(observations) != self.order:
            raise DomainError(
                f"{self.name} takes {self.order} observations, "
                f"got {len(observations)}")
        obs = [np.asarray(x, dtype=np.float64).ravel() for x in observations]
        p = obs[0].size
        if any(x.size != p for x in obs):
            raise DomainError("observations must have equal length")
        data = np.stack(obs, axis=0)
        tuples = np.arange(self.order, dtype=np.int64)[None, :]
        return self.batch(data, tuples)[0]

    @classmethod
    def from_pointwise(cls, name, order, fn, output_dim, degeneracy_order=0):
        """Wrap a per-tuple evaluator (r 1-D arrays -> 1-D vector)."""
        dim_fn = output_dim if callable(output_dim) else (lambda p: output_dim)

        def batch_fn(data, tuples):
            rows = [np.atleast_1d(np.asarray(
                fn(*(data[i] for i in tup)), dtype=np.float64))
                for tup in tuples]
            d = dim_fn(data.shape[1])
            if rows:
                return np.stack(rows, axis=0)
            return np.empty((0, d), dtype=np.float64)

        return cls(name=name, order=order, degeneracy_order=degeneracy_order,
                   batch_fn=batch_fn, output_dim_fn=dim_fn)


def _require_pairs(p: int):
    if p < 2:
        raise DomainError(f"pairwise kernels need p >= 2 coordinates, got {p}")


def _gathered_args(data, tuples, r):
    return [data[tuples[:, a]] for a in range(r)]


# ----------------------------------------------------------------------
# Kendall sign kernel (order 2)
# ----------------------------------------------------------------------

def _kendall_batch(data, tuples):
    p = data.shape[1]
    _require_pairs(p)
    ju, ku = pair_indices(p)
    s = np.sign(data[tuples[:, 0]] - data[tuples[:, 1]]).astype(np.int8)
    prod = np.multiply(s[:, ju], s[:, ku], dtype=np.int8)
    return prod.astype(np.float64)


# ----------------------------------------------------------------------
# Spearman three-point sign kernel (order 3)
# ----------------------------------------------------------------------

_PERMS3 = tuple(itertools.permutations(range(3)))


def _spearman_batch(data, tuples):
    p = data.shape[1]
    _require_pairs(p)
    ju, ku = pair_indices(p)
    args = _gathered_args(data, tuples, 3)
    sgn = {}
    for a in range(3):
        for b in range(a + 1, 3):
            s = np.sign(args[a] - args[b]).astype(np.int8)
            sgn[(a, b)] = s
            sgn[(b, a)] = -s
    acc = np.zeros((tuples.shape[0], ju.size), dtype=np.int16)
    for perm in _PERMS3:
        left = sgn[(perm[0], perm[1])]
        right = sgn[(perm[0], perm[2])]
        acc += np.multiply(left[:, ju], right[:, ku], dtype=np.int16)
    return acc * 0.5


# ----------------------------------------------------------------------
# Four-point concordance kernel (order 4, degenerate of order 1)
# ----------------------------------------------------------------------

_PERMS4 = tuple(itertools.permutations(range(4)))


def _quad_phi(hi_ac, lo_bd, lo_ac, hi_bd, hi_ab, lo_cd, lo_ab, hi_cd):
    up = (hi_ac < lo_bd).astype(np.int8) + (lo_ac > hi_bd).astype(np.int8)
    down = (hi_ab < lo_cd).astype(np.int8) + (lo_ab > hi_cd).astype(np.int8)
    return up - down


def _bergsma_dassios_batch(data, tuples):
    p = data.shape[1]
    _require_pairs(p)
    ju, ku = pair_indices(p)
    args = _gathered_args(data, tuples, 4)
    hi, lo = {}, {}
    for a in range(4):
        for b in range(a + 1, 4):
            hi[(a, b)] = hi[(b, a)] = np.maximum(args[a], args[b])
            lo[(a, b)] = lo[(b, a)] = np.minimum(args[a], args[b])
    acc = np.zeros((tuples.shape[0], ju.size), dtype=np.int16)
    for w, x, y, z in _PERMS4:
        phi = _quad_phi(hi[(w, y)], lo[(x, z)], lo[(w, y)], hi[(x, z)],
                        hi[(w, x)], lo[(y, z)], lo[(w, x)], hi[(y, z)])
        acc += np.multiply(phi[:, ju], phi[:, ku], dtype=np.int16)
    return acc / 24.0


# ----------------------------------------------------------------------
# Five-point rank kernel (order 5, degenerate of order 1)
# ----------------------------------------------------------------------

_PERMS5 = tuple(itertools.permutations(range(5)))


def _hoeffding_d_batch(data, tuples):
    p = data.shape[1]
    _require_pairs(p)
    ju, ku = pair_indices(p)
    args = _gathered_args(data, tuples, 5)
    ge = {}
    for a in range(5):
        for b in range(5):
            if a != b:
                ge[(a, b)] = (args[a] >= args[b]).astype(np.int8)
    acc = np.zeros((tuples.shape[0], ju.size), dtype=np.int16)
    # phi scaled by 4 keeps every term in {-1, 0, 1}; undo the 4*4 at the end
    for v, w, x, y, z in _PERMS5:
        phi4 = (ge[(v, w)] - ge[(v, x)]) * (ge[(v, y)] - ge[(v, z)])
        acc += np.multiply(phi4[:, ju], phi4[:, ku], dtype=np.int16)
    return acc / (120.0 * 16.0)


# ----------------------------------------------------------------------
# Registry
# ----------------------------------------------------------------------

_BUILTINS = {
    "kendall": Kernel("kendall", order=2, degeneracy_order=0,
                      batch_fn=_kendall_batch, output_dim_fn=pair_count),
    "spearman": Kernel("spearman", order=3, degeneracy_order=0,
                       batch_fn=_spearman_batch, output_dim_fn=pair_count),
    "bergsma-dassios": Kernel("bergsma-dassios", order=4, degeneracy_order=1,
                              batch_fn=_bergsma_dassios_batch,
                              output_dim_fn=pair_count),
    "hoeffding-d": Kernel("hoeffding-d", order=5, degeneracy_order=1,
                          batch_fn=_hoeffding_d_batch,
                          output_dim_fn=pair_count),
}

_REGISTRY = dict(_BUILTINS)


def get_kernel(name: str) -> Kernel:
    try:
        return _REGISTRY[name]
    except KeyError:
        raise DomainError(
            f"unknown kernel {name!r}; available: {sorted(_REGISTRY)}"
        ) from None


def register_kernel(kernel: Kernel, overwrite: bool = False):
    """Register a custom kernel; it inherits all estimator machinery."""
    if kernel.name in _REGISTRY and not overwrite:
        raise DomainError(f"kernel {kernel.name!r} already registered")
    _REGISTRY[kernel.name] = kernel
    return kernel


# Single-tuple conveniences --------------------------------------------------

def eval_kendall(x1, x2):
    """sign((x1_j - x2_j) * (x1_k - x2_k)) per pair, sign(0) = 0."""
    return _BUILTINS["kendall"](x1, x2)


def eval_spearman(x1, x2, x3):
    """Half-sum over all 6 argument orderings of the two-sided sign product."""
    return _BUILTINS["spearman"](x1, x2, x3)


def eval_bergsma_dassios(x1, x2, x3, x4):
    """Mean over all 24 argument orderings of the four-indicator products."""
    return _BUILTINS["bergsma-dassios"](x1, x2, x3, x4)


def eval_hoeffding_d(x1, x2, x3, x4, x5):
    """Mean over all 120 argument orderings of the rank-indicator products."""
    return _BUILTINS["hoeffding-d"](x1, x2, x3, x4, x5)
