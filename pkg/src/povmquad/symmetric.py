"""Symmetric subspace of N copies of a d-level system.

The totally symmetric subspace of (C^d)^{tensor N} has dimension
d_N = C(N+d-1, d-1) and an orthonormal occupation-number basis labelled
by tuples n = (n_1, ..., n_d) with sum N.  A product state
|phi>^{tensor N} lies inside the subspace; its occupation coordinates
are sqrt(N!/prod n_i!) * prod c_i^{n_i} where c are the amplitudes of
|phi>.  Everything downstream (quadrature certification, POVM checks,
fidelity formulas) runs in these coordinates, so the d^N full space is
only ever materialised by the brute-force reference operations here.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import InputFormatError, ResourceLimitError
from .limits import full_space_guard

# Normalisation slack accepted on state amplitudes.
NORM_TOL = 1e-12


@dataclass(frozen=True)
class PureState:
    """Unit vector of complex amplitudes in C^d, d >= 2.

    Amplitudes are copied and frozen on construction; the squared norm
    must equal 1 within NORM_TOL.
    """

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=np.complex128).reshape(-1).copy()
        if amps.size < 2:
            raise InputFormatError(f"state dimension must be >= 2, got {amps.size}")
        if not np.all(np.isfinite(amps.view(np.float64))):
            raise InputFormatError("state amplitudes must be finite")
        norm_sq = float(np.vdot(amps, amps).real)
        if abs(norm_sq - 1.0) > NORM_TOL:
            raise InputFormatError(
                f"state norm^2 deviates from 1 by {abs(norm_sq - 1.0):.3e} (tol {NORM_TOL:g})"
            )
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def d(self) -> int:
        return self.amplitudes.size

    @classmethod
    def basis_state(cls, d: int, index: int) -> "PureState":
        """Computational basis vector |index> in C^d."""
        if not 0 <= index < d:
            raise InputFormatError(f"basis index {index} outside [0, {d})")
        amps = np.zeros(d, dtype=np.complex128)
        amps[index] = 1.0
        return cls(amps)


def sym_dim(d: int, N: int) -> int:
    """Dimension C(N+d-1, d-1) of the symmetric subspace."""
    if d < 1 or N < 0:
        raise InputFormatError(f"need d >= 1 and N >= 0, got d={d}, N={N}")
    return math.comb(N + d - 1, d - 1)


@lru_cache(maxsize=None)
def occupation_basis(d: int, N: int) -> tuple[tuple[int, ...], ...]:
    """Occupation tuples (n_1, ..., n_d), sum N, lexicographically descending."""
    if d < 1 or N < 0:
        raise InputFormatError(f"need d >= 1 and N >= 0, got d={d}, N={N}")
    if d == 1:
        return ((N,),)
    out = []
    for first in range(N, -1, -1):
        for rest in occupation_basis(d - 1, N - first):
            out.append((first, *rest))
    return tuple(out)


@lru_cache(maxsize=None)
def _embedding_coefficients(d: int, N: int) -> np.ndarray:
    """sqrt(N!/prod n_i!) for each occupation tuple, in basis order."""
    basis = occupation_basis(d, N)
    fact_n = math.factorial(N)
    coeffs = [math.sqrt(fact_n / math.prod(math.factorial(k) for k in n)) for n in basis]
    arr = np.asarray(coeffs, dtype=np.float64)
    arr.setflags(write=False)
    return arr


def sym_embed_batch(amplitudes: np.ndarray, N: int) -> np.ndarray:
    """Occupation-basis coordinates of |phi>^{tensor N} for many states.

    Args:
        amplitudes: complex array of shape (batch, d), rows unit norm.
        N: number of copies, >= 1.

    Returns:
        Complex array of shape (batch, d_N).
    """
    amps = np.asarray(amplitudes, dtype=np.complex128)
    if amps.ndim != 2:
        raise InputFormatError("amplitudes must have shape (batch, d)")
    d = amps.shape[1]
    if N < 1:
        raise InputFormatError(f"need N >= 1, got N={N}")
    basis = occupation_basis(d, N)
    coeffs = _embedding_coefficients(d, N)
    out = np.empty((amps.shape[0], len(basis)), dtype=np.complex128)
    for k, n in enumerate(basis):
        cols = np.ones(amps.shape[0], dtype=np.complex128)
        for i, power in enumerate(n):
            if power:
                cols = cols * amps[:, i] ** power
        out[:, k] = coeffs[k] * cols
    return out


def sym_embed(state: PureState, N: int) -> np.ndarray:
    """Occupation-basis coordinates of |state>^{tensor N}, shape (d_N,)."""
    return sym_embed_batch(state.amplitudes[None, :], N)[0]


def overlap(a: PureState, b: PureState) -> complex:
    """Inner product <a|b>."""
    if a.d != b.d:
        raise InputFormatError(f"dimension mismatch: {a.d} vs {b.d}")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def fidelity(a: PureState, b: PureState) -> float:
    """Squared overlap |<a|b>|^2."""
    return abs(overlap(a, b)) ** 2


def symmetric_projector_full(d: int, M: int) -> np.ndarray:
    """Projector onto the symmetric subspace of (C^d)^{tensor M}.

    Built literally as the average of all M! permutation operators on
    the d^M-dimensional full space; serves as the reference object for
    everything the occupation-basis fast paths claim.
    """
    if d < 2 or M < 1:
        raise InputFormatError(f"need d >= 2 and M >= 1, got d={d}, M={M}")
    dim = d**M
    guard = full_space_guard()
    if dim > guard:
        raise ResourceLimitError(
            f"full-space dimension d^M = {dim} exceeds guard {guard}"
        )
    # digits[x] = (x_1, ..., x_M) base-d expansion, most significant first,
    # matching the kron convention |x_1> kron ... kron |x_M>.
    idx = np.arange(dim)
    digits = np.empty((dim, M), dtype=np.int64)
    rem = idx.copy()
    for pos in range(M - 1, -1, -1):
        digits[:, pos] = rem % d
        rem //= d
    place = d ** np.arange(M - 1, -1, -1)
    proj = np.zeros((dim, dim), dtype=np.float64)
    inv_fact = 1.0 / math.factorial(M)
    for perm in itertools.permutations(range(M)):
        target = digits[:, perm] @ place
        proj[target, idx] += inv_fact
    return proj


def haar_random_states(d: int, count: int, rng: np.random.Generator | int) -> np.ndarray:
    """count rows of Haar-distributed unit vectors in C^d.

    Each state is d i.i.d. standard complex Gaussians, normalised.
    """
    if d < 2 or count < 1:
        raise InputFormatError(f"need d >= 2 and count >= 1, got d={d}, count={count}")
    gen = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    z = gen.standard_normal((count, d)) + 1j * gen.standard_normal((count, d))
    z /= np.linalg.norm(z, axis=1, keepdims=True)
    return z


def haar_random_state(d: int, seed: int) -> PureState:
    """One Haar-distributed pure state, reproducible from the seed."""
    return PureState(haar_random_states(d, 1, seed)[0])


def haar_random_unitary(d: int, rng: np.random.Generator | int) -> np.ndarray:
    """Haar-distributed d x d unitary via QR of a complex Gaussian matrix.

    The R diagonal phases are divided out so the distribution is exactly
    Haar rather than QR-convention dependent.
    """
    if d < 2:
        raise InputFormatError(f"need d >= 2, got d={d}")
    gen = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    z = (gen.standard_normal((d, d)) + 1j * gen.standard_normal((d, d))) / math.sqrt(2.0)
    q, r = np.linalg.qr(z)
    phases = np.diagonal(r).copy()
    phases /= np.abs(phases)
    return q * phases
