"""Exact moments of amplitudes under the unitary-invariant state measure.

For a Haar-random pure state with amplitudes c_1, ..., c_d, the average
of c_{i_1} ... c_{i_l} conj(c_{j_1}) ... conj(c_{j_l}) equals

    (d-1)! / (d+l-1)!  *  (number of pairings sigma with i_k = j_{sigma(k)})

and any moment mixing unequal counts of c and conj(c) averages to zero
by phase invariance.  All values are exact rationals.  The l = N special
case sum over an orthonormal symmetric basis gives the operator identity
mean of rho^{tensor N} = S_N / d_N, reproduced here in occupation
coordinates as identity / d_N; it is the ground truth the quadrature
certification compares against.
"""

from __future__ import annotations

import math
from collections import Counter
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import InputFormatError
from .symmetric import sym_dim


def _validate_indices(d: int, indices: Sequence[int], name: str) -> tuple[int, ...]:
    out = tuple(int(k) for k in indices)
    for k in out:
        if not 1 <= k <= d:
            raise InputFormatError(f"{name} entry {k} outside 1..{d}")
    return out


def contraction_count(i: Sequence[int], j: Sequence[int]) -> int:
    """Number of bijections sigma of positions with i_k = j_{sigma(k)}.

    Zero unless i and j are equal as multisets, in which case the count
    is the product of the factorials of the shared multiplicities.
    """
    if len(i) != len(j):
        return 0
    multiplicities = Counter(i)
    if multiplicities != Counter(j):
        return 0
    return math.prod(math.factorial(m) for m in multiplicities.values())


def moment_value(d: int, i: Sequence[int], j: Sequence[int]) -> Fraction:
    """Exact moment <c_{i_1}..c_{i_l} conj(c_{j_1})..conj(c_{j_l})>.

    Indices are 1-based in 1..d.  Unequal lengths of i and j are allowed
    and give exactly zero.
    """
    if d < 2:
        raise InputFormatError(f"need d >= 2, got d={d}")
    i = _validate_indices(d, i, "i")
    j = _validate_indices(d, j, "j")
    if len(i) != len(j):
        return Fraction(0)
    l = len(i)
    count = contraction_count(i, j)
    if count == 0:
        return Fraction(0)
    return Fraction(math.factorial(d - 1) * count, math.factorial(d + l - 1))


def mean_tensor_power(d: int, N: int) -> np.ndarray:
    """Haar average of rho^{tensor N} in occupation coordinates: I / d_N."""
    if d < 2 or N < 1:
        raise InputFormatError(f"need d >= 2 and N >= 1, got d={d}, N={N}")
    dim = sym_dim(d, N)
    return np.eye(dim, dtype=np.float64) / dim
