"""Exact distance enumerators.

Three related objects live here:

* the symbol-level Hamming weight spectrum of an MDS [n, k] code over
  GF(q), in exact big-integer arithmetic;
* the random-mapping ensemble average of the squared-Euclidean pair
  spectrum, obtained by composing the weight spectrum with the
  constellation pair enumerator (weights of ordered codeword pairs at
  Hamming distance d spread over d independent uniform symbol relabelings);
* a brute-force pair spectrum for a specific small codebook, used as the
  oracle the ensemble result is checked against.

Counts stay exact (int / Fraction) end to end; conversion to floats is
deferred to the bound evaluators, which work in the log domain.
"""

from __future__ import annotations

import math
from bisect import bisect_left, insort
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

import numpy as np


class DistanceSpectrum:
    """Map from squared Euclidean distance to an ordered-pair count.

    Keys are exact (int/Fraction) when the geometry allows, otherwise
    floats that get merged within ``merge_tol`` on insertion.  Counts are
    ints or Fractions and are never coerced to float here.
    """

    def __init__(self, entries=None, merge_tol: float = 0.0):
        self.merge_tol = float(merge_tol)
        self._entries: dict = {}
        self._float_keys: list[float] = []  # sorted, only for binned insertion
        if entries:
            for key, count in entries.items() if hasattr(entries, "items") else entries:
                self.add(key, count)

    def add(self, key, count) -> None:
        if count == 0:
            return
        if key <= 0:
            raise ValueError(f"squared distance must be positive, got {key}")
        if self.merge_tol > 0.0 and isinstance(key, float):
            i = bisect_left(self._float_keys, key)
            for j in (i - 1, i):
                if 0 <= j < len(self._float_keys) and abs(self._float_keys[j] - key) <= self.merge_tol:
                    self._entries[self._float_keys[j]] += count
                    return
            insort(self._float_keys, key)
            self._entries[key] = count
        else:
            self._entries[key] = self._entries.get(key, 0) + count

    def items(self) -> list[tuple]:
        return sorted(self._entries.items(), key=lambda kv: float(kv[0]))

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self) -> Iterator:
        return iter(self.items())

    def __contains__(self, key) -> bool:
        return key in self._entries

    def get(self, key, default=0):
        return self._entries.get(key, default)

    def total(self):
        """Sum of all counts (exact)."""
        return sum(self._entries.values())

    def min_delta_sq(self):
        if not self._entries:
            raise ValueError("empty spectrum")
        return min(self._entries, key=float)

    def scaled(self, factor) -> "DistanceSpectrum":
        out = DistanceSpectrum(merge_tol=self.merge_tol)
        for key, count in self._entries.items():
            out.add(key, count * factor)
        return out

    def convolve(self, other: "DistanceSpectrum", merge_tol: float | None = None) -> "DistanceSpectrum":
        """Product of enumerators: keys add, counts multiply."""
        tol = self.merge_tol if merge_tol is None else merge_tol
        out = DistanceSpectrum(merge_tol=tol)
        for k1, c1 in self.items():
            for k2, c2 in other.items():
                out.add(k1 + k2, c1 * c2)
        return out

    def log_terms(self) -> tuple[np.ndarray, np.ndarray]:
        """(delta, ln count) arrays for the log-domain bound evaluators."""
        deltas, ln_counts = [], []
        for key, count in self.items():
            deltas.append(math.sqrt(float(key)))
            if isinstance(count, Fraction):
                ln_counts.append(math.log(count.numerator) - math.log(count.denominator))
            else:
                ln_counts.append(math.log(count))
        return np.asarray(deltas), np.asarray(ln_counts)

    def to_json_entries(self) -> dict[str, str | int]:
        """Serializable form; Fractions become "num/den" strings."""
        out = {}
        for key, count in self.items():
            kstr = str(key) if not isinstance(key, float) else repr(key)
            if isinstance(count, Fraction):
                out[kstr] = f"{count.numerator}/{count.denominator}"
            else:
                out[kstr] = int(count)
        return out


@dataclass(frozen=True)
class HammingSpectrum:
    """Symbol-level weight distribution of an MDS [n, k] code over GF(q)."""

    n: int
    k: int
    q: int
    counts: dict[int, int]  # weight -> exact number of codewords

    @property
    def d_min(self) -> int:
        return self.n - self.k + 1

    def total(self) -> int:
        return sum(self.counts.values())


def hamming_spectrum(n: int, k: int, q: int) -> HammingSpectrum:
    """Exact weight distribution of an MDS [n, k] code over GF(q).

    W_i = C(n,i) (q-1) sum_{j=0}^{i-d} (-1)^j C(i-1,j) q^(i-j-d) for
    i >= d = n-k+1, evaluated in big-integer arithmetic.  In
    characteristic-2 native form the alternating sum is kept signed and
    verified nonnegative.
    """
    if not 1 <= k <= n <= q:
        raise ValueError(f"need 1 <= k <= n <= q, got n={n}, k={k}, q={q}")
    d = n - k + 1
    counts: dict[int, int] = {}
    for i in range(d, n + 1):
        acc = 0
        for j in range(i - d + 1):
            term = math.comb(i - 1, j) * q ** (i - j - d)
            acc += -term if j % 2 else term
        w = math.comb(n, i) * (q - 1) * acc
        if w < 0:
            raise ArithmeticError(f"negative weight count at i={i}")
        if w:
            counts[i] = w
    spec = HammingSpectrum(n=n, k=k, q=q, counts=counts)
    if 1 + spec.total() != q**k:
        raise ArithmeticError("weight counts do not sum to the codebook size")
    return spec


def ensemble_distance_spectrum(
    weights: HammingSpectrum, pair_spectrum: DistanceSpectrum
) -> DistanceSpectrum:
    """Average squared-distance pair spectrum under uniform random mapping.

    Two codewords at Hamming distance d land at squared Euclidean distance
    distributed as the d-fold sum of independent draws from the
    constellation pair enumerator, so the ensemble enumerator is
    sum_d W_d * (pair_spectrum)^d.  Powers are built by iterated
    convolution; float keys are binned with absolute tolerance 1e-9 * d.
    """
    total = pair_spectrum.total()
    if total != 1:
        raise ValueError(f"pair spectrum entries must sum to 1, got {total}")
    binned = pair_spectrum.merge_tol > 0.0
    out = DistanceSpectrum(merge_tol=pair_spectrum.merge_tol)
    power = pair_spectrum
    for d in range(1, weights.n + 1):
        if d > 1:
            power = power.convolve(pair_spectrum, merge_tol=(1e-9 * d if binned else 0.0))
        w = weights.counts.get(d, 0)
        if w:
            for key, count in power.items():
                out.add(key, count * w)
    return out


def codebook_distance_spectrum(code, constellation, mapping) -> DistanceSpectrum:
    """Brute-force pair spectrum of one specific mapped codebook.

    Counts every ordered codeword pair once and divides by q^k, giving the
    average number of pairs per transmitted codeword; entries sum to
    q^k - 1.  Distance invariance is not assumed: the full double sum is
    evaluated.  Guarded to q^k <= 2^20.
    """
    size = code.q**code.k
    if size > 1 << 20:
        raise ValueError(f"q^k = {size} exceeds the pair-enumeration cap 2^20")
    if size == 1:
        return DistanceSpectrum()

    from .rs import _signal_matrix  # deferred: rs imports constellation

    exact = constellation.points_int is not None
    if exact:
        cb = code.codebook()
        point_idx = mapping.tables[np.arange(code.n)[None, :], cb]
        pts = constellation.points_int[point_idx].reshape(size, -1).astype(np.int64)
        tallies: dict[int, int] = {}
        for i in range(size):
            d2 = ((pts - pts[i]) ** 2).sum(axis=1)
            keys, cnts = np.unique(d2, return_counts=True)
            for key, c in zip(keys, cnts):
                if key:
                    tallies[int(key)] = tallies.get(int(key), 0) + int(c)
        spec = DistanceSpectrum(merge_tol=0.0)
        for key in sorted(tallies):
            spec.add(key, Fraction(tallies[key], size))
        return spec

    signals = _signal_matrix(code, constellation, mapping)
    vals: list[float] = []
    for i in range(size):
        d2 = ((signals - signals[i]) ** 2).sum(axis=1)
        d2[i] = -1.0
        vals.extend(float(v) for v in d2 if v > 0.0)
    vals.sort()
    # cluster by gaps; atoms of the underlying geometry are far wider apart
    # than float noise, so this is order-independent
    tol = 1e-6
    spec = DistanceSpectrum(merge_tol=tol)
    start = 0
    for i in range(1, len(vals) + 1):
        if i == len(vals) or vals[i] - vals[i - 1] > tol:
            group = vals[start:i]
            spec.add(float(np.mean(group)), Fraction(len(group), size))
            start = i
    return spec
