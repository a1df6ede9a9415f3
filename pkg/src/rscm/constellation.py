"""Signal constellations and symbol-to-point mapping rules.

Constellations are kept in natural (unnormalized) coordinates — BPSK uses
{-1,+1}, 16-QAM uses {+-1,+-3}^2 and so on; SNR normalization happens in the
bound/simulation layers through ``avg_energy``.

Point orders (these fix what the identity mapping means):

* ``bpsk@m``:  point index b in [0, 2^m); coordinate j is +1 when bit j of
  b is set, else -1 (bit 0 = coordinate 0).
* ``psk8@j``:  Cartesian product of j unit-circle 8-PSK components; symbol
  s is read in base 8 with the most significant digit driving component 0,
  and digit p selects (cos(2 pi p / 8), sin(2 pi p / 8)).
* ``qam16`` / ``qam64``: per-axis levels in increasing order
  ({-3,-1,1,3} resp. {-7,...,7}), row-major with the first axis most
  significant: index = L*a + b maps to (levels[a], levels[b]).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .spectrum import DistanceSpectrum

VALID_CONSTELLATION_IDS = "bpsk@<m>, psk8@<j>, qam16, qam64"


@dataclass(frozen=True)
class Constellation:
    """A size-q signal set in R^ell."""

    kind: str
    ell: int
    points: np.ndarray  # (q, ell) float
    points_int: np.ndarray | None = None  # exact integer coordinates, if any
    avg_energy: float = field(default=0.0)

    @property
    def q(self) -> int:
        return self.points.shape[0]

    def __repr__(self) -> str:
        return f"Constellation({self.kind!r}, q={self.q}, ell={self.ell})"


def _finish(kind: str, ell: int, pts: np.ndarray, pts_int=None) -> Constellation:
    if len(np.unique(pts, axis=0)) != len(pts):
        raise ValueError("constellation points must be distinct")
    return Constellation(
        kind=kind,
        ell=ell,
        points=pts.astype(float),
        points_int=pts_int,
        avg_energy=float((pts.astype(float) ** 2).sum(axis=1).mean()),
    )


def bpsk(m: int) -> Constellation:
    """{-1,+1}^m with q = 2^m points."""
    if not 1 <= m <= 12:
        raise ValueError(f"bpsk dimension must be in [1, 12], got {m}")
    q = 1 << m
    pts = np.array(
        [[1 if (b >> j) & 1 else -1 for j in range(m)] for b in range(q)],
        dtype=np.int64,
    )
    return _finish(f"bpsk@{m}", m, pts, pts)


def psk8(j: int = 1) -> Constellation:
    """j-fold Cartesian product of the unit-circle 8-PSK, q = 8^j points."""
    if not 1 <= j <= 4:
        raise ValueError(f"psk8 component count must be in [1, 4], got {j}")
    angles = 2.0 * np.pi * np.arange(8) / 8.0
    circle = np.stack([np.cos(angles), np.sin(angles)], axis=1)
    q = 8**j
    pts = np.empty((q, 2 * j))
    for s in range(q):
        digits = [(s // 8 ** (j - 1 - t)) % 8 for t in range(j)]
        pts[s] = np.concatenate([circle[d] for d in digits])
    return _finish(f"psk8@{j}", 2 * j, pts, None)


def qam(bits_per_axis: int) -> Constellation:
    """Square QAM with 2^bits_per_axis levels per axis, natural levels."""
    levels_n = 1 << bits_per_axis
    levels = np.arange(-(levels_n - 1), levels_n, 2, dtype=np.int64)
    q = levels_n**2
    pts = np.array([[levels[i // levels_n], levels[i % levels_n]] for i in range(q)])
    return _finish(f"qam{q}", 2, pts, pts)


def make_constellation(spec: str) -> Constellation:
    """Build a constellation from its CLI id (see VALID_CONSTELLATION_IDS)."""
    s = spec.strip().lower()
    try:
        if s.startswith("bpsk@"):
            return bpsk(int(s.split("@", 1)[1]))
        if s == "psk8":
            return psk8(1)
        if s.startswith("psk8@"):
            return psk8(int(s.split("@", 1)[1]))
        if s == "qam16":
            return qam(2)
        if s == "qam64":
            return qam(3)
    except ValueError as exc:
        raise ValueError(f"bad constellation id {spec!r}: {exc}") from exc
    raise ValueError(
        f"unknown constellation id {spec!r}; valid ids: {VALID_CONSTELLATION_IDS}"
    )


class MappingRule:
    """Per-position bijections from symbol values to point indices.

    ``tables`` has shape (n, q); row t is the permutation used at codeword
    position t.  A "specific" mapping repeats one permutation on every
    row; the random-mapping ensemble samples each row independently and
    uniformly from all q! permutations.
    """

    def __init__(self, tables: np.ndarray):
        tables = np.asarray(tables, dtype=np.int64)
        if tables.ndim != 2:
            raise ValueError("tables must be (n, q)")
        q = tables.shape[1]
        if not all(np.array_equal(np.sort(row), np.arange(q)) for row in tables):
            raise ValueError("every mapping row must be a permutation of [0, q)")
        self.tables = tables
        self._inverse: np.ndarray | None = None

    @property
    def n(self) -> int:
        return self.tables.shape[0]

    @property
    def q(self) -> int:
        return self.tables.shape[1]

    @property
    def inverse_tables(self) -> np.ndarray:
        """Point index -> symbol value, row per position."""
        if self._inverse is None:
            self._inverse = np.argsort(self.tables, axis=1)
        return self._inverse

    @classmethod
    def identity(cls, q: int, n: int) -> "MappingRule":
        return cls(np.tile(np.arange(q, dtype=np.int64), (n, 1)))

    @classmethod
    def from_table(cls, table, n: int) -> "MappingRule":
        return cls(np.tile(np.asarray(table, dtype=np.int64), (n, 1)))


def sample_random_mapping(q: int, n: int, seed) -> MappingRule:
    """n independent uniform permutations of [0, q), reproducible by seed.

    ``seed`` may be an int or an existing numpy Generator.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    tables = np.stack([rng.permutation(q) for _ in range(n)]) if n else np.empty((0, q), dtype=np.int64)
    return MappingRule(tables)


def map_word(symbols, constellation: Constellation, mapping: MappingRule) -> np.ndarray:
    """Concatenated signal vector for one codeword, length ell*n."""
    sym = np.asarray(getattr(symbols, "symbols", symbols), dtype=np.int64)
    n = len(sym)
    if mapping.n != n:
        raise ValueError(f"mapping covers {mapping.n} positions, word has {n}")
    if mapping.q != constellation.q:
        raise ValueError("mapping size does not match constellation size")
    idx = mapping.tables[np.arange(n), sym]
    return constellation.points[idx].reshape(-1)


def pair_distance_spectrum(constellation: Constellation, exact: bool | None = None) -> DistanceSpectrum:
    """Normalized enumerator of ordered point pairs by squared distance.

    Entry at delta^2 is (#ordered pairs x != y with ||x-y||^2 = delta^2)
    divided by q(q-1); the entries sum to exactly 1.  Integer-coordinate
    constellations get exact integer keys; otherwise squared distances are
    binned within a relative tolerance of 1e-9.
    """
    q = constellation.q
    if q < 2:
        raise ValueError("need at least two points")
    use_exact = constellation.points_int is not None if exact is None else exact
    denom = q * (q - 1)
    if use_exact:
        if constellation.points_int is None:
            raise ValueError("constellation has no exact integer coordinates")
        pts = constellation.points_int.astype(np.int64)
        counts: dict[int, int] = {}
        for i in range(q):
            d2 = ((pts - pts[i]) ** 2).sum(axis=1)
            for j in range(q):
                if j != i:
                    key = int(d2[j])
                    counts[key] = counts.get(key, 0) + 1
        spec = DistanceSpectrum(merge_tol=0.0)
        for key in sorted(counts):
            spec.add(key, Fraction(counts[key], denom))
        return spec

    pts = constellation.points
    d2_all = []
    for i in range(q):
        d2 = ((pts - pts[i]) ** 2).sum(axis=1)
        d2_all.extend(float(d2[j]) for j in range(q) if j != i)
    d2_all.sort()
    scale = max(d2_all[-1], 1.0)
    tol = 1e-9 * scale
    spec = DistanceSpectrum(merge_tol=tol)
    start = 0
    for i in range(1, len(d2_all) + 1):
        if i == len(d2_all) or d2_all[i] - d2_all[i - 1] > tol:
            group = d2_all[start:i]
            spec.add(float(np.mean(group)), Fraction(len(group), denom))
            start = i
    return spec
