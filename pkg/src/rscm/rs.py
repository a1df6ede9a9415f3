"""Reed-Solomon codes as polynomial-evaluation codes.

Provides the encoder, an errors-and-erasures hard-decision decoder
(syndrome key equation solved with the extended Euclidean algorithm,
error values by Forney's formula), a Chase-style soft-decision list
decoder built on top of it, and exhaustive maximum-likelihood /
sphere-list oracles for codes small enough to enumerate.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .constellation import Constellation, MappingRule, map_word
from .gf import Field

# Exhaustive oracles enumerate all q^k codewords; hard cap on codebook size.
ORACLE_LIMIT = 1 << 24


class CodeTooLargeError(ValueError):
    """Raised when an exhaustive oracle is asked to enumerate q^k > 2^24."""


@dataclass(frozen=True, order=True)
class Codeword:
    """An n-tuple of field elements that evaluates some degree-<k polynomial."""

    symbols: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.symbols)


@dataclass
class DecodeResult:
    """Outcome of one decoding attempt.

    ``metric`` is the squared Euclidean distance between the received
    vector and the mapped codeword; it is populated by the soft-decision
    decoders and left as None by the symbol-domain hard decoder.
    """

    codeword: Codeword | None
    status: str  # "decoded" | "list-empty"
    metric: float | None = None


class RsCode:
    """RS code of length n and dimension k over GF(q), q = 2^m.

    Codewords are evaluations (u(b_0), ..., u(b_{n-1})) of message
    polynomials of degree < k over n distinct evaluation points.  The
    default points are the first n nonzero elements in antilog order
    (alpha^0, alpha^1, ...), which keeps enumeration reproducible.
    The code is MDS with minimum distance n - k + 1.
    """

    def __init__(
        self,
        field: Field,
        n: int,
        k: int,
        eval_points: Sequence[int] | None = None,
    ):
        q = field.q
        if not 0 <= k <= n:
            raise ValueError(f"need 0 <= k <= n, got k={k}, n={n}")
        if n > q:
            raise ValueError(f"length n={n} exceeds field size q={q}")
        if eval_points is None:
            if n > q - 1:
                raise ValueError(
                    f"default evaluation points support n <= q-1 = {q - 1}"
                )
            eval_points = [field.alpha_power(i) for i in range(n)]
        eval_points = list(eval_points)
        if len(eval_points) != n or len(set(eval_points)) != n:
            raise ValueError("evaluation points must be n distinct elements")
        for b in eval_points:
            field._check(b)
        self.field = field
        self.n = n
        self.k = k
        self.eval_points = eval_points
        self._codebook: np.ndarray | None = None
        self._dual_mult: list[int] | None = None

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def d_min(self) -> int:
        return self.n - self.k + 1

    def __repr__(self) -> str:
        return f"RsCode(q={self.q}, n={self.n}, k={self.k})"

    # -- encoding ----------------------------------------------------------

    def encode(self, message: Sequence[int]) -> Codeword:
        """Evaluate the message polynomial at every evaluation point."""
        if len(message) != self.k:
            raise ValueError(f"message length {len(message)} != k={self.k}")
        f = self.field
        return Codeword(tuple(f.eval_poly(message, b) for b in self.eval_points))

    def codebook(self) -> np.ndarray:
        """All q^k codewords as a (q^k, n) uint16 array.

        Row index is the message read as a base-q integer with the first
        message symbol most significant.  Cached after the first call.
        """
        if self._codebook is None:
            if self.q**self.k > ORACLE_LIMIT:
                raise CodeTooLargeError(
                    f"q^k = {self.q}^{self.k} exceeds the enumeration cap 2^24"
                )
            f = self.field
            cb = np.zeros((1, self.n), dtype=np.uint16)
            unit = [0] * self.k
            for t in range(self.k):
                unit[t] = 1
                basis = self.encode(unit).symbols
                unit[t] = 0
                # all q scalings of this basis codeword
                scaled = np.empty((self.q, self.n), dtype=np.uint16)
                for s in range(self.q):
                    scaled[s] = [f.mul(s, b) for b in basis]
                cb = (cb[None, :, :] ^ scaled[:, None, :]).reshape(-1, self.n)
            self._codebook = cb
        return self._codebook

    def message_index(self, message: Sequence[int]) -> int:
        """Row of ``codebook()`` holding the codeword for this message."""
        idx = 0
        for s in message:
            idx = idx * self.q + int(s)
        return idx

    # -- syndromes ---------------------------------------------------------

    def _dual_multipliers(self) -> list[int]:
        # w_i = prod_{l != i} (b_i - b_l)^(-1); the column multipliers of the
        # dual code, which make S_j = sum_i r_i w_i b_i^j vanish on codewords.
        if self._dual_mult is None:
            f = self.field
            pts = self.eval_points
            ws = []
            for i, bi in enumerate(pts):
                prod = 1
                for l, bl in enumerate(pts):
                    if l != i:
                        prod = f.mul(prod, bi ^ bl)
                ws.append(f.inv(prod))
            self._dual_mult = ws
        return self._dual_mult

    def syndromes(self, word: Sequence[int]) -> list[int]:
        """The n-k dual-code checks; all zero iff ``word`` is a codeword."""
        if len(word) != self.n:
            raise ValueError(f"word length {len(word)} != n={self.n}")
        f = self.field
        ws = self._dual_multipliers()
        out = []
        terms = [f.mul(r, w) for r, w in zip(word, ws)]
        powers = [1] * self.n
        for _ in range(self.n - self.k):
            s = 0
            for i in range(self.n):
                s ^= f.mul(terms[i], powers[i])
                powers[i] = f.mul(powers[i], self.eval_points[i])
            out.append(s)
        return out

    def is_codeword(self, word: Sequence[int]) -> bool:
        return all(s == 0 for s in self.syndromes(word))


# -- polynomial helpers over a field (coefficient lists, lowest degree first)


def _trim(p: list[int]) -> list[int]:
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _deg(p: list[int]) -> int:
    return -1 if p == [0] else len(p) - 1


def _poly_mul(f: Field, a: list[int], b: list[int]) -> list[int]:
    if a == [0] or b == [0]:
        return [0]
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] ^= f.mul(ai, bj)
    return _trim(out)


def _poly_add(a: list[int], b: list[int]) -> list[int]:
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) ^ (b[i] if i < len(b) else 0) for i in range(n)])


def _poly_divmod(f: Field, a: list[int], b: list[int]) -> tuple[list[int], list[int]]:
    if b == [0]:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    q = [0] * max(1, len(a) - len(b) + 1)
    inv_lead = f.inv(b[-1])
    while _deg(r) >= _deg(b):
        shift = _deg(r) - _deg(b)
        c = f.mul(r[-1], inv_lead)
        q[shift] ^= c
        for j, bj in enumerate(b):
            r[j + shift] ^= f.mul(c, bj)
        _trim(r)
        if r == [0]:
            break
    return _trim(q), r


def _poly_eval(f: Field, p: list[int], x: int) -> int:
    return f.eval_poly(p, x)


def _poly_formal_deriv(p: list[int]) -> list[int]:
    # characteristic 2: even-degree terms vanish, odd-degree coefficient drops
    d = [p[i] if i % 2 == 1 else 0 for i in range(1, len(p))]
    return _trim(d) if d else [0]


# -- hard-decision errors-and-erasures decoding -----------------------------


def decode_hdd(
    code: RsCode,
    received: Sequence[int],
    erasures: Iterable[int] = (),
) -> DecodeResult:
    """Bounded-distance errors-and-erasures decoding.

    Returns the unique codeword c with
    2 * (#symbol errors outside the erasures) + #erasures <= n - k
    relative to ``received`` when such a codeword exists; otherwise a
    ``list-empty`` result.  Erased positions may hold any value.
    Requires nonzero evaluation points (the default set qualifies).
    """
    f = code.field
    n, k = code.n, code.k
    if len(received) != n:
        raise ValueError(f"received length {len(received)} != n={n}")
    ers = sorted(set(int(e) for e in erasures))
    if ers and (ers[0] < 0 or ers[-1] >= n):
        raise ValueError("erasure position out of range")
    ndk = n - k
    rho = len(ers)
    if rho > ndk:
        raise ValueError(f"{rho} erasures exceed redundancy n-k = {ndk}")
    if ndk == 0:
        # rate-1 code: every word is a codeword
        return DecodeResult(Codeword(tuple(int(r) for r in received)), "decoded")
    if any(b == 0 for b in code.eval_points):
        raise ValueError("decode_hdd requires nonzero evaluation points")

    r = [int(x) for x in received]
    for e in ers:
        r[e] = 0
    synd = code.syndromes(r)
    if all(s == 0 for s in synd):
        return DecodeResult(Codeword(tuple(r)), "decoded")

    # erasure locator Gamma(x) = prod (1 - b_e x)
    gamma = [1]
    for e in ers:
        gamma = _poly_mul(f, gamma, [1, code.eval_points[e]])
    # modified syndrome Xi = Gamma * S mod x^(n-k)
    s_poly = _trim(list(synd))
    xi = _poly_mul(f, gamma, s_poly)[:ndk]
    xi = _trim(xi)

    # Solve Lambda * Xi = Omega mod x^(n-k) with deg Lambda <= (n-k-rho)/2
    # by partial extended Euclid on (x^(n-k), Xi).
    r0 = [0] * ndk + [1]
    r1 = list(xi)
    v0, v1 = [0], [1]
    stop = (ndk + rho) / 2
    while _deg(r1) >= stop:
        quo, rem = _poly_divmod(f, r0, r1)
        r0, r1 = r1, rem
        v0, v1 = v1, _poly_add(v0, _poly_mul(f, quo, v1))
    lam, omega = v1, r1
    if lam[0] == 0 or 2 * _deg(lam) + rho > ndk:
        return DecodeResult(None, "list-empty")
    scale = f.inv(lam[0])
    lam = [f.mul(scale, c) for c in lam]
    omega = [f.mul(scale, c) for c in omega]

    psi = _poly_mul(f, lam, gamma)
    psi_deriv = _poly_formal_deriv(psi)
    positions = [
        i for i, b in enumerate(code.eval_points) if _poly_eval(f, psi, f.inv(b)) == 0
    ]
    if len(positions) != _deg(psi):
        return DecodeResult(None, "list-empty")

    ws = code._dual_multipliers()
    chat = list(r)
    for i in positions:
        xi_inv = f.inv(code.eval_points[i])
        denom = _poly_eval(f, psi_deriv, xi_inv)
        if denom == 0:
            return DecodeResult(None, "list-empty")
        y = f.mul(code.eval_points[i], f.div(_poly_eval(f, omega, xi_inv), denom))
        e_i = f.div(y, ws[i])
        if e_i == 0 and i not in ers:
            return DecodeResult(None, "list-empty")
        chat[i] ^= e_i
    if not code.is_codeword(chat):
        return DecodeResult(None, "list-empty")
    n_errors = sum(1 for i in positions if i not in ers and chat[i] != r[i])
    if 2 * n_errors + rho > ndk:
        return DecodeResult(None, "list-empty")
    return DecodeResult(Codeword(tuple(chat)), "decoded")


# -- soft-decision decoding --------------------------------------------------


def _signal_matrix(
    code: RsCode, constellation: Constellation, mapping: MappingRule
) -> np.ndarray:
    """Map every codeword; rows follow ``codebook()`` row order."""
    cb = code.codebook()
    point_idx = mapping.tables[np.arange(code.n)[None, :], cb]
    pts = constellation.points[point_idx]
    return pts.reshape(cb.shape[0], code.n * constellation.ell)


def _metrics(signals: np.ndarray, y: np.ndarray) -> np.ndarray:
    # row-wise squared Euclidean distance; keep this exact formula everywhere
    # metrics from different call sites must agree bit-for-bit
    return ((signals - y) ** 2).sum(axis=1)


def _check_oracle_size(code: RsCode) -> None:
    if code.q**code.k > ORACLE_LIMIT:
        raise CodeTooLargeError(
            f"q^k = {code.q}^{code.k} exceeds the exhaustive-oracle cap 2^24"
        )


def _lex_min_row(cb: np.ndarray, rows: np.ndarray) -> int:
    best = rows[0]
    for r in rows[1:]:
        if tuple(cb[r]) < tuple(cb[best]):
            best = r
    return int(best)


def exhaustive_ml(
    code: RsCode,
    constellation: Constellation,
    mapping: MappingRule,
    y: np.ndarray,
) -> DecodeResult:
    """Global nearest codeword by full enumeration (q^k <= 2^24).

    Metric ties are broken toward the lexicographically smallest symbol
    sequence.
    """
    _check_oracle_size(code)
    y = np.asarray(y, dtype=float).ravel()
    signals = _signal_matrix(code, constellation, mapping)
    d2 = _metrics(signals, y)
    best = d2.min()
    rows = np.flatnonzero(d2 == best)
    row = rows[0] if len(rows) == 1 else _lex_min_row(code.codebook(), rows)
    cw = Codeword(tuple(int(s) for s in code.codebook()[row]))
    return DecodeResult(cw, "decoded", float(best))


def sphere_list(
    code: RsCode,
    constellation: Constellation,
    mapping: MappingRule,
    y: np.ndarray,
    r_star: float,
) -> list[Codeword]:
    """All codewords within the closed ball of radius r_star around y,
    sorted by ascending metric (ties lexicographic)."""
    _check_oracle_size(code)
    if r_star < 0:
        raise ValueError("radius must be nonnegative")
    y = np.asarray(y, dtype=float).ravel()
    signals = _signal_matrix(code, constellation, mapping)
    d2 = _metrics(signals, y)
    rows = np.flatnonzero(d2 <= r_star**2)
    cb = code.codebook()
    order = sorted(rows, key=lambda r: (d2[r], tuple(cb[r])))
    return [Codeword(tuple(int(s) for s in cb[r])) for r in order]


def symbol_reliabilities(
    constellation: Constellation,
    mapping: MappingRule,
    y: np.ndarray,
    n: int,
    mu: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Per-position symbol candidates and reliabilities.

    Returns (candidates, gaps): ``candidates[t]`` holds the mu symbols
    whose mapped points are nearest to the t-th received sub-vector
    (nearest first); ``gaps[t]`` is the squared-distance gap between the
    second-nearest and nearest points, the usual Chase reliability.
    """
    ell = constellation.ell
    y2 = np.asarray(y, dtype=float).reshape(n, ell)
    inv = mapping.inverse_tables
    candidates = np.empty((n, mu), dtype=np.int64)
    gaps = np.empty(n)
    for t in range(n):
        d = ((constellation.points - y2[t]) ** 2).sum(axis=1)
        order = np.argsort(d, kind="stable")
        candidates[t] = inv[t][order[:mu]]
        gaps[t] = d[order[1]] - d[order[0]] if len(d) > 1 else np.inf
    return candidates, gaps


def chase_list_decode(
    code: RsCode,
    constellation: Constellation,
    mapping: MappingRule,
    y: np.ndarray,
    eta: int,
    mu: int = 2,
    eta_cap: int | None = None,
) -> list[DecodeResult]:
    """Chase-style soft-decision list decoding.

    Flips the eta least reliable symbol decisions through the mu nearest
    constellation symbols each (mu^eta test patterns), runs hard-decision
    decoding on every pattern, and returns the deduplicated candidates
    sorted by ascending Euclidean metric.  The list may be empty.
    """
    cap = eta_cap if eta_cap is not None else code.n - code.k + 2
    if not 0 <= eta <= cap:
        raise ValueError(f"eta={eta} outside [0, {cap}]")
    if mu < 1 or mu > constellation.q:
        raise ValueError(f"mu={mu} outside [1, q]")
    y = np.asarray(y, dtype=float).ravel()
    candidates, gaps = symbol_reliabilities(constellation, mapping, y, code.n, mu)
    flip_pos = np.argsort(gaps, kind="stable")[:eta]
    base = candidates[:, 0].copy()

    found: dict[tuple[int, ...], float] = {}
    for combo in itertools.product(range(mu), repeat=eta):
        word = base.copy()
        word[flip_pos] = candidates[flip_pos, list(combo)]
        res = decode_hdd(code, [int(s) for s in word])
        if res.codeword is None or res.codeword.symbols in found:
            continue
        s = map_word(res.codeword.symbols, constellation, mapping)
        found[res.codeword.symbols] = float(_metrics(s[None, :], y)[0])
    ordered = sorted(found.items(), key=lambda kv: (kv[1], kv[0]))
    return [DecodeResult(Codeword(sym), "decoded", m) for sym, m in ordered]
