"""Nearest-neighbour distances D_q(N) of a Kronecker sequence and their count.

Two independent routes compute g(alpha, N), the number of distinct values
among D_0(N), ..., D_N(N):

* the oracle enumerates pairwise torus distances (incrementally in N, or
  directly for a single N);
* the fast route reads everything off the best approximation sequence via
  Chevallier's bracketing formula.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .arith import DistanceValue, HorizonError, Norm, Orbit, RationalVector, as_vector, format_rational
from .bestapprox import BestApproxSequence, check_horizon, compute_best_approximations

N1_CONVENTION = "g(alpha, 1) = 1: two points share one mutual distance"


class OracleMismatch(AssertionError):
    pass


@dataclass
class GapSpectrum:
    alpha: RationalVector
    norm: Norm
    N: int
    entries: list[tuple[DistanceValue, int]]

    def to_records(self) -> list[dict]:
        head = {
            "record": "spectrum",
            "alpha": [format_rational(c) for c in self.alpha.coords],
            "norm": str(self.norm),
            "N": self.N,
            "distinct": len(self.entries),
        }
        rows = [{"record": "entry", "value": str(v), "multiplicity": m} for v, m in self.entries]
        return [head] + rows

    def to_lines(self) -> str:
        return "".join(json.dumps(r, sort_keys=True) + "\n" for r in self.to_records())


@dataclass
class CountSeries:
    alpha: RationalVector
    norm: Norm
    N_lo: int
    N_hi: int
    g_values: list[tuple[int, int]] = field(default_factory=list)
    method: str = "fast"

    @property
    def window_max(self) -> int:
        return max(g for _, g in self.g_values)

    @property
    def window_min(self) -> int:
        return min(g for _, g in self.g_values)

    def to_dict(self) -> dict:
        return {
            "alpha": [format_rational(c) for c in self.alpha.coords],
            "norm": str(self.norm),
            "range": [self.N_lo, self.N_hi],
            "method": self.method,
            "window_max": self.window_max,
            "window_min": self.window_min,
            "g_values": [[n, g] for n, g in self.g_values],
        }


def _orbit_for(alpha, norm, N: int) -> Orbit:
    orbit = Orbit(as_vector(alpha), norm)
    if N < 1:
        raise ValueError("N must be positive")
    orbit.check_horizon(N)
    return orbit


def nearest_distance(alpha, norm, q: int, N: int) -> DistanceValue:
    """D_q(N) by direct enumeration over k in [0, N], k != q."""
    orbit = _orbit_for(alpha, norm, N)
    if not 0 <= q <= N:
        raise ValueError(f"q={q} outside [0, {N}]")
    res = orbit.residues(0, N + 1)
    keys = orbit.keys_from_diffs(res - res[q])
    keys = np.delete(keys, q)
    return orbit.value(keys.min())


def _nearest_keys_direct(orbit: Orbit, N: int, block: int = 256) -> np.ndarray:
    """All D_q(N) keys by blocked pairwise enumeration."""
    res = orbit.residues(0, N + 1)
    out = np.empty(N + 1, dtype=object if orbit._key_dtype is object else np.int64)
    for lo in range(0, N + 1, block):
        hi = min(lo + block, N + 1)
        keys = orbit.keys_from_diffs(res[lo:hi, None, :] - res[None, :, :])
        if keys.dtype == object:
            keys = keys.copy()
        rows = np.arange(hi - lo)
        keys[rows, rows + lo] = keys.max() + 1
        out[lo:hi] = keys.min(axis=1)
    return out


def sweep_nearest(alpha, norm, N_max: int) -> Iterator[tuple[int, np.ndarray]]:
    """Yield (N, keys of D_0(N)..D_N(N)) for N = 1..N_max.

    Point N is compared with all earlier points and every running minimum
    is updated, so one full sweep costs O(N_max^2 d). The yielded array is
    a view that the next step overwrites; copy it to keep it.
    """
    orbit = _orbit_for(alpha, norm, N_max)
    res = orbit.residues(0, N_max + 1)
    D = np.empty(N_max + 1, dtype=object if orbit._key_dtype is object else np.int64)
    for N in range(1, N_max + 1):
        keys = orbit.keys_from_diffs(res[:N] - res[N])
        if N == 1:
            D[0] = keys[0]
        else:
            np.minimum(D[:N], keys, out=D[:N])
        D[N] = keys.min()
        yield N, D[: N + 1]


def _distinct(keys: np.ndarray) -> int:
    if keys.dtype == object:
        return len(set(keys.tolist()))
    return int(np.unique(keys).size)


def oracle_counts(alpha, norm, N_lo: int, N_hi: int) -> dict[int, int]:
    """g(alpha, N) for N in [N_lo, N_hi] from the incremental oracle."""
    out = {}
    for N, keys in sweep_nearest(alpha, norm, N_hi):
        if N >= N_lo:
            out[N] = _distinct(keys)
    return out


def oracle_count(alpha, norm, N: int) -> int:
    """g(alpha, N) from a direct (non-incremental) pairwise enumeration."""
    orbit = _orbit_for(alpha, norm, N)
    return _distinct(_nearest_keys_direct(orbit, N))


def gap_spectrum(alpha, norm, N: int) -> GapSpectrum:
    orbit = _orbit_for(alpha, norm, N)
    keys = None
    for _, keys in sweep_nearest(orbit.alpha, orbit.norm, N):
        pass
    vals, counts = np.unique(np.asarray(keys.tolist(), dtype=object), return_counts=True)
    entries = [(orbit.value(v), int(c)) for v, c in zip(vals.tolist(), counts.tolist())]
    return GapSpectrum(orbit.alpha, orbit.norm, N, entries)


def count_distinct(spectrum: GapSpectrum) -> int:
    return len(spectrum.entries)


def _qs_array(seq: BestApproxSequence) -> np.ndarray:
    return np.asarray(seq.qs, dtype=object if seq.q_max >= 2**62 else np.int64)


def nearest_distance_fast(seq: BestApproxSequence, q: int, N: int) -> DistanceValue:
    """D_q(N) read off the sequence: r_m for the largest q_m <= max(q, N - q)."""
    if not 0 <= q <= N or N < 1:
        raise ValueError(f"need 0 <= q <= N and N >= 1, got q={q}, N={N}")
    j = max(q, N - q)
    check_horizon(seq, j)
    qs = seq.qs
    m = int(np.searchsorted(_qs_array(seq), j, side="right"))
    if seq.hit_zero and m == len(qs):
        raise HorizonError("orbit returned to 0 before max(q, N-q); alpha is too coarse for this N")
    return seq.terms[m - 1][1]


def nearest_keys_fast(seq: BestApproxSequence, orbit: Orbit, N: int) -> np.ndarray:
    """Vectorised fast route: keys of D_q(N) for every q in 0..N."""
    check_horizon(seq, N)
    keys = np.asarray([orbit.key(r) for r in seq.rs], dtype=object if orbit._key_dtype is object else np.int64)
    q = np.arange(N + 1)
    j = np.maximum(q, N - q)
    m = np.searchsorted(_qs_array(seq), j, side="right")
    if seq.hit_zero and (m == len(seq)).any():
        raise HorizonError("orbit returned to 0 inside the window")
    return keys[m - 1]


def chevallier_count(seq: BestApproxSequence, N: int) -> int:
    """g(alpha, N) from q_n <= N < q_{n+1} and 2 q_m <= N < 2 q_{m+1}.

    Returns n - m when 2 q_{m+1} = N + 1 and n - m + 1 otherwise. Any N up
    to the scan horizon is bracketed: an unseen q_{n+1} exceeds q_max >= N.
    """
    return int(chevallier_counts(seq, np.array([N]))[0])


def chevallier_counts(seq: BestApproxSequence, Ns) -> np.ndarray:
    Ns = np.asarray(Ns, dtype=np.int64)
    if Ns.size == 0:
        return Ns
    if Ns.min() < 1:
        raise ValueError("N must be positive")
    check_horizon(seq, int(Ns.max()))
    if seq.hit_zero:
        raise HorizonError("sequence hit zero; Chevallier's formula needs a non-periodic orbit")
    qs = _qs_array(seq)
    n = np.searchsorted(qs, Ns, side="right")
    m = np.searchsorted(2 * qs, Ns, side="right")
    nxt = np.where(m < len(qs), 2 * qs[np.minimum(m, len(qs) - 1)], -1)
    g = n - m + np.where(nxt == Ns + 1, 0, 1)
    return np.where(Ns == 1, 1, g)


def window_stats(alpha, norm, N_lo: int, N_hi: int, use_fast: bool = True,
                 seq: BestApproxSequence | None = None) -> CountSeries:
    """g over [N_lo, N_hi]; window max/min are finite-window surrogates."""
    if not 2 <= N_lo <= N_hi:
        raise ValueError(f"need 2 <= N_lo <= N_hi, got [{N_lo}, {N_hi}]")
    alpha = as_vector(alpha)
    norm = Norm.parse(norm)
    series = CountSeries(alpha, norm, N_lo, N_hi, method="fast" if use_fast else "oracle")
    if use_fast:
        if seq is None:
            seq = compute_best_approximations(alpha, norm, N_hi)
        Ns = np.arange(N_lo, N_hi + 1)
        series.g_values = list(zip(Ns.tolist(), chevallier_counts(seq, Ns).tolist()))
    else:
        series.g_values = sorted(oracle_counts(alpha, norm, N_lo, N_hi).items())
    return series


def count_table(alpha, norm, N_lo: int, N_hi: int, fast: bool = True, oracle: bool = True) -> list[dict]:
    """Rows (N, g_fast, g_oracle, match) for the CSV export."""
    alpha = as_vector(alpha)
    g_fast = g_orc = None
    if fast:
        seq = compute_best_approximations(alpha, norm, N_hi)
        Ns = np.arange(N_lo, N_hi + 1)
        g_fast = dict(zip(Ns.tolist(), chevallier_counts(seq, Ns).tolist()))
    if oracle:
        g_orc = oracle_counts(alpha, norm, N_lo, N_hi)
    rows = []
    for N in range(N_lo, N_hi + 1):
        f = g_fast[N] if g_fast is not None else None
        o = g_orc[N] if g_orc is not None else None
        match = (f == o) if (f is not None and o is not None) else None
        rows.append({"N": N, "g_fast": f, "g_oracle": o, "match": match})
    return rows


def rows_to_csv(rows: list[dict], columns=("N", "g_fast", "g_oracle", "match")) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow(["" if r[c] is None else (str(r[c]).lower() if isinstance(r[c], bool) else r[c]) for c in columns])
    return buf.getvalue()
