"""Witness search for large g and sampling reports on doubling shortfalls."""

from __future__ import annotations

import csv
import io
import statistics
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .alphas import DEFAULT_PRIME, random_alphas
from .arith import Norm, RationalVector, format_rational
from .bestapprox import BestApproxSequence, compute_best_approximations, doubling_shortfalls
from .gaps import OracleMismatch, chevallier_counts, oracle_count


@dataclass
class Witness:
    alpha: RationalVector
    N: int
    norm: Norm
    g: int
    verified_by_oracle: bool
    sequence: BestApproxSequence | None = field(default=None, repr=False, compare=False)

    def to_dict(self) -> dict:
        return {
            "alpha": [format_rational(c) for c in self.alpha.coords],
            "N": self.N,
            "norm": str(self.norm),
            "g": self.g,
            "verified_by_oracle": self.verified_by_oracle,
        }

    def to_lines(self) -> str:
        """Sequence record lines followed by one ``witness`` record."""
        import json

        head = self.sequence.to_lines() if self.sequence is not None else ""
        rec = {"record": "witness", "N": self.N, "g": self.g, "verified_by_oracle": self.verified_by_oracle}
        return head + json.dumps(rec, sort_keys=True) + "\n"


def search_high_g(d: int, norm, target_g: int, budget: int, seed: int, N_max: int,
                  prime: int = DEFAULT_PRIME, extra_alphas: Sequence[RationalVector] = ()) -> list[Witness]:
    """Random search for (alpha, N) with g(alpha, N) >= target_g.

    Each alpha is swept over N in [1, N_max] with the fast route; the first
    N reaching that alpha's largest g is re-counted by the pairwise oracle.
    ``extra_alphas`` are examined before the random ones.
    """
    norm = Norm.parse(norm)
    if d < 1 or budget < 1:
        raise ValueError("need d >= 1 and budget >= 1")
    alphas = list(extra_alphas) + random_alphas(seed, budget, d, prime)
    Ns = np.arange(1, N_max + 1)
    bound = 2**d + 1
    found = []
    for alpha in alphas:
        seq = compute_best_approximations(alpha, norm, N_max)
        g = chevallier_counts(seq, Ns)
        best = int(g.max())
        if norm is Norm.LINF and best > bound:
            raise AssertionError(f"g={best} exceeds the Linf bound {bound} for alpha={alpha}")
        if best < target_g:
            continue
        N = int(Ns[int(np.argmax(g))])
        g_oracle = oracle_count(alpha, norm, N)
        if g_oracle != best:
            raise OracleMismatch(f"fast g={best} but oracle g={g_oracle} at alpha={alpha}, N={N}")
        found.append(Witness(alpha, N, norm, best, True, seq))
    return found


@dataclass
class SamplingReport:
    d: int
    norm: Norm
    T: int
    q_max: int
    prime: int
    seed: int
    rows: list[dict] = field(default_factory=list)

    @property
    def sample_count(self) -> int:
        return len(self.rows)

    def summary(self) -> dict:
        counts = [r["shortfalls"] for r in self.rows]
        checked = [r["checked"] for r in self.rows]
        return {
            "samples": self.sample_count,
            "fraction_with_shortfall": sum(c > 0 for c in counts) / len(counts),
            "mean_shortfalls": statistics.fmean(counts),
            "mean_checked": statistics.fmean(checked),
            "max_shortfalls": max(counts),
        }

    def to_dict(self) -> dict:
        return {
            "parameters": {
                "d": self.d,
                "norm": str(self.norm),
                "T": self.T,
                "q_max": self.q_max,
                "prime": self.prime,
                "seed": self.seed,
                "distribution": f"uniform on {{1..{self.prime - 1}}}/{self.prime} per coordinate",
                "substreams": "numpy default_rng(SeedSequence(seed).spawn(samples)[i])",
            },
            "rows": self.rows,
            "summary": self.summary(),
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        cols = ["sample", "alpha", "terms", "checked", "shortfalls"]
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n", extrasaction="ignore")
        w.writeheader()
        w.writerows(self.rows)
        return buf.getvalue()


def sample_doubling_violations(d: int, norm, T: int, samples: int, seed: int, q_max: int,
                               prime: int = DEFAULT_PRIME,
                               extra_alphas: Sequence[RationalVector] = ()) -> SamplingReport:
    """Count indices n with q_{n+T} < 2 q_n per sampled alpha (informational)."""
    norm = Norm.parse(norm)
    if samples < 1:
        raise ValueError("samples must be at least 1")
    if T < 1:
        raise ValueError("T must be positive")
    alphas = list(extra_alphas) + random_alphas(seed, samples, d, prime)
    report = SamplingReport(d, norm, T, q_max, prime, seed)
    for i, alpha in enumerate(alphas):
        seq = compute_best_approximations(alpha, norm, q_max)
        report.rows.append({
            "sample": i,
            "alpha": str(alpha),
            "terms": len(seq),
            "checked": max(0, len(seq) - T),
            "shortfalls": len(doubling_shortfalls(seq, T)),
        })
    return report
