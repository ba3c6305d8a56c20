"""Best Diophantine approximations on the torus and their growth checks."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, TextIO

import numpy as np

from .arith import (
    DistanceValue,
    HorizonError,
    Norm,
    Orbit,
    RationalVector,
    as_vector,
    format_rational,
    parse_rational,
)

CHUNK = 1 << 16

FOR_ALL = "for_all"
EXISTS_INFINITELY = "exists_infinitely"


class SequenceTooShort(ValueError):
    pass


@dataclass
class BestApproxSequence:
    alpha: RationalVector
    norm: Norm
    q_max: int
    terms: list[tuple[int, DistanceValue]]
    hit_zero: bool = False

    @property
    def qs(self) -> list[int]:
        return [q for q, _ in self.terms]

    @property
    def rs(self) -> list[DistanceValue]:
        return [r for _, r in self.terms]

    def __len__(self) -> int:
        return len(self.terms)

    @classmethod
    def from_terms(cls, qs, rs=None, norm: Norm = Norm.LINF, alpha=None, q_max=None) -> "BestApproxSequence":
        """Build a sequence from raw values (tests and hand-made examples).

        Without distances every r_n is a placeholder 1/q_n, which keeps
        the monotonicity invariants intact.
        """
        qs = [int(q) for q in qs]
        if rs is None:
            rs = [Fraction(1, q) for q in qs]
        terms = [(q, r if isinstance(r, DistanceValue) else DistanceValue(norm, Fraction(r))) for q, r in zip(qs, rs)]
        alpha = as_vector(alpha) if alpha is not None else RationalVector.of(0)
        return cls(alpha, norm, q_max if q_max is not None else qs[-1], terms)

    def check_invariants(self) -> None:
        qs, rs = self.qs, self.rs
        if not qs or qs[0] != 1:
            raise AssertionError("best approximation sequence must start at q_1 = 1")
        for i in range(1, len(qs)):
            if not qs[i] > qs[i - 1]:
                raise AssertionError(f"q not strictly increasing at n={i + 1}")
            if not rs[i] < rs[i - 1]:
                raise AssertionError(f"r not strictly decreasing at n={i + 1}")
        if qs[-1] > self.q_max:
            raise AssertionError("term beyond the scan horizon")
        if self.hit_zero and rs[-1].value != 0:
            raise AssertionError("hit_zero set but last distance is positive")

    # line-oriented record format: a header line, then one JSON object per term
    def dump(self, fh: TextIO) -> None:
        fh.write(json.dumps(self.header(), sort_keys=True) + "\n")
        for q, r in self.terms:
            fh.write(json.dumps(term_record(q, r), sort_keys=True) + "\n")

    def header(self) -> dict:
        return {
            "record": "header",
            "alpha": [format_rational(c) for c in self.alpha.coords],
            "norm": str(self.norm),
            "q_max": self.q_max,
            "hit_zero": self.hit_zero,
            "terms": len(self.terms),
        }

    def to_lines(self) -> str:
        import io

        buf = io.StringIO()
        self.dump(buf)
        return buf.getvalue()

    @classmethod
    def load(cls, lines: Iterable[str]) -> "BestApproxSequence":
        header = None
        terms = []
        for line in lines:
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            if rec.get("record") == "header":
                header = rec
                continue
            if header is None:
                raise ValueError("sequence record before header")
            norm = Norm.parse(rec["norm"])
            terms.append((int(rec["q"]), DistanceValue(norm, Fraction(int(rec["r_numerator"]), int(rec["r_denominator"])))))
        if header is None:
            raise ValueError("missing sequence header")
        alpha = RationalVector(tuple(parse_rational(c) for c in header["alpha"]))
        return cls(alpha, Norm.parse(header["norm"]), int(header["q_max"]), terms, bool(header["hit_zero"]))


def term_record(q: int, r: DistanceValue) -> dict:
    return {
        "record": "term",
        "q": q,
        "r_numerator": r.value.numerator,
        "r_denominator": r.value.denominator,
        "norm": str(r.norm),
    }


@dataclass
class InequalityReport:
    name: str
    shift: int
    quantifier: str
    checked_range: tuple[int, int]
    violations: list[int] = field(default_factory=list)
    witnesses: list[int] = field(default_factory=list)
    unchecked: tuple[int, int] | None = None

    @property
    def checked(self) -> int:
        lo, hi = self.checked_range
        return max(0, hi - lo + 1)

    @property
    def passed(self) -> bool:
        if self.quantifier == FOR_ALL:
            return not self.violations
        return bool(self.witnesses)

    def to_dict(self) -> dict:
        out = {
            "name": self.name,
            "shift": self.shift,
            "quantifier": self.quantifier,
            "checked_range": list(self.checked_range),
            "checked": self.checked,
            "passed": self.passed,
            "violations": self.violations,
            "unchecked": list(self.unchecked) if self.unchecked else None,
        }
        if self.quantifier == EXISTS_INFINITELY:
            out["witnesses"] = self.witnesses
            out["witness_density"] = len(self.witnesses) / self.checked if self.checked else 0.0
        return out


def orbit_distance(alpha, q: int, norm) -> DistanceValue:
    """dist(0, q*alpha mod Z^d)."""
    if q < 1:
        raise ValueError("q must be positive")
    orbit = Orbit(as_vector(alpha), norm)
    return orbit.value(orbit.key_of(q))


def compute_best_approximations(alpha, norm, q_max: int, *, guard: bool = True) -> BestApproxSequence:
    """Record minima of q -> dist(0, q*alpha) for q = 1..q_max.

    A linear scan with a running minimum. Records are strict, so exact ties
    never start a new term. With ``guard`` the horizon must stay below the
    orbit period; with ``guard=False`` the scan stops at the first exact
    return to zero and sets ``hit_zero``.
    """
    alpha = as_vector(alpha)
    orbit = Orbit(alpha, norm)
    if q_max < 1:
        raise ValueError("q_max must be positive")
    if orbit.period == 1:
        raise ValueError(f"alpha={alpha} is integral: every orbit point is 0")
    if guard:
        orbit.check_horizon(q_max)

    qs: list[int] = []
    keys: list[int] = []
    running = None
    hit_zero = False
    start = 1
    while start <= q_max and not hit_zero:
        count = min(CHUNK, q_max - start + 1)
        k = orbit.keys_from_zero(start, count)
        prefix = np.minimum.accumulate(k)
        if running is None:
            prev = np.empty_like(k)
            prev[0] = k[0] + 1
            prev[1:] = prefix[:-1]
        else:
            prev = np.minimum(np.concatenate(([running], prefix[:-1])).astype(k.dtype), running)
        idx = np.flatnonzero(k < prev)
        for i in idx:
            qs.append(start + int(i))
            keys.append(int(k[i]))
            if keys[-1] == 0:
                hit_zero = True
                break
        running = keys[-1]
        start += count

    terms = [(q, orbit.value(key)) for q, key in zip(qs, keys)]
    return BestApproxSequence(alpha, orbit.norm, q_max, terms, hit_zero)


def _require(seq: BestApproxSequence, count: int, what: str) -> None:
    if len(seq) < count:
        raise SequenceTooShort(f"{what} needs at least {count} terms, sequence has {len(seq)}")


def verify_sum_inequality(seq: BestApproxSequence, shift: int, quantifier: str = FOR_ALL) -> InequalityReport:
    """Check q_{n+shift} >= q_{n+1} + q_n over every n the horizon allows."""
    if shift < 1:
        raise ValueError("shift must be positive")
    if quantifier not in (FOR_ALL, EXISTS_INFINITELY):
        raise ValueError(f"unknown quantifier {quantifier!r}")
    _require(seq, shift + 2, "sum inequality")
    q = [None] + seq.qs  # 1-based
    last = len(seq) - shift
    report = InequalityReport(f"sum_shift_{shift}", shift, quantifier, (1, last), unchecked=(last + 1, len(seq)))
    for n in range(1, last + 1):
        ok = q[n + shift] >= q[n + 1] + q[n]
        if quantifier == FOR_ALL and not ok:
            report.violations.append(n)
        elif quantifier == EXISTS_INFINITELY and ok:
            report.witnesses.append(n)
    return report


_L2_CONTACT = {1: 2, 2: 6, 3: 12, 4: 24}


def contact_number(norm, d: int) -> int | None:
    """Known contact (kissing) numbers; ``None`` means unknown here."""
    norm = Norm.parse(norm)
    if d < 1:
        raise ValueError("dimension must be positive")
    if norm is Norm.LINF:
        return 3**d - 1
    if norm is Norm.L2:
        return _L2_CONTACT.get(d)
    return None


def doubling_index(seq: BestApproxSequence) -> int:
    """Least T with q_{n+T} >= 2 q_n for every n the horizon allows."""
    _require(seq, 2, "doubling index")
    q = seq.qs
    T = 1
    while T < len(q):
        if all(q[i + T] >= 2 * q[i] for i in range(len(q) - T)):
            return T
        T += 1
    # no pair left to check: vacuously true at the sequence length
    return T


def doubling_shortfalls(seq: BestApproxSequence, T: int) -> list[int]:
    """1-based indices n with q_{n+T} < 2 q_n."""
    q = seq.qs
    return [i + 1 for i in range(len(q) - T) if q[i + T] < 2 * q[i]]


def halving_check(seq: BestApproxSequence, K: int) -> InequalityReport:
    """Check r_{n+K} <= r_n / 2; on squares (4 r^2_{n+K} <= r^2_n) for L2."""
    if K < 1:
        raise ValueError("K must be positive")
    _require(seq, K + 1, "halving check")
    r = [None] + [v.value for v in seq.rs]
    factor = 4 if seq.norm is Norm.L2 else 2
    last = len(seq) - K
    report = InequalityReport(f"halving_K_{K}", K, FOR_ALL, (1, last), unchecked=(last + 1, len(seq)))
    for n in range(1, last + 1):
        if factor * r[n + K] > r[n]:
            report.violations.append(n)
    return report


def ratio_floor_check(seq: BestApproxSequence) -> InequalityReport:
    """Check q_{n+1} >= floor(r_{n-1} / r_n) * q_n (Linf only)."""
    if seq.norm is not Norm.LINF:
        raise ValueError(f"ratio floor check is defined for linf sequences, got {seq.norm}")
    _require(seq, 3, "ratio floor check")
    q = [None] + seq.qs
    r = [None] + [v.value for v in seq.rs]
    last = len(seq) - 1
    report = InequalityReport("ratio_floor", 1, FOR_ALL, (2, last), unchecked=(last + 1, len(seq)))
    for n in range(2, last + 1):
        if r[n] == 0:
            continue
        if q[n + 1] < (r[n - 1] // r[n]) * q[n]:
            report.violations.append(n)
    return report


def check_horizon(seq: BestApproxSequence, horizon: int) -> None:
    if horizon > seq.q_max:
        raise HorizonError(f"horizon {horizon} exceeds the scanned range q_max={seq.q_max}")


def best_approximations_bruteforce(alpha, norm, q_max: int) -> BestApproxSequence:
    """Reference scan in plain Fraction arithmetic through :func:`torus_dist`."""
    from .arith import torus_dist, torus_reduce

    alpha = as_vector(alpha)
    norm = Norm.parse(norm)
    if alpha.denominator_lcm() == 1:
        raise ValueError(f"alpha={alpha} is integral: every orbit point is 0")
    if q_max >= alpha.denominator_lcm():
        raise HorizonError(f"horizon {q_max} reaches the orbit period of alpha={alpha}")
    zero = RationalVector((Fraction(0),) * alpha.d)
    terms = []
    for q in range(1, q_max + 1):
        r = torus_dist(zero, torus_reduce(alpha.scale(q)), norm)
        if not terms or r < terms[-1][1]:
            terms.append((q, r))
    return BestApproxSequence(alpha, norm, q_max, terms)
