"""Continued fractions and the one-dimensional limsup/liminf classification."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

FINITE = "finite"
PERIODIC = "eventually_periodic"


class UndecidableTail(ValueError):
    """A tail property was asked of a finite expansion."""


@dataclass(frozen=True)
class CFDescription:
    kind: str
    a0: int
    preperiod: tuple[int, ...] = ()
    period: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "preperiod", tuple(int(a) for a in self.preperiod))
        object.__setattr__(self, "period", tuple(int(a) for a in self.period))
        if self.kind not in (FINITE, PERIODIC):
            raise ValueError(f"unknown kind {self.kind!r}")
        if any(a < 1 for a in self.preperiod + self.period):
            raise ValueError("partial quotients after a0 must be >= 1")
        if (self.kind == PERIODIC) != bool(self.period):
            raise ValueError("period must be nonempty exactly for eventually periodic expansions")

    @classmethod
    def finite(cls, a0: int, quotients) -> "CFDescription":
        return normalize(cls(FINITE, a0, tuple(quotients)))

    @classmethod
    def periodic(cls, a0: int, preperiod, period) -> "CFDescription":
        return normalize(cls(PERIODIC, a0, tuple(preperiod), tuple(period)))

    @classmethod
    def parse(cls, text: str) -> "CFDescription":
        """Parse ``[a0;a1,a2]`` or ``[a0;a1,(p1,p2)]`` (parentheses mark the period)."""
        m = re.fullmatch(r"\s*\[\s*(-?\d+)\s*(?:;(.*))?\]\s*", text)
        if not m:
            raise ValueError(f"cannot parse continued fraction {text!r}")
        a0 = int(m.group(1))
        body = (m.group(2) or "").strip()
        period: list[int] = []
        if "(" in body:
            pm = re.fullmatch(r"(.*?),?\s*\(([^()]*)\)\s*", body)
            if not pm:
                raise ValueError(f"period must close the expansion: {text!r}")
            body, period = pm.group(1), _ints(pm.group(2))
            if not period:
                raise ValueError(f"empty period in {text!r}")
        pre = _ints(body)
        if period:
            return cls.periodic(a0, pre, period)
        return cls.finite(a0, pre)

    def quotient(self, n: int) -> int:
        """a_n for n >= 1 (period unrolled)."""
        if n < 1:
            raise IndexError("quotients are indexed from 1")
        if n <= len(self.preperiod):
            return self.preperiod[n - 1]
        if self.kind == FINITE:
            raise IndexError(f"finite expansion has only {len(self.preperiod)} quotients")
        k = (n - len(self.preperiod) - 1) % len(self.period)
        return self.period[k]

    def quotients(self, count: int) -> list[int]:
        return [self.quotient(n) for n in range(1, count + 1)]

    def __str__(self) -> str:
        parts = [str(a) for a in self.preperiod]
        if self.period:
            parts.append("(" + ",".join(str(a) for a in self.period) + ")")
        if not parts:
            return f"[{self.a0}]"
        return f"[{self.a0};" + ",".join(parts) + "]"


def _ints(text: str) -> list[int]:
    return [int(t) for t in text.replace(" ", "").split(",") if t]


def _primitive(period: tuple[int, ...]) -> tuple[int, ...]:
    n = len(period)
    for k in range(1, n + 1):
        if n % k == 0 and period[:k] * (n // k) == period:
            return period[:k]
    return period


def normalize(cf: CFDescription) -> CFDescription:
    """Canonical form: primitive period, shortest preperiod, final quotient >= 2."""
    if cf.kind == FINITE:
        a0, q = cf.a0, list(cf.preperiod)
        if q and q[-1] == 1:
            q.pop()
            if q:
                q[-1] += 1
            else:
                a0 += 1
        return CFDescription(FINITE, a0, tuple(q))
    period = _primitive(cf.period)
    pre = list(cf.preperiod)
    while pre and pre[-1] == period[-1]:
        pre.pop()
        period = (period[-1],) + period[:-1]
    return CFDescription(PERIODIC, cf.a0, tuple(pre), period)


@dataclass
class ConvergentTable:
    """Rows (a_n, p_n, q_n), n = 1..count, with p_0/q_0 = a0/1 and p_{-1}/q_{-1} = 1/0."""

    a0: int
    entries: list[tuple[int, int, int]] = field(default_factory=list)

    @property
    def denominators(self) -> list[int]:
        return [q for _, _, q in self.entries]

    def value(self, n: int | None = None) -> Fraction:
        if not self.entries:
            return Fraction(self.a0)
        _, p, q = self.entries[-1 if n is None else n - 1]
        return Fraction(p, q)

    def to_csv(self) -> str:
        lines = ["n,a_n,p_n,q_n"]
        lines += [f"{i},{a},{p},{q}" for i, (a, p, q) in enumerate(self.entries, start=1)]
        return "\n".join(lines) + "\n"


def cf_expand(x: Fraction) -> CFDescription:
    """Canonical finite expansion of a rational in (0, 1) (Euclidean algorithm)."""
    x = Fraction(x)
    if not 0 < x < 1:
        raise ValueError(f"{x} is outside (0, 1)")
    quotients = []
    p, q = x.numerator, x.denominator
    while p:
        a, r = divmod(q, p)
        quotients.append(a)
        q, p = p, r
    return CFDescription.finite(0, quotients)


def cf_expand_rational(x: Fraction) -> CFDescription:
    """Expansion of any rational, a0 = floor(x)."""
    x = Fraction(x)
    a0 = x.numerator // x.denominator
    frac = x - a0
    if frac == 0:
        return CFDescription(FINITE, a0)
    tail = cf_expand(frac)
    return CFDescription(FINITE, a0, tail.preperiod)


def cf_convergents(cf: CFDescription, count: int) -> ConvergentTable:
    if count < 1:
        raise ValueError("count must be positive")
    if cf.kind == FINITE and count > len(cf.preperiod):
        raise ValueError(f"finite expansion has only {len(cf.preperiod)} quotients, asked for {count}")
    p_prev, q_prev = 1, 0
    p, q = cf.a0, 1
    table = ConvergentTable(cf.a0)
    for a in cf.quotients(count):
        p, p_prev = a * p + p_prev, p
        q, q_prev = a * q + q_prev, q
        table.entries.append((a, p, q))
    return table


def cf_value(cf: CFDescription) -> Fraction:
    """Exact value of a finite expansion."""
    if cf.kind != FINITE:
        raise UndecidableTail("only finite expansions have a rational value")
    if not cf.preperiod:
        return Fraction(cf.a0)
    return cf_convergents(cf, len(cf.preperiod)).value()


def truncate(cf: CFDescription, depth: int) -> Fraction:
    """The convergent p_depth / q_depth (a periodic tail is unrolled)."""
    return cf_convergents(cf, depth).value()


def depth_for_denominator(cf: CFDescription, min_denominator: int, max_depth: int = 10_000) -> int:
    """Smallest depth whose convergent denominator reaches ``min_denominator``."""
    p_prev, q_prev, q = 1, 0, 1
    for n in range(1, max_depth + 1):
        q, q_prev = cf.quotient(n) * q + q_prev, q
        if q >= min_denominator:
            return n
    raise ValueError(f"no convergent with denominator >= {min_denominator} within depth {max_depth}")


def _require_periodic(cf: CFDescription) -> CFDescription:
    if cf.kind != PERIODIC:
        raise UndecidableTail("a finite expansion does not determine the tail behaviour")
    return normalize(cf)


def golden_equivalent(cf: CFDescription) -> bool:
    """True iff the tail is eventually all ones."""
    return _require_periodic(cf).period == (1,)


def classify_limsup(cf: CFDescription) -> int:
    """limsup_N g(alpha, N): 3 if a_n = 1 infinitely often, else 2."""
    return 3 if 1 in _require_periodic(cf).period else 2


def classify_liminf(cf: CFDescription) -> int:
    """liminf_N g(alpha, N): 2 for golden-equivalent alpha, else 1."""
    return 2 if golden_equivalent(cf) else 1


GOLDEN = CFDescription.periodic(0, (), (1,))
SQRT2 = CFDescription.periodic(0, (), (2,))
