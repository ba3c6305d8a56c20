"""Reproducible spellings of alpha for the CLI and the experiments.

Accepted forms::

    2/7,3/11                 explicit rationals
    golden:depth=30          (sqrt(5)-1)/2 truncated at the 30th convergent
    sqrt2:depth=30           sqrt(2)-1 truncated likewise
    cf:[0;3,(1,2)]:depth=25  any eventually periodic expansion
    random:prime=P,seed=S    coordinates uniform on {1..P-1}/P

Named one-dimensional constructors are repeated on every coordinate when a
dimension above one is requested (the diagonal embedding).
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .arith import RationalVector
from .onedim import GOLDEN, SQRT2, CFDescription, truncate

DEFAULT_PRIME = 1_000_003
DEFAULT_DEPTH = 30


def _params(text: str) -> dict[str, str]:
    out = {}
    for item in filter(None, (p.strip() for p in text.split(","))):
        key, sep, val = item.partition("=")
        if not sep:
            raise ValueError(f"expected key=value, got {item!r}")
        out[key.strip()] = val.strip()
    return out


def cf_alpha(cf: CFDescription, depth: int, dim: int = 1) -> RationalVector:
    x = truncate(cf, depth)
    return RationalVector((x,) * dim)


def golden(depth: int = DEFAULT_DEPTH, dim: int = 1) -> RationalVector:
    return cf_alpha(GOLDEN, depth, dim)


def sqrt2(depth: int = DEFAULT_DEPTH, dim: int = 1) -> RationalVector:
    return cf_alpha(SQRT2, depth, dim)


def random_alpha(rng: np.random.Generator, dim: int, prime: int = DEFAULT_PRIME) -> RationalVector:
    nums = rng.integers(1, prime, size=dim)
    return RationalVector(tuple(Fraction(int(n), prime) for n in nums))


def sample_streams(seed: int, count: int) -> list[np.random.Generator]:
    """One independent PCG64 generator per sample.

    Stream i is ``default_rng(SeedSequence(seed).spawn(count)[i])``, so a
    sample's alpha depends only on (seed, i), not on how many samples run.
    """
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(count)]


def random_alphas(seed: int, count: int, dim: int, prime: int = DEFAULT_PRIME) -> list[RationalVector]:
    return [random_alpha(rng, dim, prime) for rng in sample_streams(seed, count)]


def parse_alpha(text: str, dim: int | None = None) -> RationalVector:
    s = text.strip()
    kind, sep, rest = s.partition(":")
    kind = kind.lower()
    if sep and kind in ("golden", "sqrt2"):
        p = _params(rest)
        depth = int(p.pop("depth", DEFAULT_DEPTH))
        d = int(p.pop("dim", dim or 1))
        _no_extra(p, s)
        return (golden if kind == "golden" else sqrt2)(depth, d)
    if sep and kind == "cf":
        spec, _, tail = rest.rpartition(":")
        if not spec:
            spec, tail = rest, ""
        p = _params(tail)
        depth = int(p.pop("depth", DEFAULT_DEPTH))
        d = int(p.pop("dim", dim or 1))
        _no_extra(p, s)
        return cf_alpha(CFDescription.parse(spec), depth, d)
    if sep and kind == "random":
        p = _params(rest)
        prime = int(p.pop("prime", DEFAULT_PRIME))
        seed = int(p.pop("seed", 0))
        d = int(p.pop("dim", dim or 1))
        _no_extra(p, s)
        return random_alphas(seed, 1, d, prime)[0]
    alpha = RationalVector.parse(s)
    if dim is not None and alpha.d != dim:
        raise ValueError(f"alpha {s!r} has dimension {alpha.d}, expected {dim}")
    return alpha


def _no_extra(params: dict, text: str) -> None:
    if params:
        raise ValueError(f"unknown parameters {sorted(params)} in {text!r}")
