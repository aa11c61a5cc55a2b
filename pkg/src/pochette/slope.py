"""Slopes p/q, mod 2 framings and continued fractions."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd


class SlopeError(ValueError):
    pass


class NotCoprime(SlopeError):
    pass


class ZeroSlopePair(SlopeError):
    pass


class ZeroDenominator(SlopeError):
    pass


class ZeroNumerator(SlopeError):
    pass


@dataclass(frozen=True)
class SlopeFraction:
    """A coprime pair (p, q) standing for p/q in Q u {inf}.

    The pair is kept exactly as given so that the gluing-word table can see
    which sign quadrant it was handed; :meth:`normalized` picks the canonical
    member of ``{(p, q), (-p, -q)}``.
    """

    p: int
    q: int

    def __post_init__(self):
        if self.p == 0 and self.q == 0:
            raise ZeroSlopePair("0/0 is not a slope")
        if gcd(self.p, self.q) != 1:
            raise NotCoprime(f"{self.p}/{self.q} is not in lowest terms")

    def normalized(self) -> SlopeFraction:
        return normalize_slope(self.p, self.q)

    @property
    def is_infinite(self) -> bool:
        return self.q == 0

    def __str__(self) -> str:
        return f"{self.p}/{self.q}"


def normalize_slope(p: int, q: int) -> SlopeFraction:
    """Canonical representative of the slope class of (p, q).

    >>> normalize_slope(-3, -2)
    SlopeFraction(p=3, q=2)
    >>> normalize_slope(-1, 0)
    SlopeFraction(p=1, q=0)
    """
    s = SlopeFraction(p, q)
    if q < 0 or (q == 0 and p < 0):
        return SlopeFraction(-p, -q)
    return s


_SLOPE_RE = re.compile(r"^\s*([+-]?\d+)\s*/\s*([+-]?\d+)\s*$")


def parse_slope(text: str) -> SlopeFraction:
    """Parse ``"p/q"`` (signs allowed) or ``"inf"``; the sign representative is kept."""
    t = text.strip().lower()
    if t in ("inf", "+inf", "infinity"):
        return SlopeFraction(1, 0)
    if t == "-inf":
        return SlopeFraction(-1, 0)
    m = _SLOPE_RE.match(t)
    if m is None:
        if re.fullmatch(r"[+-]?\d+", t):
            return SlopeFraction(int(t), 1)
        raise SlopeError(f"cannot parse slope {text!r}")
    return SlopeFraction(int(m.group(1)), int(m.group(2)))


def slope_text(s: SlopeFraction) -> str:
    """Canonical spelling: ``inf`` for 1/0, otherwise ``p/q``."""
    n = s.normalized()
    return "inf" if n.q == 0 else f"{n.p}/{n.q}"


@dataclass(frozen=True)
class Mod2Framing:
    eps: int

    def __post_init__(self):
        if self.eps not in (0, 1):
            raise ValueError(f"mod 2 framing must be 0 or 1, got {self.eps!r}")


@dataclass(frozen=True)
class ContinuedFraction:
    """a0 + 1/(a1 + 1/(... + 1/an)) with n >= 1."""

    a0: int
    terms: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        if self.a0 < 0:
            raise ValueError("a0 must be nonnegative")
        if not self.terms:
            raise ValueError("at least one partial quotient after a0 is required")
        if any(a < 1 for a in self.terms):
            raise ValueError("partial quotients a1..an must be positive")

    @property
    def n(self) -> int:
        return len(self.terms)


def continued_fraction(p: int, q: int) -> ContinuedFraction:
    """Shortest expansion of |p|/|q| with at least one term after a0."""
    if q == 0:
        raise ZeroDenominator("continued fraction of an infinite slope")
    if p == 0:
        raise ZeroNumerator("continued fraction of the zero slope")
    if gcd(p, q) != 1:
        raise NotCoprime(f"{p}/{q} is not in lowest terms")
    a, b = abs(p), abs(q)
    quotients = []
    while b:
        quotients.append(a // b)
        a, b = b, a % b
    if len(quotients) == 1:
        # |q| = 1: write |p| as (|p| - 1) + 1/1
        quotients = [quotients[0] - 1, 1]
    return ContinuedFraction(quotients[0], tuple(quotients[1:]))


def reconstruct(cf: ContinuedFraction) -> tuple[int, int]:
    """Evaluate the tower back to a reduced fraction (numerator, denominator)."""
    value = Fraction(cf.terms[-1])
    for a in reversed(cf.terms[:-1]):
        value = a + 1 / value
    value = cf.a0 + 1 / value
    return value.numerator, value.denominator
