"""Gluing words for pochette surgery.

A regluing of the pochette boundary with slope p/q and mod 2 framing eps is
written as a composite of six elementary diffeomorphisms E0..E5 of the
boundary (a Rolfsen twist, four handle slides and a reversal of the
meridian).  This module records how each move acts on H_1 (basis [m], [l])
and on H_2 (basis [B], [S]), builds the word for a given slope, and writes
down the natural lift of the reglued meridian to pi_1.

Words are stored in composition order: index 0 is the leftmost factor, so it
is applied last.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from itertools import groupby
from typing import Iterable, Sequence

from .intlin import IntMatrix, determinant
from .slope import SlopeFraction, continued_fraction


class Move(enum.Enum):
    E0 = 0
    E1 = 1
    E2 = 2
    E3 = 3
    E4 = 4
    E5 = 5

    def __str__(self) -> str:
        return self.name


E0, E1, E2, E3, E4, E5 = Move

# Columns are the images of [m] and [l].
_H1 = {
    E0: ((1, 0), (0, 1)),
    E1: ((1, 1), (0, 1)),
    E2: ((1, 0), (1, 1)),
    E3: ((1, -1), (0, 1)),
    E4: ((1, 0), (-1, 1)),
    E5: ((-1, 0), (0, 1)),
}


def _from_columns(c1: Sequence[int], c2: Sequence[int]) -> IntMatrix:
    return IntMatrix(2, 2, (c1[0], c2[0], c1[1], c2[1]))


_H1_MATRICES = {mv: _from_columns(*cols) for mv, cols in _H1.items()}


def h1_action(mv: Move) -> IntMatrix:
    """Action of a single move on H_1(dP) in the basis ([m], [l])."""
    return _H1_MATRICES[mv]


# Sign marks for the H_2 table.  The double signs of one table are resolved
# together: "+-" reads + under the upper resolution and - under the lower.
FIXED_PLUS = "+"
FIXED_MINUS = "-"
PLUS_MINUS = "+-"
MINUS_PLUS = "-+"


@dataclass(frozen=True)
class SignedEntry:
    magnitude: int
    mark: str = FIXED_PLUS

    def resolve(self, upper: bool) -> int:
        if self.mark == FIXED_PLUS:
            sign = 1
        elif self.mark == FIXED_MINUS:
            sign = -1
        elif self.mark == PLUS_MINUS:
            sign = 1 if upper else -1
        elif self.mark == MINUS_PLUS:
            sign = -1 if upper else 1
        else:
            raise ValueError(f"unknown sign mark {self.mark!r}")
        return sign * self.magnitude

    @property
    def ambiguous(self) -> bool:
        return self.mark in (PLUS_MINUS, MINUS_PLUS)


@dataclass(frozen=True)
class H2ActionPattern:
    """2x2 action on H_2(dP) in the basis ([B], [S]) with symbolic signs.

    ``columns[0]`` is the image of [B], ``columns[1]`` the image of [S]; each
    column lists the [B] then the [S] coefficient.
    """

    columns: tuple[tuple[SignedEntry, SignedEntry], tuple[SignedEntry, SignedEntry]]

    def resolve(self, upper: bool) -> IntMatrix:
        (a, b), (c, d) = self.columns
        return _from_columns((a.resolve(upper), b.resolve(upper)), (c.resolve(upper), d.resolve(upper)))

    @property
    def ambiguous(self) -> bool:
        return any(e.ambiguous for col in self.columns for e in col)


def _pat(b_img, s_img) -> H2ActionPattern:
    def entry(x):
        return x if isinstance(x, SignedEntry) else SignedEntry(abs(x), FIXED_MINUS if x < 0 else FIXED_PLUS)

    return H2ActionPattern(((entry(b_img[0]), entry(b_img[1])), (entry(s_img[0]), entry(s_img[1]))))


_H2 = {
    E0: _pat((1, 0), (0, 1)),
    E1: _pat((1, SignedEntry(1, MINUS_PLUS)), (0, 1)),
    E2: _pat((1, 0), (SignedEntry(1, MINUS_PLUS), 1)),
    E3: _pat((1, SignedEntry(1, PLUS_MINUS)), (0, 1)),
    E4: _pat((1, 0), (SignedEntry(1, PLUS_MINUS), 1)),
    E5: _pat((SignedEntry(1, PLUS_MINUS), 0), (0, SignedEntry(1, MINUS_PLUS))),
}


def h2_action(mv: Move) -> H2ActionPattern:
    return _H2[mv]


@dataclass(frozen=True)
class MoveWord:
    moves: tuple[Move, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "moves", tuple(self.moves))

    def __len__(self) -> int:
        return len(self.moves)

    def __iter__(self):
        return iter(self.moves)

    def __str__(self) -> str:
        return word_text(self)


def word_text(word: MoveWord) -> str:
    """Compact spelling, e.g. ``E2.E1^2.E0``; the empty word is ``id``."""
    if not word.moves:
        return "id"
    parts = []
    for mv, run in groupby(word.moves):
        k = len(list(run))
        parts.append(str(mv) if k == 1 else f"{mv}^{k}")
    return ".".join(parts)


_FACTOR_RE = re.compile(r"^E([0-5])(?:\^(\d+))?$")


def parse_word(text: str) -> MoveWord:
    text = text.strip()
    if text in ("", "id"):
        return MoveWord()
    moves: list[Move] = []
    for factor in text.split("."):
        m = _FACTOR_RE.match(factor.strip())
        if m is None:
            raise ValueError(f"bad word factor {factor!r}")
        moves.extend([Move(int(m.group(1)))] * int(m.group(2) or 1))
    return MoveWord(tuple(moves))


def synthesize_word(slope: SlopeFraction, eps: int) -> MoveWord:
    """The word E_{p/q,eps} for the given sign representative of the slope.

    For p < 0 < q with an even number of partial quotients a reversal E5 is
    inserted before E0^eps, as in the other negative-p quadrants; without it
    the word would realise (-p, -q) rather than (p, q).
    """
    if eps not in (0, 1):
        raise ValueError(f"mod 2 framing must be 0 or 1, got {eps!r}")
    p, q = slope.p, slope.q
    tail = [E0] * eps
    if (p, q) == (1, 0):
        return MoveWord(tuple(tail))
    if (p, q) == (0, 1):
        return MoveWord((E4, E1, *tail))
    if (p, q) == (-1, 0):
        return MoveWord((E5, *tail))
    if (p, q) == (0, -1):
        return MoveWord((E4, E1, E5, *tail))

    cf = continued_fraction(p, q)
    quotients = (cf.a0, *cf.terms)
    n = cf.n
    # even-index quotients use the [l]-slide, odd-index ones the [m]-slide
    even_move, odd_move = (E2, E1) if p * q > 0 else (E4, E3)
    moves: list[Move] = []
    for i, a in enumerate(quotients):
        if i == n and n % 2 == 0:
            moves += [even_move] * (a - 1) + [odd_move]
        else:
            moves += [even_move if i % 2 == 0 else odd_move] * a
    if p < 0:
        moves.append(E5)
    return MoveWord(tuple(moves + tail))


def compose_h1(word: MoveWord | Iterable[Move]) -> IntMatrix:
    """Composite H_1 action; the empty word gives the identity."""
    result = IntMatrix.identity(2)
    for mv in word:
        result = result @ h1_action(mv)
    return result


def compose_h2(word: MoveWord | Iterable[Move], upper: bool) -> IntMatrix:
    """Composite H_2 action under one consistent resolution of the double signs."""
    result = IntMatrix.identity(2)
    for mv in word:
        result = result @ h2_action(mv).resolve(upper)
    return result


def h2_sign_patterns(word: MoveWord | Iterable[Move]) -> set[IntMatrix]:
    """All composite H_2 matrices reachable by resolving the double signs."""
    moves = list(word)
    return {compose_h2(moves, upper) for upper in (True, False)}


def compose_h2_magnitudes(word: MoveWord | Iterable[Move]) -> IntMatrix:
    """Entrywise absolute values of the composite H_2 action.

    Raises ``ValueError`` if two sign resolutions disagree in magnitude,
    which would mean the table itself is inconsistent.
    """
    mags = {IntMatrix(2, 2, tuple(abs(x) for x in m.entries)) for m in h2_sign_patterns(word)}
    if len(mags) != 1:
        raise ValueError("sign resolutions disagree in magnitude")
    return mags.pop()


def verify_word(slope: SlopeFraction, eps: int) -> bool:
    """Does the synthesized word send [m] to p[m] + q[l] with determinant +-1?"""
    action = compose_h1(synthesize_word(slope, eps))
    return action.column(0) == [slope.p, slope.q] and abs(determinant(action)) == 1


@dataclass(frozen=True)
class LiftWord:
    """Word in the generators ``m`` and ``l`` (primes dropped), reduced.

    Zero exponents are dropped and adjacent equal generators merged.
    """

    letters: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        merged: list[tuple[str, int]] = []
        for gen, exp in self.letters:
            if gen not in ("m", "l"):
                raise ValueError(f"unknown generator {gen!r}")
            if merged and merged[-1][0] == gen:
                exp += merged.pop()[1]
            if exp:
                merged.append((gen, exp))
        object.__setattr__(self, "letters", tuple(merged))

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        return " ".join(g if e == 1 else f"{g}^{e}" for g, e in self.letters)

    def letter_count(self, gen: str) -> int:
        return sum(abs(e) for g, e in self.letters if g == gen)


def natural_lift(slope: SlopeFraction) -> LiftWord:
    """Homotopy class of the reglued meridian as a word in m', l'."""
    p, q = slope.p, slope.q
    if p * q == 0:
        return LiftWord((("m", p), ("l", q)))
    ap, aq = abs(p), abs(q)
    sp, sq = (1 if p > 0 else -1), (1 if q > 0 else -1)
    letters = []
    for k in range(1, ap + 1):
        letters.append(("l", sq * (k * aq // ap - (k - 1) * aq // ap)))
        letters.append(("m", sp))
    return LiftWord(tuple(letters))


def exponent_sums(w: LiftWord) -> tuple[int, int]:
    """Image of the word in H_1: (total m exponent, total l exponent)."""
    return (
        sum(e for g, e in w.letters if g == "m"),
        sum(e for g, e in w.letters if g == "l"),
    )
