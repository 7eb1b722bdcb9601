"""Exact lotteries and stochastic-dominance comparison."""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .preferences import PreferenceParseError, PreferenceRelation


class LotteryError(ValueError):
    pass


@dataclass(frozen=True)
class Lottery:
    """Probability distribution over ``universe`` with Fraction masses.

    ``masses`` is aligned with ``universe``.  Construct with
    :meth:`from_mapping` when starting from a dict.
    """

    universe: tuple
    masses: tuple

    def __post_init__(self):
        universe = tuple(self.universe)
        masses = tuple(Fraction(v) for v in self.masses)
        if len(universe) != len(masses):
            raise LotteryError("masses and universe differ in length")
        if any(v < 0 for v in masses):
            raise LotteryError(f"negative probability in {masses}")
        if sum(masses) != 1:
            raise LotteryError(f"probabilities sum to {sum(masses)}, not 1")
        object.__setattr__(self, "universe", universe)
        object.__setattr__(self, "masses", masses)

    @classmethod
    def from_mapping(cls, universe: Sequence, mass: Mapping) -> "Lottery":
        unknown = set(mass) - set(universe)
        if unknown:
            raise LotteryError(f"alternatives outside universe: {sorted(unknown)}")
        return cls(tuple(universe), tuple(Fraction(mass.get(x, 0)) for x in universe))

    @classmethod
    def degenerate(cls, universe: Sequence, x) -> "Lottery":
        return cls.from_mapping(universe, {x: 1})

    def __getitem__(self, x) -> Fraction:
        try:
            return self.masses[self.universe.index(x)]
        except ValueError:
            raise KeyError(x) from None

    def as_dict(self) -> dict:
        return dict(zip(self.universe, self.masses))

    def mass_of(self, xs: Iterable) -> Fraction:
        xs = set(xs)
        return sum((v for x, v in zip(self.universe, self.masses) if x in xs), Fraction(0))

    def triples(self) -> list:
        """``(alternative, numerator, denominator)`` for the positive masses."""
        return [(x, v.numerator, v.denominator) for x, v in zip(self.universe, self.masses) if v]

    def __str__(self):
        return format_lottery(self)

    def __repr__(self):
        return f"Lottery({format_lottery(self)!r})"


def format_lottery(p: Lottery) -> str:
    return " + ".join(f"{v}*{x}" for x, v in zip(p.universe, p.masses) if v)


_TERM = re.compile(r"\s*(?:(\d+(?:/\d+)?)\s*\*\s*)?([^\s*+]+)\s*")


def parse_lottery(text: str, universe: Sequence) -> Lottery:
    """Parse ``5/12*a + 5/12*b + 1/12*c + 1/12*d``; a bare ``a`` means mass 1."""
    mass = {}
    for term in text.split("+"):
        m = _TERM.fullmatch(term)
        if m is None:
            raise PreferenceParseError(f"bad lottery term {term.strip()!r}")
        coef = Fraction(m.group(1)) if m.group(1) else Fraction(1)
        x = m.group(2)
        if x not in universe:
            raise PreferenceParseError(f"unknown alternative {x!r} in lottery")
        mass[x] = mass.get(x, Fraction(0)) + coef
    return Lottery.from_mapping(universe, mass)


def uniform(feasible: Iterable, universe: Sequence) -> Lottery:
    feasible = set(feasible)
    if not feasible:
        raise LotteryError("uniform lottery over an empty set")
    share = Fraction(1, len(feasible))
    return Lottery.from_mapping(universe, {x: share for x in feasible})


def support(p: Lottery) -> frozenset:
    return frozenset(x for x, v in zip(p.universe, p.masses) if v > 0)


def mix(weighted: Iterable, universe: Sequence) -> Lottery:
    """Convex combination of ``(weight, lottery)`` pairs."""
    acc = [Fraction(0)] * len(universe)
    for w, p in weighted:
        for k, v in enumerate(p.masses):
            acc[k] += w * v
    return Lottery(tuple(universe), tuple(acc))


# ---------------------------------------------------------------------------
# stochastic dominance


class SdVerdict(enum.Enum):
    STRICTLY_DOMINATES = "StrictlyDominates"
    STRICTLY_DOMINATED_BY = "StrictlyDominatedBy"
    EQUIVALENT = "Equivalent"
    INCOMPARABLE = "Incomparable"

    def mirror(self) -> "SdVerdict":
        return _MIRROR[self]

    @property
    def weakly_dominates(self) -> bool:
        return self in (SdVerdict.STRICTLY_DOMINATES, SdVerdict.EQUIVALENT)


_MIRROR = {
    SdVerdict.STRICTLY_DOMINATES: SdVerdict.STRICTLY_DOMINATED_BY,
    SdVerdict.STRICTLY_DOMINATED_BY: SdVerdict.STRICTLY_DOMINATES,
    SdVerdict.EQUIVALENT: SdVerdict.EQUIVALENT,
    SdVerdict.INCOMPARABLE: SdVerdict.INCOMPARABLE,
}


def upper_contour_mass(rel: PreferenceRelation, p: Lottery, x) -> Fraction:
    """Mass that ``p`` puts on alternatives at least as good as ``x``."""
    r = rel.rank(x)
    return sum((v for y, v in zip(p.universe, p.masses) if rel.rank(y) <= r), Fraction(0))


def cumulative_class_masses(rel: PreferenceRelation, p: Lottery) -> list:
    """Upper contour mass at each class boundary, best class first.

    Upper contour masses are constant on a class, so this list carries
    every comparison stochastic dominance needs.
    """
    per_class = [Fraction(0)] * len(rel.classes)
    for y, v in zip(p.universe, p.masses):
        per_class[rel.rank(y)] += v
    out = []
    total = Fraction(0)
    for v in per_class:
        total += v
        out.append(total)
    return out


def _check_universe(rel, p, q):
    if not (rel.universe == p.universe == q.universe):
        raise LotteryError("relation and lotteries use different universes")


def sd_compare(rel: PreferenceRelation, p: Lottery, q: Lottery) -> SdVerdict:
    """Compare ``p`` with ``q`` under ``rel`` by stochastic dominance."""
    _check_universe(rel, p, q)
    geq = leq = True
    for up, uq in zip(cumulative_class_masses(rel, p), cumulative_class_masses(rel, q)):
        if up < uq:
            geq = False
        elif up > uq:
            leq = False
    if geq and leq:
        return SdVerdict.EQUIVALENT
    if geq:
        return SdVerdict.STRICTLY_DOMINATES
    if leq:
        return SdVerdict.STRICTLY_DOMINATED_BY
    return SdVerdict.INCOMPARABLE


def sd_weakly_prefers(rel: PreferenceRelation, p: Lottery, q: Lottery) -> bool:
    return sd_compare(rel, p, q).weakly_dominates
