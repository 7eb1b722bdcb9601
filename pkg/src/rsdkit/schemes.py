"""Social decision schemes: random dictatorship and random serial dictatorship."""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Callable, Iterable, Mapping

from .lotteries import Lottery, LotteryError, mix, parse_lottery, uniform
from .preferences import PreferenceParseError, PreferenceRelation, Profile, max_set, parse_profile, unique_top


class AgentWithoutUniqueTop(ValueError):
    def __init__(self, agent):
        self.agent = agent
        super().__init__(f"agent {agent} has no unique top alternative; RD is undefined")


class InvalidOutcome(ValueError):
    """A scheme returned something that is not a lottery on the profile's universe."""


class SocialDecisionScheme:
    """A named, deterministic mapping from profiles to lotteries.

    Wraps any callable so user schemes, mocks and tabulated fixtures can be
    checked the same way.  Outputs are validated on every call.
    """

    def __init__(self, name: str, function: Callable[[Profile], Lottery]):
        self.name = name
        self.function = function

    def __call__(self, profile: Profile) -> Lottery:
        out = self.function(profile)
        if not isinstance(out, Lottery):
            raise InvalidOutcome(f"scheme {self.name!r} returned {type(out).__name__}, not a Lottery")
        if out.universe != profile.universe:
            raise InvalidOutcome(f"scheme {self.name!r} returned a lottery on {out.universe}, expected {profile.universe}")
        return out

    def __repr__(self):
        return f"SocialDecisionScheme({self.name!r})"


def rd(profile: Profile) -> Lottery:
    """Random dictatorship; defined only when every agent has a unique top."""
    counts = Counter()
    for agent, rel in profile:
        top = unique_top(rel)
        if top is None:
            raise AgentWithoutUniqueTop(agent)
        counts[top] += 1
    n = len(profile)
    return Lottery.from_mapping(profile.universe, {x: Fraction(c, n) for x, c in counts.items()})


def _multiset(relations: Iterable[PreferenceRelation]) -> tuple:
    counts = Counter(relations)
    return tuple(sorted(counts.items(), key=lambda e: e[0].key()))


def rsd_restricted(remaining: Iterable[PreferenceRelation], feasible: Iterable, universe=None) -> Lottery:
    """RSD outcome when ``remaining`` agents still pick from ``feasible``.

    Identical relations are merged with multiplicities; results are memoised
    on (multiset of remaining relations, feasible set) for this call only.
    """
    remaining = list(remaining)
    feasible = frozenset(feasible)
    if not feasible:
        raise LotteryError("RSD over an empty feasible set")
    if universe is None:
        universe = remaining[0].universe if remaining else tuple(sorted(feasible))
    universe = tuple(universe)
    memo = {}

    def solve(multiset, X):
        if len(X) == 1 or not multiset:
            return uniform(X, universe)
        key = (multiset, X)
        hit = memo.get(key)
        if hit is not None:
            return hit
        n = sum(c for _, c in multiset)
        parts = []
        for k, (rel, c) in enumerate(multiset):
            if c == 1:
                rest = multiset[:k] + multiset[k + 1:]
            else:
                rest = multiset[:k] + ((rel, c - 1),) + multiset[k + 1:]
            parts.append((Fraction(c, n), solve(rest, max_set(rel, X))))
        out = mix(parts, universe)
        memo[key] = out
        return out

    return solve(_multiset(remaining), feasible)


@lru_cache(maxsize=1 << 16)
def _rsd_of_multiset(multiset: tuple, universe: tuple) -> Lottery:
    relations = [rel for rel, c in multiset for _ in range(c)]
    return rsd_restricted(relations, universe, universe)


def rsd(profile: Profile) -> Lottery:
    """Random serial dictatorship on the full weak-preference domain.

    RSD is anonymous, so results are cached on the multiset of relations;
    exhaustive searches hit the same multisets many times.
    """
    return _rsd_of_multiset(_multiset(profile.relations), profile.universe)


class TabulatedScheme:
    """Scheme given by an explicit profile -> lottery table.

    Profiles missing from the table get ``default`` if one is set,
    otherwise a KeyError is raised.
    """

    def __init__(self, table: Mapping[Profile, Lottery], default: Lottery | None = None, name="table"):
        self.table = dict(table)
        self.default = default
        self.__name__ = self.name = name

    def __call__(self, profile: Profile) -> Lottery:
        try:
            return self.table[profile]
        except KeyError:
            if self.default is None:
                raise KeyError(f"profile not tabulated:\n{profile}") from None
            return self.default


def constant_scheme(p: Lottery, name="constant") -> SocialDecisionScheme:
    return SocialDecisionScheme(name, lambda profile: p)


def uniform_scheme() -> SocialDecisionScheme:
    return SocialDecisionScheme("uniform", lambda profile: uniform(profile.universe, profile.universe))


def load_table(path, universe=None) -> SocialDecisionScheme:
    """Load a tabulated scheme file.

    Each non-comment line reads ``<profile> => <lottery>`` where
    ``<profile>`` is a profile file path (relative to the table file) or
    ``@NAME`` for a bundled fixture such as ``@R12``.  A line
    ``default => <lottery>`` sets the value for untabulated profiles.
    """
    from .theorem import load_fixture

    path = Path(path)
    table = {}
    default_text = None
    for lineno, raw in enumerate(path.read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=>" not in line:
            raise PreferenceParseError(f"expected '<profile> => <lottery>' in {path}", line=lineno)
        left, right = (s.strip() for s in line.split("=>", 1))
        if left == "default":
            default_text = right
            continue
        if left.startswith("@"):
            profile = load_fixture(left[1:])
        else:
            profile = parse_profile((path.parent / left).read_text(), universe)
        if universe is None:
            universe = profile.universe
        try:
            table[profile] = parse_lottery(right, profile.universe)
        except (PreferenceParseError, LotteryError) as exc:
            raise PreferenceParseError(f"{exc} in {path}", line=lineno) from None
    default = None
    if default_text is not None:
        if universe is None:
            raise PreferenceParseError(f"{path}: default given but no profile fixes the universe")
        default = parse_lottery(default_text, universe)
    return SocialDecisionScheme(f"table:{path.name}", TabulatedScheme(table, default))


RD = SocialDecisionScheme("rd", rd)
RSD = SocialDecisionScheme("rsd", rsd)

REGISTRY = {
    "rd": RD,
    "rsd": RSD,
    "uniform": uniform_scheme(),
}


def get_scheme(name: str) -> SocialDecisionScheme:
    try:
        return REGISTRY[name]
    except KeyError:
        raise KeyError(f"unknown scheme {name!r}; known: {', '.join(sorted(REGISTRY))}") from None
