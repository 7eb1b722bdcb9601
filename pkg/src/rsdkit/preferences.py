"""Weak preference relations, profiles and permutations.

A preference relation is stored as an ordered partition of the universe:
indifference classes, best first.  Text form uses ``>`` between classes
and ``~`` inside a class, e.g. ``a~c > b > d``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence


class PreferenceParseError(ValueError):
    """Malformed relation, profile or permutation text."""

    def __init__(self, message, position=None, line=None):
        self.position = position
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if position is not None:
            where.append(f"column {position}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)


class PermutationError(ValueError):
    pass


@dataclass(frozen=True)
class PreferenceRelation:
    universe: tuple
    classes: tuple

    def __post_init__(self):
        universe = tuple(self.universe)
        if len(set(universe)) != len(universe):
            raise ValueError("universe contains duplicate alternatives")
        order = {x: k for k, x in enumerate(universe)}
        classes = []
        seen = set()
        for cls in self.classes:
            cls = frozenset(cls)
            if not cls:
                raise ValueError("empty indifference class")
            unknown = cls - order.keys()
            if unknown:
                raise ValueError(f"alternatives outside universe: {sorted(unknown)}")
            if cls & seen:
                raise ValueError(f"alternatives in several classes: {sorted(cls & seen)}")
            seen |= cls
            classes.append(cls)
        if seen != set(universe):
            raise ValueError(f"alternatives missing: {[x for x in universe if x not in seen]}")
        object.__setattr__(self, "universe", universe)
        object.__setattr__(self, "classes", tuple(classes))
        object.__setattr__(self, "_rank", {x: k for k, cls in enumerate(classes) for x in cls})

    @classmethod
    def from_ranking(cls, universe, ranking):
        """Build from a nested sequence such as ``["a", ("b", "c")]``."""
        classes = [(item,) if isinstance(item, str) else tuple(item) for item in ranking]
        return cls(tuple(universe), tuple(classes))

    def rank(self, x) -> int:
        """Index of the indifference class holding ``x`` (0 is best)."""
        return self._rank[x]

    def weakly_prefers(self, x, y) -> bool:
        return self._rank[x] <= self._rank[y]

    def strictly_prefers(self, x, y) -> bool:
        return self._rank[x] < self._rank[y]

    def indifferent(self, x, y) -> bool:
        return self._rank[x] == self._rank[y]

    def sorted_class(self, k) -> tuple:
        """Members of class ``k`` in universe order."""
        cls = self.classes[k]
        return tuple(x for x in self.universe if x in cls)

    def key(self) -> tuple:
        """Classes as index tuples; the canonical enumeration sorts on this."""
        order = {x: k for k, x in enumerate(self.universe)}
        return tuple(tuple(sorted(order[x] for x in cls)) for cls in self.classes)

    def __str__(self):
        return format_relation(self)

    def __repr__(self):
        return f"PreferenceRelation({format_relation(self)!r})"


def format_relation(rel: PreferenceRelation) -> str:
    return " > ".join("~".join(rel.sorted_class(k)) for k in range(len(rel.classes)))


_TOKEN = re.compile(r"\s*([^\s>~]+)\s*")


def parse_relation(text: str, universe: Sequence[str]) -> PreferenceRelation:
    """Parse ``a~c > b~d`` into a relation over ``universe``.

    Errors carry the 1-based column of the offending token.
    """
    universe = tuple(universe)
    known = set(universe)
    seen = {}
    classes = []
    pos = 0
    for chunk in text.split(">"):
        members = []
        cpos = pos
        for part in chunk.split("~"):
            m = _TOKEN.fullmatch(part)
            column = cpos + 1 + (len(part) - len(part.lstrip()))
            if m is None:
                raise PreferenceParseError(f"expected an alternative in {text!r}", column)
            token = m.group(1)
            if token not in known:
                raise PreferenceParseError(f"unknown alternative {token!r}", column)
            if token in seen:
                raise PreferenceParseError(f"duplicate alternative {token!r}", column)
            seen[token] = column
            members.append(token)
            cpos += len(part) + 1
        classes.append(tuple(members))
        pos += len(chunk) + 1
    missing = [x for x in universe if x not in seen]
    if missing:
        raise PreferenceParseError(f"missing alternatives {missing} in {text!r}", len(text) + 1)
    return PreferenceRelation(universe, tuple(classes))


def max_set(rel: PreferenceRelation, feasible: Iterable) -> frozenset:
    """Best alternatives of ``feasible`` according to ``rel``."""
    feasible = frozenset(feasible)
    if not feasible:
        raise ValueError("max_set of an empty set")
    for cls in rel.classes:
        best = cls & feasible
        if best:
            return best
    raise ValueError("feasible set is not contained in the universe")


def unique_top(rel: PreferenceRelation):
    top = rel.classes[0]
    if len(top) == 1:
        return next(iter(top))
    return None


def is_strict(rel: PreferenceRelation) -> bool:
    return all(len(cls) == 1 for cls in rel.classes)


def is_total_indifference(rel: PreferenceRelation) -> bool:
    return len(rel.classes) == 1


# ---------------------------------------------------------------------------
# permutations


@dataclass(frozen=True)
class Permutation:
    """Explicit bijection on a finite set (agents or alternatives)."""

    mapping: Mapping

    def __post_init__(self):
        mapping = dict(self.mapping)
        if set(mapping.values()) != set(mapping):
            raise PermutationError(f"not a bijection: {mapping}")
        object.__setattr__(self, "mapping", mapping)

    def __call__(self, x):
        return self.mapping.get(x, x)

    def __hash__(self):
        return hash(tuple(sorted(self.mapping.items(), key=repr)))

    @property
    def domain(self):
        return frozenset(self.mapping)

    def inverse(self) -> "Permutation":
        return Permutation({v: k for k, v in self.mapping.items()})

    def compose(self, other: "Permutation") -> "Permutation":
        """``self after other``."""
        keys = set(self.mapping) | set(other.mapping)
        return Permutation({k: self(other(k)) for k in keys})

    def is_identity(self) -> bool:
        return all(k == v for k, v in self.mapping.items())

    def check_domain(self, elements):
        extra = self.domain - set(elements)
        if extra:
            raise PermutationError(f"permutation moves elements outside the domain: {sorted(map(str, extra))}")

    @classmethod
    def identity(cls, elements) -> "Permutation":
        return cls({x: x for x in elements})

    @classmethod
    def from_cycles(cls, text: str, convert=str) -> "Permutation":
        """Parse cycle notation like ``(1 2)(3 4)`` or ``(a,b)(c,d)``.

        Fixed points may be written as 1-cycles.  ``convert`` maps tokens to
        domain elements (``int`` for agents).
        """
        text = text.strip()
        if text in ("", "()", "id"):
            return cls({})
        if not re.fullmatch(r"(\s*\([^()]*\)\s*)+", text):
            raise PreferenceParseError(f"bad cycle notation {text!r}")
        mapping = {}
        for body in re.findall(r"\(([^()]*)\)", text):
            tokens = [t for t in re.split(r"[\s,]+", body.strip()) if t]
            try:
                items = [convert(t) for t in tokens]
            except ValueError as exc:
                raise PreferenceParseError(f"bad cycle element in {text!r}: {exc}") from None
            for k, x in enumerate(items):
                if x in mapping:
                    raise PermutationError(f"element {x!r} appears in two cycles")
                mapping[x] = items[(k + 1) % len(items)]
        return cls(mapping)

    def cycles_text(self) -> str:
        seen = set()
        out = []
        for start in sorted(self.mapping, key=str):
            if start in seen or self.mapping[start] == start:
                continue
            cycle = [start]
            seen.add(start)
            x = self.mapping[start]
            while x != start:
                cycle.append(x)
                seen.add(x)
                x = self.mapping[x]
            out.append("(" + " ".join(map(str, cycle)) + ")")
        return "".join(out) or "()"


def permute_alternatives(rel: PreferenceRelation, sigma: Permutation) -> PreferenceRelation:
    """The relation with ``sigma(x) >= sigma(y)`` iff ``x >= y``."""
    sigma.check_domain(rel.universe)
    return PreferenceRelation(rel.universe, tuple(frozenset(sigma(x) for x in cls) for cls in rel.classes))


# ---------------------------------------------------------------------------
# profiles


@dataclass(frozen=True)
class Profile:
    """Agent id -> relation, kept sorted by agent id."""

    entries: tuple

    def __post_init__(self):
        entries = tuple(sorted(((int(i), rel) for i, rel in self.entries), key=lambda e: e[0]))
        if not entries:
            raise ValueError("a profile needs at least one agent")
        ids = [i for i, _ in entries]
        if len(set(ids)) != len(ids):
            raise ValueError(f"duplicate agent ids in {ids}")
        if any(i <= 0 for i in ids):
            raise ValueError("agent ids must be positive")
        universe = entries[0][1].universe
        for i, rel in entries:
            if rel.universe != universe:
                raise ValueError(f"agent {i} uses a different universe")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_relations(cls, relations, agents=None) -> "Profile":
        relations = list(relations)
        agents = range(1, len(relations) + 1) if agents is None else agents
        return cls(tuple(zip(agents, relations)))

    @property
    def universe(self) -> tuple:
        return self.entries[0][1].universe

    @property
    def agents(self) -> tuple:
        return tuple(i for i, _ in self.entries)

    @property
    def relations(self) -> tuple:
        return tuple(rel for _, rel in self.entries)

    def __len__(self):
        return len(self.entries)

    def __iter__(self) -> Iterator:
        return iter(self.entries)

    def __getitem__(self, agent) -> PreferenceRelation:
        for i, rel in self.entries:
            if i == agent:
                return rel
        raise KeyError(agent)

    def without(self, agent) -> tuple:
        """Entries of every agent except ``agent`` (R minus i)."""
        self[agent]
        return tuple(e for e in self.entries if e[0] != agent)

    def replace(self, agent, rel: PreferenceRelation) -> "Profile":
        """Same profile with ``agent`` reporting ``rel`` instead."""
        self[agent]
        return Profile(self.without(agent) + ((agent, rel),))

    def permute_alternatives(self, sigma: Permutation) -> "Profile":
        return Profile(tuple((i, permute_alternatives(rel, sigma)) for i, rel in self.entries))

    def __str__(self):
        return format_profile(self)


def permute_agents(profile: Profile, pi: Permutation) -> Profile:
    """Agent ``i`` of the result reports what agent ``pi(i)`` reported."""
    pi.check_domain(profile.agents)
    return Profile(tuple((i, profile[pi(i)]) for i in profile.agents))


def pareto_dominates(profile: Profile, x, y) -> bool:
    """True iff every agent weakly prefers x to y and someone strictly."""
    strict = False
    for _, rel in profile:
        rx, ry = rel.rank(x), rel.rank(y)
        if rx > ry:
            return False
        if rx < ry:
            strict = True
    return strict


def format_profile(profile: Profile) -> str:
    return "".join(f"agent {i}: {format_relation(rel)}\n" for i, rel in profile)


_AGENT_LINE = re.compile(r"agent\s+(\d+)\s*:\s*(.*)")


def parse_profile(text: str, universe: Sequence[str] | None = None) -> Profile:
    """Read the ``agent <id>: <relation>`` line format.

    Without an explicit universe, the alternatives named by the first
    relation are used in sorted order.
    """
    lines = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _AGENT_LINE.fullmatch(line)
        if m is None:
            raise PreferenceParseError(f"expected 'agent <id>: <relation>', got {line!r}", line=lineno)
        lines.append((lineno, int(m.group(1)), m.group(2)))
    if not lines:
        raise PreferenceParseError("profile contains no agents")
    if universe is None:
        universe = tuple(sorted(t.strip() for t in re.split(r"[>~]", lines[0][2]) if t.strip()))
    entries = []
    seen = set()
    for lineno, agent, body in lines:
        if agent in seen:
            raise PreferenceParseError(f"agent {agent} listed twice", line=lineno)
        seen.add(agent)
        try:
            entries.append((agent, parse_relation(body, universe)))
        except PreferenceParseError as exc:
            raise PreferenceParseError(str(exc), exc.position, lineno) from None
    return Profile(tuple(entries))


def enumerate_weak_orders(universe: Sequence[str]) -> Iterator[PreferenceRelation]:
    """All weak orders on ``universe``, each exactly once.

    Order: lexicographic on the sequence of classes, each class written as
    the sorted tuple of universe positions.  For ``a, b`` this gives
    ``a > b``, ``a~b``, ``b > a``.
    """
    universe = tuple(universe)
    if not universe:
        raise ValueError("empty universe")

    def partitions(remaining):
        if not remaining:
            yield ()
            return
        firsts = sorted(
            c for k in range(1, len(remaining) + 1) for c in itertools.combinations(remaining, k)
        )
        for first in firsts:
            rest = tuple(i for i in remaining if i not in first)
            for tail in partitions(rest):
                yield (first,) + tail

    for parts in partitions(tuple(range(len(universe)))):
        yield PreferenceRelation(universe, tuple(frozenset(universe[i] for i in part) for part in parts))
