"""Efficiency and strategyproofness checks that return re-checkable witnesses."""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .exactlp import EQ, GE, LinearProgram, solve
from .lotteries import Lottery, SdVerdict, cumulative_class_masses, format_lottery, sd_compare, support
from .preferences import (
    Permutation,
    PreferenceRelation,
    Profile,
    enumerate_weak_orders,
    format_relation,
    pareto_dominates,
    permute_agents,
)


def lottery_json(p: Lottery) -> list:
    return [[x, n, d] for x, n, d in p.triples()]


def fraction_json(v: Fraction) -> list:
    return [v.numerator, v.denominator]


# ---------------------------------------------------------------------------
# efficiency


@dataclass(frozen=True)
class EfficiencyVerdict:
    """Outcome of an ex post or SD efficiency check.

    For ex post inefficiency ``dominated`` has positive mass and is
    Pareto-dominated by ``dominator``.  For SD inefficiency ``lottery``
    SD-dominates the checked lottery, strictly so for ``strict_agents``.
    """

    notion: str
    efficient: bool
    dominated: str | None = None
    dominator: str | None = None
    lottery: Lottery | None = None
    strict_agents: tuple = ()

    def __bool__(self):
        return self.efficient

    def reverify(self, profile: Profile, p: Lottery) -> bool:
        """Re-check the witness from scratch; True when it confirms inefficiency."""
        if self.efficient:
            return False
        if self.notion == "ex-post":
            return p[self.dominated] > 0 and pareto_dominates(profile, self.dominator, self.dominated)
        ok, strict = sd_dominates_for_all(profile, self.lottery, p)
        return ok and set(self.strict_agents) <= set(strict) and bool(self.strict_agents)

    def to_dict(self) -> dict:
        out = {"notion": self.notion, "efficient": self.efficient}
        if self.notion == "ex-post" and not self.efficient:
            out["dominated"] = self.dominated
            out["dominator"] = self.dominator
        if self.lottery is not None:
            out["dominating_lottery"] = format_lottery(self.lottery)
            out["dominating_lottery_exact"] = lottery_json(self.lottery)
            out["strict_agents"] = list(self.strict_agents)
        return out


def check_ex_post(profile: Profile, p: Lottery) -> EfficiencyVerdict:
    for x in profile.universe:
        if p[x] <= 0:
            continue
        for y in profile.universe:
            if pareto_dominates(profile, y, x):
                return EfficiencyVerdict("ex-post", False, dominated=x, dominator=y)
    return EfficiencyVerdict("ex-post", True)


def sd_dominates_for_all(profile: Profile, q: Lottery, p: Lottery) -> tuple:
    """``(q weakly SD-dominates p for everyone, agents for whom it is strict)``."""
    strict = []
    for agent, rel in profile:
        verdict = sd_compare(rel, q, p)
        if not verdict.weakly_dominates:
            return False, ()
        if verdict is SdVerdict.STRICTLY_DOMINATES:
            strict.append(agent)
    return True, tuple(strict)


def sd_efficiency_lp(profile: Profile, p: Lottery) -> LinearProgram:
    """LP whose optimum is positive iff ``p`` is SD-inefficient.

    Variables ``q_x`` form a lottery; for every agent and every class
    boundary except the last, the upper contour mass of ``q`` minus a
    nonnegative slack equals that of ``p``.  The objective sums the slacks.
    """
    universe = profile.universe
    qvars = [f"q_{x}" for x in universe]
    slacks = []
    rows = []
    for agent, rel in profile:
        cum = cumulative_class_masses(rel, p)
        for k in range(len(rel.classes) - 1):
            s = f"s_{agent}_{k}"
            slacks.append(s)
            coeffs = {f"q_{x}": 1 for x in universe if rel.rank(x) <= k}
            coeffs[s] = -1
            rows.append((coeffs, cum[k], f"agent{agent}_class{k}"))
    lp = LinearProgram(qvars + slacks)
    lp.add({v: 1 for v in qvars}, EQ, 1, "total")
    for coeffs, rhs, name in rows:
        lp.add(coeffs, EQ, rhs, name)
    lp.maximize({s: 1 for s in slacks})
    return lp


def check_sd_efficiency(profile: Profile, p: Lottery) -> EfficiencyVerdict:
    lp = sd_efficiency_lp(profile, p)
    outcome = solve(lp)
    # q = p is always feasible and total slack is at most the number of rows
    assert outcome.optimal, outcome.status
    if outcome.value == 0:
        return EfficiencyVerdict("sd", True)
    q = Lottery(profile.universe, tuple(outcome.point[f"q_{x}"] for x in profile.universe))
    ok, strict = sd_dominates_for_all(profile, q, p)
    assert ok and strict, "LP optimum is not a dominating lottery"
    return EfficiencyVerdict("sd", False, lottery=q, strict_agents=strict)


def _scaled(p: Lottery, scale: int) -> np.ndarray:
    return np.array([int(v * scale) for v in p.masses], dtype=np.int64)


def brute_force_dominator(profile: Profile, p: Lottery, max_denominator: int = 12) -> Lottery | None:
    """First lottery with denominator at most ``max_denominator`` that SD-dominates ``p``.

    Independent of the LP route: it enumerates the whole grid and compares
    upper contour masses in exact integer arithmetic.
    """
    universe = profile.universe
    grid, scale = _kernels.lottery_grid(len(universe), max_denominator)
    den = 1
    for v in p.masses:
        den = np.lcm(den, v.denominator)
    common = int(np.lcm(scale, den))
    if common > 2**62 // max(len(universe), 1):
        raise OverflowError("lottery denominators too large for the int64 scan")
    cands = grid * (common // scale)
    rank = np.array([[rel.rank(x) for x in universe] for _, rel in profile], dtype=np.int64)
    nclasses = np.array([len(rel.classes) for _, rel in profile], dtype=np.int64)
    target = np.zeros((len(profile), int(nclasses.max())), dtype=np.int64)
    for i, (_, rel) in enumerate(profile):
        for k, v in enumerate(cumulative_class_masses(rel, p)):
            target[i, k] = int(v * common)
    hit = _kernels.dominator_scan(cands, rank, nclasses, target)
    if hit < 0:
        return None
    return Lottery(universe, tuple(Fraction(int(v), common) for v in cands[hit]))


# ---------------------------------------------------------------------------
# strategyproofness

SD_MANIPULATION = "sd-manipulation"
STRONG_SD_VIOLATION = "strong-sd-violation"


@dataclass(frozen=True)
class ManipulationWitness:
    """Agent ``agent`` in ``profile`` does better by reporting ``misreport``.

    ``verdict`` is the comparison of ``deviation`` with ``truthful`` under
    the agent's true relation.
    """

    agent: int
    profile: Profile
    misreport: PreferenceRelation
    truthful: Lottery
    deviation: Lottery
    kind: str
    verdict: SdVerdict

    @property
    def deviation_profile(self) -> Profile:
        return self.profile.replace(self.agent, self.misreport)

    def reverify(self, sds=None) -> bool:
        true_rel = self.profile[self.agent]
        if sds is not None:
            if sds(self.profile) != self.truthful or sds(self.deviation_profile) != self.deviation:
                return False
        verdict = sd_compare(true_rel, self.deviation, self.truthful)
        if verdict is not self.verdict:
            return False
        if self.kind == SD_MANIPULATION:
            return verdict is SdVerdict.STRICTLY_DOMINATES
        return verdict in (SdVerdict.STRICTLY_DOMINATES, SdVerdict.INCOMPARABLE)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "agent": self.agent,
            "true_relation": format_relation(self.profile[self.agent]),
            "misreport": format_relation(self.misreport),
            "profile": str(self.profile),
            "truthful": format_lottery(self.truthful),
            "truthful_exact": lottery_json(self.truthful),
            "deviation": format_lottery(self.deviation),
            "deviation_exact": lottery_json(self.deviation),
            "deviation_vs_truthful": self.verdict.value,
        }


def _search(sds, profile, agents, misreports, violates, kind):
    truthful = sds(profile)
    agents = profile.agents if agents is None else agents
    if misreports is None:
        misreports = list(enumerate_weak_orders(profile.universe))
    for agent in agents:
        true_rel = profile[agent]
        for rel in misreports:
            if rel == true_rel:
                continue
            deviation = sds(profile.replace(agent, rel))
            verdict = sd_compare(true_rel, deviation, truthful)
            if violates(verdict):
                return ManipulationWitness(agent, profile, rel, truthful, deviation, kind, verdict)
    return None


def find_sd_manipulation(sds, profile: Profile, agents=None, misreports=None) -> ManipulationWitness | None:
    """First (agent, misreport) whose outcome strictly SD-dominates the truthful one.

    Agents are tried in the given order (default: ascending id), misreports
    in canonical weak-order enumeration order.
    """
    return _search(sds, profile, agents, misreports, lambda v: v is SdVerdict.STRICTLY_DOMINATES, SD_MANIPULATION)


def check_strong_sd_sp(sds, profile: Profile, agents=None, misreports=None) -> ManipulationWitness | None:
    """Like :func:`find_sd_manipulation` but incomparable outcomes also count."""
    return _search(
        sds,
        profile,
        agents,
        misreports,
        lambda v: v in (SdVerdict.STRICTLY_DOMINATES, SdVerdict.INCOMPARABLE),
        STRONG_SD_VIOLATION,
    )


def all_profiles(n: int, universe: Sequence) -> Iterable[Profile]:
    relations = list(enumerate_weak_orders(universe))
    for combo in itertools.product(relations, repeat=n):
        yield Profile.from_relations(combo)


def _exhaust_chunk(args):
    sds, n, universe, first_index, strong = args
    relations = list(enumerate_weak_orders(universe))
    check = check_strong_sd_sp if strong else find_sd_manipulation
    for rest in itertools.product(relations, repeat=n - 1):
        profile = Profile.from_relations((relations[first_index],) + rest)
        witness = check(sds, profile, misreports=relations)
        if witness is not None:
            return witness
    return None


def exhaust_strategyproofness(sds, n: int, universe: Sequence, strong=True, workers=None):
    """Check every profile of ``n`` agents; return the canonical-first witness or None.

    Profiles are visited in lexicographic order of their relations.  With
    ``workers > 1`` chunks run in a process pool and the earliest chunk's
    witness wins, so the answer does not depend on ``workers``.
    """
    universe = tuple(universe)
    chunks = [(sds, n, universe, k, strong) for k in range(len(list(enumerate_weak_orders(universe))))]
    if not workers or workers <= 1:
        for chunk in chunks:
            witness = _exhaust_chunk(chunk)
            if witness is not None:
                return witness
        return None
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for witness in pool.map(_exhaust_chunk, chunks):
            if witness is not None:
                return witness
    return None


# ---------------------------------------------------------------------------
# anonymity and neutrality


@dataclass(frozen=True)
class SymmetryVerdict:
    """``f(pi(R)^sigma)(sigma(x)) == f(R)(x)`` for every x, or a failing ``x``."""

    holds: bool
    profile: Profile
    pi: Permutation
    sigma: Permutation
    original: Lottery
    permuted: Lottery
    alternative: str | None = None
    self_symmetric: bool = False

    def __bool__(self):
        return self.holds

    def reverify(self) -> bool:
        x = self.alternative
        return x is not None and self.original[x] != self.permuted[self.sigma(x)]

    def to_dict(self) -> dict:
        out = {
            "holds": self.holds,
            "pi": self.pi.cycles_text(),
            "sigma": self.sigma.cycles_text(),
            "self_symmetric": self.self_symmetric,
            "original": format_lottery(self.original),
            "original_exact": lottery_json(self.original),
            "permuted": format_lottery(self.permuted),
            "permuted_exact": lottery_json(self.permuted),
        }
        if self.alternative is not None:
            x = self.alternative
            out["alternative"] = x
            out["image"] = self.sigma(x)
            out["original_mass"] = fraction_json(self.original[x])
            out["permuted_mass"] = fraction_json(self.permuted[self.sigma(x)])
        return out


def check_anonymity_neutrality(sds, profile: Profile, pi: Permutation, sigma: Permutation) -> SymmetryVerdict:
    pi.check_domain(profile.agents)
    sigma.check_domain(profile.universe)
    moved = permute_agents(profile, pi).permute_alternatives(sigma)
    original = sds(profile)
    permuted = original if moved == profile else sds(moved)
    for x in profile.universe:
        if original[x] != permuted[sigma(x)]:
            return SymmetryVerdict(False, profile, pi, sigma, original, permuted, x, moved == profile)
    return SymmetryVerdict(True, profile, pi, sigma, original, permuted, None, moved == profile)
