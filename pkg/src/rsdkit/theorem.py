"""Mechanical replay of the impossibility argument for RD extensions.

The argument walks thirteen 4-agent/4-alternative profiles R1..R13 and
pins down ``p_k = f(R_k)`` step by step.  Any scheme that is anonymous,
neutral, SD-efficient, SD-strategyproof and agrees with RD on R13 would
pass every step, and the last step can never pass.  :func:`replay` runs
the chain against a concrete scheme and returns the first failed step
together with a witness that re-verifies independently.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Callable

from .analysis import (
    SD_MANIPULATION,
    EfficiencyVerdict,
    ManipulationWitness,
    SymmetryVerdict,
    check_anonymity_neutrality,
    check_sd_efficiency,
    lottery_json,
    pareto_dominates,
    sd_dominates_for_all,
)
from .lotteries import Lottery, LotteryError, SdVerdict, format_lottery, parse_lottery, sd_compare, support
from .preferences import Permutation, PreferenceRelation, Profile, format_profile, parse_profile
from .schemes import AgentWithoutUniqueTop, SocialDecisionScheme, rd

BASE_UNIVERSE = ("a", "b", "c", "d")
BASE_AGENTS = (1, 2, 3, 4)
PROFILE_NAMES = tuple(f"R{k}" for k in range(1, 14))
HALF = Fraction(1, 2)


class ProofReplayError(RuntimeError):
    """A step failed but its witness did not verify; the chain itself is broken."""


class OracleError(RuntimeError):
    """The scheme under test raised or returned an invalid lottery."""

    def __init__(self, step, profile_name, cause):
        self.step = step
        self.profile_name = profile_name
        self.cause = cause
        super().__init__(f"step {step}: evaluating the scheme on {profile_name} failed: {cause}")


class Property(enum.Enum):
    ANONYMITY_NEUTRALITY = "Anonymity+Neutrality"
    EX_POST_EFFICIENCY = "ExPostEfficiency"
    SD_EFFICIENCY = "SdEfficiency"
    SD_STRATEGYPROOFNESS = "SdStrategyproofness"
    RD_EXTENSION = "RdExtension"


# ---------------------------------------------------------------------------
# fixtures


def fixture_text(name: str) -> str:
    return resources.files("rsdkit").joinpath("fixtures", f"{name}.prof").read_text()


@lru_cache(maxsize=None)
def load_fixture(name: str) -> Profile:
    return parse_profile(fixture_text(name), BASE_UNIVERSE)


def proof_profiles() -> dict:
    """R1..R13 keyed by name."""
    return {name: load_fixture(name) for name in PROFILE_NAMES}


# ---------------------------------------------------------------------------
# RD extension and lifting


@dataclass(frozen=True)
class RdExtensionVerdict:
    holds: bool
    profile: Profile
    expected: Lottery
    actual: Lottery

    def __bool__(self):
        return self.holds

    def reverify(self) -> bool:
        return rd(self.profile) == self.expected and self.expected != self.actual

    def to_dict(self) -> dict:
        return {
            "holds": self.holds,
            "rd": format_lottery(self.expected),
            "rd_exact": lottery_json(self.expected),
            "scheme": format_lottery(self.actual),
            "scheme_exact": lottery_json(self.actual),
        }


def check_rd_extension(sds, profile: Profile) -> RdExtensionVerdict:
    """Does ``sds`` agree with RD on ``profile``?

    Raises :class:`AgentWithoutUniqueTop` outside RD's domain.
    """
    expected = rd(profile)
    actual = sds(profile)
    return RdExtensionVerdict(expected == actual, profile, expected, actual)


def lift_relation(rel: PreferenceRelation, universe) -> PreferenceRelation:
    """Keep ``rel`` on its own alternatives and rank the new ones below, one class each."""
    universe = tuple(universe)
    extra = [x for x in universe if x not in rel.universe]
    return PreferenceRelation(universe, rel.classes + tuple(frozenset([x]) for x in extra))


def lift_profile(base: Profile, n: int, universe) -> Profile:
    """Embed ``base`` into ``n`` agents and a larger universe.

    Base agents keep their relation on the old alternatives and put every
    new alternative below, in universe order.  Added agents are
    indifferent between everything.
    """
    universe = tuple(universe)
    missing = set(base.universe) - set(universe)
    if missing:
        raise ValueError(f"universe lacks base alternatives {sorted(missing)}")
    if n < len(base):
        raise ValueError(f"cannot lift {len(base)} agents into {n}")
    entries = [(i, lift_relation(rel, universe)) for i, rel in base]
    indifferent = PreferenceRelation(universe, (frozenset(universe),))
    next_id = max(base.agents) + 1
    entries += [(next_id + k, indifferent) for k in range(n - len(base))]
    return Profile(tuple(entries))


def extend_lottery(p: Lottery, universe) -> Lottery:
    return Lottery.from_mapping(tuple(universe), p.as_dict())


class _OutsideSupport(Exception):
    def __init__(self, lifted: Profile, lottery: Lottery):
        self.lifted = lifted
        self.lottery = lottery
        self.name = None


class InducedScheme:
    """``f'(R) = f(lift(R))`` projected back onto the base alternatives."""

    def __init__(self, sds, n, universe):
        self.sds = sds
        self.n = n
        self.universe = tuple(universe)

    def lift(self, profile: Profile) -> Profile:
        return lift_profile(profile, self.n, self.universe)

    def __call__(self, profile: Profile) -> Lottery:
        lifted = self.lift(profile)
        q = self.sds(lifted)
        if not support(q) <= set(profile.universe):
            raise _OutsideSupport(lifted, q)
        return Lottery.from_mapping(profile.universe, {x: q[x] for x in profile.universe})


# ---------------------------------------------------------------------------
# proof steps

SYMMETRY = "symmetry"
SD_EFFICIENCY = "sd-efficiency"
EX_POST = "ex-post"
MANIPULATION = "manipulation"
RD_EXT = "rd-extension"
DERIVED = "derived"

_PROPERTY_OF = {
    SYMMETRY: Property.ANONYMITY_NEUTRALITY,
    SD_EFFICIENCY: Property.SD_EFFICIENCY,
    EX_POST: Property.EX_POST_EFFICIENCY,
    MANIPULATION: Property.SD_STRATEGYPROOFNESS,
    RD_EXT: Property.RD_EXTENSION,
    DERIVED: None,
}


@dataclass(frozen=True)
class StepAssertion:
    """One claim about the lotteries ``p[name]`` and how to convict a scheme that breaks it.

    ``kind`` selects the witness: ``symmetry`` uses ``pi``/``sigma`` on
    ``profile``; ``sd-efficiency`` tries ``dominator`` first and falls back
    to the LP checker; ``ex-post`` names ``dominator`` over the
    ``dominated`` alternatives; ``manipulation`` has ``agent`` in
    ``truth`` report their relation from ``deviation``; ``derived`` facts
    follow from earlier steps and cannot fail on a valid lottery.
    """

    step: str
    profile: str
    statement: str
    kind: str
    holds: Callable | None = None
    pi: str = ""
    sigma: str = ""
    dominator: str = ""
    dominated: tuple = ()
    agent: int = 0
    truth: str = ""
    deviation: str = ""
    branch: bool = False

    @property
    def attribution(self) -> Property | None:
        return _PROPERTY_OF[self.kind]

    @property
    def profiles_used(self) -> tuple:
        names = [self.profile, self.truth, self.deviation]
        return tuple(dict.fromkeys(n for n in names if n))


def _manip(step, profile, statement, holds, agent, truth, deviation, branch=False):
    return StepAssertion(step, profile, statement, MANIPULATION, holds, agent=agent,
                         truth=truth, deviation=deviation, branch=branch)


def _sym(step, profile, statement, pi, sigma, branch=False):
    return StepAssertion(step, profile, statement, SYMMETRY, None, pi=pi, sigma=sigma, branch=branch)


def _zero(name, *xs):
    return lambda p: all(p[name][x] == 0 for x in xs)


@lru_cache(maxsize=None)
def step_assertions() -> tuple:
    """The chain in replay order."""
    S = []
    for name in ("R1", "R2"):
        S.append(_sym(f"{name}-symmetry", name, f"p{name[1:]}(a) = p{name[1:]}(b) and p{name[1:]}(c) = p{name[1:]}(d)",
                      "(1 2)(3 4)", "(a b)(c d)"))
        S.append(StepAssertion(f"{name}-efficiency", name, f"p{name[1:]}(c) = p{name[1:]}(d) = 0, so p{name[1:]} = 1/2 a + 1/2 b",
                               SD_EFFICIENCY, _zero(name, "c", "d"), dominator="1/2*a + 1/2*b"))
    S.append(_sym("R3-symmetry", "R3", "p3(c) = p3(d)", "(1 3)(2 4)", "(c d)"))
    S.append(StepAssertion("R3-efficiency", "R3", "p3(c) = p3(d) = 0", SD_EFFICIENCY, _zero("R3", "c", "d")))

    # contradiction branch, entered only when p3(a) > 1/2
    S.append(_manip("R4-sp", "R4", "p4(a) > 1/2", lambda p: p["R4"]["a"] > HALF, 1, "R4", "R3", True))
    S.append(_manip("R5-sp", "R5", "p5(a) > 1/2", lambda p: p["R5"]["a"] > HALF, 3, "R5", "R4", True))
    S.append(StepAssertion("R5-pareto", "R5", "p5(c) = p5(d) = 0 (b Pareto-dominates c and d)", EX_POST,
                           _zero("R5", "c", "d"), dominator="b", dominated=("c", "d"), branch=True))
    S.append(StepAssertion("R6-pareto", "R6", "p6(c) = p6(d) = 0 (b Pareto-dominates c and d)", EX_POST,
                           _zero("R6", "c", "d"), dominator="b", dominated=("c", "d"), branch=True))
    S.append(_manip("R6-sp", "R6", "p6(a) > 1/2", lambda p: p["R6"]["a"] > HALF, 2, "R5", "R6", True))
    S.append(StepAssertion("R7-pareto", "R7", "p7(c) = p7(d) = 0 (b Pareto-dominates c and d)", EX_POST,
                           _zero("R7", "c", "d"), dominator="b", dominated=("c", "d"), branch=True))
    S.append(_manip("R7-sp", "R7", "p7(a) > 1/2", lambda p: p["R7"]["a"] > HALF, 4, "R6", "R7", True))
    S.append(_sym("R7-symmetry", "R7", "p7(a) = p7(b)", "(1 2)(3 4)", "(a b)", branch=True))

    S.append(StepAssertion("R3-upper", "R3", "p3(a) + p3(c) <= 1/2", DERIVED,
                           lambda p: p["R3"]["a"] + p["R3"]["c"] <= HALF))

    bc8 = lambda p: p["R8"]["b"] + p["R8"]["c"]
    S.append(_manip("R8-upper", "R8", "p8(b) + p8(c) <= 1/2", lambda p: bc8(p) <= HALF, 3, "R8", "R1"))
    S.append(_manip("R8-lower", "R8", "p8(b) + p8(c) >= 1/2", lambda p: bc8(p) >= HALF, 4, "R8", "R2"))
    S.append(_manip("R8-d", "R8", "p8(d) = 0", _zero("R8", "d"), 4, "R8", "R2"))
    S.append(StepAssertion("R8-a", "R8", "p8(a) = 1/2", DERIVED, lambda p: p["R8"]["a"] == HALF))

    S.append(_manip("R9-upper", "R9", "p9(a) + p9(c) <= 1/2",
                    lambda p: p["R9"]["a"] + p["R9"]["c"] <= HALF, 2, "R9", "R3"))
    S.append(_manip("R9-a", "R9", "p9(a) >= 1/2", lambda p: p["R9"]["a"] >= HALF, 1, "R9", "R8"))
    S.append(_manip("R8-c", "R8", "p8(c) = 0", _zero("R8", "c"), 1, "R9", "R8"))
    S.append(StepAssertion("R8-value", "R8", "p8 = 1/2 a + 1/2 b", DERIVED,
                           lambda p: p["R8"]["a"] == HALF and p["R8"]["b"] == HALF))

    S.append(StepAssertion("R10-pareto", "R10", "p10(d) = 0 (a Pareto-dominates d)", EX_POST,
                           _zero("R10", "d"), dominator="a", dominated=("d",)))
    S.append(_manip("R10-b-upper", "R10", "p10(b) <= 1/2", lambda p: p["R10"]["b"] <= HALF, 2, "R8", "R10"))
    S.append(_manip("R10-b-lower", "R10", "p10(b) >= 1/2", lambda p: p["R10"]["b"] >= HALF, 2, "R10", "R8"))

    S.append(StepAssertion("R11-pareto", "R11", "p11(d) = 0 (a Pareto-dominates d)", EX_POST,
                           _zero("R11", "d"), dominator="a", dominated=("d",)))
    S.append(_manip("R11-b", "R11", "p11(b) >= 1/2", lambda p: p["R11"]["b"] >= HALF, 1, "R10", "R11"))

    S.append(StepAssertion("R12-pareto", "R12", "p12(d) = 0 (a Pareto-dominates d)", EX_POST,
                           _zero("R12", "d"), dominator="a", dominated=("d",)))
    S.append(_sym("R12-symmetry", "R12", "p12(b) = p12(c)", "(1 2)", "(b c)"))
    S.append(_manip("R12-c-lower", "R12", "p12(c) >= p11(c)",
                    lambda p: p["R12"]["c"] >= p["R11"]["c"], 1, "R12", "R11"))
    S.append(_manip("R12-c-upper", "R12", "p12(c) <= p11(c)",
                    lambda p: p["R12"]["c"] <= p["R11"]["c"], 1, "R11", "R12"))
    S.append(_manip("R12-a", "R12", "p12(a) <= p11(a)",
                    lambda p: p["R12"]["a"] <= p["R11"]["a"], 1, "R11", "R12"))
    S.append(StepAssertion("R12-value", "R12", "p12 = 1/2 b + 1/2 c", DERIVED,
                           lambda p: p["R12"]["b"] == HALF and p["R12"]["c"] == HALF))

    S.append(StepAssertion("R13-rd", "R13", "p13 = rd(R13) = 1/4 a + 1/2 b + 1/4 c", RD_EXT))
    S.append(_manip("R13-sp", "R13", "agent 4 cannot gain by reporting their R12 relation",
                    lambda p: sd_compare(load_fixture("R13")[4], p["R12"], p["R13"]) is not SdVerdict.STRICTLY_DOMINATES,
                    4, "R13", "R12"))
    return tuple(S)


def symmetry_permutations(step: StepAssertion) -> tuple:
    return Permutation.from_cycles(step.pi, int), Permutation.from_cycles(step.sigma)


# ---------------------------------------------------------------------------
# replay


@dataclass
class ViolationReport:
    """First failed step of the chain and its witness.

    ``violated`` is None only when the chain could not be closed (see
    ``note``); this cannot happen for 4-agent schemes.
    """

    scheme: str
    violated: Property | None
    step: str | None
    statement: str
    profile_name: str | None
    profile: Profile | None
    witness: object
    lottery: Lottery | None = None
    transcript: list = field(default_factory=list)
    lotteries: dict = field(default_factory=dict)
    lifted: bool = False
    note: str = ""

    def reverify(self, sds=None) -> bool:
        """Re-check the witness with the analysis checkers; with ``sds`` also re-evaluate it."""
        w = self.witness
        if self.violated is Property.ANONYMITY_NEUTRALITY:
            if not w.reverify():
                return False
            if sds is not None:
                again = check_anonymity_neutrality(sds, w.profile, w.pi, w.sigma)
                return not again.holds
            return True
        if self.violated in (Property.SD_EFFICIENCY, Property.EX_POST_EFFICIENCY):
            if sds is not None and sds(self.profile) != self.lottery:
                return False
            if not w.reverify(self.profile, self.lottery):
                return False
            if self.violated is Property.SD_EFFICIENCY:
                return not check_sd_efficiency(self.profile, self.lottery).efficient
            return True
        if self.violated is Property.SD_STRATEGYPROOFNESS:
            differing = [i for i in w.profile.agents if w.profile[i] != w.deviation_profile[i]]
            return differing == [w.agent] and w.reverify(sds)
        if self.violated is Property.RD_EXTENSION:
            if sds is not None and sds(w.profile) != w.actual:
                return False
            return w.reverify()
        return False

    def to_dict(self) -> dict:
        out = {
            "scheme": self.scheme,
            "violated_property": self.violated.value if self.violated else None,
            "step": self.step,
            "statement": self.statement,
            "profile_name": self.profile_name,
            "lifted": self.lifted,
            "witness": self.witness.to_dict() if self.witness is not None else None,
            "lotteries": {k: lottery_json(v) for k, v in self.lotteries.items()},
            "transcript": list(self.transcript),
        }
        if self.profile is not None:
            out["profile"] = format_profile(self.profile)
        if self.lottery is not None:
            out["lottery"] = format_lottery(self.lottery)
            out["lottery_exact"] = lottery_json(self.lottery)
        if self.note:
            out["note"] = self.note
        return out

    def format_text(self) -> str:
        lines = [f"scheme: {self.scheme}"]
        if self.violated is None:
            lines.append(f"no violation established: {self.note}")
        else:
            lines.append(f"violated property: {self.violated.value}")
            lines.append(f"failed step: {self.step} ({self.statement})")
            if self.profile is not None:
                lines.append(f"profile {self.profile_name}{' (lifted)' if self.lifted else ''}:")
                lines += ["  " + line for line in format_profile(self.profile).splitlines()]
            lines.append("witness:")
            lines += [f"  {k}: {v}" for k, v in self.witness.to_dict().items() if k != "profile"]
        lines.append("transcript:")
        lines += ["  " + t for t in self.transcript]
        return "\n".join(lines) + "\n"


class _Evaluator:
    def __init__(self, sds, profiles, transcript):
        self.sds = sds
        self.profiles = profiles
        self.values = {}
        self.transcript = transcript
        self.step = "start"

    def __getitem__(self, name) -> Lottery:
        if name not in self.values:
            try:
                value = self.sds(self.profiles[name])
            except _OutsideSupport as out:
                out.name = name
                raise
            except (LotteryError, ValueError, KeyError, TypeError) as exc:
                raise OracleError(self.step, name, exc) from exc
            self.values[name] = value
            self.transcript.append(f"f({name}) = {format_lottery(value)}")
        return self.values[name]


def _verify_manipulation(step, p, profiles) -> ManipulationWitness:
    truth = profiles[step.truth]
    misreport = profiles[step.deviation][step.agent]
    if truth.replace(step.agent, misreport) != profiles[step.deviation]:
        raise ProofReplayError(f"{step.step}: {step.truth} and {step.deviation} differ beyond agent {step.agent}")
    truthful, deviation = p[step.truth], p[step.deviation]
    verdict = sd_compare(truth[step.agent], deviation, truthful)
    if verdict is not SdVerdict.STRICTLY_DOMINATES:
        raise ProofReplayError(f"{step.step}: expected a strict SD improvement, got {verdict.value}")
    return ManipulationWitness(step.agent, truth, misreport, truthful, deviation, SD_MANIPULATION, verdict)


def _efficiency_witness(step, profile, lottery, transcript) -> EfficiencyVerdict:
    lp_verdict = check_sd_efficiency(profile, lottery)
    if lp_verdict.efficient:
        raise ProofReplayError(f"{step.step}: LP checker finds {format_lottery(lottery)} SD-efficient")
    transcript.append(f"  LP checker confirms inefficiency; LP dominator {format_lottery(lp_verdict.lottery)}")
    if step.dominator:
        q = parse_lottery(step.dominator, profile.universe)
        ok, strict = sd_dominates_for_all(profile, q, lottery)
        if ok and strict:
            return EfficiencyVerdict("sd", False, lottery=q, strict_agents=strict)
        transcript.append(f"  {step.dominator} does not dominate here; using the LP dominator")
    return lp_verdict


def _convict(step, p, profiles, sds, transcript):
    """Build ``(property, profile, checked lottery, witness)`` for a failed step."""
    if step.kind == SYMMETRY:
        pi, sigma = symmetry_permutations(step)
        verdict = check_anonymity_neutrality(sds, profiles[step.profile], pi, sigma)
        return Property.ANONYMITY_NEUTRALITY, profiles[step.profile], None, verdict
    if step.kind == SD_EFFICIENCY:
        profile, lottery = profiles[step.profile], p[step.profile]
        return Property.SD_EFFICIENCY, profile, lottery, _efficiency_witness(step, profile, lottery, transcript)
    if step.kind == EX_POST:
        profile, lottery = profiles[step.profile], p[step.profile]
        for x in step.dominated:
            if lottery[x] > 0:
                if not pareto_dominates(profile, step.dominator, x):
                    raise ProofReplayError(f"{step.step}: {step.dominator} does not Pareto-dominate {x}")
                return Property.EX_POST_EFFICIENCY, profile, lottery, EfficiencyVerdict(
                    "ex-post", False, dominated=x, dominator=step.dominator)
        raise ProofReplayError(f"{step.step}: no dominated alternative carries mass")
    if step.kind == MANIPULATION:
        return Property.SD_STRATEGYPROOFNESS, profiles[step.truth], None, _verify_manipulation(step, p, profiles)
    raise ProofReplayError(f"derived step {step.step} failed: {step.statement}")


def _evaluate_step(step, p, profiles, sds, induced):
    if step.kind == SYMMETRY:
        pi, sigma = symmetry_permutations(step)
        p[step.profile]
        return check_anonymity_neutrality(sds, profiles[step.profile], pi, sigma).holds, None
    if step.kind == RD_EXT:
        target = profiles[step.profile] if induced is None else induced.lift(profiles[step.profile])
        p[step.profile]
        verdict = check_rd_extension(induced.sds if induced else sds, target)
        return verdict.holds, verdict
    for used in step.profiles_used:
        p[used]
    return step.holds(p), None


def _replay_base(sds, name, induced=None) -> ViolationReport:
    profiles = proof_profiles()
    transcript = []
    p = _Evaluator(sds, profiles, transcript)
    branch = None

    def report(prop, step, profile, lottery, witness, note=""):
        return ViolationReport(name, prop, step.step if step else None, step.statement if step else "",
                               step.profile if step else None, profile, witness, lottery, transcript,
                               dict(p.values), induced is not None, note)

    for step in step_assertions():
        p.step = step.step
        if step.branch:
            if branch is None:
                branch = p["R3"]["a"] > HALF
                transcript.append(f"p3(a) = {p['R3']['a']}: contradiction branch R4-R7 "
                                  f"{'entered' if branch else 'skipped'}")
            if not branch:
                continue
        if step.kind == RD_EXT and induced is not None and induced.n > len(BASE_AGENTS):
            transcript.append(f"[skip] {step.step}: lifted {step.profile} has indifferent agents, outside RD's domain")
            continue
        try:
            ok, rd_verdict = _evaluate_step(step, p, profiles, sds, induced)
        except (_OutsideSupport, OracleError):
            raise
        except (LotteryError, ValueError, KeyError, TypeError) as exc:
            raise OracleError(step.step, step.profile, exc) from exc
        transcript.append(f"[{'ok' if ok else 'FAIL'}] {step.step}: {step.statement}")
        if ok:
            continue
        if step.kind == RD_EXT:
            return report(Property.RD_EXTENSION, step, rd_verdict.profile, None, rd_verdict)
        prop, profile, lottery, witness = _convict(step, p, profiles, sds, transcript)
        return report(prop, step, profile, lottery, witness)
    return report(None, None, None, None, None,
                  note="every step held; with more than four agents the RD step cannot be applied to the lifted R13")


def _lift_report(report: ViolationReport, induced: InducedScheme) -> ViolationReport:
    """Restate a base-level report on the lifted profiles."""
    universe = induced.universe
    w = report.witness
    if report.violated is Property.ANONYMITY_NEUTRALITY:
        w = check_anonymity_neutrality(induced.sds, induced.lift(w.profile), w.pi, w.sigma)
        report.profile = w.profile
    elif report.violated in (Property.SD_EFFICIENCY, Property.EX_POST_EFFICIENCY):
        report.profile = induced.lift(report.profile)
        report.lottery = extend_lottery(report.lottery, universe)
        if w.lottery is not None:
            ok, strict = sd_dominates_for_all(report.profile, extend_lottery(w.lottery, universe), report.lottery)
            w = EfficiencyVerdict(w.notion, False, lottery=extend_lottery(w.lottery, universe), strict_agents=strict)
    elif report.violated is Property.SD_STRATEGYPROOFNESS:
        w = ManipulationWitness(w.agent, induced.lift(w.profile), lift_relation(w.misreport, universe),
                                extend_lottery(w.truthful, universe), extend_lottery(w.deviation, universe),
                                w.kind, w.verdict)
        report.profile = w.profile
    report.witness = w
    report.lifted = True
    return report


def replay(sds, n: int = 4, universe=BASE_UNIVERSE) -> ViolationReport:
    """Run the proof chain against ``sds`` and report the first violation.

    With ``n > 4`` agents or more alternatives, every fixture is lifted
    (see :func:`lift_profile`) and the chain runs on the induced scheme;
    the returned witness refers to the lifted profiles.
    """
    if not isinstance(sds, SocialDecisionScheme):
        sds = SocialDecisionScheme(getattr(sds, "__name__", "scheme"), sds)
    universe = tuple(universe)
    if n < len(BASE_AGENTS) or not set(BASE_UNIVERSE) <= set(universe):
        raise ValueError("replay needs at least 4 agents and a universe containing a, b, c, d")
    if n == len(BASE_AGENTS) and universe == BASE_UNIVERSE:
        return _replay_base(sds, sds.name)

    induced = InducedScheme(sds, n, universe)
    base_sds = SocialDecisionScheme(f"{sds.name} (lifted to n={n}, m={len(universe)})", induced)
    try:
        result = _replay_base(base_sds, base_sds.name, induced)
    except _OutsideSupport as out:
        verdict = check_sd_efficiency(out.lifted, out.lottery)
        step = StepAssertion("lift-support", "", "only lotteries over a, b, c, d are SD-efficient", SD_EFFICIENCY)
        return ViolationReport(base_sds.name, Property.SD_EFFICIENCY, step.step, step.statement, out.name,
                               out.lifted, verdict, out.lottery,
                               [f"f(lifted {out.name}) = {format_lottery(out.lottery)}"], {}, True)
    if result.violated is None or result.violated is Property.RD_EXTENSION:
        result.lifted = True
        return result
    return _lift_report(result, induced)
