import hashlib
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from conftest import ABCD
from rsdkit.analysis import check_sd_efficiency
from rsdkit.lotteries import Lottery, parse_lottery, uniform
from rsdkit.preferences import PreferenceRelation, Profile, format_profile, format_relation
from rsdkit.schemes import RD, RSD, AgentWithoutUniqueTop, SocialDecisionScheme, TabulatedScheme, constant_scheme
from rsdkit.theorem import (
    PROFILE_NAMES,
    OracleError,
    Property,
    check_rd_extension,
    fixture_text,
    lift_profile,
    load_fixture,
    replay,
    step_assertions,
)

HALF_AB = parse_lottery("1/2*a + 1/2*b", ABCD)
ABCDE = ABCD + ("e",)


def lot(text, universe=ABCD):
    return parse_lottery(text, universe)


def tabulated(**named):
    """Scheme returning the given lottery text on named fixtures and 1/2 a + 1/2 b elsewhere."""
    table = {load_fixture(name): lot(text) for name, text in named.items()}
    return TabulatedScheme(table, default=HALF_AB)


# ---------------------------------------------------------------------------
# fixtures


def test_fixture_examples():
    assert format_relation(load_fixture("R1")[3]) == "a~d > b > c"
    assert format_relation(load_fixture("R13")[4]) == "b > c > a > d"
    r7 = load_fixture("R7")
    assert r7[1] == r7[3]
    assert all(load_fixture(n).universe == ABCD for n in PROFILE_NAMES)


@pytest.mark.parametrize("name", PROFILE_NAMES + ("example",))
def test_fixture_files_are_canonical(name):
    assert format_profile(load_fixture(name)) == fixture_text(name)


def test_manipulation_steps_change_only_the_named_agent():
    for step in step_assertions():
        if step.kind != "manipulation":
            continue
        truth, dev = load_fixture(step.truth), load_fixture(step.deviation)
        differing = [i for i in truth.agents if truth[i] != dev[i]]
        assert differing == [step.agent], step.step


def test_every_failable_step_names_a_property():
    for step in step_assertions():
        if step.kind == "derived":
            assert step.attribution is None
        else:
            assert isinstance(step.attribution, Property)


# ---------------------------------------------------------------------------
# replay on concrete schemes


def test_replay_rsd():
    report = replay(RSD)
    assert report.violated is Property.SD_EFFICIENCY
    assert report.step == "R1-efficiency"
    assert report.witness.lottery == HALF_AB
    assert report.witness.strict_agents == (3, 4)
    assert report.reverify(RSD) and report.reverify()


def test_replay_uniform():
    sds = constant_scheme(uniform(ABCD, ABCD))
    report = replay(sds)
    assert report.violated is Property.SD_EFFICIENCY and report.profile_name == "R1"
    assert report.reverify(sds)


def test_replay_asymmetric_constant_scheme():
    sds = constant_scheme(lot("a"))
    report = replay(sds)
    assert report.violated is Property.ANONYMITY_NEUTRALITY and report.step == "R1-symmetry"
    assert report.witness.alternative == "a" and report.reverify(sds)


def test_replay_mock_reaching_r13():
    sds = tabulated(R11="1/2*b + 1/2*c", R12="1/2*b + 1/2*c", R13="1/4*a + 1/2*b + 1/4*c")
    report = replay(sds)
    assert report.violated is Property.SD_STRATEGYPROOFNESS and report.step == "R13-sp"
    assert report.witness.agent == 4
    assert report.witness.misreport == load_fixture("R12")[4]
    assert report.reverify(sds)
    assert [line for line in report.transcript if line.startswith("[FAIL]")] == [
        "[FAIL] R13-sp: agent 4 cannot gain by reporting their R12 relation"]


def test_replay_mock_failing_r8_lower():
    sds = tabulated(R8="a")
    report = replay(sds)
    assert report.violated is Property.SD_STRATEGYPROOFNESS and report.step == "R8-lower"
    assert report.witness.agent == 4 and report.witness.deviation_profile == load_fixture("R2")
    assert report.reverify(sds)


def test_replay_mock_entering_the_branch():
    sds = tabulated(R3="3/4*a + 1/4*b")
    report = replay(sds)
    assert report.step == "R4-sp" and report.violated is Property.SD_STRATEGYPROOFNESS
    assert any("entered" in line for line in report.transcript)
    assert report.reverify(sds)


def test_replay_mock_violating_rd_extension():
    sds = tabulated(R11="1/2*b + 1/2*c", R12="1/2*b + 1/2*c", R13="1/2*b + 1/2*c")
    report = replay(sds)
    assert report.violated is Property.RD_EXTENSION and report.step == "R13-rd"
    assert report.reverify(sds)


def test_replay_mock_ex_post_failure():
    sds = tabulated(R10="1/2*a + 1/4*b + 1/4*d")
    report = replay(sds)
    assert report.violated is Property.EX_POST_EFFICIENCY and report.step == "R10-pareto"
    assert (report.witness.dominated, report.witness.dominator) == ("d", "a")
    assert report.reverify(sds)


def _hashed_lottery(profile):
    """Deterministic pseudo-random lottery keyed on the profile text."""
    digest = hashlib.sha256(format_profile(profile).encode()).digest()
    weights = [digest[k] % 5 for k in range(4)]
    if not any(weights):
        weights[0] = 1
    return Lottery(ABCD, tuple(F(w, sum(weights)) for w in weights))


def _hashed_mixture(profile):
    """RSD or 1/2 a + 1/2 b, chosen by a hash bit of the profile."""
    bit = hashlib.sha256(format_profile(profile).encode()).digest()[0] % 2
    return RSD(profile) if bit else HALF_AB


@pytest.mark.parametrize("fn", [_hashed_lottery, _hashed_mixture])
def test_replay_never_lets_a_scheme_through(fn):
    sds = SocialDecisionScheme(fn.__name__, fn)
    report = replay(sds)
    assert report.violated is not None
    assert report.reverify(sds)


@settings(max_examples=25, deadline=None)
@given(st.dictionaries(st.sampled_from(PROFILE_NAMES),
                       st.sampled_from(["1/2*a + 1/2*b", "1/2*b + 1/2*c", "a", "b", "1/4*a + 1/2*b + 1/4*c",
                                        "3/4*a + 1/4*b", "1/4*a + 1/4*b + 1/4*c + 1/4*d"])))
def test_replay_convicts_random_tables(table):
    sds = tabulated(**table)
    report = replay(sds)
    assert report.violated is not None
    assert report.reverify(sds)


def test_replay_rejects_small_settings():
    with pytest.raises(ValueError):
        replay(RSD, n=3)
    with pytest.raises(ValueError):
        replay(RSD, universe=("a", "b", "c", "e"))


def test_broken_oracle_raises_oracle_error():
    sds = SocialDecisionScheme("broken", lambda p: lot("a", ("a", "b")))
    with pytest.raises(OracleError) as info:
        replay(sds)
    assert info.value.step == "R1-symmetry"


def test_text_report_lists_witness_and_transcript():
    text = replay(RSD).format_text()
    assert "violated property: SdEfficiency" in text
    assert "failed step: R1-efficiency" in text
    assert "f(R1) = 7/24*a + 7/24*b + 5/24*c + 5/24*d" in text


# ---------------------------------------------------------------------------
# RD extension and lifting


def test_rd_extension_examples():
    assert check_rd_extension(RD, load_fixture("R13")).holds
    assert check_rd_extension(RSD, load_fixture("R13")).holds
    verdict = check_rd_extension(constant_scheme(HALF_AB), load_fixture("R13"))
    assert not verdict.holds and verdict.reverify()
    with pytest.raises(AgentWithoutUniqueTop):
        check_rd_extension(RSD, load_fixture("R1"))


def test_lift_identity():
    r1 = load_fixture("R1")
    assert lift_profile(r1, 4, ABCD) == r1


def test_lift_example():
    lifted = lift_profile(load_fixture("R1"), 5, ABCDE)
    assert format_relation(lifted[1]) == "a~c > b~d > e"
    assert format_relation(lifted[5]) == "a~b~c~d~e"
    with pytest.raises(ValueError):
        lift_profile(load_fixture("R1"), 3, ABCD)
    with pytest.raises(ValueError):
        lift_profile(load_fixture("R1"), 4, ("a", "b", "c"))


@pytest.mark.parametrize("n, universe", [(6, ABCDE), (4, ABCDE), (5, ABCD)])
def test_lifted_replay_rsd(n, universe):
    report = replay(RSD, n, universe)
    assert report.lifted and report.violated is Property.SD_EFFICIENCY
    assert report.profile.universe == universe and len(report.profile) == n
    assert report.reverify(RSD)


def test_lifted_replay_support_outside_base():
    sds = SocialDecisionScheme("uniform", lambda p: uniform(set(p.universe), p.universe))
    report = replay(sds, 6, ABCDE)
    assert report.step == "lift-support" and report.profile_name == "R1"
    assert report.lottery["e"] > 0
    assert report.reverify(sds)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(PROFILE_NAMES), st.lists(st.integers(0, 6), min_size=4, max_size=4), st.integers(1, 6))
def test_mass_outside_base_is_inefficient(name, base_weights, extra):
    lifted = lift_profile(load_fixture(name), 6, ABCDE)
    weights = base_weights + [extra]
    q = Lottery(ABCDE, tuple(F(w, sum(weights)) for w in weights))
    verdict = check_sd_efficiency(lifted, q)
    assert not verdict.efficient and verdict.reverify(lifted, q)
    assert verdict.lottery["e"] == 0


@pytest.mark.parametrize("extras", [("f", "e"), (("e", "f"),)])
def test_outside_mass_is_inefficient_for_other_extra_orders(extras):
    """The bottom ranking of the added alternatives is a free choice; the support property does not depend on it."""
    universe = ABCD + ("e", "f")
    tail = tuple(frozenset([x]) if isinstance(x, str) else frozenset(x) for x in extras)
    for name in PROFILE_NAMES:
        base = lift_profile(load_fixture(name), 6, universe)
        entries = [(i, PreferenceRelation(universe, load_fixture(name)[i].classes + tail)) for i in (1, 2, 3, 4)]
        profile = Profile(tuple(entries) + tuple(e for e in base if e[0] > 4))
        q = Lottery(universe, (F(1, 6),) * 6)
        assert not check_sd_efficiency(profile, q).efficient
