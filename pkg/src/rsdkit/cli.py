"""Command-line interface.

Exit codes: 0 check passed or evaluation done, 1 violation or
inefficiency found, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import analysis, theorem
from .lotteries import LotteryError, format_lottery, parse_lottery
from .preferences import (
    Permutation,
    PermutationError,
    PreferenceParseError,
    enumerate_weak_orders,
    format_profile,
    format_relation,
    parse_profile,
)
from .schemes import AgentWithoutUniqueTop, get_scheme, load_table

OK, VIOLATION, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _alternatives(text):
    if text is None:
        return None
    items = tuple(t.strip() for t in text.split(",") if t.strip())
    if not items or len(set(items)) != len(items):
        raise UsageError(f"bad --alternatives list {text!r}")
    return items


def _load_profile(args):
    if not args.profile:
        raise UsageError("--profile is required")
    path = Path(args.profile)
    if not path.exists():
        raise UsageError(f"profile file not found: {path}")
    return parse_profile(path.read_text(), _alternatives(getattr(args, "alternatives", None)))


def _scheme(args):
    if getattr(args, "table", None):
        return load_table(args.table)
    if not args.scheme:
        raise UsageError("--scheme or --table is required")
    try:
        return get_scheme(args.scheme)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None


def _emit(args, structured, text):
    if args.format == "structured":
        print(json.dumps(structured, indent=2, sort_keys=True))
    else:
        print(text.rstrip("\n"))


def cmd_eval(args):
    profile = _load_profile(args)
    sds = _scheme(args)
    p = sds(profile)
    _emit(args, {"scheme": sds.name, "lottery": format_lottery(p), "lottery_exact": analysis.lottery_json(p)},
          format_lottery(p))
    return OK


def _lottery_arg(args, universe):
    if not args.lottery:
        raise UsageError("--lottery is required")
    return parse_lottery(args.lottery, universe)


def cmd_check_expost(args):
    profile = _load_profile(args)
    p = _lottery_arg(args, profile.universe)
    verdict = analysis.check_ex_post(profile, p)
    if verdict.efficient:
        text = f"ex post efficient: {format_lottery(p)}"
    else:
        text = (f"ex post inefficient: {verdict.dominated} has probability {p[verdict.dominated]} "
                f"but is Pareto-dominated by {verdict.dominator}")
    _emit(args, {"property": "ExPostEfficiency", "lottery": format_lottery(p), **verdict.to_dict()}, text)
    return OK if verdict.efficient else VIOLATION


def cmd_check_sdeff(args):
    profile = _load_profile(args)
    p = _lottery_arg(args, profile.universe)
    verdict = analysis.check_sd_efficiency(profile, p)
    out = {"property": "SdEfficiency", "lottery": format_lottery(p), **verdict.to_dict()}
    if verdict.efficient:
        text = f"SD-efficient: {format_lottery(p)}"
    else:
        text = (f"SD-inefficient: {format_lottery(verdict.lottery)} dominates {format_lottery(p)}; "
                f"strict for agents {', '.join(map(str, verdict.strict_agents))}")
        out["reverified"] = verdict.reverify(profile, p)
    if args.max_denominator:
        q = analysis.brute_force_dominator(profile, p, args.max_denominator)
        out["brute_force_dominator"] = format_lottery(q) if q is not None else None
        text += f"\nbrute force (denominator <= {args.max_denominator}): " + (
            f"dominated by {format_lottery(q)}" if q is not None else "no dominator found")
    _emit(args, out, text)
    return OK if verdict.efficient else VIOLATION


def cmd_check_sp(args):
    sds = _scheme(args)
    check = analysis.check_strong_sd_sp if args.strong else analysis.find_sd_manipulation
    if args.profile:
        profile = _load_profile(args)
        agents = None
        if args.agents:
            try:
                agents = [int(a) for a in args.agents.split(",")]
            except ValueError:
                raise UsageError(f"--agents must list agent ids, got {args.agents!r}") from None
        witness = check(sds, profile, agents)
    else:
        if not (args.agents and args.alternatives):
            raise UsageError("give --profile, or --agents N with --alternatives for exhaustive search")
        try:
            n = int(args.agents)
        except ValueError:
            raise UsageError("exhaustive mode expects --agents N") from None
        witness = analysis.exhaust_strategyproofness(sds, n, _alternatives(args.alternatives), args.strong,
                                                     workers=args.workers)
    notion = "strong SD-strategyproofness" if args.strong else "SD-strategyproofness"
    if witness is None:
        _emit(args, {"property": notion, "holds": True, "scheme": sds.name}, f"{notion} holds for {sds.name}")
        return OK
    text = (f"{notion} violated: agent {witness.agent} with true relation "
            f"{format_relation(witness.profile[witness.agent])} reports {format_relation(witness.misreport)}\n"
            f"  truthful:  {format_lottery(witness.truthful)}\n"
            f"  deviation: {format_lottery(witness.deviation)} ({witness.verdict.value})")
    _emit(args, {"property": notion, "holds": False, "scheme": sds.name, "witness": witness.to_dict()}, text)
    return VIOLATION


def cmd_symmetry(args):
    profile = _load_profile(args)
    sds = _scheme(args)
    pi = Permutation.from_cycles(args.pi or "", int)
    sigma = Permutation.from_cycles(args.sigma or "")
    verdict = analysis.check_anonymity_neutrality(sds, profile, pi, sigma)
    if verdict.holds:
        text = f"anonymity+neutrality hold under pi={pi.cycles_text()}, sigma={sigma.cycles_text()}"
    else:
        x = verdict.alternative
        text = (f"anonymity+neutrality violated: f(R)({x}) = {verdict.original[x]} but "
                f"f(R')({sigma(x)}) = {verdict.permuted[sigma(x)]}")
    _emit(args, {"property": "Anonymity+Neutrality", **verdict.to_dict()}, text)
    return OK if verdict.holds else VIOLATION


def cmd_replay(args):
    sds = _scheme(args)
    n = int(args.agents) if args.agents else 4
    universe = _alternatives(args.alternatives) or theorem.BASE_UNIVERSE
    report = theorem.replay(sds, n, universe)
    out = report.to_dict()
    out["reverified"] = report.reverify(sds)
    _emit(args, out, report.format_text() + f"witness re-verified: {out['reverified']}")
    return VIOLATION if report.violated is not None else OK


def cmd_enumerate(args):
    universe = _alternatives(args.alternatives)
    if universe is None:
        raise UsageError("--alternatives is required")
    relations = list(enumerate_weak_orders(universe))
    if args.count_only:
        _emit(args, {"count": len(relations)}, str(len(relations)))
    else:
        texts = [format_relation(r) for r in relations]
        _emit(args, {"count": len(texts), "relations": texts}, "\n".join(texts))
    return OK


def cmd_lift(args):
    profile = parse_profile(Path(args.profile).read_text()) if args.profile else None
    if profile is None:
        raise UsageError("--profile is required")
    universe = _alternatives(args.alternatives) or profile.universe
    n = int(args.agents) if args.agents else len(profile)
    lifted = theorem.lift_profile(profile, n, universe)
    _emit(args, {"profile": format_profile(lifted)}, format_profile(lifted))
    return OK


COMMANDS = {
    "eval": cmd_eval,
    "check-expost": cmd_check_expost,
    "check-sdeff": cmd_check_sdeff,
    "check-sp": cmd_check_sp,
    "symmetry": cmd_symmetry,
    "replay": cmd_replay,
    "enumerate": cmd_enumerate,
    "lift": cmd_lift,
}


def build_parser():
    parser = argparse.ArgumentParser(prog="rsdkit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--scheme", help="registered scheme name (rd, rsd, uniform)")
        p.add_argument("--table", help="tabulated scheme file: '<profile> => <lottery>' lines")
        p.add_argument("--profile", help="profile file, one 'agent <id>: <relation>' per line")
        p.add_argument("--lottery", help="lottery such as '1/2*a + 1/2*b'")
        p.add_argument("--agents", help="agent ids (check-sp with --profile) or agent count")
        p.add_argument("--alternatives", help="comma-separated alternatives")
        p.add_argument("--pi", help="agent permutation in cycle notation, e.g. '(1 2)(3 4)'")
        p.add_argument("--sigma", help="alternative permutation, e.g. '(a b)(c d)'")
        p.add_argument("--format", choices=("text", "structured"), default="text")
        p.add_argument("--max-denominator", type=int, default=0,
                       help="also run the brute-force dominator search up to this denominator")
        p.add_argument("--strong", action="store_true", help="check strong SD-strategyproofness")
        p.add_argument("--count-only", action="store_true")
        p.add_argument("--workers", type=int, default=None, help="processes for exhaustive checks")
    return parser


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, PreferenceParseError, PermutationError, LotteryError, AgentWithoutUniqueTop,
            FileNotFoundError, theorem.OracleError, ValueError) as exc:
        print(f"rsdkit {args.command}: error: {exc}", file=sys.stderr)
        return USAGE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
