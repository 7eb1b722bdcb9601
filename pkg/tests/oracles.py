"""Reference implementations kept independent of the package code paths."""

import itertools
from fractions import Fraction
from math import comb


def fubini(m):
    """Number of weak orders on m elements: W(m) = sum_k C(m,k) W(m-k)."""
    w = [1]
    for j in range(1, m + 1):
        w.append(sum(comb(j, k) * w[j - k] for k in range(1, j + 1)))
    return w[m]


def best_of(relation_text_classes, feasible):
    for cls in relation_text_classes:
        hit = [x for x in cls if x in feasible]
        if hit:
            return set(hit)
    raise AssertionError("feasible set outside universe")


def classes_of(rel):
    return [set(c) for c in rel.classes]


def rsd_by_orderings(profile):
    """Average over all n! agent orders of iterated best-set refinement."""
    universe = profile.universe
    rels = [classes_of(r) for r in profile.relations]
    n = len(rels)
    total = {x: Fraction(0) for x in universe}
    orders = list(itertools.permutations(range(n)))
    for order in orders:
        feasible = set(universe)
        for i in order:
            feasible = best_of(rels[i], feasible)
        for x in feasible:
            total[x] += Fraction(1, len(feasible) * len(orders))
    return total


def rsd_positional(rels, feasible):
    """Literal positional recursion: average over removing each position."""
    if not rels:
        return {x: Fraction(1, len(feasible)) for x in feasible}
    out = {}
    for i in range(len(rels)):
        sub = rsd_positional(rels[:i] + rels[i + 1:], best_of(rels[i], feasible))
        for x, v in sub.items():
            out[x] = out.get(x, Fraction(0)) + v / len(rels)
    return out


def upper_mass(rel, masses, x):
    """Sum of p(y) over y weakly preferred to x, straight from the definition."""
    return sum((masses[y] for y in rel.universe if rel.weakly_prefers(y, x)), Fraction(0))


def sd_weak(rel, p, q):
    pm, qm = p.as_dict(), q.as_dict()
    return all(upper_mass(rel, pm, x) >= upper_mass(rel, qm, x) for x in rel.universe)


def grid_lotteries(universe, max_den):
    """All lotteries with masses k/d, d <= max_den, as Fraction dicts (deduplicated)."""
    seen = set()
    m = len(universe)
    for d in range(1, max_den + 1):
        for cut in itertools.combinations(range(d + m - 1), m - 1):
            parts, prev = [], -1
            for c in cut:
                parts.append(c - prev - 1)
                prev = c
            parts.append(d + m - 1 - prev - 1)
            key = tuple(Fraction(k, d) for k in parts)
            if key not in seen:
                seen.add(key)
                yield dict(zip(universe, key))


def brute_force_is_inefficient(profile, p, max_den):
    """Pure-Fraction scan for a dominator over the denominator grid."""
    from rsdkit.lotteries import Lottery

    for masses in grid_lotteries(profile.universe, max_den):
        q = Lottery.from_mapping(profile.universe, masses)
        if all(sd_weak(rel, q, p) for rel in profile.relations) and any(
            not sd_weak(rel, p, q) for rel in profile.relations
        ):
            return True
    return False
