"""Falsified preference lists for a single manipulating applicant.

Three strategies, each returning a strict full list plus a certificate
produced by re-running the engine on the manipulated instance:

* ``best_nonfirst``: the best non-f-post of the true list goes first.
* ``min_max``: the best true-ranked post the manipulator can be forced onto
  in every rank-maximal matching, via a rank-by-rank list construction.
* ``improve_best``: copy the list of whoever holds the favourite post once
  the manipulator is removed.
"""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field

from .engine import (
    critical_ranks_all,
    edge_in_every_rmm,
    edge_in_some_rmm,
    f_posts,
    fixed_phase,
    rank_maximal,
    unreachable_phase,
)
from .instance import Instance, InstanceError, StrictFullList, place_edge, remove_applicant, replace_preferences, set_preferences


class Kind(str, enum.Enum):
    BEST_NONFIRST = "best-nonfirst"
    MIN_MAX = "min-max"
    IMPROVE_BEST = "improve-best"


class Mode(str, enum.Enum):
    EVERY = "every-rmm"
    SOME = "some-rmm"


class StrategyError(ValueError):
    """The strategy does not apply to this instance."""


class NoGuarantee(StrategyError):
    """No strict full list forces any post of the manipulator's list."""


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class StrategyOutcome:
    kind: Kind
    applicant: str
    list: StrictFullList
    guaranteed_post: str
    guarantee_mode: Mode
    certificate: tuple[Check, ...] = field(default=())

    @property
    def verified(self) -> bool:
        return bool(self.certificate) and all(c.passed for c in self.certificate)


@dataclass(frozen=True)
class HpConstruction:
    target_post: str
    k: int
    assigned: tuple[tuple[int, str], ...]
    feasible: bool
    failed_rank: int | None = None
    full_list: tuple[str, ...] | None = None

    @property
    def status(self) -> str:
        return "feasible" if self.feasible else f"infeasible({self.failed_rank})"


def _pad(inst: Instance, a1: str, head: list[str]) -> tuple[str, ...]:
    used = set(head)
    rest = sorted((p for p in inst.posts if p not in used), key=inst.true_rank_key(a1))
    return tuple(head) + tuple(rest)


def verify_guarantee(inst: Instance, a1: str, lst, p: str, mode: Mode | str) -> bool:
    """Does ``a1`` get ``p`` in every (or some) rank-maximal matching under ``lst``?"""
    inst.check_post(p)
    h = replace_preferences(inst, a1, lst)
    if Mode(mode) is Mode.EVERY:
        return edge_in_every_rmm(h, a1, p)
    return edge_in_some_rmm(h, a1, p)


def _certify(inst, a1, kind, order, p, mode, extra=()) -> StrategyOutcome:
    h = replace_preferences(inst, a1, order)
    matched = rank_maximal(h).matching.post_of(a1)
    checks = list(extra)
    checks.append(
        Check(
            f"edge ({a1}, {p}) in {mode.value}",
            verify_guarantee(inst, a1, order, p, mode),
            f"engine matching gives {a1} -> {matched}",
        )
    )
    return StrategyOutcome(kind, a1, StrictFullList(a1, order), p, mode, tuple(checks))


# -- best nonfirst -------------------------------------------------------------


def best_non_f_post(inst: Instance, a1: str) -> str | None:
    inst.check_applicant(a1)
    fs = set(f_posts(inst, a1))
    for p in inst.flatten(a1):
        if p not in fs:
            return p
    return None


def best_nonfirst(inst: Instance, a1: str) -> StrategyOutcome:
    q = best_non_f_post(inst, a1)
    if q is None:
        raise StrategyError(f"every post on the list of {a1} is an f-post; best-nonfirst is inapplicable")
    return _certify(inst, a1, Kind.BEST_NONFIRST, _pad(inst, a1, [q]), q, Mode.EVERY)


# -- min max -------------------------------------------------------------------


def construct_Hp(inst: Instance, a1: str, p: str) -> HpConstruction:
    """Build a list with ``p`` first that forces ``a1`` onto ``p``, rank by rank.

    With ``a1`` holding only ``p`` (the graph ``H^``), every other post gets a
    critical rank.  Rank ``i`` is filled from the pool of posts whose critical
    rank is below ``i`` (such an edge can never be used), otherwise from posts
    of critical rank exactly ``i`` that pass an explicit every-matching check.
    Ranks after the phase ``k`` where ``a1`` stops being Even are inert.
    """
    inst.check_applicant(a1)
    inst.check_post(p)
    if p not in f_posts(inst, a1):
        raise InstanceError(f"{p} is not an f-post for {a1}")
    hat = set_preferences(inst, a1, [[p]])
    k = unreachable_phase(hat, a1)
    crit = critical_ranks_all(hat, a1)
    key = inst.true_rank_key(a1)

    if fixed_phase(hat, a1) is None:
        # a1 is free in some rank-maximal matching of H^; no extension can force p
        return HpConstruction(p, k, ((1, p),), False, 1)

    used = {p}
    assigned = [(1, p)]
    pool = sorted((q for q, c in crit.items() if c == 1), key=key)
    for i in range(2, k + 1):
        if len(used) == len(inst.posts):
            break
        pool = [q for q in pool if q not in used]
        if pool:
            q = pool.pop(0)
        else:
            q = None
            for cand in sorted((c for c, cr in crit.items() if cr == i and c not in used), key=key):
                if edge_in_every_rmm(place_edge(hat, a1, cand, i), a1, p):
                    q = cand
                    break
            if q is None:
                return HpConstruction(p, k, tuple(assigned), False, i)
        used.add(q)
        assigned.append((i, q))
        pool = sorted(set(pool) | {c for c, cr in crit.items() if cr == i and c not in used}, key=key)
    full = _pad(inst, a1, [q for _, q in assigned])
    return HpConstruction(p, k, tuple(assigned), True, None, full)


def min_max(inst: Instance, a1: str) -> StrategyOutcome:
    """List minimising the worst true rank ``a1`` can be matched at."""
    inst.check_applicant(a1)
    fs = set(f_posts(inst, a1))
    q = best_non_f_post(inst, a1)
    limit = inst.rank(a1, q) if q is not None else len(inst.prefs[a1]) + 1
    tried = []
    for p in inst.flatten(a1):
        if p not in fs or inst.rank(a1, p) >= limit:
            continue
        hp = construct_Hp(inst, a1, p)
        tried.append(Check(f"H_p construction for {p}", True, hp.status))
        if hp.feasible:
            return _certify(inst, a1, Kind.MIN_MAX, hp.full_list, p, Mode.EVERY, tried)
    if q is None:
        raise NoGuarantee(f"no feasible f-post and no non-f-post on the list of {a1}")
    out = best_nonfirst(inst, a1)
    return StrategyOutcome(Kind.MIN_MAX, a1, out.list, out.guaranteed_post, out.guarantee_mode, tuple(tried) + out.certificate)


# -- improve best ----------------------------------------------------------------


def _tie_order(inst: Instance, group, lead: str) -> list[str]:
    """Canonical order inside a tie group, except ``lead`` goes first."""
    idx = inst.post_index
    return sorted(group, key=lambda q: (q != lead, idx[q]))


def improve_best(inst: Instance, a1: str) -> StrategyOutcome:
    """Copy the list of the applicant holding ``a1``'s favourite post without ``a1``."""
    inst.check_applicant(a1)
    if not inst.prefs[a1]:
        raise StrategyError(f"{a1} has an empty list")
    first = inst.flatten(a1)[0]
    rest = remove_applicant(inst, a1)
    holder = rank_maximal(rest).matching.applicant_of(first)
    if holder is None:
        note = Check(f"{first} unmatched without {a1}", True, "falling back to favourite post first")
        order = _pad(inst, a1, [first])
    else:
        copied = [q for g in inst.prefs[holder] for q in _tie_order(inst, g, first)]
        note = Check(f"copy list of {holder}", True, " ".join(copied))
        order = _pad(inst, a1, copied)
    return _certify(inst, a1, Kind.IMPROVE_BEST, order, first, Mode.SOME, [note])


STRATEGIES = {
    Kind.BEST_NONFIRST: best_nonfirst,
    Kind.MIN_MAX: min_max,
    Kind.IMPROVE_BEST: improve_best,
}


def run_strategy(inst: Instance, a1: str, kind: Kind | str) -> StrategyOutcome:
    return STRATEGIES[Kind(kind)](inst, a1)


# -- serialization -------------------------------------------------------------


def outcome_to_dict(inst: Instance, out: StrategyOutcome) -> dict:
    return {
        "kind": out.kind.value,
        "applicant": out.applicant,
        "list": list(out.list.order),
        "true_ranks": [inst.rank(out.applicant, p) for p in out.list.order],
        "guaranteed_post": out.guaranteed_post,
        "guaranteed_true_rank": inst.rank(out.applicant, out.guaranteed_post),
        "mode": out.guarantee_mode.value,
        "verified": out.verified,
        "certificate": [{"check": c.name, "passed": c.passed, "detail": c.detail} for c in out.certificate],
    }


def dump_outcome(inst: Instance, out: StrategyOutcome) -> str:
    return json.dumps(outcome_to_dict(inst, out), indent=2) + "\n"
