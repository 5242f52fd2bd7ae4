"""Brute-force ground truth for small instances.

Nothing here uses reduced graphs or augmenting paths: rank-maximal matchings
are found by trying every matching, and every derived notion (edge classes,
critical ranks, optimal manipulations) is computed from that enumeration.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from . import kernels
from .engine import Matching, Signature
from .instance import Instance, InstanceError, place_edge, replace_preferences, truncate

MAX_APPLICANTS = 9
MAX_POSTS = 9
MAX_SEARCH_POSTS = 6

EVERY, SOME, NONE = "every", "some-not-all", "none"


class OracleGuardError(RuntimeError):
    """Instance too large for exhaustive search."""


class OracleInconsistency(AssertionError):
    """Enumerated data contradicts a characterization the oracle relies on."""


@dataclass(frozen=True)
class RmmSet:
    matchings: tuple[Matching, ...]
    signature: Signature

    def __len__(self):
        return len(self.matchings)

    def partners(self, a: str) -> set[str | None]:
        return {m.post_of(a) for m in self.matchings}


def _guard(inst: Instance, max_applicants: int, max_posts: int) -> None:
    if len(inst.applicants) > max_applicants or len(inst.posts) > max_posts:
        raise OracleGuardError(
            f"instance has {len(inst.applicants)} applicants and {len(inst.posts)} posts; "
            f"oracle limit is {max_applicants} x {max_posts}"
        )


@lru_cache(maxsize=8192)
def _enumerate(inst: Instance) -> RmmSet:
    a_idx, p_idx = inst.applicant_index, inst.post_index
    radj = [[] for _ in inst.applicants]
    for a, p, k in inst.edges():
        radj[a_idx[a]].append((p_idx[p], k))
    sig, found = kernels.enumerate_best(radj, len(inst.posts), inst.max_rank)
    matchings = sorted(
        (
            Matching.of((inst.applicants[u], inst.posts[v]) for u, v in enumerate(assign) if v != -1)
            for assign in found
        ),
        key=lambda m: sorted((a_idx[a], p_idx[p]) for a, p in m),
    )
    return RmmSet(tuple(matchings), Signature(sig))


def enumerate_rmm(inst: Instance, max_applicants: int = MAX_APPLICANTS, max_posts: int = MAX_POSTS) -> RmmSet:
    """Every rank-maximal matching of ``inst`` with their common signature."""
    _guard(inst, max_applicants, max_posts)
    return _enumerate(inst)


def oracle_edge_class(inst: Instance, a: str, p: str, **guards) -> str:
    """``every``, ``some-not-all`` or ``none`` by counting enumerated matchings."""
    rmms = enumerate_rmm(inst, **guards)
    hits = sum((a, p) in m for m in rmms.matchings)
    if hits == len(rmms):
        return EVERY
    return SOME if hits else NONE


def critical_profile(base: Instance, a: str, p: str, **guards) -> list[str]:
    """Class of ``(a, p)`` in ``H_i`` for ``i = 1..r``.

    ``H_i`` is ``base`` plus ``(a, p)`` at rank ``i``, restricted to edges of
    rank at most ``i``.
    """
    if base.has_edge(a, p):
        raise InstanceError(f"({a}, {p}) is already an edge")
    out = []
    for i in range(1, base.max_rank + 1):
        h = truncate(place_edge(base, a, p, i), i)
        out.append(oracle_edge_class(h, a, p, **guards))
    return out


def oracle_critical_rank(base: Instance, a: str, p: str, **guards) -> int:
    """Smallest rank at which the new edge stops being forced; ``r + 1`` if it never does.

    Also checks the full three-part pattern: forced below the critical rank,
    absent above it.
    """
    profile = critical_profile(base, a, p, **guards)
    c = next((i for i, cls in enumerate(profile, start=1) if cls != EVERY), len(profile) + 1)
    if any(cls != NONE for cls in profile[c:]):
        raise OracleInconsistency(f"edge ({a}, {p}) reappears above critical rank {c}: {profile}")
    return c


def manipulator_score(inst: Instance, a1: str, post: str | None) -> int:
    """True-rank score of an outcome: listed posts by rank, then unlisted, then unmatched."""
    t = len(inst.prefs[a1])
    if post is None:
        return t + 2
    return inst.rank(a1, post) or t + 1


def worst_outcome(inst: Instance, a1: str, lst, **guards) -> tuple[int, frozenset]:
    """Worst true-rank score of ``a1`` over all rank-maximal matchings under ``lst``.

    Returns the score and the set of posts (``None`` = unmatched) ``a1`` can get.
    """
    h = replace_preferences(inst, a1, lst)
    got = frozenset(enumerate_rmm(h, **guards).partners(a1))
    return max(manipulator_score(inst, a1, p) for p in got), got


@dataclass(frozen=True)
class MinMaxSearch:
    optimum: int
    optimal_lists: tuple[tuple[str, ...], ...]
    outcomes: dict

    def optimal_posts(self) -> set:
        return {self.outcomes[lst] for lst in self.optimal_lists}


def exhaustive_min_max(inst: Instance, a1: str, max_search_posts: int = MAX_SEARCH_POSTS, **guards) -> MinMaxSearch:
    """Try every strict full list for ``a1``; minimise the worst true-rank score."""
    inst.check_applicant(a1)
    if len(inst.posts) > max_search_posts:
        raise OracleGuardError(f"{len(inst.posts)} posts exceed the search limit of {max_search_posts}")
    outcomes = {}
    scores = {}
    for perm in itertools.permutations(inst.posts):
        scores[perm], outcomes[perm] = worst_outcome(inst, a1, perm, **guards)
    best = min(scores.values())
    optimal = tuple(perm for perm, s in scores.items() if s == best)
    return MinMaxSearch(best, optimal, outcomes)
