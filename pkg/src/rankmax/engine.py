"""Phased rank-maximal matching with Even/Odd/Unreachable reduction.

The phase loop adds the edges of one rank at a time, grows the previous
maximum matching by augmenting paths, labels every vertex Even, Odd or
Unreachable, and then

* drops all later-rank edges at Odd and Unreachable vertices, and
* drops Odd-Odd and Odd-Unreachable edges from the current graph.

The graph left after phase ``i`` is the reduced graph ``G'_i``; its maximum
matchings are exactly the rank-maximal matchings of the rank-``<= i``
subgraph.  Everything below (edge classes, f-posts, critical ranks) is read
off these reduced graphs.
"""
from __future__ import annotations

import enum
import json
import random
from dataclasses import dataclass
from functools import lru_cache, total_ordering
from typing import Iterable, Mapping, Sequence

from . import kernels
from .instance import Instance, InstanceError, remove_applicant


class Label(enum.Enum):
    EVEN = "E"
    ODD = "O"
    UNREACHABLE = "U"

    @property
    def fixed(self) -> bool:
        """Odd and Unreachable vertices are matched by every maximum matching."""
        return self is not Label.EVEN


_LABELS = {kernels.EVEN: Label.EVEN, kernels.ODD: Label.ODD, kernels.UNREACHABLE: Label.UNREACHABLE}


class MatchingError(ValueError):
    pass


class NotMaximumError(MatchingError):
    """The supplied matching admits an augmenting path."""


class Comparison(enum.Enum):
    BETTER = "better"
    EQUAL = "equal"
    WORSE = "worse"


@dataclass(frozen=True)
class Matching:
    pairs: frozenset

    def __post_init__(self):
        pairs = frozenset(tuple(e) for e in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        by_a, by_p = {}, {}
        for a, p in pairs:
            if a in by_a or p in by_p:
                raise MatchingError(f"vertex shared by two edges at ({a}, {p})")
            by_a[a] = p
            by_p[p] = a
        object.__setattr__(self, "_by_a", by_a)
        object.__setattr__(self, "_by_p", by_p)

    @classmethod
    def of(cls, pairs: Iterable[tuple[str, str]] = ()) -> "Matching":
        return cls(frozenset(pairs))

    def post_of(self, a: str) -> str | None:
        return self._by_a.get(a)

    def applicant_of(self, p: str) -> str | None:
        return self._by_p.get(p)

    def __len__(self) -> int:
        return len(self.pairs)

    def __contains__(self, edge) -> bool:
        return tuple(edge) in self.pairs

    def __iter__(self):
        return iter(self.pairs)

    def ordered(self, inst: Instance) -> list[tuple[str, str]]:
        idx = inst.applicant_index
        return sorted(self.pairs, key=lambda e: idx[e[0]])


@total_ordering
@dataclass(frozen=True)
class Signature:
    """Per-rank counts ``(x_1, ..., x_r)`` of applicants matched at each rank."""

    counts: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "counts", tuple(int(x) for x in self.counts))
        if any(x < 0 for x in self.counts):
            raise ValueError("signature counts must be non-negative")

    @classmethod
    def of_matching(cls, inst: Instance, matching: Matching) -> "Signature":
        counts = [0] * inst.max_rank
        for a, p in matching:
            counts[inst.rank(a, p) - 1] += 1
        return cls(tuple(counts))

    def __iter__(self):
        return iter(self.counts)

    def __len__(self):
        return len(self.counts)

    def __lt__(self, other):
        return signature_cmp(self, other) is Comparison.WORSE

    def __eq__(self, other):
        if isinstance(other, (Signature, tuple, list)):
            return signature_cmp(self, other) is Comparison.EQUAL
        return NotImplemented

    def __hash__(self):
        counts = list(self.counts)
        while counts and counts[-1] == 0:
            counts.pop()
        return hash(tuple(counts))


def signature_cmp(s1: Sequence[int] | Signature, s2: Sequence[int] | Signature) -> Comparison:
    """Lexicographic comparison, shorter signature zero-padded."""
    x, y = list(s1), list(s2)
    n = max(len(x), len(y))
    x += [0] * (n - len(x))
    y += [0] * (n - len(y))
    if x == y:
        return Comparison.EQUAL
    return Comparison.BETTER if x > y else Comparison.WORSE


@dataclass(frozen=True)
class EouLabels:
    applicants: Mapping[str, Label]
    posts: Mapping[str, Label]

    def of_applicant(self, a: str) -> Label:
        return self.applicants[a]

    def of_post(self, p: str) -> Label:
        return self.posts[p]

    def fixed_posts(self) -> list[str]:
        return [p for p, lab in self.posts.items() if lab.fixed]


@dataclass(frozen=True)
class PhaseRecord:
    phase: int
    reduced_edges: tuple[tuple[str, str, int], ...]
    matching: Matching
    labels: EouLabels


@dataclass(frozen=True)
class RmmResult:
    matching: Matching
    signature: Signature
    phases: tuple[PhaseRecord, ...]

    @property
    def final_edges(self) -> tuple[tuple[str, str, int], ...]:
        return self.phases[-1].reduced_edges if self.phases else ()


# -- generic bipartite primitives -------------------------------------------


def _index_edges(edges, applicants=(), posts=()):
    a_idx: dict[str, int] = {}
    p_idx: dict[str, int] = {}
    for a in applicants:
        a_idx.setdefault(a, len(a_idx))
    for p in posts:
        p_idx.setdefault(p, len(p_idx))
    pairs = []
    for a, p in edges:
        pairs.append((a_idx.setdefault(a, len(a_idx)), p_idx.setdefault(p, len(p_idx))))
    adj: list[list[int]] = [[] for _ in a_idx]
    for u, v in dict.fromkeys(pairs):
        adj[u].append(v)
    return a_idx, p_idx, adj


def max_matching_augment(
    edges: Iterable[tuple[str, str]],
    seed_matching: Matching | None = None,
    order: Sequence[str] | None = None,
) -> Matching:
    """Maximum matching of ``edges`` obtained by augmenting ``seed_matching``."""
    edges = list(edges)
    edge_set = set(edges)
    seed = seed_matching or Matching.of()
    for e in seed:
        if e not in edge_set:
            raise MatchingError(f"seed edge {e} is not in the edge set")
    a_idx, p_idx, adj = _index_edges(edges)
    mate_l = [-1] * len(a_idx)
    mate_r = [-1] * len(p_idx)
    for a, p in seed:
        mate_l[a_idx[a]] = p_idx[p]
        mate_r[p_idx[p]] = a_idx[a]
    visit = range(len(a_idx)) if order is None else [a_idx[a] for a in order if a in a_idx]
    kernels.augment(adj, len(p_idx), mate_l, mate_r, list(visit))
    a_names, p_names = list(a_idx), list(p_idx)
    return Matching.of((a_names[u], p_names[v]) for u, v in enumerate(mate_l) if v != -1)


def eou_decompose(
    edges: Iterable[tuple[str, str]],
    maximum_matching: Matching,
    applicants: Iterable[str] = (),
    posts: Iterable[str] = (),
) -> EouLabels:
    """Even/Odd/Unreachable labels of every vertex.

    Isolated vertices can be supplied through ``applicants``/``posts``; they
    are free and hence Even.
    """
    edges = list(edges)
    edge_set = set(edges)
    a_idx, p_idx, adj = _index_edges(edges, applicants, posts)
    mate_l = [-1] * len(a_idx)
    mate_r = [-1] * len(p_idx)
    for a, p in maximum_matching:
        if (a, p) not in edge_set:
            raise MatchingError(f"matched edge ({a}, {p}) is not in the edge set")
        mate_l[a_idx[a]] = p_idx[p]
        mate_r[p_idx[p]] = a_idx[a]
    lab_l, lab_r, augmenting = kernels.eou(adj, len(p_idx), mate_l, mate_r)
    if augmenting:
        raise NotMaximumError("matching is not maximum: an augmenting path exists")
    return EouLabels(
        {a: _LABELS[lab_l[u]] for a, u in a_idx.items()},
        {p: _LABELS[lab_r[v]] for p, v in p_idx.items()},
    )


# -- phased algorithm --------------------------------------------------------


@dataclass
class _Phase:
    adj: list[list[int]]
    ranks: dict[tuple[int, int], int]
    mate_l: list[int]
    mate_r: list[int]
    lab_l: list[int]
    lab_r: list[int]


def _phases(inst: Instance, shuffle_seed: int | None = None) -> list[_Phase]:
    n_l, n_r = len(inst.applicants), len(inst.posts)
    a_idx, p_idx = inst.applicant_index, inst.post_index
    by_rank: list[list[tuple[int, int]]] = [[] for _ in range(inst.max_rank + 1)]
    for a, p, k in inst.edges():
        by_rank[k].append((a_idx[a], p_idx[p]))

    rng = random.Random(shuffle_seed) if shuffle_seed is not None else None
    adj: list[list[int]] = [[] for _ in range(n_l)]
    ranks: dict[tuple[int, int], int] = {}
    closed_l = [False] * n_l
    closed_r = [False] * n_r
    mate_l, mate_r = [-1] * n_l, [-1] * n_r
    out: list[_Phase] = []

    for i in range(1, inst.max_rank + 1):
        for u, v in by_rank[i]:
            if not (closed_l[u] or closed_r[v]):
                adj[u].append(v)
                ranks[(u, v)] = i
        order = list(range(n_l))
        if rng is not None:
            rng.shuffle(order)
            for row in adj:
                rng.shuffle(row)
        kernels.augment(adj, n_r, mate_l, mate_r, order)
        lab_l, lab_r, augmenting = kernels.eou(adj, n_r, mate_l, mate_r)
        assert not augmenting, "phase matching is not maximum"

        odd, even = kernels.ODD, kernels.EVEN
        for u in range(n_l):
            if lab_l[u] != even:
                closed_l[u] = True
        for v in range(n_r):
            if lab_r[v] != even:
                closed_r[v] = True
        for u in range(n_l):
            lu = lab_l[u]
            if lu == even:
                continue
            keep = []
            for v in adj[u]:
                lv = lab_r[v]
                if (lu == odd and lv != even) or (lv == odd and lu != even):
                    del ranks[(u, v)]
                else:
                    keep.append(v)
            adj[u] = keep
        out.append(_Phase([row[:] for row in adj], dict(ranks), mate_l[:], mate_r[:], lab_l, lab_r))
    return out


@lru_cache(maxsize=4096)
def _cached_phases(inst: Instance, shuffle_seed: int | None) -> tuple[_Phase, ...]:
    return tuple(_phases(inst, shuffle_seed))


def _matching_from(inst: Instance, mate_l: list[int]) -> Matching:
    return Matching.of((inst.applicants[u], inst.posts[v]) for u, v in enumerate(mate_l) if v != -1)


def _record(inst: Instance, i: int, ph: _Phase) -> PhaseRecord:
    edges = tuple(
        (inst.applicants[u], inst.posts[v], ph.ranks[(u, v)])
        for u in range(len(inst.applicants))
        for v in sorted(ph.adj[u])
    )
    labels = EouLabels(
        {a: _LABELS[ph.lab_l[u]] for u, a in enumerate(inst.applicants)},
        {p: _LABELS[ph.lab_r[v]] for v, p in enumerate(inst.posts)},
    )
    return PhaseRecord(i, edges, _matching_from(inst, ph.mate_l), labels)


def rank_maximal(inst: Instance, shuffle_seed: int | None = None) -> RmmResult:
    """Rank-maximal matching, its signature and every phase record.

    ``shuffle_seed`` randomises the augmenting-path search order; the reduced
    graphs and the signature must not depend on it.
    """
    phases = _cached_phases(inst, shuffle_seed)
    records = tuple(_record(inst, i, ph) for i, ph in enumerate(phases, start=1))
    matching = records[-1].matching if records else Matching.of()
    return RmmResult(matching, Signature.of_matching(inst, matching), records)


# -- edge classification ------------------------------------------------------


def _final(inst: Instance) -> _Phase | None:
    phases = _cached_phases(inst, None)
    return phases[-1] if phases else None


def _edge_indices(inst: Instance, a: str, p: str) -> tuple[int, int]:
    if not inst.has_edge(a, p):
        raise InstanceError(f"({a}, {p}) is not an edge of the instance")
    return inst.applicant_index[a], inst.post_index[p]


def _max_size_without(ph: _Phase, n_r: int, drop_l=(), drop_r=(), drop_edge=None) -> int:
    adj = [
        [] if u in drop_l else [v for v in row if v not in drop_r and (u, v) != drop_edge]
        for u, row in enumerate(ph.adj)
    ]
    mate_l = [-1] * len(adj)
    mate_r = [-1] * n_r
    for u, v in enumerate(ph.mate_l):
        if v != -1 and u not in drop_l and v not in drop_r and (u, v) != drop_edge:
            mate_l[u], mate_r[v] = v, u
    kernels.augment(adj, n_r, mate_l, mate_r, list(range(len(adj))))
    return sum(1 for v in mate_l if v != -1)


def edge_in_some_rmm(inst: Instance, a: str, p: str) -> bool:
    """Is ``(a, p)`` in at least one rank-maximal matching (a rank-maximal pair)?"""
    u, v = _edge_indices(inst, a, p)
    ph = _final(inst)
    if v not in ph.adj[u]:
        return False
    size = sum(1 for x in ph.mate_l if x != -1)
    return _max_size_without(ph, len(inst.posts), {u}, {v}) == size - 1


def edge_in_every_rmm(inst: Instance, a: str, p: str) -> bool:
    """Is ``(a, p)`` in every rank-maximal matching?"""
    if not edge_in_some_rmm(inst, a, p):
        return False
    u, v = _edge_indices(inst, a, p)
    ph = _final(inst)
    size = sum(1 for x in ph.mate_l if x != -1)
    return _max_size_without(ph, len(inst.posts), drop_edge=(u, v)) < size


def classify_edges(inst: Instance) -> dict[tuple[str, str], str]:
    """Map every edge to ``every``, ``some`` or ``none``."""
    out = {}
    for a, p, _ in inst.edges():
        if edge_in_every_rmm(inst, a, p):
            out[(a, p)] = "every"
        elif edge_in_some_rmm(inst, a, p):
            out[(a, p)] = "some"
        else:
            out[(a, p)] = "none"
    return out


# -- f-posts and critical ranks ---------------------------------------------


def f_posts(inst: Instance, a1: str) -> list[str]:
    """Posts that are Odd or Unreachable in the rank-1 graph without ``a1``, canonical order."""
    rest = remove_applicant(inst, a1)
    rank1 = [(a, p) for a, p, k in rest.edges() if k == 1]
    labels = eou_decompose(rank1, max_matching_augment(rank1), rest.applicants, rest.posts)
    return [p for p in inst.posts if labels.of_post(p).fixed]


def _first_fixed(phases: Sequence[_Phase], u: int | None = None, v: int | None = None) -> int | None:
    for i, ph in enumerate(phases, start=1):
        if (u is not None and ph.lab_l[u] != kernels.EVEN) or (v is not None and ph.lab_r[v] != kernels.EVEN):
            return i
    return None


def critical_ranks_all(base: Instance, a: str) -> dict[str, int]:
    """Critical rank of ``(a, p')`` for every post ``p'`` not already on ``a``'s list."""
    base.check_applicant(a)
    phases = _cached_phases(base, None)
    r = base.max_rank
    u = base.applicant_index[a]
    a_fixed = _first_fixed(phases, u=u)
    out = {}
    for v, p in enumerate(base.posts):
        if base.has_edge(a, p):
            continue
        p_fixed = _first_fixed(phases, v=v)
        hits = [x for x in (a_fixed, p_fixed) if x is not None]
        out[p] = min(hits) if hits else r + 1
    return out


def critical_rank(base: Instance, a: str, p: str) -> int:
    """First phase at which ``a`` or ``p`` leaves Even in ``base``; ``r + 1`` if never."""
    base.check_applicant(a)
    base.check_post(p)
    if base.has_edge(a, p):
        raise InstanceError(f"({a}, {p}) is already an edge")
    return critical_ranks_all(base, a)[p]


def fixed_phase(base: Instance, a: str) -> int | None:
    """First phase at which ``a`` is Odd or Unreachable, None if it stays Even."""
    base.check_applicant(a)
    return _first_fixed(_cached_phases(base, None), u=base.applicant_index[a])


def unreachable_phase(base: Instance, a: str) -> int:
    """Like :func:`fixed_phase` but defaulting to ``r`` when ``a`` stays Even."""
    k = fixed_phase(base, a)
    return base.max_rank if k is None else k


# -- serialization -----------------------------------------------------------


def result_to_dict(inst: Instance, result: RmmResult, phases: bool = False) -> dict:
    doc = {
        "matching": [[a, p, inst.rank(a, p)] for a, p in result.matching.ordered(inst)],
        "signature": list(result.signature.counts),
    }
    if phases:
        doc["phases"] = [
            {
                "phase": rec.phase,
                "reduced_edges": [list(e) for e in rec.reduced_edges],
                "matching": [list(e) for e in rec.matching.ordered(inst)],
                "labels": {
                    "applicants": {a: rec.labels.of_applicant(a).value for a in inst.applicants},
                    "posts": {p: rec.labels.of_post(p).value for p in inst.posts},
                },
            }
            for rec in result.phases
        ]
    return doc


def dump_result(inst: Instance, result: RmmResult, phases: bool = False) -> str:
    return json.dumps(result_to_dict(inst, result, phases), indent=2) + "\n"
