"""Preference instances: data model, text format, mutation and random generation.

An instance is a bipartite market of applicants and posts.  Every applicant
ranks a subset of the posts in tie groups; group ``i`` (1-based) holds the
posts of rank ``i``.  Instances are immutable: every mutation returns a new
value.

Text format::

    # comment
    posts: p1 p2 p3        (optional header, must come first)
    a1: p2 (p1 p3)         (one line per applicant, parenthesised tie groups)
"""
from __future__ import annotations

import random
import re
from dataclasses import InitVar, dataclass
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

Groups = tuple[tuple[str, ...], ...]

_TOKEN_RE = re.compile(r"[^\s:()#]+")


class InstanceError(ValueError):
    """Raised when an instance, a list or an identifier is invalid."""


class ParseError(InstanceError):
    """Syntax error in an instance document, with a 1-based position."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class StrictFullList:
    """A tie-free preference list over every post of an instance."""

    applicant: str
    order: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "order", tuple(self.order))
        if len(set(self.order)) != len(self.order):
            raise InstanceError(f"list for {self.applicant!r} repeats a post")

    def groups(self) -> Groups:
        return tuple((p,) for p in self.order)


@dataclass(frozen=True, eq=True)
class Instance:
    applicants: tuple[str, ...]
    posts: tuple[str, ...]
    prefs: Mapping[str, Groups]
    allow_gaps: InitVar[bool] = False

    def __post_init__(self, allow_gaps: bool = False):
        object.__setattr__(self, "applicants", tuple(self.applicants))
        object.__setattr__(self, "posts", tuple(self.posts))
        object.__setattr__(
            self,
            "prefs",
            {a: tuple(tuple(g) for g in self.prefs.get(a, ())) for a in self.applicants},
        )
        self._validate(allow_gaps)

    def __hash__(self):
        return hash((self.applicants, self.posts, tuple(self.prefs[a] for a in self.applicants)))

    def _validate(self, allow_gaps: bool) -> None:
        if len(set(self.applicants)) != len(self.applicants):
            raise InstanceError("duplicate applicant identifier")
        if len(set(self.posts)) != len(self.posts):
            raise InstanceError("duplicate post identifier")
        known = set(self.posts)
        for a, groups in self.prefs.items():
            seen: set[str] = set()
            if groups and not groups[-1]:
                raise InstanceError(f"trailing empty rank in the list of {a!r}")
            for g in groups:
                if not g and not allow_gaps:
                    raise InstanceError(f"empty tie group in the list of {a!r}")
                for p in g:
                    if p in seen:
                        raise InstanceError(f"post {p!r} appears twice in the list of {a!r}")
                    if p not in known:
                        raise InstanceError(f"unknown post {p!r} in the list of {a!r}")
                    seen.add(p)

    # -- derived structure -------------------------------------------------

    @cached_property
    def _rank_table(self) -> dict[tuple[str, str], int]:
        return {
            (a, p): i
            for a in self.applicants
            for i, g in enumerate(self.prefs[a], start=1)
            for p in g
        }

    @cached_property
    def has_gaps(self) -> bool:
        return any(not g for groups in self.prefs.values() for g in groups)

    @cached_property
    def max_rank(self) -> int:
        """Largest rank of any edge (``r``); 0 for an edgeless instance."""
        return max((len(g) for g in self.prefs.values()), default=0)

    @cached_property
    def applicant_index(self) -> dict[str, int]:
        return {a: i for i, a in enumerate(self.applicants)}

    @cached_property
    def post_index(self) -> dict[str, int]:
        return {p: i for i, p in enumerate(self.posts)}

    def rank(self, a: str, p: str) -> int | None:
        return self._rank_table.get((a, p))

    def has_edge(self, a: str, p: str) -> bool:
        return (a, p) in self._rank_table

    def edges(self) -> Iterator[tuple[str, str, int]]:
        """Yield ``(applicant, post, rank)`` in canonical order."""
        for a in self.applicants:
            for i, g in enumerate(self.prefs[a], start=1):
                for p in g:
                    yield a, p, i

    def neighbours(self, a: str) -> tuple[str, ...]:
        return tuple(p for g in self.prefs[a] for p in g)

    def true_rank_key(self, a: str):
        """Sort key: ascending rank in ``a``'s list, unlisted posts last, then canonical order."""
        unlisted = len(self.prefs[a]) + 1
        idx = self.post_index

        def key(p: str) -> tuple[int, int]:
            return (self.rank(a, p) or unlisted, idx[p])

        return key

    def flatten(self, a: str) -> tuple[str, ...]:
        """``a``'s list with ties broken by canonical post order."""
        idx = self.post_index
        return tuple(p for g in self.prefs[a] for p in sorted(g, key=idx.__getitem__))

    def check_applicant(self, a: str) -> None:
        if a not in self.prefs:
            raise InstanceError(f"unknown applicant {a!r}")

    def check_post(self, p: str) -> None:
        if p not in self.post_index:
            raise InstanceError(f"unknown post {p!r}")


# -- text format -------------------------------------------------------------


def _strip_comment(line: str) -> str:
    cut = line.find("#")
    return line if cut < 0 else line[:cut]


def _tokens(line: str, lineno: int) -> Iterator[tuple[str, int]]:
    pos = 0
    while pos < len(line):
        ch = line[pos]
        if ch.isspace():
            pos += 1
        elif ch in "():":
            yield ch, pos + 1
            pos += 1
        else:
            m = _TOKEN_RE.match(line, pos)
            if m is None:  # pragma: no cover - regex covers every other char
                raise ParseError(f"unexpected character {ch!r}", lineno, pos + 1)
            yield m.group(), pos + 1
            pos = m.end()


def parse_instance(text: str) -> Instance:
    """Parse an instance document; see the module docstring for the format."""
    header: list[str] | None = None
    applicants: list[str] = []
    prefs: dict[str, Groups] = {}
    appearance: dict[str, None] = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        toks = list(_tokens(_strip_comment(raw), lineno))
        if not toks:
            continue
        (name, col) = toks[0]
        if name in "():":
            raise ParseError("expected an identifier", lineno, col)
        if len(toks) < 2 or toks[1][0] != ":":
            where = toks[1][1] if len(toks) > 1 else col + len(name)
            raise ParseError("expected ':' after identifier", lineno, where)
        body = toks[2:]

        if name == "posts":
            if header is not None:
                raise ParseError("duplicate posts header", lineno, col)
            if applicants:
                raise ParseError("posts header must precede applicant lines", lineno, col)
            header = []
            for tok, c in body:
                if tok in "():":
                    raise ParseError(f"unexpected {tok!r} in posts header", lineno, c)
                if tok in header:
                    raise ParseError(f"duplicate post {tok!r} in header", lineno, c)
                header.append(tok)
            continue

        if name in prefs:
            raise ParseError(f"duplicate applicant {name!r}", lineno, col)
        groups: list[tuple[str, ...]] = []
        seen: set[str] = set()
        open_at: int | None = None
        current: list[str] = []
        for tok, c in body:
            if tok == "(":
                if open_at is not None:
                    raise ParseError("nested tie group", lineno, c)
                open_at, current = c, []
            elif tok == ")":
                if open_at is None:
                    raise ParseError("unbalanced ')'", lineno, c)
                if not current:
                    raise ParseError("empty tie group", lineno, open_at)
                groups.append(tuple(current))
                open_at = None
            elif tok == ":":
                raise ParseError("unexpected ':'", lineno, c)
            else:
                if tok in seen:
                    raise ParseError(f"post {tok!r} listed twice", lineno, c)
                if header is not None and tok not in header:
                    raise ParseError(f"unknown post {tok!r}", lineno, c)
                seen.add(tok)
                appearance.setdefault(tok)
                if open_at is None:
                    groups.append((tok,))
                else:
                    current.append(tok)
        if open_at is not None:
            raise ParseError("unclosed tie group", lineno, open_at)
        applicants.append(name)
        prefs[name] = tuple(groups)

    posts = header if header is not None else list(appearance)
    return Instance(tuple(applicants), tuple(posts), prefs)


def _first_appearance(inst: Instance) -> list[str]:
    seen: dict[str, None] = {}
    for a in inst.applicants:
        for g in inst.prefs[a]:
            for p in g:
                seen.setdefault(p)
    return list(seen)


def serialize_instance(inst: Instance) -> str:
    """Canonical document; the posts header is written only when needed to round-trip."""
    if inst.has_gaps:
        raise InstanceError("instances with rank gaps have no text form")
    lines = []
    if list(inst.posts) != _first_appearance(inst):
        lines.append("posts: " + " ".join(inst.posts))
    for a in inst.applicants:
        parts = [g[0] if len(g) == 1 else "(" + " ".join(g) + ")" for g in inst.prefs[a]]
        lines.append(f"{a}: " + " ".join(parts) if parts else f"{a}:")
    return "".join(line + "\n" for line in lines)


# -- mutation ----------------------------------------------------------------


def remove_applicant(inst: Instance, a: str) -> Instance:
    inst.check_applicant(a)
    rest = tuple(x for x in inst.applicants if x != a)
    return _rebuild(inst, {x: inst.prefs[x] for x in rest}, rest)


def _rebuild(inst: Instance, prefs: Mapping[str, Groups], applicants=None) -> Instance:
    return Instance(inst.applicants if applicants is None else applicants, inst.posts, prefs, allow_gaps=inst.has_gaps)


def place_edge(inst: Instance, a: str, p: str, rank: int) -> Instance:
    """Add ``(a, p)`` at ``rank``, leaving empty ranks in between if needed.

    The result may have rank gaps; such instances are valid inputs for the
    matching machinery but cannot be serialized.
    """
    inst.check_applicant(a)
    inst.check_post(p)
    if inst.has_edge(a, p):
        raise InstanceError(f"({a}, {p}) is already an edge")
    if rank < 1:
        raise InstanceError("rank must be at least 1")
    groups = [list(g) for g in inst.prefs[a]]
    while len(groups) < rank:
        groups.append([])
    groups[rank - 1].append(p)
    prefs = dict(inst.prefs)
    prefs[a] = tuple(tuple(g) for g in groups)
    return Instance(inst.applicants, inst.posts, prefs, allow_gaps=True)


def truncate(inst: Instance, max_rank: int) -> Instance:
    """Subgraph keeping only edges of rank ``<= max_rank``."""
    prefs = {}
    for a, groups in inst.prefs.items():
        kept = list(groups[:max_rank])
        while kept and not kept[-1]:
            kept.pop()
        prefs[a] = tuple(kept)
    return _rebuild(inst, prefs)


def add_applicant(inst: Instance, a: str, groups: Iterable[Iterable[str]], position: int | None = None) -> Instance:
    """Insert a new applicant, at ``position`` in the applicant order (default: last)."""
    if a in inst.prefs:
        raise InstanceError(f"applicant {a!r} already exists")
    order = list(inst.applicants)
    order.insert(len(order) if position is None else position, a)
    prefs = dict(inst.prefs)
    prefs[a] = tuple(tuple(g) for g in groups)
    return _rebuild(inst, prefs, tuple(order))


def set_preferences(inst: Instance, a: str, groups: Iterable[Iterable[str]]) -> Instance:
    """Replace ``a``'s list by arbitrary (possibly partial or tied) groups."""
    inst.check_applicant(a)
    prefs = dict(inst.prefs)
    prefs[a] = tuple(tuple(g) for g in groups)
    return _rebuild(inst, prefs)


def replace_preferences(inst: Instance, a: str, lst: StrictFullList | Sequence[str]) -> Instance:
    """Give ``a`` the strict full list ``lst`` (rank i = position i)."""
    inst.check_applicant(a)
    order = lst.order if isinstance(lst, StrictFullList) else tuple(lst)
    if len(order) != len(inst.posts) or set(order) != set(inst.posts):
        raise InstanceError(f"list for {a!r} is not a permutation of the posts")
    return set_preferences(inst, a, ((p,) for p in order))


# -- generation --------------------------------------------------------------


def generate_random(n: int, m: int, max_rank: int, tie_prob: float, seed: int) -> Instance:
    """Seeded random instance with applicants ``a1..an`` and posts ``p1..pm``.

    Each applicant ranks between 1 and ``m`` distinct posts.  A post joins the
    previous tie group with probability ``tie_prob``; lists are cut once
    ``max_rank`` groups exist.
    """
    if n < 1 or m < 1 or max_rank < 1:
        raise InstanceError("n, m and max_rank must be at least 1")
    if not 0 <= tie_prob < 1:
        raise InstanceError("tie_prob must lie in [0, 1)")
    rng = random.Random(seed)
    posts = tuple(f"p{j}" for j in range(1, m + 1))
    applicants = tuple(f"a{i}" for i in range(1, n + 1))
    prefs = {}
    for a in applicants:
        chosen = rng.sample(posts, rng.randint(1, m))
        groups: list[list[str]] = []
        for p in chosen:
            if groups and rng.random() < tie_prob:
                groups[-1].append(p)
            elif len(groups) < max_rank:
                groups.append([p])
            else:
                break
        prefs[a] = tuple(tuple(g) for g in groups)
    return Instance(applicants, posts, prefs)
