import itertools
import json
import random

import pytest
from properties import random_instance

from rankmax import oracle
from rankmax.engine import (
    Comparison,
    Label,
    Matching,
    MatchingError,
    NotMaximumError,
    Signature,
    classify_edges,
    critical_rank,
    critical_ranks_all,
    dump_result,
    edge_in_every_rmm,
    edge_in_some_rmm,
    eou_decompose,
    f_posts,
    fixed_phase,
    max_matching_augment,
    rank_maximal,
    signature_cmp,
    unreachable_phase,
)
from rankmax.instance import (
    InstanceError,
    generate_random,
    parse_instance,
    replace_preferences,
    set_preferences,
    truncate,
)


def all_max_matchings(edges):
    """Every maximum matching of a small edge list, by trying all subsets."""
    best, found = 0, []
    for k in range(len(edges), -1, -1):
        for sub in itertools.combinations(edges, k):
            if len({a for a, _ in sub}) == k and len({p for _, p in sub}) == k:
                found.append(Matching.of(sub))
        if found:
            best = k
            break
    return best, found


def eou_by_enumeration(edges, applicants, posts):
    """Even iff free in some maximum matching; otherwise Odd iff its partner is Even."""
    _, mms = all_max_matchings(edges)
    even = {v for m in mms for v in list(applicants) + list(posts) if m.post_of(v) is None and m.applicant_of(v) is None}
    labels = {}
    for v in list(applicants) + list(posts):
        if v in even:
            labels[v] = Label.EVEN
            continue
        partners = {m.post_of(v) or m.applicant_of(v) for m in mms}
        kinds = {w in even for w in partners}
        assert len(kinds) == 1, "Odd/Unreachable must not depend on the maximum matching"
        labels[v] = Label.ODD if kinds.pop() else Label.UNREACHABLE
    return labels


def rank1_edges(inst, without=None):
    return [(a, p) for a, p, k in inst.edges() if k == 1 and a != without]


# -- matching primitives ------------------------------------------------------


def test_max_matching_example_rank1(example):
    edges = rank1_edges(example)
    size, _ = all_max_matchings(edges)
    m = max_matching_augment(edges)
    assert size == len(m) == 3
    assert {p for _, p in m} == {"p1", "p2", "p6"}


def test_max_matching_empty():
    assert len(max_matching_augment([])) == 0


def test_max_matching_complete_3x3():
    edges = [(a, p) for a in "abc" for p in "xyz"]
    assert len(max_matching_augment(edges)) == 3


@pytest.mark.parametrize("seed", range(100))
def test_max_matching_vs_subsets(seed):
    rng = random.Random(seed)
    edges = sorted({(f"a{rng.randint(1, 4)}", f"p{rng.randint(1, 4)}") for _ in range(rng.randint(0, 9))})
    size, mms = all_max_matchings(edges)
    seed_m = rng.choice(mms) if mms and rng.random() < 0.5 else None
    got = max_matching_augment(edges, seed_m)
    assert len(got) == size
    assert set(got) <= set(edges)


def test_max_matching_rejects_foreign_seed():
    with pytest.raises(MatchingError):
        max_matching_augment([("a", "p")], Matching.of([("a", "q")]))


def test_matching_rejects_shared_vertex():
    with pytest.raises(MatchingError):
        Matching.of([("a", "p"), ("b", "p")])


# -- EOU decomposition --------------------------------------------------------


def test_eou_example_without_a1(example):
    edges = rank1_edges(example, without="a1")
    labels = eou_decompose(edges, max_matching_augment(edges))
    assert labels.of_post("p1") is Label.ODD
    assert labels.of_post("p2") is Label.UNREACHABLE
    assert labels.of_post("p6") is Label.UNREACHABLE
    oracle_labels = eou_by_enumeration(edges, {a for a, _ in edges}, {p for _, p in edges})
    assert {p: labels.of_post(p) for p in ("p1", "p2", "p6")} == {p: oracle_labels[p] for p in ("p1", "p2", "p6")}


def test_eou_single_matched_edge():
    labels = eou_decompose([("a", "p")], Matching.of([("a", "p")]))
    assert labels.of_applicant("a") is labels.of_post("p") is Label.UNREACHABLE


def test_eou_independent_of_matching():
    edges = [("a", "p"), ("a", "q")]
    one = eou_decompose(edges, Matching.of([("a", "p")]))
    two = eou_decompose(edges, Matching.of([("a", "q")]))
    assert one == two
    assert one.of_post("p") is Label.EVEN and one.of_applicant("a") is Label.ODD


def test_eou_rejects_non_maximum():
    with pytest.raises(NotMaximumError):
        eou_decompose([("a", "p")], Matching.of())


def test_eou_isolated_vertices_even():
    labels = eou_decompose([], Matching.of(), ["a"], ["p"])
    assert labels.of_applicant("a") is labels.of_post("p") is Label.EVEN


@pytest.mark.parametrize("seed", range(150))
def test_eou_vs_enumeration(seed):
    rng = random.Random(seed)
    edges = sorted({(f"a{rng.randint(1, 4)}", f"p{rng.randint(1, 4)}") for _ in range(rng.randint(1, 9))})
    applicants, posts = {a for a, _ in edges}, {p for _, p in edges}
    want = eou_by_enumeration(edges, applicants, posts)
    _, mms = all_max_matchings(edges)
    for m in mms:
        labels = eou_decompose(edges, m)
        got = {**labels.applicants, **labels.posts}
        assert got == want
        # matched Odd vertices pair with Even ones, Unreachable with Unreachable
        for a, p in m:
            pair = {got[a], got[p]}
            assert pair in ({Label.ODD, Label.EVEN}, {Label.UNREACHABLE})


# -- signatures ---------------------------------------------------------------


@pytest.mark.parametrize(
    "s1, s2, expected",
    [
        ((3, 0, 1, 2), (3, 0, 0, 3), Comparison.BETTER),
        ((1, 2), (1, 2), Comparison.EQUAL),
        ((2, 5), (3, 0), Comparison.WORSE),
        ((1, 0, 0), (1,), Comparison.EQUAL),
        ((1,), (1, 0, 1), Comparison.WORSE),
    ],
)
def test_signature_cmp(s1, s2, expected):
    assert signature_cmp(s1, s2) is expected
    assert signature_cmp(Signature(s1), Signature(s2)) is expected


def test_signature_padding_equality_and_hash():
    assert Signature((1, 0)) == Signature((1,))
    assert hash(Signature((1, 0))) == hash(Signature((1,)))
    assert Signature((2, 5)) < Signature((3, 0))


# -- rank-maximal matching ----------------------------------------------------


def test_rank_maximal_example(example):
    res = rank_maximal(example)
    assert res.signature.counts == (3, 0, 1, 2, 0, 0)
    assert res.matching.post_of("a1") == "p5"
    assert len(res.phases) == 6


def test_rank_maximal_single_edge():
    res = rank_maximal(parse_instance("a: p"))
    assert set(res.matching) == {("a", "p")}
    assert res.signature.counts == (1,)


def test_rank_maximal_example_forcing_list(example):
    h = replace_preferences(example, "a1", ("p2", "p1", "p6", "p3", "p4", "p5"))
    assert rank_maximal(h).matching.post_of("a1") == "p2"


def test_phase_records_are_maximum(example):
    for rec in rank_maximal(example).phases:
        edges = [(a, p) for a, p, _ in rec.reduced_edges]
        size, _ = all_max_matchings(edges)
        assert len(rec.matching) == size
        assert set(rec.matching) <= set(edges)


@pytest.mark.parametrize("seed", range(200))
def test_rank_maximal_vs_oracle(seed):
    inst = random_instance(seed, max_side=7, max_rank=5)
    res = rank_maximal(inst)
    rmms = oracle.enumerate_rmm(inst)
    assert res.signature == rmms.signature
    assert res.matching in rmms.matchings
    # every rank-maximal matching of G_i lies inside the reduced graph of phase i
    for i, rec in enumerate(res.phases, start=1):
        reduced = {(a, p) for a, p, _ in rec.reduced_edges}
        for m in oracle.enumerate_rmm(truncate(inst, i)).matchings:
            assert set(m) <= reduced


@pytest.mark.parametrize("seed", range(100))
def test_reduced_graphs_independent_of_order(seed):
    inst = random_instance(seed, max_side=7, max_rank=5)
    ref = rank_maximal(inst)
    for s in range(5):
        other = rank_maximal(inst, shuffle_seed=s)
        assert [r.reduced_edges for r in other.phases] == [r.reduced_edges for r in ref.phases]
        assert [r.labels for r in other.phases] == [r.labels for r in ref.phases]
        assert other.signature == ref.signature


def test_dump_result_is_json(example):
    doc = json.loads(dump_result(example, rank_maximal(example), phases=True))
    assert doc["signature"] == [3, 0, 1, 2, 0, 0]
    assert ["a1", "p5", 4] in doc["matching"]
    assert len(doc["phases"]) == 6
    assert doc["phases"][0]["labels"]["posts"]["p1"] in "EOU"


# -- edge classes ---------------------------------------------------------------


@pytest.mark.parametrize(
    "a, p, some, every",
    [
        ("a1", "p5", True, True),
        ("a1", "p2", False, False),
        # a2, a3, a4 share one list, so p1 can go to any of them
        ("a2", "p1", True, False),
        ("a6", "p6", True, True),
    ],
)
def test_edge_classes_example(example, a, p, some, every):
    assert edge_in_some_rmm(example, a, p) is some
    assert edge_in_every_rmm(example, a, p) is every


def test_edge_single():
    inst = parse_instance("a: p")
    assert edge_in_some_rmm(inst, "a", "p") and edge_in_every_rmm(inst, "a", "p")


def test_edge_two_applicants_tied():
    inst = parse_instance("a: (p q)\nb: (p q)")
    for a in "ab":
        for p in "pq":
            assert edge_in_some_rmm(inst, a, p)
            assert not edge_in_every_rmm(inst, a, p)


def test_edge_unknown(example):
    with pytest.raises(InstanceError):
        edge_in_some_rmm(example, "a6", "p1")
    with pytest.raises(InstanceError):
        edge_in_every_rmm(example, "a6", "p1")


@pytest.mark.parametrize("seed", range(200))
def test_classify_vs_oracle(seed):
    inst = random_instance(seed, max_side=7, max_rank=5)
    names = {"every": oracle.EVERY, "some": oracle.SOME, "none": oracle.NONE}
    for (a, p), cls in classify_edges(inst).items():
        assert names[cls] == oracle.oracle_edge_class(inst, a, p)


# -- f-posts ----------------------------------------------------------------------


def test_f_posts_example(example):
    assert set(f_posts(example, "a1")) == {"p1", "p2", "p6"}


def test_f_posts_lone_applicant():
    assert f_posts(parse_instance("a: p q"), "a") == []


def test_f_posts_unknown(example):
    with pytest.raises(InstanceError):
        f_posts(example, "zz")


# -- critical ranks -----------------------------------------------------------------


@pytest.fixture
def example_base(example):
    return set_preferences(example, "a1", [])


def test_critical_example_f_post(example_base):
    assert critical_rank(example_base, "a1", "p1") == 1


def test_critical_example_p3(example_base):
    assert critical_rank(example_base, "a1", "p3") == 3


def test_critical_ranks_all_example(example_base):
    assert critical_ranks_all(example_base, "a1") == {"p2": 1, "p1": 1, "p3": 3, "p5": 7, "p4": 4, "p6": 1}


def test_critical_never_fixed():
    base = parse_instance("posts: p q\na:\nb: q")
    # b-q is an isolated matched pair; p stays free and a stays free
    assert critical_rank(base, "a", "p") == base.max_rank + 1


def test_critical_rejects_existing_edge(example):
    with pytest.raises(InstanceError):
        critical_rank(example, "a1", "p2")


def test_critical_ranks_all_hat_p2(example):
    hat = set_preferences(example, "a1", [["p2"]])
    crit = critical_ranks_all(hat, "a1")
    assert all(crit[p] == 1 for p in f_posts(hat, "a1") if p in crit)
    assert crit == {"p1": 1, "p3": 3, "p5": 5, "p4": 4, "p6": 1}


def test_critical_ranks_all_isolated():
    # no edges anywhere, so r = 0 and every post maps to r + 1
    base = parse_instance("posts: p q r\na:")
    assert critical_ranks_all(base, "a") == {"p": 1, "q": 1, "r": 1}


@pytest.mark.parametrize("seed", range(200))
def test_critical_all_matches_pointwise(seed):
    base = random_instance(seed)
    a = random.Random(seed).choice(base.applicants)
    crit = critical_ranks_all(base, a)
    assert set(crit) == {p for p in base.posts if not base.has_edge(a, p)}
    for p, c in crit.items():
        assert critical_rank(base, a, p) == c


@pytest.mark.parametrize("seed", range(100))
def test_critical_vs_oracle(seed):
    base = random_instance(seed)
    a = random.Random(seed).choice(base.applicants)
    for p, c in critical_ranks_all(base, a).items():
        assert oracle.oracle_critical_rank(base, a, p) == c


def test_unreachable_phase_hat_p2(example):
    hat = set_preferences(example, "a1", [["p2"]])
    assert unreachable_phase(hat, "a1") == 5


def test_unreachable_phase_no_edges(example_base):
    assert fixed_phase(example_base, "a1") is None
    assert unreachable_phase(example_base, "a1") == example_base.max_rank


def test_unreachable_phase_private_post():
    inst = parse_instance("a: p\nb: q r")
    assert unreachable_phase(inst, "a") == 1


def test_generate_then_solve_smoke():
    inst = generate_random(6, 6, 6, 0.0, 11)
    assert rank_maximal(inst).signature == oracle.enumerate_rmm(inst).signature
