from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from dqcount.bigcount import BigCount
from dqcount.brute import brute_count
from dqcount.counter import count
from dqcount.formula import And, Or, SemanticError, Var, parse, serialize
from dqcount.generators import GenSpec, gen_random
from dqcount.reductions import (
    ExtendedTwoDqbf, count_general, extended_to_2dqbf, fomc_brute, fomc_encode, parse_fo,
    to_2dqbf_pair, to_extended_pair, to_uniform,
)
from dqcount.reductions.fomc import SMOKER_FRIEND, fomc_naive


def _random_k(seed, k=3, n=3):
    return gen_random(GenSpec(n=n, seed=seed, widths=tuple([min(2, n)] * (k - 1) + [1]), gates=4))


# uniform


@settings(max_examples=15)
@given(st.integers(0, 100_000), st.integers(2, 3))
def test_uniform_preserves_count(seed, k):
    d = _random_k(seed, k=k, n=2)
    u = to_uniform(d)
    assert u.k == k
    assert len({len(u.deps(i)) for i in range(k)}) == 1
    assert brute_count(u, max_cells=1 << 12) == brute_count(d)


def test_uniform_output_serializes():
    u = to_uniform(_random_k(4))
    assert serialize(parse(serialize(u))) == serialize(u)


# pipeline


@settings(max_examples=6)
@given(st.integers(0, 100_000))
def test_pipeline_identity(seed):
    d = _random_k(seed, k=3, n=2)
    r = count_general(d)
    phi1, phi2 = to_2dqbf_pair(d)
    assert phi1.k == phi2.k == 2
    assert r.terms == (count(phi1).count, count(phi2).count)
    assert r.count == brute_count(d)


def test_extended_pair_counts():
    d = _random_k(7, k=3, n=2)
    e1, e2 = to_extended_pair(d)
    c1 = count(extended_to_2dqbf(e1), "symbolic").count
    c2 = count(extended_to_2dqbf(e2), "symbolic").count
    assert c1 - c2 == brute_count(d)


def test_extended_rejects_three_existential_conjunct():
    with pytest.raises(ValueError):
        ExtendedTwoDqbf.from_parts(
            ("x",), (("a", ("x",)), ("b", ()), ("c", ())), [Or(Var("a"), Var("b"), Var("c"))],
        )
    ok = ExtendedTwoDqbf.from_parts(("x",), (("a", ("x",)), ("b", ())), [And(Var("a"), Var("b"))])
    assert ok.dqbf.k == 2


def test_single_existential_goes_through_pipeline():
    d = gen_random(GenSpec(n=2, seed=3, widths=(2,), gates=3))
    assert count_general(d).count == brute_count(d)


# first-order model counting


def test_smoker_friend_encoding_shape():
    s = parse_fo(SMOKER_FRIEND)
    d = fomc_encode(s, 2)
    assert d.k == 4
    assert d.n == 2 * 2  # one block of n bits per first-order variable
    assert dict(d.existentials)["friend.u.v"] == ("u[0]", "u[1]", "v[0]", "v[1]")


@pytest.mark.parametrize("text, n, expected", [
    ("predicate P/1\nforall u; P(u)\n", 2, 1),
    ("predicate P/2\nforall u v; P(u, v) -> P(v, u)\n", 1, 8),
    ("predicate P/2\nforall u; P(u, u)\n", 1, 4),
    ("predicate P/2\npredicate Q/1\nforall u v; P(u, v) & u = v -> Q(u)\n", 1, 36),
    ("predicate P/2\nforall u v; P(u, v) & P(v, u) -> u = v\n", 1, 12),
    ("predicate P/1\nforall u; true\n", 1, 4),
])
def test_fomc_small_sentences(text, n, expected):
    s = parse_fo(text)
    assert fomc_naive(s, n) == expected
    assert fomc_brute(s, n) == expected
    assert count(fomc_encode(s, n)).count == BigCount.from_int(expected)


def test_smoker_friend_domain_two():
    s = parse_fo(SMOKER_FRIEND)
    assert fomc_naive(s, 1) == fomc_brute(s, 1) == 112
    assert count(fomc_encode(s, 1)).count.to_int() == 112


@pytest.mark.parametrize("text", [
    "predicate P/1\nforall u; Q(u)\n",
    "predicate P/1\nforall u; P(u, u)\n",
    "predicate P/1\nexists u; P(u)\n",
    "predicate P/1\nforall u; P(w)\n",
])
def test_fo_errors(text):
    with pytest.raises((SemanticError, ValueError)):
        parse_fo(text)


def test_uniform_arity_two_existentials():
    d = gen_random(GenSpec(n=1, seed=0, widths=(1, 0), gates=2))
    u = to_uniform(d)
    assert u.n == 4 and u.k == 2
    assert [len(u.deps(i)) for i in range(2)] == [2, 2]


def test_uniform_single_existential_is_identity():
    d = gen_random(GenSpec(n=2, seed=1, widths=(2,), gates=3))
    u = to_uniform(d)
    assert u.universals == d.universals and u.existentials == d.existentials
    assert brute_count(u) == brute_count(d)


def test_extended_pair_arity():
    d = gen_random(GenSpec(n=2, seed=0, widths=(1, 1, 2), gates=3))
    e1, e2 = to_extended_pair(d)
    # f1..f3, c, p and the four case functions
    assert e1.dqbf.k == 3 + 2 + 4
    times = [v for v in e1.dqbf.universals if v.startswith("t")]
    assert len(times) == 2 + 3 + 1  # n + k bits plus the -1 tag


def test_trivial_one_existential_pipeline():
    d = parse("#dqcir\nforall(x)\nexists(y; x)\noutput(y)\n")
    r = count_general(d)
    assert r.count.to_int() == 1 == brute_count(d).to_int()


def test_two_existential_extended_index_width():
    d = gen_random(GenSpec(n=2, seed=4, widths=(1, 2), gates=3))
    e = ExtendedTwoDqbf.from_parts(d.universals, d.existentials, [d.matrix])
    out = extended_to_2dqbf(e)
    assert [len(out.deps(i)) for i in range(2)] == [d.n + 1, d.n + 1]
    assert count(out, "symbolic").count == brute_count(d)
