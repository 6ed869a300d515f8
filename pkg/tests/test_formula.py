from __future__ import annotations

import itertools

import pytest
from hypothesis import given, strategies as st

from dqcount.formula import (
    And, Dqbf, Iff, Implies, Not, Or, ParseError, SemanticError, Var, Xor, evaluate, parse,
    parse_expr, serialize, substitute, variables_of,
)
from dqcount.generators import GenSpec, gen_random

DQDIMACS = """\
c small example
p cnf 4 2
a 1 2 0
d 3 1 0
e 4 0
1 3 0
-2 -3 4 0
"""


def _truth_table(d: Dqbf):
    names = d.variables
    return [evaluate(d.matrix, dict(zip(names, bits)))
            for bits in itertools.product((False, True), repeat=len(names))]


@given(st.integers(0, 10_000), st.integers(1, 5))
def test_circuit_round_trip(seed, n):
    d = gen_random(GenSpec(n=n, seed=seed, widths=(min(2, n), n), gates=4))
    back = parse(serialize(d))
    assert back.universals == d.universals
    assert back.existentials == d.existentials
    assert _truth_table(back) == _truth_table(d)


def test_dqdimacs_free_existential_depends_on_all():
    d = parse(DQDIMACS, "dqdimacs")
    assert d.universals == ("1", "2")
    assert d.existentials == (("3", ("1",)), ("4", ("1", "2")))
    again = parse(serialize(d, "dqdimacs"), "dqdimacs")
    assert _truth_table(again) == _truth_table(d)


def test_dependencies_follow_declaration_order():
    d = Dqbf(("a", "b", "c"), (("y", ("c", "a")),), Or(Var("y"), Var("b")))
    assert d.deps(0) == ("a", "c")
    assert d.dep_positions(0) == (0, 2)


@pytest.mark.parametrize("text, kind, line", [
    ("#dqcir\nforall(x)\nexists(y; z)\noutput(y)\n", SemanticError, 3),
    ("#dqcir\nforall(x)\nexists(y; x)\ng = foo(x)\noutput(g)\n", ParseError, 4),
    ("#dqcir\nforall(x)\noutput(q)\n", SemanticError, 3),
])
def test_errors_carry_line_numbers(text, kind, line):
    with pytest.raises(kind) as info:
        parse(text)
    assert info.value.line == line


def test_semantic_checks_on_construction():
    with pytest.raises(SemanticError):
        Dqbf(("x", "x"), (), Var("x"))
    with pytest.raises(SemanticError):
        Dqbf(("x",), (("y", ("x",)),), Var("z"))
    with pytest.raises(SemanticError):
        Dqbf(("x",), (("x", ()),), Var("x"))


def test_parse_expr_precedence():
    e = parse_expr("a & ~b -> c <-> d")
    ref = Iff(Implies(And(Var("a"), Not(Var("b"))), Var("c")), Var("d"))
    names = sorted(variables_of(ref))
    for bits in itertools.product((False, True), repeat=len(names)):
        env = dict(zip(names, bits))
        assert evaluate(e, env) == evaluate(ref, env)
    assert evaluate(parse_expr("a -> b -> c"), {"a": True, "b": False, "c": False})
    assert evaluate(parse_expr("xor(a, b) | false"), {"a": True, "b": False})


def test_parse_expr_rejects_atoms_without_hook():
    with pytest.raises(ParseError):
        parse_expr("P(u)")
    with pytest.raises(ParseError):
        parse_expr("a & (b")


def test_substitute_is_simultaneous():
    e = Xor(Var("a"), Var("b"))
    s = substitute(e, {"a": Var("b"), "b": Var("a")})
    for a, b in itertools.product((False, True), repeat=2):
        assert evaluate(s, {"a": a, "b": b}) == (a != b)
