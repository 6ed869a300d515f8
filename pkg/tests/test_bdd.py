from __future__ import annotations

import itertools

import pytest
from hypothesis import given, strategies as st

from dqcount.bdd import DdError, DdManager, KERNEL_COMPILED
from dqcount.bdd._kernel_py import Kernel as PureKernel
from dqcount.formula import evaluate
from dqcount.generators import GenSpec, gen_random

KERNELS = [PureKernel]
if KERNEL_COMPILED:
    from dqcount.bdd._kernel import Kernel as CompiledKernel
    KERNELS.append(CompiledKernel)


def _manager(kernel_cls, names):
    m = DdManager(kernel_cls())
    m.declare_many(names)
    return m


@pytest.mark.parametrize("kernel_cls", KERNELS)
@given(seed=st.integers(0, 10_000))
def test_build_matches_evaluation(kernel_cls, seed):
    d = gen_random(GenSpec(n=3, seed=seed, widths=(2, 3), gates=5))
    m = _manager(kernel_cls, d.variables)
    f = m.build(d.matrix, {v: m.id_of(v) for v in d.variables})
    ids = [m.id_of(v) for v in d.variables]
    hits = 0
    for bits in itertools.product((False, True), repeat=len(ids)):
        want = evaluate(d.matrix, dict(zip(d.variables, bits)))
        assert m.evaluate(f, dict(zip(ids, bits))) == want
        hits += want
    assert m.count_int(f, ids) == hits


@pytest.mark.parametrize("kernel_cls", KERNELS)
def test_quantifiers_and_rename(kernel_cls):
    m = _manager(kernel_cls, ["a", "b", "c"])
    a, b, c = (m.var(v) for v in "abc")
    f = (a & b) | (~a & c)
    assert m.exists(f, [0]) == (b | c)
    assert m.forall(f, [0]) == (b & c)
    assert m.and_exists(a, f, [0]) == b
    assert m.rename(a & b, {0: 2}) == (c & b)
    assert m.compose(f, {0: b}) == (b | (~b & c))
    assert m.cofactor(f, 0, True) == b
    with pytest.raises(DdError):
        m.rename(a & b, {0: 1})


@pytest.mark.parametrize("kernel_cls", KERNELS)
def test_canonicity(kernel_cls):
    m = _manager(kernel_cls, ["x", "y"])
    x, y = m.var("x"), m.var("y")
    assert (x ^ y) == ((x | y) & ~(x & y))
    assert (x & ~x).is_false and (x | ~x).is_true
    assert m.count_int(x.implies(y), [0, 1]) == 3
    cube = m.pick_cube(x & ~y)
    assert cube == {0: True, 1: False}


def test_managers_do_not_mix():
    m1, m2 = DdManager(), DdManager()
    m1.declare("a")
    m2.declare("a")
    with pytest.raises(DdError):
        m1.var("a") & m2.var("a")


def test_dot_output():
    m = DdManager()
    m.declare_many(["p", "q"])
    dot = m.to_dot(m.var("p") & m.var("q"), "f")
    assert dot.startswith("digraph") and "p" in dot
