"""Decision trees: splitting, evaluation, energy accounting, bad-leaf mass."""

import numpy as np
import pytest

from boolreg import (
    BooleanFunction,
    bad_leaf_mass,
    constant,
    dictator,
    energy,
    evaluate,
    evaluate_table,
    leaves,
    majority,
    noisy_influence,
    parity,
    singleton,
    split_all_leaves,
    split_leaf,
    stability,
    to_dot,
    tree_depth,
    wht,
)
from oracles import random_real_unit


def test_singleton_energy_parity():
    t = singleton(parity(2, [0, 1]))
    assert energy(t, 0.5) == pytest.approx(0.25, abs=1e-15)


def test_singleton_energy_constants():
    assert energy(singleton(constant(3, 1.0)), 0.2) == pytest.approx(1.0, abs=1e-15)
    assert energy(singleton(constant(3, 0.0)), 0.9) == pytest.approx(0.0, abs=1e-15)


def test_evaluate_singleton():
    f = majority(3)
    t = singleton(f)
    for b in range(8):
        assert evaluate(t, b) == f.values[b]


def test_evaluate_after_split_equals_f():
    f = majority(3)
    t = split_leaf(singleton(f), 0, 0)
    for b in range(8):
        assert evaluate(t, b) == f.values[b]
    np.testing.assert_array_equal(evaluate_table(t), f.values)


def test_evaluate_walks_by_bits():
    # two-level tree with constant leaves: query x1 then x2 on the plus side
    f = parity(2, [0, 1])
    t = split_leaf(singleton(f), 0, 0)
    plus_leaf = next(leaf for leaf, _ in leaves(t) if leaf.fixed.get(0) == 1)
    t = split_leaf(t, plus_leaf.id, 1)
    # x1=+1, x2=+1 -> b=0b00: product is +1
    assert evaluate(t, 0b00) == 1.0
    # x1=+1, x2=-1 -> b=0b10
    assert evaluate(t, 0b10) == -1.0
    # x1=-1 lands in the unsplit branch
    assert evaluate(t, 0b01) == -1.0


def test_split_product_leaves():
    t = split_leaf(singleton(parity(2, [0, 1])), 0, 0)
    got = sorted((leaf.fixed[0], tuple(leaf.fn.values)) for leaf, depth in leaves(t))
    x2 = dictator(2, 1).values
    assert got == sorted([(1, tuple(x2)), (-1, tuple(-x2))])
    assert all(depth == 1 for _, depth in leaves(t))


def test_split_energy_increment_identity():
    f = parity(2, [0, 1])
    delta = 0.5
    before = energy(singleton(f), delta)
    after = energy(split_leaf(singleton(f), 0, 0), delta)
    assert before == pytest.approx(0.25, abs=1e-15)
    assert after == pytest.approx(0.5, abs=1e-15)
    assert after - before == pytest.approx(delta * noisy_influence(f, 0, delta), abs=1e-12)


def test_split_irrelevant_variable_keeps_energy():
    f = parity(3, [0, 1])  # x3 irrelevant
    t = singleton(f)
    assert energy(split_leaf(t, 0, 2), 0.4) == pytest.approx(energy(t, 0.4), abs=1e-12)


def test_energy_increment_identity_random_corpus():
    rng = np.random.default_rng(53)
    for _ in range(25):
        n = int(rng.integers(2, 8))
        f = BooleanFunction(n, random_real_unit(rng, n))
        i = int(rng.integers(n))
        for delta in (0.1, 0.3, 0.5, 0.9):
            lhs = energy(split_leaf(singleton(f), 0, i), delta)
            rhs = stability(wht(f), 1.0 - delta) + delta * noisy_influence(f, i, delta)
            assert abs(lhs - rhs) <= 1e-9


def test_complete_tree_energy_is_mean_square():
    rng = np.random.default_rng(59)
    for n in (2, 4, 6):
        f = BooleanFunction(n, rng.normal(size=1 << n))
        t = singleton(f)
        for var in range(n):
            t = split_all_leaves(t, var)
        assert all(np.ptp(leaf.fn.values) == 0.0 for leaf, _ in leaves(t))
        for delta in (0.2, 0.8):
            expected = float((f.values ** 2).mean())
            assert energy(t, delta) == pytest.approx(expected, abs=1e-9)


def test_energy_monotone_under_random_splits():
    rng = np.random.default_rng(61)
    for _ in range(10):
        n = int(rng.integers(3, 7))
        f = BooleanFunction(n, random_real_unit(rng, n))
        delta = float(rng.uniform(0.05, 1.0))
        t = singleton(f)
        current = energy(t, delta)
        for _ in range(4):
            leaf, _ = leaves(t)[int(rng.integers(len(leaves(t))))]
            options = [v for v in range(n) if v not in leaf.fixed]
            if not options:
                continue
            t = split_leaf(t, leaf.id, int(rng.choice(options)))
            nxt = energy(t, delta)
            assert nxt >= current - 1e-12
            assert nxt <= float((f.values ** 2).mean()) + 1e-9
            current = nxt


def test_evaluate_equals_f_for_random_split_sequences():
    rng = np.random.default_rng(67)
    n = 6
    f = BooleanFunction(n, rng.normal(size=1 << n))
    t = singleton(f)
    for _ in range(12):
        all_leaves = leaves(t)
        leaf, _ = all_leaves[int(rng.integers(len(all_leaves)))]
        options = [v for v in range(n) if v not in leaf.fixed]
        if not options:
            continue
        t = split_leaf(t, leaf.id, int(rng.choice(options)))
        np.testing.assert_array_equal(evaluate_table(t), f.values)


def test_leaf_mass_sums_to_one():
    rng = np.random.default_rng(71)
    t = singleton(majority(3))
    t = split_leaf(t, 0, 1)
    t = split_leaf(t, leaves(t)[0][0].id, 2)
    assert sum(2.0 ** -d for _, d in leaves(t)) == pytest.approx(1.0, abs=1e-15)


def test_no_repeat_split_rejected():
    t = split_leaf(singleton(majority(3)), 0, 1)
    leaf, _ = leaves(t)[0]
    with pytest.raises(ValueError):
        split_leaf(t, leaf.id, 1)


def test_split_unknown_leaf():
    with pytest.raises(KeyError):
        split_leaf(singleton(majority(3)), 99, 0)


def test_leaf_fixed_matches_restriction():
    f = majority(3)
    t = split_leaf(singleton(f), 0, 0)
    for leaf, depth in leaves(t):
        assert depth == len(leaf.fixed) == 1
        for b in range(8):
            forced = b
            for var, v in leaf.fixed.items():
                forced = (forced & ~(1 << var)) if v == 1 else (forced | (1 << var))
            assert leaf.fn.values[b] == f.values[forced]


def test_persistence():
    t0 = singleton(majority(3))
    t1 = split_leaf(t0, 0, 0)
    assert len(leaves(t0)) == 1  # original untouched
    assert len(leaves(t1)) == 2
    assert tree_depth(t0) == 0 and tree_depth(t1) == 1


def test_bad_leaf_mass_constant_leaves():
    t = singleton(constant(3, 1.0))
    assert bad_leaf_mass(t, 0.5, 0.5) == 0.0


def test_bad_leaf_mass_dictator():
    assert bad_leaf_mass(singleton(dictator(2, 0)), 0.5, 0.5) == 1.0


def test_bad_leaf_mass_maj3_delta_zero():
    assert bad_leaf_mass(singleton(majority(3)), 0.6, 0.0) == 0.0


def test_to_dot():
    t = split_leaf(singleton(majority(3)), 0, 1)
    dot = to_dot(t, 0.3)
    assert dot.startswith("digraph")
    assert '"x2"' in dot
    assert '[label="+1"]' in dot and '[label="-1"]' in dot
    assert "depth=1" in dot and "mean=" in dot and "max_inf=" in dot


def test_energy_delta_validation():
    with pytest.raises(ValueError):
        energy(singleton(majority(3)), 0.0)
