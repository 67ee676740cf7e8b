import itertools
from math import comb

import numpy as np
import pytest

from modules.boolfn import (PrimeId, constant_oracle, eval_exact_count, eval_generalized_hwb, eval_hwb, eval_prime,
                            exact_count_oracle, generalized_hwb_oracle, hwb_by_counts_oracle, hwb_oracle,
                            model_count, oracle_from_table, parse_function_spec, parse_prime_tag, prime_family,
                            prime_oracle, restrict, truth_table, var_name, x_vars, y_vars)
from modules.errors import CapExceededError, FormatError, ScopeError


def test_eval_hwb_examples():
    assert eval_hwb(2, (1, 0)) == 1
    assert eval_hwb(2, (0, 1)) == 0
    assert eval_hwb(4, (0, 0, 0, 0)) == 0
    assert eval_hwb(4, (1, 1, 1, 1)) == 1


def test_eval_hwb_accepts_mappings():
    assert eval_hwb(2, {1: 1, 2: 0}) == 1
    with pytest.raises(ScopeError):
        eval_hwb(2, {1: 1})
    with pytest.raises(ScopeError):
        eval_hwb(2, (1, 0, 1))


def test_eval_exact_count_examples():
    assert eval_exact_count(4, 2, (1, 0, 1, 0)) == 1
    assert eval_exact_count(4, 2, (1, 1, 1, 0)) == 0
    assert eval_exact_count(3, 0, (0, 0, 0)) == 1
    with pytest.raises(ScopeError):
        eval_exact_count(3, 4, (0, 0, 0))


def test_eval_prime_examples():
    assert eval_prime(PrimeId(2, 0), 4, (1, 0, 1, 0)) == 1
    assert eval_prime(PrimeId(2, 1), 4, (1, 0, 1, 0)) == 0
    assert eval_prime(PrimeId(0), 4, (0, 0, 0, 0)) == 1
    with pytest.raises(ScopeError):
        eval_prime(PrimeId(4, 1), 4, (1, 1, 1, 1))


def test_eval_generalized_hwb_examples():
    # x then y_0..y_n
    assert eval_generalized_hwb(2, (1, 0) + (1, 1, 1)) == 1
    for tail in itertools.product((0, 1), repeat=2):
        assert eval_generalized_hwb(2, (0, 0, 0) + tail) == 1
    assert eval_generalized_hwb(3, (1, 1, 0) + (1, 0, 1, 1)) == 1
    assert eval_generalized_hwb(3, (1, 1, 0) + (1, 0, 0, 1)) == 0


def test_scalar_and_vectorised_definitions_agree():
    for n in range(1, 6):
        table = hwb_oracle(n).table()
        for row, bits in enumerate(itertools.product((0, 1), repeat=n)):
            assert table[row] == eval_hwb(n, bits)
    scope = x_vars(3) + y_vars(3)
    table = generalized_hwb_oracle(3).table()
    for row, bits in enumerate(itertools.product((0, 1), repeat=len(scope))):
        assert table[row] == eval_generalized_hwb(3, bits)


@pytest.mark.parametrize("n", range(1, 13))
def test_hwb_is_disjunction_of_counts(n):
    np.testing.assert_array_equal(hwb_oracle(n).table(), hwb_by_counts_oracle(n).table())


@pytest.mark.parametrize("n", range(1, 13))
def test_hwb_model_count(n):
    assert model_count(hwb_oracle(n)) == sum(comb(n - 1, i - 1) for i in range(1, n + 1))


def test_truth_table_examples():
    np.testing.assert_array_equal(truth_table(hwb_oracle(2)), [0, 0, 1, 1])
    np.testing.assert_array_equal(truth_table(constant_oracle([1, 2], 0)), [0, 0, 0, 0])
    np.testing.assert_array_equal(truth_table(exact_count_oracle(2, 1)), [0, 1, 1, 0])


def test_model_count_examples():
    assert model_count(hwb_oracle(2)) == 2
    assert model_count(exact_count_oracle(4, 2)) == 6
    assert model_count(constant_oracle(x_vars(5), 1)) == 32


def test_table_over_superset_lifts():
    table = hwb_oracle(2).table([1, 2, 3])
    np.testing.assert_array_equal(table, [0, 0, 0, 0, 1, 1, 1, 1])
    with pytest.raises(ScopeError):
        hwb_oracle(3).table([1, 2])


def test_materialization_cap():
    with pytest.raises(CapExceededError):
        hwb_oracle(25).table()
    assert hwb_oracle(25).evaluate([1] + [0] * 24) == 1


@pytest.mark.parametrize("n", range(1, 11))
def test_primes_partition_assignments(n):
    family = prime_family(n)
    assert len(family) == 2 * n
    assert len(set(family)) == 2 * n
    tables = np.stack([prime_oracle(p, n).table() for p in family])
    assert tables.any(axis=1).all()
    assert (tables.sum(axis=0) == 1).all()


def test_prime_family_order():
    assert [p.label() for p in prime_family(3)] == ["P0", "P3", "P1,0", "P1,1", "P2,0", "P2,1"]
    assert prime_family(1) == [PrimeId(0), PrimeId(1)]


def test_sub_literals():
    n = 3
    assert PrimeId(0).sub_literal(n) == (4, False)
    assert PrimeId(3).sub_literal(n) == (7, True)
    assert PrimeId(2, 0).sub_literal(n) == (6, False)
    assert PrimeId(2, 1).sub_literal(n) == (6, True)


@pytest.mark.parametrize("n", [1, 2, 5, 12])
def test_restrict_generalized_to_hwb(n):
    restricted = restrict(generalized_hwb_oracle(n), {var: 1 for var in y_vars(n)})
    assert restricted.scope == tuple(x_vars(n))
    np.testing.assert_array_equal(restricted.table(), hwb_oracle(n).table())


def test_restrict_examples():
    f = hwb_oracle(2)
    assert restrict(f, {}) is f
    restricted = restrict(exact_count_oracle(4, 2), {1: 1})
    assert restricted.scope == (2, 3, 4)
    np.testing.assert_array_equal(restricted.table(), exact_count_oracle(3, 1).table())
    with pytest.raises(ScopeError):
        restrict(f, {9: 1})
    with pytest.raises(ScopeError):
        restrict(f, {1: 2})


def test_oracle_from_table():
    f = oracle_from_table([3, 1], [0, 1, 1, 1])
    assert f.evaluate({3: 0, 1: 1}) == 1
    assert f.evaluate({3: 0, 1: 0}) == 0
    np.testing.assert_array_equal(f.table([1, 3]), [0, 1, 1, 1])
    with pytest.raises(ScopeError):
        oracle_from_table([1, 2], [0, 1])


def test_var_names():
    assert var_name(2, 3) == "x2"
    assert var_name(4, 3) == "y0"
    assert var_name(7, 3) == "y3"
    assert var_name(7) == "v7"


def test_parse_prime_tag():
    assert parse_prime_tag("P0", 4) == PrimeId(0)
    assert parse_prime_tag("Pn", 4) == PrimeId(4)
    assert parse_prime_tag("P2,0", 4) == PrimeId(2, 0)
    assert parse_prime_tag("2_1", 4) == PrimeId(2, 1)
    with pytest.raises(FormatError):
        parse_prime_tag("Q1", 4)
    with pytest.raises(ScopeError):
        parse_prime_tag("P4,1", 4)


def test_parse_function_spec():
    assert parse_function_spec("hwb:3").name == "hwb:3"
    assert parse_function_spec("exact:4:2").evaluate((1, 1, 0, 0)) == 1
    assert parse_function_spec("prime:4:P2.0").evaluate((1, 0, 1, 0)) == 1
    assert parse_function_spec("ghwb:2").arity == 5
    for bad in ("hwb", "hwb:x", "sum:3", "exact:4"):
        with pytest.raises(FormatError):
            parse_function_spec(bad)
