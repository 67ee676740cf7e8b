import numpy as np
import pytest

from modules import obdd
from modules.boolfn import oracle_from_table
from modules.sdd import SddEnv
from modules.vtree import Vtree, right_linear

# Minimum internal node counts of HWB_n over all orderings.
HWB_MIN_OBDD_NODES = {4: 7, 6: 21, 8: 44, 10: 80, 12: 137, 14: 222}


@pytest.fixture(autouse=True)
def invariant_checks():
    """Every apply and condition in the suite checks its size bound and reduction."""
    previous = obdd.set_invariant_checks(True)
    yield
    obdd.set_invariant_checks(previous)


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


def random_shape(rng, variables):
    variables = list(variables)
    if len(variables) == 1:
        return variables[0]
    cut = int(rng.integers(1, len(variables)))
    return (random_shape(rng, variables[:cut]), random_shape(rng, variables[cut:]))


def random_vtree(rng, variables):
    variables = [int(var) for var in rng.permutation(list(variables))]
    return Vtree(random_shape(rng, variables))


def random_oracle(rng, scope, name="random"):
    return oracle_from_table(scope, rng.integers(0, 2, size=1 << len(scope)), name=name)


def random_sdd(rng, left_vars, right_vars, m, pool=2):
    """A single decision over (right_linear(left_vars), right_linear(right_vars)).

    Primes are a random partition of the left assignments into m blocks, subs
    are drawn from a pool of `pool` random functions so equal subs recur.
    """
    vtree = Vtree((right_linear(left_vars).shape(), right_linear(right_vars).shape()))
    env = SddEnv(vtree)
    left, right = vtree.left(vtree.root), vtree.right(vtree.root)
    rows = 1 << len(left_vars)
    blocks = np.concatenate([np.arange(m), rng.integers(0, m, size=rows - m)])
    rng.shuffle(blocks)
    primes = [obdd.to_sdd(obdd.from_oracle(oracle_from_table(left_vars, blocks == b), left_vars), env, left)
              for b in range(m)]
    candidates = [obdd.to_sdd(obdd.from_oracle(random_oracle(rng, right_vars), right_vars), env, right)
                  for _ in range(pool)]
    subs = [candidates[int(rng.integers(0, pool))] for _ in range(m)]
    root = env.decision(vtree.root, list(zip(primes, subs)))
    return env, root
