import numpy as np
import pytest

from modules import sdd
from modules.boolfn import (PrimeId, eval_hwb, eval_prime, generalized_hwb_oracle, hwb_oracle, prime_family, x_vars,
                            y_vars)
from modules.constructions import (CERTIFICATE_CAP, Role, build_fn_obdd, build_fn_sdd, build_hwb_sdd,
                                   build_prime_family, fixed_order_hwb_obdd, hwb_equivalence_certificate,
                                   ordering_descriptor)
from modules.errors import CapExceededError, ScopeError
from modules.report import Construction
from modules.sdd import Decision


@pytest.mark.parametrize("n", range(1, 7))
def test_prime_family_shares_one_manager(n):
    diagrams = build_prime_family(n)
    assert len(diagrams) == 2 * n
    assert all(d.manager is diagrams[0].manager for d in diagrams)


def test_hwb2_evaluates():
    artifact = build_hwb_sdd(2)
    assert sdd.evaluate(artifact.root, artifact.env, {1: 1, 2: 0}) == 1
    assert sdd.evaluate(artifact.root, artifact.env, {1: 0, 2: 1}) == 0


@pytest.mark.parametrize("n", range(1, 9))
def test_root_has_one_element_per_prime(n):
    for artifact in (build_hwb_sdd(n), build_fn_sdd(n)):
        node = artifact.env.node(artifact.root)
        assert isinstance(node, Decision)
        assert len(node.elements) == 2 * n
        assert node.vnode == artifact.vtree.root
        assert [p for p, _ in artifact.primes] == prime_family(n)


@pytest.mark.parametrize("n", range(1, 9))
def test_validity_and_compression(n):
    hwb, fn = build_hwb_sdd(n), build_fn_sdd(n)
    assert sdd.validate(hwb.root, hwb.env).valid
    assert sdd.validate(fn.root, fn.env).valid
    assert sdd.is_compressed(fn.root, fn.env)
    assert sdd.is_compressed(hwb.root, hwb.env) == (n == 1)


def test_fn3_exhaustive():
    artifact = build_fn_sdd(3)
    scope = x_vars(3) + y_vars(3)
    np.testing.assert_array_equal(sdd.truth_table(artifact.root, artifact.env, scope),
                                  generalized_hwb_oracle(3).table())


def test_hwb_subs_follow_the_prime():
    n = 5
    artifact = build_hwb_sdd(n)
    for (p, _), (_, s) in zip(artifact.primes, artifact.env.node(artifact.root).elements):
        assert s == artifact.env.constant(p.accepts_hwb(n))


def test_fn_subs_are_literals():
    n = 4
    artifact = build_fn_sdd(n)
    for (p, _), (_, s) in zip(artifact.primes, artifact.env.node(artifact.root).elements):
        var, positive = p.sub_literal(n)
        assert s == artifact.env.literal(var, positive)


def test_reports():
    artifact = build_hwb_sdd(3, [3, 1, 2])
    report = artifact.report
    assert artifact.role is Role.HWB
    assert report.function == "hwb" and report.n == 3
    assert report.construction is Construction.SDD_HWB
    assert (report.arcs, report.nodes) == tuple(sdd.size(artifact.root, artifact.env))
    assert report.descriptor == "sigma=3 1 2"

    fn = build_fn_sdd(2, rho=[5, 3, 4])
    assert fn.role is Role.GENERALIZED_HWB
    assert fn.report.construction is Construction.SDD_FN
    assert fn.report.descriptor == "sigma=1 2;rho=5 3 4"


def test_ordering_descriptor():
    assert ordering_descriptor([2, 1]) == "sigma=2 1"
    assert ordering_descriptor([1], [3, 2]) == "sigma=1;rho=3 2"


def test_ordering_errors():
    with pytest.raises(ScopeError):
        build_hwb_sdd(0)
    with pytest.raises(ScopeError):
        build_hwb_sdd(3, [1, 2, 2])
    with pytest.raises(ScopeError):
        build_fn_obdd(2, rho=[3, 4])


@pytest.mark.parametrize("n", range(1, 9))
def test_fixed_order_obdd_is_hwb(n):
    np.testing.assert_array_equal(fixed_order_hwb_obdd(n).table(x_vars(n)), hwb_oracle(n).table())


@pytest.mark.parametrize("n", range(1, 6))
def test_fn_obdd_matches_definition(n):
    scope = x_vars(n) + y_vars(n)
    diagram = build_fn_obdd(n)
    assert list(diagram.ordering) == scope
    np.testing.assert_array_equal(diagram.table(scope), generalized_hwb_oracle(n).table())


@pytest.mark.parametrize("n", [1, 2, 6, 10])
def test_certificate_passes(n):
    report = hwb_equivalence_certificate(n)
    assert report.passed
    assert report.witness is None
    assert report.checked == 1 << n


def test_certificate_finds_corruption():
    n = 4
    artifact = build_hwb_sdd(n)
    env = artifact.env
    elements = list(env.node(artifact.root).elements)
    assert artifact.primes[2][0] == PrimeId(1, 0)
    elements[2] = (elements[2][0], env.true)
    corrupted = artifact.with_root(env.decision(artifact.vtree.root, elements))
    report = hwb_equivalence_certificate(n, corrupted)
    assert not report.passed
    assert eval_hwb(n, report.witness) == 0
    assert eval_prime(PrimeId(1, 0), n, report.witness) == 1
    assert "decision form" in report.detail


def test_certificate_cap():
    with pytest.raises(CapExceededError):
        hwb_equivalence_certificate(CERTIFICATE_CAP + 1)


def test_random_orderings(rng):
    for _ in range(5):
        n = int(rng.integers(2, 9))
        sigma = [int(var) for var in rng.permutation(n) + 1]
        artifact = build_hwb_sdd(n, sigma)
        assert sdd.validate(artifact.root, artifact.env).valid
        assert sdd.find_mismatch(artifact.root, artifact.env, hwb_oracle(n)) is None
        fn = build_fn_sdd(n, sigma)
        assert sdd.find_mismatch(fn.root, fn.env, generalized_hwb_oracle(n)) is None


def test_growth_is_polynomial():
    ns = np.array([4, 8, 16])
    arcs = np.array([build_fn_sdd(int(n)).report.arcs for n in ns], dtype=float)
    slope = np.polyfit(np.log(ns), np.log(arcs), 1)[0]
    assert 1.5 <= slope <= 3.2
    assert all(b / a <= 9 for a, b in zip(arcs, arcs[1:]))
