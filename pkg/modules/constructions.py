"""Polynomial-size SDDs for the hidden weighted bit function and its generalisation F_n."""
import time
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import reduce
from typing import List, Optional, Sequence, Tuple

import numpy as np

from utils.logging_setup import logger
from .boolfn import (Assignment, PrimeId, VarId, hwb_by_counts_oracle, hwb_oracle,
                     prime_family, row_assignment, x_vars, y_vars)
from .errors import CapExceededError, ScopeError
from .obdd import Obdd, ObddManager, Op, apply, build_prime, literal, to_sdd
from .report import Construction, SizeReport
from .sdd import SddEnv, SddRef, read_vars, size, truth_table
from .vtree import Vtree, fn_vtree, hwb_vtree, leftfirst_ordering

CERTIFICATE_CAP = 12


class Role(str, Enum):
    HWB = "HWB"
    GENERALIZED_HWB = "GENERALIZED_HWB"


@dataclass
class ConstructionArtifact:
    n: int
    vtree: Vtree
    env: SddEnv
    root: SddRef
    role: Role
    report: SizeReport
    primes: List[Tuple[PrimeId, Obdd]] = field(default_factory=list)

    def with_root(self, root: SddRef) -> "ConstructionArtifact":
        return replace(self, root=root)


def ordering_descriptor(sigma: Sequence[VarId], rho: Optional[Sequence[VarId]] = None) -> str:
    text = "sigma=" + " ".join(str(var) for var in sigma)
    if rho is not None:
        text += ";rho=" + " ".join(str(var) for var in rho)
    return text


def _sigma(n: int, sigma: Optional[Sequence[VarId]]) -> List[VarId]:
    if n < 1:
        raise ScopeError(f"arity must be positive, got {n}")
    sigma = x_vars(n) if sigma is None else [int(var) for var in sigma]
    if sorted(sigma) != x_vars(n):
        raise ScopeError(f"{sigma} is not an ordering of x1..x{n}")
    return sigma


def build_prime_family(n: int, sigma: Optional[Sequence[VarId]] = None,
                       manager: Optional[ObddManager] = None) -> List[Obdd]:
    """OBDDs of P_0, P_n, P_{1,0}, P_{1,1}, ... sharing one manager."""
    sigma = _sigma(n, sigma)
    manager = manager or ObddManager(sigma)
    return [build_prime(p, n, sigma, manager) for p in prime_family(n)]


def _elapsed_ms(start: float) -> float:
    return round((time.perf_counter() - start) * 1000.0, 3)


def build_hwb_sdd(n: int, sigma: Optional[Sequence[VarId]] = None) -> ConstructionArtifact:
    """(P_0 ∧ ⊥) ∨ (P_n ∧ ⊤) ∨ ⋁ ((P_{i,0} ∧ ⊥) ∨ (P_{i,1} ∧ ⊤)) over hwb_vtree(n, sigma)."""
    start = time.perf_counter()
    sigma = _sigma(n, sigma)
    vtree = hwb_vtree(n, sigma)
    env = SddEnv(vtree)
    left = vtree.left(vtree.root)
    family = prime_family(n)
    diagrams = build_prime_family(n, sigma)
    elements = [(to_sdd(diagram, env, left), env.constant(p.accepts_hwb(n)))
                for p, diagram in zip(family, diagrams)]
    root = env.decision(vtree.root, elements)
    arcs, nodes = size(root, env)
    report = SizeReport("hwb", n, Construction.SDD_HWB, nodes, arcs, _elapsed_ms(start),
                        ordering_descriptor(sigma))
    logger.info(f"Built HWB SDD for n={n}: {arcs} arcs, {nodes} nodes")
    return ConstructionArtifact(n, vtree, env, root, Role.HWB, report, list(zip(family, diagrams)))


def build_fn_sdd(n: int, sigma: Optional[Sequence[VarId]] = None,
                 rho: Optional[Sequence[VarId]] = None) -> ConstructionArtifact:
    """(P_0 ∧ ¬y_0) ∨ (P_n ∧ y_n) ∨ ⋁ ((P_{i,0} ∧ ¬y_i) ∨ (P_{i,1} ∧ y_i)) over fn_vtree(n, sigma, rho)."""
    start = time.perf_counter()
    sigma = _sigma(n, sigma)
    vtree = fn_vtree(n, sigma, rho)
    rho = leftfirst_ordering(vtree, vtree.right(vtree.root))
    env = SddEnv(vtree)
    left = vtree.left(vtree.root)
    family = prime_family(n)
    diagrams = build_prime_family(n, sigma)
    elements = []
    for p, diagram in zip(family, diagrams):
        var, positive = p.sub_literal(n)
        elements.append((to_sdd(diagram, env, left), env.literal(var, positive)))
    root = env.decision(vtree.root, elements)
    arcs, nodes = size(root, env)
    report = SizeReport("ghwb", n, Construction.SDD_FN, nodes, arcs, _elapsed_ms(start),
                        ordering_descriptor(sigma, rho))
    logger.info(f"Built F_n SDD for n={n}: {arcs} arcs, {nodes} nodes")
    return ConstructionArtifact(n, vtree, env, root, Role.GENERALIZED_HWB, report, list(zip(family, diagrams)))


def build_fn_obdd(n: int, sigma: Optional[Sequence[VarId]] = None,
                  rho: Optional[Sequence[VarId]] = None) -> Obdd:
    """F_n as one OBDD under sigma followed by rho."""
    sigma = _sigma(n, sigma)
    rho = y_vars(n) if rho is None else [int(var) for var in rho]
    if sorted(rho) != y_vars(n):
        raise ScopeError(f"{rho} is not an ordering of y0..y{n}")
    manager = ObddManager(sigma + rho)
    terms = []
    for p in prime_family(n):
        var, positive = p.sub_literal(n)
        terms.append(apply(Op.AND, build_prime(p, n, sigma, manager), literal(manager, var, positive)))
    return reduce(lambda f, g: apply(Op.OR, f, g), terms)


def fixed_order_hwb_obdd(n: int, sigma: Optional[Sequence[VarId]] = None) -> Obdd:
    """HWB_n under a fixed ordering, as the disjunction of the primes paired with ⊤."""
    sigma = _sigma(n, sigma)
    manager = ObddManager(sigma)
    accepting = [build_prime(p, n, sigma, manager) for p in prime_family(n) if p.accepts_hwb(n)]
    return reduce(lambda f, g: apply(Op.OR, f, g), accepting)


@dataclass
class CertificateReport:
    n: int
    passed: bool
    witness: Optional[Assignment] = None
    checked: int = 0
    detail: str = ""


def hwb_equivalence_certificate(n: int, artifact: Optional[ConstructionArtifact] = None) -> CertificateReport:
    """Decision form, E-form and the definition of HWB_n agree on every x-assignment."""
    if n > CERTIFICATE_CAP:
        raise CapExceededError(f"certificate limited to n <= {CERTIFICATE_CAP}, got {n}")
    artifact = artifact or build_hwb_sdd(n)
    scope = x_vars(n) + sorted(read_vars(artifact.root, artifact.env) - set(x_vars(n)))
    forms = {
        'decision form': truth_table(artifact.root, artifact.env, scope),
        'E-form': hwb_by_counts_oracle(n).table(scope),
    }
    reference = hwb_oracle(n).table(scope)
    for name, table in forms.items():
        mismatch = np.flatnonzero(table != reference)
        if mismatch.size:
            witness = row_assignment(scope, int(mismatch[0]))
            logger.info(f"HWB certificate failed for n={n}: {name} disagrees at {witness}")
            return CertificateReport(n, False, witness, len(reference), f"{name} disagrees with HWB_{n}")
    return CertificateReport(n, True, None, len(reference))
