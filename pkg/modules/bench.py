"""Experiment harness: separation tables, compression blowup, verification and export."""
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from functools import reduce
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from utils.common import parse_ordering, save_text_to_file
from utils.logging_setup import logger
from . import obdd, sdd
from .boolfn import (VarId, generalized_hwb_oracle, hwb_oracle, parse_function_spec, parse_prime_tag,
                     prime_family, prime_oracle, var_name, x_vars, y_var, y_vars)
from .constructions import (ConstructionArtifact, build_fn_obdd, build_fn_sdd, build_hwb_sdd, build_prime_family,
                            fixed_order_hwb_obdd, hwb_equivalence_certificate, ordering_descriptor)
from .errors import CapExceededError, CompilationError, FormatError, ScopeError
from .report import Construction, SizeReport
from .vtree import fn_vtree, hwb_vtree, right_linear, serialize_vtree

VERIFY_CAP = 12
BLOWUP_CAP = 16


def resolve_ordering(spec: Optional[str], variables: Sequence[VarId]) -> List[VarId]:
    """natural | reverse | random:<seed> | comma-separated ids."""
    variables = list(variables)
    spec = (spec or "natural").strip()
    if spec == "natural":
        return variables
    if spec == "reverse":
        return variables[::-1]
    if spec.startswith("random:"):
        try:
            seed = int(spec.split(":", 1)[1])
        except ValueError:
            raise FormatError(f"invalid random ordering {spec!r}")
        rng = np.random.default_rng(seed)
        return [variables[j] for j in rng.permutation(len(variables))]
    try:
        order = parse_ordering(spec)
    except ValueError as e:
        raise FormatError(str(e))
    if sorted(order) != sorted(variables):
        raise ScopeError(f"ordering {order} is not a permutation of {variables}")
    return order


def _is_explicit(spec: Optional[str]) -> bool:
    return spec is not None and spec not in ("natural", "reverse") and not spec.startswith("random:")


def _map_instances(fn: Callable, args: List[tuple], workers: int) -> list:
    """Run fn over independent instances; results come back in input order."""
    if workers > 1 and len(args) > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            return list(executor.map(fn, *zip(*args)))
    return [fn(*arg) for arg in args]


def _check_range(n_from: int, n_to: int) -> List[int]:
    if n_from < 1:
        raise ScopeError(f"range must start at n >= 1, got {n_from}")
    return list(range(n_from, n_to + 1))


def min_obdd_row(function: str, n: int, cap: int = obdd.EXACT_MIN_CAP) -> SizeReport:
    start = time.perf_counter()
    oracle = parse_function_spec(function)
    result = obdd.min_obdd_size_exact(oracle, cap)
    ms = round((time.perf_counter() - start) * 1000.0, 3)
    return SizeReport(function.split(":")[0], n, Construction.OBDD_MIN, result.nodes, result.arcs, ms,
                      "order=" + " ".join(str(var) for var in result.ordering))


def _separation_instance(n: int, sigma_spec: str, rho_spec: str, with_fixed: bool,
                         cap: int) -> List[SizeReport]:
    sigma = resolve_ordering(sigma_spec, x_vars(n))
    rho = resolve_ordering(rho_spec, y_vars(n))
    rows = []
    if with_fixed:
        rows.append(build_hwb_sdd(n, sigma).report)
    rows.append(build_fn_sdd(n, sigma, rho).report)
    if with_fixed:
        start = time.perf_counter()
        fixed = fixed_order_hwb_obdd(n, sigma)
        ms = round((time.perf_counter() - start) * 1000.0, 3)
        rows.append(SizeReport("hwb", n, Construction.OBDD_FIXED, fixed.internal_count, fixed.arcs, ms,
                               ordering_descriptor(sigma)))
    if n <= cap:
        rows.append(min_obdd_row(f"hwb:{n}", n, cap))
    logger.info(f"Separation instance n={n} done")
    return rows


def separation_rows(n_from: int, n_to: int, sigma: str = "natural", rho: str = "natural",
                    with_fixed: bool = False, cap: int = obdd.EXACT_MIN_CAP, workers: int = 1,
                    record_timing: bool = True) -> List[SizeReport]:
    """SDD_FN rows for every n, OBDD_MIN rows for n up to the cap."""
    n_values = _check_range(n_from, n_to)
    if len(n_values) > 1 and (_is_explicit(sigma) or _is_explicit(rho)):
        raise FormatError("explicit orderings need a single n")
    cap = min(cap, obdd.EXACT_MIN_CAP)
    results = _map_instances(_separation_instance,
                             [(n, sigma, rho, with_fixed, cap) for n in n_values], workers)
    rows = [row for instance in results for row in instance]
    if not record_timing:
        rows = [replace(row, ms=0.0) for row in rows]
    return rows


def _blowup_instance(n: int, sigma_spec: str) -> dict:
    sigma = resolve_ordering(sigma_spec, x_vars(n))
    artifact = build_hwb_sdd(n, sigma)
    before = sdd.size(artifact.root, artifact.env)
    compressed = sdd.compress(artifact.root, artifact.env)
    after = sdd.size(compressed, artifact.env)
    fixed = fixed_order_hwb_obdd(n, sigma)
    cube = float(n ** 3)
    logger.info(f"Compression blowup n={n}: {before.arcs} -> {after.arcs} arcs")
    return {
        'n': n,
        'arcs_before': before.arcs,
        'nodes_before': before.nodes,
        'arcs_after': after.arcs,
        'nodes_after': after.nodes,
        'obdd_fixed_nodes': fixed.internal_count,
        'obdd_fixed_arcs': fixed.arcs,
        'before_per_cube': before.arcs / cube,
        'after_per_cube': after.arcs / cube,
        'after_over_before': after.arcs / before.arcs,
    }


BLOWUP_COLUMNS = ['n', 'arcs_before', 'nodes_before', 'arcs_after', 'nodes_after', 'obdd_fixed_nodes',
                  'obdd_fixed_arcs', 'before_per_cube', 'after_per_cube', 'after_over_before']


def compress_blowup(n_from: int, n_to: int, sigma: str = "natural", workers: int = 1) -> pd.DataFrame:
    n_values = _check_range(n_from, n_to)
    if n_values and n_values[-1] > BLOWUP_CAP:
        raise CapExceededError(f"compression blowup limited to n <= {BLOWUP_CAP}")
    rows = _map_instances(_blowup_instance, [(n, sigma) for n in n_values], workers)
    return pd.DataFrame(rows, columns=BLOWUP_COLUMNS)


def _min_series_instance(n: int, cap: int) -> SizeReport:
    return min_obdd_row(f"hwb:{n}", n, cap)


def min_obdd_series(n_values: Sequence[int], threshold: float = 1.5, cap: int = obdd.EXACT_MIN_CAP,
                    workers: int = 1) -> pd.DataFrame:
    """Exact HWB minima with the growth ratio to the previous sample."""
    n_values = sorted(set(int(n) for n in n_values))
    if n_values and n_values[-1] > min(cap, obdd.EXACT_MIN_CAP):
        raise CapExceededError(f"exact minimisation limited to n <= {min(cap, obdd.EXACT_MIN_CAP)}")
    rows = _map_instances(_min_series_instance, [(n, cap) for n in n_values], workers)
    records = []
    previous = None
    for row in rows:
        ratio = None if previous is None or previous.nodes == 0 else row.nodes / previous.nodes
        records.append({
            'n': row.n,
            'nodes': row.nodes,
            'arcs': row.arcs,
            'ordering': row.descriptor,
            'ms': row.ms,
            'ratio': ratio,
            'increasing': None if previous is None else row.nodes > previous.nodes,
            'meets_threshold': None if ratio is None else ratio >= threshold,
        })
        if ratio is not None and ratio < threshold:
            logger.warning(f"HWB minimum grew by {ratio:.3f} from n={previous.n} to n={row.n}, "
                           f"below {threshold}")
        previous = row
    return pd.DataFrame(records, columns=['n', 'nodes', 'arcs', 'ordering', 'ms', 'ratio', 'increasing',
                                          'meets_threshold'])


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class VerifyReport:
    n: int
    checks: List[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def failures(self) -> List[CheckResult]:
        return [check for check in self.checks if not check.passed]

    def check(self, name: str) -> CheckResult:
        for check in self.checks:
            if check.name == name:
                return check
        raise KeyError(name)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([{'check': c.name, 'passed': c.passed, 'detail': c.detail} for c in self.checks],
                            columns=['check', 'passed', 'detail'])


def _condition_checks(label: str, artifact: ConstructionArtifact) -> List[CheckResult]:
    report = sdd.validate(artifact.root, artifact.env)
    checks = []
    for condition in sdd.CONDITIONS:
        failures = [(node, r) for node, r in report.failures() if r.condition == condition]
        detail = ""
        if failures:
            node, result = failures[0]
            detail = f"node {node.ref}: {result.detail}"
            if result.witness is not None:
                detail += f" witness {result.witness}"
        checks.append(CheckResult(f"{label} {condition}", not failures, detail))
    return checks


def _partition_checks(n: int) -> List[CheckResult]:
    family = prime_family(n)
    tables = np.stack([prime_oracle(p, n).table() for p in family])
    hits = tables.sum(axis=0)
    by_enumeration = bool(tables.any(axis=1).all() and (hits == 1).all())

    diagrams = build_prime_family(n)
    disjoint = all(obdd.apply(obdd.Op.AND, diagrams[a], diagrams[b]).root == 0
                   for a in range(len(diagrams)) for b in range(a + 1, len(diagrams)))
    union = reduce(lambda f, g: obdd.apply(obdd.Op.OR, f, g), diagrams)
    by_apply = disjoint and union.root == 1 and all(d.root != 0 for d in diagrams)
    agree = all(np.array_equal(d.table(x_vars(n)), t) for d, t in zip(diagrams, tables))
    return [
        CheckResult("partition enumeration", by_enumeration),
        CheckResult("partition apply", by_apply),
        CheckResult("partition agreement", agree and by_enumeration == by_apply),
    ]


def _bound_checks(n: int) -> List[CheckResult]:
    counting_limit = n * (n + 1) // 2
    worst = max(obdd.build_exact_count(n, i).internal_count for i in range(n + 1))
    envelope = obdd.ARCS_PER_NODE * (counting_limit + 2 * n)
    widest = max(d.arcs for d in build_prime_family(n))
    return [
        CheckResult("exact-count bound", worst <= counting_limit, f"max {worst} internal nodes, limit {counting_limit}"),
        CheckResult("prime envelope", widest <= envelope, f"max {widest} arcs, limit {envelope}"),
    ]


def _safe(name: str, run: Callable[[], object]) -> List[CheckResult]:
    try:
        result = run()
        return result if isinstance(result, list) else [CheckResult(name, bool(result))]
    except CompilationError as e:
        logger.error(f"Check {name} raised: {str(e)}")
        return [CheckResult(name, False, str(e))]


def cmd_verify(n: int, hwb_artifact: Optional[ConstructionArtifact] = None,
               fn_artifact: Optional[ConstructionArtifact] = None) -> VerifyReport:
    """Run every structural, semantic and size check at arity n."""
    if n > VERIFY_CAP:
        raise CapExceededError(f"verify limited to n <= {VERIFY_CAP}, got {n}")
    hwb = hwb_artifact or build_hwb_sdd(n)
    fn = fn_artifact or build_fn_sdd(n)
    hwb_table = hwb_oracle(n)
    all_ones = {var: 1 for var in y_vars(n)}
    report = VerifyReport(n)

    report.checks += _safe("hwb-sdd validate", lambda: _condition_checks("hwb-sdd", hwb))
    if n >= 2:
        report.checks += _safe("hwb-sdd not compressed", lambda: not sdd.is_compressed(hwb.root, hwb.env))
    report.checks += _safe("fn-sdd validate", lambda: _condition_checks("fn-sdd", fn))
    report.checks += _safe("fn-sdd C", lambda: sdd.is_compressed(fn.root, fn.env))
    report.checks += _safe("hwb-sdd equivalence", lambda: sdd.find_mismatch(hwb.root, hwb.env, hwb_table) is None)
    report.checks += _safe("fn-sdd equivalence",
                           lambda: sdd.find_mismatch(fn.root, fn.env, generalized_hwb_oracle(n)) is None)
    report.checks += _safe("hwb certificate", lambda: hwb_equivalence_certificate(n, hwb).passed)
    report.checks += _safe("partition", lambda: _partition_checks(n))
    report.checks += _safe("conditioning identity sdd", lambda: sdd.find_mismatch(
        sdd.condition(fn.root, fn.env, all_ones), fn.env, hwb_table) is None)

    def obdd_conditioning() -> bool:
        diagram = build_fn_obdd(n)
        conditioned = obdd.condition(diagram, all_ones)
        return (conditioned.node_count <= diagram.node_count
                and np.array_equal(conditioned.table(x_vars(n) + y_vars(n)), hwb_table.table(x_vars(n) + y_vars(n))))

    report.checks += _safe("conditioning identity obdd", obdd_conditioning)
    report.checks += _safe("bounds", lambda: _bound_checks(n))
    report.checks += _safe("compression fixed point", lambda: sdd.size(
        sdd.compress(fn.root, fn.env), fn.env) == sdd.size(fn.root, fn.env))
    report.checks += _safe("compression equivalence", lambda: sdd.find_mismatch(
        sdd.compress(hwb.root, hwb.env), hwb.env, hwb_table) is None)

    for check in report.failures():
        logger.warning(f"verify n={n}: {check.name} failed {check.detail}")
    logger.info(f"verify n={n}: {len(report.checks) - len(report.failures())}/{len(report.checks)} checks passed")
    return report


def _default_n(parts: List[str], n: Optional[int]) -> int:
    if len(parts) > 1:
        return int(parts[1])
    if n is None:
        raise FormatError("object needs an arity, e.g. hwb-sdd:4")
    return n


def build_object(spec: str, n: Optional[int] = None):
    """Resolve an export object spec to ('sdd', env, root), ('obdd', diagram) or ('vtree', vtree)."""
    parts = spec.strip().split(":")
    kind = parts[0].lower()
    try:
        if kind == "hwb-sdd":
            artifact = build_hwb_sdd(_default_n(parts, n))
            return "sdd", artifact.env, artifact.root
        if kind == "fn-sdd":
            artifact = build_fn_sdd(_default_n(parts, n))
            return "sdd", artifact.env, artifact.root
        if kind == "exact" and len(parts) == 3:
            return "obdd", obdd.build_exact_count(int(parts[1]), int(parts[2]))
        if kind == "prime" and len(parts) == 3:
            arity = int(parts[1])
            return "obdd", obdd.build_prime(parse_prime_tag(parts[2], arity), arity)
        if kind == "hwb" and len(parts) == 2:
            return "obdd", fixed_order_hwb_obdd(int(parts[1]))
        if kind == "vtree" and len(parts) == 3:
            arity = int(parts[2])
            if parts[1] == "hwb":
                return "vtree", hwb_vtree(arity)
            if parts[1] == "fn":
                return "vtree", fn_vtree(arity)
    except ValueError:
        raise FormatError(f"invalid object spec {spec!r}")
    raise FormatError(f"unknown object spec {spec!r}")


def _arity_of(variables) -> Optional[int]:
    """Recover n when the variables are x_1..x_n, optionally with y_0 or all of y_0..y_n."""
    variables = set(variables)
    top = max(variables)
    for n in (top, top - 1, (top - 1) // 2):
        if n >= 1 and variables in (set(x_vars(n)), set(x_vars(n) + [y_var(n, 0)]), set(x_vars(n) + y_vars(n))):
            return n
    return None


def cmd_export(spec: str, fmt: str, out: Optional[str] = None, n: Optional[int] = None) -> str:
    """Render an object as sdd, vtree or dot text; write it to `out` when given."""
    built = build_object(spec, n)
    kind = built[0]
    if kind == "sdd":
        env, root = built[1], built[2]
        vtree = env.vtree
    elif kind == "obdd":
        diagram = built[1]
        vtree = right_linear(diagram.ordering)
        env = sdd.SddEnv(vtree)
        root = obdd.to_sdd(diagram, env)
    else:
        vtree = built[1]
        env = root = None

    arity = _arity_of(vtree.variables)

    def names(var: VarId) -> str:
        return var_name(var, arity)

    if fmt == "vtree":
        text = serialize_vtree(vtree)
    elif fmt == "sdd" and env is not None:
        text = sdd.serialize_sdd(root, env.freeze())
    elif fmt == "dot" and kind == "obdd":
        text = obdd.export_dot(built[1], names)
    elif fmt == "dot" and env is not None:
        text = sdd.export_dot(root, env.freeze(), names)
    else:
        raise FormatError(f"format {fmt!r} is not available for {spec!r}")
    if out:
        save_text_to_file(text, out)
    return text


def cmd_min_obdd(function: str, cap: int = obdd.EXACT_MIN_CAP,
                 exhaustive: bool = False) -> Tuple[obdd.MinimumResult, Optional[obdd.MinimumResult]]:
    """Exact minimum by the subset DP, optionally cross-checked by enumerating all orderings."""
    oracle = parse_function_spec(function)
    result = obdd.min_obdd_size_exact(oracle, cap)
    check = obdd.exhaustive_min_obdd_size(oracle) if exhaustive else None
    if check is not None and check.nodes != result.nodes:
        logger.error(f"Exact minimisation of {function} disagrees: {result.nodes} vs {check.nodes}")
    return result, check
