"""Sentential decision diagrams over a fixed vtree.

Nodes live in a hash-consed store (SddEnv) and are addressed by integer
refs; ⊥ and ⊤ are always refs 0 and 1.  Semantic checks enumerate the
assignments of the relevant vtree variables in vectorised chunks.
"""
from dataclasses import dataclass, field
from functools import reduce
from typing import Callable, Dict, FrozenSet, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Set, Tuple, Union

import numpy as np
import pandas as pd

from utils.logging_setup import logger
from .boolfn import Assignment, FunctionOracle, VarId, check_cap, enumerate_columns, iter_chunks, row_assignment
from .errors import FormatError, ScopeError, SddError, VtreeError
from .vtree import Vtree, leftfirst_ordering

SddRef = int
FALSE: SddRef = 0
TRUE: SddRef = 1

CONDITIONS = ("S1", "S2", "S3", "S4", "S5")
COMPRESSION = "C"


@dataclass(frozen=True)
class Constant:
    value: int


@dataclass(frozen=True)
class Literal:
    var: VarId
    positive: bool


@dataclass(frozen=True)
class Decision:
    vnode: int
    elements: Tuple[Tuple[SddRef, SddRef], ...]

    @property
    def primes(self) -> List[SddRef]:
        return [p for p, _ in self.elements]

    @property
    def subs(self) -> List[SddRef]:
        return [s for _, s in self.elements]


SddNode = Union[Constant, Literal, Decision]


class SizeCount(NamedTuple):
    arcs: int
    nodes: int


class SddEnv:
    """Node store for one vtree. Single writer until freeze()."""

    def __init__(self, vtree: Vtree):
        self.vtree = vtree
        self._nodes: List[SddNode] = []
        self._unique: Dict[SddNode, SddRef] = {}
        self._frozen = False
        self._intern(Constant(0))
        self._intern(Constant(1))

    def _intern(self, node: SddNode) -> SddRef:
        ref = self._unique.get(node)
        if ref is not None:
            return ref
        if self._frozen:
            raise SddError(f"environment is frozen, cannot add {node}")
        ref = len(self._nodes)
        self._nodes.append(node)
        self._unique[node] = ref
        return ref

    @property
    def false(self) -> SddRef:
        return FALSE

    @property
    def true(self) -> SddRef:
        return TRUE

    @property
    def frozen(self) -> bool:
        return self._frozen

    def __len__(self) -> int:
        return len(self._nodes)

    def constant(self, value: int) -> SddRef:
        return TRUE if value else FALSE

    def literal(self, var: VarId, positive: bool = True) -> SddRef:
        if var not in self.vtree.variables:
            raise ScopeError(f"variable {var} is not in the vtree")
        return self._intern(Literal(int(var), bool(positive)))

    def decision(self, vnode: int, elements: Iterable[Tuple[SddRef, SddRef]]) -> SddRef:
        elements = tuple((int(p), int(s)) for p, s in elements)
        if len(elements) < 2:
            raise SddError(f"decision needs at least two elements, got {len(elements)}")
        try:
            leaf = self.vtree.is_leaf(vnode)
        except VtreeError as e:
            raise SddError(str(e.value))
        if leaf:
            raise SddError(f"decision must sit at an internal vtree node, {vnode} is a leaf")
        for p, s in elements:
            self.node(p)
            self.node(s)
        return self._intern(Decision(int(vnode), elements))

    def node(self, ref: SddRef) -> SddNode:
        if not 0 <= ref < len(self._nodes):
            raise SddError(f"unknown node ref {ref}")
        return self._nodes[ref]

    def freeze(self) -> "SddEnv":
        self._frozen = True
        return self

    def copy(self) -> "SddEnv":
        """Unfrozen copy; refs stay valid."""
        other = SddEnv(self.vtree)
        other._nodes = list(self._nodes)
        other._unique = dict(self._unique)
        return other


# Traversal and size

def _reachable_many(roots: Iterable[SddRef], env: SddEnv) -> List[SddRef]:
    order: List[SddRef] = []
    seen: Set[SddRef] = set()
    stack = [(ref, False) for ref in reversed(list(roots))]
    while stack:
        ref, expanded = stack.pop()
        if expanded:
            order.append(ref)
            continue
        if ref in seen:
            continue
        seen.add(ref)
        stack.append((ref, True))
        node = env.node(ref)
        if isinstance(node, Decision):
            for p, s in reversed(node.elements):
                stack.append((s, False))
                stack.append((p, False))
    return order


def reachable(root: SddRef, env: SddEnv) -> List[SddRef]:
    """Refs reachable from root, children before parents; root comes last."""
    return _reachable_many([root], env)


def size(root: SddRef, env: SddEnv) -> SizeCount:
    order = reachable(root, env)
    arcs = 0
    for ref in order:
        node = env.node(ref)
        if isinstance(node, Decision):
            arcs += 3 * len(node.elements)
    return SizeCount(arcs, len(order))


def circuit_wires(root: SddRef, env: SddEnv) -> List[Tuple[tuple, tuple]]:
    """Explicit (source gate, target gate) wires of the circuit the SDD denotes."""

    def gate(ref: SddRef) -> tuple:
        return ("or", ref) if isinstance(env.node(ref), Decision) else ("input", ref)

    wires = []
    for ref in reachable(root, env):
        node = env.node(ref)
        if not isinstance(node, Decision):
            continue
        for i, (p, s) in enumerate(node.elements):
            conjunction = ("and", ref, i)
            wires.append((gate(p), conjunction))
            wires.append((gate(s), conjunction))
            wires.append((conjunction, ("or", ref)))
    return wires


def read_vars(root: SddRef, env: SddEnv) -> Set[VarId]:
    found = set()
    for ref in reachable(root, env):
        node = env.node(ref)
        if isinstance(node, Literal):
            found.add(node.var)
    return found


def respects(ref: SddRef, v: int, env: SddEnv) -> bool:
    """Whether the node respects some rooted subtree T_w with w in T_v."""
    node = env.node(ref)
    vtree = env.vtree
    if isinstance(node, Constant):
        return True
    if isinstance(node, Literal):
        return node.var in vtree.variables and vtree.is_descendant(vtree.leaf(node.var), v)
    return vtree.is_descendant(node.vnode, v)


# Semantics

def _chunk_rows(node_count: int) -> int:
    return max(256, min(1 << 16, (1 << 22) // max(1, node_count)))


def _evaluate_order(order: Sequence[SddRef], env: SddEnv, columns: Mapping[VarId, np.ndarray],
                    rows: int) -> Dict[SddRef, np.ndarray]:
    values: Dict[SddRef, np.ndarray] = {}
    for ref in order:
        node = env.node(ref)
        if isinstance(node, Constant):
            values[ref] = np.full(rows, bool(node.value))
        elif isinstance(node, Literal):
            column = columns.get(node.var)
            if column is None:
                raise ScopeError(f"missing variable {node.var}")
            values[ref] = column if node.positive else ~column
        else:
            out = np.zeros(rows, dtype=bool)
            for p, s in node.elements:
                out |= values[p] & values[s]
            values[ref] = out
    return values


def _tables(refs: Sequence[SddRef], env: SddEnv, scope: Sequence[VarId]) -> Dict[SddRef, np.ndarray]:
    check_cap(len(scope))
    order = _reachable_many(refs, env)
    tables = {ref: np.empty(1 << len(scope), dtype=np.uint8) for ref in refs}
    for start, stop in iter_chunks(len(scope), _chunk_rows(len(order))):
        values = _evaluate_order(order, env, enumerate_columns(scope, start, stop), stop - start)
        for ref in refs:
            tables[ref][start:stop] = values[ref]
    return tables


def truth_table(root: SddRef, env: SddEnv, scope: Optional[Sequence[VarId]] = None) -> np.ndarray:
    scope = leftfirst_ordering(env.vtree) if scope is None else list(scope)
    missing = read_vars(root, env) - set(scope)
    if missing:
        raise ScopeError(f"scope misses variables {sorted(missing)} read by the diagram")
    return _tables([root], env, scope)[root]


def evaluate(root: SddRef, env: SddEnv, a: Mapping[VarId, int]) -> int:
    values: Dict[SddRef, bool] = {}
    for ref in reachable(root, env):
        node = env.node(ref)
        if isinstance(node, Constant):
            values[ref] = bool(node.value)
        elif isinstance(node, Literal):
            if node.var not in a:
                raise ScopeError(f"missing variable {node.var}")
            values[ref] = bool(a[node.var]) == node.positive
        else:
            values[ref] = any(values[p] and values[s] for p, s in node.elements)
    return int(values[root])


def _count_nodes(roots: Iterable[SddRef], env: SddEnv, counts: Dict[SddRef, int],
                 anchors: Dict[SddRef, FrozenSet[VarId]]) -> None:
    """Fill model counts of each node over its anchor variables."""
    vtree = env.vtree
    for ref in _reachable_many(roots, env):
        if ref in counts:
            continue
        node = env.node(ref)
        if isinstance(node, Constant):
            counts[ref], anchors[ref] = node.value, frozenset()
        elif isinstance(node, Literal):
            counts[ref], anchors[ref] = 1, frozenset([node.var])
        else:
            left_vars = vtree.vars_below(vtree.left(node.vnode))
            right_vars = vtree.vars_below(vtree.right(node.vnode))
            total = 0
            for p, s in node.elements:
                if not anchors[p] <= left_vars or not anchors[s] <= right_vars:
                    raise SddError(f"element of node {ref} does not respect vtree node {node.vnode}")
                total += (counts[p] << (len(left_vars) - len(anchors[p]))) * \
                         (counts[s] << (len(right_vars) - len(anchors[s])))
            counts[ref], anchors[ref] = total, vtree.vars_below(node.vnode)


def model_count(root: SddRef, env: SddEnv, scope: Optional[Iterable[VarId]] = None) -> int:
    scope = set(env.vtree.variables if scope is None else scope)
    counts: Dict[SddRef, int] = {}
    anchors: Dict[SddRef, FrozenSet[VarId]] = {}
    _count_nodes([root], env, counts, anchors)
    if not anchors[root] <= scope:
        raise ScopeError(f"scope misses variables {sorted(anchors[root] - scope)}")
    return counts[root] << (len(scope) - len(anchors[root]))


def equivalent(a: SddRef, b: SddRef, env: SddEnv) -> bool:
    if a == b:
        return True
    scope = sorted(read_vars(a, env) | read_vars(b, env))
    tables = _tables([a, b], env, scope)
    return bool(np.array_equal(tables[a], tables[b]))


def find_mismatch(root: SddRef, env: SddEnv, oracle: FunctionOracle) -> Optional[Assignment]:
    """First assignment where the diagram and the oracle disagree, or None."""
    scope = list(oracle.scope) + sorted(read_vars(root, env) - set(oracle.scope))
    diagram = _tables([root], env, scope)[root]
    mismatch = np.flatnonzero(diagram != oracle.table(scope))
    if mismatch.size == 0:
        return None
    return row_assignment(scope, int(mismatch[0]))


# Validation

@dataclass
class ConditionResult:
    condition: str
    passed: bool
    witness: Optional[Assignment] = None
    detail: str = ""


@dataclass
class NodeReport:
    ref: SddRef
    vnode: int
    results: List[ConditionResult] = field(default_factory=list)

    def result(self, condition: str) -> ConditionResult:
        for result in self.results:
            if result.condition == condition:
                return result
        raise KeyError(condition)


@dataclass
class ValidationReport:
    nodes: List[NodeReport]

    @property
    def valid(self) -> bool:
        """(S1)-(S5) hold at every decision node."""
        return all(r.passed for node in self.nodes for r in node.results if r.condition in CONDITIONS)

    @property
    def compressed(self) -> bool:
        return all(r.passed for node in self.nodes for r in node.results if r.condition == COMPRESSION)

    def failures(self, include_compression: bool = False) -> List[Tuple[NodeReport, ConditionResult]]:
        wanted = CONDITIONS + ((COMPRESSION,) if include_compression else ())
        return [(node, r) for node in self.nodes for r in node.results
                if r.condition in wanted and not r.passed]

    def failed_conditions(self) -> List[str]:
        return sorted({r.condition for _, r in self.failures()})

    def to_frame(self) -> pd.DataFrame:
        rows = [{
            'ref': node.ref,
            'vnode': node.vnode,
            'condition': r.condition,
            'passed': r.passed,
            'witness': "" if r.witness is None else " ".join(f"{var}={bit}" for var, bit in sorted(r.witness.items())),
            'detail': r.detail,
        } for node in self.nodes for r in node.results]
        return pd.DataFrame(rows, columns=['ref', 'vnode', 'condition', 'passed', 'witness', 'detail'])


def _partition_results(node: Decision, env: SddEnv) -> List[ConditionResult]:
    vtree = env.vtree
    scope = leftfirst_ordering(vtree, vtree.left(node.vnode))
    check_cap(len(scope))
    primes = node.primes
    order = _reachable_many(set(primes), env)
    satisfiable = np.zeros(len(primes), dtype=bool)
    overlap: Optional[int] = None
    gap: Optional[int] = None
    for start, stop in iter_chunks(len(scope), _chunk_rows(len(order))):
        values = _evaluate_order(order, env, enumerate_columns(scope, start, stop), stop - start)
        stacked = np.stack([values[p] for p in primes])
        satisfiable |= stacked.any(axis=1)
        hits = stacked.sum(axis=0)
        if overlap is None:
            rows = np.flatnonzero(hits >= 2)
            overlap = start + int(rows[0]) if rows.size else None
        if gap is None:
            rows = np.flatnonzero(hits == 0)
            gap = start + int(rows[0]) if rows.size else None

    unsatisfiable = [i for i, ok in enumerate(satisfiable) if not ok]
    return [
        ConditionResult("S3", not unsatisfiable,
                        detail=f"unsatisfiable primes at elements {unsatisfiable}" if unsatisfiable else ""),
        ConditionResult("S4", overlap is None,
                        None if overlap is None else row_assignment(scope, overlap),
                        "" if overlap is None else "two primes hold on the witness"),
        ConditionResult("S5", gap is None,
                        None if gap is None else row_assignment(scope, gap),
                        "" if gap is None else "no prime holds on the witness"),
    ]


def _compression_result(node: Decision, env: SddEnv) -> ConditionResult:
    vtree = env.vtree
    right = vtree.right(node.vnode)
    if not all(respects(s, right, env) for s in node.subs):
        return ConditionResult(COMPRESSION, False, detail="not checked: subs do not respect the right subtree")
    scope = leftfirst_ordering(vtree, right)
    tables = _tables(list(set(node.subs)), env, scope)
    seen: Dict[bytes, int] = {}
    for i, s in enumerate(node.subs):
        key = np.packbits(tables[s]).tobytes()
        if key in seen:
            return ConditionResult(COMPRESSION, False, detail=f"elements {seen[key]} and {i} have equivalent subs")
        seen[key] = i
    return ConditionResult(COMPRESSION, True)


def _check_decision(ref: SddRef, node: Decision, env: SddEnv) -> NodeReport:
    vtree = env.vtree
    left, right = vtree.left(node.vnode), vtree.right(node.vnode)
    bad_primes = [i for i, p in enumerate(node.primes) if not respects(p, left, env)]
    bad_subs = [i for i, s in enumerate(node.subs) if not respects(s, right, env)]
    report = NodeReport(ref, node.vnode)
    report.results.append(ConditionResult("S1", not bad_primes,
                                          detail=f"elements {bad_primes}" if bad_primes else ""))
    report.results.append(ConditionResult("S2", not bad_subs,
                                          detail=f"elements {bad_subs}" if bad_subs else ""))
    if bad_primes:
        report.results.extend(ConditionResult(c, False, detail="not checked: primes do not respect the left subtree")
                              for c in ("S3", "S4", "S5"))
    else:
        report.results.extend(_partition_results(node, env))
    report.results.append(_compression_result(node, env))
    return report


def validate(root: SddRef, env: SddEnv) -> ValidationReport:
    nodes = []
    for ref in reachable(root, env):
        node = env.node(ref)
        if isinstance(node, Decision):
            nodes.append(_check_decision(ref, node, env))
    report = ValidationReport(nodes)
    if not report.valid:
        logger.info(f"Validation of node {root} failed: {report.failed_conditions()}")
    return report


def is_compressed(root: SddRef, env: SddEnv) -> bool:
    return all(_compression_result(env.node(ref), env).passed
               for ref in reachable(root, env) if isinstance(env.node(ref), Decision))


# Transformations

def condition(root: SddRef, env: SddEnv, partial: Mapping[VarId, int]) -> SddRef:
    """Substitute constants for the variables in `partial` and repair decisions locally."""
    outside = sorted(var for var in partial if var not in env.vtree.variables)
    if outside:
        raise ScopeError(f"variables {outside} are not in the vtree")
    bad = sorted(var for var, bit in partial.items() if int(bit) not in (0, 1))
    if bad:
        raise ScopeError(f"non-binary values for variables {bad}")
    if not partial:
        return root
    fixed = {int(var): int(bit) for var, bit in partial.items()}
    vtree = env.vtree
    memo: Dict[SddRef, SddRef] = {}
    counts: Dict[SddRef, int] = {}
    anchors: Dict[SddRef, FrozenSet[VarId]] = {}
    for ref in reachable(root, env):
        node = env.node(ref)
        if isinstance(node, Constant):
            memo[ref] = ref
        elif isinstance(node, Literal):
            if node.var in fixed:
                memo[ref] = env.constant(fixed[node.var] == int(node.positive))
            else:
                memo[ref] = ref
        else:
            elements = []
            for p, s in node.elements:
                prime = memo[p]
                _count_nodes([prime], env, counts, anchors)
                if counts[prime] == 0:
                    continue
                elements.append((prime, memo[s]))
            if not elements:
                memo[ref] = FALSE
            elif len(elements) == 1:
                prime, sub = elements[0]
                left_vars = vtree.vars_below(vtree.left(node.vnode))
                if counts[prime] << (len(left_vars) - len(anchors[prime])) != 1 << len(left_vars):
                    raise SddError(f"primes of node {ref} do not cover the left subtree")
                memo[ref] = sub
            else:
                memo[ref] = env.decision(node.vnode, elements)
    return memo[root]


def compress(root: SddRef, env: SddEnv) -> SddRef:
    """Merge elements with equivalent subs by OR-ing their primes.

    Primes must be OBDDs over the left-first ordering of their left
    subtree; a decision reduced to one element is replaced by its sub.
    """
    from . import obdd

    vtree = env.vtree
    memo: Dict[SddRef, SddRef] = {}
    managers: Dict[int, "obdd.ObddManager"] = {}
    imports: Dict[int, Dict[SddRef, int]] = {}

    def manager_for(v: int) -> "obdd.ObddManager":
        if v not in managers:
            managers[v] = obdd.ObddManager(leftfirst_ordering(vtree, v))
            imports[v] = {}
        return managers[v]

    def sub_keys(subs: List[SddRef], right: int) -> List[tuple]:
        try:
            manager = manager_for(right)
            return [("obdd", obdd.from_sdd(s, env, right, manager, imports[right]).root) for s in subs]
        except SddError:
            scope = leftfirst_ordering(vtree, right)
            tables = _tables(list(set(subs)), env, scope)
            return [("table", np.packbits(tables[s]).tobytes()) for s in subs]

    merged_nodes = 0
    for ref in reachable(root, env):
        node = env.node(ref)
        if not isinstance(node, Decision):
            memo[ref] = ref
            continue
        left, right = vtree.left(node.vnode), vtree.right(node.vnode)
        subs = [memo[s] for s in node.subs]
        groups: Dict[tuple, List[SddRef]] = {}
        group_sub: Dict[tuple, SddRef] = {}
        for (p, _), sub, key in zip(node.elements, subs, sub_keys(subs, right)):
            groups.setdefault(key, []).append(memo[p])
            group_sub.setdefault(key, sub)

        elements = []
        for key, primes in groups.items():
            if len(primes) == 1:
                elements.append((primes[0], group_sub[key]))
                continue
            manager = manager_for(left)
            diagrams = [obdd.from_sdd(p, env, left, manager, imports[left]) for p in primes]
            disjunction = reduce(lambda f, g: obdd.apply(obdd.Op.OR, f, g), diagrams)
            elements.append((obdd.to_sdd(disjunction, env, left), group_sub[key]))
            merged_nodes += 1
        memo[ref] = elements[0][1] if len(elements) == 1 else env.decision(node.vnode, elements)

    logger.info(f"Compressed node {root}: {merged_nodes} element groups merged")
    return memo[root]


# Text formats

def serialize_sdd(root: SddRef, env: SddEnv) -> str:
    """Children-first listing with file-local ids; the root is the last line."""
    order = reachable(root, env)
    local = {ref: i for i, ref in enumerate(order)}
    lines = [f"sdd {len(order)}"]
    for ref in order:
        node = env.node(ref)
        i = local[ref]
        if isinstance(node, Constant):
            lines.append(f"{'T' if node.value else 'F'} {i}")
        elif isinstance(node, Literal):
            lines.append(f"L {i} {node.var} {'+' if node.positive else '-'}")
        else:
            pairs = " ".join(f"{local[p]} {local[s]}" for p, s in node.elements)
            lines.append(f"D {i} {node.vnode} {len(node.elements)} {pairs}")
    return "\n".join(lines) + "\n"


def parse_sdd(text: str, vtree: Vtree) -> Tuple[SddEnv, SddRef]:
    env = SddEnv(vtree)
    refs: Dict[int, SddRef] = {}
    header = None
    last = None
    for number, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split()
        if not tokens or tokens[0] == "c":
            continue
        kind = tokens[0]
        try:
            if kind == "sdd" and len(tokens) == 2 and header is None:
                header = int(tokens[1])
                continue
            node_id = int(tokens[1]) if len(tokens) > 1 else None
            if node_id is None:
                raise FormatError(f"line {number}: malformed line {raw.strip()!r}")
            if node_id in refs:
                raise FormatError(f"line {number}: node id {node_id} defined twice")
            if kind in ("F", "T") and len(tokens) == 2:
                ref = env.constant(kind == "T")
            elif kind == "L" and len(tokens) == 4 and tokens[3] in ("+", "-"):
                ref = env.literal(int(tokens[2]), tokens[3] == "+")
            elif kind == "D" and len(tokens) >= 4:
                vnode, m = int(tokens[2]), int(tokens[3])
                if m < 2:
                    raise FormatError(f"line {number}: decision with {m} elements")
                children = [int(token) for token in tokens[4:]]
                if len(children) != 2 * m:
                    raise FormatError(f"line {number}: expected {2 * m} child ids, got {len(children)}")
                dangling = [child for child in children if child not in refs]
                if dangling:
                    raise FormatError(f"line {number}: undefined child ids {dangling}")
                ref = env.decision(vnode, [(refs[children[k]], refs[children[k + 1]])
                                           for k in range(0, len(children), 2)])
            else:
                raise FormatError(f"line {number}: malformed line {raw.strip()!r}")
        except ValueError:
            raise FormatError(f"line {number}: malformed line {raw.strip()!r}")
        except (ScopeError, SddError) as e:
            raise FormatError(f"line {number}: {e.value}")
        refs[node_id] = ref
        last = node_id

    if header is None:
        raise FormatError("missing 'sdd <count>' header")
    if header != len(refs):
        raise FormatError(f"header announces {header} nodes, file defines {len(refs)}")
    if last is None:
        raise FormatError("empty sdd")
    return env, refs[last]


def _literal_label(node: SddNode, names: Callable[[VarId], str]) -> str:
    if isinstance(node, Constant):
        return "&#8868;" if node.value else "&#8869;"
    return names(node.var) if node.positive else f"&#172;{names(node.var)}"


def export_dot(root: SddRef, env: SddEnv, names: Optional[Callable[[VarId], str]] = None) -> str:
    """Graphviz digraph; each decision is one record of prime|sub boxes."""
    names = names or (lambda var: f"v{var}")
    lines = ["digraph sdd {", '\tnode [fontname="Helvetica"];']
    root_node = env.node(root)
    if not isinstance(root_node, Decision):
        lines.append(f'\t"n{root}" [label="{_literal_label(root_node, names)}", shape=box];')
    edges = []
    for ref in reachable(root, env):
        node = env.node(ref)
        if not isinstance(node, Decision):
            continue
        fields = []
        for i, (p, s) in enumerate(node.elements):
            for port, child in ((f"p{i}", p), (f"s{i}", s)):
                child_node = env.node(child)
                if isinstance(child_node, Decision):
                    fields.append(f"<{port}> ")
                    edges.append(f'\t"n{ref}":{port} -> "n{child}";')
                else:
                    fields.append(f"<{port}> {_literal_label(child_node, names)}")
        lines.append(f'\t"n{ref}" [shape=record, label="{"|".join(fields)}", xlabel="{node.vnode}"];')
    lines.extend(edges)
    lines.append("}")
    return "\n".join(lines) + "\n"
