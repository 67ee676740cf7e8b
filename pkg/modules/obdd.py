"""Reduced ordered binary decision diagrams over explicit variable orderings."""
import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, List, Mapping, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from utils.logging_setup import logger
from .boolfn import FunctionOracle, PrimeId, VarId, check_cap, enumerate_columns, iter_chunks, x_vars
from .errors import CapExceededError, ObddError, ScopeError, SddError, VtreeError
from .sdd import Constant, Literal, SddEnv, SddRef, reachable
from .vtree import is_right_linear, leftfirst_ordering, right_chain

ARCS_PER_NODE = 6
EXACT_MIN_CAP = 16
EXHAUSTIVE_CAP = 9

_invariant_checks = False


def set_invariant_checks(enabled: bool) -> bool:
    """Toggle product-bound, non-increase and reduction checks; returns the previous setting."""
    global _invariant_checks
    previous = _invariant_checks
    _invariant_checks = bool(enabled)
    return previous


class Op(Enum):
    AND = "and"
    OR = "or"


class ObddManager:
    """Unique table for one ordering. Nodes 0 and 1 are the terminals ⊥ and ⊤, at level n."""

    def __init__(self, ordering: Sequence[VarId]):
        ordering = tuple(int(var) for var in ordering)
        if len(set(ordering)) != len(ordering):
            raise ScopeError(f"duplicate variables in ordering {ordering}")
        self.ordering = ordering
        self.n = len(ordering)
        self.level_of: Dict[VarId, int] = {var: level for level, var in enumerate(ordering)}
        self._level: List[int] = [self.n, self.n]
        self._lo: List[int] = [-1, -1]
        self._hi: List[int] = [-1, -1]
        self._unique: Dict[Tuple[int, int, int], int] = {}
        self._cache: Dict[Tuple[Op, int, int], int] = {}
        self._frozen = False

    def __len__(self) -> int:
        return len(self._level)

    def level(self, u: int) -> int:
        return self._level[u]

    def lo(self, u: int) -> int:
        return self._lo[u]

    def hi(self, u: int) -> int:
        return self._hi[u]

    def var(self, u: int) -> VarId:
        if u < 2:
            raise ObddError("terminals carry no variable")
        return self.ordering[self._level[u]]

    def freeze(self) -> "ObddManager":
        self._frozen = True
        return self

    def mk(self, level: int, lo: int, hi: int) -> int:
        if lo == hi:
            return lo
        if not (0 <= level < self._level[lo] and level < self._level[hi]):
            raise ObddError(f"node at level {level} cannot point to levels {self._level[lo]}, {self._level[hi]}")
        key = (level, lo, hi)
        u = self._unique.get(key)
        if u is None:
            if self._frozen:
                raise ObddError("manager is frozen")
            u = len(self._level)
            self._level.append(level)
            self._lo.append(lo)
            self._hi.append(hi)
            self._unique[key] = u
        return u

    def literal(self, var: VarId, positive: bool = True) -> int:
        if var not in self.level_of:
            raise ScopeError(f"variable {var} is not in the ordering")
        level = self.level_of[var]
        return self.mk(level, 0, 1) if positive else self.mk(level, 1, 0)

    def apply(self, op: Op, f: int, g: int) -> int:
        if op is Op.AND:
            if f == 0 or g == 0:
                return 0
            if f == 1:
                return g
            if g == 1 or f == g:
                return f
        else:
            if f == 1 or g == 1:
                return 1
            if f == 0:
                return g
            if g == 0 or f == g:
                return f
        key = (op, min(f, g), max(f, g))
        u = self._cache.get(key)
        if u is not None:
            return u
        level = min(self._level[f], self._level[g])
        f0, f1 = (self._lo[f], self._hi[f]) if self._level[f] == level else (f, f)
        g0, g1 = (self._lo[g], self._hi[g]) if self._level[g] == level else (g, g)
        u = self.mk(level, self.apply(op, f0, g0), self.apply(op, f1, g1))
        self._cache[key] = u
        return u

    def restrict(self, root: int, fixed: Mapping[int, int]) -> int:
        """Restrict by {level: bit}."""
        memo: Dict[int, int] = {}

        def walk(u: int) -> int:
            if u < 2:
                return u
            if u in memo:
                return memo[u]
            level = self._level[u]
            if level in fixed:
                r = walk(self._hi[u] if fixed[level] else self._lo[u])
            else:
                r = self.mk(level, walk(self._lo[u]), walk(self._hi[u]))
            memo[u] = r
            return r

        return walk(root)

    def import_node(self, other: "ObddManager", root: int) -> int:
        if other.ordering != self.ordering:
            raise ObddError("ordering mismatch")
        memo: Dict[int, int] = {0: 0, 1: 1}

        def walk(u: int) -> int:
            if u not in memo:
                memo[u] = self.mk(other.level(u), walk(other.lo(u)), walk(other.hi(u)))
            return memo[u]

        return walk(root)

    def reachable(self, root: int) -> List[int]:
        """Nodes below root, terminals included, children before parents (lo first)."""
        order, seen = [], set()
        stack = [(root, False)]
        while stack:
            u, expanded = stack.pop()
            if expanded:
                order.append(u)
                continue
            if u in seen:
                continue
            seen.add(u)
            stack.append((u, True))
            if u >= 2:
                stack.append((self._hi[u], False))
                stack.append((self._lo[u], False))
        return order


@dataclass(frozen=True)
class Obdd:
    manager: ObddManager
    root: int

    @property
    def ordering(self) -> Tuple[VarId, ...]:
        return self.manager.ordering

    def nodes(self) -> List[int]:
        return self.manager.reachable(self.root)

    @property
    def node_count(self) -> int:
        """Reachable nodes, terminals included."""
        return len(self.nodes())

    @property
    def internal_count(self) -> int:
        return sum(1 for u in self.nodes() if u >= 2)

    @property
    def arcs(self) -> int:
        return ARCS_PER_NODE * self.internal_count

    def is_constant(self) -> bool:
        return self.root < 2

    def level_counts(self) -> List[int]:
        counts = [0] * self.manager.n
        for u in self.nodes():
            if u >= 2:
                counts[self.manager.level(u)] += 1
        return counts

    def evaluate(self, a: Mapping[VarId, int]) -> int:
        manager, u = self.manager, self.root
        while u >= 2:
            var = manager.var(u)
            if var not in a:
                raise ScopeError(f"missing variable {var}")
            u = manager.hi(u) if a[var] else manager.lo(u)
        return u

    def table(self, scope: Optional[Sequence[VarId]] = None) -> np.ndarray:
        manager = self.manager
        scope = list(self.ordering) if scope is None else list(scope)
        check_cap(len(scope))
        internal = sorted((u for u in self.nodes() if u >= 2), key=manager.level, reverse=True)
        missing = {manager.var(u) for u in internal} - set(scope)
        if missing:
            raise ScopeError(f"scope misses variables {sorted(missing)}")
        out = np.empty(1 << len(scope), dtype=np.uint8)
        for start, stop in iter_chunks(len(scope)):
            columns = enumerate_columns(scope, start, stop)
            values = {0: np.zeros(stop - start, dtype=bool), 1: np.ones(stop - start, dtype=bool)}
            for u in internal:
                values[u] = np.where(columns[manager.var(u)], values[manager.hi(u)], values[manager.lo(u)])
            out[start:stop] = values[self.root]
        return out

    def signature(self) -> tuple:
        """Canonical structure key: isomorphic diagrams have equal signatures."""
        manager = self.manager
        labels = {0: "F", 1: "T"}
        rows = []
        for u in self.nodes():
            if u < 2:
                continue
            labels[u] = len(rows)
            rows.append((manager.var(u), labels[manager.lo(u)], labels[manager.hi(u)]))
        return tuple(rows) + (labels[self.root],)


class MinimumResult(NamedTuple):
    nodes: int
    arcs: int
    ordering: Tuple[VarId, ...]


def check_reduced(f: Obdd) -> None:
    manager = f.manager
    keys = set()
    for u in f.nodes():
        if u < 2:
            continue
        level, lo, hi = manager.level(u), manager.lo(u), manager.hi(u)
        if lo == hi:
            raise ObddError(f"redundant node {u}")
        if manager.level(lo) <= level or manager.level(hi) <= level:
            raise ObddError(f"node {u} violates the ordering")
        if (level, lo, hi) in keys:
            raise ObddError(f"duplicate node {u}")
        keys.add((level, lo, hi))


def constant(manager: ObddManager, value: int) -> Obdd:
    return Obdd(manager, 1 if value else 0)


def literal(manager: ObddManager, var: VarId, positive: bool = True) -> Obdd:
    return Obdd(manager, manager.literal(var, positive))


def apply(op: Op, f: Obdd, g: Obdd) -> Obdd:
    if f.ordering != g.ordering:
        raise ObddError(f"ordering mismatch: {f.ordering} vs {g.ordering}")
    manager = f.manager
    g_root = g.root if g.manager is manager else manager.import_node(g.manager, g.root)
    result = Obdd(manager, manager.apply(op, f.root, g_root))
    if _invariant_checks:
        bound = f.node_count * g.node_count
        if result.node_count > bound:
            raise ObddError(f"{op.value} produced {result.node_count} nodes, product bound is {bound}")
        check_reduced(result)
    return result


def condition(f: Obdd, partial: Mapping[VarId, int]) -> Obdd:
    manager = f.manager
    unknown = sorted(var for var in partial if var not in manager.level_of)
    if unknown:
        raise ScopeError(f"variables {unknown} are not in the ordering")
    bad = sorted(var for var, bit in partial.items() if int(bit) not in (0, 1))
    if bad:
        raise ScopeError(f"non-binary values for variables {bad}")
    if not partial:
        return f
    fixed = {manager.level_of[var]: int(bit) for var, bit in partial.items()}
    result = Obdd(manager, manager.restrict(f.root, fixed))
    if _invariant_checks:
        if result.node_count > f.node_count:
            raise ObddError(f"conditioning grew the diagram from {f.node_count} to {result.node_count} nodes")
        check_reduced(result)
    return result


def _pair_keys(lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    return lo.astype(np.int64) * (1 << 32) + hi.astype(np.int64)


def from_oracle(f: FunctionOracle, sigma: Optional[Sequence[VarId]] = None,
                manager: Optional[ObddManager] = None) -> Obdd:
    sigma = list(f.scope) if sigma is None else [int(var) for var in sigma]
    missing = sorted(set(f.scope) - set(sigma))
    if missing:
        raise ScopeError(f"ordering misses variables {missing}")
    check_cap(len(sigma), what=f.name)
    if manager is None:
        manager = ObddManager(sigma)
    elif list(manager.ordering) != sigma:
        raise ObddError(f"manager ordering {manager.ordering} differs from {sigma}")
    ids = f.table(sigma).astype(np.int64)
    for level in range(len(sigma) - 1, -1, -1):
        keys = _pair_keys(ids[0::2], ids[1::2])
        unique, inverse = np.unique(keys, return_inverse=True)
        made = np.array([manager.mk(level, int(key >> 32), int(key & 0xFFFFFFFF)) for key in unique],
                        dtype=np.int64)
        ids = made[inverse.reshape(-1)]
    result = Obdd(manager, int(ids[0]))
    logger.debug(f"Built OBDD for {f.name}: {result.internal_count} internal nodes")
    return result


def _check_sigma(n: int, sigma: Optional[Sequence[VarId]]) -> List[VarId]:
    if n < 1:
        raise ScopeError(f"arity must be positive, got {n}")
    if sigma is None:
        return x_vars(n)
    sigma = [int(var) for var in sigma]
    if sorted(sigma) != x_vars(n):
        raise ScopeError(f"{sigma} is not an ordering of x1..x{n}")
    return sigma


def build_exact_count(n: int, i: int, sigma: Optional[Sequence[VarId]] = None,
                      manager: Optional[ObddManager] = None) -> Obdd:
    """E^i_n from the partial-count automaton; state (k, c) = k bits read, c of them set."""
    sigma = _check_sigma(n, sigma)
    if not 0 <= i <= n:
        raise ScopeError(f"count {i} out of range 0..{n}")
    manager = manager or ObddManager(sigma)
    try:
        levels = [manager.level_of[var] for var in sigma]
    except KeyError as e:
        raise ScopeError(f"variable {e} is not in the manager's ordering")
    if levels != sorted(levels):
        raise ObddError("sigma must follow the manager's ordering")
    below = {c: 1 if c == i else 0 for c in range(n + 1)}
    for k in range(n - 1, -1, -1):
        row = {}
        for c in range(k + 1):
            if c > i or c + (n - k) < i:
                row[c] = 0
            else:
                row[c] = manager.mk(levels[k], below[c], below[c + 1])
        below = row
    return Obdd(manager, below[0])


def build_prime(p: PrimeId, n: int, sigma: Optional[Sequence[VarId]] = None,
                manager: Optional[ObddManager] = None) -> Obdd:
    p.validate(n)
    counting = build_exact_count(n, p.weight, sigma, manager)
    if p.bit is None:
        return counting
    return apply(Op.AND, counting, literal(counting.manager, p.weight, p.bit == 1))


def count_subfunctions(f: FunctionOracle, sigma: Optional[Sequence[VarId]] = None) -> List[int]:
    """Per level, the number of distinct cofactors that depend on that level's variable."""
    sigma = list(f.scope) if sigma is None else list(sigma)
    table = f.table(sigma)
    n = len(sigma)
    counts = []
    for k in range(n):
        rows = table.reshape(1 << k, 1 << (n - k))
        half = 1 << (n - k - 1)
        depends = np.any(rows[:, :half] != rows[:, half:], axis=1)
        counts.append(int(np.unique(rows[depends], axis=0).shape[0]) if depends.any() else 0)
    return counts


def _internal_count(table: np.ndarray) -> int:
    """Internal nodes of the reduced OBDD of a table, variables in table order."""
    ids = table.astype(np.int64)
    total = 0
    while ids.size > 1:
        lo, hi = ids[0::2], ids[1::2]
        m = int(ids.max()) + 1
        split = lo != hi
        keys = np.where(split, m + lo * m + hi, lo)
        total += int(np.unique(keys[split]).size)
        ids = np.unique(keys, return_inverse=True)[1].reshape(-1)
    return total


def exhaustive_min_obdd_size(f: FunctionOracle, cap: int = EXHAUSTIVE_CAP) -> MinimumResult:
    """Minimum over all n! orderings; the first minimiser in lexicographic order wins."""
    n = f.arity
    if n > cap:
        raise CapExceededError(f"exhaustive search over {n} variables exceeds cap {cap}")
    if n == 0:
        return MinimumResult(0, 0, ())
    tensor = f.table().reshape((2,) * n)
    best: Optional[Tuple[int, Tuple[int, ...]]] = None
    for perm in itertools.permutations(range(n)):
        nodes = _internal_count(np.transpose(tensor, perm).reshape(-1))
        if best is None or nodes < best[0]:
            best = (nodes, perm)
    nodes, perm = best
    return MinimumResult(nodes, ARCS_PER_NODE * nodes, tuple(f.scope[j] for j in perm))


def _axis(mask: int, j: int) -> int:
    return bin(mask & ((1 << j) - 1)).count("1")


def _split(labels: np.ndarray, axis: int, k: int) -> Tuple[np.ndarray, np.ndarray]:
    tensor = labels.reshape((2,) * k)
    return np.take(tensor, 0, axis=axis).reshape(-1), np.take(tensor, 1, axis=axis).reshape(-1)


def min_obdd_size_exact(f: FunctionOracle, cap: int = EXACT_MIN_CAP) -> MinimumResult:
    """Exact minimum reduced-OBDD size over all orderings by a DP over variable subsets.

    For a set S of variables placed on top, the nodes labelled y directly
    below S are the distinct cofactors f|S=a that depend on y; that count
    depends on S and y only.  Cofactor classes are labelled layer by layer
    from the full set downwards.
    """
    n = f.arity
    if n > min(cap, EXACT_MIN_CAP):
        raise CapExceededError(f"exact minimisation over {n} variables exceeds cap {min(cap, EXACT_MIN_CAP)}")
    if n == 0:
        return MinimumResult(0, 0, ())
    full = (1 << n) - 1
    layers: List[List[int]] = [[] for _ in range(n + 1)]
    for mask in range(1 << n):
        layers[bin(mask).count("1")].append(mask)

    cost = np.full((1 << n, n), -1, dtype=np.int64)
    rest = np.zeros(1 << n, dtype=np.int64)
    upper: Dict[int, np.ndarray] = {full: f.table().astype(np.int64)}
    for k in range(n - 1, -1, -1):
        layer: Dict[int, np.ndarray] = {}
        for mask in layers[k]:
            free = [j for j in range(n) if not mask >> j & 1]
            parent = mask | 1 << free[0]
            lo, hi = _split(upper[parent], _axis(parent, free[0]), k + 1)
            labels = np.unique(lo * (int(upper[parent].max()) + 1) + hi, return_inverse=True)[1].reshape(-1)
            layer[mask] = labels
            seen = np.zeros(int(labels.max()) + 1, dtype=bool)
            best = None
            for y in free:
                parent = mask | 1 << y
                lo, hi = _split(upper[parent], _axis(parent, y), k + 1)
                depends = lo != hi
                seen[:] = False
                seen[labels[depends]] = True
                cost[mask, y] = int(seen.sum())
                total = cost[mask, y] + rest[parent]
                best = total if best is None else min(best, total)
            rest[mask] = best
        upper = layer
        logger.debug(f"Exact minimisation of {f.name}: layer {k} done ({len(layers[k])} subsets)")

    ordering = []
    mask = 0
    while mask != full:
        for y in range(n):
            if not mask >> y & 1 and cost[mask, y] + rest[mask | 1 << y] == rest[mask]:
                ordering.append(f.scope[y])
                mask |= 1 << y
                break
    nodes = int(rest[0])
    logger.info(f"Minimum OBDD for {f.name}: {nodes} nodes with ordering {ordering}")
    return MinimumResult(nodes, ARCS_PER_NODE * nodes, tuple(ordering))


def to_sdd(f: Obdd, env: SddEnv, vnode: Optional[int] = None) -> SddRef:
    """Embed f as Shannon decisions along the right spine of T_vnode."""
    vtree = env.vtree
    vnode = vtree.root if vnode is None else vnode
    if not is_right_linear(vtree, vnode) or leftfirst_ordering(vtree, vnode) != list(f.ordering):
        raise VtreeError(f"vtree mismatch: subtree at {vnode} is not right_linear({list(f.ordering)})")
    chain = right_chain(vtree, vnode)
    manager = f.manager
    last = manager.n - 1
    memo: Dict[int, SddRef] = {0: env.false, 1: env.true}
    for u in sorted((u for u in f.nodes() if u >= 2), key=manager.level, reverse=True):
        level = manager.level(u)
        var = manager.ordering[level]
        if level == last:
            memo[u] = env.literal(var, manager.hi(u) == 1)
        else:
            memo[u] = env.decision(chain[level][0], [(env.literal(var, False), memo[manager.lo(u)]),
                                                    (env.literal(var, True), memo[manager.hi(u)])])
    return memo[f.root]


def from_sdd(ref: SddRef, env: SddEnv, vnode: Optional[int] = None,
             manager: Optional[ObddManager] = None, memo: Optional[Dict[SddRef, int]] = None) -> Obdd:
    """Read an SDD in OBDD form over right-linear T_vnode back into an Obdd."""
    vtree = env.vtree
    vnode = vtree.root if vnode is None else vnode
    if not is_right_linear(vtree, vnode):
        raise SddError(f"prime not in OBDD form: subtree at {vnode} is not right-linear")
    ordering = leftfirst_ordering(vtree, vnode)
    if manager is None:
        manager = ObddManager(ordering)
    elif list(manager.ordering) != ordering:
        raise ObddError(f"manager ordering {manager.ordering} differs from {ordering}")
    memo = {} if memo is None else memo
    chain = {node: level for level, (node, _) in enumerate(right_chain(vtree, vnode))}
    for r in reachable(ref, env):
        if r in memo:
            continue
        node = env.node(r)
        if isinstance(node, Constant):
            memo[r] = node.value
        elif isinstance(node, Literal):
            if node.var not in manager.level_of:
                raise SddError(f"prime not in OBDD form: literal {node.var} outside subtree {vnode}")
            memo[r] = manager.literal(node.var, node.positive)
        else:
            level = chain.get(node.vnode)
            if level is None or len(node.elements) != 2:
                raise SddError(f"prime not in OBDD form: node {r}")
            var = manager.ordering[level]
            branches = {}
            for p, s in node.elements:
                prime = env.node(p)
                if not isinstance(prime, Literal) or prime.var != var:
                    raise SddError(f"prime not in OBDD form: node {r} does not branch on {var}")
                branches[prime.positive] = memo[s]
            if len(branches) != 2:
                raise SddError(f"prime not in OBDD form: node {r} repeats a literal")
            lo, hi = branches[False], branches[True]
            if lo != hi and (manager.level(lo) <= level or manager.level(hi) <= level):
                raise SddError(f"prime not in OBDD form: node {r} violates the ordering")
            memo[r] = manager.mk(level, lo, hi)
    return Obdd(manager, memo[ref])


def export_dot(f: Obdd, names: Optional[Callable[[VarId], str]] = None) -> str:
    """Graphviz digraph, one rank per level, dashed lo edges and solid hi edges."""
    names = names or (lambda var: f"v{var}")
    manager = f.manager
    layers: Dict[int, List[int]] = {}
    for u in f.nodes():
        layers.setdefault(manager.level(u), []).append(u)
    lines = ["digraph obdd {", "\tgraph []"]
    for level in sorted(layers):
        lines.append("\t{")
        lines.append("\t\trank = same;")
        for u in layers[level]:
            if u < 2:
                label = "&#8868;" if u else "&#8869;"
                lines.append(f'\t\t"{u}" [label="{label}", shape = box];')
            else:
                lines.append(f'\t\t"{u}" [label="{names(manager.var(u))}", shape = circle];')
        lines.append("\t}")
    for level in sorted(layers):
        for u in layers[level]:
            if u >= 2:
                lines.append(f'\t"{u}" -> "{manager.lo(u)}" [style=dashed];')
                lines.append(f'\t"{u}" -> "{manager.hi(u)}" [style=solid];')
    lines.append("}")
    return "\n".join(lines) + "\n"
