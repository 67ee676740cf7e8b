"""Vtrees: rooted, full, ordered binary trees whose leaves are variables.

Node ids are dense integers assigned by in-order traversal, so the subtree
rooted at v occupies the contiguous id interval span(v).
"""
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple, Union

from utils.logging_setup import logger
from .boolfn import VarId, x_vars, y_var, y_vars
from .errors import FormatError, ScopeError, VtreeError

Shape = Union[int, Tuple["Shape", "Shape"]]

NO_NODE = -1


class Vtree:
    """Immutable vtree built from a nested shape: a variable id or a (left, right) pair."""

    def __init__(self, shape: Shape):
        self._left: List[int] = []
        self._right: List[int] = []
        self._var: List[Optional[VarId]] = []
        self._parent: List[int] = []
        self._span: List[Tuple[int, int]] = []
        self._vars: List[FrozenSet[VarId]] = []
        self._leaf_of: Dict[VarId, int] = {}
        self.root = self._build(shape)

    def _new_node(self) -> int:
        self._left.append(NO_NODE)
        self._right.append(NO_NODE)
        self._var.append(None)
        self._parent.append(NO_NODE)
        self._span.append((0, 0))
        self._vars.append(frozenset())
        return len(self._left) - 1

    def _build(self, shape: Shape) -> int:
        if isinstance(shape, tuple):
            if len(shape) != 2:
                raise VtreeError(f"internal node needs exactly two children, got {len(shape)}")
            left = self._build(shape[0])
            node = self._new_node()
            right = self._build(shape[1])
            self._left[node], self._right[node] = left, right
            self._parent[left] = self._parent[right] = node
            self._span[node] = (self._span[left][0], self._span[right][1])
            self._vars[node] = self._vars[left] | self._vars[right]
            return node
        if isinstance(shape, bool) or not isinstance(shape, int) or shape < 1:
            raise VtreeError(f"leaf must carry a positive variable id, got {shape!r}")
        if shape in self._leaf_of:
            raise VtreeError(f"variable {shape} appears on more than one leaf")
        node = self._new_node()
        self._var[node] = shape
        self._leaf_of[shape] = node
        self._span[node] = (node, node)
        self._vars[node] = frozenset([shape])
        return node

    def _check(self, v: int) -> int:
        if not 0 <= v < len(self._left):
            raise VtreeError(f"unknown vtree node {v}")
        return v

    @property
    def node_count(self) -> int:
        return len(self._left)

    @property
    def variables(self) -> FrozenSet[VarId]:
        return self._vars[self.root]

    def nodes(self) -> range:
        return range(len(self._left))

    def is_leaf(self, v: int) -> bool:
        return self._var[self._check(v)] is not None

    def left(self, v: int) -> int:
        if self.is_leaf(v):
            raise VtreeError(f"leaf {v} has no children")
        return self._left[v]

    def right(self, v: int) -> int:
        if self.is_leaf(v):
            raise VtreeError(f"leaf {v} has no children")
        return self._right[v]

    def parent(self, v: int) -> Optional[int]:
        parent = self._parent[self._check(v)]
        return None if parent == NO_NODE else parent

    def var(self, v: int) -> VarId:
        var = self._var[self._check(v)]
        if var is None:
            raise VtreeError(f"internal node {v} carries no variable")
        return var

    def leaf(self, var: VarId) -> int:
        if var not in self._leaf_of:
            raise ScopeError(f"variable {var} is not in the vtree")
        return self._leaf_of[var]

    def vars_below(self, v: int) -> FrozenSet[VarId]:
        return self._vars[self._check(v)]

    def span(self, v: int) -> Tuple[int, int]:
        return self._span[self._check(v)]

    def is_descendant(self, w: int, v: int) -> bool:
        """True iff w lies in T_v (w == v included)."""
        lo, hi = self.span(v)
        return lo <= self._check(w) <= hi

    def shape(self, v: Optional[int] = None) -> Shape:
        v = self.root if v is None else self._check(v)
        if self._var[v] is not None:
            return self._var[v]
        return (self.shape(self._left[v]), self.shape(self._right[v]))

    def subtree(self, v: int) -> "Vtree":
        return Vtree(self.shape(v))

    def internal_nodes(self) -> List[int]:
        return [v for v in self.nodes() if self._var[v] is None]

    def __eq__(self, other) -> bool:
        return isinstance(other, Vtree) and self.shape() == other.shape()

    def __hash__(self) -> int:
        return hash(self.shape())

    def __repr__(self) -> str:
        return f"Vtree({self.shape()!r})"


def right_linear(order: Sequence[VarId]) -> Vtree:
    order = [int(var) for var in order]
    if not order:
        raise VtreeError("cannot build a vtree over no variables")
    if len(set(order)) != len(order):
        raise VtreeError(f"duplicate variables in ordering {order}")
    shape: Shape = order[-1]
    for var in reversed(order[:-1]):
        shape = (var, shape)
    return Vtree(shape)


def leftfirst_ordering(t: Vtree, v: Optional[int] = None) -> List[VarId]:
    lo, hi = t.span(t.root if v is None else v)
    return [t.var(u) for u in range(lo, hi + 1) if t.is_leaf(u)]


def _check_permutation(order: Sequence[VarId], expected: Sequence[VarId], what: str) -> List[VarId]:
    order = [int(var) for var in order]
    if len(order) != len(expected) or set(order) != set(expected):
        raise ScopeError(f"{what} {order} is not an ordering of {list(expected)}")
    return order


def hwb_vtree(n: int, sigma: Optional[Sequence[VarId]] = None) -> Vtree:
    """right_linear(sigma) on the left, the single leaf y (id n+1) on the right."""
    sigma = x_vars(n) if sigma is None else _check_permutation(sigma, x_vars(n), "sigma")
    left = right_linear(sigma).shape()
    return Vtree((left, y_var(n, 0)))


def fn_vtree(n: int, sigma: Optional[Sequence[VarId]] = None,
             rho: Optional[Sequence[VarId]] = None) -> Vtree:
    sigma = x_vars(n) if sigma is None else _check_permutation(sigma, x_vars(n), "sigma")
    rho = y_vars(n) if rho is None else _check_permutation(rho, y_vars(n), "rho")
    return Vtree((right_linear(sigma).shape(), right_linear(rho).shape()))


def is_right_linear(t: Vtree, v: Optional[int] = None) -> bool:
    lo, hi = t.span(t.root if v is None else v)
    return all(t.is_leaf(t.left(u)) for u in range(lo, hi + 1) if not t.is_leaf(u))


def right_chain(t: Vtree, v: Optional[int] = None) -> List[Tuple[int, VarId]]:
    """(node, variable) pairs down the right spine of a right-linear T_v.

    Internal nodes are paired with the variable of their left leaf; the
    final entry is the last leaf itself.
    """
    v = t.root if v is None else v
    if not is_right_linear(t, v):
        raise VtreeError(f"subtree at node {v} is not right-linear")
    chain = []
    while not t.is_leaf(v):
        chain.append((v, t.var(t.left(v))))
        v = t.right(v)
    chain.append((v, t.var(v)))
    return chain


def serialize_vtree(t: Vtree) -> str:
    lines = [f"vtree {t.node_count}"]
    stack = [(t.root, False)]
    while stack:
        v, expanded = stack.pop()
        if t.is_leaf(v):
            lines.append(f"L {v} {t.var(v)}")
        elif expanded:
            lines.append(f"I {v} {t.left(v)} {t.right(v)}")
        else:
            stack.extend([(v, True), (t.right(v), False), (t.left(v), False)])
    return "\n".join(lines) + "\n"


def parse_vtree(text: str) -> Vtree:
    header = None
    leaves: Dict[int, int] = {}
    children: Dict[int, Tuple[int, int]] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split()
        if not tokens or tokens[0] == "c":
            continue
        try:
            if tokens[0] == "vtree" and len(tokens) == 2 and header is None:
                header = int(tokens[1])
            elif tokens[0] == "L" and len(tokens) == 3:
                node, var = int(tokens[1]), int(tokens[2])
                if node in leaves or node in children:
                    raise FormatError(f"line {number}: node id {node} defined twice")
                leaves[node] = var
            elif tokens[0] == "I" and len(tokens) == 4:
                node = int(tokens[1])
                if node in leaves or node in children:
                    raise FormatError(f"line {number}: node id {node} defined twice")
                children[node] = (int(tokens[2]), int(tokens[3]))
            else:
                raise FormatError(f"line {number}: malformed line {raw.strip()!r}")
        except ValueError:
            raise FormatError(f"line {number}: malformed line {raw.strip()!r}")

    if header is None:
        raise FormatError("missing 'vtree <count>' header")
    count = len(leaves) + len(children)
    if header != count:
        raise FormatError(f"header announces {header} nodes, file defines {count}")
    if count == 0:
        raise FormatError("empty vtree")
    if len(set(leaves.values())) != len(leaves):
        raise FormatError("a variable appears on more than one leaf")

    has_parent = set()
    for node, pair in children.items():
        for child in pair:
            if child not in leaves and child not in children:
                raise FormatError(f"node {node} refers to undefined child {child}")
            if child in has_parent:
                raise FormatError(f"node {child} has more than one parent")
            has_parent.add(child)
    roots = [node for node in list(leaves) + list(children) if node not in has_parent]
    if len(roots) != 1:
        raise FormatError(f"expected a single root, found {len(roots)}")

    # In-order walk: every file id must equal its in-order position
    position = 0
    shapes: Dict[int, Shape] = {}
    stack = [(roots[0], False)]
    while stack:
        node, expanded = stack.pop()
        if node in leaves:
            if node != position:
                raise FormatError(f"leaf id {node} is not its in-order position {position}")
            shapes[node] = leaves[node]
            position += 1
        elif expanded is None:
            if node != position:
                raise FormatError(f"internal id {node} is not its in-order position {position}")
            position += 1
        elif not expanded:
            left, right = children[node]
            stack.extend([(node, True), (right, False), (node, None), (left, False)])
        else:
            left, right = children[node]
            shapes[node] = (shapes[left], shapes[right])
    if position != count:
        raise FormatError("vtree contains a cycle or unreachable nodes")
    try:
        vtree = Vtree(shapes[roots[0]])
    except VtreeError as e:
        logger.error(f"Error rebuilding parsed vtree: {str(e)}")
        raise FormatError(str(e.value))
    return vtree
