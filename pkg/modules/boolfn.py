"""Boolean functions of the hidden-weighted-bit family and brute-force oracles.

Every oracle evaluates a vectorised rule over numpy boolean columns, one
column per variable, so a truth table of up to 24 variables is a handful of
array operations per chunk of rows.  Rows are enumerated lexicographically
with the first scope variable as the most significant bit.
"""
import re
from dataclasses import dataclass
from typing import Callable, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from utils.logging_setup import logger
from .errors import CapExceededError, FormatError, ScopeError

VarId = int
Assignment = Dict[VarId, int]
Columns = Mapping[VarId, np.ndarray]
Rule = Callable[[Columns, int], np.ndarray]

MATERIALIZATION_CAP = 24
CHUNK_ROWS = 1 << 16


def x_vars(n: int) -> List[VarId]:
    return list(range(1, n + 1))


def y_var(n: int, j: int) -> VarId:
    return n + 1 + j


def y_vars(n: int) -> List[VarId]:
    return [y_var(n, j) for j in range(n + 1)]


def var_name(var: VarId, n: Optional[int] = None) -> str:
    if n is None:
        return f"v{var}"
    if 1 <= var <= n:
        return f"x{var}"
    if n < var <= 2 * n + 1:
        return f"y{var - n - 1}"
    return f"v{var}"


def check_cap(count: int, what: str = "scope") -> None:
    if count > MATERIALIZATION_CAP:
        raise CapExceededError(
            f"{what} has {count} variables, materialization cap is {MATERIALIZATION_CAP}")


def enumerate_columns(scope: Sequence[VarId], start: int = 0,
                      stop: Optional[int] = None) -> Dict[VarId, np.ndarray]:
    """Columns for rows start..stop-1 of the enumeration of `scope`."""
    k = len(scope)
    check_cap(k)
    if stop is None:
        stop = 1 << k
    rows = np.arange(start, stop, dtype=np.int64)
    return {var: ((rows >> (k - 1 - pos)) & 1).astype(bool) for pos, var in enumerate(scope)}


def iter_chunks(k: int, chunk_rows: int = CHUNK_ROWS) -> Iterator[Tuple[int, int]]:
    total = 1 << k
    for start in range(0, total, chunk_rows):
        yield start, min(total, start + chunk_rows)


def row_assignment(scope: Sequence[VarId], row: int) -> Assignment:
    """Assignment encoded by one row index of the enumeration of `scope`."""
    k = len(scope)
    return {var: (row >> (k - 1 - pos)) & 1 for pos, var in enumerate(scope)}


def as_assignment(scope: Sequence[VarId], a: Union[Mapping[VarId, int], Sequence[int]],
                  exact: bool = True) -> Assignment:
    """Normalise a mapping or a bit sequence (in scope order) to an Assignment.

    With exact=True the mapping's domain must equal the scope; otherwise it
    only has to cover it.
    """
    if isinstance(a, Mapping):
        keys = set(a)
        missing = [var for var in scope if var not in keys]
        if missing:
            raise ScopeError(f"assignment misses variables {missing}")
        if exact and len(keys) != len(scope):
            extra = sorted(keys - set(scope))
            raise ScopeError(f"assignment has variables outside the scope: {extra}")
        values = {var: int(a[var]) for var in scope}
    else:
        bits = list(a)
        if len(bits) != len(scope):
            raise ScopeError(f"expected {len(scope)} bits, got {len(bits)}")
        values = {var: int(bit) for var, bit in zip(scope, bits)}
    bad = [var for var, bit in values.items() if bit not in (0, 1)]
    if bad:
        raise ScopeError(f"non-binary values for variables {bad}")
    return values


@dataclass(frozen=True)
class FunctionOracle:
    """Boolean function over an ordered scope; immutable and shareable."""
    scope: Tuple[VarId, ...]
    rule: Rule
    name: str = "f"

    def __post_init__(self):
        scope = tuple(int(var) for var in self.scope)
        if len(set(scope)) != len(scope):
            raise ScopeError(f"duplicate variables in scope {scope}")
        object.__setattr__(self, "scope", scope)

    @property
    def arity(self) -> int:
        return len(self.scope)

    def evaluate(self, assignment: Union[Mapping[VarId, int], Sequence[int]]) -> int:
        values = as_assignment(self.scope, assignment, exact=False)
        columns = {var: np.array([bool(values[var])]) for var in self.scope}
        return int(bool(self.rule(columns, 1)[0]))

    def table(self, scope: Optional[Sequence[VarId]] = None) -> np.ndarray:
        """Truth table over `scope` (default: own scope); a superset lifts the function."""
        scope = self.scope if scope is None else tuple(scope)
        if len(set(scope)) != len(scope):
            raise ScopeError(f"duplicate variables in scope {scope}")
        missing = [var for var in self.scope if var not in set(scope)]
        if missing:
            raise ScopeError(f"{self.name} reads variables {missing} outside {scope}")
        check_cap(len(scope), what=self.name)
        out = np.empty(1 << len(scope), dtype=np.uint8)
        for start, stop in iter_chunks(len(scope)):
            columns = enumerate_columns(scope, start, stop)
            out[start:stop] = self.rule(columns, stop - start)
        return out


def _weight(columns: Columns, xs: Sequence[VarId], size: int) -> np.ndarray:
    weight = np.zeros(size, dtype=np.int64)
    for var in xs:
        weight += columns[var]
    return weight


def _check_arity(n: int) -> None:
    if n < 1:
        raise ScopeError(f"arity must be positive, got {n}")


def _check_count(n: int, i: int) -> None:
    if not 0 <= i <= n:
        raise ScopeError(f"count {i} out of range 0..{n}")


# Scalar definitions

def eval_hwb(n: int, a) -> int:
    _check_arity(n)
    values = as_assignment(x_vars(n), a)
    weight = sum(values.values())
    return int(weight >= 1 and values[weight] == 1)


def eval_exact_count(n: int, i: int, a) -> int:
    _check_count(n, i)
    values = as_assignment(x_vars(n), a)
    return int(sum(values.values()) == i)


@dataclass(frozen=True)
class PrimeId:
    """P_0 and P_n carry no bit; P_{i,0} / P_{i,1} carry the required value of x_i."""
    weight: int
    bit: Optional[int] = None

    def validate(self, n: int) -> "PrimeId":
        _check_arity(n)
        if self.bit is None:
            if self.weight not in (0, n):
                raise ScopeError(f"invalid prime P{self.weight} for n={n}")
        elif self.bit not in (0, 1) or not 1 <= self.weight <= n - 1:
            raise ScopeError(f"invalid prime P{self.weight},{self.bit} for n={n}")
        return self

    def label(self) -> str:
        if self.bit is None:
            return f"P{self.weight}"
        return f"P{self.weight},{self.bit}"

    def sub_literal(self, n: int) -> Tuple[VarId, bool]:
        """The y-literal paired with this prime in F_n, as (variable, positive)."""
        self.validate(n)
        if self.bit is None:
            return (y_var(n, 0), False) if self.weight == 0 else (y_var(n, n), True)
        return y_var(n, self.weight), self.bit == 1

    def accepts_hwb(self, n: int) -> bool:
        """Whether the prime's block lies inside HWB_n (it is paired with ⊤)."""
        self.validate(n)
        return self.weight == n if self.bit is None else self.bit == 1


def prime_family(n: int) -> List[PrimeId]:
    _check_arity(n)
    family = [PrimeId(0), PrimeId(n)]
    for i in range(1, n):
        family.extend([PrimeId(i, 0), PrimeId(i, 1)])
    return family


def eval_prime(p: PrimeId, n: int, a) -> int:
    p.validate(n)
    values = as_assignment(x_vars(n), a)
    weight = sum(values.values())
    if weight != p.weight:
        return 0
    return int(p.bit is None or values[p.weight] == p.bit)


def _prime_of(n: int, values: Mapping[VarId, int]) -> PrimeId:
    weight = sum(values[var] for var in x_vars(n))
    if weight in (0, n):
        return PrimeId(weight)
    return PrimeId(weight, values[weight])


def eval_generalized_hwb(n: int, a) -> int:
    _check_arity(n)
    values = as_assignment(x_vars(n) + y_vars(n), a)
    var, positive = _prime_of(n, values).sub_literal(n)
    return values[var] if positive else 1 - values[var]


# Oracles

def hwb_oracle(n: int) -> FunctionOracle:
    _check_arity(n)
    xs = x_vars(n)

    def rule(columns: Columns, size: int) -> np.ndarray:
        weight = _weight(columns, xs, size)
        out = np.zeros(size, dtype=bool)
        for i, var in enumerate(xs, start=1):
            out |= (weight == i) & columns[var]
        return out

    return FunctionOracle(tuple(xs), rule, name=f"hwb:{n}")


def exact_count_oracle(n: int, i: int) -> FunctionOracle:
    _check_count(n, i)
    xs = x_vars(n)

    def rule(columns: Columns, size: int) -> np.ndarray:
        return _weight(columns, xs, size) == i

    return FunctionOracle(tuple(xs), rule, name=f"exact:{n}:{i}")


def _prime_mask(p: PrimeId, columns: Columns, weight: np.ndarray) -> np.ndarray:
    mask = weight == p.weight
    if p.bit is not None:
        mask &= columns[p.weight] if p.bit == 1 else ~columns[p.weight]
    return mask


def prime_oracle(p: PrimeId, n: int) -> FunctionOracle:
    p.validate(n)
    xs = x_vars(n)

    def rule(columns: Columns, size: int) -> np.ndarray:
        return _prime_mask(p, columns, _weight(columns, xs, size))

    return FunctionOracle(tuple(xs), rule, name=f"prime:{n}:{p.label()}")


def generalized_hwb_oracle(n: int) -> FunctionOracle:
    _check_arity(n)
    xs = x_vars(n)
    family = prime_family(n)

    def rule(columns: Columns, size: int) -> np.ndarray:
        weight = _weight(columns, xs, size)
        out = np.zeros(size, dtype=bool)
        for p in family:
            var, positive = p.sub_literal(n)
            literal = columns[var] if positive else ~columns[var]
            out |= _prime_mask(p, columns, weight) & literal
        return out

    return FunctionOracle(tuple(xs + y_vars(n)), rule, name=f"ghwb:{n}")


def hwb_by_counts_oracle(n: int) -> FunctionOracle:
    """HWB_n written as (E^1_n ∧ x_1) ∨ ... ∨ (E^n_n ∧ x_n)."""
    counts = [exact_count_oracle(n, i) for i in range(1, n + 1)]

    def rule(columns: Columns, size: int) -> np.ndarray:
        out = np.zeros(size, dtype=bool)
        for i, count in enumerate(counts, start=1):
            out |= count.rule(columns, size) & columns[i]
        return out

    return FunctionOracle(tuple(x_vars(n)), rule, name=f"hwb-counts:{n}")


def constant_oracle(scope: Sequence[VarId], value: int) -> FunctionOracle:
    bit = bool(value)

    def rule(columns: Columns, size: int) -> np.ndarray:
        return np.full(size, bit)

    return FunctionOracle(tuple(scope), rule, name="true" if bit else "false")


def oracle_from_table(scope: Sequence[VarId], table: Sequence[int], name: str = "table") -> FunctionOracle:
    scope = tuple(scope)
    check_cap(len(scope))
    bits = np.asarray(table, dtype=bool)
    if bits.shape != (1 << len(scope),):
        raise ScopeError(f"table of length {bits.size} does not match {len(scope)} variables")
    k = len(scope)

    def rule(columns: Columns, size: int) -> np.ndarray:
        index = np.zeros(size, dtype=np.int64)
        for pos, var in enumerate(scope):
            index |= columns[var].astype(np.int64) << (k - 1 - pos)
        return bits[index]

    return FunctionOracle(scope, rule, name=name)


def truth_table(f: FunctionOracle) -> np.ndarray:
    return f.table()


def model_count(f: FunctionOracle) -> int:
    check_cap(f.arity, what=f.name)
    return int(f.table().sum(dtype=np.int64))


def restrict(f: FunctionOracle, partial: Mapping[VarId, int]) -> FunctionOracle:
    """Substitute constants for the variables of `partial`."""
    outside = sorted(var for var in partial if var not in f.scope)
    if outside:
        raise ScopeError(f"variables {outside} are outside the scope of {f.name}")
    bad = sorted(var for var, bit in partial.items() if int(bit) not in (0, 1))
    if bad:
        raise ScopeError(f"non-binary values for variables {bad}")
    fixed = {var: bool(int(bit)) for var, bit in partial.items()}
    scope = tuple(var for var in f.scope if var not in fixed)

    def rule(columns: Columns, size: int) -> np.ndarray:
        full = dict(columns)
        for var, bit in fixed.items():
            full[var] = np.full(size, bit)
        return f.rule(full, size)

    if not fixed:
        return f
    suffix = ",".join(f"{var}={int(bit)}" for var, bit in sorted(fixed.items()))
    return FunctionOracle(scope, rule, name=f"{f.name}|{suffix}")


_TAG = re.compile(r"^[Pp]?(?:(n)|(\d+)(?:[,._](\d))?)$")


def parse_prime_tag(tag: str, n: int) -> PrimeId:
    match = _TAG.match(tag.strip())
    if not match:
        raise FormatError(f"invalid prime tag {tag!r}")
    if match.group(1):
        return PrimeId(n).validate(n)
    weight = int(match.group(2))
    bit = match.group(3)
    return PrimeId(weight, None if bit is None else int(bit)).validate(n)


def parse_function_spec(text: str) -> FunctionOracle:
    """Built-in functions: hwb:<n>, exact:<n>:<i>, prime:<n>:<tag>, ghwb:<n>."""
    parts = text.strip().split(":")
    try:
        kind = parts[0].lower()
        if kind == "hwb" and len(parts) == 2:
            return hwb_oracle(int(parts[1]))
        if kind == "exact" and len(parts) == 3:
            return exact_count_oracle(int(parts[1]), int(parts[2]))
        if kind == "prime" and len(parts) == 3:
            n = int(parts[1])
            return prime_oracle(parse_prime_tag(parts[2], n), n)
        if kind == "ghwb" and len(parts) == 2:
            return generalized_hwb_oracle(int(parts[1]))
    except ValueError as e:
        logger.error(f"Invalid function spec {text!r}: {str(e)}")
        raise FormatError(f"invalid function spec {text!r}")
    raise FormatError(f"unknown function spec {text!r}")
