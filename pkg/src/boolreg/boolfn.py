"""Dense representation of functions on the hypercube and their spectra.

A function f : {-1,1}^n -> R is stored as a table of length 2^n.  Table
index b encodes the point x with

    x_i = +1  when bit i of b is 0,
    x_i = -1  when bit i of b is 1.

Every module in this package inherits this convention; the parity of a
coordinate set S then evaluates as (-1)^popcount(b & S), which makes the
Walsh-Hadamard butterfly and all Fourier bookkeeping index-compatible.

Variable indices are 0-based throughout the library.  User-facing output
(CLI reports, DOT labels) renders variable i as ``x<i+1>``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import IO, Iterable

import numpy as np

from .errors import PreconditionError

PM_ONE = "pm_one"
ZERO_ONE = "zero_one"
REAL = "real"
RANGE_TAGS = (PM_ONE, ZERO_ONE, REAL)

MAX_VARS = 24
MEAN_SQUARE_TOL = 1e-9


@lru_cache(maxsize=None)
def subset_sizes(n: int) -> np.ndarray:
    """Read-only array of popcounts for all masks 0 .. 2^n - 1."""
    sizes = np.zeros(1 << n, dtype=np.int64)
    for i in range(n):
        sizes[1 << i: 1 << (i + 1)] = sizes[: 1 << i] + 1
    sizes.setflags(write=False)
    return sizes


def _freeze(values: Iterable[float]) -> np.ndarray:
    arr = np.array(values, dtype=np.float64, copy=True)
    arr.setflags(write=False)
    return arr


def infer_range_tag(values: np.ndarray) -> str:
    """Classify a value table: exact {-1,+1}, within [0,1], or general real."""
    if np.all(np.isin(values, (-1.0, 1.0))):
        return PM_ONE
    if np.all((values >= 0.0) & (values <= 1.0)):
        return ZERO_ONE
    return REAL


@dataclass(frozen=True, eq=False)
class BooleanFunction:
    """A real-valued function on {-1,1}^n as a dense table of length 2^n.

    ``range_tag`` records the intended codomain: ``pm_one`` means every
    entry is exactly -1 or +1, ``zero_one`` means every entry lies in
    [0,1], ``real`` makes no promise.  Instances are immutable; the value
    table is stored read-only.
    """

    n: int
    values: np.ndarray
    range_tag: str = REAL

    def __post_init__(self):
        if not 1 <= self.n <= MAX_VARS:
            raise ValueError(f"variable count must be in [1, {MAX_VARS}], got {self.n}")
        if self.range_tag not in RANGE_TAGS:
            raise ValueError(f"unknown range tag {self.range_tag!r}")
        arr = _freeze(self.values)
        if arr.ndim != 1 or arr.size != 1 << self.n:
            raise ValueError(f"value table must have length 2^{self.n}, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("value table contains non-finite entries")
        if self.range_tag == PM_ONE and not np.all(np.isin(arr, (-1.0, 1.0))):
            raise ValueError("range tag pm_one requires every entry in {-1, +1}")
        if self.range_tag == ZERO_ONE and not np.all((arr >= 0.0) & (arr <= 1.0)):
            raise ValueError("range tag zero_one requires every entry in [0, 1]")
        object.__setattr__(self, "values", arr)

    @property
    def size(self) -> int:
        return 1 << self.n

    def require_unit_mean_square(self) -> None:
        """Raise when E[f^2] exceeds 1 beyond the shared tolerance."""
        ms = norm2(self)
        if ms > 1.0 + MEAN_SQUARE_TOL:
            raise PreconditionError(f"mean square E[f^2] = {ms} exceeds 1")


@dataclass(frozen=True, eq=False)
class FourierExpansion:
    """Coefficient table indexed by subset masks: bit i of S set means i in S."""

    n: int
    coeffs: np.ndarray

    def __post_init__(self):
        if not 1 <= self.n <= MAX_VARS:
            raise ValueError(f"variable count must be in [1, {MAX_VARS}], got {self.n}")
        arr = _freeze(self.coeffs)
        if arr.ndim != 1 or arr.size != 1 << self.n:
            raise ValueError(f"coefficient table must have length 2^{self.n}")
        object.__setattr__(self, "coeffs", arr)


def _butterfly(values: np.ndarray) -> np.ndarray:
    """Unnormalized Walsh-Hadamard transform, O(n 2^n) in-place scheme.

    Returns out[S] = sum_b values[b] * (-1)^popcount(b & S).
    """
    a = values.astype(np.float64, copy=True)
    h = 1
    while h < a.size:
        a = a.reshape(-1, 2, h)
        top = a[:, 0, :] + a[:, 1, :]
        bottom = a[:, 0, :] - a[:, 1, :]
        a[:, 0, :] = top
        a[:, 1, :] = bottom
        a = a.reshape(-1)
        h *= 2
    return a


def wht(f: BooleanFunction) -> FourierExpansion:
    """Walsh-Hadamard transform: coefficient at mask S is E[f * parity_S]."""
    return FourierExpansion(f.n, _butterfly(f.values) / f.size)


def inverse_wht(g: FourierExpansion) -> BooleanFunction:
    """Evaluate the expansion back to a value table; range tag becomes real."""
    return BooleanFunction(g.n, _butterfly(g.coeffs), REAL)


def restrict(f: BooleanFunction, i: int, v: int) -> BooleanFunction:
    """Fix coordinate i to v in {-1,+1}, keeping the ambient arity n.

    The result ignores bit i of the input index entirely, so restricting
    again on i is a no-op apart from the recorded value.
    """
    _check_index(f, i)
    if v not in (-1, 1):
        raise ValueError(f"restriction value must be +1 or -1, got {v!r}")
    idx = np.arange(f.size)
    bit = 1 << i
    src = (idx & ~bit) if v == 1 else (idx | bit)
    return BooleanFunction(f.n, f.values[src], f.range_tag)


def derivative(f: BooleanFunction, i: int) -> BooleanFunction:
    """Directional derivative along coordinate i.

    (D_i f)(x) = (f with x_i := +1  minus  f with x_i := -1) / 2, stored on
    the same ambient cube; the output does not depend on bit i.
    """
    _check_index(f, i)
    idx = np.arange(f.size)
    bit = 1 << i
    plus = f.values[idx & ~bit]
    minus = f.values[idx | bit]
    return BooleanFunction(f.n, (plus - minus) / 2.0, REAL)


def mean(f: BooleanFunction) -> float:
    """E[f], the empty-set Fourier coefficient."""
    return float(np.mean(f.values))


def norm2(f: BooleanFunction) -> float:
    """E[f^2], the squared 2-norm under the uniform measure."""
    return float(np.mean(f.values * f.values))


def _check_index(f: BooleanFunction, i: int) -> None:
    if not 0 <= i < f.n:
        raise IndexError(f"variable index {i} out of range for n={f.n}")


# --- truth-table text format -------------------------------------------------
#
# First line "n=<k>", then 2^k lines, one value per line in increasing index
# order.  Writers emit 17 significant digits so tables round-trip exactly.

def write_table(f: BooleanFunction, fp: IO[str]) -> None:
    fp.write(f"n={f.n}\n")
    for v in f.values:
        fp.write(f"{v:.17g}\n")


def read_table(fp: IO[str]) -> BooleanFunction:
    header = fp.readline().strip()
    if not header.startswith("n="):
        raise ValueError(f"expected header 'n=<k>', got {header!r}")
    try:
        n = int(header[2:])
    except ValueError as exc:
        raise ValueError(f"malformed variable count in header {header!r}") from exc
    if not 1 <= n <= MAX_VARS:
        raise ValueError(f"variable count must be in [1, {MAX_VARS}], got {n}")
    values = []
    for lineno in range(1 << n):
        line = fp.readline()
        if not line:
            raise ValueError(f"truth table truncated: expected {1 << n} values, got {lineno}")
        try:
            values.append(float(line.strip()))
        except ValueError as exc:
            raise ValueError(f"bad value on line {lineno + 2}: {line.strip()!r}") from exc
    arr = np.array(values, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise ValueError("truth table contains non-finite entries")
    return BooleanFunction(n, arr, infer_range_tag(arr))


def save_table(f: BooleanFunction, path: str) -> None:
    with open(path, "w", encoding="ascii") as fp:
        write_table(f, fp)


def load_table(path: str) -> BooleanFunction:
    with open(path, "r", encoding="ascii") as fp:
        return read_table(fp)
