"""Multi-index lattice arithmetic and moment problem instances.

A problem instance prescribes complex values for finitely many monomial
exponents in n complex variables.  Everything downstream works on a full
exponent box of some degree, so this module also provides the zero-filled
embedding of an arbitrary instance into that box.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

# Exponent vector of a monomial z1^k1 ... zn^kn (entries >= 0), and its
# signed generalization used for mixed forward/adjoint powers.
MultiIndex = tuple[int, ...]
SignedIndex = tuple[int, ...]


def _check_multi_index(k, n: int) -> MultiIndex:
    k = tuple(int(e) for e in k)
    if len(k) != n:
        raise ValueError(f"index {k} has length {len(k)}, expected {n}")
    if any(e < 0 for e in k):
        raise ValueError(f"index {k} has a negative entry")
    return k


def box(n: int, degree: int) -> tuple[MultiIndex, ...]:
    """All multi-indices with every entry <= degree, in lexicographic order.

    The zero index comes first and the result has (degree+1)**n elements.
    """
    if n < 1:
        raise ValueError("dimension must be at least 1")
    if degree < 1:
        raise ValueError("box degree must be at least 1")
    return tuple(itertools.product(range(degree + 1), repeat=n))


def band(n: int, degree: int, coord: int) -> set[MultiIndex]:
    """The sub-box whose `coord`-th entry is at most degree-1.

    `coord` is numbered from 1.  These are exactly the indices that the
    corresponding coordinate shift maps back into the box.
    """
    if not 1 <= coord <= n:
        raise ValueError(f"coordinate {coord} out of range 1..{n}")
    return {k for k in box(n, degree) if k[coord - 1] <= degree - 1}


def shift(k: MultiIndex, coord: int) -> MultiIndex:
    """Increment the `coord`-th entry (numbered from 1) of a multi-index."""
    if not 1 <= coord <= len(k):
        raise ValueError(f"coordinate {coord} out of range 1..{len(k)}")
    j = coord - 1
    return k[:j] + (k[j] + 1,) + k[j + 1:]


@dataclass(frozen=True)
class MomentSpec:
    """A truncated moment problem: prescribed complex values per exponent.

    `indices` are distinct nonnegative multi-indices with the all-zero
    exponent first; `values` align with them.  The zero exponent prescribes
    the total mass of the sought measure.
    """

    n: int
    indices: tuple[MultiIndex, ...]
    values: tuple[complex, ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("dimension must be at least 1")
        indices = tuple(_check_multi_index(k, self.n) for k in self.indices)
        values = tuple(complex(v) for v in self.values)
        if len(indices) != len(values):
            raise ValueError("indices and values must have equal length")
        if not indices or indices[0] != (0,) * self.n:
            raise ValueError("the zero multi-index must be present and first")
        if len(set(indices)) != len(indices):
            raise ValueError("duplicate multi-index in spec")
        for v in values:
            if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                raise ValueError("moment values must be finite")
        object.__setattr__(self, "indices", indices)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_items(cls, n: int, items) -> "MomentSpec":
        """Build a spec from (index, value) pairs, moving the zero index first."""
        pairs = [(tuple(int(e) for e in k), complex(v)) for k, v in items]
        zero = (0,) * n
        head = [p for p in pairs if p[0] == zero]
        if not head:
            raise ValueError("the zero multi-index must be prescribed")
        tail = [p for p in pairs if p[0] != zero]
        ordered = head + tail
        return cls(n, tuple(k for k, _ in ordered), tuple(v for _, v in ordered))

    def value_of(self, k: MultiIndex) -> complex:
        return self.values[self.indices.index(k)]

    @property
    def mass(self) -> complex:
        return self.values[0]

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.values)


@dataclass(frozen=True, eq=False)
class EmbeddedSpec:
    """A moment spec zero-filled onto a full exponent box of some degree."""

    n: int
    degree: int
    box: tuple[MultiIndex, ...]
    values: np.ndarray
    position: dict[MultiIndex, int] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        vals = np.asarray(self.values, dtype=complex)
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        object.__setattr__(
            self, "position", {k: i for i, k in enumerate(self.box)}
        )
        if len(self.box) != (self.degree + 1) ** self.n:
            raise ValueError("box size does not match its degree")
        if vals.shape != (len(self.box),):
            raise ValueError("one value per box element required")

    def value_of(self, k: MultiIndex) -> complex:
        return complex(self.values[self.position[k]])

    @property
    def mass(self) -> complex:
        return complex(self.values[0])


def embed(spec: MomentSpec, degree: int | None = None) -> EmbeddedSpec:
    """Zero-fill a spec onto the smallest box containing its indices.

    The box degree is max(1, largest exponent entry); a larger `degree`
    may be requested explicitly and is honored as long as it still
    contains every prescribed index.
    """
    minimal = max(1, max((max(k) for k in spec.indices), default=0))
    if degree is None:
        degree = minimal
    elif degree < minimal:
        raise ValueError(f"box degree {degree} cannot hold indices up to {minimal}")
    full = box(spec.n, degree)
    values = np.zeros(len(full), dtype=complex)
    position = {k: i for i, k in enumerate(full)}
    for k, v in zip(spec.indices, spec.values):
        values[position[k]] = v
    return EmbeddedSpec(spec.n, degree, full, values)
