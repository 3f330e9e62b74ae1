"""Solvability gate, moment evaluation, residual reports, and test oracles."""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Sequence

import numpy as np

from .lattice import MomentSpec, MultiIndex, box
from .measures import AtomicMeasure

if TYPE_CHECKING:
    from .synthesis import SolverConfig


@dataclass(frozen=True)
class Verdict:
    """Outcome of the solvability gate.

    kind is one of "solvable", "zero", "unsolvable".  For solvable specs
    `sqrt_mass` carries the square root of the prescribed total mass.
    """

    kind: str
    sqrt_mass: float | None = None
    reason: str | None = None

    @property
    def is_solvable(self) -> bool:
        return self.kind == "solvable"

    @property
    def is_zero(self) -> bool:
        return self.kind == "zero"

    @property
    def is_unsolvable(self) -> bool:
        return self.kind == "unsolvable"


def solvability(spec: MomentSpec, tol_im: float = 1e-12) -> Verdict:
    """Decide whether the spec admits a nonnegative representing measure.

    A positive real mass is sufficient; the all-zero spec is represented
    by the zero measure; everything else is unsolvable because the mass of
    a nonnegative measure is real and nonnegative, and zero mass forces
    every moment to vanish.
    """
    if spec.is_zero():
        return Verdict("zero")
    s0 = spec.mass
    if abs(s0.imag) > tol_im * max(1.0, abs(s0)):
        return Verdict("unsolvable", reason=f"mass {s0} is not real")
    if s0.real <= 0.0:
        if s0.real == 0.0:
            return Verdict(
                "unsolvable",
                reason="zero mass with a nonzero moment prescribed",
            )
        return Verdict("unsolvable", reason=f"mass {s0.real} is negative")
    return Verdict("solvable", sqrt_mass=float(np.sqrt(s0.real)))


def measure_moments(
    measure: AtomicMeasure, indices: Sequence[MultiIndex]
) -> tuple[complex, ...]:
    """Monomial moments of an atomic measure at the given exponents."""
    out = []
    for k in indices:
        if len(k) != measure.n:
            raise ValueError(
                f"index length {len(k)} does not match measure dimension {measure.n}"
            )
        if not len(measure):
            out.append(0j)
            continue
        mono = np.ones(len(measure), dtype=complex)
        for j, e in enumerate(k):
            if e:
                mono *= measure.atoms[:, j] ** e
        out.append(complex(measure.weights @ mono))
    return tuple(out)


@dataclass(frozen=True)
class Report:
    """Residuals of a candidate measure against a spec, plus summary stats."""

    indices: tuple[MultiIndex, ...]
    residuals: tuple[float, ...]
    max_residual: float
    total_mass: float
    support_radius: float
    atom_count: int
    config: "SolverConfig | None" = None


def report(
    spec: MomentSpec,
    measure: AtomicMeasure,
    config: "SolverConfig | None" = None,
) -> Report:
    """Per-index absolute residuals of the measure's moments."""
    moments = measure_moments(measure, spec.indices)
    residuals = tuple(abs(m - v) for m, v in zip(moments, spec.values))
    return Report(
        indices=spec.indices,
        residuals=residuals,
        max_residual=max(residuals),
        total_mass=measure.total_mass,
        support_radius=measure.support_radius,
        atom_count=len(measure),
        config=config,
    )


def random_instance(
    n: int,
    degree: int,
    natoms: int,
    seed: int,
    radius: float = 1.0,
) -> tuple[MomentSpec, AtomicMeasure]:
    """Seeded ground-truth instance: a random measure and its exact moments.

    Atoms are uniform in the polydisc of the given radius, weights uniform
    in (0, 1].  The returned spec prescribes the measure's moments over the
    full box, so the measure is a known solution of the spec.
    """
    if natoms < 1:
        raise ValueError("at least one atom required")
    if radius <= 0.0:
        raise ValueError("radius must be positive")
    rng = np.random.default_rng(seed)
    moduli = radius * np.sqrt(rng.random((natoms, n)))
    angles = 2.0 * np.pi * rng.random((natoms, n))
    atoms = moduli * np.exp(1j * angles)
    weights = 1.0 - rng.random(natoms)
    measure = AtomicMeasure(n, atoms, weights, scale=radius)
    indices = box(n, degree)
    values = measure_moments(measure, indices)
    return MomentSpec(n, indices, values), measure


def functional_representation(
    indices: Iterable[MultiIndex],
    values: Iterable[complex],
    config: "SolverConfig | None" = None,
) -> AtomicMeasure:
    """Represent a linear functional on a monomial span by a measure.

    The functional is given by its values on the monomials of the index
    set; the returned measure integrates every polynomial in that span to
    the functional's value, by linearity of both sides.  Requires a
    positive value at the constant monomial (or an identically zero
    functional, represented by the zero measure).
    """
    from .synthesis import synthesize

    pairs = list(zip(indices, values))
    if not pairs:
        raise ValueError("the index set must contain the zero multi-index")
    n = len(tuple(pairs[0][0]))
    spec = MomentSpec.from_items(n, pairs)
    return synthesize(spec, config)
