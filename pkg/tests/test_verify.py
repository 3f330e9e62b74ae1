import numpy as np
import pytest

from momentsynth.errors import Unsolvable
from momentsynth.lattice import MomentSpec, box
from momentsynth.measures import AtomicMeasure
from momentsynth.verify import (
    functional_representation,
    measure_moments,
    random_instance,
    report,
    solvability,
)


def test_solvable_with_positive_mass():
    verdict = solvability(MomentSpec(1, ((0,), (1,)), (1, 7j)))
    assert verdict.is_solvable
    assert verdict.sqrt_mass == pytest.approx(1.0)


def test_zero_case():
    verdict = solvability(MomentSpec(2, ((0, 0), (2, 1)), (0, 0)))
    assert verdict.is_zero


def test_unsolvable_zero_mass_nonzero_tail():
    verdict = solvability(MomentSpec(1, ((0,), (1,)), (0, 1)))
    assert verdict.is_unsolvable
    assert verdict.reason


def test_unsolvable_imaginary_mass():
    assert solvability(MomentSpec(1, ((0,),), (1j,))).is_unsolvable


def test_unsolvable_negative_mass():
    assert solvability(MomentSpec(1, ((0,),), (-1,))).is_unsolvable


def test_mass_imaginary_tolerance():
    spec = MomentSpec(1, ((0,),), (1 + 1e-14j,))
    assert solvability(spec).is_solvable


def test_moments_of_empty_measure():
    empty = AtomicMeasure.empty(2)
    assert measure_moments(empty, box(2, 1)) == (0j, 0j, 0j, 0j)


def test_moments_single_atom():
    measure = AtomicMeasure(2, np.array([[2.0, 1j]]), np.array([3.0]))
    (value,) = measure_moments(measure, [(1, 2)])
    assert value == pytest.approx(-6.0)


def test_moments_linearity(rng):
    a = AtomicMeasure(1, rng.normal(size=(2, 1)) + 1j * rng.normal(size=(2, 1)), rng.random(2))
    b = AtomicMeasure(1, rng.normal(size=(3, 1)) + 1j * rng.normal(size=(3, 1)), rng.random(3))
    union = AtomicMeasure(1, np.vstack([a.atoms, b.atoms]), np.concatenate([a.weights, b.weights]))
    k = box(1, 3)
    got = np.array(measure_moments(union, k))
    expect = np.array(measure_moments(a, k)) + np.array(measure_moments(b, k))
    assert np.allclose(got, expect)


def test_moments_dimension_mismatch():
    with pytest.raises(ValueError):
        measure_moments(AtomicMeasure.empty(2), [(1,)])


def test_report_zero_case():
    spec = MomentSpec(1, ((0,), (1,)), (0, 0))
    rep = report(spec, AtomicMeasure.empty(1))
    assert rep.max_residual == 0.0
    assert rep.total_mass == 0.0
    assert rep.support_radius == 0.0
    assert rep.atom_count == 0


def test_report_fields_consistent(rng):
    spec, truth = random_instance(2, 1, 3, seed=2)
    rep = report(spec, truth)
    assert rep.max_residual == max(rep.residuals)
    assert rep.atom_count == 3
    assert rep.total_mass == pytest.approx(truth.weights.sum())
    assert all(np.isfinite(r) for r in rep.residuals)


def test_random_instance_is_ground_truth():
    spec, truth = random_instance(2, 2, 3, seed=9)
    assert solvability(spec).is_solvable
    scale = max(1.0, max(abs(v) for v in spec.values))
    assert report(spec, truth).max_residual <= 1e-14 * scale


def test_random_instance_deterministic():
    a_spec, a_measure = random_instance(2, 2, 3, seed=31)
    b_spec, b_measure = random_instance(2, 2, 3, seed=31)
    assert a_spec.values == b_spec.values
    assert np.array_equal(a_measure.atoms, b_measure.atoms)
    assert np.array_equal(a_measure.weights, b_measure.weights)


def test_random_instance_respects_radius():
    _, truth = random_instance(2, 1, 50, seed=1, radius=0.25)
    assert np.max(np.abs(truth.atoms)) <= 0.25


def test_random_instance_validation():
    with pytest.raises(ValueError):
        random_instance(1, 1, 0, seed=0)
    with pytest.raises(ValueError):
        random_instance(1, 1, 1, seed=0, radius=0.0)


def test_functional_point_evaluation():
    w = (0.3 + 0.4j, -0.2 + 0.1j)
    indices = box(2, 1)
    values = [w[0] ** k[0] * w[1] ** k[1] for k in indices]
    measure = functional_representation(indices, values)
    got = measure_moments(measure, indices)
    assert np.allclose(got, values, atol=1e-6)


def test_functional_requires_positive_constant():
    with pytest.raises(Unsolvable):
        functional_representation([(0,), (1,)], [0, 1])


def test_functional_zero_functional():
    measure = functional_representation([(0,), (1,)], [0, 0])
    assert len(measure) == 0


def test_functional_linearity_on_span():
    # integral of a polynomial equals the functional value combination
    indices = box(1, 2)
    values = [1.0, 0.5, 0.25 + 0.1j]
    measure = functional_representation(indices, values)
    coeffs = [2.0, -1.0, 3.0]
    integral = sum(
        c * m for c, m in zip(coeffs, measure_moments(measure, indices))
    )
    expect = sum(c * v for c, v in zip(coeffs, values))
    assert integral == pytest.approx(expect, abs=1e-7 * sum(map(abs, coeffs)))
