"""Atomic measure synthesis on the scaled torus.

Given the Fourier table of a solvable instance, this module constructs an
explicit finitely-atomic nonnegative measure whose atoms sit on the torus
of radius equal to the contraction scale (times any moment pre-scaling)
and whose monomial moments reproduce the prescribed values.

One complex variable admits an exact route: the Toeplitz section of the
Fourier data splits into a Vandermonde part (atoms from the roots of a
null-vector polynomial) plus a multiple of the identity (mass spread over
equispaced atoms).  Higher dimensions use nonnegative least squares on a
product grid of candidate angles followed by a damped Gauss-Newton
refinement of angles and weights.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import nnls as _scipy_nnls

from .dilation import FourierTable, _is_canonical, fourier_table, min_eigenvalue, psd_check
from .errors import ConvergenceFailure, NNLSStall, NotPSD, RootFindingFailure, SolverError, Unsolvable
from .lattice import EmbeddedSpec, MomentSpec, embed
from .measures import AtomicMeasure
from .operators import build_tuple
from .verify import report, solvability


@dataclass(frozen=True)
class SolverConfig:
    """Tunable knobs of the synthesis pipeline.

    Fields left at None resolve per instance: `tol` to 1e-8 for one
    variable and 1e-6 otherwise, `m` to the box degree, `weight_prune` to
    1e-12 times the prescribed mass, `normalize` to on for two or more
    variables.  Different settings yield different, equally valid
    measures; nothing canonicalizes the output.
    """

    tol: float | None = None
    grid: int = 64
    max_refine_iters: int = 200
    margin: float = 1.1
    m: int | None = None
    weight_prune: float | None = None
    seed: int = 0
    normalize: bool | None = None
    box_degree: int | None = None

    def __post_init__(self) -> None:
        if self.tol is not None and self.tol <= 0.0:
            raise ValueError("tol must be positive")
        if self.grid < 1:
            raise ValueError("grid must be at least 1")
        if self.max_refine_iters < 1:
            raise ValueError("max_refine_iters must be at least 1")
        if self.margin <= 1.0:
            raise ValueError("margin must exceed 1")
        if self.m is not None and self.m < 1:
            raise ValueError("m must be at least 1")
        if self.weight_prune is not None and self.weight_prune < 0.0:
            raise ValueError("weight_prune must be nonnegative")

    def resolved_tol(self, n: int) -> float:
        if self.tol is not None:
            return self.tol
        return 1e-8 if n == 1 else 1e-6


def solve_zero(spec: MomentSpec) -> AtomicMeasure:
    """The zero measure, valid exactly when every prescribed value is zero."""
    if not spec.is_zero():
        raise ValueError("spec prescribes a nonzero value; the zero measure does not solve it")
    return AtomicMeasure.empty(spec.n)


# ---------------------------------------------------------------------------
# shared trigonometric helpers
# ---------------------------------------------------------------------------


def _half_box(n: int, radius: int) -> np.ndarray:
    """Canonical half of the symmetric index box (zero included), as an array."""
    kept = [
        k
        for k in itertools.product(range(-radius, radius + 1), repeat=n)
        if _is_canonical(k)
    ]
    return np.array(kept, dtype=int).reshape(len(kept), n)


def _trig_moments(angles: np.ndarray, weights: np.ndarray, karr: np.ndarray) -> np.ndarray:
    """Sum of w_i * exp(i k . theta_i) for every row k of karr."""
    if angles.shape[0] == 0:
        return np.zeros(karr.shape[0], dtype=complex)
    phases = karr.astype(float) @ angles.T
    return np.exp(1j * phases) @ weights


def _table_targets(table: FourierTable, karr: np.ndarray) -> np.ndarray:
    return np.array([table.entries[tuple(k)] for k in karr], dtype=complex)


def _unit_measure(angles: np.ndarray, weights: np.ndarray, n: int) -> AtomicMeasure:
    angles = np.asarray(angles, dtype=float).reshape(-1, n)
    return AtomicMeasure(n, np.exp(1j * angles), weights, scale=1.0)


# ---------------------------------------------------------------------------
# one complex variable: Toeplitz splitting into atoms plus uniform mass
# ---------------------------------------------------------------------------


def _horner(coeffs: np.ndarray, z: np.ndarray) -> np.ndarray:
    out = np.full_like(z, coeffs[-1])
    for c in coeffs[-2::-1]:
        out = out * z + c
    return out


def _durand_kerner(coeffs: np.ndarray, max_iter: int = 500) -> np.ndarray:
    """All roots of a complex polynomial (ascending coefficients), simultaneously.

    Deterministic initialization at powers of 0.4+0.9i; raises
    RootFindingFailure if the simultaneous iteration does not settle.
    """
    coeffs = np.asarray(coeffs, dtype=complex)
    top = float(np.max(np.abs(coeffs)))
    if top == 0.0:
        return np.zeros(0, dtype=complex)
    keep = np.abs(coeffs) > 1e-12 * top
    hi = int(np.max(np.nonzero(keep)))
    lo = int(np.min(np.nonzero(keep)))
    coeffs = coeffs[: hi + 1]
    # factors of z contribute roots at the origin, which carry no angle
    # information; strip them instead of feeding them to the iteration.
    coeffs = coeffs[lo:]
    degree = len(coeffs) - 1
    if degree < 1:
        return np.zeros(0, dtype=complex)
    if degree == 1:
        return np.array([-coeffs[0] / coeffs[1]])
    monic = coeffs / coeffs[-1]
    roots = (0.4 + 0.9j) ** np.arange(1, degree + 1)
    for _ in range(max_iter):
        values = _horner(monic, roots)
        diff = roots[:, None] - roots[None, :]
        np.fill_diagonal(diff, 1.0)
        denom = diff.prod(axis=1)
        denom[denom == 0] = 1e-300
        step = values / denom
        roots = roots - step
        if np.max(np.abs(step)) <= 1e-13 * (1.0 + np.max(np.abs(roots))):
            return roots
    raise RootFindingFailure(f"root iteration did not converge for degree {degree}")


def _merge_angles(angles: np.ndarray, tol: float = 1e-7) -> np.ndarray:
    """Collapse near-coincident circle angles (circular clustering)."""
    if angles.size == 0:
        return angles
    wrapped = np.sort(np.mod(angles, 2.0 * np.pi))
    groups = [[wrapped[0]]]
    for a in wrapped[1:]:
        if a - groups[-1][-1] <= tol:
            groups[-1].append(a)
        else:
            groups.append([a])
    merged = [float(np.mean(g)) for g in groups]
    # the wrap-around pair may also coincide
    if len(merged) > 1 and (merged[0] + 2.0 * np.pi) - merged[-1] <= tol:
        first = merged.pop(0)
        merged[-1] = float(np.mean([merged[-1], first + 2.0 * np.pi])) % (2.0 * np.pi)
    return np.array(merged)


def _equispaced_offset(atom_angles: np.ndarray, m: int) -> float:
    """Phase for m+1 equispaced atoms, kept far from the atomic angles.

    The distance from an angle to the equispaced set only depends on its
    residue modulo the set's period, so the best offset is the midpoint of
    the largest residue gap.  Without atomic angles the offset defaults to
    half the period.
    """
    period = 2.0 * np.pi / (m + 1)
    if atom_angles.size == 0:
        return 0.5 * period
    res = np.sort(np.mod(atom_angles, period))
    gaps = np.diff(res, append=res[0] + period)
    best = int(np.argmax(gaps))
    return float(np.mod(res[best] + 0.5 * gaps[best], period))


def _fit_circle_weights(angles: np.ndarray, targets: np.ndarray) -> np.ndarray:
    """Real least-squares weights matching sum_i w_i e^{ik theta_i} to targets."""
    orders = np.arange(len(targets))[:, None]
    V = np.exp(1j * orders * angles[None, :])
    A = np.vstack([V.real, V.imag])
    b = np.concatenate([targets.real, targets.imag])
    w, *_ = np.linalg.lstsq(A, b, rcond=None)
    return w


def cf_atoms_1d(
    coeffs,
    tol: float,
    weight_prune: float | None = None,
) -> AtomicMeasure:
    """Decompose one-variable Fourier data c_0..c_m into circle atoms.

    The Toeplitz section T[p, q] = c_(p-q) must be positive semidefinite
    within `tol` (NotPSD otherwise).  Subtracting the smallest eigenvalue
    leaves a singular section whose null-vector polynomial has the atomic
    angles among the conjugates of its roots; weights come from a real
    least-squares Vandermonde fit.  The subtracted mass returns as m+1
    equispaced atoms, which reproduce frequencies up to m exactly and are
    phase-shifted away from the atomic angles.

    Atoms land on the unit circle; the caller applies any radius.
    """
    c = np.asarray(coeffs, dtype=complex).reshape(-1)
    m = len(c) - 1
    if m < 0:
        raise ValueError("at least the zeroth coefficient is required")
    if abs(c[0].imag) > 1e-12 * max(1.0, abs(c[0])):
        raise ValueError(f"zeroth coefficient must be real, got {c[0]}")
    mass = c[0].real
    if mass < 0.0:
        raise ValueError(f"zeroth coefficient must be nonnegative, got {mass}")

    full = np.concatenate([c[:0:-1].conj(), c])
    T = np.empty((m + 1, m + 1), dtype=complex)
    for p in range(m + 1):
        T[p, :] = full[m + p::-1][: m + 1]
    ok, witness = psd_check(T, tol)
    if not ok:
        raise NotPSD(f"Toeplitz section fails positivity, pivot {witness:.3e}")

    prune = weight_prune if weight_prune is not None else 1e-12 * max(1.0, mass)
    if mass <= prune:
        return AtomicMeasure.empty(1)

    uniform = max(min_eigenvalue(T, resolution=1e-14 * max(1.0, mass)), 0.0)
    T_atomic = T - uniform * np.eye(m + 1)

    atom_angles = np.zeros(0)
    if np.linalg.norm(T_atomic) > 1e-13 * max(np.linalg.norm(T), 1e-300):
        shift = 1e-14 * max(T.trace().real, 1e-300)
        v = np.zeros(m + 1, dtype=complex)
        v[0] = 1.0
        system = T_atomic + shift * np.eye(m + 1)
        for _ in range(3):
            v = np.linalg.solve(system, v)
            v /= np.linalg.norm(v)
        roots = _durand_kerner(v)
        if roots.size:
            atom_angles = _merge_angles(np.mod(-np.angle(roots), 2.0 * np.pi))

    targets = c.copy()
    targets[0] = mass - uniform
    weights = np.zeros(0)
    if atom_angles.size:
        weights = _fit_circle_weights(atom_angles, targets)
        if weights.size and float(weights.min()) < 0.0:
            if float(weights.min()) < -1e-10 * max(1.0, mass):
                raise ConvergenceFailure(
                    f"significantly negative atomic weight {weights.min():.3e}"
                )
            keep = weights > 0.0
            atom_angles = atom_angles[keep]
            if atom_angles.size:
                weights = np.maximum(_fit_circle_weights(atom_angles, targets), 0.0)
            else:
                weights = np.zeros(0)
        keep = weights > prune
        atom_angles, weights = atom_angles[keep], weights[keep]

    if uniform > prune:
        offset = _equispaced_offset(atom_angles, m)
        extra = offset + np.arange(m + 1) * (2.0 * np.pi / (m + 1))
        atom_angles = np.concatenate([atom_angles, extra])
        weights = np.concatenate([weights, np.full(m + 1, uniform / (m + 1))])

    return _unit_measure(atom_angles, weights, 1)


# ---------------------------------------------------------------------------
# several variables: candidate grid, nonnegative least squares, refinement
# ---------------------------------------------------------------------------


def _nnls(A: np.ndarray, b: np.ndarray) -> np.ndarray:
    try:
        w, _ = _scipy_nnls(A, b, maxiter=max(10 * A.shape[1], 1000))
    except RuntimeError as exc:
        raise NNLSStall(str(exc)) from exc
    return w


def _design(karr: np.ndarray, angles: np.ndarray) -> np.ndarray:
    """Real design matrix: one row per frequency component (imaginary rows
    are dropped for frequencies whose target is forced real)."""
    phases = karr.astype(float) @ angles.T
    E = np.exp(1j * phases)
    rows = []
    for h, k in enumerate(karr):
        rows.append(E[h].real)
        if np.any(k):
            rows.append(E[h].imag)
    return np.array(rows)


def _stack_targets(karr: np.ndarray, targets: np.ndarray) -> np.ndarray:
    out = []
    for h, k in enumerate(karr):
        out.append(targets[h].real)
        if np.any(k):
            out.append(targets[h].imag)
    return np.array(out)


def grid_nnls(
    table: FourierTable,
    grid: int,
    *,
    weight_prune: float | None = None,
    seed: int = 0,
    greedy_rounds: int = 64,
) -> AtomicMeasure:
    """Coarse torus measure from nonnegative least squares over candidates.

    For one or two variables the candidates are the full product grid of
    `grid` equispaced angles per dimension; beyond that the full grid is
    intractable, so `grid` seeded random angle vectors are used and atoms
    are inserted greedily (best correlation with the running residual,
    then a fresh nonnegative fit).  Weights below the prune threshold are
    dropped.
    """
    if grid < 1:
        raise ValueError("grid must be at least 1")
    n = table.n
    prune = weight_prune if weight_prune is not None else 1e-12 * max(1.0, table.mass)
    karr = _half_box(n, table.radius)
    targets = _table_targets(table, karr)
    if float(np.max(np.abs(targets))) <= prune:
        return AtomicMeasure.empty(n)
    b = _stack_targets(karr, targets)

    if n <= 2:
        line = 2.0 * np.pi * np.arange(grid) / grid
        angles = np.array(list(itertools.product(line, repeat=n)))
        weights = _nnls(_design(karr, angles), b)
    else:
        rng = np.random.default_rng(seed)
        angles = rng.uniform(0.0, 2.0 * np.pi, size=(grid, n))
        A = _design(karr, angles)
        weights = _nnls(A, b)
        resid = b - A @ weights
        floor = 1e-12 * max(1.0, float(np.linalg.norm(b)))
        for _ in range(greedy_rounds):
            if float(np.linalg.norm(resid)) <= floor:
                break
            pool = rng.uniform(0.0, 2.0 * np.pi, size=(grid, n))
            gain = np.abs(_design(karr, pool).T @ resid)
            best = pool[int(np.argmax(gain))]
            angles = np.vstack([angles, best])
            A = np.hstack([A, _design(karr, best[None, :])])
            weights = _nnls(A, b)
            resid = b - A @ weights

    keep = weights > prune
    return _unit_measure(angles[keep], weights[keep], n)


def refine(
    measure: AtomicMeasure,
    table: FourierTable,
    config: SolverConfig | None = None,
    *,
    weight_base: float | None = None,
) -> AtomicMeasure:
    """Jointly polish atom angles and weights by damped Gauss-Newton.

    Minimizes the squared residual against the Fourier table over the
    canonical half box, each frequency weighted by weight_base**|k| so the
    objective tracks the original moment magnitudes.  Weights are clamped
    nonnegative after every step and atoms stuck at zero weight for three
    accepted steps are removed.  Returns the input untouched when it
    already meets the target; raises ConvergenceFailure at the iteration
    cap otherwise.
    """
    cfg = config if config is not None else SolverConfig()
    n = table.n
    tol = cfg.resolved_tol(n)
    base = weight_base if weight_base is not None else table.scale

    karr = _half_box(n, table.radius)
    kfloat = karr.astype(float)
    factors = base ** np.abs(karr).sum(axis=1)
    targets = _table_targets(table, karr)
    scale = max(1.0, float(np.max(factors * np.abs(targets))))
    imag_keep = np.any(karr, axis=1)

    def stacked(values: np.ndarray) -> np.ndarray:
        return np.concatenate([values.real, values.imag[imag_keep]])

    angles = np.angle(measure.atoms).reshape(-1, n).copy()
    weights = measure.weights.copy()

    def gap(a: np.ndarray, w: np.ndarray) -> np.ndarray:
        return factors * (_trig_moments(a, w, karr) - targets)

    def max_resid(g: np.ndarray) -> float:
        return float(np.max(np.abs(g))) if g.size else 0.0

    def weighted_design(a: np.ndarray) -> np.ndarray:
        E = np.exp(1j * (kfloat @ a.T)) * factors[:, None]
        return np.vstack([E.real, E.imag[imag_keep]])

    current = gap(angles, weights)
    if max_resid(current) <= tol * scale:
        return measure
    if len(weights) == 0:
        raise ConvergenceFailure("no atoms to refine and residual above target")

    b = stacked(factors * targets)
    r = stacked(current)
    cost = float(r @ r)
    damping = 1e-3
    streak = np.zeros(len(weights), dtype=int)

    for _ in range(cfg.max_refine_iters):
        # exact weight block first (weights enter linearly, so the
        # constrained fit never increases the cost and zeroes out atoms
        # made redundant by clustering)
        refit = _nnls(weighted_design(angles), b)
        r_refit = stacked(gap(angles, refit))
        cost_refit = float(r_refit @ r_refit)
        if cost_refit <= cost:
            weights, r, cost = refit, r_refit, cost_refit

        streak = np.where(weights == 0.0, streak + 1, 0)
        if np.any(streak >= 3):
            keep = streak < 3
            weights, angles, streak = weights[keep], angles[keep], streak[keep]
            r = stacked(gap(angles, weights))
            cost = float(r @ r)
        if len(weights) == 0:
            break
        if max_resid(gap(angles, weights)) <= tol * scale:
            return _unit_measure(angles, weights, n)

        count = len(weights)
        phases = kfloat @ angles.T
        E = np.exp(1j * phases) * factors[:, None]
        cols = [E]
        for j in range(n):
            cols.append(E * (1j * kfloat[:, j:j + 1]) * weights[None, :])
        Jc = np.hstack(cols)
        J = np.vstack([Jc.real, Jc.imag[imag_keep]])
        H = J.T @ J
        g = J.T @ r
        diag = np.diag(H).copy()
        diag[diag <= 0.0] = 1.0

        accepted = False
        for _ in range(25):
            try:
                step = np.linalg.solve(H + damping * np.diag(diag), -g)
            except np.linalg.LinAlgError:
                damping = min(damping * 10.0, 1e12)
                continue
            w_try = np.maximum(weights + step[:count], 0.0)
            a_try = angles + step[count:].reshape(n, count).T
            g_try = gap(a_try, w_try)
            r_try = stacked(g_try)
            cost_try = float(r_try @ r_try)
            if cost_try < cost:
                weights, angles, r, cost = w_try, a_try, r_try, cost_try
                damping = max(damping * 0.3, 1e-12)
                accepted = True
                break
            damping = min(damping * 10.0, 1e12)
        if not accepted:
            break
        if max_resid(gap(angles, weights)) <= tol * scale:
            return _unit_measure(angles, weights, n)

    raise ConvergenceFailure(
        f"refinement stalled at residual {max_resid(gap(angles, weights)):.3e}"
        f" (target {tol * scale:.3e})"
    )


# ---------------------------------------------------------------------------
# end-to-end synthesis
# ---------------------------------------------------------------------------


def _prescale_factor(espec: EmbeddedSpec, mass_relative: bool = False) -> float:
    """Dilation factor that tames the moment magnitudes.

    The mass-relative variant balances each moment against sqrt(mass),
    which keeps the synthesized torus radius small enough that monomial
    sums do not cancel catastrophically when the mass is tiny.
    """
    ref = float(np.sqrt(espec.mass.real)) if mass_relative else 1.0
    best = 0.0
    for k, v in zip(espec.box, np.asarray(espec.values)):
        total = sum(k)
        if total and abs(v) > 0.0:
            best = max(best, float(abs(v) / ref) ** (1.0 / total))
    if best == 0.0:
        return 1.0
    return float(np.clip(best, 1e-3, 1e3))


def _rescaled(espec: EmbeddedSpec, factor: float) -> EmbeddedSpec:
    powers = np.array([sum(k) for k in espec.box], dtype=float)
    values = np.asarray(espec.values) / factor ** powers
    return EmbeddedSpec(espec.n, espec.degree, espec.box, values)


def synthesize(spec: MomentSpec, config: SolverConfig | None = None) -> AtomicMeasure:
    """Solve a truncated moment problem by an explicit atomic measure.

    Gates on solvability (Unsolvable otherwise; the zero spec returns the
    zero measure), builds the commuting contraction tuple and its Fourier
    table, then synthesizes torus atoms: the exact Toeplitz splitting for
    one variable, candidate-grid nonnegative least squares plus refinement
    beyond.  When a stage misses the residual target the candidate grid is
    doubled, twice, and the moment pre-scaling is re-tried in its other
    parametrizations before giving up.

    The returned measure's moments match the spec within
    tol * max(1, largest prescribed magnitude).
    """
    cfg = config if config is not None else SolverConfig()
    verdict = solvability(spec)
    if verdict.is_zero:
        return solve_zero(spec)
    if verdict.is_unsolvable:
        raise Unsolvable(verdict.reason)

    n = spec.n
    tol = cfg.resolved_tol(n)
    espec = embed(spec, cfg.box_degree)
    scale = max(1.0, float(np.max(np.abs(espec.values))))
    prune = cfg.weight_prune if cfg.weight_prune is not None else 1e-12 * spec.mass.real
    target_cfg = cfg if cfg.tol is not None else replace(cfg, tol=tol)

    plain = 1.0
    magnitude = _prescale_factor(espec)
    balanced = _prescale_factor(espec, mass_relative=True)
    if cfg.normalize is True:
        factor_ladder = [magnitude, balanced]
    elif cfg.normalize is False:
        factor_ladder = [plain]
    else:
        # later rungs are fallbacks: poorly scaled data can sit at the edge
        # of double precision in one parametrization and be comfortable in
        # another
        preferred = [magnitude, plain] if n >= 2 else [plain, magnitude]
        factor_ladder = preferred + [balanced]
    factors = []
    for f in factor_ladder:
        if f not in factors:
            factors.append(f)

    failure: SolverError | None = None
    for factor in factors:
        ops = build_tuple(_rescaled(espec, factor), margin=cfg.margin)
        radius = cfg.m if cfg.m is not None else ops.degree
        table = fourier_table(ops, radius)
        atom_radius = ops.scale * factor

        def finish(unit: AtomicMeasure) -> AtomicMeasure | None:
            atoms = atom_radius * np.exp(1j * np.angle(unit.atoms))
            candidate = AtomicMeasure(n, atoms, unit.weights, scale=atom_radius)
            if report(spec, candidate).max_residual <= tol * scale:
                return candidate
            return None

        stages = []
        if n == 1:
            def cf_stage(t=table, r=radius) -> AtomicMeasure:
                line = [t.value((j,)) for j in range(r + 1)]
                return cf_atoms_1d(line, tol=1e-8 * max(1.0, t.mass), weight_prune=prune)

            stages.append(cf_stage)
        for points in (cfg.grid, 2 * cfg.grid, 4 * cfg.grid):
            stages.append(
                lambda g=points, t=table: grid_nnls(t, g, weight_prune=prune, seed=cfg.seed)
            )

        for stage in stages:
            try:
                unit = stage()
            except SolverError as exc:
                failure = exc
                continue
            done = finish(unit)
            if done is not None:
                return done
            try:
                unit = refine(unit, table, target_cfg, weight_base=atom_radius)
            except SolverError as exc:
                failure = exc
                continue
            done = finish(unit)
            if done is not None:
                return done
            failure = ConvergenceFailure("refined measure still misses the residual target")
    message = "synthesis could not reach the residual target"
    raise ConvergenceFailure(f"{message}: {failure}" if failure else message)
