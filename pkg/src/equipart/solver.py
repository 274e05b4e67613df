"""Numerical construction of witness arrangements.

Given sampled masses and an instance, searches (S^d)^k for k hyperplanes
meeting the cascade, orthogonality and containment conditions.  The
criterion in `certify` guarantees existence for certified instances but
gives no construction, so this is a best-effort multi-start optimizer:

  * raw parameters are one unnormalized vector in R^(d+1) per hyperplane;
  * orthogonality pairs and containment points are eliminated exactly
    during assembly (normals projected onto the admissible subspace,
    offsets pinned through the prescribed points), so those residual
    blocks sit at machine precision throughout;
  * the equipartition block is annealed: orthant indicators are smoothed
    by logistics of signed distance at temperature tau, tau falling
    geometrically, followed by a derivative-free polish on the hard
    objective (region masses of a point cloud are piecewise constant, so
    gradient methods get no signal there).

Failure to converge is reported via success=False on the witness, never
as an exception.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import minimize

from .exceptions import ConfigurationError, EquipartError, ShapeError
from .masses import HyperplaneParam, SampledMass, parse_label, region_masses
from .problems import ConstraintProblem

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class SolverConfig:
    seed: int = 0
    starts: int = 32
    tol: float = 1e-3
    tau_stages: int = 40
    tau_init_factor: float = 0.5
    tau_final: float = 1e-3
    anneal_maxiter: int = 25
    anneal_subsample: int = 20_000
    anneal_full_tail: int = 8
    tau_handoff_factor: float = 0.02
    polish_maxiter: int = 400
    stop_on_success: bool = True
    jobs: int = 1
    eq_weight: float = 1.0
    ortho_weight: float = 1.0
    containment_weight: float = 1.0
    tie_eps: float = 1e-12
    min_normal_norm: float = 1e-6
    degenerate_tol: float = 1e-6
    max_degenerate_restarts: int = 3
    use_seeded_starts: bool = True

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "starts": self.starts,
            "tol": self.tol,
            "tau_stages": self.tau_stages,
            "tau_init_factor": self.tau_init_factor,
            "tau_final": self.tau_final,
            "anneal_maxiter": self.anneal_maxiter,
            "anneal_subsample": self.anneal_subsample,
            "anneal_full_tail": self.anneal_full_tail,
            "tau_handoff_factor": self.tau_handoff_factor,
            "polish_maxiter": self.polish_maxiter,
            "stop_on_success": self.stop_on_success,
            "jobs": self.jobs,
            "eq_weight": self.eq_weight,
            "ortho_weight": self.ortho_weight,
            "containment_weight": self.containment_weight,
            "tie_eps": self.tie_eps,
            "min_normal_norm": self.min_normal_norm,
            "degenerate_tol": self.degenerate_tol,
            "max_degenerate_restarts": self.max_degenerate_restarts,
            "use_seeded_starts": self.use_seeded_starts,
        }


@dataclass
class MassArrangementWitness:
    """Hyperplane arrangement plus its per-condition residual breakdown.

    Equipartition residuals are per orthant, normalized by each mass's
    total; orthogonality residuals are cosines between normals;
    containment residuals are signed point-to-hyperplane distances.
    """

    hyperplanes: tuple[HyperplaneParam, ...]
    equipartition: dict[str, tuple[float, ...]]
    orthogonality: dict[str, float]
    containment: tuple[dict, ...]
    objective: float
    evaluation_mode: str
    success: bool | None = None
    seed: int | None = None
    config: dict | None = None
    diagnostics: dict | None = field(default=None)

    def max_equipartition_residual(self) -> float:
        worst = 0.0
        for vals in self.equipartition.values():
            for v in vals:
                worst = max(worst, abs(v))
        return worst

    def max_orthogonality_residual(self) -> float:
        return max((abs(v) for v in self.orthogonality.values()), default=0.0)

    def max_containment_residual(self) -> float:
        return max((abs(c["residual"]) for c in self.containment), default=0.0)

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "hyperplanes": [h.to_dict() for h in self.hyperplanes],
            "residuals": {
                "equipartition": {k: list(v) for k, v in self.equipartition.items()},
                "orthogonality": dict(self.orthogonality),
                "containment": [dict(c) for c in self.containment],
            },
            "objective": self.objective,
            "evaluation_mode": self.evaluation_mode,
            "success": self.success,
            "seed": self.seed,
            "config": self.config,
            "diagnostics": self.diagnostics,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


# ----------------------------------------------------------------------
# input organization
# ----------------------------------------------------------------------
def _organize_masses(
    problem: ConstraintProblem, masses: Sequence[SampledMass]
) -> dict[tuple[int, int], SampledMass]:
    got = {}
    for mass in masses:
        key = parse_label(mass.label)
        if key in got:
            raise ConfigurationError(f"duplicate mass label {mass.label!r}")
        got[key] = mass
    want = {
        (i, j)
        for i in range(1, problem.k + 1)
        for j in range(1, problem.m[i - 1] + 1)
    }
    if set(got) != want:
        raise ConfigurationError(
            f"mass labels {sorted(got)} do not match the cascade vector "
            f"m={problem.m} (expected {sorted(want)})"
        )
    dims = {mass.dim for mass in masses}
    if len(dims) > 1:
        raise ShapeError(f"masses live in different dimensions: {sorted(dims)}")
    return got


def _organize_points(
    problem: ConstraintProblem, points: Sequence, d: int
) -> dict[int, list[np.ndarray]]:
    per: dict[int, list[np.ndarray]] = {i: [] for i in range(1, problem.k + 1)}
    for entry in points:
        if isinstance(entry, dict):
            i, coords = int(entry["hyperplane"]), entry["coords"]
        else:
            i, coords = int(entry[0]), entry[1]
        if not 1 <= i <= problem.k:
            raise ConfigurationError(f"containment point for hyperplane {i} out of range")
        p = np.asarray(coords, dtype=float)
        if p.shape != (d,):
            raise ShapeError(f"containment point {p} is not in R^{d}")
        per[i].append(p)
    for i in range(1, problem.k + 1):
        if len(per[i]) != problem.a[i - 1]:
            raise ConfigurationError(
                f"hyperplane {i} needs {problem.a[i - 1]} containment point(s), "
                f"got {len(per[i])}"
            )
    return per


# ----------------------------------------------------------------------
# assembly with exact constraint elimination
# ----------------------------------------------------------------------
def assemble_hyperplanes(
    raw: np.ndarray,
    problem: ConstraintProblem,
    cont_points: dict[int, list[np.ndarray]],
    min_normal_norm: float = 1e-6,
) -> list[HyperplaneParam] | None:
    """Turn raw (k, d+1) parameters into hyperplanes satisfying every
    orthogonality pair and containment point exactly.  Returns None when a
    projection collapses the normal (degenerate raw input)."""
    k = problem.k
    d = raw.shape[1] - 1
    unit_normals: list[np.ndarray] = []
    planes: list[HyperplaneParam] = []
    for i in range(1, k + 1):
        n = raw[i - 1, :d].astype(float).copy()
        constraints = [unit_normals[r - 1] for (r, s) in problem.ortho if s == i]
        pts = cont_points.get(i, [])
        constraints.extend(p - pts[0] for p in pts[1:])
        if constraints:
            basis = np.stack(constraints, axis=1)
            q, _ = np.linalg.qr(basis)
            n = n - q @ (q.T @ n)
        nn = np.linalg.norm(n)
        if nn < 1e-9:
            return None
        offset = float(n @ pts[0]) if pts else float(raw[i - 1, d])
        v = np.append(n, offset)
        v = v / np.linalg.norm(v)
        if np.linalg.norm(v[:d]) < min_normal_norm:
            return None
        unit_normals.append(v[:d] / np.linalg.norm(v[:d]))
        planes.append(HyperplaneParam(v))
    return planes


def _coincident(planes: Sequence[HyperplaneParam], tol: float) -> bool:
    for i in range(len(planes)):
        for j in range(i + 1, len(planes)):
            a, b = planes[i].vector, planes[j].vector
            if min(np.linalg.norm(a - b), np.linalg.norm(a + b)) < tol:
                return True
    return False


# ----------------------------------------------------------------------
# residual evaluation
# ----------------------------------------------------------------------
def residuals(
    problem: ConstraintProblem,
    masses: Sequence[SampledMass],
    hyperplanes: Sequence[HyperplaneParam],
    points: Sequence = (),
    mode: str = "hard",
    tau: float | None = None,
    config: SolverConfig | None = None,
) -> MassArrangementWitness:
    """Evaluate every condition of the instance at a given arrangement."""
    cfg = config or SolverConfig()
    if len(hyperplanes) != problem.k:
        raise ShapeError(f"expected {problem.k} hyperplanes, got {len(hyperplanes)}")
    by_key = _organize_masses(problem, masses)
    d = hyperplanes[0].dim
    for h in hyperplanes:
        if h.dim != d:
            raise ShapeError("hyperplanes live in different dimensions")
    cont = _organize_points(problem, points, d)

    equip: dict[str, tuple[float, ...]] = {}
    objective = 0.0
    for (i, j), mass in sorted(by_key.items()):
        share = 2.0 ** -(problem.k - i + 1)
        regions = region_masses(mass, hyperplanes, i, mode=mode, tau=tau, tie_eps=cfg.tie_eps)
        dev = regions / mass.total - share
        equip[f"{i}.{j}"] = tuple(float(x) for x in dev)
        objective += cfg.eq_weight * float(np.dot(dev, dev))

    ortho: dict[str, float] = {}
    for r, s in sorted(problem.ortho):
        a, b = hyperplanes[r - 1].normal, hyperplanes[s - 1].normal
        cosine = float(a @ b / (np.linalg.norm(a) * np.linalg.norm(b)))
        ortho[f"{r}-{s}"] = cosine
        objective += cfg.ortho_weight * cosine**2

    containment: list[dict] = []
    for i in range(1, problem.k + 1):
        h = hyperplanes[i - 1]
        scale = float(np.linalg.norm(h.normal))
        for p in cont[i]:
            r = float((p @ h.normal - h.offset) / scale)
            containment.append(
                {"hyperplane": i, "point": [float(x) for x in p], "residual": r}
            )
            objective += cfg.containment_weight * r**2

    return MassArrangementWitness(
        hyperplanes=tuple(hyperplanes),
        equipartition=equip,
        orthogonality=ortho,
        containment=tuple(containment),
        objective=objective,
        evaluation_mode=mode,
    )


def _objective_only(
    x: np.ndarray,
    problem: ConstraintProblem,
    by_key: dict[tuple[int, int], SampledMass],
    cont: dict[int, list[np.ndarray]],
    d: int,
    mode: str,
    tau: float | None,
    cfg: SolverConfig,
) -> float:
    planes = assemble_hyperplanes(
        x.reshape(problem.k, d + 1), problem, cont, cfg.min_normal_norm
    )
    if planes is None:
        return 1e9
    total = 0.0
    for (i, j), mass in by_key.items():
        share = 2.0 ** -(problem.k - i + 1)
        regions = region_masses(mass, planes, i, mode=mode, tau=tau, tie_eps=cfg.tie_eps)
        dev = regions / mass.total - share
        total += cfg.eq_weight * float(np.dot(dev, dev))
    for r, s in problem.ortho:
        a, b = planes[r - 1].normal, planes[s - 1].normal
        cosine = float(a @ b / (np.linalg.norm(a) * np.linalg.norm(b)))
        total += cfg.ortho_weight * cosine**2
    for i in range(1, problem.k + 1):
        h = planes[i - 1]
        scale = float(np.linalg.norm(h.normal))
        for p in cont[i]:
            total += cfg.containment_weight * float((p @ h.normal - h.offset) / scale) ** 2
    return total


def _data_diameter(masses: Sequence[SampledMass]) -> float:
    lo = np.min([m.points.min(axis=0) for m in masses], axis=0)
    hi = np.max([m.points.max(axis=0) for m in masses], axis=0)
    return max(float(np.linalg.norm(hi - lo)), 1e-6)


def _subsample(mass: SampledMass, cap: int) -> SampledMass:
    """Deterministic stride subsample for the annealing phase.  The points
    are exchangeable, so striding is an unbiased reduction; every reported
    residual is still computed on the full sample."""
    n = mass.points.shape[0]
    if cap <= 0 or n <= cap:
        return mass
    stride = -(-n // cap)
    return SampledMass(
        points=mass.points[::stride],
        weights=mass.weights[::stride],
        label=mass.label,
        generator=mass.generator,
    )


def _seeded_raw(
    problem: ConstraintProblem,
    by_key: dict[tuple[int, int], SampledMass],
    rng: np.random.Generator,
    d: int,
) -> np.ndarray:
    """Mass-informed start: every solution hyperplane l must individually
    bisect each mass of stages 1..l, and bisecting hyperplanes run near
    mass means, so seed hyperplane l through those means (exactly, for up
    to d of them), leaving the remaining directions random."""
    raw = rng.standard_normal((problem.k, d + 1))
    means = {key: mass.points.mean(axis=0) for key, mass in by_key.items()}
    for plane in range(1, problem.k + 1):
        pts = [means[key] for key in sorted(means) if key[0] <= plane]
        if not pts:
            continue
        base = pts[0]
        dirs = [p - base for p in pts[1:]][: d - 1]
        n = raw[plane - 1, :d].copy()
        if dirs:
            q, _ = np.linalg.qr(np.stack(dirs, axis=1))
            n = n - q @ (q.T @ n)
        if np.linalg.norm(n) < 1e-9:
            continue
        raw[plane - 1, :d] = n
        raw[plane - 1, d] = n @ base
    return raw / np.linalg.norm(raw, axis=1, keepdims=True)


def _run_start(args) -> tuple[int, float, np.ndarray, int]:
    """One multi-start trajectory; returns (start index, hard objective,
    final raw parameters, degenerate-restart count)."""
    (start, problem, masses, points, cfg, d, head_taus, tail_taus) = args
    by_key = _organize_masses(problem, masses)
    anneal_key = {
        key: _subsample(mass, cfg.anneal_subsample) for key, mass in by_key.items()
    }
    cont = _organize_points(problem, points, d)
    rng = np.random.default_rng(np.random.SeedSequence(entropy=cfg.seed, spawn_key=(0, start)))
    seeded = cfg.use_seeded_starts and start % 2 == 0
    restarts = 0
    while True:
        if seeded:
            raw = _seeded_raw(problem, by_key, rng, d)
        else:
            raw = rng.standard_normal((problem.k, d + 1))
            raw /= np.linalg.norm(raw, axis=1, keepdims=True)
        x = raw.ravel()
        # Cheap subsampled annealing locates the basin; the tail of the
        # schedule reruns on the full sample, starting back up at the
        # handoff temperature so the smooth landscape can carry the
        # iterate across the subsample discrepancy before the
        # derivative-free polish snaps it onto the hard optimum.  Seeded
        # starts are already structured, so they skip the hot exploration
        # phase that would only wash the seed out.
        head = head_taus[-min(6, len(head_taus)) :] if seeded else head_taus
        schedule = [(tau, anneal_key, cfg.anneal_maxiter) for tau in head]
        schedule += [(tau, by_key, 2 * cfg.anneal_maxiter) for tau in tail_taus]
        # Intermediate temperatures are deliberately left under-converged
        # (default NM tolerances): over-polishing each tau traps the
        # iterate; the schedule itself does the converging.
        for tau, keys, maxiter in schedule:
            res = minimize(
                _objective_only,
                x,
                args=(problem, keys, cont, d, "smoothed", float(tau), cfg),
                method="Nelder-Mead",
                options={"maxiter": maxiter, "adaptive": True},
            )
            x = res.x
        res = minimize(
            _objective_only,
            x,
            args=(problem, by_key, cont, d, "hard", None, cfg),
            method="Nelder-Mead",
            options={"maxiter": cfg.polish_maxiter, "xatol": 1e-10, "fatol": 1e-14, "adaptive": True},
        )
        x = res.x
        planes = assemble_hyperplanes(x.reshape(problem.k, d + 1), problem, cont, cfg.min_normal_norm)
        if planes is not None and not _coincident(planes, cfg.degenerate_tol):
            break
        restarts += 1
        if restarts > cfg.max_degenerate_restarts:
            break
    value = _objective_only(x, problem, by_key, cont, d, "hard", None, cfg)
    return (start, float(value), x, restarts)


def solve(
    problem: ConstraintProblem,
    masses: Sequence[SampledMass],
    points: Sequence = (),
    config: SolverConfig | None = None,
) -> MassArrangementWitness:
    """Search for a witness arrangement; never raises on non-convergence.

    Multi-start annealed optimization; starts are tried in index order with
    independent RNG streams derived from the master seed, so a fixed
    (seed, config) reproduces the identical witness, with or without
    parallelism.  success means the hard objective beat config.tol.
    """
    cfg = config or SolverConfig()
    if not masses:
        raise ConfigurationError("solve needs at least one sampled mass")
    by_key = _organize_masses(problem, masses)
    d = masses[0].dim
    cont = _organize_points(problem, points, d)
    diameter = _data_diameter(masses)
    tau0 = max(cfg.tau_init_factor * diameter, cfg.tau_final)
    handoff = min(max(cfg.tau_handoff_factor * diameter, cfg.tau_final), tau0)
    tail_n = min(cfg.anneal_full_tail, cfg.tau_stages)
    head_n = cfg.tau_stages - tail_n
    head_taus = np.geomspace(tau0, handoff, head_n) if head_n else np.array([])
    tail_taus = np.geomspace(handoff, cfg.tau_final, tail_n) if tail_n else np.array([])

    results: list[tuple[int, float, np.ndarray, int]] = []
    jobs = max(1, cfg.jobs)

    def arg_for(s: int):
        return (s, problem, list(masses), list(points), cfg, d, head_taus, tail_taus)

    if jobs == 1:
        for s in range(cfg.starts):
            out = _run_start(arg_for(s))
            results.append(out)
            if cfg.stop_on_success and out[1] < cfg.tol:
                break
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            stop = False
            for chunk_lo in range(0, cfg.starts, jobs):
                chunk = list(range(chunk_lo, min(chunk_lo + jobs, cfg.starts)))
                for out in pool.map(_run_start, [arg_for(s) for s in chunk]):
                    results.append(out)
                    if cfg.stop_on_success and out[1] < cfg.tol:
                        stop = True
                        break
                if stop:
                    break

    # Best objective wins; ties break toward the earlier start index.
    best = min(results, key=lambda t: (t[1], t[0]))
    start, value, x, _ = best
    planes = assemble_hyperplanes(
        x.reshape(problem.k, d + 1), problem, cont, cfg.min_normal_norm
    )
    if planes is None:
        # Fall back to the unprojected raw parameters (axis planes where
        # even those degenerate) so a witness always exists; its residuals
        # then report the failure honestly.
        planes = []
        raw = x.reshape(problem.k, d + 1)
        for i, row in enumerate(raw):
            try:
                planes.append(HyperplaneParam(row / np.linalg.norm(row)))
            except EquipartError:
                axis = np.zeros(d + 1)
                axis[i % d] = 1.0
                planes.append(HyperplaneParam(axis))
    witness = residuals(problem, masses, planes, points, mode="hard", config=cfg)
    witness.success = bool(witness.objective < cfg.tol)
    witness.seed = cfg.seed
    witness.config = cfg.to_dict()
    witness.diagnostics = {
        "starts_run": len(results),
        "best_start": start,
        "degenerate_restarts": int(sum(r[3] for r in results)),
    }
    return witness
