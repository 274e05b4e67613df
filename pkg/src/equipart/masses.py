"""Sampled masses and hyperplane geometry.

A mass is a weighted point cloud standing in for an absolutely continuous
measure.  A hyperplane is a unit vector (normal, offset) in R^(d+1); the
two closed half-spaces are side 0 = {<u, normal> >= offset} and side 1 =
its complement.  Near-zero normals would describe the degenerate
"hyperplane at infinity" and are rejected.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.special import expit

from .exceptions import ConfigurationError, RangeError, ShapeError

TIE_EPS = 1e-12
MIN_NORMAL_NORM = 1e-6
UNIT_TOL = 1e-12


@dataclass(frozen=True)
class HyperplaneParam:
    """A point of S^d parameterizing a hyperplane in R^d."""

    vector: np.ndarray  # length d+1: (normal, offset)

    def __post_init__(self) -> None:
        v = np.asarray(self.vector, dtype=float)
        if v.ndim != 1 or v.size < 2:
            raise ShapeError("hyperplane parameter must be a vector in R^(d+1), d >= 1")
        if not np.isfinite(v).all():
            raise RangeError(f"hyperplane parameter has non-finite entries: {v!r}")
        norm = float(np.linalg.norm(v))
        if abs(norm - 1.0) > UNIT_TOL:
            raise RangeError(f"hyperplane parameter must be unit length, |v| = {norm!r}")
        if float(np.linalg.norm(v[:-1])) < MIN_NORMAL_NORM:
            raise RangeError("normal part is numerically zero (hyperplane at infinity)")
        v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "vector", v)

    @classmethod
    def of(cls, normal: Sequence[float], offset: float) -> "HyperplaneParam":
        v = np.append(np.asarray(normal, dtype=float), float(offset))
        n = np.linalg.norm(v)
        if n == 0:
            raise RangeError("zero hyperplane parameter")
        return cls(v / n)

    @property
    def dim(self) -> int:
        return self.vector.size - 1

    @property
    def normal(self) -> np.ndarray:
        return self.vector[:-1]

    @property
    def offset(self) -> float:
        return float(self.vector[-1])

    def signed_distances(self, points: np.ndarray) -> np.ndarray:
        return points @ self.normal - self.offset

    def to_dict(self) -> dict:
        return {"normal": [float(x) for x in self.normal], "offset": self.offset}


@dataclass
class SampledMass:
    """Weighted point cloud; label "i.j" ties it to stage i, index j."""

    points: np.ndarray
    weights: np.ndarray
    label: str
    generator: dict | None = field(default=None)

    def __post_init__(self) -> None:
        pts = np.asarray(self.points, dtype=float)
        w = np.asarray(self.weights, dtype=float)
        if pts.ndim != 2 or pts.shape[0] < 1:
            raise ShapeError("points must be a non-empty (N, d) array")
        if w.shape != (pts.shape[0],):
            raise ShapeError("weights must be a length-N vector")
        if not (w > 0).all():
            raise ConfigurationError("all weights must be positive")
        pts = pts.copy()
        w = w.copy()
        pts.flags.writeable = False
        w.flags.writeable = False
        self.points = pts
        self.weights = w

    @property
    def dim(self) -> int:
        return int(self.points.shape[1])

    @property
    def total(self) -> float:
        return float(self.weights.sum())


def parse_label(label: str) -> tuple[int, int]:
    """Split "i.j" into (stage, index)."""
    try:
        i, j = label.split(".")
        return int(i), int(j)
    except ValueError as exc:
        raise ConfigurationError(f"mass label {label!r} is not of the form 'i.j'") from exc


# ----------------------------------------------------------------------
# sampling
# ----------------------------------------------------------------------
def _component_cov(cov, d: int) -> np.ndarray:
    if cov is None or (isinstance(cov, str) and cov.upper() == "I"):
        return np.eye(d)
    if np.isscalar(cov):
        c = float(cov)
        if c <= 0:
            raise ConfigurationError(f"scalar covariance must be positive, got {c}")
        return c * np.eye(d)
    mat = np.asarray(cov, dtype=float)
    if mat.shape != (d, d):
        raise ConfigurationError(f"covariance must be {d}x{d}, got shape {mat.shape}")
    return mat


def sample_gaussian_mixture(
    mixture: Sequence[dict],
    n: int,
    seed,
    label: str = "1.1",
    total: float = 1.0,
) -> SampledMass:
    """Draw n points from a Gaussian mixture, each carrying weight total/n.

    `mixture` is a list of components {"mean": [...], "cov": "I"|scalar|
    matrix, "weight": positive}.  The same seed reproduces the identical
    point list.
    """
    if n < 1:
        raise ConfigurationError(f"need n >= 1 samples, got {n}")
    if not mixture:
        raise ConfigurationError("mixture must have at least one component")
    means = [np.asarray(c["mean"], dtype=float) for c in mixture]
    d = means[0].size
    if any(m.size != d for m in means):
        raise ConfigurationError("all component means must share a dimension")
    comp_w = np.array([float(c.get("weight", 1.0)) for c in mixture])
    if not (comp_w > 0).all():
        raise ConfigurationError("component weights must be positive")
    chols = []
    for c in mixture:
        cov = _component_cov(c.get("cov"), d)
        try:
            chols.append(np.linalg.cholesky(cov))
        except np.linalg.LinAlgError as exc:
            raise ConfigurationError("covariance is not positive definite") from exc

    rng = np.random.default_rng(seed)
    idx = rng.choice(len(mixture), size=n, p=comp_w / comp_w.sum())
    z = rng.standard_normal((n, d))
    mean_arr = np.stack(means)
    chol_arr = np.stack(chols)
    points = mean_arr[idx] + np.einsum("nij,nj->ni", chol_arr[idx], z)
    weights = np.full(n, total / n)
    return SampledMass(
        points=points,
        weights=weights,
        label=label,
        generator={"mixture": list(mixture), "N": n, "seed_repr": repr(seed)},
    )


# ----------------------------------------------------------------------
# region masses
# ----------------------------------------------------------------------
def load_mass_spec(
    spec: dict, master_seed: int
) -> tuple[int, list[SampledMass], list[dict]]:
    """Instantiate a mass-description document.

    Expects {"d": ..., "masses": [{"label": "i.j", "mixture": [...],
    "N": ...}, ...], "points": [{"hyperplane": i, "coords": [...]}, ...]}.
    Each mass gets its own RNG stream derived from the master seed, so the
    document plus one seed pins the whole sample set.
    """
    try:
        d = int(spec["d"])
        mass_specs = spec["masses"]
    except (KeyError, TypeError) as exc:
        raise ConfigurationError(f"mass spec missing required field: {exc}") from exc
    masses = []
    for idx, mspec in enumerate(mass_specs):
        seed = np.random.SeedSequence(entropy=master_seed, spawn_key=(1, idx))
        mass = sample_gaussian_mixture(
            mspec["mixture"],
            int(mspec["N"]),
            seed,
            label=str(mspec.get("label", f"1.{idx + 1}")),
            total=float(mspec.get("total", 1.0)),
        )
        if mass.dim != d:
            raise ConfigurationError(
                f"mass {mass.label!r} lives in R^{mass.dim}, spec says d={d}"
            )
        masses.append(mass)
    points = list(spec.get("points", []))
    return d, masses, points


def side_fractions(
    s: np.ndarray, mode: str = "hard", tau: float | None = None, tie_eps: float = TIE_EPS
) -> np.ndarray:
    """Per-point fraction of weight landing on side 0 of a hyperplane.

    Hard mode: 1 on side 0, 0 on side 1, 0.5 on a tie (|s| < tie_eps).
    Smoothed mode: logistic(s / tau).
    """
    if mode == "hard":
        return np.where(s > tie_eps, 1.0, np.where(s < -tie_eps, 0.0, 0.5))
    if mode == "smoothed":
        if tau is None or tau <= 0:
            raise ConfigurationError("smoothed mode needs tau > 0")
        return expit(s / tau)
    raise ConfigurationError(f"unknown evaluation mode {mode!r}")


def _hard_region_masses(
    S: np.ndarray, weights: np.ndarray, tie_eps: float
) -> np.ndarray:
    """Orthant weights from signed distances S of shape (N, n).  Points on
    a hyperplane (|s| <= tie_eps) split their weight evenly between the two
    sides; the common tie-free case is a single bincount."""
    n = S.shape[1]
    side1 = S < -tie_eps
    tied = np.abs(S) <= tie_eps
    idx = np.zeros(S.shape[0], dtype=np.intp)
    for j in range(n):
        idx |= side1[:, j].astype(np.intp) << j
    has_tie = tied.any(axis=1)
    out = np.bincount(
        idx[~has_tie], weights=weights[~has_tie], minlength=2**n
    ).astype(float)
    for p in np.nonzero(has_tie)[0]:
        tie_bits = [j for j in range(n) if tied[p, j]]
        share = weights[p] / 2 ** len(tie_bits)
        base = int(idx[p]) & ~sum(1 << j for j in tie_bits)
        for combo in range(2 ** len(tie_bits)):
            o = base
            for t, j in enumerate(tie_bits):
                if combo >> t & 1:
                    o |= 1 << j
            out[o] += share
    return out


def region_masses(
    mass: SampledMass,
    hyperplanes: Sequence[HyperplaneParam],
    stage: int,
    mode: str = "hard",
    tau: float | None = None,
    tie_eps: float = TIE_EPS,
) -> np.ndarray:
    """Mass of each orthant cut out by hyperplanes stage..k.

    Returns 2^(k-stage+1) values summing to the mass total.  Orthant index:
    bit j is the side of hyperplane stage+j, so index 0 is the all-side-0
    region and flipping one hyperplane's orientation flips one bit.
    """
    k = len(hyperplanes)
    if not 1 <= stage <= k:
        raise RangeError(f"stage {stage} out of range 1..{k}")
    for h in hyperplanes:
        if h.dim != mass.dim:
            raise ShapeError(f"hyperplane in R^{h.dim} against mass in R^{mass.dim}")
    planes = hyperplanes[stage - 1 :]
    S = np.empty((mass.points.shape[0], len(planes)))
    for j, h in enumerate(planes):
        S[:, j] = h.signed_distances(mass.points)
    if mode == "hard":
        return _hard_region_masses(S, mass.weights, tie_eps)
    table = mass.weights[:, None].astype(float)
    for j in range(len(planes)):
        f0 = side_fractions(S[:, j], mode, tau, tie_eps)
        table = np.hstack([table * f0[:, None], table * (1.0 - f0)[:, None]])
    return table.sum(axis=0)
