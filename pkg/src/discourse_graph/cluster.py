"""Gaussian mixture clustering of users by discourse word usage.

Mixtures are fit by expectation-maximization and compared with the
Bayesian information criterion over a grid of component counts and
covariance structures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from ._csvio import write_csv, write_json
from .errors import DataError
from .profiles import UserEpisodeProfile

__all__ = [
    "STRUCTURES",
    "TRANSFORMS",
    "FeatureMatrix",
    "GmmConfig",
    "GmmModel",
    "BicReport",
    "build_feature_matrix",
    "n_parameters",
    "fit_gmm",
    "log_likelihood",
    "bic",
    "select_model",
    "assign_clusters",
    "write_model",
    "write_bic_grid",
    "write_labels",
]

STRUCTURES = ("full", "tied", "diag", "spherical")
TRANSFORMS = ("raw", "log1p", "proportion")
_LOG_2PI = math.log(2.0 * math.pi)


@dataclass
class FeatureMatrix:
    users: list
    columns: list
    X: np.ndarray
    transform: str = "log1p"

    @property
    def shape(self) -> tuple:
        return self.X.shape


def build_feature_matrix(
    profiles: Iterable[UserEpisodeProfile],
    users: Sequence[str],
    lexicon_names: Sequence[str],
    transform: str = "log1p",
) -> FeatureMatrix:
    """One row per user holding whole-period discourse totals.

    ``proportion`` rows with no dictionary words become uniform ``1/d``.
    """
    if transform not in TRANSFORMS:
        raise ValueError(f"transform must be one of {TRANSFORMS}, got {transform!r}")
    if not users:
        raise DataError("feature matrix needs at least one user")
    names = list(lexicon_names)
    row_of = {u: i for i, u in enumerate(dict.fromkeys(users))}
    X = np.zeros((len(row_of), len(names)), dtype=np.float64)
    for p in profiles:
        i = row_of.get(p.user)
        if i is None:
            continue
        for j, name in enumerate(names):
            X[i, j] += p.counts.get(name, 0)
    if transform == "log1p":
        X = np.log1p(X)
    elif transform == "proportion":
        sums = X.sum(axis=1, keepdims=True)
        X = np.where(sums > 0, X / np.where(sums > 0, sums, 1.0), 1.0 / len(names))
    return FeatureMatrix(list(row_of), names, X, transform)


@dataclass
class GmmConfig:
    max_iter: int = 200
    tol: float = 1e-6
    reg: float = 1e-6
    seed: int = 0
    restarts: int = 5


@dataclass
class GmmModel:
    """Fitted mixture. ``covariances`` is always ``(K, d, d)``.

    Tied models repeat one matrix; diagonal and spherical models store
    their constrained matrices in full form.
    """

    structure: str
    weights: np.ndarray
    means: np.ndarray
    covariances: np.ndarray
    log_likelihood: float
    n_iter: int
    converged: bool
    history: list = field(default_factory=list)

    @property
    def n_components(self) -> int:
        return self.weights.shape[0]

    @property
    def n_features(self) -> int:
        return self.means.shape[1]

    def to_dict(self) -> dict:
        return {
            "K": self.n_components,
            "structure": self.structure,
            "weights": self.weights.tolist(),
            "means": self.means.tolist(),
            "covariances": self.covariances.tolist(),
            "log_likelihood": self.log_likelihood,
            "n_iter": self.n_iter,
            "converged": self.converged,
        }


def n_parameters(K: int, d: int, structure: str) -> int:
    """Free parameters: weights, means and covariance entries."""
    cov = {
        "full": K * d * (d + 1) // 2,
        "tied": d * (d + 1) // 2,
        "diag": K * d,
        "spherical": K,
    }
    if structure not in cov:
        raise ValueError(f"unknown covariance structure {structure!r}")
    return (K - 1) + K * d + cov[structure]


def _as_array(X) -> np.ndarray:
    A = X.X if isinstance(X, FeatureMatrix) else np.asarray(X, dtype=np.float64)
    if A.ndim == 1:
        A = A[:, None]
    if A.ndim != 2:
        raise DataError("feature matrix must be two-dimensional")
    if not np.all(np.isfinite(A)):
        raise DataError("feature matrix contains non-finite values")
    return A


def _log_gaussians(A: np.ndarray, means: np.ndarray, covs: np.ndarray) -> np.ndarray:
    d = A.shape[1]
    L = np.linalg.cholesky(covs)
    Linv = np.linalg.inv(L)
    z = np.einsum("kij,knj->kni", Linv, A[None, :, :] - means[:, None, :])
    logdet = 2.0 * np.log(np.diagonal(L, axis1=1, axis2=2)).sum(axis=1)
    return (-0.5 * (d * _LOG_2PI + logdet[:, None] + (z * z).sum(axis=2))).T


def _e_step(A, weights, means, covs):
    logp = _log_gaussians(A, means, covs) + np.log(weights)
    top = logp.max(axis=1, keepdims=True)
    norm = top[:, 0] + np.log(np.exp(logp - top).sum(axis=1))
    return float(norm.sum()), np.exp(logp - norm[:, None])


def _project(cov: np.ndarray, structure: str) -> np.ndarray:
    if structure in ("full", "tied"):
        return cov
    if structure == "diag":
        return np.diag(np.diag(cov))
    return np.eye(cov.shape[0]) * np.diag(cov).mean()


def _m_step(A, resp, structure, reg):
    n, d = A.shape
    nk = resp.sum(axis=0) + 10 * np.finfo(float).eps
    weights = nk / nk.sum()
    means = (resp.T @ A) / nk[:, None]
    diff = A[None, :, :] - means[:, None, :]  # (K, n, d)
    eye = np.eye(d)
    if structure in ("full", "tied"):
        scatter = np.einsum("nk,kni,knj->kij", resp, diff, diff)
        if structure == "tied":
            c = scatter.sum(axis=0) / n
            covs = np.broadcast_to((c + c.T) / 2 + reg * eye, scatter.shape).copy()
        else:
            c = scatter / nk[:, None, None]
            covs = (c + np.swapaxes(c, 1, 2)) / 2 + reg * eye
        return weights, means, covs
    var = np.einsum("nk,kni->ki", resp, diff * diff) / nk[:, None]
    if structure == "spherical":
        var = np.repeat(var.mean(axis=1, keepdims=True), d, axis=1)
    covs = np.einsum("ki,ij->kij", var + reg, eye)
    return weights, means, covs


def _kmeanspp(A: np.ndarray, K: int, rng: np.random.Generator) -> np.ndarray:
    n = A.shape[0]
    centers = [A[rng.integers(n)]]
    d2 = ((A - centers[0]) ** 2).sum(axis=1)
    for _ in range(1, K):
        total = d2.sum()
        if total > 0:
            idx = rng.choice(n, p=d2 / total)
        else:
            idx = rng.integers(n)
        centers.append(A[idx])
        d2 = np.minimum(d2, ((A - A[idx]) ** 2).sum(axis=1))
    return np.array(centers)


def _fit_once(A, K, structure, cfg: GmmConfig, rng) -> GmmModel:
    n, d = A.shape
    means = _kmeanspp(A, K, rng)
    weights = np.full(K, 1.0 / K)
    diff = A - A.mean(axis=0)
    data_cov = diff.T @ diff / n
    covs = np.repeat((_project(data_cov, structure) + cfg.reg * np.eye(d))[None], K, axis=0)
    ll, resp = _e_step(A, weights, means, covs)
    history = [ll]
    converged = False
    it = 0
    for it in range(1, cfg.max_iter + 1):
        weights, means, covs = _m_step(A, resp, structure, cfg.reg)
        new_ll, resp = _e_step(A, weights, means, covs)
        history.append(new_ll)
        improved = new_ll - ll
        ll = new_ll
        if improved < cfg.tol * abs(ll):
            converged = True
            break
    return GmmModel(structure, weights, means, covs, ll, it, converged, history)


def fit_gmm(X, K: int, structure: str = "full", config: Optional[GmmConfig] = None) -> GmmModel:
    """Fit a ``K``-component mixture by EM; keep the best of several restarts.

    Each restart seeds the means k-means++ style from its own generator
    (derived from ``config.seed`` and the restart number), starts with
    uniform weights and the data covariance, and iterates until the
    relative log-likelihood gain drops below ``config.tol``. ``config.reg``
    is added to every covariance diagonal.
    """
    cfg = config or GmmConfig()
    A = _as_array(X)
    n, d = A.shape
    if structure not in STRUCTURES:
        raise ValueError(f"unknown covariance structure {structure!r}")
    if K < 1 or n < K:
        raise DataError(f"need 1 <= K <= n, got K={K}, n={n}")
    best = None
    for restart in range(max(1, cfg.restarts)):
        rng = np.random.default_rng([cfg.seed, restart])
        model = _fit_once(A, K, structure, cfg, rng)
        if best is None or model.log_likelihood > best.log_likelihood:
            best = model
    return best


def log_likelihood(model: GmmModel, X) -> float:
    A = _as_array(X)
    ll, _ = _e_step(A, model.weights, model.means, model.covariances)
    return ll


def bic(model: GmmModel, X) -> float:
    """``p ln n - 2 ln L`` for the model evaluated on ``X``."""
    A = _as_array(X)
    p = n_parameters(model.n_components, A.shape[1], model.structure)
    return p * math.log(A.shape[0]) - 2.0 * log_likelihood(model, A)


@dataclass
class BicReport:
    grid: dict  # (K, structure) -> BIC
    selected: tuple

    def rows(self):
        for (K, structure), score in self.grid.items():
            yield K, structure, score


def select_model(
    X,
    k_range: Iterable[int] = range(1, 7),
    structures: Sequence[str] = STRUCTURES,
    config: Optional[GmmConfig] = None,
) -> tuple:
    """Fit every (K, structure) cell and return the minimum-BIC model.

    Cells that cannot be fit score ``+inf``. Ties go to the first cell in
    grid order (K ascending, then structure order).
    """
    A = _as_array(X)
    ks = list(k_range)
    if not ks:
        raise ValueError("k_range is empty")
    grid = {}
    best_model, best_key, best_score = None, None, math.inf
    for K in ks:
        for structure in structures:
            try:
                model = fit_gmm(A, K, structure, config)
                score = bic(model, A)
            except (DataError, np.linalg.LinAlgError, FloatingPointError):
                model, score = None, math.inf
            if not math.isfinite(score):
                score = math.inf
            grid[(K, structure)] = score
            if model is not None and score < best_score:
                best_model, best_key, best_score = model, (K, structure), score
    if best_model is None:
        raise DataError("no (K, structure) cell could be fit")
    return best_model, BicReport(grid, best_key)


def assign_clusters(model: GmmModel, X) -> tuple:
    """Posterior responsibilities ``(n, K)`` and argmax labels (lowest index on ties)."""
    A = _as_array(X)
    if A.shape[1] != model.n_features:
        raise DataError(f"model has {model.n_features} features, data has {A.shape[1]}")
    _, resp = _e_step(A, model.weights, model.means, model.covariances)
    return np.argmax(resp, axis=1), resp


def write_model(path, model: GmmModel, bic_score: float) -> None:
    data = model.to_dict()
    data["bic"] = bic_score
    write_json(path, data)


def write_bic_grid(path, report: BicReport) -> int:
    return write_csv(path, ["K", "structure", "bic"], report.rows())


def write_labels(path, users: Sequence[str], labels: np.ndarray, resp: np.ndarray) -> int:
    rows = ((u, int(l), float(resp[i].max())) for i, (u, l) in enumerate(zip(users, labels)))
    return write_csv(path, ["user", "component", "max_responsibility"], rows)
