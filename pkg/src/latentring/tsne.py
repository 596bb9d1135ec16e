"""Exact O(N^2) t-SNE: perplexity-calibrated affinities, KL gradient descent.

Affinities use a per-point Gaussian kernel whose precision beta_i is found by
binary search so each conditional distribution hits the target Shannon
entropy ln(perplexity); the embedding minimizes KL(P||Q) against the
Student-t (1 dof) low-dimensional kernel with the standard optimizer recipe:
seeded Gaussian init (std 1e-4), early exaggeration x12 for the first 250
iterations, learning rate 200, momentum 0.5 then 0.8 from iteration 250,
per-parameter adaptive gains (+0.2 on sign disagreement, x0.8 on agreement,
floored at 0.01; the multiplicative-increase variant diverges), and
recentring to zero mean after every step.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _backend

ENTROPY_TOL = 1e-5
MAX_BISECT = 50
EXAGGERATION = 12.0
EXAGGERATION_ITERS = 250
LEARNING_RATE = 200.0
MOMENTUM_EARLY = 0.5
MOMENTUM_LATE = 0.8
GAIN_INC = 0.2
GAIN_DAMP = 0.8
GAIN_FLOOR = 0.01
INIT_STD = 1e-4


@dataclass
class AffinityMatrix:
    P: np.ndarray
    perplexity: float
    betas: np.ndarray


@dataclass
class Embedding2D:
    Y: np.ndarray
    kl_history: list[float] = field(default_factory=list)


def _as_matrix(x) -> np.ndarray:
    if hasattr(x, "values") and not isinstance(x, np.ndarray):
        x = x.values
    if isinstance(x, (list, tuple)) and x and hasattr(x[0], "values"):
        x = [f.values for f in x]
    return np.asarray(x, dtype=np.float64)


def pairwise_sq_dists(x: np.ndarray) -> np.ndarray:
    sq = (x * x).sum(axis=1)
    d2 = sq[:, None] + sq[None, :] - 2.0 * (x @ x.T)
    np.maximum(d2, 0.0, out=d2)
    np.fill_diagonal(d2, 0.0)
    return d2


def _row_entropy(d2_row: np.ndarray, beta: float) -> tuple[float, np.ndarray]:
    """Shannon entropy (nats) and probabilities of p_{j|i} at a given precision.

    Distances are shifted by their minimum before exponentiation; the
    conditional distribution and its entropy are shift-invariant.
    """
    shifted = d2_row - d2_row.min()
    w = np.exp(-beta * shifted)
    sum_w = w.sum()
    p = w / sum_w
    h = np.log(sum_w) + beta * float((shifted * w).sum()) / sum_w
    return h, p


def calibrate_affinities(x, perplexity: float) -> AffinityMatrix:
    """Joint affinities P with each conditional calibrated to the target perplexity.

    Binary search per point: interval doubling until the entropy brackets the
    target, then bisection, at most 50 steps, tolerance 1e-5 nats.
    """
    x = _as_matrix(x)
    n = x.shape[0]
    if n < 2:
        raise ValueError("degenerate corpus: need at least 2 points")
    if not (1.0 <= perplexity <= n - 1):
        raise ValueError(f"perplexity must be in [1, {n - 1}]")
    d2 = pairwise_sq_dists(x)
    target = np.log(perplexity)

    cond = np.zeros((n, n))
    betas = np.empty(n)
    idx = np.arange(n)
    for i in range(n):
        d2_row = d2[i, idx != i]
        beta, lo, hi = 1.0, -np.inf, np.inf
        for _ in range(MAX_BISECT):
            h, p = _row_entropy(d2_row, beta)
            diff = h - target
            if abs(diff) <= ENTROPY_TOL:
                break
            if diff > 0:  # entropy too high: sharpen
                lo = beta
                beta = beta * 2.0 if np.isinf(hi) else (beta + hi) / 2.0
            else:
                hi = beta
                beta = beta / 2.0 if np.isneginf(lo) else (beta + lo) / 2.0
        betas[i] = beta
        cond[i, idx != i] = p
    joint = (cond + cond.T) / (2.0 * n)
    return AffinityMatrix(P=joint, perplexity=perplexity, betas=betas)


def kl_divergence(p: np.ndarray, y: np.ndarray) -> float:
    """KL(P||Q) at embedding y; pure function used by the finite-difference oracle."""
    kl, _, _ = _backend.tsne_step(p, p, y)
    return kl


def kl_gradient(p: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Analytic KL gradient: 4 sum_j (p_ij - q_ij)(y_i - y_j)/(1 + |y_i - y_j|^2)."""
    _, _, grad = _backend.tsne_step(p, p, y)
    return grad


def tsne_embed(
    affinities: AffinityMatrix | np.ndarray,
    iters: int = 1000,
    seed: int = 0,
    backend: str | None = None,
) -> Embedding2D:
    """Gradient descent on KL(P||Q); records the (unexaggerated) KL per iteration."""
    p = affinities.P if isinstance(affinities, AffinityMatrix) else np.asarray(affinities)
    p = np.ascontiguousarray(p, dtype=np.float64)
    n = p.shape[0]
    rng = np.random.default_rng(seed)
    y = np.ascontiguousarray(rng.normal(0.0, INIT_STD, size=(n, 2)))
    velocity = np.zeros((n, 2))
    gains = np.ones((n, 2))
    p_exagg = np.ascontiguousarray(p * EXAGGERATION)
    kl_history: list[float] = []

    for it in range(iters):
        early = it < EXAGGERATION_ITERS
        kl, _, grad = _backend.tsne_step(p, p_exagg if early else p, y, backend=backend)
        kl_history.append(kl)
        agree = np.sign(grad) == np.sign(velocity)
        gains = np.where(agree, gains * GAIN_DAMP, gains + GAIN_INC)
        np.maximum(gains, GAIN_FLOOR, out=gains)
        momentum = MOMENTUM_EARLY if early else MOMENTUM_LATE
        velocity = momentum * velocity - LEARNING_RATE * (gains * grad)
        y = y + velocity
        y = np.ascontiguousarray(y - y.mean(axis=0))
    return Embedding2D(Y=y, kl_history=kl_history)
