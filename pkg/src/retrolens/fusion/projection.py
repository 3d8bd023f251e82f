"""Exact t-SNE (1-D and 2-D) and the comment coloring pipeline.

The embedding is the exact-gradient variant: desk-scale inputs stay well
under a couple thousand points, so no tree approximation is needed.
Per-point Gaussian bandwidths are bisected until the conditional
distribution's entropy matches log2(perplexity) within 1e-4 bits.

Initial coordinates are drawn from a per-point generator seeded by the
point's content hash and the user seed, so permuting the input rows
permutes the output rows identically and duplicate rows coincide.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from ..errors import PerplexityTooLarge, TooFewPoints
from ..tokens import tokenize

EXAGGERATION = 12.0
EXAGGERATION_ITERS = 250
MOMENTUM_SWITCH_ITER = 250
ENTROPY_TOL_BITS = 1e-4
_EPS = 1e-12


def _learning_rate(n: int) -> float:
    # oscillatory blow-up bound for the exaggerated phase: step ~ n/exaggeration;
    # the common 50-point floor is tuned for thousands of points, not desk scale
    return max(1.0, n / EXAGGERATION)


@dataclass(frozen=True)
class ProjectionResult:
    coordinates: np.ndarray
    seed: int
    perplexity: float
    final_kl: float
    initial_kl: float
    iterations: int


def _conditional_probs(sq_dists: np.ndarray, perplexity: float) -> np.ndarray:
    """Row-wise Gaussian affinities with bisected bandwidths."""
    n = sq_dists.shape[0]
    target = np.log2(perplexity)
    P = np.zeros((n, n))
    for i in range(n):
        d = np.delete(sq_dists[i], i)
        beta, beta_min, beta_max = 1.0, 0.0, np.inf
        p = None
        for _ in range(200):
            w = np.exp(-d * beta)
            total = w.sum()
            if total <= 0:
                p = np.full(n - 1, 1.0 / (n - 1))
                break
            p = w / total
            nz = p > 0
            entropy = -np.sum(p[nz] * np.log2(p[nz]))
            if abs(entropy - target) <= ENTROPY_TOL_BITS:
                break
            if entropy > target:
                beta_min = beta
                beta = beta * 2.0 if beta_max == np.inf else (beta + beta_max) / 2.0
            else:
                beta_max = beta
                beta = (beta + beta_min) / 2.0
        row = np.insert(p, i, 0.0)
        P[i] = row
    return P


def _kl(P: np.ndarray, Y: np.ndarray) -> float:
    Q, _ = _low_dim_affinities(Y)
    mask = P > 0
    return float(np.sum(P[mask] * np.log(P[mask] / Q[mask])))


def _low_dim_affinities(Y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    sq = _pairwise_sq(Y)
    num = 1.0 / (1.0 + sq)
    np.fill_diagonal(num, 0.0)
    Q = np.maximum(num / num.sum(), _EPS)
    return Q, num


def _pairwise_sq(X: np.ndarray) -> np.ndarray:
    sums = np.sum(X * X, axis=1)
    sq = sums[:, None] + sums[None, :] - 2.0 * (X @ X.T)
    np.fill_diagonal(sq, 0.0)
    return np.maximum(sq, 0.0)


def _content_digests(points: np.ndarray, seed: int) -> list[bytes]:
    return [hashlib.sha256(row.tobytes() + str(seed).encode()).digest() for row in points]


def _pca_jitter_init(points: np.ndarray, out_dim: int, digests: list[bytes]) -> np.ndarray:
    """Principal-component scores scaled small, plus a content-hash-seeded
    jitter per point. The component ordering matters most in 1-D, where
    gradient descent cannot move points past each other once frozen."""
    centered = points - points.mean(axis=0)
    _, _, vt = np.linalg.svd(centered, full_matrices=False)
    for j in range(vt.shape[0]):
        lead = np.argmax(np.abs(vt[j]))
        if vt[j, lead] < 0:
            vt[j] = -vt[j]
    scores = centered @ vt[:out_dim].T
    if scores.shape[1] < out_dim:
        scores = np.hstack([scores, np.zeros((len(points), out_dim - scores.shape[1]))])
    spread = scores[:, 0].std()
    if spread > 0:
        scores = scores * (1e-4 / spread)
    jitter = np.empty((len(points), out_dim))
    for i, digest in enumerate(digests):
        rng = np.random.default_rng(int.from_bytes(digest[:8], "little"))
        jitter[i] = rng.normal(0.0, 1e-6, out_dim)
    return scores + jitter


def tsne(
    points: np.ndarray,
    out_dim: int = 2,
    perplexity: float = 10.0,
    seed: int = 0,
    iters: int = 1000,
) -> ProjectionResult:
    points = np.ascontiguousarray(np.asarray(points, dtype=np.float64))
    n = len(points)
    if n < 4:
        raise TooFewPoints(f"need at least 4 points, got {n}")
    if perplexity >= (n - 1) / 3:
        raise PerplexityTooLarge(f"perplexity {perplexity} must be < (n-1)/3 = {(n - 1) / 3:.2f}")
    if out_dim not in (1, 2):
        raise ValueError("out_dim must be 1 or 2")

    # run in a canonical row order so every reduction happens in the same
    # sequence regardless of input permutation, then map back at the end
    digests = _content_digests(points, seed)
    canonical = sorted(range(n), key=lambda i: digests[i])
    inverse = np.argsort(np.array(canonical))
    work = points[canonical]

    cond = _conditional_probs(_pairwise_sq(work), perplexity)
    P = (cond + cond.T) / (2.0 * n)
    P = np.maximum(P, _EPS)

    Y = _pca_jitter_init(work, out_dim, [digests[i] for i in canonical])
    initial_kl = _kl(P, Y)

    velocity = np.zeros_like(Y)
    gains = np.ones_like(Y)
    lr = _learning_rate(n)
    for it in range(iters):
        P_run = P * EXAGGERATION if it < EXAGGERATION_ITERS else P
        momentum = 0.5 if it < MOMENTUM_SWITCH_ITER else 0.8
        Q, num = _low_dim_affinities(Y)
        PQn = (P_run - Q) * num
        grad = 4.0 * ((np.diag(PQn.sum(axis=1)) - PQn) @ Y)

        flipped = (grad * velocity) > 0
        gains[flipped] *= 0.8
        gains[~flipped] += 0.2
        np.clip(gains, 0.01, None, out=gains)
        velocity = momentum * velocity - lr * gains * grad
        Y = Y + velocity
        Y = Y - Y.mean(axis=0)

    return ProjectionResult(
        coordinates=Y[inverse], seed=seed, perplexity=perplexity,
        final_kl=_kl(P, Y), initial_kl=initial_kl, iterations=iters,
    )


# -- comment coloring -----------------------------------------------------------

# diverging gradient palette; scalars in [0, 1] interpolate between anchors
PALETTE = ((59, 76, 192), (221, 221, 221), (180, 4, 38))


def palette_color(scalar: float) -> str:
    s = float(np.clip(scalar, 0.0, 1.0)) * (len(PALETTE) - 1)
    i = min(int(s), len(PALETTE) - 2)
    frac = s - i
    rgb = tuple(
        int(round(PALETTE[i][c] + frac * (PALETTE[i + 1][c] - PALETTE[i][c])))
        for c in range(3)
    )
    return "#{:02x}{:02x}{:02x}".format(*rgb)


def _tfidf_matrix(texts: list[str]) -> np.ndarray:
    token_lists = [tokenize(t) for t in texts]
    terms = sorted({tok for toks in token_lists for tok in toks})
    index = {t: i for i, t in enumerate(terms)}
    X = np.zeros((len(texts), len(terms)))
    for i, toks in enumerate(token_lists):
        for tok in toks:
            X[i, index[tok]] += 1.0
    df = (X > 0).sum(axis=0)
    idf = np.log((1.0 + len(texts)) / (1.0 + df)) + 1.0
    X *= idf
    norms = np.linalg.norm(X, axis=1, keepdims=True)
    norms[norms == 0] = 1.0
    return X / norms


def comment_colors(texts: list[str], seed: int = 0, perplexity: float = 10.0) -> list[dict]:
    """Scalar position in [0, 1] plus gradient color per comment.

    Fewer than 4 comments fall back to 0.5 / the palette midpoint.
    """
    n = len(texts)
    if n < 4:
        return [{"scalar": 0.5, "color": palette_color(0.5)} for _ in texts]
    X = _tfidf_matrix(texts)
    k = min(50, n - 1, X.shape[1])
    U, S, _ = np.linalg.svd(X, full_matrices=False)
    emb = U[:, :k] * S[:k]
    # identical texts share one embedding row exactly (SVD rows of equal
    # inputs can differ in final ulps)
    first_occurrence: dict[str, int] = {}
    for i, text in enumerate(texts):
        first_occurrence.setdefault(text, i)
    for i, text in enumerate(texts):
        emb[i] = emb[first_occurrence[text]]
    perp = min(perplexity, (n - 1) / 3 * 0.99)
    coords = tsne(emb, out_dim=1, perplexity=perp, seed=seed).coordinates[:, 0]
    coords = np.array([coords[first_occurrence[t]] for t in texts])
    lo, hi = coords.min(), coords.max()
    scalars = np.full(n, 0.5) if hi == lo else (coords - lo) / (hi - lo)
    return [{"scalar": float(s), "color": palette_color(float(s))} for s in scalars]
