"""Double-precision complex linear algebra: SVD, thresholded and fixed-rank
Moore-Penrose inverses, a numerical Jordan decomposition, and the complex
symmetric similarity form.

The Jordan pipeline here is deliberately the fragile one: eigenvalue
clustering plus rank sequences of shifted powers.  Failures surface as
ChainFailure rather than being patched over, since the downstream experiment
exists to observe exactly that fragility.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

EPS = float(np.finfo(np.float64).eps)

__all__ = [
    "EPS",
    "ChainFailure",
    "SvdFactors",
    "JordanOptions",
    "NumericJordanForm",
    "as_matrix",
    "svd",
    "mp_inverse",
    "mp_inverse_fixed_rank",
    "eigenvalues",
    "numerical_jordan",
    "complex_symmetric_form",
    "numeric_rank",
]


class ChainFailure(Exception):
    """Jordan chain construction could not complete within tolerance.

    Expected for some inputs: the decomposition is numerically ill posed.
    """


def as_matrix(a) -> np.ndarray:
    """Validate and coerce input to a finite 2-d complex128 array."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] == 0 or m.shape[1] == 0:
        raise ValueError("expected a nonempty 2-d matrix")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return m


@dataclass(frozen=True)
class SvdFactors:
    """A = U diag(sigma) V*, with sigma descending and U, V unitary."""

    u: np.ndarray
    sigma: np.ndarray
    v: np.ndarray

    def reconstruct(self) -> np.ndarray:
        k = len(self.sigma)
        return (self.u[:, :k] * self.sigma) @ self.v[:, :k].conj().T


def svd(m) -> SvdFactors:
    m = as_matrix(m)
    u, s, vh = np.linalg.svd(m)
    return SvdFactors(u=u, sigma=s, v=vh.conj().T)


def auto_threshold(sigma: np.ndarray, shape) -> float:
    """Conventional pseudoinverse cutoff: max(m, n) * eps * sigma_1."""
    if len(sigma) == 0:
        return 0.0
    return max(shape) * EPS * float(sigma[0])


def mp_inverse(m, threshold: Optional[float] = None) -> np.ndarray:
    """MP inverse from the SVD; singular values <= threshold are zeroed.

    threshold=None selects the AUTO cutoff max(rows, cols)*eps*sigma_1.
    """
    f = svd(m)
    if threshold is None:
        threshold = auto_threshold(f.sigma, (f.u.shape[0], f.v.shape[0]))
    elif threshold < 0:
        raise ValueError("threshold must be nonnegative")
    inv = np.where(f.sigma > threshold, 1.0 / np.where(f.sigma > 0, f.sigma, 1.0), 0.0)
    k = len(f.sigma)
    return (f.v[:, :k] * inv) @ f.u[:, :k].conj().T


def mp_inverse_fixed_rank(m, k: int) -> np.ndarray:
    """MP inverse inverting exactly the k largest singular values.

    No threshold discrimination: the remaining values are zeroed regardless
    of magnitude.  Ties at sigma_k are broken by index order from the
    descending sort.
    """
    f = svd(m)
    if k < 0 or k > len(f.sigma):
        raise ValueError(f"fixed rank {k} out of range [0, {len(f.sigma)}]")
    inv = np.zeros_like(f.sigma)
    inv[:k] = 1.0 / f.sigma[:k]
    r = len(f.sigma)
    return (f.v[:, :r] * inv) @ f.u[:, :r].conj().T


def eigenvalues(m) -> np.ndarray:
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise ValueError("eigenvalues requires a square matrix")
    return np.linalg.eigvals(m)


def numeric_rank(m: np.ndarray, tol: float) -> int:
    s = np.linalg.svd(m, compute_uv=False)
    return int(np.sum(s > tol))


def _null_basis(m: np.ndarray, tol: float) -> np.ndarray:
    """Orthonormal columns spanning the numerical nullspace of m."""
    _, s, vh = np.linalg.svd(m)
    r = int(np.sum(s > tol))
    return vh[r:].conj().T


@dataclass(frozen=True)
class JordanOptions:
    """Tolerances for the numerical Jordan decomposition.

    cluster_tol: eigenvalue clustering radius.  Default
    n * (eps * max(||M||_2, 1))^(1/3): a defective eigenvalue with a size-k
    chain splits under rounding by roughly (eps*||M||)^(1/k), so the
    cube-root scale merges chains up to size 3 (the scale this package
    targets) while staying far below unit separation of distinct
    eigenvalues.  Supply cluster_tol explicitly for deeper chains.

    rank_tol: relative factor for rank decisions; the threshold applied to
    (M - lambda I)^j is rank_tol * ||M - lambda I||_2^j.  Default n*sqrt(eps).
    Powering amplifies entrywise noise by ||B||^j, so anchoring the cutoff to
    ||B^j|| instead would misclassify defective structure.
    """

    cluster_tol: Optional[float] = None
    rank_tol: Optional[float] = None

    def __post_init__(self):
        for name in ("cluster_tol", "rank_tol"):
            v = getattr(self, name)
            if v is not None and v <= 0:
                raise ValueError(f"{name} must be strictly positive")

    def resolved_cluster_tol(self, m: np.ndarray) -> float:
        if self.cluster_tol is not None:
            return self.cluster_tol
        n = m.shape[0]
        return n * float(np.cbrt(EPS * max(np.linalg.norm(m, 2), 1.0)))

    def resolved_rank_tol(self, m: np.ndarray) -> float:
        if self.rank_tol is not None:
            return self.rank_tol
        return m.shape[0] * np.sqrt(EPS)


@dataclass(frozen=True)
class NumericJordanForm:
    """Numerical similarity transform P plus (eigenvalue, size) blocks.

    residual is ||P J P^-1 - input||_max; it is recorded, never hidden.
    """

    p: np.ndarray
    blocks: tuple
    residual: float

    def jordan_matrix(self) -> np.ndarray:
        n = sum(size for _, size in self.blocks)
        j = np.zeros((n, n), dtype=complex)
        pos = 0
        for lam, size in self.blocks:
            for t in range(size):
                j[pos + t, pos + t] = lam
                if t + 1 < size:
                    j[pos + t, pos + t + 1] = 1.0
            pos += size
        return j


def _cluster_eigenvalues(w: np.ndarray, tol: float):
    """Greedy transitive clustering of eigenvalues within distance tol."""
    n = len(w)
    order = sorted(range(n), key=lambda i: (w[i].real, w[i].imag))
    used = [False] * n
    clusters = []
    for i in order:
        if used[i]:
            continue
        group = [i]
        used[i] = True
        changed = True
        while changed:
            changed = False
            for j in order:
                if not used[j] and min(abs(w[j] - w[g]) for g in group) < tol:
                    group.append(j)
                    used[j] = True
                    changed = True
        clusters.append([w[g] for g in group])
    return clusters


def numerical_jordan(m, opts: JordanOptions = JordanOptions()) -> NumericJordanForm:
    """Numerical Jordan decomposition via eigenvalue clustering and rank
    sequences of shifted powers.

    Each cluster's representative is its arithmetic mean; block sizes per
    cluster come from r_j = numeric-rank((M - lambda I)^j) via
    count(blocks >= j) = r_{j-1} - r_j; chains are assembled from SVD
    nullspace bases with orthogonal projection.  Raises ChainFailure when the
    rank sequence is structurally inconsistent or chain vectors degenerate.
    """
    m = as_matrix(m)
    n = m.shape[0]
    if n != m.shape[1]:
        raise ValueError("numerical_jordan requires a square matrix")
    cluster_tol = opts.resolved_cluster_tol(m)
    rank_rel = opts.resolved_rank_tol(m)
    w = eigenvalues(m)
    clusters = _cluster_eigenvalues(w, cluster_tol)

    blocks = []
    columns = []
    for group in clusters:
        lam = complex(np.mean(group))
        mult = len(group)
        b = m - lam * np.eye(n)
        norm_b = max(np.linalg.norm(b, 2), 1.0)
        powers = [np.eye(n, dtype=complex)]
        ranks = [n]
        while n - ranks[-1] < mult:
            powers.append(powers[-1] @ b)
            j = len(powers) - 1
            rj = numeric_rank(powers[j], rank_rel * norm_b**j)
            ranks.append(max(rj, n - mult))
            if j > mult:
                raise ChainFailure(
                    f"rank sequence {ranks} never reaches nullity {mult} "
                    f"for eigenvalue cluster at {lam:.6g}"
                )
        s = len(ranks) - 1
        geq = [ranks[j - 1] - ranks[j] for j in range(1, s + 1)]
        if any(geq[j] < geq[j + 1] for j in range(s - 1)) or sum(geq) != mult:
            raise ChainFailure(
                f"inconsistent block counts {geq} for cluster at {lam:.6g}"
            )
        kernels = [
            _null_basis(powers[j], rank_rel * norm_b**j) for j in range(s + 1)
        ]

        chains = []  # top-first
        for level in range(s, 0, -1):
            inherited = [c[len(c) - level] for c in chains if len(c) > level]
            need = geq[level - 1] - len(inherited)
            if need == 0:
                continue
            span = kernels[level - 1]
            if inherited:
                span = np.column_stack([span] + inherited)
            cand = kernels[level]
            if span.shape[1] > 0:
                q, _ = np.linalg.qr(span)
                cand = cand - q @ (q.conj().T @ cand)
            cu, cs, _ = np.linalg.svd(cand, full_matrices=False)
            if len(cs) < need or cs[need - 1] < 1e-8:
                raise ChainFailure(
                    f"cannot isolate {need} chain top(s) at level {level} "
                    f"for cluster at {lam:.6g}"
                )
            for idx in range(need):
                chain = [cu[:, idx]]
                for _ in range(level - 1):
                    chain.append(b @ chain[-1])
                chains.append(chain)
        chains.sort(key=len, reverse=True)
        for chain in chains:
            blocks.append((lam, len(chain)))
            columns.extend(reversed(chain))

    # canonical ordering: eigenvalue ascending by (re, im), size descending
    ordered = sorted(
        range(len(blocks)),
        key=lambda i: (blocks[i][0].real, blocks[i][0].imag, -blocks[i][1]),
    )
    col_offsets = np.cumsum([0] + [size for _, size in blocks])
    perm_cols = []
    for i in ordered:
        perm_cols.extend(range(col_offsets[i], col_offsets[i + 1]))
    p = np.column_stack(columns)[:, perm_cols]
    blocks = tuple(blocks[i] for i in ordered)

    form = NumericJordanForm(p=p, blocks=blocks, residual=np.nan)
    j = form.jordan_matrix()
    try:
        recon = p @ j @ np.linalg.inv(p)
    except np.linalg.LinAlgError as e:
        raise ChainFailure(f"assembled P is singular: {e}") from e
    residual = float(np.abs(recon - m).max())
    return NumericJordanForm(p=p, blocks=blocks, residual=residual)


def _flip(n: int) -> np.ndarray:
    return np.fliplr(np.eye(n))


def complex_symmetric_form(jf: NumericJordanForm):
    """Complex-symmetric similarity form (S, X) with the input = S X S^-1.

    Per block: X_b = lambda I + (N + N^T)/2 + (i/2)(N E - E N) where N is the
    block's nilpotent part and E the flip matrix; the unitary
    U_b = (E + iI)/sqrt(2) satisfies X_b = U_b J_b U_b*.  S = P diag(U_b)*.
    X = X^T holds exactly because each term is symmetric entry by entry.
    """
    s_cols = []
    x_blocks = []
    for lam, size in jf.blocks:
        n_part = np.diag(np.ones(size - 1), 1) if size > 1 else np.zeros((1, 1))
        e = _flip(size)
        x_b = lam * np.eye(size) + 0.5 * (n_part + n_part.T) \
            + 0.5j * (n_part @ e - e @ n_part)
        u_b = (e + 1j * np.eye(size)) / np.sqrt(2.0)
        x_blocks.append(x_b)
        s_cols.append(u_b.conj().T)
    n = sum(size for _, size in jf.blocks)
    u_star = np.zeros((n, n), dtype=complex)
    x = np.zeros((n, n), dtype=complex)
    pos = 0
    for x_b, u_b_star in zip(x_blocks, s_cols):
        k = x_b.shape[0]
        u_star[pos:pos + k, pos:pos + k] = u_b_star
        x[pos:pos + k, pos:pos + k] = x_b
        pos += k
    s = jf.p @ u_star
    return s, x
