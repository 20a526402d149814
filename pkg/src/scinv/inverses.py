"""The four generalized inverses (MP, UC, Drazin, SC) with exact/float
backend dispatch, plus the RGA and the consistency-check harness.

Backend convention: a RationalMatrix selects the exact backend, a numpy
array the floating one.  `backend="auto"` prefers exact whenever the input
is rational (and falls back to float only on IrrationalSpectrum where the
operation allows it).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

from . import exact as ex
from . import floatcore as fc
from .exact import IrrationalSpectrum, RationalMatrix
from .floatcore import ChainFailure

Matrix = Union[RationalMatrix, np.ndarray]

__all__ = [
    "InverseKind",
    "RankMode",
    "UcFactors",
    "PenroseReport",
    "sc_inverse",
    "sc_inverse_symmetric",
    "drazin_inverse",
    "drazin_index",
    "uc_factorize",
    "uc_inverse",
    "rga",
    "penrose_check",
    "consistency_check",
    "solve_linear_model",
    "matrix_rank",
]


class InverseKind(enum.Enum):
    MP = "mp"
    UC = "uc"
    DRAZIN = "drazin"
    SC_JORDAN = "sc"
    SC_SYMMETRIC = "sc-sym"


@dataclass(frozen=True)
class RankMode:
    """How the MP step inside the SC inverse treats small singular values.

    kind="threshold": zero everything <= value (None = AUTO cutoff).
    kind="fixed": invert exactly `value` largest singular values.
    """

    kind: str
    value: Optional[float] = None

    @classmethod
    def threshold(cls, t: Optional[float] = None) -> "RankMode":
        return cls("threshold", t)

    @classmethod
    def fixed(cls, k: int) -> "RankMode":
        return cls("fixed", k)


def _is_exact(m: Matrix) -> bool:
    return isinstance(m, RationalMatrix)


def matrix_rank(m: Matrix, tol: Optional[float] = None) -> int:
    if _is_exact(m):
        return m.rank()
    m = fc.as_matrix(m)
    s = np.linalg.svd(m, compute_uv=False)
    if tol is None:
        tol = fc.auto_threshold(s, m.shape)
    return int(np.sum(s > tol))


def _resolve_backend(m: Matrix, backend: str) -> str:
    if backend not in ("auto", "exact", "float"):
        raise ValueError(f"unknown backend {backend!r}")
    if backend == "exact" and not _is_exact(m):
        raise ValueError("exact backend requires rational input")
    if backend == "auto":
        return "exact" if _is_exact(m) else "float"
    return backend


def _to_float(m: Matrix) -> np.ndarray:
    return m.to_float() if _is_exact(m) else fc.as_matrix(m)


def sc_inverse(
    m: Matrix,
    backend: str = "auto",
    rank_mode: Optional[RankMode] = None,
    jordan_opts: fc.JordanOptions = fc.JordanOptions(),
) -> Matrix:
    """Similarity-consistent inverse P J+ P^-1 from the Jordan form.

    Well defined as a function of the matrix whenever the zero eigenvalue is
    semisimple (index <= 1); for larger nilpotent blocks the value depends on
    the Jordan basis and this routine's deterministic chain selection picks
    one representative.
    """
    backend = _resolve_backend(m, backend)
    if rank_mode is None:
        rank_mode = RankMode.threshold()
    if backend == "exact":
        if rank_mode.kind != "threshold" or rank_mode.value is not None:
            raise ValueError("exact backend supports only the default rank mode")
        form = ex.exact_jordan(m)
        j_plus = ex.exact_mp_inverse(form.jordan_matrix())
        return form.p @ j_plus @ form.p.inverse()
    mf = _to_float(m)
    form = fc.numerical_jordan(mf, jordan_opts)
    j = form.jordan_matrix()
    if rank_mode.kind == "threshold":
        j_plus = fc.mp_inverse(j, rank_mode.value)
    elif rank_mode.kind == "fixed":
        j_plus = fc.mp_inverse_fixed_rank(j, int(rank_mode.value))
    else:
        raise ValueError(f"unknown rank mode {rank_mode.kind!r}")
    return form.p @ j_plus @ np.linalg.inv(form.p)


def sc_inverse_symmetric(
    m: Matrix, jordan_opts: fc.JordanOptions = fc.JordanOptions()
) -> np.ndarray:
    """SC inverse via the complex-symmetric form: S X+ S^-1."""
    mf = _to_float(m)
    form = fc.numerical_jordan(mf, jordan_opts)
    s, x = fc.complex_symmetric_form(form)
    x_plus = fc.mp_inverse(x)
    return s @ x_plus @ np.linalg.inv(s)


def _drazin_block_inverse_exact(lam: Fraction, size: int) -> RationalMatrix:
    # (lam I + N)^-1 = sum_j (-1)^j lam^{-(j+1)} N^j, exact for lam != 0
    rows = [[Fraction(0)] * size for _ in range(size)]
    for j in range(size):
        coeff = (-1) ** j * Fraction(1) / lam ** (j + 1)
        for i in range(size - j):
            rows[i][i + j] = coeff
    return RationalMatrix(rows)


def drazin_inverse(
    m: Matrix,
    backend: str = "auto",
    jordan_opts: fc.JordanOptions = fc.JordanOptions(),
) -> Matrix:
    """Drazin inverse: invert Jordan blocks with nonzero eigenvalue, zero the
    nilpotent blocks.  Cross-checkable via A^k (A^{2k+1})+ A^k."""
    backend = _resolve_backend(m, backend)
    if backend == "exact":
        form = ex.exact_jordan(m)
        n = m.rows
        d = [[Fraction(0)] * n for _ in range(n)]
        pos = 0
        for lam, size in form.blocks:
            if lam != 0:
                blk = _drazin_block_inverse_exact(lam, size)
                for i in range(size):
                    for j in range(size):
                        d[pos + i][pos + j] = blk.data[i][j]
            pos += size
        jd = RationalMatrix(d)
        return form.p @ jd @ form.p.inverse()
    mf = _to_float(m)
    form = fc.numerical_jordan(mf, jordan_opts)
    cutoff = jordan_opts.resolved_cluster_tol(mf)
    n = mf.shape[0]
    jd = np.zeros((n, n), dtype=complex)
    pos = 0
    for lam, size in form.blocks:
        if abs(lam) > cutoff:
            nil = np.diag(np.ones(size - 1), 1) if size > 1 else np.zeros((1, 1))
            blk = np.zeros((size, size), dtype=complex)
            npow = np.eye(size, dtype=complex)
            for j in range(size):
                blk += (-1) ** j * lam ** (-(j + 1)) * npow
                npow = npow @ nil
            jd[pos:pos + size, pos:pos + size] = blk
        pos += size
    return form.p @ jd @ np.linalg.inv(form.p)


def drazin_index(m: Matrix, backend: str = "auto") -> int:
    """Smallest k with rank(M^{k+1}) = rank(M^k); 0 iff M nonsingular."""
    backend = _resolve_backend(m, backend)
    if backend == "exact":
        n = m.rows
        prev = n  # rank(M^0)
        power = RationalMatrix.identity(n)
        for k in range(1, n + 2):
            power = power @ m
            r = power.rank()
            if r == prev:
                return k - 1
            prev = r
        return n
    mf = _to_float(m)
    n = mf.shape[0]
    norm = max(np.linalg.norm(mf, 2), 1.0)
    rel = n * np.sqrt(fc.EPS)
    prev = n
    power = np.eye(n, dtype=complex)
    for k in range(1, n + 2):
        power = power @ mf
        r = fc.numeric_rank(power, rel * norm**k)
        if r == prev:
            return k - 1
        prev = r
    return n


@dataclass(frozen=True)
class UcFactors:
    """A = diag(d) @ s_core @ diag(e) with unit geometric means in s_core.

    Rows/columns that were entirely zero are excluded from balancing (scale
    1) and listed in degenerate_rows / degenerate_cols.
    """

    d: np.ndarray
    e: np.ndarray
    s_core: np.ndarray
    degenerate_rows: tuple = ()
    degenerate_cols: tuple = ()

    @property
    def degenerate(self) -> bool:
        return bool(self.degenerate_rows or self.degenerate_cols)


def uc_factorize(m, tol: float = 1e-12, max_iter: int = 1000) -> UcFactors:
    """Entrywise geometric-mean balancing (Sinkhorn-type, in log space).

    Alternates row and column scalings until each row and column of
    |s_core| has unit geometric mean over its nonzero entries.
    """
    m = fc.as_matrix(m)
    rows, cols = m.shape
    mask = np.abs(m) > 0
    degen_rows = tuple(int(i) for i in np.where(~mask.any(axis=1))[0])
    degen_cols = tuple(int(j) for j in np.where(~mask.any(axis=0))[0])

    with np.errstate(divide="ignore"):
        logabs = np.where(mask, np.log(np.where(mask, np.abs(m), 1.0)), 0.0)
    r = np.zeros(rows)
    c = np.zeros(cols)
    row_counts = mask.sum(axis=1)
    col_counts = mask.sum(axis=0)
    for _ in range(max_iter):
        delta = 0.0
        means = np.array([
            (logabs[i] - c)[mask[i]].mean() if row_counts[i] else 0.0
            for i in range(rows)
        ])
        delta = max(delta, np.abs(means - r).max() if rows else 0.0)
        r = means
        means = np.array([
            (logabs[:, j] - r)[mask[:, j]].mean() if col_counts[j] else 0.0
            for j in range(cols)
        ])
        delta = max(delta, np.abs(means - c).max() if cols else 0.0)
        c = means
        if delta < tol:
            break
    d = np.exp(r)
    e = np.exp(c)
    s_core = m / d[:, None] / e[None, :]
    return UcFactors(
        d=d, e=e, s_core=s_core,
        degenerate_rows=degen_rows, degenerate_cols=degen_cols,
    )


def uc_inverse(m) -> np.ndarray:
    """Unit-consistent inverse E^-1 S+ D^-1 from the balancing A = D S E."""
    f = uc_factorize(m)
    s_plus = fc.mp_inverse(f.s_core)
    return s_plus / f.e[:, None] / f.d[None, :]


def _inverse_by_kind(m: Matrix, kind: InverseKind, backend: str = "auto") -> Matrix:
    if kind is InverseKind.MP:
        if _is_exact(m) and backend in ("auto", "exact"):
            return ex.exact_mp_inverse(m)
        return fc.mp_inverse(_to_float(m))
    if kind is InverseKind.UC:
        return uc_inverse(_to_float(m))
    if kind is InverseKind.DRAZIN:
        return drazin_inverse(m, backend)
    if kind is InverseKind.SC_JORDAN:
        return sc_inverse(m, backend)
    if kind is InverseKind.SC_SYMMETRIC:
        return sc_inverse_symmetric(m)
    raise ValueError(f"unknown inverse kind {kind!r}")


def rga(m, kind: InverseKind = InverseKind.UC) -> np.ndarray:
    """Relative gain array M o inverse(M)^T (elementwise product)."""
    if kind not in (InverseKind.MP, InverseKind.UC):
        mf = _to_float(m)
        if matrix_rank(mf) < min(mf.shape):
            raise ValueError("RGA with this kind requires a nonsingular matrix")
    mf = _to_float(m)
    inv = _inverse_by_kind(mf, kind)
    return mf * np.asarray(inv).T


@dataclass(frozen=True)
class PenroseReport:
    """Residuals of the two generalized-inverse axioms plus ranks."""

    residual_axiom1: Union[Fraction, float]  # ||A X A - A||_max
    residual_axiom2: Union[Fraction, float]  # ||X A X - X||_max
    rank_a: int
    rank_x: int


def penrose_check(m: Matrix, x: Matrix) -> PenroseReport:
    if _is_exact(m) != _is_exact(x):
        raise ValueError("mixed exact/float arguments")
    if _is_exact(m):
        if m.cols != x.rows or x.cols != m.rows:
            raise ValueError("shapes do not conform")
        r1 = (m @ x @ m - m).max_abs()
        r2 = (x @ m @ x - x).max_abs()
        return PenroseReport(r1, r2, m.rank(), x.rank())
    m = fc.as_matrix(m)
    x = fc.as_matrix(x)
    if m.shape[1] != x.shape[0] or x.shape[1] != m.shape[0]:
        raise ValueError("shapes do not conform")
    r1 = float(np.abs(m @ x @ m - m).max())
    r2 = float(np.abs(x @ m @ x - x).max())
    return PenroseReport(r1, r2, matrix_rank(m), matrix_rank(x))


def consistency_check(m: Matrix, kind: InverseKind, transform) -> Union[Fraction, float]:
    """Max deviation of the kind's claimed consistency law under a transform.

    transform is one of
        ("similarity", S)   : compares inv(S M S^-1) with S inv(M) S^-1
        ("unitary", U, V)   : compares inv(U M V) with V* inv(M) U*
        ("diagonal", D, E)  : compares inv(D M E) with E^-1 inv(M) D^-1
    Returns the magnitude; thresholds belong to the caller.
    """
    tag = transform[0]
    if _is_exact(m):
        if tag != "similarity":
            raise ValueError("exact backend supports only similarity transforms")
        s = transform[1]
        lhs = _inverse_by_kind(s @ m @ s.inverse(), kind)
        rhs = s @ _inverse_by_kind(m, kind) @ s.inverse()
        return (lhs - rhs).max_abs()
    mf = _to_float(m)
    if tag == "similarity":
        s = fc.as_matrix(transform[1])
        lhs = _inverse_by_kind(s @ mf @ np.linalg.inv(s), kind)
        rhs = s @ _inverse_by_kind(mf, kind) @ np.linalg.inv(s)
    elif tag == "unitary":
        u = fc.as_matrix(transform[1])
        v = fc.as_matrix(transform[2])
        lhs = _inverse_by_kind(u @ mf @ v, kind)
        rhs = v.conj().T @ _inverse_by_kind(mf, kind) @ u.conj().T
    elif tag == "diagonal":
        d = np.asarray(transform[1], dtype=complex).ravel()
        e = np.asarray(transform[2], dtype=complex).ravel()
        lhs = _inverse_by_kind(np.diag(d) @ mf @ np.diag(e), kind)
        rhs = np.diag(1.0 / e) @ _inverse_by_kind(mf, kind) @ np.diag(1.0 / d)
    else:
        raise ValueError(f"unknown transform {tag!r}")
    return float(np.abs(np.asarray(lhs) - np.asarray(rhs)).max())


def solve_linear_model(m: Matrix, y, kind: InverseKind, backend: str = "auto"):
    """Parameter vector a = inverse_kind(M) y for the linear model y = M a."""
    inv = _inverse_by_kind(m, kind, backend)
    if _is_exact(m):
        if not isinstance(y, RationalMatrix):
            y = RationalMatrix.column(list(y))
        return inv @ y
    return np.asarray(inv) @ np.asarray(y, dtype=complex)
