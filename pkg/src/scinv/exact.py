"""Exact rational-arithmetic linear algebra.

Everything here works over `fractions.Fraction`, so results are bit-exact and
this module can serve as the verification oracle for the floating-point
backend.  Matrices are small (desk scale, ~10x10); no attempt is made to be
fast.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Iterable, Sequence

__all__ = [
    "IrrationalSpectrum",
    "RationalMatrix",
    "CharPoly",
    "ExactJordanForm",
    "parse_rational",
    "format_rational",
    "rref",
    "nullspace",
    "charpoly",
    "rational_roots",
    "exact_jordan",
    "exact_mp_inverse",
]


class IrrationalSpectrum(Exception):
    """Raised when a matrix has an irrational or complex eigenvalue.

    The exact backend never approximates; callers are expected to fall back
    to the floating backend.
    """


def parse_rational(text) -> Fraction:
    """Parse "p/q" or a bare integer string (or int) into a Fraction."""
    if isinstance(text, int):
        return Fraction(text)
    return Fraction(str(text))


def format_rational(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"not an exact rational value: {x!r}")


class RationalMatrix:
    """Immutable dense matrix of Fractions."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, entries: Iterable[Iterable]):
        data = tuple(tuple(_frac(x) for x in row) for row in entries)
        if not data or not data[0]:
            raise ValueError("matrix must have at least one row and column")
        if any(len(r) != len(data[0]) for r in data):
            raise ValueError("ragged rows")
        self.data = data
        self.rows = len(data)
        self.cols = len(data[0])

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RationalMatrix":
        return cls([[0] * cols for _ in range(rows)])

    @classmethod
    def column(cls, vec: Sequence) -> "RationalMatrix":
        return cls([[x] for x in vec])

    @classmethod
    def from_columns(cls, cols: Sequence["RationalMatrix"]) -> "RationalMatrix":
        rows = cols[0].rows
        if any(c.cols != 1 or c.rows != rows for c in cols):
            raise ValueError("from_columns expects column vectors of equal length")
        return cls([[c.data[i][0] for c in cols] for i in range(rows)])

    def __getitem__(self, ij) -> Fraction:
        i, j = ij
        return self.data[i][j]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RationalMatrix)
            and self.data == other.data
        )

    def __hash__(self):
        return hash(self.data)

    def __repr__(self):
        body = "; ".join(
            " ".join(format_rational(x) for x in row) for row in self.data
        )
        return f"RationalMatrix[{body}]"

    def tolist(self):
        return [list(row) for row in self.data]

    def column_vector(self, j: int) -> "RationalMatrix":
        return RationalMatrix([[row[j]] for row in self.data])

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(
            [[self.data[i][j] for i in range(self.rows)] for j in range(self.cols)]
        )

    @property
    def T(self) -> "RationalMatrix":
        return self.transpose()

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        self._check_same_shape(other)
        return RationalMatrix(
            [
                [a + b for a, b in zip(ra, rb)]
                for ra, rb in zip(self.data, other.data)
            ]
        )

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        self._check_same_shape(other)
        return RationalMatrix(
            [
                [a - b for a, b in zip(ra, rb)]
                for ra, rb in zip(self.data, other.data)
            ]
        )

    def __neg__(self) -> "RationalMatrix":
        return self.scale(-1)

    def scale(self, k) -> "RationalMatrix":
        k = _frac(k)
        return RationalMatrix([[k * x for x in row] for row in self.data])

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.rows:
            raise ValueError(
                f"shape mismatch: {self.rows}x{self.cols} @ {other.rows}x{other.cols}"
            )
        ot = other.transpose().data
        return RationalMatrix(
            [
                [sum(a * b for a, b in zip(row, col)) for col in ot]
                for row in self.data
            ]
        )

    def _check_same_shape(self, other: "RationalMatrix"):
        if self.rows != other.rows or self.cols != other.cols:
            raise ValueError("shape mismatch")

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.data for x in row)

    def max_abs(self) -> Fraction:
        return max(abs(x) for row in self.data for x in row)

    def rank(self) -> int:
        _, pivots = rref(self)
        return len(pivots)

    def pow(self, k: int) -> "RationalMatrix":
        if not self.is_square:
            raise ValueError("matrix power requires a square matrix")
        result = RationalMatrix.identity(self.rows)
        for _ in range(k):
            result = result @ self
        return result

    def trace(self) -> Fraction:
        if not self.is_square:
            raise ValueError("trace requires a square matrix")
        return sum(self.data[i][i] for i in range(self.rows))

    def inverse(self) -> "RationalMatrix":
        """Gauss-Jordan inverse; raises ValueError on singular input."""
        if not self.is_square:
            raise ValueError("inverse requires a square matrix")
        n = self.rows
        aug = [list(row) + [Fraction(int(i == j)) for j in range(n)]
               for i, row in enumerate(self.data)]
        for col in range(n):
            piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
            if piv is None:
                raise ValueError("matrix is singular")
            aug[col], aug[piv] = aug[piv], aug[col]
            p = aug[col][col]
            aug[col] = [x / p for x in aug[col]]
            for r in range(n):
                if r != col and aug[r][col] != 0:
                    f = aug[r][col]
                    aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
        return RationalMatrix([row[n:] for row in aug])

    def to_float(self):
        import numpy as np

        return np.array(
            [[float(x) for x in row] for row in self.data], dtype=complex
        )


def rref(m: RationalMatrix):
    """Reduced row echelon form.

    Returns (R, pivot_columns).  Elimination is plain Gauss-Jordan with the
    first nonzero entry in each column as pivot, which keeps the output
    deterministic.
    """
    work = [list(row) for row in m.data]
    pivots = []
    r = 0
    for c in range(m.cols):
        if r >= m.rows:
            break
        piv = next((i for i in range(r, m.rows) if work[i][c] != 0), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        p = work[r][c]
        work[r] = [x / p for x in work[r]]
        for i in range(m.rows):
            if i != r and work[i][c] != 0:
                f = work[i][c]
                work[i] = [x - f * y for x, y in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
    return RationalMatrix(work), pivots


def nullspace(m: RationalMatrix):
    """Exact basis of {x : Mx = 0} as a list of column vectors.

    Basis vectors come from the rref free columns in ascending column order
    (free variable set to 1, the rest to 0), so the output is deterministic.
    """
    r, pivots = rref(m)
    pivot_set = set(pivots)
    free = [c for c in range(m.cols) if c not in pivot_set]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * m.cols
        vec[fc] = Fraction(1)
        for row_idx, pc in enumerate(pivots):
            vec[pc] = -r.data[row_idx][fc]
        basis.append(RationalMatrix.column(vec))
    return basis


def solve(m: RationalMatrix, b: RationalMatrix):
    """One particular solution of M x = b (free variables set to 0), or None."""
    if b.cols != 1 or b.rows != m.rows:
        raise ValueError("b must be a conforming column vector")
    aug = RationalMatrix([list(row) + [b.data[i][0]] for i, row in enumerate(m.data)])
    r, pivots = rref(aug)
    if m.cols in pivots:
        return None  # inconsistent
    x = [Fraction(0)] * m.cols
    for row_idx, pc in enumerate(pivots):
        x[pc] = r.data[row_idx][m.cols]
    return RationalMatrix.column(x)


@dataclass(frozen=True)
class CharPoly:
    """Monic characteristic polynomial, coefficients from lambda^n down to 1."""

    coefficients: tuple

    def __post_init__(self):
        if not self.coefficients or self.coefficients[0] != 1:
            raise ValueError("characteristic polynomial must be monic")

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, x) -> Fraction:
        x = _frac(x)
        acc = Fraction(0)
        for c in self.coefficients:
            acc = acc * x + c
        return acc


def charpoly(m: RationalMatrix) -> CharPoly:
    """det(lambda*I - M) by the Faddeev-LeVerrier recurrence, exact."""
    if not m.is_square:
        raise ValueError("charpoly requires a square matrix")
    n = m.rows
    coeffs = [Fraction(1)]
    mk = RationalMatrix.identity(n)
    for k in range(1, n + 1):
        mk = m @ mk
        ck = -mk.trace() / k
        coeffs.append(ck)
        if k < n:
            mk = mk + RationalMatrix.identity(n).scale(ck)
    return CharPoly(tuple(coeffs))


def _divisors(n: int):
    n = abs(n)
    small, large = [], []
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
    return small + large[::-1]


def _deflate(coeffs, root):
    # synthetic division by (lambda - root); remainder must be zero
    out = [coeffs[0]]
    for c in coeffs[1:]:
        out.append(c + root * out[-1])
    assert out[-1] == 0
    return out[:-1]


def rational_roots(p: CharPoly):
    """Complete factorization over Q as [(root, multiplicity), ...].

    Raises IrrationalSpectrum if any root is irrational or complex.  Uses the
    rational root theorem on the integer polynomial obtained by the monic
    substitution lambda -> x / L, L = lcm of coefficient denominators.
    """
    coeffs = list(p.coefficients)
    roots: dict[Fraction, int] = {}

    # strip zero roots first
    while len(coeffs) > 1 and coeffs[-1] == 0:
        roots[Fraction(0)] = roots.get(Fraction(0), 0) + 1
        coeffs = coeffs[:-1]

    while len(coeffs) > 1:
        lcm = 1
        for c in coeffs:
            lcm = lcm * c.denominator // _gcd(lcm, c.denominator)
        # q(x) = L^deg * p(x/L) is monic with integer coefficients; its
        # rational roots are integers dividing the constant term.
        deg = len(coeffs) - 1
        int_coeffs = [int(c * lcm**k) for k, c in enumerate(coeffs)]
        const = int_coeffs[-1]
        if const == 0:
            root = Fraction(0)
        else:
            root = None
            for d in _divisors(const):
                for cand in (Fraction(d, lcm), Fraction(-d, lcm)):
                    if p_eval(coeffs, cand) == 0:
                        root = cand
                        break
                if root is not None:
                    break
            if root is None:
                raise IrrationalSpectrum(
                    "characteristic polynomial has an irrational or complex root"
                )
        mult = 0
        while len(coeffs) > 1 and p_eval(coeffs, root) == 0:
            coeffs = _deflate(coeffs, root)
            mult += 1
        roots[root] = roots.get(root, 0) + mult

    out = sorted(roots.items())
    assert sum(m for _, m in out) == p.degree
    return out


def p_eval(coeffs, x) -> Fraction:
    acc = Fraction(0)
    for c in coeffs:
        acc = acc * x + c
    return acc


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


@dataclass(frozen=True)
class ExactJordanForm:
    """Similarity transform P and canonical block list.

    blocks are (eigenvalue, size) pairs sorted by eigenvalue ascending, then
    by size descending; P @ J(blocks) @ P^-1 reproduces the input exactly.
    """

    p: RationalMatrix
    blocks: tuple

    def jordan_matrix(self) -> RationalMatrix:
        n = sum(size for _, size in self.blocks)
        j = [[Fraction(0)] * n for _ in range(n)]
        pos = 0
        for lam, size in self.blocks:
            for t in range(size):
                j[pos + t][pos + t] = lam
                if t + 1 < size:
                    j[pos + t][pos + t + 1] = Fraction(1)
            pos += size
        return RationalMatrix(j)


def _independent_mod(candidate, span_cols):
    """True if candidate is independent of the columns in span_cols."""
    if not span_cols:
        return not candidate.is_zero()
    stacked = RationalMatrix.from_columns(span_cols)
    r0 = stacked.rank()
    return RationalMatrix.from_columns(span_cols + [candidate]).rank() > r0


def _jordan_chains_for_eigenvalue(m: RationalMatrix, lam: Fraction, mult: int):
    """Chains for one eigenvalue, top-down with lexicographic tie-breaks.

    Returns a list of chains; each chain is ordered bottom-up, i.e.
    [B^{s-1} v, ..., B v, v] so that it maps directly onto an upper Jordan
    block's columns.
    """
    n = m.rows
    b = m - RationalMatrix.identity(n).scale(lam)
    powers = [RationalMatrix.identity(n)]
    ranks = [n]
    while n - ranks[-1] < mult:
        powers.append(powers[-1] @ b)
        ranks.append(powers[-1].rank())
    s = len(ranks) - 1  # largest block size
    geq = [ranks[j - 1] - ranks[j] for j in range(1, s + 1)]  # blocks of size >= j
    kernels = [nullspace(powers[j]) for j in range(s + 1)]

    chains = []  # each stored top-first: [v, Bv, B^2 v, ...]
    for level in range(s, 0, -1):
        inherited = [c[len(c) - level] for c in chains if len(c) > level]
        need = geq[level - 1] - len(inherited)
        span = kernels[level - 1] + inherited
        for cand in kernels[level]:
            if need == 0:
                break
            if _independent_mod(cand, span):
                chain = [cand]
                for _ in range(level - 1):
                    chain.append(b @ chain[-1])
                chains.append(chain)
                span = span + [cand]
                need -= 1
        if need != 0:
            raise AssertionError("exact chain construction failed (bug)")
    return [list(reversed(c)) for c in chains]


def exact_jordan(m: RationalMatrix) -> ExactJordanForm:
    """Exact Jordan normal form for matrices with rational spectrum.

    Block sizes per eigenvalue follow from the rank sequence of powers of
    (M - lambda I); chains are selected top-down from deterministic rref
    nullspace bases, so P is reproducible across runs.
    """
    if not m.is_square:
        raise ValueError("exact_jordan requires a square matrix")
    eigs = rational_roots(charpoly(m))
    blocks = []
    columns = []
    for lam, mult in eigs:
        chains = _jordan_chains_for_eigenvalue(m, lam, mult)
        chains.sort(key=len, reverse=True)
        for chain in chains:
            blocks.append((lam, len(chain)))
            columns.extend(chain)
    p = RationalMatrix.from_columns(columns)
    form = ExactJordanForm(p=p, blocks=tuple(blocks))
    assert (p @ form.jordan_matrix() @ p.inverse()) == m
    return form


def exact_mp_inverse(m: RationalMatrix) -> RationalMatrix:
    """Moore-Penrose inverse over the rationals via exact rank factorization.

    M = F G with F the pivot columns of M and G the nonzero rows of rref(M);
    then M+ = G^T (G G^T)^-1 (F^T F)^-1 F^T.  Conjugate transpose degenerates
    to plain transpose over Q.  Satisfies all four Penrose conditions exactly.
    """
    r, pivots = rref(m)
    rank = len(pivots)
    if rank == 0:
        return RationalMatrix.zeros(m.cols, m.rows)
    f = RationalMatrix.from_columns([m.column_vector(c) for c in pivots])
    g = RationalMatrix(r.data[:rank])
    gt = g.transpose()
    ft = f.transpose()
    return gt @ (g @ gt).inverse() @ (ft @ f).inverse() @ ft
