"""Seeded random generators and property suites.

Shared between the `verify` CLI command and the test suite, so the
acceptance tests exercise exactly the code a user would run.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List

import numpy as np

from . import exact as ex
from . import floatcore as fc
from . import inverses as gi
from .exact import RationalMatrix
from .inverses import InverseKind

__all__ = [
    "SuiteResult",
    "random_integer_matrix",
    "random_nonsingular_integer",
    "random_unitary",
    "random_singular",
    "random_diagonalizable_rational",
    "random_jordan_structured",
    "suite_penrose",
    "suite_unitary",
    "suite_diagonal",
    "suite_similarity",
    "suite_drazin",
    "run_suites",
    "SUITES",
]


@dataclass
class SuiteResult:
    name: str
    passed: bool
    trials: int
    detail: str = ""


def random_integer_matrix(rng, n: int, lo: int = -9, hi: int = 9) -> RationalMatrix:
    return RationalMatrix(rng.integers(lo, hi + 1, size=(n, n)).tolist())


def random_nonsingular_integer(rng, n: int, lo: int = -5, hi: int = 5) -> RationalMatrix:
    while True:
        m = random_integer_matrix(rng, n, lo, hi)
        if abs(np.linalg.det(m.to_float().real)) >= 0.5:
            # integer determinant, so nonzero
            return m


def random_unitary(rng, n: int) -> np.ndarray:
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_singular(rng, n: int, rank: int) -> np.ndarray:
    a = rng.normal(size=(n, rank))
    b = rng.normal(size=(rank, n))
    return (a @ b).astype(complex)


def random_diagonalizable_rational(
    rng, n: int, eigenvalues=(-2, -1, 0, 1, 2, 3)
) -> RationalMatrix:
    """P D P^-1 with integer P, |det P| >= 1: rational spectrum, possibly
    singular, possibly repeated eigenvalues, always semisimple."""
    p = random_nonsingular_integer(rng, n)
    d = RationalMatrix(
        [
            [int(rng.choice(eigenvalues)) if i == j else 0 for j in range(n)]
            for i in range(n)
        ]
    )
    return p @ d @ p.inverse()


def random_jordan_structured(rng, n: int):
    """(matrix, P, blocks) with known Jordan structure.

    Nonzero eigenvalues may carry defective blocks (size up to 3); the zero
    eigenvalue is kept semisimple so the SC inverse is well defined as a
    function of the matrix.
    """
    blocks = []
    left = n
    while left > 0:
        lam = int(rng.choice([-2, -1, 0, 1, 2, 3]))
        size = 1 if lam == 0 else int(rng.integers(1, min(3, left) + 1))
        blocks.append((Fraction(lam), size))
        left -= size
    blocks.sort(key=lambda b: (b[0], -b[1]))
    p = random_nonsingular_integer(rng, n)
    j = ex.ExactJordanForm(p=p, blocks=tuple(blocks)).jordan_matrix()
    return p @ j @ p.inverse(), p, tuple(blocks)


def suite_penrose(rng, trials: int) -> SuiteResult:
    """Axioms AXA=A and XAX=X for MP (float + exact), UC, and exact SC."""
    worst = 0.0
    for _ in range(trials):
        n = int(rng.integers(2, 6))
        # float MP on a possibly rank-deficient matrix
        m = random_singular(rng, n, int(rng.integers(1, n + 1)))
        x = fc.mp_inverse(m)
        rep = gi.penrose_check(m, x)
        scale = 1e-8 * max(np.abs(m).max(), np.abs(x).max(), 1.0)
        if rep.residual_axiom1 > scale or rep.residual_axiom2 > scale:
            return SuiteResult("penrose", False, trials, f"MP residuals {rep}")
        worst = max(worst, rep.residual_axiom1 / scale)
        # UC
        mu = rng.normal(size=(n, n)).astype(complex)
        xu = gi.uc_inverse(mu)
        rep = gi.penrose_check(mu, xu)
        scale = 1e-8 * max(np.abs(mu).max(), np.abs(xu).max(), 1.0)
        if rep.residual_axiom1 > scale or rep.residual_axiom2 > scale:
            return SuiteResult("penrose", False, trials, f"UC residuals {rep}")
        # exact MP and exact SC
        mq = random_integer_matrix(rng, n, -5, 5)
        xq = ex.exact_mp_inverse(mq)
        rep = gi.penrose_check(mq, xq)
        if rep.residual_axiom1 != 0 or rep.residual_axiom2 != 0:
            return SuiteResult("penrose", False, trials, "exact MP residual nonzero")
        ms = random_diagonalizable_rational(rng, n)
        xs = gi.sc_inverse(ms, backend="exact")
        rep = gi.penrose_check(ms, xs)
        if rep.residual_axiom1 != 0 or rep.residual_axiom2 != 0:
            return SuiteResult("penrose", False, trials, "exact SC residual nonzero")
    return SuiteResult("penrose", True, trials, f"worst scaled MP residual {worst:.3g}")


def suite_unitary(rng, trials: int) -> SuiteResult:
    """MP consistency under unitary transforms: (UMV)+ = V* M+ U*."""
    for _ in range(trials):
        n = int(rng.integers(2, 6))
        m = random_singular(rng, n, int(rng.integers(1, n + 1)))
        u, v = random_unitary(rng, n), random_unitary(rng, n)
        dev = gi.consistency_check(m, InverseKind.MP, ("unitary", u, v))
        scale = 1e-8 * max(np.abs(fc.mp_inverse(m)).max(), 1.0)
        if dev > scale:
            return SuiteResult("unitary", False, trials, f"deviation {dev:.3g}")
    return SuiteResult("unitary", True, trials)


def suite_diagonal(rng, trials: int) -> SuiteResult:
    """UC consistency under nonsingular diagonal scalings."""
    for _ in range(trials):
        n = int(rng.integers(2, 6))
        m = rng.normal(size=(n, n)).astype(complex)
        d = np.exp(rng.uniform(-2, 2, n))
        e = np.exp(rng.uniform(-2, 2, n))
        dev = gi.consistency_check(m, InverseKind.UC, ("diagonal", d, e))
        scale = 1e-8 * max(np.abs(gi.uc_inverse(m)).max(), 1.0)
        if dev > scale:
            return SuiteResult("diagonal", False, trials, f"deviation {dev:.3g}")
    return SuiteResult("diagonal", True, trials)


def suite_similarity(rng, trials: int) -> SuiteResult:
    """SC similarity consistency, exact backend: deviation must be exactly 0.

    Also demonstrates the MP failure mode: for singular matrices the MP
    inverse is generally NOT similarity consistent, so at least one trial
    must show a substantial deviation (that is the expected outcome, not an
    error).
    """
    mp_failures = 0
    for _ in range(trials):
        n = int(rng.integers(2, 6))
        m = random_diagonalizable_rational(rng, n)
        s = random_nonsingular_integer(rng, n)
        dev = gi.consistency_check(m, InverseKind.SC_JORDAN, ("similarity", s))
        if dev != 0:
            return SuiteResult(
                "similarity", False, trials, f"exact SC deviation {dev} != 0"
            )
        mf = random_singular(rng, n, n - 1).real.astype(complex)
        sf = rng.normal(size=(n, n)).astype(complex)
        dev_mp = gi.consistency_check(mf, InverseKind.MP, ("similarity", sf))
        if dev_mp > 1e-3:
            mp_failures += 1
    if mp_failures == 0:
        return SuiteResult(
            "similarity", False, trials,
            "MP never violated similarity consistency (expected demonstration missing)",
        )
    return SuiteResult(
        "similarity", True, trials,
        f"SC exact on all trials; MP violated similarity on {mp_failures}/{trials}",
    )


def suite_drazin(rng, trials: int) -> SuiteResult:
    """Drazin identities: commutativity, A^D A A^D = A^D, A^{k+1} A^D = A^k."""
    for _ in range(trials):
        n = int(rng.integers(2, 6))
        m, _, _ = random_jordan_structured(rng, n)
        d = gi.drazin_inverse(m, backend="exact")
        if not (m @ d - d @ m).is_zero():
            return SuiteResult("drazin", False, trials, "commutativity failed")
        if not (d @ m @ d - d).is_zero():
            return SuiteResult("drazin", False, trials, "D A D != D")
        k = gi.drazin_index(m, backend="exact")
        if not (m.pow(k + 1) @ d - m.pow(k)).is_zero():
            return SuiteResult("drazin", False, trials, "A^{k+1} A^D != A^k")
    return SuiteResult("drazin", True, trials)


SUITES = {
    "penrose": suite_penrose,
    "unitary": suite_unitary,
    "diagonal": suite_diagonal,
    "similarity": suite_similarity,
    "drazin": suite_drazin,
}


def run_suites(names, trials: int, seed: int) -> List[SuiteResult]:
    results = []
    for name in names:
        rng = np.random.default_rng(seed)
        results.append(SUITES[name](rng, trials))
    return results
