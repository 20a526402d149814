"""Controlled experiment: a rotating, never-diagonalizable rank-2 system
whose similarity-consistent inverse is computed by the thresholded pipeline
and by the fixed-rank pipeline, with per-timestep errors against the
constructed ground truth.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from . import floatcore as fc
from .floatcore import ChainFailure, JordanOptions

__all__ = [
    "SYSTEM_JORDAN",
    "SimConfig",
    "SimRecord",
    "SimSummary",
    "build_system",
    "ground_truth_sc",
    "run_experiment",
    "summarize",
    "random_nonsingular_s",
    "write_csv",
    "read_csv",
]

# rank-2, never diagonalizable: one defective block at 1, one zero eigenvalue
SYSTEM_JORDAN = np.array([[1.0, 1.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 0.0]])
_SYSTEM_JORDAN_PINV = np.array([[1.0, -1.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 0.0]])

MODE_THRESHOLD = "threshold"
MODE_FIXED_RANK = "fixed-rank"


@dataclass(frozen=True)
class SimConfig:
    s_matrix: np.ndarray
    steps: int = 300
    mode: str = MODE_FIXED_RANK
    fixed_rank: int = 2
    seed: int = 0
    jordan_opts: JordanOptions = field(default_factory=JordanOptions)

    def __post_init__(self):
        if self.steps < 1:
            raise ValueError("steps must be >= 1")
        if self.mode not in (MODE_THRESHOLD, MODE_FIXED_RANK):
            raise ValueError(f"unknown mode {self.mode!r}")
        s = np.asarray(self.s_matrix, dtype=float)
        if s.shape != (3, 3) or abs(np.linalg.det(s)) <= 1e-8:
            raise ValueError("S must be a nonsingular 3x3 matrix")


@dataclass(frozen=True)
class SimRecord:
    t: float
    err: float
    chain_failed: bool


@dataclass(frozen=True)
class SimSummary:
    mean_err: float
    max_err: float
    spike_count: int
    spike_cutoff: float


def _rotation_z(t: float) -> np.ndarray:
    c, s = np.cos(t), np.sin(t)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def build_system(s_matrix, t: float) -> np.ndarray:
    """System matrix M(t) = (Q(t) S) J (Q(t) S)^-1, rank 2 for every t."""
    s = np.asarray(s_matrix, dtype=float)
    if abs(np.linalg.det(s)) <= 1e-8:
        raise ValueError("S must be nonsingular")
    qs = _rotation_z(t) @ s
    return qs @ SYSTEM_JORDAN @ np.linalg.inv(qs)


def ground_truth_sc(s_matrix, t: float) -> np.ndarray:
    """SC inverse from the constructed decomposition: (QS) J+ (QS)^-1.

    J+ inverts the nonsingular 2x2 block and zeroes the rest, so this is
    exact up to the float rounding of the two products.
    """
    s = np.asarray(s_matrix, dtype=float)
    if abs(np.linalg.det(s)) <= 1e-8:
        raise ValueError("S must be nonsingular")
    qs = _rotation_z(t) @ s
    return qs @ _SYSTEM_JORDAN_PINV @ np.linalg.inv(qs)


def _sc_from_jordan(m: np.ndarray, cfg: SimConfig) -> np.ndarray:
    form = fc.numerical_jordan(m, cfg.jordan_opts)
    j = form.jordan_matrix()
    if cfg.mode == MODE_FIXED_RANK:
        j_plus = fc.mp_inverse_fixed_rank(j, cfg.fixed_rank)
    else:
        j_plus = fc.mp_inverse(j)  # AUTO threshold
    return form.p @ j_plus @ np.linalg.inv(form.p)


def run_experiment(cfg: SimConfig) -> List[SimRecord]:
    """Per-timestep error series, t_i = 2*pi*i/steps for i = 0..steps-1.

    Chain failures are data, not errors: the record is flagged and the error
    comes from a fallback evaluation (P = I, J = M) so the series always has
    `steps` entries.
    """
    records = []
    for i in range(cfg.steps):
        t = 2.0 * np.pi * i / cfg.steps
        m = build_system(cfg.s_matrix, t)
        truth = ground_truth_sc(cfg.s_matrix, t)
        failed = False
        try:
            x = _sc_from_jordan(m, cfg)
        except ChainFailure:
            failed = True
            if cfg.mode == MODE_FIXED_RANK:
                x = fc.mp_inverse_fixed_rank(m, cfg.fixed_rank)
            else:
                x = fc.mp_inverse(m)
        err = float(np.abs(x - truth).max())
        records.append(SimRecord(t=t, err=err, chain_failed=failed))
    return records


def summarize(records: List[SimRecord], spike_cutoff: float = 1e6) -> SimSummary:
    if not records:
        raise ValueError("no records to summarize")
    errs = np.array([r.err for r in records])
    return SimSummary(
        mean_err=float(errs.mean()),
        max_err=float(errs.max()),
        spike_count=int(np.sum(errs > spike_cutoff)),
        spike_cutoff=spike_cutoff,
    )


def random_nonsingular_s(seed: int) -> np.ndarray:
    """Deterministic random 3x3 integer matrix with |det| >= 1."""
    rng = np.random.default_rng(seed)
    while True:
        s = rng.integers(-9, 10, size=(3, 3)).astype(float)
        if abs(np.linalg.det(s)) >= 1:
            return s


def write_csv(records: List[SimRecord], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "err", "chain_failed"])
        for r in records:
            writer.writerow([repr(r.t), repr(r.err), "true" if r.chain_failed else "false"])


def read_csv(path) -> List[SimRecord]:
    records = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != ["t", "err", "chain_failed"]:
            raise ValueError(f"unexpected CSV header {reader.fieldnames}")
        for row in reader:
            records.append(
                SimRecord(
                    t=float(row["t"]),
                    err=float(row["err"]),
                    chain_failed=row["chain_failed"] == "true",
                )
            )
    return records
