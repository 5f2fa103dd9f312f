"""Finite certificates for conditional negativity and Schoenberg positivity."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .words import LengthFunction, Word

REL_TOL = 1e-9


@dataclass
class GramReport:
    test_set: list[Word]
    matrix_dim: int
    max_constrained_eigenvalue: float | None
    tolerance: float
    verdict: str
    symmetric: bool = True
    zero_only_at_identity: bool = True
    witness: list[float] | None = None
    witness_value: float | None = None
    structural_failures: list[str] = field(default_factory=list)

    @property
    def passed(self):
        return self.verdict == "pass"

    def to_json(self):
        return {
            "test_set": [str(w) for w in self.test_set],
            "matrix_dim": self.matrix_dim,
            "max_constrained_eigenvalue": self.max_constrained_eigenvalue,
            "tolerance": self.tolerance,
            "verdict": self.verdict,
            "symmetric": self.symmetric,
            "zero_only_at_identity": self.zero_only_at_identity,
            "witness": self.witness,
            "witness_value": self.witness_value,
            "structural_failures": list(self.structural_failures),
        }


@dataclass
class SchoenbergReport:
    t_grid: list[float]
    min_eigenvalues: list[float]
    tolerances: list[float]
    verdict: str

    @property
    def passed(self):
        return self.verdict == "pass"

    def to_json(self):
        return {
            "t_grid": list(self.t_grid),
            "min_eigenvalues": list(self.min_eigenvalues),
            "tolerances": list(self.tolerances),
            "verdict": self.verdict,
        }


def length_matrix(psi: LengthFunction, words: Sequence[Word]) -> np.ndarray:
    """M[g, h] = psi(g^-1 h)."""
    n = len(words)
    inv = [g.inverse() for g in words]
    m = np.empty((n, n))
    for i in range(n):
        for j in range(n):
            m[i, j] = float(psi(inv[i] * words[j]))
    return m


def mean_zero_basis(n: int) -> np.ndarray:
    """Orthonormal basis (n x (n-1)) of {a : sum a = 0} from a Householder reflector."""
    u = np.full(n, 1.0 / math.sqrt(n))
    v = u.copy()
    v[0] += 1.0  # reflector sending e_1 to -u; u[0] > 0 so no cancellation
    h = np.eye(n) - 2.0 * np.outer(v, v) / (v @ v)
    return h[:, 1:]


def _normalise_witness(vec):
    vec = vec / np.max(np.abs(vec))
    nz = np.flatnonzero(np.abs(vec) > 1e-12)
    if nz.size and vec[nz[0]] < 0:
        vec = -vec
    # snap rounding noise so hand-checkable witnesses print cleanly
    return [float(round(v, 12)) + 0.0 for v in vec]


def cnd_gram_test(psi: LengthFunction, words: Sequence[Word], tol: float | None = None) -> GramReport:
    """Largest eigenvalue of [psi(g^-1 h)] restricted to mean-zero vectors."""
    words = list(words)
    n = len(words)
    failures = []
    symmetric = True
    for g in words:
        a, b = psi(g), psi(g.inverse())
        if not math.isclose(float(a), float(b), rel_tol=1e-12, abs_tol=1e-12):
            symmetric = False
            failures.append(f"psi({g}) = {a} != psi({g.inverse()}) = {b}")
    zero_ok = all((float(psi(g)) == 0.0) == g.is_identity() for g in words)
    if not symmetric:
        return GramReport(words, n, None, 0.0 if tol is None else tol, "fail",
                          symmetric=False, zero_only_at_identity=zero_ok, structural_failures=failures)
    m = length_matrix(psi, words)
    if tol is None:
        tol = REL_TOL * float(np.max(np.abs(m))) if n else 0.0
    if n < 2:
        return GramReport(words, n, None, tol, "pass", zero_only_at_identity=zero_ok)
    q = mean_zero_basis(n)
    projected = q.T @ m @ q
    projected = 0.5 * (projected + projected.T)
    evals, evecs = np.linalg.eigh(projected)
    top = float(evals[-1])
    witness = q @ evecs[:, -1]
    witness_list = _normalise_witness(witness)
    w = np.array(witness_list)
    return GramReport(
        words, n, top, tol, "pass" if top <= tol else "fail",
        zero_only_at_identity=zero_ok, witness=witness_list, witness_value=float(w @ m @ w),
    )


def schoenberg_test(psi: LengthFunction, words: Sequence[Word], t_grid: Sequence[float],
                    tol: float | None = None) -> SchoenbergReport:
    """Minimum eigenvalue of [exp(-t psi(g^-1 h))] for each t in the grid."""
    words = list(words)
    m = length_matrix(psi, words)
    mins, tols = [], []
    ok = True
    for t in t_grid:
        if t < 0:
            raise ValueError(f"Schoenberg test needs t >= 0, got {t}")
        k = np.exp(-t * m)
        level = REL_TOL * float(np.max(np.abs(k))) if tol is None else tol
        lo = float(np.linalg.eigvalsh(0.5 * (k + k.T))[0]) if len(words) else 0.0
        mins.append(lo)
        tols.append(level)
        ok = ok and lo >= -level
    return SchoenbergReport([float(t) for t in t_grid], mins, tols, "pass" if ok else "fail")
