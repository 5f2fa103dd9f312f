"""Operator norms and trace functionals of group-algebra elements, estimated by
compressing the left regular representation to a ball B_R of the free group.

Every estimate carries the radius it was computed at.  Compressed operator
norms are lower bounds for the true norms and grow with R; trace functionals
report the number of moments known to be exact ("horizon").
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import ArpackNoConvergence, LinearOperator, eigsh

from .config import max_basis_size
from .errors import BudgetExceededError, ConvergenceError, PositivityError
from .fourier import (FourierElement, bmo_defect, default_t_grid, h1_integrand)
from .words import LengthFunction, Word, ball, ball_size

DENSE_CUTOFF = 600
DEFAULT_STEPS = 64


def default_radius(rank: int, dim: int = 1) -> int:
    return 8 if rank <= 2 and dim == 1 else 4


@dataclass
class CompressedOperator:
    """P_R lambda(x) P_R acting on l^2(B_R) (x) C^dim."""

    radius: int
    rank: int
    dim: int
    basis: list[Word]
    matrix: sp.csr_matrix
    index: dict = field(repr=False, default_factory=dict)

    @property
    def shape(self):
        return self.matrix.shape

    def toarray(self):
        return self.matrix.toarray()

    def adjoint(self):
        return CompressedOperator(self.radius, self.rank, self.dim, self.basis,
                                  self.matrix.conj().T.tocsr(), self.index)

    def __add__(self, other):
        if (other.radius, other.rank, other.dim) != (self.radius, self.rank, self.dim):
            raise ValueError("compressions live on different spaces")
        return CompressedOperator(self.radius, self.rank, self.dim, self.basis,
                                  (self.matrix + other.matrix).tocsr(), self.index)

    def matvec(self, v):
        return self.matrix @ v

    def rmatvec(self, v):
        return self.matrix.conj().T @ v

    def gram_operator(self) -> LinearOperator:
        """Matrix-free M^* M."""
        n = self.matrix.shape[0]
        m = self.matrix
        mh = m.conj().T.tocsr()
        return LinearOperator((n, n), matvec=lambda v: mh @ (m @ v), dtype=complex)

    def identity_vector(self, i=0):
        """delta_e (x) e_i."""
        v = np.zeros(self.matrix.shape[0], dtype=complex)
        v[self.index[Word.identity(self.rank)] * self.dim + i] = 1.0
        return v


def compress(x: FourierElement, radius: int, cap: int | None = None) -> CompressedOperator:
    """Matrix of P_R lambda(x) P_R; entry ((w', i), (w, j)) = sum_{g w = w'} (c_g)_{ij}."""
    cap = max_basis_size(x.dim) if cap is None else cap
    size = ball_size(x.rank, radius)
    if size > cap:
        raise BudgetExceededError(
            f"compression to ball({x.rank}, {radius}) needs {size} words x dim {x.dim}, cap is {cap}")
    basis = ball(x.rank, radius, cap=cap)
    index = {w: i for i, w in enumerate(basis)}
    n = x.dim
    terms = [(g, np.asarray(c, dtype=complex)) for g, c in x.items() if len(g) <= 2 * radius]
    rows, cols, data = [], [], []
    ii, jj = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    ii, jj = ii.ravel(), jj.ravel()
    for col, w in enumerate(basis):
        for g, c in terms:
            row = index.get(g * w)
            if row is None:
                continue
            rows.append(row * n + ii)
            cols.append(col * n + jj)
            data.append(c.ravel())
    dim = len(basis) * n
    if rows:
        mat = sp.coo_matrix((np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))),
                            shape=(dim, dim)).tocsr()
        mat.sum_duplicates()
        mat.eliminate_zeros()
    else:
        mat = sp.csr_matrix((dim, dim), dtype=complex)
    return CompressedOperator(radius, x.rank, n, basis, mat, index)


# ---------------------------------------------------------------------------
# operator norms


@dataclass
class NormEstimate:
    value: float
    radius: int
    dim: int
    method: str
    iterations: int | None = None
    residual: float | None = None

    def to_json(self):
        return {"value": self.value, "radius": self.radius, "dim": self.dim, "method": self.method,
                "iterations": self.iterations, "residual": self.residual}


def _largest_singular_value(op: CompressedOperator, tol, max_iter, seed):
    m = op.matrix
    dim = m.shape[0]
    if m.nnz == 0:
        return 0.0, "exact-zero", 0, 0.0
    if dim <= DENSE_CUTOFF:
        return float(np.linalg.norm(m.toarray(), 2)), "dense-svd", None, 0.0
    gram = op.gram_operator()
    rng = np.random.default_rng(seed)
    v0 = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    counter = {"n": 0}

    def mv(v):
        counter["n"] += 1
        return gram.matvec(v)

    lin = LinearOperator((dim, dim), matvec=mv, dtype=complex)
    try:
        vals, vecs = eigsh(lin, k=1, which="LA", tol=tol, v0=v0, maxiter=max_iter)
    except ArpackNoConvergence as exc:
        last = float(np.sqrt(max(exc.eigenvalues.real.max(), 0.0))) if len(exc.eigenvalues) else None
        raise ConvergenceError(f"Lanczos did not converge in {max_iter} restarts", last=last) from None
    lam = float(vals[0].real)
    v = vecs[:, 0]
    residual = float(np.linalg.norm(gram.matvec(v) - lam * v))
    return math.sqrt(max(lam, 0.0)), "lanczos", counter["n"], residual


def operator_norm_estimate(x: FourierElement, radius: int | None = None, tol: float = 1e-6,
                           max_iter: int = 5000, seed: int = 0) -> NormEstimate:
    """Largest singular value of compress(x, R): a lower bound for ||x||, non-decreasing in R."""
    radius = default_radius(x.rank, x.dim) if radius is None else radius
    op = compress(x, radius)
    value, method, its, res = _largest_singular_value(op, tol, max_iter, seed)
    return NormEstimate(value, radius, op.shape[0], method, its, res)


def norm_ladder(x: FourierElement, radii: Sequence[int], **kwargs) -> list[NormEstimate]:
    return [operator_norm_estimate(x, r, **kwargs) for r in radii]


# ---------------------------------------------------------------------------
# spectral traces


@dataclass
class TraceEstimate:
    value: float
    radius: int
    horizon: float
    steps: int
    min_ritz: float

    def to_json(self):
        return {"value": self.value, "radius": self.radius, "horizon": self.horizon,
                "steps": self.steps, "min_ritz": self.min_ritz}


_NAMED = {
    "sqrt": np.sqrt,
    "identity": lambda v: v,
    "id": lambda v: v,
}


def _lanczos(matvec, v0, steps):
    """Lanczos with full reorthogonalisation; returns tridiagonal (alpha, beta)."""
    n = v0.shape[0]
    steps = min(steps, n)
    q = v0 / np.linalg.norm(v0)
    basis = [q]
    alpha, beta = [], []
    for k in range(steps):
        w = matvec(basis[-1])
        a = float(np.vdot(basis[-1], w).real)
        alpha.append(a)
        for b in basis:  # twice is enough
            w = w - b * np.vdot(b, w)
        for b in basis:
            w = w - b * np.vdot(b, w)
        nb = float(np.linalg.norm(w))
        if k == steps - 1 or nb <= 1e-12 * max(1.0, abs(a)):
            break
        beta.append(nb)
        basis.append(w / nb)
    return np.array(alpha), np.array(beta)


def _gauss_nodes(alpha, beta):
    t = np.diag(alpha)
    if len(beta):
        t += np.diag(beta, 1) + np.diag(beta, -1)
    theta, vecs = np.linalg.eigh(t)
    return theta, vecs[0, :] ** 2


def spectral_trace(f, y: FourierElement, radius: int | None = None, steps: int = DEFAULT_STEPS,
                   tol: float = 1e-9) -> TraceEstimate:
    """Estimate (tr (x) tau) f(y) for positive y by Lanczos quadrature started at delta_e (x) e_i.

    Moments <Y^m delta_e, delta_e> of the compression are exact for
    m <= (R - r_y) / r_y where r_y is the support radius of y.
    """
    fn: Callable = _NAMED[f] if isinstance(f, str) else f
    radius = default_radius(y.rank, y.dim) if radius is None else radius
    if not y.allclose(y.adjoint(), atol=1e-10 * max(1.0, _coeff_scale(y))):
        raise ValueError("spectral_trace needs a self-adjoint element")
    op = compress(y, radius)
    m = op.matrix
    r_y = y.support_radius()
    horizon = math.inf if r_y == 0 else float(max((radius - r_y) // r_y, 0))
    total = 0.0
    used = 0
    min_ritz = math.inf
    for i in range(y.dim):
        alpha, beta = _lanczos(lambda v: m @ v, op.identity_vector(i), steps)
        theta, weights = _gauss_nodes(alpha, beta)
        scale = max(1.0, float(np.max(np.abs(theta))))
        if theta[0] < -tol * scale:
            raise PositivityError(f"Ritz value {theta[0]:.3e} < 0: element is not positive")
        min_ritz = min(min_ritz, float(theta[0]))
        theta = np.clip(theta, 0.0, None)
        total += float(np.sum(weights * fn(theta)))
        used = max(used, len(alpha))
    return TraceEstimate(total / y.dim, radius, horizon, used, min_ritz)


def _coeff_scale(y: FourierElement):
    return max((float(np.max(np.abs(np.asarray(c, dtype=complex)))) for _, c in y.items()), default=0.0)


# ---------------------------------------------------------------------------
# BMO and H^1


@dataclass
class BMOEstimate:
    """sup_t bounds for ||x||_{BMO_c}: square roots already applied.

    ``trace_bound`` uses (tr (x) tau) of the defect, ``expectation_bound`` the
    operator norm of its lambda_e coefficient, ``operator_bound`` the compressed
    operator norm.  All three are lower bounds for the BMO_c norm.
    """

    trace_bound: float
    expectation_bound: float
    operator_bound: float
    t_trace: float | None
    t_operator: float | None
    radius: int
    t_grid: list[float]
    per_t: list[dict] = field(default_factory=list)

    def to_json(self):
        return {"trace_bound": self.trace_bound, "expectation_bound": self.expectation_bound,
                "operator_bound": self.operator_bound, "t_trace": self.t_trace,
                "t_operator": self.t_operator, "radius": self.radius, "t_grid": list(self.t_grid),
                "per_t": list(self.per_t)}


def bmo_norm_estimate(x: FourierElement, psi: LengthFunction, t_grid: Sequence[float] | None = None,
                      radius: int | None = None, tol: float = 1e-6, seed: int = 0) -> BMOEstimate:
    radius = default_radius(x.rank, x.dim) if radius is None else radius
    grid = [float(t) for t in (default_t_grid(x.support(), psi) if t_grid is None else t_grid)]
    best_tr, best_ex, best_op = 0.0, 0.0, 0.0
    t_tr = t_op = None
    per_t = []
    e = Word.identity(x.rank)
    for t in grid:
        d = bmo_defect(x, t, psi)
        tr = max(float(np.real(d.trace())), 0.0)
        ex = float(np.linalg.norm(np.asarray(d.coefficient(e), dtype=complex), 2))
        op = operator_norm_estimate(d, radius, tol=tol, seed=seed).value
        per_t.append({"t": t, "trace": tr, "expectation": ex, "operator": op})
        if tr > best_tr or t_tr is None:
            best_tr, t_tr = max(tr, best_tr), t
        best_ex = max(best_ex, ex)
        if op > best_op or t_op is None:
            best_op, t_op = max(op, best_op), t
    return BMOEstimate(math.sqrt(best_tr), math.sqrt(best_ex), math.sqrt(best_op),
                       t_tr, t_op, radius, grid, per_t)


def h1_norm_estimate(x: FourierElement, psi: LengthFunction, radius: int | None = None,
                     steps: int = DEFAULT_STEPS) -> TraceEstimate:
    """(tr (x) tau)(int_0^inf |d/ds T_s x|^2 s ds)^(1/2) via spectral_trace(sqrt, ...)."""
    return spectral_trace("sqrt", h1_integrand(x, psi), radius, steps)
