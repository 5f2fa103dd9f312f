"""Numerical checks of the Paley-type inequalities for lacunary Fourier series.

* ``theorem1_check``: BMO_c and H^1_c of sum c_k lambda_{h_k} against the
  coefficient norms ||sum |c_k|^2|| and tr (sum |c_k|^2)^(1/2).
* ``lambda4_check``: exact L^4 norm against the row/column S^4 bound.
* ``paley_split``: the A_i / B_i splitting of (yz)^(g_i) for positively
  supported y, z and its two l^2 norm chains.
* ``reH1_norm`` and ``jab_decomposition``: the real-H^1 functionals built on
  the Magnus order and on the sign of J_AB.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Number
from typing import Sequence

import numpy as np

from .errors import LacunarityError
from .fourier import FourierElement, c_delta, trace_moment
from .lacunarity import LacunarityCertificate, psi_lacunary_delta
from .magnus import j_profile
from .norms import (BMOEstimate, TraceEstimate, bmo_norm_estimate, default_radius,
                    h1_norm_estimate, spectral_trace)
from .order import compare, is_positive, positive_part_split
from .words import LengthFunction, Word

H1_SLACK = 1e-6
REL_SLACK = 1e-9

# the single-term floor quoted for the BMO lower direction
SINGLE_TERM_FLOOR = 4.0 / 27.0


def _as_matrix(c):
    if isinstance(c, Number):
        return np.array([[c]], dtype=complex)
    return np.asarray(c, dtype=complex)


def _psd_sqrt(a):
    w, v = np.linalg.eigh(0.5 * (a + a.conj().T))
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T


def column_square(coeffs) -> np.ndarray:
    """sum_k c_k^* c_k."""
    mats = [_as_matrix(c) for c in coeffs]
    return sum((m.conj().T @ m for m in mats), np.zeros_like(mats[0])) if mats else np.zeros((1, 1))


def row_square(coeffs) -> np.ndarray:
    """sum_k c_k c_k^*."""
    mats = [_as_matrix(c) for c in coeffs]
    return sum((m @ m.conj().T for m in mats), np.zeros_like(mats[0])) if mats else np.zeros((1, 1))


def op_norm(a) -> float:
    return float(np.linalg.norm(a, 2)) if a.size else 0.0


def normalised_trace_sqrt(a) -> float:
    """tr(a^(1/2)) / n for a positive n x n matrix."""
    return float(np.trace(_psd_sqrt(a)).real) / a.shape[0]


def schatten_norm(square, p) -> float:
    """||square^(1/2)||_{S^p} with the normalised trace."""
    w = np.clip(np.linalg.eigvalsh(0.5 * (square + square.conj().T)), 0.0, None)
    return float(np.mean(w ** (p / 2.0)) ** (1.0 / p))


def coefficient_side_ratio(coeffs) -> float:
    """max(||sum |c_k|^2||, ||sum |c_k^*|^2||) / min(...)."""
    col = op_norm(column_square(coeffs))
    row = op_norm(row_square(coeffs))
    return max(col, row) / min(col, row)


# ---------------------------------------------------------------------------
# BMO_c and H^1_c of a lacunary sum


@dataclass
class PaleyReport:
    sequence: list[str]
    delta: object
    c_delta: float
    column_norm: float
    row_norm: float
    h1_coefficient_side: float
    bmo: BMOEstimate | None
    h1: TraceEstimate | None
    verdicts: dict
    ratios: dict = field(default_factory=dict)
    radius: int | None = None
    length: str = "word_length"

    @property
    def passed(self):
        return all(self.verdicts.values())

    def to_json(self):
        return {
            "schema": "lacunae.paley.theorem1/1",
            "sequence": self.sequence,
            "length": self.length,
            "delta": self.delta,
            "c_delta": self.c_delta,
            "column_norm": self.column_norm,
            "row_norm": self.row_norm,
            "h1_coefficient_side": self.h1_coefficient_side,
            "bmo": None if self.bmo is None else self.bmo.to_json(),
            "h1": None if self.h1 is None else self.h1.to_json(),
            "verdicts": dict(self.verdicts),
            "ratios": dict(self.ratios),
            "radius": self.radius,
        }


def theorem1_check(sequence: Sequence[Word], coefficients: Sequence, psi: LengthFunction | None = None,
                   radius: int | None = None, t_grid=None, steps: int = 64, seed: int = 0,
                   rank: int | None = None) -> PaleyReport:
    """Both sides of the BMO_c and H^1_c equivalences for x = sum_k c_k lambda_{h_k}.

    Checked (rigorous, since the estimates are lower bounds or Jensen-dominated):
      bmo_upper        operator_bound^2 <= c_delta ||sum c_k^* c_k||
      bmo_floor        expectation_bound^2 >= 4/27 max_k ||c_k||^2
      h1_upper         H^1 estimate <= tr(sum c_k^* c_k)^(1/2) / 2
    Lower-direction constants are reported in ``ratios`` only.
    """
    psi = psi or LengthFunction.word_length()
    seq = list(sequence)
    if len(seq) != len(coefficients):
        raise ValueError("need one coefficient per sequence term")
    cert: LacunarityCertificate = psi_lacunary_delta(psi, seq)
    if not cert.passed:
        raise LacunarityError(cert)
    cd = c_delta(cert.delta)
    if not seq:
        zero = {"bmo_upper": True, "bmo_floor": True, "h1_upper": True}
        return PaleyReport([], cert.delta, cd, 0.0, 0.0, 0.0, None, None, zero, {}, radius, psi.name)
    x = FourierElement.lacunary_sum(seq, list(coefficients))
    radius = default_radius(x.rank, x.dim) if radius is None else radius
    col = column_square(coefficients)
    col_norm, row_norm = op_norm(col), op_norm(row_square(coefficients))
    h1_side = normalised_trace_sqrt(col)
    bmo = bmo_norm_estimate(x, psi, t_grid, radius, seed=seed)
    h1 = h1_norm_estimate(x, psi, radius, steps)
    max_c = max(op_norm(_as_matrix(c)) ** 2 for c in coefficients)
    verdicts = {
        "bmo_upper": bmo.operator_bound ** 2 <= cd * col_norm * (1 + REL_SLACK) + 1e-12,
        "bmo_floor": bmo.expectation_bound ** 2 >= SINGLE_TERM_FLOOR * max_c * (1 - REL_SLACK),
        "h1_upper": h1.value <= 0.5 * h1_side + H1_SLACK,
    }
    ratios = {
        "bmo_operator_sq_over_column": bmo.operator_bound ** 2 / col_norm if col_norm else None,
        "bmo_trace_sq_over_column": bmo.trace_bound ** 2 / col_norm if col_norm else None,
        "h1_side_over_h1_estimate": h1_side / h1.value if h1.value else None,
        "h1_lower_constant_bound": 4 * cd,
    }
    return PaleyReport([str(h) for h in seq], cert.delta, cd, col_norm, row_norm, h1_side,
                       bmo, h1, verdicts, ratios, radius, psi.name)


# ---------------------------------------------------------------------------
# Lambda(4)


@dataclass
class Lambda4Report:
    norm4_fourth: object
    norm4: float
    norm2: float
    row_s4: float
    column_s4: float
    delta: object
    c_delta: float
    bound: float
    verdicts: dict

    @property
    def passed(self):
        return all(self.verdicts.values())

    def to_json(self):
        return {
            "schema": "lacunae.paley.lambda4/1",
            "norm4_fourth": self.norm4_fourth, "norm4": self.norm4, "norm2": self.norm2,
            "row_s4": self.row_s4, "column_s4": self.column_s4, "delta": self.delta,
            "c_delta": self.c_delta, "bound": self.bound, "verdicts": dict(self.verdicts),
        }


def lambda4_check(sequence: Sequence[Word], coefficients: Sequence, psi: LengthFunction | None = None,
                  delta=None, budget: int | None = None) -> Lambda4Report:
    """||x||_4 = tau(|x|^4)^(1/4) exactly, against c_delta^(1/4) * 4 * max(row, column S^4 norms)."""
    psi = psi or LengthFunction.word_length()
    seq = list(sequence)
    if delta is None:
        cert = psi_lacunary_delta(psi, seq)
        if not cert.passed:
            raise LacunarityError(cert)
        delta = cert.delta
    cd = c_delta(delta)
    x = FourierElement.lacunary_sum(seq, list(coefficients))
    kwargs = {} if budget is None else {"budget": budget}
    m4 = trace_moment(x, 2, **kwargs)
    norm4 = float(np.real(m4)) ** 0.25
    m2 = trace_moment(x, 1)
    norm2 = math.sqrt(float(np.real(m2)))
    row_s4 = schatten_norm(row_square(coefficients), 4)
    col_s4 = schatten_norm(column_square(coefficients), 4)
    bound = cd ** 0.25 * 4 * max(row_s4, col_s4)
    verdicts = {
        "upper": norm4 <= bound * (1 + REL_SLACK),
        "lower": norm4 >= norm2 * (1 - REL_SLACK),
    }
    return Lambda4Report(m4, norm4, norm2, row_s4, col_s4, delta, cd, bound, verdicts)


# ---------------------------------------------------------------------------
# A_i / B_i split


@dataclass
class SplitReport:
    targets: list[Word]
    A: list[np.ndarray]
    B: list[np.ndarray]
    K: int
    row_norm_A: float
    column_norm_B: float
    y_norm: float
    z_norm: float
    chain_A: float
    chain_B: float
    residual: object
    verdicts: dict

    @property
    def bound(self):
        return math.sqrt(self.K) * self.y_norm * self.z_norm

    @property
    def passed(self):
        return all(self.verdicts.values())

    def to_json(self):
        def mat(m):
            return [[_num(v) for v in row] for row in m.tolist()]
        return {
            "schema": "lacunae.paley.split/1",
            "targets": [str(g) for g in self.targets],
            "A": [mat(a) for a in self.A], "B": [mat(b) for b in self.B],
            "K": self.K, "row_norm_A": self.row_norm_A, "column_norm_B": self.column_norm_B,
            "y_norm": self.y_norm, "z_norm": self.z_norm, "bound": self.bound,
            "chain_A": self.chain_A, "chain_B": self.chain_B,
            "residual": self.residual, "verdicts": dict(self.verdicts),
        }


def _num(v):
    if isinstance(v, (int, Fraction)):
        return v
    v = complex(v)
    return v.real if v.imag == 0 else [v.real, v.imag]


def _l2_norm(x: FourierElement) -> float:
    """(tau (x) tr)(x^* x)^(1/2), normalised trace."""
    return math.sqrt(sum(float(np.sum(np.abs(np.asarray(c, dtype=complex)) ** 2)) for _, c in x.items()) / x.dim)


def _in_window(h, g, max_degree):
    """h <= g <= h^2."""
    return compare(h, g, max_degree) <= 0 and compare(g, h * h, max_degree) <= 0


def paley_split(y: FourierElement, z: FourierElement, targets: Sequence[Word],
                max_degree: int | None = None) -> SplitReport:
    """A_i = sum_{e<=h<=g_i<h^2} y(h) z(h^-1 g_i), B_i = sum_{e<=h, h^2<=g_i} y(h) z(h^-1 g_i)."""
    y._check(z)
    for name, el in (("y", y), ("z", z)):
        for g in el.support():
            if not is_positive(g, max_degree):
                raise ValueError(f"{name} has support word {g} < e")
    targets = list(targets)
    for g in targets:
        if not is_positive(g, max_degree):
            raise ValueError(f"target {g} is not in the positive cone")
    exact = y.exact and z.exact
    if not exact:
        y, z = y.as_inexact(), z.as_inexact()
    product = y * z
    n = y.dim
    zero = (np.zeros((n, n), dtype=int).astype(object) if exact else np.zeros((n, n), dtype=complex))
    A, B = [], []
    a_hs, b_hs = [], []  # the h's entering each sum, for the window counts
    chain_a = chain_b = 0.0
    for g in targets:
        a_i, b_i = zero.copy(), zero.copy()
        for h, yh in y.items():
            if compare(h, g, max_degree) > 0:
                continue
            f = h.inverse() * g
            zf = z.terms.get(f)
            if zf is None:
                continue
            if compare(h * h, g, max_degree) <= 0:
                b_i = b_i + yh @ zf
                b_hs.append(f)
                chain_b += float(np.sum(np.abs(np.asarray(yh, dtype=complex)) ** 2))
            else:
                a_i = a_i + yh @ zf
                a_hs.append(h)
                chain_a += float(np.sum(np.abs(np.asarray(zf, dtype=complex)) ** 2))
        A.append(a_i)
        B.append(b_i)
    residuals = [(a + b) - product.coefficient(g) for a, b, g in zip(A, B, targets)]
    if exact:
        residual = max((abs(v) for r in residuals for v in r.flat), default=0)
    else:
        residual = float(max((np.max(np.abs(r)) for r in residuals), default=0.0))
    relevant = list(dict.fromkeys(a_hs + b_hs))
    K = max((sum(1 for g in targets if _in_window(h, g, max_degree)) for h in relevant), default=0)
    a_mats = [np.asarray(a, dtype=complex) for a in A]
    b_mats = [np.asarray(b, dtype=complex) for b in B]
    row_a = normalised_trace_sqrt(row_square(a_mats)) if a_mats else 0.0
    col_b = normalised_trace_sqrt(column_square(b_mats)) if b_mats else 0.0
    yn, zn = _l2_norm(y), _l2_norm(z)
    chain_a = yn * math.sqrt(chain_a / n)
    chain_b = zn * math.sqrt(chain_b / n)
    bound = math.sqrt(K) * yn * zn
    slack = 1e-12 + REL_SLACK * bound
    verdicts = {
        "reconstruction": residual == 0 if exact else residual <= 1e-10,
        "row_A_le_bound": row_a <= bound + slack,
        "column_B_le_bound": col_b <= bound + slack,
    }
    return SplitReport(targets, A, B, K, row_a, col_b, yn, zn, chain_a, chain_b, residual, verdicts)


# ---------------------------------------------------------------------------
# real H^1 functionals


@dataclass
class ReH1Estimate:
    value: float
    plus: TraceEstimate
    minus: TraceEstimate

    def to_json(self):
        return {"value": self.value, "plus": self.plus.to_json(), "minus": self.minus.to_json()}


def abs_trace(x: FourierElement, radius: int | None = None, steps: int = 64) -> TraceEstimate:
    """(tau (x) tr)|x| = spectral_trace(sqrt, x^* x)."""
    return spectral_trace("sqrt", x.adjoint() * x, radius, steps)


def reH1_norm(x: FourierElement, radius: int | None = None, steps: int = 64,
              max_degree: int | None = None) -> ReH1Estimate:
    """tau|x_+| + tau|x_-| for the split along the Magnus order."""
    plus, minus = positive_part_split(x, max_degree)
    tp, tm = abs_trace(plus, radius, steps), abs_trace(minus, radius, steps)
    return ReH1Estimate(tp.value + tm.value, tp, tm)


@dataclass
class JABDecomposition:
    p0: FourierElement
    p00: FourierElement
    ab_plus: FourierElement
    ab_minus: FourierElement

    def to_json(self):
        return {"schema": "lacunae.paley.jab/1", "P0": self.p0.to_json(), "P00": self.p00.to_json(),
                "ab_plus": self.ab_plus.to_json(), "ab_minus": self.ab_minus.to_json()}


def jab_decomposition(x: FourierElement) -> JABDecomposition:
    """Restrictions to ker psi_z, to {J_A = J_B = J_AB = 0}, and to the signs of J_AB."""
    if x.rank != 2:
        raise ValueError(f"jab_decomposition needs rank 2, got {x.rank}")
    prof = {g: j_profile(g) for g in x.support()}

    def in_f0(g):
        return prof[g].J_A == 0 and prof[g].J_B == 0

    return JABDecomposition(
        x.restrict(in_f0),
        x.restrict(lambda g: in_f0(g) and prof[g].J_AB == 0),
        x.restrict(lambda g: prof[g].J_AB >= 0),
        x.restrict(lambda g: prof[g].J_AB < 0),
    )


def jab_functional(x: FourierElement, radius: int | None = None, steps: int = 64) -> float:
    """tau|x_{J_AB >= 0}| + tau|x_{J_AB < 0}|."""
    dec = jab_decomposition(x)
    return abs_trace(dec.ab_plus, radius, steps).value + abs_trace(dec.ab_minus, radius, steps).value
