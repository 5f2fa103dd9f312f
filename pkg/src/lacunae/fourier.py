"""Finitely supported operator-valued Fourier series x = sum_g c_g (x) lambda_g.

Coefficients are n x n numpy arrays.  Complex128 is the working dtype; an
exact mode stores Python ints / Fractions in object arrays so that
convolutions and trace moments of integer series stay exact.  Traces on the
matrix factor are normalised (tr(1) = 1).
"""
from __future__ import annotations

import math
from fractions import Fraction
from numbers import Number
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .errors import BudgetExceededError, RankMismatchError
from .words import LengthFunction, Word, parse_word

DEFAULT_MOMENT_BUDGET = 2_000_000


def _is_exact_scalar(v):
    return isinstance(v, (int, Fraction)) and not isinstance(v, bool)


def _as_coeff(value, dim, exact):
    if isinstance(value, np.ndarray):
        arr = value
    elif isinstance(value, Number):
        arr = np.array([[value]], dtype=object if exact else complex)
        if dim != 1:
            raise ValueError(f"scalar coefficient given for dim={dim}")
    else:
        arr = np.array(value, dtype=object if exact else complex)
    if arr.shape != (dim, dim):
        raise ValueError(f"coefficient has shape {arr.shape}, expected {(dim, dim)}")
    if exact:
        if arr.dtype != object:
            if not np.issubdtype(arr.dtype, np.integer):
                raise TypeError("exact mode needs integer or Fraction coefficients")
            arr = arr.astype(object)
            arr = np.vectorize(int, otypes=[object])(arr)
        for v in arr.flat:
            if not _is_exact_scalar(v):
                raise TypeError(f"exact mode coefficient {v!r} is not an int/Fraction")
        return arr
    return np.asarray(arr, dtype=complex)


def _is_zero(arr):
    if arr.dtype == object:
        return all(v == 0 for v in arr.flat)
    return not np.any(arr)


class FourierElement:
    """x = sum_g c_g (x) lambda_g with finitely many non-zero n x n coefficients."""

    __slots__ = ("rank", "dim", "exact", "_terms")

    def __init__(self, rank: int, dim: int = 1, terms: Mapping[Word, object] | None = None, exact: bool = False):
        if dim < 1:
            raise ValueError("coefficient dimension must be >= 1")
        self.rank = rank
        self.dim = dim
        self.exact = exact
        clean = {}
        for g, c in (terms or {}).items():
            if g.rank != rank:
                raise RankMismatchError(f"support word {g} has rank {g.rank}, expected {rank}")
            arr = _as_coeff(c, dim, exact)
            if g in clean:
                arr = clean[g] + arr
            clean[g] = arr
        self._terms = {g: clean[g] for g in sorted(clean, key=Word.sort_key) if not _is_zero(clean[g])}

    # constructors

    @classmethod
    def zero(cls, rank, dim=1, exact=False):
        return cls(rank, dim, {}, exact)

    @classmethod
    def unit(cls, rank, dim=1, exact=False):
        one = np.eye(dim, dtype=int).astype(object) if exact else np.eye(dim, dtype=complex)
        return cls(rank, dim, {Word.identity(rank): one}, exact)

    @classmethod
    def delta(cls, g: Word, coeff=1, dim=1, exact=None):
        if exact is None:
            exact = _is_exact_scalar(coeff)
        return cls(g.rank, dim, {g: coeff}, exact)

    @classmethod
    def from_terms(cls, rank, items: Iterable[tuple[object, object]], dim=1, exact=None):
        """Build from ``(word-or-text, coefficient)`` pairs; repeated words add up."""
        items = [(parse_word(w, rank), c) for w, c in items]
        if exact is None:
            exact = all(_is_exact_scalar(c) or _is_exact_array(c) for _, c in items)
        return cls(rank, dim, _accumulate(items, dim, exact), exact)

    @classmethod
    def lacunary_sum(cls, words: Sequence[Word], coefficients: Sequence, dim=None, exact=None, rank=None):
        """sum_k c_k lambda_{h_k}."""
        if len(words) != len(coefficients):
            raise ValueError("need one coefficient per word")
        if not words:
            if rank is None:
                raise ValueError("rank is required for an empty sum")
            return cls.zero(rank, 1 if dim is None else dim)
        rank = words[0].rank
        if dim is None:
            first = coefficients[0]
            dim = 1 if isinstance(first, Number) else np.asarray(first).shape[0]
        if exact is None:
            exact = all(_is_exact_scalar(c) or _is_exact_array(c) for c in coefficients)
        return cls(rank, dim, _accumulate(list(zip(words, coefficients)), dim, exact), exact)

    # accessors

    @property
    def terms(self):
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def support(self) -> list[Word]:
        return list(self._terms)

    def __len__(self):
        return len(self._terms)

    def is_zero(self):
        return not self._terms

    def coefficient(self, g: Word):
        c = self._terms.get(g)
        if c is not None:
            return c
        if self.exact:
            return np.zeros((self.dim, self.dim), dtype=int).astype(object)
        return np.zeros((self.dim, self.dim), dtype=complex)

    def support_radius(self) -> int:
        return max((len(g) for g in self._terms), default=0)

    def trace(self):
        """tau(x) with the normalised matrix trace."""
        c = self.coefficient(Word.identity(self.rank))
        return _normalised_trace(c, self.dim)

    # algebra

    def _check(self, other):
        if not isinstance(other, FourierElement):
            raise TypeError(f"expected FourierElement, got {type(other).__name__}")
        if other.rank != self.rank or other.dim != self.dim:
            raise RankMismatchError(
                f"rank/dim mismatch: ({self.rank}, {self.dim}) vs ({other.rank}, {other.dim})"
            )

    def as_inexact(self):
        if not self.exact:
            return self
        return FourierElement(self.rank, self.dim,
                              {g: c.astype(complex) for g, c in self._terms.items()}, False)

    def _pair(self, other):
        self._check(other)
        if self.exact == other.exact:
            return self, other, self.exact
        return self.as_inexact(), other.as_inexact(), False

    def __add__(self, other):
        a, b, exact = self._pair(other)
        out = dict(a._terms)
        for g, c in b._terms.items():
            out[g] = out[g] + c if g in out else c
        return FourierElement(self.rank, self.dim, out, exact)

    def __neg__(self):
        return FourierElement(self.rank, self.dim, {g: -c for g, c in self._terms.items()}, self.exact)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s):
        exact = self.exact and _is_exact_scalar(s)
        src = self if exact else self.as_inexact()
        return FourierElement(self.rank, self.dim, {g: c * s for g, c in src._terms.items()}, exact)

    def __mul__(self, other):
        if isinstance(other, FourierElement):
            return fmultiply(self, other)
        if isinstance(other, Number):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, Number):
            return self.scale(other)
        return NotImplemented

    def adjoint(self):
        return fadjoint(self)

    def restrict(self, keep: Callable[[Word], bool]):
        """Coefficientwise restriction of the support."""
        return FourierElement(self.rank, self.dim,
                              {g: c for g, c in self._terms.items() if keep(g)}, self.exact)

    def __eq__(self, other):
        if not isinstance(other, FourierElement):
            return NotImplemented
        if (self.rank, self.dim) != (other.rank, other.dim) or self._terms.keys() != other._terms.keys():
            return False
        return all(np.array_equal(c, other._terms[g]) for g, c in self._terms.items())

    __hash__ = None

    def allclose(self, other, atol=1e-10):
        self._check(other)
        keys = set(self._terms) | set(other._terms)
        return all(
            np.allclose(np.asarray(self.coefficient(g), dtype=complex),
                        np.asarray(other.coefficient(g), dtype=complex), rtol=0, atol=atol)
            for g in keys
        )

    def max_abs_difference(self, other):
        self._check(other)
        keys = set(self._terms) | set(other._terms)
        diffs = [np.max(np.abs(np.asarray(self.coefficient(g) - other.coefficient(g), dtype=complex)))
                 for g in keys]
        return float(max(diffs, default=0.0))

    def chop(self, tol=1e-14):
        if self.exact:
            return self
        return FourierElement(self.rank, self.dim,
                              {g: c for g, c in self._terms.items() if np.max(np.abs(c)) > tol}, False)

    def __repr__(self):
        body = " + ".join(f"{_coeff_repr(c)}*λ[{g}]" for g, c in self._terms.items()) or "0"
        return f"FourierElement(rank={self.rank}, dim={self.dim}, {body})"

    # JSON

    def to_json(self):
        return {
            "rank": self.rank,
            "dim": self.dim,
            "terms": [{"word": str(g), "coeff": _coeff_to_json(c)} for g, c in self._terms.items()],
        }

    @classmethod
    def from_json(cls, data):
        try:
            rank = int(data["rank"])
            dim = int(data.get("dim", 1))
            raw_terms = data["terms"]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"Fourier element JSON needs 'rank' and 'terms': {exc}") from None
        items = []
        for i, t in enumerate(raw_terms):
            if "word" not in t or "coeff" not in t:
                raise ValueError(f"term {i} needs 'word' and 'coeff'")
            items.append((parse_word(t["word"], rank), _coeff_from_json(t["coeff"], dim)))
        exact = all(_is_exact_array(c) for _, c in items)
        return cls(rank, dim, _accumulate(items, dim, exact), exact)


def _is_exact_array(c):
    if isinstance(c, np.ndarray):
        if c.dtype == object:
            return all(_is_exact_scalar(v) for v in c.flat)
        return np.issubdtype(c.dtype, np.integer)
    if isinstance(c, (list, tuple)):
        return all(_is_exact_array(v) for v in c)
    return _is_exact_scalar(c)


def _accumulate(items, dim, exact):
    out = {}
    for g, c in items:
        arr = _as_coeff(c, dim, exact)
        out[g] = out[g] + arr if g in out else arr
    return out


def _normalised_trace(c, dim):
    total = sum(c[i, i] for i in range(dim))
    if c.dtype == object:
        return Fraction(total, dim) if dim > 1 else total
    return complex(total) / dim


def _coeff_repr(c):
    if c.shape == (1, 1):
        return str(c[0, 0])
    return "M" + str(c.tolist())


def _scalar_to_json(v):
    if isinstance(v, Fraction):
        return [str(v) if v.denominator != 1 else v.numerator, 0]
    if isinstance(v, int):
        return [v, 0]
    v = complex(v)
    return [v.real, v.imag]


def _coeff_to_json(c):
    return [_scalar_to_json(v) for v in c.flat]


def _scalar_from_json(v):
    if isinstance(v, bool):
        raise ValueError("boolean is not a coefficient")
    if isinstance(v, int):
        return v
    if isinstance(v, float):
        return v
    if isinstance(v, str):
        return Fraction(v)
    if isinstance(v, (list, tuple)) and len(v) == 2:
        re_, im = (_scalar_from_json(p) for p in v)
        if im == 0 and _is_exact_scalar(re_):
            return re_
        return complex(float(re_), float(im))
    raise ValueError(f"cannot read coefficient entry {v!r}")


def _is_scalar_json(v):
    if isinstance(v, (int, float, str)) and not isinstance(v, bool):
        return True
    return isinstance(v, (list, tuple)) and len(v) == 2 and all(
        isinstance(p, (int, float, str)) and not isinstance(p, bool) for p in v)


def _coeff_from_json(raw, dim):
    """Number, ``[re, im]``, flat row-major list of n^2 entries, or n rows of n entries."""
    if dim == 1 and _is_scalar_json(raw):
        vals = [_scalar_from_json(raw)]
    elif isinstance(raw, (list, tuple)) and len(raw) == dim * dim and all(_is_scalar_json(v) for v in raw):
        vals = [_scalar_from_json(v) for v in raw]
    elif isinstance(raw, (list, tuple)) and len(raw) == dim and all(
            isinstance(r, (list, tuple)) and len(r) == dim and all(_is_scalar_json(v) for v in r) for r in raw):
        vals = [_scalar_from_json(v) for r in raw for v in r]
    else:
        raise ValueError(f"coefficient does not describe a {dim}x{dim} matrix")
    exact = all(_is_exact_scalar(v) for v in vals)
    return np.array(vals, dtype=object if exact else complex).reshape(dim, dim)


# ---------------------------------------------------------------------------
# operations


def fmultiply(x: FourierElement, y: FourierElement) -> FourierElement:
    """Convolution: (c lambda_g)(d lambda_h) = (c d) lambda_{gh}."""
    a, b, exact = x._pair(y)
    out: dict[Word, np.ndarray] = {}
    for g, c in a._terms.items():
        for h, d in b._terms.items():
            gh = g * h
            prod = c @ d
            if gh in out:
                out[gh] = out[gh] + prod
            else:
                out[gh] = prod
    return FourierElement(x.rank, x.dim, out, exact)


def fadjoint(x: FourierElement) -> FourierElement:
    """(c lambda_g)^* = c^* lambda_{g^-1}."""
    out = {}
    for g, c in x._terms.items():
        if c.dtype == object:
            out[g.inverse()] = c.T.copy()
        else:
            out[g.inverse()] = c.conj().T
    return FourierElement(x.rank, x.dim, out, x.exact)


def fadd(x: FourierElement, y: FourierElement) -> FourierElement:
    return x + y


class MultiplierSpec:
    """Fourier multiplier lambda_g -> m(g) lambda_g."""

    def __init__(self, symbol: Callable[[Word], object], description="table"):
        self.symbol = symbol
        self.description = description

    @classmethod
    def semigroup(cls, psi: LengthFunction, t: float):
        """T_t: lambda_g -> exp(-t psi(g)) lambda_g."""
        if t < 0:
            raise ValueError("semigroup time must be non-negative")

        def symbol(g):
            if t == 0:
                return 1
            return math.exp(-t * float(psi(g)))
        return cls(symbol, f"exp(-{t} * {psi.name})")

    @classmethod
    def table(cls, values: Mapping[Word, object], default=0):
        lookup = dict(values)
        return cls(lambda g: lookup.get(g, default), "table")

    def __call__(self, g):
        return self.symbol(g)


def apply_multiplier(spec: MultiplierSpec, x: FourierElement) -> FourierElement:
    scaled = {g: (g, spec(g)) for g in x.support()}
    exact = x.exact and all(_is_exact_scalar(m) for _, m in scaled.values())
    src = x if exact else x.as_inexact()
    return FourierElement(x.rank, x.dim, {g: src._terms[g] * m for g, (_, m) in scaled.items()}, exact)


def semigroup(psi: LengthFunction, t: float, x: FourierElement) -> FourierElement:
    return apply_multiplier(MultiplierSpec.semigroup(psi, t), x)


def trace_pairing(a: FourierElement, b: FourierElement):
    """tau(a b) = sum_g tr(a_g b_{g^-1}) / n without forming the product."""
    a._check(b)
    total = 0
    for g, c in a._terms.items():
        d = b._terms.get(g.inverse())
        if d is not None:
            total = total + _normalised_trace(c @ d, a.dim)
    return total


def _power(y: FourierElement, m: int, budget: int) -> FourierElement:
    result = FourierElement.unit(y.rank, y.dim, y.exact)
    base = y
    while m:
        if m & 1:
            _check_budget(result, base, budget)
            result = result * base
        m >>= 1
        if m:
            _check_budget(base, base, budget)
            base = base * base
    return result


def _check_budget(a, b, budget):
    work = len(a) * len(b)
    if work > budget:
        raise BudgetExceededError(
            f"convolution of supports {len(a)} x {len(b)} = {work} products exceeds budget {budget}"
        )


def trace_moment(x: FourierElement, m: int, budget: int = DEFAULT_MOMENT_BUDGET):
    """tau((x^* x)^m) = ||x||_{2m}^{2m}, exact for integer coefficients."""
    if m < 0:
        raise ValueError("moment order must be non-negative")
    if m == 0:
        return 1
    _check_budget(x, x, budget)
    y = x.adjoint() * x
    hi = _power(y, (m + 1) // 2, budget)
    lo = hi if m % 2 == 0 else _power(y, m // 2, budget)
    value = trace_pairing(hi, lo)
    if isinstance(value, complex) and abs(value.imag) <= 1e-12 * max(1.0, abs(value.real)):
        return value.real
    return value


# ---------------------------------------------------------------------------
# H^1 and BMO kernels


def _ratio(num, den):
    if _is_exact_scalar(num) and _is_exact_scalar(den):
        return Fraction(num) / Fraction(den)
    return float(num) / float(den)


def h1_kernel(words: Sequence[Word], psi: LengthFunction):
    """a_{kj} = psi_k psi_j / (psi_k + psi_j)^2, exact when psi is integer valued."""
    vals = [psi(h) for h in words]
    if any(v == 0 for v in vals):
        raise ValueError("H^1 kernel needs psi(h_k) > 0 for every k")
    return [[_ratio(a * b, (a + b) ** 2) for b in vals] for a in vals]


def bmo_kernel(words: Sequence[Word], t: float, psi: LengthFunction) -> np.ndarray:
    """a_{kj}(t) = exp(-t psi(h_k^-1 h_j)) (1 - exp(-t psi(h_k^-1))) (1 - exp(-t psi(h_j)))."""
    n = len(words)
    a = np.zeros((n, n))
    one_minus = [1.0 - math.exp(-t * float(psi(h))) for h in words]
    one_minus_inv = [1.0 - math.exp(-t * float(psi(h.inverse()))) for h in words]
    for k, hk in enumerate(words):
        hk_inv = hk.inverse()
        for j, hj in enumerate(words):
            a[k, j] = math.exp(-t * float(psi(hk_inv * hj))) * one_minus_inv[k] * one_minus[j]
    return a


def kernel_expansion(x: FourierElement, kernel) -> FourierElement:
    """sum_{k,j} a_{kj} (c_k lambda_{h_k})^* (c_j lambda_{h_j}) over the support of x."""
    words = x.support()
    coeffs = [x.coefficient(h) for h in words]
    exact = x.exact and all(_is_exact_scalar(v) for row in kernel for v in row)
    if not exact:
        coeffs = [np.asarray(c, dtype=complex) for c in coeffs]
    out: dict[Word, np.ndarray] = {}
    for k, hk in enumerate(words):
        ck_star = coeffs[k].T if exact else coeffs[k].conj().T
        hk_inv = hk.inverse()
        for j, hj in enumerate(words):
            a = kernel[k][j]
            if a == 0:
                continue
            g = hk_inv * hj
            term = (ck_star @ coeffs[j]) * a
            out[g] = out[g] + term if g in out else term
    return FourierElement(x.rank, x.dim, out, exact)


def h1_integrand(x: FourierElement, psi: LengthFunction) -> FourierElement:
    """int_0^inf |d/ds T_s x|^2 s ds in closed form."""
    e = Word.identity(x.rank)
    if e in x._terms:
        raise ValueError("H^1 integrand needs the identity outside the support (psi(e) = 0)")
    return kernel_expansion(x, h1_kernel(x.support(), psi))


def bmo_defect(x: FourierElement, t: float, psi: LengthFunction) -> FourierElement:
    """T_t |x - T_t x|^2, computed by convolution."""
    if t < 0:
        raise ValueError("t must be non-negative")
    d = x - semigroup(psi, t, x)
    return semigroup(psi, t, d.adjoint() * d)


def schur_sums(kernel):
    """(sup_j sum_k a_{kj}, sup_k sum_j a_{kj}) of a non-negative kernel."""
    rows = [list(r) for r in kernel]
    if not rows:
        return 0, 0
    for r in rows:
        for v in r:
            if v < 0:
                raise ValueError(f"Schur sums need a non-negative kernel, found {v}")
    n_rows, n_cols = len(rows), len(rows[0])
    col_sums = [sum(rows[k][j] for k in range(n_rows)) for j in range(n_cols)]
    row_sums = [sum(r) for r in rows]
    return max(col_sums), max(row_sums)


def c_delta(delta) -> float:
    """1 + 1/delta + 1/(1 - exp(-delta^2)); tends to 2 as delta -> inf."""
    delta = float(delta)
    if not delta > 0:
        raise ValueError(f"c_delta needs delta > 0, got {delta}")
    if math.isinf(delta):
        return 2.0
    return 1.0 + 1.0 / delta + 1.0 / (-math.expm1(-delta * delta))


def default_t_grid(words: Iterable[Word], psi: LengthFunction, points: int = 48) -> np.ndarray:
    """Log grid on [1e-3 / psi_max, 10 / psi_min] over the positive psi values."""
    vals = [float(psi(g)) for g in words]
    vals = [v for v in vals if v > 0]
    if not vals:
        return np.geomspace(1e-3, 10.0, points)
    return np.geomspace(1e-3 / max(vals), 10.0 / min(vals), points)
