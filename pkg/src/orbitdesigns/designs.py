"""Design potentials and strength certification.

The potential of a weighted line set is sum_{x,y} w_x w_y |<x,y>|^(2t); a set
is a (t,t)-design exactly when the potential meets the field's Welch constant
c_t. Potentials are accumulated blockwise with exact compensated summation and
never materialize the full Gram matrix.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import chain

import numpy as np

from .errors import MismatchError
from .numerics import DEFAULT_TOL, Rational, Tolerance, compensated_sum
from .orbits import LineSet

_BLOCK_TERMS = 1 << 18  # soft cap on terms materialized per block


def welch_constant(field: str, d: int, t: int) -> Rational:
    """c_t over R^d or C^d as an exact rational."""
    if d < 1 or t < 1:
        raise ValueError("need d >= 1 and t >= 1")
    if field == "C":
        return Fraction(1, math.comb(t + d - 1, t))
    if field == "R":
        num = 1
        den = 1
        for i in range(t):
            num *= 2 * i + 1
            den *= d + 2 * i
        return Fraction(num, den)
    raise ValueError(f"field must be 'R' or 'C', got {field!r}")


def _int_pow(u: np.ndarray, t: int) -> np.ndarray:
    """u**t by repeated squaring on the bits of t (deterministic, no pow)."""
    result = None
    base = u
    while t:
        if t & 1:
            result = base.copy() if result is None else result * base
        t >>= 1
        if t:
            base = base * base
    return result


def _chunk_terms(A: np.ndarray, wa: np.ndarray, B: np.ndarray, wb: np.ndarray,
                 t: int, lo: int, hi: int):
    """Yield the weighted pair terms for rows lo:hi of A, in a fixed order."""
    rows = max(1, _BLOCK_TERMS // max(1, B.shape[0]))
    Bc = B.conj().T
    for start in range(lo, hi, rows):
        stop = min(start + rows, hi)
        M = A[start:stop] @ Bc
        u = (M * M.conj()).real if np.iscomplexobj(M) else M * M
        P = _int_pow(u, t)
        terms = (wa[start:stop, None] * wb[None, :]) * P
        yield terms.ravel().tolist()


def _pair_sum(A: np.ndarray, wa: np.ndarray, B: np.ndarray, wb: np.ndarray,
              t: int, workers: int = 1) -> float:
    """sum_{a,b} wa wb |<a,b>|^(2t), exact-rounded per worker chunk."""
    n = A.shape[0]
    if workers <= 1 or n < 2 * workers:
        return compensated_sum(chain.from_iterable(_chunk_terms(A, wa, B, wb, t, 0, n)))
    bounds = [round(k * n / workers) for k in range(workers + 1)]
    spans = [(lo, hi) for lo, hi in zip(bounds, bounds[1:]) if hi > lo]

    def one(span):
        lo, hi = span
        return compensated_sum(chain.from_iterable(_chunk_terms(A, wa, B, wb, t, lo, hi)))

    with ThreadPoolExecutor(max_workers=workers) as pool:
        partials = list(pool.map(one, spans))
    return compensated_sum(partials)


def potential(X: LineSet, t: int, workers: int = 1) -> float:
    """Design potential of X at order t."""
    if t < 1:
        raise ValueError("t >= 1 required")
    return _pair_sum(X.lines, X.weights, X.lines, X.weights, t, workers)


def cross_potential(X: LineSet, Y: LineSet, t: int, workers: int = 1) -> float:
    """Mixed potential sum_{x in X, y in Y} w_x w_y |<x,y>|^(2t)."""
    if X.dim != Y.dim or X.field != Y.field:
        raise MismatchError("cross potential needs matching dimension and field")
    if t < 1:
        raise ValueError("t >= 1 required")
    return _pair_sum(X.lines, X.weights, Y.lines, Y.weights, t, workers)


@dataclass(frozen=True)
class DesignReport:
    """Per-order potentials against Welch targets and the certified strength.

    strength is the largest t with |residual| <= rel_eq for every order up to
    t; residuals are (potential - c_t)/c_t.
    """

    t_values: tuple
    potentials: tuple
    targets: tuple  # exact Fractions
    residuals: tuple
    strength: int
    signed: bool

    def residual_at(self, t: int) -> float:
        return self.residuals[self.t_values.index(t)]


def strength(X: LineSet, t_max: int = 12, tol: Tolerance = DEFAULT_TOL,
             workers: int = 1) -> DesignReport:
    """Evaluate potentials for t = 1..t_max and certify the design strength."""
    if t_max < 1:
        raise ValueError("t_max >= 1 required")
    ts, pots, targets, residuals = [], [], [], []
    s = 0
    run = True
    for t in range(1, t_max + 1):
        p = potential(X, t, workers)
        c = welch_constant(X.field, X.dim, t)
        r = (p - float(c)) / float(c)
        ts.append(t)
        pots.append(p)
        targets.append(c)
        residuals.append(r)
        if run and abs(r) <= tol.rel_eq:
            s = t
        else:
            run = False
    return DesignReport(tuple(ts), tuple(pots), tuple(targets), tuple(residuals),
                        s, X.signed)


@dataclass(frozen=True)
class AntipodalSet:
    """A line set doubled to +-x vector pairs, each carrying half the weight.

    A real line set of strength t doubles to a spherical (2t+1)-design;
    spherical_order records 2*source_strength + 1 when the strength is known.
    """

    vectors: np.ndarray
    weights: np.ndarray
    source_strength: int | None = None

    @property
    def spherical_order(self) -> int | None:
        if self.source_strength is None:
            return None
        return 2 * self.source_strength + 1


def double_to_antipodal(X: LineSet, report: DesignReport | None = None) -> AntipodalSet:
    """Emit {x, -x} per line with half its weight each (real fields only)."""
    if X.field != "R":
        raise MismatchError("antipodal doubling is defined for real line sets")
    vectors = np.vstack([X.lines, -X.lines])
    weights = np.concatenate([X.weights, X.weights]) / 2.0
    return AntipodalSet(vectors, weights, report.strength if report else None)


def antipodal_design_check(aset: AntipodalSet, t: int, tol: Tolerance = DEFAULT_TOL) -> dict:
    """Verify the doubled set is a spherical (2t+1)-design.

    Checks antipodal pairing with equal weights, the even-moment equality
    sum w_i w_j <x_i,x_j>^(2t) = c_t, and that the odd moment of order 2t+1
    vanishes; together these certify integration of all polynomials of degree
    <= 2t+1.
    """
    V, w = aset.vectors, aset.weights
    digits = tol.dedup_digits
    index = {(np.round(v, digits) + 0.0).tobytes(): i for i, v in enumerate(V)}
    paired = True
    for i, v in enumerate(V):
        j = index.get((np.round(-v, digits) + 0.0).tobytes())
        if j is None or abs(w[i] - w[j]) > tol.rel_eq:
            paired = False
            break
    even_terms, odd_terms = [], []
    rows = max(1, _BLOCK_TERMS // max(1, V.shape[0]))
    for start in range(0, V.shape[0], rows):
        M = V[start:start + rows] @ V.T
        P = _int_pow(M * M, t)
        ww = w[start:start + rows, None] * w[None, :]
        even_terms.append((ww * P).ravel().tolist())
        odd_terms.append((ww * P * M).ravel().tolist())
    even = compensated_sum(chain.from_iterable(even_terms))
    odd = compensated_sum(chain.from_iterable(odd_terms))
    target = float(welch_constant("R", V.shape[1], t))
    even_residual = (even - target) / target
    passes = paired and abs(even_residual) <= tol.rel_eq and abs(odd) <= tol.rel_eq
    return {
        "paired": paired,
        "even_residual": even_residual,
        "odd_moment": odd,
        "spherical_order": 2 * t + 1,
        "passes": passes,
    }
