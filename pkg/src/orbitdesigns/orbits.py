"""Projective orbits of seed vectors: canonical line representatives,
deduplicated orbit line sets with uniform weights, and weighted unions.

A line is stored as one unit-norm representative whose first coordinate of
non-negligible magnitude is real and positive, so projectively equal vectors
compare equal entrywise.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import fsum, sqrt

import numpy as np

from .errors import ConsistencyError, InputError, MismatchError
from .groups import FiniteMatrixGroup
from .numerics import DEFAULT_TOL, Rational, Tolerance


@dataclass(frozen=True)
class LineSet:
    """A weighted set of projective lines.

    lines          (L, d) canonical unit representatives
    weights        per-line weights summing to 1; negative entries allowed
                   for signed designs
    exact_weights  optional Fractions matching weights exactly
    group_label    provenance: spec string of the generating group, if any
    seed_literal   provenance: the seed vector literal, if any
    """

    field: str
    lines: np.ndarray
    weights: np.ndarray
    exact_weights: tuple | None = None
    group_label: str | None = None
    seed_literal: str | None = None

    @property
    def dim(self) -> int:
        return self.lines.shape[1]

    @property
    def n_lines(self) -> int:
        return self.lines.shape[0]

    @property
    def signed(self) -> bool:
        return bool((self.weights < 0).any())

    def validate(self, tol: Tolerance = DEFAULT_TOL) -> None:
        norms = np.linalg.norm(self.lines, axis=1)
        if np.abs(norms - 1.0).max() > tol.rel_eq:
            raise ConsistencyError("line representatives must have unit norm")
        gram = np.abs(self.lines @ self.lines.conj().T)
        np.fill_diagonal(gram, 0.0)
        if gram.size and 1.0 - gram.max() <= tol.rel_eq:
            raise ConsistencyError("two lines coincide projectively")
        if abs(fsum(self.weights.tolist()) - 1.0) > tol.rel_eq:
            raise ConsistencyError("weights must sum to 1")


def canonical_line(v: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Unit representative of the line through v, with a positive real pivot.

    Idempotent: applying it to its own output changes nothing.
    """
    v = np.asarray(v)
    norm = np.linalg.norm(v)
    if norm == 0.0:
        raise InputError("zero vector spans no line")
    v = v / norm
    pivot = int(np.argmax(np.abs(v) > tol.rel_eq))
    p = v[pivot]
    if np.iscomplexobj(v):
        return v / (p / abs(p))
    return v if p > 0 else -v


def _canonicalize_rows(rows: np.ndarray, tol: Tolerance) -> np.ndarray:
    """Vectorized canonical_line over the rows of an (n, d) array."""
    norms = np.linalg.norm(rows, axis=1)
    rows = rows / norms[:, None]
    mags = np.abs(rows)
    pivots = (mags > tol.rel_eq).argmax(axis=1)
    p = rows[np.arange(len(rows)), pivots]
    if np.iscomplexobj(rows):
        return rows / (p / np.abs(p))[:, None]
    return rows * np.sign(p)[:, None]


def _line_key(row: np.ndarray, digits: int) -> bytes:
    return (np.round(row, digits) + 0.0).tobytes()


def orbit_lines(
    group: FiniteMatrixGroup,
    seed: np.ndarray,
    tol: Tolerance = DEFAULT_TOL,
    seed_literal: str | None = None,
) -> LineSet:
    """The projective orbit of a seed under the group, uniformly weighted.

    The group permutes the orbit's lines transitively, so every line must be
    hit the same number of times; a spread in multiplicities is an error.
    """
    x = group.embed_seed(np.asarray(seed))
    nx = np.linalg.norm(x)
    if nx == 0.0:
        raise InputError("zero seed vector")
    x = x / nx
    images = np.einsum("nij,j->ni", group.elements, x)
    canon = _canonicalize_rows(images, tol)
    reps: list[np.ndarray] = []
    counts: list[int] = []
    index: dict[bytes, int] = {}
    for row in canon:
        key = _line_key(row, tol.dedup_digits)
        i = index.get(key)
        if i is None:
            index[key] = len(reps)
            reps.append(row)
            counts.append(1)
        else:
            counts[i] += 1
    n = len(reps)
    if len(set(counts)) != 1 or counts[0] * n != group.order:
        raise ConsistencyError(
            f"orbit of {group.spec} is not line-transitive: multiplicities {sorted(set(counts))}"
        )
    w = Fraction(1, n)
    out = LineSet(
        field=group.field,
        lines=np.stack(reps),
        weights=np.full(n, 1.0 / n),
        exact_weights=(w,) * n,
        group_label=group.spec.label,
        seed_literal=seed_literal if seed_literal is not None else format_vector(np.asarray(seed)),
    )
    out.validate(tol)
    return out


def union_lines(
    X: LineSet,
    Y: LineSet,
    beta: tuple[Rational, Rational],
    tol: Tolerance = DEFAULT_TOL,
) -> LineSet:
    """Weighted union: X's weights scaled by beta_X, Y's by beta_Y = 1 - beta_X.

    Lines shared by X and Y are merged with summed weight; lines whose merged
    weight is exactly zero are dropped.
    """
    if X.dim != Y.dim or X.field != Y.field:
        raise MismatchError("union operands must share dimension and field")
    bx, by = Fraction(beta[0]), Fraction(beta[1])
    if bx + by != 1:
        raise InputError("union weighting must satisfy beta_X + beta_Y = 1")
    exact = X.exact_weights is not None and Y.exact_weights is not None
    merged: dict[bytes, int] = {}
    lines: list[np.ndarray] = []
    weights: list = []
    for ls, b in ((X, bx), (Y, by)):
        ws = ls.exact_weights if exact else ls.weights
        for row, w in zip(ls.lines, ws):
            scaled = b * w if exact else float(b) * w
            key = _line_key(row, tol.dedup_digits)
            i = merged.get(key)
            if i is None:
                merged[key] = len(lines)
                lines.append(row)
                weights.append(scaled)
            else:
                weights[i] += scaled
    if exact:
        keep = [i for i, w in enumerate(weights) if w != 0]
    else:
        keep = [i for i, w in enumerate(weights) if abs(w) > 1e-15]
    if not keep:
        raise ConsistencyError("union has no lines with nonzero weight")
    kept_lines = np.stack([lines[i] for i in keep])
    kept_w = [weights[i] for i in keep]
    out = LineSet(
        field=X.field,
        lines=kept_lines,
        weights=np.array([float(w) for w in kept_w]),
        exact_weights=tuple(kept_w) if exact else None,
        group_label=X.group_label if X.group_label == Y.group_label else None,
    )
    out.validate(tol)
    return out


_COMPLEX_ENTRY = re.compile(
    r"^(?P<re>[+-]?[0-9][0-9./]*(?=[+-]))?(?P<im>[+-]?[0-9./]*)[ij]$"
)
_S5_ENTRY = re.compile(
    r"^(?P<p>[+-]?[0-9][0-9./]*(?=[+-]))?(?P<q>[+-]?[0-9./]*)\*?s5$"
)


def _scalar(tok: str) -> float:
    try:
        return float(Fraction(tok))
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad numeric literal {tok!r}") from exc


def _coefficient(tok: str) -> float:
    if tok in ("", "+"):
        return 1.0
    if tok == "-":
        return -1.0
    return _scalar(tok)


def parse_vector(text: str) -> np.ndarray:
    """Parse a comma-separated vector literal.

    Entries are real (`2`, `-0.5`, `1/3`), complex (`1+2i`, `-i`, `0.5-1/3i`),
    or, behind a `sqrt5:` prefix, elements of Q(sqrt 5) written `p+q*s5`.
    """
    text = text.strip()
    golden = text.startswith("sqrt5:")
    if golden:
        text = text[len("sqrt5:"):]
    toks = [t.strip() for t in text.split(",")]
    if not toks or any(t == "" for t in toks):
        raise InputError("empty vector entry")
    values: list[complex] = []
    for tok in toks:
        tok = tok.replace(" ", "")
        if golden and "s5" in tok:
            m = _S5_ENTRY.match(tok)
            if not m:
                raise InputError(f"bad sqrt5 entry {tok!r}")
            p = _scalar(m.group("p")) if m.group("p") else 0.0
            values.append(p + _coefficient(m.group("q")) * sqrt(5.0))
        elif tok.endswith(("i", "j")) and not golden:
            m = _COMPLEX_ENTRY.match(tok)
            if not m:
                raise InputError(f"bad complex entry {tok!r}")
            re_ = _scalar(m.group("re")) if m.group("re") else 0.0
            values.append(complex(re_, _coefficient(m.group("im"))))
        else:
            values.append(complex(_scalar(tok), 0.0))
    arr = np.array(values)
    if np.abs(arr.imag).max() == 0.0:
        return arr.real.copy()
    return arr


def format_vector(v: np.ndarray) -> str:
    """Vector literal round-trippable through parse_vector."""
    v = np.asarray(v)
    if np.iscomplexobj(v):
        parts = []
        for z in v:
            im = f"{z.imag:+.17g}i" if z.imag else ""
            parts.append(f"{z.real:.17g}{im}")
        return ",".join(parts)
    return ",".join(f"{x:.17g}" for x in v)
