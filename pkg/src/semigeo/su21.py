"""Exact engine for the su(2,1) homogeneous-space example.

Works in the fixed basis e1..e4, f1..f4 of su(2,1) = {X : X^* I_{2,1} + I_{2,1} X = 0},
where e1 spans the isotropy line h0, (e2, e3, e4) span h1 (the rest of the
maximal compact part) and (f1..f4) span h2.  Elements are stored as 8
coordinates; brackets, the invariant form B(X, Y) = -Re tr(XY), projections,
and the degree-4 curvature form are evaluated exactly in rational arithmetic
whenever the inputs are rational (floats are accepted and simply degrade to
float arithmetic).

The one-parameter family of metrics is (X, Y) = (1+t) B(X1, Y1) + B(X2, Y2)
on h1 + h2, t > -1.  The curvature quadratic form, the Gram determinant in
the invariants (x, y, z), the four feasibility inequalities in (t, k), and
the reduced geodesic-flow equations

    (1+t) G1' = 0,          G2' = t [G1, G2]

are all provided, together with vectorized float samplers used by the
region scans and certification runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import (
    BasisDecompositionError,
    DomainError,
    NonTangentError,
    SemigeoError,
)

BASIS_NAMES = ("e1", "e2", "e3", "e4", "f1", "f2", "f3", "f4")
H0 = (0,)
H1 = (1, 2, 3)
H2 = (4, 5, 6, 7)
_BLOCK_OF = (0, 1, 1, 1, 2, 2, 2, 2)


def block_of(index: int) -> int:
    """Which h_j block a basis index belongs to (0, 1 or 2)."""
    return _BLOCK_OF[index]

_F0, _F1 = Fraction(0), Fraction(1)


def _fmat(rows) -> np.ndarray:
    return np.array([[Fraction(v) for v in row] for row in rows], dtype=object)


# Matrix realization: each basis element as (real part, imaginary part).
_BASIS_RE_IM: tuple[tuple[np.ndarray, np.ndarray], ...] = (
    (_fmat([[0, 0, 0], [0, 0, 0], [0, 0, 0]]), _fmat([[1, 0, 0], [0, 1, 0], [0, 0, -2]])),  # e1
    (_fmat([[0, 0, 0], [0, 0, 0], [0, 0, 0]]), _fmat([[1, 0, 0], [0, -1, 0], [0, 0, 0]])),  # e2
    (_fmat([[0, 1, 0], [-1, 0, 0], [0, 0, 0]]), _fmat([[0, 0, 0], [0, 0, 0], [0, 0, 0]])),  # e3
    (_fmat([[0, 0, 0], [0, 0, 0], [0, 0, 0]]), _fmat([[0, 1, 0], [1, 0, 0], [0, 0, 0]])),  # e4
    (_fmat([[0, 0, 1], [0, 0, 0], [1, 0, 0]]), _fmat([[0, 0, 0], [0, 0, 0], [0, 0, 0]])),  # f1
    (_fmat([[0, 0, 0], [0, 0, 1], [0, 1, 0]]), _fmat([[0, 0, 0], [0, 0, 0], [0, 0, 0]])),  # f2
    (_fmat([[0, 0, 0], [0, 0, 0], [0, 0, 0]]), _fmat([[0, 0, 1], [0, 0, 0], [-1, 0, 0]])),  # f3
    (_fmat([[0, 0, 0], [0, 0, 0], [0, 0, 0]]), _fmat([[0, 0, 0], [0, 0, 1], [0, -1, 0]])),  # f4
)


@dataclass(frozen=True)
class AlgebraElement:
    """An element of su(2,1) as coordinates over (e1..e4, f1..f4).

    Coordinates are arbitrary real numbers; use Fractions for the exact
    paths.  Instances are immutable values.
    """

    coords: tuple

    def __post_init__(self):
        if len(self.coords) != 8:
            raise ValueError("AlgebraElement needs exactly 8 coordinates")

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        return AlgebraElement(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return AlgebraElement(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement(tuple(-a for a in self.coords))

    def scale(self, c) -> "AlgebraElement":
        return AlgebraElement(tuple(c * a for a in self.coords))

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.coords)

    def to_matrix(self) -> tuple[np.ndarray, np.ndarray]:
        """The 3x3 matrix realization as (real part, imaginary part)."""
        re = np.zeros((3, 3), dtype=object)
        im = np.zeros((3, 3), dtype=object)
        for c, (bre, bim) in zip(self.coords, _BASIS_RE_IM):
            if c != 0:
                re = re + c * bre
                im = im + c * bim
        return re, im


def zero_element() -> AlgebraElement:
    return AlgebraElement((_F0,) * 8)


def basis_element(which) -> AlgebraElement:
    """Basis element by index 0..7 or by name "e1".."f4"."""
    idx = BASIS_NAMES.index(which) if isinstance(which, str) else int(which)
    coords = [_F0] * 8
    coords[idx] = _F1
    return AlgebraElement(tuple(coords))


def from_coords(values: Sequence) -> AlgebraElement:
    return AlgebraElement(tuple(values))


def from_matrix(re: np.ndarray, im: np.ndarray) -> AlgebraElement:
    """Exact decomposition of a su(2,1) matrix over the basis.

    Reads the coordinates off the matrix entries and verifies the
    reconstruction reproduces the input exactly; anything else raises
    BasisDecompositionError.
    """
    a1 = -im[2][2] / 2
    a2 = im[0][0] - a1
    a3 = re[0][1]
    a4 = im[0][1]
    b1, b3 = re[0][2], im[0][2]
    b2, b4 = re[1][2], im[1][2]
    elem = AlgebraElement((a1, a2, a3, a4, b1, b2, b3, b4))
    back_re, back_im = elem.to_matrix()
    if not (np.array_equal(back_re, re) and np.array_equal(back_im, im)):
        raise BasisDecompositionError("matrix is not in the span of the fixed basis")
    return elem


def matrix_commutator(x: AlgebraElement, y: AlgebraElement) -> tuple[np.ndarray, np.ndarray]:
    """[X, Y] = XY - YX on the matrix realization; exact for rational coords."""
    xr, xi = x.to_matrix()
    yr, yi = y.to_matrix()
    re = (xr.dot(yr) - xi.dot(yi)) - (yr.dot(xr) - yi.dot(xi))
    im = (xr.dot(yi) + xi.dot(yr)) - (yr.dot(xi) + yi.dot(xr))
    return re, im


@lru_cache(maxsize=1)
def _bracket_table() -> tuple:
    """Structure constants: table[i][j] = coordinates of [basis_i, basis_j].

    Built once from exact matrix commutators and exact decomposition.
    """
    table = []
    for i in range(8):
        row = []
        for j in range(8):
            re, im = matrix_commutator(basis_element(i), basis_element(j))
            row.append(from_matrix(re, im).coords)
        table.append(tuple(row))
    return tuple(table)


@lru_cache(maxsize=1)
def _b_gram() -> tuple:
    """Gram matrix of B over the basis, via exact matrix traces."""
    gram = []
    for i in range(8):
        row = []
        for j in range(8):
            xr, xi = basis_element(i).to_matrix()
            yr, yi = basis_element(j).to_matrix()
            prod_re = xr.dot(yr) - xi.dot(yi)
            row.append(-sum(prod_re[d][d] for d in range(3)))
        gram.append(tuple(row))
    return tuple(gram)


def bracket(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    """Lie bracket, bilinear over the structure-constant table.

    Exact when both inputs have rational coordinates; antisymmetry holds
    exactly for any inputs because the table itself is antisymmetric.
    """
    table = _bracket_table()
    out = [0] * 8
    for i, xi in enumerate(x.coords):
        if xi == 0:
            continue
        row = table[i]
        for j, yj in enumerate(y.coords):
            if yj == 0:
                continue
            cell = row[j]
            c = xi * yj
            for k in range(8):
                if cell[k]:
                    out[k] = out[k] + c * cell[k]
    return AlgebraElement(tuple(out))


def form_B(x: AlgebraElement, y: AlgebraElement):
    """The Ad-invariant form B(X, Y) = -Re tr(XY).

    Contracted through the exact basis Gram matrix (which the matrix-trace
    definition produces); exact for rational coordinates.
    """
    gram = _b_gram()
    total = 0
    for i, xi in enumerate(x.coords):
        if xi == 0:
            continue
        row = gram[i]
        for j, yj in enumerate(y.coords):
            if yj != 0 and row[j]:
                total = total + xi * yj * row[j]
    return total


def project(x: AlgebraElement, j: int) -> AlgebraElement:
    """Projection onto h0 (j=0), h1 (j=1) or h2 (j=2); the three sum to x."""
    keep = {0: H0, 1: H1, 2: H2}[j]
    return AlgebraElement(tuple(c if i in keep else 0 * c for i, c in enumerate(x.coords)))


def _require_tangent(x: AlgebraElement) -> None:
    if x.coords[0] != 0:
        raise NonTangentError("element has a nonzero e1 (isotropy) coordinate")


@dataclass(frozen=True)
class ModelParams:
    """Metric deformation t > -1 and curvature level k > 0."""

    t: object
    k: object

    def __post_init__(self):
        if not self.t > -1:
            raise DomainError(f"t must exceed -1, got {self.t}")
        if not self.k > 0:
            raise DomainError(f"k must be positive, got {self.k}")


def metric_t(x: AlgebraElement, y: AlgebraElement, params: ModelParams):
    """(X, Y) = (1+t) B(X1, Y1) + B(X2, Y2); the e1 coordinate is ignored."""
    t = params.t
    return (1 + t) * form_B(project(x, 1), project(y, 1)) + form_B(project(x, 2), project(y, 2))


def curvature_quartic(x: AlgebraElement, y: AlgebraElement, params: ModelParams):
    """The curvature quadratic form (R(X,Y)Y, X) of the deformed metric.

    Evaluates

        (1+t)/4 B([X1,Y1],[X1,Y1]) + (1-3t)/4 B([X2,Y2]_1,[X2,Y2]_1)
        + (1-t-2t^2)/2 B([X1,Y1],[X2,Y2]_1)
        + (1+t)^2/4 B([X,Y]_2,[X,Y]_2) + B([X,Y]_0,[X,Y]_0),

    exact in rational arithmetic when t and the coordinates are rational.
    """
    _require_tangent(x)
    _require_tangent(y)
    t = params.t
    b11 = bracket(project(x, 1), project(y, 1))
    b22_1 = project(bracket(project(x, 2), project(y, 2)), 1)
    full = bracket(x, y)
    f0 = project(full, 0)
    f2 = project(full, 2)
    return (
        (1 + t) * form_B(b11, b11) / 4
        + (1 - 3 * t) * form_B(b22_1, b22_1) / 4
        + (1 - t - 2 * t * t) * form_B(b11, b22_1) / 2
        + (1 + t) * (1 + t) * form_B(f2, f2) / 4
        + form_B(f0, f0)
    )


def curvature_quartic_first_form(x: AlgebraElement, y: AlgebraElement, params: ModelParams):
    """Alternative expansion of (R(X,Y)Y, X); must agree with curvature_quartic.

    (1-3t)/4 B([X,Y]_1,[X,Y]_1) + (t-t^2) B([X1,Y1],[X,Y])
    + t^2 B([X1,Y1],[X1,Y1]) + (1+t)^2/4 B([X,Y]_2,[X,Y]_2)
    + B([X,Y]_0,[X,Y]_0).
    """
    _require_tangent(x)
    _require_tangent(y)
    t = params.t
    b11 = bracket(project(x, 1), project(y, 1))
    full = bracket(x, y)
    f0 = project(full, 0)
    f1 = project(full, 1)
    f2 = project(full, 2)
    return (
        (1 - 3 * t) * form_B(f1, f1) / 4
        + (t - t * t) * form_B(b11, full)
        + t * t * form_B(b11, b11)
        + (1 + t) * (1 + t) * form_B(f2, f2) / 4
        + form_B(f0, f0)
    )


@dataclass(frozen=True)
class XYZ:
    """The nonnegative invariants x, y, z (square roots of determinant sums).

    The squares are also carried; they stay exact for rational inputs.
    """

    x: float
    y: float
    z: float
    x_sq: object
    y_sq: object
    z_sq: object


def xyz_and_gram(x: AlgebraElement, y: AlgebraElement, params: ModelParams):
    """The (x, y, z) invariants and the Gram value of the pair.

    gram = 4 (1+t)^2 x^2 + 4 y^2 - 4 (1+t) z^2, which equals
    (X,X)(Y,Y) - (X,Y)^2 identically (exactly so in rational arithmetic).
    """
    _require_tangent(x)
    _require_tangent(y)
    t = params.t
    a, bf = x.coords[1:4], x.coords[4:8]
    c, df = y.coords[1:4], y.coords[4:8]
    x_sq = sum((a[i] * c[j] - a[j] * c[i]) ** 2 for i in range(3) for j in range(i + 1, 3))
    y_sq = sum((bf[i] * df[j] - bf[j] * df[i]) ** 2 for i in range(4) for j in range(i + 1, 4))
    z_sq = sum((a[i] * df[j] - c[i] * bf[j]) ** 2 for i in range(3) for j in range(4))
    gram = 4 * (1 + t) * (1 + t) * x_sq + 4 * y_sq - 4 * (1 + t) * z_sq
    vals = XYZ(
        x=math.sqrt(float(x_sq)),
        y=math.sqrt(float(y_sq)),
        z=math.sqrt(float(z_sq)),
        x_sq=x_sq,
        y_sq=y_sq,
        z_sq=z_sq,
    )
    return vals, gram


def det_identity_check(x: AlgebraElement, y: AlgebraElement):
    """Residual of B([X,Y]_2,[X,Y]_2) = -2 z^2 + B([X1,Y1],[X2,Y2]_1).

    Exactly zero in rational arithmetic.
    """
    _require_tangent(x)
    _require_tangent(y)
    full2 = project(bracket(x, y), 2)
    lhs = form_B(full2, full2)
    b11 = bracket(project(x, 1), project(y, 1))
    b22_1 = project(bracket(project(x, 2), project(y, 2)), 1)
    a, bf = x.coords[1:4], x.coords[4:8]
    c, df = y.coords[1:4], y.coords[4:8]
    z_sq = sum((a[i] * df[j] - c[i] * bf[j]) ** 2 for i in range(3) for j in range(4))
    return lhs - (-2 * z_sq + form_B(b11, b22_1))


def eta(t) -> float:
    """The smaller root in k of the product inequality's boundary:

        eta(t) = (-3 t^2 - 2 t + 5 - sqrt(45 t^4 + 12 t^3 - 50 t^2 + 12 t + 45))
                 / (16 (t + 1)).
    """
    t = float(t)
    if t <= -1.0:
        raise DomainError(f"eta needs t > -1, got {t}")
    disc = 45 * t**4 + 12 * t**3 - 50 * t**2 + 12 * t + 45
    if disc < 0:
        raise DomainError(f"eta discriminant negative at t = {t}")
    return (-3 * t * t - 2 * t + 5 - math.sqrt(disc)) / (16 * (t + 1))


def ineq4_lhs(t, k):
    """Left side of the product inequality; exact for rational t, k.

    {2(1+t) - 4k(1+t)^2} {(1-3t)/2 - 4k} - (9/4)(1-t^2)^2
    """
    if isinstance(t, int):
        t = Fraction(t)
    if isinstance(k, int):
        k = Fraction(k)
    return (2 * (1 + t) - 4 * k * (1 + t) ** 2) * ((1 - 3 * t) / 2 - 4 * k) - Fraction(9, 4) * (
        1 - t * t
    ) ** 2


@dataclass(frozen=True)
class FeasibilityResult:
    ineq1: bool
    ineq2: bool
    ineq3: bool
    ineq4: bool

    @property
    def overall(self) -> bool:
        return self.ineq1 and self.ineq2 and self.ineq3 and self.ineq4


def feasible(params: ModelParams) -> FeasibilityResult:
    """The four strict inequalities at (t, k); exact for rational inputs.

        k > (1+t)/8,   k < 1/(2(1+t)),   k < (1-3t)/8,   ineq4_lhs(t, k) > 0.

    Boundary cases are infeasible (strict comparisons).
    """
    t, k = params.t, params.k
    if isinstance(t, int):
        t = Fraction(t)
    if isinstance(k, int):
        k = Fraction(k)
    return FeasibilityResult(
        ineq1=k > (1 + t) / 8,
        ineq2=k * 2 * (1 + t) < 1,
        ineq3=k < (1 - 3 * t) / 8,
        ineq4=ineq4_lhs(t, k) > 0,
    )


def feasible_k_interval(t) -> tuple[float, float] | None:
    """The open k-interval where all four inequalities hold, or None.

    Lower endpoint (1+t)/8; upper endpoint min((1-3t)/8, 1/(2(1+t)), eta(t)).
    Nonempty exactly for -1 < t < -3/5, where the minimum is eta(t).
    """
    t = float(t)
    if t <= -1.0:
        raise DomainError(f"t must exceed -1, got {t}")
    lo = (1 + t) / 8
    hi = min((1 - 3 * t) / 8, 1 / (2 * (1 + t)), eta(t))
    if hi <= lo:
        return None
    return lo, hi


def lower_bound_coefficients(t, k) -> tuple:
    """Coefficients (c_xx, c_xy, c_yy, c_zz) of the certified lower bound

        quartic - k*gram >= c_xx x^2 + c_xy x y + c_yy y^2 + c_zz z^2.
    """
    return (
        2 * (1 + t) - 4 * k * (1 + t) ** 2,
        -3 * abs(1 - t * t),
        (1 - 3 * t) / 2 - 4 * k,
        4 * k * (1 + t) - (1 + t) ** 2 / 2,
    )


# ---------------------------------------------------------------------------
# Vectorized float paths (sampling, scans, the reduced geodesic flow)
# ---------------------------------------------------------------------------


@lru_cache(maxsize=1)
def structure_tensor_float() -> np.ndarray:
    """The bracket table as a float array C[i, j, k]."""
    table = _bracket_table()
    c = np.zeros((8, 8, 8))
    for i in range(8):
        for j in range(8):
            for k in range(8):
                c[i, j, k] = float(table[i][j][k])
    return c


@lru_cache(maxsize=1)
def b_weights_float() -> np.ndarray:
    """Diagonal of the B Gram matrix as floats (the matrix is diagonal)."""
    gram = _b_gram()
    for i in range(8):
        for j in range(8):
            if i != j and gram[i][j] != 0:
                raise SemigeoError("B Gram matrix unexpectedly non-diagonal")
    return np.array([float(gram[i][i]) for i in range(8)])


def sample_tangent_pairs(n: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """n pseudorandom coordinate pairs in h1 + h2 (e1 coordinate zero)."""
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((n, 8))
    y = rng.standard_normal((n, 8))
    x[:, 0] = 0.0
    y[:, 0] = 0.0
    return x, y


def _batch_bracket(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return np.einsum("ni,nj,ijk->nk", x, y, structure_tensor_float(), optimize=True)


def _batch_b(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    return np.einsum("nk,k,nk->n", u, b_weights_float(), v)


def batch_quartic(x: np.ndarray, y: np.ndarray, t: float) -> np.ndarray:
    """Vectorized curvature_quartic over (n, 8) float coordinate arrays."""
    m1 = np.zeros(8)
    m1[list(H1)] = 1.0
    m2 = np.zeros(8)
    m2[list(H2)] = 1.0
    m0 = np.zeros(8)
    m0[list(H0)] = 1.0
    b11 = _batch_bracket(x * m1, y * m1)
    b22_1 = _batch_bracket(x * m2, y * m2) * m1
    full = _batch_bracket(x, y)
    f0 = full * m0
    f2 = full * m2
    return (
        (1 + t) / 4 * _batch_b(b11, b11)
        + (1 - 3 * t) / 4 * _batch_b(b22_1, b22_1)
        + (1 - t - 2 * t * t) / 2 * _batch_b(b11, b22_1)
        + (1 + t) ** 2 / 4 * _batch_b(f2, f2)
        + _batch_b(f0, f0)
    )


def batch_xyz_gram(x: np.ndarray, y: np.ndarray, t: float):
    """Vectorized (x, y, z) invariants and Gram values."""
    a, bf = x[:, 1:4], x[:, 4:8]
    c, df = y[:, 1:4], y[:, 4:8]
    x_sq = sum(
        (a[:, i] * c[:, j] - a[:, j] * c[:, i]) ** 2
        for i in range(3)
        for j in range(i + 1, 3)
    )
    y_sq = sum(
        (bf[:, i] * df[:, j] - bf[:, j] * df[:, i]) ** 2
        for i in range(4)
        for j in range(i + 1, 4)
    )
    z_sq = sum((a[:, i] * df[:, j] - c[:, i] * bf[:, j]) ** 2 for i in range(3) for j in range(4))
    gram = 4 * (1 + t) ** 2 * x_sq + 4 * y_sq - 4 * (1 + t) * z_sq
    return np.sqrt(x_sq), np.sqrt(y_sq), np.sqrt(z_sq), gram


def sample_margins(t: float, k: float, n: int, seed: int):
    """Margins quartic - k*gram and per-sample scales for n random pairs."""
    x, y = sample_tangent_pairs(n, seed)
    quart = batch_quartic(x, y, float(t))
    _, _, _, gram = batch_xyz_gram(x, y, float(t))
    margins = quart - float(k) * gram
    scales = np.maximum(1.0, np.maximum(np.abs(quart), np.abs(float(k) * gram)))
    return margins, scales


# ---------------------------------------------------------------------------
# Feasibility grid scan
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GridCell:
    t: float
    k: float
    ineq1: bool
    ineq2: bool
    ineq3: bool
    ineq4: bool
    feasible: bool
    min_margin: float | None


@dataclass(frozen=True)
class FeasibilityGrid:
    """Per-cell feasibility over a (t, k) grid, cells in t-major order."""

    t_values: tuple
    k_values: tuple
    cells: tuple

    def feasible_t_values(self) -> tuple:
        return tuple(sorted({c.t for c in self.cells if c.feasible}))

    def to_csv(self) -> str:
        lines = ["t,k,ineq1,ineq2,ineq3,ineq4,feasible,min_margin"]
        for c in self.cells:
            margin = "" if c.min_margin is None else repr(c.min_margin)
            lines.append(
                f"{c.t!r},{c.k!r},{int(c.ineq1)},{int(c.ineq2)},{int(c.ineq3)},"
                f"{int(c.ineq4)},{int(c.feasible)},{margin}"
            )
        return "\n".join(lines) + "\n"


def scan_region(
    t_values: Sequence,
    k_values: Sequence,
    sample_count: int = 0,
    seed: int = 0,
    workers: int = 1,
) -> FeasibilityGrid:
    """Evaluate the four inequalities (exactly for rational grid values) on a
    grid, optionally adding a sampled minimum curvature margin per cell.

    Cell i (t-major order) draws its samples from default_rng(seed + i), so
    output is identical for any worker count.
    """
    t_values = tuple(t_values)
    k_values = tuple(k_values)
    grid = [(t, k) for t in t_values for k in k_values]

    def eval_cell(args):
        index, (t, k) = args
        res = feasible(ModelParams(t, k))
        margin = None
        if sample_count > 0:
            margins, _ = sample_margins(float(t), float(k), sample_count, seed + index)
            margin = float(margins.min())
        return GridCell(
            t=float(t),
            k=float(k),
            ineq1=res.ineq1,
            ineq2=res.ineq2,
            ineq3=res.ineq3,
            ineq4=res.ineq4,
            feasible=res.overall,
            min_margin=margin,
        )

    jobs = list(enumerate(grid))
    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            cells = list(pool.map(eval_cell, jobs))
    else:
        cells = [eval_cell(j) for j in jobs]
    return FeasibilityGrid(
        t_values=tuple(float(t) for t in t_values),
        k_values=tuple(float(k) for k in k_values),
        cells=tuple(cells),
    )


# ---------------------------------------------------------------------------
# Reduced geodesic flow on the algebra
# ---------------------------------------------------------------------------


def euler_arnold_rhs(gamma: AlgebraElement, params: ModelParams, cross_check: bool = True) -> AlgebraElement:
    """Right side of the reduced flow: G1' = 0 and G2' = t [G1, G2].

    When ``cross_check`` is set, also evaluates phi(G') and [phi(G), G] with
    phi scaling h1 by (1+t), and verifies the two agree (exactly for rational
    inputs, to 1e-9 relative for floats).
    """
    _require_tangent(gamma)
    t = params.t
    g1 = project(gamma, 1)
    g2 = project(gamma, 2)
    rhs = bracket(g1, g2).scale(t)
    if any(rhs.coords[i] != 0 for i in (0, 1, 2, 3)):
        raise SemigeoError("bracket [h1, h2] left h2; structure table corrupt")
    if cross_check:
        phi_gamma = g1.scale(1 + t) + g2
        alt = bracket(phi_gamma, gamma)
        # phi fixes h2, so phi(G') = G' and agreement means alt == rhs.
        exact = all(isinstance(c, (int, Fraction)) for c in gamma.coords) and isinstance(
            t, (int, Fraction)
        )
        if exact:
            if alt.coords != rhs.coords:
                raise SemigeoError("reduced-flow forms disagree in exact arithmetic")
        else:
            scale = 1.0 + max(abs(float(c)) for c in rhs.coords)
            if any(abs(float(a - b)) > 1e-9 * scale for a, b in zip(alt.coords, rhs.coords)):
                raise SemigeoError("reduced-flow forms disagree beyond float tolerance")
    return rhs


def nonintegrability_witness():
    """The pair (f1, f2) and the h0 + h1 part of its bracket (equals e3).

    A nonzero value witnesses that h2 (the horizontal space) is not closed
    under the bracket, i.e. the horizontal distribution is non-integrable.
    """
    x = basis_element("f1")
    y = basis_element("f2")
    br = bracket(x, y)
    part = project(br, 0) + project(br, 1)
    return (x, y), part


# ---------------------------------------------------------------------------
# Serialization (8 exact rationals, comma separated)
# ---------------------------------------------------------------------------


def serialize_element(x: AlgebraElement) -> str:
    return ",".join(str(Fraction(c)) for c in x.coords)


def parse_element(text: str) -> AlgebraElement:
    parts = text.split(",")
    if len(parts) != 8:
        raise DomainError(f"element string needs 8 comma-separated rationals, got {len(parts)}")
    try:
        return AlgebraElement(tuple(Fraction(p.strip()) for p in parts))
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"bad rational in element string: {exc}") from exc
