"""
Exact binary forms over Q.

Coefficients are stored in descending powers of x0, so the coefficient at
index k belongs to x0^(d-k) x1^k. The affine chart used throughout is
x0 = 1, x1 = t, where the same list read in ascending powers of t is the
chart polynomial; a drop in its degree is a root at [0:1].
"""

import re
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from itertools import count
from typing import Any

import structlog
from sympy import QQ, Matrix, Poly, Rational, expand, sign, sqrt, symbols

from shared.models import GramReport, format_rational

logger = structlog.get_logger(__name__)

X0, X1, T = symbols("x0 x1 t")

_RATIONAL = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


class TritangentError(ValueError):
    """Base exception for tritangent computations."""


class FormError(TritangentError):
    """Malformed binary form input."""


class DegenerateCurveError(TritangentError):
    """The forms describe a singular or degenerate curve."""


class SharedRootError(DegenerateCurveError):
    """p4 and q3 share a projective root, so the curve is singular there."""


class InfiniteRootError(TritangentError):
    """q3 vanishes at [0:1] and no shear was requested."""


def _sign(x: Any) -> int:
    # sympy comparisons return BooleanAtoms, which do not subtract
    return int(sign(x))


def parse_rational(text: str) -> Rational:
    """
    Parse "p" or "p/q" exactly.

    Raises:
        FormError: On anything else, floats included.
    """
    match = _RATIONAL.match(text)
    if match is None:
        raise FormError(f"not a rational number: {text!r}")
    numerator, denominator = match.group(1), match.group(2) or "1"
    if int(denominator) == 0:
        raise FormError(f"zero denominator in {text!r}")
    return Rational(int(numerator), int(denominator))


@dataclass(frozen=True)
class BinaryForm:
    """Homogeneous polynomial in (x0, x1) with rational coefficients."""

    coefficients: tuple[Rational, ...]

    def __post_init__(self) -> None:
        if not self.coefficients:
            raise FormError("a binary form needs at least one coefficient")
        object.__setattr__(self, "coefficients", tuple(Rational(c) for c in self.coefficients))

    @classmethod
    def of(cls, coefficients: Iterable[Any]) -> "BinaryForm":
        return cls(tuple(coefficients))

    @classmethod
    def parse(cls, text: str, degree: int | None = None) -> "BinaryForm":
        """
        Comma-separated rationals in descending powers of x0.

        Raises:
            FormError: On malformed entries or a wrong coefficient count.
        """
        parts = [p for p in text.split(",") if p.strip()]
        form = cls(tuple(parse_rational(p) for p in parts))
        if degree is not None and form.degree != degree:
            raise FormError(f"expected {degree + 1} coefficients, got {len(parts)}")
        return form

    @classmethod
    def from_expr(cls, expr: Any, degree: int) -> "BinaryForm":
        poly = Poly(expand(expr), X0, X1, domain=QQ)
        return cls(tuple(poly.coeff_monomial(X0 ** (degree - k) * X1**k) for k in range(degree + 1)))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coefficients)

    def __call__(self, x0: Any, x1: Any) -> Rational:
        d = self.degree
        return sum(
            (c * Rational(x0) ** (d - k) * Rational(x1) ** k for k, c in enumerate(self.coefficients)),
            Rational(0),
        )

    def __neg__(self) -> "BinaryForm":
        return BinaryForm(tuple(-c for c in self.coefficients))

    def __mul__(self, other: "BinaryForm") -> "BinaryForm":
        product = [Rational(0)] * (self.degree + other.degree + 1)
        for i, a in enumerate(self.coefficients):
            for j, b in enumerate(other.coefficients):
                product[i + j] += a * b
        return BinaryForm(tuple(product))

    def scaled(self, c: Any) -> "BinaryForm":
        return BinaryForm(tuple(Rational(c) * x for x in self.coefficients))

    def to_expr(self) -> Any:
        d = self.degree
        return sum(c * X0 ** (d - k) * X1**k for k, c in enumerate(self.coefficients))

    def chart(self) -> Poly:
        """f(1, t) as a polynomial in t."""
        return Poly(list(reversed(self.coefficients)), T, domain=QQ)

    def substitute(self, a: Any, b: Any, c: Any, d: Any) -> "BinaryForm":
        """f(a x0 + b x1, c x0 + d x1)."""
        expr = self.to_expr().subs({X0: a * X0 + b * X1, X1: c * X0 + d * X1}, simultaneous=True)
        return BinaryForm.from_expr(expr, self.degree)

    def shear(self, k: int) -> "BinaryForm":
        return self.substitute(1, k, 0, 1)

    def normalized(self) -> "BinaryForm":
        """Sign flipped so the first nonzero coefficient is positive."""
        lead = next((c for c in self.coefficients if c != 0), Rational(0))
        return -self if lead < 0 else self

    def to_payload(self) -> list[str]:
        return [format_rational(c) for c in self.coefficients]


# =============================================================================
# Resultants and real roots
# =============================================================================


def sylvester_matrix(f: BinaryForm, g: BinaryForm) -> Matrix:
    """deg g shifted rows of f, then deg f shifted rows of g."""
    m, n = f.degree, g.degree
    size = m + n
    rows = []
    for shift in range(n):
        row = [Rational(0)] * size
        row[shift : shift + m + 1] = f.coefficients
        rows.append(row)
    for shift in range(m):
        row = [Rational(0)] * size
        row[shift : shift + n + 1] = g.coefficients
        rows.append(row)
    return Matrix(size, size, [x for row in rows for x in row])


def resultant(f: BinaryForm, g: BinaryForm) -> Rational:
    """Homogeneous resultant; zero iff f and g share a projective root."""
    if f.degree + g.degree == 0:
        return Rational(1)
    return Rational(sylvester_matrix(f, g).det())


def sign_changes(values: Sequence[Any]) -> int:
    signs = [_sign(v) for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_count(poly: Poly) -> int:
    """Distinct real roots from the Sturm sequence at -oo and +oo."""
    if poly.degree() <= 0:
        return 0
    sequence = poly.sturm()
    at_plus = [p.LC() for p in sequence]
    at_minus = [p.LC() * (-1) ** p.degree() for p in sequence]
    return sign_changes(at_minus) - sign_changes(at_plus)


def _sign_at_root(p: Poly, factor: Poly, low: Rational, high: Rational) -> int:
    """Sign of p at the root of `factor` isolated in [low, high]."""
    while low != high and p.count_roots(low, high) > 0:
        low, high = factor.refine_root(low, high, steps=1)
    point = low if low == high else (low + high) / 2
    return _sign(p.eval(point))


def real_root_signs(p4: BinaryForm, q3: BinaryForm) -> tuple[int, int]:
    """
    Real projective roots of q3 and those where p4 > 0, with multiplicity.

    Raises:
        DegenerateCurveError: If q3 is the zero form.
        SharedRootError: If p4 and q3 share a root.
    """
    if q3.is_zero:
        raise DegenerateCurveError("q3 is the zero form")
    if resultant(p4, q3) == 0:
        raise SharedRootError("p4 and q3 share a projective root")

    chart = q3.chart()
    p_chart = p4.chart()
    at_infinity = q3.degree - chart.degree()
    real = at_infinity
    positive = at_infinity if p4.coefficients[-1] > 0 else 0

    if chart.degree() > 0:
        _, factors = chart.sqf_list()
        for factor, multiplicity in factors:
            intervals = factor.intervals()
            if len(intervals) != sturm_count(factor):
                raise TritangentError("root isolation disagrees with the Sturm count")
            for (low, high), _ in intervals:
                real += multiplicity
                if _sign_at_root(p_chart, factor, low, high) > 0:
                    positive += multiplicity
    return real, positive


def sqrt_form(p: BinaryForm) -> BinaryForm | None:
    """
    q with q^2 = p and positive first nonzero coefficient, or None.
    """
    if p.is_zero or p.degree % 2:
        return None
    chart = p.chart()
    if (p.degree - chart.degree()) % 2:
        return None
    coefficient, factors = chart.sqf_list()
    if any(multiplicity % 2 for _, multiplicity in factors):
        return None
    root = sqrt(Rational(coefficient))
    if not root.is_Rational:
        return None

    q_chart = Poly(root, T, domain=QQ)
    for factor, multiplicity in factors:
        q_chart = q_chart * factor ** (multiplicity // 2)
    half = p.degree // 2
    ascending = list(reversed(q_chart.all_coeffs()))
    ascending += [Rational(0)] * (half + 1 - len(ascending))
    q = BinaryForm(tuple(ascending)).normalized()
    if q * q != p:
        raise TritangentError("square root does not square back to the input")
    return q


# =============================================================================
# Gram form
# =============================================================================


def power_sums(monic: Sequence[Rational], top: int) -> list[Rational]:
    """Newton power sums P_0..P_top of the roots of t^3 + a2 t^2 + a1 t + a0."""
    _, a2, a1, a0 = monic
    sums = [Rational(3), -a2, a2 * a2 - 2 * a1]
    for m in range(3, top + 1):
        sums.append(-(a2 * sums[m - 1] + a1 * sums[m - 2] + a0 * sums[m - 3]))
    return sums[: top + 1]


def gram_matrix(p4: BinaryForm, q3: BinaryForm, shear: bool = False) -> GramReport:
    """
    Moment matrix M_ij = sum_l p4(c_l) c_l^(i+j) over the roots c_l of q3(1, t).

    Raises:
        FormError: If the degrees are not 4 and 3.
        InfiniteRootError: If q3 vanishes at [0:1] and shear is off.
        SharedRootError: If the resultant vanishes.
        DegenerateCurveError: If q3 has a repeated root.
    """
    if p4.degree != 4 or q3.degree != 3:
        raise FormError(f"expected degrees 4 and 3, got {p4.degree} and {q3.degree}")
    if q3.is_zero:
        raise DegenerateCurveError("q3 is the zero form")

    k = 0
    if q3.coefficients[-1] == 0:
        if not shear:
            raise InfiniteRootError("q3 has a root at [0:1]; pass shear to move it")
        k = next(k for k in count(1) if q3(k, 1) != 0)
        p4, q3 = p4.shear(k), q3.shear(k)
        logger.debug("gram_shear", shift=k)

    res = resultant(p4, q3)
    if res == 0:
        raise SharedRootError("p4 and q3 share a projective root")
    chart = q3.chart()
    discriminant = Rational(chart.discriminant())
    if discriminant == 0:
        raise DegenerateCurveError("q3 has a repeated root")

    sums = power_sums([Rational(c) for c in chart.monic().all_coeffs()], 8)
    matrix = tuple(
        tuple(sum((p4.coefficients[m] * sums[m + i + j] for m in range(5)), Rational(0)) for j in range(3))
        for i in range(3)
    )
    determinant = Rational(Matrix(matrix).det())
    report = GramReport(
        matrix=matrix,
        determinant=determinant,
        resultant_sign=_sign(res),
        discriminant_sign=_sign(discriminant),
        shear=k,
    )
    if report.determinant_sign != report.resultant_sign * report.discriminant_sign:
        raise TritangentError("Gram determinant sign breaks sign(Res) * sign(disc)")
    return report
