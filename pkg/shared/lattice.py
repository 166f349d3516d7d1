"""
Exact integer linear algebra on the rank-9 lattice H = Z(h, e1, ..., e8).

The intersection form is diag(+1, -1, ..., -1) and the canonical class is
K = -3h + e1 + ... + e8, so K.K = 1. Every sublattice operation goes through
the Smith normal form from sympy; nothing here touches floating point.
"""

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import cached_property

import structlog
from sympy import ZZ, Matrix
from sympy.matrices.normalforms import smith_normal_decomp

logger = structlog.get_logger(__name__)

RANK = 9

LatticeVector = tuple[int, ...]
IntMatrix = tuple[tuple[int, ...], ...]

CANONICAL: LatticeVector = (-3, 1, 1, 1, 1, 1, 1, 1, 1)
ZERO: LatticeVector = (0,) * RANK


class LatticeError(ValueError):
    """Base exception for lattice computations."""


class NotContainedError(LatticeError):
    """A vector or sublattice is not contained in the target sublattice."""

    def __init__(self, message: str, vector: LatticeVector | None = None):
        super().__init__(message)
        self.vector = vector


class InvariantFactorError(LatticeError):
    """A quotient has an invariant factor outside {1, 2}."""

    def __init__(self, message: str, factors: tuple[int, ...] = ()):
        super().__init__(message)
        self.factors = factors


class DependentBasisError(LatticeError):
    """Basis vectors are linearly dependent over the rationals."""


# =============================================================================
# Vector and matrix helpers
# =============================================================================


def vector(coords: Iterable[int]) -> LatticeVector:
    """
    Build a lattice vector from nine integer coordinates (a; b1, ..., b8).

    Raises:
        LatticeError: On wrong length or non-integer entries.
    """
    values = tuple(coords)
    if len(values) != RANK:
        raise LatticeError(f"lattice vectors have {RANK} coordinates, got {len(values)}")
    if not all(isinstance(x, int) and not isinstance(x, bool) for x in values):
        raise LatticeError(f"lattice coordinates must be integers: {values}")
    return values


def inner(u: Sequence[int], v: Sequence[int]) -> int:
    """Intersection pairing u.v = a_u a_v - sum b_u,i b_v,i."""
    return u[0] * v[0] - sum(x * y for x, y in zip(u[1:], v[1:], strict=True))


def add(u: Sequence[int], v: Sequence[int]) -> LatticeVector:
    return tuple(x + y for x, y in zip(u, v, strict=True))


def sub(u: Sequence[int], v: Sequence[int]) -> LatticeVector:
    return tuple(x - y for x, y in zip(u, v, strict=True))


def scale(c: int, v: Sequence[int]) -> LatticeVector:
    return tuple(c * x for x in v)


def neg(v: Sequence[int]) -> LatticeVector:
    return tuple(-x for x in v)


def combine(coefficients: Sequence[int], vectors: Sequence[Sequence[int]]) -> LatticeVector:
    """Integer linear combination sum c_i v_i."""
    total = [0] * RANK
    for c, v in zip(coefficients, vectors, strict=True):
        if c:
            for i, x in enumerate(v):
                total[i] += c * x
    return tuple(total)


def identity_matrix(n: int = RANK) -> IntMatrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def form_matrix() -> IntMatrix:
    """Gram matrix J of the intersection form in the standard basis."""
    return tuple(
        tuple((1 if i == 0 else -1) if i == j else 0 for j in range(RANK)) for i in range(RANK)
    )


def apply(matrix: IntMatrix, v: Sequence[int]) -> LatticeVector:
    """Matrix acting on column coordinate vectors."""
    return tuple(sum(m * x for m, x in zip(row, v, strict=True)) for row in matrix)


def matmul(left: IntMatrix, right: IntMatrix) -> IntMatrix:
    columns = list(zip(*right, strict=True))
    return tuple(
        tuple(sum(a * b for a, b in zip(row, col, strict=True)) for col in columns)
        for row in left
    )


def to_sympy(rows: Sequence[Sequence[int]], ncols: int = RANK) -> Matrix:
    if not rows:
        return Matrix.zeros(0, ncols)
    return Matrix([list(row) for row in rows])


def from_sympy(matrix: Matrix) -> IntMatrix:
    """
    Convert a sympy matrix with integral entries to nested tuples.

    Raises:
        LatticeError: If an entry is not an integer.
    """
    rows = []
    for i in range(matrix.rows):
        row = []
        for j in range(matrix.cols):
            entry = matrix[i, j]
            if not entry.is_integer:
                raise LatticeError(f"non-integral entry {entry} at ({i}, {j})")
            row.append(int(entry))
        rows.append(tuple(row))
    return tuple(rows)


def gram_matrix(vectors: Sequence[Sequence[int]]) -> IntMatrix:
    return tuple(tuple(inner(u, v) for v in vectors) for u in vectors)


def matrix_rank(vectors: Sequence[Sequence[int]]) -> int:
    if not vectors:
        return 0
    return int(to_sympy(vectors).rank())


# =============================================================================
# Smith normal form
# =============================================================================


@dataclass(frozen=True)
class SmithDecomposition:
    """
    D = S * M * T with S, T unimodular and D diagonal.

    `diagonal` holds the min(rows, cols) diagonal entries of D in place, so a
    zero entry marks a column of T in the kernel of M.
    """

    rows: int
    cols: int
    diagonal: tuple[int, ...]
    left: IntMatrix
    right: IntMatrix
    left_inverse: IntMatrix
    right_inverse: IntMatrix

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(i for i, d in enumerate(self.diagonal) if d != 0)

    @property
    def rank(self) -> int:
        return len(self.pivots)


def smith_decomposition(rows: Sequence[Sequence[int]], ncols: int = RANK) -> SmithDecomposition:
    """
    Smith normal form of an integer matrix, verified after the fact.

    Args:
        rows: Matrix rows
        ncols: Column count, used when `rows` is empty

    Returns:
        SmithDecomposition with integer inverses of both transforms
    """
    nrows = len(rows)
    if nrows == 0 or ncols == 0:
        return SmithDecomposition(
            rows=nrows,
            cols=ncols,
            diagonal=(),
            left=identity_matrix(nrows),
            right=identity_matrix(ncols),
            left_inverse=identity_matrix(nrows),
            right_inverse=identity_matrix(ncols),
        )

    m = to_sympy(rows, ncols)
    d, s, t = smith_normal_decomp(m, domain=ZZ)
    if s * m * t != d:
        raise LatticeError("Smith decomposition does not reproduce its input")
    for i in range(d.rows):
        for j in range(d.cols):
            if i != j and d[i, j] != 0:
                raise LatticeError("Smith form is not diagonal")

    return SmithDecomposition(
        rows=nrows,
        cols=ncols,
        diagonal=tuple(int(d[i, i]) for i in range(min(nrows, ncols))),
        left=from_sympy(s),
        right=from_sympy(t),
        left_inverse=from_sympy(s.inv()),
        right_inverse=from_sympy(t.inv()),
    )


def integer_kernel(rows: Sequence[Sequence[int]], ncols: int = RANK) -> tuple[LatticeVector, ...]:
    """Basis of {x in Z^ncols : M x = 0}; always saturated."""
    snf = smith_decomposition(rows, ncols)
    pivots = set(snf.pivots)
    return tuple(
        tuple(snf.right[i][j] for i in range(ncols)) for j in range(ncols) if j not in pivots
    )


# =============================================================================
# Sublattices
# =============================================================================


@dataclass(frozen=True)
class Sublattice:
    """A sublattice of H given by a rationally independent basis."""

    basis: tuple[LatticeVector, ...]
    check: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self) -> None:
        for v in self.basis:
            vector(v)
        if self.check and matrix_rank(self.basis) != len(self.basis):
            raise DependentBasisError(f"{len(self.basis)} basis vectors are dependent")

    @classmethod
    def span(cls, generators: Iterable[Sequence[int]]) -> "Sublattice":
        """Sublattice generated by arbitrary, possibly dependent, vectors."""
        rows = [vector(g) for g in generators]
        snf = smith_decomposition(rows)
        basis = tuple(
            scale(snf.diagonal[i], snf.right_inverse[i]) for i in snf.pivots
        )
        return cls(basis, check=False)

    @classmethod
    def full(cls) -> "Sublattice":
        return cls(identity_matrix(RANK), check=False)

    @property
    def rank(self) -> int:
        return len(self.basis)

    @cached_property
    def _snf(self) -> SmithDecomposition:
        return smith_decomposition(self.basis)

    @cached_property
    def gram(self) -> IntMatrix:
        return gram_matrix(self.basis)

    def coordinates(self, v: Sequence[int]) -> tuple[int, ...]:
        """
        Integer coordinates c with sum c_i basis_i = v.

        Raises:
            NotContainedError: If v is not in the sublattice.
        """
        snf = self._snf
        w = [sum(v[i] * snf.right[i][j] for i in range(RANK)) for j in range(RANK)]
        reduced = [0] * self.rank
        for j, wj in enumerate(w):
            d = snf.diagonal[j] if j < len(snf.diagonal) else 0
            if d == 0:
                if wj != 0:
                    raise NotContainedError("vector outside the rational span", tuple(v))
                continue
            if wj % d:
                raise NotContainedError("vector outside the sublattice", tuple(v))
            reduced[j] = wj // d
        return tuple(
            sum(reduced[i] * snf.left[i][k] for i in range(self.rank)) for k in range(self.rank)
        )

    def contains(self, v: Sequence[int]) -> bool:
        try:
            self.coordinates(v)
        except NotContainedError:
            return False
        return True

    def contains_lattice(self, other: "Sublattice") -> bool:
        return all(self.contains(v) for v in other.basis)

    def same_lattice(self, other: "Sublattice") -> bool:
        return self.contains_lattice(other) and other.contains_lattice(self)

    def scaled(self, c: int) -> "Sublattice":
        return Sublattice(tuple(scale(c, v) for v in self.basis), check=False)

    def is_primitive(self) -> bool:
        return saturate(self).same_lattice(self)


def orthogonal_complement(s: Sublattice) -> Sublattice:
    """{x in H : x.s = 0 for every s in S}, computed as an integer kernel."""
    if s.rank == 0:
        return Sublattice.full()
    j = form_matrix()
    constraints = [apply(j, b) for b in s.basis]
    return Sublattice(integer_kernel(constraints), check=False)


def saturate(s: Sublattice) -> Sublattice:
    """(Q-span of S) intersected with H."""
    if s.rank == 0:
        return s
    snf = s._snf
    return Sublattice(tuple(snf.right_inverse[i] for i in snf.pivots), check=False)


def two_kernel(a: Sublattice) -> Sublattice:
    """
    {v in A : v.A lies in 2Z}.

    With D = S G T for the Gram matrix G of A, v = c A_basis qualifies iff
    (c S^-1)_j d_j is even for every j.
    """
    if a.rank == 0:
        return a
    snf = smith_decomposition(a.gram, a.rank)
    basis = []
    for j in range(a.rank):
        d = snf.diagonal[j]
        factor = 1 if d % 2 == 0 else 2
        coefficients = scale(factor, snf.left[j])
        basis.append(combine(coefficients, a.basis))
    return Sublattice(tuple(basis), check=False)


# =============================================================================
# Mod-2 quotients
# =============================================================================


@dataclass(frozen=True)
class QuotientF2:
    """
    The F2 vector space A/B for B inside A with 2A inside B.

    Reduction maps a vector of A to its coordinates on the quotient basis;
    `lifts` are representatives in A of that basis.
    """

    ambient: Sublattice
    divisor: Sublattice
    factors: tuple[int, ...]
    positions: tuple[int, ...]
    transform: IntMatrix
    lifts: tuple[LatticeVector, ...]

    @property
    def dimension(self) -> int:
        return len(self.positions)

    @property
    def order(self) -> int:
        return 2**self.dimension

    def reduce(self, v: Sequence[int]) -> tuple[int, ...]:
        c = self.ambient.coordinates(v)
        return tuple(
            sum(c[k] * self.transform[k][p] for k in range(len(c))) % 2 for p in self.positions
        )

    def lift(self, bits: Sequence[int]) -> LatticeVector:
        return combine([b % 2 for b in bits], self.lifts) if self.lifts else ZERO


def quotient_mod2(a: Sublattice, b: Sublattice) -> QuotientF2:
    """
    Smith-normal-form quotient A/B.

    Raises:
        NotContainedError: If B is not inside A.
        InvariantFactorError: If some invariant factor is not 1 or 2.
    """
    if not a.contains_lattice(b):
        raise NotContainedError("divisor sublattice is not contained in the ambient one")
    if b.rank != a.rank:
        raise InvariantFactorError(
            f"divisor has rank {b.rank} < {a.rank}; quotient is infinite", (0,)
        )
    if a.rank == 0:
        return QuotientF2(a, b, (), (), (), ())

    relations = [a.coordinates(v) for v in b.basis]
    snf = smith_decomposition(relations, a.rank)
    factors = tuple(abs(f) for f in snf.diagonal)
    if any(f not in (1, 2) for f in factors):
        raise InvariantFactorError(f"invariant factors {factors} are not all 1 or 2", factors)

    index = abs(int(to_sympy(relations, a.rank).det()))
    product = 1
    for f in factors:
        product *= f
    if product != index:
        raise LatticeError(f"index {index} disagrees with invariant factors {factors}")

    positions = tuple(j for j, f in enumerate(factors) if f == 2)
    lifts = tuple(combine(snf.right_inverse[p], a.basis) for p in positions)
    logger.debug("quotient_mod2", rank=a.rank, dimension=len(positions))
    return QuotientF2(a, b, factors, positions, snf.right, lifts)
