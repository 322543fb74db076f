"""
Exact integer matrices and binary quadratic forms.

Matrices are stored as tuples of Python ints so entries never overflow.
The form a*x^2 + b*xy + c*y^2 corresponds to the matrix [[a, b/2], [b/2, c]];
internally every congruence is applied to the doubled matrix [[2a, b], [b, 2c]]
so that odd b needs no fractions.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, isqrt
from typing import Iterable, List, Sequence, Tuple

from loguru import logger
from sympy import Matrix

from .errors import (
    InvalidDiscriminantError,
    InvalidParametersError,
    NotPositiveDefiniteError,
    NotUnimodularError,
    SizeMismatchError,
)


@dataclass(frozen=True)
class IntMatrix:
    rows: Tuple[Tuple[int, ...], ...]

    def __post_init__(self) -> None:
        rows = tuple(tuple(int(v) for v in row) for row in self.rows)
        if not rows or not rows[0]:
            raise InvalidParametersError("IntMatrix", "dimensions must be positive")
        if any(len(row) != len(rows[0]) for row in rows):
            raise InvalidParametersError("IntMatrix", "ragged rows")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def of(cls, rows: Iterable[Iterable[int]]) -> "IntMatrix":
        return cls(tuple(tuple(row) for row in rows))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.rows), len(self.rows[0])

    def __getitem__(self, ij: Tuple[int, int]) -> int:
        i, j = ij
        return self.rows[i][j]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(tuple(zip(*self.rows)))

    @property
    def T(self) -> "IntMatrix":
        return self.transpose()

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape[1] != other.shape[0]:
            raise SizeMismatchError("matrix product", self.shape[1], other.shape[0])
        cols = list(zip(*other.rows))
        return IntMatrix(tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in cols) for row in self.rows))

    def scale(self, k: int) -> "IntMatrix":
        return IntMatrix(tuple(tuple(k * v for v in row) for row in self.rows))

    def gram(self) -> "IntMatrix":
        """Columns' Gram matrix, self^T self."""
        return self.T @ self

    def is_symmetric(self) -> bool:
        return self.rows == self.transpose().rows

    def det(self) -> int:
        n, m = self.shape
        if n != m:
            raise SizeMismatchError("determinant", n, m)
        return int(Matrix(self.to_lists()).det())

    def is_positive_definite(self) -> bool:
        """Sylvester's criterion on the leading principal minors."""
        if not self.is_symmetric():
            return False
        n = self.shape[0]
        return all(IntMatrix(tuple(row[:k] for row in self.rows[:k])).det() > 0 for k in range(1, n + 1))

    def to_lists(self) -> List[List[int]]:
        return [list(row) for row in self.rows]

    def __str__(self) -> str:
        return "[" + ", ".join("[" + ", ".join(map(str, row)) + "]" for row in self.rows) + "]"


@dataclass(frozen=True)
class QuadForm:
    """a*x^2 + b*xy + c*y^2."""
    a: int
    b: int
    c: int

    @property
    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def is_positive_definite(self) -> bool:
        return self.a > 0 and self.disc < 0

    def is_primitive(self) -> bool:
        return gcd(gcd(self.a, self.b), self.c) == 1

    def as_tuple(self) -> Tuple[int, int, int]:
        return (self.a, self.b, self.c)

    def matrix(self) -> IntMatrix:
        if self.b % 2:
            raise InvalidParametersError("QuadForm.matrix", f"middle coefficient {self.b} is odd")
        return IntMatrix.of([[self.a, self.b // 2], [self.b // 2, self.c]])

    @classmethod
    def from_matrix(cls, M: IntMatrix) -> "QuadForm":
        if M.shape != (2, 2) or not M.is_symmetric():
            raise InvalidParametersError("QuadForm.from_matrix", f"need a symmetric 2x2 matrix, got {M}")
        return cls(M[0, 0], 2 * M[0, 1], M[1, 1])

    def transform(self, S: IntMatrix) -> "QuadForm":
        """The form in the basis given by the rows of S."""
        doubled = IntMatrix.of([[2 * self.a, self.b], [self.b, 2 * self.c]])
        G = S @ doubled @ S.T
        return QuadForm(G[0, 0] // 2, G[0, 1], G[1, 1] // 2)

    def __str__(self) -> str:
        return f"({self.a}, {self.b}, {self.c})"


# ---------- Smith normal form ----------

@dataclass
class SmithDecomposition:
    """U * M * V = D with U, V unimodular and D diagonal with d1 | d2 | ..."""
    diagonal: Tuple[int, ...]
    U: IntMatrix
    V: IntMatrix
    rank: int


def smith_decomposition(M: IntMatrix) -> SmithDecomposition:
    """Elementary row and column operations, pivoting on the least absolute value."""
    m, n = M.shape
    A = M.to_lists()
    U = IntMatrix.identity(m).to_lists()
    V = IntMatrix.identity(n).to_lists()

    def swap_rows(i: int, j: int) -> None:
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i: int, j: int) -> None:
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(target: int, source: int, k: int) -> None:
        A[target] = [x + k * y for x, y in zip(A[target], A[source])]
        U[target] = [x + k * y for x, y in zip(U[target], U[source])]

    def add_col(target: int, source: int, k: int) -> None:
        for row in A:
            row[target] += k * row[source]
        for row in V:
            row[target] += k * row[source]

    t = 0
    while t < min(m, n):
        pivots = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not pivots:
            break
        _, pi, pj = min(pivots)
        swap_rows(t, pi)
        swap_cols(t, pj)
        p = A[t][t]
        clean = True
        for i in range(t + 1, m):
            q = A[i][t] // p
            if q:
                add_row(i, t, -q)
            clean = clean and A[i][t] == 0
        for j in range(t + 1, n):
            q = A[t][j] // p
            if q:
                add_col(j, t, -q)
            clean = clean and A[t][j] == 0
        if not clean:
            continue
        offender = next((i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p), None)
        if offender is not None:
            add_row(t, offender, 1)
            continue
        if p < 0:
            A[t] = [-v for v in A[t]]
            U[t] = [-v for v in U[t]]
        t += 1
    diagonal = tuple(A[i][i] for i in range(min(m, n)))
    return SmithDecomposition(diagonal=diagonal, U=IntMatrix.of(U), V=IntMatrix.of(V),
                              rank=sum(1 for d in diagonal if d))


def smith_normal_form(M: IntMatrix) -> Tuple[int, ...]:
    return smith_decomposition(M).diagonal


def integer_kernel(M: IntMatrix) -> List[Tuple[int, ...]]:
    """A Z-basis of {v : M v = 0}, from the columns of V beyond the rank."""
    dec = smith_decomposition(M)
    n = M.shape[1]
    return [tuple(dec.V[i, j] for i in range(n)) for j in range(dec.rank, n)]


# ---------- Congruence and reduction ----------

def congruent_transform(A: IntMatrix, S: IntMatrix) -> IntMatrix:
    """S * A * S^T for unimodular S."""
    if S.shape[1] != A.shape[0] or S.shape[0] != S.shape[1] or A.shape[0] != A.shape[1]:
        raise SizeMismatchError("congruent_transform", A.shape[0], S.shape[1])
    d = S.det()
    if abs(d) != 1:
        raise NotUnimodularError(d)
    return S @ A @ S.T


@dataclass
class Reduction:
    reduced: QuadForm
    transform: IntMatrix


def reduce_qf(q: QuadForm) -> Reduction:
    """Gauss reduction to |b| <= a <= c, b >= 0 when |b| = a or a = c.

    Returns the reduced form and an SL2(Z) matrix S with q.transform(S) == reduced.
    """
    if not q.is_positive_definite():
        raise NotPositiveDefiniteError(q.a, q.b, q.c)
    a, b, c = q.a, q.b, q.c
    S = ((1, 0), (0, 1))

    def compose(step: Tuple[Tuple[int, int], Tuple[int, int]]) -> None:
        nonlocal S
        S = tuple(tuple(sum(step[i][k] * S[k][j] for k in range(2)) for j in range(2)) for i in range(2))

    while True:
        if abs(b) > a:
            k = (a - b) // (2 * a)
            a, b, c = a, b + 2 * k * a, c + k * b + k * k * a
            compose(((1, 0), (k, 1)))
            continue
        if a > c:
            a, b, c = c, -b, a
            compose(((0, 1), (-1, 0)))
            continue
        if b < 0 and a == c:
            a, b, c = c, -b, a
            compose(((0, 1), (-1, 0)))
            continue
        if b < 0 and -b == a:
            b, c = a, c
            compose(((1, 0), (1, 1)))
            continue
        break
    return Reduction(reduced=QuadForm(a, b, c), transform=IntMatrix(S))


def reduced_classes(disc: int, primitive_only: bool = True) -> List[QuadForm]:
    """All reduced positive definite forms of the discriminant, with a <= sqrt(|disc|/3)."""
    if disc >= 0 or disc % 4 not in (0, 1):
        raise InvalidDiscriminantError(disc)
    forms = []
    for a in range(1, isqrt(-disc // 3) + 1):
        for b in range(-a + 1, a + 1):
            if (b - disc) % 2:
                continue
            num = b * b - disc
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (b < 0 and a == c):
                continue
            form = QuadForm(a, b, c)
            if primitive_only and not form.is_primitive():
                continue
            forms.append(form)
    forms.sort(key=QuadForm.as_tuple)
    logger.debug(f"disc {disc}: {len(forms)} reduced forms")
    return forms


def matrix_congruent_2x2(A: IntMatrix, B: IntMatrix) -> bool:
    """GL2(Z)-congruence of positive definite 2x2 matrices, decided by reduction."""
    qa = reduce_qf(QuadForm.from_matrix(A)).reduced
    qb = QuadForm.from_matrix(B)
    mirrored = QuadForm(qb.a, -qb.b, qb.c)
    return qa in (reduce_qf(qb).reduced, reduce_qf(mirrored).reduced)


# ---------- Cartan matrices ----------

@dataclass
class CartanCandidates:
    matrices: List[IntMatrix]
    excluded: IntMatrix
    retained: IntMatrix
    snf_retained: Tuple[int, ...]


def cartan_candidates_rs1(r: int) -> CartanCandidates:
    """2^(r-1) times the two reduced classes of discriminant -32; the principal one is excluded."""
    if r < 2:
        raise InvalidParametersError("cartan_candidates_rs1", f"need r >= 2, got {r}")
    scale = 1 << (r - 1)
    principal = QuadForm(1, 0, 8).matrix().scale(scale)
    other = QuadForm(3, 2, 3).matrix().scale(scale)
    return CartanCandidates(matrices=[principal, other], excluded=principal, retained=other,
                            snf_retained=smith_normal_form(other))


@dataclass
class CartanReqS:
    c_bar: IntMatrix
    c_bz: IntMatrix
    snf_bar: Tuple[int, ...]
    snf_bz: Tuple[int, ...]


def c_bar_matrix(r: int) -> IntMatrix:
    q = 1 << (2 * r)
    diagonal, rem_d = divmod(q + 2, 3)
    off, rem_o = divmod(q - 1, 3)
    if rem_d or rem_o:
        raise AssertionError(f"C-bar is not integral at r={r}")
    return IntMatrix.of([[diagonal if i == j else off for j in range(3)] for i in range(3)])


def cartan_req_s(r: int) -> CartanReqS:
    if r < 2:
        raise InvalidParametersError("cartan_req_s", f"need r >= 2, got {r}")
    c_bar = c_bar_matrix(r)
    c_bz = c_bar.scale(2)
    return CartanReqS(c_bar=c_bar, c_bz=c_bz, snf_bar=smith_normal_form(c_bar), snf_bz=smith_normal_form(c_bz))


@dataclass
class CartanFinal:
    matrix: IntMatrix
    snf: Tuple[int, ...]
    det: int


def cartan_r2_final() -> CartanFinal:
    M = IntMatrix.of([[4, 2, 2], [2, 4, 2], [2, 2, 12]])
    return CartanFinal(matrix=M, snf=smith_normal_form(M), det=M.det())


# ---------- Text format ----------

def parse_matrix_text(text: str) -> IntMatrix:
    """`rows cols` on the first line, then row-major integers."""
    tokens = text.split()
    if len(tokens) < 2:
        raise InvalidParametersError("matrix text", "missing `rows cols` header")
    try:
        values = [int(t) for t in tokens]
    except ValueError as e:
        raise InvalidParametersError("matrix text", str(e))
    rows, cols = values[0], values[1]
    body = values[2:]
    if rows <= 0 or cols <= 0:
        raise InvalidParametersError("matrix text", f"bad dimensions {rows} x {cols}")
    if len(body) != rows * cols:
        raise SizeMismatchError("matrix text", rows * cols, len(body))
    return IntMatrix.of([body[i * cols:(i + 1) * cols] for i in range(rows)])


def format_matrix_text(M: IntMatrix) -> str:
    rows, cols = M.shape
    lines = [f"{rows} {cols}"]
    lines.extend(" ".join(str(v) for v in row) for row in M.rows)
    return "\n".join(lines) + "\n"


def as_matrix(rows: Sequence[Sequence[int]]) -> IntMatrix:
    return IntMatrix.of(rows)
