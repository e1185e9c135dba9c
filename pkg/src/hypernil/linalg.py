"""Dense exact linear algebra over Q(i).

Matrices are small (a few hundred rows at most), so the code favours
clarity and exactness over asymptotics.  The one concession to speed is a
sparse row representation inside the elimination engine, which keeps the
structured systems that arise from Lie-algebra data cheap.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .scalars import ONE, ZERO, Scalar, sc

Vector = list


class Matrix:
    """Immutable dense matrix with Scalar entries."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data: Sequence[Sequence]):
        self.data = tuple(tuple(sc(x) for x in row) for row in data)
        self.rows = len(self.data)
        self.cols = len(self.data[0]) if self.data else 0
        if any(len(row) != self.cols for row in self.data):
            raise ValueError("ragged matrix rows")

    # -- constructors

    @staticmethod
    def identity(n: int) -> "Matrix":
        return Matrix([[ONE if i == j else ZERO for j in range(n)] for i in range(n)])

    @staticmethod
    def zeros(rows: int, cols: int) -> "Matrix":
        return Matrix([[ZERO] * cols for _ in range(rows)])

    @staticmethod
    def from_columns(cols: Sequence[Sequence]) -> "Matrix":
        n = len(cols[0])
        return Matrix([[cols[j][i] for j in range(len(cols))] for i in range(n)])

    # -- basic algebra

    def __add__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix([[a + b for a, b in zip(r1, r2)]
                       for r1, r2 in zip(self.data, other.data)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix([[a - b for a, b in zip(r1, r2)]
                       for r1, r2 in zip(self.data, other.data)])

    def __neg__(self) -> "Matrix":
        return Matrix([[-a for a in row] for row in self.data])

    def __mul__(self, other) -> "Matrix":
        if isinstance(other, (int, Fraction, Scalar)):
            s = sc(other)
            return Matrix([[a * s for a in row] for row in self.data])
        return NotImplemented

    __rmul__ = __mul__

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        bt = list(zip(*other.data))
        out = []
        for row in self.data:
            out.append([_dot(row, col) for col in bt])
        return Matrix(out)

    def apply(self, vec: Sequence) -> Vector:
        """Matrix-vector product, returning a list of Scalars."""
        if len(vec) != self.cols:
            raise ValueError(f"vector length {len(vec)} != cols {self.cols}")
        v = [sc(x) for x in vec]
        return [_dot(row, v) for row in self.data]

    # -- involutions and views

    def transpose(self) -> "Matrix":
        return Matrix(list(zip(*self.data)))

    def conj(self) -> "Matrix":
        return Matrix([[a.conj() for a in row] for row in self.data])

    def conj_transpose(self) -> "Matrix":
        return Matrix([[a.conj() for a in col] for col in zip(*self.data)])

    def column(self, j: int) -> Vector:
        return [row[j] for row in self.data]

    def row(self, i: int) -> Vector:
        return list(self.data[i])

    @property
    def shape(self):
        return (self.rows, self.cols)

    def trace(self) -> Scalar:
        if self.rows != self.cols:
            raise ValueError("trace of a non-square matrix")
        t = ZERO
        for i in range(self.rows):
            t = t + self.data[i][i]
        return t

    # -- predicates

    def is_zero(self) -> bool:
        return all(not a for row in self.data for a in row)

    def is_real(self) -> bool:
        return all(a.is_real() for row in self.data for a in row)

    def is_hermitian(self) -> bool:
        if self.rows != self.cols:
            return False
        for i in range(self.rows):
            for j in range(i, self.cols):
                if self.data[i][j] != self.data[j][i].conj():
                    return False
        return True

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.data == other.data

    def __hash__(self):
        return hash(self.data)

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(a) for a in row) for row in self.data)
        return f"Matrix[{body}]"

    def _same_shape(self, other: "Matrix"):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    # -- elimination-backed operations

    def det(self) -> Scalar:
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        rows = [list(r) for r in self.data]
        n = self.rows
        det = ONE
        for col in range(n):
            piv = next((r for r in range(col, n) if rows[r][col]), None)
            if piv is None:
                return ZERO
            if piv != col:
                rows[col], rows[piv] = rows[piv], rows[col]
                det = -det
            det = det * rows[col][col]
            inv = ONE / rows[col][col]
            for r in range(col + 1, n):
                f = rows[r][col] * inv
                if f:
                    for c in range(col, n):
                        rows[r][c] = rows[r][c] - f * rows[col][c]
        return det

    def inverse(self) -> "Matrix":
        if self.rows != self.cols:
            raise ValueError("inverse of a non-square matrix")
        res = solve(self, Matrix.identity(self.rows))
        if res.status != "unique":
            raise ValueError("matrix is singular")
        return Matrix.from_columns(res.solution_columns)

    def rank(self) -> int:
        return len(_rref([_row_to_dict(r) for r in self.data], self.cols)[0])


def commutator(a: Matrix, b: Matrix) -> Matrix:
    return a @ b - b @ a


def _dot(row, col) -> Scalar:
    t = ZERO
    for a, b in zip(row, col):
        if a and b:
            t = t + a * b
    return t


def _row_to_dict(row) -> dict:
    return {j: a for j, a in enumerate(row) if a}


# ---------------------------------------------------------------------------
# elimination engine: reduced row echelon form on sparse rows
# ---------------------------------------------------------------------------

def _rref(rows: list[dict], ncols: int):
    """Reduce sparse rows to reduced row echelon form.

    Returns (pivots, reduced) where pivots maps a pivot column to its row
    (a dict col -> Scalar with pivot entry 1, all other pivot columns
    eliminated).  Rows may include column indices >= ncols (augmented
    columns); pivots are only chosen among columns < ncols.
    """
    pivots: dict[int, dict] = {}
    inconsistent = []
    for row in rows:
        row = dict(row)
        placed = False
        while True:
            cols = [c for c in row if c < ncols and row[c]]
            if not cols:
                break
            lead = min(cols)
            if lead not in pivots:
                inv = ONE / row[lead]
                row = {c: v * inv for c, v in row.items() if v}
                # eliminate this column from existing pivot rows
                for pcol, prow in pivots.items():
                    if lead in prow:
                        f = prow[lead]
                        for c, v in row.items():
                            nv = prow.get(c, ZERO) - f * v
                            if nv:
                                prow[c] = nv
                            elif c in prow:
                                del prow[c]
                pivots[lead] = row
                placed = True
                break
            prow = pivots[lead]
            f = row[lead]
            for c, v in prow.items():
                nv = row.get(c, ZERO) - f * v
                if nv:
                    row[c] = nv
                elif c in row:
                    del row[c]
        if not placed:
            leftovers = {c: v for c, v in row.items() if v}
            if leftovers:
                inconsistent.append(leftovers)
    return pivots, inconsistent


class SolveResult:
    """Outcome of an exact linear solve.

    status is one of 'unique', 'affine', 'inconsistent'.  For solvable
    systems `particular` holds one solution and `kernel_basis` spans the
    homogeneous solutions (empty when unique).  When the right-hand side
    was a matrix, `solution_columns` holds one solution column per RHS
    column (unique case only).
    """

    __slots__ = ("status", "particular", "kernel_basis", "solution_columns")

    def __init__(self, status, particular=None, kernel_basis=None, solution_columns=None):
        self.status = status
        self.particular = particular
        self.kernel_basis = kernel_basis or []
        self.solution_columns = solution_columns


def solve(a: Matrix, b) -> SolveResult:
    """Solve a x = b exactly; b may be a vector or a Matrix of columns."""
    if isinstance(b, Matrix):
        bcols = [b.column(j) for j in range(b.cols)]
        if b.rows != a.rows:
            raise ValueError(f"rhs has {b.rows} rows, matrix has {a.rows}")
    else:
        bcols = [[sc(x) for x in b]]
        if len(bcols[0]) != a.rows:
            raise ValueError(f"rhs has {len(bcols[0])} entries, matrix has {a.rows} rows")

    n = a.cols
    rows = []
    for i in range(a.rows):
        row = _row_to_dict(a.data[i])
        for k, col in enumerate(bcols):
            if col[i]:
                row[n + k] = col[i]
        rows.append(row)
    pivots, leftovers = _rref(rows, n)
    if leftovers:
        return SolveResult("inconsistent")

    kernel_basis = _kernel_from_rref(pivots, n)
    sols = []
    for k in range(len(bcols)):
        x = [ZERO] * n
        for pcol, prow in pivots.items():
            x[pcol] = prow.get(n + k, ZERO)
        sols.append(x)
    if kernel_basis:
        return SolveResult("affine", sols[0], kernel_basis, sols)
    return SolveResult("unique", sols[0], [], sols)


def kernel(a: Matrix) -> list[Vector]:
    """Exact basis of the null space of a."""
    pivots, _ = _rref([_row_to_dict(r) for r in a.data], a.cols)
    return _kernel_from_rref(pivots, a.cols)


def _kernel_from_rref(pivots: dict, n: int) -> list[Vector]:
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [ZERO] * n
        v[fc] = ONE
        for pcol, prow in pivots.items():
            if fc in prow:
                v[pcol] = -prow[fc]
        basis.append(v)
    return basis


# ---------------------------------------------------------------------------
# incremental spans
# ---------------------------------------------------------------------------

class Subspace:
    """Incremental exact span of vectors in Q(i)^n (reduced echelon rows)."""

    def __init__(self, n: int):
        self.n = n
        self._pivots: dict[int, dict] = {}

    @property
    def dim(self) -> int:
        return len(self._pivots)

    def _reduce(self, vec) -> dict:
        row = {j: sc(x) for j, x in enumerate(vec) if sc(x)}
        for pcol in sorted(self._pivots):
            if pcol in row:
                f = row[pcol]
                for c, v in self._pivots[pcol].items():
                    nv = row.get(c, ZERO) - f * v
                    if nv:
                        row[c] = nv
                    elif c in row:
                        del row[c]
        return row

    def contains(self, vec) -> bool:
        return not self._reduce(vec)

    def add(self, vec) -> bool:
        """Add a vector; returns True if it enlarged the span."""
        row = self._reduce(vec)
        if not row:
            return False
        lead = min(row)
        inv = ONE / row[lead]
        row = {c: v * inv for c, v in row.items()}
        for pcol, prow in self._pivots.items():
            if lead in prow:
                f = prow[lead]
                for c, v in row.items():
                    nv = prow.get(c, ZERO) - f * v
                    if nv:
                        prow[c] = nv
                    elif c in prow:
                        del prow[c]
        self._pivots[lead] = row
        return True

    def basis(self) -> list[Vector]:
        out = []
        for pcol in sorted(self._pivots):
            row = self._pivots[pcol]
            out.append([row.get(j, ZERO) for j in range(self.n)])
        return out


# ---------------------------------------------------------------------------
# higher-level operations
# ---------------------------------------------------------------------------

def is_positive_definite(h: Matrix):
    """Sylvester criterion with exact leading principal minors.

    Returns (True, None) or (False, k) where k is the 1-based index of the
    first non-positive leading minor.  Raises ValueError on non-Hermitian
    input.
    """
    if not h.is_hermitian():
        raise ValueError("matrix is not Hermitian (conjugate-symmetric)")
    for k in range(1, h.rows + 1):
        minor = Matrix([row[:k] for row in h.data[:k]]).det()
        if not minor.is_real():
            raise ValueError(f"leading minor {k} is not real: {minor}")
        if minor.re <= 0:
            return False, k
    return True, None


def flatten(m: Matrix) -> Vector:
    return [a for row in m.data for a in row]


def unflatten(vec, rows: int, cols: int) -> Matrix:
    return Matrix([vec[i * cols:(i + 1) * cols] for i in range(rows)])


def lie_closure(mats: Iterable[Matrix]) -> list[Matrix]:
    """Smallest subspace containing the inputs and closed under [A,B]=AB-BA.

    Returns an independent generating set (not echelonized matrices but the
    actual elements added during closure).
    """
    mats = list(mats)
    if not mats:
        return []
    n = mats[0].rows
    for m in mats:
        if m.shape != (n, n):
            raise ValueError("lie_closure requires square matrices of equal size")
    span = Subspace(n * n)
    basis: list[Matrix] = []
    queue = list(mats)
    while queue:
        m = queue.pop()
        if span.add(flatten(m)):
            for other in basis:
                queue.append(commutator(m, other))
            basis.append(m)
    return basis
