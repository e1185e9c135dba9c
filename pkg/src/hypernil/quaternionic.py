"""Hypercomplex structures: quaternion triples, integrability, the abelian
condition, the (1,0)/(0,1) splitting, and the quaternionic determinant."""

from __future__ import annotations

from fractions import Fraction

from .forms import InvariantForm, SplitCoframe
from .liealg import LieAlgebra
from .linalg import Matrix, Subspace, commutator, kernel
from .scalars import I as IMAG
from .scalars import ONE, ZERO, Scalar, sc


class Hypercomplex:
    """Triple (I, J, K) of rational endomorphisms with I^2=J^2=K^2=IJK=-id.

    Caches the (1,0)-basis of I (kernel of I - i over Q(i)) and the frame
    matrix whose columns are h_1..h_m, conj h_1..conj h_m.
    """

    def __init__(self, i: Matrix, j: Matrix, k: Matrix, check: bool = True):
        self.I, self.J, self.K = i, j, k
        d = i.rows
        if any(m.shape != (d, d) for m in (i, j, k)):
            raise ValueError("structure matrices must be square of equal size")
        if not all(m.is_real() for m in (i, j, k)):
            raise ValueError("structure matrices must be real rational")
        if d % 4 != 0:
            raise ValueError(f"dimension {d} is not divisible by 4")
        self.dim = d
        if check:
            witness = quaternion_relations_witness(i, j, k)
            if witness is not None:
                raise ValueError(f"quaternion relations fail: {witness}")
        self._h_basis: list | None = None
        self._frame: Matrix | None = None
        self._commutant: list[Matrix] | None = None

    @property
    def quaternionic_dim(self) -> int:
        return self.dim // 4

    def h_basis(self) -> list[list[Scalar]]:
        """Basis of the (1,0)-space of I, where I acts as +i."""
        if self._h_basis is None:
            d = self.dim
            a = Matrix([[self.I.data[r][c] - (IMAG if r == c else ZERO)
                         for c in range(d)] for r in range(d)])
            basis = kernel(a)
            if len(basis) != d // 2:
                raise ValueError(
                    f"(1,0)-space has dimension {len(basis)}, expected {d // 2}; "
                    "I is not a complex structure")
            self._h_basis = basis
        return self._h_basis

    def frame_matrix(self) -> Matrix:
        """Columns h_1..h_m, conj h_1..conj h_m (invertible over Q(i))."""
        if self._frame is None:
            cols = self.h_basis() + [[x.conj() for x in h] for h in self.h_basis()]
            self._frame = Matrix.from_columns(cols)
        return self._frame

    def commutant_basis(self) -> list[Matrix]:
        """Basis of the real endomorphisms commuting with I, J and K."""
        if self._commutant is None:
            d = self.dim
            rows = []
            for s in (self.I, self.J, self.K):
                # (AS - SA)_{rc} = sum_t A_{rt} S_{tc} - S_{rt} A_{tc}
                for r in range(d):
                    for c in range(d):
                        row = {}
                        for t in range(d):
                            if s.data[t][c]:
                                row[r * d + t] = row.get(r * d + t, ZERO) + s.data[t][c]
                            if s.data[r][t]:
                                row[t * d + c] = row.get(t * d + c, ZERO) - s.data[r][t]
                        rows.append([row.get(e, ZERO) for e in range(d * d)])
            basis = kernel(Matrix(rows))
            mats = []
            for v in basis:
                if any(not x.is_real() for x in v):
                    raise AssertionError("commutant solver returned non-real matrix")
                mats.append(Matrix([v[r * d:(r + 1) * d] for r in range(d)]))
            self._commutant = mats
        return self._commutant

    def is_quaternionic_linear(self, a: Matrix) -> bool:
        return all(commutator(a, s).is_zero() for s in (self.I, self.J, self.K))


def quaternion_relations_witness(i: Matrix, j: Matrix, k: Matrix):
    """First failing relation among I^2=J^2=K^2=IJK=-id, or None."""
    d = i.rows
    minus_id = -Matrix.identity(d)
    for name, m in (("I^2", i @ i), ("J^2", j @ j), ("K^2", k @ k), ("IJK", i @ j @ k)):
        if m != minus_id:
            return f"{name} != -id"
    return None


def check_quaternion_relations(h: Hypercomplex):
    return quaternion_relations_witness(h.I, h.J, h.K)


# ---------------------------------------------------------------------------
# integrability and the abelian condition
# ---------------------------------------------------------------------------

def nijenhuis_tensor(algebra: LieAlgebra, a: Matrix):
    """Nijenhuis tensor N(x,y) = [x,y] + A[Ax,y] + A[x,Ay] - [Ax,Ay] on basis pairs.

    Returns (values, witness) where values maps (i, j) to a nonzero N value
    and witness is the first violating pair (or None when integrable).
    """
    d = algebra.dim
    if a.shape != (d, d):
        raise ValueError("structure matrix has wrong dimension")
    if (a @ a) != -Matrix.identity(d):
        raise ValueError("operator is not almost-complex (A^2 != -id)")
    acols = [a.column(t) for t in range(d)]
    values = {}
    witness = None
    for i in range(d):
        ei = _unit(d, i)
        for j in range(i + 1, d):
            ej = _unit(d, j)
            n = _vec_add(
                algebra.bracket(ei, ej),
                a.apply(algebra.bracket(acols[i], ej)),
                a.apply(algebra.bracket(ei, acols[j])),
                _vec_neg(algebra.bracket(acols[i], acols[j])),
            )
            if any(n):
                values[(i, j)] = n
                if witness is None:
                    witness = (i, j)
    return values, witness


def is_integrable(algebra: LieAlgebra, a: Matrix) -> bool:
    return nijenhuis_tensor(algebra, a)[1] is None


def abelian_witness(algebra: LieAlgebra, a: Matrix):
    """First basis pair with [Ax_i, Ax_j] != [x_i, x_j], or None."""
    d = algebra.dim
    acols = [a.column(t) for t in range(d)]
    for i in range(d):
        for j in range(i + 1, d):
            lhs = algebra.bracket(acols[i], acols[j])
            rhs = algebra.bracket_basis(i, j)
            if any(x != y for x, y in zip(lhs, rhs)):
                return (i, j)
    return None


def is_abelian_complex(algebra: LieAlgebra, a: Matrix) -> bool:
    return abelian_witness(algebra, a) is None


def abelian_hypercomplex_witness(algebra: LieAlgebra, h: Hypercomplex):
    """First (operator name, pair) violating the abelian condition, or None."""
    for name, a in (("I", h.I), ("J", h.J), ("K", h.K)):
        w = abelian_witness(algebra, a)
        if w is not None:
            return name, w
    return None


def is_abelian_hypercomplex(algebra: LieAlgebra, h: Hypercomplex) -> bool:
    return abelian_hypercomplex_witness(algebra, h) is None


def one_zero_bracket_witness(algebra: LieAlgebra, h: Hypercomplex):
    """First pair (a, b) with [h_a, h_b] != 0 in the complexification."""
    basis = h.h_basis()
    for a in range(len(basis)):
        for b in range(a + 1, len(basis)):
            if any(algebra.bracket(basis[a], basis[b])):
                return (a, b)
    return None


# ---------------------------------------------------------------------------
# the splitting and J on forms
# ---------------------------------------------------------------------------

def pq_split(h: Hypercomplex, v):
    """Split a complexified vector into ((1,0)-part, (0,1)-part) of I."""
    v = [sc(x) for x in v]
    iv = h.I.apply(v)
    half = Fraction(1, 2)
    v10 = [(x - IMAG * y) * half for x, y in zip(v, iv)]
    v01 = [(x + IMAG * y) * half for x, y in zip(v, iv)]
    return v10, v01


_SPLIT_CACHE: dict = {}


def split_coframe(algebra: LieAlgebra, h: Hypercomplex) -> SplitCoframe:
    """The split coframe of (algebra, structure), cached per object pair."""
    key = (id(algebra), id(h))
    got = _SPLIT_CACHE.get(key)
    if got is None or got[0] is not algebra or got[1] is not h:
        frame = SplitCoframe(algebra, h.frame_matrix(), j_matrix=h.J)
        _SPLIT_CACHE[key] = (algebra, h, frame)
        return frame
    return got[2]


def j_on_forms(algebra: LieAlgebra, h: Hypercomplex, form: InvariantForm) -> InvariantForm:
    frame = split_coframe(algebra, h)
    if form.frame is not frame:
        raise ValueError("form is not expressed in this structure's split coframe")
    return frame.j_action(form)


def real_structure_map(algebra: LieAlgebra, h: Hypercomplex, form: InvariantForm) -> InvariantForm:
    """The antilinear map r(eta) = J(conj eta)."""
    frame = split_coframe(algebra, h)
    return frame.j_action(form.conj())


def real_structure_check(algebra: LieAlgebra, h: Hypercomplex, form: InvariantForm):
    """For a top (m,0)-form: is it fixed by r(eta) = J(conj eta)?

    Returns (fixed, involution_ok).  Raises on wrong bidegree.
    """
    frame = split_coframe(algebra, h)
    m = frame.m
    for key in form.coeffs:
        if frame.bidegree(key) != (m, 0):
            raise ValueError(f"form has a component of bidegree {frame.bidegree(key)}, "
                             f"expected ({m}, 0)")
    r1 = real_structure_map(algebra, h, form)
    r2 = real_structure_map(algebra, h, r1)
    return r1 == form, r2 == form


# ---------------------------------------------------------------------------
# determinant homomorphism and sl(n,H)
# ---------------------------------------------------------------------------

def restrict_to_10(h: Hypercomplex, a: Matrix) -> Matrix:
    """Matrix of an I-commuting endomorphism on the (1,0)-basis."""
    frame_inv = h.frame_matrix().inverse()
    m = h.dim // 2
    cols = []
    for b in range(m):
        img = a.apply(h.frame_matrix().column(b))
        coords = frame_inv.apply(img)
        if any(coords[m:]):
            raise ValueError("endomorphism does not preserve the (1,0)-space")
        cols.append(coords[:m])
    return Matrix.from_columns(cols)


def quat_det(h: Hypercomplex, g: Matrix) -> Scalar:
    """Determinant homomorphism: det over C of the (1,0)-restriction.

    Defined for quaternionic-linear g; the value is asserted real and
    positive (raises AssertionError otherwise, which would contradict
    quaternionic linearity).
    """
    if not h.is_quaternionic_linear(g):
        raise ValueError("matrix does not commute with I, J, K")
    det = restrict_to_10(h, g).det()
    if not det.is_real():
        raise AssertionError(f"quaternionic determinant came out non-real: {det}")
    if det.re <= 0:
        raise AssertionError(f"quaternionic determinant not positive: {det}")
    return det


def sl_trace(h: Hypercomplex, a: Matrix) -> Scalar:
    """Complex trace of the (1,0)-restriction of a quaternionic-linear map."""
    if not h.is_quaternionic_linear(a):
        raise ValueError("matrix does not commute with I, J, K")
    t = restrict_to_10(h, a).trace()
    if not t.is_real():
        raise AssertionError(f"(1,0)-trace of an H-linear map must be real, got {t}")
    # cross-checks: tr_R(A) = 2 Re t and tr_R(I A) = 0
    if a.trace() != t * 2:
        raise AssertionError("real trace does not equal twice the (1,0)-trace")
    if (h.I @ a).trace() != ZERO:
        raise AssertionError("tr(I A) != 0 for an H-linear A")
    return t


def in_sl_quaternionic(h: Hypercomplex, a: Matrix) -> bool:
    """Infinitesimal SL(n,H) membership: the (1,0)-restriction is traceless."""
    return sl_trace(h, a) == ZERO


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------

def _unit(dim: int, i: int) -> list[Scalar]:
    v = [ZERO] * dim
    v[i] = ONE
    return v


def _vec_add(*vecs):
    out = list(vecs[0])
    for v in vecs[1:]:
        for t, x in enumerate(v):
            out[t] = out[t] + x
    return out


def _vec_neg(v):
    return [-x for x in v]


def lie_subalgebra_closure(mats):
    """Bracket-closure helper re-exported for holonomy work."""
    from .linalg import lie_closure
    return lie_closure(mats)


def span_contains(mats: list[Matrix], candidate: Matrix) -> bool:
    if not mats:
        return candidate.is_zero()
    n = mats[0].rows
    sub = Subspace(n * n)
    for m in mats:
        sub.add([a for row in m.data for a in row])
    return sub.contains([a for row in candidate.data for a in row])
