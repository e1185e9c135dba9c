"""Quaternionic Hermitian metrics, HKT forms, and canonical-bundle sections.

The central objects: a metric g with g(Ix,Iy)=g(Jx,Jy)=g(Kx,Ky)=g(x,y),
its associated (2,0)-form Omega = g(J.,.) + i g(K.,.), and the invariant
section Theta = theta_1 ^ ... ^ theta_m of the canonical bundle.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .forms import InvariantForm, exterior_d
from .liealg import LieAlgebra
from .linalg import Matrix, Subspace, is_positive_definite, kernel
from .quaternionic import (Hypercomplex, is_integrable, pq_split, split_coframe)
from .scalars import I as IMAG
from .scalars import ONE, ZERO, Scalar, sc


class MetricError(ValueError):
    """Gram matrix fails a quaternionic Hermitian metric requirement."""


class QuatHermMetric:
    """Positive quaternionic Hermitian metric given by its Gram matrix."""

    def __init__(self, structure: Hypercomplex, gram: Matrix):
        d = structure.dim
        if gram.shape != (d, d):
            raise MetricError(f"Gram matrix shape {gram.shape} does not match dim {d}")
        if not gram.is_real():
            raise MetricError("Gram matrix must be real rational")
        if gram.transpose() != gram:
            raise MetricError("Gram matrix must be symmetric")
        ok, minor = is_positive_definite(gram)
        if not ok:
            raise MetricError(f"Gram matrix is not positive definite (minor {minor})")
        for name, a in (("I", structure.I), ("J", structure.J), ("K", structure.K)):
            if a.transpose() @ gram @ a != gram:
                raise MetricError(f"metric is not {name}-invariant")
        self.structure = structure
        self.gram = gram

    def value(self, x, y) -> Scalar:
        """C-bilinear extension g(x, y) on coordinate vectors."""
        gx = self.gram.apply(x)
        t = ZERO
        for a, b in zip(gx, [sc(v) for v in y]):
            if a and b:
                t = t + a * b
        return t

    def __eq__(self, other):
        if not isinstance(other, QuatHermMetric):
            return NotImplemented
        return self.structure is other.structure and self.gram == other.gram

    def __hash__(self):
        return hash(self.gram)


# ---------------------------------------------------------------------------
# metric <-> form correspondence
# ---------------------------------------------------------------------------

def omega_from_metric(algebra: LieAlgebra, metric: QuatHermMetric) -> InvariantForm:
    """The (2,0)-form g(J., .) + i g(K., .) of a quaternionic Hermitian g."""
    h = metric.structure
    frame = split_coframe(algebra, h)
    n = frame.n
    cols = [frame.frame_vector(a) for a in range(n)]
    jcols = [h.J.apply(c) for c in cols]
    kcols = [h.K.apply(c) for c in cols]
    coeffs = {}
    for a in range(n):
        for b in range(a + 1, n):
            v = metric.value(jcols[a], cols[b]) + IMAG * metric.value(kcols[a], cols[b])
            if v:
                coeffs[(a, b)] = v
    form = InvariantForm(frame, 2, coeffs)
    impure = [k for k in coeffs if frame.bidegree(k) != (2, 0)]
    if impure:
        raise MetricError(f"associated form is not pure (2,0); offending keys {impure}")
    return form


def _check_two_zero(frame, form: InvariantForm):
    for key in form.coeffs:
        if frame.bidegree(key) != (2, 0):
            raise ValueError(f"form has bidegree {frame.bidegree(key)} component, expected (2,0)")


def j_real_witness(algebra: LieAlgebra, h: Hypercomplex, omega: InvariantForm):
    """None when J(conj omega) = omega, else the first offending key."""
    frame = split_coframe(algebra, h)
    _check_two_zero(frame, omega)
    diff = frame.j_action(omega.conj()) - omega
    if diff.is_zero():
        return None
    return sorted(diff.coeffs)[0]


def is_j_real(algebra: LieAlgebra, h: Hypercomplex, omega: InvariantForm) -> bool:
    return j_real_witness(algebra, h, omega) is None


def j_positivity_matrix(algebra: LieAlgebra, h: Hypercomplex, omega: InvariantForm) -> Matrix:
    """Hermitian matrix M_ab = Omega(h_a, J(conj h_b)) over the (1,0)-basis."""
    frame = split_coframe(algebra, h)
    _check_two_zero(frame, omega)
    m = frame.m
    rows = []
    hvecs = [frame.frame_vector(a) for a in range(m)]
    jbar = [h.J.apply([x.conj() for x in v]) for v in hvecs]
    for a in range(m):
        ca = frame.coords(hvecs[a])
        rows.append([omega.evaluate([ca, frame.coords(jbar[b])]) for b in range(m)])
    return Matrix(rows)


def j_positive_witness(algebra: LieAlgebra, h: Hypercomplex, omega: InvariantForm):
    """None when strictly J-positive, else the failing minor index."""
    m = j_positivity_matrix(algebra, h, omega)
    if not m.is_hermitian():
        return "positivity matrix is not Hermitian (form is not J-real)"
    ok, minor = is_positive_definite(m)
    return None if ok else minor


def is_j_positive(algebra: LieAlgebra, h: Hypercomplex, omega: InvariantForm) -> bool:
    return j_positive_witness(algebra, h, omega) is None


def metric_from_omega(algebra: LieAlgebra, h: Hypercomplex, omega: InvariantForm) -> QuatHermMetric:
    """Recover the Gram matrix from a J-real strictly J-positive (2,0)-form.

    g_ij is the real part of Omega(x_i, J(conj x_j)) with x_i the
    (1,0)-parts of the real basis vectors; this inverts omega_from_metric
    exactly.
    """
    frame = split_coframe(algebra, h)
    _check_two_zero(frame, omega)
    key = j_real_witness(algebra, h, omega)
    if key is not None:
        raise ValueError(f"form is not J-real (offending coefficient at {key})")
    minor = j_positive_witness(algebra, h, omega)
    if minor is not None:
        raise ValueError(f"form is not strictly J-positive (minor {minor})")
    d = algebra.dim
    lifts = []
    for i in range(d):
        v = [ONE if t == i else ZERO for t in range(d)]
        lifts.append(pq_split(h, v)[0])
    rows = []
    for i in range(d):
        ci = frame.coords(lifts[i])
        row = []
        for j in range(d):
            jbar = h.J.apply([x.conj() for x in lifts[j]])
            val = omega.evaluate([ci, frame.coords(jbar)])
            row.append(Scalar(val.re))
        rows.append(row)
    return QuatHermMetric(h, Matrix(rows))


# ---------------------------------------------------------------------------
# HKT condition
# ---------------------------------------------------------------------------

def del_omega(algebra: LieAlgebra, h: Hypercomplex, omega: InvariantForm) -> InvariantForm:
    """The (3,0)-part of d Omega, i.e. the Dolbeault derivative on (2,0)-forms."""
    frame = split_coframe(algebra, h)
    _check_two_zero(frame, omega)
    if not is_integrable(algebra, h.I):
        raise ValueError("I is not integrable; bidegree projection of d is ill-defined")
    return frame.component(exterior_d(omega), 3, 0)


def hkt_witness(algebra: LieAlgebra, h: Hypercomplex, omega: InvariantForm):
    """None when del Omega = 0 exactly, else the nonzero (3,0)-component."""
    res = del_omega(algebra, h, omega)
    return None if res.is_zero() else res


def is_hkt(algebra: LieAlgebra, h: Hypercomplex, omega: InvariantForm) -> bool:
    return hkt_witness(algebra, h, omega) is None


# ---------------------------------------------------------------------------
# canonical-bundle sections
# ---------------------------------------------------------------------------

def canonical_section(algebra: LieAlgebra, h: Hypercomplex) -> InvariantForm:
    """Theta = theta_1 ^ ... ^ theta_m in the cached (1,0)-coframe."""
    frame = split_coframe(algebra, h)
    return frame.monomial(tuple(range(frame.m)), 1)


def omega_power_constant(algebra: LieAlgebra, h: Hypercomplex, omega: InvariantForm) -> Scalar:
    """Constant c with Omega^n = c * Theta (n = quaternionic dimension)."""
    frame = split_coframe(algebra, h)
    n = h.quaternionic_dim
    power = frame.monomial((), 1)
    for _ in range(n):
        power = power.wedge(omega)
    theta_key = tuple(range(frame.m))
    extra = [k for k in power.coeffs if k != theta_key]
    if extra:
        raise AssertionError(f"Omega^n has unexpected components {extra}")
    return power.coeffs.get(theta_key, ZERO)


@dataclass
class ThetaReport:
    d_theta: InvariantForm
    closed: bool
    delbar_component: InvariantForm
    holomorphic: bool
    nijenhuis_component: InvariantForm
    closed_iff_holomorphic_consistent: bool


def theta_closed_and_holomorphic(algebra: LieAlgebra, h: Hypercomplex) -> ThetaReport:
    """Compute d Theta directly and report closedness and holomorphy.

    For a top (m,0)-form d Theta can only have (m,1) and (m-1,2)
    components; the (m,1) part is the antiholomorphic derivative and the
    (m-1,2) part vanishes exactly when I is integrable.
    """
    frame = split_coframe(algebra, h)
    m = frame.m
    theta = canonical_section(algebra, h)
    d_theta = exterior_d(theta)
    delbar = frame.component(d_theta, m, 1)
    nij = d_theta - delbar
    closed = d_theta.is_zero()
    holo = delbar.is_zero()
    consistent = (not closed) or holo
    return ThetaReport(d_theta, closed, delbar, holo, nij, consistent)


# ---------------------------------------------------------------------------
# adapted (triangular) bases
# ---------------------------------------------------------------------------

@dataclass
class TriangularBasisReport:
    found: bool
    reason: str = ""
    basis: Matrix | None = None
    c_triangular: bool = False
    m_triangular: bool = False
    pure_mixed_type: bool = False
    transformed: LieAlgebra | None = None


def ascending_central_series(algebra: LieAlgebra) -> list[list[list[Scalar]]]:
    """0 = Z_0 < Z_1 < ... with Z_{s+1} = {x : [x, g] in Z_s}; stops when stable."""
    d = algebra.dim
    ad_mats = []
    for i in range(d):
        cols = [algebra.bracket_basis(t, i) for t in range(d)]
        ad_mats.append(Matrix.from_columns(cols))
    chain: list = [[]]
    while True:
        prev = chain[-1]
        z = len(prev)
        # membership of [x, e_i] in span(prev) via auxiliary unknowns:
        # M_i x - sum_t y_{i,t} prev_t = 0, unknowns (x, y_{1,*}, ..., y_{d,*})
        rows = []
        for bi, m in enumerate(ad_mats):
            for r in range(d):
                row = [m.data[r][c] for c in range(d)]
                aux = [ZERO] * (d * z)
                for t, w in enumerate(prev):
                    aux[bi * z + t] = -w[r]
                rows.append(row + aux)
        ker = kernel(Matrix(rows))
        span = Subspace(d)
        for v in ker:
            span.add(v[:d])
        basis = span.basis()
        if len(basis) == len(prev):
            return chain
        chain.append(basis)
        if len(basis) == d:
            return chain


def triangular_basis_search(algebra: LieAlgebra, h: Hypercomplex) -> TriangularBasisReport:
    """Greedy search for a basis with c^k_ij = 0 for k <= max(i,j) and
    I g_{2a-1} = g_{2a}.

    Works along the ascending central series, whose terms are I-invariant
    for abelian structures; the basis lists a complement of Z_{r-1} first
    and the centre last, which forces the triangular shape.  Soft-fails
    with a reason; the direct d Theta computation stays authoritative
    regardless of the outcome here.
    """
    series = ascending_central_series(algebra)
    d = algebra.dim
    if len(series[-1]) != d:
        return TriangularBasisReport(False, "algebra is not nilpotent")
    i_mat = h.I

    # each series term must be I-invariant to pick I-stable complements
    for s, term in enumerate(series[1:], start=1):
        span = Subspace(d)
        for v in term:
            span.add(v)
        for v in term:
            if not span.contains(i_mat.apply(v)):
                return TriangularBasisReport(
                    False, f"ascending central series term {s} is not I-invariant")

    chosen: list = []
    for s in range(len(series) - 1, 0, -1):
        level = series[s]
        deeper = series[s - 1]
        taken: list = []
        pool = list(level)
        pool.extend(_pair_sums(level))
        while True:
            target = len(level) - len(deeper)
            if len(taken) * 2 >= target:
                break
            pick = None
            for v in pool:
                span = Subspace(d)
                for w in deeper:
                    span.add(w)
                for pair in taken:
                    span.add(pair[0])
                    span.add(pair[1])
                if span.contains(v):
                    continue
                span.add(v)
                iv = i_mat.apply(v)
                if span.contains(iv):
                    continue
                pick = (v, iv)
                break
            if pick is None:
                return TriangularBasisReport(
                    False, f"greedy pairing stuck at series level {s}")
            taken.append(pick)
        chosen.append(taken)

    ordered: list = []
    for taken in chosen:
        for v, iv in taken:
            ordered.append(v)
            ordered.append(iv)
    p = Matrix.from_columns(ordered)
    p_inv = p.inverse()

    new_brackets: dict = {}
    c_ok = True
    for i in range(d):
        for j in range(i + 1, d):
            br = algebra.bracket(ordered[i], ordered[j])
            coords = p_inv.apply(br)
            comps = {}
            for k, c in enumerate(coords):
                if c:
                    if not c.is_real():
                        raise AssertionError("transformed constants must be real")
                    comps[k] = Fraction(c.re)
                    if k <= max(i, j):
                        c_ok = False
            if comps:
                new_brackets[(i, j)] = comps
    transformed = LieAlgebra(d, new_brackets, check_jacobi=False)

    # dtheta_k = sum m^k_ij theta_i ^ conj theta_j with m^k_ij = 0 for
    # k <= max(i,j), in the coframe of the transformed complex structure
    m = d // 2
    cols = []
    for a in range(m):
        v = [ZERO] * d
        v[2 * a] = ONE
        v[2 * a + 1] = -IMAG
        cols.append(v)
    cols = cols + [[x.conj() for x in v] for v in cols]
    from .forms import SplitCoframe
    new_frame = SplitCoframe(transformed, Matrix.from_columns(cols))
    m_ok = True
    pure = True
    for k in range(m):
        for key, _ in new_frame.d_generators()[k].coeffs.items():
            p_deg, q_deg = new_frame.bidegree(key)
            if (p_deg, q_deg) != (1, 1):
                pure = False
                continue
            i_idx, j_idx = key[0], key[1] - m
            if k <= max(i_idx, j_idx):
                m_ok = False
    return TriangularBasisReport(True, "", p, c_ok, m_ok and pure, pure, transformed)


def _pair_sums(vectors):
    out = []
    for a in range(len(vectors)):
        for b in range(a + 1, len(vectors)):
            out.append([x + y for x, y in zip(vectors[a], vectors[b])])
    return out
