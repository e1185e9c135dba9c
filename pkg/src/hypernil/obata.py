"""The Obata connection of a left-invariant hypercomplex structure.

The connection is pinned down by two families of linear equations in the
coefficients Gamma^k_ij: torsion-freeness and quaternionic parallelism
(each nabla_x commutes with I, J, K).  Splitting the complexification into
(1,0)/(0,1) parts turns the combined system into unit-pivot form: the
mixed components equal bracket projections and the (1,0)x(1,0) components
are forced by the J-equation, so the solver reads the unique candidate off
exactly and then re-verifies every defining equation on the result.  Any
residual means the input was not hypercomplex (or inconsistent data), and
is reported with a witness.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .forms import InvariantForm, exterior_d
from .liealg import LieAlgebra
from .linalg import Matrix, Subspace, commutator, flatten
from .quaternionic import (Hypercomplex, quaternion_relations_witness,
                           restrict_to_10, sl_trace, split_coframe)
from .scalars import ONE, ZERO, Scalar


class ObataError(RuntimeError):
    """The defining linear system is inconsistent: not hypercomplex, or bad data."""


class Connection:
    """Left-invariant connection given by matrices Gamma_i = nabla_{g_i}."""

    def __init__(self, algebra: LieAlgebra, gammas):
        self.algebra = algebra
        self.gammas = tuple(gammas)
        if len(self.gammas) != algebra.dim:
            raise ValueError("need one Gamma matrix per basis vector")

    def nabla(self, x) -> Matrix:
        """nabla_x as a matrix, for a coordinate vector x."""
        out = Matrix.zeros(self.algebra.dim, self.algebra.dim)
        for i, c in enumerate(x):
            if c:
                out = out + self.gammas[i] * c
        return out

    def coefficient(self, i: int, j: int, k: int) -> Scalar:
        """Gamma^k_ij, the g_k-coefficient of nabla_{g_i} g_j."""
        return self.gammas[i].data[k][j]

    def torsion_witness(self):
        """First (i, j) with Gamma(x,y) - Gamma(y,x) != [x,y], or None."""
        d = self.algebra.dim
        for i in range(d):
            for j in range(i + 1, d):
                lhs = [self.gammas[i].data[k][j] - self.gammas[j].data[k][i]
                       for k in range(d)]
                rhs = self.algebra.bracket_basis(i, j)
                if any(a != b for a, b in zip(lhs, rhs)):
                    return (i, j)
        return None

    def parallel_witness(self, a: Matrix):
        """First i with [Gamma_i, A] != 0 (nabla A != 0), or None."""
        for i, g in enumerate(self.gammas):
            if not commutator(g, a).is_zero():
                return i
        return None


def verify_connection(conn: Connection, h: Hypercomplex):
    """All defining equations, re-checked directly; list of violations."""
    problems = []
    w = conn.torsion_witness()
    if w is not None:
        problems.append(("torsion", w))
    for name, a in (("I", h.I), ("J", h.J), ("K", h.K)):
        w = conn.parallel_witness(a)
        if w is not None:
            problems.append((f"nabla_{name}", w))
    return problems


# ---------------------------------------------------------------------------
# the solver
# ---------------------------------------------------------------------------

def obata_solve(algebra: LieAlgebra, h: Hypercomplex) -> Connection:
    """Solve the torsion-free + quaternionic-parallel system exactly.

    Raises ObataError when the system is inconsistent (the structure is
    not hypercomplex, e.g. a non-integrable triple) and AssertionError on
    internal-consistency failures that should be impossible.
    """
    rel = quaternion_relations_witness(h.I, h.J, h.K)
    if rel is not None:
        raise ObataError(f"not hypercomplex / data error: {rel}")
    if algebra.dim != h.dim:
        raise ObataError(f"dimension mismatch: algebra {algebra.dim}, structure {h.dim}")

    frame = split_coframe(algebra, h)
    m = frame.m
    f_cols = [frame.frame_vector(t) for t in range(2 * m)]
    f_inv = frame.F_inv

    def split(vec):
        coords = f_inv.apply(vec)
        return coords[:m], coords[m:]

    # integrability consistency rows: [h_a, h_b] must stay (1,0)
    for a in range(m):
        for b in range(a + 1, m):
            _, anti = split(algebra.bracket(f_cols[a], f_cols[b]))
            if any(anti):
                raise ObataError(
                    "not hypercomplex / data error: the (1,0)-space is not "
                    f"bracket-closed at pair ({a + 1}, {b + 1}); "
                    "the linear system is inconsistent")

    # frame components of Gamma, as vectors in real coordinates
    gamma_frame = [[None] * (2 * m) for _ in range(2 * m)]

    def to_vec(hol_coords, anti_coords):
        coords = list(hol_coords) + list(anti_coords)
        return frame.F.apply(coords)

    zero_m = [ZERO] * m
    for a in range(m):
        for b in range(m):
            # mixed slots are forced by torsion-freeness alone
            hol, _ = split(algebra.bracket(f_cols[m + a], f_cols[b]))
            gamma_frame[m + a][b] = to_vec(hol, zero_m)
    for a in range(m):
        for b in range(m):
            gamma_frame[a][m + b] = _conj_vec(gamma_frame[m + a][b])

    for a in range(m):
        for b in range(m):
            # (1,0)x(1,0) slots are forced by the J-equation:
            # Gamma(h_a, J h_b) is a known mixed slot, and equals J Gamma(h_a, h_b)
            jhb_coords = f_inv.apply(h.J.apply(f_cols[b]))
            if any(jhb_coords[:m]):
                raise AssertionError("J h_b has a (1,0) component; J does not "
                                     "anticommute with I")
            target = [ZERO] * algebra.dim
            for t in range(m, 2 * m):
                c = jhb_coords[t]
                if c:
                    target = [x + c * y for x, y in zip(target, gamma_frame[a][t])]
            minus_j = (-h.J).apply(target)
            hol, anti = split(minus_j)
            if any(anti):
                raise AssertionError("J of a (0,1)-vector left the (1,0)-space")
            gamma_frame[a][b] = to_vec(hol, zero_m)
    for a in range(m):
        for b in range(m):
            gamma_frame[m + a][m + b] = _conj_vec(gamma_frame[a][b])

    # assemble the real coefficient matrices Gamma_i
    d = algebra.dim
    gammas = []
    for i in range(d):
        u = f_inv.column(i)
        acc = Matrix.zeros(d, 2 * m)
        for alpha in range(2 * m):
            if u[alpha]:
                block = Matrix.from_columns(gamma_frame[alpha])
                acc = acc + block * u[alpha]
        g_i = acc @ f_inv
        if not g_i.is_real():
            raise ObataError(
                "not hypercomplex / data error: assembled connection is not real "
                f"(slot {i + 1}); the defining system is inconsistent")
        gammas.append(g_i)

    conn = Connection(algebra, gammas)
    problems = verify_connection(conn, h)
    if problems:
        raise ObataError(f"not hypercomplex / data error: residual equations {problems}")
    return conn


def _conj_vec(vec):
    return [x.conj() for x in vec]


# ---------------------------------------------------------------------------
# the raw linear system (independent oracle for the solver)
# ---------------------------------------------------------------------------

def obata_raw_system(algebra: LieAlgebra, h: Hypercomplex):
    """The full sparse system in the d^3 unknowns Gamma^k_ij.

    Returns (rows, nunknowns): each row is a dict {flat_index: Scalar, ...}
    with the right-hand side stored at column nunknowns.  Unknown (i,j,k)
    sits at flat index (i*d + j)*d + k.
    """
    d = algebra.dim
    n = d * d * d

    def idx(i, j, k):
        return (i * d + j) * d + k

    rows = []
    for i in range(d):
        for j in range(i + 1, d):
            br = algebra.bracket_basis(i, j)
            for k in range(d):
                row = {idx(i, j, k): ONE, idx(j, i, k): -ONE}
                if br[k]:
                    row[n] = br[k]
                rows.append(row)
    for a in (h.I, h.J, h.K):
        for i in range(d):
            for j in range(d):
                for k in range(d):
                    row: dict = {}
                    for t in range(d):
                        if a.data[t][j]:
                            row[idx(i, t, k)] = row.get(idx(i, t, k), ZERO) + a.data[t][j]
                        if a.data[k][t]:
                            key = idx(i, j, t)
                            row[key] = row.get(key, ZERO) - a.data[k][t]
                    row = {c: v for c, v in row.items() if v}
                    if row:
                        rows.append(row)
    return rows, n


def obata_raw_solve(algebra: LieAlgebra, h: Hypercomplex):
    """Solve the raw system by sparse elimination.

    Returns (status, particular, kernel_dim); status as in linalg.solve.
    Exponentially slower than obata_solve at larger dims; used as an
    independent cross-check in tests and small-dimension runs.
    """
    from .linalg import _kernel_from_rref, _rref
    rows, n = obata_raw_system(algebra, h)
    pivots, leftovers = _rref(rows, n)
    if leftovers:
        return "inconsistent", None, None
    kern = _kernel_from_rref(pivots, n)
    x = [ZERO] * n
    for pcol, prow in pivots.items():
        x[pcol] = prow.get(n, ZERO)
    status = "unique" if not kern else "affine"
    return status, x, len(kern)


def raw_residual_witness(conn: Connection, h: Hypercomplex):
    """Evaluate every raw-system equation at the connection; None if all hold."""
    d = conn.algebra.dim
    vals = [ZERO] * (d * d * d)
    for i in range(d):
        for j in range(d):
            for k in range(d):
                vals[(i * d + j) * d + k] = conn.gammas[i].data[k][j]
    rows, n = obata_raw_system(conn.algebra, h)
    for t, row in enumerate(rows):
        acc = ZERO
        for c, v in row.items():
            acc = acc + (vals[c] * v if c < n else -v)
        if acc:
            return t
    return None


# ---------------------------------------------------------------------------
# curvature and holonomy
# ---------------------------------------------------------------------------

def curvature(conn: Connection, h: Hypercomplex | None = None) -> dict:
    """R(g_i, g_j) = [Gamma_i, Gamma_j] - Gamma_{[g_i,g_j]} for i < j.

    When a structure is supplied, every value is asserted quaternionic
    linear (a consequence of parallelism).
    """
    alg = conn.algebra
    d = alg.dim
    out = {}
    for i in range(d):
        for j in range(i + 1, d):
            r = commutator(conn.gammas[i], conn.gammas[j])
            br = alg.bracket_basis(i, j)
            for k, c in enumerate(br):
                if c:
                    r = r - conn.gammas[k] * c
            if h is not None and not h.is_quaternionic_linear(r):
                raise AssertionError(
                    f"curvature R(g{i+1},g{j+1}) is not quaternionic linear")
            out[(i, j)] = r
    return out


def is_flat(conn: Connection) -> bool:
    return all(r.is_zero() for r in curvature(conn).values())


@dataclass
class HolonomyAlgebra:
    """Basis of the local holonomy algebra plus a generation transcript.

    Transcript entries: ("curvature", i, j), ("nabla_bracket", i, ref) for
    [Gamma_i, basis[ref]], and ("commutator", ref1, ref2).
    """
    basis: list = field(default_factory=list)
    transcript: list = field(default_factory=list)

    @property
    def dim(self) -> int:
        return len(self.basis)


def holonomy_algebra(conn: Connection, h: Hypercomplex | None = None) -> HolonomyAlgebra:
    """Curvature span closed under A -> [Gamma_x, A] and under commutators."""
    alg = conn.algebra
    d = alg.dim
    span = Subspace(d * d)
    hol = HolonomyAlgebra()
    queue = []
    for (i, j), r in curvature(conn, h).items():
        queue.append((r, ("curvature", i, j)))
    while queue:
        mat, label = queue.pop(0)
        if not span.add(flatten(mat)):
            continue
        ref = len(hol.basis)
        hol.basis.append(mat)
        hol.transcript.append(label)
        for i in range(d):
            queue.append((commutator(conn.gammas[i], mat), ("nabla_bracket", i, ref)))
        for other_ref in range(ref):
            queue.append((commutator(mat, hol.basis[other_ref]),
                          ("commutator", ref, other_ref)))
    if h is not None:
        for t, mat in enumerate(hol.basis):
            if not h.is_quaternionic_linear(mat):
                raise AssertionError(f"holonomy generator {t} is not quaternionic linear")
    return hol


def holonomy_sl_certificate(hol: HolonomyAlgebra, h: Hypercomplex):
    """Certificate (True, traces) when every generator is sl(n,H), else
    (False, offending index)."""
    traces = []
    for t, mat in enumerate(hol.basis):
        tr = sl_trace(h, mat)
        if tr != ZERO:
            return False, t
        traces.append(tr)
    return True, traces


# ---------------------------------------------------------------------------
# the induced connection on the canonical bundle
# ---------------------------------------------------------------------------

def nabla_form(conn: Connection, frame, form: InvariantForm, i: int) -> InvariantForm:
    """Covariant derivative nabla_{g_i} of an invariant form over a split frame."""
    g = frame.F_inv @ conn.gammas[i] @ frame.F
    out = frame.zero(form.degree)
    for key, v in form.coeffs.items():
        for pos, genidx in enumerate(key):
            img = InvariantForm(frame, 1, {(b,): -g.data[genidx][b]
                                           for b in range(frame.n) if g.data[genidx][b]})
            rest = list(key)
            rest.pop(pos)
            term = img
            lower = InvariantForm(frame, len(rest), {tuple(rest): ONE})
            wedged = term.wedge(lower)
            # re-insert at original slot: moving the 1-form back costs a sign
            sign = -1 if pos % 2 else 1
            out = out + wedged * (v * sign)
    return out


@dataclass
class CanonicalFormReport:
    alpha_values: list            # alpha(g_i) = -tr of Gamma_i on (1,0)
    alpha_form_real: InvariantForm
    alpha_10: InvariantForm       # (1,0)-part over the split coframe
    alpha_01: InvariantForm
    parallel_theta: bool          # nabla Theta = 0, i.e. alpha == 0
    d_alpha: InvariantForm        # curvature 2-form of the canonical connection
    curvature_k_matches: bool     # d alpha equals -tr R(.,.)|_(1,0) exactly
    flat_canonical: bool          # d alpha == 0
    half_form_values: list        # alpha/2, the K^(1/2) connection form


def canonical_connection_form(conn: Connection, h: Hypercomplex) -> CanonicalFormReport:
    """Connection 1-form alpha of the canonical bundle in the invariant
    trivialization: nabla_x Theta = alpha(x) Theta with
    alpha(x) = -tr(Gamma_x restricted to the (1,0)-space)."""
    alg = conn.algebra
    frame = split_coframe(alg, h)
    d = alg.dim
    alpha_vals = [-restrict_to_10(h, conn.gammas[i]).trace() for i in range(d)]

    real_frame = alg.coframe()
    alpha_real = InvariantForm(real_frame, 1,
                               {(i,): alpha_vals[i] for i in range(d) if alpha_vals[i]})
    split_vals = [sum((frame.frame_vector(t)[i] * alpha_vals[i] for i in range(d)),
                      start=ZERO) for t in range(2 * frame.m)]
    alpha_split = InvariantForm(frame, 1,
                                {(t,): split_vals[t] for t in range(2 * frame.m)
                                 if split_vals[t]})
    alpha_10 = InvariantForm(frame, 1, {k: v for k, v in alpha_split.coeffs.items()
                                        if k[0] < frame.m})
    alpha_01 = alpha_split - alpha_10

    d_alpha = exterior_d(alpha_real)
    curv = curvature(conn, h)
    curv_form = InvariantForm(real_frame, 2, {
        (i, j): -restrict_to_10(h, r).trace()
        for (i, j), r in curv.items() if not r.is_zero()})
    matches = (d_alpha - curv_form).is_zero()

    return CanonicalFormReport(
        alpha_values=alpha_vals,
        alpha_form_real=alpha_real,
        alpha_10=alpha_10,
        alpha_01=alpha_01,
        parallel_theta=all(not v for v in alpha_vals),
        d_alpha=d_alpha,
        curvature_k_matches=matches,
        flat_canonical=d_alpha.is_zero(),
        half_form_values=[v / 2 for v in alpha_vals],
    )
