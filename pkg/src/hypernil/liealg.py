"""Lie algebras from rational structure constants, with exact invariants."""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

from .forms import InvariantForm, RealCoframe, exterior_d
from .linalg import Subspace
from .scalars import ZERO, Scalar, sc


class JacobiError(ValueError):
    """Raised when structure constants fail the Jacobi identity."""

    def __init__(self, triple):
        self.triple = triple
        super().__init__(f"Jacobi identity fails at basis triple {tuple(t + 1 for t in triple)}")


class LieAlgebra:
    """Real Lie algebra of dimension dim with rational structure constants.

    Brackets are stored for i < j only; antisymmetry is built into the
    storage convention.  Basis vectors are labelled g_1..g_dim (indices are
    0-based internally).
    """

    def __init__(self, dim: int, brackets: Mapping | None = None, check_jacobi: bool = True):
        self.dim = dim
        clean: dict[tuple[int, int], dict[int, Fraction]] = {}
        for (i, j), comps in (brackets or {}).items():
            if not (0 <= i < dim and 0 <= j < dim):
                raise ValueError(f"bracket index ({i},{j}) out of range for dim {dim}")
            if i == j:
                raise ValueError(f"bracket pair ({i},{i}) is degenerate")
            if i > j:
                raise ValueError(f"bracket pair ({i},{j}) must have i < j")
            if (i, j) in clean:
                raise ValueError(f"duplicate bracket pair ({i},{j})")
            entry = {}
            for k, c in comps.items():
                if not (0 <= k < dim):
                    raise ValueError(f"bracket target {k} out of range for dim {dim}")
                c = Fraction(c)
                if c:
                    entry[k] = c
            if entry:
                clean[(i, j)] = entry
        self.brackets = clean
        self._coframe: RealCoframe | None = None
        self._lcs: list | None = None
        self._derived: list | None = None
        if check_jacobi:
            witness = self.jacobi_witness()
            if witness is not None:
                raise JacobiError(witness)

    # -- bracket evaluation

    def bracket_basis(self, i: int, j: int) -> list[Scalar]:
        """[g_i, g_j] as a coordinate vector."""
        out = [ZERO] * self.dim
        if i == j:
            return out
        sign = 1
        if i > j:
            i, j, sign = j, i, -1
        for k, c in self.brackets.get((i, j), {}).items():
            out[k] = Scalar(sign * c)
        return out

    def bracket(self, x: Sequence, y: Sequence) -> list[Scalar]:
        """Bilinear extension of the bracket to coordinate vectors over Q(i)."""
        out = [ZERO] * self.dim
        x = [sc(v) for v in x]
        y = [sc(v) for v in y]
        for (i, j), comps in self.brackets.items():
            t = x[i] * y[j] - x[j] * y[i]
            if t:
                for k, c in comps.items():
                    out[k] = out[k] + t * c
        return out

    # -- structural checks

    def jacobi_witness(self):
        """First basis triple violating Jacobi, or None if it holds."""
        d = self.dim
        for i in range(d):
            for j in range(i + 1, d):
                bij = self.bracket_basis(i, j)
                if all(not v for v in bij):
                    bij = None
                for k in range(j + 1, d):
                    total = [ZERO] * d
                    if bij is not None:
                        for t, v in enumerate(self.bracket(bij, _unit(d, k))):
                            total[t] = total[t] + v
                    bjk = self.bracket_basis(j, k)
                    if any(bjk):
                        for t, v in enumerate(self.bracket(bjk, _unit(d, i))):
                            total[t] = total[t] + v
                    bki = self.bracket_basis(k, i)
                    if any(bki):
                        for t, v in enumerate(self.bracket(bki, _unit(d, j))):
                            total[t] = total[t] + v
                    if any(total):
                        return (i, j, k)
        return None

    def jacobi_check(self) -> bool:
        return self.jacobi_witness() is None

    # -- filtrations

    def _basis_vectors(self) -> list[list[Scalar]]:
        return [_unit(self.dim, i) for i in range(self.dim)]

    def lower_central_series(self) -> list[list[list[Scalar]]]:
        """Descending chain g = g^0 >= g^1 = [g, g^0] >= ... as exact bases."""
        if self._lcs is None:
            chain = [self._basis_vectors()]
            while True:
                current = chain[-1]
                nxt = Subspace(self.dim)
                for i in range(self.dim):
                    ei = _unit(self.dim, i)
                    for v in current:
                        nxt.add(self.bracket(ei, v))
                basis = nxt.basis()
                if len(basis) == len(current):
                    break
                chain.append(basis)
                if not basis:
                    break
            self._lcs = chain
        return self._lcs

    def derived_series(self) -> list[list[list[Scalar]]]:
        """Chain g^(0) = g, g^(s+1) = [g^(s), g^(s)]."""
        if self._derived is None:
            chain = [self._basis_vectors()]
            while True:
                current = chain[-1]
                nxt = Subspace(self.dim)
                for a, x in enumerate(current):
                    for y in current[a + 1:]:
                        nxt.add(self.bracket(x, y))
                basis = nxt.basis()
                if len(basis) == len(current):
                    break
                chain.append(basis)
                if not basis:
                    break
            self._derived = chain
        return self._derived

    def is_nilpotent(self) -> bool:
        return not self.lower_central_series()[-1]

    def is_solvable(self) -> bool:
        return not self.derived_series()[-1]

    # -- invariant forms

    def coframe(self) -> RealCoframe:
        if self._coframe is None:
            self._coframe = RealCoframe(self)
        return self._coframe

    def d_squared_witness(self):
        """Generator index with d(d xi_k) != 0, or None (equivalent to Jacobi)."""
        frame = self.coframe()
        for k in range(self.dim):
            dd = exterior_d(frame.d_generators()[k])
            if not dd.is_zero():
                return k
        return None


def _unit(dim: int, i: int) -> list[Scalar]:
    v = [ZERO] * dim
    v[i] = Scalar(1)
    return v


def make_lie_algebra(dim: int, bracket_list, check_jacobi: bool = True) -> LieAlgebra:
    """Build a LieAlgebra from [(i, j, {k: coeff})] with 1-based indices."""
    brackets: dict = {}
    for i, j, comps in bracket_list:
        key = (i - 1, j - 1)
        if key in brackets:
            raise ValueError(f"duplicate bracket pair ({i},{j})")
        brackets[key] = {k - 1: Fraction(c) for k, c in comps.items()}
    return LieAlgebra(dim, brackets, check_jacobi=check_jacobi)


def ce_d(algebra: LieAlgebra, form: InvariantForm) -> InvariantForm:
    """Chevalley-Eilenberg differential of an invariant form.

    The form must live over this algebra's real coframe or over a split
    coframe built on this algebra; the coframe carries the differential.
    """
    frame = form.frame
    if getattr(frame, "algebra", None) is not algebra:
        raise ValueError("form coframe does not belong to this algebra")
    return exterior_d(form)
