"""Left-invariant exterior forms with sparse exact coefficients.

A form lives over a *coframe*: an ordered family of invariant 1-forms
together with the differential of each generator.  Two coframes are used
in practice: the real coordinate coframe of a Lie algebra, and the split
coframe (theta_1..theta_m, conj theta_1..conj theta_m) attached to a
complex structure.  Forms over different coframe objects never mix.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Sequence

from .linalg import Matrix
from .scalars import ONE, ZERO, Scalar, sc


class Coframe:
    """Base coframe: n generator 1-forms and their exterior differentials."""

    def __init__(self, n: int, labels: Sequence[str]):
        self.n = n
        self.labels = list(labels)
        self._d_gen: list["InvariantForm"] | None = None

    def d_generators(self) -> list["InvariantForm"]:
        raise NotImplementedError

    def zero(self, degree: int = 0) -> "InvariantForm":
        return InvariantForm(self, degree, {})

    def generator(self, i: int) -> "InvariantForm":
        return InvariantForm(self, 1, {(i,): ONE})

    def monomial(self, key: tuple, coeff=1) -> "InvariantForm":
        return InvariantForm(self, len(key), {tuple(key): sc(coeff)})

    def basis_keys(self, degree: int) -> list[tuple]:
        return list(combinations(range(self.n), degree))

    def label_key(self, key: tuple) -> str:
        return "^".join(self.labels[i] for i in key) if key else "1"


class InvariantForm:
    """Homogeneous-degree invariant form, sparse on increasing index tuples."""

    __slots__ = ("frame", "degree", "coeffs")

    def __init__(self, frame: Coframe, degree: int, coeffs: dict):
        self.frame = frame
        self.degree = degree
        self.coeffs = {k: v for k, v in coeffs.items() if v}
        for k in self.coeffs:
            if len(k) != degree or any(k[t] >= k[t + 1] for t in range(len(k) - 1)):
                raise ValueError(f"bad index tuple {k} for degree {degree}")

    def is_zero(self) -> bool:
        return not self.coeffs

    def _same_frame(self, other: "InvariantForm"):
        if self.frame is not other.frame:
            raise ValueError("forms over different coframes cannot combine")

    def __add__(self, other: "InvariantForm") -> "InvariantForm":
        self._same_frame(other)
        if self.degree != other.degree and self.coeffs and other.coeffs:
            raise ValueError("cannot add forms of different degree")
        coeffs = dict(self.coeffs)
        for k, v in other.coeffs.items():
            nv = coeffs.get(k, ZERO) + v
            if nv:
                coeffs[k] = nv
            elif k in coeffs:
                del coeffs[k]
        return InvariantForm(self.frame, max(self.degree, other.degree), coeffs)

    def __sub__(self, other: "InvariantForm") -> "InvariantForm":
        return self + (-other)

    def __neg__(self) -> "InvariantForm":
        return InvariantForm(self.frame, self.degree,
                             {k: -v for k, v in self.coeffs.items()})

    def __mul__(self, other) -> "InvariantForm":
        s = sc(other)
        return InvariantForm(self.frame, self.degree,
                             {k: v * s for k, v in self.coeffs.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, InvariantForm):
            return NotImplemented
        return (self.frame is other.frame
                and (self.coeffs == other.coeffs)
                and (self.degree == other.degree or not self.coeffs))

    def __hash__(self):
        return hash((id(self.frame), self.degree, tuple(sorted(self.coeffs))))

    def wedge(self, other: "InvariantForm") -> "InvariantForm":
        self._same_frame(other)
        coeffs: dict = {}
        for k1, v1 in self.coeffs.items():
            for k2, v2 in other.coeffs.items():
                merged = _merge_signed(k1, k2)
                if merged is None:
                    continue
                sign, key = merged
                nv = coeffs.get(key, ZERO) + v1 * v2 * sign
                if nv:
                    coeffs[key] = nv
                elif key in coeffs:
                    del coeffs[key]
        return InvariantForm(self.frame, self.degree + other.degree, coeffs)

    def conj(self) -> "InvariantForm":
        """Complex conjugation (split coframes only: swaps theta and theta-bar)."""
        frame = self.frame
        if not isinstance(frame, SplitCoframe):
            return InvariantForm(frame, self.degree,
                                 {k: v.conj() for k, v in self.coeffs.items()})
        m = frame.m
        coeffs: dict = {}
        for key, v in self.coeffs.items():
            swapped = tuple((i + m) % (2 * m) for i in key)
            sign, skey = _sort_signed(swapped)
            if sign:
                coeffs[skey] = coeffs.get(skey, ZERO) + v.conj() * sign
        return InvariantForm(frame, self.degree, {k: v for k, v in coeffs.items() if v})

    def evaluate(self, vectors: Sequence[Sequence[Scalar]]) -> Scalar:
        """Evaluate on coframe-coordinate vectors (determinant convention)."""
        if len(vectors) != self.degree:
            raise ValueError(f"need {self.degree} vectors, got {len(vectors)}")
        total = ZERO
        for key, v in self.coeffs.items():
            sub = Matrix([[vec[i] for vec in vectors] for i in key])
            total = total + v * sub.det()
        return total

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = [f"({v})*{self.frame.label_key(k)}" for k, v in sorted(self.coeffs.items())]
        return " + ".join(parts)

    __repr__ = __str__


def _merge_signed(k1: tuple, k2: tuple):
    """Merge two increasing tuples; returns (sign, merged) or None on repeat."""
    if not k1:
        return 1, k2
    if not k2:
        return 1, k1
    if set(k1) & set(k2):
        return None
    merged = []
    sign = 1
    i = j = 0
    while i < len(k1) and j < len(k2):
        if k1[i] < k2[j]:
            merged.append(k1[i])
            i += 1
        else:
            merged.append(k2[j])
            # k2[j] hops over the remaining entries of k1
            if (len(k1) - i) % 2:
                sign = -sign
            j += 1
    merged.extend(k1[i:])
    merged.extend(k2[j:])
    return sign, tuple(merged)


def _sort_signed(key: Iterable[int]):
    """Sort indices, tracking permutation parity; sign 0 on duplicates."""
    key = list(key)
    sign = 1
    for i in range(1, len(key)):
        j = i
        while j > 0 and key[j - 1] > key[j]:
            key[j - 1], key[j] = key[j], key[j - 1]
            sign = -sign
            j -= 1
    for i in range(1, len(key)):
        if key[i - 1] == key[i]:
            return 0, ()
    return sign, tuple(key)


def wedge_all(forms: Sequence[InvariantForm]) -> InvariantForm:
    if not forms:
        raise ValueError("empty wedge")
    out = forms[0]
    for f in forms[1:]:
        out = out.wedge(f)
    return out


def exterior_d(form: InvariantForm) -> InvariantForm:
    """Exterior differential via graded Leibniz over coframe generators."""
    frame = form.frame
    dgens = frame.d_generators()
    out = frame.zero(form.degree + 1)
    for key, v in form.coeffs.items():
        for pos, gen in enumerate(key):
            dg = dgens[gen]
            if dg.is_zero():
                continue
            rest = key[:pos] + key[pos + 1:]
            sign = -1 if pos % 2 else 1
            term = dg.wedge(InvariantForm(frame, len(rest), {rest: ONE}))
            out = out + term * (v * sign)
    return out


# ---------------------------------------------------------------------------
# concrete coframes
# ---------------------------------------------------------------------------

class RealCoframe(Coframe):
    """Dual coframe xi_1..xi_d of a Lie algebra basis.

    d xi_k = -sum_{i<j} c^k_ij xi_i ^ xi_j, the convention that makes
    d xi (x, y) = -xi([x, y]).
    """

    def __init__(self, algebra):
        super().__init__(algebra.dim, [f"xi{i+1}" for i in range(algebra.dim)])
        self.algebra = algebra

    def d_generators(self) -> list[InvariantForm]:
        if self._d_gen is None:
            gens = []
            for k in range(self.n):
                coeffs = {}
                for (i, j), comps in self.algebra.brackets.items():
                    c = comps.get(k)
                    if c:
                        coeffs[(i, j)] = Scalar(-c)
                gens.append(InvariantForm(self, 2, coeffs))
            self._d_gen = gens
        return self._d_gen


class SplitCoframe(Coframe):
    """(1,0)/(0,1) coframe of a complex structure on a Lie algebra.

    Generators 0..m-1 are the (1,0)-forms theta_a dual to the cached
    (1,0)-basis h_a; generators m..2m-1 are their conjugates.  The frame
    matrix F has columns h_1..h_m, conj h_1..conj h_m in the real basis.
    Carries the structure constants of the complexified bracket, so the
    exterior differential is available, and optionally the action of an
    anticommuting second structure J on the coframe.
    """

    def __init__(self, algebra, frame_matrix: Matrix, j_matrix: Matrix | None = None):
        m = frame_matrix.cols // 2
        labels = [f"t{a+1}" for a in range(m)] + [f"~t{a+1}" for a in range(m)]
        super().__init__(2 * m, labels)
        self.algebra = algebra
        self.m = m
        self.F = frame_matrix
        self.F_inv = frame_matrix.inverse()
        self._j_coframe = None
        if j_matrix is not None:
            # (J xi)(x) = xi(J^{-1} x) = -xi(J x); rows give images of generators
            self._j_coframe = self.F_inv @ (-j_matrix) @ self.F

    def frame_vector(self, alpha: int):
        return self.F.column(alpha)

    def coords(self, vec) -> list[Scalar]:
        """Coordinates of a complexified real-basis vector in the frame."""
        return self.F_inv.apply(vec)

    def bidegree(self, key: tuple) -> tuple[int, int]:
        p = sum(1 for i in key if i < self.m)
        return p, len(key) - p

    def component(self, form: InvariantForm, p: int, q: int) -> InvariantForm:
        return InvariantForm(self, p + q,
                             {k: v for k, v in form.coeffs.items()
                              if self.bidegree(k) == (p, q)})

    def bidegree_components(self, form: InvariantForm) -> dict:
        out: dict = {}
        for k, v in form.coeffs.items():
            out.setdefault(self.bidegree(k), {})[k] = v
        return {pq: InvariantForm(self, sum(pq), cs) for pq, cs in out.items()}

    def basis_keys_pq(self, p: int, q: int) -> list[tuple]:
        m = self.m
        keys = []
        for hol in combinations(range(m), p):
            for anti in combinations(range(m, 2 * m), q):
                keys.append(hol + anti)
        return keys

    def d_generators(self) -> list[InvariantForm]:
        if self._d_gen is None:
            L = self.algebra
            cols = [self.F.column(a) for a in range(2 * self.m)]
            gens = [dict() for _ in range(2 * self.m)]
            for a in range(2 * self.m):
                for b in range(a + 1, 2 * self.m):
                    br = L.bracket(cols[a], cols[b])
                    if all(not x for x in br):
                        continue
                    coords = self.coords(br)
                    for g in range(2 * self.m):
                        if coords[g]:
                            gens[g][(a, b)] = -coords[g]
            self._d_gen = [InvariantForm(self, 2, c) for c in gens]
        return self._d_gen

    def j_action(self, form: InvariantForm) -> InvariantForm:
        """Wedge-multiplicative, C-linear extension of J to forms."""
        if self._j_coframe is None:
            raise ValueError("coframe carries no J action")
        jrows = self._j_coframe.data
        out = self.zero(form.degree)
        for key, v in form.coeffs.items():
            term = InvariantForm(self, 0, {(): v})
            for i in key:
                one = InvariantForm(self, 1, {(b,): jrows[i][b]
                                              for b in range(self.n) if jrows[i][b]})
                term = term.wedge(one)
            out = out + term
        return out
