"""Instance files (exact JSON wire format) and the built-in catalog."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .forms import InvariantForm
from .hkt import QuatHermMetric
from .liealg import LieAlgebra
from .linalg import Matrix
from .quaternionic import (Hypercomplex, abelian_hypercomplex_witness,
                           quaternion_relations_witness, split_coframe)
from .scalars import Scalar, parse_rational, rational_str

FORMAT_VERSION = 1
DEFAULT_MAX_DIM = 12


class InstanceFormatError(ValueError):
    """Malformed instance data; the message names the offending field."""


@dataclass
class Instance:
    name: str
    description: str
    algebra: LieAlgebra
    structure: Hypercomplex
    metric: QuatHermMetric | None = None
    omega: InvariantForm | None = None


def max_dim() -> int:
    raw = os.environ.get("HC_MAX_DIM", "")
    try:
        return int(raw) if raw else DEFAULT_MAX_DIM
    except ValueError:
        raise InstanceFormatError(f"HC_MAX_DIM must be an integer, got {raw!r}")


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

def _rat(value, where: str) -> Fraction:
    try:
        return parse_rational(value)
    except (ValueError, TypeError) as exc:
        raise InstanceFormatError(f"{where}: {exc}") from None


def _matrix(raw, dim: int, where: str) -> Matrix:
    if not isinstance(raw, list) or len(raw) != dim:
        raise InstanceFormatError(f"{where}: expected {dim} rows")
    rows = []
    for r, row in enumerate(raw):
        if not isinstance(row, list) or len(row) != dim:
            raise InstanceFormatError(f"{where}[{r}]: expected {dim} entries")
        rows.append([Scalar(_rat(x, f"{where}[{r}][{c}]")) for c, x in enumerate(row)])
    return Matrix(rows)


def parse_instance(source) -> Instance:
    """Parse an instance from a path, JSON text, or an already-loaded dict."""
    if isinstance(source, (str, Path)) and os.path.exists(str(source)):
        with open(source, "r", encoding="utf-8") as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise InstanceFormatError(f"{source}: invalid JSON: {exc}") from None
    elif isinstance(source, str):
        try:
            data = json.loads(source)
        except json.JSONDecodeError as exc:
            raise InstanceFormatError(f"invalid JSON: {exc}") from None
    elif isinstance(source, dict):
        data = source
    else:
        raise InstanceFormatError(f"cannot read instance from {type(source).__name__}")

    if data.get("format") != FORMAT_VERSION:
        raise InstanceFormatError(f"format: expected {FORMAT_VERSION}, got {data.get('format')!r}")
    try:
        dim = int(data["dim"])
    except (KeyError, TypeError, ValueError):
        raise InstanceFormatError("dim: missing or not an integer") from None
    cap = max_dim()
    if dim <= 0 or dim > cap:
        raise InstanceFormatError(f"dim: {dim} outside allowed range 1..{cap} (HC_MAX_DIM)")

    brackets: dict = {}
    for t, entry in enumerate(data.get("brackets", [])):
        where = f"brackets[{t}]"
        try:
            i, j = int(entry["i"]), int(entry["j"])
        except (KeyError, TypeError, ValueError):
            raise InstanceFormatError(f"{where}: needs integer fields i, j") from None
        if not (1 <= i <= dim and 1 <= j <= dim):
            raise InstanceFormatError(f"{where}: indices ({i},{j}) out of range 1..{dim}")
        if i >= j:
            raise InstanceFormatError(f"{where}: requires i < j, got ({i},{j})")
        if (i - 1, j - 1) in brackets:
            raise InstanceFormatError(f"{where}: duplicate pair ({i},{j})")
        coeffs = entry.get("coeffs", {})
        if not isinstance(coeffs, dict):
            raise InstanceFormatError(f"{where}.coeffs: expected an object")
        comp = {}
        for k_str, val in coeffs.items():
            try:
                k = int(k_str)
            except ValueError:
                raise InstanceFormatError(f"{where}.coeffs: key {k_str!r} not an integer") from None
            if not (1 <= k <= dim):
                raise InstanceFormatError(f"{where}.coeffs: target {k} out of range 1..{dim}")
            comp[k - 1] = _rat(val, f"{where}.coeffs[{k_str}]")
        brackets[(i - 1, j - 1)] = comp

    algebra = LieAlgebra(dim, brackets, check_jacobi=False)

    mats = {}
    for name in ("I", "J", "K"):
        if name not in data:
            raise InstanceFormatError(f"{name}: missing structure matrix")
        mats[name] = _matrix(data[name], dim, name)
    structure = Hypercomplex(mats["I"], mats["J"], mats["K"], check=False)

    metric = None
    if data.get("metric") is not None:
        gram = _matrix(data["metric"], dim, "metric")
        metric = QuatHermMetric(structure, gram)

    omega = None
    if data.get("omega") is not None:
        frame = split_coframe(algebra, structure)
        coeffs = {}
        for t, entry in enumerate(data["omega"]):
            where = f"omega[{t}]"
            try:
                a, b = int(entry["a"]), int(entry["b"])
            except (KeyError, TypeError, ValueError):
                raise InstanceFormatError(f"{where}: needs integer fields a, b") from None
            if not (1 <= a < b <= frame.m):
                raise InstanceFormatError(
                    f"{where}: requires 1 <= a < b <= {frame.m}, got ({a},{b})")
            re = _rat(entry.get("re", "0"), f"{where}.re")
            im = _rat(entry.get("im", "0"), f"{where}.im")
            coeffs[(a - 1, b - 1)] = Scalar(re, im)
        omega = InvariantForm(frame, 2, coeffs)

    meta = data.get("metadata", {})
    return Instance(
        name=str(meta.get("name", "")),
        description=str(meta.get("description", "")),
        algebra=algebra,
        structure=structure,
        metric=metric,
        omega=omega,
    )


def serialize_instance(inst: Instance) -> dict:
    """Exact JSON-able dict; parse_instance(serialize_instance(x)) == x."""
    alg = inst.algebra
    brackets = []
    for (i, j) in sorted(alg.brackets):
        comps = alg.brackets[(i, j)]
        brackets.append({
            "i": i + 1,
            "j": j + 1,
            "coeffs": {str(k + 1): rational_str(c) for k, c in sorted(comps.items())},
        })
    def mat(m: Matrix):
        return [[rational_str(x.re) for x in row] for row in m.data]
    data = {
        "format": FORMAT_VERSION,
        "metadata": {"name": inst.name, "description": inst.description},
        "dim": alg.dim,
        "brackets": brackets,
        "I": mat(inst.structure.I),
        "J": mat(inst.structure.J),
        "K": mat(inst.structure.K),
    }
    if inst.metric is not None:
        data["metric"] = mat(inst.metric.gram)
    if inst.omega is not None:
        entries = []
        for (a, b) in sorted(inst.omega.coeffs):
            v = inst.omega.coeffs[(a, b)]
            entries.append({"a": a + 1, "b": b + 1,
                            "re": rational_str(v.re), "im": rational_str(v.im)})
        data["omega"] = entries
    return data


# ---------------------------------------------------------------------------
# catalog
# ---------------------------------------------------------------------------

# images of left multiplication by i, j, k in quaternion slots (1, i, j, k):
# (source slot, target slot, sign)
_LEFT_MULT = {
    "i": [(0, 1, 1), (1, 0, -1), (2, 3, 1), (3, 2, -1)],
    "j": [(0, 2, 1), (1, 3, -1), (2, 0, -1), (3, 1, 1)],
    "k": [(0, 3, 1), (1, 2, 1), (2, 1, -1), (3, 0, -1)],
}


def _left_mult_matrix(unit: str, dim: int, blocks: list[list[int]]) -> list[list[str]]:
    """Left multiplication by a quaternion unit on quaternion blocks.

    Each block lists the four positions playing the roles (1, i, j, k).
    """
    m = [["0"] * dim for _ in range(dim)]
    for pos in blocks:
        for src, dst, sign in _LEFT_MULT[unit]:
            m[pos[dst]][pos[src]] = str(sign)
    return m


def _identity_metric(dim: int) -> list[list[str]]:
    return [["1" if i == j else "0" for j in range(dim)] for i in range(dim)]


def _abelian_entry(name: str, dim: int, description: str) -> dict:
    blocks = [[4 * b + t for t in range(4)] for b in range(dim // 4)]
    return {
        "format": FORMAT_VERSION,
        "metadata": {"name": name, "description": description},
        "dim": dim,
        "brackets": [],
        "I": _left_mult_matrix("i", dim, blocks),
        "J": _left_mult_matrix("j", dim, blocks),
        "K": _left_mult_matrix("k", dim, blocks),
        "metric": _identity_metric(dim),
    }


def _qheis_r_entry() -> dict:
    # g = H + Im H + R: basis e1..e4 = (1,i,j,k), e5..e7 = (i,j,k), e8 = 1.
    # [x, y] = Im(conj(x) y) for x, y in the H part, all other brackets zero.
    brackets = [
        {"i": 1, "j": 2, "coeffs": {"5": "1"}},
        {"i": 1, "j": 3, "coeffs": {"6": "1"}},
        {"i": 1, "j": 4, "coeffs": {"7": "1"}},
        {"i": 2, "j": 3, "coeffs": {"7": "-1"}},
        {"i": 2, "j": 4, "coeffs": {"6": "1"}},
        {"i": 3, "j": 4, "coeffs": {"5": "-1"}},
    ]
    # the centre Im H + R is identified with H via (e8, e5, e6, e7) = (1, i, j, k)
    blocks = [[0, 1, 2, 3], [7, 4, 5, 6]]
    return {
        "format": FORMAT_VERSION,
        "metadata": {
            "name": "qheis_r",
            "description": "quaternionic Heisenberg algebra plus R, dim 8, "
                           "2-step nilpotent with an abelian hypercomplex structure",
        },
        "dim": 8,
        "brackets": brackets,
        "I": _left_mult_matrix("i", 8, blocks),
        "J": _left_mult_matrix("j", 8, blocks),
        "K": _left_mult_matrix("k", 8, blocks),
        "metric": _identity_metric(8),
    }


_CATALOG_BUILDERS = {
    "abelian_h1": lambda: _abelian_entry(
        "abelian_h1", 4, "abelian algebra R^4 = H with the standard structure"),
    "abelian_h2": lambda: _abelian_entry(
        "abelian_h2", 8, "abelian algebra R^8 = H^2 with the standard block structure"),
    "qheis_r": _qheis_r_entry,
}


def catalog_names() -> list[str]:
    return sorted(_CATALOG_BUILDERS)


def catalog_entry(name: str) -> dict:
    """Raw JSON document of a catalog instance."""
    try:
        builder = _CATALOG_BUILDERS[name]
    except KeyError:
        raise KeyError(f"unknown catalog entry {name!r}; known: {', '.join(catalog_names())}")
    return builder()


def catalog(name: str) -> Instance:
    """Parse and structurally validate a catalog instance."""
    inst = parse_instance(catalog_entry(name))
    witness = inst.algebra.jacobi_witness()
    if witness is not None:
        raise AssertionError(f"catalog {name}: Jacobi fails at {witness}")
    rel = quaternion_relations_witness(inst.structure.I, inst.structure.J, inst.structure.K)
    if rel is not None:
        raise AssertionError(f"catalog {name}: {rel}")
    ab = abelian_hypercomplex_witness(inst.algebra, inst.structure)
    if ab is not None:
        raise AssertionError(f"catalog {name}: abelian condition fails at {ab}")
    return inst
