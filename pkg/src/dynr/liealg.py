"""Finite-dimensional self-dual Lie algebras.

An algebra is stored through its structure constants ``f[j, k, l]`` with
``[T_j, T_k] = sum_l f[j, k, l] T_l`` and the Gram matrix ``B[j, k] = <T_j, T_k>``
of an invariant, symmetric, nondegenerate bilinear form.  Catalog entries keep
both arrays as exact :class:`fractions.Fraction` objects so that the axioms can
be checked without rounding; every spectral computation goes through the
complex views :attr:`LieAlgebra.C`, :attr:`LieAlgebra.B` and :attr:`LieAlgebra.D`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from pathlib import Path

import numpy as np
import sympy

from .errors import DimensionError, ParseError, SingularFormError

TOL_EXACT = 1e-12
TOL_RANK = 1e-9

__all__ = [
    "TOL_EXACT", "TOL_RANK", "LieAlgebra", "DualBasis", "ValidationReport",
    "bracket", "ad", "ad_basis", "pairing", "dual_basis", "transpose_wrt_form",
    "killing_form", "validate", "catalog", "CATALOG", "direct_sum",
    "abelian", "sl2", "sl2_real", "oscillator",
    "parse_algebra", "load_algebra",
]


def _is_exact(arr):
    return arr.dtype == object


def _to_complex(arr):
    if _is_exact(arr):
        return np.array([complex(v) for v in arr.flat], dtype=complex).reshape(arr.shape)
    return np.asarray(arr, dtype=complex)


@dataclass(frozen=True, eq=False)
class LieAlgebra:
    """Structure constants, invariant form and basis labels of a Lie algebra."""

    structure: np.ndarray
    form: np.ndarray
    labels: tuple = ()
    name: str = ""

    def __post_init__(self):
        f = self.structure
        if f.ndim != 3 or len(set(f.shape)) != 1:
            raise DimensionError(f"structure constants must be n*n*n, got {f.shape}")
        n = f.shape[0]
        if self.form.shape != (n, n):
            raise DimensionError(f"form must be {n}x{n}, got {self.form.shape}")
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"T{j + 1}" for j in range(n)))
        if len(self.labels) != n:
            raise DimensionError("one label per basis element is required")

    @property
    def dim(self) -> int:
        return self.structure.shape[0]

    @property
    def exact(self) -> bool:
        return _is_exact(self.structure) and _is_exact(self.form)

    @cached_property
    def C(self) -> np.ndarray:
        """Structure constants as a complex array."""
        return _to_complex(self.structure)

    @cached_property
    def B(self) -> np.ndarray:
        """Gram matrix of the form as a complex array."""
        return _to_complex(self.form)

    @cached_property
    def D(self) -> np.ndarray:
        """Inverse Gram matrix, so that ``T^j = sum_k D[j, k] T_k``."""
        return dual_basis(self).matrix

    @cached_property
    def ad_matrices(self) -> np.ndarray:
        """``ad_matrices[j]`` is the matrix of ``ad T_j``."""
        # (ad T_j)[l, k] = f[j, k, l]
        return np.transpose(self.C, (0, 2, 1)).copy()

    @property
    def is_real(self) -> bool:
        if self.exact:
            return True
        return bool(np.all(self.C.imag == 0) and np.all(self.B.imag == 0))

    def basis(self, j: int) -> np.ndarray:
        e = np.zeros(self.dim, dtype=complex)
        e[j] = 1.0
        return e

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def __repr__(self):
        return f"LieAlgebra({self.name or '?'}, dim={self.dim}, labels={self.labels})"


@dataclass(frozen=True)
class DualBasis:
    """Coefficients of the dual basis: ``T^j = sum_k matrix[j, k] T_k``."""

    matrix: np.ndarray
    exact: np.ndarray | None = None


@dataclass
class ValidationReport:
    antisymmetry: float
    jacobi: float
    form_symmetry: float
    invariance: float
    abs_det: float
    tol: float = TOL_EXACT
    tol_rank: float = TOL_RANK
    passed: bool = field(init=False)

    def __post_init__(self):
        self.passed = (
            max(self.antisymmetry, self.jacobi, self.form_symmetry, self.invariance) <= self.tol
            and self.abs_det > self.tol_rank
        )

    def as_dict(self) -> dict:
        return {
            "antisymmetry": self.antisymmetry,
            "jacobi": self.jacobi,
            "form_symmetry": self.form_symmetry,
            "invariance": self.invariance,
            "abs_det": self.abs_det,
            "tol": self.tol,
            "tol_rank": self.tol_rank,
            "pass": self.passed,
        }


def _check_vec(a: LieAlgebra, *vecs):
    out = []
    for v in vecs:
        v = np.asarray(v, dtype=complex)
        if v.shape != (a.dim,):
            raise DimensionError(f"expected a vector of length {a.dim}, got shape {v.shape}")
        out.append(v)
    return out


def bracket(a: LieAlgebra, x, y) -> np.ndarray:
    """Coordinates of ``[x, y]``."""
    x, y = _check_vec(a, x, y)
    return np.einsum("j,k,jkl->l", x, y, a.C)


def ad(a: LieAlgebra, omega) -> np.ndarray:
    """Matrix of ``ad omega``, acting on coordinate columns."""
    (omega,) = _check_vec(a, omega)
    return np.einsum("j,jlk->lk", omega, a.ad_matrices)


def ad_basis(a: LieAlgebra) -> np.ndarray:
    return a.ad_matrices


def pairing(a: LieAlgebra, x, y) -> complex:
    """The invariant form ``<x, y>`` (bilinear, no conjugation)."""
    x, y = _check_vec(a, x, y)
    return complex(x @ a.B @ y)


def _exact_inverse(form):
    m = sympy.Matrix(form.tolist())
    if m.det() == 0:
        raise SingularFormError("invariant form is degenerate")
    inv = m.inv()
    return np.array(
        [[Fraction(int(v.p), int(v.q)) for v in row] for row in inv.tolist()], dtype=object
    )


def dual_basis(a: LieAlgebra) -> DualBasis:
    if a.exact:
        exact = _exact_inverse(a.form)
        return DualBasis(_to_complex(exact), exact)
    B = a.B
    if abs(np.linalg.det(B)) <= TOL_RANK or np.linalg.cond(B) > 1e12:
        raise SingularFormError("invariant form is numerically degenerate")
    return DualBasis(np.linalg.inv(B))


def transpose_wrt_form(a: LieAlgebra, A) -> np.ndarray:
    """``B^-1 A^t B``: the transpose of ``A`` with respect to the form."""
    A = np.asarray(A)
    if A.shape != (a.dim, a.dim):
        raise DimensionError(f"operator must be {a.dim}x{a.dim}")
    return a.D @ A.T @ a.B


def killing_form(structure: np.ndarray) -> np.ndarray:
    """``tr(ad T_j ad T_k)``, exact when the constants are exact."""
    adm = np.transpose(structure, (0, 2, 1))
    return np.einsum("jab,kba->jk", adm, adm)


def _residual(arr) -> float:
    if arr.size == 0:
        return 0.0
    return float(max(abs(complex(v)) for v in arr.flat)) if arr.dtype == object \
        else float(np.max(np.abs(arr)))


def validate(a: LieAlgebra, tol: float = TOL_EXACT, tol_rank: float = TOL_RANK) -> ValidationReport:
    """Check antisymmetry, Jacobi, symmetry and invariance of the form, and rank."""
    if a.exact:
        f, B = a.structure, a.form
    else:
        f, B = a.C, a.B
    anti = f + np.transpose(f, (1, 0, 2))
    # Jacobi: cyclic sum over (j, k, l) of f_jk^m f_ml^p
    t = np.einsum("jkm,mlp->jklp", f, f)
    jac = t + np.transpose(t, (2, 0, 1, 3)) + np.transpose(t, (1, 2, 0, 3))
    sym = B - B.T
    adm = np.transpose(f, (0, 2, 1))
    inv = np.einsum("jlk,lm->jkm", adm, B) + np.einsum("kl,jlm->jkm", B, adm)
    if a.exact:
        det = abs(float(sympy.Matrix(B.tolist()).det()))
    else:
        det = float(abs(np.linalg.det(B)))
    return ValidationReport(
        antisymmetry=_residual(anti),
        jacobi=_residual(jac),
        form_symmetry=_residual(sym),
        invariance=_residual(inv),
        abs_det=det,
        tol=tol,
        tol_rank=tol_rank,
    )


# ---------------------------------------------------------------- catalog

def _zeros(*shape):
    arr = np.empty(shape, dtype=object)
    arr.fill(Fraction(0))
    return arr


def _set_bracket(f, j, k, l, value):
    f[j, k, l] = Fraction(value)
    f[k, j, l] = -Fraction(value)


def abelian(n: int = 3) -> LieAlgebra:
    n = int(n)
    if n < 1:
        raise DimensionError("dimension must be positive")
    form = _zeros(n, n)
    for j in range(n):
        form[j, j] = Fraction(1)
    return LieAlgebra(_zeros(n, n, n), form, tuple(f"A{j + 1}" for j in range(n)), f"abelian({n})")


def sl2() -> LieAlgebra:
    """sl(2) in the basis (H, E, F) with the Killing form."""
    f = _zeros(3, 3, 3)
    H, E, F = 0, 1, 2
    _set_bracket(f, H, E, E, 2)
    _set_bracket(f, H, F, F, -2)
    _set_bracket(f, E, F, H, 1)
    return LieAlgebra(f, killing_form(f), ("H", "E", "F"), "sl2")


def sl2_real() -> LieAlgebra:
    """Compact real form su(2) ~ so(3): [X1, X2] = X3 cyclically, Killing form."""
    f = _zeros(3, 3, 3)
    _set_bracket(f, 0, 1, 2, 1)
    _set_bracket(f, 1, 2, 0, 1)
    _set_bracket(f, 2, 0, 1, 1)
    return LieAlgebra(f, killing_form(f), ("X1", "X2", "X3"), "sl2_real")


def oscillator() -> LieAlgebra:
    """Oscillator algebra (N, A+, A-, C): non-semisimple but self-dual."""
    f = _zeros(4, 4, 4)
    N, Ap, Am, C = 0, 1, 2, 3
    _set_bracket(f, N, Ap, Ap, 1)
    _set_bracket(f, N, Am, Am, -1)
    _set_bracket(f, Ap, Am, C, 1)
    form = _zeros(4, 4)
    form[N, C] = form[C, N] = Fraction(1)
    form[Ap, Am] = form[Am, Ap] = Fraction(1)
    return LieAlgebra(f, form, ("N", "A+", "A-", "C"), "oscillator")


def direct_sum(a: LieAlgebra | str, b: LieAlgebra | str) -> LieAlgebra:
    if isinstance(a, str):
        a = catalog(a)
    if isinstance(b, str):
        b = catalog(b)
    n, m = a.dim, b.dim
    exact = a.exact and b.exact
    if exact:
        f, form = _zeros(n + m, n + m, n + m), _zeros(n + m, n + m)
        fa, fb, Ba, Bb = a.structure, b.structure, a.form, b.form
    else:
        f = np.zeros((n + m,) * 3, dtype=complex)
        form = np.zeros((n + m,) * 2, dtype=complex)
        fa, fb, Ba, Bb = a.C, b.C, a.B, b.B
    f[:n, :n, :n] = fa
    f[n:, n:, n:] = fb
    form[:n, :n] = Ba
    form[n:, n:] = Bb
    labels = tuple(f"{s}_1" for s in a.labels) + tuple(f"{s}_2" for s in b.labels)
    return LieAlgebra(f, form, labels, f"direct_sum({a.name},{b.name})")


CATALOG = {
    "abelian": (abelian, "abelian(n), basis A1..An, form = identity"),
    "sl2": (sl2, "basis (H,E,F), [H,E]=2E, [H,F]=-2F, [E,F]=H, Killing form"),
    "sl2_real": (sl2_real, "compact real form, basis (X1,X2,X3), [X1,X2]=X3 cyclic, Killing form"),
    "oscillator": (oscillator, "basis (N,A+,A-,C), [N,A+-]=+-A+-, [A+,A-]=C, <N,C>=<A+,A->=1"),
    "direct_sum": (direct_sum, "direct_sum(a,b), orthogonal sum of two catalog algebras"),
}

_CALL = re.compile(r"^\s*(\w+)\s*(?:\((.*)\))?\s*$")


def _split_args(text):
    depth, start, out = 0, 0, []
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            out.append(text[start:i].strip())
            start = i + 1
    tail = text[start:].strip()
    if tail:
        out.append(tail)
    return out


def catalog(name: str, *params) -> LieAlgebra:
    """Build a catalog algebra, e.g. ``catalog("abelian", 3)`` or ``catalog("direct_sum(sl2,sl2)")``."""
    m = _CALL.match(name)
    if not m or m.group(1) not in CATALOG:
        raise KeyError(f"unknown algebra {name!r}; known: {', '.join(CATALOG)}")
    key, inner = m.group(1), m.group(2)
    if inner is not None and not params:
        params = tuple(_split_args(inner))
    build = CATALOG[key][0]
    if key == "abelian":
        return build(int(params[0]) if params else 3)
    if key == "direct_sum":
        if len(params) != 2:
            raise ValueError("direct_sum needs two algebras")
        return build(*params)
    if params:
        raise ValueError(f"{key} takes no parameters")
    return build()


# ---------------------------------------------------------------- file format

_RATIONAL = re.compile(r"^[+-]?\d+(?:/\d+)?$")


def _parse_value(token: str, lineno: int):
    if _RATIONAL.match(token):
        value = Fraction(token)
        return value
    try:
        return complex(token.replace("i", "j"))
    except ValueError:
        raise ParseError(f"line {lineno}: cannot parse value {token!r}") from None


def _put(store, key, value, mirror, lineno, what):
    for k, v in ((key, value), (mirror[0], mirror[1])):
        if k in store and store[k] != v:
            raise ParseError(f"line {lineno}: conflicting {what} entry for indices {k}")
    store[key] = value
    store[mirror[0]] = mirror[1]


def parse_algebra(text: str, name: str = "") -> LieAlgebra:
    """Parse the plain-text algebra format (``dim``, ``form``, ``bracket`` lines)."""
    dim = None
    forms, brackets = {}, {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        head = parts[0].lower()
        if dim is None:
            if head != "dim" or len(parts) != 2:
                raise ParseError(f"line {lineno}: first statement must be 'dim n'")
            try:
                dim = int(parts[1])
            except ValueError:
                raise ParseError(f"line {lineno}: bad dimension {parts[1]!r}") from None
            if dim < 1:
                raise ParseError(f"line {lineno}: dimension must be positive")
            continue
        nidx = {"form": 2, "bracket": 3}.get(head)
        if nidx is None:
            raise ParseError(f"line {lineno}: unknown statement {head!r}")
        if len(parts) != nidx + 2:
            raise ParseError(f"line {lineno}: {head} expects {nidx} indices and a value")
        try:
            idx = tuple(int(p) - 1 for p in parts[1:1 + nidx])
        except ValueError:
            raise ParseError(f"line {lineno}: indices must be integers") from None
        if any(i < 0 or i >= dim for i in idx):
            raise ParseError(f"line {lineno}: index out of range 1..{dim}")
        value = _parse_value(parts[-1], lineno)
        if head == "form":
            j, k = idx
            _put(forms, (j, k), value, ((k, j), value), lineno, "form")
        else:
            j, k, l = idx
            if j == k and value != 0:
                raise ParseError(f"line {lineno}: [T_j, T_j] must vanish")
            _put(brackets, (j, k, l), value, ((k, j, l), -value), lineno, "bracket")
    if dim is None:
        raise ParseError("empty algebra file")
    values = list(forms.values()) + list(brackets.values())
    exact = all(isinstance(v, Fraction) for v in values)
    if exact:
        f, B = _zeros(dim, dim, dim), _zeros(dim, dim)
    else:
        f = np.zeros((dim,) * 3, dtype=complex)
        B = np.zeros((dim,) * 2, dtype=complex)
    for k, v in forms.items():
        B[k] = v
    for k, v in brackets.items():
        f[k] = v
    return LieAlgebra(f, B, name=name or "file")


def load_algebra(path) -> LieAlgebra:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    return parse_algebra(text, name=path.stem)
