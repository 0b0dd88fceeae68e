"""Lie algebras by structure constants, and Lie-algebra-valued polynomial functions."""

from __future__ import annotations

import itertools
from collections.abc import Mapping, Sequence
from dataclasses import dataclass

from .errors import AlgebraMismatch, DimensionError
from .poly import Poly
from .scalars import ONE, ZERO, Scalar, as_scalar

__all__ = [
    "LieAlgebra",
    "LieValue",
    "LieValuedFunction",
    "lie_bracket",
    "check_jacobi",
    "abelian",
    "sl2",
    "so3",
    "heisenberg",
    "gl",
    "affine_line",
    "gl_identity",
    "jacobi_violation",
]


class LieAlgebra:
    """Finite-dimensional Lie algebra with ``[e_i, e_j] = sum_k c[i][j][k] e_k``.

    ``structure`` maps index pairs ``(i, j)`` to ``{k: coefficient}``. Missing
    pairs are filled in by antisymmetry; giving both ``(i, j)`` and ``(j, i)``
    with inconsistent values, or a nonzero ``(i, i)`` entry, raises
    ``ValueError``. The Jacobi identity is *not* enforced here; see
    :func:`check_jacobi`.
    """

    __slots__ = ("name", "basis_labels", "_c")

    def __init__(self, name: str, basis_labels: Sequence[str],
                 structure: Mapping[tuple[int, int], Mapping[int, object]] | None = None):
        labels = tuple(basis_labels)
        if len(set(labels)) != len(labels):
            raise ValueError(f"basis labels of {name!r} are not distinct")
        dim = len(labels)
        table: dict[tuple[int, int], dict[int, Scalar]] = {}
        given: dict[tuple[int, int], dict[int, Scalar]] = {}
        for (i, j), row in (structure or {}).items():
            for idx in (i, j, *row):
                if not 0 <= idx < dim:
                    raise DimensionError(f"structure index {idx} out of range for dim {dim}")
            clean = {k: as_scalar(c) for k, c in row.items() if not as_scalar(c).is_zero()}
            if i == j and clean:
                raise ValueError(f"[e_{i}, e_{i}] must vanish in {name!r}")
            given[(i, j)] = clean
        for (i, j), row in given.items():
            if i == j or not row:
                continue
            neg = {k: -c for k, c in row.items()}
            if (j, i) in given and given[(j, i)] != neg:
                raise ValueError(
                    f"structure constants of {name!r} are not antisymmetric at ({i}, {j})")
            table[(i, j)] = row
            table[(j, i)] = neg
        self.name = name
        self.basis_labels = labels
        self._c = table

    @property
    def dim(self) -> int:
        return len(self.basis_labels)

    def c(self, i: int, j: int, k: int) -> Scalar:
        return self._c.get((i, j), {}).get(k, ZERO)

    def bracket_basis(self, i: int, j: int) -> dict[int, Scalar]:
        return dict(self._c.get((i, j), {}))

    def structure_upper(self) -> dict[tuple[int, int], dict[int, Scalar]]:
        """Nonzero brackets ``[e_i, e_j]`` with ``i < j``, the canonical storage form."""
        return {key: dict(row) for key, row in sorted(self._c.items()) if key[0] < key[1]}

    def is_abelian(self) -> bool:
        return not self._c

    def bracket(self, a: Sequence[Scalar], b: Sequence[Scalar]) -> tuple[Scalar, ...]:
        out = [ZERO] * self.dim
        for (i, j), row in self._c.items():
            ai, bj = a[i], b[j]
            if ai.is_zero() or bj.is_zero():
                continue
            w = ai * bj
            for k, c in row.items():
                out[k] = out[k] + w * c
        return tuple(out)

    def __eq__(self, other):
        if not isinstance(other, LieAlgebra):
            return NotImplemented
        return (self.name == other.name and self.basis_labels == other.basis_labels
                and self._c == other._c)

    def __hash__(self):
        return hash((self.name, self.basis_labels))

    def __repr__(self):
        return f"LieAlgebra({self.name!r}, dim={self.dim})"


def check_jacobi(alg: LieAlgebra) -> bool:
    """True iff ``[[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j] = 0`` for all basis triples."""
    return jacobi_violation(alg) is None


def jacobi_violation(alg: LieAlgebra) -> tuple[int, int, int] | None:
    n = alg.dim

    def nested(i, j, k):
        # [[e_i, e_j], e_k] expanded in the basis
        out = [ZERO] * n
        for m, c in alg.bracket_basis(i, j).items():
            for l, d in alg.bracket_basis(m, k).items():
                out[l] = out[l] + c * d
        return out

    for i, j, k in itertools.combinations(range(n), 3):
        total = [a + b + c for a, b, c in zip(nested(i, j, k), nested(j, k, i), nested(k, i, j))]
        if any(not t.is_zero() for t in total):
            return (i, j, k)
    return None


@dataclass(frozen=True)
class LieValue:
    algebra: LieAlgebra
    coords: tuple[Scalar, ...]

    def __post_init__(self):
        if len(self.coords) != self.algebra.dim:
            raise DimensionError(
                f"{len(self.coords)} coordinates for algebra of dim {self.algebra.dim}")
        object.__setattr__(self, "coords", tuple(as_scalar(c) for c in self.coords))

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coords)

    def __str__(self):
        parts = [f"({c})*{lab}" for c, lab in zip(self.coords, self.algebra.basis_labels)
                 if not c.is_zero()]
        return " + ".join(parts) or "0"


class LieValuedFunction:
    """A polynomial map from the chart into a Lie algebra, one :class:`Poly` per basis element."""

    __slots__ = ("algebra", "components")

    def __init__(self, algebra: LieAlgebra, components: Sequence[Poly]):
        comps = tuple(components)
        if len(comps) != algebra.dim:
            raise DimensionError(
                f"{len(comps)} components for algebra {algebra.name!r} of dim {algebra.dim}")
        if comps and len({p.num_vars for p in comps}) != 1:
            raise DimensionError("components must share num_vars")
        self.algebra = algebra
        self.components = comps

    @classmethod
    def zero(cls, algebra: LieAlgebra, num_vars: int) -> LieValuedFunction:
        return cls(algebra, [Poly.zero(num_vars)] * algebra.dim)

    @classmethod
    def constant(cls, algebra: LieAlgebra, num_vars: int, coords: Sequence) -> LieValuedFunction:
        return cls(algebra, [Poly.const(num_vars, c) for c in coords])

    @classmethod
    def basis(cls, algebra: LieAlgebra, num_vars: int, index: int,
              coeff: Poly | None = None) -> LieValuedFunction:
        """``coeff * e_index`` (``coeff`` defaults to 1)."""
        if coeff is None:
            coeff = Poly.const(num_vars, ONE)
        comps = [Poly.zero(num_vars)] * algebra.dim
        comps[index] = coeff
        return cls(algebra, comps)

    @property
    def num_vars(self) -> int:
        return self.components[0].num_vars if self.components else 0

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.components)

    def _check(self, other: LieValuedFunction) -> None:
        if self.algebra != other.algebra:
            raise AlgebraMismatch(f"{self.algebra.name!r} vs {other.algebra.name!r}")

    def __add__(self, other: LieValuedFunction) -> LieValuedFunction:
        self._check(other)
        return LieValuedFunction(self.algebra, [a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other: LieValuedFunction) -> LieValuedFunction:
        self._check(other)
        return LieValuedFunction(self.algebra, [a - b for a, b in zip(self.components, other.components)])

    def __neg__(self) -> LieValuedFunction:
        return LieValuedFunction(self.algebra, [-a for a in self.components])

    def __mul__(self, f) -> LieValuedFunction:
        """Multiply by a scalar polynomial or an exact scalar."""
        return LieValuedFunction(self.algebra, [a * f for a in self.components])

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, LieValuedFunction):
            return NotImplemented
        return self.algebra == other.algebra and self.components == other.components

    def __hash__(self):
        return hash((self.algebra, self.components))

    def diff(self, var_index: int) -> LieValuedFunction:
        return LieValuedFunction(self.algebra, [a.diff(var_index) for a in self.components])

    def compose(self, subs: Sequence[Poly]) -> LieValuedFunction:
        return LieValuedFunction(self.algebra, [a.compose(subs) for a in self.components])

    def substitute(self, var_index: int, value) -> LieValuedFunction:
        return LieValuedFunction(self.algebra, [a.substitute(var_index, value) for a in self.components])

    def extend(self, extra: int) -> LieValuedFunction:
        return LieValuedFunction(self.algebra, [a.extend(extra) for a in self.components])

    def integrate(self, var_index: int) -> LieValuedFunction:
        return LieValuedFunction(self.algebra, [a.integrate(var_index) for a in self.components])

    def eval(self, point: Sequence) -> LieValue:
        return LieValue(self.algebra, tuple(a.eval(point) for a in self.components))

    def render(self, labels: Sequence[str] | None = None) -> str:
        parts = []
        for p, lab in zip(self.components, self.algebra.basis_labels):
            if p.is_zero():
                continue
            parts.append(f"({p.render(labels)})*{lab}")
        return " + ".join(parts) or "0"

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"LieValuedFunction({self.algebra.name!r}, {self.render()!r})"


def lie_bracket(a: LieValuedFunction, b: LieValuedFunction) -> LieValuedFunction:
    """Pointwise bracket ``[a, b]_k = sum_{i,j} a_i b_j c[i][j][k]``."""
    if a.algebra != b.algebra:
        raise AlgebraMismatch(f"{a.algebra.name!r} vs {b.algebra.name!r}")
    if a.num_vars != b.num_vars:
        raise DimensionError(f"num_vars mismatch: {a.num_vars} vs {b.num_vars}")
    alg = a.algebra
    n = a.num_vars
    out = [Poly.zero(n) for _ in range(alg.dim)]
    for (i, j), row in alg._c.items():
        ai, bj = a.components[i], b.components[j]
        if ai.is_zero() or bj.is_zero():
            continue
        prod = ai * bj
        for k, c in row.items():
            out[k] = out[k] + prod.scale(c)
    return LieValuedFunction(alg, out)


# standard algebras ------------------------------------------------------

def abelian(dim: int, name: str | None = None, labels: Sequence[str] | None = None) -> LieAlgebra:
    labels = list(labels) if labels is not None else [f"e{i + 1}" for i in range(dim)]
    return LieAlgebra(name or f"abelian{dim}", labels, {})


def sl2() -> LieAlgebra:
    # basis (h, e, f): [h,e]=2e, [h,f]=-2f, [e,f]=h
    return LieAlgebra("sl2", ["h", "e", "f"], {
        (0, 1): {1: 2},
        (0, 2): {2: -2},
        (1, 2): {0: 1},
    })


def so3() -> LieAlgebra:
    return LieAlgebra("so3", ["L1", "L2", "L3"], {
        (0, 1): {2: 1},
        (1, 2): {0: 1},
        (2, 0): {1: 1},
    })


def heisenberg() -> LieAlgebra:
    return LieAlgebra("heisenberg", ["p", "q", "z"], {(0, 1): {2: 1}})


def affine_line() -> LieAlgebra:
    """Two-dimensional nonabelian algebra ``[a, b] = b``."""
    return LieAlgebra("aff1", ["a", "b"], {(0, 1): {1: 1}})


def gl(r: int) -> LieAlgebra:
    """gl(r) in the elementary basis ``E_ij`` (index ``i*r + j``), for ``r <= 3``.

    ``[E_ij, E_kl] = delta_jk E_il - delta_li E_kj``.
    """
    if not 1 <= r <= 3:
        raise ValueError("gl(r) table generator supports 1 <= r <= 3")
    labels = [f"E{i + 1}{j + 1}" for i in range(r) for j in range(r)]
    table: dict[tuple[int, int], dict[int, Scalar]] = {}
    for (i, j), (k, l) in itertools.product(itertools.product(range(r), repeat=2), repeat=2):
        a, b = i * r + j, k * r + l
        if a >= b:
            continue
        row: dict[int, Scalar] = {}
        if j == k:
            row[i * r + l] = row.get(i * r + l, ZERO) + 1
        if l == i:
            row[k * r + j] = row.get(k * r + j, ZERO) - 1
        row = {m: c for m, c in row.items() if not c.is_zero()}
        if row:
            table[(a, b)] = row
    return LieAlgebra(f"gl{r}", labels, table)


def gl_identity(r: int) -> tuple[Scalar, ...]:
    """Coordinates of the identity matrix (spanning the center) in the basis of :func:`gl`."""
    return tuple(ONE if i == j else ZERO for i in range(r) for j in range(r))
