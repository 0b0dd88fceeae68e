"""Sparse multivariate polynomials over the Gaussian rationals.

A :class:`Poly` is a canonical map from exponent tuples to nonzero
:class:`~eqbundle.scalars.Scalar` coefficients, so equality and zero testing
are structural.
"""

from __future__ import annotations

import itertools
from collections.abc import Mapping, Sequence
from types import MappingProxyType
from typing import Literal

from .errors import DimensionError
from .scalars import ONE, ZERO, Scalar, as_scalar

__all__ = ["Poly", "poly_arith", "poly_diff", "poly_eval", "monomials_up_to"]

Exponent = tuple[int, ...]


class Poly:
    __slots__ = ("_n", "_terms", "_hash")

    def __init__(self, num_vars: int, terms: Mapping[Sequence[int], object] | None = None):
        if num_vars < 0:
            raise DimensionError("num_vars must be nonnegative")
        clean: dict[Exponent, Scalar] = {}
        for exp, coeff in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != num_vars:
                raise DimensionError(
                    f"exponent {exp} has length {len(exp)}, expected {num_vars}")
            if any(e < 0 for e in exp):
                raise ValueError(f"negative exponent in {exp}")
            c = as_scalar(coeff)
            if exp in clean:
                c = clean[exp] + c
            if c.is_zero():
                clean.pop(exp, None)
            else:
                clean[exp] = c
        self._n = num_vars
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, num_vars: int, terms: dict[Exponent, Scalar]) -> Poly:
        # terms must already be canonical (no zeros, correct lengths)
        p = object.__new__(cls)
        p._n = num_vars
        p._terms = terms
        p._hash = None
        return p

    # constructors -------------------------------------------------------

    @classmethod
    def zero(cls, num_vars: int) -> Poly:
        return cls._raw(num_vars, {})

    @classmethod
    def const(cls, num_vars: int, value) -> Poly:
        return cls(num_vars, {(0,) * num_vars: value})

    @classmethod
    def var(cls, num_vars: int, index: int, coeff=1) -> Poly:
        if not 0 <= index < num_vars:
            raise DimensionError(f"variable index {index} out of range for {num_vars} variables")
        exp = [0] * num_vars
        exp[index] = 1
        return cls(num_vars, {tuple(exp): coeff})

    @classmethod
    def monomial(cls, exp: Sequence[int], coeff=1) -> Poly:
        return cls(len(exp), {tuple(exp): coeff})

    # accessors ----------------------------------------------------------

    @property
    def num_vars(self) -> int:
        return self._n

    @property
    def terms(self) -> Mapping[Exponent, Scalar]:
        return MappingProxyType(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def constant_term(self) -> Scalar:
        return self._terms.get((0,) * self._n, ZERO)

    def coeff(self, exp: Sequence[int]) -> Scalar:
        return self._terms.get(tuple(exp), ZERO)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self._terms), default=-1)

    def has_real_coefficients(self) -> bool:
        return all(c.is_real() for c in self._terms.values())

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self._n == other._n and self._terms == other._terms
        try:
            c = as_scalar(other)
        except TypeError:
            return NotImplemented
        if c.is_zero():
            return not self._terms
        return self._terms == {(0,) * self._n: c}

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._n, frozenset(self._terms.items())))
        return self._hash

    # arithmetic ---------------------------------------------------------

    def _check(self, other: Poly) -> None:
        if self._n != other._n:
            raise DimensionError(
                f"polynomials in {self._n} and {other._n} variables cannot be combined")

    def _lift(self, other) -> Poly:
        if isinstance(other, Poly):
            self._check(other)
            return other
        return Poly.const(self._n, as_scalar(other))

    def __add__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        out = dict(self._terms)
        for exp, c in other._terms.items():
            s = out.get(exp)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(exp, None)
            else:
                out[exp] = s
        return Poly._raw(self._n, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self._n, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if not isinstance(other, Poly):
            try:
                c = as_scalar(other)
            except TypeError:
                return NotImplemented
            return self.scale(c)
        self._check(other)
        out: dict[Exponent, Scalar] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                exp = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(exp)
                prod = c1 * c2
                out[exp] = prod if s is None else s + prod
        return Poly._raw(self._n, {e: c for e, c in out.items() if not c.is_zero()})

    __rmul__ = __mul__

    def scale(self, c) -> Poly:
        c = as_scalar(c)
        if c.is_zero():
            return Poly.zero(self._n)
        return Poly._raw(self._n, {e: c * v for e, v in self._terms.items()})

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result = Poly.const(self._n, ONE)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # calculus -----------------------------------------------------------

    def diff(self, var_index: int) -> Poly:
        """Formal partial derivative with respect to variable ``var_index``."""
        if not 0 <= var_index < self._n:
            raise DimensionError(
                f"variable index {var_index} out of range for {self._n} variables")
        out = {}
        for exp, c in self._terms.items():
            k = exp[var_index]
            if k:
                e = list(exp)
                e[var_index] = k - 1
                out[tuple(e)] = c * k
        return Poly._raw(self._n, out)

    def integrate(self, var_index: int) -> Poly:
        """Antiderivative in ``var_index`` vanishing on the hyperplane where that variable is 0."""
        if not 0 <= var_index < self._n:
            raise DimensionError(
                f"variable index {var_index} out of range for {self._n} variables")
        out = {}
        for exp, c in self._terms.items():
            e = list(exp)
            e[var_index] += 1
            out[tuple(e)] = c / e[var_index]
        return Poly._raw(self._n, out)

    def __call__(self, *point):
        return self.eval(point)

    def eval(self, point: Sequence) -> Scalar:
        if len(point) != self._n:
            raise DimensionError(
                f"point has length {len(point)}, polynomial has {self._n} variables")
        pt = [as_scalar(v) for v in point]
        powers: list[dict[int, Scalar]] = [{0: ONE} for _ in pt]
        total = ZERO
        for exp, c in self._terms.items():
            term = c
            for i, k in enumerate(exp):
                if k:
                    cache = powers[i]
                    if k not in cache:
                        cache[k] = pt[i] ** k
                    term = term * cache[k]
            total = total + term
        return total

    def compose(self, subs: Sequence[Poly]) -> Poly:
        """Substitute polynomial ``subs[i]`` for variable ``i``.

        All substitutes must share a variable count, which becomes the variable
        count of the result.
        """
        if len(subs) != self._n:
            raise DimensionError(
                f"{len(subs)} substitutes given for {self._n} variables")
        if not subs:
            raise DimensionError("cannot compose a 0-variable polynomial without a target arity")
        m = subs[0].num_vars
        for s in subs:
            if s.num_vars != m:
                raise DimensionError("substitutes must share num_vars")
        powers: list[dict[int, Poly]] = [{0: Poly.const(m, ONE)} for _ in subs]

        def power(i: int, k: int) -> Poly:
            cache = powers[i]
            if k not in cache:
                cache[k] = subs[i] ** k
            return cache[k]

        result = Poly.zero(m)
        for exp, c in self._terms.items():
            term = Poly.const(m, c)
            for i, k in enumerate(exp):
                if k:
                    term = term * power(i, k)
            result = result + term
        return result

    def substitute(self, var_index: int, value) -> Poly:
        """Fix one variable at an exact value, dropping it from the variable list."""
        if not 0 <= var_index < self._n:
            raise DimensionError(
                f"variable index {var_index} out of range for {self._n} variables")
        v = as_scalar(value)
        out: dict[Exponent, Scalar] = {}
        for exp, c in self._terms.items():
            e = exp[:var_index] + exp[var_index + 1:]
            term = c * v ** exp[var_index]
            s = out.get(e)
            out[e] = term if s is None else s + term
        return Poly._raw(self._n - 1, {e: c for e, c in out.items() if not c.is_zero()})

    def extend(self, extra: int) -> Poly:
        """The same polynomial viewed in ``num_vars + extra`` variables (new ones appended)."""
        pad = (0,) * extra
        return Poly._raw(self._n + extra, {e + pad: c for e, c in self._terms.items()})

    # rendering ----------------------------------------------------------

    def sorted_terms(self) -> list[tuple[Exponent, Scalar]]:
        """Terms in graded-reverse order: highest total degree first, then lex descending."""
        return sorted(self._terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def render(self, labels: Sequence[str] | None = None) -> str:
        if not self._terms:
            return "0"
        if labels is None:
            labels = [f"x{i}" for i in range(self._n)]
        parts = []
        for exp, c in self.sorted_terms():
            mono = "*".join(
                lab if k == 1 else f"{lab}^{k}"
                for lab, k in zip(labels, exp) if k)
            cs = str(c)
            compound = not c.is_real() and c.re != 0
            if compound:
                cs = f"({cs})"
            if not mono:
                parts.append(cs)
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{cs}*{mono}")
        text = parts[0]
        for p in parts[1:]:
            text += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return text

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"Poly({self._n}, {self.render()!r})"


def poly_arith(p: Poly, q: Poly, op: Literal["add", "sub", "mul"]) -> Poly:
    if p.num_vars != q.num_vars:
        raise DimensionError(f"num_vars mismatch: {p.num_vars} vs {q.num_vars}")
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    raise ValueError(f"unknown op {op!r}")


def poly_diff(p: Poly, var_index: int) -> Poly:
    return p.diff(var_index)


def poly_eval(p: Poly, point: Sequence) -> Scalar:
    return p.eval(point)


def monomials_up_to(num_vars: int, max_degree: int) -> list[Exponent]:
    """All exponent tuples of total degree at most ``max_degree``, lowest degree first."""
    exps = [e for e in itertools.product(range(max_degree + 1), repeat=num_vars)
            if sum(e) <= max_degree]
    return sorted(exps, key=lambda e: (sum(e), tuple(-k for k in e)))
