"""Exact arithmetic in the truncated integer polynomial ring.

The ring is Z[a_1, ..., a_n] / (a_1^{d_1}, ..., a_n^{d_n}): ordinary
integer polynomials in which any monomial with a_j raised to d_j or
higher is identically zero.  Elements are kept in canonical sparse form,
a map from exponent tuples to nonzero arbitrary-precision integers, so
the zero/nonzero question is always exact.

Exponent vectors are plain tuples of non-negative ints, one entry per
variable.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence

Exponents = tuple[int, ...]


def _sign_rows(sigma) -> tuple[tuple[int, ...], ...]:
    """Accept a SignMatrix-like object (``.entries``) or a plain row sequence."""
    rows = getattr(sigma, "entries", sigma)
    out = tuple(tuple(int(x) for x in row) for row in rows)
    if not out:
        raise ValueError("sign matrix must have at least one row")
    n = len(out[0])
    if n == 0 or any(len(row) != n for row in out):
        raise ValueError("sign matrix rows must all have the same positive length")
    if any(x not in (-1, 1) for row in out for x in row):
        raise ValueError("sign matrix entries must be +1 or -1")
    return out


class TruncatedPolynomial:
    """Immutable element of Z[a_1..a_n]/(a_j^{d_j}) in canonical sparse form."""

    __slots__ = ("dims", "coeffs")

    def __init__(self, dims: Sequence[int], coeffs: dict[Exponents, int] | None = None):
        dims = tuple(int(d) for d in dims)
        if not dims or any(d < 1 for d in dims):
            raise ValueError("dims must be a non-empty sequence of positive integers")
        clean: dict[Exponents, int] = {}
        for m, c in (coeffs or {}).items():
            m = tuple(int(e) for e in m)
            if len(m) != len(dims):
                raise ValueError(f"exponent vector {m} has wrong length for {len(dims)} variables")
            if any(e < 0 for e in m):
                raise ValueError(f"negative exponent in {m}")
            if c == 0 or any(e >= d for e, d in zip(m, dims)):
                continue
            clean[m] = int(c)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "coeffs", clean)

    def __setattr__(self, name, value):
        raise AttributeError("TruncatedPolynomial is immutable")

    @classmethod
    def zero(cls, dims: Sequence[int]) -> "TruncatedPolynomial":
        return cls(dims)

    @classmethod
    def constant(cls, dims: Sequence[int], value: int) -> "TruncatedPolynomial":
        n = len(tuple(dims))
        return cls(dims, {(0,) * n: value})

    @classmethod
    def variable(cls, dims: Sequence[int], j: int) -> "TruncatedPolynomial":
        """The generator a_j (0-based j); zero if d_j == 1."""
        dims = tuple(dims)
        m = tuple(1 if i == j else 0 for i in range(len(dims)))
        return cls(dims, {m: 1})

    @classmethod
    def linear_form(cls, dims: Sequence[int], signs: Sequence[int]) -> "TruncatedPolynomial":
        """sum_j signs[j] * a_j."""
        dims = tuple(dims)
        n = len(dims)
        if len(signs) != n:
            raise ValueError("signs must have one entry per variable")
        coeffs: dict[Exponents, int] = {}
        for j, s in enumerate(signs):
            m = tuple(1 if i == j else 0 for i in range(n))
            coeffs[m] = coeffs.get(m, 0) + int(s)
        return cls(dims, coeffs)

    # -- queries ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, exponents: Sequence[int]) -> int:
        """Coefficient of a^m; 0 for absent or out-of-bounds monomials."""
        m = tuple(int(e) for e in exponents)
        if len(m) != len(self.dims):
            raise ValueError("exponent vector has wrong length")
        return self.coeffs.get(m, 0)

    def top_coefficient(self) -> int:
        """Coefficient of prod_j a_j^{d_j - 1}, the maximal monomial of the ring."""
        return self.coeffs.get(tuple(d - 1 for d in self.dims), 0)

    def total_degrees(self) -> set[int]:
        return {sum(m) for m in self.coeffs}

    # -- ring operations -------------------------------------------------

    def _check_same_ring(self, other: "TruncatedPolynomial") -> None:
        if self.dims != other.dims:
            raise ValueError(f"mixed rings: dims {self.dims} vs {other.dims}")

    def __add__(self, other):
        if isinstance(other, int):
            other = TruncatedPolynomial.constant(self.dims, other)
        if not isinstance(other, TruncatedPolynomial):
            return NotImplemented
        self._check_same_ring(other)
        coeffs = dict(self.coeffs)
        for m, c in other.coeffs.items():
            coeffs[m] = coeffs.get(m, 0) + c
        return TruncatedPolynomial(self.dims, coeffs)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedPolynomial(self.dims, {m: -c for m, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other if isinstance(other, TruncatedPolynomial) else -int(other))

    def __mul__(self, other):
        if isinstance(other, int):
            return TruncatedPolynomial(self.dims, {m: c * other for m, c in self.coeffs.items()})
        if not isinstance(other, TruncatedPolynomial):
            return NotImplemented
        self._check_same_ring(other)
        dims = self.dims
        # Eager reduction: a product monomial is dropped the moment any
        # exponent reaches d_j, so intermediates never exceed prod(d_j) terms.
        coeffs: dict[Exponents, int] = {}
        for ma, ca in self.coeffs.items():
            for mb, cb in other.coeffs.items():
                m = tuple(ea + eb for ea, eb in zip(ma, mb))
                if any(e >= d for e, d in zip(m, dims)):
                    continue
                coeffs[m] = coeffs.get(m, 0) + ca * cb
        return TruncatedPolynomial(dims, coeffs)

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if exponent < 0:
            raise ValueError("negative powers are not defined in the quotient ring")
        result = TruncatedPolynomial.constant(self.dims, 1)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, TruncatedPolynomial):
            return NotImplemented
        return self.dims == other.dims and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.dims, frozenset(self.coeffs.items())))

    def __repr__(self):
        if self.is_zero():
            return f"TruncatedPolynomial(dims={self.dims}, 0)"
        terms = ", ".join(f"{m}: {c}" for m, c in sorted(self.coeffs.items()))
        return f"TruncatedPolynomial(dims={self.dims}, {{{terms}}})"


def expand_product(sigma, powers: Sequence[int], dims: Sequence[int]) -> TruncatedPolynomial:
    """Expand prod_i (sum_j sigma[i][j] * a_j)^{powers[i]} in the truncated ring.

    ``sigma`` is an r x n matrix of +-1 signs (a SignMatrix or any row
    sequence); ``powers`` has one non-negative exponent per row and
    ``dims`` one truncation degree per variable.  All arithmetic is exact.
    """
    rows = _sign_rows(sigma)
    dims = tuple(int(d) for d in dims)
    powers = tuple(int(k) for k in powers)
    if len(powers) != len(rows):
        raise ValueError(f"{len(rows)} rows but {len(powers)} powers")
    if len(dims) != len(rows[0]):
        raise ValueError(f"{len(rows[0])} columns but {len(dims)} dims")
    if any(k < 0 for k in powers):
        raise ValueError("powers must be non-negative")
    result = TruncatedPolynomial.constant(dims, 1)
    for row, k in zip(rows, powers):
        if k == 0:
            continue
        result = result * (TruncatedPolynomial.linear_form(dims, row) ** k)
        if result.is_zero():
            break
    return result


def coefficient(p: TruncatedPolynomial, exponents: Sequence[int]) -> int:
    return p.coefficient(exponents)


def top_coefficient(p: TruncatedPolynomial) -> int:
    return p.top_coefficient()


def is_zero(p: TruncatedPolynomial) -> bool:
    return p.is_zero()


def _multinomial(k: int, parts: Sequence[int]) -> int:
    if any(c < 0 for c in parts):
        return 0
    out = math.factorial(k)
    for c in parts:
        out //= math.factorial(c)
    return out


def _bounded_compositions(total: int, bounds: Sequence[int]) -> Iterable[tuple[int, ...]]:
    """All ways to write ``total`` as a sum over positions, entry j at most bounds[j]."""
    n = len(bounds)

    def rec(j: int, remaining: int, prefix: tuple[int, ...]):
        if j == n - 1:
            if remaining <= bounds[j]:
                yield prefix + (remaining,)
            return
        for c in range(min(remaining, bounds[j]) + 1):
            yield from rec(j + 1, remaining - c, prefix + (c,))

    if n:
        yield from rec(0, total, ())


def coefficient_direct(sigma, powers: Sequence[int], exponents: Sequence[int]) -> int:
    """Untruncated coefficient of a^m in prod_i (sigma_i . a)^{k_i}, by direct expansion.

    Sums over all splittings m_j = sum_i c_{i,j} with sum_j c_{i,j} = k_i
    of prod_i multinomial(k_i; c_i) * prod_j sigma[i][j]^{c_{i,j}}; a
    multinomial with a negative entry counts as 0.  This is the slow
    independent cross-check for :func:`expand_product`, valid for any m
    with |m| = |k| (including exponents at or beyond the truncation
    bounds, where the ring coefficient is defined as 0).
    """
    rows = _sign_rows(sigma)
    powers = tuple(int(k) for k in powers)
    m = tuple(int(e) for e in exponents)
    if len(powers) != len(rows):
        raise ValueError(f"{len(rows)} rows but {len(powers)} powers")
    if len(m) != len(rows[0]):
        raise ValueError("exponent vector has wrong length")
    if sum(powers) != sum(m):
        raise ValueError(f"|exponents| = {sum(m)} must equal |powers| = {sum(powers)}")
    if any(k < 0 for k in powers) or any(e < 0 for e in m):
        return 0

    r = len(rows)

    def rec(i: int, remaining: tuple[int, ...]) -> int:
        if i == r:
            return 1 if all(v == 0 for v in remaining) else 0
        total = 0
        for comp in _bounded_compositions(powers[i], remaining):
            weight = _multinomial(powers[i], comp)
            for s, c in zip(rows[i], comp):
                if c and s < 0 and c % 2:
                    weight = -weight
            rest = tuple(v - c for v, c in zip(remaining, comp))
            total += weight * rec(i + 1, rest)
        return total

    return rec(0, m)
