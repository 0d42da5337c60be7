"""Exact-shape 2x2 complex matrix algebra for SL(2, C).

Matrices are stored as four complex entries (a, b, c, d) in row-major
order.  Arithmetic is plain double precision; nothing here renormalizes,
so the determinant of a product drifts only at machine-epsilon scale.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

from .errors import NonFiniteEntryError, NotUnimodularError

#: Default absolute tolerance on |det - 1| at validated construction.
DET_TOL = 1e-9


def _finite(z: complex) -> bool:
    return cmath.isfinite(z)


@dataclass(frozen=True)
class SL2Matrix:
    """A 2x2 complex matrix [[a, b], [c, d]], treated as unimodular.

    Instances coming from user input should be built with
    :func:`make_unimodular`, which enforces the determinant constraint.
    Library operations construct results directly because their outputs
    are unimodular by algebra.
    """

    a: complex
    b: complex
    c: complex
    d: complex

    @property
    def det(self) -> complex:
        return self.a * self.d - self.b * self.c

    @property
    def entries(self) -> tuple[complex, complex, complex, complex]:
        return (self.a, self.b, self.c, self.d)

    @property
    def max_abs(self) -> float:
        return max(abs(self.a), abs(self.b), abs(self.c), abs(self.d))

    def __matmul__(self, other: "SL2Matrix") -> "SL2Matrix":
        return mul(self, other)

    def __neg__(self) -> "SL2Matrix":
        return SL2Matrix(-self.a, -self.b, -self.c, -self.d)

    def __str__(self) -> str:
        return f"[[{self.a}, {self.b}], [{self.c}, {self.d}]]"


IDENTITY = SL2Matrix(1 + 0j, 0j, 0j, 1 + 0j)


def make_unimodular(a, b, c, d, tol: float = DET_TOL) -> SL2Matrix:
    """Validating constructor: entries finite and |ad - bc - 1| <= tol."""
    a, b, c, d = complex(a), complex(b), complex(c), complex(d)
    for z in (a, b, c, d):
        if not _finite(z):
            raise NonFiniteEntryError(f"non-finite matrix entry {z}")
    det = a * d - b * c
    if abs(det - 1) > tol:
        raise NotUnimodularError(det, tol)
    return SL2Matrix(a, b, c, d)


def diagonal(lam: complex) -> SL2Matrix:
    """diag(lam, 1/lam), the normal form of an element fixing 0 and infinity."""
    lam = complex(lam)
    if lam == 0:
        raise ZeroDivisionError("diagonal form needs a nonzero multiplier")
    return SL2Matrix(lam, 0j, 0j, 1 / lam)


def mul(x: SL2Matrix, y: SL2Matrix) -> SL2Matrix:
    """Matrix product x y."""
    return SL2Matrix(
        x.a * y.a + x.b * y.c,
        x.a * y.b + x.b * y.d,
        x.c * y.a + x.d * y.c,
        x.c * y.b + x.d * y.d,
    )


def inverse(x: SL2Matrix) -> SL2Matrix:
    """Inverse via the adjugate; exact for unimodular input."""
    return SL2Matrix(x.d, -x.b, -x.c, x.a)


def trace(x: SL2Matrix) -> complex:
    return x.a + x.d


def commutator(g: SL2Matrix, h: SL2Matrix) -> SL2Matrix:
    """g h g^-1 h^-1."""
    return mul(mul(g, h), mul(inverse(g), inverse(h)))
