"""Moebius classification and loxodromic normal form.

An element of SL(2, C) acts on the Riemann sphere by
z -> (a z + b) / (c z + d).  Its conjugacy class is read off the square
of the trace t = tr^2:

* identity        both lifts of the trivial map, A = I or A = -I
* parabolic       t = 4 and A != +-I, a single boundary fixed point
* elliptic        t real with 0 <= t < 4, rotation about an axis
* loxodromic      everything else; conjugate to diag(lam, 1/lam) with
                  |lam| > 1

Boundary comparisons use explicit tolerances (see CLASSIFY_TOL) so the
behavior on near-parabolic input is testable rather than accidental.

For a loxodromic element the normal form carries the expanding
eigenvalue lam, a determinant-1 conjugator C with
C (sign * A) C^-1 = diag(lam, 1/lam), and the translation quantity

    mg = |lam - 1| + |1/lam - 1|

which is the hypothesis scale of the generalized discreteness gates.
The lift sign is chosen to minimize mg; the two lifts +-A generate the
same group up to the central element, so the cheaper hypothesis wins.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from enum import Enum

from . import mat2c
from .errors import (
    IsIdentityError,
    NotLoxodromicError,
    ZeroLambdaError,
)
from .mat2c import SL2Matrix

#: Tolerance for "trace squared is real" and "trace squared equals 4".
CLASSIFY_TOL = 1e-9

#: Off-axis entries below this are treated as zero by is_axis_preserving.
AXIS_TOL = 1e-9


class MoebiusClass(Enum):
    IDENTITY = "Identity"
    PARABOLIC = "Parabolic"
    ELLIPTIC = "Elliptic"
    LOXODROMIC = "Loxodromic"


@dataclass(frozen=True)
class BoundaryPoint:
    """A point of the Riemann sphere: a finite complex number or infinity.

    Infinity is a tagged alternative (z is None), never a float sentinel.
    """

    z: complex | None

    @staticmethod
    def finite(z: complex) -> "BoundaryPoint":
        return BoundaryPoint(complex(z))

    @staticmethod
    def infinity() -> "BoundaryPoint":
        return BoundaryPoint(None)

    @property
    def is_infinity(self) -> bool:
        return self.z is None

    def __str__(self) -> str:
        return "inf" if self.z is None else str(self.z)


INFINITY = BoundaryPoint.infinity()


@dataclass(frozen=True)
class LoxodromicNormalization:
    """Diagonalizing data for a loxodromic element A.

    conjugator @ (lift_sign * A) @ conjugator^-1 = diag(lam, 1/lam),
    |lam| > 1, det(conjugator) = 1, and mg = |lam - 1| + |1/lam - 1|.
    """

    lam: complex
    conjugator: SL2Matrix
    lift_sign: int
    mg: float


def _is_identity_lift(m: SL2Matrix, tol: float = CLASSIFY_TOL) -> bool:
    for sign in (1, -1):
        if (
            abs(m.a - sign) <= tol
            and abs(m.b) <= tol
            and abs(m.c) <= tol
            and abs(m.d - sign) <= tol
        ):
            return True
    return False


def classify(m: SL2Matrix) -> MoebiusClass:
    """Conjugacy class of the Moebius action of m (lift independent)."""
    if _is_identity_lift(m):
        return MoebiusClass.IDENTITY
    t = mat2c.trace(m) ** 2
    if abs(t - 4) <= CLASSIFY_TOL:
        return MoebiusClass.PARABOLIC
    if abs(t.imag) <= CLASSIFY_TOL * max(1.0, abs(t)) and 0 <= t.real < 4:
        return MoebiusClass.ELLIPTIC
    return MoebiusClass.LOXODROMIC


def fixed_points(m: SL2Matrix) -> list[BoundaryPoint]:
    """Boundary fixed points: roots of c z^2 + (d - a) z - b = 0.

    Infinity is fixed exactly when c = 0.  A parabolic element has one
    point, anything else (other than the identity) has two.
    """
    if classify(m) is MoebiusClass.IDENTITY:
        raise IsIdentityError("every boundary point is fixed")
    a, b, c, d = m.entries
    c_zero = abs(c) <= 1e-13 * max(1e-300, m.max_abs)
    if classify(m) is MoebiusClass.PARABOLIC:
        if c_zero:
            return [INFINITY]
        return [BoundaryPoint.finite((a - d) / (2 * c))]
    if c_zero:
        # remaining finite root of the degenerate (linear) equation
        return [BoundaryPoint.finite(b / (d - a)), INFINITY]
    disc = (a - d) ** 2 + 4 * b * c
    root = cmath.sqrt(disc)
    return [
        BoundaryPoint.finite(((a - d) + root) / (2 * c)),
        BoundaryPoint.finite(((a - d) - root) / (2 * c)),
    ]


def apply_to_boundary(m: SL2Matrix, p: BoundaryPoint) -> BoundaryPoint:
    """Image of a boundary point under the Moebius action of m."""
    a, b, c, d = m.entries
    if p.is_infinity:
        if c == 0:
            return INFINITY
        return BoundaryPoint.finite(a / c)
    denom = c * p.z + d
    if denom == 0:
        return INFINITY
    return BoundaryPoint.finite((a * p.z + b) / denom)


def mg_of(lam: complex) -> float:
    """Translation quantity |lam - 1| + |1/lam - 1| of diag(lam, 1/lam)."""
    lam = complex(lam)
    if lam == 0:
        raise ZeroLambdaError("multiplier must be nonzero")
    return abs(lam - 1) + abs(1 / lam - 1)


def _eigenvector(m: SL2Matrix, lam: complex) -> tuple[complex, complex]:
    # Both rows of (m - lam I) are orthogonal to the eigenvector; take
    # the candidate with the larger norm for stability.
    u = (m.b, lam - m.a)
    v = (lam - m.d, m.c)
    return u if abs(u[0]) + abs(u[1]) >= abs(v[0]) + abs(v[1]) else v


def diagonalize_loxodromic(m: SL2Matrix) -> LoxodromicNormalization:
    """Reduce a loxodromic element to diag(lam, 1/lam), |lam| > 1.

    Output is deterministic: the expanding eigenvector is scaled to unit
    Euclidean norm with its first nonzero component real positive, and
    the contracting one is scaled so the eigenvector matrix P has
    determinant 1.  The conjugator is P^-1.  The lift sign picks
    whichever of +-m gives the smaller mg (ties go to +1).
    """
    if classify(m) is not MoebiusClass.LOXODROMIC:
        raise NotLoxodromicError(f"classify(m) = {classify(m).value}")
    t = mat2c.trace(m)
    root = cmath.sqrt(t * t - 4)
    mu = (t + root) / 2
    if abs(mu) <= 1:
        mu = (t - root) / 2
    # lift choice: -m has eigenvalues (-mu, -1/mu)
    if mg_of(-mu) < mg_of(mu):
        sign, lam = -1, -mu
        m = -m
    else:
        sign, lam = 1, mu

    v1 = _eigenvector(m, lam)
    v2 = _eigenvector(m, 1 / lam)

    norm = (abs(v1[0]) ** 2 + abs(v1[1]) ** 2) ** 0.5
    v1 = (v1[0] / norm, v1[1] / norm)
    pivot = v1[0] if abs(v1[0]) > 1e-12 else v1[1]
    phase = pivot / abs(pivot)
    v1 = (v1[0] / phase, v1[1] / phase)

    p_det = v1[0] * v2[1] - v1[1] * v2[0]
    v2 = (v2[0] / p_det, v2[1] / p_det)

    eigenbasis = SL2Matrix(v1[0], v2[0], v1[1], v2[1])
    return LoxodromicNormalization(
        lam=lam,
        conjugator=mat2c.inverse(eigenbasis),
        lift_sign=sign,
        mg=mg_of(lam),
    )


def is_axis_preserving(h: SL2Matrix, tol: float = AXIS_TOL) -> bool:
    """Does h preserve the set {0, infinity}?

    Meaningful when the companion generator is in diagonal normal form,
    where {0, infinity} is its fixed-point pair: h fixes both points
    (diagonal, b = c = 0) or swaps them (antidiagonal, a = d = 0).
    Groups generated together with a diagonal loxodromic are elementary
    exactly in this case.
    """
    return max(abs(h.b), abs(h.c)) <= tol or max(abs(h.a), abs(h.d)) <= tol
