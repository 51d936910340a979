"""Moebius transformations and their fixed-point/multiplier coordinates.

This is the only floating-point module in the package; every comparison
uses an absolute tolerance of 1e-9 on complex entries.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

TOL = 1e-9


class DegenerateForm(ValueError):
    pass


class DegenerateInput(ValueError):
    pass


class NotLoxodromic(ValueError):
    pass


@dataclass(frozen=True)
class MoebiusMap:
    """z -> (a z + b) / (c z + d), normalized to a d - b c = 1.

    Maps are identified up to a global sign of the four entries.
    """

    a: complex
    b: complex
    c: complex
    d: complex

    @staticmethod
    def from_entries(a: complex, b: complex, c: complex, d: complex) -> "MoebiusMap":
        det = a * d - b * c
        if abs(det) < TOL * TOL:
            raise DegenerateInput("determinant is zero")
        s = cmath.sqrt(det)
        return MoebiusMap(a / s, b / s, c / s, d / s)

    def __call__(self, z: complex) -> complex:
        den = self.c * z + self.d
        if abs(den) < 1e-300:
            return complex("inf")
        return (self.a * z + self.b) / den

    def compose(self, other: "MoebiusMap") -> "MoebiusMap":
        return MoebiusMap(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "MoebiusMap":
        return MoebiusMap(self.d, -self.b, -self.c, self.a)

    def conjugate_by(self, g: "MoebiusMap") -> "MoebiusMap":
        """g * self * g^-1."""
        return g.compose(self).compose(g.inverse())

    def trace(self) -> complex:
        return self.a + self.d

    def approx_eq(self, other: "MoebiusMap", tol: float = TOL) -> bool:
        for sign in (1, -1):
            if (
                abs(self.a - sign * other.a) <= tol
                and abs(self.b - sign * other.b) <= tol
                and abs(self.c - sign * other.c) <= tol
                and abs(self.d - sign * other.d) <= tol
            ):
                return True
        return False


IDENTITY = MoebiusMap(1, 0, 0, 1)

# A fixed rational map with no real fixed point and c != 0; used by callers
# to conjugate degenerate placements (fixed point at infinity) into general
# position before reading off fixed-point data.
GENERIC_CONJUGATOR = MoebiusMap.from_entries(1, 1, 2, 3)


@dataclass(frozen=True)
class FixedPointData:
    z: complex       # attracting fixed point
    w: complex       # repelling fixed point
    multiplier: complex  # 0 < |multiplier| < 1

    def validate(self) -> "FixedPointData":
        if abs(self.z - self.w) <= TOL:
            raise DegenerateInput("fixed points coincide")
        m = abs(self.multiplier)
        if not (TOL < m < 1 - TOL * 0):
            if m >= 1:
                raise DegenerateInput("|multiplier| must be < 1")
            raise DegenerateInput("multiplier must be non-zero")
        return self


def classify(m: MoebiusMap) -> str:
    """One of identity | parabolic | elliptic | loxodromic."""
    if m.approx_eq(IDENTITY):
        return "identity"
    tr2 = m.trace() ** 2
    if abs(tr2 - 4) <= TOL:
        return "parabolic"
    if abs(tr2.imag) <= TOL and tr2.real < 4:
        return "elliptic"
    return "loxodromic"


def fixed_data(m: MoebiusMap) -> FixedPointData:
    """Attracting/repelling fixed points and the multiplier of a loxodromic
    map with c != 0 and finite fixed points."""
    kind = classify(m)
    if kind != "loxodromic":
        raise NotLoxodromic(f"map is {kind}")
    if abs(m.c) <= TOL:
        raise DegenerateForm("c = 0: a fixed point lies at infinity")
    disc = cmath.sqrt((m.a + m.d) ** 2 - 4)
    p1 = ((m.a - m.d) + disc) / (2 * m.c)
    p2 = ((m.a - m.d) - disc) / (2 * m.c)

    def deriv(z: complex) -> complex:
        return 1 / (m.c * z + m.d) ** 2

    l1, l2 = deriv(p1), deriv(p2)
    if abs(l1) < abs(l2):
        return FixedPointData(p1, p2, l1).validate()
    return FixedPointData(p2, p1, l2).validate()


def from_fixed_data(f: FixedPointData) -> MoebiusMap:
    """The normalized map with the given fixed points and multiplier.

    Uses r = z + w, s = z w, t = lambda + 1/lambda:
    c = sqrt((t - 2) / (r^2 - 4 s)) with the branch Im(c) > 0,
    a = (r c + sqrt(t + 2)) / 2, d = (-r c + sqrt(t + 2)) / 2, b = -s c.
    """
    f.validate()
    lam = f.multiplier
    r = f.z + f.w
    s = f.z * f.w
    t = lam + 1 / lam
    denom = r * r - 4 * s  # = (z - w)^2 != 0
    c = cmath.sqrt((t - 2) / denom)
    if c.imag < 0 or (abs(c.imag) <= TOL and c.real < 0):
        c = -c
    for tr in (cmath.sqrt(t + 2), -cmath.sqrt(t + 2)):
        a = (r * c + tr) / 2
        d = (-r * c + tr) / 2
        b = -s * c
        m = MoebiusMap(a, b, c, d)
        if abs(a * d - b * c - 1) > 1e-6:
            continue
        got = fixed_data(m)
        if (
            abs(got.z - f.z) <= 1e-6
            and abs(got.w - f.w) <= 1e-6
            and abs(got.multiplier - lam) <= 1e-6
        ):
            return m
    raise DegenerateInput("no branch reproduces the requested fixed data")
