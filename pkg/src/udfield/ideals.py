"""Fractional ideals as exact HNF lattices: splitting, arithmetic,
principality certification, and imaginary-quadratic class numbers.

An ideal is stored as a row-HNF integer lattice over the field's integral
basis together with a global denominator, so equality is tuple equality
and the norm is a determinant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .enumeration import lattice_points_in_polydisc
from .errors import IndexDivisor, NotPrime, ZeroIdeal
from .linalg import (hnf_det, hnf_rows, lattice_intersect, mat, mat_inv,
                     rational_hnf, vec_mat)
from .numberfield import (CMStructure, FieldElement, NumberField, detect_cm)
from .numthy import check_squarefree_int, is_prime
from .polynomials import IntPoly, discriminant, factor_mod_p, make_poly


@dataclass(frozen=True)
class FracIdeal:
    """Nonzero fractional ideal: integer row-HNF basis over a denominator."""

    field: NumberField
    hnf: Tuple[Tuple[int, ...], ...]
    den: int

    @staticmethod
    def _normalize(field: NumberField, rows, den: int) -> "FracIdeal":
        h = hnf_rows(rows)
        if len(h) != field.n:
            raise ZeroIdeal("lattice does not have full rank")
        g = den
        for r in h:
            for c in r:
                g = math.gcd(g, abs(c))
                if g == 1:
                    break
            if g == 1:
                break
        if g > 1:
            h = tuple(tuple(c // g for c in r) for r in h)
            den //= g
        return FracIdeal(field, h, den)

    @classmethod
    def unit_ideal(cls, field: NumberField) -> "FracIdeal":
        eye = [[1 if i == j else 0 for j in range(field.n)] for i in range(field.n)]
        return cls(field, tuple(tuple(r) for r in eye), 1)

    @classmethod
    def from_elements(cls, field: NumberField, gens: Sequence[FieldElement]) -> "FracIdeal":
        """The O_K-module generated by gens."""
        rows: List[List[Fraction]] = []
        n = field.n
        for g in gens:
            for i in range(n):
                unit = tuple(Fraction(1 if k == i else 0) for k in range(n))
                rows.append(list(field._mul_coords(unit, g.coords)))
        den = 1
        for r in rows:
            for c in r:
                den = den * c.denominator // math.gcd(den, c.denominator)
        int_rows = [[int(c * den) for c in r] for r in rows]
        return cls._normalize(field, int_rows, den)

    @classmethod
    def principal(cls, z: FieldElement) -> "FracIdeal":
        if z.is_zero():
            raise ZeroIdeal("principal ideal of zero")
        return cls.from_elements(z.field, [z])

    # -- basic data -----------------------------------------------------------

    def basis_elements(self) -> List[FieldElement]:
        return [self.field.element([Fraction(c, self.den) for c in row])
                for row in self.hnf]

    def norm(self) -> Fraction:
        return Fraction(hnf_det(self.hnf), self.den ** self.field.n)

    def is_integral(self) -> bool:
        return self.den == 1

    def contains(self, z: FieldElement) -> bool:
        v = [c * self.den for c in z.coords]
        if any(c.denominator != 1 for c in v):
            return False
        v = [int(c) for c in v]
        for row in self.hnf:
            pc = next(i for i, c in enumerate(row) if c)
            if v[pc] % row[pc] != 0:
                return False
            q = v[pc] // row[pc]
            v = [a - q * b for a, b in zip(v, row)]
        return not any(v)

    # -- arithmetic -----------------------------------------------------------

    def __mul__(self, other: "FracIdeal") -> "FracIdeal":
        if self.field is not other.field:
            raise ValueError("ideals from different fields")
        a = self.basis_elements()
        b = other.basis_elements()
        rows = []
        den = 1
        prods = []
        for x in a:
            for y in b:
                prods.append((x * y).coords)
        for coords in prods:
            for c in coords:
                den = den * c.denominator // math.gcd(den, c.denominator)
        for coords in prods:
            rows.append([int(c * den) for c in coords])
        return self._normalize(self.field, rows, den)

    def inverse(self) -> "FracIdeal":
        field = self.field
        scaled = FracIdeal(field, self.hnf, 1)  # den-free integral version
        inter = None
        for m in scaled.basis_elements():
            rmat = field._mult_matrix(m.coords)
            rows = mat_inv(rmat)
            inter = rows if inter is None else lattice_intersect(inter, rows)
        h, d = rational_hnf(inter)
        # self = scaled / den, so self^{-1} = scaled^{-1} * den
        inv = self._normalize(field, [[c * self.den for c in row] for row in h], d)
        check = inv * self
        if check != FracIdeal.unit_ideal(field):
            raise ZeroIdeal("ideal is not invertible over this order")
        return inv

    def __pow__(self, e: int) -> "FracIdeal":
        if e < 0:
            return self.inverse() ** (-e)
        result = FracIdeal.unit_ideal(self.field)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def conjugate(self, cm: CMStructure) -> "FracIdeal":
        rows = [vec_mat([Fraction(c) for c in row], cm.conj_mat) for row in self.hnf]
        den = self.den
        extra = 1
        for r in rows:
            for c in r:
                extra = extra * c.denominator // math.gcd(extra, c.denominator)
        int_rows = [[int(c * extra) for c in r] for r in rows]
        return self._normalize(self.field, int_rows, den * extra)

    def __repr__(self):
        return f"FracIdeal({self.field.label}, norm={self.norm()})"


def ideal_mul(a: FracIdeal, b: FracIdeal) -> FracIdeal:
    return a * b


def ideal_inv(a: FracIdeal) -> FracIdeal:
    return a.inverse()


def conj_ideal(a: FracIdeal, cm: CMStructure) -> FracIdeal:
    return a.conjugate(cm)


def ideal_norm(a: FracIdeal) -> Fraction:
    return a.norm()


@dataclass(frozen=True)
class PrimeIdeal:
    """Prime above p from a factor of min_poly mod p (p prime to the index)."""

    p: int
    gen_poly: IntPoly
    e: int
    f_res: int
    lattice: FracIdeal

    @property
    def field(self) -> NumberField:
        return self.lattice.field

    def norm(self) -> int:
        return self.p ** self.f_res

    def __repr__(self):
        return (f"PrimeIdeal(p={self.p}, f={self.f_res}, e={self.e}, "
                f"g={list(self.gen_poly)})")


def field_index_squared(K: NumberField) -> Fraction:
    """[O_K : Z[theta]]^2 = disc(min_poly) / disc(K)."""
    return discriminant(K.min_poly) / K.disc


def split_prime(K: NumberField, p: int) -> List[PrimeIdeal]:
    """Factor (p) into primes via min_poly mod p.

    Requires p prime and coprime to the index [O_K : Z[theta]].  Verifies
    sum(e_i f_i) = n and that the product of the primes with multiplicity
    is exactly (p).
    """
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    idx2 = field_index_squared(K)
    if idx2.denominator != 1:
        raise ValueError("disc(min_poly) not divisible by disc(K)")
    idx2 = int(idx2)
    if idx2 % (p * p) == 0:
        raise IndexDivisor(
            f"{p} divides the index [O_K : Z[theta]]; "
            "mod-p splitting is not valid")
    factors = factor_mod_p(K.min_poly, p)
    out = []
    p_elt = K.from_rational(p)
    for g, e in factors:
        g_theta = K.from_power_coords([Fraction(c) for c in g])
        lat = FracIdeal.from_elements(K, [p_elt, g_theta])
        prime = PrimeIdeal(p=p, gen_poly=make_poly(g), e=e,
                           f_res=len(g) - 1, lattice=lat)
        if lat.norm() != prime.norm():
            raise ValueError(f"norm of ({p}, g) is {lat.norm()}, "
                             f"expected {prime.norm()}")
        out.append(prime)
    if sum(pr.e * pr.f_res for pr in out) != K.n:
        raise ValueError("sum of e*f over primes above p does not equal n")
    prod = FracIdeal.unit_ideal(K)
    for pr in out:
        prod = prod * pr.lattice ** pr.e
    if prod != FracIdeal.principal(p_elt):
        raise ValueError(f"product of primes above {p} is not (p)")
    return out


# ---------------------------------------------------------------------------
# Principality
# ---------------------------------------------------------------------------

FOUND = "found"
NOT_FOUND = "not_found"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class PrincipalityResult:
    status: str
    generator: Optional[FieldElement] = None

    def __bool__(self):
        return self.status == FOUND


def _nth_root_upper(value: int, k: int) -> int:
    """Smallest integer r with r^k >= value (value >= 0)."""
    if value <= 0:
        return 0
    r = int(round(value ** (1.0 / k)))
    while r ** k >= value:
        r -= 1
    while r ** k < value:
        r += 1
    return r


def is_principal(I: FracIdeal, slack: Fraction = Fraction(13, 10),
                 unit_search_depth: int = 3) -> PrincipalityResult:
    """Certified generator search.

    A returned generator g satisfies (g) = I exactly (HNF equality).
    NOT_FOUND is certified only for imaginary quadratic fields, where the
    enumeration of elements of the right norm is exhaustive; otherwise a
    failed search is INCONCLUSIVE.
    """
    K = I.field
    cm = detect_cm(K)
    if cm is None:
        raise ValueError("principality search implemented for CM fields only")
    scaled = FracIdeal(K, I.hnf, 1)
    norm = scaled.norm()
    assert norm.denominator == 1
    N = int(norm)
    basis = scaled.basis_elements()
    f = cm.f

    if K.n == 2 and K.disc < 0:
        # |sigma(x)|^2 = N(x): the polydisc of radius^2 = N is exhaustive
        candidates = lattice_points_in_polydisc(basis, cm, [Fraction(N)])
        for x in sorted(candidates, key=lambda z: tuple(z.coords)):
            if x.is_zero():
                continue
            if abs(x.norm()) == N and FracIdeal.principal(x) == scaled:
                return PrincipalityResult(FOUND, x / I.den)
        return PrincipalityResult(NOT_FOUND)

    disc_root = _nth_root_upper(N * N * abs(K.disc), 2 * f)
    rad2 = slack * disc_root
    stretches = _unit_stretches(K, cm, unit_search_depth)
    seen = set()
    for stretch in stretches:
        radii = [rad2 * s for s in stretch]
        try:
            candidates = lattice_points_in_polydisc(basis, cm, radii,
                                                    limit=2_000_000)
        except Exception:
            continue
        for x in sorted(candidates, key=lambda z: tuple(z.coords)):
            if x.is_zero() or x.coords in seen:
                continue
            seen.add(x.coords)
            if abs(x.norm()) == N and FracIdeal.principal(x) == scaled:
                return PrincipalityResult(FOUND, x / I.den)
    return PrincipalityResult(INCONCLUSIVE)


def _unit_stretches(K: NumberField, cm: CMStructure, depth: int):
    """Per-coordinate radius stretches from fundamental units of real
    quadratic subfields, up to the given power depth."""
    stretches = [[Fraction(1)] * cm.f]
    units = fundamental_units(K, cm)
    for u in units:
        for j in range(1, depth + 1):
            for sgn in (1, -1):
                w = u ** (sgn * j)
                row = []
                for idx in cm.pair_reps:
                    m2 = w.embed(idx, 32).abs_sq()
                    row.append(Fraction(int(m2.hi * 4096) + 1, 4096))
                stretches.append(row)
    return stretches


def fundamental_units(K: NumberField, cm: CMStructure) -> List[FieldElement]:
    """Fundamental units of the real quadratic subfields (multiquadratic
    fields only; other fields yield no stretches)."""
    if K._mq_ds is None:
        return []
    ds = K._mq_ds
    m = len(ds)
    out = []
    for mask in range(1, 1 << m):
        prod = 1
        for i in range(m):
            if mask >> i & 1:
                prod *= ds[i]
        from .numthy import squarefree_kernel

        d = squarefree_kernel(prod)
        if d <= 1:
            continue
        x, y, half = _pell_fundamental(d)
        # unit (x + y sqrt(d)) / (2 if half else 1); sqrt(d) = prod(sqrt(d_i)) / s
        s2 = prod // d
        s = math.isqrt(s2)
        sqrt_prod = _mq_subset_sqrt(K, mask)
        unit = (K.from_rational(x) + sqrt_prod * Fraction(y, s)) / (2 if half else 1)
        assert abs(unit.norm()) == 1
        out.append(unit)
    return out


def _mq_subset_sqrt(K: NumberField, mask: int) -> FieldElement:
    """The element prod_{i in mask} sqrt(d_i) of a multiquadratic field."""
    N = 1 << len(K._mq_ds)
    subset = [Fraction(0)] * N
    subset[mask] = Fraction(1)
    power = vec_mat(subset, K._mq_subset_to_power)
    return K.from_power_coords(power)


def _pell_fundamental(d: int) -> Tuple[int, int, bool]:
    """Smallest unit > 1 of Q(sqrt(d)) as (x, y, half_integer_flag)."""
    if d % 4 == 1:
        # x^2 - d y^2 = +-4 with x = y mod 2; smaller x first at each y
        y = 1
        while y < 10_000_000:
            for target in (-4, 4):
                x2 = d * y * y + target
                if x2 > 0:
                    x = math.isqrt(x2)
                    if x * x == x2 and (x - y) % 2 == 0:
                        return x, y, True
            y += 1
    else:
        y = 1
        while y < 10_000_000:
            for target in (-1, 1):
                x2 = d * y * y + target
                if x2 > 0:
                    x = math.isqrt(x2)
                    if x * x == x2:
                        return x, y, False
            y += 1
    raise ValueError(f"no fundamental unit found for d={d} within bounds")


# ---------------------------------------------------------------------------
# Imaginary quadratic class numbers (reduced binary quadratic forms)
# ---------------------------------------------------------------------------

def class_number_imag_quadratic(d: int) -> int:
    """h(Q(sqrt(d))) for squarefree d < 0, by counting reduced forms."""
    if d >= 0:
        raise ValueError("d must be negative")
    check_squarefree_int(d)
    D = d if d % 4 == 1 else 4 * d
    # reduced primitive forms: -a < b <= a <= c, b >= 0 when a == c
    count = 0
    a = 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            t = b * b - D
            if t % (4 * a) != 0:
                continue
            c = t // (4 * a)
            if c < a:
                continue
            if a == c and b < 0:
                continue
            if math.gcd(math.gcd(a, abs(b)), c) != 1:
                continue
            count += 1
        a += 1
    return count
