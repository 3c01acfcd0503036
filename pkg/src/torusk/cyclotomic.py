"""Exact arithmetic in cyclotomic fields Q(zeta_N).

Elements are stored as rational-coefficient polynomials in zeta_N modulo
the N-th cyclotomic polynomial, and every element is kept in canonical
form: the order is reduced to the smallest divisor d of N with the value
already in Q(zeta_d).  Equality and hashing are therefore structural.

>>> zeta(6) == 1 + zeta(3)
True
>>> (zeta(5) + zeta(5).conjugate()).order
5
>>> sum(zeta(5, k) for k in range(5)).is_rational()
True
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm

from .errors import InvariantViolation


def euler_phi(n: int) -> int:
    out = n
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            out -= out // p
        p += 1
    if m > 1:
        out -= out // m
    return out


def divisors(n: int) -> list[int]:
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


def _poly_div_exact(num: list[int], den: list[int]) -> list[int]:
    """Quotient of integer polynomials, assuming exact division."""
    num = num[:]
    dn, dd = len(num) - 1, len(den) - 1
    out = [0] * (dn - dd + 1)
    for k in range(dn - dd, -1, -1):
        c = num[k + dd]
        if c % den[dd] != 0:
            raise InvariantViolation("inexact polynomial division")
        q = c // den[dd]
        out[k] = q
        if q:
            for i in range(dd + 1):
                num[k + i] -= q * den[i]
    if any(num):
        raise InvariantViolation("inexact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients of Phi_n, low degree first, monic.

    >>> cyclotomic_polynomial(6)
    (1, -1, 1)
    """
    if n == 1:
        return (-1, 1)
    poly = [0] * (n + 1)
    poly[0] = -1
    poly[n] = 1
    for d in divisors(n):
        if d < n:
            poly = _poly_div_exact(poly, list(cyclotomic_polynomial(d)))
    return tuple(poly)


@lru_cache(maxsize=None)
def _power_table(n: int) -> tuple[tuple[int, ...], ...]:
    """zeta_n^j reduced mod Phi_n, for j = 0 .. 2n, as phi(n)-vectors."""
    phi = euler_phi(n)
    mod = cyclotomic_polynomial(n)
    rows = [(1,) + (0,) * (phi - 1)]
    cur = list(rows[0])
    for _ in range(2 * n):
        lead = cur[-1]
        cur = [0] + cur[:-1]
        if lead:
            for i in range(phi):
                cur[i] -= lead * mod[i]
        rows.append(tuple(cur))
    return tuple(rows)


class Cyclotomic:
    """A canonical element of some Q(zeta_N)."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs):
        coeffs = tuple(Fraction(c) for c in coeffs)
        if len(coeffs) != euler_phi(order):
            raise InvariantViolation("coefficient vector has wrong length")
        order, coeffs = _canonicalize(order, coeffs)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, *a):
        raise AttributeError("Cyclotomic is immutable")

    # -- constructors -------------------------------------------------

    @staticmethod
    def rational(q) -> "Cyclotomic":
        return Cyclotomic(1, (Fraction(q),))

    # -- coercion -----------------------------------------------------

    def raised_to_order(self, m: int) -> tuple[Fraction, ...]:
        """Coefficient vector of self inside Q(zeta_m), for order | m."""
        if m % self.order:
            raise InvariantViolation("cannot coerce to a non-multiple order")
        table = _power_table(m)
        step = m // self.order
        out = [Fraction(0)] * euler_phi(m)
        for i, c in enumerate(self.coeffs):
            if c:
                row = table[(i * step) % m]
                for j, r in enumerate(row):
                    if r:
                        out[j] += c * r
        return tuple(out)

    # -- arithmetic ---------------------------------------------------

    def _binary(self, other):
        if isinstance(other, (int, Fraction)):
            other = Cyclotomic.rational(other)
        if not isinstance(other, Cyclotomic):
            return None
        return other

    def __add__(self, other):
        other = self._binary(other)
        if other is None:
            return NotImplemented
        m = lcm(self.order, other.order)
        a = self.raised_to_order(m)
        b = other.raised_to_order(m)
        return Cyclotomic(m, tuple(x + y for x, y in zip(a, b)))

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.order, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        other = self._binary(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._binary(other)
        if other is None:
            return NotImplemented
        m = lcm(self.order, other.order)
        a = self.raised_to_order(m)
        b = other.raised_to_order(m)
        phi = len(a)
        conv = [Fraction(0)] * (2 * phi - 1 if phi else 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        conv[i + j] += x * y
        table = _power_table(m)
        out = [Fraction(0)] * phi
        for e, c in enumerate(conv):
            if c:
                row = table[e]
                for j, r in enumerate(row):
                    if r:
                        out[j] += c * r
        return Cyclotomic(m, tuple(out))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            if q == 0:
                raise ZeroDivisionError
            return Cyclotomic(self.order, tuple(c / q for c in self.coeffs))
        if isinstance(other, Cyclotomic) and other.is_rational():
            return self / other.to_fraction()
        return NotImplemented

    def galois(self, k: int) -> "Cyclotomic":
        """Apply the automorphism zeta -> zeta^k, for gcd(k, order) = 1."""
        n = self.order
        if gcd(k % n if n > 1 else 1, n) != 1:
            raise InvariantViolation("galois exponent not coprime to order")
        table = _power_table(n)
        out = [Fraction(0)] * len(self.coeffs)
        for i, c in enumerate(self.coeffs):
            if c:
                row = table[(i * k) % n]
                for j, r in enumerate(row):
                    if r:
                        out[j] += c * r
        return Cyclotomic(n, tuple(out))

    def conjugate(self) -> "Cyclotomic":
        if self.order == 1:
            return self
        return self.galois(self.order - 1)

    # -- predicates ---------------------------------------------------

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_rational(self) -> bool:
        return self.order == 1

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise InvariantViolation("value is not rational")
        return self.coeffs[0]

    def is_integer(self) -> bool:
        return self.is_rational() and self.coeffs[0].denominator == 1

    def key(self):
        """Total-order sort key (order first, then coefficients)."""
        return (self.order, self.coeffs)

    def __eq__(self, other):
        other = self._binary(other)
        if other is None:
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.order, self.coeffs))

    def __str__(self):
        if self.order == 1:
            return str(self.coeffs[0])
        z = f"z{self.order}"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "1" if i == 0 else (z if i == 1 else f"{z}^{i}")
            if i == 0:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"Cyclotomic({self.order}, {self.coeffs!r})"


def _canonicalize(order: int, coeffs: tuple[Fraction, ...]) -> tuple[int, tuple[Fraction, ...]]:
    if order == 1:
        return order, coeffs
    n = order
    for d in divisors(n):
        if d == n:
            break
        fixing = [k for k in range(1, n) if gcd(k, n) == 1 and k % d == 1 % d]
        table = _power_table(n)

        def image(k):
            out = [Fraction(0)] * len(coeffs)
            for i, c in enumerate(coeffs):
                if c:
                    row = table[(i * k) % n]
                    for j, r in enumerate(row):
                        if r:
                            out[j] += c * r
            return tuple(out)

        if all(image(k) == coeffs for k in fixing):
            # rewrite in the basis of Q(zeta_d) inside Q(zeta_n)
            phi_d = euler_phi(d)
            step = n // d
            basis = [table[(step * i) % n] for i in range(phi_d)]
            sol = _solve_basis(basis, coeffs)
            return _canonicalize(d, sol) if d > 1 else (1, sol)
    return order, coeffs


def _solve_basis(basis, target):
    """Solve sum a_i basis[i] = target by Gaussian elimination."""
    m = len(target)
    k = len(basis)
    a = [[Fraction(basis[j][i]) for j in range(k)] + [Fraction(target[i])] for i in range(m)]
    row = 0
    pivots = []
    for j in range(k):
        piv = next((i for i in range(row, m) if a[i][j] != 0), None)
        if piv is None:
            raise InvariantViolation("degenerate cyclotomic basis")
        a[row], a[piv] = a[piv], a[row]
        inv = 1 / a[row][j]
        for i in range(m):
            if i != row and a[i][j]:
                f = a[i][j] * inv
                for jj in range(j, k + 1):
                    a[i][jj] -= f * a[row][jj]
        pivots.append(j)
        row += 1
    for i in range(row, m):
        if a[i][k] != 0:
            raise InvariantViolation("value not in claimed subfield")
    out = [Fraction(0)] * k
    for r_i, j in enumerate(pivots):
        out[j] = a[r_i][k] / a[r_i][j]
    return tuple(out)


def zeta(n: int, k: int = 1) -> Cyclotomic:
    """The root of unity e^(2 pi i k / n).

    >>> zeta(4) * zeta(4) == -1
    True
    """
    if n < 1:
        raise InvariantViolation("zeta order must be positive")
    k %= n
    row = _power_table(n)[k]
    return Cyclotomic(n, tuple(Fraction(c) for c in row))


def root_of_unity(r) -> Cyclotomic:
    """e^(2 pi i r) for a rational number r.

    >>> root_of_unity(Fraction(1, 2)) == -1
    True
    """
    r = Fraction(r)
    return zeta(r.denominator, r.numerator % r.denominator)
