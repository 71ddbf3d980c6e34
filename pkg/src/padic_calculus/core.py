"""Exact arithmetic on finite p-adic expansions.

Values live in Z[1/p] (PRational) or, where a function only needs a
rational argument, in plain ``fractions.Fraction``.  Norms and fractional
parts are exact rationals; complex values are produced only at the very
end, from an exact phase in [0, 1).
"""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from numbers import Rational

from .errors import DomainError, GridError

__all__ = [
    "PRational",
    "PVector",
    "Grid",
    "NormedCharacter",
    "MultCharacter",
    "is_prime",
    "valuation",
    "norm",
    "norm_exponent",
    "frac_part",
    "chi",
    "root_of_unity",
    "ppow",
    "primitive_root",
    "unit_residue",
    "enumerate_cosets",
    "as_fraction",
]


def is_prime(p: int) -> bool:
    if not isinstance(p, int) or p < 2:
        return False
    return all(p % d for d in range(2, math.isqrt(p) + 1))


def _check_prime(p):
    if not is_prime(p):
        raise DomainError(f"p must be prime, got {p!r}")


def _vp_int(a: int, p: int) -> int:
    v = 0
    while a % p == 0:
        a //= p
        v += 1
    return v


def as_fraction(x) -> Fraction:
    if isinstance(x, PRational):
        return x.value
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"expected a rational number, got {type(x).__name__}")


def valuation(x, p: int | None = None) -> int | None:
    """p-adic valuation; ``None`` for zero."""
    if isinstance(x, PRational):
        return x.valuation
    if p is None:
        raise TypeError("p is required for non-PRational arguments")
    q = as_fraction(x)
    if q == 0:
        return None
    return _vp_int(q.numerator, p) - _vp_int(q.denominator, p)


@dataclass(frozen=True)
class PRational:
    """An element num / p**exp of Z[1/p].

    Canonical form: zero is (0, 0); otherwise exp >= 0 and p does not
    divide num whenever exp > 0.
    """

    p: int
    num: int
    exp: int = 0

    def __post_init__(self):
        _check_prime(self.p)
        if self.exp < 0:
            object.__setattr__(self, "num", self.num * self.p ** (-self.exp))
            object.__setattr__(self, "exp", 0)
        num, exp = self.num, self.exp
        if num == 0:
            exp = 0
        while exp > 0 and num % self.p == 0:
            num //= self.p
            exp -= 1
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "exp", exp)

    @classmethod
    def from_value(cls, p: int, x) -> PRational:
        if isinstance(x, PRational):
            if x.p != p:
                raise DomainError(f"prime mismatch: {x.p} vs {p}")
            return x
        q = as_fraction(x)
        d = q.denominator
        e = _vp_int(d, p)
        if d != p**e:
            raise DomainError(f"{q} is not in Z[1/{p}]")
        return cls(p, q.numerator, e)

    _TEXT = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*\^\s*(\d+))?\s*$")

    @classmethod
    def parse(cls, text: str, p: int | None = None) -> PRational:
        """Parse ``"num/p^exp"`` or a plain integer."""
        m = cls._TEXT.match(text)
        if not m:
            raise DomainError(f"cannot parse p-adic rational {text!r}")
        num = int(m.group(1))
        if m.group(2) is None:
            if p is None:
                raise DomainError("a prime is needed to parse a plain integer")
            return cls(p, num, 0)
        base, exp = int(m.group(2)), int(m.group(3))
        if p is not None and base != p:
            raise DomainError(f"prime mismatch in {text!r}: expected {p}")
        return cls(base, num, exp)

    @property
    def value(self) -> Fraction:
        return Fraction(self.num, self.p**self.exp)

    @property
    def valuation(self) -> int | None:
        if self.num == 0:
            return None
        if self.exp > 0:
            return -self.exp
        return _vp_int(self.num, self.p)

    @property
    def norm(self) -> Fraction:
        v = self.valuation
        return Fraction(0) if v is None else Fraction(self.p) ** (-v)

    def _coerce(self, other) -> PRational:
        if isinstance(other, PRational):
            if other.p != self.p:
                raise DomainError(f"prime mismatch: {self.p} vs {other.p}")
            return other
        if isinstance(other, int):
            return PRational(self.p, other, 0)
        return PRational.from_value(self.p, other)

    def __add__(self, other):
        o = self._coerce(other)
        return PRational.from_value(self.p, self.value + o.value)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return PRational.from_value(self.p, self.value - o.value)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        return PRational.from_value(self.p, self.value * o.value)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o.num == 0:
            raise DomainError("division by zero")
        return PRational.from_value(self.p, self.value / o.value)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __neg__(self):
        return PRational(self.p, -self.num, self.exp)

    def __bool__(self):
        return self.num != 0

    def __str__(self):
        if self.exp == 0:
            return str(self.num)
        return f"{self.num}/{self.p}^{self.exp}"


@dataclass(frozen=True)
class PVector:
    coords: tuple

    def __post_init__(self):
        if not self.coords:
            raise DomainError("a p-adic vector needs at least one coordinate")
        ps = {c.p for c in self.coords}
        if len(ps) != 1:
            raise DomainError(f"coordinates carry different primes: {sorted(ps)}")

    @classmethod
    def of(cls, p: int, *xs) -> PVector:
        return cls(tuple(PRational.from_value(p, x) for x in xs))

    @property
    def p(self) -> int:
        return self.coords[0].p

    @property
    def n(self) -> int:
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __neg__(self):
        return PVector(tuple(-c for c in self.coords))


def norm_exponent(x, p: int | None = None) -> int | None:
    """Return g with |x|_p = p**g (max over coordinates), ``None`` for 0."""
    if isinstance(x, PVector):
        vals = [c.valuation for c in x.coords]
        vals = [v for v in vals if v is not None]
        return None if not vals else -min(vals)
    v = valuation(x, p)
    return None if v is None else -v


def norm(x, p: int | None = None) -> Fraction:
    """Exact p-adic norm of a scalar or of a vector (max norm)."""
    if isinstance(x, PVector):
        p = x.p
    elif isinstance(x, PRational):
        p = x.p
    g = norm_exponent(x, p)
    return Fraction(0) if g is None else Fraction(p) ** g


def frac_part(x, p: int | None = None) -> Fraction:
    """The fractional part {x}_p in [0, 1) of a rational x."""
    if isinstance(x, PRational):
        p = x.p
    if p is None:
        raise TypeError("p is required for non-PRational arguments")
    q = as_fraction(x)
    d = q.denominator
    e = _vp_int(d, p)
    if e == 0:
        return Fraction(0)
    pe = p**e
    rest = d // pe
    a = (q.numerator * pow(rest, -1, pe)) % pe
    return Fraction(a, pe)


_EXACT_TURNS = {
    Fraction(0): 1 + 0j,
    Fraction(1, 4): 1j,
    Fraction(1, 2): -1 + 0j,
    Fraction(3, 4): -1j,
}


def root_of_unity(phase) -> complex:
    """exp(2 pi i * phase) for an exact rational phase."""
    f = as_fraction(phase) % 1
    hit = _EXACT_TURNS.get(f)
    if hit is not None:
        return complex(hit)
    # Reduce to [-1/2, 1/2) so the argument passed to the trig library is small.
    if f >= Fraction(1, 2):
        f -= 1
    ang = 2.0 * math.pi * float(f)
    return complex(math.cos(ang), math.sin(ang))


def chi(x, p: int | None = None) -> complex:
    """Additive character chi_p(x) = exp(2 pi i {x}_p)."""
    return root_of_unity(frac_part(x, p))


def ppow(p: int, z) -> complex | float:
    """p**z on the principal branch; exact for integer exponents."""
    z = complex(z)
    if z.imag == 0 and z.real == int(z.real) and abs(z.real) < 1024:
        return float(Fraction(p) ** int(z.real))
    return cmath.exp(z * math.log(p))


@lru_cache(maxsize=None)
def primitive_root(p: int) -> int:
    """Smallest primitive root of (Z/p)^*."""
    _check_prime(p)
    if p == 2:
        return 1
    order = p - 1
    factors = {q for q in range(2, order + 1) if order % q == 0 and is_prime(q)}
    for g in range(2, p):
        if all(pow(g, order // q, p) != 1 for q in factors):
            return g
    raise AssertionError("unreachable")


@lru_cache(maxsize=None)
def _index_table(p: int) -> dict:
    g = primitive_root(p)
    table, x = {}, 1
    for k in range(p - 1):
        table[x] = k
        x = (x * g) % p
    return table


def unit_residue(x, p: int | None = None, k: int = 1) -> int:
    """Residue mod p**k of the unit part u of x = p**v * u."""
    if isinstance(x, PRational):
        p = x.p
    q = as_fraction(x)
    if q == 0:
        raise DomainError("zero has no unit part")
    v = valuation(q, p)
    u = q / Fraction(p) ** v
    pk = p**k
    return (u.numerator * pow(u.denominator, -1, pk)) % pk


@dataclass(frozen=True)
class NormedCharacter:
    """Normed multiplicative character pi_1: trivial (index 0) or tame.

    A tame character of index r sends x = p**v * u to
    exp(2 pi i r ind_g(u mod p) / (p - 1)) with g the smallest primitive root.
    """

    p: int
    index: int = 0

    def __post_init__(self):
        _check_prime(self.p)
        object.__setattr__(self, "index", self.index % (self.p - 1))

    @property
    def is_trivial(self) -> bool:
        return self.index == 0

    def phase(self, x) -> Fraction:
        if self.is_trivial:
            return Fraction(0)
        r = unit_residue(x, self.p, 1)
        return Fraction(self.index * _index_table(self.p)[r], self.p - 1) % 1

    def phase_of_residue(self, r: int) -> Fraction:
        if self.is_trivial:
            return Fraction(0)
        return Fraction(self.index * _index_table(self.p)[r % self.p], self.p - 1) % 1

    def __call__(self, x) -> complex:
        return root_of_unity(self.phase(x))

    def __mul__(self, other: NormedCharacter) -> NormedCharacter:
        if other.p != self.p:
            raise DomainError("prime mismatch")
        return NormedCharacter(self.p, self.index + other.index)

    def inverse(self) -> NormedCharacter:
        return NormedCharacter(self.p, -self.index)

    def __str__(self):
        return "trivial" if self.is_trivial else f"tame(r={self.index}, g={primitive_root(self.p)})"


@dataclass(frozen=True)
class MultCharacter:
    """pi_alpha(x) = |x|_p**(alpha - 1) * pi_1(x)."""

    alpha: complex
    pi1: NormedCharacter

    def __post_init__(self):
        object.__setattr__(self, "alpha", complex(self.alpha))

    @classmethod
    def trivial(cls, p: int, alpha) -> MultCharacter:
        return cls(alpha, NormedCharacter(p))

    @property
    def p(self) -> int:
        return self.pi1.p

    def modulus(self, norm_exp: int) -> complex:
        """|x|**(alpha-1) for |x| = p**norm_exp."""
        return ppow(self.p, (self.alpha - 1) * norm_exp)

    def __call__(self, x) -> complex:
        g = norm_exponent(x, self.p)
        if g is None:
            raise DomainError("pi_alpha is undefined at 0")
        return self.modulus(g) * self.pi1(x)

    def __mul__(self, other: MultCharacter) -> MultCharacter:
        return MultCharacter(self.alpha + other.alpha - 1, self.pi1 * other.pi1)

    def inverse(self) -> MultCharacter:
        return MultCharacter(2 - self.alpha, self.pi1.inverse())

    def shift(self, beta) -> MultCharacter:
        """The character |x|**beta * pi_alpha(x)."""
        return MultCharacter(self.alpha + beta, self.pi1)

    def __str__(self):
        a = self.alpha
        a_txt = f"{a.real:g}" if a.imag == 0 else f"{a.real:g}{a.imag:+g}i"
        return f"pi_{a_txt}[{self.pi1}]"


@dataclass(frozen=True)
class Grid:
    """Parameters of D^l_N(Q_p^n): support in B_N, constancy parameter >= l."""

    p: int
    n: int
    l: int
    N: int

    def __post_init__(self):
        _check_prime(self.p)
        if self.n < 1:
            raise GridError(f"dimension must be >= 1, got {self.n}")
        if self.l > self.N:
            raise GridError(f"constancy parameter l={self.l} exceeds support exponent N={self.N}")

    @property
    def depth(self) -> int:
        return self.N - self.l

    @property
    def side(self) -> int:
        """Number of cosets per axis, p**(N - l)."""
        return self.p**self.depth

    @property
    def size(self) -> int:
        return self.side**self.n

    @property
    def shape(self) -> tuple:
        return (self.side,) * self.n

    @property
    def cell_measure(self) -> Fraction:
        return Fraction(self.p) ** (self.n * self.l)

    def dual(self) -> Grid:
        """Grid of the Fourier image: (l, N) -> (-N, -l)."""
        return Grid(self.p, self.n, -self.N, -self.l)

    def representative(self, m) -> tuple:
        scale = Fraction(self.p) ** (-self.N)
        return tuple(PRational.from_value(self.p, mj * scale) for mj in m)

    def __str__(self):
        return f"(p={self.p}, n={self.n}, l={self.l}, N={self.N})"


def enumerate_cosets(grid: Grid) -> list:
    """Canonical representatives m / p**N of B_N / B_l, lexicographic in m."""
    return [grid.representative(m) for m in product(range(grid.side), repeat=grid.n)]
