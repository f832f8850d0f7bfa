"""Bounded measures on Z_p stored by their Mahler coefficients a_n = ∫ C(t,n) dµ.

The binomial-coefficient sequence is the canonical store; moments are derived
through the Stirling transforms (an exact, triangular change of basis), and
restriction to the units is done entirely in the (1+T)^m basis with integer
weights, so no root-of-unity arithmetic ever appears.

Coefficients may be exact (int / Fraction, p-integral) or `PadicScalar`;
exact inputs stay exact through every operation that permits it.
"""

from __future__ import annotations

import math
from fractions import Fraction


from .errors import InvalidInput, PrecisionExhausted
from .padic import (INF, PadicScalar, binomial_series, checked_prime,
                    is_p_integral, stirling_first_signed, stirling_second)


# -- scalar coercion helpers (exact values stay exact) ----------------------

def _is_exact(x) -> bool:
    return not isinstance(x, PadicScalar)


def _norm_exact(q):
    q = Fraction(q)
    return int(q) if q.denominator == 1 else q


def _sadd(x, y):
    if isinstance(x, PadicScalar) and x.precision is INF:
        return y
    if isinstance(y, PadicScalar) and y.precision is INF:
        return x
    if _is_exact(x) and _is_exact(y):
        return _norm_exact(Fraction(x) + Fraction(y))
    if _is_exact(x):
        return y + x
    return x + y


def _smul(x, y):
    if _is_exact(x) and _is_exact(y):
        return _norm_exact(Fraction(x) * Fraction(y))
    if _is_exact(x):
        return 0 if Fraction(x) == 0 else y.scale(x)
    if _is_exact(y):
        return 0 if Fraction(y) == 0 else x.scale(y)
    return x * y


def _sdiv_exact(x, q):
    """Divide a scalar by an exact nonzero rational."""
    q = Fraction(q)
    if q == 0:
        raise InvalidInput("division by zero")
    if _is_exact(x):
        return _norm_exact(Fraction(x) / q)
    return x.scale(1 / q)


def _szero_q(x) -> bool:
    if _is_exact(x):
        return Fraction(x) == 0
    return x.is_zero


def _cap_precision(x, p: int, precision: int) -> PadicScalar:
    """Force a scalar into PadicScalar form known (at most) mod p^precision."""
    pad = PadicScalar.zero(p, precision)
    if _is_exact(x):
        return PadicScalar.from_rational(x, p, precision) + pad
    return x + pad


def _integral(x, p: int) -> bool:
    if _is_exact(x):
        return is_p_integral(x, p)
    return x.is_zero or x.valuation >= 0


class Measure:
    """A bounded measure on Z_p, known through its first `order` Mahler
    coefficients; `finite` marks a complete expansion (all higher a_n = 0)."""

    __slots__ = ("prime", "mahler", "finite")

    def __init__(self, prime: int, mahler, finite: bool = False):
        if not checked_prime(prime):
            raise InvalidInput(f"{prime} is not prime")
        mahler = list(mahler)
        if not mahler:
            raise InvalidInput("a measure needs at least one Mahler coefficient")
        for a in mahler:
            if isinstance(a, PadicScalar) and a.prime != prime:
                raise InvalidInput("coefficient prime mismatch")
            if not _integral(a, prime):
                raise InvalidInput("Mahler coefficient with negative valuation: "
                                   "this is a distribution, not a measure")
        self.prime = prime
        self.mahler = mahler
        self.finite = finite

    @property
    def order(self) -> int:
        return len(self.mahler)

    def coefficient(self, n: int):
        if n < self.order:
            return self.mahler[n]
        if self.finite:
            return 0
        raise InvalidInput(f"coefficient {n} beyond order {self.order} "
                           "of a non-finite measure")

    def support_degree(self) -> int:
        """Largest index with a nonzero stored coefficient."""
        for n in range(self.order - 1, -1, -1):
            if not _szero_q(self.mahler[n]):
                return n
        return 0

    def scale(self, scalar) -> "Measure":
        """Multiply by a p-integral scalar (boundedness is preserved)."""
        return Measure(self.prime, [_smul(scalar, a) for a in self.mahler],
                       finite=self.finite)

    def __repr__(self):
        flag = "finite" if self.finite else f"order {self.order}"
        return f"Measure(p={self.prime}, {flag}, mahler={self.mahler[:5]}...)"


def dirac(z, prime: int, order: int) -> Measure:
    """The Dirac measure at z in Z_p: Mahler coefficients C(z, n)."""
    if isinstance(z, PadicScalar):
        if z.prime != prime:
            raise InvalidInput("prime mismatch")
        series = binomial_series(z, order)
        return Measure(prime, series.coeffs, finite=False)
    z = Fraction(z)
    if not is_p_integral(z, prime):
        raise InvalidInput("z must lie in Z_p")
    series = binomial_series(z, order)
    finite = z.denominator == 1 and 0 <= z < order
    return Measure(prime, series.coeffs, finite=finite)


def moments(mu: Measure, r: int):
    """m_r(µ) = ∫ t^r dµ = Σ_n S(r,n) n! a_n — a finite exact sum."""
    if r < 0:
        raise InvalidInput("moment index must be nonnegative")
    if r >= mu.order and not mu.finite:
        raise InvalidInput(f"moment {r} needs order > {r} or a finite measure")
    total = 0
    for n in range(min(r, mu.order - 1) + 1):
        total = _sadd(total, _smul(stirling_second(r, n) * math.factorial(n),
                                   mu.mahler[n]))
    return total


def mahler_from_moments(b, prime: int) -> Measure:
    """Invert the moment map: a_n = (1/n!) Σ_i γ_{n,i} b_i.

    The division by n! costs v_p(n!) of absolute precision on p-adic input;
    a coefficient that fails integrality at the available precision means the
    moments were not those of a bounded measure.
    """
    b = list(b)
    if not b:
        raise InvalidInput("need at least the 0-th moment")
    coeffs = []
    for n in range(len(b)):
        total = 0
        for i in range(n + 1):
            total = _sadd(total, _smul(stirling_first_signed(n, i), b[i]))
        a_n = _sdiv_exact(total, math.factorial(n))
        if not _integral(a_n, prime):
            raise InvalidInput(f"non-integral Mahler coefficient at n={n}: "
                               "moments do not define a bounded measure")
        coeffs.append(a_n)
    return Measure(prime, coeffs, finite=False)


# -- the (1+T)^m basis --------------------------------------------------------

def plus_basis(mu: Measure):
    """Coefficients c_m with F(T) = Σ c_m (1+T)^m, m < order.

    Exact for finite measures; in general c_m mixes all stored a_k.
    """
    K = mu.order
    out = []
    for m in range(K):
        total = 0
        for k in range(m, K):
            w = (-1) ** (k - m) * math.comb(k, m)
            total = _sadd(total, _smul(w, mu.mahler[k]))
        out.append(total)
    return out


def from_plus_basis(c, prime: int, finite: bool) -> Measure:
    """Mahler coefficients a_n = Σ_m c_m C(m, n) from (1+T)^m coefficients."""
    K = len(c)
    mahler = []
    for n in range(K):
        total = 0
        for m in range(n, K):
            total = _sadd(total, _smul(math.comb(m, n), c[m]))
        mahler.append(total)
    return Measure(prime, mahler, finite=finite)


def restriction_tail_valuation(order: int, n: int, p: int) -> int:
    """Lower bound for v_p of the truncation error in the n-th restricted
    coefficient: every dropped band k >= order contributes at least
    (k-n)/(p-1) - 1, coming from the µ_p averaging."""
    return math.ceil(Fraction(order - n, p - 1) - 1)


def restrict_to_units(mu: Measure, precision: int | None = None) -> Measure:
    """Restriction of µ to Z_p^×: drop every (1+T)^m component with p | m.

    Finite measures restrict exactly.  For a truncated measure the caller
    must name a target precision; the call refuses when the truncation-tail
    valuation bound cannot support it.
    """
    p = mu.prime
    c = plus_basis(mu)
    kept = [0 if m % p == 0 else c[m] for m in range(len(c))]
    if mu.finite:
        return from_plus_basis(kept, p, finite=True)
    if precision is None:
        raise InvalidInput("restricting a truncated measure needs a target precision")
    if precision < 1:
        raise InvalidInput("target precision must be >= 1")
    n_out = mu.order - (precision + 1) * (p - 1)
    if n_out < 1:
        best = restriction_tail_valuation(mu.order, 0, p)
        raise PrecisionExhausted(
            f"order {mu.order} supports restriction precision at most {best}")
    raw = from_plus_basis(kept, p, finite=False)
    capped = [_cap_precision(a, p, precision) for a in raw.mahler[:n_out]]
    return Measure(p, capped, finite=False)


def cell_tail_valuation(order: int, nu: int, p: int) -> int:
    """Lower bound for v_p of the truncation error of a level-nu cell mass."""
    return math.ceil(Fraction(order, p ** (nu - 1) * (p - 1)) - nu)


def cell_mass(mu: Measure, a: int, nu: int, precision: int | None = None):
    """µ(a + p^nu Z_p) = Σ_k a_k Σ_{m ≡ a mod p^nu} (-1)^{k-m} C(k, m)."""
    p = mu.prime
    if nu < 1:
        raise InvalidInput("level nu must be >= 1")
    q = p ** nu
    if not 0 <= a < q:
        raise InvalidInput("residue out of range")
    if not mu.finite:
        if precision is None:
            raise InvalidInput("cell mass of a truncated measure needs a target precision")
        bound = cell_tail_valuation(mu.order, nu, p)
        if precision > bound:
            raise PrecisionExhausted(
                f"order {mu.order} supports level-{nu} cell masses to precision "
                f"at most {bound}")
    total = 0
    for k in range(mu.order):
        w = sum((-1) ** (k - m) * math.comb(k, m) for m in range(a % q, k + 1, q))
        total = _sadd(total, _smul(w, mu.mahler[k]))
    if mu.finite:
        return total
    return _cap_precision(total, p, precision)


def integrate_step(mu: Measure, phi, precision: int | None = None):
    """∫ φ dµ for a step function φ given by its values on Z/p^nu."""
    p = mu.prime
    size = len(phi)
    nu = 0
    while p ** nu < size:
        nu += 1
    if p ** nu != size or nu == 0:
        raise InvalidInput("phi must list its values on all of Z/p^nu, nu >= 1")
    total = 0
    for a in range(size):
        total = _sadd(total, _smul(phi[a], cell_mass(mu, a, nu, precision)))
    return total


def mult_pushforward(mu1: Measure, mu2: Measure, r_max: int) -> Measure:
    """The measure with m_r = m_r(µ1) m_r(µ2) for r <= r_max (image of
    µ1 ⊗ µ2 under multiplication), realized moments -> Mahler.

    The Stirling transforms are triangular, so the first r_max+1 Mahler
    coefficients computed this way are exactly those of the product measure.
    """
    if mu1.prime != mu2.prime:
        raise InvalidInput("prime mismatch")
    if r_max < 0:
        raise InvalidInput("r_max must be >= 0")
    b = [_smul(moments(mu1, r), moments(mu2, r)) for r in range(r_max + 1)]
    out = mahler_from_moments(b, mu1.prime)
    if mu1.finite and mu2.finite and \
            mu1.support_degree() * mu2.support_degree() <= r_max:
        return Measure(mu1.prime, out.mahler, finite=True)
    return out


def pairing_measure(pairs, r_max: int) -> Measure:
    """Average of multiplicative pushforwards over class-indexed pairs:
    m_r = (1/h) Σ_s m_r(µ1_s) m_r(µ2_s)."""
    pairs = list(pairs)
    if not pairs:
        raise InvalidInput("need at least one pair")
    p = pairs[0][0].prime
    h = len(pairs)
    padic_mode = any(not _is_exact(a) for m1, m2 in pairs
                     for a in m1.mahler + m2.mahler)
    if padic_mode and h % p == 0:
        raise InvalidInput("class count divisible by p in p-adic-only mode")
    b = []
    for r in range(r_max + 1):
        total = 0
        for m1, m2 in pairs:
            if m1.prime != p or m2.prime != p:
                raise InvalidInput("prime mismatch")
            total = _sadd(total, _smul(moments(m1, r), moments(m2, r)))
        b.append(_sdiv_exact(total, h))
    return mahler_from_moments(b, p)
