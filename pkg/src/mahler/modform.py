"""Truncated q-expansions with the U/V/T_p operators, p-depletion, the theta
operator, the interpolation Euler factor, and nearly-holomorphic raising.

Coefficients are exact rationals (or p-adic scalars); built-in generators
supply the weight-12 level-1 cusp form (eta-product) and Eisenstein series
as a test corpus.
"""

from __future__ import annotations

import math
from fractions import Fraction

from sympy import bernoulli

from .errors import InvalidInput


class DirichletCharacter:
    """A character mod q stored by its value table (exact values; real
    characters suffice for every computation here)."""

    __slots__ = ("modulus", "values")

    def __init__(self, modulus: int, values):
        values = tuple(_norm(v) for v in values)
        if modulus < 1 or len(values) != modulus:
            raise InvalidInput("value table must have length equal to the modulus")
        for n, v in enumerate(values):
            coprime = math.gcd(n, modulus) == 1
            if coprime == (v == 0):
                raise InvalidInput("character must vanish exactly off the units")
        if modulus <= 100:
            for i in range(modulus):
                for j in range(modulus):
                    if values[i * j % modulus] != _norm(Fraction(values[i]) * Fraction(values[j])):
                        raise InvalidInput("value table is not multiplicative")
        self.modulus = modulus
        self.values = values

    @classmethod
    def trivial(cls, modulus: int = 1) -> "DirichletCharacter":
        return cls(modulus, tuple(1 if math.gcd(n, modulus) == 1 else 0
                                  for n in range(modulus)))

    def __call__(self, n: int):
        return self.values[n % self.modulus]

    def __eq__(self, other):
        return isinstance(other, DirichletCharacter) and \
            self.modulus == other.modulus and self.values == other.values

    __hash__ = None

    def __repr__(self):
        return f"DirichletCharacter(mod {self.modulus})"


def _norm(v):
    f = Fraction(v)
    return int(f) if f.denominator == 1 else f


class QExpansion:
    """A modular-form q-expansion known through q^trunc."""

    __slots__ = ("weight", "level", "eps", "coeffs")

    def __init__(self, weight: int, level: int, eps: DirichletCharacter, coeffs):
        if level < 1:
            raise InvalidInput("level must be >= 1")
        if level % eps.modulus != 0:
            raise InvalidInput("nebentypus modulus must divide the level")
        self.weight = weight
        self.level = level
        self.eps = eps
        self.coeffs = tuple(_norm(c) if isinstance(c, (int, Fraction)) else c
                            for c in coeffs)
        if not self.coeffs:
            raise InvalidInput("empty coefficient list")

    @property
    def trunc(self) -> int:
        return len(self.coeffs) - 1

    def coefficient(self, n: int):
        if not 0 <= n <= self.trunc:
            raise InvalidInput(f"coefficient {n} beyond truncation {self.trunc}")
        return self.coeffs[n]

    def _same_type(self, other: "QExpansion"):
        if (self.weight, self.level, self.eps) != (other.weight, other.level, other.eps):
            raise InvalidInput("weight/level/nebentypus mismatch")

    def __add__(self, other: "QExpansion") -> "QExpansion":
        self._same_type(other)
        n = min(self.trunc, other.trunc)
        return QExpansion(self.weight, self.level, self.eps,
                          [self.coeffs[i] + other.coeffs[i] for i in range(n + 1)])

    def __sub__(self, other: "QExpansion") -> "QExpansion":
        return self + other.scale(-1)

    def scale(self, scalar) -> "QExpansion":
        return QExpansion(self.weight, self.level, self.eps,
                          [_norm(Fraction(scalar) * Fraction(c)) if isinstance(c, (int, Fraction))
                           else c * scalar for c in self.coeffs])

    def __eq__(self, other):
        return isinstance(other, QExpansion) and \
            (self.weight, self.level, self.eps) == (other.weight, other.level, other.eps) \
            and self.coeffs == other.coeffs

    __hash__ = None

    def __repr__(self):
        return (f"QExpansion(k={self.weight}, N={self.level}, "
                f"coeffs={list(self.coeffs[:8])}... + O(q^{self.trunc + 1}))")


# -- Hecke-type operators ----------------------------------------------------

def u_operator(f: QExpansion, p: int) -> QExpansion:
    """U_p: a_n -> a_{np}; truncation drops to floor(M/p)."""
    if f.trunc < p:
        raise InvalidInput("truncation too short for U_p")
    return QExpansion(f.weight, f.level, f.eps, f.coeffs[::p])


def v_operator(f: QExpansion, p: int) -> QExpansion:
    """V_p: (Vf)(q) = f(q^p); every coefficient of the result is determined,
    so the truncation stretches to p*M."""
    out = [0] * (p * f.trunc + 1)
    for n, c in enumerate(f.coeffs):
        out[n * p] = c
    return QExpansion(f.weight, f.level, f.eps, out)


def hecke_operator(f: QExpansion, p: int) -> QExpansion:
    """T_p = U_p + eps(p) p^(k-1) V_p, with eps(p) = 0 when p | level."""
    u = u_operator(f, p)
    eps_p = 0 if f.level % p == 0 else f.eps(p)
    if eps_p == 0:
        return u
    v = v_operator(f, p).scale(Fraction(eps_p) * p ** (f.weight - 1))
    return u + v


def p_deplete(f: QExpansion, p: int) -> QExpansion:
    """(1 - VU): zero every coefficient with p | n."""
    return QExpansion(f.weight, f.level, f.eps,
                      [0 if n % p == 0 else c for n, c in enumerate(f.coeffs)])


def theta_operator(f: QExpansion, iterations: int = 1) -> QExpansion:
    """(q d/dq)^r: a_n -> n^r a_n."""
    if iterations < 0:
        raise InvalidInput("iteration count must be >= 0")
    if iterations == 0:
        return f
    return QExpansion(f.weight, f.level, f.eps,
                      [c * n ** iterations for n, c in enumerate(f.coeffs)])


def interpolation_euler_factor(a_p, eps_p, chi_value, kappa: int, p: int) -> Fraction:
    """The multiplier 1 - a_p χ(ϖ) p^(-2κ) + ε(p) χ(ϖ)^2 p^(-2κ-1) relating the
    p-depleted toric period to the original one."""
    if kappa < 1:
        raise InvalidInput("kappa must be >= 1")
    a_p, eps_p, chi_value = Fraction(a_p), Fraction(eps_p), Fraction(chi_value)
    q = Fraction(1, p ** (2 * kappa))
    return 1 - a_p * chi_value * q + eps_p * chi_value ** 2 * q / p


# -- nearly-holomorphic forms and Maass raising -------------------------------

class NearlyHolomorphic:
    """Σ c(n,j) q^n X^j with X = 1/(4πy); finite table, explicit truncation."""

    __slots__ = ("weight", "trunc", "cells")

    def __init__(self, weight: int, trunc: int, cells):
        self.weight = weight
        self.trunc = trunc
        table = {}
        for (n, j), c in dict(cells).items():
            if n < 0 or j < 0:
                raise InvalidInput("cell indices must be nonnegative")
            if n > trunc:
                continue
            c = _norm(c)
            if c != 0:
                table[(n, j)] = c
        self.cells = table

    @classmethod
    def from_qexpansion(cls, f: QExpansion) -> "NearlyHolomorphic":
        return cls(f.weight, f.trunc,
                   {(n, 0): c for n, c in enumerate(f.coeffs)})

    def __eq__(self, other):
        return isinstance(other, NearlyHolomorphic) and \
            (self.weight, self.trunc, self.cells) == (other.weight, other.trunc, other.cells)

    __hash__ = None

    def __add__(self, other: "NearlyHolomorphic") -> "NearlyHolomorphic":
        if self.weight != other.weight:
            raise InvalidInput("weight mismatch")
        trunc = min(self.trunc, other.trunc)
        cells = dict(self.cells)
        for key, c in other.cells.items():
            cells[key] = cells.get(key, 0) + c
        return NearlyHolomorphic(self.weight, trunc, cells)

    def scale(self, scalar) -> "NearlyHolomorphic":
        return NearlyHolomorphic(self.weight, self.trunc,
                                 {k: Fraction(scalar) * Fraction(c)
                                  for k, c in self.cells.items()})

    def __mul__(self, other: "NearlyHolomorphic") -> "NearlyHolomorphic":
        trunc = min(self.trunc, other.trunc)
        cells = {}
        for (n1, j1), c1 in self.cells.items():
            for (n2, j2), c2 in other.cells.items():
                if n1 + n2 <= trunc:
                    key = (n1 + n2, j1 + j2)
                    cells[key] = cells.get(key, 0) + Fraction(c1) * Fraction(c2)
        return NearlyHolomorphic(self.weight + other.weight, trunc, cells)

    def __repr__(self):
        return f"NearlyHolomorphic(k={self.weight}, cells={len(self.cells)})"


def maass_raise(f: NearlyHolomorphic, iterations: int = 1) -> NearlyHolomorphic:
    """The weight-raising operator: c(n,j) contributes n·c at (n,j) and
    (j-k)·c at (n,j+1); each application raises the weight by 2."""
    out = f
    for _ in range(iterations):
        k = out.weight
        cells = {}
        for (n, j), c in out.cells.items():
            if n:
                cells[(n, j)] = cells.get((n, j), 0) + n * c
            cells[(n, j + 1)] = cells.get((n, j + 1), 0) + (j - k) * c
        out = NearlyHolomorphic(k + 2, out.trunc, cells)
    return out


# -- generators ----------------------------------------------------------------

def _poly_mul_trunc(a, b, trunc):
    out = [0] * (trunc + 1)
    for i, x in enumerate(a):
        if x == 0 or i > trunc:
            continue
        for j, y in enumerate(b):
            if i + j > trunc:
                break
            if y:
                out[i + j] += x * y
    return out


def delta_qexpansion(trunc: int) -> QExpansion:
    """The discriminant cusp form q Π (1-q^n)^24 as an exact eta-product."""
    if trunc < 1:
        raise InvalidInput("truncation must be >= 1")
    m = trunc - 1
    euler = [0] * (m + 1)
    k = 0
    while True:  # pentagonal-number expansion of Π(1-q^n)
        done = True
        for kk in (k, -k) if k else (0,):
            idx = kk * (3 * kk - 1) // 2
            if idx <= m:
                euler[idx] += 1 if kk % 2 == 0 else -1
                done = False
        if k and done:
            break
        k += 1
    p2 = _poly_mul_trunc(euler, euler, m)
    p4 = _poly_mul_trunc(p2, p2, m)
    p8 = _poly_mul_trunc(p4, p4, m)
    p16 = _poly_mul_trunc(p8, p8, m)
    p24 = _poly_mul_trunc(p16, p8, m)
    return QExpansion(12, 1, DirichletCharacter.trivial(), [0] + p24)


def eisenstein_qexpansion(k: int, trunc: int) -> QExpansion:
    """E_k = 1 - (2k/B_k) Σ σ_{k-1}(n) q^n for even k >= 4, exact rationals."""
    if k < 4 or k % 2:
        raise InvalidInput("Eisenstein weight must be even and >= 4")
    b = bernoulli(k)
    bk = Fraction(int(b.p), int(b.q))
    sigma = [0] * (trunc + 1)
    for d in range(1, trunc + 1):
        step = d ** (k - 1)
        for n in range(d, trunc + 1, d):
            sigma[n] += step
    factor = Fraction(-2 * k) / bk
    coeffs = [Fraction(1)] + [factor * sigma[n] for n in range(1, trunc + 1)]
    return QExpansion(k, 1, DirichletCharacter.trivial(), coeffs)
