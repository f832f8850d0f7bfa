"""Ideal class groups of imaginary quadratic orders via reduced binary
quadratic forms, weight functions with their zero-weight pairing, finite-order
characters, and p-adic avatars feeding the measure layer.

All algebraic values live in the explicit tower Q(sqrt(d))(zeta_m), stored as
polynomials with rational coefficients; arithmetic is exact throughout.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from sympy import Symbol, cyclotomic_poly, factorint, isprime

from .errors import InvalidInput
from .measure import dirac
from .padic import PadicScalar

# ---------------------------------------------------------------------------
# discriminants and orders
# ---------------------------------------------------------------------------


def is_discriminant(D: int) -> bool:
    return D < 0 and D % 4 in (0, 1)


def fundamental_decomposition(D: int):
    """Write a discriminant as D = c^2 * d_K with d_K fundamental."""
    if not is_discriminant(D):
        raise InvalidInput(f"{D} is not a negative discriminant")
    square = 1
    for q, e in factorint(-D).items():
        square *= q ** (e // 2)
    m = D // square ** 2  # squarefree part, negative
    if m % 4 == 1:
        return square, m
    if square % 2:
        raise InvalidInput(f"{D} is not a valid discriminant")
    return square // 2, 4 * m


class QuadOrder:
    """The order of conductor c in the imaginary quadratic field of
    fundamental discriminant d_K."""

    __slots__ = ("d_K", "c")

    def __init__(self, d_K: int, c: int = 1):
        if c < 1:
            raise InvalidInput("conductor must be >= 1")
        cc, dd = fundamental_decomposition(d_K)
        if cc != 1 or dd != d_K:
            raise InvalidInput(f"{d_K} is not a fundamental discriminant")
        self.d_K = d_K
        self.c = c

    @classmethod
    def from_discriminant(cls, D: int) -> "QuadOrder":
        c, d_K = fundamental_decomposition(D)
        return cls(d_K, c)

    @property
    def discriminant(self) -> int:
        return self.c ** 2 * self.d_K

    def __eq__(self, other):
        return isinstance(other, QuadOrder) and \
            (self.d_K, self.c) == (other.d_K, other.c)

    __hash__ = None

    def __repr__(self):
        return f"QuadOrder(d_K={self.d_K}, c={self.c})"


# ---------------------------------------------------------------------------
# reduced binary quadratic forms and Gauss composition
# ---------------------------------------------------------------------------

def _is_reduced(a: int, b: int, c: int) -> bool:
    if not (abs(b) <= a <= c):
        return False
    if (abs(b) == a or a == c) and b < 0:
        return False
    return True


def reduce_form(form, D: int):
    a, b, c = form
    while True:
        if c < a or (c == a and b < 0):
            a, b, c = c, -b, a
            continue
        if -a < b <= a:
            if a == c and b < 0:
                b = -b
            return (a, b, c)
        # normalize b into (-a, a]
        t = (a - b) // (2 * a)
        b = b + 2 * t * a
        c = (b * b - D) // (4 * a)


def principal_form(D: int):
    b = D % 2
    return (1, b, (b * b - D) // 4)


def _solve_congruence(a: int, b: int, m: int):
    """Solutions x = x0 + t*(m/g) of a x ≡ b (mod m); returns (x0, m/g)."""
    g = math.gcd(a, m)
    if b % g:
        raise InvalidInput("congruence has no solution")
    m2 = m // g
    if m2 == 1:
        return 0, 1
    x0 = (b // g) * pow(a // g, -1, m2) % m2
    return x0, m2


def compose_forms(f1, f2, D: int):
    """Dirichlet/Gauss composition of primitive forms of one discriminant,
    followed by reduction."""
    a1, b1, c1 = f1
    a2, b2, c2 = f2
    g = (b1 + b2) // 2
    h = (b2 - b1) // 2
    w = math.gcd(math.gcd(a1, a2), g)
    s, t, u = a1 // w, a2 // w, g // w
    mu, nu = _solve_congruence(t * u, h * u + s * c1, s * t)
    lam, _ = _solve_congruence(t * nu, h - t * mu, s)
    k = mu + nu * lam
    ll = (k * t - h) // s
    mres = (t * u * k - h * u - c1 * s) // (s * t)
    A = s * t
    B = w * u - (k * t + ll * s)
    C = k * ll - w * mres
    return reduce_form((A, B, C), D)


class IdealClassGroup:
    """The form class group of a negative discriminant: reduced primitive
    forms under composition, with the full multiplication table."""

    __slots__ = ("discriminant", "order_data", "forms", "table",
                 "identity_index", "inverse", "_index")

    def __init__(self, D: int):
        if not is_discriminant(D):
            raise InvalidInput(f"{D} is not a negative discriminant")
        self.discriminant = D
        self.order_data = QuadOrder.from_discriminant(D)
        self.forms = _enumerate_reduced_forms(D)
        self._index = {f: i for i, f in enumerate(self.forms)}
        h = len(self.forms)
        ident = self._index[principal_form(D)]
        table = [[0] * h for _ in range(h)]
        for i in range(h):
            for j in range(i, h):
                prod = compose_forms(self.forms[i], self.forms[j], D)
                if prod not in self._index:
                    raise AssertionError("composition left the reduced set")
                table[i][j] = table[j][i] = self._index[prod]
        self.table = table
        self.identity_index = ident
        inverse = [None] * h
        for i in range(h):
            a, b, c = self.forms[i]
            inverse[i] = self._index[reduce_form((a, -b, c), D)]
        self.inverse = inverse
        _verify_group_axioms(self)

    @property
    def h(self) -> int:
        return len(self.forms)

    def mul(self, i: int, j: int) -> int:
        return self.table[i][j]

    def pow(self, i: int, n: int) -> int:
        if n < 0:
            return self.pow(self.inverse[i], -n)
        acc = self.identity_index
        base, e = i, n
        while e:
            if e & 1:
                acc = self.mul(acc, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return acc

    def element_order(self, i: int) -> int:
        n, acc = 1, i
        while acc != self.identity_index:
            acc = self.mul(acc, i)
            n += 1
        return n

    @property
    def exponent(self) -> int:
        m = 1
        for i in range(self.h):
            m = math.lcm(m, self.element_order(i))
        return m

    def __repr__(self):
        return f"IdealClassGroup(D={self.discriminant}, h={self.h})"


def _enumerate_reduced_forms(D: int):
    forms = []
    a_max = math.isqrt(-D // 3)
    for a in range(1, a_max + 1):
        for b in range(-a, a + 1):
            if (b - D) % 2:
                continue
            num = b * b - D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if not _is_reduced(a, b, c):
                continue
            if math.gcd(math.gcd(a, abs(b)), c) != 1:
                continue
            forms.append((a, b, c))
    forms.sort()
    return forms


def _verify_group_axioms(G: IdealClassGroup):
    h, e = G.h, G.identity_index
    for i in range(h):
        if G.mul(e, i) != i or G.mul(i, G.inverse[i]) != e:
            raise AssertionError("identity/inverse axiom failed")
    for i in range(h):
        for j in range(h):
            for k in range(h):
                if G.mul(G.mul(i, j), k) != G.mul(i, G.mul(j, k)):
                    raise AssertionError("associativity failed")


def class_group(D: int) -> IdealClassGroup:
    """Enumerate reduced primitive forms of discriminant D and build the
    composition table (group axioms are verified)."""
    return IdealClassGroup(D)


# ---------------------------------------------------------------------------
# the value tower Q(sqrt d)(zeta_m)
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _cyclo_context(m: int):
    """Monic integer coefficients of Phi_m and reduction rows for z^k."""
    x = Symbol("x")
    poly = cyclotomic_poly(m, x).as_poly(x)
    coeffs = [int(c) for c in reversed(poly.all_coeffs())]  # ascending
    deg = len(coeffs) - 1
    # rows[i] expresses z^(deg+i) in the basis 1, z, ..., z^(deg-1)
    base = [Fraction(-c) for c in coeffs[:deg]]
    rows = [base]
    for _ in range(deg - 1):
        prev = rows[-1]
        shifted = [Fraction(0)] + prev[:-1]
        top = prev[-1]
        nxt = [shifted[i] + top * base[i] for i in range(deg)]
        rows.append(nxt)
    return deg, tuple(coeffs), tuple(tuple(r) for r in rows)


class AlgebraicValue:
    """An element of Q(sqrt(d))(zeta_m): sum_j (a_j + b_j sqrt(d)) z^j with
    z a primitive m-th root of unity, reduced mod the m-th cyclotomic
    polynomial."""

    __slots__ = ("d", "m", "coeffs")

    def __init__(self, d: int, m: int, coeffs):
        if d == 0 or math.isqrt(abs(d)) ** 2 == d:
            raise InvalidInput("d must be a non-square")
        deg = _cyclo_context(m)[0]
        coeffs = [(Fraction(a), Fraction(b)) for a, b in coeffs]
        if len(coeffs) > deg:
            raise InvalidInput("coefficient vector too long")
        coeffs += [(Fraction(0), Fraction(0))] * (deg - len(coeffs))
        self.d = d
        self.m = m
        self.coeffs = tuple(coeffs)

    # -- constructors --

    @classmethod
    def from_rational(cls, q, d: int, m: int = 1) -> "AlgebraicValue":
        return cls(d, m, [(Fraction(q), Fraction(0))])

    @classmethod
    def sqrt_d(cls, d: int, m: int = 1) -> "AlgebraicValue":
        return cls(d, m, [(Fraction(0), Fraction(1))])

    @classmethod
    def quadratic(cls, a, b, d: int, m: int = 1) -> "AlgebraicValue":
        """a + b sqrt(d)."""
        return cls(d, m, [(Fraction(a), Fraction(b))])

    @classmethod
    def root_of_unity(cls, exponent: int, d: int, m: int) -> "AlgebraicValue":
        if _cyclo_context(m)[0] > 1:
            base = cls(d, m, [(0, 0), (1, 0)])
        else:
            base = cls.from_rational(1 if m == 1 else -1, d, m)
        return base ** (exponent % m)

    # -- structure --

    def promote(self, m_new: int) -> "AlgebraicValue":
        if m_new == self.m:
            return self
        if m_new % self.m:
            raise InvalidInput("can only promote along divisibility")
        t = m_new // self.m
        out = AlgebraicValue.from_rational(0, self.d, m_new)
        zpow = AlgebraicValue.root_of_unity(t, self.d, m_new)
        acc = AlgebraicValue.from_rational(1, self.d, m_new)
        for j, (a, b) in enumerate(self.coeffs):
            if a or b:
                out = out + acc * AlgebraicValue.quadratic(a, b, self.d, m_new)
            if j + 1 < len(self.coeffs):
                acc = acc * zpow
        return out

    def _align(self, other: "AlgebraicValue"):
        if not isinstance(other, AlgebraicValue):
            other = AlgebraicValue.from_rational(other, self.d, 1)
        if self.d != other.d:
            raise InvalidInput("mixed quadratic fields")
        m = math.lcm(self.m, other.m)
        return self.promote(m), other.promote(m)

    # -- ring operations --

    def __add__(self, other):
        a, b = self._align(other)
        return AlgebraicValue(a.d, a.m, [(x1 + x2, y1 + y2) for (x1, y1), (x2, y2)
                                         in zip(a.coeffs, b.coeffs)])

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self):
        return AlgebraicValue(self.d, self.m, [(-a, -b) for a, b in self.coeffs])

    def __sub__(self, other):
        a, b = self._align(other)
        return a + (-b)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        a, b = self._align(other)
        deg, _, rows = _cyclo_context(a.m)
        conv = [(Fraction(0), Fraction(0))] * (2 * deg - 1)
        d = a.d
        for i, (ax, ay) in enumerate(a.coeffs):
            if not (ax or ay):
                continue
            for j, (bx, by) in enumerate(b.coeffs):
                if not (bx or by):
                    continue
                cx, cy = conv[i + j]
                conv[i + j] = (cx + ax * bx + ay * by * d,
                               cy + ax * by + ay * bx)
        out = list(conv[:deg])
        for k in range(deg, 2 * deg - 1):
            cx, cy = conv[k]
            if cx or cy:
                row = rows[k - deg]
                for i in range(deg):
                    ox, oy = out[i]
                    out[i] = (ox + cx * row[i], oy + cy * row[i])
        return AlgebraicValue(a.d, a.m, out)

    def __rmul__(self, other):
        return self.__mul__(other)

    def scale(self, q) -> "AlgebraicValue":
        q = Fraction(q)
        return AlgebraicValue(self.d, self.m,
                              [(a * q, b * q) for a, b in self.coeffs])

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = AlgebraicValue.from_rational(1, self.d, self.m)
        base, e = self, n
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def conjugate(self) -> "AlgebraicValue":
        """The Q(zeta_m)-linear involution sqrt(d) -> -sqrt(d)."""
        return AlgebraicValue(self.d, self.m, [(a, -b) for a, b in self.coeffs])

    def inverse(self) -> "AlgebraicValue":
        """Invert by solving the 2*deg-dimensional linear system over Q."""
        deg = _cyclo_context(self.m)[0]
        dim = 2 * deg
        basis = []
        for j in range(deg):
            for part in (0, 1):
                coeffs = [(Fraction(0), Fraction(0))] * deg
                coeffs[j] = (Fraction(1), Fraction(0)) if part == 0 else \
                    (Fraction(0), Fraction(1))
                basis.append(AlgebraicValue(self.d, self.m, coeffs))
        cols = [self * e for e in basis]
        mat = [[_flatten(c)[r] for c in cols] for r in range(dim)]
        rhs = [Fraction(1)] + [Fraction(0)] * (dim - 1)
        sol = _solve_linear(mat, rhs)
        if sol is None:
            raise InvalidInput("value is a zero divisor in the stated tower")
        out = [(sol[2 * j], sol[2 * j + 1]) for j in range(deg)]
        return AlgebraicValue(self.d, self.m, out)

    # -- queries --

    def is_zero(self) -> bool:
        return all(a == 0 and b == 0 for a, b in self.coeffs)

    def as_rational(self):
        """The Fraction value if the element is rational, else None."""
        (a0, b0), rest = self.coeffs[0], self.coeffs[1:]
        if b0 == 0 and all(a == 0 and b == 0 for a, b in rest):
            return a0
        return None

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = AlgebraicValue.from_rational(other, self.d, 1)
        if not isinstance(other, AlgebraicValue) or self.d != other.d:
            return NotImplemented
        a, b = self._align(other)
        return a.coeffs == b.coeffs

    __hash__ = None

    def __repr__(self):
        terms = []
        for j, (a, b) in enumerate(self.coeffs):
            if a or b:
                zpart = "" if j == 0 else f"*z^{j}"
                terms.append(f"({a}+{b}*sqrt({self.d})){zpart}")
        return " + ".join(terms) if terms else "0"


def _flatten(v: AlgebraicValue):
    out = []
    for a, b in v.coeffs:
        out.extend((a, b))
    return out


def _solve_linear(mat, rhs):
    """Gaussian elimination over Q; returns None when singular."""
    n = len(rhs)
    aug = [row[:] + [rhs[i]] for i, row in enumerate(mat)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            return None
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [aug[r][n] for r in range(n)]


# ---------------------------------------------------------------------------
# weight functions, characters, pairings
# ---------------------------------------------------------------------------

class WeightFunction:
    """A function on ideal classes transforming with weight (w1, ws) on
    principal ideals; finite-order characters are the weight-(0,0) case."""

    __slots__ = ("group", "weight", "values")

    def __init__(self, group: IdealClassGroup, weight, values):
        w1, ws = weight
        values = tuple(values)
        if len(values) != group.h:
            raise InvalidInput("need one value per ideal class")
        self.group = group
        self.weight = (int(w1), int(ws))
        self.values = values

    def __mul__(self, other: "WeightFunction") -> "WeightFunction":
        if other.group.discriminant != self.group.discriminant:
            raise InvalidInput("group mismatch")
        w = (self.weight[0] + other.weight[0], self.weight[1] + other.weight[1])
        return WeightFunction(self.group, w,
                              [a * b for a, b in zip(self.values, other.values)])

    def __pow__(self, n: int) -> "WeightFunction":
        w = (n * self.weight[0], n * self.weight[1])
        return WeightFunction(self.group, w, [v ** n for v in self.values])

    def inverse(self) -> "WeightFunction":
        return self ** (-1)

    def is_trivial(self) -> bool:
        return self.weight == (0, 0) and all(v == 1 for v in self.values)

    def __eq__(self, other):
        return isinstance(other, WeightFunction) \
            and self.group.discriminant == other.group.discriminant \
            and self.weight == other.weight and \
            all(a == b for a, b in zip(self.values, other.values))

    __hash__ = None

    def __repr__(self):
        return f"WeightFunction(D={self.group.discriminant}, w={self.weight})"


def characters(G: IdealClassGroup):
    """All h homomorphisms G -> mu_m (m the exponent), built by extending
    along a subgroup chain; values are exact roots of unity."""
    m = G.exponent
    d = G.order_data.d_K
    chars = [{G.identity_index: 0}]
    subgroup = [G.identity_index]
    member = {G.identity_index}
    while len(subgroup) < G.h:
        g = next(i for i in range(G.h) if i not in member)
        k, acc = 1, g
        while acc not in member:
            acc = G.mul(acc, g)
            k += 1
        new_chars = []
        for chi in chars:
            # chi(g^k) has exponent c with k | c; extensions chi(g) = x solve
            # k x ≡ c (mod m), i.e. x = c/k + t m/k  (k divides m here)
            c = chi[acc]
            if c % k or m % k:
                raise AssertionError("character extension arithmetic broke")
            step = m // k
            for t in range(k):
                x = (c // k + t * step) % m
                ext = {}
                power = G.identity_index
                val = 0
                for j in range(k):
                    for hh in subgroup:
                        ext[G.mul(hh, power)] = (chi[hh] + val) % m
                    power = G.mul(power, g)
                    val = (val + x) % m
                new_chars.append(ext)
        chars = new_chars
        new_sub = []
        power = G.identity_index
        for _ in range(k):
            for hh in subgroup:
                new_sub.append(G.mul(hh, power))
            power = G.mul(power, g)
        subgroup = new_sub
        member = set(subgroup)
    tables = sorted(tuple(chi[i] for i in range(G.h)) for chi in chars)
    return [WeightFunction(G, (0, 0),
                           [AlgebraicValue.root_of_unity(e, d, m) for e in tab])
            for tab in tables]


def pairing(phi1: WeightFunction, phi2: WeightFunction) -> AlgebraicValue:
    """(1/h) Σ_s φ1(I_s) φ2(I_s) when the weights cancel, else exact 0."""
    if phi1.group.discriminant != phi2.group.discriminant:
        raise InvalidInput("group mismatch")
    d = phi1.group.order_data.d_K
    w = (phi1.weight[0] + phi2.weight[0], phi1.weight[1] + phi2.weight[1])
    if w != (0, 0):
        return AlgebraicValue.from_rational(0, d, 1)
    total = AlgebraicValue.from_rational(0, d, 1)
    for a, b in zip(phi1.values, phi2.values):
        total = total + a * b
    return total.scale(Fraction(1, phi1.group.h))


def twisted_pairing(phi1: WeightFunction, phi2: WeightFunction,
                    psi: WeightFunction) -> AlgebraicValue:
    """The psi-twist <φ1, ψ·φ2>."""
    if psi.weight != (0, 0):
        raise InvalidInput("twists must have weight (0,0)")
    return pairing(phi1, psi * phi2)


def canonical_weight_character(order: QuadOrder, w) -> WeightFunction:
    """For class number one and unit group {±1}: the weight function with
    φ((λ)) = λ^{w1} conj(λ)^{ws}, normalized to 1 on the trivial class."""
    w1, ws = w
    if (w1 + ws) % 2:
        raise InvalidInput("total weight must be even (λ -> -λ ambiguity)")
    if order.d_K in (-3, -4):
        raise InvalidInput("extra units: the rule is not well-defined")
    G = class_group(order.discriminant)
    if G.h != 1:
        raise InvalidInput("canonical construction needs class number one")
    one = AlgebraicValue.from_rational(1, order.d_K, 1)
    return WeightFunction(G, (w1, ws), [one])


def weight_value_on_principal(lam: AlgebraicValue, w) -> AlgebraicValue:
    """λ^{w1} conj(λ)^{ws} — the transformation factor on a principal ideal
    with chosen generator λ."""
    w1, ws = w
    return lam ** w1 * lam.conjugate() ** ws


# ---------------------------------------------------------------------------
# p-adic avatars
# ---------------------------------------------------------------------------

class PadicEmbedding:
    """A ring map from the value tower into Z_p given by a chosen square root
    of d mod p and a primitive m-th root of unity mod p (Hensel-lifted)."""

    __slots__ = ("prime", "precision", "d", "m", "sqrt_lift", "zeta_lift")

    def __init__(self, prime: int, precision: int, d: int, m: int = 1,
                 sqrt_residue: int | None = None, zeta_residue: int | None = None):
        if not isprime(prime) or prime == 2:
            raise InvalidInput("need an odd prime")
        if precision < 1:
            raise InvalidInput("precision must be >= 1")
        self.prime = prime
        self.precision = precision
        self.d = d
        self.m = m
        if m > 1 and (prime - 1) % m:
            raise InvalidInput(f"p = {prime} is not 1 mod {m}: mu_{m} not in Z_p")
        self.zeta_lift = None if m == 1 else self._lift_root(
            lambda x: x ** m - 1, lambda x: m * x ** (m - 1),
            self._pick_zeta(zeta_residue))
        if d % prime == 0:
            self.sqrt_lift = "ramified"
        elif pow(d % prime, (prime - 1) // 2, prime) != 1:
            self.sqrt_lift = "inert"
        else:
            self.sqrt_lift = self._lift_root(
                lambda x: x * x - d, lambda x: 2 * x,
                self._pick_sqrt(sqrt_residue))

    def _pick_sqrt(self, residue):
        p, d = self.prime, self.d
        roots = [r for r in range(1, p) if (r * r - d) % p == 0]
        if residue is not None:
            if residue % p not in roots:
                raise InvalidInput("chosen residue is not a square root of d mod p")
            return residue % p
        return min(roots)

    def _pick_zeta(self, residue):
        p, m = self.prime, self.m
        q_factors = [q for q in factorint(m)]
        def primitive(t):
            return pow(t, m, p) == 1 and all(pow(t, m // q, p) != 1 for q in q_factors)
        if residue is not None:
            if not primitive(residue % p):
                raise InvalidInput("chosen residue is not a primitive m-th root mod p")
            return residue % p
        return next(t for t in range(1, p) if primitive(t))

    def _lift_root(self, f, df, x0: int) -> int:
        p, target = self.prime, self.precision
        x, k = x0, 1
        while k < target:
            k = min(2 * k, target)
            mod = p ** k
            x = (x - f(x) * pow(df(x), -1, mod)) % mod
        return x % p ** target

    def embed(self, value: AlgebraicValue) -> PadicScalar:
        if value.m != self.m:
            if self.m % value.m:
                raise InvalidInput("value needs a larger cyclotomic layer than the embedding")
            value = value.promote(self.m)
        p, prec = self.prime, self.precision
        has_sqrt = any(b for _, b in value.coeffs)
        if has_sqrt:
            if value.d != self.d:
                raise InvalidInput("quadratic field mismatch")
            if self.sqrt_lift in ("ramified", "inert"):
                raise InvalidInput(f"p is {self.sqrt_lift} in Q(sqrt({self.d}))")
        total = PadicScalar.zero(p, prec)
        zpow = PadicScalar.from_int(1, p, prec)
        zeta = None if self.zeta_lift is None else \
            PadicScalar.from_int(self.zeta_lift, p, prec)
        sq = None
        if has_sqrt:
            sq = PadicScalar.from_int(self.sqrt_lift, p, prec)
        for j, (a, b) in enumerate(value.coeffs):
            if a or b:
                term = PadicScalar.from_rational(a, p, prec)
                if b:
                    term = term + sq.scale(b)
                total = total + term * zpow
            if j + 1 < len(value.coeffs):
                zpow = zpow * zeta
        return total


def padic_avatar(phi: WeightFunction, embedding: PadicEmbedding):
    """Embed every class value of a weight function; the result is the avatar
    restricted to the chosen class representatives."""
    return [embedding.embed(v) for v in phi.values]


def admissible_embedding(G: IdealClassGroup, prime: int, precision: int,
                         **kwargs) -> PadicEmbedding:
    """An embedding whose cyclotomic layer covers all characters of G."""
    return PadicEmbedding(prime, precision, G.order_data.d_K, G.exponent, **kwargs)


def smallest_admissible_prime(G: IdealClassGroup, split: bool = False) -> int:
    """The least odd prime p ≡ 1 mod exponent(G), prime to h and D (and split
    in the field when avatars of weight characters are needed)."""
    m = G.exponent
    D = G.discriminant
    p = 3
    while True:
        if isprime(p) and (p - 1) % m == 0 and G.h % p and D % p:
            if not split or pow(G.order_data.d_K % p, (p - 1) // 2, p) == 1:
                return p
        p += 2


def avatar_measure_family(chi0: WeightFunction, chi: WeightFunction,
                          embedding: PadicEmbedding, order: int):
    """Per ideal class s, the measure chi0^(p)(s) · dirac(chi^(p)(s)): its
    r-th moment is the avatar of chi0·chi^r at s, and the family is supported
    on Z_p^× (unit avatar values are required)."""
    if chi0.group.discriminant != chi.group.discriminant:
        raise InvalidInput("group mismatch")
    p = embedding.prime
    family = []
    for s in range(chi0.group.h):
        z = embedding.embed(chi.values[s])
        if z.is_zero or z.valuation != 0:
            raise InvalidInput("avatar value is not a unit")
        c0 = embedding.embed(chi0.values[s])
        family.append(dirac(z, p, order).scale(c0))
    return family
