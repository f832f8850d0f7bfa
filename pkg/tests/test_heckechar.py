import random
from fractions import Fraction

import pytest

from mahler.errors import InvalidInput
from mahler.heckechar import (AlgebraicValue, PadicEmbedding, QuadOrder,
                              WeightFunction,
                              admissible_embedding, fundamental_decomposition,
                              avatar_measure_family,
                              canonical_weight_character, characters,
                              class_group, compose_forms, padic_avatar,
                              pairing, reduce_form, smallest_admissible_prime,
                              twisted_pairing, weight_value_on_principal)
from mahler.measure import moments, pairing_measure, restrict_to_units

ALL_DISCS_200 = [D for D in range(-3, -201, -1) if D % 4 in (0, 1)]


class TestClassGroups:
    def test_h_minus_23(self):
        G = class_group(-23)
        assert G.h == 3
        assert set(G.forms) == {(1, 1, 6), (2, 1, 3), (2, -1, 3)}

    def test_h_minus_4(self):
        assert class_group(-4).h == 1

    def test_h_minus_47_cyclic(self):
        G = class_group(-47)
        assert G.h == 5
        orders = {G.element_order(i) for i in range(G.h)}
        assert orders == {1, 5}

    def test_invalid_discriminant(self):
        with pytest.raises(InvalidInput):
            class_group(-5)
        with pytest.raises(InvalidInput):
            class_group(7)

    def test_axioms_all_small_discriminants(self):
        # constructor re-verifies closure/identity/inverse/associativity;
        # build every group with |D| <= 500
        for D in range(-3, -501, -1):
            if D % 4 in (0, 1):
                G = class_group(D)
                assert G.h >= 1
                assert G.forms[G.identity_index] == (1, D % 2, ((D % 2) - D) // 4)

    def test_commutative(self):
        for D in (-23, -47, -84, -120):
            G = class_group(D)
            for i in range(G.h):
                for j in range(G.h):
                    assert G.mul(i, j) == G.mul(j, i)

    def test_composition_preserves_discriminant(self):
        rng = random.Random(23)
        for D in (-23, -56, -71, -95):
            G = class_group(D)
            for _ in range(10):
                i, j = rng.randrange(G.h), rng.randrange(G.h)
                a, b, c = compose_forms(G.forms[i], G.forms[j], D)
                assert b * b - 4 * a * c == D

    def test_reduction_is_stable(self):
        assert reduce_form((12, 23, 34), 23 * 23 - 4 * 12 * 34) is not None
        assert reduce_form((1, 1, 6), -23) == (1, 1, 6)

    def test_class_number_against_dirichlet_formula(self):
        # analytic oracle: h = w/(2|D|) * |sum_{k<|D|} chi_D(k) k| for
        # fundamental D, with chi_D the Kronecker symbol
        for D in ALL_DISCS_200:
            if fundamental_decomposition(D)[0] != 1:
                continue
            w = 6 if D == -3 else 4 if D == -4 else 2
            total = sum(_kronecker(D, k) * k for k in range(1, -D))
            h_analytic = Fraction(w * abs(total), 2 * (-D))
            assert h_analytic.denominator == 1
            assert class_group(D).h == h_analytic

    def test_ambiguous_classes_match_genus_theory(self):
        # elements of order <= 2 number 2^(t-1), t = #prime divisors of D
        from sympy import factorint
        for D in (-23, -47, -84, -120, -143, -195):
            G = class_group(D)
            two_torsion = sum(1 for i in range(G.h)
                              if G.mul(i, i) == G.identity_index)
            t = len(factorint(-D))
            assert two_torsion == 2 ** (t - 1)


def _kronecker(a, n):
    if n == 0:
        return 1 if a in (1, -1) else 0
    sign = 1
    if n < 0:
        n = -n
        if a < 0:
            sign = -sign
    result = sign
    while n % 2 == 0:
        n //= 2
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            result = -result
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


class TestCharacters:
    def test_count_and_trivial(self):
        for D in (-23, -47, -84):
            G = class_group(D)
            chars = characters(G)
            assert len(chars) == G.h
            assert sum(1 for c in chars if c.is_trivial()) == 1

    def test_closed_under_product(self):
        G = class_group(-84)  # h = 4, (2,2) group
        chars = characters(G)
        tables = {tuple(repr(v) for v in c.values) for c in chars}
        for c1 in chars:
            for c2 in chars:
                assert tuple(repr(v) for v in (c1 * c2).values) in tables

    def test_conjugate_pair_for_cyclic_3(self):
        G = class_group(-23)
        chars = characters(G)
        nontrivial = [c for c in chars if not c.is_trivial()]
        assert len(nontrivial) == 2
        assert nontrivial[0].values[1] == nontrivial[1].values[2]

    def test_homomorphism_property(self):
        rng = random.Random(29)
        for D in (-23, -47, -71, -84, -120):
            G = class_group(D)
            for chi in characters(G):
                for _ in range(8):
                    i, j = rng.randrange(G.h), rng.randrange(G.h)
                    assert chi.values[G.mul(i, j)] == chi.values[i] * chi.values[j]

    def test_orthogonality_up_to_200(self):
        for D in ALL_DISCS_200:
            G = class_group(D)
            chars = characters(G)
            for i, c1 in enumerate(chars):
                for j, c2 in enumerate(chars):
                    value = pairing(c1, c2)
                    if (c1 * c2).is_trivial():
                        assert value == 1
                    else:
                        assert value.is_zero()


class TestPairing:
    def test_weight_mismatch_is_zero(self):
        order = QuadOrder(-7)
        w = canonical_weight_character(order, (2, 0))
        triv = canonical_weight_character(order, (0, 0))
        assert pairing(w, triv).is_zero()

    def test_twisted_reduces_to_plain(self):
        G = class_group(-23)
        chars = characters(G)
        triv = next(c for c in chars if c.is_trivial())
        for c1 in chars:
            for c2 in chars:
                assert twisted_pairing(c1, c2, triv) == pairing(c1, c2)

    def test_twisted_orthogonality(self):
        for D in (-23, -47, -56):
            chars = characters(class_group(D))
            for c1 in chars:
                for c2 in chars:
                    for psi in chars:
                        value = twisted_pairing(c1, c2, psi)
                        if (c1 * c2 * psi).is_trivial():
                            assert value == 1
                        else:
                            assert value.is_zero()

    def test_column_orthogonality_sum(self):
        G = class_group(-23)
        chars = characters(G)
        triv = next(c for c in chars if c.is_trivial())
        total = Fraction(0)
        for psi in chars:
            val = twisted_pairing(triv, triv, psi).as_rational()
            total += val
        assert total == 1  # only psi = 1 survives


class TestCanonicalWeightCharacter:
    def test_square_of_norm_two_generator(self):
        lam = AlgebraicValue.quadratic(Fraction(1, 2), Fraction(1, 2), -7)
        value = weight_value_on_principal(lam, (2, 0))
        assert value == AlgebraicValue.quadratic(Fraction(-3, 2), Fraction(1, 2), -7)

    def test_trivial_weight(self):
        lam = AlgebraicValue.quadratic(3, 1, -7)
        assert weight_value_on_principal(lam, (0, 0)) == 1

    def test_norm_character(self):
        lam = AlgebraicValue.quadratic(Fraction(1, 2), Fraction(1, 2), -7)
        assert weight_value_on_principal(lam, (1, 1)) == 2  # N((1+sqrt(-7))/2)

    def test_multiplicativity(self):
        a = AlgebraicValue.quadratic(2, 1, -7)
        b = AlgebraicValue.quadratic(Fraction(1, 2), Fraction(3, 2), -7)
        w = (4, 2)
        assert weight_value_on_principal(a * b, w) == \
            weight_value_on_principal(a, w) * weight_value_on_principal(b, w)

    def test_unit_invariance_even_weight(self):
        lam = AlgebraicValue.quadratic(1, 2, -7)
        assert weight_value_on_principal(-lam, (2, 0)) == \
            weight_value_on_principal(lam, (2, 0))

    def test_odd_weight_rejected(self):
        with pytest.raises(InvalidInput):
            canonical_weight_character(QuadOrder(-7), (1, 0))

    def test_extra_units_rejected(self):
        with pytest.raises(InvalidInput):
            canonical_weight_character(QuadOrder(-4), (2, 0))

    def test_class_number_one_required(self):
        with pytest.raises(InvalidInput):
            canonical_weight_character(QuadOrder(-23), (2, 0))


class TestAlgebraicValue:
    def test_tower_arithmetic(self):
        z = AlgebraicValue.root_of_unity(1, -7, 3)
        assert (z ** 3) == 1
        assert not (z ** 2).is_zero()
        assert z * z ** 2 == 1

    def test_inverse(self):
        v = AlgebraicValue.quadratic(2, 3, -7) * AlgebraicValue.root_of_unity(1, -7, 5)
        assert v * v.inverse() == 1

    def test_promotion_consistency(self):
        z3 = AlgebraicValue.root_of_unity(1, -7, 3)
        z6 = AlgebraicValue.root_of_unity(2, -7, 6)
        assert z3 == z6

    def test_conjugation(self):
        v = AlgebraicValue.quadratic(2, 3, -7)
        assert v + v.conjugate() == 4
        assert v * v.conjugate() == 4 - 9 * (-7)


class TestAvatars:
    def test_hand_embedding(self):
        emb = PadicEmbedding(11, 6, -7, 1, sqrt_residue=2)
        lam = AlgebraicValue.quadratic(Fraction(1, 2), Fraction(1, 2), -7)
        x = emb.embed(weight_value_on_principal(lam, (2, 0)))
        assert x.residue(1) == 5

    def test_trivial_character_all_ones(self):
        G = class_group(-23)
        emb = admissible_embedding(G, smallest_admissible_prime(G), 8)
        triv = next(c for c in characters(G) if c.is_trivial())
        assert all(x == 1 for x in padic_avatar(triv, emb))

    def test_multiplicative(self):
        G = class_group(-47)
        p = smallest_admissible_prime(G)
        emb = admissible_embedding(G, p, 8)
        chars = characters(G)
        for c1 in chars[:3]:
            for c2 in chars[:3]:
                a1 = padic_avatar(c1, emb)
                a2 = padic_avatar(c2, emb)
                a12 = padic_avatar(c1 * c2, emb)
                assert all(x == y * z for x, y, z in zip(a12, a1, a2))

    def test_injective_on_characters(self):
        for D in (-23, -47, -84):
            G = class_group(D)
            p = smallest_admissible_prime(G)
            emb = admissible_embedding(G, p, 6)
            seen = []
            for chi in characters(G):
                key = tuple(x.residue(1) for x in padic_avatar(chi, emb))
                assert key not in seen
                seen.append(key)

    def test_split_requirement(self):
        # 11 is inert in Q(sqrt(-23)): avatar of a sqrt-carrying value fails
        emb = PadicEmbedding(11, 4, -23, 1) if pow(-23 % 11, 5, 11) == 1 else None
        if emb is None:
            with pytest.raises(InvalidInput):
                PadicEmbedding(11, 4, -23, 1).embed(AlgebraicValue.sqrt_d(-23))

    def test_p_not_one_mod_m(self):
        with pytest.raises(InvalidInput):
            PadicEmbedding(7, 4, -7, 5)


class TestAvatarMeasureFamily:
    def _setup(self, D=-23, prec=10, order=16):
        G = class_group(D)
        p = smallest_admissible_prime(G)
        emb = admissible_embedding(G, p, prec)
        return G, p, emb

    def test_trivial_chi_gives_dirac_one(self):
        G, p, emb = self._setup()
        chars = characters(G)
        triv = next(c for c in chars if c.is_trivial())
        fam = avatar_measure_family(triv, triv, emb, order=8)
        for mu in fam:
            for r in range(5):
                assert moments(mu, r) == 1

    def test_moments_are_avatar_values(self):
        G, p, emb = self._setup()
        chars = characters(G)
        chi0, chi = chars[1], chars[2]
        fam = avatar_measure_family(chi0, chi, emb, order=12)
        a0 = padic_avatar(chi0, emb)
        a = padic_avatar(chi, emb)
        for s, mu in enumerate(fam):
            for r in range(11):
                assert moments(mu, r) == a0[s] * a[s] ** r

    def test_supported_on_units(self):
        G, p, emb = self._setup(order=20)
        chars = characters(G)
        fam = avatar_measure_family(chars[1], chars[2], emb, order=20)
        prec_target = 2
        for mu in fam:
            res = restrict_to_units(mu, precision=prec_target)
            for n in range(res.order):
                assert res.mahler[n] == mu.mahler[n]

    def test_pairing_compatibility(self):
        # the p-adic pairing of the measure families equals the avatar of the
        # exact algebraic pairing, including scalar multiples
        G, p, emb = self._setup()
        chars = characters(G)
        chi0, chi = chars[1], chars[2]
        chi0i, chii = chi0.inverse(), chi.inverse()
        lam1, lam2 = Fraction(3), Fraction(5, 2)
        fam1 = [mu.scale(lam1) for mu in avatar_measure_family(chi0, chi, emb, 14)]
        fam2 = [mu.scale(lam2) for mu in avatar_measure_family(chi0i, chii, emb, 14)]
        mu = pairing_measure(list(zip(fam1, fam2)), 10)
        for r in range(11):
            alg = pairing(chi0 * chi ** r, chi0i * chii ** r)
            expected = emb.embed(alg).scale(lam1 * lam2)
            assert moments(mu, r) == expected


class TestAvatarFamilyErrors:
    def test_non_unit_avatar_rejected(self):
        G = class_group(-23)
        p = smallest_admissible_prime(G)
        emb = admissible_embedding(G, p, 6)
        chars = characters(G)
        triv = next(c for c in chars if c.is_trivial())
        d = G.order_data.d_K
        bad = WeightFunction(G, (0, 0),
                             [AlgebraicValue.from_rational(p, d)] * G.h)
        with pytest.raises(InvalidInput):
            avatar_measure_family(triv, bad, emb, order=6)

    def test_group_mismatch_rejected(self):
        G1, G2 = class_group(-23), class_group(-47)
        c1 = characters(G1)[0]
        c2 = characters(G2)[0]
        p = smallest_admissible_prime(G1)
        emb = admissible_embedding(G1, p, 6)
        with pytest.raises(InvalidInput):
            avatar_measure_family(c1, c2, emb, order=6)


class TestAdmissiblePrimes:
    def test_avatar_pairing_equals_algebraic_up_to_100(self):
        for D in [d for d in range(-3, -101, -1) if d % 4 in (0, 1)]:
            G = class_group(D)
            p = smallest_admissible_prime(G)
            emb = admissible_embedding(G, p, 6)
            chars = characters(G)
            avatars = [padic_avatar(c, emb) for c in chars]
            for i, c1 in enumerate(chars):
                for j, c2 in enumerate(chars):
                    lhs = avatars[i][0].scale(0)  # zero at full precision
                    total = None
                    for s in range(G.h):
                        term = avatars[i][s] * avatars[j][s]
                        total = term if total is None else total + term
                    padic_pair = total.scale(Fraction(1, G.h))
                    alg = pairing(c1, c2)
                    assert padic_pair == emb.embed(alg)
