"""
Tests for multiplicative sequences and genus evaluation

Tests cover:
- Symmetric-function machinery (partitions, elementary-to-monomial counts)
- Classical low-degree L, A-hat and Todd polynomials
- Stability in the number of formal roots
- Manifold data loading, pairing and genus values of CP2, K3, CP2#CP2 and T4
- The signature index and the flat Todd check
"""

import random
from fractions import Fraction
from itertools import combinations, product
from math import prod

import pytest

from thermogenus.errors import (
    GenusError,
    IncompleteSequence,
    InsufficientRoots,
    InvalidManifoldData,
    MissingCharacteristicNumber,
)
from thermogenus.genera import GenusKind, get_genus
from thermogenus.genus import (
    ClassPolynomial,
    ManifoldClassData,
    canonical_monomial,
    convolve_sequences,
    elementary_in_monomials,
    evaluate_genus,
    flat_todd_check,
    generating_series,
    genus_coefficient,
    genus_value,
    monomial_key,
    multiplicative_sequence,
    pair_with_fundamental_class,
    partitions,
    pontryagin_from_chern,
    sequence_from_class_series,
    signature_index,
    verify_LA_identity,
    weighted_degree,
)


class TestSymmetricFunctions:
    """Partitions and the e -> m change of basis"""

    def test_partitions_of_four(self):
        assert list(partitions(4)) == [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]
        assert list(partitions(0)) == [()]

    def test_elementary_in_monomials(self):
        # e1^2 = m2 + 2 m11
        assert elementary_in_monomials((1, 1), (2,)) == 1
        assert elementary_in_monomials((1, 1), (1, 1)) == 2
        # e2 = m11
        assert elementary_in_monomials((2,), (1, 1)) == 1
        assert elementary_in_monomials((2,), (2,)) == 0
        assert elementary_in_monomials((2,), (1,)) == 0


class TestMonomials:
    """Monomial strings and weighted degrees"""

    def test_monomial_key(self):
        assert monomial_key("p", (2, 1, 1)) == "p1^2*p2"
        assert monomial_key("c", ()) == "1"

    def test_canonical_monomial_merges_powers(self):
        assert canonical_monomial("p2 * p1 * p1") == "p1^2*p2"
        assert canonical_monomial("c1^2") == canonical_monomial("c1*c1")

    def test_weighted_degree(self):
        assert weighted_degree("p1") == 1
        assert weighted_degree("c1^2") == 1
        assert weighted_degree("c2") == 1
        assert weighted_degree("p1^2*p2") == 4

    def test_bad_monomial(self):
        with pytest.raises(ValueError):
            weighted_degree("q1")
        with pytest.raises(ValueError):
            canonical_monomial("p")


class TestClassPolynomial:
    """ClassPolynomial value semantics"""

    def test_zero_terms_dropped(self):
        poly = ClassPolynomial(2, "p", {(2,): 0, (1, 1): Fraction(1, 3)})
        assert poly.terms == {(1, 1): Fraction(1, 3)}

    def test_wrong_degree_rejected(self):
        with pytest.raises(ValueError):
            ClassPolynomial(2, "p", {(1,): 1})

    def test_evaluate_and_missing_value(self):
        poly = ClassPolynomial(2, "p", {(2,): 7, (1, 1): -1})
        assert poly.evaluate({1: 3, 2: 2}) == 5
        with pytest.raises(MissingCharacteristicNumber):
            poly.evaluate({1: 3})

    def test_json(self):
        poly = ClassPolynomial(2, "p", {(2,): Fraction(7, 45), (1, 1): Fraction(-1, 45)})
        data = poly.to_json()
        assert data["terms"] == {"p2": "7/45", "p1^2": "-1/45"}
        assert ClassPolynomial.from_json(data) == poly

    def test_top_weight(self):
        assert ClassPolynomial(2, "c", {}).top_weight == 1
        assert ClassPolynomial(2, "p", {}).top_weight == 2


class TestMultiplicativeSequence:
    """Classical polynomials and stability"""

    def test_l_polynomials(self):
        polys = multiplicative_sequence(GenusKind.L, 2)
        assert polys[0].terms == {(): 1}
        assert polys[1].terms == {(1,): Fraction(1, 3)}
        assert polys[2].terms == {(2,): Fraction(7, 45), (1, 1): Fraction(-1, 45)}

    def test_l3(self):
        l3 = multiplicative_sequence(GenusKind.L, 3)[3]
        assert l3.coefficient((3,)) == Fraction(62, 945)
        assert l3.coefficient((2, 1)) == Fraction(-13, 945)
        assert l3.coefficient((1, 1, 1)) == Fraction(2, 945)

    def test_ahat_polynomials(self):
        polys = multiplicative_sequence("AHAT", 2)
        assert polys[1].terms == {(1,): Fraction(-1, 24)}
        assert polys[2].terms == {(1, 1): Fraction(7, 5760), (2,): Fraction(-4, 5760)}

    def test_todd_polynomials(self):
        polys = multiplicative_sequence("TODD", 3)
        assert polys[1].symbol == "c"
        assert polys[1].terms == {(1,): Fraction(1, 2)}
        assert polys[2].terms == {(1, 1): Fraction(1, 12), (2,): Fraction(1, 12)}
        assert polys[3].terms == {(2, 1): Fraction(1, 24)}

    @pytest.mark.parametrize("kind", [GenusKind.L, GenusKind.A_HAT, GenusKind.TODD])
    def test_stable_in_number_of_roots(self, kind):
        for degree in range(1, 6):
            narrow = multiplicative_sequence(kind, degree, num_roots=degree)
            wide = multiplicative_sequence(kind, degree, num_roots=degree + 3)
            assert narrow == wide

    def test_too_few_roots(self):
        with pytest.raises(InsufficientRoots):
            multiplicative_sequence(GenusKind.L, 3, num_roots=2)

    @pytest.mark.parametrize("kind", [GenusKind.L, GenusKind.A_HAT, GenusKind.TODD])
    def test_agrees_with_direct_product_over_roots(self, kind):
        rng = random.Random(11)
        q = get_genus(kind).class_series(4).coeffs
        polys = multiplicative_sequence(kind, 4)
        for k in (2, 4, 6):
            t = [Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(k)]
            elementary = {m: sum((prod(c) for c in combinations(t, m)), Fraction(0)) for m in range(1, 5)}
            for degree in range(5):
                direct = sum(
                    (prod(q[a] * ti ** a for a, ti in zip(exponents, t))
                     for exponents in product(range(degree + 1), repeat=k) if sum(exponents) == degree),
                    Fraction(0),
                )
                assert polys[degree].evaluate(elementary) == direct

    def test_product_series_gives_convolved_sequence(self):
        ahat, cosh = get_genus(GenusKind.A_HAT), get_genus(GenusKind.COSH_HALF)
        joint = sequence_from_class_series(ahat.class_series(3) * cosh.class_series(3), 3, 5, "p")
        convolved = convolve_sequences(
            multiplicative_sequence(GenusKind.A_HAT, 3), multiplicative_sequence(GenusKind.COSH_HALF, 3)
        )
        assert joint == convolved

    def test_convolution_with_unit_sequence(self):
        polys = multiplicative_sequence(GenusKind.L, 3)
        unit = [ClassPolynomial(0, "p", {(): 1})] + [ClassPolynomial(j, "p", {}) for j in range(1, 4)]
        assert convolve_sequences(polys, unit) == polys


class TestSeriesIdentities:
    """Generating series helpers"""

    def test_l_equals_ahat_times_cosh(self):
        assert verify_LA_identity(30).is_zero()

    def test_genus_coefficient(self):
        assert genus_coefficient("L", 2) == Fraction(1, 12)
        assert genus_coefficient("TODD", 1) == Fraction(1, 2)

    def test_generating_series_order(self):
        assert generating_series("AHAT", 6).order == 6
        with pytest.raises(ValueError):
            generating_series("AHAT", -2)


class TestManifolds:
    """Manifold data and genus values"""

    @pytest.mark.parametrize(
        "filename,label",
        [("cp2.json", "CP2"), ("k3.json", "K3"), ("cp2_sum_cp2.json", "CP2#CP2"), ("flat_torus.json", "T4")],
    )
    def test_packaged_genus_values(self, manifold_dir, oracle_values, filename, label):
        data = ManifoldClassData.load(manifold_dir / filename)
        for kind, expected in oracle_values["genera"][label].items():
            if kind == "signature_index":
                assert signature_index(data) == Fraction(expected)
            else:
                assert genus_value(kind, data) == Fraction(expected), f"{label} {kind}"

    def test_p1_derived_from_chern_numbers(self, cp2):
        assert "p1" not in cp2.characteristic_numbers
        assert pontryagin_from_chern(cp2.characteristic_numbers) == {"p1": 3}

    def test_pontryagin_from_chern_missing(self):
        with pytest.raises(MissingCharacteristicNumber):
            pontryagin_from_chern({"c2": 3})

    def test_k3_signature_index(self, k3):
        assert signature_index(k3) == -32
        assert signature_index(k3, two_power=0) == -16

    def test_twisted_signature_index(self, cp2):
        twisted = ManifoldClassData("CP2(xi)", 1, {"c1^2": 9, "c2": 3}, {0: 1, 1: Fraction(1, 2)})
        assert signature_index(twisted) == 2 * (1 + Fraction(1, 2))

    def test_mixed_pairing_needs_numbers(self):
        data = ManifoldClassData("X", 2, {"p1^2": 2, "p2": 1}, {0: 1, 1: 1})
        with pytest.raises(MissingCharacteristicNumber):
            signature_index(data)
        data = ManifoldClassData("X", 2, {"p1^2": 2, "p2": 1, "ch1*p1": 3}, {0: 1, 1: 1})
        # L_2 = (7 - 2)/45 = 1/9; ch1 * L_1 = 3/3 = 1
        assert signature_index(data) == 4 * (Fraction(1, 9) + 1)

    def test_pairing_off_degree_is_zero(self, k3):
        assert pair_with_fundamental_class(ClassPolynomial(2, "p", {(2,): 1}), k3) == 0

    def test_evaluate_genus_needs_top_degree(self, k3):
        polys = multiplicative_sequence(GenusKind.L, 0)
        with pytest.raises(IncompleteSequence) as excinfo:
            evaluate_genus(polys, k3)
        assert isinstance(excinfo.value, GenusError)
        with pytest.raises(IncompleteSequence):
            signature_index(k3, polys=polys)

    def test_missing_number(self):
        data = ManifoldClassData("bare", 1, {})
        with pytest.raises(MissingCharacteristicNumber):
            genus_value(GenusKind.L, data)

    def test_overweight_monomial_rejected(self):
        with pytest.raises(InvalidManifoldData):
            ManifoldClassData("X", 1, {"p2": 1})

    @pytest.mark.parametrize(
        "content",
        [
            "{ not json",
            '{"name": "X", "characteristic_numbers": {}}',
            '{"l": 1, "characteristic_numbers": {"q1": 1}}',
            "[]",
        ],
    )
    def test_load_rejects_malformed_files(self, tmp_path, content):
        path = tmp_path / "broken.json"
        path.write_text(content)
        with pytest.raises(InvalidManifoldData):
            ManifoldClassData.load(path)

    def test_json_round_trip(self, cp2):
        again = ManifoldClassData.from_json(cp2.to_json())
        assert again == cp2
        assert cp2.to_json()["chern_character_numbers"] == {"0": "1"}


class TestFlatTodd:
    """Todd class of flat factors"""

    def test_flat_factor_and_product(self):
        result = flat_todd_check(3)
        assert result["flat_factor"] == [1, 0, 0, 0]
        assert result["product"] == [1, 0, 0, 0]
