"""Exact polynomial-coefficient sketching and monomial decoding.

Everything here is integer/rational arithmetic, so assertions are exact.
Coefficient fixtures were hand-expanded and are cross-checked against an
independent symbolic expansion.
"""

import itertools
import json
from fractions import Fraction

import pytest
import sympy

from sketchnet.detsketch import DetSketch, decode_monomial, decode_poly, det_sketch
from sketchnet.sparse import SparseVector


def sympy_coeffs(support_0based, k, width):
    """Independent oracle: expand 1 - (k+1) * prod (z - (i+1))^2 symbolically."""
    z = sympy.Symbol("z")
    expr = sympy.Integer(1) - (k + 1) * sympy.prod([(z - (i + 1)) ** 2 for i in support_0based])
    poly = sympy.Poly(expr, z)
    coeffs = [0] * width
    for power, c in zip(range(poly.degree(), -1, -1), poly.all_coeffs()):
        coeffs[power] = int(c)
    return tuple(coeffs)


class TestSketchCoefficients:
    def test_two_root_expansion(self):
        x = SparseVector.binary(5, [0, 2])  # polynomial roots at labels 1 and 3
        sk = det_sketch(x, 2)
        assert sk.coeffs == (-26, 72, -66, 24, -3)
        assert sk.coeffs == sympy_coeffs([0, 2], 2, 5)
        assert sk.poly_at(1) == 1 and sk.poly_at(3) == 1 and sk.poly_at(2) == -2

    def test_single_root_expansion(self):
        sk = det_sketch(SparseVector.binary(3, [0]), 1)
        assert sk.coeffs == (-1, 4, -2)
        assert sk.coeffs == sympy_coeffs([0], 1, 3)

    def test_empty_support_is_constant(self):
        sk = det_sketch(SparseVector.binary(5, []), 2)
        assert sk.coeffs == (-2, 0, 0, 0, 0)
        # every monomial then decodes to zero
        assert decode_monomial(sk, [0]) == 0
        assert decode_monomial(sk, [1, 4]) == 0

    def test_random_supports_match_symbolic_expansion(self):
        import numpy as np
        rng = np.random.default_rng(3)
        for _ in range(25):
            k = int(rng.integers(1, 5))
            d = int(rng.integers(k, 40))
            nnz = int(rng.integers(0, k + 1))
            sup = sorted(rng.choice(d, size=nnz, replace=False).tolist())
            sk = det_sketch(SparseVector.binary(d, sup), k)
            assert sk.coeffs == sympy_coeffs(sup, k, 2 * k + 1)

    def test_width_is_2k_plus_1_regardless_of_d(self):
        for d in (5, 100, 10_000):
            sk = det_sketch(SparseVector.binary(d, [d - 1]), 3)
            assert len(sk.coeffs) == 7

    def test_oversized_support_rejected(self):
        with pytest.raises(ValueError):
            det_sketch(SparseVector.binary(6, [0, 1, 2]), 2)

    def test_non_binary_rejected(self):
        with pytest.raises(ValueError):
            det_sketch(SparseVector.from_pairs(6, [(0, 2.0)]), 3)


class TestDecodePoly:
    @pytest.fixture
    def sk(self):
        return det_sketch(SparseVector.binary(5, [0, 2]), 2)

    def test_on_support(self, sk):
        assert decode_poly(sk, [0]) == 1
        assert decode_poly(sk, [0, 2]) == 1

    def test_mixed_average(self, sk):
        assert decode_poly(sk, [0, 1]) == Fraction(-1, 2)

    def test_exact_rational_type(self, sk):
        v = decode_poly(sk, [1, 3])
        assert isinstance(v, Fraction)

    def test_empty_set_rejected(self, sk):
        with pytest.raises(ValueError):
            decode_poly(sk, [])

    def test_out_of_range_rejected(self, sk):
        with pytest.raises(ValueError):
            decode_poly(sk, [5])


class TestDecodeMonomial:
    @pytest.fixture
    def sk(self):
        return det_sketch(SparseVector.binary(5, [0, 2]), 2)

    def test_present_product(self, sk):
        assert decode_monomial(sk, [0, 2]) == 1

    def test_absent_coordinate_kills_product(self, sk):
        assert decode_monomial(sk, [0, 1]) == 0
        assert decode_monomial(sk, [1]) == 0

    def test_exhaustive_small_range(self):
        """Every monomial of every sparse vector decodes exactly (d=8, k<=2)."""
        d, k = 8, 2
        coords = range(d)
        supports = [()] + [c for r in range(1, k + 1)
                           for c in itertools.combinations(coords, r)]
        sets = [A for r in (1, 2) for A in itertools.combinations(coords, r)]
        for sup in supports:
            x = SparseVector.binary(d, sup)
            sk = det_sketch(x, k)
            # polynomial value contract: 1 on support, <= -k off support
            for j in range(d):
                if j in sup:
                    assert sk.poly_at(j + 1) == 1
                else:
                    assert sk.poly_at(j + 1) <= -k
            for A in sets:
                want = int(all(a in sup for a in A))
                assert decode_monomial(sk, A) == want


class TestSerialization:
    def test_json_roundtrip_preserves_big_ints(self):
        x = SparseVector.binary(10_000, [9_999, 5_000, 123])
        sk = det_sketch(x, 3)
        assert max(abs(c) for c in sk.coeffs) > 2 ** 53  # float64 would lose these
        clone = DetSketch.from_json(sk.to_json())
        assert clone == sk

    def test_json_uses_decimal_strings(self):
        sk = det_sketch(SparseVector.binary(5, [0]), 1)
        payload = json.loads(sk.to_json())
        assert payload["coeffs"] == ["-1", "4", "-2"]

    def test_float_export_shape(self):
        sk = det_sketch(SparseVector.binary(5, [0, 2]), 2)
        arr = sk.coeffs_float()
        assert arr.tolist() == [-26.0, 72.0, -66.0, 24.0, -3.0]
