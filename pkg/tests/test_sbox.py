import random
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_perm_sbox
from oracles import poly_mulmod
from sboxevo.properties import boomerang_uniformity
from sboxevo.sbox import (
    DEFAULT_POLYS,
    AffineMap,
    FieldSpec,
    NotAPermutationError,
    SBox,
    SBoxError,
    apply_affine,
    default_field,
    format_sbox,
    gf2_rank,
    gf_mul,
    identity_affine,
    identity_sbox,
    inverse_map,
    invert,
    is_irreducible,
    is_permutation,
    missing_outputs,
    new_sbox,
    parse_sbox,
    power_map,
    random_affine_permutation,
    read_sbox,
    write_sbox,
)

ZERO4 = SBox(4, (0,) * 16)
ID4 = identity_sbox(4)


class TestNewSBox:
    def test_identity(self):
        f = new_sbox(4, range(16))
        assert f.table == tuple(range(16))
        assert f.n == 4

    def test_wrong_length(self):
        with pytest.raises(SBoxError, match="length"):
            new_sbox(4, range(15))

    def test_entry_out_of_range(self):
        with pytest.raises(SBoxError, match="outside"):
            new_sbox(4, list(range(15)) + [16])

    @pytest.mark.parametrize("n", [2, 11])
    def test_bit_width_bounds(self, n):
        with pytest.raises(SBoxError, match="bit-width"):
            new_sbox(n, range(1 << n))


def test_is_permutation():
    assert is_permutation(ID4)
    assert not is_permutation(ZERO4)
    assert is_permutation(SBox(4, (1, 0, 3, 2, 5, 4, 7, 6, 9, 8, 11, 10, 13, 12, 15, 14)))


def test_missing_outputs():
    assert missing_outputs(ZERO4) == 15
    assert missing_outputs(ID4) == 0
    assert missing_outputs(SBox(4, (0, 0) + tuple(range(2, 16)))) == 1


@settings(max_examples=60)
@given(st.integers(3, 5).flatmap(lambda n: st.tuples(
    st.just(n), st.lists(st.integers(0, (1 << n) - 1), min_size=1 << n, max_size=1 << n))))
def test_missing_outputs_zero_iff_permutation(case):
    n, table = case
    f = SBox(n, tuple(table))
    assert (missing_outputs(f) == 0) == is_permutation(f)


class TestInvert:
    def test_identity(self):
        assert invert(ID4) == ID4

    def test_rotation_cycle(self):
        # 3-bit analogue of the 2-bit rotation example
        f = SBox(3, (1, 2, 3, 4, 5, 6, 7, 0))
        assert invert(f).table == (7, 0, 1, 2, 3, 4, 5, 6)

    def test_inverse_map_is_involution(self):
        f = inverse_map(4)
        assert invert(f) == f
        assert all(f[f[x]] == x for x in range(16))

    def test_rejects_non_permutation(self):
        with pytest.raises(NotAPermutationError):
            invert(ZERO4)

    @pytest.mark.parametrize("n", range(3, 9))
    def test_double_inversion(self, n):
        rng = random.Random(n)
        for _ in range(10):
            f = random_perm_sbox(n, rng)
            g = invert(f)
            assert invert(g) == f
            assert all(g[f[x]] == x for x in range(f.size))


class TestField:
    def test_default_polys_irreducible(self):
        for n, poly in DEFAULT_POLYS.items():
            assert FieldSpec(n, poly).poly == poly

    def test_reducible_rejected(self):
        with pytest.raises(SBoxError, match="reducible"):
            FieldSpec(4, 0b10101)  # (x^2 + x + 1)^2
        assert not is_irreducible(0b10101)

    def test_degree_mismatch(self):
        with pytest.raises(SBoxError, match="degree"):
            FieldSpec(5, 0x13)

    def test_gf_mul_examples(self):
        fs = FieldSpec(4, 0x13)
        assert all(gf_mul(fs, 0, b) == 0 for b in range(16))
        assert gf_mul(fs, 1, 7) == 7
        assert gf_mul(fs, 2, 9) == 1

    @pytest.mark.parametrize("n", [4, 5, 6])
    def test_gf_mul_matches_schoolbook(self, n):
        fs = default_field(n)
        for a in range(1 << n):
            for b in range(1 << n):
                assert gf_mul(fs, a, b) == poly_mulmod(a, b, fs.poly, n)

    @settings(max_examples=200)
    @given(st.sampled_from([4, 5, 6]), st.data())
    def test_field_axioms(self, n, data):
        fs = default_field(n)
        a, b, c = (data.draw(st.integers(0, (1 << n) - 1)) for _ in range(3))
        assert gf_mul(fs, a, b) == gf_mul(fs, b, a)
        assert gf_mul(fs, gf_mul(fs, a, b), c) == gf_mul(fs, a, gf_mul(fs, b, c))
        assert gf_mul(fs, a, b ^ c) == gf_mul(fs, a, b) ^ gf_mul(fs, a, c)


class TestPowerMap:
    def test_identity_exponent(self):
        assert power_map(default_field(4), 1) == ID4

    def test_gold_5_is_permutation(self):
        assert is_permutation(power_map(default_field(5), 3))

    def test_inverse_4_beta(self):
        assert boomerang_uniformity(power_map(default_field(4), 14)) == 6

    def test_zero_exponent_is_constant_one(self):
        assert power_map(default_field(4), 0).table == (1,) * 16

    @pytest.mark.parametrize("n", range(3, 7))
    def test_permutation_iff_coprime(self, n):
        fs = default_field(n)
        for d in range(1, 1 << n):
            assert is_permutation(power_map(fs, d)) == (gcd(d, (1 << n) - 1) == 1), d

    def test_rejects_non_field(self):
        with pytest.raises(SBoxError):
            power_map(4, 3)


class TestAffine:
    def test_deterministic(self):
        a = random_affine_permutation(4, random.Random(5))
        b = random_affine_permutation(4, random.Random(5))
        assert a == b

    def test_rank_full(self, rng):
        for n in range(3, 9):
            for _ in range(20):
                assert gf2_rank(random_affine_permutation(n, rng).rows) == n

    def test_bijective_exhaustive_n3(self, rng):
        for _ in range(50):
            a = random_affine_permutation(3, rng)
            assert sorted(a(x) for x in range(8)) == list(range(8))

    def test_singular_rejected(self):
        with pytest.raises(SBoxError, match="singular"):
            AffineMap(3, (0b001, 0b010, 0b011))

    def test_identity_maps(self, rng):
        f = random_perm_sbox(5, rng)
        i5 = identity_affine(5)
        assert apply_affine(i5, f, i5) == f

    def test_composition_on_identity(self, rng):
        a = random_affine_permutation(4, rng)
        b = random_affine_permutation(4, rng)
        g = apply_affine(a, ID4, b)
        assert g.table == tuple(a(b(x)) for x in range(16))

    def test_dimension_mismatch(self):
        with pytest.raises(SBoxError, match="dimension"):
            apply_affine(identity_affine(3), ID4, identity_affine(4))

    def test_preserves_permutation(self, rng):
        for n in (3, 4, 5, 6):
            f = random_perm_sbox(n, rng)
            a = random_affine_permutation(n, rng)
            b = random_affine_permutation(n, rng)
            assert is_permutation(apply_affine(a, f, b))

    def test_beta_invariance_on_inverse(self, rng):
        f = inverse_map(4)
        for _ in range(10):
            a = random_affine_permutation(4, rng)
            b = random_affine_permutation(4, rng)
            assert boomerang_uniformity(apply_affine(a, f, b)) == 6


class TestTextFormat:
    def test_round_trip(self, tmp_path, rng):
        f = random_perm_sbox(6, rng)
        path = tmp_path / "s.txt"
        write_sbox(f, path)
        assert read_sbox(path) == f

    def test_layout(self):
        text = format_sbox(inverse_map(4))
        assert text.splitlines()[0] == "n=4"
        assert len(text.splitlines()[1].split()) == 16

    def test_malformed(self):
        with pytest.raises(SBoxError):
            parse_sbox("4\n0 1 2")
        with pytest.raises(SBoxError):
            parse_sbox("n=3\n0 1 2 3 4 5 6 zz")
