import itertools

import pytest
from hypothesis import given, strategies as st

from cubecore.errors import CapacityError, DimensionMismatch
from cubecore.gf2 import (
    LinearMap,
    Subgroup,
    Word,
    coset_canonical,
    enumerate_subgroup,
    linear_extend,
    max_subgroup_within,
    span,
    span_bits,
)


def w(s: str) -> Word:
    return Word.from_string(s)


class TestWord:
    def test_string_roundtrip(self):
        assert w("1101").bits == 0b1011
        assert w("1101").to_string() == "1101"
        assert str(w("0001")) == "0001"

    def test_weight_and_add(self):
        assert w("1101").weight == 3
        assert (w("1100") + w("0110")).to_string() == "1010"

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            w("11") + w("111")

    def test_basis(self):
        assert Word.basis(4, 0).to_string() == "1000"
        assert Word.basis(4, 3).to_string() == "0001"

    @given(st.integers(1, 16), st.data())
    def test_weight_parity_of_sum(self, n, data):
        x = data.draw(st.integers(0, (1 << n) - 1))
        y = data.draw(st.integers(0, (1 << n) - 1))
        a, b = Word(n, x), Word(n, y)
        assert (a + b).weight % 2 == (a.weight + b.weight) % 2


class TestSpan:
    def test_empty_span(self):
        assert span([], n=3).rank == 0
        assert span([], n=3).size == 1

    def test_dependent_triple_spans_plane(self):
        s = span([w("10"), w("01"), w("11")])
        assert s.rank == 2
        assert s.size == 4

    def test_halved_cube_connection_spans(self):
        conn = [w("100"), w("010"), w("001"), w("110"), w("101"), w("011")]
        assert span(conn).rank == 3

    def test_mixed_dimensions_rejected(self):
        with pytest.raises(DimensionMismatch):
            span([w("10"), w("100")])

    def test_rref_shape(self):
        s = span([w("111"), w("110")])
        # pivots strictly increasing, rows nonzero
        pivots = [(b & -b).bit_length() - 1 for b in s.basis]
        assert pivots == sorted(set(pivots))
        assert all(s.basis)


def all_subgroups(n):
    """Every subgroup of Z2^n, by spanning every subset of words (dedup)."""
    seen = {}
    words = list(range(1, 1 << n))
    for r in range(len(words) + 1):
        if r > n + 2:
            break
        for sub in itertools.combinations(words, r):
            s = span_bits(sub, n)
            seen[s.basis] = s
    return list(seen.values())


class TestCosets:
    def test_subgroup_elements_canonicalize_to_zero(self):
        h = span([w("111"), w("100")])
        for x in enumerate_subgroup(h):
            assert coset_canonical(x, h).bits == 0

    def test_paper_pair(self):
        h = span([w("111")])
        assert coset_canonical(w("110"), h) == coset_canonical(w("001"), h)

    def test_trivial_subgroup_is_identity(self):
        h = span([], n=4)
        for bits in range(16):
            assert coset_canonical(Word(4, bits), h).bits == bits

    def test_equality_iff_difference_in_subgroup_all_z2_4(self):
        # exhaustive over all subgroups of Z2^4 and all pairs of words
        for h in all_subgroups(4):
            for x in range(16):
                for y in range(16):
                    same = coset_canonical(Word(4, x), h) == coset_canonical(Word(4, y), h)
                    assert same == h.contains_bits(x ^ y)


class TestEnumerate:
    def test_trivial(self):
        assert [x.bits for x in enumerate_subgroup(span([], n=3))] == [0]

    def test_rank_two(self):
        assert len(list(enumerate_subgroup(span([w("10"), w("01")])))) == 4

    def test_weights_bounded(self):
        h = span([Word(7, 1), Word(7, 2), Word(7, 4)])
        elems = list(enumerate_subgroup(h))
        assert len(elems) == 8
        assert len({x.bits for x in elems}) == 8
        assert all(x.weight <= 3 for x in elems)

    def test_cap(self):
        basis = tuple(1 << i for i in range(26))
        with pytest.raises(CapacityError):
            list(enumerate_subgroup(Subgroup(30, basis)))


class TestLinearMap:
    def test_identity(self):
        m = linear_extend([w("100"), w("010"), w("001")])
        for bits in range(8):
            assert m.apply_bits(bits) == bits

    def test_zero_map(self):
        m = linear_extend([w("000"), w("000"), w("000")])
        assert all(m.apply_bits(b) == 0 for b in range(8))

    def test_additivity_forced(self):
        images = [w("1100"), w("0110"), w("0011")]
        m = linear_extend(images)
        assert m.apply_bits(0b101) == images[0].bits ^ images[2].bits

    @given(st.integers(1, 6), st.integers(1, 6), st.data())
    def test_matches_naive_bit_loop(self, d, n, data):
        images = [data.draw(st.integers(0, (1 << n) - 1)) for _ in range(d)]
        m = LinearMap(d, n, tuple(images))
        x = data.draw(st.integers(0, (1 << d) - 1))
        naive = 0
        for i in range(d):
            if (x >> i) & 1:
                naive ^= images[i]
        assert m.apply_bits(x) == naive

    @given(st.integers(1, 6), st.data())
    def test_additive(self, d, data):
        n = data.draw(st.integers(1, 6))
        images = tuple(data.draw(st.integers(0, (1 << n) - 1)) for _ in range(d))
        m = LinearMap(d, n, images)
        x = data.draw(st.integers(0, (1 << d) - 1))
        y = data.draw(st.integers(0, (1 << d) - 1))
        assert m.apply_bits(x ^ y) == m.apply_bits(x) ^ m.apply_bits(y)

    def test_kernel(self):
        m = linear_extend([w("10"), w("10"), w("01")])
        k = m.kernel()
        assert k.rank == 1
        assert k.contains_bits(0b011)


class TestMaxSubgroupWithin:
    def test_whole_space(self):
        words = [Word(3, b) for b in range(1, 8)]
        assert max_subgroup_within(words).rank == 3

    def test_brute_force_agreement(self):
        # allowed = words of weight <= 2 in Z2^4; brute force over all subgroups
        allowed = {b for b in range(1, 16) if bin(b).count("1") <= 2}
        best = 0
        for h in all_subgroups(4):
            if all(x in allowed for x in range(16) if h.contains_bits(x) and x):
                best = max(best, h.rank)
        got = max_subgroup_within([Word(4, b) for b in allowed])
        assert got.rank == best
