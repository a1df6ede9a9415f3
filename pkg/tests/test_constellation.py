import math
from fractions import Fraction

import numpy as np
import pytest

from rscm import (
    MappingRule,
    make_constellation,
    map_word,
    pair_distance_spectrum,
    sample_random_mapping,
)


def test_point_sets_and_energies():
    b3 = make_constellation("bpsk@3")
    assert b3.q == 8 and b3.ell == 3
    assert set(map(tuple, b3.points)) == set(
        tuple(p) for p in np.array(np.meshgrid(*[[-1, 1]] * 3)).T.reshape(-1, 3)
    )
    assert b3.avg_energy == 3.0

    q16 = make_constellation("qam16")
    assert q16.q == 16 and q16.ell == 2
    assert set(map(tuple, q16.points)) == {
        (a, b) for a in (-3, -1, 1, 3) for b in (-3, -1, 1, 3)
    }
    assert q16.avg_energy == 10.0
    assert make_constellation("qam64").avg_energy == 42.0

    p8 = make_constellation("psk8@1")
    assert p8.q == 8 and p8.ell == 2
    assert np.allclose((p8.points**2).sum(axis=1), 1.0)
    assert make_constellation("psk8@2").q == 64


def test_unknown_id_lists_valid_ones():
    with pytest.raises(ValueError, match="valid ids"):
        make_constellation("apsk32")


def test_map_word_examples():
    bpsk = make_constellation("bpsk@1")
    mapping = MappingRule.identity(2, 2)
    assert np.array_equal(map_word([0, 1], bpsk, mapping), [-1.0, 1.0])

    q16 = make_constellation("qam16")
    m16 = MappingRule.identity(16, 1)
    assert np.array_equal(map_word([0], q16, m16), q16.points[0])

    with pytest.raises(ValueError):
        map_word([0, 1, 0], bpsk, mapping)  # length mismatch
    with pytest.raises(ValueError):
        map_word([0, 1], q16, mapping)  # size mismatch


def test_random_mapping_contract():
    rule = sample_random_mapping(8, 7, 123)
    again = sample_random_mapping(8, 7, 123)
    assert np.array_equal(rule.tables, again.tables)
    assert rule.tables.shape == (7, 8)
    for row in rule.tables:
        assert sorted(row) == list(range(8))
    empty = sample_random_mapping(8, 0, 1)
    assert empty.tables.shape[0] == 0
    assert not np.array_equal(
        sample_random_mapping(8, 7, 124).tables, rule.tables
    )


def test_random_mapping_uniformity_q2():
    # for q=2 each position is the identity with probability 1/2
    rule = sample_random_mapping(2, 10_000, 2024)
    identity_rows = int((rule.tables[:, 0] == 0).sum())
    sigma = math.sqrt(10_000 * 0.25)
    assert abs(identity_rows - 5_000) <= 3 * sigma


def test_mapping_rule_validation():
    with pytest.raises(ValueError):
        MappingRule(np.array([[0, 0, 1, 2]]))
    inv = MappingRule(np.array([[2, 0, 1]])).inverse_tables
    assert list(inv[0]) == [1, 2, 0]


class TestPairSpectrum:
    def test_bpsk_single_distance(self):
        d = pair_distance_spectrum(make_constellation("bpsk@1"))
        assert d.items() == [(4, Fraction(1))]

    def test_bpsk2_enumeration(self):
        d = pair_distance_spectrum(make_constellation("bpsk@2"))
        assert dict(d.items()) == {4: Fraction(2, 3), 8: Fraction(1, 3)}

    def test_bpsk_binomial_closed_form(self):
        for m in range(1, 7):
            d = pair_distance_spectrum(make_constellation(f"bpsk@{m}"))
            want = {4 * j: Fraction(math.comb(m, j), 2**m - 1) for j in range(1, m + 1)}
            assert dict(d.items()) == want

    def test_total_is_one_for_every_kind(self):
        for cid in ("bpsk@2", "bpsk@4", "psk8@1", "psk8@2", "qam16", "qam64"):
            assert pair_distance_spectrum(make_constellation(cid)).total() == 1

    def test_qam16_distances_and_float_path_agreement(self):
        cons = make_constellation("qam16")
        exact = pair_distance_spectrum(cons, exact=True)
        keys = [k for k, _ in exact.items()]
        assert keys == [4, 8, 16, 20, 32, 36, 40, 52, 72]
        assert all(k % 2 == 0 for k in keys)
        binned = pair_distance_spectrum(cons, exact=False)
        assert len(binned) == len(exact)
        for (fk, fc), (k, c) in zip(binned.items(), exact.items()):
            assert abs(fk - k) < 1e-9 and fc == c

    def test_psk8_atoms(self):
        d = pair_distance_spectrum(make_constellation("psk8@1"))
        keys = [k for k, _ in d.items()]
        want = [2 - math.sqrt(2), 2.0, 2 + math.sqrt(2), 4.0]
        assert len(keys) == 4
        assert all(abs(a - b) < 1e-12 for a, b in zip(keys, want))
        assert dict((round(k, 6), c) for k, c in d.items()) == {
            round(w, 6): Fraction(cnt, 56)
            for w, cnt in zip(want, (16, 16, 16, 8))
        }
