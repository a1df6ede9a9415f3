import random
from fractions import Fraction

import numpy as np
import pytest

from rscm import (
    DistanceSpectrum,
    Field,
    MappingRule,
    RsCode,
    codebook_distance_spectrum,
    ensemble_distance_spectrum,
    hamming_spectrum,
    make_constellation,
    pair_distance_spectrum,
    sample_random_mapping,
)


class TestHammingSpectrum:
    def test_rs73_matches_exhaustive_enumeration(self, rs73):
        cb = rs73.codebook()
        weights = (cb[1:] != 0).sum(axis=1)
        counts = {int(w): int((weights == w).sum()) for w in np.unique(weights)}
        spec = hamming_spectrum(7, 3, 8)
        assert spec.counts == counts == {5: 147, 6: 147, 7: 217}
        assert 1 + spec.total() == 512

    def test_rs15_11_closed_form(self):
        spec = hamming_spectrum(15, 11, 16)
        assert spec.counts[5] == 45045  # C(15,5) * 15, single-term inner sum
        assert 1 + spec.total() == 16**11
        assert min(spec.counts) == spec.d_min == 5

    def test_invalid_parameters(self):
        with pytest.raises(ValueError):
            hamming_spectrum(9, 3, 8)  # n > q
        with pytest.raises(ValueError):
            hamming_spectrum(7, 8, 8)  # k > n


class TestEnsembleSpectrum:
    def test_monomial_pair_spectrum_shifts_weights(self):
        # single-distance enumerator: the composition is just W_d at 4d
        weights = hamming_spectrum(2, 1, 2)  # binary repetition: W_2 = 1
        d = pair_distance_spectrum(make_constellation("bpsk@1"))
        b = ensemble_distance_spectrum(weights, d)
        assert dict(b.items()) == {8: Fraction(1)}

        w73 = hamming_spectrum(7, 3, 8)
        b73 = ensemble_distance_spectrum(w73, pair_distance_spectrum(make_constellation("bpsk@3")))
        assert b73.total() == 8**3 - 1
        assert min(k for k, _ in b73.items()) == 5 * 4  # d_min x min pair distance

    def test_total_matches_codebook_size(self, psk8):
        b = ensemble_distance_spectrum(hamming_spectrum(7, 3, 8), pair_distance_spectrum(psk8))
        assert b.total() == 511
        b2 = ensemble_distance_spectrum(
            hamming_spectrum(15, 11, 16), pair_distance_spectrum(make_constellation("qam16"))
        )
        assert b2.total() == 16**11 - 1

    def test_requires_normalized_pair_spectrum(self):
        bad = DistanceSpectrum({4: Fraction(1, 2)})
        with pytest.raises(ValueError):
            ensemble_distance_spectrum(hamming_spectrum(7, 3, 8), bad)

    def test_exact_arithmetic_is_order_independent(self):
        w = hamming_spectrum(7, 3, 8)
        d = pair_distance_spectrum(make_constellation("bpsk@3"))
        b = ensemble_distance_spectrum(w, d)
        # rebuild the same composition accumulating terms in shuffled order
        rng = random.Random(7)
        powers = {1: d}
        for deg in range(2, 8):
            powers[deg] = powers[deg - 1].convolve(d)
        rebuilt = DistanceSpectrum()
        terms = []
        for deg, count in w.counts.items():
            terms.extend((k, c * count) for k, c in powers[deg].items())
        rng.shuffle(terms)
        for k, c in terms:
            rebuilt.add(k, c)
        assert dict(rebuilt.items()) == dict(b.items())


class TestCodebookSpectrum:
    def test_total_and_regression_bins(self, rs73, psk8):
        a = codebook_distance_spectrum(rs73, psk8, MappingRule.identity(8, 7))
        assert a.total() == 511
        assert len(a) == 42
        head = [(round(k, 9), c) for k, c in a.items()[:4]]
        assert head == [
            (4.100505063, Fraction(9, 8)),
            (4.343145751, Fraction(7, 2)),
            (5.757359313, Fraction(21, 2)),
            (6.343145751, Fraction(35, 8)),
        ]
        assert (round(a.items()[-1][0], 9), a.items()[-1][1]) == (28.0, Fraction(1))

    def test_exact_integer_path(self, rs73):
        bpsk3 = make_constellation("bpsk@3")
        a = codebook_distance_spectrum(rs73, bpsk3, MappingRule.identity(8, 7))
        assert a.total() == 511
        assert all(isinstance(k, int) for k, _ in a.items())
        # with a specific mapping the spectrum need not match the ensemble
        # average, but the minimum distance cannot undercut d_min pairs
        assert min(k for k, _ in a.items()) >= 5 * 4

    def test_random_mapping_spectrum_changes(self, rs73, psk8):
        a0 = codebook_distance_spectrum(rs73, psk8, sample_random_mapping(8, 7, 0))
        a1 = codebook_distance_spectrum(rs73, psk8, sample_random_mapping(8, 7, 1))
        assert a0.total() == a1.total() == 511
        assert dict(a0.items()) != dict(a1.items())

    def test_degenerate_single_codeword(self, psk8):
        code = RsCode(Field(3), 7, 0)
        spec = codebook_distance_spectrum(code, psk8, MappingRule.identity(8, 7))
        assert len(spec) == 0

    def test_size_guard(self):
        code = RsCode(Field(6), 63, 4)  # 64^4 = 2^24 > 2^20
        cons = make_constellation("bpsk@6")
        with pytest.raises(ValueError, match="cap"):
            codebook_distance_spectrum(code, cons, MappingRule.identity(64, 63))


class TestDistanceSpectrum:
    def test_add_and_merge(self):
        s = DistanceSpectrum(merge_tol=1e-6)
        s.add(1.0, 1)
        s.add(1.0 + 1e-9, 2)
        s.add(2.0, 5)
        assert len(s) == 2 and s.get(1.0) == 3

    def test_rejects_nonpositive_keys(self):
        with pytest.raises(ValueError):
            DistanceSpectrum({0: 1})

    def test_json_serialization(self):
        s = DistanceSpectrum({4: Fraction(3, 2), 8: 7})
        assert s.to_json_entries() == {"4": "3/2", "8": 7}

    def test_log_terms(self):
        s = DistanceSpectrum({4: Fraction(1, 2), 16: 10**300})
        deltas, ln_counts = s.log_terms()
        assert np.allclose(deltas, [2.0, 4.0])
        assert np.isclose(ln_counts[0], -np.log(2))
        assert np.isclose(ln_counts[1], 300 * np.log(10))
