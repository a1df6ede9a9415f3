import itertools

import numpy as np
import pytest

from rscm import (
    Codeword,
    CodeTooLargeError,
    Field,
    MappingRule,
    RsCode,
    chase_list_decode,
    decode_hdd,
    exhaustive_ml,
    make_constellation,
    map_word,
    sphere_list,
)


def test_encode_trivial_cases(rs73):
    assert rs73.encode([0, 0, 0]).symbols == (0,) * 7
    # constant polynomial evaluates to the same value everywhere
    assert rs73.encode([5, 0, 0]).symbols == (5,) * 7
    with pytest.raises(ValueError):
        rs73.encode([1, 2])


def test_min_weight_is_mds(rs73):
    cb = rs73.codebook()
    weights = (cb[1:] != 0).sum(axis=1)
    assert weights.min() == rs73.d_min == 5


def test_encode_linearity_randomized(rs73, field8):
    rng = np.random.default_rng(3)
    msgs = rng.integers(0, 8, size=(10_000, 2, 3))
    for m1, m2 in msgs:
        c1 = rs73.encode([int(x) for x in m1]).symbols
        c2 = rs73.encode([int(x) for x in m2]).symbols
        c12 = rs73.encode([int(a ^ b) for a, b in zip(m1, m2)]).symbols
        assert tuple(a ^ b for a, b in zip(c1, c2)) == c12


def test_default_eval_points_are_antilog_order(field8):
    code = RsCode(field8, 7, 3)
    assert code.eval_points == [field8.alpha_power(i) for i in range(7)]
    with pytest.raises(ValueError):
        RsCode(field8, 7, 3, eval_points=[1, 1, 2, 3, 4, 5, 6])


class TestDecodeHdd:
    def test_clean_word_decodes_to_itself(self, rs73):
        cw = rs73.encode([3, 1, 4])
        res = decode_hdd(rs73, list(cw.symbols))
        assert res.status == "decoded" and res.codeword == cw

    def test_all_patterns_up_to_half_distance(self, rs73):
        cw = list(rs73.encode([2, 7, 1]).symbols)
        for npos in (1, 2):
            for pos in itertools.combinations(range(7), npos):
                for vals in itertools.product(range(1, 8), repeat=npos):
                    r = list(cw)
                    for p, v in zip(pos, vals):
                        r[p] ^= v
                    res = decode_hdd(rs73, r)
                    assert res.codeword is not None
                    assert list(res.codeword.symbols) == cw

    def test_full_erasure_budget(self, rs73):
        rng = np.random.default_rng(5)
        for _ in range(100):
            cw = list(rs73.encode([int(x) for x in rng.integers(0, 8, 3)]).symbols)
            ers = [int(e) for e in rng.choice(7, 4, replace=False)]
            r = list(cw)
            for e in ers:
                r[e] = int(rng.integers(0, 8))
            res = decode_hdd(rs73, r, erasures=ers)
            assert res.codeword is not None and list(res.codeword.symbols) == cw

    def test_erasures_beyond_budget_rejected(self, rs73):
        with pytest.raises(ValueError):
            decode_hdd(rs73, [0] * 7, erasures=[0, 1, 2, 3, 4])

    def test_matches_bounded_distance_oracle(self, rs73):
        # ground truth by scanning the whole codebook for the unique codeword
        # within the errors-and-erasures ball of the received word
        cb = rs73.codebook()

        def oracle(r, ers):
            best = None
            for row in cb:
                errs = sum(1 for i in range(7) if i not in ers and row[i] != r[i])
                if 2 * errs + len(ers) <= 4:
                    assert best is None
                    best = tuple(int(x) for x in row)
            return best

        rng = np.random.default_rng(11)
        for _ in range(1500):
            r = [int(x) for x in rng.integers(0, 8, 7)]
            ers = set(int(e) for e in rng.choice(7, int(rng.integers(0, 5)), replace=False))
            want = oracle(r, ers)
            got = decode_hdd(rs73, r, erasures=ers)
            assert (None if got.codeword is None else got.codeword.symbols) == want

    def test_rate_one_code_returns_received(self, field8):
        code = RsCode(field8, 5, 5)
        res = decode_hdd(code, [1, 2, 3, 4, 5])
        assert res.codeword == Codeword((1, 2, 3, 4, 5))


class TestSoftDecoders:
    def test_noiseless_chase_head(self, rs73, psk8):
        mapping = MappingRule.identity(8, 7)
        cw = rs73.encode([1, 5, 2])
        y = map_word(cw, psk8, mapping)
        results = chase_list_decode(rs73, psk8, mapping, y, eta=3, mu=2)
        assert results[0].codeword == cw and results[0].metric == 0.0

    def test_eta_zero_is_hard_decision(self, rs73, psk8):
        mapping = MappingRule.identity(8, 7)
        rng = np.random.default_rng(17)
        for _ in range(50):
            cw = rs73.encode([int(x) for x in rng.integers(0, 8, 3)])
            y = map_word(cw, psk8, mapping) + 0.3 * rng.standard_normal(14)
            # symbol-wise nearest points, then plain bounded-distance decoding
            hard = []
            for t in range(7):
                d = ((psk8.points - y.reshape(7, 2)[t]) ** 2).sum(axis=1)
                hard.append(int(mapping.inverse_tables[t][int(np.argmin(d))]))
            want = decode_hdd(rs73, hard)
            got = chase_list_decode(rs73, psk8, mapping, y, eta=0)
            if want.codeword is None:
                assert got == []
            else:
                assert len(got) == 1 and got[0].codeword == want.codeword

    def test_list_properties_under_noise(self, rs73, psk8):
        mapping = MappingRule.identity(8, 7)
        rng = np.random.default_rng(19)
        checked = 0
        for _ in range(200):
            cw = rs73.encode([int(x) for x in rng.integers(0, 8, 3)])
            y = map_word(cw, psk8, mapping) + 0.45 * rng.standard_normal(14)
            results = chase_list_decode(rs73, psk8, mapping, y, eta=3, mu=2)
            metrics = [r.metric for r in results]
            assert metrics == sorted(metrics)
            for r in results:
                assert rs73.is_codeword(r.codeword.symbols)
            ml = exhaustive_ml(rs73, psk8, mapping, y)
            for r in results:
                assert ml.metric <= r.metric + 1e-12
            checked += len(results)
        assert checked > 0

    def test_eta_above_cap_rejected(self, rs73, psk8):
        with pytest.raises(ValueError):
            chase_list_decode(rs73, psk8, MappingRule.identity(8, 7), np.zeros(14), eta=7)

    def test_ml_noiseless_and_tie_break(self, rs73, psk8):
        mapping = MappingRule.identity(8, 7)
        cw = rs73.encode([4, 0, 7])
        y = map_word(cw, psk8, mapping)
        assert exhaustive_ml(rs73, psk8, mapping, y).codeword == cw
        # y equidistant from several codewords resolves to the smallest symbols
        f4 = Field(2)
        code = RsCode(f4, 3, 1)
        cons = make_constellation("bpsk@2")
        res = exhaustive_ml(code, cons, MappingRule.identity(4, 3), np.zeros(6))
        assert res.codeword.symbols == (0, 0, 0)

    def test_ml_oracle_guard(self):
        code = RsCode(Field(6), 63, 5)  # 64^5 = 2^30 codewords
        cons = make_constellation("bpsk@6")
        with pytest.raises(CodeTooLargeError):
            exhaustive_ml(code, cons, MappingRule.identity(64, 63), np.zeros(63 * 6))

    def test_sphere_list_edges(self, rs73, psk8):
        mapping = MappingRule.identity(8, 7)
        cw = rs73.encode([2, 2, 2])
        y = map_word(cw, psk8, mapping)
        assert sphere_list(rs73, psk8, mapping, y, 0.0) == [cw]
        assert len(sphere_list(rs73, psk8, mapping, y, 1e9)) == 512

    def test_sphere_list_against_rescan(self, rs73, psk8):
        mapping = MappingRule.identity(8, 7)
        rng = np.random.default_rng(23)
        cb = rs73.codebook()
        for _ in range(20):
            y = rng.standard_normal(14) * 1.5
            r_star = float(rng.uniform(2.0, 4.0))
            got = sphere_list(rs73, psk8, mapping, y, r_star)
            # independent re-scan in shuffled enumeration order
            order = rng.permutation(512)
            members = set()
            for row in order:
                s = map_word([int(v) for v in cb[row]], psk8, mapping)
                if float(((s - y) ** 2).sum()) <= r_star**2:
                    members.add(tuple(int(v) for v in cb[row]))
            assert {c.symbols for c in got} == members
