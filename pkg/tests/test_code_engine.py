import itertools
from math import comb

import pytest
import numpy as np

from src.code_engine import (
    ROWS,
    CodeClass,
    WeightDistribution,
    assmus_mattson_check,
    am_weight_bound,
    bch_generator,
    classify_mds,
    codeword_on_block,
    cyclotomic_cosets,
    det_m5,
    det_m5_closed_forms,
    det_m6,
    det_m6_closed_form,
    dual_codeword,
    dual_min_weight_codewords,
    dual_min_weight_from_block,
    dual_weight_distribution,
    enumerate_low_weight,
    in_dual,
    is_codeword,
    kernel_to_subfield_solution,
    krawtchouk,
    m_matrix,
    m_rank,
    macwilliams_transform,
    minimal_poly,
    minimum_distance,
    nmds_pairing_check,
    trace_enum_work,
)
from src.errors import BudgetExceededError
from src.expectations import expected_value
from src.finite_field import as_ints
from src.symmetric_blocks import esp


def _distribution(claim_id, q, dimension):
    return WeightDistribution(expected_value(claim_id, q), q, dimension)


def _random_subsets(n, k, count, seed):
    rng = np.random.default_rng(seed)
    return [tuple(sorted(int(x) for x in rng.choice(n, size=k, replace=False)))
            for _ in range(count)]


@pytest.fixture(scope='module')
def dual16(code16):
    return dual_weight_distribution(code16, threads=2)


class TestCyclotomicCosets:

    def test_cosets_of_17(self):
        """Test that Z_17 splits into {0} and eight pairs {s, -s} under s -> 16 s."""
        cosets = cyclotomic_cosets(17, 16)

        assert cosets[0].members == (0,)
        assert cosets[1].members == (1, 16)
        assert len(cosets) == 9
        assert sorted(x for c in cosets for x in c.members) == list(range(17))

    def test_needs_coprime_length(self):
        """Test that gcd(n, q) != 1 is refused."""
        with pytest.raises(ValueError):
            cyclotomic_cosets(16, 4)


class TestGenerator:

    def test_minimal_polynomials(self, field16):
        """Test that m_i(x) kills beta^i and has coefficients in GF(q)."""
        GF = field16.GF
        for i in (1, 2, 3):
            poly = minimal_poly(field16, i)
            assert poly.degree == 2
            assert poly(GF(field16.pow(field16.beta, i))) == 0

    def test_minimal_poly_range(self, field16):
        """Test that only beta^1 .. beta^3 are accepted."""
        with pytest.raises(ValueError):
            minimal_poly(field16, 4)

    def test_generator_roots(self, field32):
        """Test that g has degree 6 and vanishes at beta^{+-1}, beta^{+-2}, beta^{+-3}."""
        GF = field32.GF
        g = bch_generator(field32)

        assert g.degree == 6
        for i in (1, 2, 3, -1, -2, -3):
            assert g(GF(field32.pow(field32.beta, i))) == 0


class TestCode:

    def test_dimensions(self, code16, code32):
        """Test [17, 11] at q=16 and [33, 27] at q=32."""
        assert (code16.n, code16.dimension) == (17, 11)
        assert (code32.n, code32.dimension) == (33, 27)
        assert code32.G.shape == (27, 33)
        assert code32.H.shape == (6, 33)

    def test_parity_rows(self, code16):
        """Test that row r of H holds u^r."""
        spec = code16.spec
        for i, r in enumerate(ROWS):
            assert int(code16.H[i, 5]) == spec.pow(spec.unit(5), r)

    def test_cyclic(self, code16):
        """Test that a cyclic shift of a codeword is a codeword."""
        word = as_ints(code16.G[3] + code16.G[7])
        for shift in (1, 5, 16):
            assert is_codeword(code16, np.roll(word, shift))

    def test_non_codeword(self, code16):
        """Test that a unit vector has a nonzero syndrome."""
        values = np.zeros(17, dtype=np.int64)
        values[4] = 1
        assert not is_codeword(code16, values)


class TestMMatrix:

    def test_four_columns_independent(self, field16):
        """Test that every sampled M_4 has rank 4."""
        for block in _random_subsets(17, 4, 200, seed=11):
            assert m_rank(m_matrix(field16, block)) == 4

    def test_five_columns(self, field16, steiner16):
        """Test rank(M_5) = 4 exactly on the Steiner blocks."""
        steiner = steiner16.as_set()
        for block in steiner16.blocks[:10]:
            assert m_rank(m_matrix(field16, block)) == 4
        others = [b for b in _random_subsets(17, 5, 50, seed=12) if b not in steiner]
        for block in others:
            assert m_rank(m_matrix(field16, block)) == 5

    def test_six_columns(self, field16, b63_16):
        """Test rank(M_6) = 5 on B(6,3) blocks and 6 off them."""
        family = b63_16.as_set()
        for block in b63_16.blocks[::80]:
            assert m_rank(m_matrix(field16, block)) == 5
        for block in _random_subsets(17, 6, 50, seed=13):
            if block not in family:
                assert m_rank(m_matrix(field16, block)) == 6

    def test_kernel_on_steiner_block(self, field16, steiner16):
        """Test that M_5 on a Steiner block has a one-dimensional kernel."""
        M = m_matrix(field16, steiner16.blocks[0]).matrix
        basis = M.null_space()

        assert basis.shape == (1, 5)
        assert np.all(M @ basis[0] == 0)

    def test_delete_unknown_row(self, field16):
        """Test that only rows u^r, r in ROWS, can be deleted."""
        M = m_matrix(field16, (0, 1, 2, 3, 4))
        assert M.delete_rows(3).shape == (5, 5)
        with pytest.raises(ValueError):
            M.delete_rows(0)


class TestDeterminants:

    def test_m6_closed_form(self, field32):
        """Test det(M_6) against its closed form on random 6-subsets."""
        for block in _random_subsets(33, 6, 1000, seed=21):
            assert det_m6(field32, block) == det_m6_closed_form(field32, block)

    def test_m5_closed_forms(self, field32):
        """Test every det(M_5[r]) against its closed form on random 5-subsets."""
        for block in _random_subsets(33, 5, 200, seed=22):
            forms = det_m5_closed_forms(field32, block)
            assert set(forms) == set(ROWS)
            for r in ROWS:
                assert det_m5(field32, block, r) == forms[r]

    def test_vanishing_on_b63(self, field16, b63_16):
        """Test det(M_6) = 0 on blocks of B(6,3)."""
        for block in b63_16.blocks[:20]:
            assert det_m6(field16, block) == 0

    def test_wrong_sizes(self, field16):
        """Test that the closed forms check their block sizes."""
        with pytest.raises(ValueError):
            det_m6_closed_form(field16, (0, 1, 2, 3, 4))
        with pytest.raises(ValueError):
            det_m5_closed_forms(field16, (0, 1, 2, 3, 4, 5))


class TestKernelLift:

    def test_solution_in_subfield(self, code32, b63_32):
        """Test that lifted kernels are nonzero GF(q) words of weight 6."""
        spec = code32.spec
        for block in b63_32.blocks[:20]:
            x = kernel_to_subfield_solution(spec, m_matrix(spec, block))
            assert all(spec.is_subfield(int(v)) for v in x)
            assert np.count_nonzero(x) == 6

            word = codeword_on_block(code32, block, x)
            assert is_codeword(code32, word.values)
            assert word.support == block

    def test_steiner_block_gives_weight_five(self, code16, steiner16):
        """Test a weight-5 codeword on a Steiner block."""
        spec = code16.spec
        block = steiner16.blocks[0]
        word = codeword_on_block(code16, block, kernel_to_subfield_solution(spec, m_matrix(spec, block)))

        assert word.weight == 5
        assert is_codeword(code16, word.values)

    def test_full_rank_refused(self, field16):
        """Test that a full-rank M has no solution to lift."""
        with pytest.raises(ValueError):
            kernel_to_subfield_solution(field16, m_matrix(field16, (0, 1, 2, 3)))


class TestLowWeight:

    def test_no_weight_three_or_four(self, code16):
        """Test A_3 = A_4 = 0 at q=16, A_3 over every 3-subset."""
        assert enumerate_low_weight(code16, 3, oracle=True).count == 0
        assert enumerate_low_weight(code16, 4).count == 0

    def test_weight_five_at_q16(self, code16):
        """Test A_5 = 15 * 68 = 1020 at q=16."""
        result = enumerate_low_weight(code16, 5)

        assert result.count == 1020
        assert len(result.supports) == 68
        assert result.solutions.shape == (68, 5)
        assert is_codeword(code16, result.codeword(code16, 0).values)

    def test_weight_six_at_q16(self, code16, b63_16):
        """Test A_6 = 0 at q=16: every B(6,3) kernel hides a weight-5 word."""
        result = enumerate_low_weight(code16, 6, candidates=b63_16.blocks, exact=True)

        assert result.count == 0
        assert result.degenerate == 816

    def test_worker_pool_after_field_work(self, code16, steiner16, monkeypatch):
        """Test that a two-worker lift runs after galois work in this process."""
        assert in_dual(code16, dual_codeword(code16, 1, 0, 0).values)
        assert m_rank(m_matrix(code16.spec, steiner16.blocks[0])) == 4
        monkeypatch.setattr('src.code_engine.LIFT_CHUNK', 16)
        result = enumerate_low_weight(code16, 5, candidates=steiner16.blocks, exact=True, threads=2)

        assert result.count == 1020
        assert result.supports == enumerate_low_weight(code16, 5).supports

    def test_minimum_distance_at_q16(self, code16):
        """Test d = 5 at q=16."""
        assert minimum_distance(code16).w == 5

    def test_budget(self, code16):
        """Test that the oracle scan respects the budget."""
        with pytest.raises(BudgetExceededError):
            enumerate_low_weight(code16, 5, budget=1000, oracle=True)

    def test_weight_out_of_range(self, code16):
        """Test that w = 7 is refused."""
        with pytest.raises(ValueError):
            enumerate_low_weight(code16, 7)

    @pytest.mark.integration
    def test_oracle_agrees_at_q16(self, code16):
        """Test the ESP shortcut against ranking every 5-subset."""
        oracle = enumerate_low_weight(code16, 5, oracle=True)
        assert oracle.supports == enumerate_low_weight(code16, 5).supports

    @pytest.mark.integration
    def test_weight_six_at_q32(self, code32, b63_32):
        """Test A_6 = 31 * 32736 = 1014816 at q=32."""
        result = enumerate_low_weight(code32, 6, candidates=b63_32.blocks, exact=True, threads=2)

        assert result.count == 1014816
        assert result.degenerate == 0


class TestDualCode:

    def test_trace_words_are_dual(self, code16):
        """Test that Tr(a u^3 + b u^2 + c u) is orthogonal to the code."""
        rng = np.random.default_rng(31)
        for a, b, c in rng.integers(0, 256, size=(10, 3)):
            word = dual_codeword(code16, int(a), int(b), int(c))
            assert in_dual(code16, word.values)
            assert word.weight == 0 or word.weight >= 11

    def test_zero_word(self, code16):
        """Test that (0, 0, 0) gives the zero word."""
        assert dual_codeword(code16, 0, 0, 0).weight == 0

    def test_min_weight_word_from_block(self, code16, b63_16):
        """Test that the word built from a block vanishes exactly there."""
        spec = code16.spec
        block = b63_16.blocks[5]
        for tau in (1, spec.pow(spec.alpha, 17)):
            word = dual_codeword(code16, *dual_min_weight_from_block(spec, block, tau))
            assert word.weight == 11
            assert set(range(17)) - set(word.support) == set(block)

    def test_min_weight_word_needs_b63(self, field16):
        """Test that a block with sigma_6,3 != 0 is refused."""
        block = next(b for b in itertools.combinations(range(17), 6)
                     if esp(field16, [field16.unit(e) for e in b], 3) != 0)
        with pytest.raises(ValueError):
            dual_min_weight_from_block(field16, block)

    def test_tau_outside_subfield(self, field16, b63_16):
        """Test that tau must lie in GF(q)*."""
        with pytest.raises(ValueError):
            dual_min_weight_from_block(field16, b63_16.blocks[0], field16.alpha)

    def test_min_weight_supports(self, code16, b63_16):
        """Test that dual minimum supports are the complements of B(6,3)."""
        supports = dual_min_weight_codewords(code16, b63_16)
        complements = sorted(tuple(sorted(set(range(17)) - set(b))) for b in b63_16.blocks)

        assert supports == complements


class TestDualDistribution:

    def test_at_q16(self, dual16):
        """Test the trace enumeration against the known dual distribution."""
        assert dual16.to_list() == expected_value('dual.distribution', 16)
        assert dual16.min_weight == 11

    def test_support_formula(self, code16, b63_16):
        """Test the partial distribution from |B(6,3)|."""
        dist = dual_weight_distribution(code16, 'support_formula', family=b63_16)

        assert dist.partial
        assert dist.nonzero() == {0: 1, 11: 12240}

    def test_unknown_method(self, code16):
        """Test that an unknown method is refused."""
        with pytest.raises(ValueError):
            dual_weight_distribution(code16, 'guess')

    def test_budget(self, code16):
        """Test that the enumeration respects the budget."""
        assert trace_enum_work(16) == 17 * 16 ** 4 + 17 * 16 ** 2 + 17
        with pytest.raises(BudgetExceededError):
            dual_weight_distribution(code16, budget=1000)

    @pytest.mark.integration
    def test_at_q32(self, code32):
        """Test the trace enumeration at q=32."""
        dist = dual_weight_distribution(code32, threads=2)
        assert dist.to_list() == expected_value('dual.distribution', 32)


class TestWeightDistribution:

    def test_sum_checked(self):
        """Test that the counts must sum to q^k."""
        with pytest.raises(ValueError):
            WeightDistribution([1, 2, 0], 2, 1)

    def test_a0_checked(self):
        """Test that A_0 must be 1."""
        with pytest.raises(ValueError):
            WeightDistribution([0, 4], 4, 1)

    def test_partial_skips_checks(self):
        """Test that a partial distribution is not summed."""
        assert WeightDistribution([1, 0, 5], 4, 2, partial=True).min_weight == 2


class TestMacWilliams:

    def test_krawtchouk_at_zero(self):
        """Test K_j(0) = C(n, j) (q - 1)^j."""
        for j in range(6):
            assert krawtchouk(j, 0, 5, 4) == comb(5, j) * 3 ** j

    def test_dual_to_primal_at_q16(self, dual16):
        """Test that the dual distribution gives the known code distribution."""
        primal = macwilliams_transform(dual16, 17, 6, 16)

        assert primal.to_list() == expected_value('primal.distribution', 16)
        assert primal.dimension == 11
        assert primal.min_weight == 5

    def test_involution(self):
        """Test that transforming twice gives the distribution back."""
        dual = _distribution('dual.distribution', 16, 6)
        primal = macwilliams_transform(dual, 17, 6, 16)

        assert macwilliams_transform(primal, 17, 11, 16).counts == dual.counts

    def test_zero_code(self):
        """Test that the zero code transforms to the full space."""
        full = macwilliams_transform(WeightDistribution([1, 0, 0, 0, 0, 0], 4, 0), 5, 0, 4)
        assert full.to_list() == [comb(5, i) * 3 ** i for i in range(6)]

    def test_partial_refused(self):
        """Test that a partial distribution is not transformed."""
        with pytest.raises(ValueError):
            macwilliams_transform(WeightDistribution([1, 0, 5], 4, 2, partial=True), 2, 2, 4)

    def test_parameters_checked(self):
        """Test that mismatched [n, k] are refused."""
        dual = _distribution('dual.distribution', 16, 6)
        with pytest.raises(ValueError):
            macwilliams_transform(dual, 17, 5, 16)


class TestClassification:

    def test_classes(self):
        """Test MDS, AMDS, NMDS and neither."""
        assert classify_mds(17, 11, 7, 12) == CodeClass.MDS
        assert classify_mds(33, 27, 6, 27) == CodeClass.NMDS
        assert classify_mds(33, 27, 6, 26) == CodeClass.AMDS
        assert classify_mds(17, 11, 5, 11) == CodeClass.NEITHER

    def test_weight_bound(self):
        """Test the largest w with w - ceil(w / (q - 1)) < d."""
        assert am_weight_bound(17, 5, 16) == 5
        assert am_weight_bound(17, 11, 16) == 11


class TestAssmusMattson:

    def test_fails_at_q16(self, dual16):
        """Test s = 4 > d - t = 2 at q=16, t=3."""
        primal = macwilliams_transform(dual16, 17, 6, 16)
        report = assmus_mattson_check(primal, dual16, 3)

        assert report.s == 4
        assert report.d == 5
        assert not report.hypothesis_holds
        assert report.design_weights == []

    def test_fails_at_q32(self):
        """Test s = 3 > d - t = 2 at q=32, t=4."""
        dual = _distribution('dual.distribution', 32, 6)
        primal = macwilliams_transform(dual, 33, 6, 32)
        report = assmus_mattson_check(primal, dual, 4)

        assert report.d == 6
        assert report.d_dual == 27
        assert report.s == 3
        assert not report.hypothesis_holds

    def test_holds_for_parity_code(self):
        """Test the parity code of the [5, 1, 5] repetition code over GF(4), t = 1."""
        repetition = WeightDistribution([1, 0, 0, 0, 0, 3], 4, 1)
        parity = macwilliams_transform(repetition, 5, 1, 4)
        report = assmus_mattson_check(parity, repetition, 1)

        assert parity.min_weight == 2
        assert report.s == 0
        assert report.hypothesis_holds
        assert report.design_weights[0] == 2
        assert report.to_dict()['hypothesis_holds'] is True

    def test_length_mismatch(self):
        """Test that distributions of different lengths are refused."""
        repetition = WeightDistribution([1, 0, 0, 0, 0, 3], 4, 1)
        with pytest.raises(ValueError):
            assmus_mattson_check(repetition, WeightDistribution([1, 3], 4, 1), 1)


class TestNMDSPairing:

    def test_refused_at_q16(self, code16, b63_16):
        """Test that the q=16 code is not NMDS."""
        with pytest.raises(ValueError, match="not NMDS"):
            nmds_pairing_check(code16, family=b63_16)

    @pytest.mark.integration
    def test_pairing_at_q32(self, code32, b63_32):
        """Test the one-to-one pairing of minimum words at q=32."""
        low = enumerate_low_weight(code32, 6, candidates=b63_32.blocks, exact=True, threads=2)
        report = nmds_pairing_check(code32, sample_size=100, low_weight=low, family=b63_32)

        assert report.code_class == CodeClass.NMDS
        assert report.primal_count == report.dual_count == 1014816
        assert report.pairing_unique
        assert report.complements_match
        assert report.passed
