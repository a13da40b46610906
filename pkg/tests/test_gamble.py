"""Tests for payout rules, probabilities, and per-outcome quantities."""

import math

import pytest

from petersburg import (
    BernoulliOriginal,
    Capped,
    GambleSpec,
    Menger,
    OutOfSupportError,
    PlayerState,
    Table,
    cap_point,
    growth_factor,
    load_table,
    min_payout,
    payout,
    probability,
    support_size,
)


class TestDoublingPayouts:
    def test_first_payouts_double(self):
        spec = GambleSpec()
        assert payout(spec, 1) == 1.0
        assert payout(spec, 2) == 2.0
        assert payout(spec, 3) == 4.0
        assert payout(spec, 11) == 1024.0

    def test_huge_index_saturates_to_inf(self):
        spec = GambleSpec()
        assert payout(spec, 1200) == math.inf

    def test_wealth_does_not_matter(self):
        spec = GambleSpec()
        assert payout(spec, 5, wealth=1.0) == payout(spec, 5, wealth=1e6)

    def test_waiting_time_must_be_positive_integer(self):
        spec = GambleSpec()
        with pytest.raises(ValueError):
            payout(spec, 0)
        with pytest.raises(ValueError):
            payout(spec, -3)


class TestMengerPayouts:
    def test_first_payout_scales_with_wealth(self):
        spec = GambleSpec(payout_rule=Menger())
        expected = 100.0 * math.expm1(2.0)  # wealth times (e^(2^1) - 1)
        assert abs(payout(spec, 1, wealth=100.0) - expected) < 1e-9
        assert abs(payout(spec, 1, wealth=100.0) - 638.905609893065023) < 1e-9

    def test_overflow_saturates_to_inf(self):
        spec = GambleSpec(payout_rule=Menger())
        assert payout(spec, 10, wealth=1.0) == math.inf
        assert payout(spec, 9, wealth=1.0) < math.inf


class TestCappedPayouts:
    def test_payouts_below_cap_match_doubling(self):
        spec = GambleSpec(payout_rule=Capped(1e9))
        assert payout(spec, 1) == 1.0
        assert payout(spec, 30) == 2.0 ** 29

    def test_payouts_beyond_cap_are_zero(self):
        spec = GambleSpec(payout_rule=Capped(1e9))
        assert payout(spec, 31) == 0.0
        assert payout(spec, 100) == 0.0

    def test_cap_point_values(self):
        assert cap_point(1e9) == 30
        assert cap_point(0.5) == 0
        assert cap_point(1.0) == 1
        assert cap_point(2.0) == 2
        assert cap_point(3.0) == 2
        assert cap_point(2.0 ** 52) == 53

    def test_cap_must_be_positive_and_finite(self):
        with pytest.raises(ValueError):
            Capped(0.0)
        with pytest.raises(ValueError):
            Capped(-5.0)
        with pytest.raises(ValueError):
            Capped(math.inf)


class TestTableGambles:
    def setup_method(self):
        self.table = Table(((0.5, 1.0), (0.25, 2.0), (0.25, 10.0)))
        self.spec = GambleSpec(payout_rule=self.table)

    def test_rows_are_indexed_by_waiting_time(self):
        assert payout(self.spec, 1) == 1.0
        assert payout(self.spec, 3) == 10.0
        assert probability(self.spec, 2) == 0.25

    def test_beyond_support_raises(self):
        with pytest.raises(OutOfSupportError):
            payout(self.spec, 4)
        with pytest.raises(OutOfSupportError):
            probability(self.spec, 4)

    def test_support_size(self):
        assert support_size(self.spec) == 3
        assert support_size(GambleSpec()) is None

    def test_probabilities_must_sum_to_one(self):
        with pytest.raises(ValueError):
            Table(((0.5, 1.0), (0.4, 2.0)))

    def test_probabilities_must_be_positive(self):
        with pytest.raises(ValueError):
            Table(((1.5, 1.0), (-0.5, 2.0)))

    def test_empty_table_rejected(self):
        with pytest.raises(ValueError):
            Table(())

    def test_non_finite_rows_rejected(self):
        with pytest.raises(ValueError):
            Table(((1.0, math.inf),))


class TestProbabilities:
    def test_geometric_law(self):
        spec = GambleSpec()
        assert abs(probability(spec, 1) - 0.5) < 1e-15
        assert abs(probability(spec, 5) - 0.5 ** 5) < 1e-15

    def test_other_parameter(self):
        spec = GambleSpec(probability_parameter=0.3)
        assert abs(probability(spec, 3) - 0.3 * 0.7 ** 2) < 1e-15

    def test_parameter_must_be_in_open_interval(self):
        with pytest.raises(ValueError):
            GambleSpec(probability_parameter=0.0)
        with pytest.raises(ValueError):
            GambleSpec(probability_parameter=1.0)
        with pytest.raises(ValueError):
            GambleSpec(probability_parameter=-0.2)


class TestGrowthFactor:
    def test_factor_at_entry_state(self):
        state = PlayerState(wealth=100.0, ticket_price=2.0)
        spec = GambleSpec()
        assert abs(growth_factor(state, spec, 1) - 0.99) < 1e-15
        assert abs(growth_factor(state, spec, 8) - 2.26) < 1e-15

    def test_factor_can_be_nonpositive(self):
        state = PlayerState(wealth=10.0, ticket_price=11.0)
        spec = GambleSpec()
        assert growth_factor(state, spec, 1) == 0.0
        assert growth_factor(PlayerState(10.0, 12.0), spec, 1) < 0.0


class TestMinPayout:
    def test_doubling_minimum_is_one_dollar(self):
        assert min_payout(GambleSpec()) == 1.0

    def test_capped_minimum_is_zero(self):
        assert min_payout(GambleSpec(payout_rule=Capped(1e9))) == 0.0

    def test_table_minimum(self):
        table = Table(((0.5, 4.0), (0.5, 0.25)))
        assert min_payout(GambleSpec(payout_rule=table)) == 0.25


class TestPlayerState:
    def test_wealth_must_be_positive(self):
        with pytest.raises(ValueError):
            PlayerState(0.0)
        with pytest.raises(ValueError):
            PlayerState(-10.0)

    def test_price_must_be_nonnegative_and_finite(self):
        with pytest.raises(ValueError):
            PlayerState(10.0, -1.0)
        with pytest.raises(ValueError):
            PlayerState(10.0, math.nan)

    def test_free_ticket_is_valid(self):
        state = PlayerState(10.0)
        assert state.ticket_price == 0.0


class TestLoadTable:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "gamble.csv"
        path.write_text("probability,payout\n0.5,1.0\n0.25,2.0\n0.25,8.0\n")
        table = load_table(str(path))
        assert table.rows == ((0.5, 1.0), (0.25, 2.0), (0.25, 8.0))

    def test_blank_lines_are_skipped(self, tmp_path):
        path = tmp_path / "gamble.csv"
        path.write_text("p,m\n0.5,1.0\n\n0.5,3.0\n")
        assert len(load_table(str(path)).rows) == 2

    def test_missing_header_rejected(self, tmp_path):
        path = tmp_path / "gamble.csv"
        path.write_text("0.5,1.0\n0.5,2.0\n")
        with pytest.raises(ValueError, match="header"):
            load_table(str(path))

    def test_empty_file_rejected(self, tmp_path):
        path = tmp_path / "gamble.csv"
        path.write_text("")
        with pytest.raises(ValueError, match="empty"):
            load_table(str(path))

    def test_wrong_column_count_reports_line(self, tmp_path):
        path = tmp_path / "gamble.csv"
        path.write_text("p,m\n0.5,1.0\n0.5,2.0,9\n")
        with pytest.raises(ValueError, match=":3"):
            load_table(str(path))

    def test_non_numeric_row_reports_line(self, tmp_path):
        path = tmp_path / "gamble.csv"
        path.write_text("p,m\n0.5,one\n")
        with pytest.raises(ValueError, match="non-numeric"):
            load_table(str(path))

    def test_bad_probability_sum_mentions_file(self, tmp_path):
        path = tmp_path / "gamble.csv"
        path.write_text("p,m\n0.5,1.0\n0.1,2.0\n")
        with pytest.raises(ValueError, match="gamble.csv"):
            load_table(str(path))

    def test_missing_file_raises_oserror(self, tmp_path):
        with pytest.raises(OSError):
            load_table(str(tmp_path / "nope.csv"))
