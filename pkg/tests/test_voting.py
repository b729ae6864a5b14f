"""加权多数博弈与陪审团定理测试."""

import itertools
import math
import os
import tempfile
from fractions import Fraction

import numpy as np
import pytest

from src.game_core import GameError, GameParseError
from src.voting import (
    CompetencyDomainError, UnsupportedSizeError, WeightedVotingGame, banzhaf, coleman_indices,
    is_winning, jury_probability, jury_probability_weighted, load_voting, log_odds_weights,
    parse_voting, shapley_shubik, weight_power_discrepancy, wmr_decide,
)


@pytest.fixture
def game321():
    return WeightedVotingGame((3, 2, 1), 4)


def _brute_banzhaf(v):
    """逐个联盟检查摇摆者."""
    raw = [0] * v.n
    for size in range(v.n + 1):
        for coalition in itertools.combinations(range(v.n), size):
            if not is_winning(v, coalition):
                continue
            for i in coalition:
                if not is_winning(v, [j for j in coalition if j != i]):
                    raw[i] += 1
    return raw


def _brute_shapley(v):
    """逐个排列找关键玩家."""
    raw = [0] * v.n
    for order in itertools.permutations(range(v.n)):
        total = Fraction(0)
        for i in order:
            total += v.weights[i]
            if total >= v.quota:
                raw[i] += 1
                break
    return raw


class TestWeightedVotingGame:
    """投票博弈表示测试."""

    def test_exact_weights(self):
        v = WeightedVotingGame((0.1, 0.2), 0.3)
        assert v.weights == (Fraction(1, 10), Fraction(1, 5))
        assert is_winning(v, [0, 1])
        assert v.integer_form() == ([1, 2], 3)

    def test_winning(self, game321):
        assert is_winning(game321, [0, 2])
        assert not is_winning(game321, [1, 2])
        assert not is_winning(game321, [])

    def test_index_out_of_range(self, game321):
        with pytest.raises(GameError):
            is_winning(game321, [3])

    def test_invalid_quota(self):
        with pytest.raises(GameError):
            WeightedVotingGame((1, 2), 0)

    def test_unwinnable_game(self):
        v = WeightedVotingGame((1, 1), 5)
        assert not v.winnable
        assert banzhaf(v).normalized == (Fraction(0), Fraction(0))


class TestPowerIndices:
    """权力指数测试."""

    def test_banzhaf_321(self, game321):
        result = banzhaf(game321)
        assert result.raw == (3, 1, 1)
        assert result.normalized == (Fraction(3, 5), Fraction(1, 5), Fraction(1, 5))
        assert _brute_banzhaf(game321) == [3, 1, 1]

    def test_shapley_321(self, game321):
        result = shapley_shubik(game321)
        assert result.raw == (4, 1, 1)
        assert result.normalized == (Fraction(2, 3), Fraction(1, 6), Fraction(1, 6))
        assert _brute_shapley(game321) == [4, 1, 1]

    def test_direct_equals_subset(self, game321):
        assert banzhaf(game321, method="direct").raw == banzhaf(game321).raw

    def test_dummy_player(self):
        v = WeightedVotingGame((3, 2, 1), 5)
        assert banzhaf(v).normalized[2] == 0
        assert shapley_shubik(v).normalized[2] == 0

    def test_scale_invariance(self, game321):
        scaled = WeightedVotingGame((21, 14, 7), 28)
        assert banzhaf(scaled).normalized == banzhaf(game321).normalized
        assert shapley_shubik(scaled).normalized == shapley_shubik(game321).normalized

    def test_random_games_against_oracles(self):
        """随机小规模博弈：两种 Banzhaf 算法与暴力枚举一致，Shapley 关键次数之和为 n!."""
        rng = np.random.default_rng(3)
        for _ in range(200):
            n = int(rng.integers(1, 11))
            weights = [int(w) for w in rng.integers(0, 10, size=n)]
            quota = int(rng.integers(1, sum(weights) + 2))
            v = WeightedVotingGame(tuple(weights), quota)
            subset = banzhaf(v, method="subset").raw
            assert subset == banzhaf(v, method="direct").raw
            assert subset == banzhaf(v, method="direct", threads=4).raw
            if n <= 6:
                assert list(subset) == _brute_banzhaf(v)
                assert list(shapley_shubik(v).raw) == _brute_shapley(v)
            if v.winnable:
                assert sum(shapley_shubik(v).raw) == math.factorial(n)
                assert sum(banzhaf(v).normalized) == 1

    def test_identical_weights_identical_shares(self):
        v = WeightedVotingGame((2, 2, 2, 1), 4)
        shares = banzhaf(v).normalized
        assert shares[0] == shares[1] == shares[2]

    def test_size_limit(self):
        v = WeightedVotingGame(tuple([1] * 5), 3)
        with pytest.raises(UnsupportedSizeError):
            banzhaf(v, max_players=4)
        with pytest.raises(UnsupportedSizeError):
            shapley_shubik(v, max_players=4)

    def test_unknown_method(self, game321):
        with pytest.raises(GameError):
            banzhaf(game321, method="sampling")

    def test_coleman(self, game321):
        c = coleman_indices(game321)
        assert c.power_to_act == Fraction(3, 8)
        assert c.absolute_banzhaf == (Fraction(3, 4), Fraction(1, 4), Fraction(1, 4))
        assert c.power_to_prevent == (Fraction(1), Fraction(1, 3), Fraction(1, 3))
        assert c.power_to_initiate == (Fraction(3, 5), Fraction(1, 5), Fraction(1, 5))

    def test_weight_is_not_power(self, game321):
        assert weight_power_discrepancy(game321) == (Fraction(1, 10), Fraction(-2, 15), Fraction(1, 30))

    def test_to_dict(self, game321):
        data = banzhaf(game321).to_dict()
        assert data['normalized'] == ["3/5", "1/5", "1/5"]
        assert data['method'] == "banzhaf"


class TestJury:
    """陪审团定理测试."""

    def test_exact_values(self):
        assert jury_probability(3, 0.6) == Fraction(81, 125)
        assert jury_probability(5, 0.6) == Fraction("0.68256")
        assert jury_probability(1, 0.7) == Fraction(7, 10)

    def test_half_is_fixed_point(self):
        for n in range(1, 20, 2):
            assert jury_probability(n, 0.5) == Fraction(1, 2)

    def test_monotone_in_n(self):
        for p in np.arange(0.55, 0.96, 0.05):
            values = [jury_probability(n, round(float(p), 2)) for n in range(1, 20, 2)]
            assert all(a < b for a, b in zip(values, values[1:]))
            below = [jury_probability(n, round(1 - float(p), 2)) for n in range(1, 20, 2)]
            assert all(a > b for a, b in zip(below, below[1:]))

    def test_rejects_even_n(self):
        with pytest.raises(GameError):
            jury_probability(4, 0.6)

    def test_rejects_p_outside_interval(self):
        with pytest.raises(CompetencyDomainError):
            jury_probability(3, 1.0)

    def test_homogeneous_weighted_matches_binomial(self):
        profile = log_odds_weights([0.6] * 5)
        assert jury_probability_weighted(profile) == pytest.approx(0.68256, abs=1e-12)

    def test_tie_counts_half(self):
        assert jury_probability_weighted([1.0, 1.0], [0.6, 0.6]) == pytest.approx(0.36 + 0.48 * 0.5)

    def test_log_odds_never_lose(self):
        """对数几率权重不劣于任何随机权重向量."""
        rng = np.random.default_rng(99)
        for _ in range(20):
            p = rng.uniform(0.05, 0.95, size=5)
            optimal = jury_probability_weighted(log_odds_weights(p))
            for _ in range(10):
                candidate = rng.uniform(-1, 3, size=5)
                assert optimal >= jury_probability_weighted(candidate, p) - 1e-12

    def test_voter_limit(self):
        with pytest.raises(UnsupportedSizeError):
            jury_probability_weighted([1.0] * 4, [0.6] * 4, max_voters=3)


class TestLogOdds:
    """对数几率权重与加权多数规则测试."""

    def test_half_gets_zero_weight(self):
        assert log_odds_weights([0.5]).w == (0.0,)

    def test_weights(self):
        profile = log_odds_weights([0.8, 0.2])
        assert profile.w[0] == pytest.approx(math.log(4))
        assert profile.w[1] == pytest.approx(-math.log(4))

    def test_domain(self):
        with pytest.raises(CompetencyDomainError):
            log_odds_weights([0.0, 0.5])

    def test_wmr_decide(self):
        assert wmr_decide([2.0, 1.0, 0.5], [1, -1, -1]) == 1
        assert wmr_decide([1.0, 1.0], [1, -1]) == 0
        assert wmr_decide([0.5, 1.0], [1, -1]) == -1

    def test_wmr_rejects_bad_votes(self):
        with pytest.raises(GameError):
            wmr_decide([1.0], [0])


class TestVotingFile:
    """投票文件解析测试."""

    def test_parse(self):
        v, comp = parse_voting("voting:\nquota: 4\nweights: 3 2 1\ncompetencies: 0.8 0.6 0.6  # 可选\n")
        assert v.weights == (3, 2, 1)
        assert v.quota == 4
        assert comp == (0.8, 0.6, 0.6)

    def test_parse_without_competencies(self):
        _, comp = parse_voting("voting:\nquota: 0.5\nweights: 0.25 0.25 0.5\n")
        assert comp is None

    def test_missing_header(self):
        with pytest.raises(GameParseError, match="line 1"):
            parse_voting("quota: 4\nweights: 1 2\n")

    def test_bad_token(self):
        with pytest.raises(GameParseError) as exc:
            parse_voting("voting:\nquota: 4\nweights: 3 x 1\n")
        assert exc.value.line_number == 3

    def test_competency_count(self):
        with pytest.raises(GameParseError, match="competencies"):
            parse_voting("voting:\nquota: 4\nweights: 3 2 1\ncompetencies: 0.7\n")

    def test_missing_quota(self):
        with pytest.raises(GameParseError, match="quota"):
            parse_voting("voting:\nweights: 3 2 1\n")

    def test_load_voting(self):
        with tempfile.NamedTemporaryFile(mode='w', suffix='.vote', delete=False) as f:
            f.write("voting:\nquota: 4\nweights: 3 2 1\n")
            path = f.name
        try:
            v, _ = load_voting(path)
            assert banzhaf(v).raw == (3, 1, 1)
        finally:
            os.unlink(path)

    def test_load_voting_rejects_invalid_utf8(self):
        with tempfile.NamedTemporaryFile(mode='wb', suffix='.vote', delete=False) as f:
            f.write(b"voting:\nquota: 4\nweights: 3 \xff 1\n")
            path = f.name
        try:
            with pytest.raises(GameParseError, match="cannot read voting file"):
                load_voting(path)
        finally:
            os.unlink(path)
