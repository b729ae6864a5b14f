"""零和博弈求解测试."""

import numpy as np
import pytest

from src.game_core import BimatrixGame, ZeroSum2x2
from src.taxonomy import canonical
from src.zerosum import (
    NotZeroSumError, SaddlePointExistsError, UnsupportedShapeError,
    maximin_security, minimax_outcome, saddle_points, solve_2x2_mixed, solve_zero_sum,
)


@pytest.fixture
def saddle_game():
    return BimatrixGame.zero_sum([[0, -3], [4, 1]], ("C", "D"), ("C", "D"))


class TestSaddlePoints:
    """鞍点测试."""

    def test_dominant_defection_saddle(self, saddle_game):
        assert saddle_points(saddle_game) == [(1, 1)]
        solution = solve_zero_sum(saddle_game)
        assert solution.kind == "pure"
        assert saddle_game.cell_name(solution.row_strategy, solution.col_strategy) == "(D,D)"
        assert solution.row_value == 1
        assert solution.col_value == -1

    def test_constant_matrix_all_saddles(self):
        g = BimatrixGame.zero_sum([[2, 2], [2, 2]])
        assert len(saddle_points(g)) == 4
        solution = solve_zero_sum(g)
        assert (solution.row_strategy, solution.col_strategy) == (0, 0)
        assert solution.row_value == 2

    def test_one_by_one(self):
        g = BimatrixGame.zero_sum([[5]])
        assert saddle_points(g) == [(0, 0)]

    def test_rejects_non_zero_sum(self):
        with pytest.raises(NotZeroSumError):
            saddle_points(canonical("Chicken"))

    def test_larger_game_with_saddle(self):
        g = BimatrixGame.zero_sum([[3, 1, 4], [2, 0, 1], [5, 2, 6]])
        assert solve_zero_sum(g).row_value == 2

    def test_larger_game_without_saddle_unsupported(self):
        g = BimatrixGame.zero_sum([[0, 1, -1], [-1, 0, 1], [1, -1, 0]])
        with pytest.raises(UnsupportedShapeError):
            solve_zero_sum(g)


class TestMixed2x2:
    """2x2 闭式混合解测试."""

    def test_matching_pennies(self):
        s = solve_2x2_mixed(ZeroSum2x2(1, -1, -1, 1))
        assert s.x == pytest.approx(0.5)
        assert s.y == pytest.approx(0.5)
        assert s.row_value == pytest.approx(0.0)

    def test_known_solution(self):
        s = solve_2x2_mixed(ZeroSum2x2(3, -1, -2, 1))
        assert s.x == pytest.approx(3 / 7)
        assert s.y == pytest.approx(2 / 7)
        assert s.row_value == pytest.approx(1 / 7)
        assert s.col_value == pytest.approx(-1 / 7)

    def test_saddle_refused(self):
        with pytest.raises(SaddlePointExistsError) as exc:
            solve_2x2_mixed(ZeroSum2x2(0, -3, 4, 1))
        assert exc.value.value == 1

    def test_zero_denominator_reports_saddle(self):
        # a-b-c+d = 0 时两行只差常数，必有鞍点
        with pytest.raises(SaddlePointExistsError):
            solve_2x2_mixed(ZeroSum2x2(1, 2, 3, 4))

    def test_random_indifference(self):
        """随机无鞍点 2x2 零和博弈：对手两个纯策略下的期望收益都等于博弈值."""
        rng = np.random.default_rng(2024)
        checked = 0
        while checked < 1000:
            a, b, c, d = rng.uniform(-10, 10, size=4)
            g = BimatrixGame.zero_sum([[a, b], [c, d]])
            if saddle_points(g):
                continue
            s = solve_2x2_mixed(ZeroSum2x2(a, b, c, d))
            x, y, u = s.x, s.y, s.row_value
            assert x * a + (1 - x) * c == pytest.approx(u, abs=1e-9)
            assert x * b + (1 - x) * d == pytest.approx(u, abs=1e-9)
            assert y * a + (1 - y) * b == pytest.approx(u, abs=1e-9)
            assert y * c + (1 - y) * d == pytest.approx(u, abs=1e-9)
            assert s.row_value == -s.col_value
            checked += 1

    def test_closed_form_example(self):
        s = solve_2x2_mixed(ZeroSum2x2(4, 1, 2, 3))
        assert s.x == pytest.approx(0.25)
        assert s.y == pytest.approx(0.5)
        assert s.row_value == pytest.approx(2.5)

    def test_affine_covariance(self):
        """正仿射变换 alpha*p+beta 不改变 x、y，博弈值变为 alpha*u+beta."""
        rng = np.random.default_rng(11)
        checked = 0
        while checked < 200:
            a, b, c, d = rng.uniform(-10, 10, size=4)
            if saddle_points(BimatrixGame.zero_sum([[a, b], [c, d]])):
                continue
            alpha = rng.uniform(0.1, 5.0)
            beta = rng.uniform(-10, 10)
            s = solve_2x2_mixed(ZeroSum2x2(a, b, c, d))
            t = solve_2x2_mixed(ZeroSum2x2(*(alpha * v + beta for v in (a, b, c, d))))
            assert t.x == pytest.approx(s.x, abs=1e-9)
            assert t.y == pytest.approx(s.y, abs=1e-9)
            assert t.row_value == pytest.approx(alpha * s.row_value + beta, abs=1e-8)
            checked += 1

    def test_value_between_security_levels(self):
        """混合博弈值介于行玩家安全水平与列玩家安全水平的相反数之间."""
        rng = np.random.default_rng(12)
        checked = 0
        while checked < 200:
            a, b, c, d = rng.uniform(-10, 10, size=4)
            g = BimatrixGame.zero_sum([[a, b], [c, d]])
            if saddle_points(g):
                continue
            u = solve_2x2_mixed(ZeroSum2x2(a, b, c, d)).row_value
            _, row_security = maximin_security(g, "row")
            _, col_security = maximin_security(g, "col")
            assert row_security - 1e-9 <= u <= -col_security + 1e-9
            checked += 1


class TestSecurity:
    """最大最小安全水平测试."""

    @pytest.mark.parametrize("name, expected", [
        ("Leader", (2.0, 2.0)),
        ("BattleOfSexes", (2.0, 2.0)),
        ("Chicken", (3.0, 3.0)),
        ("PrisonersDilemma", (2.0, 2.0)),
    ])
    def test_minimax_cells(self, name, expected):
        _, _, payoffs, _ = minimax_outcome(canonical(name))
        assert payoffs == expected

    def test_chicken_security_levels(self):
        g = canonical("Chicken")
        assert maximin_security(g, "row") == (0, 2.0)
        assert maximin_security(g, "col") == (0, 2.0)

    def test_prisoners_dilemma_consistent(self):
        row, col, payoffs, consistent = minimax_outcome(canonical("PrisonersDilemma"))
        assert (row, col) == (1, 1)
        assert consistent

    def test_hostage_not_consistent(self):
        g = canonical("Hostage")
        assert maximin_security(g, "row") == (1, 3.0)
        assert maximin_security(g, "col") == (0, 2.0)
        row, col, payoffs, consistent = minimax_outcome(g)
        assert payoffs == (4.0, 2.0)
        assert not consistent

    def test_kamikaze_consistent(self):
        g = canonical("Kamikaze")
        assert maximin_security(g, "col") == (1, 2.0)
        row, col, payoffs, consistent = minimax_outcome(g)
        assert (row, col) == (1, 1)
        assert payoffs == (3.0, 2.0)
        assert consistent

    def test_ties_pick_lowest_index(self):
        g = BimatrixGame([[1, 5], [1, 7]], [[0, 0], [0, 0]])
        assert maximin_security(g, "row") == (0, 1.0)
