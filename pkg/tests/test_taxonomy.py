"""对称 2x2 博弈分类测试."""

import math

import pytest

from src.game_core import BimatrixGame, GameError
from src.nash import pure_nash
from src.taxonomy import (
    CANONICAL_NAMES, GameClass, NotClassifiableError, SymmetricOrdering, all_orderings,
    canonical, classify, classify_game, ordering_string,
)


class TestClassify:
    """序关系分类测试."""

    @pytest.mark.parametrize("values, expected", [
        ((4, 2, 3, 1), GameClass.LEADER),
        ((3, 2, 4, 1), GameClass.BATTLE_OF_SEXES),
        ((4, 3, 2, 1), GameClass.CHICKEN),
        ((4, 3, 1, 2), GameClass.PRISONERS_DILEMMA),
    ])
    def test_named_orderings(self, values, expected):
        T, R, S, P = values
        assert classify(SymmetricOrdering(T, R, S, P)).game_class == expected

    def test_ties_are_degenerate(self):
        result = classify(SymmetricOrdering(3, 3, 2, 1))
        assert result.game_class == GameClass.DEGENERATE
        assert result.ordering == "T=R>S>P"

    def test_ordering_string(self):
        assert ordering_string(SymmetricOrdering(4, 3, 2, 1)) == "T>R>S>P"
        assert ordering_string(SymmetricOrdering(1, 1, 1, 1)) == "T=R=S=P"

    def test_str(self):
        assert str(classify_game(canonical("Chicken"))) == "Chicken (T>R>S>P)"

    def test_all_24_orderings(self):
        orderings = all_orderings()
        assert len(orderings) == 24
        named = [o for o in orderings if classify(o).game_class != GameClass.TRIVIAL_PURE]
        assert {classify(o).game_class for o in named} == {
            GameClass.LEADER, GameClass.BATTLE_OF_SEXES, GameClass.CHICKEN, GameClass.PRISONERS_DILEMMA}
        assert len(named) == 4
        for o in orderings:
            assert len(pure_nash(o.to_game())) >= 1

    def test_to_game_follows_template(self):
        g = SymmetricOrdering(T=4, R=3, S=2, P=1).to_game()
        assert g.row_payoffs == ((3.0, 2.0), (4.0, 1.0))

    @pytest.mark.parametrize("transform", [
        lambda v: 2 * v + 7,
        lambda v: v ** 3,
        lambda v: math.exp(v),
        lambda v: math.log(v + 10),
    ])
    def test_invariant_under_increasing_transform(self, transform):
        for o in all_orderings():
            mapped = SymmetricOrdering(*(transform(v) for v in (o.T, o.R, o.S, o.P)))
            assert classify(mapped) == classify(o)
        assert g.col_payoffs == ((3.0, 4.0), (2.0, 1.0))


class TestClassifyGame:
    """从博弈矩阵分类测试."""

    @pytest.mark.parametrize("name, expected, relabelled", [
        ("Leader", GameClass.LEADER, False),
        ("BattleOfSexes", GameClass.BATTLE_OF_SEXES, True),
        ("Chicken", GameClass.CHICKEN, False),
        ("PrisonersDilemma", GameClass.PRISONERS_DILEMMA, False),
    ])
    def test_canonical_games(self, name, expected, relabelled):
        result = classify_game(canonical(name))
        assert result.game_class == expected
        assert result.relabelled == relabelled

    def test_literal_battle_table_needs_relabel(self):
        # 字面序 T>S>P>R，互换 C/D 后为 S>T>R>P
        g = BimatrixGame([[1, 3], [4, 2]], [[1, 4], [3, 2]])
        assert classify(SymmetricOrdering(T=4, R=1, S=3, P=2)).ordering == "T>S>P>R"
        result = classify_game(g)
        assert result.game_class == GameClass.BATTLE_OF_SEXES
        assert result.ordering == "S>T>R>P"
        assert result.relabelled

    def test_trivial_game_stays_trivial(self):
        result = classify_game(SymmetricOrdering(T=1, R=4, S=2, P=3).to_game())
        assert result.game_class == GameClass.TRIVIAL_PURE

    def test_relabel_never_maps_named_to_named(self):
        for o in all_orderings():
            literal = classify(o)
            swapped = classify(SymmetricOrdering(T=o.S, R=o.P, S=o.T, P=o.R))
            named = set(GameClass) - {GameClass.TRIVIAL_PURE, GameClass.DEGENERATE}
            assert not (literal.game_class in named and swapped.game_class in named)

    def test_asymmetric_rejected(self):
        with pytest.raises(NotClassifiableError, match="not symmetric"):
            classify_game(canonical("Hostage"))

    def test_non_2x2_rejected(self):
        with pytest.raises(NotClassifiableError):
            classify_game(BimatrixGame([[1]], [[1]]))


class TestCanonical:
    """经典博弈构造测试."""

    def test_all_names_build(self):
        for name in CANONICAL_NAMES:
            g = canonical(name)
            assert g.shape == (2, 2)
            assert g.row_labels == ("C", "D")

    def test_unknown_name(self):
        with pytest.raises(GameError, match="unknown canonical game"):
            canonical("Stag")

    def test_kamikaze_swaps_hostage_column_payoffs(self):
        """Kamikaze 即 Hostage 把列玩家收益 1 与 2 互换."""
        hostage, kamikaze = canonical("Hostage"), canonical("Kamikaze")
        swap = {1.0: 2.0, 2.0: 1.0}
        swapped = tuple(tuple(swap.get(v, v) for v in row) for row in hostage.col_payoffs)
        assert kamikaze.row_payoffs == hostage.row_payoffs
        assert kamikaze.col_payoffs == swapped
