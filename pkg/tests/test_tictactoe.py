"""井字棋完全枚举测试."""

import pytest

from src.search import best_first_search
from src.tictactoe import (
    EMPTY, enumerate_tictactoe, is_terminal, legal_moves, minimax_value, optimal_move, play,
    policy_never_loses, reachable_states, tictactoe_puzzle, to_move, winner,
)


def board(text):
    """'XO X  O  ' 形式的九格字符串."""
    assert len(text) == 9
    return tuple(text)


class TestRules:
    """规则测试."""

    def test_empty_board(self):
        assert to_move(EMPTY) == 'X'
        assert legal_moves(EMPTY) == list(range(9))
        assert winner(EMPTY) is None

    def test_play_alternates(self):
        b = play(play(EMPTY, 4), 0)
        assert b[4] == 'X'
        assert b[0] == 'O'
        assert to_move(b) == 'X'

    def test_occupied_cell(self):
        with pytest.raises(ValueError):
            play(play(EMPTY, 4), 4)

    def test_winner_stops_play(self):
        b = board("XXXOO    ")
        assert winner(b) == 'X'
        assert is_terminal(b)
        assert legal_moves(b) == []

    def test_full_board_draw(self):
        b = board("XOXXOOOXX")
        assert winner(b) is None
        assert is_terminal(b)


class TestEnumeration:
    """完全枚举测试."""

    def test_counts(self):
        counts = enumerate_tictactoe()
        assert counts.naive_fill_count == 362880
        assert counts.encoding_bound == 19683
        assert counts.reachable_states == 5478
        assert counts.game_value == "draw"

    def test_parallel_enumeration_matches(self):
        assert reachable_states(threads=4) == reachable_states(threads=1)

    def test_to_dict(self):
        data = enumerate_tictactoe().to_dict()
        assert data['reachable_states'] == 5478


class TestOptimalPlay:
    """最优策略测试."""

    def test_empty_board_is_draw(self):
        assert minimax_value(EMPTY) == 0

    def test_takes_immediate_win(self):
        b = board("XX OO    ")
        assert optimal_move(b) == 2

    def test_blocks_opponent(self):
        b = board("OO  X   X")
        assert to_move(b) == 'X'
        assert optimal_move(b) == 2

    def test_no_move_on_finished_board(self):
        with pytest.raises(ValueError):
            optimal_move(board("XXXOO    "))

    @pytest.mark.parametrize("side", ['X', 'O'])
    def test_never_loses(self, side):
        assert policy_never_loses(side)


class TestPuzzle:
    """固定应手下的求胜搜索测试."""

    def test_finds_win(self):
        result = best_first_search(tictactoe_puzzle())
        assert result.found
        b = EMPTY
        for cell in result.path:
            b = play(b, cell)
            if not is_terminal(b):
                b = play(b, b.index(' '))
        assert winner(b) == 'X'
