"""井字棋完全枚举模块 - 状态计数、极小极大值与最优策略.

棋盘为长度 9 的元组，元素为 'X'、'O' 或 ' '，X 先手。不做对称约简。
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional, Set, Tuple

from .search import PuzzleSpace
from .utils import parallel_map

logger = logging.getLogger(__name__)

Board = Tuple[str, ...]

EMPTY: Board = (' ',) * 9

LINES = (
    (0, 1, 2), (3, 4, 5), (6, 7, 8),
    (0, 3, 6), (1, 4, 7), (2, 5, 8),
    (0, 4, 8), (2, 4, 6),
)


@dataclass(frozen=True)
class TicTacToeCounts:
    """枚举结果."""

    naive_fill_count: int
    encoding_bound: int
    reachable_states: int
    game_value: str

    def to_dict(self) -> dict:
        return {
            'naive_fill_count': self.naive_fill_count,
            'encoding_bound': self.encoding_bound,
            'reachable_states': self.reachable_states,
            'game_value': self.game_value,
        }


def winner(board: Board) -> Optional[str]:
    for a, b, c in LINES:
        if board[a] != ' ' and board[a] == board[b] == board[c]:
            return board[a]
    return None


def to_move(board: Board) -> str:
    return 'X' if board.count('X') == board.count('O') else 'O'


def is_terminal(board: Board) -> bool:
    return winner(board) is not None or ' ' not in board


def legal_moves(board: Board) -> List[int]:
    if winner(board) is not None:
        return []
    return [i for i, cell in enumerate(board) if cell == ' ']


def play(board: Board, cell: int) -> Board:
    if board[cell] != ' ':
        raise ValueError(f"cell {cell} is occupied")
    return board[:cell] + (to_move(board),) + board[cell + 1:]


def _reachable_from(board: Board) -> Set[Board]:
    seen = {board}
    stack = [board]
    while stack:
        current = stack.pop()
        for cell in legal_moves(current):
            child = play(current, cell)
            if child not in seen:
                seen.add(child)
                stack.append(child)
    return seen


def reachable_states(threads: int = 1) -> Set[Board]:
    """从空棋盘按规则可达的全部局面（出现胜者即停止），按首步并行后合并."""
    subtrees = parallel_map(_reachable_from, [play(EMPTY, cell) for cell in range(9)], threads)
    states = {EMPTY}
    for subtree in subtrees:
        states |= subtree
    return states


@lru_cache(maxsize=None)
def minimax_value(board: Board) -> int:
    """双方最优时的结果：+1 X 胜，0 平，-1 O 胜."""
    w = winner(board)
    if w is not None:
        return 1 if w == 'X' else -1
    if ' ' not in board:
        return 0
    values = [minimax_value(play(board, cell)) for cell in legal_moves(board)]
    return max(values) if to_move(board) == 'X' else min(values)


def optimal_move(board: Board) -> int:
    """当前行动方的最优落子（同值取最小格号）."""
    moves = legal_moves(board)
    if not moves:
        raise ValueError("no legal moves on a finished board")
    sign = 1 if to_move(board) == 'X' else -1
    return max(moves, key=lambda cell: (sign * minimax_value(play(board, cell)), -cell))


def policy_never_loses(side: str) -> bool:
    """最优策略执 side 方时，对手穷举所有走法也不会输."""
    opponent = 'O' if side == 'X' else 'X'

    def safe(board: Board) -> bool:
        if is_terminal(board):
            return winner(board) != opponent
        if to_move(board) == side:
            return safe(play(board, optimal_move(board)))
        return all(safe(play(board, cell)) for cell in legal_moves(board))

    return safe(EMPTY)


def enumerate_tictactoe(threads: int = 1) -> TicTacToeCounts:
    """朴素填充数 9!、三值编码上界 3^9、可达局面数与博弈值."""
    states = reachable_states(threads)
    value = minimax_value(EMPTY)
    outcome = {1: 'X wins', 0: 'draw', -1: 'O wins'}[value]
    logger.info(f"井字棋枚举: {len(states)} 个可达局面, 博弈值 {outcome}")
    return TicTacToeCounts(math.factorial(9), 3 ** 9, len(states), outcome)


def _first_empty_reply(board: Board) -> Board:
    if is_terminal(board):
        return board
    return play(board, board.index(' '))


def _moves_needed(board: Board) -> float:
    """X 完成一条线至少还需的落子数（无可用线时为 9）."""
    best = 9
    for line in LINES:
        cells = [board[i] for i in line]
        if 'O' not in cells:
            best = min(best, 3 - cells.count('X'))
    return float(best)


def tictactoe_puzzle() -> PuzzleSpace:
    """X 对固定应手（O 总下第一个空格）求胜的状态空间."""

    def successors(board: Board) -> List[Tuple[int, Board]]:
        if is_terminal(board):
            return []
        return [(cell, _first_empty_reply(play(board, cell))) for cell in legal_moves(board)]

    return PuzzleSpace(
        initial=EMPTY,
        successors=successors,
        is_goal=lambda board: winner(board) == 'X',
        heuristic=_moves_needed,
    )
