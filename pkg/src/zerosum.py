"""零和博弈求解模块 - 鞍点检测、2x2 闭式混合解、最大最小安全水平."""

import logging
from typing import List, Tuple

import numpy as np

from .game_core import (
    BimatrixGame, GameError, Player, Solution, ZeroSum2x2, is_zero_sum,
)
from .utils import TOLERANCE, approx_equal

logger = logging.getLogger(__name__)


class NotZeroSumError(GameError):
    """输入不是零和博弈."""


class SaddlePointExistsError(GameError):
    """存在纯鞍点，不应使用混合公式."""

    def __init__(self, value: float):
        self.value = value
        super().__init__(f"game has a pure saddle point with value {value:g}; use saddle_points")


class DegenerateGameError(GameError):
    """闭式解分母为 0."""


class UnsupportedShapeError(GameError):
    """超出 2x2 的混合求解不受支持."""


def _require_zero_sum(g: BimatrixGame, tol: float) -> None:
    if not is_zero_sum(g, tol):
        raise NotZeroSumError("game is not zero-sum (row_payoffs + col_payoffs != 0)")


def saddle_points(g: BimatrixGame, tol: float = TOLERANCE) -> List[Tuple[int, int]]:
    """所有鞍点：既是所在行最小值又是所在列最大值的格子（行玩家收益）.

    Raises:
        NotZeroSumError: 非零和输入
    """
    _require_zero_sum(g, tol)
    A = g.A
    row_min = A.min(axis=1, keepdims=True)
    col_max = A.max(axis=0, keepdims=True)
    mask = (A <= row_min + tol) & (A >= col_max - tol)
    cells = [(int(r), int(c)) for r, c in zip(*np.nonzero(mask))]
    logger.debug(f"鞍点: {cells}")
    return cells


def maximin_security(g: BimatrixGame, player: Player) -> Tuple[int, float]:
    """玩家的最大最小纯策略及其安全水平（按自身收益，平局取最小下标）.

    Args:
        g: 任意双矩阵博弈
        player: 'row' 或 'col'

    Returns:
        (策略下标, 最坏情况收益)
    """
    if player == "row":
        worst = g.A.min(axis=1)
    elif player == "col":
        worst = g.B.min(axis=0)
    else:
        raise GameError(f"player must be 'row' or 'col', got {player!r}")
    index = int(np.argmax(worst))
    return index, float(worst[index])


def minimax_outcome(g: BimatrixGame, tol: float = TOLERANCE) -> Tuple[int, int, Tuple[float, float], bool]:
    """双方都取最大最小策略时到达的格子.

    Returns:
        (行, 列, 该格收益对, 该格收益是否同时等于两位玩家的安全水平)
    """
    row, row_security = maximin_security(g, "row")
    col, col_security = maximin_security(g, "col")
    payoffs = g.payoff(row, col)
    consistent = approx_equal(payoffs[0], row_security, tol) and approx_equal(payoffs[1], col_security, tol)
    return row, col, payoffs, consistent


def solve_2x2_mixed(z: ZeroSum2x2, tol: float = TOLERANCE) -> Solution:
    """2x2 零和博弈的闭式混合解.

    x = (d-c)/D, y = (d-b)/D, u = (ad-bc)/D，其中 D = a-b-c+d。

    Raises:
        SaddlePointExistsError: 存在纯鞍点
        DegenerateGameError: D 为 0
    """
    cells = saddle_points(z.to_game(), tol)
    if cells:
        r, c = cells[0]
        raise SaddlePointExistsError(z.to_game().row_payoffs[r][c])

    a, b, c, d = z.a, z.b, z.c, z.d
    denominator = a - b - c + d
    if abs(denominator) <= tol:
        raise DegenerateGameError("degenerate game: a-b-c+d = 0; eliminate dominated strategies first")

    x = (d - c) / denominator
    y = (d - b) / denominator
    u = (a * d - b * c) / denominator
    x = min(max(x, 0.0), 1.0)
    y = min(max(y, 0.0), 1.0)
    logger.debug(f"2x2 混合解: x={x}, y={y}, u={u}")
    return Solution("mixed", (x, 1.0 - x), (y, 1.0 - y), u, -u, x=x, y=y)


def solve_zero_sum(g: BimatrixGame, tol: float = TOLERANCE) -> Solution:
    """零和博弈求解：有鞍点返回字典序最小的纯解，否则 2x2 混合解.

    Raises:
        NotZeroSumError: 非零和输入
        UnsupportedShapeError: 无鞍点且大于 2x2
    """
    cells = saddle_points(g, tol)
    if cells:
        r, c = min(cells)
        value = g.row_payoffs[r][c]
        return Solution("pure", r, c, value, -value)

    if g.shape != (2, 2):
        raise UnsupportedShapeError(
            f"no saddle point and shape {g.rows}x{g.cols} exceeds 2x2; general LP solving is not supported")
    return solve_2x2_mixed(ZeroSum2x2.from_game(g), tol)
