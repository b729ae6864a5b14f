"""纳什均衡模块 - 纯策略均衡枚举（最优反应标记）与 2x2 混合均衡."""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .game_core import BimatrixGame, GameError, Player, Solution
from .utils import TOLERANCE

logger = logging.getLogger(__name__)


def best_responses(g: BimatrixGame, player: Player, opponent_strategy: int,
                   tol: float = TOLERANCE) -> List[int]:
    """给定对手纯策略时该玩家的全部最优反应（平局都算）."""
    if player == "row":
        payoffs = g.A[:, opponent_strategy]
    elif player == "col":
        payoffs = g.B[opponent_strategy, :]
    else:
        raise GameError(f"player must be 'row' or 'col', got {player!r}")
    return [int(i) for i in np.nonzero(payoffs >= payoffs.max() - tol)[0]]


def is_nash(g: BimatrixGame, row: int, col: int, tol: float = TOLERANCE) -> bool:
    """单边偏离检验：任何玩家单方面换策略都不能严格获益."""
    a, b = g.payoff(row, col)
    if any(g.row_payoffs[r][col] > a + tol for r in range(g.rows)):
        return False
    if any(g.col_payoffs[row][c] > b + tol for c in range(g.cols)):
        return False
    return True


def pure_nash(g: BimatrixGame, tol: float = TOLERANCE) -> List[Tuple[int, int]]:
    """所有纯策略纳什均衡（按行列字典序）.

    行玩家收益是所在列的最大值，且列玩家收益是所在行的最大值。
    """
    A, B = g.A, g.B
    row_best = A >= A.max(axis=0, keepdims=True) - tol
    col_best = B >= B.max(axis=1, keepdims=True) - tol
    cells = [(int(r), int(c)) for r, c in zip(*np.nonzero(row_best & col_best))]
    logger.debug(f"纯策略均衡: {cells}")
    return cells


def mixed_nash_2x2(g: BimatrixGame, tol: float = TOLERANCE) -> Tuple[Optional[Solution], bool]:
    """2x2 博弈的内部混合均衡（无差异原则）.

    x 使列玩家在两个策略间无差异（由 col_payoffs 求得），
    y 使行玩家无差异（由 row_payoffs 求得），两者都需严格位于 (0, 1)。

    Returns:
        (混合解或 None, 是否因分母为 0 而退化)
    """
    if g.shape != (2, 2):
        raise GameError(f"mixed_nash_2x2 needs a 2x2 game, got {g.rows}x{g.cols}")

    (a00, a01), (a10, a11) = g.row_payoffs
    (b00, b01), (b10, b11) = g.col_payoffs
    x_den = b00 - b01 - b10 + b11
    y_den = a00 - a01 - a10 + a11
    if abs(x_den) <= tol or abs(y_den) <= tol:
        logger.debug("无差异方程组退化（分母为 0）")
        return None, True

    x = (b11 - b10) / x_den
    y = (a11 - a01) / y_den
    if not (tol < x < 1.0 - tol and tol < y < 1.0 - tol):
        return None, False

    row_mix = (x, 1.0 - x)
    col_mix = (y, 1.0 - y)
    p, q = np.array(row_mix), np.array(col_mix)
    row_value = float(p @ g.A @ q)
    col_value = float(p @ g.B @ q)
    return Solution("mixed", row_mix, col_mix, row_value, col_value, x=x, y=y), False


@dataclass(frozen=True)
class PureEquilibrium:
    """纯策略均衡格子及其收益对."""

    row: int
    col: int
    payoffs: Tuple[float, float]


@dataclass(frozen=True)
class EquilibriumReport:
    """均衡汇总：纯均衡、可选混合均衡与奇数性检查."""

    pure_equilibria: List[PureEquilibrium]
    mixed_equilibrium: Optional[Solution]
    total_count: int
    even_count_warning: bool
    degenerate: bool = False
    notes: List[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            'pure_equilibria': [
                {'row': e.row, 'col': e.col, 'payoffs': list(e.payoffs)}
                for e in self.pure_equilibria
            ],
            'mixed_equilibrium': self.mixed_equilibrium.to_dict() if self.mixed_equilibrium else None,
            'total_count': self.total_count,
            'even_count_warning': self.even_count_warning,
            'degenerate': self.degenerate,
            'notes': list(self.notes),
        }


def equilibrium_report(g: BimatrixGame, tol: float = TOLERANCE) -> EquilibriumReport:
    """汇总纯均衡与（2x2 时）混合均衡.

    非退化博弈的均衡个数为奇数；偶数个数只作为退化警告，不视为错误。
    """
    pure = [PureEquilibrium(r, c, g.payoff(r, c)) for r, c in pure_nash(g, tol)]
    notes = []
    mixed, degenerate = None, False
    if g.shape == (2, 2):
        mixed, degenerate = mixed_nash_2x2(g, tol)
        if degenerate:
            notes.append("mixed indifference system is degenerate")
    else:
        notes.append(f"mixed equilibria not computed for {g.rows}x{g.cols} games")

    total = len(pure) + (1 if mixed is not None else 0)
    even = total % 2 == 0
    if even:
        notes.append(f"even equilibrium count ({total}): game is degenerate")
        logger.warning(f"均衡个数为偶数 ({total})，博弈可能退化")
    return EquilibriumReport(pure, mixed, total, even, degenerate, notes)
