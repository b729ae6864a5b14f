"""对称 2x2 博弈分类模块 - 按 T、R、S、P 的序关系分类，并提供经典博弈构造器.

模板（行玩家收益在前）::

              C        D
        C  (R, R)   (S, T)
        D  (T, S)   (P, P)
"""

import itertools
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List

from .game_core import BimatrixGame, GameError, is_symmetric
from .utils import TOLERANCE, approx_equal

logger = logging.getLogger(__name__)


class NotClassifiableError(GameError):
    """博弈不是对称 2x2，无法分类."""


class GameClass(str, Enum):
    LEADER = "Leader"
    BATTLE_OF_SEXES = "BattleOfSexes"
    CHICKEN = "Chicken"
    PRISONERS_DILEMMA = "PrisonersDilemma"
    TRIVIAL_PURE = "TrivialPure"
    DEGENERATE = "Degenerate"


# 四种"有趣"的严格序，其余严格序都可由纯策略直接求解
NAMED_ORDERINGS: Dict[str, GameClass] = {
    "T>S>R>P": GameClass.LEADER,
    "S>T>R>P": GameClass.BATTLE_OF_SEXES,
    "T>R>S>P": GameClass.CHICKEN,
    "T>R>P>S": GameClass.PRISONERS_DILEMMA,
}


@dataclass(frozen=True)
class SymmetricOrdering:
    """对称 2x2 模板中的四个收益."""

    T: float
    R: float
    S: float
    P: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.T, self.R, self.S, self.P)):
            raise GameError("T, R, S, P must be finite")

    def values(self) -> Dict[str, float]:
        return {"T": self.T, "R": self.R, "S": self.S, "P": self.P}

    def to_game(self) -> BimatrixGame:
        """按模板实例化为双矩阵博弈."""
        return BimatrixGame(
            ((self.R, self.S), (self.T, self.P)),
            ((self.R, self.T), (self.S, self.P)),
            ("C", "D"),
            ("C", "D"),
        )


@dataclass(frozen=True)
class Classification:
    """分类结果：类别与检测到的序关系字符串."""

    game_class: GameClass
    ordering: str
    relabelled: bool = False

    def __str__(self) -> str:
        return f"{self.game_class.value} ({self.ordering})"


def ordering_string(o: SymmetricOrdering, tol: float = TOLERANCE) -> str:
    """降序排列的序关系字符串，相等用 '='（如 'T>R=S>P'）."""
    items = sorted(o.values().items(), key=lambda kv: (-kv[1], "TRSP".index(kv[0])))
    parts = [items[0][0]]
    for (_, prev), (name, value) in zip(items, items[1:]):
        parts.append("=" if approx_equal(prev, value, tol) else ">")
        parts.append(name)
    return "".join(parts)


def classify(o: SymmetricOrdering, tol: float = TOLERANCE) -> Classification:
    """按严格序分类；任何相等都归为 Degenerate."""
    ordering = ordering_string(o, tol)
    if "=" in ordering:
        return Classification(GameClass.DEGENERATE, ordering)
    return Classification(NAMED_ORDERINGS.get(ordering, GameClass.TRIVIAL_PURE), ordering)


def _extract(g: BimatrixGame) -> SymmetricOrdering:
    (r, s), (t, p) = g.row_payoffs
    return SymmetricOrdering(T=t, R=r, S=s, P=p)


def classify_game(g: BimatrixGame, tol: float = TOLERANCE) -> Classification:
    """从对称 2x2 博弈提取 (T, R, S, P) 并分类.

    字面序不是四种命名序之一时，再尝试把双方的 C/D 互换后的序。
    命名序互换后不会变成另一个命名序，所以结果唯一。

    Raises:
        NotClassifiableError: 非 2x2 或非对称
    """
    if g.shape != (2, 2):
        raise NotClassifiableError(f"only 2x2 games can be classified, got {g.rows}x{g.cols}")
    if not is_symmetric(g, tol):
        raise NotClassifiableError("game is not symmetric (col_payoffs != row_payoffs transposed)")

    literal = classify(_extract(g), tol)
    if literal.game_class in (GameClass.TRIVIAL_PURE, GameClass.DEGENERATE):
        (r, s), (t, p) = g.row_payoffs
        swapped = classify(SymmetricOrdering(T=s, R=p, S=t, P=r), tol)
        if swapped.game_class in NAMED_ORDERINGS.values():
            logger.debug(f"C/D 互换后分类为 {swapped.game_class.value}")
            return Classification(swapped.game_class, swapped.ordering, relabelled=True)
    return literal


def all_orderings() -> List[SymmetricOrdering]:
    """用收益 {1,2,3,4} 实例化全部 24 种严格序."""
    orderings = []
    for perm in itertools.permutations((4, 3, 2, 1)):
        values = dict(zip("TRSP", perm))
        orderings.append(SymmetricOrdering(**{k: float(v) for k, v in values.items()}))
    return orderings


_CANONICAL = {
    "Leader": (((2, 3), (4, 1)), ((2, 4), (3, 1))),
    "BattleOfSexes": (((1, 3), (4, 2)), ((1, 4), (3, 2))),
    "Chicken": (((3, 2), (4, 1)), ((3, 4), (2, 1))),
    "PrisonersDilemma": (((3, 1), (4, 2)), ((3, 4), (1, 2))),
    "Hostage": (((2, 1), (4, 3)), ((3, 4), (2, 1))),
    "Kamikaze": (((2, 1), (4, 3)), ((3, 4), (1, 2))),
}

CANONICAL_NAMES = tuple(_CANONICAL)


def canonical(name: str) -> BimatrixGame:
    """经典博弈的收益矩阵（偏好整数 1-4），策略标签为 C/D.

    Raises:
        GameError: 未知名称
    """
    try:
        row_payoffs, col_payoffs = _CANONICAL[name]
    except KeyError:
        raise GameError(f"unknown canonical game {name!r}; expected one of {', '.join(CANONICAL_NAMES)}") from None
    return BimatrixGame(row_payoffs, col_payoffs, ("C", "D"), ("C", "D"))
