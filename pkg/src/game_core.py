"""标准型（双矩阵）博弈模块 - 表示、解析、对称/零和判定与劣势策略剔除."""

import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import List, Literal, Optional, Sequence, Tuple, Union

import numpy as np

from .utils import TOLERANCE, approx_equal

logger = logging.getLogger(__name__)

Player = Literal["row", "col"]
Mode = Literal["strict", "weak"]
Matrix = Tuple[Tuple[float, ...], ...]


class GameError(ValueError):
    """所有领域错误的基类."""


class GameParseError(GameError):
    """输入文件格式错误，带行号."""

    def __init__(self, message: str, line_number: Optional[int] = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


def _as_matrix(values: Sequence[Sequence[float]]) -> Matrix:
    return tuple(tuple(float(v) for v in row) for row in values)


@dataclass(frozen=True)
class BimatrixGame:
    """双人标准型博弈.

    row_payoffs[r][c] 是行玩家（玩家1）在结果 (r, c) 的收益，
    col_payoffs[r][c] 是列玩家（玩家2）的收益。
    """

    row_payoffs: Matrix
    col_payoffs: Matrix
    row_labels: Optional[Tuple[str, ...]] = None
    col_labels: Optional[Tuple[str, ...]] = None

    def __post_init__(self):
        object.__setattr__(self, 'row_payoffs', _as_matrix(self.row_payoffs))
        object.__setattr__(self, 'col_payoffs', _as_matrix(self.col_payoffs))
        if self.row_labels is not None:
            object.__setattr__(self, 'row_labels', tuple(self.row_labels))
        if self.col_labels is not None:
            object.__setattr__(self, 'col_labels', tuple(self.col_labels))
        self._validate()

    def _validate(self) -> None:
        rows = len(self.row_payoffs)
        if rows < 1:
            raise GameError("game needs at least one row strategy")
        cols = len(self.row_payoffs[0])
        if cols < 1:
            raise GameError("game needs at least one column strategy")
        for name, matrix in (("row_payoffs", self.row_payoffs), ("col_payoffs", self.col_payoffs)):
            if len(matrix) != rows or any(len(r) != cols for r in matrix):
                raise GameError(f"{name} must be a {rows}x{cols} matrix")
            if not all(math.isfinite(v) for r in matrix for v in r):
                raise GameError(f"{name} contains a non-finite payoff")
        if self.row_labels is not None and len(self.row_labels) != rows:
            raise GameError(f"expected {rows} row labels, got {len(self.row_labels)}")
        if self.col_labels is not None and len(self.col_labels) != cols:
            raise GameError(f"expected {cols} column labels, got {len(self.col_labels)}")

    @property
    def rows(self) -> int:
        return len(self.row_payoffs)

    @property
    def cols(self) -> int:
        return len(self.row_payoffs[0])

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    @property
    def A(self) -> np.ndarray:
        """行玩家收益矩阵."""
        return np.array(self.row_payoffs, dtype=np.float64)

    @property
    def B(self) -> np.ndarray:
        """列玩家收益矩阵."""
        return np.array(self.col_payoffs, dtype=np.float64)

    @property
    def row_names(self) -> Tuple[str, ...]:
        return self.row_labels or tuple(str(i) for i in range(self.rows))

    @property
    def col_names(self) -> Tuple[str, ...]:
        return self.col_labels or tuple(str(j) for j in range(self.cols))

    def payoff(self, row: int, col: int) -> Tuple[float, float]:
        """返回结果 (row, col) 的收益对."""
        return self.row_payoffs[row][col], self.col_payoffs[row][col]

    def cell_name(self, row: int, col: int) -> str:
        return f"({self.row_names[row]},{self.col_names[col]})"

    @classmethod
    def from_arrays(cls, row_payoffs, col_payoffs, row_labels=None, col_labels=None) -> "BimatrixGame":
        """从 numpy 数组或嵌套列表构造."""
        return cls(_as_matrix(np.asarray(row_payoffs, dtype=np.float64).tolist()),
                   _as_matrix(np.asarray(col_payoffs, dtype=np.float64).tolist()),
                   row_labels, col_labels)

    @classmethod
    def zero_sum(cls, row_payoffs, row_labels=None, col_labels=None) -> "BimatrixGame":
        """构造零和博弈，列玩家收益为行玩家收益的相反数."""
        A = np.asarray(row_payoffs, dtype=np.float64)
        return cls.from_arrays(A, -A + 0.0, row_labels, col_labels)


@dataclass(frozen=True)
class ZeroSum2x2:
    """2x2 零和博弈，收益按行玩家（max 玩家）记为 [[a, b], [c, d]]."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.a, self.b, self.c, self.d)):
            raise GameError("zero-sum 2x2 payoffs must be finite")

    @classmethod
    def from_game(cls, g: BimatrixGame) -> "ZeroSum2x2":
        if g.shape != (2, 2):
            raise GameError(f"expected a 2x2 game, got {g.rows}x{g.cols}")
        (a, b), (c, d) = g.row_payoffs
        return cls(a, b, c, d)

    def to_game(self) -> BimatrixGame:
        return BimatrixGame.zero_sum([[self.a, self.b], [self.c, self.d]])


Strategy = Union[int, Tuple[float, ...]]


@dataclass(frozen=True)
class Solution:
    """已求解的博弈：策略组合与各玩家期望收益.

    纯策略时 row_strategy/col_strategy 是下标；混合策略时是概率向量，
    2x2 混合解额外给出 x, y（各自第一个策略的概率）。
    """

    kind: Literal["pure", "mixed"]
    row_strategy: Strategy
    col_strategy: Strategy
    row_value: float
    col_value: float
    x: Optional[float] = None
    y: Optional[float] = None

    def __post_init__(self):
        if self.kind == "mixed":
            for name, vec in (("row", self.row_strategy), ("col", self.col_strategy)):
                probs = tuple(float(p) for p in vec)
                if any(p < -TOLERANCE for p in probs) or not approx_equal(sum(probs), 1.0):
                    raise GameError(f"{name} mixed strategy is not a probability vector: {probs}")
                object.__setattr__(self, f"{name}_strategy", probs)
        elif self.kind == "pure":
            if not isinstance(self.row_strategy, int) or not isinstance(self.col_strategy, int):
                raise GameError("pure solution needs integer strategy indices")
            if self.row_strategy < 0 or self.col_strategy < 0:
                raise GameError("pure strategy index out of bounds")
        else:
            raise GameError(f"unknown solution kind: {self.kind}")

    def to_dict(self) -> dict:
        return {
            'kind': self.kind,
            'row_strategy': self.row_strategy if self.kind == "pure" else list(self.row_strategy),
            'col_strategy': self.col_strategy if self.kind == "pure" else list(self.col_strategy),
            'row_value': self.row_value,
            'col_value': self.col_value,
            'x': self.x,
            'y': self.y,
        }


def is_zero_sum(g: BimatrixGame, tol: float = TOLERANCE) -> bool:
    """两矩阵逐元素相加为 0（容差内）."""
    return bool(np.all(np.abs(g.A + g.B) <= tol))


def is_symmetric(g: BimatrixGame, tol: float = TOLERANCE) -> bool:
    """列玩家收益矩阵等于行玩家收益矩阵的转置；非方阵直接返回 False."""
    if g.rows != g.cols:
        return False
    return bool(np.all(np.abs(g.B - g.A.T) <= tol))


def swap_players(g: BimatrixGame) -> BimatrixGame:
    """交换两位玩家的角色（两个矩阵转置并互换）."""
    return BimatrixGame(
        _as_matrix(g.B.T.tolist()),
        _as_matrix(g.A.T.tolist()),
        g.col_labels,
        g.row_labels,
    )


def subgame(g: BimatrixGame, rows: Sequence[int], cols: Sequence[int]) -> BimatrixGame:
    """保留指定行列的子博弈，标签沿用原博弈的名字."""
    rows, cols = list(rows), list(cols)
    return BimatrixGame(
        _as_matrix(g.A[np.ix_(rows, cols)].tolist()),
        _as_matrix(g.B[np.ix_(rows, cols)].tolist()),
        tuple(g.row_names[r] for r in rows),
        tuple(g.col_names[c] for c in cols),
    )


def expected_payoffs(g: BimatrixGame, row_mix: Sequence[float],
                     col_mix: Sequence[float]) -> Tuple[float, float]:
    """混合策略组合下两位玩家的期望收益."""
    p = np.asarray(row_mix, dtype=np.float64)
    q = np.asarray(col_mix, dtype=np.float64)
    return float(p @ g.A @ q), float(p @ g.B @ q)


def _own_vectors(g: BimatrixGame, player: Player) -> np.ndarray:
    """每行是该玩家一个策略在对手各策略下的自身收益."""
    if player == "row":
        return g.A
    if player == "col":
        return g.B.T
    raise GameError(f"player must be 'row' or 'col', got {player!r}")


def _dominates(u: np.ndarray, v: np.ndarray, mode: Mode, tol: float) -> bool:
    """u 是否支配 v."""
    if mode == "strict":
        return bool(np.all(u > v + tol))
    if mode == "weak":
        return bool(np.all(u >= v - tol) and np.any(u > v + tol))
    raise GameError(f"mode must be 'strict' or 'weak', got {mode!r}")


def dominated_strategies(g: BimatrixGame, player: Player, mode: Mode = "strict",
                         tol: float = TOLERANCE) -> List[int]:
    """返回被其他纯策略支配的策略下标（升序）.

    Args:
        g: 博弈
        player: 'row' 或 'col'
        mode: 'strict' 严格支配；'weak' 弱支配（至少一个分量严格更好）
        tol: 比较容差

    Returns:
        被支配策略的下标列表
    """
    vectors = _own_vectors(g, player)
    dominated = []
    for i, v in enumerate(vectors):
        if any(_dominates(u, v, mode, tol) for j, u in enumerate(vectors) if j != i):
            dominated.append(i)
    return dominated


@dataclass(frozen=True)
class EliminationStep:
    """一次剔除记录：玩家、原博弈中的策略下标、轮次（从 1 开始）."""

    player: Player
    index: int
    round: int


def eliminate_dominated(g: BimatrixGame, mode: Mode = "strict",
                        tol: float = TOLERANCE) -> Tuple[BimatrixGame, List[EliminationStep]]:
    """迭代剔除劣势策略直到不动点.

    每轮先处理行玩家再处理列玩家。严格模式每轮剔除该玩家的全部严格劣势策略
    （结果与剔除顺序无关）；弱模式每轮每位玩家只剔除下标最小的一个。

    弱模式下行玩家剔除后先轮到列玩家。例如 A = B = [[0,0],[1,0],[1,1]]：
    第 1 轮行剔除 0、列剔除 1，剩 {1,2} x {0}；若每次剔除后都从行玩家重来，
    会连续剔除行 0 和行 1，剩 {2} x {0,1}。

    Args:
        g: 博弈
        mode: 'strict' 或 'weak'
        tol: 比较容差

    Returns:
        (剩余子博弈, 剔除轨迹)
    """
    rows = list(range(g.rows))
    cols = list(range(g.cols))
    trace: List[EliminationStep] = []
    round_no = 0

    while True:
        round_no += 1
        changed = False
        for player in ("row", "col"):
            current = subgame(g, rows, cols)
            survivors = rows if player == "row" else cols
            if len(survivors) <= 1:
                continue
            dominated = dominated_strategies(current, player, mode, tol)
            if not dominated:
                continue
            if mode == "weak":
                dominated = dominated[:1]
            removed = [survivors[i] for i in dominated]
            for index in removed:
                survivors.remove(index)
                trace.append(EliminationStep(player, index, round_no))
                logger.debug(f"第 {round_no} 轮剔除 {player} 策略 {index} ({mode})")
            changed = True
        if not changed:
            break

    logger.info(f"劣势策略剔除完成: 剩余 {len(rows)}x{len(cols)}，共剔除 {len(trace)} 个")
    return subgame(g, rows, cols), trace


# ---------------------------------------------------------------------------
# 文件格式
# ---------------------------------------------------------------------------

def _content_lines(text: str) -> List[Tuple[int, str]]:
    """去掉注释行和空行，保留 1 开始的行号."""
    lines = []
    for number, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith('#'):
            continue
        lines.append((number, stripped))
    return lines


def _key_value(line: Tuple[int, str], key: str) -> str:
    number, content = line
    name, sep, value = content.partition(':')
    if not sep or name.strip() != key:
        raise GameParseError(f"expected '{key}:' section", number)
    return value.strip()


def _parse_floats(line: Tuple[int, str], expected: int) -> List[float]:
    number, content = line
    tokens = content.split()
    if len(tokens) != expected:
        raise GameParseError(f"expected {expected} values, got {len(tokens)}", number)
    values = []
    for token in tokens:
        try:
            value = float(token)
        except ValueError:
            raise GameParseError(f"non-numeric token {token!r}", number) from None
        if not math.isfinite(value):
            raise GameParseError(f"non-finite payoff {token!r}", number)
        values.append(value)
    return values


def _parse_matrix(lines: List[Tuple[int, str]], pos: int, key: str,
                  rows: int, cols: int) -> Tuple[List[List[float]], int]:
    if pos >= len(lines):
        last = lines[-1][0] if lines else 0
        raise GameParseError(f"missing '{key}:' section", last + 1)
    header = _key_value(lines[pos], key)
    if header:
        raise GameParseError(f"'{key}:' takes no inline values", lines[pos][0])
    pos += 1
    matrix = []
    for _ in range(rows):
        if pos >= len(lines) or ':' in lines[pos][1]:
            number = lines[pos][0] if pos < len(lines) else (lines[-1][0] + 1)
            raise GameParseError(f"'{key}' needs {rows} rows, got {len(matrix)}", number)
        matrix.append(_parse_floats(lines[pos], cols))
        pos += 1
    return matrix, pos


def parse_game(text: str) -> BimatrixGame:
    """解析博弈文件文本.

    格式::

        game: normalform
        zerosum: true|false
        shape: R C
        row_payoffs:
        <R 行，每行 C 个数>
        col_payoffs:          # 仅 zerosum: false
        <R 行>
        row_labels: A B       # 可选
        col_labels: A B       # 可选

    Raises:
        GameParseError: 格式错误，消息包含行号
    """
    lines = _content_lines(text)
    if len(lines) < 3:
        last = lines[-1][0] if lines else 0
        raise GameParseError("missing header sections (game, zerosum, shape)", last + 1)

    if _key_value(lines[0], 'game') != 'normalform':
        raise GameParseError("expected 'game: normalform'", lines[0][0])

    flag = _key_value(lines[1], 'zerosum').lower()
    if flag not in ('true', 'false'):
        raise GameParseError("zerosum must be 'true' or 'false'", lines[1][0])
    zerosum = flag == 'true'

    shape = _key_value(lines[2], 'shape').split()
    try:
        rows, cols = (int(s) for s in shape)
    except ValueError:
        raise GameParseError("shape must be two integers 'R C'", lines[2][0]) from None
    if rows < 1 or cols < 1:
        raise GameParseError("shape dimensions must be >= 1", lines[2][0])

    row_payoffs, pos = _parse_matrix(lines, 3, 'row_payoffs', rows, cols)
    if zerosum:
        col_payoffs = [[-v + 0.0 for v in row] for row in row_payoffs]
    else:
        col_payoffs, pos = _parse_matrix(lines, pos, 'col_payoffs', rows, cols)

    labels = {'row_labels': None, 'col_labels': None}
    expected = {'row_labels': rows, 'col_labels': cols}
    while pos < len(lines):
        number, content = lines[pos]
        key = content.partition(':')[0].strip()
        if key not in labels:
            raise GameParseError(f"unexpected content {content!r}", number)
        names = _key_value(lines[pos], key).split()
        if len(names) != expected[key]:
            raise GameParseError(f"{key} needs {expected[key]} names, got {len(names)}", number)
        labels[key] = tuple(names)
        pos += 1

    game = BimatrixGame(row_payoffs, col_payoffs, labels['row_labels'], labels['col_labels'])
    logger.debug(f"解析博弈: {rows}x{cols}, zerosum={zerosum}")
    return game


def _format_payoff(value: float) -> str:
    if float(value).is_integer():
        return str(int(value))
    return repr(float(value))


def serialize_game(g: BimatrixGame) -> str:
    """把博弈写成文件格式文本（parse_game 的逆操作）."""
    zerosum = is_zero_sum(g, tol=0.0)
    out = [
        "game: normalform",
        f"zerosum: {'true' if zerosum else 'false'}",
        f"shape: {g.rows} {g.cols}",
        "row_payoffs:",
    ]
    out.extend(" ".join(_format_payoff(v) for v in row) for row in g.row_payoffs)
    if not zerosum:
        out.append("col_payoffs:")
        out.extend(" ".join(_format_payoff(v) for v in row) for row in g.col_payoffs)
    if g.row_labels is not None:
        out.append("row_labels: " + " ".join(g.row_labels))
    if g.col_labels is not None:
        out.append("col_labels: " + " ".join(g.col_labels))
    return "\n".join(out) + "\n"


def load_game(path: Union[str, Path]) -> BimatrixGame:
    """从文件读取博弈."""
    try:
        text = Path(path).read_text(encoding='utf-8')
    except (OSError, UnicodeDecodeError) as e:
        raise GameParseError(f"cannot read game file {path}: {e}") from e
    return parse_game(text)
