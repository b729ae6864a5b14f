"""加权多数博弈模块 - 获胜联盟、Banzhaf / Shapley-Shubik 权力指数、对数几率权重与陪审团定理.

权重和配额以 Fraction 精确保存，枚举前统一放大为整数，
因此所有计数都是精确整数，不受浮点舍入影响。
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, List, Literal, Optional, Sequence, Tuple, Union

import numpy as np

from .game_core import GameError, GameParseError
from .utils import TOLERANCE, parallel_map, to_fraction

logger = logging.getLogger(__name__)

BANZHAF_MAX_PLAYERS = 24
SHAPLEY_MAX_PLAYERS = 20
JURY_MAX_VOTERS = 20

# 直接枚举时每块的联盟数
_CHUNK_BITS = 16


class UnsupportedSizeError(GameError):
    """超出精确枚举的规模上限."""


class CompetencyDomainError(GameError):
    """能力概率不在 (0, 1) 内."""


@dataclass(frozen=True)
class WeightedVotingGame:
    """加权多数博弈：联盟权重和 >= quota 即获胜."""

    weights: Tuple[Fraction, ...]
    quota: Fraction

    def __post_init__(self):
        weights = tuple(to_fraction(w) for w in self.weights)
        quota = to_fraction(self.quota)
        if not weights:
            raise GameError("voting game needs at least one player")
        if any(w < 0 for w in weights):
            raise GameError("voting weights must be >= 0")
        if quota <= 0:
            raise GameError("quota must be > 0")
        object.__setattr__(self, 'weights', weights)
        object.__setattr__(self, 'quota', quota)
        if quota > sum(weights):
            logger.warning(f"配额 {quota} 大于权重总和 {sum(weights)}，没有获胜联盟")

    @property
    def n(self) -> int:
        return len(self.weights)

    @property
    def winnable(self) -> bool:
        return self.quota <= sum(self.weights)

    def integer_form(self) -> Tuple[List[int], int]:
        """按公分母放大为整数权重与整数配额."""
        scale = math.lcm(*(x.denominator for x in (*self.weights, self.quota)))
        weights = [int(w * scale) for w in self.weights]
        return weights, int(self.quota * scale)


@dataclass(frozen=True)
class PowerIndexResult:
    """权力指数结果.

    raw 为未归一化计数（Banzhaf 为摇摆次数，Shapley-Shubik 为关键位置次数），
    normalized 为精确份额。
    """

    raw: Tuple[int, ...]
    normalized: Tuple[Fraction, ...]
    method: Literal["banzhaf", "shapley"]
    exact: bool = True

    def as_floats(self) -> List[float]:
        return [float(x) for x in self.normalized]

    def to_dict(self) -> dict:
        return {
            'method': self.method,
            'exact': self.exact,
            'raw': list(self.raw),
            'normalized': [str(x) for x in self.normalized],
            'normalized_float': self.as_floats(),
        }


@dataclass(frozen=True)
class ColemanIndices:
    """Banzhaf-Coleman 系列指数."""

    power_to_act: Fraction
    absolute_banzhaf: Tuple[Fraction, ...]
    power_to_prevent: Tuple[Fraction, ...]
    power_to_initiate: Tuple[Fraction, ...]


@dataclass(frozen=True)
class CompetencyProfile:
    """投票者能力概率及对应的对数几率权重."""

    p: Tuple[float, ...]
    w: Tuple[float, ...]


def _check_size(v: WeightedVotingGame, limit: int, what: str) -> None:
    if v.n > limit:
        raise UnsupportedSizeError(f"{what} supports at most {limit} players for exact enumeration, got {v.n}")


def _array(values: Sequence[int]) -> np.ndarray:
    """整数数组；可能溢出 int64 时退回 Python 整数对象数组."""
    if sum(abs(x) for x in values) < 2 ** 62:
        return np.asarray(values, dtype=np.int64)
    return np.asarray(values, dtype=object)


def is_winning(v: WeightedVotingGame, coalition: Iterable[int]) -> bool:
    """联盟成员权重和是否达到配额.

    Raises:
        GameError: 下标越界
    """
    members = set(coalition)
    for i in members:
        if not 0 <= i < v.n:
            raise GameError(f"player index {i} out of range 0..{v.n - 1}")
    return sum((v.weights[i] for i in members), Fraction(0)) >= v.quota


def _subset_sums(weights: Sequence[int]) -> Tuple[np.ndarray, np.ndarray]:
    """所有子集的权重和与子集大小."""
    sums = _array([0])
    sizes = np.zeros(1, dtype=np.int64)
    for w in weights:
        sums = np.concatenate([sums, sums + w])
        sizes = np.concatenate([sizes, sizes + 1])
    return sums, sizes


def _swing_counts_by_size(weights: List[int], quota: int, player: int) -> np.ndarray:
    """player 的摇摆联盟（不含 player）按大小计数.

    折半枚举：其余玩家分两半，对一半的每个和在另一半的有序和中二分查找
    满足 quota - w_i <= a + b < quota 的 b 的个数。
    """
    n = len(weights)
    w_i = weights[player]
    others = weights[:player] + weights[player + 1:]
    half = len(others) // 2
    sums_a, sizes_a = _subset_sums(others[:half])
    sums_b, sizes_b = _subset_sums(others[half:])

    per_size = np.zeros(n, dtype=np.int64)
    for k in np.unique(sizes_b):
        block = np.sort(sums_b[sizes_b == k])
        upper = np.searchsorted(block, quota - sums_a, side='left')
        lower = np.searchsorted(block, quota - w_i - sums_a, side='left')
        counts = (upper - lower).astype(np.int64)
        np.add.at(per_size, sizes_a + int(k), counts)
    return per_size


def _banzhaf_subset(v: WeightedVotingGame) -> List[int]:
    weights, quota = v.integer_form()
    return [int(_swing_counts_by_size(weights, quota, i).sum()) for i in range(v.n)]


def _direct_chunk(args: Tuple[np.ndarray, int, int, int]) -> Tuple[np.ndarray, int]:
    w, quota, start, stop = args
    n = len(w)
    masks = np.arange(start, stop, dtype=np.int64)
    bits = ((masks[:, None] >> np.arange(n, dtype=np.int64)) & 1).astype(bool)
    sums = (bits.astype(w.dtype) * w).sum(axis=1)
    winning = sums >= quota
    critical = bits & winning[:, None] & ((sums[:, None] - w[None, :]) < quota)
    return critical.sum(axis=0).astype(np.int64), int(winning.sum())


def _direct_enumeration(v: WeightedVotingGame, threads: int = 1) -> Tuple[List[int], int]:
    """遍历全部 2^n 个联盟，返回 (每位玩家摇摆次数, 获胜联盟数).

    分块可并行执行，整数累加保证结果与顺序执行逐位一致。
    """
    weights, quota = v.integer_form()
    w = _array(weights)
    total = 1 << v.n
    size = 1 << _CHUNK_BITS
    tasks = [(w, quota, start, min(start + size, total)) for start in range(0, total, size)]
    results = parallel_map(_direct_chunk, tasks, threads)
    swings = np.zeros(v.n, dtype=np.int64)
    winning = 0
    for counts, wins in results:
        swings += counts
        winning += wins
    return [int(x) for x in swings], winning


def _normalize(raw: Sequence[int], denominator: Optional[int] = None) -> Tuple[Fraction, ...]:
    total = denominator if denominator is not None else sum(raw)
    if total == 0:
        return tuple(Fraction(0) for _ in raw)
    return tuple(Fraction(x, total) for x in raw)


def banzhaf(v: WeightedVotingGame, method: Literal["subset", "direct"] = "subset",
            max_players: int = BANZHAF_MAX_PLAYERS, threads: int = 1) -> PowerIndexResult:
    """Banzhaf 指数：raw[i] 为 i 是摇摆者的获胜联盟数，normalized = raw / sum(raw).

    Args:
        v: 加权多数博弈
        method: 'subset' 折半枚举公式；'direct' 遍历全部 2^n 联盟
        max_players: 精确枚举上限
        threads: 直接枚举的并行线程数

    Raises:
        UnsupportedSizeError: 玩家数超过上限
    """
    _check_size(v, max_players, "banzhaf")
    if method == "subset":
        raw = _banzhaf_subset(v)
    elif method == "direct":
        raw, _ = _direct_enumeration(v, threads)
    else:
        raise GameError(f"unknown banzhaf method {method!r}")
    logger.info(f"Banzhaf ({method}) 计算完成: n={v.n}, raw={raw}")
    return PowerIndexResult(tuple(raw), _normalize(raw), "banzhaf")


def shapley_shubik(v: WeightedVotingGame, max_players: int = SHAPLEY_MAX_PLAYERS) -> PowerIndexResult:
    """Shapley-Shubik 指数.

    raw[i] = sum_{S: S 失败且 S∪{i} 获胜} |S|!·(n-|S|-1)!，即 i 在 n! 个排列中处于关键位置的次数；
    normalized = raw / n!。

    Raises:
        UnsupportedSizeError: 玩家数超过上限
    """
    _check_size(v, max_players, "shapley")
    n = v.n
    weights, quota = v.integer_form()
    factorials = [math.factorial(k) for k in range(n + 1)]
    raw = []
    for i in range(n):
        per_size = _swing_counts_by_size(weights, quota, i)
        raw.append(sum(int(per_size[k]) * factorials[k] * factorials[n - k - 1] for k in range(n)))
    logger.info(f"Shapley-Shubik 计算完成: n={n}, raw={raw}")
    return PowerIndexResult(tuple(raw), _normalize(raw, factorials[n]), "shapley")


def coleman_indices(v: WeightedVotingGame, max_players: int = BANZHAF_MAX_PLAYERS,
                    threads: int = 1) -> ColemanIndices:
    """集体行动能力、绝对 Banzhaf 指数、阻止能力与发起能力."""
    _check_size(v, max_players, "coleman")
    swings, winning = _direct_enumeration(v, threads)
    total = 1 << v.n
    losing = total - winning
    return ColemanIndices(
        power_to_act=Fraction(winning, total),
        absolute_banzhaf=tuple(Fraction(s, total // 2) for s in swings),
        power_to_prevent=tuple(Fraction(s, winning) if winning else Fraction(0) for s in swings),
        power_to_initiate=tuple(Fraction(s, losing) if losing else Fraction(0) for s in swings),
    )


def weight_power_discrepancy(v: WeightedVotingGame) -> Tuple[Fraction, ...]:
    """每位玩家的归一化 Banzhaf 份额减去其权重份额."""
    total = sum(v.weights)
    shares = tuple(w / total if total else Fraction(0) for w in v.weights)
    power = banzhaf(v).normalized
    return tuple(p - s for p, s in zip(power, shares))


def log_odds_weights(p: Sequence[float]) -> CompetencyProfile:
    """对数几率权重 w_k = ln(p_k / (1 - p_k))（自然对数）.

    Raises:
        CompetencyDomainError: 某个 p_k 不在 (0, 1) 内
    """
    probs = tuple(float(x) for x in p)
    for k, pk in enumerate(probs):
        if not 0.0 < pk < 1.0:
            raise CompetencyDomainError(f"competency p[{k}]={pk} must lie strictly inside (0, 1)")
    weights = tuple(math.log(pk / (1.0 - pk)) for pk in probs)
    return CompetencyProfile(probs, weights)


def wmr_decide(weights: Sequence[float], votes: Sequence[int], tol: float = TOLERANCE) -> int:
    """加权多数规则：返回 +1、-1，平局（|和| < tol）返回 0.

    Raises:
        GameError: 长度不一致或票值不是 ±1
    """
    if len(weights) != len(votes):
        raise GameError(f"weights and votes differ in length ({len(weights)} vs {len(votes)})")
    if any(x not in (1, -1) for x in votes):
        raise GameError("votes must be +1 or -1")
    total = math.fsum(w * x for w, x in zip(weights, votes))
    if abs(total) < tol:
        return 0
    return 1 if total > 0 else -1


def jury_probability(n: int, p: Union[float, str, Fraction]) -> Fraction:
    """同质陪审团多数正确的精确概率 sum_{k>=ceil(n/2)} C(n,k) p^k (1-p)^(n-k).

    Raises:
        GameError: n 为偶数或 n < 1
        CompetencyDomainError: p 不在 (0, 1) 内
    """
    if n < 1 or n % 2 == 0:
        raise GameError(f"jury size must be odd and >= 1, got {n}")
    q = to_fraction(p)
    if not 0 < q < 1:
        raise CompetencyDomainError(f"competency p={p} must lie strictly inside (0, 1)")
    return sum((math.comb(n, k) * q ** k * (1 - q) ** (n - k) for k in range((n + 1) // 2, n + 1)),
               Fraction(0))


def jury_probability_weighted(weights: Union[CompetencyProfile, Sequence[float]],
                              competencies: Optional[Sequence[float]] = None,
                              max_voters: int = JURY_MAX_VOTERS,
                              tol: float = TOLERANCE) -> float:
    """加权多数规则下群体正确的概率（枚举全部 2^n 种对错组合，平局按 0.5 计）.

    Args:
        weights: CompetencyProfile 或显式权重
        competencies: 各投票者能力；传入 CompetencyProfile 时可省略
        max_voters: 精确枚举上限

    Raises:
        UnsupportedSizeError: 投票者数超过上限
    """
    if isinstance(weights, CompetencyProfile):
        p = np.asarray(competencies if competencies is not None else weights.p, dtype=np.float64)
        w = np.asarray(weights.w, dtype=np.float64)
    else:
        if competencies is None:
            raise GameError("competencies are required when explicit weights are given")
        p = np.asarray(competencies, dtype=np.float64)
        w = np.asarray(weights, dtype=np.float64)
    n = len(w)
    if len(p) != n:
        raise GameError(f"weights and competencies differ in length ({n} vs {len(p)})")
    if n > max_voters:
        raise UnsupportedSizeError(f"weighted jury supports at most {max_voters} voters, got {n}")
    if np.any((p <= 0.0) | (p >= 1.0)):
        raise CompetencyDomainError("every competency must lie strictly inside (0, 1)")

    total = 1 << n
    size = 1 << _CHUNK_BITS
    partials = []
    for start in range(0, total, size):
        masks = np.arange(start, min(start + size, total), dtype=np.int64)
        correct = ((masks[:, None] >> np.arange(n, dtype=np.int64)) & 1).astype(bool)
        prob = np.where(correct, p, 1.0 - p).prod(axis=1)
        margin = np.where(correct, 1.0, -1.0) @ w
        score = np.where(np.abs(margin) < tol, 0.5, (margin > 0).astype(np.float64))
        partials.append(float(prob @ score))
    return math.fsum(partials)


def parse_voting(text: str) -> Tuple[WeightedVotingGame, Optional[Tuple[float, ...]]]:
    """解析投票文件.

    格式::

        voting:
        quota: 4
        weights: 3 2 1
        competencies: 0.8 0.6 0.6   # 可选

    Returns:
        (博弈, 能力概率或 None)

    Raises:
        GameParseError: 格式错误，消息包含行号
    """
    fields = {}
    header_seen = False
    last = 0
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        last = number
        key, sep, value = line.partition(':')
        key = key.strip()
        if not sep:
            raise GameParseError(f"expected 'key: value', got {line!r}", number)
        if not header_seen:
            if key != 'voting' or value.strip():
                raise GameParseError("expected 'voting:' header", number)
            header_seen = True
            continue
        if key not in ('quota', 'weights', 'competencies'):
            raise GameParseError(f"unknown section {key!r}", number)
        if key in fields:
            raise GameParseError(f"duplicate section {key!r}", number)
        tokens = value.split()
        try:
            parsed = [Fraction(t) for t in tokens]
        except (ValueError, ZeroDivisionError):
            raise GameParseError(f"non-numeric token in {key!r}", number) from None
        fields[key] = (number, parsed)

    if not header_seen:
        raise GameParseError("missing 'voting:' header", last + 1)
    for key in ('quota', 'weights'):
        if key not in fields:
            raise GameParseError(f"missing '{key}:' section", last + 1)

    quota_line, quota = fields['quota']
    if len(quota) != 1:
        raise GameParseError("quota takes exactly one value", quota_line)
    weights_line, weights = fields['weights']
    if not weights:
        raise GameParseError("weights list is empty", weights_line)

    competencies = None
    if 'competencies' in fields:
        comp_line, comp = fields['competencies']
        if len(comp) != len(weights):
            raise GameParseError(f"expected {len(weights)} competencies, got {len(comp)}", comp_line)
        competencies = tuple(float(c) for c in comp)

    try:
        game = WeightedVotingGame(tuple(weights), quota[0])
    except GameError as e:
        raise GameParseError(str(e), weights_line) from e
    return game, competencies


def load_voting(path: Union[str, Path]) -> Tuple[WeightedVotingGame, Optional[Tuple[float, ...]]]:
    """从文件读取投票博弈."""
    try:
        text = Path(path).read_text(encoding='utf-8')
    except (OSError, UnicodeDecodeError) as e:
        raise GameParseError(f"cannot read voting file {path}: {e}") from e
    return parse_voting(text)
