"""重复对称 2x2 博弈模块 - 策略自动机、对局与循环赛."""

import logging
import re
from dataclasses import dataclass
from typing import Callable, Dict, List, Sequence, Tuple

import numpy as np
import pandas as pd

from .game_core import BimatrixGame, GameError, is_symmetric
from .utils import parallel_map

logger = logging.getLogger(__name__)

COOPERATE = "C"
DEFECT = "D"
_MOVE_INDEX = {COOPERATE: 0, DEFECT: 1}

History = Tuple[str, ...]
Rule = Callable[[History, History, np.random.Generator], str]


@dataclass(frozen=True)
class StrategyAutomaton:
    """策略自动机：第 k 轮只读取前 k-1 轮的双方历史.

    确定性自动机不使用随机数流。
    """

    name: str
    rule: Rule
    deterministic: bool = True

    def decide(self, own: History, opponent: History, rng: np.random.Generator) -> str:
        move = self.rule(own, opponent, rng)
        if move not in _MOVE_INDEX:
            raise GameError(f"strategy {self.name} produced invalid move {move!r}")
        return move


def _always_c(own, opponent, rng):
    return COOPERATE


def _always_d(own, opponent, rng):
    return DEFECT


def _tit_for_tat(own, opponent, rng):
    return opponent[-1] if opponent else COOPERATE


def _suspicious_tit_for_tat(own, opponent, rng):
    return opponent[-1] if opponent else DEFECT


def _grim_trigger(own, opponent, rng):
    return DEFECT if DEFECT in opponent else COOPERATE


def _pavlov(own, opponent, rng):
    # 赢则保持、输则改变：上一轮双方一致时合作
    if not own:
        return COOPERATE
    return COOPERATE if own[-1] == opponent[-1] else DEFECT


AlwaysC = StrategyAutomaton("AlwaysC", _always_c)
AlwaysD = StrategyAutomaton("AlwaysD", _always_d)
TitForTat = StrategyAutomaton("TitForTat", _tit_for_tat)
SuspiciousTitForTat = StrategyAutomaton("SuspiciousTitForTat", _suspicious_tit_for_tat)
GrimTrigger = StrategyAutomaton("GrimTrigger", _grim_trigger)
Pavlov = StrategyAutomaton("Pavlov", _pavlov)

BUILTINS: Dict[str, StrategyAutomaton] = {
    s.name: s for s in (AlwaysC, AlwaysD, TitForTat, SuspiciousTitForTat, GrimTrigger, Pavlov)
}


def random_p(p: float) -> StrategyAutomaton:
    """以概率 p 合作的随机策略."""
    if not 0.0 <= p <= 1.0:
        raise GameError(f"RandomP probability must lie in [0, 1], got {p}")

    def rule(own, opponent, rng):
        return COOPERATE if rng.random() < p else DEFECT

    return StrategyAutomaton(f"RandomP({p:g})", rule, deterministic=False)


_RANDOM_PATTERN = re.compile(r"^Random(?:P)?\(?([0-9]*\.?[0-9]+)\)?$")


def make_strategy(name: str) -> StrategyAutomaton:
    """按名称构造自动机，支持 RandomP(0.3) / Random0.3.

    Raises:
        GameError: 未知名称
    """
    name = name.strip()
    if name in BUILTINS:
        return BUILTINS[name]
    match = _RANDOM_PATTERN.match(name)
    if match:
        return random_p(float(match.group(1)))
    raise GameError(f"unknown strategy {name!r}; expected one of {', '.join(BUILTINS)} or RandomP(p)")


@dataclass(frozen=True)
class MatchTranscript:
    """一场重复对局的逐轮记录."""

    game: BimatrixGame
    rounds: int
    moves: Tuple[Tuple[str, str], ...]
    payoffs: Tuple[Tuple[float, float], ...]
    scores: Tuple[float, float]


def _require_symmetric_2x2(g: BimatrixGame) -> None:
    if g.shape != (2, 2) or not is_symmetric(g):
        raise GameError("iterated play needs a symmetric 2x2 game")


def play_match(s1: StrategyAutomaton, s2: StrategyAutomaton, g: BimatrixGame,
               rounds: int, seed: int = 0) -> MatchTranscript:
    """同时出招的重复对局，每轮结束后双方看到完整历史.

    两位玩家各有一条由 seed 派生的独立随机数流。

    Raises:
        GameError: rounds < 1 或博弈不是对称 2x2
    """
    if rounds < 1:
        raise GameError(f"rounds must be >= 1, got {rounds}")
    _require_symmetric_2x2(g)

    rng1, rng2 = (np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(2))
    h1: List[str] = []
    h2: List[str] = []
    payoffs: List[Tuple[float, float]] = []
    for _ in range(rounds):
        m1 = s1.decide(tuple(h1), tuple(h2), rng1)
        m2 = s2.decide(tuple(h2), tuple(h1), rng2)
        h1.append(m1)
        h2.append(m2)
        payoffs.append(g.payoff(_MOVE_INDEX[m1], _MOVE_INDEX[m2]))

    scores = (sum(p[0] for p in payoffs), sum(p[1] for p in payoffs))
    logger.debug(f"{s1.name} vs {s2.name}: {scores}")
    return MatchTranscript(g, rounds, tuple(zip(h1, h2)), tuple(payoffs), scores)


@dataclass(frozen=True)
class TournamentResult:
    """循环赛结果：scores[i][j] 为第 i 个策略对第 j 个策略的得分."""

    names: Tuple[str, ...]
    scores: Tuple[Tuple[float, ...], ...]

    @property
    def totals(self) -> Tuple[float, ...]:
        return tuple(sum(row) for row in self.scores)

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(self.scores, index=list(self.names), columns=list(self.names))
        frame["total"] = frame.sum(axis=1)
        if all(float(v).is_integer() for v in frame.to_numpy().ravel()):
            frame = frame.astype("int64")
        frame.index.name = "strategy"
        return frame

    def to_text(self) -> str:
        return self.to_frame().to_string()

    def to_csv(self) -> str:
        return self.to_frame().to_csv(lineterminator="\n")

    def to_dict(self) -> dict:
        return {
            'names': list(self.names),
            'scores': [list(row) for row in self.scores],
            'totals': list(self.totals),
        }


def _unique_names(strategies: Sequence[StrategyAutomaton]) -> Tuple[str, ...]:
    seen: Dict[str, int] = {}
    names = []
    for s in strategies:
        seen[s.name] = seen.get(s.name, 0) + 1
        names.append(s.name if seen[s.name] == 1 else f"{s.name}#{seen[s.name]}")
    return tuple(names)


def _match_seed(seed: int, i: int, j: int) -> int:
    return int(np.random.SeedSequence([seed, i, j]).generate_state(1)[0])


def tournament(strategies: Sequence[StrategyAutomaton], g: BimatrixGame, rounds: int,
               seed: int = 0, threads: int = 1) -> TournamentResult:
    """含自我对局的循环赛，给定 seed 时结果确定.

    每对 (i, j)（i <= j）只比赛一场，对局可并行，按固定配对顺序合并。

    Raises:
        GameError: 策略少于 2 个
    """
    if len(strategies) < 2:
        raise GameError("tournament needs at least 2 strategies")
    _require_symmetric_2x2(g)

    pairs = [(i, j) for i in range(len(strategies)) for j in range(i, len(strategies))]

    def run(pair: Tuple[int, int]) -> MatchTranscript:
        i, j = pair
        return play_match(strategies[i], strategies[j], g, rounds, _match_seed(seed, i, j))

    transcripts = parallel_map(run, pairs, threads)
    n = len(strategies)
    grid = [[0.0] * n for _ in range(n)]
    for (i, j), transcript in zip(pairs, transcripts):
        grid[i][j] = transcript.scores[0]
        if i != j:
            grid[j][i] = transcript.scores[1]
    logger.info(f"循环赛完成: {n} 个策略, {len(pairs)} 场对局, 每场 {rounds} 轮")
    return TournamentResult(_unique_names(strategies), tuple(tuple(row) for row in grid))
