"""最佳优先搜索模块 - 按启发式排名扩展前沿，扩展顺序可观察."""

import heapq
import itertools
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Generic, Hashable, List, Literal, Optional, Sequence, Tuple, TypeVar

logger = logging.getLogger(__name__)

S = TypeVar("S", bound=Hashable)


@dataclass(frozen=True)
class PuzzleSpace(Generic[S]):
    """谜题状态空间.

    successors 必须是确定性的；heuristic 越小越好。
    """

    initial: S
    successors: Callable[[S], Sequence[Tuple[Any, S]]]
    is_goal: Callable[[S], bool]
    heuristic: Callable[[S], float]


@dataclass
class SearchResult:
    """搜索结果.

    status 为 'found'、'limit'（达到扩展上限）或 'exhausted'（空间耗尽仍未找到）。
    """

    status: Literal["found", "limit", "exhausted"]
    path: List[Any] = field(default_factory=list)
    expansions: int = 0
    expansion_order: List[Any] = field(default_factory=list)
    frontier: List[Tuple[float, Any]] = field(default_factory=list)

    @property
    def found(self) -> bool:
        return self.status == "found"


def best_first_search(p: PuzzleSpace, max_expansions: Optional[int] = None) -> SearchResult:
    """贪心最佳优先搜索.

    每次弹出排名最低的前沿节点（同排名按入队顺序），弹出时检查目标，
    否则扩展并把未发现过的后继入队。

    Args:
        p: 状态空间
        max_expansions: 扩展次数上限，None 表示不限

    Returns:
        找到目标时带走法路径；达到上限时带按排名排序的前沿
    """
    counter = itertools.count()
    frontier: List[Tuple[float, int, Any, List[Any]]] = []
    heapq.heappush(frontier, (p.heuristic(p.initial), next(counter), p.initial, []))
    discovered = {p.initial}
    order: List[Any] = []

    while frontier:
        rank, _, state, path = heapq.heappop(frontier)
        if p.is_goal(state):
            logger.info(f"找到目标: {len(path)} 步, 扩展 {len(order)} 次")
            return SearchResult("found", path, len(order), order)

        if max_expansions is not None and len(order) >= max_expansions:
            heapq.heappush(frontier, (rank, -1, state, path))
            ranked = sorted(frontier, key=lambda item: (item[0], item[1]))
            logger.info(f"达到扩展上限 {max_expansions}，前沿 {len(ranked)} 个节点")
            return SearchResult("limit", [], len(order), order,
                                [(item[0], item[2]) for item in ranked])

        order.append(state)
        logger.debug(f"扩展 #{len(order)}: rank={rank} state={state!r}")
        for move, child in p.successors(state):
            if child in discovered:
                continue
            discovered.add(child)
            heapq.heappush(frontier, (p.heuristic(child), next(counter), child, path + [move]))

    logger.info(f"状态空间耗尽，未找到目标（扩展 {len(order)} 次）")
    return SearchResult("exhausted", [], len(order), order)
