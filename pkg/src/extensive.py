"""扩展型博弈树模块 - 信息集、逆向归纳、转换为标准型."""

import itertools
import logging
import math
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .game_core import BimatrixGame, GameError, GameParseError

logger = logging.getLogger(__name__)

MAX_STRATEGIES = 12


class TreeStructureError(GameError):
    """树结构不合法."""


class ImperfectInformationError(GameError):
    """逆向归纳要求完美信息."""


class StrategyOverflowError(GameError):
    """纯策略数超过上限."""


@dataclass(frozen=True)
class Node:
    """决策节点（player 非空）或叶子（payoffs 非空）.

    children 为 (走法标签, 子节点 id) 序列。
    """

    id: str
    player: Optional[int] = None
    payoffs: Optional[Tuple[float, ...]] = None
    children: Tuple[Tuple[str, str], ...] = ()

    @property
    def is_leaf(self) -> bool:
        return self.payoffs is not None

    @property
    def moves(self) -> Tuple[str, ...]:
        return tuple(sorted(label for label, _ in self.children))

    def child(self, label: str) -> str:
        for move, child_id in self.children:
            if move == label:
                return child_id
        raise KeyError(label)


@dataclass(frozen=True)
class GameTree:
    """扩展型博弈树.

    info_sets 是全部决策节点的划分；构造时未列出的决策节点自动成为单点信息集。
    """

    nodes: Dict[str, Node]
    root: str
    info_sets: Tuple[Tuple[str, ...], ...] = ()
    _infoset_of: Dict[str, int] = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        self._validate_tree()
        self._complete_info_sets()

    def _validate_tree(self) -> None:
        if self.root not in self.nodes:
            raise TreeStructureError(f"root {self.root!r} is not a node")

        parents: Dict[str, str] = {}
        for node in self.nodes.values():
            if node.is_leaf == (node.player is not None):
                raise TreeStructureError(f"node {node.id!r} must be either a decision node or a leaf")
            if node.is_leaf and node.children:
                raise TreeStructureError(f"leaf {node.id!r} has outgoing edges")
            if not node.is_leaf and not node.children:
                raise TreeStructureError(f"decision node {node.id!r} has no moves")
            labels = [label for label, _ in node.children]
            if len(set(labels)) != len(labels):
                raise TreeStructureError(f"node {node.id!r} repeats a move label")
            for _, child in node.children:
                if child not in self.nodes:
                    raise TreeStructureError(f"edge from {node.id!r} to unknown node {child!r}")
                if child in parents:
                    raise TreeStructureError(f"node {child!r} has more than one parent")
                parents[child] = node.id
        if self.root in parents:
            raise TreeStructureError("root must not have a parent")

        # 从根可达全部节点且每个非根节点恰有一个父节点 => 无环的有根树
        seen = set()
        queue = deque([self.root])
        while queue:
            node_id = queue.popleft()
            seen.add(node_id)
            queue.extend(child for _, child in self.nodes[node_id].children)
        if len(seen) != len(self.nodes):
            unreachable = sorted(set(self.nodes) - seen)
            raise TreeStructureError(f"nodes not reachable from root: {unreachable}")

        lengths = {len(node.payoffs) for node in self.nodes.values() if node.is_leaf}
        if len(lengths) != 1:
            raise TreeStructureError("every leaf payoff vector must have the same length")
        players = lengths.pop()
        for node in self.nodes.values():
            if node.player is not None and not 1 <= node.player <= players:
                raise TreeStructureError(f"node {node.id!r} player {node.player} outside 1..{players}")

    def _complete_info_sets(self) -> None:
        index: Dict[str, int] = {}
        sets: List[Tuple[str, ...]] = []
        for members in self.info_sets:
            members = tuple(members)
            for node_id in members:
                node = self.nodes.get(node_id)
                if node is None or node.is_leaf:
                    raise TreeStructureError(f"information set member {node_id!r} is not a decision node")
                if node_id in index:
                    raise TreeStructureError(f"node {node_id!r} appears in two information sets")
                index[node_id] = len(sets)
            first = self.nodes[members[0]]
            for node_id in members[1:]:
                node = self.nodes[node_id]
                if node.player != first.player:
                    raise TreeStructureError(f"information set {members} mixes players")
                if node.moves != first.moves:
                    raise TreeStructureError(f"information set {members} offers different moves")
            sets.append(members)
        for node_id in self._bfs_order():
            node = self.nodes[node_id]
            if not node.is_leaf and node_id not in index:
                index[node_id] = len(sets)
                sets.append((node_id,))
        object.__setattr__(self, 'info_sets', tuple(sets))
        object.__setattr__(self, '_infoset_of', index)

    def _bfs_order(self) -> List[str]:
        order = []
        queue = deque([self.root])
        while queue:
            node_id = queue.popleft()
            order.append(node_id)
            queue.extend(child for _, child in sorted(self.nodes[node_id].children))
        return order

    @property
    def num_players(self) -> int:
        return next(len(n.payoffs) for n in self.nodes.values() if n.is_leaf)

    def infoset_of(self, node_id: str) -> int:
        return self._infoset_of[node_id]

    def player_info_sets(self, player: int) -> List[int]:
        """该玩家的信息集下标，按首次出现（广度优先）排序."""
        order = {node_id: i for i, node_id in enumerate(self._bfs_order())}
        owned = [i for i, members in enumerate(self.info_sets)
                 if self.nodes[members[0]].player == player]
        return sorted(owned, key=lambda i: min(order[m] for m in self.info_sets[i]))

    def strategies(self, player: int) -> List[Tuple[str, ...]]:
        """该玩家的全部纯策略：每个信息集选一个走法."""
        moves = [self.nodes[self.info_sets[i][0]].moves for i in self.player_info_sets(player)]
        return [tuple(s) for s in itertools.product(*moves)]

    def strategy_count(self, player: int) -> int:
        return math.prod(len(self.nodes[self.info_sets[i][0]].moves)
                         for i in self.player_info_sets(player))


def is_perfect_information(t: GameTree) -> bool:
    """每个信息集都是单点."""
    return all(len(members) == 1 for members in t.info_sets)


def backward_induction(t: GameTree) -> Tuple[Tuple[float, ...], List[str]]:
    """逆向归纳：每个决策节点选使行动者自身收益最大的子节点（平局取字典序最小的走法）.

    Returns:
        (根节点收益向量, 诱导路径上的走法标签)

    Raises:
        ImperfectInformationError: 存在非单点信息集
    """
    if not is_perfect_information(t):
        raise ImperfectInformationError(
            "backward induction needs perfect information; use to_normal_form instead")

    def fold(node_id: str) -> Tuple[Tuple[float, ...], List[str]]:
        node = t.nodes[node_id]
        if node.is_leaf:
            return node.payoffs, []
        best: Optional[Tuple[Tuple[float, ...], List[str]]] = None
        for label in node.moves:
            value, path = fold(node.child(label))
            if best is None or value[node.player - 1] > best[0][node.player - 1]:
                best = (value, [label] + path)
        return best

    value, path = fold(t.root)
    logger.debug(f"逆向归纳: 路径={path}, 收益={value}")
    return value, path


def _play(t: GameTree, profile: Dict[int, Dict[int, str]]) -> Tuple[float, ...]:
    node = t.nodes[t.root]
    while not node.is_leaf:
        move = profile[node.player][t.infoset_of(node.id)]
        node = t.nodes[node.child(move)]
    return node.payoffs


def _strategy_name(strategy: Sequence[str]) -> str:
    return "/".join(strategy) if strategy else "-"


def to_normal_form(t: GameTree, max_strategies: int = MAX_STRATEGIES) -> BimatrixGame:
    """把双人博弈树展开为双矩阵博弈（逐个策略组合走到叶子）.

    Raises:
        GameError: 不是双人博弈
        StrategyOverflowError: 某位玩家纯策略数超过上限
    """
    if t.num_players != 2:
        raise GameError(f"to_normal_form needs a 2-player tree, got {t.num_players} players")
    counts = {p: t.strategy_count(p) for p in (1, 2)}
    for player, count in counts.items():
        if count > max_strategies:
            raise StrategyOverflowError(
                f"player {player} has {count} pure strategies; at most {max_strategies} supported")

    info = {p: t.player_info_sets(p) for p in (1, 2)}
    rows = t.strategies(1)
    cols = t.strategies(2)
    row_payoffs, col_payoffs = [], []
    for s1 in rows:
        row_a, row_b = [], []
        for s2 in cols:
            profile = {1: dict(zip(info[1], s1)), 2: dict(zip(info[2], s2))}
            a, b = _play(t, profile)
            row_a.append(a)
            row_b.append(b)
        row_payoffs.append(row_a)
        col_payoffs.append(row_b)
    logger.info(f"博弈树转换为 {len(rows)}x{len(cols)} 标准型")
    return BimatrixGame(row_payoffs, col_payoffs,
                        tuple(_strategy_name(s) for s in rows),
                        tuple(_strategy_name(s) for s in cols))


def parse_tree(text: str) -> GameTree:
    """解析博弈树文件.

    每行一条指令::

        node <id> player <p>
        leaf <id> payoffs <v1> <v2> ...
        edge <from> <to> <label>
        infoset <id1> <id2> ...
        root <id>

    Raises:
        GameParseError: 格式错误，消息包含行号
    """
    decisions: Dict[str, int] = {}
    leaves: Dict[str, Tuple[float, ...]] = {}
    edges: Dict[str, List[Tuple[str, str]]] = {}
    info_sets: List[Tuple[str, ...]] = []
    root: Optional[str] = None
    last = 0

    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith('#'):
            continue
        last = number
        tokens = line.split()
        kind = tokens[0]
        if kind == 'node':
            if len(tokens) != 4 or tokens[2] != 'player':
                raise GameParseError("expected 'node <id> player <p>'", number)
            if tokens[1] in decisions or tokens[1] in leaves:
                raise GameParseError(f"duplicate node id {tokens[1]!r}", number)
            try:
                decisions[tokens[1]] = int(tokens[3])
            except ValueError:
                raise GameParseError(f"player must be an integer, got {tokens[3]!r}", number) from None
        elif kind == 'leaf':
            if len(tokens) < 4 or tokens[2] != 'payoffs':
                raise GameParseError("expected 'leaf <id> payoffs <v1> ...'", number)
            if tokens[1] in decisions or tokens[1] in leaves:
                raise GameParseError(f"duplicate node id {tokens[1]!r}", number)
            try:
                leaves[tokens[1]] = tuple(float(v) for v in tokens[3:])
            except ValueError:
                raise GameParseError("non-numeric payoff", number) from None
        elif kind == 'edge':
            if len(tokens) != 4:
                raise GameParseError("expected 'edge <from> <to> <label>'", number)
            edges.setdefault(tokens[1], []).append((tokens[3], tokens[2]))
        elif kind == 'infoset':
            if len(tokens) < 2:
                raise GameParseError("infoset needs at least one node id", number)
            info_sets.append(tuple(tokens[1:]))
        elif kind == 'root':
            if len(tokens) != 2:
                raise GameParseError("expected 'root <id>'", number)
            if root is not None:
                raise GameParseError("root declared twice", number)
            root = tokens[1]
        else:
            raise GameParseError(f"unknown directive {kind!r}", number)

    if root is None:
        raise GameParseError("missing 'root <id>' line", last + 1)

    nodes: Dict[str, Node] = {}
    for node_id, player in decisions.items():
        nodes[node_id] = Node(node_id, player=player, children=tuple(edges.pop(node_id, [])))
    for node_id, payoffs in leaves.items():
        nodes[node_id] = Node(node_id, payoffs=payoffs, children=tuple(edges.pop(node_id, [])))
    if edges:
        raise GameParseError(f"edges leave undeclared nodes: {sorted(edges)}", last)

    try:
        return GameTree(nodes, root, tuple(info_sets))
    except TreeStructureError as e:
        raise GameParseError(str(e), last) from e


def _format_value(value: float) -> str:
    return str(int(value)) if float(value).is_integer() else repr(float(value))


def serialize_tree(t: GameTree) -> str:
    """把博弈树写成文件格式文本."""
    out = [f"root {t.root}"]
    for node_id in t._bfs_order():
        node = t.nodes[node_id]
        if node.is_leaf:
            out.append(f"leaf {node_id} payoffs " + " ".join(_format_value(v) for v in node.payoffs))
        else:
            out.append(f"node {node_id} player {node.player}")
    for node_id in t._bfs_order():
        for label, child in t.nodes[node_id].children:
            out.append(f"edge {node_id} {child} {label}")
    for members in t.info_sets:
        if len(members) > 1:
            out.append("infoset " + " ".join(members))
    return "\n".join(out) + "\n"


def load_tree(path: Union[str, Path]) -> GameTree:
    """从文件读取博弈树."""
    try:
        text = Path(path).read_text(encoding='utf-8')
    except (OSError, UnicodeDecodeError) as e:
        raise GameParseError(f"cannot read tree file {path}: {e}") from e
    return parse_tree(text)
