"""CLI 入口模块."""

from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, List, Optional

import typer
from rich.console import Console

from .config import ConfigManager
from .extensive import backward_induction, load_tree, to_normal_form
from .game_core import GameError, GameParseError, load_game, serialize_game
from .iterated import StrategyAutomaton, make_strategy, tournament
from .nash import equilibrium_report
from .taxonomy import CANONICAL_NAMES, canonical, classify_game
from .tictactoe import enumerate_tictactoe, policy_never_loses
from .utils import format_exact, format_number, format_probability, safe_json_dumps, setup_logging, to_fraction
from .voting import (
    banzhaf, coleman_indices, jury_probability, jury_probability_weighted, load_voting,
    log_odds_weights, shapley_shubik,
)
from .zerosum import maximin_security, saddle_points, solve_zero_sum

app = typer.Typer(
    name="gamekit",
    help="有限博弈分析工具：零和/非零和双矩阵博弈、投票权力、博弈树与重复博弈",
    add_completion=False
)
solve_app = typer.Typer(help="求解标准型博弈", add_completion=False)
tree_app = typer.Typer(help="扩展型博弈树", add_completion=False)
app.add_typer(solve_app, name="solve")
app.add_typer(tree_app, name="tree")

console = Console(highlight=False, soft_wrap=True, emoji=False)
err_console = Console(stderr=True, highlight=False, soft_wrap=True, emoji=False)


@dataclass
class CliState:
    """一次调用的全局选项."""

    config: ConfigManager
    json_output: bool = False
    digits: int = 6
    threads: int = 1


def _state(ctx: typer.Context) -> CliState:
    return ctx.find_root().obj


def _emit(state: CliState, lines: List[str], payload: dict) -> None:
    """文本模式逐行输出，JSON 模式输出一行有序 JSON."""
    if state.json_output:
        console.print(safe_json_dumps(payload), markup=False)
        return
    for line in lines:
        console.print(line, markup=False)


@contextmanager
def _guard() -> Iterator[None]:
    """把领域异常映射为退出码：解析错误 2，其余领域错误 1."""
    try:
        yield
    except GameParseError as e:
        err_console.print(f"error: {e}", markup=False)
        raise typer.Exit(2)
    except (GameError, ValueError) as e:
        err_console.print(f"error: {e}", markup=False)
        raise typer.Exit(1)


def _pair(values, digits: int) -> str:
    return "(" + ",".join(format_number(v, digits) for v in values) + ")"


@app.callback()
def main(
    ctx: typer.Context,
    config: str = typer.Option("gamekit.yaml", "--config", "-c", help="配置文件路径"),
    json_output: bool = typer.Option(False, "--json", help="以 JSON 输出"),
    log_level: Optional[str] = typer.Option(None, "--log-level", help="日志级别"),
    verbose: bool = typer.Option(False, "--verbose", "-v", help="输出调试日志"),
):
    """gamekit 全局选项."""
    config_manager = ConfigManager(config)
    if not config_manager.validate_config():
        err_console.print("error: invalid configuration", markup=False)
        raise typer.Exit(2)
    level = "DEBUG" if verbose else (log_level or config_manager.get('logging.level', 'WARNING'))
    setup_logging(level)
    ctx.obj = CliState(
        config=config_manager,
        json_output=json_output,
        digits=config_manager.get_significant_digits(),
        threads=config_manager.get_threads(),
    )


@solve_app.command("zerosum")
def solve_zerosum(
    ctx: typer.Context,
    file: str = typer.Argument(..., help="博弈文件"),
):
    """求解零和博弈（鞍点或 2x2 混合解）."""
    state = _state(ctx)
    tol = state.config.get_tolerance()
    with _guard():
        g = load_game(file)
        solution = solve_zero_sum(g, tol)
        row, row_security = maximin_security(g, "row")
        col, col_security = maximin_security(g, "col")
        lines = []
        if solution.kind == "pure":
            lines.append(f"pure saddle: {g.cell_name(solution.row_strategy, solution.col_strategy)} "
                         f"value {format_number(solution.row_value, state.digits)}")
            others = [cell for cell in saddle_points(g, tol)
                      if cell != (solution.row_strategy, solution.col_strategy)]
            if others:
                lines.append("other saddles: " + " ".join(g.cell_name(r, c) for r, c in others))
        else:
            lines.append(f"mixed solution: x={format_probability(solution.x, state.digits)} "
                         f"y={format_probability(solution.y, state.digits)} "
                         f"value {format_number(solution.row_value, state.digits)}")
        lines.append(f"row security: {g.row_names[row]} {format_number(row_security, state.digits)}")
        lines.append(f"col security: {g.col_names[col]} {format_number(col_security, state.digits)}")
        _emit(state, lines, {
            'solution': solution.to_dict(),
            'row_security': {'strategy': row, 'value': row_security},
            'col_security': {'strategy': col, 'value': col_security},
        })


@solve_app.command("nash")
def solve_nash(
    ctx: typer.Context,
    file: str = typer.Argument(..., help="博弈文件"),
    mixed: bool = typer.Option(False, "--mixed", help="同时计算 2x2 混合均衡与奇数性检查"),
):
    """枚举纳什均衡."""
    state = _state(ctx)
    tol = state.config.get_tolerance()
    with _guard():
        g = load_game(file)
        report = equilibrium_report(g, tol)
        lines = [f"pure NE: {g.cell_name(e.row, e.col)} payoffs {_pair(e.payoffs, state.digits)}"
                 for e in report.pure_equilibria] or ["pure NE: none"]
        if mixed:
            m = report.mixed_equilibrium
            if m is not None:
                lines.append(f"mixed NE: x={format_probability(m.x, state.digits)} "
                             f"y={format_probability(m.y, state.digits)} "
                             f"payoffs {_pair((m.row_value, m.col_value), state.digits)}")
            elif g.shape == (2, 2):
                lines.append("mixed NE: none" + (" (degenerate)" if report.degenerate else ""))
            else:
                lines.append("mixed NE: not computed beyond 2x2")
            parity = "even: degenerate game" if report.even_count_warning else "odd"
            lines.append(f"total: {report.total_count} ({parity})")
        payload = report.to_dict()
        if not mixed:
            payload = {'pure_equilibria': payload['pure_equilibria']}
        _emit(state, lines, payload)


@app.command()
def classify(
    ctx: typer.Context,
    file: str = typer.Argument(..., help="对称 2x2 博弈文件"),
):
    """按 T/R/S/P 序关系分类对称 2x2 博弈."""
    state = _state(ctx)
    with _guard():
        result = classify_game(load_game(file), state.config.get_tolerance())
        line = str(result) + (" relabelled C<->D" if result.relabelled else "")
        _emit(state, [line], {
            'class': result.game_class.value,
            'ordering': result.ordering,
            'relabelled': result.relabelled,
        })


@app.command("canonical")
def canonical_cmd(
    ctx: typer.Context,
    name: str = typer.Argument(..., help=f"经典博弈名: {', '.join(CANONICAL_NAMES)}"),
):
    """输出经典博弈的博弈文件."""
    state = _state(ctx)
    with _guard():
        text = serialize_game(canonical(name))
        _emit(state, text.rstrip("\n").split("\n"), {'name': name, 'game': text})


@app.command()
def power(
    ctx: typer.Context,
    file: str = typer.Argument(..., help="投票文件"),
    index: str = typer.Option(..., "--index", help="banzhaf 或 shapley"),
    method: str = typer.Option("subset", "--method", help="Banzhaf 计算方式: subset 或 direct"),
    coleman: bool = typer.Option(False, "--coleman", help="附加 Coleman 指数"),
):
    """计算权力指数."""
    state = _state(ctx)
    if index not in ("banzhaf", "shapley"):
        raise typer.BadParameter("--index must be 'banzhaf' or 'shapley'")
    if method not in ("subset", "direct"):
        raise typer.BadParameter("--method must be 'subset' or 'direct'")
    with _guard():
        v, _ = load_voting(file)
        if index == "banzhaf":
            result = banzhaf(v, method=method, max_players=state.config.get_limit('banzhaf_players'),
                             threads=state.threads)
        else:
            result = shapley_shubik(v, max_players=state.config.get_limit('shapley_players'))
        lines = [f"index: {result.method} (exact)", "raw: " + " ".join(str(x) for x in result.raw)]
        lines += [f"player {i}: {format_exact(x, state.digits)}" for i, x in enumerate(result.normalized)]
        payload = result.to_dict()
        if coleman:
            c = coleman_indices(v, max_players=state.config.get_limit('banzhaf_players'),
                                threads=state.threads)
            lines.append(f"power to act: {format_exact(c.power_to_act, state.digits)}")
            for i in range(v.n):
                lines.append(f"player {i}: absolute {format_exact(c.absolute_banzhaf[i], state.digits)} "
                             f"prevent {format_exact(c.power_to_prevent[i], state.digits)} "
                             f"initiate {format_exact(c.power_to_initiate[i], state.digits)}")
            payload['coleman'] = {
                'power_to_act': str(c.power_to_act),
                'absolute_banzhaf': [str(x) for x in c.absolute_banzhaf],
                'power_to_prevent': [str(x) for x in c.power_to_prevent],
                'power_to_initiate': [str(x) for x in c.power_to_initiate],
            }
        _emit(state, lines, payload)


def _parse_list(text: str, option: str) -> List[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise typer.BadParameter(f"{option} must be a comma-separated list of numbers") from None


def _parse_probability(text: str, option: str) -> Fraction:
    try:
        q = to_fraction(text)
    except (ValueError, ZeroDivisionError):
        q = None
    if q is None or not 0 < q < 1:
        raise typer.BadParameter(f"{option} must be a decimal in (0, 1), got {text!r}")
    return q


def _parse_strategies(text: str) -> List[StrategyAutomaton]:
    try:
        return [make_strategy(name) for name in text.split(",") if name.strip()]
    except GameError as e:
        raise typer.BadParameter(f"--strategies: {e}") from None


@app.command()
def weights(
    ctx: typer.Context,
    competencies: str = typer.Option(..., "--competencies", help="逗号分隔的能力概率"),
):
    """由能力概率计算对数几率权重."""
    state = _state(ctx)
    probs = _parse_list(competencies, "--competencies")
    with _guard():
        profile = log_odds_weights(probs)
        lines = [f"voter {k}: p={format_number(p, state.digits)} w={format_number(w, state.digits)}"
                 for k, (p, w) in enumerate(zip(profile.p, profile.w))]
        _emit(state, lines, {'p': list(profile.p), 'w': list(profile.w)})


@app.command()
def jury(
    ctx: typer.Context,
    n: Optional[int] = typer.Option(None, "--n", help="陪审团人数（奇数）"),
    p: Optional[str] = typer.Option(None, "--p", help="共同能力概率"),
    file: Optional[str] = typer.Option(None, "--file", help="带 competencies 的投票文件"),
):
    """陪审团定理：多数正确的概率."""
    state = _state(ctx)
    homogeneous = n is not None or p is not None
    if homogeneous == (file is not None):
        raise typer.BadParameter("use either --n N --p P or --file FILE")
    with _guard():
        if file is None:
            if n is None or p is None:
                raise typer.BadParameter("--n and --p must be given together")
            prob = jury_probability(n, _parse_probability(p, "--p"))
            _emit(state, [format_exact(prob, state.digits)],
                  {'n': n, 'p': p, 'probability': str(prob), 'probability_float': float(prob)})
            return

        v, comp = load_voting(file)
        if comp is None:
            raise GameParseError(f"voting file {file} has no 'competencies:' section")
        limit = state.config.get_limit('jury_voters')
        weighted = jury_probability_weighted([float(w) for w in v.weights], comp, max_voters=limit)
        optimal = jury_probability_weighted(log_odds_weights(comp), max_voters=limit)
        _emit(state, [
            f"weighted: {format_probability(weighted, state.digits)}",
            f"log-odds: {format_probability(optimal, state.digits)}",
        ], {'weighted': weighted, 'log_odds': optimal})


@tree_app.command("solve")
def tree_solve(
    ctx: typer.Context,
    file: str = typer.Argument(..., help="博弈树文件"),
):
    """完美信息博弈树的逆向归纳."""
    state = _state(ctx)
    with _guard():
        value, path = backward_induction(load_tree(file))
        _emit(state, [
            f"value {_pair(value, state.digits)}",
            "path " + (",".join(path) if path else "-"),
        ], {'value': list(value), 'path': path})


@tree_app.command("normalize")
def tree_normalize(
    ctx: typer.Context,
    file: str = typer.Argument(..., help="博弈树文件"),
):
    """把双人博弈树转换为标准型博弈文件."""
    state = _state(ctx)
    with _guard():
        g = to_normal_form(load_tree(file), state.config.get_limit('normal_form_strategies'))
        text = serialize_game(g)
        _emit(state, text.rstrip("\n").split("\n"), {'game': text})


@app.command()
def ttt(ctx: typer.Context):
    """井字棋完全枚举."""
    state = _state(ctx)
    counts = enumerate_tictactoe(state.threads)
    never_loses = policy_never_loses('X') and policy_never_loses('O')
    _emit(state, [
        f"naive_fill_count {counts.naive_fill_count}",
        f"encoding_bound {counts.encoding_bound}",
        f"reachable_states {counts.reachable_states}",
        f"game_value {counts.game_value}",
        f"policy_never_loses {'true' if never_loses else 'false'}",
    ], {**counts.to_dict(), 'policy_never_loses': never_loses})


@app.command()
def ipd(
    ctx: typer.Context,
    rounds: Optional[int] = typer.Option(None, "--rounds", help="每场对局轮数"),
    strategies: str = typer.Option(..., "--strategies", help="逗号分隔的策略名"),
    seed: Optional[int] = typer.Option(None, "--seed", help="随机种子"),
    csv: bool = typer.Option(False, "--csv", help="以 CSV 输出得分表"),
    game: Optional[str] = typer.Option(None, "--game", help="对称 2x2 博弈文件（默认囚徒困境）"),
):
    """重复囚徒困境循环赛."""
    state = _state(ctx)
    rounds = rounds if rounds is not None else int(state.config.get('ipd.rounds', 10))
    seed = seed if seed is not None else int(state.config.get('ipd.seed', 0))
    players = _parse_strategies(strategies)
    with _guard():
        g = load_game(game) if game else canonical("PrisonersDilemma")
        result = tournament(players, g, rounds, seed, state.threads)
        text = result.to_csv() if csv else result.to_text()
        _emit(state, text.rstrip("\n").split("\n"), {'rounds': rounds, 'seed': seed, **result.to_dict()})


@app.command()
def version():
    """显示版本信息."""
    from . import __version__
    console.print(f"gamekit v{__version__}", markup=False)


if __name__ == "__main__":
    app()
