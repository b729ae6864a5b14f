"""通用工具函数模块."""

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Any, Callable, Iterable, List, TypeVar

T = TypeVar("T")
R = TypeVar("R")

# 全局比较容差
TOLERANCE = 1e-9


def setup_logging(level: str = "WARNING") -> logging.Logger:
    """设置日志配置（输出到 stderr，保持 stdout 确定性）."""
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.WARNING),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S',
        force=True
    )
    return logging.getLogger(__name__)


def safe_json_dumps(data: Any) -> str:
    """序列化为 JSON 字符串（键有序，便于逐字节比较）."""
    try:
        return json.dumps(data, ensure_ascii=False, sort_keys=True, default=_json_default)
    except (TypeError, ValueError):
        return "{}"


def _json_default(value: Any) -> Any:
    if isinstance(value, Fraction):
        return str(value)
    if hasattr(value, "item"):
        # numpy 标量
        return value.item()
    raise TypeError(f"无法序列化类型: {type(value).__name__}")


def to_fraction(value: Any) -> Fraction:
    """把数值精确转换为 Fraction.

    浮点数按其十进制表示转换，因此 0.6 得到 3/5 而不是二进制近似值。

    Args:
        value: int / float / str / Fraction

    Returns:
        精确的有理数
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(str(value).strip())


def format_number(value: float, digits: int = 6) -> str:
    """按有效数字格式化收益值，整数不带小数点."""
    return format(float(value), f".{digits}g")


def format_probability(value: float, digits: int = 6) -> str:
    """按有效数字格式化概率/指数，保留尾随零（如 0.648000）."""
    return format(float(value), f"#.{digits}g")


def format_exact(value: Fraction, digits: int = 6) -> str:
    """输出 '十进制 (分数)' 形式."""
    return f"{format_probability(float(value), digits)} ({value})"


def approx_equal(a: float, b: float, tol: float = TOLERANCE) -> bool:
    """绝对容差比较."""
    return abs(a - b) <= tol


def parallel_map(func: Callable[[T], R], items: Iterable[T], threads: int = 1) -> List[R]:
    """按输入顺序返回结果的并行 map.

    threads <= 1 时顺序执行；结果顺序总是与输入一致。
    """
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(func, items))
