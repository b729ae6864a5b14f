"""配置管理模块."""

import os
import yaml
import logging
from typing import Any, Dict, Optional
from pathlib import Path

logger = logging.getLogger(__name__)

THREADS_ENV = "GAMEKIT_THREADS"


class ConfigManager:
    """配置管理器."""

    def __init__(self, config_path: str = "gamekit.yaml"):
        """初始化配置管理器.

        Args:
            config_path: 配置文件路径
        """
        self.config_path = Path(config_path)
        self._config: Optional[Dict[str, Any]] = None
        self.load_config()

    def load_config(self) -> None:
        """加载配置文件，缺失的键用默认值补齐."""
        defaults = self._get_default_config()
        if not self.config_path.exists():
            logger.debug(f"配置文件不存在，使用默认配置: {self.config_path}")
            self._config = self._substitute_env_vars(defaults)
            return

        try:
            with open(self.config_path, 'r', encoding='utf-8') as f:
                loaded = yaml.safe_load(f) or {}

            self._config = self._substitute_env_vars(self._merge(defaults, loaded))
            logger.info(f"配置文件加载成功: {self.config_path}")
        except (OSError, yaml.YAMLError) as e:
            logger.error(f"加载配置文件失败: {e}")
            self._config = self._substitute_env_vars(defaults)

    def _merge(self, base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
        """递归合并配置字典."""
        merged = dict(base)
        for key, value in override.items():
            if isinstance(value, dict) and isinstance(merged.get(key), dict):
                merged[key] = self._merge(merged[key], value)
            else:
                merged[key] = value
        return merged

    def _substitute_env_vars(self, config: Any) -> Any:
        """递归替换配置中的环境变量.

        Args:
            config: 配置对象

        Returns:
            替换后的配置对象
        """
        if isinstance(config, dict):
            return {k: self._substitute_env_vars(v) for k, v in config.items()}
        elif isinstance(config, list):
            return [self._substitute_env_vars(item) for item in config]
        elif isinstance(config, str) and config.startswith('${') and config.endswith('}'):
            # 处理 ${VAR_NAME} 格式
            env_var = config[2:-1]
            return os.getenv(env_var, config)
        else:
            return config

    def _get_default_config(self) -> Dict[str, Any]:
        """获取默认配置."""
        return {
            'numeric': {
                'tolerance': 1e-9,
                'significant_digits': 6
            },
            'limits': {
                'banzhaf_players': 24,
                'shapley_players': 20,
                'jury_voters': 20,
                'normal_form_strategies': 12
            },
            'parallel': {
                'threads': '${' + THREADS_ENV + '}'
            },
            'ipd': {
                'rounds': 10,
                'seed': 0
            },
            'logging': {
                'level': 'WARNING'
            }
        }

    def get(self, key: str, default: Any = None) -> Any:
        """获取配置值.

        Args:
            key: 配置键，支持点号分隔的嵌套键
            default: 默认值

        Returns:
            配置值
        """
        if self._config is None:
            return default

        keys = key.split('.')
        value = self._config

        try:
            for k in keys:
                value = value[k]
            return value
        except (KeyError, TypeError):
            return default

    def get_threads(self) -> int:
        """获取并行线程数（未设置或非法时为 1，即顺序执行）."""
        raw = os.getenv(THREADS_ENV) or self.get('parallel.threads', 1)
        try:
            threads = int(raw)
        except (TypeError, ValueError):
            return 1
        return max(threads, 1)

    def get_tolerance(self) -> float:
        """获取数值比较容差."""
        return float(self.get('numeric.tolerance', 1e-9))

    def get_significant_digits(self) -> int:
        """获取输出有效数字位数."""
        return int(self.get('numeric.significant_digits', 6))

    def get_limit(self, name: str) -> int:
        """获取枚举规模上限."""
        return int(self.get(f'limits.{name}'))

    def validate_config(self) -> bool:
        """验证配置的有效性.

        Returns:
            配置是否有效
        """
        if not self._config:
            logger.error("配置未加载")
            return False

        try:
            tolerance = self.get_tolerance()
            digits = self.get_significant_digits()
        except (TypeError, ValueError):
            logger.error("numeric.tolerance / numeric.significant_digits 必须为数值")
            return False

        if tolerance <= 0:
            logger.error("numeric.tolerance 必须为正数")
            return False

        if digits < 1:
            logger.error("numeric.significant_digits 必须 >= 1")
            return False

        for name in ('banzhaf_players', 'shapley_players', 'jury_voters', 'normal_form_strategies'):
            try:
                if self.get_limit(name) < 1:
                    logger.error(f"limits.{name} 必须 >= 1")
                    return False
            except (TypeError, ValueError):
                logger.error(f"缺少必需的配置项: limits.{name}")
                return False

        logger.debug("配置验证通过")
        return True

    def save_config(self) -> None:
        """保存配置到文件."""
        if not self._config:
            logger.error("没有配置可保存")
            return

        try:
            with open(self.config_path, 'w', encoding='utf-8') as f:
                yaml.dump(self._config, f, default_flow_style=False,
                          allow_unicode=True, indent=2)
            logger.info(f"配置已保存到: {self.config_path}")
        except OSError as e:
            logger.error(f"保存配置失败: {e}")

    def update_config(self, key: str, value: Any) -> None:
        """更新配置值.

        Args:
            key: 配置键
            value: 新值
        """
        if not self._config:
            self._config = {}

        keys = key.split('.')
        config = self._config

        # 导航到目标位置
        for k in keys[:-1]:
            if k not in config:
                config[k] = {}
            config = config[k]

        config[keys[-1]] = value
        logger.debug(f"配置已更新: {key} = {value}")

    def get_all_config(self) -> Dict[str, Any]:
        """获取所有配置.

        Returns:
            完整配置字典
        """
        return self._config or {}
