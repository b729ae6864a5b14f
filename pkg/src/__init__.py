"""gamekit - 有限博弈分析工具集（极小极大、纳什均衡、投票权力、博弈树、重复博弈）."""

__version__ = "0.1.0"
__author__ = "gamekit Team"
