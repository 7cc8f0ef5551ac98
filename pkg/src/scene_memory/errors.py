"""
异常定义

所有异常都继承自 SceneMemoryError，exit_code 决定命令行的退出码：
输入错误为 1，内部不变量被破坏为 2。
"""

from typing import Any


class SceneMemoryError(Exception):
    """场景记忆基础异常"""

    exit_code = 1


class DegreeError(SceneMemoryError, ValueError):
    """模糊度不在 [0,1] 区间，或基数为负"""


class SignatureError(SceneMemoryError, ValueError):
    """输入接口（角色与类型）定义不合法"""


class ObservationError(SceneMemoryError, ValueError):
    """观测与接口不一致，或镜像断言冲突"""


class EncodingError(SceneMemoryError, ValueError):
    """编码阶段的错误（未声明的角色或类型）"""


class CategoryError(SceneMemoryError, ValueError):
    """类别学习或记忆图操作不合法"""


class ConfigError(SceneMemoryError, ValueError):
    """配置文件错误"""


class LogFormatError(SceneMemoryError, ValueError):
    """演示日志格式错误"""


class MemoryFormatError(SceneMemoryError, ValueError):
    """记忆文件格式错误或已损坏"""


class InvariantViolation(SceneMemoryError):
    """记忆图内部不变量被破坏"""

    exit_code = 2


class ReplayAborted(SceneMemoryError):
    """回放因单个场景出错而中止，携带已生成的部分报告"""

    def __init__(self, message: str, report: Any, cause: Exception):
        super().__init__(message)
        self.report = report
        self.cause = cause
        self.exit_code = getattr(cause, "exit_code", 1)


class ExportError(SceneMemoryError):
    """导出目标无法写入"""
