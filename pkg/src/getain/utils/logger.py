import json
import logging
import logging.config
import logging.handlers
import os

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path

from ..common.settings import LOG_CONFIG_FILE, LOG_DIR, PYPROJECT_FILE

# 全局实例
_log_instance: logging.Logger | None = None

_FORMAT = "%(asctime)s | %(levelname)-7s | %(name)s:%(module)s:%(lineno)d | %(message)s"


def _project_version(pyproject_file: Path) -> str:
    try:
        with open(pyproject_file, "rb") as f:
            return tomllib.load(f)["project"]["version"]
    except (OSError, KeyError, tomllib.TOMLDecodeError):
        return "unknown"


def create_logger(
    project_name: str,
    log_dir: Path,
    config_file: Path,
    pyproject_file: Path,
    initial_level: str = "DEBUG",
) -> logging.Logger:
    """创建项目日志器, 优先使用 json 配置文件"""
    logger = logging.getLogger(project_name)
    if config_file.exists():
        with open(config_file, "r", encoding="utf-8") as f:
            config = json.load(f)
        for handler in config.get("handlers", {}).values():
            # 相对路径的日志文件放到 log_dir 下
            if "filename" in handler and not Path(handler["filename"]).is_absolute():
                log_dir.mkdir(parents=True, exist_ok=True)
                handler["filename"] = str(log_dir / handler["filename"])
        logging.config.dictConfig(config)
    else:
        logger.setLevel(initial_level)
        console = logging.StreamHandler()
        console.setLevel(logging.INFO)
        console.setFormatter(logging.Formatter(_FORMAT))
        logger.addHandler(console)
        try:
            log_dir.mkdir(parents=True, exist_ok=True)
            file_handler = logging.handlers.RotatingFileHandler(
                log_dir / f"{project_name}.log", maxBytes=5 * 1024 * 1024, backupCount=3, encoding="utf-8"
            )
            file_handler.setLevel(initial_level)
            file_handler.setFormatter(logging.Formatter(_FORMAT))
            logger.addHandler(file_handler)
        except OSError:
            logger.warning(f"log dir {log_dir} not writable, file logging disabled")

    level = os.environ.get("GETAIN_LOG_LEVEL")
    if level:
        for handler in logger.handlers:
            if isinstance(handler, logging.StreamHandler) and not isinstance(handler, logging.FileHandler):
                handler.setLevel(level.upper())

    logger.debug(f"{project_name} {_project_version(pyproject_file)} logger ready")
    return logger


def get_logger() -> logging.Logger:
    global _log_instance
    if _log_instance is None:
        _log_instance = create_logger(
            project_name="getain",
            log_dir=LOG_DIR,
            config_file=LOG_CONFIG_FILE,
            pyproject_file=PYPROJECT_FILE,
            initial_level="DEBUG",
        )
    return _log_instance
