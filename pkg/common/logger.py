# common/logger.py
"""
Logging configuration for the q-Askey verification toolkit
"""

import os
import json
import logging
import logging.handlers
import functools
from datetime import datetime
from typing import Optional


class StructuredFormatter(logging.Formatter):
    """Custom formatter for structured JSON logging"""

    def format(self, record: logging.LogRecord) -> str:
        """Format log record as structured JSON"""

        log_data = {
            'timestamp': datetime.fromtimestamp(record.created).isoformat(),
            'level': record.levelname,
            'logger': record.name,
            'message': record.getMessage(),
            'module': record.module,
            'function': record.funcName,
            'line': record.lineno
        }

        if hasattr(record, 'component'):
            log_data['component'] = record.component

        if hasattr(record, 'operation'):
            log_data['operation'] = record.operation

        if record.exc_info:
            log_data['exception'] = self.formatException(record.exc_info)

        return json.dumps(log_data, ensure_ascii=False)


class ColoredConsoleFormatter(logging.Formatter):
    """Colored console formatter for stderr diagnostics"""

    COLORS = {
        'DEBUG': '\033[36m',  # Cyan
        'INFO': '\033[32m',  # Green
        'WARNING': '\033[33m',  # Yellow
        'ERROR': '\033[31m',  # Red
        'CRITICAL': '\033[35m'  # Magenta
    }
    RESET = '\033[0m'

    def format(self, record: logging.LogRecord) -> str:
        """Format with colors for console output"""
        color = self.COLORS.get(record.levelname, '')

        # Format: [TIME] LEVEL [COMPONENT] MESSAGE
        time_str = datetime.fromtimestamp(record.created).strftime('%H:%M:%S')
        component = f"[{getattr(record, 'component', 'SYSTEM')}]"

        return f"{color}[{time_str}] {record.levelname} {component} {record.getMessage()}{self.RESET}"


class _ComponentFilter(logging.Filter):
    """Stamps every record passing through a module logger with its component"""

    def __init__(self, component: str):
        super().__init__()
        self.component = component

    def filter(self, record: logging.LogRecord) -> bool:
        if not hasattr(record, 'component'):
            record.component = self.component
        return True


def setup_logging(log_level: str = "INFO", log_file: Optional[str] = "./logs/qaskey.log") -> logging.Logger:
    """Setup logging for the toolkit; console goes to stderr, file gets JSON lines"""

    logger = logging.getLogger('qaskey')
    logger.setLevel(getattr(logging, log_level.upper()))
    logger.handlers.clear()

    # StreamHandler defaults to stderr, which keeps stdout clean for reports
    console_handler = logging.StreamHandler()
    console_handler.setLevel(getattr(logging, log_level.upper()))
    console_handler.setFormatter(ColoredConsoleFormatter())
    logger.addHandler(console_handler)

    if log_file:
        log_dir = os.path.dirname(log_file)
        if log_dir:
            os.makedirs(log_dir, exist_ok=True)

        file_handler = logging.handlers.RotatingFileHandler(
            log_file,
            maxBytes=10 * 1024 * 1024,  # 10MB
            backupCount=5,
            encoding='utf-8'
        )
        file_handler.setLevel(getattr(logging, log_level.upper()))
        file_handler.setFormatter(StructuredFormatter())
        logger.addHandler(file_handler)

    return logger


def get_module_logger(component: str) -> logging.Logger:
    """Get logger for a toolkit component"""
    logger = logging.getLogger(f'qaskey.{component}')

    if not any(isinstance(f, _ComponentFilter) for f in logger.filters):
        logger.addFilter(_ComponentFilter(component.upper()))

    return logger


def log_operation(operation: str):
    """Decorator for logging start/end of heavy verification operations"""

    def decorator(func):
        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            logger = logging.getLogger('qaskey.operations')
            extra = {'operation': operation, 'component': 'OPERATION'}

            logger.debug(f"Starting operation: {operation}", extra=extra)

            try:
                result = func(*args, **kwargs)
                logger.debug(f"Completed operation: {operation}", extra=extra)
                return result

            except Exception as e:
                logger.error(f"Failed operation: {operation} - {str(e)}", extra=extra)
                raise

        return wrapper

    return decorator
