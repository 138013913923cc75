"""
Centralized logging configuration for the cone-deformation toolkit.
Console output goes to stderr so that command JSON on stdout stays clean.
"""
import logging
import time
from pathlib import Path

from decouple import config

# Create logs directory
LOGS_DIR = Path(__file__).parent.parent.parent / 'logs'
LOGS_DIR.mkdir(exist_ok=True)

CONSOLE_LEVEL = config('CONE_LOG_LEVEL', default='WARNING')

LOGGING_CONFIG = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{levelname} {asctime} {module} {process:d} {thread:d} {message}',
            'style': '{',
        },
        'simple': {
            'format': '{levelname} {asctime} {module} {message}',
            'style': '{',
        },
        'json': {
            'format': '{"level": "%(levelname)s", "time": "%(asctime)s", "module": "%(module)s", "message": "%(message)s"}',
        },
    },
    'handlers': {
        'console': {
            'level': CONSOLE_LEVEL,
            'class': 'logging.StreamHandler',
            'formatter': 'simple',
        },
        'file': {
            'level': 'INFO',
            'class': 'logging.handlers.RotatingFileHandler',
            'filename': LOGS_DIR / 'cone.log',
            'maxBytes': 10485760,  # 10MB
            'backupCount': 5,
            'formatter': 'verbose',
        },
        'error_file': {
            'level': 'ERROR',
            'class': 'logging.handlers.RotatingFileHandler',
            'filename': LOGS_DIR / 'errors.log',
            'maxBytes': 10485760,  # 10MB
            'backupCount': 5,
            'formatter': 'verbose',
        },
        'solver_file': {
            'level': 'DEBUG',
            'class': 'logging.handlers.RotatingFileHandler',
            'filename': LOGS_DIR / 'solver.log',
            'maxBytes': 10485760,  # 10MB
            'backupCount': 3,
            'formatter': 'json',
        },
    },
    'loggers': {
        'django': {
            'handlers': ['console', 'file'],
            'level': 'INFO',
            'propagate': False,
        },
        'cone': {
            'handlers': ['console', 'file', 'error_file'],
            'level': 'INFO',
            'propagate': False,
        },
        'cone.solver': {
            'handlers': ['solver_file'],
            'level': 'DEBUG',
            'propagate': False,
        },
    },
    'root': {
        'level': 'WARNING',
        'handlers': ['console'],
    },
}


class PerformanceLogger:
    """Context manager for performance logging."""

    def __init__(self, operation_name: str, logger: logging.Logger = None):
        self.operation_name = operation_name
        self.logger = logger or logging.getLogger(__name__)
        self.start_time = None
        self.duration = None

    def __enter__(self):
        self.start_time = time.perf_counter()
        self.logger.info(f"Starting operation: {self.operation_name}")
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.duration = time.perf_counter() - self.start_time

        if exc_type:
            self.logger.error(
                f"Operation failed: {self.operation_name} after {self.duration:.2f}s",
                exc_info=(exc_type, exc_val, exc_tb)
            )
        else:
            self.logger.info(f"Operation completed: {self.operation_name} in {self.duration:.2f}s")


class SolverEventLogger:
    """Structured events emitted by the Newton solver and the level-set tracer."""

    def __init__(self):
        self.logger = logging.getLogger('cone.solver')

    def log_iteration(self, iteration: int, residual: float, step: float):
        self.logger.debug(
            f"Iteration {iteration}: residual={residual:.3e} step={step:.3e}",
            extra={
                'iteration': iteration,
                'residual': residual,
                'step': step,
                'event_type': 'newton_iteration'
            }
        )

    def log_step_rejected(self, iteration: int, step: float, reason: str):
        self.logger.debug(
            f"Iteration {iteration}: rejected step {step:.3e} ({reason})",
            extra={
                'iteration': iteration,
                'step': step,
                'reason': reason,
                'event_type': 'step_rejected'
            }
        )

    def log_solve_finished(self, converged: bool, iterations: int, residual: float):
        self.logger.info(
            f"Solve finished: converged={converged} iterations={iterations} residual={residual:.3e}",
            extra={
                'converged': converged,
                'iterations': iterations,
                'residual': residual,
                'event_type': 'solve_finished'
            }
        )

    def log_continuation_step(self, index: int, residual: float, min_margin: float):
        self.logger.info(
            f"Continuation point {index}: residual={residual:.3e} margin={min_margin:.3e}",
            extra={
                'index': index,
                'residual': residual,
                'min_margin': min_margin,
                'event_type': 'continuation_step'
            }
        )
