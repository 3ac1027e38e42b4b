"""
Logging utilities for the D-SIC simulator
Provides structured (JSON) logging with numpy-aware payloads
"""

import logging
import json
from typing import Dict, Any, Optional
from datetime import datetime, timezone

import numpy as np

from ..config.settings import get_config
from ..config.constants import LOGGING_CONFIG


class StructuredLogger:
    """Structured logger that renders numeric payloads as JSON"""

    def __init__(self, name: str):
        self.config = get_config()
        self.logger = logging.getLogger(name)
        self.logger.setLevel(getattr(logging, self.config.log_level, logging.INFO))

        formatter = logging.Formatter(LOGGING_CONFIG['format'])

        # Add console handler if not already present
        if not self.logger.handlers:
            handler = logging.StreamHandler()
            handler.setFormatter(formatter)
            self.logger.addHandler(handler)

    def _to_jsonable(self, data: Any) -> Any:
        """Coerce numpy and complex values into JSON-safe types"""
        if isinstance(data, dict):
            return {str(key): self._to_jsonable(value) for key, value in data.items()}

        if isinstance(data, (list, tuple)):
            return [self._to_jsonable(item) for item in data]

        if isinstance(data, np.ndarray):
            return self._to_jsonable(data.tolist())

        if isinstance(data, (complex, np.complexfloating)):
            return {'re': float(data.real), 'im': float(data.imag)}

        if isinstance(data, np.integer):
            return int(data)

        if isinstance(data, (float, np.floating)):
            value = float(data)
            # JSON has no inf/nan literals
            return value if np.isfinite(value) else str(value)

        if isinstance(data, np.bool_):
            return bool(data)

        return data

    def _create_log_entry(self, level: str, message: str, extra: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
        """Create structured log entry"""
        log_entry = {
            'timestamp': datetime.now(timezone.utc).isoformat(),
            'level': level,
            'message': message,
            'service': LOGGING_CONFIG['service']
        }

        if extra:
            log_entry.update(self._to_jsonable(extra))

        return log_entry

    def _emit(self, level: int, name: str, message: str, extra: Optional[Dict[str, Any]]):
        if not self.logger.isEnabledFor(level):
            return
        if self.config.enable_structured_logs:
            log_entry = self._create_log_entry(name, message, extra)
            self.logger.log(level, json.dumps(log_entry, ensure_ascii=False))
        else:
            self.logger.log(level, message)

    def info(self, message: str, extra: Optional[Dict[str, Any]] = None):
        """Log info message"""
        self._emit(logging.INFO, 'INFO', message, extra)

    def error(self, message: str, extra: Optional[Dict[str, Any]] = None):
        """Log error message"""
        self._emit(logging.ERROR, 'ERROR', message, extra)

    def warning(self, message: str, extra: Optional[Dict[str, Any]] = None):
        """Log warning message"""
        self._emit(logging.WARNING, 'WARNING', message, extra)

    def debug(self, message: str, extra: Optional[Dict[str, Any]] = None):
        """Log debug message"""
        if self.config.debug:
            self._emit(logging.DEBUG, 'DEBUG', message, extra)

    def log_ls_solve(self, rows: int, columns: int, condition: float, residual_norm: float, pivoted: bool):
        """Log a least-squares solve"""
        self.debug(
            f"LS solve {rows}x{columns}",
            extra={
                'rows': rows,
                'columns': columns,
                'condition_estimate': condition,
                'residual_norm': residual_norm,
                'pivoted': pivoted,
                'component': 'canceller'
            }
        )

    def log_pilot_selection(self, ensemble_size: int, distribution: str, best_index: int,
                            criterion: float, papr_db: float):
        """Log the outcome of an ensemble pilot selection"""
        self.info(
            f"Pilot selected: candidate {best_index} of {ensemble_size}",
            extra={
                'ensemble_size': ensemble_size,
                'distribution': distribution,
                'best_index': best_index,
                'criterion': criterion,
                'papr_db': papr_db,
                'component': 'pilot_opt'
            }
        )

    def log_trial(self, experiment: str, trial: int, run_id: str, rsi_dbm: float):
        """Log a single Monte-Carlo trial"""
        self.debug(
            f"Trial {trial} done",
            extra={
                'experiment': experiment,
                'trial': trial,
                'run_id': run_id,
                'rsi_dbm': rsi_dbm,
                'component': 'experiments'
            }
        )

    def log_sweep_point(self, experiment: str, series: str, sweep_variable: float,
                        rsi_dbm: float, trials: int):
        """Log an aggregated sweep point"""
        self.info(
            f"{experiment}: {series} @ {sweep_variable}",
            extra={
                'experiment': experiment,
                'series': series,
                'sweep_variable': sweep_variable,
                'median_rsi_dbm': rsi_dbm,
                'trials': trials,
                'component': 'experiments'
            }
        )

    def log_experiment(self, experiment: str, master_seed: int, trials: int, output_dir: str,
                       latency_ms: int):
        """Log a finished experiment run"""
        self.info(
            f"Experiment finished: {experiment}",
            extra={
                'experiment': experiment,
                'master_seed': master_seed,
                'trials': trials,
                'output_dir': output_dir,
                'latency_ms': latency_ms,
                'component': 'experiments'
            }
        )


def get_logger(name: str) -> StructuredLogger:
    """Get a structured logger instance"""
    return StructuredLogger(name)
