import logging
import os
from datetime import datetime

DEFAULT_LOG_DIR = "logs"
DEFAULT_LOG_LEVEL = "INFO"


def get_logger(name: str) -> logging.Logger:
    """Configure and return logger instance.
    
    Args:
        name: Logger name (usually __name__)
        
    Returns:
        Configured logger instance
    """
    logger = logging.getLogger(name)
    
    if not logger.handlers:
        level = _resolve_level()
        logger.setLevel(level)
        
        log_dir = os.getenv("SLIDINGK_LOG_DIR", DEFAULT_LOG_DIR)
        os.makedirs(log_dir, exist_ok=True)
        
        file_handler = logging.FileHandler(
            os.path.join(log_dir, f"slidingk_{datetime.now().strftime('%Y%m%d')}.log")
        )
        file_handler.setLevel(level)
        
        console_handler = logging.StreamHandler()
        console_handler.setLevel(level)
        
        formatter = logging.Formatter(
            '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
        )
        file_handler.setFormatter(formatter)
        console_handler.setFormatter(formatter)
        
        logger.addHandler(file_handler)
        logger.addHandler(console_handler)
    
    return logger


def _resolve_level() -> int:
    """Read the log level from SLIDINGK_LOG_LEVEL, falling back to INFO."""
    name = os.getenv("SLIDINGK_LOG_LEVEL", DEFAULT_LOG_LEVEL).upper()
    level = logging.getLevelName(name)
    return level if isinstance(level, int) else logging.INFO
