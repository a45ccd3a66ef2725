import logging
import os
import sys
from datetime import datetime

from src.config.settings import LOG_DATE_FORMAT, LOG_FORMAT, LOG_LEVEL


def setup_logging(log_dir=None, level=LOG_LEVEL):
    """
    Set up logging configuration for the command line tools.

    Records go to standard output, so log lines always go to standard error.

    Args:
        log_dir (str): Directory to store log files, or None for no log file
        level (str): Logging level name
    """
    handlers = [logging.StreamHandler(sys.stderr)]

    if log_dir:
        # Create log directory if it doesn't exist
        if not os.path.exists(log_dir):
            os.makedirs(log_dir)

        # Create log filename with timestamp
        timestamp = datetime.now().strftime('%Y%m%d_%H%M%S')
        log_file = os.path.join(log_dir, f'ekrlab_{timestamp}.log')
        handlers.append(logging.FileHandler(log_file))

    # Configure logging
    logging.basicConfig(
        level=getattr(logging, str(level).upper(), logging.INFO),
        format=LOG_FORMAT,
        datefmt=LOG_DATE_FORMAT,
        handlers=handlers,
        force=True,
    )

    logger = logging.getLogger('EkrLab')
    logger.debug('Logging initialized')
    return logger
