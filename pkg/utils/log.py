# log.py

import logging

from pythonjsonlogger import jsonlogger
from rich.logging import RichHandler

LOG_FORMATS = ('rich', 'json')


def configure_logging(verbosity: int = 0, log_format: str = 'rich'):
    """
    Configures the root logger for command-line runs.

    Parameters:
    - verbosity (int): 0 for warnings, 1 for info, 2 or more for debug.
    - log_format (str): 'rich' for a console handler, 'json' for JSON lines on stderr.
    """
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity >= 2:
        level = logging.DEBUG

    if log_format == 'json':
        handler = logging.StreamHandler()
        handler.setFormatter(jsonlogger.JsonFormatter('%(asctime)s %(levelname)s %(name)s %(message)s'))
    else:
        handler = RichHandler(show_path=False, rich_tracebacks=True)
        handler.setFormatter(logging.Formatter('%(message)s'))

    root = logging.getLogger()
    root.handlers.clear()
    root.addHandler(handler)
    root.setLevel(level)
