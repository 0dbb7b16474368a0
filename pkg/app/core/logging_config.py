import logging

LOG_FORMAT = "%(asctime)s - %(levelname)s - %(message)s"


def setup_logging(level: str = "WARNING") -> None:
    """
    Configure root logging once for the CLI and the HTTP app.

    Args:
        level: Logging level name, e.g. "INFO".
    """
    numeric_level = getattr(logging, level.upper(), None)
    if not isinstance(numeric_level, int):
        raise ValueError(f"Unknown log level: {level}")
    logging.basicConfig(level=numeric_level, format=LOG_FORMAT, force=True)
