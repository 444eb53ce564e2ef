"""Logging definitions."""
import logging

logger = logging.getLogger('killingbeck')
warn_type = 'killingbeck'


def tagged(subtype: str, msg: str) -> str:
    """Prefix a log message with its warning subtype."""
    return f'[{warn_type}.{subtype}] {msg}'
