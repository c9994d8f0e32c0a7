from .codec import dumps, jsonable, loads, parse_rational
from .logging import configure_logging

__all__ = ["configure_logging", "dumps", "loads", "jsonable", "parse_rational"]
