import logging
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Iterable, Optional

from tqdm import tqdm

from config import Config

_configured = False


def setup_logging(level: str = Config.LOG_LEVEL) -> logging.Logger:
    """Set up logging configuration"""
    global _configured
    handlers = [logging.StreamHandler()]
    if Config.LOG_FILE:
        handlers.append(logging.FileHandler(Config.LOG_FILE))

    if not _configured:
        logging.basicConfig(
            level=getattr(logging, level.upper()),
            format=Config.LOG_FORMAT,
            handlers=handlers
        )
        _configured = True
    else:
        logging.getLogger().setLevel(getattr(logging, level.upper()))
    return logging.getLogger("polycf")


def get_logger(name: str) -> logging.Logger:
    """Module logger; configuration is left to setup_logging"""
    return logging.getLogger(name)


def progress(iterable: Optional[Iterable] = None, total: Optional[int] = None,
             desc: str = "", enabled: Optional[bool] = None) -> tqdm:
    """Progress bar on stderr, silent unless enabled or Config.SHOW_PROGRESS"""
    if enabled is None:
        enabled = Config.SHOW_PROGRESS
    return tqdm(iterable, total=total, desc=desc, disable=not enabled, leave=False)


def format_scientific(value: Optional[Fraction],
                      significant: int = Config.ERROR_SIGNIFICANT_DIGITS) -> str:
    """Render an exact value as e.g. 1.51e-4; None renders as 'undef'"""
    if value is None:
        return "undef"
    if value == 0:
        return "0"
    with localcontext() as ctx:
        ctx.prec = significant + Config.GUARD_DIGITS
        decimal_value = Decimal(value.numerator) / Decimal(value.denominator)
        return f"{decimal_value:.{significant - 1}e}"


def format_rational(value: Optional[Fraction]) -> Optional[str]:
    """'p/q' string used by the JSON reports"""
    return None if value is None else str(value)
