"""
Parsers for command-line and config-file values.
"""

import math
import re
from pathlib import Path

import numpy as np
from dotenv import dotenv_values


class ParseError(Exception):
    """Custom exception for parsing errors."""
    pass


class ValidationError(Exception):
    """Custom exception for validation errors."""
    pass


# "3pi", "-0.5pi", "pi", "pi/2", "2pi/3", "1e-3"
_PI_PATTERN = re.compile(
    r"^(?P<coef>[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?|[+-])?\*?pi(?:/(?P<den>\d+\.?\d*))?$"
)

# Decimal places kept on range points (removes 0.30000000000000004 noise)
RANGE_DECIMALS = 12


def parse_number(text: str) -> float:
    """
    Parse a real number, accepting a `pi` suffix.

    Args:
        text: e.g. "1.5", "1e-4", "3pi", "pi/2"

    Returns:
        The value as float

    Raises:
        ParseError: If the text is not a number

    Examples:
        parse_number("3pi")  -> 9.42477796076938
        parse_number("pi/2") -> 1.5707963267948966
    """
    if text is None:
        raise ParseError("Missing number")
    cleaned = str(text).strip().lower()
    match = _PI_PATTERN.match(cleaned)
    if match:
        coef = match.group("coef")
        if coef in (None, "+"):
            value = math.pi
        elif coef == "-":
            value = -math.pi
        else:
            value = float(coef) * math.pi
        if match.group("den"):
            den = float(match.group("den"))
            if den == 0:
                raise ParseError(f"Division by zero in {text!r}")
            value /= den
        return value

    try:
        value = float(cleaned)
    except ValueError:
        raise ParseError(f"Not a number: {text!r}")
    if not math.isfinite(value):
        raise ParseError(f"Number must be finite: {text!r}")
    return value


def parse_range(text: str) -> np.ndarray:
    """
    Parse "start:stop:step" into an inclusive grid.

    The stop value is included when it lies on the step lattice.

    Raises:
        ParseError: If the range is malformed, start >= stop or step <= 0

    Examples:
        parse_range("0:1:0.25") -> [0, 0.25, 0.5, 0.75, 1]
    """
    parts = str(text).split(":")
    if len(parts) != 3:
        raise ParseError(f"Range must look like start:stop:step, got {text!r}")
    start, stop, step = (parse_number(p) for p in parts)
    if step <= 0:
        raise ParseError(f"Range step must be positive, got {step}")
    if start >= stop:
        raise ParseError(f"Range start must be below stop, got {start} >= {stop}")

    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return np.round(start + step * np.arange(count), RANGE_DECIMALS)


def parse_list(text: str) -> list[float]:
    """Parse a comma-separated list of numbers, keeping the given order."""
    items = [item for item in str(text).split(",") if item.strip()]
    if not items:
        raise ParseError(f"Empty list: {text!r}")
    return [parse_number(item) for item in items]


def parse_grid(text: str) -> np.ndarray:
    """
    Parse either a range (contains ':') or a comma list into a strictly
    increasing grid.
    """
    if ":" in str(text):
        return parse_range(text)
    values = np.array(parse_list(text))
    if np.any(np.diff(values) <= 0):
        raise ParseError(f"Grid values must be strictly increasing: {text!r}")
    return values


def parse_z(text) -> int | None:
    """'full' (or empty) -> None, otherwise a positive integer range."""
    if text is None or str(text).strip().lower() in ("", "full"):
        return None
    try:
        z = int(str(text).strip())
    except ValueError:
        raise ParseError(f"z must be 'full' or an integer, got {text!r}")
    if z < 1:
        raise ParseError(f"z must be at least 1, got {z}")
    return z


def parse_sites(text: str) -> list[int]:
    """Comma-separated 0-based site indices."""
    try:
        sites = [int(item) for item in str(text).split(",") if item.strip()]
    except ValueError:
        raise ParseError(f"Sites must be integers: {text!r}")
    if not sites:
        raise ParseError("No sites given")
    return sites


def parse_outcomes(text: str) -> list[int]:
    """Outcome string such as "011" or "0,1,1"."""
    digits = str(text).replace(",", "").strip()
    if not digits or any(d not in "01" for d in digits):
        raise ParseError(f"Outcomes must be 0/1 digits, got {text!r}")
    return [int(d) for d in digits]


def parse_bool(text) -> bool:
    if isinstance(text, bool):
        return text
    value = str(text).strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off", ""):
        return False
    raise ParseError(f"Not a boolean: {text!r}")


def load_config_file(path: str | Path, allowed_keys) -> dict[str, str]:
    """
    Read a flat key=value config file.

    Keys may use dashes or underscores; they are normalized to underscores.
    Matching is case-sensitive, so T (averaging window) and t (time grid)
    stay distinct.

    Raises:
        ParseError: If the file does not exist
        ValidationError: If it names keys outside allowed_keys
    """
    path = Path(path)
    if not path.is_file():
        raise ParseError(f"Config file not found: {path}")

    raw = dotenv_values(path)
    config = {key.strip().replace("-", "_"): value for key, value in raw.items()}
    unknown = sorted(set(config) - set(allowed_keys))
    if unknown:
        raise ValidationError(f"Unknown config keys in {path}: {', '.join(unknown)}")
    return {key: value for key, value in config.items() if value is not None}
