"""
Formatting helpers for CSV headers and run summaries.
"""

import math

import numpy as np


def format_float(value: float) -> str:
    """
    Shortest round-trip text for a double, without a trailing ".0".

    Examples:
        format_float(0.0)  -> "0"
        format_float(0.5)  -> "0.5"
        format_float(1e-4) -> "0.0001"
    """
    if math.isnan(value):
        return "nan"
    return np.format_float_positional(float(value), trim="-")


def column_label(prefix: str, value: float) -> str:
    """Self-describing column name such as ggm_alpha0.5."""
    return f"{prefix}{format_float(value)}"


def format_metric(value, na_text: str = "N/A", digits: int = 6) -> str:
    """
    Format a metric for a summary line.

    Args:
        value: Number, or None/NaN for a missing result
        na_text: Text for missing values
        digits: Significant digits

    Returns:
        Formatted string (integers are printed as-is)
    """
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return na_text
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{value:.{digits}g}"


def format_duration(seconds: float) -> str:
    """Wall time as "850 ms", "12.3 s" or "4 min 05 s"."""
    if seconds < 1:
        return f"{seconds * 1000:.0f} ms"
    if seconds < 60:
        return f"{seconds:.1f} s"
    minutes, rest = divmod(int(round(seconds)), 60)
    return f"{minutes} min {rest:02d} s"
