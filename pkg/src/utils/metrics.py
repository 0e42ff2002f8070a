from statistics import fmean, median
from typing import Dict, Optional, Sequence


def summarize(values: Sequence[float]) -> Dict[str, Optional[float]]:
    """
    Summary statistics of a measurement column.

    Args:
        values: Measurements (may be empty)

    Returns:
        Dict with count, mean, median, min and max (None when empty)
    """
    if not values:
        return {'count': 0, 'mean': None, 'median': None, 'min': None, 'max': None}
    return {
        'count': len(values),
        'mean': fmean(values),
        'median': median(values),
        'min': min(values),
        'max': max(values),
    }


def reduction_ratio(baseline: float, improved: float) -> Optional[float]:
    """How many times smaller `improved` is than `baseline`; None if undefined."""
    if improved <= 0:
        return None if baseline <= 0 else float('inf')
    return baseline / improved
