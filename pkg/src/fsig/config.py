"""Tolerances used by the verification reports and the acceptance suite.

These are calibration choices, kept in one table so that every check reads
the same numbers.
"""

from fractions import Fraction


def curve_deviation(p: int, e: int) -> Fraction:
    """Allowed |s_e(t) - (1-t)/(n+1)| on the A_n signature curve."""
    return Fraction(5, p**e)


def corollary_slack(p: int, e: int) -> Fraction:
    """Slack in s_e(R, Delta) >= s_e(D, Diff) at a finite level."""
    return Fraction(2, p**e)


def cover_different_gap(p: int, e: int) -> Fraction:
    return Fraction(1, p**e)


SLOPE = Fraction(1, 20)
AN_EXTRAPOLATION = Fraction(1, 100)
AN_RAW = Fraction(1, 20)
HILBERT_KUNZ = Fraction(1, 20)
COVER_GAP = Fraction(1, 10)
RHS_AGREEMENT = Fraction(1, 50)
