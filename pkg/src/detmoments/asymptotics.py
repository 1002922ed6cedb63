"""Large-n behaviour of the second moment for unit-variance symmetric matrices."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .catalog import egf_symmetric


def _exact(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


@dataclass(frozen=True)
class AsymptoticInput:
    """Parameters of the leading-order formula; mu2 is fixed to 1."""

    n: int
    m1: Fraction = Fraction(0)
    mu3: Fraction = Fraction(0)
    mu4: Fraction = Fraction(1)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        for name in ("m1", "mu3", "mu4"):
            object.__setattr__(self, name, _exact(getattr(self, name)))


def _bracket(inp: AsymptoticInput) -> float:
    m1, mu3, mu4 = float(inp.m1), float(inp.mu3), float(inp.mu4)
    return m1 * m1 * inp.n + 1 + 2 * m1 * mu3 + m1 * m1 * (43 + 4 * mu3 * mu3 - 10 * mu4) / 4


def log_asymptotic_f2(inp: AsymptoticInput) -> float:
    """log of 4 n^(3/2) n! / (3 sqrt(2 pi)) e^((mu4-5)/2) (m1^2 n + 1 + 2 m1 mu3 + m1^2 (43 + 4 mu3^2 - 10 mu4)/4)."""
    b = _bracket(inp)
    if b <= 0:
        raise ValueError("the bracket of the asymptotic formula is not positive for these parameters")
    n = inp.n
    return (math.log(4 / (3 * math.sqrt(2 * math.pi))) + 1.5 * math.log(n) + math.lgamma(n + 1)
            + (float(inp.mu4) - 5) / 2 + math.log(b))


def asymptotic_f2(inp: AsymptoticInput) -> float:
    return math.exp(log_asymptotic_f2(inp))


def exact_f2(n_values, m1=0, mu3=0, mu4=1) -> dict:
    """Exact E[det^2] from the symmetric EGF with mu2 = 1, one series for all n."""
    n_values = sorted(set(int(n) for n in n_values))
    order = max(n_values)
    asg = {"m1": _exact(m1), "mu2": 1, "mu3": _exact(mu3), "mu4": _exact(mu4)}
    series = egf_symmetric(2, order, asg).series
    out = {}
    for n in n_values:
        out[n] = series.coeffs[n].constant_value().re
    return out


def _log_fraction(x: Fraction) -> float:
    if x <= 0:
        raise ValueError("exact value is not positive")
    return math.log(x.numerator) - math.log(x.denominator)


@dataclass(frozen=True)
class AsymptoticRow:
    n: int
    exact: Fraction
    asymptotic: float
    relative_error: float


def asymptotic_error_report(n_values, m1=0, mu3=0, mu4=1) -> list:
    """Relative error |asymptotic / exact - 1|, computed in log space."""
    exact = exact_f2(n_values, m1, mu3, mu4)
    rows = []
    for n in sorted(exact):
        inp = AsymptoticInput(n, m1, mu3, mu4)
        la = log_asymptotic_f2(inp)
        ratio = math.exp(la - _log_fraction(exact[n]))
        rows.append(AsymptoticRow(n, exact[n], math.exp(la), abs(ratio - 1)))
    return rows
