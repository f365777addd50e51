"""Closed-form lower and upper bounds on the exponent gamma_d."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .core import PrefixCoveringDesign, compute_alpha
from .covering import CoveringDesign, _require_valid as _require_valid_cd, prepare

Number = Fraction | float


def cd_lower_bound(v: int, k: int, d: int) -> Fraction:
    """``d / (3 - 2v/(kd))``, the limit quality of the replicated transformation."""
    return Fraction(d) / (3 - Fraction(2 * v, k * d))


def padded_lower_bound(v: int, k: int, d: int) -> Fraction:
    """Bound obtained after padding a design that has no multi-matching."""
    return Fraction(d) / (3 - Fraction(2 * v, k * d + v))


def upper_bound(d: int) -> Number:
    """``d / (3(1 - sqrt(2/d)))``; exact when ``2d`` is a perfect square."""
    if d < 3:
        raise ValueError("d must be >= 3")
    r = math.isqrt(2 * d)
    if r * r == 2 * d:
        # sqrt(2/d) = r/d
        return Fraction(d) / (3 * (1 - Fraction(r, d)))
    return d / (3 * (1 - math.sqrt(2 / d)))


def truncate(x: Number, places: int = 4) -> str:
    """Decimal rendering cut (not rounded) after ``places`` digits."""
    q = Fraction(x) if isinstance(x, float) else x
    scale = 10**places
    units = math.floor(q * scale)
    sign = "-" if units < 0 else ""
    units = abs(units)
    return f"{sign}{units // scale}.{units % scale:0{places}d}"


def render(x: Number, exact: bool = False, places: int = 4) -> str:
    if exact and isinstance(x, Fraction):
        return str(x)
    return truncate(x, places)


@dataclass(frozen=True)
class BoundReport:
    d: int
    K: int | None
    alpha: int | None
    quality: Fraction | None
    lower: Fraction | None
    upper: Number

    def lines(self, exact: bool = False) -> list[str]:
        out = [f"d = {self.d}"]
        if self.quality is not None:
            out.append(f"PCD ({self.d},{self.K},{self.alpha}): quality {self.K}/{self.alpha} = "
                       f"{render(self.quality, exact)}")
        if self.lower is not None:
            out.append(f"covering-design lower bound: {render(self.lower, exact)}")
        out.append(f"upper bound: {render(self.upper, exact)}")
        return out


def bound_report(d: int, obj: CoveringDesign | PrefixCoveringDesign, workers: int = 1) -> BoundReport:
    if isinstance(obj, CoveringDesign):
        _require_valid_cd(obj)
        if obj.d != d:
            raise ValueError(f"design has {obj.d} blocks, expected d = {d}")
        return BoundReport(d, None, None, None, cd_lower_bound(obj.v, obj.k, d), upper_bound(d))
    if obj.d != d:
        raise ValueError(f"design has {obj.d} sequences, expected d = {d}")
    alpha = compute_alpha(obj, workers=workers)
    return BoundReport(d, obj.K, alpha, Fraction(obj.K, alpha), None, upper_bound(d))


# (v, k) of the covering designs behind the covering-design column, by d.
TABLE_DESIGNS: dict[int, tuple[int, int]] = {
    3: (3, 2), 4: (20, 12), 5: (45, 25), 6: (6, 3), 7: (7, 3), 8: (24, 10),
    9: (90, 36), 10: (80, 30), 11: (308, 110), 12: (36, 12), 13: (13, 4),
    14: (966, 294), 15: (405, 120), 16: (880, 256), 17: (782, 221), 18: (198, 54),
    19: (19, 5), 20: (80, 20), 21: (21, 5),
}

# Published 4-decimal values of the covering-design column.
TABLE_VALUES: dict[int, str] = {
    3: "1.5000", 4: "1.8461", 5: "2.1929", 6: "2.5714", 7: "3.0000", 8: "3.3333",
    9: "3.6818", 10: "4.0540", 11: "4.4160", 12: "4.8000", 13: "5.2000",
}

# Published SAT-solver column (from explicit small designs).
SAT_VALUES: dict[int, str] = {4: "1.9047", 5: "2.2222"}


@dataclass(frozen=True)
class TableRow:
    d: int
    lower_cd: Fraction | None
    lower_sat: Fraction | None
    upper_half_d: Fraction

    def csv(self, exact: bool = False) -> str:
        cells = [str(self.d)]
        for x in (self.lower_cd, self.lower_sat, self.upper_half_d):
            cells.append("" if x is None else render(x, exact))
        return ",".join(cells)

    def text(self, exact: bool = False) -> str:
        cells = [f"{self.d:>3}"]
        for x in (self.lower_cd, self.lower_sat, self.upper_half_d):
            cells.append(f"{'-' if x is None else render(x, exact):>10}")
        return " ".join(cells)


TABLE_HEADER_CSV = "d,lower_cd,lower_sat,upper_half_d"
TABLE_HEADER_TEXT = f"{'d':>3} {'lower_cd':>10} {'lower_sat':>10} {'d/2':>10}"


def table_row(d: int, cd: CoveringDesign | None = None, pcds: list[PrefixCoveringDesign] = (),
              workers: int = 1) -> TableRow:
    """One row; the covering-design entry is empty when no design is given."""
    lower = None
    if cd is not None:
        # scaling keeps v/(kd); padding (no multi-matching) yields the weaker padded bound
        prepared = prepare(cd)
        lower = bound_report(d, prepared.design).lower
    sat = None
    for p in pcds:
        if p.d == d:
            q = bound_report(d, p, workers).quality
            sat = q if sat is None else max(sat, q)
    return TableRow(d, lower, sat, Fraction(d, 2))
