"""Golden checks for the Berg multipliers: initial values, the dimension-n
formula, quadrature agreement and the three recurrences."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from .. import specfun as sf


@dataclass(frozen=True)
class GoldenRow:
    group: str
    label: str
    value: float
    expected: float
    rel_error: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.rel_error < self.tolerance

    def as_dict(self) -> dict:
        return asdict(self) | {"passed": self.passed}


def _row(group, label, value, expected, tol) -> GoldenRow:
    err = abs(value - expected) / abs(expected) if expected else abs(value)
    return GoldenRow(group, label, float(value), float(expected), float(err), tol)


def a_nd(n: int, d: int, k: int) -> float:
    """a_k^{n,d} := a_k^{n+d}[g_n]."""
    return sf.berg_multiplier_closed(n + d, n, k)


# (n, d, k) -> exact value of a_k^{n+d}[g_n]
INITIAL_VALUES = {
    (2, 1, 0): math.pi**2 / 4,
    (2, 1, 2): -(math.pi**2) / 32,
    (2, 1, 3): -4 / 45,
    (3, 1, 0): 2 * math.pi / 3,
    (3, 1, 3): -math.pi / 24,
}


def initial_values(tol: float = 1e-12) -> list[GoldenRow]:
    return [_row("initial", f"a^{{{n},{d}}}_{k}", a_nd(n, d, k), v, tol)
            for (n, d, k), v in INITIAL_VALUES.items()]


def same_dimension(nmax: int = 8, kmax: int = 12, tol: float = 1e-12) -> list[GoldenRow]:
    """a_k^n[g_n] = (n-1)/((1-k)(k+n-1))."""
    rows = []
    for n in range(2, nmax + 1):
        for k in range(kmax + 1):
            if k != 1:
                rows.append(_row("same_dim", f"n={n},k={k}", sf.berg_multiplier_closed(n, n, k),
                                 (n - 1) / ((1 - k) * (k + n - 1)), tol))
    return rows


def quadrature_agreement(kmax: int = 10, tol: float = 1e-6) -> list[GoldenRow]:
    rows = []
    for n in (2, 3):
        for d in (0, 1, 2):
            for k in range(0, kmax + 1, 2):
                rows.append(_row("quadrature", f"n={n},d={d},k={k}",
                                 sf.berg_multiplier_quadrature(n + d, n, k), a_nd(n, d, k), tol))
    return rows


def recurrences(nmax: int = 8, dmax: int = 4, kmax: int = 12, tol: float = 1e-12) -> list[GoldenRow]:
    rows = []
    ks = [k for k in range(kmax + 1) if k != 1]
    for n in range(2, nmax + 1):
        for k in ks:
            rows.append(_row("rec_I", f"n={n},k={k}", a_nd(n + 2, 1, k),
                             (n + 1) * (n + k - 1) / ((n - 1) * (n + k + 2)) * a_nd(n, 1, k), tol))
            rows.append(_row("rec_II", f"n={n},k={k}", a_nd(n, 1, k + 2),
                             (k - 1) * (n + k - 1) / ((k + 2) * (n + k + 2)) * a_nd(n, 1, k), tol))
            for d in range(dmax + 1):
                rows.append(_row("rec_III", f"n={n},d={d},k={k}", a_nd(n, d + 2, k),
                                 2 * math.pi / (n + d + 2 * k) * (a_nd(n, d, k) - a_nd(n, d, k + 2)), tol))
    return rows


GROUPS = {
    "initial": initial_values,
    "same_dim": same_dimension,
    "quadrature": quadrature_agreement,
    "recurrences": recurrences,
}


def all_rows() -> list[GoldenRow]:
    return [r for f in GROUPS.values() for r in f()]
