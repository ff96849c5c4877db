"""Layouts of the square and triangle tables and a driver that fills them."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .embedding import ExponentPair, Method, NoApplicableMethod, best_embedding
from .quadrature import DEFAULT_SETTINGS
from .special import inv

P_ROWS = (3, 4, 5, 6, 7, 8, 9, 10, 20, 30, 40, 50, 60, 70, 80)
Q_ROWS = (3, 4, 5, 6, 7, 8, 9, 10)


@dataclass(frozen=True)
class TableLayout:
    number: int
    domain: str
    row_var: str
    rows: tuple
    methods: tuple

    def exponents(self, value):
        if self.row_var == "p":
            return ExponentPair(float(value), 2.0)
        return ExponentPair(math.inf, float(value))


TABLES = {
    2: TableLayout(2, "square", "p", P_ROWS, (Method.HLS1, Method.HLS2, Method.YOUNG)),
    3: TableLayout(3, "square", "q", Q_ROWS, (Method.YOUNG_INF,)),
    4: TableLayout(4, "triangle", "p", P_ROWS, (Method.HLS1, Method.HLS2, Method.YOUNG)),
    5: TableLayout(5, "triangle", "q", Q_ROWS, (Method.YOUNG_INF,)),
}


@dataclass
class Cell:
    c_p: float
    n: int
    dp_term: float
    measure_term: float
    c_p_4n: float | None = None


def display_4n_value(cell, e):
    """Value obtained when the triangle measure term is written as (4n)^-(1/p-1/q)."""
    expo = inv(e.p) - inv(e.q)
    mt = 1.0 if expo == 0.0 else (4.0 * cell.n) ** (-expo)
    return 2.0 ** (1.0 - inv(e.q)) * max(mt, cell.dp_term)


def compute_table(number, k_max=5, settings=DEFAULT_SETTINGS):
    """Return ``{row_value: {method: Cell or None}}``; None marks an inapplicable method."""
    layout = TABLES[number]
    out = {}
    for v in layout.rows:
        e = layout.exponents(v)
        row = {}
        for m in layout.methods:
            try:
                res = best_embedding(layout.domain, e, m, k_max, settings)
            except NoApplicableMethod:
                row[m] = None
                continue
            cell = Cell(res.c_p, res.n, res.dp_term, res.measure_term)
            if layout.domain == "triangle":
                cell.c_p_4n = display_4n_value(cell, e)
            row[m] = cell
        out[v] = row
    return out
