"""Static renderings: SVG region plots and CSV equilibrium tables."""

from __future__ import annotations

import csv
import io
from xml.sax.saxutils import escape

from .games import format_rational
from .multigame import DoubleGame, RegionDiagram, TypeGrid
from .regularity import ne_table

_PALETTE = ["#e8f1fa", "#fdebd3", "#e3f4e1", "#f6e0ef", "#fff7c2", "#e6e1f7", "#dff3f3", "#f4e4dc"]


def _ne_label(dg: DoubleGame, eqs) -> str:
    return " ".join(f"({','.join(dg.g1.label(p))})" for p in eqs) or "none"


def region_svg(diagram: RegionDiagram, size: int = 480, margin: int = 56) -> str:
    """Unit square with ``lam`` across and ``gam`` up; generic cells shaded and labelled."""
    dg = diagram.dg
    side = size - 2 * margin

    def x(v):
        return margin + float(v) * side

    def y(v):
        return margin + (1 - float(v)) * side

    colours: dict[tuple, str] = {}
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}" font-family="sans-serif" font-size="11">',
        f'<rect x="0" y="0" width="{size}" height="{size}" fill="white"/>',
    ]
    for cell in diagram.cells:
        if not cell.is_generic:
            continue
        fill = colours.setdefault(cell.equilibria, _PALETTE[len(colours) % len(_PALETTE)])
        x0, x1 = x(cell.lam.lo), x(cell.lam.hi)
        y0, y1 = y(cell.gam.hi), y(cell.gam.lo)
        parts.append(
            f'<rect x="{x0:.2f}" y="{y0:.2f}" width="{x1 - x0:.2f}" height="{y1 - y0:.2f}" '
            f'fill="{fill}" stroke="none"/>'
        )
        parts.append(
            f'<text x="{(x0 + x1) / 2:.2f}" y="{(y0 + y1) / 2 + 4:.2f}" text-anchor="middle">'
            f"{escape(_ne_label(dg, cell.equilibria))}</text>"
        )
    for b in diagram.lambda_breaks:
        parts.append(f'<line x1="{x(b):.2f}" y1="{y(0):.2f}" x2="{x(b):.2f}" y2="{y(1):.2f}" stroke="black"/>')
        parts.append(f'<text x="{x(b):.2f}" y="{y(0) + 16:.2f}" text-anchor="middle">{format_rational(b)}</text>')
    for b in diagram.gamma_breaks:
        parts.append(f'<line x1="{x(0):.2f}" y1="{y(b):.2f}" x2="{x(1):.2f}" y2="{y(b):.2f}" stroke="black"/>')
        parts.append(f'<text x="{x(0) - 6:.2f}" y="{y(b) + 4:.2f}" text-anchor="end">{format_rational(b)}</text>')
    parts += [
        f'<rect x="{margin}" y="{margin}" width="{side}" height="{side}" fill="none" stroke="black" stroke-width="2"/>',
        f'<text x="{x(0):.2f}" y="{y(0) + 16:.2f}" text-anchor="middle">0</text>',
        f'<text x="{x(1):.2f}" y="{y(0) + 16:.2f}" text-anchor="middle">1</text>',
        f'<text x="{x(0) - 6:.2f}" y="{y(1) + 4:.2f}" text-anchor="end">1</text>',
        f'<text x="{size / 2:.2f}" y="{size - 12}" text-anchor="middle">lambda (player 1)</text>',
        f'<text x="14" y="{size / 2:.2f}" text-anchor="middle" transform="rotate(-90 14 {size / 2:.2f})">'
        "gamma (player 2)</text>",
        "</svg>",
    ]
    return "\n".join(parts) + "\n"


def ne_table_csv(dg: DoubleGame, grid: TypeGrid) -> str:
    """Local NE per type pair; rows are gamma types from high to low, columns lambda types."""
    table = ne_table(dg, grid)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["gamma \\ lambda", *(format_rational(v) for v in grid.lambda_values)])
    for n in reversed(range(grid.ell)):
        w.writerow([
            format_rational(grid.gamma_values[n]),
            *(_ne_label(dg, table[m][n]) for m in range(grid.k)),
        ])
    return buf.getvalue()
