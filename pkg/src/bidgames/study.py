"""End-to-end tic-tac-toe study: tables, optimal openings, and figures.

Computes, for every chip total in range: the unrestricted threshold, the
center-opening and corner-opening thresholds, and which opening classes are
optimal; reproduces the small abstract tables the positions reduce to;
identifies which reachable boards realize each published position table;
and renders everything as JSON, CSV, the residue-row text layout used for
golden-file diffs, and matplotlib figures.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from . import reference_tables as ref
from .analysis import periodicity_constants
from .bidding import Rule
from .graphs import GameGraph, build_primitive, topological_order, wedge
from .holdings import ChipHolding
from .richman import richman_bounded
from .thresholds import decode_value, threshold_keys
from .ttt import build_ttt, canonical

OPENING_CELLS = {"center": 4, "corner": 0, "edge": 1}


def abstract_game(name: str) -> GameGraph:
    """The small games the study's tables refer to, by display name."""
    A = lambda: build_primitive("A")  # noqa: E731
    games = {
        "E": lambda: build_primitive("E"),
        "A^2": lambda: build_primitive("A_pow", 2),
        "B^2": lambda: build_primitive("B_pow", 2),
        "B^3": lambda: build_primitive("B_pow", 3),
        "A^B^2": lambda: wedge(A(), build_primitive("B_pow", 2)),
        "(A^B^2)^B": lambda: wedge(wedge(A(), build_primitive("B_pow", 2)), build_primitive("B")),
        "(A^B^2)^B^2": lambda: wedge(
            wedge(A(), build_primitive("B_pow", 2)), build_primitive("B_pow", 2)
        ),
        "(A^B^2)^B^3": lambda: wedge(
            wedge(A(), build_primitive("B_pow", 2)), build_primitive("B_pow", 3)
        ),
    }
    return games[name]()


@dataclass
class TTTStudy:
    k_max: int
    r_value: Fraction
    p_value: Fraction
    constants: tuple[int, int, int]  # M, m, m_bar
    f_all: list[int]  # root threshold keys, unrestricted
    f_center: list[int]
    f_corner: list[int]
    f_edge: list[int]
    center_optimal: list[int]
    corner_optimal: list[int]
    edge_optimal: list[int]
    abstract_mismatches: dict[str, list[int]] = field(default_factory=dict)
    center_mismatches: list[int] = field(default_factory=list)
    corner_mismatches: list[int] = field(default_factory=list)
    identifications: dict[str, dict] = field(default_factory=dict)

    def to_json_obj(self) -> dict:
        def render(keys: Sequence[int]) -> list[str]:
            return [str(decode_value(key, k, Rule.STANDARD)) for k, key in enumerate(keys)]

        return {
            "k_max": self.k_max,
            "critical_fraction": str(self.r_value),
            "random_turn_value": str(self.p_value),
            "periodicity": {"M": self.constants[0], "m": self.constants[1], "m_bar": self.constants[2]},
            "thresholds": {
                "all": render(self.f_all),
                "center": render(self.f_center),
                "corner": render(self.f_corner),
                "edge": render(self.f_edge),
            },
            "optimal_openings": {
                "center": self.center_optimal,
                "corner": self.corner_optimal,
                "edge": self.edge_optimal,
            },
            "reference_mismatches": {
                "center": self.center_mismatches,
                "corner": self.corner_mismatches,
                "abstract": self.abstract_mismatches,
            },
            "position_identification": self.identifications,
        }


def run_study(k_max: int = 255, identify_positions: bool = True) -> TTTStudy:
    """Compute the full study up to chip total ``k_max``."""
    g = build_ttt()
    order = topological_order(g)
    vidx = {lab: i for i, lab in enumerate(g.labels)}
    child = {
        name: vidx[canonical(place_mark(cell, "A"))] for name, cell in OPENING_CELLS.items()
    }
    bob_children = [vidx[canonical(place_mark(cell, "B"))] for cell in (0, 1, 4)]

    prof = richman_bounded(g, with_random_turn=True)
    r_value = prof.r[g.start]
    p_value = prof.p[g.start]
    assert r_value is not None and p_value is not None
    consts = periodicity_constants(g, prof)

    from .thresholds import combine_key

    f_all: list[int] = []
    roots: dict[str, list[int]] = {name: [] for name in OPENING_CELLS}
    per_k_keys: list[list[Optional[int]]] = []
    for k in range(k_max + 1):
        keys = threshold_keys(g, k, Rule.STANDARD, order)
        per_k_keys.append(keys)
        f_all.append(keys[g.start])  # type: ignore[arg-type]
        fb = max(keys[t] for t in bob_children)  # type: ignore[type-var]
        for name, v in child.items():
            roots[name].append(combine_key(keys[v], fb, k, Rule.STANDARD))  # type: ignore[arg-type]

    center_opt, corner_opt, edge_opt = [], [], []
    for k in range(k_max + 1):
        best = min(roots[n][k] for n in OPENING_CELLS)
        if roots["center"][k] == best:
            center_opt.append(k)
        if roots["corner"][k] == best:
            corner_opt.append(k)
        if roots["edge"][k] == best:
            edge_opt.append(k)

    study = TTTStudy(
        k_max,
        r_value,
        p_value,
        (consts.M, consts.m, consts.m_bar),
        f_all,
        roots["center"],
        roots["corner"],
        roots["edge"],
        center_opt,
        corner_opt,
        edge_opt,
    )

    study.center_mismatches = [
        k
        for k in range(min(k_max, 2 * ref.CENTER_OPENING.period - 1) + 1)
        if roots["center"][k] != ref.CENTER_OPENING.expected_key(k)
    ]
    study.corner_mismatches = [
        k
        for k in range(min(k_max, 2 * ref.CORNER_OPENING.period - 1) + 1)
        if roots["corner"][k] != ref.CORNER_OPENING.expected_key(k)
    ]

    for table in ref.ABSTRACT_TABLES:
        game = abstract_game(table.name)
        sub_order = topological_order(game)
        bad = []
        for k in range(2 * table.period):
            key = threshold_keys(game, k, Rule.STANDARD, sub_order)[game.start]
            if key != table.expected_key(k):
                bad.append(k)
        study.abstract_mismatches[table.name] = bad

    if identify_positions:
        study.identifications = _identify_positions(g, per_k_keys, k_max)
    return study


def place_mark(cell: int, mark: str) -> str:
    from .ttt import EMPTY_BOARD, place

    return place(EMPTY_BOARD, cell, mark)


def _identify_positions(
    g: GameGraph, per_k_keys: Sequence[Sequence[Optional[int]]], k_max: int
) -> dict[str, dict]:
    """Match published position tables against reachable boards.

    The diagrams behind the position names are not part of the text, so a
    name is "identified" when some board at its depth reproduces the whole
    table over the computed range; otherwise the best near-miss is reported.
    """
    depth_of = {lab: sum(c != "." for c in lab) for lab in g.labels}
    named: dict[str, ref.ReferenceTable] = dict(ref.POSITION_TABLES)
    for table_name, positions in ref.POSITION_EQUIVALENCES.items():
        table = next(t for t in ref.ABSTRACT_TABLES if t.name == table_name)
        for pos in positions:
            named[pos] = table
    out: dict[str, dict] = {}
    for pos, table in sorted(named.items()):
        depth = int(pos[0])
        span = min(k_max, 2 * table.period - 1)
        expected = [table.expected_key(k) for k in range(span + 1)]
        best_board, best_miss = None, None
        matches = []
        for v, lab in enumerate(g.labels):
            if depth_of[lab] != depth or g.outcome[v] is not None:
                continue
            miss = sum(
                1 for k in range(span + 1) if per_k_keys[k][v] != expected[k]
            )
            if miss == 0:
                matches.append(lab)
            if best_miss is None or miss < best_miss:
                best_board, best_miss = lab, miss
        entry: dict = {"table": table.name, "span": span + 1}
        if matches:
            entry["status"] = "identified"
            entry["boards"] = matches
        else:
            entry["status"] = "unresolved"
            entry["closest_board"] = best_board
            entry["mismatch_count"] = best_miss
        out[pos] = entry
    return out


# -- rendering ----------------------------------------------------------------


def _residue_cell(key: int, k: int) -> str:
    val = decode_value(key, k, Rule.STANDARD)
    return str(k + 1) if val.never else str(val)  # never-wins displays as k+1


def render_residue_table(
    keys: Sequence[int], period: int, multiplier: int, title: str, per_row: int = 12
) -> str:
    """Text layout with one row per residue block: ``r+  entries``.

    Entries are the base-period values; totals beyond one period must obey
    ``f(period + r) = multiplier + f(r)`` for the layout to be faithful,
    which the caller is expected to have verified.
    """
    lines = [f"# {title}", f"# f({period}n + r) = {multiplier}n + entry"]
    span = min(len(keys), period)
    for r0 in range(0, span, per_row):
        cells = [_residue_cell(keys[r], r) for r in range(r0, min(r0 + per_row, span))]
        lines.append(f"{r0}+\t" + "\t".join(cells))
    return "\n".join(lines) + "\n"


def reference_residue_table(table: ref.ReferenceTable, title: str, per_row: int = 12) -> str:
    keys = [table.expected_key(k) for k in range(table.period)]
    return render_residue_table(keys, table.period, table.multiplier, title, per_row)


def study_csv(study: TTTStudy) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(["k", "f_all", "f_center", "f_corner", "f_edge", "optimal_openings"])
    for k in range(study.k_max + 1):
        opts = [
            name
            for name, ks in (
                ("center", study.center_optimal),
                ("corner", study.corner_optimal),
                ("edge", study.edge_optimal),
            )
            if k in ks
        ]
        w.writerow(
            [
                k,
                decode_value(study.f_all[k], k, Rule.STANDARD),
                decode_value(study.f_center[k], k, Rule.STANDARD),
                decode_value(study.f_corner[k], k, Rule.STANDARD),
                decode_value(study.f_edge[k], k, Rule.STANDARD),
                "+".join(opts),
            ]
        )
    return buf.getvalue()


def write_report(study: TTTStudy, outdir: str) -> list[str]:
    """Write JSON/CSV/text tables and figures; returns the file list."""
    import os

    os.makedirs(outdir, exist_ok=True)
    written = []

    def emit(name: str, text: str) -> None:
        path = os.path.join(outdir, name)
        with open(path, "w") as fh:
            fh.write(text)
        written.append(path)

    emit("report.json", json.dumps(study.to_json_obj(), indent=2, sort_keys=True) + "\n")
    emit("study.csv", study_csv(study))
    if study.k_max + 1 >= ref.CENTER_OPENING.period:
        emit(
            "center_opening.txt",
            render_residue_table(study.f_center, 256, 133, "center opening thresholds"),
        )
        emit(
            "corner_opening.txt",
            render_residue_table(study.f_corner, 256, 137, "corner opening thresholds"),
        )
    written.extend(write_figures(study, outdir))
    return written


def write_figures(study: TTTStudy, outdir: str) -> list[str]:
    import os

    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    paths = []

    def half_key(key: int) -> float:
        return key / 2.0  # holding keys are twice the chip amount

    span = min(study.k_max, 64)
    ks = list(range(span + 1))
    fig, ax = plt.subplots(figsize=(8, 5))
    ax.step(ks, [half_key(study.f_center[k]) for k in ks], where="post", label="center opening")
    ax.step(ks, [half_key(study.f_corner[k]) for k in ks], where="post", label="corner opening")
    ax.plot(ks, [float(study.r_value) * k for k in ks], "k--", lw=1, label="critical fraction")
    ax.set_xlabel("total chips k")
    ax.set_ylabel("chips Alice needs")
    ax.set_title("Opening thresholds")
    ax.legend()
    p = os.path.join(outdir, "thresholds.png")
    fig.savefig(p, dpi=120, bbox_inches="tight")
    plt.close(fig)
    paths.append(p)

    fig, ax = plt.subplots(figsize=(8, 4))
    ks2 = list(range(8, study.k_max + 1))
    ax.plot(ks2, [abs(half_key(study.f_all[k]) / k - float(study.r_value)) for k in ks2], lw=1)
    ax.axhline(0, color="k", lw=0.5)
    ax.set_xlabel("total chips k")
    ax.set_ylabel("|f(k)/k - R|")
    ax.set_title("Convergence of the discrete threshold")
    p = os.path.join(outdir, "convergence.png")
    fig.savefig(p, dpi=120, bbox_inches="tight")
    plt.close(fig)
    paths.append(p)
    return paths
