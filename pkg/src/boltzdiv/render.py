"""Text / CSV / JSON rendering of solver results.

Precision: shares with 2 decimals, utilities
and probabilities with 4, beta with 4 significant figures.
"""

from __future__ import annotations

import csv
import io
import json
import math
from typing import Optional, Sequence

import numpy as np

from .baselines import ComparisonReport
from .model import Allocation, DivisionProblem
from .optimize import Optimum, SmallBetaReport, UtilityCurve
from .utility import utilities


def _fixed(x: float, places: int) -> str:
    s = f"{x:.{places}f}"
    # never print "-0.00"
    return s[1:] if s.startswith("-") and float(s) == 0 else s


def share(x: float) -> str:
    return _fixed(x, 2)


def prob(x: float) -> str:
    return _fixed(x, 4)


util = prob


def beta(x: float) -> str:
    return f"{x:.4g}"


def sig(x: float) -> str:
    return f"{x:.6g}"


def num(x: float) -> str:
    """Input quantities (contributions, needs): shortest faithful form."""
    return f"{x:g}" if float(x) == round(float(x), 6) else repr(float(x))


def table(headers: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    widths = [len(h) for h in headers]
    for row in rows:
        widths = [max(w, len(c)) for w, c in zip(widths, row)]
    lines = ["  ".join(h.rjust(w) for h, w in zip(headers, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    for row in rows:
        lines.append("  ".join(c.rjust(w) for c, w in zip(row, widths)).rstrip())
    return "\n".join(lines)


def _csv(rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _json(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _r(x: float, places: int) -> float:
    v = round(float(x), places)
    return 0.0 if v == 0 else v


def _rb(x: float) -> float:
    return float(beta(x))


def _weights(problem: DivisionProblem, b: float) -> list[str]:
    with np.errstate(over="ignore"):
        return [beta(w) for w in np.exp(b * problem.contributions)]


# --- solve -----------------------------------------------------------------


def render_solution(
    problem: DivisionProblem,
    b: float,
    allocation: Allocation,
    probabilities: np.ndarray,
    fmt: str = "text",
    optimum: Optional[Optimum] = None,
    sampled: Optional[Allocation] = None,
) -> str:
    u = utilities(allocation.per_player, problem.needs, problem.amplitudes)
    total = float(u.sum())
    max_total = float(problem.amplitudes.sum())
    flavors = problem.layout.flavors if problem.is_heterogeneous else ()

    if fmt == "json":
        players = []
        for j, p in enumerate(problem.players):
            item = {
                "id": p.id,
                "contribution": p.contribution,
                "need": p.need,
                "share": _r(allocation.per_player[j], 2),
                "utility": _r(u[j], 4),
            }
            if problem.is_heterogeneous:
                item["probabilities"] = {f: _r(probabilities[j, i], 4) for i, f in enumerate(flavors)}
                item["flavor_shares"] = {f: _r(allocation.per_flavor[j, i], 2) for i, f in enumerate(flavors)}
            else:
                item["probability"] = _r(probabilities[j], 4)
            if sampled is not None:
                item["sampled_share"] = _r(sampled.per_player[j], 2)
            players.append(item)
        doc = {
            "mode": "fixed" if optimum is None else "optimized",
            "heterogeneous": problem.is_heterogeneous,
            "cake_size": problem.cake_size,
            "beta": _rb(b),
            "total_utility": _r(total, 4),
            "max_total_utility": _r(max_total, 4),
            "players": players,
        }
        if optimum is not None:
            doc["boundary"] = optimum.boundary
            doc["degenerate"] = optimum.degenerate
            doc["beta_max"] = _rb(optimum.beta_max)
        return _json(doc)

    if fmt == "csv":
        head = ["player", "contribution", "need", "beta"]
        head += [f"probability[{f}]" for f in flavors] or ["probability"]
        head += [f"share[{f}]" for f in flavors] + ["share", "utility"]
        if sampled is not None:
            head.append("sampled_share")
        rows = [head]
        for j, p in enumerate(problem.players):
            row = [p.id, num(p.contribution), num(p.need), beta(b)]
            if problem.is_heterogeneous:
                row += [prob(x) for x in probabilities[j]]
                row += [share(x) for x in allocation.per_flavor[j]]
            else:
                row.append(prob(probabilities[j]))
            row += [share(allocation.per_player[j]), util(u[j])]
            if sampled is not None:
                row.append(share(sampled.per_player[j]))
            rows.append(row)
        return _csv(rows)

    kind = f"heterogeneous cake, {len(flavors)} flavors" if problem.is_heterogeneous else "homogeneous cake"
    out = [f"Boltzmann division ({kind}, {problem.n} players, cake size {num(problem.cake_size)})"]
    if optimum is None:
        out.append(f"beta = {beta(b)} (fixed)")
    else:
        if optimum.degenerate:
            status = "utility is flat in beta; egalitarian split reported"
        elif optimum.boundary:
            status = "boundary of search range [0, " + beta(optimum.beta_max) + "]"
        else:
            status = "interior optimum"
        out.append(f"beta* = {beta(b)} ({status})")
    out.append(f"total utility = {util(total)} / {util(max_total)}")
    out.append("")

    if problem.is_heterogeneous:
        ids = problem.ids
        headers = ["player", "E_j", "D_j"] + [f"P[{f}]" for f in flavors]
        rows = [
            [ids[j], num(p.contribution), num(p.need)] + [prob(x) for x in probabilities[j]]
            for j, p in enumerate(problem.players)
        ]
        rows.append(["sum", "", ""] + [prob(x) for x in probabilities.sum(axis=0)])
        out.append("Allocation probabilities per flavor")
        out.append(table(headers, rows))
        out.append("")
        headers = ["player"] + [f"N[{f}]" for f in flavors] + ["N_j", "utility"]
        if sampled is not None:
            headers.append("sampled")
        rows = []
        for j in range(problem.n):
            row = [ids[j]] + [share(x) for x in allocation.per_flavor[j]]
            row += [share(allocation.per_player[j]), util(u[j])]
            if sampled is not None:
                row.append(share(sampled.per_player[j]))
            rows.append(row)
        total_row = ["sum"] + [share(x) for x in allocation.per_flavor.sum(axis=0)]
        total_row += [share(allocation.total), util(total)]
        if sampled is not None:
            total_row.append(share(sampled.total))
        rows.append(total_row)
        out.append("Shares (cake units)")
        out.append(table(headers, rows))
    else:
        headers = ["player", "E_j", "D_j", "exp(beta E_j)", "P_j", "N_j", "utility"]
        if sampled is not None:
            headers.append("sampled")
        weights = _weights(problem, b)
        rows = []
        for j, p in enumerate(problem.players):
            row = [p.id, num(p.contribution), num(p.need), weights[j], prob(probabilities[j]),
                   share(allocation.per_player[j]), util(u[j])]
            if sampled is not None:
                row.append(share(sampled.per_player[j]))
            rows.append(row)
        total_row = ["sum", num(problem.contributions.sum()), num(problem.needs.sum()), "",
                     prob(probabilities.sum()), share(allocation.total), util(total)]
        if sampled is not None:
            total_row.append(share(sampled.total))
        rows.append(total_row)
        out.append(table(headers, rows))
    return "\n".join(out) + "\n"


# --- compare ---------------------------------------------------------------


def render_comparison(report: ComparisonReport, fmt: str = "text") -> str:
    names = [c.name for c in report.criteria]

    if fmt == "json":
        doc = {
            "beta": _rb(report.beta_star),
            "cake_size": report.cake_size,
            "totals_only": report.totals_only,
            "criteria": [
                {
                    "name": c.name,
                    "total_utility": _r(c.total_utility, 4),
                    "players": [
                        {
                            "id": pid,
                            "share": _r(c.allocation.per_player[j], 2),
                            "deficiency": _r(c.deficiency[j], 2),
                            "utility": _r(c.utilities[j], 4),
                        }
                        for j, pid in enumerate(report.player_ids)
                    ],
                }
                for c in report.criteria
            ],
            "rankings": {pid: list(r) for pid, r in zip(report.player_ids, report.rankings)},
        }
        return _json(doc)

    if fmt == "csv":
        rows = [["player", "criterion", "share", "deficiency", "utility", "rank"]]
        for j, pid in enumerate(report.player_ids):
            for c in report.criteria:
                rank = report.rankings[j].index(c.name) + 1
                rows.append([pid, c.name, share(c.allocation.per_player[j]),
                             share(c.deficiency[j]), util(c.utilities[j]), str(rank)])
        return _csv(rows)

    headers = ["player", "E_j", "D_j"]
    for name in names:
        headers += [f"{name} N", "Def", "Utility"]
    rows = []
    for j, pid in enumerate(report.player_ids):
        row = [pid, num(report.contributions[j]), num(report.needs[j])]
        for c in report.criteria:
            row += [share(c.allocation.per_player[j]), share(c.deficiency[j]), util(c.utilities[j])]
        rows.append(row)
    total_row = ["total", "", ""]
    for c in report.criteria:
        total_row += ["", "", util(c.total_utility)]
    rows.append(total_row)

    out = [f"Division criteria compared (Boltzmann at beta = {beta(report.beta_star)})"]
    if report.totals_only:
        out.append("note: flavored cake; baselines compare player totals only")
    out.append("")
    out.append(table(headers, rows))
    out.append("")
    out.append("Total utility: " + ", ".join(f"{c.name} {util(c.total_utility)}" for c in report.criteria))
    out.append(f"Highest total utility: {report.best_criterion}")
    out.append("Share range (max - min): "
               + ", ".join(f"{c.name} {share(c.share_range)}" for c in report.criteria))
    out.append("")
    out.append("Preferred criteria per player (largest share first):")
    for pid, ranking in zip(report.player_ids, report.rankings):
        out.append(f"  {pid}: " + " > ".join(ranking))
    return "\n".join(out) + "\n"


# --- curve -----------------------------------------------------------------


def render_curve_csv(curve: UtilityCurve) -> str:
    rows = [["beta", "total_utility"]]
    rows += [[beta(b), util(u)] for b, u in curve.samples]
    return _csv(rows)


def curve_summary(curve: UtilityCurve) -> str:
    b, u = curve.argmax()
    betas = curve.betas
    step = float(betas[1] - betas[0]) if len(betas) > 1 else math.nan
    return (f"argmax beta = {beta(b)} (total utility {util(u)}); "
            f"{len(betas)} points, step {beta(step)}\n")


# --- diagnose --------------------------------------------------------------


def render_diagnostic(problem: DivisionProblem, report: SmallBetaReport, fmt: str = "text") -> str:
    verdict = "true" if report.predicts_interior_maximum else "false"
    if fmt == "json":
        doc = {
            "equal_share": problem.cake_size / problem.n,
            "slopes": {pid: float(sig(c)) for pid, c in zip(problem.ids, report.slopes)},
            "mean_slope": float(sig(report.mean_slope)),
            "mean_contribution": float(sig(report.mean_contribution)),
            "lhs": float(sig(report.lhs)),
            "rhs": float(sig(report.rhs)),
            "predicts_interior_maximum": report.predicts_interior_maximum,
        }
        return _json(doc)
    if fmt == "csv":
        rows = [["player", "contribution", "need", "slope"]]
        rows += [[pid, num(e), num(d), sig(c)]
                 for pid, e, d, c in zip(problem.ids, report.contributions, problem.needs, report.slopes)]
        return _csv(rows)
    headers = ["player", "E_j", "D_j", "C_j"]
    rows = [[pid, num(e), num(d), sig(c)]
            for pid, e, d, c in zip(problem.ids, report.contributions, problem.needs, report.slopes)]
    out = [
        f"Small-beta diagnostic (homogeneous cake, {problem.n} players, "
        f"equal share {share(problem.cake_size / problem.n)})",
        "C_j = slope of player utility at the equal share",
        "",
        table(headers, rows),
        "",
        f"mean slope         = {sig(report.mean_slope)}",
        f"mean contribution  = {sig(report.mean_contribution)}",
        f"(1/n) sum C_j E_j  = {sig(report.lhs)}",
        f"mean C * mean E    = {sig(report.rhs)}",
        f"predicts interior maximum: {verdict}",
    ]
    return "\n".join(out) + "\n"
