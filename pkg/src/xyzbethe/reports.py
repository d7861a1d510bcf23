"""Serialization and rendering of solver output.

JSON files keep full double precision and are the round-trip format; CSV
mirrors the four-decimal "a+bi" layout of printed tables and is derived
output only.  The limit-scan plot renders root trajectories in the complex
plane to a static image file.
"""

from __future__ import annotations

import csv
import io
import json

import numpy as np

from .baesolver import REGULAR, SINGULAR, BetheSolution
from .xxz import MINUS_INFINITY, PLUS_INFINITY, XXZSolution, phantom_string

__all__ = [
    "fmt_complex",
    "solutions_to_json",
    "solutions_from_json",
    "solutions_to_csv",
    "xxz_solutions_to_json",
    "xxz_solutions_to_csv",
    "spectrum_to_csv",
    "plot_root_trajectories",
]


def fmt_complex(z: complex, decimals: int = 4) -> str:
    """Table notation: "a+bi" rounded; pure reals drop the imaginary part."""
    z = complex(z)
    re = round(z.real, decimals)
    im = round(z.imag, decimals)
    if im == 0:
        return f"{re:.{decimals}f}"
    if re == 0:
        return f"{im:.{decimals}f}i"
    return f"{re:.{decimals}f}{im:+.{decimals}f}i"


def _pair(z: complex) -> list[float]:
    return [complex(z).real, complex(z).imag]


def solutions_to_json(solutions: list[BetheSolution]) -> str:
    payload = []
    for s in solutions:
        entry = {
            "kind": s.kind,
            "beta": s.beta,
            "sum_ints": list(s.sum_ints),
            "roots": [_pair(z) for z in np.asarray(s.roots)],
            "energy": _pair(s.energy),
            "residual_norm": s.residual_norm,
            "sum_defect": s.sum_defect,
        }
        if s.kind == SINGULAR:
            entry["nu_roots"] = [_pair(z) for z in np.asarray(s.nu_roots)]
        payload.append(entry)
    return json.dumps({"solutions": payload}, indent=2)


def solutions_from_json(text: str) -> list[BetheSolution]:
    data = json.loads(text)
    out = []
    for entry in data["solutions"]:
        roots = np.array([complex(a, b) for a, b in entry["roots"]])
        nu = None
        if entry["kind"] == SINGULAR:
            nu = np.array([complex(a, b) for a, b in entry.get("nu_roots", [])])
        out.append(BetheSolution(
            roots=roots,
            beta=int(entry["beta"]),
            sum_ints=tuple(entry["sum_ints"]),
            residual_norm=float(entry["residual_norm"]),
            kind=entry["kind"],
            nu_roots=nu,
            energy=complex(*entry["energy"]),
            sum_defect=float(entry["sum_defect"]),
        ))
    return out


def solutions_to_csv(solutions: list[BetheSolution]) -> str:
    buf = io.StringIO()
    n_roots = max((len(s.roots) for s in solutions), default=0)
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([f"lambda_{j + 1}" for j in range(n_roots)]
                    + ["beta", "kind", "energy", "residual"])
    for s in solutions:
        cells = [fmt_complex(z) for z in np.asarray(s.roots)]
        cells += [""] * (n_roots - len(cells))
        writer.writerow(cells + [s.beta, s.kind, fmt_complex(s.energy),
                                 f"{s.residual_norm:.2e}"])
    return buf.getvalue()


def _phantom_labels(sol: XXZSolution) -> list[str]:
    if sol.phantom_count == 0:
        return []
    return phantom_string(sol.phantom_count, sol.phantom_side,
                          sol.string_phase).labels()


def xxz_solutions_to_json(solutions: list[XXZSolution]) -> str:
    payload = []
    for s in solutions:
        payload.append({
            "kind": s.kind,
            "beta": s.beta,
            "regular_roots": [_pair(z) for z in np.asarray(s.regular_roots)],
            "phantom_count": s.phantom_count,
            "phantom_side": s.phantom_side,
            "string_phase": s.string_phase,
            "sum_int": s.sum_int,
            "energy": _pair(s.energy),
            "residual_norm": s.residual_norm,
        })
    return json.dumps({"solutions": payload}, indent=2)


def xxz_solutions_from_json(text: str) -> list[XXZSolution]:
    data = json.loads(text)
    out = []
    for entry in data["solutions"]:
        out.append(XXZSolution(
            regular_roots=np.array([complex(a, b)
                                    for a, b in entry["regular_roots"]]),
            phantom_count=int(entry["phantom_count"]),
            phantom_side=entry["phantom_side"],
            beta=int(entry["beta"]),
            energy=complex(*entry["energy"]),
            residual_norm=float(entry["residual_norm"]),
            kind=entry["kind"],
            string_phase=float(entry["string_phase"]),
            sum_int=entry["sum_int"],
        ))
    return out


def xxz_solutions_to_csv(solutions: list[XXZSolution]) -> str:
    buf = io.StringIO()
    n_cols = max((len(s.regular_roots) + s.phantom_count for s in solutions),
                 default=0)
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([f"mu_{j + 1}" for j in range(n_cols)]
                    + ["m", "side", "beta", "kind", "energy", "residual"])
    for s in solutions:
        cells = [fmt_complex(z) for z in np.asarray(s.regular_roots)]
        cells += _phantom_labels(s)
        cells += [""] * (n_cols - len(cells))
        writer.writerow(cells + [s.phantom_count, s.phantom_side or "",
                                 s.beta, s.kind, fmt_complex(s.energy),
                                 f"{s.residual_norm:.2e}"])
    return buf.getvalue()


def spectrum_to_csv(entries) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["energy"])
    for e in entries:
        writer.writerow([fmt_complex(e.energy)])
    return buf.getvalue()


def path_log_to_csv(path_log: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["step", "im_tau", "solution_index",
                     "energy_re", "energy_im", "residual"])
    for rec in path_log:
        writer.writerow([rec["step"], f"{rec['im_tau']:.6f}",
                         rec["solution_index"],
                         f"{rec['energy_re']:.12g}", f"{rec['energy_im']:.12g}",
                         f"{rec['residual']:.2e}"])
    return buf.getvalue()


def plot_root_trajectories(path_log: list[dict], outfile: str) -> None:
    """Root paths in the complex plane as Im tau grows, one color per path."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    by_solution: dict[int, list[dict]] = {}
    for rec in path_log:
        by_solution.setdefault(rec["solution_index"], []).append(rec)

    fig, ax = plt.subplots(figsize=(7, 6))
    cmap = plt.get_cmap("tab20")
    for idx, recs in sorted(by_solution.items()):
        recs = sorted(recs, key=lambda r: r["step"])
        n_roots = len(recs[0]["roots"])
        color = cmap(idx % 20)
        for j in range(n_roots):
            xs = [r["roots"][j][0] for r in recs]
            ys = [r["roots"][j][1] for r in recs]
            ax.plot(xs, ys, "-", color=color, linewidth=0.8, alpha=0.8)
            ax.plot(xs[-1], ys[-1], "o", color=color, markersize=3)
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    ax.set_title("Bethe root trajectories under growing Im tau")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(outfile, dpi=150)
    plt.close(fig)
