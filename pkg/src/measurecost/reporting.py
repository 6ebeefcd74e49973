"""Delimited output and figure rendering for the command-line front end."""

from __future__ import annotations

import os
import tempfile

import numpy as np

from .linalg import LN2


def format_value(value) -> str:
    """Fixed CSV cell format: 12 significant digits, '.' decimal, plain ints."""
    if value is None:
        return ""
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value) + 0.0:.12g}"  # + 0.0 folds -0.0 into 0


def write_csv(path: str, fieldnames, rows) -> None:
    """Write rows atomically: UTF-8, LF endings, mandatory header.

    The file appears only when completely written (temp file + rename), so a
    failing run never leaves a partial CSV behind.
    """
    lines = [",".join(fieldnames)]
    for row in rows:
        lines.append(",".join(format_value(row[name]) for name in fieldnames))
    payload = "\n".join(lines) + "\n"
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(prefix=".measurecost-", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(payload)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def unit_scale(units: str) -> float:
    """Divisor taking nats to the requested unit."""
    if units == "nats":
        return 1.0
    if units == "bits":
        return LN2
    raise ValueError(f"unknown units {units!r}")


def _figure():
    import matplotlib

    matplotlib.use("Agg")
    matplotlib.rcParams["svg.hashsalt"] = "measurecost"
    import matplotlib.pyplot as plt

    return plt


def _save(fig, path: str) -> None:
    fig.savefig(path, metadata={"Date": None} if path.endswith(".svg") else None)


def render_qec5_figure(rows, path: str, units: str) -> None:
    """Four cost curves against the noise strength, one line per scheme."""
    plt = _figure()
    scale = unit_scale(units)
    gammas = [r.gamma for r in rows]
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.plot(gammas, [r.e_proj / scale for r in rows], color="red", label="joint measurement (exact)")
    ax.plot(gammas, [r.e_sep / scale for r in rows], color="blue", label="four separate devices")
    ax.plot(gammas, [r.e_su / scale for r in rows], color="green", label="general lower bound")
    ax.plot(gammas, [r.e_lan / scale for r in rows], color="black", label="naive Landauer bound")
    ax.set_xlabel("noise strength")
    ax.set_ylabel("energy / (kT ln 2)" if units == "bits" else "energy / kT")
    ax.legend(frameon=False)
    ax.axhline(0.0, color="0.8", linewidth=0.6, zorder=0)
    fig.tight_layout()
    _save(fig, path)
    plt.close(fig)


def render_zeno_figure(result, path: str, units: str) -> None:
    """Per-step and cumulative measurement cost over the stabilisation run."""
    plt = _figure()
    scale = unit_scale(units)
    steps = np.arange(1, len(result.per_step_cost) + 1)
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.plot(steps, np.cumsum(result.per_step_cost) / scale, color="red", label="cumulative cost")
    ax.plot(steps, result.per_step_cost / scale, color="blue", label="per-step cost")
    ax.set_xlabel("measurement step")
    ax.set_ylabel("energy / (kT ln 2)" if units == "bits" else "energy / kT")
    ax.legend(frameon=False)
    fig.tight_layout()
    _save(fig, path)
    plt.close(fig)
