"""Plot-ready data grids for the seven standard figures, plus rendering.

Figures 1-4 belong to the pulsating-mass scenario, 5-7 to the
inverse-square frequency scenario. The parameter values behind the
figures are a documented choice (m0 = omega0 = hbar = 1, pulsation
frequencies in [0.1, 3], base frequencies in [0.5, 3], times in
[0.2, 5]); every CSV records the values actually used in its '#' header.

Each figure writes <out>/figure<N>.csv and, unless rendering is turned
off, a matplotlib PNG next to it. The CSV is the primary, byte-stable
artifact; the PNG is a convenience view of the same rows.
"""

from __future__ import annotations

import math
import os

import numpy as np

from .entropy import joint_entropy_gaussian
from .errors import ConfigError, SingularityError
from .model import Scenario
from .output import write_csv
from .wavefunction import sigma_x_sq

FIGURE_IDS = range(1, 8)

FIGURE_DEFAULTS = {
    1: {"m0": 1.0, "omega0": 1.0, "nu": 1.0, "hbar": 1.0, "t_steps": 64, "n_x": 1024},
    2: {"m0": 1.0, "omega0": 1.0, "hbar": 1.0, "nu_min": 0.1, "nu_max": 3.0,
        "nu_steps": 29, "t_min": 0.1, "t_max": 2.0, "t_steps": 19},
    3: {"m0": 1.0, "omega0": 1.0, "hbar": 1.0, "t": 1.0,
        "nu_min": 0.1, "nu_max": 1.0, "nu_steps": 90},
    4: {"m0": 1.0, "omega0": 1.0, "hbar": 1.0, "t": 1.0,
        "nu_min": 1.0, "nu_max": 3.0, "nu_steps": 100},
    5: {"m0": 1.0, "omega0": 1.0, "hbar": 1.0, "t_min": 0.2, "t_max": 5.0,
        "t_steps": 48, "n_x": 2048},
    6: {"m0": 1.0, "hbar": 1.0, "t_min": 0.2, "t_max": 5.0, "t_steps": 48,
        "omega0_min": 0.5, "omega0_max": 3.0, "omega0_steps": 25},
    7: {"m0": 1.0, "hbar": 1.0, "t_min": 0.2, "t_max": 5.0, "t_steps": 48,
        "omega0_min": 0.5, "omega0_max": 3.0, "omega0_steps": 25},
}

_INT_PARAMS = {"t_steps", "n_x", "nu_steps", "omega0_steps"}


def figure_params(figure_id: int, overrides: dict = None) -> dict:
    if figure_id not in FIGURE_IDS:
        raise ConfigError(f"figure id must be 1..7, got {figure_id!r}")
    params = dict(FIGURE_DEFAULTS[figure_id])
    for key, value in (overrides or {}).items():
        if key not in params:
            raise ConfigError(f"figure {figure_id} has no parameter {key!r}")
        params[key] = int(value) if key in _INT_PARAMS else float(value)
    return params


def _meta(figure_id, params, extra=()):
    lines = [f"figure: {figure_id}"]
    lines += [f"{k}: {params[k]}" for k in sorted(params)]
    lines += list(extra)
    return lines


def _density_surface(s: Scenario, times, n_x):
    """(t, x, density) triples on a common grid wide enough for the
    broadest slice and fine enough for the narrowest."""
    widest = max(math.sqrt(sigma_x_sq(s, t)) for t in times)
    half_width = 10.0 * widest
    dx = 2.0 * half_width / n_x
    x = -half_width + dx * np.arange(n_x)
    rows = []
    for t in times:
        var = sigma_x_sq(s, t)
        dens = np.exp(-x * x / (2.0 * var)) / math.sqrt(2.0 * math.pi * var)
        rows.extend((t, xi, di) for xi, di in zip(x, dens))
    return rows


def _build_figure1(params):
    s = Scenario.pulsating_mass(params["m0"], params["omega0"], params["nu"], params["hbar"])
    t_max = 0.45 * math.pi / params["nu"]
    times = np.linspace(0.0, t_max, params["t_steps"] + 1)
    rows = _density_surface(s, times, params["n_x"])
    return ("t", "x", "density_x"), rows, ["position density of the ground state"]


def _build_figure2(params):
    nus = np.linspace(params["nu_min"], params["nu_max"], params["nu_steps"] + 1)
    times = np.linspace(params["t_min"], params["t_max"], params["t_steps"] + 1)
    rows = []
    for t in times:
        for nu in nus:
            s = Scenario.pulsating_mass(params["m0"], params["omega0"], nu, params["hbar"])
            try:
                rows.append((t, nu, joint_entropy_gaussian(s, t).s_joint))
            except SingularityError:
                continue  # (t, nu) inside a mass-zero guard: no row
    return ("t", "nu", "s_joint"), rows, [
        "second axis is the mass-pulsation frequency nu (documented assumption)"]


def _build_figure_nu_section(params):
    nus = np.linspace(params["nu_min"], params["nu_max"], params["nu_steps"] + 1)
    t = params["t"]
    rows = []
    for nu in nus:
        s = Scenario.pulsating_mass(params["m0"], params["omega0"], nu, params["hbar"])
        try:
            rows.append((nu, joint_entropy_gaussian(s, t).s_joint))
        except SingularityError:
            continue
    return ("nu", "s_joint"), rows, [f"joint entropy versus nu at fixed t = {t}"]


def _build_figure5(params):
    s = Scenario.inverse_square_frequency(params["m0"], params["omega0"], params["hbar"])
    times = np.linspace(params["t_min"], params["t_max"], params["t_steps"] + 1)
    rows = _density_surface(s, times, params["n_x"])
    return ("t", "x", "density_x"), rows, ["position density of the ground state"]


def _build_figure_entropy_grid(params):
    times = np.linspace(params["t_min"], params["t_max"], params["t_steps"] + 1)
    omegas = np.linspace(params["omega0_min"], params["omega0_max"],
                         params["omega0_steps"] + 1)
    rows = []
    for t in times:
        for w0 in omegas:
            s = Scenario.inverse_square_frequency(params["m0"], w0, params["hbar"])
            rows.append((t, w0, joint_entropy_gaussian(s, t).s_joint))
    return ("t", "omega0", "s_joint"), rows, [
        "value depends on (t, omega0) only through the ratio t/omega0"]


_BUILDERS = {
    1: _build_figure1,
    2: _build_figure2,
    3: _build_figure_nu_section,
    4: _build_figure_nu_section,
    5: _build_figure5,
    6: _build_figure_entropy_grid,
    7: _build_figure_entropy_grid,
}

_PNG_METADATA = {"Software": "tdho"}  # fixed string keeps PNG bytes stable


def _render(figure_id, header, rows, png_path):
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    data = np.array([[float(c) for c in row] for row in rows])
    fig = plt.figure(figsize=(7.0, 5.0), dpi=130)
    if figure_id in (1, 5):
        ax = fig.add_subplot(111)
        t, x, d = data.T
        nx = int(np.count_nonzero(t == t[0]))
        mesh = ax.pcolormesh(x[:nx], t.reshape(-1, nx)[:, 0], d.reshape(-1, nx),
                             shading="auto")
        fig.colorbar(mesh, ax=ax, label=header[2])
        ax.set_xlabel("x")
        ax.set_ylabel("t")
    elif figure_id in (2, 7):
        ax = fig.add_subplot(111, projection="3d")
        ax.plot_trisurf(data[:, 0], data[:, 1], data[:, 2], cmap="viridis",
                        linewidth=0.1)
        ax.set_xlabel(header[0])
        ax.set_ylabel(header[1])
        ax.set_zlabel(header[2])
    elif figure_id == 6:
        ax = fig.add_subplot(111)
        t = np.unique(data[:, 0])
        w = np.unique(data[:, 1])
        grid = data[:, 2].reshape(len(t), len(w))
        contour = ax.contour(t, w, grid.T, levels=14)
        ax.clabel(contour, inline=True, fontsize=7)
        ax.set_xlabel(header[0])
        ax.set_ylabel(header[1])
    else:
        ax = fig.add_subplot(111)
        ax.plot(data[:, 0], data[:, 1])
        ax.set_xlabel(header[0])
        ax.set_ylabel(header[1])
        ax.grid(True, alpha=0.3)
    ax.set_title(f"figure {figure_id}")
    fig.tight_layout()
    fig.savefig(png_path, metadata=_PNG_METADATA)
    plt.close(fig)


def emit_figure_data(figure_id: int, out_dir, params: dict = None,
                     render: bool = True) -> list:
    """Write figure<N>.csv (and figure<N>.png unless render is off) under
    out_dir; returns the written paths."""
    params = figure_params(figure_id, params)
    header, rows, notes = _BUILDERS[figure_id](params)
    os.makedirs(out_dir, exist_ok=True)
    csv_path = os.path.join(out_dir, f"figure{figure_id}.csv")
    meta = _meta(figure_id, params, notes + ["columns: " + ",".join(header)])
    write_csv(csv_path, header, rows, meta)
    written = [csv_path]
    if render:
        png_path = os.path.join(out_dir, f"figure{figure_id}.png")
        _render(figure_id, header, rows, png_path)
        written.append(png_path)
    return written
