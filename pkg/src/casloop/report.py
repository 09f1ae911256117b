"""CSV writers and figure rendering for scenario runs.

Every emitted file starts with comment lines carrying the tool version,
the config hash and the column units; numbers are written with repr-round
precision so repeated runs are byte-identical.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from . import __version__


def _fmt(x):
    return f"{float(x):.17g}"


# scattering sign/normalization convention carried in output headers
MIE_CONVENTION = ("scattered field = alpha_L (outgoing TM) + beta_L "
                  "(outgoing TE) per unit regular incident multipole; "
                  "alpha_1 > 0 for eps > 1 in vacuum")


def write_csv(path, columns, rows, config_sha, units_note, extra_notes=()):
    with open(path, "w") as fh:
        fh.write(f"# casloop {__version__}\n")
        fh.write(f"# config sha256: {config_sha}\n")
        fh.write(f"# columns: {units_note}\n")
        for note in extra_notes:
            fh.write(f"# {note}\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) if not isinstance(v, str) else v
                              for v in row) + "\n")
    return path


def write_force_sweep_csv(path, rows, config_sha):
    columns = ["separation_m", "Fx_N", "Fy_N", "Fz_N", "order2_Fz",
               "order4_Fz", "quad_error", "L_max"]
    return write_csv(path, columns, rows, config_sha,
                     "separations in meters, forces in newtons",
                     extra_notes=(f"convention: {MIE_CONVENTION}",))


def write_z_spectrum_csv(path, rows, config_sha):
    return write_csv(path, ["omega_rad_s", "Z"], rows, config_sha,
                     "imaginary-axis frequency in rad/s, Z dimensionless",
                     extra_notes=(f"convention: {MIE_CONVENTION}",))


def write_word_csv(path, rows, config_sha):
    return write_csv(path, ["omega_rad_s", "word", "order", "trace"], rows,
                     config_sha, "per-word loop traces, dimensionless")


def write_toy_sweep_csv(path, rows, config_sha):
    return write_csv(path, ["omega_rad_s", "l_circle", "Z"], rows,
                     config_sha,
                     "frequency in rad/s, metric length dimensionless")


def write_orbit_csv(path, rows, config_sha):
    return write_csv(
        path, ["tau", "r", "theta", "x", "y", "conserved1", "conserved2"],
        rows, config_sha,
        "tau dimensionless, coordinates in toy length units; conserved "
        "columns are V r^2 th' and V (r'^2 + r^2 th'^2)")


def render_force_sweep_figure(path, rows):
    seps = np.array([r[0] for r in rows])
    fz = np.abs(np.array([r[3] for r in rows]))
    fig, ax = plt.subplots(figsize=(5.0, 3.6))
    ax.loglog(seps, fz, "o-", lw=1.2, ms=4)
    ax.set_xlabel("separation (m)")
    ax.set_ylabel("|Fz| (N)")
    ax.set_title("sphere-sphere dispersion force")
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_z_spectrum_figure(path, rows):
    omegas = np.array([r[0] for r in rows])
    z = np.abs(np.array([r[1] for r in rows]))
    fig, ax = plt.subplots(figsize=(5.0, 3.6))
    ax.loglog(omegas, np.where(z > 0, z, np.nan), "s-", lw=1.2, ms=4)
    ax.set_xlabel(r"$\Omega$ (rad/s)")
    ax.set_ylabel("|Z|")
    ax.set_title("loop trace spectrum")
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_toy_figure(path, sweep_rows, orbit_rows):
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(8.6, 3.6))
    xs = [r[3] for r in orbit_rows]
    ys = [r[4] for r in orbit_rows]
    ax1.plot(xs, ys, lw=1.2)
    ax1.plot([0], [0], "k+", ms=8)
    ax1.plot([xs[0]], [ys[0]], "ro", ms=4)
    ax1.set_aspect("equal")
    ax1.set_xlabel("x")
    ax1.set_ylabel("y")
    ax1.set_title("closed loop")
    omegas = np.array([r[0] for r in sweep_rows])
    z = np.array([r[2] for r in sweep_rows])
    ax2.loglog(omegas, np.where(z > 0, z, np.nan), "o-", lw=1.2, ms=4)
    ax2.set_xlabel(r"$\Omega$ (rad/s)")
    ax2.set_ylabel("Z")
    ax2.set_title("winding sum vs frequency")
    ax2.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
