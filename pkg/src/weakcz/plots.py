"""Figure rendering for sweep curves and process matrices."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .imperfections import SweepRecord

_PAIR_LABELS = [f"{i:02b},{o:02b}" for i in range(4) for o in range(4)]


def sweep_figure(records: list[SweepRecord]) -> plt.Figure:
    """Fidelity bound, process fidelity and success probability vs phi_X."""
    feasible = [r for r in records if r.feasible]
    x = [r.phi_x_deg for r in feasible]
    fig, (ax_f, ax_p) = plt.subplots(2, 1, figsize=(6.0, 6.5), sharex=True)

    ax_f.plot(x, [r.f_h for r in feasible], "o-", color="tab:red", label="$F_H$")
    ax_f.plot(x, [r.f_chi for r in feasible], "--", color="tab:blue", label=r"$F_\chi$")
    ax_f.set_ylabel("fidelity")
    ax_f.set_ylim(0.0, 1.05)
    ax_f.legend(loc="lower center")

    ax_p.plot(x, [r.p_s for r in feasible], "o-", color="tab:red", label="$P_S$")
    ax_p.set_xlabel(r"$\phi_X$ (deg)")
    ax_p.set_ylabel("success probability")
    ax_p.legend(loc="upper right")

    for ax in (ax_f, ax_p):
        ax.spines["top"].set_visible(False)
        ax.spines["right"].set_visible(False)
    fig.tight_layout()
    return fig


def process_matrix_figure(chi: np.ndarray, title: str = "") -> plt.Figure:
    """Real and imaginary parts of a process matrix, normalized to Tr = 4."""
    chi = np.asarray(chi, dtype=complex)
    tr = np.trace(chi).real
    if tr > 0:
        chi = chi * (4.0 / tr)
    vmax = max(np.max(np.abs(chi.real)), np.max(np.abs(chi.imag)), 1e-12)

    fig, axes = plt.subplots(1, 2, figsize=(11.0, 5.0))
    for ax, part, name in ((axes[0], chi.real, "Re"), (axes[1], chi.imag, "Im")):
        im = ax.imshow(part, cmap="RdBu_r", vmin=-vmax, vmax=vmax)
        ax.set_title(f"{name}[$\\chi$]")
        ax.set_xticks(range(16))
        ax.set_yticks(range(16))
        ax.set_xticklabels(_PAIR_LABELS, rotation=90, fontsize=6)
        ax.set_yticklabels(_PAIR_LABELS, fontsize=6)
        fig.colorbar(im, ax=ax, fraction=0.046)
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    return fig


def save_figure(fig: plt.Figure, path: str, dpi: int = 150) -> None:
    fig.savefig(path, dpi=dpi, bbox_inches="tight")
    plt.close(fig)
