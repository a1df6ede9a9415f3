"""Figure rendering for the CLI report path.

matplotlib is imported lazily here so the numerical core never depends on
a plotting backend; the CLI calls ``render`` only when --plot is given,
writing a PNG next to the delimited output file.
"""

from __future__ import annotations


def _axes():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.4, 4.4))
    ax.grid(True, which="both", alpha=0.3)
    return plt, fig, ax


def _finish(plt, fig, ax, path: str, xlabel: str, title: str) -> None:
    ax.set_xlabel(xlabel)
    ax.set_ylabel("word error rate")
    ax.set_yscale("log")
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render(command: str, rows: list[dict], path: str, title: str) -> None:
    """Render one figure for a finished run of the given subcommand."""
    if not rows:
        raise ValueError("nothing to plot: no result rows")
    snr = [float(r["snr_db"]) for r in rows]
    plt, fig, ax = _axes()
    if command == "bound":
        ax.plot(snr, [float(r["ub"]) for r in rows], "o-", label="union bound")
        ax.plot(snr, [float(r["sb"]) for r in rows], "s-", label="sphere bound")
    elif command == "simulate":
        wer = [float(r["wer"]) for r in rows]
        ci = [float(r["ci"]) for r in rows]
        ax.errorbar(snr, wer, yerr=ci, fmt="o-", capsize=3, label="simulated WER")
    elif command == "sandwich":
        ax.plot(snr, [float(r["lower"]) for r in rows], "v-", label="lower (in-sphere)")
        ax.plot(snr, [float(r["upper"]) for r in rows], "^-", label="upper (+escape)")
        ax.plot(snr, [float(r["pr_e1"]) for r in rows], ":", label="escape probability")
    else:
        raise ValueError(f"no figure defined for subcommand {command!r}")
    _finish(plt, fig, ax, path, "SNR (dB)", title)
