"""Tables (CSV) and figures (PNG) summarizing the counting results."""

from __future__ import annotations

import csv
import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .combinatorics import RnLedger, bound_witness, residue_distribution  # noqa: E402
from .cyclotomic import smallest_factor  # noqa: E402

STYLE = {
    "figure.figsize": (6.4, 4.0),
    "font.size": 10,
    "axes.labelsize": 10,
    "legend.fontsize": 8,
    "xtick.labelsize": 9,
    "ytick.labelsize": 9,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "savefig.dpi": 150,
}


def _write_csv(path: Path, rows: list[dict]) -> Path:
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(rows[0]))
        w.writeheader()
        w.writerows(rows)
    return path


def ledger_report(ledger: RnLedger, out: Path) -> list[Path]:
    rows = ledger.rows()
    paths = [_write_csv(out / "rn_ledger.csv", rows)]
    ns = [r["n"] for r in rows]
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        ax.plot(ns, [r["bound"] for r in rows], "o-", color="k", label="best known bound on r(n)")
        ax.plot(ns, ns, "--", color="tab:blue", label="r(n) = n")
        ax.plot(ns, [r["cap_refined"] for r in rows], ":", color="tab:red", label="2n - 1")
        ax.plot(ns, [r["cap_counting"] for r in rows], ":", color="tab:orange", label="2n + 1")
        ax.set_xlabel("exponent n")
        ax.set_ylabel("r(n)")
        ax.set_xticks(ns)
        ax.legend(frameon=False)
        fig.tight_layout()
        p = out / "rn_bounds.png"
        fig.savefig(p)
        plt.close(fig)
    paths.append(p)
    return paths


def residue_report(max_n: int, out: Path) -> list[Path]:
    rows = []
    moduli = list(range(3, max_n + 1))
    for n in moduli:
        for m in range(1, n):
            h = residue_distribution(n, m)
            expected = math.comb(n, m) / n
            for res, c in enumerate(h.counts):
                rows.append({"n": n, "m": m, "residue": res, "count": c,
                             "expected": round(expected, 6), "prime": h.hypothesis_ok})
    paths = [_write_csv(out / "residue.csv", rows)]
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        for n in moduli:
            spread = []
            for m in range(1, n):
                counts = residue_distribution(n, m).counts
                expected = math.comb(n, m) / n
                spread.append((max(counts) - min(counts)) / expected)
            prime = smallest_factor(n) == n
            ax.plot(range(1, n), spread, "o-" if prime else "x--",
                    label=f"n={n}" + ("" if prime else " (composite)"))
        ax.set_xlabel("subset size m")
        ax.set_ylabel("(max - min) / (C(n,m)/n)")
        ax.legend(frameon=False, ncol=2)
        fig.tight_layout()
        p = out / "residue_spread.png"
        fig.savefig(p)
        plt.close(fig)
    paths.append(p)
    return paths


def bounds_report(nmax: int, out: Path) -> list[Path]:
    rows = []
    for n in range(2, nmax + 1):
        w = bound_witness(n)
        rows.append({"n": n, "k0": w.k0, "A": w.A, "A_pigeonhole": w.A_pigeonhole,
                     "implied_bound": w.implied_bound})
    paths = [_write_csv(out / "bounds.csv", rows)]
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        ns = [r["n"] for r in rows]
        ax.semilogy(ns, [r["A"] for r in rows], "o-", color="k", label="minimal A")
        ax.semilogy(ns, [(n + 1) * math.factorial(n + 1) for n in ns], ":", color="gray",
                    label="(n+1)(n+1)!")
        ax.set_xlabel("exponent n")
        ax.set_ylabel("coefficient bound A")
        ax.legend(frameon=False)
        fig.tight_layout()
        p = out / "bound_witness.png"
        fig.savefig(p)
        plt.close(fig)
    paths.append(p)
    return paths


def write_report(out_dir: str | Path, ledger_path: str | None = None, max_prime: int = 13,
                 bounds_nmax: int = 8) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    ledger = RnLedger.seeded()
    if ledger_path:
        ledger.load(ledger_path)
    return ledger_report(ledger, out) + residue_report(max_prime, out) + bounds_report(bounds_nmax, out)
