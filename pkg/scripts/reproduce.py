"""Regenerate the numbers behind every exit criterion into an output directory.

    python scripts/reproduce.py --out docs/repro
"""
from __future__ import annotations

import argparse
import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from fdhydrogen.closed_form import solve
from fdhydrogen.isospectral import build_W, matrix_power, prescribe_spectrum, spectral_report
from fdhydrogen.spectra import build_V, eigenvalues_bisection, spectrum_report
from fdhydrogen.verify import continuum_limit_order, infinite_order_residual, sweep


@dataclass
class ReproConfig:
    ns: list[int] = field(default_factory=lambda: list(range(1, 13)))
    deltas: list[str] = field(default_factory=lambda: ["1/4", "1/2", "1", "3/2", "3"])
    limit_deltas: list[str] = field(default_factory=lambda: ["1/10", "1/20", "1/40"])
    size: int = 400
    states: int = 3
    truncation_sizes: list[int] = field(default_factory=lambda: [25, 50, 100, 200, 400])
    order: int = 25
    z_samples: list[float] = field(default_factory=lambda: [0.5, 1.0, 2.0, 5.0])
    targets: list[float] = field(default_factory=lambda: [1.0, 0.5, 1 / 3])


def _write(out: Path, name: str, payload) -> None:
    (out / name).write_text(json.dumps(payload, indent=2, default=str) + "\n")
    print(f"wrote {out / name}")


def exact_sweep(cfg: ReproConfig) -> list[dict]:
    rows = []
    for ident, matrix in sweep(cfg.ns, [Fraction(d) for d in cfg.deltas]):
        rows.append({"n": ident.n, "delta": str(ident.delta), "identity": ident.passed, "matrix": matrix.passed})
    return rows


def truncation_table(cfg: ReproConfig) -> list[dict]:
    rows = []
    for N in cfg.truncation_sizes:
        vals = eigenvalues_bisection(build_V(N, 1), 1, cfg.states, 1e-13)
        exact = [-np.sqrt(1 + 1 / n**2) for n in range(1, cfg.states + 1)]
        rows.append({"N": N, "abs_error": [float(abs(v - e)) for v, e in zip(vals, exact)]})
    return rows


def isospectral_summary(cfg: ReproConfig) -> dict:
    W = build_W(cfg.size, 1)
    n_targets = [1 / n**2 for n in range(1, cfg.states + 1)]
    return {
        "W": spectral_report(W, n_targets),
        "W^2": spectral_report(matrix_power(W, 2), [t * t for t in n_targets]),
        "f(W)": spectral_report(prescribe_spectrum(cfg.targets, cfg.size, 1), cfg.targets),
    }


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("docs/repro"))
    args = ap.parse_args(argv)
    cfg = ReproConfig()
    args.out.mkdir(parents=True, exist_ok=True)

    _write(args.out, "config.json", asdict(cfg))
    _write(args.out, "exact_sweep.json", exact_sweep(cfg))
    _write(args.out, "spectrum.json", spectrum_report(cfg.size, 1, cfg.states).to_json())
    _write(args.out, "truncation.json", truncation_table(cfg))
    limits = {n: continuum_limit_order(n, [Fraction(d) for d in cfg.limit_deltas]).data for n in (1, 2, 3)}
    _write(args.out, "continuum_limit.json", limits)
    inf = infinite_order_residual(solve(2, Fraction(1, 2)), cfg.order, cfg.z_samples)
    _write(args.out, "infinite_order.json", inf.to_json())
    _write(args.out, "isospectral.json", isospectral_summary(cfg))


if __name__ == "__main__":
    main()
