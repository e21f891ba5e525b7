"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 bad arguments.
``REVMULT_SEED`` overrides the default random seed.
"""
from __future__ import annotations

import io
import os
import sys
from dataclasses import dataclass

import click

from . import qasm
from .costmodel import PAPER_CENSUS, bound_ratio, crossover, fit_exponent, mirror_cost, paper_cost, two_level_census
from .multipliers import EVAL_POINT_SETS, METHODS, MultiplierConfig, build_multiplier
from .netlist import ResourceReport, count_resources
from .pebble import RecursionTree, make_schedule, optimal_cut_level
from .sim import DEFAULT_SEED, TestVectorPlan, verify_multiplier

CSV_HEADER = "n,method,qubits,toffoli,toffoli_depth,cnot,t_count,t_depth,source"
MODEL_METHODS = ("naive", "karatsuba", "toom25", "const_mult")
DEFAULT_MEASURED_CAP = 1296
PAPER_CROSSOVER_REMARK = "<300"


def default_seed() -> int:
    raw = os.environ.get("REVMULT_SEED")
    if raw is None:
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise click.UsageError(f"REVMULT_SEED must be an integer, got {raw!r}") from None


def parse_bits(spec: str) -> list[int]:
    """``start:stop:step`` (stop inclusive, step defaults to 1) or a comma list."""
    spec = spec.strip()
    try:
        if ":" in spec:
            parts = [int(p) for p in spec.split(":")]
            if len(parts) not in (2, 3):
                raise ValueError
            start, stop = parts[0], parts[1]
            step = parts[2] if len(parts) == 3 else 1
            if step < 1:
                raise click.BadParameter(f"step must be >= 1, got {step}")
            bits = list(range(start, stop + 1, step))
        else:
            bits = [int(p) for p in spec.split(",") if p.strip()]
    except ValueError:
        raise click.BadParameter(f"expected start:stop[:step] or a comma list, got {spec!r}") from None
    if not bits:
        raise click.BadParameter(f"bit range {spec!r} is empty")
    if min(bits) < 1:
        raise click.BadParameter("bit widths must be >= 1")
    return bits


@dataclass(frozen=True)
class CommandConfig:
    method: str
    bits: int
    threshold: int = 4
    points: str = EVAL_POINT_SETS[0]
    uncompute: bool = True

    def multiplier(self) -> MultiplierConfig:
        return MultiplierConfig(self.method, self.threshold, self.points, self.uncompute)


def summary_line(method: str, n: int, rep: ResourceReport, source: str = "measured") -> str:
    depth = "na" if rep.toffoli_depth is None else rep.toffoli_depth
    t_depth = "na" if rep.t_depth is None else rep.t_depth
    return (f"{method} n={n} source={source} qubit_count={rep.qubit_count} toffoli_count={rep.toffoli_count} "
            f"toffoli_depth={depth} cnot_count={rep.cnot_count} not_count={rep.not_count} "
            f"t_count={rep.t_count} t_depth={t_depth}")


def csv_row(n: int, method: str, rep: ResourceReport, source: str) -> str:
    cells = [n, method, rep.qubit_count, rep.toffoli_count, rep.toffoli_depth, rep.cnot_count,
             rep.t_count, rep.t_depth, source]
    return ",".join("" if v is None else str(v) for v in cells)


def _build(cfg: CommandConfig):
    try:
        return build_multiplier(cfg.bits, cfg.multiplier())
    except ValueError as exc:
        raise click.UsageError(str(exc)) from None


method_opt = click.option("--method", type=click.Choice(METHODS), default="toom25", show_default=True)
bits_opt = click.option("--bits", type=click.IntRange(min=1), required=True, help="Operand width n.")
threshold_opt = click.option("--threshold", type=click.IntRange(min=1), default=4, show_default=True,
                             help="Widths at or below this use the shift-add base case.")
points_opt = click.option("--points", type=click.Choice(EVAL_POINT_SETS), default=EVAL_POINT_SETS[0],
                          show_default=True, help="Toom-2.5 evaluation points.")


@click.group()
def main():
    """Reversible multiplier synthesis, verification and resource analysis."""


@main.command()
@method_opt
@bits_opt
@threshold_opt
@points_opt
@click.option("--uncompute/--no-uncompute", default=False, show_default=True,
              help="Append the copy-out and reverse pass (clean ancillae).")
@click.option("--out", "out_path", type=click.Path(dir_okay=False, writable=True), default=None,
              help="Netlist path; defaults to <method>_<bits>.qasm, '-' for stdout.")
def build(method, bits, threshold, points, uncompute, out_path):
    """Write the QASM netlist and print a resource summary.

    The default is the compute section, (x, y, 0, 0) -> (x, y, g, xy).
    """
    cfg = CommandConfig(method, bits, threshold, points, uncompute)
    c = _build(cfg)
    _write(qasm.dumps(c), out_path or f"{method}_{bits}.qasm")
    click.echo(summary_line(method, bits, count_resources(c)))


@main.command()
@method_opt
@bits_opt
@threshold_opt
@points_opt
@click.option("--exhaustive", is_flag=True, help="All 4**bits operand pairs.")
@click.option("--random", "samples", type=click.IntRange(min=1), default=None, help="Seeded random pairs.")
@click.option("--seed", type=int, default=None, help="RNG seed (default 42 or $REVMULT_SEED).")
def simulate(method, bits, threshold, points, exhaustive, samples, seed):
    """Verify x*y, preserved inputs and clean ancillae by exact simulation."""
    if exhaustive and samples is not None:
        raise click.UsageError("--exhaustive and --random are exclusive")
    seed = default_seed() if seed is None else seed
    try:
        plan = TestVectorPlan.exhaustive() if exhaustive else TestVectorPlan("random", samples or 100, seed)
        c = _build(CommandConfig(method, bits, threshold, points, True))
        verdict = verify_multiplier(c, bits, plan)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from None
    click.echo(verdict.text())
    sys.exit(0 if verdict.passed else 1)


@main.command()
@method_opt
@bits_opt
@threshold_opt
@points_opt
@click.option("--census", is_flag=True, help="Also print the two-level block census of the construction.")
def estimate(method, bits, threshold, points, census):
    """Paper model, construction mirror and the measured/bound ratio."""
    cfg = CommandConfig(method, bits, threshold, points, True)
    click.echo(summary_line(method, bits, paper_cost(method, bits), "model"))
    click.echo(summary_line(method, bits, mirror_cost(bits, cfg.multiplier()), "mirror"))
    if method == "toom25":
        tr, cr = bound_ratio(mirror_cost(bits, cfg.multiplier()), bits)
        click.echo(f"ratio toffoli/49n^log6(16)={tr:.3f} cnot/116n^log6(16)={cr:.3f} "
                   "(includes sign handling at the -1 point)")
    if census:
        counts = two_level_census(bits, cfg.multiplier())
        click.echo("census " + " ".join(f"{k}={v}" for k, v in sorted(counts.items())))
        click.echo("published census " + " ".join(f"A_{k}={v}" for k, v in PAPER_CENSUS.items()))


@main.command()
@click.option("--methods", default="naive,karatsuba,toom25", show_default=True,
              help="Comma list from naive, karatsuba, toom25, const_mult.")
@click.option("--bits", "bits_spec", default="4:64:4", show_default=True,
              help="start:stop[:step] (inclusive) or comma list.")
@click.option("--format", "fmt", type=click.Choice(["csv", "table"]), default="csv", show_default=True)
@click.option("--measured-cap", type=click.IntRange(min=0), default=DEFAULT_MEASURED_CAP, show_default=True,
              help="Build and count netlists only for n up to this width.")
@click.option("--out", "out_path", type=click.Path(dir_okay=False, writable=True), default="-", show_default=True)
def compare(methods, bits_spec, fmt, measured_cap, out_path):
    """Model rows and measured netlist rows as CSV."""
    names = [m.strip() for m in methods.split(",") if m.strip()]
    bad = [m for m in names if m not in MODEL_METHODS]
    if bad or not names:
        raise click.BadParameter(f"unknown methods {bad}", param_hint="--methods")
    bits = parse_bits(bits_spec)
    rows = []
    model_tc: dict[tuple[int, str], int] = {}
    for n in bits:
        for m in names:
            rep = paper_cost(m, n)
            model_tc[(n, m)] = rep.toffoli_count
            rows.append(csv_row(n, m, rep, "model"))
            if m in METHODS and n <= measured_cap:
                c = build_multiplier(n, MultiplierConfig(method=m))
                rows.append(csv_row(n, m, count_resources(c), "measured"))
    text = "\n".join([CSV_HEADER, *rows]) + "\n"
    if fmt == "table":
        text = _table(text)
    _write(text, out_path)
    if "toom25" in names and "naive" in names:
        first = next((n for n in bits if model_tc[(n, "toom25")] < model_tc[(n, "naive")]), None)
        click.echo(f"crossover toom25<naive (model TC): in range {first}, scan {crossover()}; "
                   f"published estimate {PAPER_CROSSOVER_REMARK} bits", err=True)


@main.command()
@click.option("--bits", "bits_spec", required=True, help="Width, or a comma list with --fit.")
@click.option("--k", "k_opt", type=click.IntRange(min=0), default=None, help="Override the cut height.")
@click.option("--measured/--ideal-only", default=True, show_default=True,
              help="Also replay with the construction's per-node wire footprint.")
@click.option("--schedule", "schedule_path", type=click.Path(dir_okay=False, writable=True), default=None,
              help="Write COMPUTE/COPY/UNCOMPUTE lines here ('-' for stdout).")
@click.option("--fit", is_flag=True, help="Fit peak-space and depth exponents across the widths.")
def pebble(bits_spec, k_opt, measured, schedule_path, fit):
    """Cut level, schedule length, peak space and depth units."""
    bits = parse_bits(bits_spec)
    if len(bits) > 1 and not fit:
        raise click.UsageError("several widths need --fit")
    if fit and len(bits) < 3:
        raise click.UsageError("--fit needs at least 3 widths")
    peaks, depths = [], []
    for n in bits:
        tree = RecursionTree(n)
        k = optimal_cut_level(tree.N) if k_opt is None else k_opt
        if k > tree.N:
            raise click.BadParameter(f"k={k} exceeds tree height {tree.N}", param_hint="--k")
        sched = make_schedule(tree, k)
        line = (f"n={n} N={tree.N} k={k} schedule_length={len(sched)} peak_space_ideal={sched.peak_space} "
                f"depth_units={sched.total_depth_units}")
        if measured:
            line += f" peak_space_measured={make_schedule(RecursionTree(n, 'measured'), k).peak_space}"
        click.echo(line)
        peaks.append((n, sched.peak_space))
        depths.append((n, sched.total_depth_units))
        if schedule_path:
            _write(sched.text(), schedule_path)
    if fit:
        try:
            click.echo(f"fit peak_space_slope={fit_exponent(peaks):.4f} depth_slope={fit_exponent(depths):.4f}")
        except ValueError as exc:
            raise click.UsageError(str(exc)) from None


@main.command()
@method_opt
@bits_opt
@threshold_opt
@points_opt
@click.option("--uncompute/--no-uncompute", default=True, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["qasm", "csv"]), default="qasm", show_default=True)
@click.option("--out", "out_path", type=click.Path(dir_okay=False, writable=True), default="-", show_default=True)
def export(method, bits, threshold, points, uncompute, fmt, out_path):
    """Export a netlist (qasm) or its measured resource row (csv)."""
    c = _build(CommandConfig(method, bits, threshold, points, uncompute))
    if fmt == "qasm":
        text = qasm.dumps(c)
    else:
        text = CSV_HEADER + "\n" + csv_row(bits, method, count_resources(c), "measured") + "\n"
    _write(text, out_path)


def _write(text: str, path: str) -> None:
    if path == "-":
        click.echo(text, nl=False)
        return
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise click.FileError(path, str(exc)) from None


def _table(text: str) -> str:
    rows = [line.split(",") for line in text.splitlines()]
    widths = [max(len(r[k]) for r in rows) for k in range(len(rows[0]))]
    out = io.StringIO()
    for r in rows:
        out.write("  ".join(cell.rjust(w) for cell, w in zip(r, widths)).rstrip() + "\n")
    return out.getvalue()


if __name__ == "__main__":
    main()
