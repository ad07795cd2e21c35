"""Command-line front end: sweeps, figure data, and machine-readable reports.

Exit codes: 0 success, 1 usage or domain error, 2 numerical contract
violation (including failed verification checks), 3 I/O failure.

Output is deterministic for a given flag set: rows are emitted in grid
order and every float is formatted at 12 significant digits.  Sweep points
are evaluated through a parallel map (capped by DEPH_NUM_THREADS) but
assembled in input order regardless of completion order.
"""

import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict

import click

from . import bounds as bounds_mod
from . import dephasing_exact, phase_encoding, thermal_loss, verification
from .errors import ContractViolation, SolverError, TailBoundError
from .special_math import thermal_entropy_g
from .thermal_loss import ThermalLossChannel


def _fmt(x):
    return f"{x:.12g}"


def _round_floats(obj):
    """Round floats to the 12-significant-digit output convention."""
    if isinstance(obj, float):
        return float(_fmt(obj))
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    return obj


def _n_workers():
    raw = os.environ.get("DEPH_NUM_THREADS")
    if raw is None:
        return min(8, os.cpu_count() or 1)
    try:
        n = int(raw)
    except ValueError:
        raise click.UsageError(
            f"DEPH_NUM_THREADS must be a positive integer, got {raw!r}")
    if n < 1:
        raise click.UsageError(
            f"DEPH_NUM_THREADS must be a positive integer, got {raw!r}")
    return n


def _parallel_map(func, items):
    items = list(items)
    workers = min(_n_workers(), max(1, len(items)))
    if workers == 1 or len(items) == 1:
        return [func(it) for it in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))


def parse_mode_grid(spec):
    """Parse --modes: a single number or a log grid 'START:STOP:K/dec'.

    The grid places K points per decade at exponents lo + j/K, both
    endpoints included, e.g. '1e1:1e7:10/dec' gives 61 values.
    """
    spec = spec.strip()
    if ":" not in spec:
        try:
            value = float(spec)
        except ValueError:
            raise click.UsageError(f"cannot parse mode count {spec!r}")
        if not value >= 1.0:
            raise click.UsageError(f"mode count must be >= 1, got {spec!r}")
        return [value]
    parts = spec.split(":")
    if len(parts) != 3 or not parts[2].endswith("/dec"):
        raise click.UsageError(
            f"mode grid must look like 'START:STOP:K/dec', got {spec!r}")
    try:
        start = float(parts[0])
        stop = float(parts[1])
        per_dec = int(parts[2][:-4])
    except ValueError:
        raise click.UsageError(f"cannot parse mode grid {spec!r}")
    if not (1.0 <= start < stop) or per_dec < 1:
        raise click.UsageError(
            f"mode grid needs 1 <= START < STOP and K >= 1, got {spec!r}")
    lo = math.log10(start)
    hi = math.log10(stop)
    n_steps = int(math.floor((hi - lo) * per_dec + 1e-9))
    return [10.0 ** (lo + j / per_dec) for j in range(n_steps + 1)]


def _single_integer_modes(spec):
    values = parse_mode_grid(spec)
    if len(values) != 1:
        raise click.UsageError("this command takes a single mode count, not a grid")
    m = values[0]
    if abs(m - round(m)) > 1e-9:
        raise click.UsageError(f"mode count must be an integer, got {m}")
    return int(round(m))


def _emit_csv(header, rows, out):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(float(v)) for v in row))
    text = "\n".join(lines) + "\n"
    if out is None:
        click.echo(text, nl=False)
    else:
        with open(out, "w", encoding="ascii") as fh:
            fh.write(text)
        click.echo(f"wrote {out}", err=True)


def _emit_json(obj, out):
    text = json.dumps(_round_floats(obj), indent=2) + "\n"
    if out is None:
        click.echo(text, nl=False)
    else:
        with open(out, "w", encoding="ascii") as fh:
            fh.write(text)
        click.echo(f"wrote {out}", err=True)


@click.group()
def cli():
    """Capacities of lossy bosonic channels under collective phase noise."""


@cli.command("capacity")
@click.option("--pure-dephasing", "pure_deph", is_flag=True,
              help="m-mode channel applying one uniformly random phase.")
@click.option("--thermal-loss", "thermal", is_flag=True,
              help="single-mode loss with added thermal noise.")
@click.option("--kappa", "-k", type=float, default=1.0, show_default=True,
              help="transmissivity (thermal loss).")
@click.option("--nb", type=float, default=0.0, show_default=True,
              help="added noise photons (thermal loss).")
@click.option("--energy", "-E", type=float, required=True,
              help="mean photon number per mode at the input.")
@click.option("--modes", "-m", default=None,
              help="number of modes (pure dephasing only).")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def cmd_capacity(pure_deph, thermal, kappa, nb, energy, modes, out):
    """Assisted and unassisted capacity of one channel, as a JSON record."""
    if pure_deph == thermal:
        raise click.UsageError(
            "choose exactly one of --pure-dephasing / --thermal-loss")
    if pure_deph:
        m = 1 if modes is None else _single_integer_modes(modes)
        sol = dephasing_exact.solve_dephasing(m, energy)
        baseline = m * thermal_entropy_g(energy)
        report = {
            "channel": {"kind": "pure-dephasing", "modes": m, "energy": energy},
            "ea_total": sol.capacity,
            "ea_per_mode": sol.capacity_per_mode,
            "hsw_total": baseline,
            "ratio": sol.unassisted_ratio,
            "intermediates": {
                "lambda1": sol.lambda1,
                "mean_achieved": sol.mean_achieved,
                "support": sol.dist.cutoff,
                "tail_bound": sol.dist.tail_bound,
            },
        }
    else:
        if modes is not None:
            raise click.UsageError("--modes applies to --pure-dephasing only")
        ch = ThermalLossChannel(kappa, nb)
        rep = thermal_loss.capacity_report(ch, energy)
        report = {
            "channel": {"kind": "thermal-loss", "kappa": kappa, "nb": nb,
                        "energy": energy},
            "ea": rep.ea,
            "hsw": rep.hsw,
            "ratio": rep.ratio,
            "intermediates": {
                "e_prime": rep.e_prime,
                "big_d": rep.big_d,
                "a_plus": rep.a_plus,
                "a_minus": rep.a_minus,
            },
        }
    _emit_json(report, out)


_FIG2_HEADER = ("m", "exact_ratio", "lower_bound_ratio", "asym_lower_ratio",
                "upper_ratio")


@cli.command("fig2")
@click.option("--energy", "-E", type=float, default=1.0, show_default=True)
@click.option("--m-max", type=int, default=20, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def cmd_fig2(energy, m_max, out):
    """Capacity gain of joint phase references: ratios over m*g(E) for m=1..M."""
    if m_max < 1:
        raise click.UsageError(f"--m-max must be >= 1, got {m_max}")
    ch = ThermalLossChannel(1.0, 0.0)
    baseline_one = thermal_entropy_g(energy)

    def one(m):
        sol = dephasing_exact.solve_dephasing(m, energy)
        # solve_dephasing reports total bits over the block, the bounds
        # report per-mode bits; both ratios are per-mode over g(E)
        return (float(m),
                sol.capacity / (m * baseline_one),
                bounds_mod.ea_lower_bound(m, ch, energy) / baseline_one,
                bounds_mod.ea_lower_bound_asym(m, ch, energy) / baseline_one,
                2.0)

    rows = _parallel_map(one, range(1, m_max + 1))
    slack = 1e-12
    prev = 0.0
    for m, exact, lower, _, _ in rows:
        if not lower <= exact + slack:
            raise ContractViolation(
                f"lower bound {lower} exceeds exact ratio {exact} at m={m:g}")
        if not exact <= 2.0 + slack:
            raise ContractViolation(f"exact ratio {exact} exceeds 2 at m={m:g}")
        if not exact > prev:
            raise ContractViolation(
                f"exact ratio is not strictly increasing at m={m:g}")
        prev = exact
    _emit_csv(_FIG2_HEADER, rows, out)


_FIG3_HEADER = ("m", "upper_ratio", "lb_ratio", "lb_asym_ratio",
                "chi_lb_ratio", "chi_lb_asym_ratio")


@cli.command("fig3")
@click.option("--kappa", "-k", type=float, default=0.8, show_default=True)
@click.option("--energy", "-E", type=float, default=0.001, show_default=True)
@click.option("--nb", type=float, multiple=True,
              default=(10.0, 1.0, 0.1, 0.01), show_default=True,
              help="one sweep (and one CSV file) per value.")
@click.option("--modes", "-m", default="1e1:1e7:10/dec", show_default=True)
@click.option("--out-dir", type=click.Path(file_okay=False), default=".",
              show_default=True)
def cmd_fig3(kappa, energy, nb, modes, out_dir):
    """Capacity bounds vs mode count, one file per noise level.

    All columns are normalized by the unassisted capacity of the loss
    channel alone.  Asymptotic columns are NaN where the Gaussian entropy
    approximation is out of regime (variance too small).
    """
    grid = parse_mode_grid(modes)
    os.makedirs(out_dir, exist_ok=True)
    for n_b in nb:
        ch = ThermalLossChannel(kappa, n_b)
        hsw = thermal_loss.hsw_capacity(ch, energy)
        if hsw <= 0.0:
            raise ContractViolation(
                f"cannot normalize by a nonpositive baseline {hsw} at nb={n_b:g}")
        ea = thermal_loss.ea_capacity(ch, energy)
        chi = phase_encoding.holevo_phase_encoding(energy, ch)

        def one(m):
            h_exact = bounds_mod.entropy_total_exact(m, energy)
            h_asym = bounds_mod.entropy_total_asym(m, energy)
            return (m,
                    ea / hsw,
                    (ea - h_exact / m) / hsw,
                    (ea - h_asym / m) / hsw,
                    (chi - h_exact / m) / hsw,
                    (chi - h_asym / m) / hsw)

        rows = _parallel_map(one, grid)
        for m, upper, lb, lb_asym, chi_lb, chi_lb_asym in rows:
            slack = 1e-12 * max(1.0, abs(upper))
            ordered = (lb <= upper + slack and chi_lb <= lb + slack)
            if not math.isnan(lb_asym):
                ordered = ordered and lb_asym <= upper + slack
                if not math.isnan(chi_lb_asym):
                    ordered = ordered and chi_lb_asym <= lb_asym + slack
            if not ordered:
                raise ContractViolation(
                    f"bound ordering violated at m={m:g}, nb={n_b:g}")
        path = os.path.join(out_dir, f"fig3_nb{n_b:g}.csv")
        _emit_csv(_FIG3_HEADER, rows, path)


_BOUNDS_HEADER = ("m", "upper", "lower", "lower_asym", "entropy_exact",
                  "entropy_asym", "baseline")


@cli.command("bounds")
@click.option("--kappa", "-k", type=float, required=True)
@click.option("--nb", type=float, default=0.0, show_default=True)
@click.option("--energy", "-E", type=float, required=True)
@click.option("--modes", "-m", required=True,
              help="single count or log grid 'START:STOP:K/dec'.")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]),
              default="csv", show_default=True)
def cmd_bounds(kappa, nb, energy, modes, out, fmt):
    """Sandwich of the dephased-channel capacity per mode, in bits."""
    grid = parse_mode_grid(modes)
    ch = ThermalLossChannel(kappa, nb)
    reports = _parallel_map(lambda m: bounds_mod.bounds_report(m, ch, energy),
                            grid)
    if fmt == "json":
        _emit_json([asdict(r) for r in reports], out)
    else:
        rows = [(r.m, r.upper, r.lower, r.lower_asym, r.entropy_exact,
                 r.entropy_asym, r.baseline) for r in reports]
        _emit_csv(_BOUNDS_HEADER, rows, out)


@cli.command("phase-encoding")
@click.option("--kappa", "-k", type=float, required=True)
@click.option("--nb", type=float, default=0.0, show_default=True)
@click.option("--energy", "-E", type=float, required=True)
@click.option("--modes", "-m", default=None,
              help="optional grid: also report dephased lower bounds per m.")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]),
              default="json", show_default=True)
def cmd_phase_encoding(kappa, nb, energy, modes, out, fmt):
    """Holevo rate of phase-modulated entangled states on the loss channel."""
    ch = ThermalLossChannel(kappa, nb)
    chi = phase_encoding.holevo_phase_encoding(energy, ch)
    ea = thermal_loss.ea_capacity(ch, energy)
    if chi > ea + 1e-12 * max(1.0, ea):
        raise ContractViolation(
            f"encoding rate {chi} exceeds the assisted capacity {ea}")
    report = {
        "kappa": kappa, "nb": nb, "energy": energy,
        "chi": chi, "ea": ea,
        "correction": ea - chi,
        "relative_correction": (ea - chi) / ea if ea > 0.0 else math.nan,
    }
    mode_rows = None
    if modes is not None:
        grid = parse_mode_grid(modes)

        def one(m):
            return (m,
                    phase_encoding.holevo_lb_with_dephasing(m, energy, ch, chi=chi),
                    phase_encoding.holevo_lb_with_dephasing_asym(m, energy, ch, chi=chi))

        mode_rows = _parallel_map(one, grid)
    if fmt == "json":
        if mode_rows is not None:
            report["with_dephasing"] = [
                {"m": m, "chi_lb": lb, "chi_lb_asym": lb_asym}
                for m, lb, lb_asym in mode_rows]
        _emit_json(report, out)
    elif mode_rows is not None:
        _emit_csv(("m", "chi_lb", "chi_lb_asym"), mode_rows, out)
    else:
        _emit_csv(("kappa", "nb", "energy", "chi", "ea", "relative_correction"),
                  [(kappa, nb, energy, chi, ea, report["relative_correction"])],
                  out)


@cli.command("verify")
def cmd_verify():
    """Run the brute-force cross-check suite and print one line per check."""
    results = verification.run_all()
    for res in results:
        click.echo(res.line())
    n_fail = sum(1 for r in results if r.status == "fail")
    n_skip = sum(1 for r in results if r.status.startswith("skipped"))
    n_pass = len(results) - n_fail - n_skip
    click.echo(f"{n_pass} passed, {n_fail} failed, {n_skip} skipped")
    if n_fail:
        raise ContractViolation(f"{n_fail} verification check(s) failed")


def main(argv=None):
    """Run the CLI without exiting the interpreter; returns the exit code."""
    try:
        rv = cli.main(args=argv, prog_name="dephcap", standalone_mode=False)
    except click.ClickException as exc:
        exc.show()
        return 1
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return 1
    except (ContractViolation, SolverError, TailBoundError) as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    except OSError as exc:
        click.echo(f"error: {exc}", err=True)
        return 3
    except ValueError as exc:
        click.echo(f"error: {exc}", err=True)
        return 1
    return rv if isinstance(rv, int) else 0


def entry():
    sys.exit(main())
