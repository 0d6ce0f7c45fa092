"""CLI: argparse and command dispatch."""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path
from typing import Any, Optional

from . import free_energy as fe
from .config import RunConfig, build_run_config, get_value, list_values, parse_exponent, set_value
from .constants import EXIT_CONFIG, EXIT_NUMERICAL, EXIT_OK, EXIT_SELFTEST, TOOL_VERSION
from .errors import ConvergenceError, IpdsawError, RunConfigError, SelfTestFailure
from .geometry import (
    bead_stats,
    center_of_mass_stats,
    exponent_fit,
    extension_stats,
    hamiltonian_stats,
    max_stretch_stats,
    mean_profile,
    pattern_stats,
)
from .ipsaw import enumerate_family, growth_estimates
from .report import Report, emit, render
from .sampler import Ensemble, sample_ensemble
from .util import read_text_safe, write_text_atomic
from .walk import make_params
from .wulff import wulff_curve

logger = logging.getLogger(__name__)

DEFAULT_INI = "ipdsaw.ini"


def _run_config(args: argparse.Namespace, command: str) -> RunConfig:
    ini = Path(args.config) if getattr(args, "config", None) else None
    return build_run_config(command, vars(args), ini)


def _finish(report: Report, cfg: RunConfig, started: float) -> None:
    """Stamp wall-clock, write the report file if requested, else print it."""
    report.wall_clock = time.perf_counter() - started
    path = emit(report, cfg.fmt, cfg.output)
    if path is None:
        report.wall_clock = None
        sys.stdout.write(render(report, cfg.fmt))
    else:
        print(f"Wrote {path}")


def _plot_path(cfg: RunConfig, stem: str) -> Path:
    if cfg.output:
        out = Path(cfg.output)
        return out.with_name(f"{out.stem}_{stem}.svg")
    return Path(f"{stem}.svg")


def cmd_critical(args: argparse.Namespace) -> int:
    cfg = _run_config(args, "critical")
    started = time.perf_counter()
    const = fe.critical_amplitude()
    report = Report(cfg, ("quantity", "value"))
    report.add("beta_c", const.beta_c)
    report.add("beta_c_algebraic", fe.critical_beta_algebraic())
    report.add("gamma_residual", const.gamma_residual)
    report.add("c", const.c)
    report.add("c_slope_residual", const.slope_residual)
    report.add("sigma2", const.sigma2)
    report.add("airy_prime_zero", const.airy_prime_zero)
    report.add("d", const.d)
    report.add("amplitude", const.amplitude)
    if args.epsilons:
        for eps, ratio in fe.amplitude_ratios(args.epsilons):
            report.add(f"ratio_eps={eps:g}", ratio)
    _finish(report, cfg, started)
    return EXIT_OK


def cmd_free_energy(args: argparse.Namespace) -> int:
    cfg = _run_config(args, "free-energy")
    started = time.perf_counter()
    rows = fe.free_energy_table(cfg.betas)
    report = Report(cfg, ("beta", "excess_free_energy", "free_energy"))
    for row in rows:
        report.add(*row)
    if cfg.plot == "svg":
        from .plotting import plot_free_energy

        path = plot_free_energy(rows, fe.critical_beta(), _plot_path(cfg, "free_energy"))
        logger.info("plot written to %s", path)
    _finish(report, cfg, started)
    return EXIT_OK


def _ensemble_text(ens: Ensemble, cfg: RunConfig) -> str:
    return ens.to_text([f"config={json.dumps(cfg.to_dict(), sort_keys=True)}"])


def cmd_sample(args: argparse.Namespace) -> int:
    cfg = _run_config(args, "sample")
    if len(cfg.lengths) != 1 or len(cfg.betas) != 1:
        raise RunConfigError("sample takes exactly one --length and one --beta")
    ens = sample_ensemble(
        cfg.lengths[0], cfg.betas[0], cfg.samples, cfg.seed, cfg.sampler, cfg.burn_in, cfg.thin, cfg.workers
    )
    text = _ensemble_text(ens, cfg)
    if cfg.output:
        write_text_atomic(Path(cfg.output), text)
        print(f"Wrote {len(ens)} configurations to {cfg.output}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


ANALYZE_COLUMNS = (
    "beta",
    "L",
    "samples",
    "mean_N",
    "stderr_N",
    "mean_N_over_sqrtL",
    "mean_N_over_L",
    "mean_beads",
    "stderr_beads",
    "mean_largest_bead_fraction",
    "p_largest_bead_ge_0.9",
    "mean_patterns_over_L",
    "mean_H_over_L",
    "mean_max_stretch",
    "mean_com_sup_over_sqrtL",
)


def _ensembles(cfg: RunConfig) -> list[Ensemble]:
    if cfg.ensemble:
        out = []
        for name in cfg.ensemble.split(","):
            text = read_text_safe(Path(name))
            if text is None:
                raise RunConfigError(f"cannot read ensemble file {name}")
            out.append(Ensemble.from_text(text))
        return out
    return [
        sample_ensemble(n, beta, cfg.samples, cfg.seed, cfg.sampler, cfg.burn_in, cfg.thin, cfg.workers)
        for beta in cfg.betas
        for n in cfg.lengths
    ]


def cmd_analyze(args: argparse.Namespace) -> int:
    cfg = _run_config(args, "analyze")
    started = time.perf_counter()
    report = Report(cfg, ANALYZE_COLUMNS)
    report.extra["profile_alignment"] = "flip so total vertical displacement >= 0; collapsed plots stretch each config onto [0, a_beta]"
    by_beta: dict[float, list[tuple[int, Any, Any, Any]]] = {}
    ensembles = _ensembles(cfg)
    for ens in ensembles:
        ext = extension_stats(ens)
        bd = bead_stats(ens, (0.9,))
        pat = pattern_stats(ens)
        _, h_per = hamiltonian_stats(ens)
        ms = max_stretch_stats(ens)
        com = center_of_mass_stats(ens)
        report.add(
            ens.beta,
            ens.length,
            len(ens),
            ext.extension.mean,
            ext.extension.stderr,
            ext.per_sqrt_length.mean,
            ext.per_length.mean,
            bd.count.mean,
            bd.count.stderr,
            bd.largest_fraction.mean,
            bd.exceedance(0.9),
            pat.per_length.mean,
            h_per.mean,
            ms.mean,
            com.mean,
        )
        by_beta.setdefault(ens.beta, []).append((ens.length, ext.extension, bd.count, ms))
    fits = {}
    for beta, rows in by_beta.items():
        rows.sort(key=lambda r: r[0])
        if len(rows) < 3:
            continue
        lengths = [r[0] for r in rows]
        for label, idx in (("N", 1), ("beads", 2), ("max_stretch", 3)):
            fit = exponent_fit(label, lengths, [r[idx].mean for r in rows], [r[idx].stderr for r in rows])
            fits[f"beta={beta!r}:{label}"] = {"slope": fit.slope, "half_width": fit.half_width}
            if cfg.plot == "svg" and label == "N":
                from .plotting import plot_fit

                plot_fit(lengths, fit.means, fit.slope, fit.intercept, "mean N", _plot_path(cfg, f"fit_{beta:g}"))
    if fits:
        report.extra["fits"] = fits
    if cfg.plot == "svg":
        _plot_profile(cfg, ensembles[-1])
    _finish(report, cfg, started)
    return EXIT_OK


def _plot_profile(cfg: RunConfig, ens: Ensemble) -> None:
    from .plotting import plot_profile

    time_exp, space_exp = parse_exponent(cfg.time_exp), parse_exponent(cfg.space_exp)
    reference = None
    if ens.beta > fe.critical_beta() and cfg.time_exp == cfg.space_exp == "1/2":
        data = wulff_curve(make_params(ens.beta), cfg.grid)
        prof = mean_profile(ens, time_exp, space_exp, cfg.grid, align_to=data.a_beta)
        reference = data.evaluate(prof.t)
    else:
        prof = mean_profile(ens, time_exp, space_exp, cfg.grid)
    plot_profile(prof.t, prof.profile, prof.profile_stderr, _plot_path(cfg, "profile"), reference)


def cmd_wulff(args: argparse.Namespace) -> int:
    cfg = _run_config(args, "wulff")
    started = time.perf_counter()
    if len(cfg.betas) != 1:
        raise RunConfigError("wulff takes exactly one --beta")
    data = wulff_curve(make_params(cfg.betas[0]), cfg.grid)
    report = Report(cfg, ("s", "gamma"))
    for s, g in zip(data.s, data.curve):
        report.add(float(s), float(g))
    report.extra["a_beta"] = data.a_beta
    report.extra["htilde0"] = data.htilde0
    report.extra["area"] = data.area
    if cfg.plot == "svg":
        from .plotting import plot_wulff

        plot_wulff(data.s, data.curve, _plot_path(cfg, "wulff"), data.beta)
    _finish(report, cfg, started)
    return EXIT_OK


def cmd_ipsaw(args: argparse.Namespace) -> int:
    cfg = _run_config(args, "ipsaw")
    started = time.perf_counter()
    table = enumerate_family(cfg.family, cfg.max_length, cfg.betas, cfg.workers)
    columns = ("L", "count") + tuple(f"Z_beta={b!r}" for b in table.betas)
    report = Report(cfg, columns)
    for n in range(1, table.max_length + 1):
        report.add(n, table.count(n), *(table.partition(b, n) for b in table.betas))
    report.extra["family"] = table.family
    report.extra["code_hash"] = table.code_hash
    if table.max_length >= 3:
        report.extra["growth_last"] = {repr(b): g.last for b, g in growth_estimates(table).items()}
    _finish(report, cfg, started)
    return EXIT_OK


def cmd_selftest(args: argparse.Namespace) -> int:
    from selftest.runner import run_suites

    failing = run_suites(args.suites or None, verbose=args.verbose > 0, failfast=args.failfast)
    if failing:
        raise SelfTestFailure(f"failing suites: {', '.join(failing)}")
    return EXIT_OK


def cmd_config(args: argparse.Namespace) -> int:
    path = Path(args.config or DEFAULT_INI)
    modes = sum([bool(args.get), bool(args.config_set), bool(args.list)])
    if modes != 1:
        raise RunConfigError("exactly one of --get, --set, --list required")
    if args.get:
        if not args.key:
            raise RunConfigError("--get requires <key>")
        value = get_value(path, args.key)
        if value is None:
            return 1
        print(value)
    elif args.config_set:
        if not args.key or args.value is None:
            raise RunConfigError("--set requires <key> <value>")
        set_value(path, args.key, args.value)
    else:
        for key, value in list_values(path):
            print(f"{key}={value}")
    return EXIT_OK


def _exit_code(err: IpdsawError) -> int:
    if isinstance(err, SelfTestFailure):
        return EXIT_SELFTEST
    if isinstance(err, ConvergenceError):
        return EXIT_NUMERICAL
    return EXIT_CONFIG


def _add_output(p: argparse.ArgumentParser) -> None:
    p.add_argument("-o", "--output", default=None, help="Output file (default: stdout)")
    p.add_argument("--format", dest="fmt", choices=["csv", "json"], default=None, help="Report format (default: csv)")


def _add_sampling(p: argparse.ArgumentParser) -> None:
    p.add_argument("--samples", type=int, default=None, help="Configurations per (beta, L) cell")
    p.add_argument("--seed", type=int, default=None, help="RNG seed (required)")
    p.add_argument("--sampler", choices=["exact", "mcmc"], default=None, help="Sampler kind (default: exact)")
    p.add_argument("--burn-in", dest="burn_in", type=int, default=None, help="MCMC proposals discarded first")
    p.add_argument("--thin", type=int, default=None, help="MCMC proposals per kept sample")
    p.add_argument("--workers", type=int, default=None, help="Independent sampler streams")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ipdsaw",
        description="Partition functions, sampling, shapes and path enumeration for interacting partially directed walks.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {TOOL_VERSION}")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="More logging (-vv for debug)")
    parser.add_argument("-q", "--quiet", action="store_true", help="Only errors")
    parser.add_argument("--config", default=None, help=f"INI file with a [run] section (config command default: {DEFAULT_INI})")
    sub = parser.add_subparsers(dest="command", help="Commands")

    # critical
    p_crit = sub.add_parser("critical", help="Critical point and asymptotic constants")
    p_crit.add_argument("--epsilons", type=float, nargs="*", default=None, help="Also print f~(beta_c - eps) / eps^1.5")
    _add_output(p_crit)

    # free-energy
    p_fe = sub.add_parser("free-energy", help="Table of (beta, excess free energy, free energy)")
    p_fe.add_argument("--beta-grid", dest="betas", default=None, help="Betas: '0.5,1', 'lo:hi:n' or 'beta_c'")
    p_fe.add_argument("--plot", choices=["none", "svg"], default=None, help="Also write an SVG plot")
    _add_output(p_fe)

    # sample
    p_sample = sub.add_parser("sample", help="Write an ensemble file of Gibbs-distributed configurations")
    p_sample.add_argument("--beta", dest="betas", default=None, help="Inverse temperature")
    p_sample.add_argument("--length", dest="lengths", default=None, help="Polymer length L")
    _add_sampling(p_sample)
    p_sample.add_argument("-o", "--output", default=None, help="Ensemble file (default: stdout)")

    # analyze
    p_an = sub.add_parser("analyze", help="Estimators and exponent fits over (beta, L) cells")
    p_an.add_argument("--betas", default=None, help="Betas: '0.5,1', 'lo:hi:n' or 'beta_c'")
    p_an.add_argument("--lengths", default=None, help="Lengths, e.g. 256,512,1024")
    p_an.add_argument("--ensemble", default=None, help="Analyze ensemble file(s) instead of sampling (comma-separated)")
    p_an.add_argument("--time-exp", dest="time_exp", default=None, help="Time exponent of the profile rescaling (e.g. 1/2)")
    p_an.add_argument("--space-exp", dest="space_exp", default=None, help="Space exponent of the profile rescaling")
    p_an.add_argument("--grid", type=int, default=None, help="Profile grid points")
    p_an.add_argument("--plot", choices=["none", "svg"], default=None, help="Also write SVG plots")
    _add_sampling(p_an)
    _add_output(p_an)

    # wulff
    p_w = sub.add_parser("wulff", help="Collapsed-phase limit shape")
    p_w.add_argument("--beta", dest="betas", default=None, help="Inverse temperature (> beta_c)")
    p_w.add_argument("--grid", type=int, default=None, help="Curve grid points")
    p_w.add_argument("--plot", choices=["none", "svg"], default=None, help="Also write an SVG plot")
    _add_output(p_w)

    # ipsaw
    p_ip = sub.add_parser("ipsaw", help="Enumerate a path family with the midpoint energy")
    p_ip.add_argument("--family", choices=["PD", "NE", "PSAW", "SAW"], default=None, help="Path family")
    p_ip.add_argument("--max-length", dest="max_length", type=int, default=None, help="Largest path length")
    p_ip.add_argument("--betas", default=None, help="Betas for the partition functions")
    p_ip.add_argument("--workers", type=int, default=None, help="Worker processes")
    _add_output(p_ip)

    # selftest
    p_st = sub.add_parser("selftest", help="Run the oracle suites")
    p_st.add_argument("suites", nargs="*", help="Suite names (default: all)")
    p_st.add_argument("--failfast", action="store_true", help="Stop on first failure")

    # config
    p_cfg = sub.add_parser("config", help="Read or write the INI file")
    p_cfg.add_argument("--get", action="store_true", help="Get value for key")
    p_cfg.add_argument("--set", dest="config_set", action="store_true", help="Set key to value")
    p_cfg.add_argument("--list", action="store_true", help="List all key=value")
    p_cfg.add_argument("key", nargs="?", default=None, help="Config key (section.option)")
    p_cfg.add_argument("value", nargs="?", default=None, help="Value (for --set)")
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    level = logging.ERROR if args.quiet else (logging.WARNING, logging.INFO, logging.DEBUG)[min(args.verbose, 2)]
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    if not args.command:
        parser.print_help()
        return EXIT_OK

    handlers = {
        "critical": cmd_critical,
        "free-energy": cmd_free_energy,
        "sample": cmd_sample,
        "analyze": cmd_analyze,
        "wulff": cmd_wulff,
        "ipsaw": cmd_ipsaw,
        "selftest": cmd_selftest,
        "config": cmd_config,
    }
    handler = handlers.get(args.command)
    if not handler:
        parser.print_help()
        return EXIT_CONFIG
    try:
        return handler(args) or EXIT_OK
    except IpdsawError as e:
        print(f"Error: {e}")
        return _exit_code(e)


if __name__ == "__main__":
    sys.exit(main())
