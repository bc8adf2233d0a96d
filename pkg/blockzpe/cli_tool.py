#!/usr/bin/env python3

""" Zero-point spectra tool.

Evaluates the vacuum spectra of a dispersive block and writes plot-ready tables.

"""

import sys
import signal
import argparse
import multiprocessing

from blockzpe import *
from blockzpe import workspace

_args: argparse.Namespace

def EnumFromStr(type, val: str) -> type:
    try:
        return type[val]
    except KeyError:
        raise argparse.ArgumentTypeError(
            f"invalid value '{val}', should be one of: {', '.join(e.name for e in type)}")

def _from_str(parse: Callable[[str], Any]) -> Callable[[str], Any]:
    def ret(txt: str) -> Any:
        try:
            return parse(txt)
        except ValueError as e:
            raise argparse.ArgumentTypeError(str(e))
    return ret

class MyFormatter(argparse.RawDescriptionHelpFormatter):
    def __init__(self, *args, **kwargs):
        super().__init__(max_help_position=26, *args, **kwargs)

# Usage errors exit with 1; 2 is reserved for numerical failures.
class ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")

def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("-v", dest="logLevel", default=None,
                        type=lambda x: EnumFromStr(LogLevel, x),
                        help="Set verbosity level: " + ", ".join(e.name for e in LogLevel))
    parser.add_argument("--config", metavar="FILE",
                        help="Run configuration file; options below override it")

    group = parser.add_argument_group(title="Model")
    group.add_argument("--material", metavar="PRESET|FILE",
                       help=f"Material preset ({', '.join(PRESETS)}) or a file with "
                            f"[material] and optional [mu] sections (default: gold)")
    group.add_argument("--length", type=_from_str(Length.fromStr), metavar="VALUE[um|inv_eV]",
                       help="Block length (default: 1um)")

    group = parser.add_argument_group(title="Numerics")
    group.add_argument("--grid", type=_from_str(Grid.fromStr), metavar="START:STOP:COUNT",
                       help="Frequency grid in eV (default: 0.1:20:400)")
    group.add_argument("--tol", type=float, dest="tolerance", metavar="T",
                       help="Relative tolerance of integrals (default: 1e-4)")
    group.add_argument("--serial", action="store_true",
                       help="Evaluate in one process; output is bit-reproducible")

    group = parser.add_argument_group(title="Output")
    group.add_argument("--out", dest="output", metavar="PATH",
                       help="Output file (default: stdout)")
    group.add_argument("--format", choices=["csv", "json"],
                       help="Output format (default: csv)")

def commandline(argv: Sequence[str] | None = None) -> argparse.Namespace:
    global _args
    argparser = ArgumentParser(prog="zpe_tool", formatter_class=MyFormatter,
        description=f"Zero-point spectra of a dispersive block, version {BLOCKZPE_VERSION}.",
        epilog="""
Units: frequencies in eV, lengths in eV^-1 unless suffixed with um (1 um = 5.068 eV^-1).

Exit codes:
  0  success
  1  usage or configuration error
  2  numerical failure (non-convergence, failed verification check)
""")
    argparser.add_argument('--version',
                           action='version', version=f"%(prog)s {BLOCKZPE_VERSION}")
    commands = argparser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    cmd = commands.add_parser("material", formatter_class=MyFormatter,
                              help="Permittivity, permeability and index over the grid")
    _add_common(cmd)

    cmd = commands.add_parser("spectrum", formatter_class=MyFormatter,
                              help="Spectral energy W, free-space W_free and Casimir W_C")
    _add_common(cmd)

    cmd = commands.add_parser("variance", formatter_class=MyFormatter,
                              help="Field variance densities across x at one frequency")
    _add_common(cmd)
    cmd.add_argument("--omega", type=float, metavar="EV", help="Frequency (default: 2)")
    cmd.add_argument("--xgrid", type=_from_str(Grid.fromStr), metavar="START:STOP:COUNT",
                     help="Positions in eV^-1 (default: -5:15:81); "
                          "a negative start needs the --xgrid=START:STOP:COUNT form")

    cmd = commands.add_parser("total-energy", formatter_class=MyFormatter,
                              help="Total Casimir energy for a list of block lengths")
    _add_common(cmd)
    cmd.add_argument("--lengths", type=_from_str(lengths_from_str), metavar="L1,L2,...",
                     help="Block lengths (default: 0.1um,1um,10um)")

    cmd = commands.add_parser("kk-check", formatter_class=MyFormatter,
                              help="Kramers-Kronig reconstruction of Re eps over the grid")
    _add_common(cmd)
    cmd.add_argument("--cutoff", type=float, metavar="EV",
                     help="Upper limit of the dispersion integral (default: 1000)")

    cmd = commands.add_parser("verify", formatter_class=MyFormatter,
                              help="Run the oracle suite (both presets unless --material)")
    _add_common(cmd)
    cmd.add_argument("--corrupt-alpha", action="store_true", help=argparse.SUPPRESS)

    _args = argparser.parse_args(argv)
    return _args

_OVERRIDES = ("length", "grid", "tolerance", "output", "format",
              "lengths", "omega", "xgrid", "cutoff")

def load_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig.fromFile(args.config) if args.config else RunConfig()
    if args.material is not None:
        cfg.material = material_from_arg(args.material)
    for name in _OVERRIDES:
        if getattr(args, name, None) is not None:
            setattr(cfg, name, getattr(args, name))
    return cfg.validate()

def _meta(cfg: RunConfig, command: str) -> dict[str, Any]:
    return {"tool": "zpe_tool", "version": BLOCKZPE_VERSION, "command": command,
            "config": cfg.asDict()}

### Commands ###
# Each returns the dataset and the exit status.

def cmd_material(cfg: RunConfig) -> tuple[Dataset, int]:
    omega = cfg.grid.values()
    s = response_sample(cfg.material, omega)
    ret = Dataset(["omega_eV", "eps_re", "eps_im", "mu_re", "mu_im", "n_re", "n_im"],
                  meta=_meta(cfg, "material"))
    for w, eps, mu, n in zip(omega, np.broadcast_to(s.epsilon, omega.shape),
                             np.broadcast_to(s.mu, omega.shape), np.broadcast_to(s.n, omega.shape)):
        ret.append(w, eps.real, eps.imag, mu.real, mu.imag, n.real, n.imag)
    return ret, 0

def cmd_spectrum(cfg: RunConfig) -> tuple[Dataset, int]:
    ret = Dataset(["omega_eV", "W", "W_free", "W_C"], meta=_meta(cfg, "spectrum"))
    for rec in spectrum_scan(cfg.material, cfg.length.inv_eV(), cfg.grid.values(),
                             multithread=workspace.multithread):
        ret.append(rec.omega, rec.W, rec.W_free, rec.W_C)
    return ret, 0

def cmd_variance(cfg: RunConfig) -> tuple[Dataset, int]:
    L = cfg.length.inv_eV()
    geom = BlockGeometry(L)
    sample = response_sample(cfg.material, cfg.omega)
    ret = Dataset(["x", "region", "dE2", "dB2", "u"], meta=_meta(cfg, "variance"))
    for x in cfg.xgrid.values():
        region = geom.region(float(x))
        v = (variance_density_inside(sample, L, float(x)) if region == Region.INSIDE else
             variance_density_outside(sample, L, float(x)))
        ret.append(v.x, region.name.lower(), v.dE2, v.dB2, v.u)
    return ret, 0

def _total_energy_row(model: MaterialModel, length: Length, tol: float) -> tuple[str, int, tuple]:
    with LogToStringScope() as log:
        converged = True
        try:
            res = integrate_spectrum(model, length.inv_eV(), tol=tol)
        except QuadratureError as e:
            Log.row_failed(f"total-energy:L={length}:", f"{e}")
            converged = False
            res = e.result if isinstance(e.result, QuadratureResult) else \
                  QuadratureResult(math.nan, math.inf, 0, math.nan)
    return log.getvalue(), log.errors, (length.inv_eV(), length.um(), res.value, res.error_estimate,
                                        res.tail_estimate, res.panels, converged)

def cmd_total_energy(cfg: RunConfig) -> tuple[Dataset, int]:
    ret = Dataset(["L_inv_eV", "L_um", "E_C", "error_estimate", "tail_estimate",
                   "panels", "converged"], meta=_meta(cfg, "total-energy"))
    jobs = [(cfg.material, length, cfg.tolerance) for length in cfg.lengths]
    parallel = workspace.multithread and len(jobs) >= 2
    if not parallel:
        results = [_total_energy_row(*job) for job in jobs]
    else:
        init_multithreading()
        with multiprocessing.Pool(processes=min(len(jobs), multiprocessing.cpu_count()),
                                  initializer=signal.signal,
                                  initargs=(signal.SIGINT, signal.SIG_IGN)) as pool:
            results = pool.starmap(_total_energy_row, jobs)
    failed = 0
    for log, errors, row in results:
        print(log, end='', file=workspace.logStream or sys.stderr)
        if parallel:
            workspace.addErrors(errors)
        ret.append(*row)
        failed += not row[-1]
    return ret, 2 if failed else 0

def cmd_kk_check(cfg: RunConfig) -> tuple[Dataset, int]:
    cfg.validate_cutoff()
    ret = Dataset(["omega_eV", "re_eps_minus_1", "kk_reconstructed", "abs_deviation"],
                  meta=_meta(cfg, "kk-check"))
    tol = min(cfg.tolerance, 1e-8)
    for w in cfg.grid.values():
        exact = float(np.real(permittivity(cfg.material, float(w)))) - 1.0
        res = kramers_kronig_transform(cfg.material, float(w), cfg.cutoff, tol)
        ret.append(w, exact, res.value, abs(res.value - exact))
    return ret, 0

def cmd_verify(cfg: RunConfig, explicit_material: bool = False,
               corrupt_alpha: bool = False) -> tuple[Dataset, int]:
    models = [cfg.material] if explicit_material else None
    checks = run_checks(models, VerifyOptions(corrupt_alpha=corrupt_alpha))
    ret = Dataset(["check", "deviation", "threshold", "status"], meta=_meta(cfg, "verify"))
    for check in checks:
        ret.append(check.name, check.deviation, check.threshold, check.status())
    return ret, 0 if all(check.passed for check in checks) else 2

def zpe_tool_main(argv: Sequence[str] | None = None) -> int:
    args = commandline(argv)
    resetErrors()
    if args.logLevel is not None:
        setLogLevel(args.logLevel)
    workspace.multithread = not args.serial

    try:
        cfg = load_config(args)
    except ConfigError as e:
        print(f"Error: invalid configuration: {e}", file=sys.stderr)
        return 1

    try:
        match args.command:
            case "material":
                data, status = cmd_material(cfg)
            case "spectrum":
                data, status = cmd_spectrum(cfg)
            case "variance":
                data, status = cmd_variance(cfg)
            case "total-energy":
                data, status = cmd_total_energy(cfg)
            case "kk-check":
                data, status = cmd_kk_check(cfg)
            case "verify":
                data, status = cmd_verify(cfg, args.material is not None, args.corrupt_alpha)
            case _:
                raise ValueError(f"unknown command '{args.command}'")
    except NumericalError as e:
        print(f"Error: {type(e).__name__}: {e}", file=sys.stderr)
        return 2
    except ValueError as e:
        print(f"Error: {e}", file=sys.stderr)
        return 1

    if args.command == "verify" and cfg.output is None and cfg.format == "csv":
        print_columns([(s, c, f"{d:.3e}", f"< {t:.0e}") for c, d, t, s in data.rows])
    else:
        data.write(cfg.output, cfg.format)
    # Logged ERROR records, pool workers included, count as a numerical failure too.
    return status or (2 if workspace.errors else 0)
