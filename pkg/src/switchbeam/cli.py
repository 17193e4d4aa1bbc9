"""Command-line front-end: every analysis as a scriptable subcommand.

Scalar results go to stdout as one compact JSON object, vector results as
CSV. Angles are degrees, frequencies GHz, gains dBi. Exit codes: 0 success,
1 domain error (diagnostics on stderr, no partial payload), 2 usage error.
"""

from __future__ import annotations

import argparse
import io
import json
import re
import sys
from contextlib import redirect_stderr, redirect_stdout
from dataclasses import dataclass

from . import arraymodel, diversity, linksim, pattern, sparams


@dataclass(frozen=True)
class CommandResult:
    exit_code: int
    stdout: str
    stderr: str


def _json_line(obj) -> str:
    return json.dumps(obj, separators=(",", ":"))


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


_SNP_RE = re.compile(r"\.s(\d+)p$", re.IGNORECASE)


def _load_sweep(path: str, n_ports: int | None) -> sparams.SweepSMatrix:
    if n_ports is None:
        m = _SNP_RE.search(path)
        if not m:
            raise ValueError(
                "cannot infer the port count; pass --n-ports or use a .sNp suffix"
            )
        n_ports = int(m.group(1))
    return sparams.parse_touchstone(_read_text(path), n_ports)


def _parse_pair(text: str) -> tuple[int, int]:
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError("expected a port pair like 1,2")
    return int(parts[0]), int(parts[1])


def _parse_density(spec: str) -> diversity.AngularDensity:
    if spec == "isotropic":
        return diversity.AngularDensity.isotropic()
    if spec.startswith("gaussian:"):
        try:
            mean, sigma = (float(v) for v in spec.split(":", 1)[1].split(","))
        except ValueError:
            raise ValueError(
                "gaussian density spec must be gaussian:<mean_deg>,<sigma_deg>"
            ) from None
        return diversity.AngularDensity.gaussian_elevation(mean, sigma)
    raise ValueError(f"unknown density spec {spec!r}")


def _environment(args) -> diversity.PropagationEnvironment:
    xpr = float("inf") if args.xpr == "inf" else float(args.xpr)
    return diversity.PropagationEnvironment(
        xpr_linear=xpr,
        theta_density=_parse_density(args.theta_env),
        phi_density=_parse_density(args.phi_env),
    )


def _load_catalog(args) -> arraymodel.ArrayCatalog:
    if getattr(args, "catalog", None):
        return arraymodel.load_catalog_json(_read_text(args.catalog))
    return arraymodel.default_catalog()


def _add_env_flags(p: argparse.ArgumentParser):
    p.add_argument("--xpr", default="1.0", help="cross-pol ratio, linear, or 'inf'")
    p.add_argument("--theta-env", default="isotropic",
                   help="'isotropic' or 'gaussian:<mean>,<sigma>'")
    p.add_argument("--phi-env", default="isotropic",
                   help="'isotropic' or 'gaussian:<mean>,<sigma>'")


def _cmd_pattern_synth(args) -> str:
    params = pattern.BeamParams(
        peak_gain_dbi=args.gain,
        steer_theta_deg=args.steer,
        hpbw_e_deg=args.hpbw_e,
        hpbw_h_deg=args.hpbw_h,
        sll_db=args.sll,
        f2b_db=args.f2b,
    )
    grid = pattern.AngleGrid.regular(args.theta_step, args.phi_step)
    return pattern.save_pattern_csv(pattern.synthesize_beam(params, grid, args.freq))


def _cmd_pattern_stats(args) -> str:
    p = pattern.load_pattern_csv(_read_text(args.pattern))
    peak = pattern.extract_peak(p)
    out = {
        "freq_ghz": p.freq_ghz,
        "peak_gain_dbi": peak.gain_dbi,
        "steer_theta_deg": peak.steer_deg,
    }
    for key, plane in (("hpbw_e_deg", "E"), ("hpbw_h_deg", "H")):
        try:
            out[key] = pattern.extract_hpbw(p, plane)
        except pattern.BeamTooWideError:
            out[key] = None
    for key, plane in (("sll_e_db", "E"), ("sll_h_db", "H")):
        out[key] = pattern.extract_sll(p, plane)
    out["f2b_db"] = pattern.extract_f2b(p)
    try:
        out["implied_efficiency"] = pattern.integrate_sphere(p)
    except pattern.CoverageError:
        out["implied_efficiency"] = None
    return _json_line(out)


def _cmd_sparams_parse(args) -> str:
    return sparams.format_touchstone(_load_sweep(args.touchstone, args.n_ports))


def _cmd_sparams_bandwidth(args) -> str:
    sm = _load_sweep(args.touchstone, args.n_ports)
    band = sparams.bandwidth_minus10db(sm, args.port, args.threshold)
    if band is None:
        return _json_line({"f_lo_ghz": None, "f_hi_ghz": None})
    return _json_line({"f_lo_ghz": band[0], "f_hi_ghz": band[1]})


def _cmd_sparams_isolation(args) -> str:
    sm = _load_sweep(args.touchstone, args.n_ports)
    i, j = _parse_pair(args.ports)
    return _json_line({"isolation_db": sparams.isolation_db(sm, i, j, args.freq)})


def _cmd_sparams_resonance(args) -> str:
    sm = _load_sweep(args.touchstone, args.n_ports)
    res = sparams.resonance_freq(sm, args.port)
    return _json_line({"freq_ghz": res.freq_ghz, "at_edge": res.at_edge})


def _cmd_div_ecc_s(args) -> str:
    sm = _load_sweep(args.touchstone, args.n_ports)
    i, j = _parse_pair(args.ports)
    ecc = diversity.ecc_from_sparams(sm, i, j, args.freq)
    return _json_line({"rho_e": ecc.rho_e, "rho_e_db": ecc.rho_e_db})


def _cmd_div_ecc_p(args) -> str:
    p1 = pattern.load_pattern_csv(_read_text(args.pattern1))
    p2 = pattern.load_pattern_csv(_read_text(args.pattern2))
    ecc = diversity.ecc_from_patterns(p1, p2, _environment(args))
    return _json_line({"rho_e": ecc.rho_e, "rho_e_db": ecc.rho_e_db})


def _cmd_div_edg(args) -> str:
    ecc = diversity.EccResult(args.rho_e)
    return _json_line(
        {
            "dg_db": diversity.diversity_gain(ecc),
            "edg_db": diversity.edg(ecc, args.efficiency),
        }
    )


def _cmd_div_meg(args) -> str:
    p = pattern.load_pattern_csv(_read_text(args.pattern))
    return _json_line({"meg_db": diversity.meg(p, _environment(args))})


def _cmd_wall_lookup(args) -> str:
    beam, gain = arraymodel.wall_law(args.height)
    return _json_line({"beam_deg": beam, "gain_dbi": gain})


def _cmd_array_catalog(args) -> str:
    return arraymodel.catalog_to_json(_load_catalog(args))


def _cmd_array_coverage(args) -> str:
    points = arraymodel.coverage_envelope(
        _load_catalog(args), args.theta_min, args.theta_max, args.step
    )
    lines = ["theta_deg,element_id,gain_dbi"]
    for pt in points:
        lines.append(f"{pt.theta_deg!r},{pt.element_id},{pt.gain_dbi!r}")
    return "\n".join(lines) + "\n"


def _cmd_link_fspl(args) -> str:
    return _json_line({"fspl_db": linksim.fspl_db(args.freq, args.distance)})


def _cmd_link_capacity(args) -> str:
    cap = linksim.capacity_bps(
        args.bandwidth, args.m, args.k, 10.0 ** (args.snr_db / 10.0)
    )
    return _json_line({"capacity_bps": cap})


def _cmd_link_simulate(args) -> str:
    cat = _load_catalog(args)
    budget = linksim.load_budget_json(_read_text(args.budget))
    trajectory = linksim.load_trajectory_csv(_read_text(args.trajectory))
    switch = (
        linksim.load_switch_json(_read_text(args.switch))
        if args.switch
        else linksim.SwitchConfig()
    )
    records = linksim.simulate(cat, budget, trajectory, switch, args.m, args.k)
    return linksim.save_records_csv(records)


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="switchbeam",
        description="Switched-beam MIMO antenna modeling and link simulation.",
    )
    sub = top.add_subparsers(dest="command", required=True)

    g = sub.add_parser("pattern", help="beam synthesis and statistics")
    gs = g.add_subparsers(dest="subcommand", required=True)
    p = gs.add_parser("synth", help="synthesize a parametric beam as pattern CSV")
    p.add_argument("--gain", type=float, required=True, help="peak gain, dBi")
    p.add_argument("--steer", type=float, default=0.0, help="H-plane tilt, deg")
    p.add_argument("--hpbw-e", type=float, default=36.7)
    p.add_argument("--hpbw-h", type=float, default=56.0)
    p.add_argument("--sll", type=float, default=-10.0)
    p.add_argument("--f2b", type=float, default=6.5)
    p.add_argument("--freq", type=float, default=28.0)
    p.add_argument("--theta-step", type=float, default=0.5)
    p.add_argument("--phi-step", type=float, default=1.0)
    p.set_defaults(func=_cmd_pattern_synth)
    p = gs.add_parser("stats", help="peak/HPBW/SLL/F2B of a pattern CSV")
    p.add_argument("--pattern", default="-", help="pattern CSV path or - for stdin")
    p.set_defaults(func=_cmd_pattern_stats)

    g = sub.add_parser("sparams", help="Touchstone sweep analysis")
    gs = g.add_subparsers(dest="subcommand", required=True)
    for name, func, extra in (
        ("parse", _cmd_sparams_parse, ()),
        ("bandwidth", _cmd_sparams_bandwidth, ("port", "threshold")),
        ("isolation", _cmd_sparams_isolation, ("ports", "freq")),
        ("resonance", _cmd_sparams_resonance, ("port",)),
    ):
        p = gs.add_parser(name)
        p.add_argument("--touchstone", required=True, help="Touchstone v1 file")
        p.add_argument("--n-ports", type=int, default=None,
                       help="port count (default: from the .sNp suffix)")
        if "port" in extra:
            p.add_argument("--port", type=int, required=True)
        if "threshold" in extra:
            p.add_argument("--threshold", type=float, default=-10.0)
        if "ports" in extra:
            p.add_argument("--ports", required=True, help="port pair, e.g. 1,2")
        if "freq" in extra:
            p.add_argument("--freq", type=float, required=True)
        p.set_defaults(func=func)

    g = sub.add_parser("diversity", help="correlation and diversity figures")
    gs = g.add_subparsers(dest="subcommand", required=True)
    p = gs.add_parser("ecc-s", help="envelope correlation from S-parameters")
    p.add_argument("--touchstone", required=True)
    p.add_argument("--n-ports", type=int, default=None)
    p.add_argument("--ports", required=True, help="port pair, e.g. 1,2")
    p.add_argument("--freq", type=float, required=True)
    p.set_defaults(func=_cmd_div_ecc_s)
    p = gs.add_parser("ecc-p", help="envelope correlation from two patterns")
    p.add_argument("--pattern1", required=True)
    p.add_argument("--pattern2", required=True)
    _add_env_flags(p)
    p.set_defaults(func=_cmd_div_ecc_p)
    p = gs.add_parser("edg", help="diversity gain and its efficiency-scaled form")
    p.add_argument("--rho-e", type=float, required=True)
    p.add_argument("--efficiency", type=float, default=1.0)
    p.set_defaults(func=_cmd_div_edg)
    p = gs.add_parser("meg", help="mean effective gain of a pattern")
    p.add_argument("--pattern", default="-")
    _add_env_flags(p)
    p.set_defaults(func=_cmd_div_meg)

    g = sub.add_parser("wall", help="wall-height steering law")
    gs = g.add_subparsers(dest="subcommand", required=True)
    p = gs.add_parser("lookup", help="beam direction and gain for a wall height")
    p.add_argument("--height", type=float, required=True, help="wall height, mm")
    p.set_defaults(func=_cmd_wall_lookup)

    g = sub.add_parser("array", help="element catalog and coverage envelope")
    gs = g.add_subparsers(dest="subcommand", required=True)
    p = gs.add_parser("catalog", help="emit the element catalog as JSON")
    p.add_argument("--catalog", default=None, help="override catalog JSON file")
    p.set_defaults(func=_cmd_array_catalog)
    p = gs.add_parser("coverage", help="best element and gain across elevation")
    p.add_argument("--theta-min", type=float, default=-30.0)
    p.add_argument("--theta-max", type=float, default=30.0)
    p.add_argument("--step", type=float, default=0.5)
    p.add_argument("--catalog", default=None)
    p.set_defaults(func=_cmd_array_coverage)

    g = sub.add_parser("link", help="path loss, capacity, and simulation")
    gs = g.add_subparsers(dest="subcommand", required=True)
    p = gs.add_parser("fspl", help="free-space path loss")
    p.add_argument("--freq", type=float, required=True, help="GHz")
    p.add_argument("--distance", type=float, required=True, help="m")
    p.set_defaults(func=_cmd_link_fspl)
    p = gs.add_parser("capacity", help="MIMO capacity")
    p.add_argument("--bandwidth", type=float, required=True, help="Hz")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--snr-db", type=float, required=True)
    p.set_defaults(func=_cmd_link_capacity)
    p = gs.add_parser("simulate", help="trajectory simulation with beam switching")
    p.add_argument("--trajectory", required=True, help="trajectory CSV")
    p.add_argument("--budget", required=True, help="link budget JSON")
    p.add_argument("--switch", default=None, help="switch config JSON")
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--catalog", default=None)
    p.set_defaults(func=_cmd_link_simulate)

    return top


def run(argv: list[str]) -> CommandResult:
    """Execute one command; capture output instead of exiting the process."""
    out = io.StringIO()
    err = io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        try:
            args = build_parser().parse_args(argv)
            payload = args.func(args)
            sys.stdout.write(payload)
            if not payload.endswith("\n"):
                sys.stdout.write("\n")
            code = 0
        except SystemExit as exc:  # argparse help (0) or usage error (2)
            code = int(exc.code or 0)
        except (ValueError, OSError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            code = 1
    return CommandResult(code, out.getvalue(), err.getvalue())


def main(argv: list[str] | None = None) -> int:
    res = run(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(res.stdout)
    sys.stderr.write(res.stderr)
    return res.exit_code


if __name__ == "__main__":
    sys.exit(main())
