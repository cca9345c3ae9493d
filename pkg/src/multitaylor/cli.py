"""Command-line front end: scenario in, deterministic report out.

Every number in a report comes from a single library call; this layer only
routes inputs and serializes results.  Each run writes into --out:

    run.txt      timestamp header (line 1) plus a fixed input echo
    report.json  inputs, versions, measured values, verdict (no timestamps)
    *.csv        one table per result family

Identical inputs reproduce report.json and every CSV byte for byte; only the
first line of run.txt varies.  Exit status is 0 when the command's pass
criterion holds, 1 when it does not, and 2 on parse or validation errors
(diagnostics name the offending line and field).
"""

from __future__ import annotations

import argparse
import datetime
import json
import math
import os
import sys

import mpmath as mp
import numpy as np

from . import __version__
from .bernstein_walsh import bw_construct_full
from .construct import (
    WITNESS_MAGIC,
    TargetBundle,
    read_witness,
    run_construction,
    verify_umult,
    write_witness,
)
from .gaps import (
    center_invariance_check,
    detect_gaps,
    read_coefficients,
    tail_collapse_check,
    write_coefficients,
)
from .geometry import Contour, OpenDisk, make_contour
from .polynomials import ComplexPolynomial
from .potential import capacity, fekete_points, green_eval
from .scenario import (
    ScenarioError,
    Scenario,
    _build_region,
    _build_target,
    _float,
    _int,
    load_scenario,
    with_overrides,
)
from .sequences import criterion_subsequence, is_well_ordered, rearrange_well_ordered


# ---------------------------------------------------------------------------
# serialization helpers


def _plain(value):
    """Recursively convert results to JSON-safe, deterministic values."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        v = float(value)
        return v if math.isfinite(v) else repr(v)
    if isinstance(value, (complex, np.complexfloating)):
        return [float(value.real), float(value.imag)]
    return value


def _cell(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _write_csv(path: str, header, rows) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_cell(v) for v in row) + "\n")


# ---------------------------------------------------------------------------
# subcommands: each returns (passed, results, {filename: (header, rows)})


def _cmd_classify(scn: Scenario, out: str):
    family = scn.require_family()
    ordered, reports = is_well_ordered(family, scn.horizon)
    perm = tuple(range(1, family.sigma0 + 1))
    if not ordered:
        perm = rearrange_well_ordered(family, scn.horizon)
    arranged = family.permuted(perm)
    res = criterion_subsequence(arranged, levels=scn.levels, horizon=scn.horizon)

    ordering_rows = [
        (r.sigma, r.forward.value, r.forward.exact, r.backward.value, r.backward.exact, r.ok)
        for r in reports
    ]
    cert_rows = [
        (row.level, row.mu, row.first_value) + tuple(row.ratios)
        for row in (res.certificate.rows if res.certificate else ())
    ]
    results = {
        "well_ordered": ordered,
        "permutation": perm,
        "labels": [m.label for m in family.members],
        "status": res.status,
        "exact": res.exact,
        "binding": res.binding,
        "levels": scn.levels,
        "certificate": [
            {"level": r.level, "mu": r.mu, "first_value": r.first_value, "ratios": r.ratios}
            for r in (res.certificate.rows if res.certificate else ())
        ],
        "replay_ok": res.certificate.replay(arranged) if res.certificate else None,
    }
    ratio_names = tuple(f"ratio_{i + 1}" for i in range(family.sigma0 - 1))
    tables = {
        "ordering.csv": (
            ("pair", "forward", "forward_exact", "backward", "backward_exact", "ok"),
            ordering_rows,
        ),
        "certificate.csv": (("level", "mu", "first_value") + ratio_names, cert_rows),
    }
    return res.status == "certificate", results, tables


def _cmd_construct(scn: Scenario, out: str):
    cs = scn.construction()
    rep = run_construction(cs, trials=range(1, scn.trials + 1))
    theta_ok = scn.theta0 is None or all(r.theta0 <= scn.theta0 for r in rep.stages)

    stage_rows = [
        (
            r.sigma,
            r.n,
            r.window[0],
            r.window[1],
            r.band.lo if r.band is not None else "",
            r.band.hi if r.band is not None else "",
            r.m_const,
            r.theta0,
            r.bound_l,
            r.bound_k,
        )
        for r in rep.stages
    ]
    error_rows = [("L", rep.final_errors.on_l, rep.eps / 2.0)]
    for i, err in enumerate(rep.final_errors.per_sigma, start=1):
        error_rows.append((f"K{i}", err, 1.0 / rep.s))
    # .coef carries the plain stream for the gap tools; .staged keeps the
    # factored stage data the far-set verification needs
    write_coefficients(os.path.join(out, "witness.coef"), rep.f.coeffs)
    write_witness(os.path.join(out, "witness.staged"), rep.f)

    results = {
        "n1": rep.n1,
        "seed_degree": rep.p.degree,
        "witness_degree": rep.f.degree,
        "final_error_on_l": rep.final_errors.on_l,
        "final_errors_per_set": rep.final_errors.per_sigma,
        "eps": rep.eps,
        "s": rep.s,
        "binding": rep.binding,
        "skipped": [{"n": n, "reason": why} for n, why in rep.skipped],
        "theta0_ceiling": scn.theta0,
        "theta0_ok": theta_ok,
        "witness_files": ["witness.coef", "witness.staged"],
    }
    tables = {
        "stages.csv": (
            ("sigma", "n", "window_lo", "window_hi", "band_lo", "band_hi",
             "m_const", "theta0", "bound_l", "bound_k"),
            stage_rows,
        ),
        "errors.csv": (("set", "error", "required_below"), error_rows),
    }
    return bool(rep.passed and theta_ok), results, tables


def _load_witness(path: str, zeta0: complex) -> ComplexPolynomial:
    """Witness from either format: staged file or plain coefficient stream."""
    with open(path, "r", encoding="utf-8") as fh:
        staged = fh.readline().strip() == WITNESS_MAGIC
    if not staged:
        return ComplexPolynomial(zeta0, read_coefficients(path))
    witness = read_witness(path)
    if complex(witness.center) != complex(zeta0):
        raise ValueError(
            f"witness center {witness.center} differs from the scenario "
            f"center {zeta0}; a staged witness cannot be recentered"
        )
    return witness


def _cmd_verify(scn: Scenario, out: str):
    omega = scn.require_domain()
    family = scn.require_family()
    _, path = scn.require_opt("verify", "coeffs")
    witness = _load_witness(scn.resolve_path(path), omega.zeta0)
    bundle = TargetBundle(omega.zeta0, scn.target_pairs(), scn.s)
    rep = verify_umult(witness, bundle, family, range(1, scn.trials + 1))

    rows = [
        (n,) + tuple(rep.errors[s][i] for s in range(family.sigma0)) + (n in rep.common,)
        for i, n in enumerate(rep.n_values)
    ]
    results = {
        "threshold": rep.threshold,
        "witness_degree": witness.degree,
        "common": rep.common,
        "n_star": rep.n_star,
    }
    header = ("n",) + tuple(f"err_K{s + 1}" for s in range(family.sigma0)) + ("common",)
    return rep.passed, results, {"errors.csv": (header, rows)}


def _bw_contour(scn: Scenario, kset) -> Contour:
    """Integration loop: explicit circle, region routing, or an auto disk."""
    nline, nraw = scn.opt("bw", "nodes")
    nodes = _int(nraw, nline, "bw.nodes") if nraw else 512
    gline, graw = scn.opt("bw", "contour")
    if graw:
        toks = graw.split()
        if len(toks) != 3 or toks[0] != "circle":
            raise ScenarioError("contour takes 'circle <center> <radius>'",
                                gline, "bw.contour")
        center = complex(toks[1])
        radius = float(toks[2])
        if bool(np.any(np.abs(kset.all_points - center) >= radius)):
            raise ScenarioError("contour circle must enclose the set", gline, "bw.contour")
        return Contour.circle(center, radius, nodes)
    cline, craw = scn.opt("bw", "clearance")
    clearance = _float(craw, cline, "bw.clearance") if craw else max(kset.diameter, 1e-3) / 8.0
    rline, rraw = scn.opt("bw", "region")
    if rraw:
        region = _build_region(rraw, rline, "bw.region")
    else:
        x0, x1, y0, y1 = kset.bbox()
        center = complex((x0 + x1) / 2.0, (y0 + y1) / 2.0)
        inner_radius = float(np.max(np.abs(kset.all_points - center)))
        region = OpenDisk(center, inner_radius + 3.0 * clearance)
    return make_contour(kset, region, clearance, n_nodes=nodes)


def _cmd_bw(scn: Scenario, out: str):
    fline, fspec = scn.require_opt("bw", "function")
    func = _build_target(fspec, fline, "bw.function")
    _, set_name = scn.require_opt("bw", "set")
    kset = scn.resolve_set(set_name, field="bw.set")
    tline, traw = scn.require_opt("bw", "tau")
    tau = _int(traw, tline, "bw.tau")

    q = fekete_points(kset, tau)
    contour = _bw_contour(scn, kset)
    form, rep = bw_construct_full(func, contour, q, k=kset)
    poly = form.to_polynomial()

    coeff_rows = [(i, c.real, c.imag) for i, c in enumerate(poly.coeffs)]
    bound_rows = [
        (rep.sup_err, rep.length, rep.dist, rep.q_sup_k, rep.q_min_gamma,
         rep.f_sup_gamma, rep.noise, rep.rhs, rep.ok)
    ]
    results = {
        "tau": tau,
        "degree": poly.degree,
        "extremal_method": q.method,
        "sup_err": rep.sup_err,
        "bound_rhs": rep.rhs,
        "bound_ok": rep.ok,
        "contour_length": rep.length,
    }
    tables = {
        "coefficients.csv": (("index", "re", "im"), coeff_rows),
        "bound.csv": (
            ("sup_err", "length", "dist", "q_sup_k", "q_min_gamma",
             "f_sup_gamma", "noise", "rhs", "ok"),
            bound_rows,
        ),
    }
    return rep.ok, results, tables


def _cmd_fekete(scn: Scenario, out: str):
    _, set_name = scn.require_opt("fekete", "set")
    kset = scn.resolve_set(set_name, field="fekete.set")
    nline, nraw = scn.require_opt("fekete", "n")
    n = _int(nraw, nline, "fekete.n")
    ep = fekete_points(kset, n)
    rows = [(i, z.real, z.imag) for i, z in enumerate(ep.points)]
    results = {"n": ep.n, "method": ep.method, "vandermonde_log": ep.vandermonde_log}
    return True, results, {"points.csv": (("index", "re", "im"), rows)}


def _cmd_capacity(scn: Scenario, out: str):
    _, set_name = scn.require_opt("capacity", "set")
    kset = scn.resolve_set(set_name, field="capacity.set")
    nline, nraw = scn.opt("capacity", "n")
    n = _int(nraw, nline, "capacity.n") if nraw else 32
    value = capacity(kset, n)
    results = {"set": set_name, "n": n, "capacity": value}
    return True, results, {"capacity.csv": (("set", "n", "capacity"), [(set_name, n, value)])}


def _cmd_green(scn: Scenario, out: str):
    _, set_name = scn.require_opt("green", "set")
    kset = scn.resolve_set(set_name, field="green.set")
    nline, nraw = scn.opt("green", "n")
    n = _int(nraw, nline, "green.n") if nraw else 32
    pline, praw = scn.require_opt("green", "points")
    points = [complex(t) for t in praw.split()]
    if not points:
        raise ScenarioError("points must not be empty", pline, "green.points")
    values = np.atleast_1d(green_eval(kset, np.asarray(points, dtype=np.complex128), n))
    rows = [(z.real, z.imag, float(v)) for z, v in zip(points, values)]
    results = {"set": set_name, "n": n, "values": [float(v) for v in values]}
    return True, results, {"green.csv": (("re", "im", "green"), rows)}


def _parse_pairs(raw: str, line, field):
    pairs = []
    for chunk in raw.split(";"):
        toks = chunk.split()
        if len(toks) != 2:
            raise ScenarioError("each pair is two integers, pairs join with ';'", line, field)
        pairs.append((_int(toks[0], line, field), _int(toks[1], line, field)))
    return tuple(pairs)


def _cmd_gaps(scn: Scenario, out: str):
    _, path = scn.require_opt("gaps", "coeffs")
    coeffs = read_coefficients(scn.resolve_path(path))
    pline, praw = scn.require_opt("gaps", "pairs")
    pairs = _parse_pairs(praw, pline, "gaps.pairs")
    rline, rraw = scn.opt("gaps", "ratio_target")
    ratio_target = _float(rraw, rline, "gaps.ratio_target") if rraw else 8.0
    dline, draw = scn.opt("gaps", "decay_target")
    decay_target = _float(draw, dline, "gaps.decay_target") if draw else 0.2

    scan = detect_gaps(coeffs, pairs, ratio_target=ratio_target, decay_target=decay_target)
    band_rows = [
        (p, q, d) for (p, q), d in zip(scan.structure.pairs, scan.structure.decay)
    ]
    results = {
        "ratio_floor": scan.structure.ratio_floor,
        "ratio_target": ratio_target,
        "decay_target": decay_target,
        "ratio_ok": scan.ratio_ok,
        "decay_ok": scan.decay_ok,
        "verdict": scan.verdict,
    }
    tables = {"bands.csv": (("p", "q", "root_decay"), band_rows)}
    passed = scan.verdict

    cline, craw = scn.opt("gaps", "radii")
    if craw:
        radii = tuple(_float(t, cline, "gaps.radii") for t in craw.split())
        table = tail_collapse_check(ComplexPolynomial(0.0, coeffs), pairs, radii)
        collapse_rows = [
            (p, q) + row for (p, q), row in zip(table.pairs, table.entries)
        ]
        tables["collapse.csv"] = (
            ("p", "q") + tuple(f"sup_R_{r}" for r in radii),
            collapse_rows,
        )
        results["collapse_decreasing"] = table.decreasing
        passed = passed and all(table.decreasing)
    return passed, results, tables


def _cmd_invariance(scn: Scenario, out: str):
    _, path = scn.require_opt("invariance", "coeffs")
    coeffs = read_coefficients(scn.resolve_path(path))
    _, centers_name = scn.require_opt("invariance", "centers")
    centers = scn.resolve_set(centers_name, field="invariance.centers")
    _, k_name = scn.require_opt("invariance", "k_set")
    kset = scn.resolve_set(k_name, field="invariance.k_set")
    pline, praw = scn.require_opt("invariance", "p")
    p_values = tuple(_int(t, pline, "invariance.p") for t in praw.split())
    zline, zraw = scn.opt("invariance", "zeta_count")
    zeta_count = _int(zraw, zline, "invariance.zeta_count") if zraw else 64

    table = center_invariance_check(
        ComplexPolynomial(0.0, coeffs), centers, kset, p_values, zeta_count=zeta_count
    )
    rows = list(zip(table.p_values, table.entries))
    results = {
        "p_values": table.p_values,
        "entries": table.entries,
        "decreasing": table.decreasing,
        "final": table.final,
        "required_final_below": scn.invariance_final,
    }
    passed = table.decreasing and table.final <= scn.invariance_final
    return passed, results, {"invariance.csv": (("p", "sup_discrepancy"), rows)}


_COMMANDS = {
    "classify": (_cmd_classify, "order a family and search for a criterion certificate"),
    "construct": (_cmd_construct, "build the seed, all corrections, and the witness"),
    "verify": (_cmd_verify, "replay truncation errors for a stored witness"),
    "bw": (_cmd_bw, "contour-formula approximation with its error bound"),
    "fekete": (_cmd_fekete, "extremal point configuration on a set"),
    "capacity": (_cmd_capacity, "logarithmic capacity estimate of a set"),
    "green": (_cmd_green, "Green function values outside a set"),
    "gaps": (_cmd_gaps, "coefficient band structure of a stored witness"),
    "invariance": (_cmd_invariance, "center independence of stored truncations"),
}


# ---------------------------------------------------------------------------
# driver


def run_command(command: str, scenario_path: str, out_dir: str,
                horizon: int | None = None, mesh: float | None = None,
                trials: int | None = None) -> int:
    try:
        scn = load_scenario(scenario_path, mesh=mesh)
        scn = with_overrides(scn, horizon=horizon, trials=trials)
        os.makedirs(out_dir, exist_ok=True)
        passed, results, tables = _COMMANDS[command][0](scn, out_dir)
    except (ScenarioError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    report = {
        "command": command,
        "versions": {
            "multitaylor": __version__,
            "numpy": np.__version__,
            "mpmath": mp.__version__,
        },
        "inputs": {
            "scenario": scn.name,
            "scenario_text": scn.raw,
            "eps": scn.eps,
            "s": scn.s,
            "trials": scn.trials,
            "horizon": scn.horizon,
            "mesh": scn.mesh,
            "levels": scn.levels,
            "seedless": True,
        },
        "results": results,
        "passed": passed,
    }
    with open(os.path.join(out_dir, "report.json"), "w", encoding="utf-8") as fh:
        json.dump(_plain(report), fh, indent=2, sort_keys=True)
        fh.write("\n")
    for filename, (header, rows) in tables.items():
        _write_csv(os.path.join(out_dir, filename), header, rows)

    stamp = datetime.datetime.now(datetime.timezone.utc).isoformat()
    verdict = "PASS" if passed else "FAIL"
    with open(os.path.join(out_dir, "run.txt"), "w", encoding="utf-8") as fh:
        fh.write(f"# generated {stamp}\n")
        fh.write(f"command: {command}\n")
        fh.write(f"scenario: {scn.name}\n")
        fh.write(f"version: {__version__}\n")
        fh.write(f"verdict: {verdict}\n")
    print(f"{command}: {verdict} ({out_dir}/report.json)")
    return 0 if passed else 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="multitaylor",
        description="simultaneous-truncation toolkit: classification, "
                    "construction, and verification from one scenario file",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in _COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("scenario", help="scenario file")
        p.add_argument("--out", default=None, help="output directory (default <command>-out)")
        p.add_argument("--horizon", type=int, default=None, help="override tolerances.horizon")
        p.add_argument("--mesh", type=float, default=None, help="override tolerances.mesh")
        p.add_argument("--trials", type=int, default=None, help="override tolerances.trials")
        p.add_argument("--seedless", action="store_true",
                       help="reserved; every run is seedless already")
    args = parser.parse_args(argv)
    out = args.out if args.out is not None else f"{args.command}-out"
    return run_command(args.command, args.scenario, out,
                       horizon=args.horizon, mesh=args.mesh, trials=args.trials)


if __name__ == "__main__":
    raise SystemExit(main())
