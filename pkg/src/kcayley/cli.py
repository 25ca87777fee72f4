"""Command-line front end.

Subcommands: ``invariant`` (bulk invariants of a named model), ``boundary``
(edge spectrum and signed mode counts of a half-space truncation),
``product`` (circle index pairing and Kasparov-product checks) and ``verify``
(named randomized property suites).

Reports are JSON by default (top-level keys: inputs, invariants, residuals,
status, version); ``--format csv`` emits the sweep/plot-data table instead.
``--plot`` renders matplotlib figures next to the output.  Exit codes:
0 success, 1 suite or agreement failure, 2 invalid input.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys

import numpy as np

from .errors import KCayleyError
from .graded import assert_osu
from .numkit import ToleranceProfile, tolerance_from_env
from .report import Report

_MODEL_PARAMS = {
    "ssh": ("t1", "t2"),
    "kitaev": ("mu", "t", "delta"),
    "circle": ("n",),
}

_DEFAULTS = {"t1": 1.0, "t2": 1.0, "mu": 1.0, "t": 1.0, "delta": 0.5,
             "n": 32, "cells": 40, "seed": 0, "format": "json"}


def _build_parser():
    p = argparse.ArgumentParser(prog="kcayley", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--model", help="model name (ssh, kitaev, circle)")
        sp.add_argument("--t1", type=float, help="SSH intra-cell hopping")
        sp.add_argument("--t2", type=float, help="SSH inter-cell hopping")
        sp.add_argument("--mu", type=float, help="Kitaev chemical potential")
        sp.add_argument("--t", type=float, help="Kitaev hopping")
        sp.add_argument("--delta", type=float, help="Kitaev pairing / gap parameter")
        sp.add_argument("--L", type=int, dest="cells", help="half-space cell count")
        sp.add_argument("--N", type=int, dest="n", help="truncation / grid size")
        sp.add_argument("--seed", type=int, help="seed for randomized pieces")
        sp.add_argument("--tol", type=float, help="global tolerance override")
        sp.add_argument("--format", choices=("json", "csv"), help="output format")
        sp.add_argument("--out", help="output path (default stdout)")
        sp.add_argument("--config", help="key=value config file; flags override")
        sp.add_argument("--plot", action="store_true",
                        help="render figures next to the output")

    for name in ("invariant", "boundary", "product"):
        sp = sub.add_parser(name)
        common(sp)
    sp = sub.add_parser("verify")
    sp.add_argument("suite", help="suite name or 'all'")
    common(sp)
    return p


def _load_config(path):
    values = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise KCayleyError(f"config line is not key=value: {line!r}")
            key, val = (s.strip() for s in line.split("=", 1))
            values[key] = val
    return values

_CONFIG_KEYS = {"model": str, "t1": float, "t2": float, "mu": float, "t": float,
                "delta": float, "L": int, "N": int, "seed": int, "tol": float,
                "format": str, "out": str}
_CONFIG_DEST = {"L": "cells", "N": "n"}


def _merge_config(args):
    if not getattr(args, "config", None):
        return
    values = _load_config(args.config)
    unknown = set(values) - set(_CONFIG_KEYS)
    if unknown:
        raise KCayleyError(f"unknown config keys: {sorted(unknown)}")
    for key, raw in values.items():
        dest = _CONFIG_DEST.get(key, key)
        if getattr(args, dest, None) is None:
            setattr(args, dest, _CONFIG_KEYS[key](raw))


def _fill_defaults(args):
    for key, val in _DEFAULTS.items():
        if getattr(args, key, None) is None:
            setattr(args, key, val)


def _tolerance(args) -> ToleranceProfile:
    if getattr(args, "tol", None):
        eq = float(args.tol)
        return ToleranceProfile(eq_tol=eq, rank_tol=eq / 10.0, kernel_tol=eq * 10.0)
    return tolerance_from_env()


def _echo_inputs(args, *keys):
    out = {"command": args.command, "seed": int(args.seed)}
    for key in keys:
        out[key] = getattr(args, key)
    return out


def _emit(args, report: Report, csv_rows=None, csv_header=None):
    if args.format == "csv" and csv_rows is not None:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(csv_header)
        writer.writerows(csv_rows)
        text = buf.getvalue()
    else:
        text = report.to_json()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _figure_path(args, suffix):
    stem = os.path.splitext(args.out)[0] if args.out else f"kcayley_{args.command}"
    return f"{stem}_{suffix}.png"


def _ssh_winding(t1, t2, tol, k_samples=257):
    from .kasparov import chiral_reduction, flatten
    from .models import bloch, ssh_model
    from .pairing import UnitaryLoop, winding_number
    from .clifford import PAULI_1

    model = ssh_model(t1, t2)
    e = assert_osu(PAULI_1, model.symmetry.grading, tol=tol)
    ks = np.linspace(0, 2 * np.pi, k_samples, endpoint=False)
    samples, phases = [], []
    for k in ks:
        ins = flatten(bloch(model, k), symmetry=model.symmetry, tol=tol)
        samples.append(chiral_reduction(ins, e, tol))
    loop = UnitaryLoop.from_samples(samples, ks, tol)
    w = winding_number(loop, tol)
    dets = np.array([np.linalg.det(s) for s in samples])
    phases = np.unwrap(np.angle(dets))
    phases -= phases[0]
    return model, w, ks, phases


def cmd_invariant(args) -> int:
    tol = _tolerance(args)
    report = Report(inputs=_echo_inputs(args, "model", "t1", "t2", "mu", "t", "delta"))
    if args.model == "ssh":
        from .models import bulk_gap, ssh_model
        gap, k_bad = bulk_gap(ssh_model(args.t1, args.t2))
        if gap <= tol.kernel_tol * 10:
            report.status = "error"
            report.error = f"gapless SSH parameters (gap {gap:.2e} at k={k_bad:.3f})"
            _emit(args, report)
            return 2
        model, w, ks, phases = _ssh_winding(args.t1, args.t2, tol)
        report.add_invariant("winding", w, {"det_phase": w})
        report.add_residual("bulk_gap", gap)
        rows = [(float(k), float(ph)) for k, ph in zip(ks, phases)]
        if args.plot:
            from .plots import plot_winding_phase
            path = plot_winding_phase(ks, phases, w, _figure_path(args, "winding"))
            print(f"figure written to {path}", file=sys.stderr)
        _emit(args, report, rows, ("k", "det_phase"))
        return 0
    if args.model == "kitaev":
        from .kasparov import bulk_class, flatten
        from .models import bulk_circulant, bulk_gap, halfspace, kitaev_chain
        model = kitaev_chain(args.mu, args.t, args.delta)
        gap, k_bad = bulk_gap(model)
        if gap <= tol.kernel_tol * 10:
            report.status = "error"
            report.error = f"gapless Kitaev parameters (gap {gap:.2e} at k={k_bad:.3f})"
            _emit(args, report)
            return 2
        cells = args.cells
        sym = halfspace(model, cells).symmetry_on_halfspace()
        ins = flatten(bulk_circulant(model, cells), symmetry=sym, tol=tol)
        out = bulk_class(ins, tol=tol)
        from .graded import check_osu
        x = out.dk_class.x_sum()
        diag = check_osu(x.u, x.grading, x.real_structure, tol)
        report.inputs["class"] = out.label
        report.inputs["target_group"] = out.target
        report.add_residual("osu_worst", diag.worst)
        report.add_residual("reality", diag.real if diag.real is not None else -1.0)
        report.add_residual("bulk_gap", gap)
        report.status = "pass" if diag.passed else "fail"
        _emit(args, report)
        return 0 if diag.passed else 1
    report.status = "error"
    report.error = f"unknown model {args.model!r} for invariant"
    _emit(args, report)
    return 2


def cmd_boundary(args) -> int:
    tol = _tolerance(args)
    report = Report(inputs=_echo_inputs(args, "model", "t1", "t2", "mu", "t",
                                        "delta", "cells"))
    from .boundary import edge_invariants, lift_flattened
    from .models import bulk_gap, halfspace, kitaev_chain, ssh_model
    if args.model == "ssh":
        model = ssh_model(args.t1, args.t2)
    elif args.model == "kitaev":
        model = kitaev_chain(args.mu, args.t, args.delta)
    else:
        report.status = "error"
        report.error = f"unknown model {args.model!r} for boundary"
        _emit(args, report)
        return 2
    gap, k_bad = bulk_gap(model)
    if gap <= tol.kernel_tol * 10:
        report.status = "error"
        report.error = f"gapless parameters (gap {gap:.2e} at k={k_bad:.3f})"
        _emit(args, report)
        return 2
    m = halfspace(model, args.cells)
    delta = 0.8 * gap
    inv = edge_invariants(m, delta=delta, tol=tol)
    lift = lift_flattened(m, delta=delta, tol=tol)
    report.add_invariant("in_gap_modes", len(inv.in_gap_energies))
    report.add_invariant("zero_modes", inv.zero_modes)
    report.add_invariant("signed_count_left", inv.signed_count_left)
    report.add_invariant("signed_count_right", inv.signed_count_right)
    report.add_invariant("p_gap_rank", inv.p_gap_rank)
    report.add_residual("leakage_off_mask", lift.leakage)
    report.add_residual("bulk_gap", gap)
    report.inputs["delta"] = delta
    energies = np.linalg.eigvalsh(m.halfspace)
    rows = [(i, float(e)) for i, e in enumerate(energies)]
    if args.plot:
        from .plots import plot_edge_spectrum
        path = plot_edge_spectrum(energies, delta, _figure_path(args, "spectrum"),
                                  in_gap_threshold=delta * (1 - inv.margin))
        print(f"figure written to {path}", file=sys.stderr)
    _emit(args, report, rows, ("index", "energy"))
    return 0


def cmd_product(args) -> int:
    tol = _tolerance(args)
    report = Report(inputs=_echo_inputs(args, "model", "n"))
    if args.model != "circle":
        report.status = "error"
        report.error = f"unknown model {args.model!r} for product"
        _emit(args, report)
        return 2
    from .models import circle_spectral_triple
    from .pairing import approx_unit_check, index_pairing, kasparov_product_rep
    trip = circle_spectral_triple(args.n)
    rep = index_pairing(trip.u, trip.d, tol=tol)
    report.add_invariant("index", rep.value, rep.methods)
    prod = kasparov_product_rep(trip.u, (0.9 / args.n) * trip.d, tol=tol)
    report.add_invariant("corner_index", prod.corner_index)
    report.add_residual("positivity_margin", prod.positivity_margin)
    report.add_residual("product_identity", prod.identity_residual)
    decay = approx_unit_check()
    monotone = all(b < a for vals in decay["norms"].values()
                   for a, b in zip(vals, vals[1:]))
    report.add_residual("approx_unit_monotone", 0.0 if monotone else 1.0)
    if not monotone or prod.positivity_margin < -1e-10:
        report.status = "fail"
    rows = []
    for i, n_val in enumerate(decay["n_values"]):
        rows.append((n_val,) + tuple(decay["norms"][k][i] for k in sorted(decay["norms"])))
    if args.plot:
        from .plots import plot_decay_report
        path = plot_decay_report(decay["n_values"], decay["norms"],
                                 _figure_path(args, "decay"))
        print(f"figure written to {path}", file=sys.stderr)
    _emit(args, report, rows, ("n",) + tuple(sorted(decay["norms"])))
    return 0 if report.status == "pass" else 1


def cmd_verify(args) -> int:
    from .verify import run_suite
    report = Report(inputs={"command": "verify", "suite": args.suite,
                            "seed": int(args.seed)})
    try:
        res = run_suite(args.suite, seed=args.seed)
    except KeyError as exc:
        report.status = "error"
        report.error = str(exc)
        _emit(args, report)
        return 2
    report.status = "pass" if res["passed"] else "fail"
    if "worst_residual" in res:
        report.add_residual("worst_residual", res["worst_residual"])
    for key, val in res.items():
        if isinstance(val, (int, float)) and key not in ("worst_residual",):
            report.add_residual(key, float(val))
    if args.suite == "all":
        for name, sub in res["results"].items():
            report.add_residual(f"{name}.worst", sub.get("worst_residual", 0.0))
            if not sub["passed"]:
                report.inputs.setdefault("failing_suites", []).append(name)
    elif not res["passed"]:
        report.inputs["detail"] = {k: v for k, v in res.items()
                                   if k not in ("suite", "passed")}
    _emit(args, report)
    return 0 if res["passed"] else 1


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        _merge_config(args)
    except (KCayleyError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    _fill_defaults(args)
    handlers = {"invariant": cmd_invariant, "boundary": cmd_boundary,
                "product": cmd_product, "verify": cmd_verify}
    try:
        return handlers[args.command](args)
    except KCayleyError as exc:
        report = Report(inputs={"command": args.command}, status="error",
                        error=str(exc))
        _emit(args, report)
        return 2


if __name__ == "__main__":
    sys.exit(main())
