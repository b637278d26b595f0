"""Command-line front end.

Subcommands write CSV (``#`` metadata block, then a header row) or, when
``--out`` ends in ``.json``, a JSON document with the same content. Every
output echoes the resolved SI parameters so it can be fed back as
``--config``.

Exit codes: 0 success, 1 numerical failure, 2 invalid parameters,
64 usage error.
"""

from __future__ import annotations

import argparse
import csv
import datetime
import io
import json
import math
import numbers
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from . import __version__
from .config import ConfigError, load, parse_field, parse_quantity, published_config_path
from .coupling import coupling_strength, qubit_persistent_current
from .figures import emit_figure_data
from .ladder import (ABSENT, DYNAMIC, FROZEN, StationaryStateError, build_ladder,
                     compared_modes, continuum_reference, convergence_study, ladder_modes)
from .lamb import (lamb_sum, lamb_sum_asymptotic, lamb_sum_partial, renormalized_gap_factored)
from .modes import (RootFindingError, mode_k_exact, mode_k_high_approx, mode_k_low_approx,
                    mode_k_low_third_order, modes_exact, modes_exact_cr)
from .params import HBAR, CircuitParams, ParameterError, derive, validate

EXIT_OK, EXIT_NUMERIC, EXIT_INVALID, EXIT_USAGE = 0, 1, 2, 64
THREADS_ENV = "MULTIMODE_CQED_THREADS"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


@dataclass
class RunConfig:
    params: CircuitParams | None
    command: str
    options: dict
    out: str | None
    format: str
    timestamp: bool = True
    metadata: dict = field(default_factory=dict)


def _max_workers():
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "")))
    except ValueError:
        return min(8, os.cpu_count() or 1)


def _ordered_map(func, items):
    with ThreadPoolExecutor(max_workers=_max_workers()) as pool:
        return list(pool.map(func, items))


def _metadata(run: RunConfig):
    meta = {"tool": f"multimode-cqed {__version__}", "command": run.command}
    if run.timestamp:
        meta["timestamp"] = datetime.datetime.now(datetime.timezone.utc).isoformat()
    meta.update(run.metadata)
    return meta


def _write(run: RunConfig, columns, rows, extra=None):
    meta = _metadata(run)
    params = run.params.as_dict() if run.params is not None else None
    if run.format == "json":
        doc = {"metadata": meta, "params": params, **(extra or {}),
               "columns": list(columns), "rows": [[_jsonable(v) for v in r] for r in rows]}
        text = json.dumps(doc, indent=2) + "\n"
    else:
        buf = io.StringIO()
        for key, value in meta.items():
            buf.write(f"# {key}: {value}\n")
        if params is not None:
            for key, value in params.items():
                buf.write(f"# param {key} = {value!r}\n")
        for key, value in (extra or {}).items():
            buf.write(f"# {key}: {json.dumps(value)}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
        text = buf.getvalue()
    _emit(run.out, text)


def _fmt(v):
    if isinstance(v, numbers.Integral):
        return int(v)
    if isinstance(v, numbers.Real):
        return repr(float(v))
    return v


def _jsonable(v):
    if isinstance(v, numbers.Integral):
        return int(v)
    if isinstance(v, numbers.Real):
        v = float(v)
        return v if math.isfinite(v) else str(v)
    return v


def _emit(out, text):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="") as fh:
            fh.write(text)


def _csv_list(text, kind="dimensionless"):
    return [parse_quantity(v.strip(), kind) for v in text.split(",") if v.strip()]


def _int_list(text):
    return [int(v) for v in text.split(",") if v.strip()]


# -- subcommands ------------------------------------------------------------

APPROX = {
    "exact": mode_k_exact,
    "low1": mode_k_low_approx,
    "low3": mode_k_low_third_order,
    "high": mode_k_high_approx,
}


def mode_rows(params, n_max, approx="exact", cr_terminated=False):
    derived = derive(params)
    if cr_terminated:
        if approx != "exact":
            raise UsageError("--cr-terminated supports --approx exact only")
        modes = modes_exact_cr(params, n_max)
    elif approx == "exact":
        modes = modes_exact(derived, n_max)
    else:
        start = 1 if approx == "high" else 0
        modes = [APPROX[approx](derived, n, warn=False) for n in range(start, n_max + 1)]
    return [(m.n, m.kX, m.omega, m.omega / derived.omega0, m.sin_kX) for m in modes]


MODE_COLUMNS = ["n", "kX", "omega_rad_s", "omega_over_omega0", "sin_knX"]
COUPLING_COLUMNS = ["n", "omega_over_omega0", "omega_over_omegacutoff", "g_rad_s",
                    "g_over_g0_ref", "suppression", "g_hz"]


def coupling_rows(params, n_max, i_qubit=None, g_ref=None):
    derived = derive(params)
    results = [coupling_strength(params, derived, m, i_qubit) for m in modes_exact(derived, n_max)]
    if g_ref is None:
        g_ref = results[0].g
    rows = []
    for r in results:
        x = 0.0 if derived.cutoff_unbounded else r.mode.omega / derived.omega_cutoff
        rows.append((r.mode.n, r.mode.omega / derived.omega0, x, r.g,
                     r.g / g_ref if g_ref else math.nan, r.suppression, r.g_hz))
    return rows, results


def _reference_g(params, i_qubit):
    derived = derive(params)
    return coupling_strength(params, derived, mode_k_exact(derived, 0), i_qubit).g


def cmd_validate(run: RunConfig):
    p = run.params
    found = validate(p)
    errors = [v for v in found if v.severity == "error"]
    lines = [f"violation: {v}" for v in found]
    if not errors:
        d = derive(p)
        lines += [
            f"L_c2 = {d.L_c2!r} H",
            f"L_c2/(Xl) = {d.L_c2 / d.Xl!r}",
            f"n_cutoff = {d.n_cutoff!r}",
            f"omega0/2pi = {d.omega0 / (2 * math.pi)!r} Hz",
            f"omega_cutoff/2pi = {d.omega_cutoff / (2 * math.pi)!r} Hz",
            f"Z0 = {d.Z0!r} Ohm",
        ]
    _emit(run.out, "\n".join(lines) + "\n")
    return EXIT_INVALID if errors else EXIT_OK


def cmd_modes(run: RunConfig):
    o = run.options
    rows = mode_rows(run.params, o["n_max"], o["approx"], o["cr_terminated"])
    run.metadata.update(approx=o["approx"], cr_terminated=o["cr_terminated"])
    _write(run, MODE_COLUMNS, rows)
    return EXIT_OK


def cmd_couplings(run: RunConfig):
    o = run.options
    base = run.params
    i_q = o["i_qubit"]
    source = "override" if i_q is not None else "formula"
    run.metadata.update(i_qubit_source=source)
    if o["lc_sweep"]:
        values = o["lc_sweep"]
        ref_lc = o["g_ref_lc"] if o["g_ref_lc"] is not None else values[0]
        g_ref = _reference_g(base.replace(L_c=ref_lc), i_q)
        run.metadata.update(g_reference=f"g_0 at L_c = {ref_lc!r} H")

        def one(lc):
            return coupling_rows(base.replace(L_c=lc), o["n_max"], i_q, g_ref)[0]

        tables = _ordered_map(one, values)
        rows = [(lc,) + r for lc, table in zip(values, tables) for r in table]
        _write(run, ["L_c"] + COUPLING_COLUMNS, rows)
    else:
        g_ref = None
        if o["g_ref_lc"] is not None:
            g_ref = _reference_g(base.replace(L_c=o["g_ref_lc"]), i_q)
        rows, results = coupling_rows(base, o["n_max"], i_q, g_ref)
        run.metadata.update(I_qubit=results[0].I_qubit)
        _write(run, COUPLING_COLUMNS, rows)
    return EXIT_OK


def lamb_result(params, n_cutoff=None, parity="odd", method="digamma", delta0=None):
    if n_cutoff is None:
        if params is None:
            raise UsageError("lamb needs --n-cutoff or --config")
        n_cutoff = derive(params).n_cutoff
    if method == "digamma":
        s = lamb_sum(n_cutoff, parity)
    elif method == "asymptotic":
        s = lamb_sum_asymptotic(n_cutoff, parity)
    elif method.startswith("partial:"):
        s = lamb_sum_partial(n_cutoff, parity, int(float(method.split(":", 1)[1])))
    else:
        raise UsageError(f"unknown method {method!r}")
    doc = {"n_cutoff": n_cutoff, "parity": parity, "method": s.method, "sum": s.value,
           "tail_bound": s.tail_bound, "exponent": None, "delta0": delta0, "delta": None}
    if params is not None:
        d = derive(params)
        g0 = params.L_c * qubit_persistent_current(params) * math.sqrt(HBAR * d.omega0 / d.Xl) / HBAR
        exponent = 2 * (g0 / d.omega0) ** 2 * s.value
        doc["exponent"] = exponent
        if delta0 is not None:
            doc["delta"] = delta0 * math.exp(-exponent)
    elif delta0 is not None:
        raise UsageError("--delta0 needs --config to fix g_0/omega_0")
    return doc


def cmd_lamb(run: RunConfig):
    o = run.options
    n_cutoff = None if o["from_params"] else o["n_cutoff"]
    doc = lamb_result(run.params, n_cutoff, o["parity"], o["method"], o["delta0"])
    meta = _metadata(run)
    out = {**doc, "metadata": meta,
           "params": run.params.as_dict() if run.params is not None else None}
    _emit(run.out, json.dumps(out, indent=2) + "\n")
    return EXIT_OK


ORACLE_COLUMNS = ["mode_index", "omega_rad_s", "omega_over_omega0", "qubit_weight",
                  "i0_over_ipeak", "continuum_omega", "rel_error"]


def oracle_rows(params, N, qubit, include_cr, n_modes):
    derived = derive(params)
    system = build_ladder(params, N, qubit=qubit, include_cr=include_cr)
    spectrum = ladder_modes(system, n_modes + (1 if qubit == DYNAMIC else 0) + 2)
    idx = compared_modes(spectrum, n_modes)
    continuum = continuum_reference(params, len(idx), qubit, include_cr, system.state)
    rows = []
    for n, i in enumerate(idx):
        i0, seg = spectrum.node_currents(i)
        peak = max(abs(i0), float(abs(seg).max()))
        w = float(spectrum.omega[i])
        rows.append((n, w, w / derived.omega0, float(spectrum.qubit_weight[i]), abs(i0) / peak,
                     float(continuum[n]), abs(w - continuum[n]) / continuum[n]))
    return rows


def cmd_oracle(run: RunConfig):
    o = run.options
    qubit = ABSENT if o["no_qubit"] else o["qubit_model"]
    run.metadata.update(qubit=qubit, cr_terminated=o["cr_terminated"], lumping="trapezoid")
    if o["sweep"]:
        Ns = o["sweep"]
        tables = _ordered_map(lambda N: oracle_rows(run.params, N, qubit, o["cr_terminated"],
                                                    o["n_modes"]), Ns)
        rows = [(N,) + r for N, t in zip(Ns, tables) for r in t]
        extra = {}
        if len(Ns) >= 3:
            study = convergence_study(run.params, Ns, min(5, o["n_modes"]), qubit=qubit,
                                      include_cr=o["cr_terminated"])
            extra["richardson_order"] = study.richardson_order.tolist()
        _write(run, ["n_segments"] + ORACLE_COLUMNS, rows, extra)
    else:
        rows = oracle_rows(run.params, o["n_segments"], qubit, o["cr_terminated"], o["n_modes"])
        _write(run, ORACLE_COLUMNS, rows)
    return EXIT_OK


def cmd_sweep(run: RunConfig):
    o = run.options
    key = o["vary"]
    values = [parse_field(key, v) for v in o["values"].split(",") if v.strip()]
    base = run.params

    def one(v):
        p = base.replace(**{key: v})
        if o["emit"] == "modes":
            return mode_rows(p, o["n_max"])
        return coupling_rows(p, o["n_max"], o["i_qubit"])[0]

    tables = _ordered_map(one, values)
    columns = MODE_COLUMNS if o["emit"] == "modes" else COUPLING_COLUMNS
    rows = [(v,) + r for v, t in zip(values, tables) for r in t]
    run.metadata.update(vary=key, emit=o["emit"])
    _write(run, [key] + columns, rows)
    return EXIT_OK


def cmd_figure(run: RunConfig):
    o = run.options
    kind = o["kind"]
    if kind == "fig2":
        columns, rows = emit_figure_data("fig2", ratio=o["ratio"])
    elif kind == "fig4":
        columns, rows = emit_figure_data("fig4")
    else:
        columns, rows = emit_figure_data("fig5", run.params, n_cutoffs=tuple(o["n_cutoffs"]),
                                         reference=o["reference"], n_max=o["n_max"])
    run.metadata.update(kind=kind)
    _write(run, columns, rows)
    return EXIT_OK


# -- argument parsing ---------------------------------------------------------

def build_parser():
    parser = _Parser(prog="multimode-cqed", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, config_required=True):
        p.add_argument("--config", required=config_required,
                       help="parameter file ('published' for the bundled device)")
        p.add_argument("--out", default=None, help="output file (default stdout)")
        p.add_argument("--no-timestamp", action="store_true")
        return p

    p = common(sub.add_parser("validate", help="check parameters, print derived constants"))

    p = common(sub.add_parser("modes", help="resonator normal modes"))
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--approx", choices=list(APPROX), default="exact")
    p.add_argument("--cr-terminated", action="store_true")

    p = common(sub.add_parser("couplings", help="qubit-mode coupling strengths"))
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--i-qubit", type=lambda s: parse_quantity(s, "current"), default=None)
    p.add_argument("--lc-sweep", type=lambda s: _csv_list(s, "inductance"), default=None)
    p.add_argument("--g-ref-lc", type=lambda s: parse_quantity(s, "inductance"), default=None,
                   help="L_c whose g_0 normalizes g_over_g0_ref")

    p = common(sub.add_parser("lamb", help="Lamb-shift sum and renormalized gap"), False)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--n-cutoff", type=float, default=None)
    group.add_argument("--from-params", action="store_true")
    p.add_argument("--parity", choices=["odd", "all"], default="odd")
    p.add_argument("--method", default="digamma", help="digamma | partial:N | asymptotic")
    p.add_argument("--delta0", type=lambda s: parse_quantity(s, "frequency"), default=None,
                   help="bare gap, e.g. '5 GHz' (converted to rad/s)")

    p = common(sub.add_parser("oracle", help="discrete LC-ladder cross-check"))
    p.add_argument("--n-segments", type=int, default=2000)
    p.add_argument("--sweep", type=_int_list, default=None)
    p.add_argument("--no-qubit", action="store_true")
    p.add_argument("--qubit-model", choices=[FROZEN, DYNAMIC], default=FROZEN)
    p.add_argument("--cr-terminated", action="store_true")
    p.add_argument("--n-modes", type=int, default=5)

    p = common(sub.add_parser("sweep", help="repeat modes/couplings over one parameter"))
    p.add_argument("--vary", required=True, choices=["X", "l", "c", "L_c", "L_2", "C_R"])
    p.add_argument("--values", required=True)
    p.add_argument("--emit", choices=["modes", "couplings"], default="couplings")
    p.add_argument("--n-max", type=int, default=50)
    p.add_argument("--i-qubit", type=lambda s: parse_quantity(s, "current"), default=None)

    p = common(sub.add_parser("figure", help="data for the profile/suppression/coupling plots"),
               False)
    p.add_argument("--kind", choices=["fig2", "fig4", "fig5"], required=True)
    p.add_argument("--ratio", type=float, default=28.0, help="Xl/L_c2 for fig2")
    p.add_argument("--n-cutoffs", type=lambda s: _csv_list(s), default=[5.0, 15.0, 50.0])
    p.add_argument("--reference", type=float, default=50.0)
    p.add_argument("--n-max", type=int, default=200)
    return parser


COMMANDS = {
    "validate": cmd_validate, "modes": cmd_modes, "couplings": cmd_couplings,
    "lamb": cmd_lamb, "oracle": cmd_oracle, "sweep": cmd_sweep, "figure": cmd_figure,
}


def _load_config(path):
    if path is None:
        return None
    if path == "published":
        path = published_config_path()
    return load(path)


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    options = {k: v for k, v in vars(args).items()
               if k not in ("command", "config", "out", "no_timestamp")}
    out = args.out
    fmt = "json" if out and out.endswith(".json") else "csv"
    try:
        params = _load_config(args.config)
        if params is not None and args.command != "validate":
            derive(params)
        run_cfg = RunConfig(params=params, command=args.command, options=options, out=out,
                            format=fmt, timestamp=not args.no_timestamp)
        return COMMANDS[args.command](run_cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConfigError, ParameterError, FileNotFoundError) as exc:
        print(f"error: invalid parameters: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (RootFindingError, StationaryStateError, ArithmeticError, RuntimeError) as exc:
        print(f"error: numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
