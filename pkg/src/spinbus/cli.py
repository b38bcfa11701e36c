"""Command-line front end.

Single values are printed as JSON on stdout; sweeps are written as CSV with a
JSON manifest sidecar (<out>.manifest.json) recording the resolved request,
tool version, seed, and a sha256 digest of the CSV.  Re-running a command
from its manifest (--config manifest.json) reproduces the CSV byte for byte.

Exit codes: 0 success, 1 computation-domain error, 2 usage error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from datetime import datetime, timezone

from . import __version__
from .amplitudes import amplitude_rp
from .chain import BALLISTIC_C_DEFAULT, PROFILES, UNIFORM, build_chain
from .fidelity import avg_fidelity_1q, avg_fidelity_general_mc, avg_fidelity_omega1, \
    avg_fidelity_omega2, one_qubit_amplitude
from .oracle import verification_battery
from .reduced import RECEIVER_BASIS, evolve_receiver_pair
from .scans import CLASSES, ScanRequest, default_t_max, field_sweep, max_over_time, \
    threshold_field
from .spectral import decompose_chain
from .states import SeededSampler, TwoQubitState

_SCAN_HEADER = ("N", "n", "h", "t_star", "fbar_max", "class", "seed")

# keys a config file (or manifest "params" block) may supply; flags win
_CONFIG_KEYS = (
    "N", "n", "h", "profile", "c", "t", "t_max", "grid", "state_class",
    "samples", "seed", "threads", "sources", "targets", "state",
    "h_list", "h_min", "h_max", "h_step", "N_list", "target", "h_cap",
    "h_resolution", "figure",
)


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _csv_text(header, rows) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def _emit_csv(out, command, params, header, rows) -> None:
    text = _csv_text(header, rows)
    if out is None:
        sys.stdout.write(text)
        return
    with open(out, "w", newline="") as fh:
        fh.write(text)
    manifest = {
        "tool": "spinbus",
        "version": __version__,
        "command": command,
        "params": params,
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "outputs": {
            os.path.basename(out): {
                "sha256": hashlib.sha256(text.encode()).hexdigest(),
                "rows": len(rows),
            }
        },
    }
    with open(out + ".manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _load_config(path) -> dict:
    with open(path) as fh:
        data = json.load(fh)
    if isinstance(data, dict) and "params" in data and "command" in data:
        data = data["params"]
    if not isinstance(data, dict):
        raise ValueError(f"config file {path} must hold a JSON object")
    return {k: v for k, v in data.items() if k in _CONFIG_KEYS}


class _Usage(Exception):
    """Bad or missing arguments; maps to exit code 2."""


def _resolve(args) -> dict:
    config = _load_config(args.config) if getattr(args, "config", None) else {}
    params = dict(config)
    for key, value in vars(args).items():
        if key in ("command", "config", "out", "func"):
            continue
        if value is not None:
            params[key] = value
    return params


def _require(params, key, flag) -> object:
    if params.get(key) is None:
        raise _Usage(f"missing required {flag}")
    return params[key]


def _resolve_threads(params) -> int:
    if params.get("threads") is not None:
        return int(params["threads"])
    env = os.environ.get("QST_THREADS")
    if env:
        try:
            return max(int(env), 1)
        except ValueError:
            raise _Usage(f"QST_THREADS must be an integer, got {env!r}") from None
    return 1


def _chain_from(params, state_class=None):
    n_sites = int(_require(params, "N", "--N"))
    field = float(params.get("h") or 0.0)
    block = params.get("n")
    if block is None and field > 0:
        block = 1 if state_class == "one-qubit" else 2
    return build_chain(n_sites, block, field,
                       params.get("profile") or UNIFORM,
                       params.get("c") or BALLISTIC_C_DEFAULT)


def _parse_floats(text) -> list[float]:
    if isinstance(text, (list, tuple)):
        return [float(x) for x in text]
    return [float(x) for x in str(text).split(",") if x.strip()]


def _parse_ints(text) -> list[int]:
    if isinstance(text, (list, tuple)):
        return [int(x) for x in text]
    return [int(x) for x in str(text).split(",") if x.strip()]


def cmd_spectrum(args) -> int:
    params = _resolve(args)
    dec = decompose_chain(_chain_from(params))
    rows = [(k + 1, float(lam)) for k, lam in enumerate(dec.eigenvalues)]
    _emit_csv(args.out, "spectrum", params, ("k", "lambda"), rows)
    return 0


def cmd_amplitude(args) -> int:
    params = _resolve(args)
    sources = _parse_ints(_require(params, "sources", "--sources"))
    targets = _parse_ints(_require(params, "targets", "--targets"))
    t = float(_require(params, "t", "--t"))
    dec = decompose_chain(_chain_from(params))
    amp = amplitude_rp(dec, targets, sources, t)
    print(json.dumps({"real": amp.real, "imag": amp.imag, "modulus": abs(amp)}))
    return 0


def _parse_state(text, normalize) -> TwoQubitState:
    vals = _parse_floats(text)
    if len(vals) != 8:
        raise _Usage("--state needs eight comma-separated reals "
                     "(re,im pairs of the |00>,|01>,|10>,|11> amplitudes)")
    amps = [complex(vals[2 * k], vals[2 * k + 1]) for k in range(4)]
    return TwoQubitState.from_vector(amps, normalize=normalize)


def cmd_rdm(args) -> int:
    params = _resolve(args)
    state = _parse_state(_require(params, "state", "--state"), args.normalize_state)
    t = float(_require(params, "t", "--t"))
    dec = decompose_chain(_chain_from(params))
    rho = evolve_receiver_pair(dec, state, t)
    print(json.dumps({
        "basis": list(RECEIVER_BASIS),
        "real": rho.real.tolist(),
        "imag": rho.imag.tolist(),
    }))
    return 0


def cmd_fidelity(args) -> int:
    params = _resolve(args)
    cls = params.get("state_class") or "general"
    if cls not in CLASSES:
        raise _Usage(f"--class must be one of {CLASSES}")
    t = float(_require(params, "t", "--t"))
    dec = decompose_chain(_chain_from(params, cls))
    if cls == "one-qubit":
        result = avg_fidelity_1q(one_qubit_amplitude(dec, t))
    elif cls == "omega1":
        result = avg_fidelity_omega1(dec, t)
    elif cls == "omega2":
        result = avg_fidelity_omega2(dec, t)
    else:
        samples = int(params.get("samples") or 10000)
        sampler = SeededSampler(int(params.get("seed") or 0))
        result = avg_fidelity_general_mc(dec, t, samples, sampler,
                                         phase_opt=args.phase_opt)
    print(json.dumps({"value": result.value, "stderr": result.stderr,
                      "method": result.method}))
    return 0


def _scan_request(params, chain, cls) -> ScanRequest:
    t_max = params.get("t_max")
    if t_max is None:
        t_max = default_t_max(chain.n_sites, cls)
    return ScanRequest(
        chain,
        fidelity_class=cls,
        t_max=float(t_max),
        grid_step=params.get("grid"),
        samples=int(params.get("samples") or 8192),
        seed=int(params.get("seed") or 0),
        threads=_resolve_threads(params),
    )


def _scan_row(chain, result, seed):
    return (chain.n_sites, chain.block, result.field, result.t_star,
            result.fbar_max, result.fidelity_class, seed)


def cmd_scan_time(args) -> int:
    params = _resolve(args)
    cls = params.get("state_class") or "general"
    chain = _chain_from(params, cls)
    request = _scan_request(params, chain, cls)
    result = max_over_time(request)
    params_out = dict(params, t_max=request.t_max, threads=request.threads)
    _emit_csv(args.out, "scan-time", params_out, _SCAN_HEADER,
              [_scan_row(chain, result, request.seed)])
    return 0


def _field_values(params) -> list[float]:
    if params.get("h_list") is not None:
        return _parse_floats(params["h_list"])
    if params.get("h_max") is not None:
        lo = float(params.get("h_min") or 0.0)
        hi = float(params["h_max"])
        step = float(params.get("h_step") or 1.0)
        if step <= 0 or hi < lo:
            raise _Usage("--h-step must be positive and --h-max >= --h-min")
        vals = []
        k = 0
        while lo + k * step <= hi + 1e-12:
            vals.append(lo + k * step)
            k += 1
        return vals
    raise _Usage("field sweep needs --h-list or --h-min/--h-max/--h-step")


def cmd_scan_field(args) -> int:
    params = _resolve(args)
    cls = params.get("state_class") or "general"
    fields = _field_values(params)
    base = dict(params)
    base["h"] = fields[-1] if fields else 0.0  # block placement only
    chain = _chain_from(base, cls)
    request = _scan_request(params, chain, cls)
    results = field_sweep(request, fields)
    rows = [_scan_row(chain, r, request.seed) for r in results]
    params_out = dict(params, h_list=fields, t_max=request.t_max,
                      threads=request.threads)
    _emit_csv(args.out, "scan-field", params_out, _SCAN_HEADER, rows)
    return 0


def cmd_threshold(args) -> int:
    params = _resolve(args)
    cls = params.get("state_class") or "omega1"
    n_values = _parse_ints(_require(params, "N_list", "--N-list"))
    block = int(params.get("n") or 2)
    t_max = float(params.get("t_max") or 1.3e4)
    seed = int(params.get("seed") or 0)
    results = threshold_field(
        n_values, block=block,
        target=float(params.get("target") if params.get("target") is not None else 0.95),
        fidelity_class=cls, t_max=t_max,
        h_resolution=float(params.get("h_resolution") or 0.1),
        h_cap=float(params.get("h_cap") or 60.0),
        profile=params.get("profile") or UNIFORM,
        samples=int(params.get("samples") or 8192),
        seed=seed, threads=_resolve_threads(params))
    rows = [(r.n_sites, block, r.field, r.t_star, r.fbar_max, cls, seed)
            for r in results]
    params_out = dict(params, N_list=n_values, t_max=t_max)
    _emit_csv(args.out, "threshold", params_out, _SCAN_HEADER, rows)
    return 0


_FIGURES = {
    "4a": {"N": 7, "t_max": 2.0e4},
    "4b": {"N": 8, "t_max": 6.0e4},
}


def cmd_reproduce(args) -> int:
    params = _resolve(args)
    figure = str(_require(params, "figure", "--figure"))
    if figure in _FIGURES:
        preset = _FIGURES[figure]
        params.setdefault("N", preset["N"])
        params.setdefault("t_max", preset["t_max"])
        params.setdefault("h_list", [0.0, 2.0, 5.0, 10.0, 15.0, 20.0])
        params.setdefault("state_class", "general")
        args_like = argparse.Namespace(config=None, out=args.out, **params)
        return cmd_scan_field(args_like)
    if figure == "5":
        params.setdefault("N_list", [7, 8, 9, 10, 11])
        params.setdefault("state_class", "omega1")
        args_like = argparse.Namespace(config=None, out=args.out, **params)
        return cmd_threshold(args_like)
    raise _Usage(f"unknown figure {figure!r}; choose 4a, 4b or 5")


def cmd_verify(args) -> int:
    params = _resolve(args)
    checks = verification_battery(seed=int(params.get("seed") or 0))
    failed = False
    for c in checks:
        status = "OK" if c.ok else "FAIL"
        print(f"max deviation {c.name}: {c.max_deviation:.3e} (tol {c.tolerance:.1e}) {status}")
        failed = failed or not c.ok
    return 1 if failed else 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinbus",
        description="Exact state-transfer fidelities for XX chains with barrier fields.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, chain=True):
        p.add_argument("--config", help="JSON config or manifest; flags take precedence")
        p.add_argument("--out", help="output CSV path (default: stdout, no manifest)")
        p.add_argument("--seed", type=int)
        p.add_argument("--threads", type=int)
        if chain:
            p.add_argument("--N", type=int, help="number of chain sites")
            p.add_argument("--n", type=int, help="sender/receiver block length")
            p.add_argument("--h", type=float, help="barrier field strength")
            p.add_argument("--profile", choices=PROFILES)
            p.add_argument("--c", type=float, help="ballistic endpoint prefactor")

    p = sub.add_parser("spectrum", help="single-particle eigenvalues as CSV")
    add_common(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("amplitude", help="multi-excitation transition amplitude")
    add_common(p)
    p.add_argument("--sources", help="comma-separated source sites")
    p.add_argument("--targets", help="comma-separated target sites")
    p.add_argument("--t", type=float)
    p.set_defaults(func=cmd_amplitude)

    p = sub.add_parser("rdm", help="receiver-pair density matrix as JSON")
    add_common(p)
    p.add_argument("--state", help="eight reals: re,im pairs of |00>,|01>,|10>,|11>")
    p.add_argument("--normalize-state", action="store_true")
    p.add_argument("--t", type=float)
    p.set_defaults(func=cmd_rdm)

    p = sub.add_parser("fidelity", help="average fidelity at one time")
    add_common(p)
    p.add_argument("--class", dest="state_class", choices=CLASSES)
    p.add_argument("--t", type=float)
    p.add_argument("--samples", type=int)
    p.add_argument("--phase-opt", action="store_true",
                   help="maximize over an odd-sector phase (general class)")
    p.set_defaults(func=cmd_fidelity)

    p = sub.add_parser("scan-time", help="maximize fidelity over a time window")
    add_common(p)
    p.add_argument("--class", dest="state_class", choices=CLASSES)
    p.add_argument("--t-max", dest="t_max", type=float)
    p.add_argument("--grid", type=float, help="upper bound on the time-grid step")
    p.add_argument("--samples", type=int)
    p.set_defaults(func=cmd_scan_time)

    p = sub.add_parser("scan-field", help="scan-time at several field values")
    add_common(p)
    p.add_argument("--class", dest="state_class", choices=CLASSES)
    p.add_argument("--t-max", dest="t_max", type=float)
    p.add_argument("--grid", type=float)
    p.add_argument("--samples", type=int)
    p.add_argument("--h-list", dest="h_list", help="comma-separated field values")
    p.add_argument("--h-min", dest="h_min", type=float)
    p.add_argument("--h-max", dest="h_max", type=float)
    p.add_argument("--h-step", dest="h_step", type=float)
    p.set_defaults(func=cmd_scan_field)

    p = sub.add_parser("threshold", help="smallest field reaching a target fidelity")
    add_common(p)
    p.add_argument("--class", dest="state_class", choices=CLASSES)
    p.add_argument("--N-list", dest="N_list", help="comma-separated chain lengths")
    p.add_argument("--target", type=float)
    p.add_argument("--t-max", dest="t_max", type=float)
    p.add_argument("--h-cap", dest="h_cap", type=float)
    p.add_argument("--h-resolution", dest="h_resolution", type=float)
    p.add_argument("--samples", type=int)
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("reproduce", help="canned sweeps behind the headline figures")
    add_common(p)
    p.add_argument("--figure", choices=("4a", "4b", "5"))
    p.add_argument("--h-list", dest="h_list")
    p.add_argument("--N-list", dest="N_list")
    p.add_argument("--t-max", dest="t_max", type=float)
    p.add_argument("--target", type=float)
    p.add_argument("--h-cap", dest="h_cap", type=float)
    p.add_argument("--h-resolution", dest="h_resolution", type=float)
    p.add_argument("--samples", type=int)
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("verify", help="cross-check determinants against sector evolution")
    add_common(p, chain=False)
    p.set_defaults(func=cmd_verify)

    return parser


def parse_and_dispatch(argv) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except _Usage as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(parse_and_dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
