"""Command-line interface.

Every subcommand resolves its configuration (flags over an optional TOML
config file), echoes the resolved config into its output, and is
deterministic for a fixed config apart from wall-clock fields. Exit codes:
0 on success with all verifications passing, 1 on runtime/verification
failures, 2 on usage or parameter errors.
"""
from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from . import bitio, de, serialize
from .channel import run_monte_carlo
from .encoder import OpCounter, encode, terminate_accumulator, verify_codeword
from .errors import ParameterError, ScldpcError
from .lifting import full_rank_status, make_code
from .protograph import CodeParams, bit_accounting, build_base, rate_string


def _int_list(text):
    try:
        return [int(t) for t in text.split(",") if t]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers: {exc}")


def _params_args(sub, with_m=True):
    sub.add_argument("--dl", type=int, required=True, help="variable degree")
    sub.add_argument("--dr", type=int, required=True, help="check degree")
    sub.add_argument("-L", type=int, required=True, dest="L", help="coupling number")
    if with_m:
        sub.add_argument("-M", type=int, required=True, dest="M", help="lifting number")
    sub.add_argument("--modified", action="store_true",
                     help="reduced-row variant with accumulator termination")


def _common():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None,
                        help="master seed (generated and recorded if omitted)")
    common.add_argument("--out", "-o", default=None, help="output path (default stdout)")
    common.add_argument("--format", choices=("json", "csv"), default=None)
    common.add_argument("--quiet", action="store_true")
    common.add_argument("--config", default=None,
                        help="TOML file with defaults; flags override")
    return common


def build_parser():
    common = _common()
    ap = argparse.ArgumentParser(prog="scldpc",
                                 description="Coupled-chain erasure-code toolkit")
    sp = ap.add_subparsers(dest="cmd", required=True)

    p = sp.add_parser("construct", parents=[common], help="lift and write a code file")
    _params_args(p)
    p.add_argument("--alist", default=None, help="also write the expanded matrix")
    p.add_argument("--max-repair-attempts", type=int, default=20)

    p = sp.add_parser("encode", parents=[common], help="encode information bits")
    p.add_argument("--code", required=True, help="code file (scc-v1 JSON)")
    p.add_argument("--info", default=None, help="info bit file (ascii lines)")
    p.add_argument("--random-info", action="store_true",
                   help="draw random info bits from --seed")
    p.add_argument("--bit-format", choices=("ascii", "packed"), default="ascii")

    p = sp.add_parser("decode-sim", parents=[common],
                      help="Monte Carlo erasure decoding")
    p.add_argument("--code", required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--trials", type=int, default=100)

    p = sp.add_parser("threshold", parents=[common],
                      help="belief-propagation threshold by bisection")
    p.add_argument("--dl", type=int, required=True)
    p.add_argument("--dr", type=int, required=True)
    p.add_argument("-L", type=_int_list, required=True, dest="L",
                   help="coupling number(s), comma separated")
    p.add_argument("--variant", choices=("original", "modified", "both"),
                   default="original")
    p.add_argument("--modified", action="store_true",
                   help="shorthand for --variant modified")
    p.add_argument("--tol", type=float, default=de.BISECTION_TOL)
    p.add_argument("--target", type=float, default=de.DE_TARGET)
    p.add_argument("--max-iter", type=int, default=de.DE_MAX_ITER)
    p.add_argument("--threads", type=int, default=None)

    p = sp.add_parser("trajectory", parents=[common],
                      help="per-section erasure probabilities over iterations")
    _params_args(p, with_m=False)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--iters", type=int, required=True)

    p = sp.add_parser("rate-table", parents=[common], help="design rates, 5 decimals")
    p.add_argument("--dl", type=int, required=True)
    p.add_argument("--dr", type=int, required=True)
    p.add_argument("-L", type=_int_list, required=True, dest="L")

    p = sp.add_parser("bench-termination", parents=[common],
                      help="termination cost: dense solve vs accumulator")
    p.add_argument("--dl", type=int, default=3)
    p.add_argument("--dr", type=int, default=6)
    p.add_argument("-L", type=int, default=9, dest="L")
    p.add_argument("--M-list", type=_int_list, default=[64, 128, 256, 512])
    p.add_argument("--reps", type=int, default=10)

    p = sp.add_parser("verify", parents=[common], help="check a code file")
    p.add_argument("code", help="code file (scc-v1 JSON)")
    p.add_argument("--codeword", default=None, help="codeword file to verify")
    return ap


def _apply_config_file(args):
    if not args.config:
        return
    try:
        import tomllib
    except ImportError:
        import tomli as tomllib
    with open(args.config, "rb") as fh:
        defaults = tomllib.load(fh)
    for key, value in defaults.items():
        key = key.replace("-", "_")
        if not hasattr(args, key):
            raise ParameterError(f"{args.config}: unknown config key {key!r}")
        # flags that kept their parser default adopt the file value
        if _parser_default(args.cmd, key) == getattr(args, key):
            setattr(args, key, value)


_PARSER = None


def _parser_default(cmd, key):
    global _PARSER
    if _PARSER is None:
        _PARSER = build_parser()
    for action in _PARSER._subparsers._group_actions[0].choices[cmd]._actions:
        if action.dest == key:
            return action.default
    return None


def _resolve_seed(args):
    if getattr(args, "seed", None) is None:
        args.seed = int(np.random.SeedSequence().entropy % (2**63))
    return args.seed


def _config_dict(args):
    skip = {"config", "quiet"}
    out = {}
    for key, value in sorted(vars(args).items()):
        if key in skip or key.startswith("_"):
            continue
        out[key] = value
    return out


def _emit_text(args, text):
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(args, payload):
    _emit_text(args, json.dumps(payload, sort_keys=True, indent=1) + "\n")


def _emit_csv(args, header, rows, config):
    lines = ["# config: " + json.dumps(config, sort_keys=True)]
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(str(row[h]) for h in header))
    _emit_text(args, "\n".join(lines) + "\n")


def _note(args, message):
    if not args.quiet:
        print(message, file=sys.stderr)


def cmd_construct(args):
    seed = _resolve_seed(args)
    params = CodeParams(dl=args.dl, dr=args.dr, L=args.L, modified=args.modified)
    code = make_code(params, args.M, seed, max_attempts=args.max_repair_attempts)
    doc = serialize.code_to_dict(code)
    doc["config"] = _config_dict(args)
    text = json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.alist:
        serialize.write_alist(code, args.alist)
    _note(args, f"patch_kind={code.patch.kind} "
                f"repair_attempts={code.patch.repair_attempts} "
                f"cleared_entries={len(code.cleared_entries())}")
    return 0


def _load_code(path):
    return serialize.import_code(path)


def cmd_encode(args):
    code = _load_code(args.code)
    acct = bit_accounting(code.params)
    n_info_bits = acct.n_info * code.M
    if args.random_info == (args.info is not None):
        raise ParameterError("give exactly one of --info and --random-info")
    if args.random_info:
        seed = _resolve_seed(args)
        info = np.random.default_rng(seed).integers(0, 2, n_info_bits,
                                                    dtype=np.uint8)
    else:
        info, _ = bitio.read_bits_ascii(args.info)
        if info.size != n_info_bits:
            raise ParameterError(
                f"{args.info}: {info.size} bits, code expects {n_info_bits}")
    cw = encode(code, info)
    if not verify_codeword(code, cw):
        _note(args, "codeword failed verification")
        return 1
    if not args.out:
        raise ParameterError("encode requires --out for the codeword file")
    if args.bit_format == "ascii":
        bitio.write_bits_ascii(args.out, cw.bits, per_line=code.M)
    else:
        bitio.write_bits_packed(args.out, cw.bits)
    _note(args, f"encoded {n_info_bits} info bits into {cw.bits.size} code bits")
    return 0


def cmd_decode_sim(args):
    code = _load_code(args.code)
    seed = _resolve_seed(args)
    report = run_monte_carlo(code, args.eps, args.trials, seed)
    payload = report.to_dict()
    payload["config"] = _config_dict(args)
    _emit_json(args, payload)
    return 0


def cmd_threshold(args):
    if args.modified and args.variant == "original":
        args.variant = "modified"
    variants = {"original": (False,), "modified": (True,),
                "both": (False, True)}[args.variant]
    cells = [CodeParams(dl=args.dl, dr=args.dr, L=L, modified=m)
             for L in args.L for m in variants]
    pairs = de.threshold_table(cells, threads=args.threads,
                               bisection_tol=args.tol, de_target=args.target,
                               max_iter=args.max_iter)
    rows = de.threshold_rows(pairs)
    for row, (p, _) in zip(rows, pairs):
        row["threshold"] = f"{row['threshold']:.6f}"
        row["rate"] = rate_string(p)
    config = _config_dict(args)
    if args.format == "json":
        _emit_json(args, {"config": config, "rows": rows})
    else:
        _emit_csv(args, ["dl", "dr", "L", "variant", "threshold", "rate"],
                  rows, config)
    return 0


def cmd_trajectory(args):
    params = CodeParams(dl=args.dl, dr=args.dr, L=args.L, modified=args.modified)
    traj = de.trajectory(build_base(params), args.eps, args.iters)
    config = _config_dict(args)
    rows = []
    for section in range(1, params.n_cols + 1):
        for it in range(traj.shape[0]):
            rows.append({"section": section, "iter": it,
                         "p": repr(float(traj[it, section - 1]))})
    _emit_csv(args, ["section", "iter", "p"], rows, config)
    return 0


def cmd_rate_table(args):
    rows = []
    for L in args.L:
        for modified in (False, True):
            p = CodeParams(dl=args.dl, dr=args.dr, L=L, modified=modified)
            rows.append({"dl": p.dl, "dr": p.dr, "L": L,
                         "variant": "modified" if modified else "original",
                         "rate": rate_string(p)})
    config = _config_dict(args)
    if args.format == "json":
        _emit_json(args, {"config": config, "rows": rows})
    else:
        _emit_csv(args, ["dl", "dr", "L", "variant", "rate"], rows, config)
    return 0


def cmd_bench_termination(args):
    seed = _resolve_seed(args)
    results = []
    for M in args.M_list:
        orig = make_code(CodeParams(dl=args.dl, dr=args.dr, L=args.L), M, seed)
        mod = make_code(CodeParams(dl=args.dl, dr=args.dr, L=args.L,
                                   modified=True), M, seed)
        acct = bit_accounting(orig.params)
        rng = np.random.default_rng(seed)
        gen_counter = OpCounter()
        acc_counter = OpCounter()
        info_o = rng.integers(0, 2, acct.n_info * M, dtype=np.uint8)
        t0 = time.perf_counter()
        for _ in range(args.reps):
            encode(orig, info_o, counter=gen_counter)
        t_generic = (time.perf_counter() - t0) / args.reps
        s_l = rng.integers(0, 2, M, dtype=np.uint8)
        s_l1 = rng.integers(0, 2, M, dtype=np.uint8)
        t0 = time.perf_counter()
        for _ in range(args.reps):
            terminate_accumulator(s_l, s_l1, counter=acc_counter)
        t_acc = (time.perf_counter() - t0) / args.reps
        results.append({
            "M": M,
            "generic": {
                "bit_ops_per_frame": gen_counter.xor_ops // args.reps,
                "setup_bit_ops": orig._term_cache.inverse.popcount(),
                "wall_seconds_per_frame": t_generic,
            },
            "accumulator": {
                "bit_ops_per_frame": acc_counter.xor_ops // args.reps,
                "wall_seconds_per_frame": t_acc,
            },
        })

    def slope(key):
        xs = np.log2([r["M"] for r in results])
        ys = np.log2([max(1, r[key]["bit_ops_per_frame"]) for r in results])
        return float(np.polyfit(xs, ys, 1)[0])

    payload = {
        "config": _config_dict(args),
        "results": results,
        "fitted_exponents": {"generic": slope("generic"),
                             "accumulator": slope("accumulator")},
        "note": "wall_seconds_* are informative only; bit-op counters are exact",
    }
    _emit_json(args, payload)
    return 0


def cmd_verify(args):
    code = _load_code(args.code)
    checks = {}
    n = len(code.term_rows()) * code.M
    if code.params.modified and code.patch.kind == "accumulator":
        checks["term_block_full_rank"] = code.term_matrix().rank() == n
    elif not code.params.modified:
        checks["term_block_full_rank"] = code.term_matrix().rank() == n
    status, r = full_rank_status(code)
    checks["matrix_rank"] = f"{status}" + ("" if r is None else f" ({r}/{code.n_checks})")
    ok = all(v is True for k, v in checks.items() if isinstance(v, bool))
    if args.codeword:
        bits, width = bitio.read_bits_ascii(args.codeword)
        if width != code.M or bits.size != code.n_bits:
            raise ParameterError(
                f"{args.codeword}: expected {code.base.cols} lines of {code.M} bits")
        valid = verify_codeword(code, bits.reshape(code.base.cols, code.M))
        checks["codeword_valid"] = bool(valid)
        ok = ok and valid
    payload = {"config": _config_dict(args), "checks": checks, "ok": ok}
    _emit_json(args, payload)
    return 0 if ok else 1


_HANDLERS = {
    "construct": cmd_construct,
    "encode": cmd_encode,
    "decode-sim": cmd_decode_sim,
    "threshold": cmd_threshold,
    "trajectory": cmd_trajectory,
    "rate-table": cmd_rate_table,
    "bench-termination": cmd_bench_termination,
    "verify": cmd_verify,
}


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        _apply_config_file(args)
        return _HANDLERS[args.cmd](args)
    except ParameterError as exc:
        print(f"scldpc: {exc}", file=sys.stderr)
        return 2
    except ScldpcError as exc:
        print(f"scldpc: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
