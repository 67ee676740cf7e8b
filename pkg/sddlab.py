import argparse
import logging
import os
import sys
import traceback

from utils.common import create_folder, sanitize_filename
from utils.config import load_config
from utils.logging_setup import add_console_handler, logger
from modules import bench
from modules.errors import CompilationError
from modules.report import Construction, SizeReport, write_csv


def _default_out(config, name):
    return os.path.join(config['output_folder'], name)


def run_separation(args, config):
    rows = bench.separation_rows(args.n_from, args.n_to, sigma=args.sigma, rho=args.rho,
                                 with_fixed=args.with_fixed, cap=config['min_obdd_cap'],
                                 workers=args.workers or config['workers'],
                                 record_timing=config['record_timing'])
    out = args.out or _default_out(config, f"separation_{args.n_from}_{args.n_to}.csv")
    write_csv(rows, out)
    print(f"{len(rows)} rows written to {out}")
    return 0


def run_compress_blowup(args, config):
    df = bench.compress_blowup(args.n_from, args.n_to, sigma=args.sigma,
                               workers=args.workers or config['workers'])
    out = args.out or _default_out(config, f"compress_blowup_{args.n_from}_{args.n_to}.csv")
    create_folder(os.path.dirname(out))
    df.to_csv(out, index=False, encoding='utf-8', lineterminator='\n')
    print(df.to_string(index=False))
    return 0


def run_verify(args, config):
    report = bench.cmd_verify(args.n)
    for check in report.checks:
        status = "PASS" if check.passed else "FAIL"
        print(f"{status}  {check.name}" + (f"  ({check.detail})" if check.detail and not check.passed else ""))
    print(f"verify n={args.n}: {'all checks passed' if report.passed else f'{len(report.failures())} failed'}")
    return 0 if report.passed else 1


def run_export(args, config):
    out = args.out or _default_out(config, f"{sanitize_filename(args.object)}.{args.format}")
    bench.cmd_export(args.object, args.format, out, n=args.n)
    print(f"Exported {args.object} as {args.format} to {out}")
    return 0


def run_min_obdd(args, config):
    cap = config['min_obdd_cap']
    if args.series:
        values = [int(token) for token in args.series.split(',')]
        df = bench.min_obdd_series(values, threshold=config['growth_ratio_threshold'], cap=cap,
                                   workers=args.workers or config['workers'])
        if args.out:
            create_folder(os.path.dirname(args.out))
            df.to_csv(args.out, index=False, encoding='utf-8', lineterminator='\n')
        print(df.to_string(index=False))
        return 0

    result, check = bench.cmd_min_obdd(args.function, cap=cap, exhaustive=args.exhaustive)
    print(f"{args.function}: {result.nodes} nodes, {result.arcs} arcs, ordering {','.join(map(str, result.ordering))}")
    if check is not None:
        print(f"all orderings: {check.nodes} nodes, ordering {','.join(map(str, check.ordering))}")
        if check.nodes != result.nodes:
            return 1
    if args.out:
        name, _, n = args.function.partition(':')
        row = SizeReport(name, int(n.split(':')[0]) if n else 0, Construction.OBDD_MIN, result.nodes, result.arcs,
                         0.0, "order=" + " ".join(map(str, result.ordering)))
        write_csv([row], args.out)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="sddlab",
                                     description="SDD and OBDD constructions for the hidden weighted bit function")
    parser.add_argument("--config", default="settings.json", help="settings file")
    parser.add_argument("-v", "--verbose", action="store_true", help="log debug messages to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    separation = sub.add_parser("separation", help="SDD_c vs minimal OBDD size table")
    separation.add_argument("--from", dest="n_from", type=int, default=None)
    separation.add_argument("--to", dest="n_to", type=int, default=None)
    separation.add_argument("--sigma", default="natural", help="natural, reverse, random:SEED or ids")
    separation.add_argument("--rho", default="natural", help="natural, reverse, random:SEED or ids")
    separation.add_argument("--with-fixed", action="store_true", help="add SDD_HWB and OBDD_FIXED rows")
    separation.add_argument("--workers", type=int, default=None)
    separation.add_argument("--out")
    separation.set_defaults(handler=run_separation, range_keys=('separation_from', 'separation_to'))

    blowup = sub.add_parser("compress-blowup", help="size of the HWB SDD before and after compression")
    blowup.add_argument("--from", dest="n_from", type=int, default=None)
    blowup.add_argument("--to", dest="n_to", type=int, default=None)
    blowup.add_argument("--sigma", default="natural")
    blowup.add_argument("--workers", type=int, default=None)
    blowup.add_argument("--out")
    blowup.set_defaults(handler=run_compress_blowup, range_keys=('blowup_from', 'blowup_to'))

    verify = sub.add_parser("verify", help="run all checks at one arity")
    verify.add_argument("--n", type=int, required=True)
    verify.set_defaults(handler=run_verify)

    export = sub.add_parser("export", help="write an SDD, vtree or DOT file")
    export.add_argument("--object", required=True,
                        help="hwb-sdd[:N], fn-sdd[:N], exact:N:I, prime:N:TAG, hwb:N, vtree:hwb:N, vtree:fn:N")
    export.add_argument("--format", choices=["sdd", "vtree", "dot"], required=True)
    export.add_argument("--n", type=int, default=None)
    export.add_argument("--out")
    export.add_argument("--dot", dest="dot_out", help="also write the DOT rendering to this path")
    export.set_defaults(handler=run_export)

    minimum = sub.add_parser("min-obdd", help="exact minimum OBDD size over all orderings")
    target = minimum.add_mutually_exclusive_group(required=True)
    target.add_argument("--function", help="hwb:N, exact:N:I, prime:N:TAG or ghwb:N")
    target.add_argument("--series", help="comma-separated HWB arities")
    minimum.add_argument("--exhaustive", action="store_true", help="cross-check against all orderings")
    minimum.add_argument("--workers", type=int, default=None)
    minimum.add_argument("--out")
    minimum.set_defaults(handler=run_min_obdd)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    console = add_console_handler(logging.DEBUG if args.verbose else logging.INFO)
    if args.verbose:
        logger.setLevel(logging.DEBUG)
    config = load_config(args.config)

    range_keys = getattr(args, 'range_keys', None)
    if range_keys:
        if args.n_from is None:
            args.n_from = config[range_keys[0]]
        if args.n_to is None:
            args.n_to = config[range_keys[1]]

    try:
        status = args.handler(args, config)
        if args.command == "export" and args.dot_out and status == 0:
            bench.cmd_export(args.object, "dot", args.dot_out, n=args.n)
        return status
    except CompilationError as e:
        logger.error(f"Error in {args.command}: {str(e)}")
        print(str(e), file=sys.stderr)
        return 1
    except Exception as e:
        logger.error(f"Unexpected error in {args.command}: {str(e)}")
        logger.error(traceback.format_exc())
        print(f"error: {str(e)}", file=sys.stderr)
        return 1
    finally:
        logger.removeHandler(console)


if __name__ == "__main__":
    sys.exit(main())
