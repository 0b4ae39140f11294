"""Command line front end.

Exit codes: 0 success, 1 verification or computation failure, 2 usage or
configuration error.  Results go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import dataclass


from .analysis import Analysis
from .errors import BadSpec, CoxeterError, NonFiniteGroup
from .fan import N_of, to_rho_indices
from .geometry import DEFAULT_BUDGET, DEFAULT_TOL, read_coxeter_matrix
from .papi import papi_check, word_from_ordered_roots
from .verify import run_checks

SCHEMA_VERSION = 1
EXPORTS = ("roots", "order", "facets", "climbing", "classes")


@dataclass(frozen=True)
class RunConfig:
    group_spec: object
    tolerance: float = DEFAULT_TOL
    format: str = "text"
    budget: int = DEFAULT_BUDGET
    seed: int = 0

    def __post_init__(self):
        if not 0 < self.tolerance < 1e-3:
            raise BadSpec(f"--tol must lie in (0, 1e-3), got {self.tolerance}")
        if self.budget < 1:
            raise BadSpec(f"--budget must be >= 1, got {self.budget}")

    def analysis(self):
        return Analysis(self.group_spec, tol=self.tolerance, budget=self.budget)


def _num(x):
    # Snap rounding noise so repeated runs and platforms print the same digits.
    if abs(x) < 1e-12:
        return 0.0
    value = float(f"{float(x):.12g}")
    return 0.0 if value == 0 else value


def _vec(v):
    return [_num(x) for x in v]


def _word(w):
    return list(w.word)


def _emit(records, fmt, header=None, out=None):
    out = out or sys.stdout
    if fmt == "json":
        payload = dict(header or {})
        payload["records"] = records
        out.write(json.dumps(payload, indent=1) + "\n")
    elif fmt == "csv":
        if not records:
            return
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(records[0]), lineterminator="\n")
        writer.writeheader()
        for rec in records:
            writer.writerow({k: _flat(v) for k, v in rec.items()})
        out.write(buf.getvalue())
    else:
        for rec in records:
            out.write("  ".join(f"{k}={_flat(v)}" for k, v in rec.items()) + "\n")


def _flat(value):
    if isinstance(value, list):
        if value and isinstance(value[0], list):
            return " ".join("[" + " ".join(map(str, v)) + "]" for v in value)
        return " ".join(_flat(v) for v in value) if value else "-"
    if value is None:
        return "-"
    return str(value)


def _header(a, kind):
    return {"schema_version": SCHEMA_VERSION, "type": a.name, "kind": kind}


# -- record builders --------------------------------------------------------

def root_records(a):
    order, sys_ = a.order, a.system
    out = []
    for i in range(1, order.n_positive + 1):
        r = order.rho_root(i)
        out.append({"rho_index": i, "vector": _vec(sys_.roots[r]),
                    "coefficients": _vec(sys_.coefficients[r])})
    return out


def order_records(a):
    order = a.order
    out = []
    for i in range(1, order.length + 1):
        out.append({"i": i, "positive": i <= order.n_positive,
                    "rho": _vec(order.rho_vector(i)), "mu": _vec(order.mu_vector(i))})
    return out


def facet_records(a):
    return [{"indices": list(f.indices), "N": to_rho_indices(N_of(f.indices, a.order), a.order)}
            for f in a.facets]


def climbing_records(a):
    return [{"facet": list(f.indices), "word": _word(x)} for f, x in zip(a.facets, a.climbing)]


def class_records(a):
    out = []
    for cls in a.classes:
        out.append({
            "facet": list(cls.facet.indices),
            "members": [_word(w) for w in cls.members],
            "min": _word(cls.min_element),
            "max": _word(cls.max_element),
            "falling": _word(a.group.lookup(cls.falling)),
        })
    return out


_BUILDERS = {
    "roots": root_records,
    "order": order_records,
    "facets": facet_records,
    "climbing": climbing_records,
    "classes": class_records,
}


# -- commands ---------------------------------------------------------------

def cmd_info(config, args):
    a = config.analysis()
    report = {"type": a.name, "rank": a.system.rank, "order": len(a.group),
              "h": a.order.h, "positive_roots": a.order.n_positive, "catalan": a.catalan}
    if config.format == "json":
        print(json.dumps({"schema_version": SCHEMA_VERSION, **report}, indent=1))
    elif config.format == "csv":
        _emit([report], "csv")
    else:
        print(f"type {a.name}  rank {report['rank']}  |W|={report['order']}  "
              f"h={report['h']}  nh/2={report['positive_roots']}  Cat={report['catalan']}")
    return 0


def cmd_order(config, args):
    a = config.analysis()
    order = a.order
    if args.check is not None:
        try:
            rho = [int(t) for t in args.check.replace(",", " ").split()]
        except ValueError:
            raise BadSpec(f"--check expects rho indices, got {args.check!r}")
        if any(not 1 <= i <= order.n_positive for i in rho):
            raise BadSpec(f"rho indices must lie in 1..{order.n_positive}")
        sigma = [order.rho_root(i) for i in rho]
        verdict = papi_check(sigma, a.system)
        result = {"roots": rho, "valid": verdict.valid, "clause": verdict.clause}
        if verdict.triple is not None:
            t = verdict.triple
            result["triple"] = {k: int(order.rho_index[getattr(t, k)]) for k in ("sigma", "tau", "rho")}
        if verdict:
            result["word"] = list(word_from_ordered_roots(sigma, a.system))
        if config.format == "json":
            print(json.dumps({"schema_version": SCHEMA_VERSION, "type": a.name, **result}, indent=1))
        else:
            _emit([result], config.format)
        return 0 if verdict else 1
    header = _header(a, "order")
    header.update({"labels": list(order.labels), "s": order.s, "h": order.h,
                   "c": list(order.labels), "w0": list(order.word)})
    _emit(order_records(a), config.format, header)
    return 0


def cmd_facets(config, args):
    a = config.analysis()
    records = facet_records(a)
    if config.format == "json":
        print(json.dumps({"schema_version": SCHEMA_VERSION, "type": a.name, "facets": records},
                         indent=1))
    else:
        _emit(records, config.format)
    return 0


def cmd_classes(config, args):
    a = config.analysis()
    records = class_records(a)
    if config.format == "json":
        print(json.dumps({"schema_version": SCHEMA_VERSION, "type": a.name, "classes": records},
                         indent=1))
    else:
        _emit(records, config.format)
    return 0


def cmd_export(config, args):
    a = config.analysis()
    _emit(_BUILDERS[args.what](a), config.format, _header(a, args.what))
    return 0


def cmd_verify(config, args):
    a = config.analysis()
    results = run_checks(a, seed=config.seed)
    failed = [r for r in results if r.status == "fail"]
    if config.format == "json":
        print(json.dumps([{"check": r.check, "status": r.status, "detail": r.detail}
                          for r in results], indent=1))
    elif config.format == "csv":
        _emit([vars(r) for r in results], "csv")
    else:
        for r in results:
            print(f"{r.status.upper():8s} {r.check:20s} {r.detail}")
        print(f"{a.name}: {len(results) - len(failed)}/{len(results)} checks not failing")
    return 1 if failed else 0


COMMANDS = {
    "info": cmd_info,
    "order": cmd_order,
    "facets": cmd_facets,
    "classes": cmd_classes,
    "export": cmd_export,
    "verify": cmd_verify,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    group = common.add_mutually_exclusive_group(required=True)
    group.add_argument("--type", help='group type, e.g. "A3", "H4", "I2(7)"')
    group.add_argument("--coxeter-matrix", metavar="FILE",
                       help="file holding n and an n x n Coxeter matrix")
    common.add_argument("--tol", type=float, default=DEFAULT_TOL)
    common.add_argument("--format", choices=("json", "csv", "text"), default="text")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                        help="maximum group order to enumerate")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(
        prog="coxclimb",
        description="Bipartite reflection orders, associahedron fans and climbing elements.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("info", parents=[common], help="rank, group order, h, Catalan number")
    p = sub.add_parser("order", parents=[common], help="rho/mu sequences")
    p.add_argument("--check", metavar="RHO_INDICES",
                   help="judge an ordered list of positive roots given by rho index")
    sub.add_parser("facets", parents=[common], help="facets of the fan with N(V_F)")
    sub.add_parser("classes", parents=[common], help="equivalence classes as intervals")
    p = sub.add_parser("export", parents=[common], help="export one stage as records")
    p.add_argument("what", choices=EXPORTS)
    sub.add_parser("verify", parents=[common], help="run every verification check")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        stream=sys.stderr, format="%(levelname)s %(message)s")
    try:
        spec = args.type if args.type is not None else read_coxeter_matrix(args.coxeter_matrix)
        config = RunConfig(spec, args.tol, args.format, args.budget, args.seed)
        return COMMANDS[args.command](config, args)
    except (BadSpec, NonFiniteGroup, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CoxeterError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
