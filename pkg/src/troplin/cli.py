"""Command-line interface.

Exit codes: 0 success, 1 I/O or schema error (including bad usage), 2 domain
precondition violation (cycles, overlapping sets, size caps), 3 verification
failure (unequal partitions in mec-verify, a violated record in rank-scan).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .equivalence import markov_equivalent_d, markov_equivalent_star, verify_mec_equality
from .graph import Dag, all_treks, enumerate_dags
from .model import (
    MaxLinearModel,
    sample,
    scan_dsep_rank,
    scan_starsep_rank,
    tail_dependence,
    trek_monomial,
    trek_rule_entry,
    trop_covariance,
)
from .separation import conditional_reachability, d_separated, star_separated
from .trop_core import SchemaError, format_value

ENV_JOBS = "TROPLIN_JOBS"


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _parse_nodes(text: str) -> tuple[int, ...]:
    if text is None or text.strip() == "":
        return ()
    try:
        return tuple(int(tok) for tok in text.split(","))
    except ValueError:
        raise _UsageError(f"expected comma-separated integers, got {text!r}") from None


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as e:
        raise SchemaError(f"cannot read {path}: {e}") from None
    except json.JSONDecodeError as e:
        raise SchemaError(f"{path} is not valid JSON: {e}") from None


def _load_graph(path: str) -> Dag:
    return Dag.from_json_dict(_load_json(path))


def _load_model(path: str, exact: bool = True) -> MaxLinearModel:
    return MaxLinearModel.from_json_dict(_load_json(path), exact=exact)


def _emit_text(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(doc, out_path: str | None) -> None:
    if out_path is None and sys.stdout.isatty():
        text = json.dumps(doc, indent=2) + "\n"
    else:
        text = json.dumps(doc, separators=(",", ":")) + "\n"
    _emit_text(text, out_path)


def _emit_json_lines(docs, out_path: str | None) -> None:
    text = "".join(json.dumps(d, separators=(",", ":")) + "\n" for d in docs)
    _emit_text(text, out_path)


def _default_jobs() -> int:
    raw = os.environ.get(ENV_JOBS, "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="troplin", description="max-linear Bayesian network toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ci", help="separation query on a graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--criterion", required=True, choices=["d", "star"])
    p.add_argument("--I", required=True)
    p.add_argument("--J", required=True)
    p.add_argument("--K", default="")
    p.add_argument("--out")

    p = sub.add_parser("reach", help="conditional reachability DAG")
    p.add_argument("--graph", required=True)
    p.add_argument("--K", default="")
    p.add_argument("--out")

    p = sub.add_parser("equiv", help="Markov equivalence of two graphs")
    p.add_argument("--graph", required=True)
    p.add_argument("--graph2", required=True)
    p.add_argument("--criterion", required=True, choices=["d", "star"])
    p.add_argument("--out")

    p = sub.add_parser("mec-verify", help="compare d- and star-separation partitions")
    p.add_argument("--n", required=True, type=int)
    p.add_argument("--jobs", type=int, default=None)
    p.add_argument("--out")

    p = sub.add_parser("tropcov", help="tropical covariance matrix")
    p.add_argument("--model", required=True)
    p.add_argument("--exact", action="store_true")
    p.add_argument("--out")

    p = sub.add_parser("trek", help="best trek weight between two nodes")
    p.add_argument("--model", required=True)
    p.add_argument("--i", required=True, type=int)
    p.add_argument("--j", required=True, type=int)
    p.add_argument("--list", action="store_true", dest="list_treks")
    p.add_argument("--out")

    p = sub.add_parser("rank-scan", help="rank records for all d-separation statements")
    p.add_argument("--model", required=True)
    p.add_argument("--out")

    p = sub.add_parser("star-scan", help="rank records for star-only statements")
    p.add_argument("--model", required=True)
    p.add_argument("--out")

    p = sub.add_parser("chi", help="tail-dependence matrix")
    p.add_argument("--model", required=True)
    p.add_argument("--alpha", required=True, type=float)
    p.add_argument("--out")

    p = sub.add_parser("sample", help="draw observations as CSV")
    p.add_argument("--model", required=True)
    p.add_argument("--alpha", required=True, type=float)
    p.add_argument("--m", required=True, type=int)
    p.add_argument("--seed", required=True, type=int)
    p.add_argument("--out")

    p = sub.add_parser("enumerate", help="count (and list) all DAGs on n nodes")
    p.add_argument("--n", required=True, type=int)
    p.add_argument("--list", action="store_true", dest="list_dags")
    p.add_argument("--out")

    return parser


def _cmd_ci(args) -> int:
    g = _load_graph(args.graph)
    I, J, K = _parse_nodes(args.I), _parse_nodes(args.J), _parse_nodes(args.K)
    sep = d_separated(g, I, J, K) if args.criterion == "d" else star_separated(g, I, J, K)
    _emit_json({"separated": sep}, args.out)
    return 0


def _cmd_reach(args) -> int:
    g = _load_graph(args.graph)
    _emit_json(conditional_reachability(g, _parse_nodes(args.K)).to_json_dict(), args.out)
    return 0


def _cmd_equiv(args) -> int:
    g, h = _load_graph(args.graph), _load_graph(args.graph2)
    eq = markov_equivalent_d(g, h) if args.criterion == "d" else markov_equivalent_star(g, h)
    _emit_json({"equivalent": eq}, args.out)
    return 0


def _cmd_mec_verify(args) -> int:
    jobs = args.jobs if args.jobs is not None else _default_jobs()
    report = verify_mec_equality(args.n, jobs=jobs)
    _emit_json(report, args.out)
    return 0 if report["equal"] else 3


def _cmd_tropcov(args) -> int:
    model = _load_model(args.model)
    sigma = trop_covariance(model)
    if not args.exact:
        sigma = sigma.to_float()
    _emit_json(sigma.to_json_dict(), args.out)
    return 0


def _cmd_trek(args) -> int:
    model = _load_model(args.model)
    doc = {
        "i": args.i,
        "j": args.j,
        "entry": format_value(trek_rule_entry(model, args.i, args.j)),
    }
    if args.list_treks:
        doc["treks"] = [
            {
                "top": t.top,
                "left": list(t.left),
                "right": list(t.right),
                "monomial": format_value(trek_monomial(model, t)),
            }
            for t in all_treks(model.graph, args.i, args.j)
        ]
    _emit_json(doc, args.out)
    return 0


def _cmd_rank_scan(args) -> int:
    model = _load_model(args.model)
    records = scan_dsep_rank(model)
    _emit_json_lines([r.to_json_dict() for r in records], args.out)
    return 3 if any(r.satisfied is False for r in records) else 0


def _cmd_star_scan(args) -> int:
    model = _load_model(args.model)
    records = scan_starsep_rank(model)
    _emit_json_lines([r.to_json_dict() for r in records], args.out)
    return 0


def _cmd_chi(args) -> int:
    model = _load_model(args.model)
    _emit_json(tail_dependence(model, args.alpha).to_json_dict(), args.out)
    return 0


def _cmd_sample(args) -> int:
    model = _load_model(args.model)
    data = sample(model, args.alpha, args.m, args.seed)
    header = ",".join(f"x{i}" for i in range(1, model.n + 1))
    lines = [header]
    lines.extend(",".join(repr(v) for v in row) for row in data.tolist())
    _emit_text("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_enumerate(args) -> int:
    dags = list(enumerate_dags(args.n))
    doc = {"n": args.n, "count": len(dags)}
    if args.list_dags:
        doc["dags"] = [g.to_json_dict() for g in dags]
    _emit_json(doc, args.out)
    return 0


_HANDLERS = {
    "ci": _cmd_ci,
    "reach": _cmd_reach,
    "equiv": _cmd_equiv,
    "mec-verify": _cmd_mec_verify,
    "tropcov": _cmd_tropcov,
    "trek": _cmd_trek,
    "rank-scan": _cmd_rank_scan,
    "star-scan": _cmd_star_scan,
    "chi": _cmd_chi,
    "sample": _cmd_sample,
    "enumerate": _cmd_enumerate,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as e:
        print(f"troplin: {e}", file=sys.stderr)
        return 1
    try:
        return _HANDLERS[args.command](args)
    except (SchemaError, _UsageError) as e:
        print(f"troplin: {e}", file=sys.stderr)
        return 1
    except ValueError as e:
        print(f"troplin: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"troplin: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
