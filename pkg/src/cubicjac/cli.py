"""Command-line front end.

Every command reads a map (a file path, ``-`` for stdin, or inline text with
``;`` between lines), runs one computation and prints either a short text
report or, with ``--json``, a JSON document with ``schema: 1`` and the list of
checks that were run.  Exit codes: 0 ok, 2 parse or structural error,
3 hypothesis violation (including the open dimension-4 case of ``tame``),
4 theorem violation, 5 resource limit.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field as dc_field

from . import anomaly, corpus
from .classifier import classify_rank_le2
from .errors import CubicJacError, HypothesisViolation, ParseError
from .fields import PrimeField, field_from_spec
from .jacobian import (
    check_relation,
    degree_matrix_criterion,
    find_dependence,
    is_nilpotent,
    jacobian,
    rank_over_function_field,
)
from .keller import invert_keller, is_keller, keller_normal_form
from .normalizer import block_identity, essential_variables, normalize_rkform
from .polymap import PolyMap, compose_maps
from .tame import compose_steps, tame_decompose
from .textio import parse_document

SCHEMA = 1
COMMANDS = ("rank", "nilpotent", "depfind", "degmat", "normalize", "classify", "keller", "invert", "tame", "anomaly", "corpus")
CORPUS_KINDS = ("classification", "dependence", "form-ii", "triangular", "form-i", "rank1")


@dataclass(frozen=True)
class RunConfig:
    command: str
    input: str | None = None
    field: str | None = None
    seed: int = 0
    json: bool = False
    degree_cap: int = 6
    extra_variable: bool = False
    options: dict = dc_field(default_factory=dict)


class Report:
    """Result fields plus the transcript of checks."""

    def __init__(self, command: str):
        self.command = command
        self.result = {}
        self.checks = []

    def check(self, name: str, ok: bool):
        self.checks.append({"check": name, "pass": bool(ok)})
        return ok

    def checks_from(self, mapping: dict):
        for k, v in mapping.items():
            self.check(k, v)

    def to_json(self):
        return {"schema": SCHEMA, "command": self.command, "result": self.result, "verification": self.checks}


# -- input ------------------------------------------------------------------------------------


def read_input(source: str) -> str:
    if source == "-":
        return sys.stdin.read()
    if os.path.isfile(source):
        with open(source, encoding="utf-8") as fh:
            return fh.read()
    return source


def load_map(cfg: RunConfig):
    """(name, map) from the configured input; ``--field`` must agree with a header."""
    if cfg.input is None:
        raise ParseError("this command needs an input map")
    K = field_from_spec(cfg.field) if cfg.field else None
    doc = parse_document(read_input(cfg.input), K)
    return doc.name, doc.map


def as_H(name: str, M: PolyMap) -> PolyMap:
    """The nonlinear part H: F - x for maps named F, the map itself otherwise."""
    if name == "F":
        if M.m != M.nvars:
            raise ParseError("a map named F must have as many components as variables")
        return M - PolyMap.identity(M.nvars, M.field)
    return M


def as_F(name: str, M: PolyMap) -> PolyMap:
    if name == "F":
        return M
    if M.m != M.nvars:
        raise ParseError("x + H needs as many components as variables")
    return M + PolyMap.identity(M.nvars, M.field)


# -- commands ------------------------------------------------------------------------------


def cmd_rank(cfg: RunConfig, rep: Report):
    name, M = load_map(cfg)
    J = jacobian(M)
    cert = rank_over_function_field(J)
    rep.result["rank"] = cert.to_json()
    rep.result["field"] = M.field.name
    minor = J.submatrix(cert.minor_rows, cert.minor_cols).det()
    rep.check("certificate minor recomputes to the reported nonzero value", minor == cert.minor_value and bool(minor.terms))


def cmd_nilpotent(cfg: RunConfig, rep: Report):
    name, M = load_map(cfg)
    H = as_H(name, M)
    J = jacobian(H)
    nil, k = is_nilpotent(J)
    rep.result["nilpotent"] = nil
    rep.result["index"] = k
    if nil and k:
        P = J
        for _ in range(k - 1):
            P = P @ J
        rep.check(f"JH^{k} = 0", P.is_zero())
    if H.m == H.nvars:
        rep.result["keller"] = is_keller(H + PolyMap.identity(H.nvars, H.field))


def cmd_depfind(cfg: RunConfig, rep: Report):
    _, M = load_map(cfg)
    rel = find_dependence(M, cfg.degree_cap)
    rep.result["degree_cap"] = cfg.degree_cap
    rep.result["rank"] = rank_over_function_field(jacobian(M)).rank
    if rel is None:
        rep.result["relation"] = None
        rep.result["status"] = "no relation up to the degree cap"
    else:
        rep.result.update(rel.to_json())
        rep.check("relation vanishes on the components", check_relation(M, rel))


def cmd_degmat(cfg: RunConfig, rep: Report):
    _, M = load_map(cfg)
    p = cfg.options.get("p")
    report = degree_matrix_criterion(M, p)
    rep.result.update(report.to_json())
    if M.field.characteristic or p:
        K = M.field if M.field.characteristic else PrimeField(p)
        rows = [list(r) for r in report.matrix]
        jz = not jacobian(anomaly.monomial_map(rows, K)).det().terms
        rep.result["jacobian_det_zero"] = jz
        rep.check("degree-matrix criterion agrees with the Jacobian determinant", report.anomalous == jz)


def cmd_normalize(cfg: RunConfig, rep: Report):
    _, M = load_map(cfg)
    res = normalize_rkform(M)
    rep.result.update(res.to_json())
    pt = [res.field.one if j == res.base_point_index else res.field.zero for j in range(M.nvars)]
    if res.base_point_index < M.nvars:
        ok = jacobian(res.H_tilde).evaluate(pt) == block_identity(M.m, M.nvars, res.rank, res.field)
        rep.check("Jacobian at the base point is the block identity", ok)
    if M.degree() != float("-inf"):
        try:
            rep.result["essential_variables"] = essential_variables(M).essential_count
        except HypothesisViolation as exc:
            rep.result["essential_variables"] = f"unavailable: {exc}"


def cmd_classify(cfg: RunConfig, rep: Report):
    n_corpus = cfg.options.get("corpus")
    if n_corpus:
        insts = corpus.classification_corpus(cfg.seed, per_case=n_corpus)
        counts = {}
        failures = []
        for k, inst in enumerate(insts):
            try:
                r = classify_rank_le2(inst.H)
                ok = r.case_tag == inst.label and all(r.verify(inst.H).values())
            except CubicJacError as exc:
                ok = False
                r = None
                failures.append({"instance": k, "expected": inst.label, "error": str(exc)})
            if r is not None and not ok:
                failures.append({"instance": k, "expected": inst.label, "got": r.case_tag})
            counts.setdefault(inst.label, [0, 0])
            counts[inst.label][0] += ok
            counts[inst.label][1] += 1
        rep.result["seed"] = cfg.seed
        rep.result["per_case"] = n_corpus
        rep.result["recovered"] = {k: f"{a}/{b}" for k, (a, b) in sorted(counts.items())}
        rep.result["failures"] = failures
        rep.check("every instance recovered with a verified predicate", not failures)
        return
    _, M = load_map(cfg)
    r = classify_rank_le2(M)
    rep.result.update(r.to_json())
    rep.checks_from(r.verify(M))


def cmd_keller(cfg: RunConfig, rep: Report):
    name, M = load_map(cfg)
    H = as_H(name, M)
    F = H + PolyMap.identity(H.nvars, H.field)
    rep.result["keller"] = is_keller(F)
    if not rep.result["keller"]:
        raise HypothesisViolation("not a Keller map")
    nf = keller_normal_form(H)
    rep.result["normal_form"] = nf.to_json()
    rep.checks_from(nf.verify(H))


def cmd_invert(cfg: RunConfig, rep: Report):
    name, M = load_map(cfg)
    params = cfg.options.get("params", 0)
    if name != "F":
        M = _x_plus(M)
    inv = invert_keller(M, cfg.options.get("degree_bound"), params)
    rep.result.update(inv.to_json())
    N = M.nvars
    Fe = M.with_identity_tail(N)
    Ge = inv.G.with_identity_tail(N)
    X = PolyMap.identity(N, M.field)
    rep.check("F o G = x", compose_maps(Fe, Ge) == X)
    rep.check("G o F = x", compose_maps(Ge, Fe) == X)


def _x_plus(H: PolyMap) -> PolyMap:
    """x + H where H may have fewer components than variables (trailing parameters)."""
    X = PolyMap.identity(H.nvars, H.field)
    return PolyMap([X[i] + h for i, h in enumerate(H)], H.nvars, H.field)


def cmd_tame(cfg: RunConfig, rep: Report):
    name, M = load_map(cfg)
    F = as_F(name, M)
    dec = tame_decompose(F, cfg.extra_variable)
    rep.result.update(dec.to_json())
    target = F.with_identity_tail(dec.nvars)
    rep.check("steps recompose to the map" + (" extended by x%d" % dec.nvars if dec.extra_variable else ""), compose_steps(dec.steps, dec.nvars, F.field) == target)


def cmd_anomaly(cfg: RunConfig, rep: Report):
    action = cfg.options.get("action")
    if action == "verify":
        recs = anomaly.verify_remark_examples()
    elif action == "search":
        recs = anomaly.search_monomial_anomalies(
            cfg.options["n"], cfg.options["maxdeg"], cfg.options["p"], cfg.options.get("budget", anomaly.DEFAULT_SEARCH_BUDGET)
        )
    else:
        raise ParseError("anomaly needs 'verify' or 'search'")
    rep.result["records"] = [r.to_json() for r in recs]
    rep.result["count"] = len(recs)
    for r in recs:
        rep.check(f"{r.name} over F{r.characteristic}: both checks agree", r.agree)
        if action == "verify":
            rep.check(f"{r.name} over F{r.characteristic}: anomalous", r.criterion_holds and r.jacobian_det_zero)


def cmd_corpus(cfg: RunConfig, rep: Report):
    kind = cfg.options.get("kind", "classification")
    count = cfg.options.get("count", 10)
    n = cfg.options.get("n", 4)
    if kind == "classification":
        insts = corpus.classification_corpus(cfg.seed, per_case=count)
    elif kind == "dependence":
        insts = corpus.dependence_corpus(cfg.seed, count)
    elif kind == "form-ii":
        insts = corpus.form_ii_scrambles(cfg.seed, count, n)
    elif kind == "triangular":
        insts = corpus.triangular_scrambles(cfg.seed, count)
    elif kind == "form-i":
        insts = corpus.form_i_scrambles(cfg.seed, count)
    elif kind == "rank1":
        insts = corpus.rank1_corpus(cfg.seed, count)
    else:
        raise ParseError(f"unknown corpus kind {kind!r}; expected one of {list(CORPUS_KINDS)}")
    rep.result["kind"] = kind
    rep.result["seed"] = cfg.seed
    rep.result["instances"] = [{"label": i.label, "map": i.H.to_text()} for i in insts]


HANDLERS = {
    "rank": cmd_rank,
    "nilpotent": cmd_nilpotent,
    "depfind": cmd_depfind,
    "degmat": cmd_degmat,
    "normalize": cmd_normalize,
    "classify": cmd_classify,
    "keller": cmd_keller,
    "invert": cmd_invert,
    "tame": cmd_tame,
    "anomaly": cmd_anomaly,
    "corpus": cmd_corpus,
}


def run_pipeline(cfg: RunConfig):
    """(report dict, exit code).  Errors become an ``error`` entry with their exit code."""
    rep = Report(cfg.command)
    try:
        HANDLERS[cfg.command](cfg, rep)
    except CubicJacError as exc:
        out = rep.to_json()
        out["error"] = {"kind": type(exc).__name__, "message": str(exc)}
        out["exit_code"] = exc.exit_code
        return out, exc.exit_code
    code = 0 if all(c["pass"] for c in rep.checks) else 4
    out = rep.to_json()
    out["exit_code"] = code
    return out, code


# -- rendering ----------------------------------------------------------------------------


def render_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False)


def render_text(report: dict) -> str:
    lines = [f"command: {report['command']}"]
    if "error" in report:
        lines.append(f"error ({report['error']['kind']}): {report['error']['message']}")
    _render_value(report.get("result", {}), lines, "")
    for c in report.get("verification", []):
        lines.append(f"[{'pass' if c['pass'] else 'FAIL'}] {c['check']}")
    return "\n".join(lines)


def _render_value(value, lines, indent):
    if isinstance(value, dict):
        for k in sorted(value):
            v = value[k]
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{indent}{k}:")
                _render_value(v, lines, indent + "  ")
            else:
                lines.append(f"{indent}{k}: {_scalar(v)}")
    elif isinstance(value, list):
        for v in value:
            if isinstance(v, (dict, list)):
                lines.append(f"{indent}-")
                _render_value(v, lines, indent + "  ")
            else:
                lines.append(f"{indent}- {_scalar(v)}")
    else:
        lines.append(f"{indent}{_scalar(value)}")


def _scalar(v):
    if v is None:
        return "none"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, list):
        return "[]"
    if isinstance(v, dict):
        return "{}"
    return str(v)


# -- argument parsing -----------------------------------------------------------------------


def _global_flags(parser, suppress: bool):
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--field", default=d(None), help="coefficient field: Q or F<p> (must match any header)")
    parser.add_argument("--seed", type=int, default=d(0), help="seed for corpus generation")
    parser.add_argument("--json", action="store_true", default=d(False), help="emit a JSON report")
    parser.add_argument("--degree-cap", type=int, default=d(6), help="degree cap for dependence search")
    parser.add_argument("--extra-variable", action="store_true", default=d(False), help="allow a fresh variable in tame decompositions")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cubicjac", description="Exact tools for cubic homogeneous maps with Jacobian rank at most two.")
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)
    shared = argparse.ArgumentParser(add_help=False)
    _global_flags(shared, suppress=True)

    def add(name, help_text, needs_input=True):
        p = sub.add_parser(name, parents=[shared], help=help_text)
        if needs_input:
            p.add_argument("input", help="file path, '-' for stdin, or inline map text with ';' between lines")
        return p

    add("rank", "Jacobian rank over K(x) with a certificate minor")
    add("nilpotent", "nilpotency of JH and its index")
    add("depfind", "smallest algebraic relation among the components")
    p = add("degmat", "degree-matrix criterion for a monomial map")
    p.add_argument("--p", type=int, default=None, help="characteristic to test (default: that of the field)")
    add("normalize", "linear normalization at a generic point")
    p = add("classify", "classification of a rank <= 2 cubic map", needs_input=False)
    p.add_argument("input", nargs="?", default=None, help="map to classify (omit with --corpus)")
    p.add_argument("--corpus", type=int, default=None, metavar="N", help="classify N seeded scrambles per case")
    add("keller", "Keller test and normal form")
    p = add("invert", "exact inverse of a Keller map")
    p.add_argument("--degree-bound", type=int, default=None)
    p.add_argument("--params", type=int, default=0, help="number of trailing inert parameter variables")
    add("tame", "decomposition into elementary automorphisms")
    p = add("anomaly", "characteristic-p anomalies of monomial maps", needs_input=False)
    p.add_argument("action", choices=("verify", "search"))
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--maxdeg", type=int, default=4)
    p.add_argument("--p", type=int, default=5)
    p.add_argument("--budget", type=int, default=anomaly.DEFAULT_SEARCH_BUDGET)
    p = add("corpus", "emit a seeded random corpus", needs_input=False)
    p.add_argument("--kind", choices=CORPUS_KINDS, default="classification")
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--n", type=int, default=4)
    return parser


_OPTION_KEYS = ("p", "corpus", "degree_bound", "params", "action", "n", "maxdeg", "budget", "kind", "count")


def config_from_args(ns) -> RunConfig:
    opts = {k: getattr(ns, k) for k in _OPTION_KEYS if getattr(ns, k, None) is not None}
    return RunConfig(
        command=ns.command,
        input=getattr(ns, "input", None),
        field=ns.field,
        seed=ns.seed,
        json=ns.json,
        degree_cap=ns.degree_cap,
        extra_variable=ns.extra_variable,
        options=opts,
    )


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and 2
    cfg = config_from_args(ns)
    report, code = run_pipeline(cfg)
    if cfg.json:
        if cfg.command == "anomaly":
            for rec in report["result"].get("records", []):
                print(json.dumps({"schema": SCHEMA, "record": rec}, sort_keys=True))
            summary = {k: v for k, v in report.items() if k != "result"}
            summary["count"] = report["result"].get("count", 0)
            print(json.dumps(summary, sort_keys=True))
        else:
            print(render_json(report))
    else:
        text = render_text(report)
        stream = sys.stderr if "error" in report else sys.stdout
        print(text, file=stream)
    return code


if __name__ == "__main__":
    sys.exit(main())
