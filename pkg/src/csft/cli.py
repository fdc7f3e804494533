"""Command-line front end.

Exit codes: 0 success or all checks passed, 1 a check failed, 2 bad input.
"""

import argparse
import json
import os
import sys
from pathlib import Path

from . import evaluator, frobenius, oracle
from .csg import CsgMorphism, Family, FiniteGroup, compose, dualize, factorize, identity
from .errors import CsftError, ValidationError
from .graph import StructuredGraph, contract_edge, normalize_to_rose
from .operad import compute_chi2, compute_eta, eta_by_action
from .report import Report


class InputError(Exception):
    pass


def _load_json(path):
    text = sys.stdin.read() if path == "-" else _read(path)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}")


def _read(path):
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}")


def _family(args):
    companion = None
    if getattr(args, "companion", None):
        companion = FiniteGroup.from_json(_load_json(args.companion))
    return Family.parse(args.family, companion)


def _morphism(path):
    return CsgMorphism.from_json(_load_json(path))


def _emit(args, payload, text):
    if args.format == "json":
        out = json.dumps(payload, indent=2)
    else:
        out = text
    if getattr(args, "out", None):
        Path(args.out).write_text(out + "\n")
    else:
        print(out)


def _max_n(requested):
    cap = os.environ.get("CSFT_MAX_N")
    if cap is None:
        return requested
    try:
        return min(requested, int(cap))
    except ValueError:
        raise InputError(f"CSFT_MAX_N must be an integer, got {cap!r}")


# -- subcommands ---------------------------------------------------------------

def cmd_compose(args):
    f, g = _morphism(args.first), _morphism(args.then)
    h = compose(f, g)
    _emit(args, h.to_json(), str(h))
    return 0


def cmd_factorize(args):
    f = _morphism(args.input)
    phi, g = factorize(f)
    trivial = g == identity(f.family, f.source)
    payload = {"phi": phi.to_json(), "g": g.to_json(),
               "group_part": "identity" if trivial else str(g)}
    _emit(args, payload, f"phi = {phi}\ng   = {'identity' if trivial else g}")
    return 0


def cmd_dualize(args):
    f = _morphism(args.input)
    d = dualize(f)
    _emit(args, d.to_json(), str(d))
    return 0


def cmd_chi2(args):
    t = _morphism(args.element)
    w = compute_chi2(t)
    _emit(args, w.to_json(), str(w))
    return 0


def cmd_eta(args):
    g = _morphism(args.element)
    w = compute_eta(g.source, g) if args.literal else eta_by_action(g.source, g)
    _emit(args, w.to_json(), str(w))
    return 0


def _graph(path):
    return StructuredGraph.from_json(_load_json(path))


def cmd_contract(args):
    g = _graph(args.graph)
    h = contract_edge(g, args.edge)
    _emit(args, h.to_json(), repr(h))
    return 0


def cmd_normalize(args):
    g = _graph(args.graph)
    h = normalize_to_rose(g)
    _emit(args, h.to_json(), repr(h))
    return 0


def _algebra(path):
    return frobenius.FrobeniusPresentation.from_json(_load_json(path))


def cmd_frob_check(args):
    pres = _algebra(args.algebra)
    fam = _family(args)
    rep = frobenius.check_frobenius(pres, fam)
    if fam.companion is not None:
        rep.extend(frobenius.check_equivariant(pres, fam), "equivariance: ")
    _emit(args, rep.to_json(), rep.to_text())
    return 0 if rep.passed else 1


def cmd_eval(args):
    g = _graph(args.graph)
    pres = _algebra(args.algebra)
    ctx = evaluator.EvaluationContext(pres, g.family)
    if args.verify:
        if args.seed is None:
            raise InputError("--verify needs --seed")
        rep = Report()
        rep.extend(evaluator.verify_functoriality(ctx, args.verify, args.seed), "functoriality: ")
        rep.extend(evaluator.verify_pachner(ctx, args.verify, args.seed), "pachner: ")
        rep.extend(evaluator.verify_invariance(ctx, args.verify, args.seed), "invariance: ")
        rep.extend(evaluator.verify_reframed_traces(ctx), "traces: ")
        _emit(args, rep.to_json(), rep.to_text())
        return 0 if rep.passed else 1
    t = evaluator.evaluate(g, ctx)
    text = f"shape {list(t.shape)}\n" + " ".join(t.entries_str())
    _emit(args, t.to_json(), text)
    return 0


def cmd_oracle(args):
    fam = _family(args)
    n = _max_n(args.max_n)
    rep = oracle.run_all(fam, n, args.winding, args.apex)
    _emit(args, rep.to_json(), rep.to_text())
    return 0 if rep.passed else 1


def _slug(name):
    keep = [c if c.isalnum() else "_" for c in name]
    return "".join(keep).strip("_").replace("__", "_")


def cmd_examples(args):
    out = Path(args.dir)
    (out / "algebras").mkdir(parents=True, exist_ok=True)
    (out / "graphs").mkdir(parents=True, exist_ok=True)
    written = []
    for pres in frobenius.battery():
        p = out / "algebras" / f"{_slug(pres.name)}.json"
        p.write_text(json.dumps(pres.to_json(), indent=2) + "\n")
        written.append(str(p))
    fam = Family.parse(args.family)
    from .operad import standard_multiplication
    graphs = {
        "m2": standard_multiplication(fam, 2).to_graph(),
        "b2p2": evaluator.b2_after_p2(fam),
        "p1": evaluator.p1_graph(fam),
        "b2": evaluator.trace_graph(fam, 2),
        "handle": evaluator.handle_graph(fam),
    }
    for name, g in graphs.items():
        p = out / "graphs" / f"{name}.json"
        p.write_text(json.dumps(g.to_json(), indent=2) + "\n")
        written.append(str(p))
    _emit(args, {"written": written}, "\n".join(written))
    return 0


# -- parser --------------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(prog="csft", description=__doc__.splitlines()[0])
    parser.add_argument("--format", choices=("json", "text"), default="json")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--format", choices=("json", "text"), default=argparse.SUPPRESS)
        p.add_argument("--out", help="write the result here instead of stdout")
        p.set_defaults(func=fn)
        return p

    p = add("compose", cmd_compose, "compose two morphisms, first then second")
    p.add_argument("--first", required=True)
    p.add_argument("--then", required=True)
    p = add("factorize", cmd_factorize, "canonical factorization phi o g")
    p.add_argument("--in", dest="input", required=True)
    p = add("dualize", cmd_dualize, "apply the self-duality")
    p.add_argument("--in", dest="input", required=True)
    p = add("chi2", cmd_chi2, "wreath element induced by a G_0 element on m_2")
    p.add_argument("--element", required=True)
    p = add("eta", cmd_eta, "wreath element induced by a G_n element on the n-trace")
    p.add_argument("--element", required=True)
    p.add_argument("--literal", action="store_true",
                   help="use the pullback formula instead of the direct action")
    p = add("contract", cmd_contract, "contract one edge of a graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--edge", type=int, required=True, help="either half-edge of the edge")
    p = add("normalize", cmd_normalize, "contract every component to a rose")
    p.add_argument("--graph", required=True)
    p = add("frob-check", cmd_frob_check, "check an algebra against a family")
    p.add_argument("--algebra", required=True)
    p.add_argument("--family", required=True)
    p.add_argument("--companion")
    p = add("eval", cmd_eval, "evaluate a graph against an algebra")
    p.add_argument("--graph", required=True)
    p.add_argument("--algebra", required=True)
    p.add_argument("--verify", type=int, metavar="TRIALS",
                   help="run the randomized harnesses instead (needs --seed)")
    p.add_argument("--seed", type=int)
    p = add("oracle", cmd_oracle, "exhaustive checks at small sizes")
    p.add_argument("--family", required=True)
    p.add_argument("--companion")
    p.add_argument("--max-n", type=int, default=3)
    p.add_argument("--winding", type=int, default=1)
    p.add_argument("--apex", type=int, default=1)
    p = add("examples", cmd_examples, "write the built-in algebras and graphs to disk")
    p.add_argument("--dir", required=True)
    p.add_argument("--family", default="Cyclic")
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.func(args)
    except (InputError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (KeyError, TypeError, ValueError) as exc:
        print(f"error: malformed input: {exc}", file=sys.stderr)
        return 2
    except CsftError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
