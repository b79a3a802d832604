"""Command-line front end.

    cmr check   FILE            proof checking (exit 0 accept / 1 reject)
    cmr extract FILE            realiser extraction (--compiled for S/K form)
    cmr realize FILE            bounded realisability report
    cmr ord cmp A B             compare two ordinal notations: < = >
    cmr ord norm A              normalise a notation
    cmr kb FILE                 Kleene-Brouwer sort of a finite tree
    cmr corpus [DIR]            check + extract + realize every corpus proof

Exit codes are a stable contract: 0 success/Yes, 1 reject/No, 2 input
error, 3 Unknown.  CMR_CORPUS overrides the default corpus directory.
"""

import argparse
import json
import os
import sys

from . import ordinals, pca, realcheck, syntax
from .extractor import extract
from .kernel import Theory, check_proof, parse_proof
from .realcheck import Bounds, Env, check_theorem

EXIT_OK = 0
EXIT_REJECT = 1
EXIT_INPUT = 2
EXIT_UNKNOWN = 3


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fp:
        return fp.read()


def _theory(args) -> Theory:
    return Theory.CM_GWO if args.theory == "CM_GWO" else Theory.CM


def _load_proof(path: str):
    return parse_proof(_read(path))


def cmd_check(args) -> int:
    proof = _load_proof(args.file)
    verdict = check_proof(proof, _theory(args))
    if args.format == "json":
        print(verdict.to_json())
    elif verdict.accepted:
        print("accept")
    else:
        print(f"reject at line {verdict.bad_line}: {verdict.reason} ({verdict.detail})")
    return EXIT_OK if verdict.accepted else EXIT_REJECT


def cmd_extract(args) -> int:
    proof = _load_proof(args.file)
    verdict = check_proof(proof, _theory(args))
    if not verdict.accepted:
        print(f"reject at line {verdict.bad_line}: {verdict.reason}", file=sys.stderr)
        return EXIT_REJECT
    trace = extract(proof, _theory(args))
    term = trace.compiled() if args.compiled else trace.realiser
    if args.format == "json":
        print(json.dumps({
            "schema": 1,
            "term": pca.print_term(term),
            "layout": [[name, sort.value] for name, sort in trace.layout],
            "flags": sorted(trace.flags),
            "trace": {str(i): pca.print_term(line.realiser)
                      for i, line in enumerate(trace.lines)},
        }))
    else:
        print(pca.print_term(term))
    return EXIT_OK


def cmd_realize(args) -> int:
    proof = _load_proof(args.file)
    verdict = check_proof(proof, _theory(args))
    if not verdict.accepted:
        print(f"reject at line {verdict.bad_line}: {verdict.reason}", file=sys.stderr)
        return EXIT_REJECT
    bounds = Bounds(N=args.bound, fuel=args.fuel)
    report = check_theorem(proof, Env(), bounds, _theory(args))
    if args.format == "json":
        print(report.to_json())
    else:
        print(f"verdict: {report.verdict.kind}"
              + (f" ({report.verdict.reason})" if report.verdict.reason else ""))
        for w in report.witnesses:
            if w["kind"] == "or":
                print(f"  disjunct: {w['tag']}")
            else:
                print(f"  witness {w['var']} = {w['value']}")
        print(f"fuel used: {report.fuel_used}")
    if report.verdict.is_yes:
        return EXIT_OK
    if report.verdict.is_no:
        return EXIT_REJECT
    return EXIT_UNKNOWN


def cmd_ord(args) -> int:
    if args.op == "cmp":
        if len(args.notations) != 2:
            print("ord cmp takes two notations", file=sys.stderr)
            return EXIT_INPUT
        a = ordinals.normalize(ordinals.parse_ord(args.notations[0]))
        b = ordinals.normalize(ordinals.parse_ord(args.notations[1]))
        print(ordinals.ord_cmp(a, b).value)
        return EXIT_OK
    if args.op == "norm":
        if len(args.notations) != 1:
            print("ord norm takes one notation", file=sys.stderr)
            return EXIT_INPUT
        print(ordinals.print_ord(ordinals.normalize(ordinals.parse_ord(args.notations[0]))))
        return EXIT_OK
    print(f"unknown ord operation {args.op}", file=sys.stderr)
    return EXIT_INPUT


def cmd_kb(args) -> int:
    nodes = syntax.read_sexprs(_read(args.file))
    if len(nodes) != 1 or not isinstance(nodes[0], syntax.SList):
        raise syntax.SyntaxError_("expected a single (tree ...) form")
    root = nodes[0]
    head = root.items[0] if root.items else None
    if not isinstance(head, syntax.Atom) or head.text != "tree":
        raise syntax.SyntaxError_("expected a (tree ...) form")
    seqs = []
    for item in root.items[1:]:
        if not isinstance(item, syntax.SList):
            raise syntax.SyntaxError_("tree nodes are lists of naturals",
                                      item.line, item.col)
        seq = []
        for atom in item.items:
            if not isinstance(atom, syntax.Atom) or not atom.text.isdigit():
                raise syntax.SyntaxError_("tree nodes are lists of naturals",
                                          item.line, item.col)
            seq.append(int(atom.text))
        seqs.append(tuple(seq))
    tree = ordinals.make_tree(seqs)
    for node in ordinals.kb_sort(tree):
        print("(" + " ".join(str(x) for x in node) + ")")
    return EXIT_OK


def corpus_dir(args) -> str:
    if getattr(args, "dir", None):
        return args.dir
    return os.environ.get("CMR_CORPUS", "corpus")


def cmd_corpus(args) -> int:
    directory = corpus_dir(args)
    if not os.path.isdir(directory):
        print(f"no corpus directory {directory}", file=sys.stderr)
        return EXIT_INPUT
    files = sorted(f for f in os.listdir(directory) if f.endswith(".sexp"))
    if not files:
        print(f"no .sexp proofs in {directory}", file=sys.stderr)
        return EXIT_INPUT
    worst = EXIT_OK
    bounds = Bounds(N=args.bound, fuel=args.fuel)
    for name in files:
        path = os.path.join(directory, name)
        proof = parse_proof(_read(path))
        verdict = check_proof(proof, _theory(args))
        if not verdict.accepted:
            print(f"{name}: reject ({verdict.reason})")
            worst = max(worst, EXIT_REJECT)
            continue
        extract(proof, _theory(args))
        report = check_theorem(proof, Env(), bounds, _theory(args))
        ok = report.verdict.kind
        golden = os.path.join(directory, "goldens", name.replace(".sexp", ".json"))
        drift = ""
        if os.path.exists(golden):
            want = json.loads(_read(golden))
            got = {"verdict": report.verdict.kind, "witnesses": report.witnesses}
            if got != want:
                drift = "  [golden mismatch]"
                worst = max(worst, EXIT_REJECT)
        print(f"{name}: {ok}{drift}")
        if report.verdict.is_no:
            worst = max(worst, EXIT_REJECT)
        elif not report.verdict.is_yes:
            worst = max(worst, EXIT_UNKNOWN)
    return worst


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="cmr",
        description="proof checking, realiser extraction and bounded "
                    "realisability for a three-sorted intuitionistic arithmetic")
    parser.add_argument("--theory", choices=["CM", "CM_GWO"], default="CM")
    parser.add_argument("--fuel", type=int, default=10**6)
    parser.add_argument("--bound", type=int, default=50)
    parser.add_argument("--format", choices=["text", "json"], default="text")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="check a proof file")
    p.add_argument("file")
    p.set_defaults(run=cmd_check)

    p = sub.add_parser("extract", help="extract the realiser of a proof")
    p.add_argument("file")
    p.add_argument("--compiled", action="store_true",
                   help="emit the lambda-free S/K form")
    p.set_defaults(run=cmd_extract)

    p = sub.add_parser("realize", help="bounded realisability report")
    p.add_argument("file")
    p.set_defaults(run=cmd_realize)

    p = sub.add_parser("ord", help="ordinal notation utilities")
    p.add_argument("op", choices=["cmp", "norm"])
    p.add_argument("notations", nargs="*")
    p.set_defaults(run=cmd_ord)

    p = sub.add_parser("kb", help="Kleene-Brouwer sort of a tree file")
    p.add_argument("file")
    p.set_defaults(run=cmd_kb)

    p = sub.add_parser("corpus", help="run the corpus gate")
    p.add_argument("dir", nargs="?")
    p.set_defaults(run=cmd_corpus)

    args = parser.parse_args(argv)
    try:
        return args.run(args)
    except (OSError, syntax.SyntaxError_, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
