"""Command line front end.

    abcqi ajf MATRIX
    abcqi classify MATRIX_A MATRIX_B
    abcqi classify --batch CORPUS
    abcqi growth MATRIX [--vector 1,0] [--csv PATH]
    abcqi verify MATRIX
    abcqi qm-dist D ADDRESS_A ADDRESS_B

Exit codes: 0 success (classify: equivalent), 1 not equivalent or a verify
property failed, 2 bad input or other errors, 3 polycyclic or singular input.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import io
from .classifier import MATCHED, classify_prepared, prepare
from .errors import AbcqiError, ParseError, PolycyclicError, SingularMatrixError
from .exact import absolute_jordan_form

EXIT_OK = 0
EXIT_NOT_EQUIVALENT = 1
EXIT_ERROR = 2
EXIT_OUT_OF_SCOPE = 3


def exit_code_for(exc: Exception) -> int:
    if isinstance(exc, (PolycyclicError, SingularMatrixError)):
        return EXIT_OUT_OF_SCOPE
    return EXIT_ERROR


def _emit(args, text: str):
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _config(args) -> io.RunConfig:
    return io.RunConfig(args.precision, args.t_max, args.degree_threshold, args.max_multiple, args.output)


def cmd_ajf(args) -> int:
    M = io.load_matrix(args.matrix)
    F = absolute_jordan_form(M)
    _emit(args, io.dumps(F.to_json(args.approx_digits)))
    return EXIT_OK


def cmd_classify(args) -> int:
    if args.batch:
        if args.matrix_b is not None:
            raise ParseError("--batch takes a single corpus file")
        return cmd_batch(args)
    if args.matrix_b is None:
        raise ParseError("classify needs two matrix files (or --batch CORPUS)")
    P = prepare(io.load_matrix(args.matrix_a))
    Q = prepare(io.load_matrix(args.matrix_b))
    verdict = classify_prepared(P, Q, max_multiple=args.max_multiple)
    _emit(args, io.dumps(verdict.to_json(args.approx_digits)))
    return EXIT_OK if verdict.equivalent else EXIT_NOT_EQUIVALENT


def batch_document(entries: Sequence, config: io.RunConfig, digits: int = 20) -> dict:
    """All-pairs verdicts, per-entry forms and the equivalence classes."""
    prepared = {}
    records = []
    for e in entries:
        rec = {"id": e.id, "metadata": dict(sorted(e.metadata.items()))}
        if e.matrix is None:
            rec.update(status=e.rejection, message=e.message)
        else:
            rec["matrix"] = io.matrix_to_json(e.matrix)
            try:
                P = prepare(e.matrix)
            except AbcqiError as exc:
                rec.update(status=exc.code, message=str(exc))
            else:
                prepared[e.id] = P
                rec.update(status="OK", abs_det=P.abs_det, ajf=P.ajf.to_json(digits))
        records.append(rec)
    ids = sorted(prepared)
    parent = {i: i for i in ids}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    pairs = []
    verdicts = {}
    for k, a in enumerate(ids):
        for b in ids[k + 1 :]:
            v = classify_prepared(prepared[a], prepared[b], max_multiple=config.max_multiple)
            verdicts[(a, b)] = v
            pairs.append(
                {"a": a, "b": b, "equivalent": v.equivalent, "witness": None if v.witness is None else list(v.witness), "certificate": v.certificate}
            )
            if v.equivalent:
                ra, rb = find(a), find(b)
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
    groups: dict = {}
    for i in ids:
        groups.setdefault(find(i), []).append(i)
    classes = sorted(groups.values())
    # the partition must agree with every pairwise verdict
    consistent = all(v.equivalent == (find(a) == find(b)) for (a, b), v in verdicts.items())
    return {
        "config": config.to_json(),
        "entries": records,
        "pairs": pairs,
        "classes": classes,
        "consistent": consistent,
    }


def cmd_batch(args) -> int:
    entries = io.load_corpus(args.matrix_a)
    doc = batch_document(entries, _config(args), args.approx_digits)
    _emit(args, io.dumps(doc))
    return EXIT_OK


def _parse_vector(text: str, n: int) -> list:
    try:
        v = [Fraction(x.strip()) for x in text.split(",")]
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad vector {text!r}") from None
    if len(v) != n:
        raise ParseError(f"vector has {len(v)} entries, matrix is {n}x{n}")
    if not any(v):
        raise ParseError("growth of the zero vector is undefined")
    return v


def cmd_growth(args) -> int:
    from .dynamics import GrowthConfig, OneParameterSubgroup, growth_profile, splitting
    from .dynamics import numeric as nm

    M = io.load_matrix(args.matrix)
    cfg = GrowthConfig(degree_threshold=args.degree_threshold)
    S = OneParameterSubgroup(M, args.precision)
    ctx = S.ctx

    def record(p, **extra):
        out = {
            "rate": float(p.rate),
            "modulus": float(ctx.exp(p.rate)),
            "degree": p.degree,
            "degree_estimate": float(p.degree_estimate),
            "residual": float(p.residual),
            "status": p.status,
            "method": p.method,
        }
        out.update(extra)
        return out

    profiles = []
    if args.vector:
        v = _parse_vector(args.vector, M.n)
        p = growth_profile(S, nm.vector(ctx, v), args.t_max, config=cfg, csv_path=args.csv)
        profiles.append(record(p, vector=[str(x) for x in v]))
    else:
        sp = splitting(S)
        for k, lvl in enumerate(sp.levels):
            for i in range(lvl.nilpotency):
                for v in nm.columns(ctx, sp.new_directions(ctx, k, i)):
                    p = growth_profile(S, v, args.t_max, config=cfg)
                    profiles.append(record(p, level_modulus=lvl.modulus.approx(args.approx_digits), filtration_index=i))
    doc = {"config": _config(args).to_json(), "squarings": S.squarings, "profiles": profiles}
    _emit(args, io.dumps(doc))
    return EXIT_OK


def cmd_verify(args) -> int:
    from .dynamics import GrowthConfig, OneParameterSubgroup, verify_report

    M = io.load_matrix(args.matrix)
    S = OneParameterSubgroup(M, args.precision)
    report = verify_report(S, config=GrowthConfig(degree_threshold=args.degree_threshold), digits=args.approx_digits)
    doc = {"config": _config(args).to_json(), "squarings": S.squarings, "properties": report}
    _emit(args, io.dumps(doc))
    failed = [k for k, v in report.items() if v["passed"] is False]
    return EXIT_NOT_EQUIVALENT if failed else EXIT_OK


def cmd_qm_dist(args) -> int:
    from .treespace import BoundaryMetric, TreeAddress, divergence_height, qm_distance

    try:
        d = int(args.d)
    except ValueError:
        raise ParseError(f"branching degree {args.d!r} is not an integer") from None
    if d < 2:
        raise ParseError("branching degree must be at least 2")
    m = BoundaryMetric(d)
    a = TreeAddress.parse(args.address_a)
    b = TreeAddress.parse(args.address_b)
    try:
        dist = qm_distance(m, a, b)
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    doc = {
        "d": d,
        "a": str(a),
        "b": str(b),
        "divergence_height": None if a == b else divergence_height(a, b),
        "distance": str(dist),
        "approx": float(dist),
    }
    _emit(args, io.dumps(doc))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, default=None, help=f"working digits (default ${io.PRECISION_ENV} or 60)")
    common.add_argument("--t-max", type=float, default=io.RunConfig.t_max)
    common.add_argument("--degree-threshold", type=float, default=io.RunConfig.degree_threshold)
    common.add_argument("--max-multiple", type=int, default=io.RunConfig.max_multiple)
    common.add_argument("--output", default=None, help="write the JSON result here instead of stdout")
    common.add_argument("--approx-digits", type=int, default=20)

    parser = argparse.ArgumentParser(prog="abcqi", description="Absolute Jordan forms and quasi-isometry classification of abelian-by-cyclic groups.")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("ajf", parents=[common], help="absolute Jordan form of a matrix")
    p.add_argument("matrix")
    p.set_defaults(func=cmd_ajf)
    p = sub.add_parser("classify", parents=[common], help="classify two matrices, or a corpus with --batch")
    p.add_argument("--batch", action="store_true")
    p.add_argument("matrix_a")
    p.add_argument("matrix_b", nargs="?")
    p.set_defaults(func=cmd_classify)
    p = sub.add_parser("growth", parents=[common], help="growth profiles of vectors")
    p.add_argument("matrix")
    p.add_argument("--vector", default=None, help="comma separated entries; default: a basis of every flag step")
    p.add_argument("--csv", default=None, help="dump (t, log_norm) samples for --vector")
    p.set_defaults(func=cmd_growth)
    p = sub.add_parser("verify", parents=[common], help="run the numeric property checks")
    p.add_argument("matrix")
    p.set_defaults(func=cmd_verify)
    p = sub.add_parser("qm-dist", parents=[common], help="boundary distance of two tree addresses")
    p.add_argument("d")
    p.add_argument("address_a", help="literal h:digits(period); put -- before negative heights")
    p.add_argument("address_b")
    p.set_defaults(func=cmd_qm_dist)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.precision is None:
            args.precision = io.default_precision()
        _config(args)  # validates
        return args.func(args)
    except AbcqiError as exc:
        sys.stderr.write(f"abcqi: {exc.code}: {exc}\n")
        sys.stdout.write(io.dumps({"error": exc.code, "message": str(exc)}))
        return exit_code_for(exc)
    except ValueError as exc:
        sys.stderr.write(f"abcqi: ERROR: {exc}\n")
        sys.stdout.write(io.dumps({"error": "ERROR", "message": str(exc)}))
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
