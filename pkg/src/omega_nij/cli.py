"""Command-line interface: ``omega-nij <command> ...``.

Exit codes: 0 success, 1 a checked statement is false, 2 parse error,
3 semantic error.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import io
from .algebra import (
    rb_relation_check,
    validate_nf_bimodule,
    validate_nijenhuis_family,
    validate_omega_associativity,
)
from .cochains import NF_VARIANTS
from .cohomology import apply_differential, cohomology, is_coboundary, is_cocycle, les_check
from .deformation import (
    apply_d1,
    check_deformation,
    gauge_transform,
    infinitesimal,
    trivial_deformation,
    trivialization_step,
)
from .derived import induced_bimodule, star_product
from .errors import NoSolution, NotCocycle, OmegaNijError, ParseError, SemanticError
from .extensions import (
    build_extension,
    canonical_section,
    classes_equal,
    extract_cocycle,
    iso_between,
    section_from_offset,
    verify_extension_iso,
)
from .field import field_from_descriptor
from .report import Report


def _load(args):
    inst = io.parse_instance(args.file)
    if getattr(args, "field", None):
        try:
            fld = field_from_descriptor(args.field)
        except ValueError as exc:
            raise ParseError(str(exc), field="--field") from None
        inst = io.change_field(inst, fld)
    return inst


def _ctx(inst, args, validate=True):
    return inst.context(nf_variant=args.nf_differential, validate=validate)


# --------------------------------------------------------------------------
# commands


def cmd_validate(args):
    inst = _load(args)
    S, A, N, M = inst.S, inst.A, inst.N, inst.module
    reports = {
        "omega_associativity": validate_omega_associativity(A, S),
        "nijenhuis_family": validate_nijenhuis_family(A, S, N),
        "nf_bimodule": validate_nf_bimodule(A, S, N, M),
    }
    warnings = []
    if S.unit is None:
        warnings.append("semigroup has no unit: degree-0 cochains and differentials are skipped")
    ok = all(r.verdict for r in reports.values())
    if args.strict and warnings:
        ok = False
    return Report(args.argv, ok, {"checks": reports, "warnings": warnings, "strict": args.strict}, inst.field)


def cmd_star(args):
    inst = _load(args)
    star = star_product(inst.A, inst.S, inst.N)
    M = induced_bimodule(inst.A, inst.S, inst.N, inst.module)
    out = io.Instance(inst.field, inst.S, star.algebra, inst.N, M)
    text = io.serialize(out)
    if args.output:
        Path(args.output).write_text(text)
    rep = validate_omega_associativity(star.algebra, inst.S)
    nij = validate_nijenhuis_family(star.algebra, inst.S, inst.N)
    body = {"output": args.output or "-", "star_associative": rep, "star_nijenhuis": nij}
    if not args.output:
        body["instance"] = io.instance_to_dict(out)
    return Report(args.argv, rep.verdict and nij.verdict, body, inst.field)


def cmd_cohomology(args):
    inst = _load(args)
    ctx = _ctx(inst, args)
    table = cohomology(ctx, args.complex, args.max_degree, representatives=args.representatives)
    body = table.as_dict()
    body["nf_differential"] = ctx.nf_variant
    return Report(args.argv, table.is_complex, body, inst.field)


def cmd_cocycle(args):
    inst = _load(args)
    ctx = _ctx(inst, args)
    vec, n, kind = io.cochain_vector(inst, args.cochain, ctx)
    if args.degree is not None and args.degree != n:
        raise SemanticError(f"cochain {args.cochain!r} has degree {n}, not {args.degree}")
    if args.complex is not None and args.complex != kind:
        raise SemanticError(f"cochain {args.cochain!r} lives in {kind}, not {args.complex}")
    fld = ctx.field
    cocycle = is_cocycle(vec, n, kind, ctx)
    body = {"cochain": args.cochain, "complex": kind, "degree": n, "cocycle": cocycle,
            "nf_differential": ctx.nf_variant}
    try:
        prim = is_coboundary(vec, n, kind, ctx)
        image = apply_differential(prim, n - 1, kind, ctx) if n > 0 and len(prim) else fld.zeros(len(vec))
        body["coboundary"] = True
        body["primitive_verified"] = fld.equal_arrays(image, vec)
        if n > 0:
            a, b = ctx.split(n - 1) if kind == "nfa" else (len(prim), 0)
            alg = ctx.field.array(prim[:a]).reshape(ctx.alg.shape(n - 1)) if a else fld.zeros(ctx.alg.shape(n - 1))
            nf = None
            if kind == "nfa" and n - 1 >= 1:
                nf = prim[a:].reshape(ctx.alg.shape(n - 2))
            body["primitive"] = io.cochain_doc(fld, inst.S, kind, n - 1, alg, nf)
        body["verdict"] = "coboundary"
    except NoSolution:
        body["coboundary"] = False
        body["verdict"] = "cocycle" if cocycle else "not a cocycle"
    ok = cocycle if not args.expect_coboundary else body["coboundary"]
    return Report(args.argv, ok, body, fld)


def _extension_from_file(inst, ctx):
    if inst.extension is None:
        raise SemanticError("instance has no extension block")
    return build_extension(ctx, inst.extension["psi"], inst.extension["chi"])


def cmd_extension(args):
    inst = _load(args)
    ctx = _ctx(inst, args)
    fld = ctx.field
    if args.action == "build":
        if inst.extension is None:
            raise SemanticError("instance has no extension block")
        psi, chi = inst.extension["psi"], inst.extension["chi"]
        cocycle = is_cocycle(np.concatenate([psi.reshape(-1), chi.reshape(-1)]), 2, "nfa", ctx)
        try:
            E = build_extension(ctx, psi, chi)
        except NotCocycle as exc:
            return Report(args.argv, False, {"valid_total": False, "is_cocycle": cocycle,
                                             "witness": exc.witness, "nf_differential": ctx.nf_variant}, fld)
        total = io.Instance(fld, inst.S, E.total, E.N_hat, None)
        body = {"valid_total": True, "is_cocycle": cocycle, "total_dim": E.total.dim,
                "nf_differential": ctx.nf_variant}
        if args.output:
            io.serialize(total, args.output)
            body["output"] = args.output
        return Report(args.argv, True, body, fld)
    if args.action == "extract":
        E = _extension_from_file(inst, ctx)
        sections = {"canonical": canonical_section(E)}
        for name, offs in inst.extension["sections"].items():
            sections[name] = section_from_offset(E, offs)
        out = {}
        vecs = {}
        for name, s in sections.items():
            psi, chi = extract_cocycle(E, s)
            vec = np.concatenate([psi.reshape(-1), chi.reshape(-1)])
            vecs[name] = vec
            out[name] = {"cocycle": is_cocycle(vec, 2, "nfa", ctx),
                         "cochain": io.cochain_doc(fld, inst.S, "nfa", 2, psi, chi)}
        base = vecs["canonical"]
        for name, vec in vecs.items():
            try:
                is_coboundary(fld.reduce(vec - base), 2, "nfa", ctx)
                out[name]["cohomologous_to_canonical"] = True
            except NoSolution:
                out[name]["cohomologous_to_canonical"] = False
        ok = all(v["cocycle"] and v["cohomologous_to_canonical"] for v in out.values())
        return Report(args.argv, ok, {"sections": out, "nf_differential": ctx.nf_variant}, fld)
    # compare / iso need a second file
    if not args.other:
        raise SemanticError(f"extension {args.action} needs a second instance file")
    other = io.parse_instance(args.other)
    if args.field:
        other = io.change_field(other, fld)
    E1 = _extension_from_file(inst, ctx)
    E2 = _extension_from_file(other, _ctx(other, args))
    equal, _ = classes_equal(E1, E2, ctx.nf_variant)
    if args.action == "compare":
        return Report(args.argv, True, {"classes_equal": equal, "nf_differential": ctx.nf_variant}, fld)
    if not equal:
        return Report(args.argv, False, {"classes_equal": False, "isomorphism": None}, fld)
    zeta = iso_between(E1, E2, ctx.nf_variant)
    rep = verify_extension_iso(zeta, E1, E2)
    body = {"classes_equal": True, "check": rep,
            "zeta": {inst.S.labels[w]: [[fld.format(v) for v in row] for row in zeta.maps[w]]
                     for w in range(inst.S.size)}}
    return Report(args.argv, rep.verdict, body, fld)


def cmd_deform(args):
    inst = _load(args)
    ctx = _ctx(inst, args)
    fld = ctx.field
    if args.action == "gauge" and inst.deformation is None:
        D = None
    else:
        D = io.instance_deformation(inst, ctx)
    if args.action == "check":
        res = check_deformation(D, ctx)
        return Report(args.argv, res["verdict"], {"first_failure": res["first_failure"], "orders": res["orders"]}, fld)
    if args.action == "infinitesimal":
        inf = infinitesimal(D, ctx)
        vec = inf.vector()
        cocycle = is_cocycle(vec, 2, "nfa", ctx)
        body = {"cochain": io.cochain_doc(fld, inst.S, "nfa", 2, inf.alg.data, inf.nf.data),
                "cocycle": cocycle, "nf_differential": ctx.nf_variant}
        return Report(args.argv, cocycle, body, fld)
    if args.action == "gauge":
        G = io.instance_gauge(inst, ctx)
        base = D if D is not None else trivial_deformation(ctx, G.order)
        D2 = gauge_transform(base, G, ctx)
        res = check_deformation(D2, ctx)
        body = {"deformation": io.deformation_doc(fld, inst.S, D2), "check": res["verdict"],
                "first_failure": res["first_failure"]}
        if D2.order >= 1:
            rel = fld.reduce(infinitesimal(D2, ctx).vector() - infinitesimal(base, ctx).vector())
            body["order_one_relation"] = fld.equal_arrays(rel, apply_d1(G.psi_coeffs[1], ctx))
        ok = res["verdict"] and body.get("order_one_relation", True)
        return Report(args.argv, ok, body, fld)
    # trivialize-step
    out = trivialization_step(D, ctx)
    body = {
        "psi1": {inst.S.labels[w]: [[fld.format(v) for v in row] for row in out["psi1"][w]]
                 for w in range(inst.S.size)},
        "adjusted_nf_part": out["adjusted_nf_part"],
        "deformation": io.deformation_doc(fld, inst.S, out["deformation"]),
        "order_one_vanishes": True,
        "nf_differential": ctx.nf_variant,
    }
    return Report(args.argv, True, body, fld)


def cmd_relate(args):
    inst = _load(args)
    res = rb_relation_check(inst.A, inst.S, inst.N)
    ok = all(e.get("confirmed", True) for e in res["cases"].values())
    return Report(args.argv, ok, res, inst.field)


def cmd_les(args):
    inst = _load(args)
    ctx = _ctx(inst, args)
    res = les_check(ctx, args.max_degree, shuffle_seed=args.shuffle_seed)
    res["nf_differential"] = ctx.nf_variant
    return Report(args.argv, res.pop("verdict"), res, inst.field)


# --------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable JSON report")
    common.add_argument("--field", help="override the field: rational or prime:p")
    common.add_argument("--nf-differential", choices=NF_VARIANTS, default="star",
                        help="Nijenhuis complex differential: literal star version or the corrected one")

    p = argparse.ArgumentParser(prog="omega-nij", description="Nijenhuis family Omega-associative algebra toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", parents=[common], help="run all axiom validators")
    s.add_argument("file")
    s.add_argument("--strict", action="store_true", help="treat warnings as failures")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("star", parents=[common], help="emit the star-product instance")
    s.add_argument("file")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_star)

    s = sub.add_parser("cohomology", parents=[common], help="cohomology dimensions")
    s.add_argument("file")
    s.add_argument("--complex", choices=("alg", "nf", "nfa"), default="nfa")
    s.add_argument("--max-degree", type=int, default=2)
    s.add_argument("--representatives", action="store_true")
    s.set_defaults(func=cmd_cohomology)

    s = sub.add_parser("cocycle", parents=[common], help="cocycle and coboundary test for a named cochain")
    s.add_argument("file")
    s.add_argument("--cochain", required=True, help="name of a cochain in the file's cochains block")
    s.add_argument("--degree", type=int)
    s.add_argument("--complex", choices=("alg", "nf", "nfa"))
    s.add_argument("--expect-coboundary", action="store_true", help="fail unless the cochain is a coboundary")
    s.set_defaults(func=cmd_cocycle)

    s = sub.add_parser("extension", parents=[common], help="abelian extension pipelines")
    s.add_argument("action", choices=("build", "extract", "compare", "iso"))
    s.add_argument("file")
    s.add_argument("other", nargs="?")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_extension)

    s = sub.add_parser("deform", parents=[common], help="truncated deformation pipelines")
    s.add_argument("action", choices=("check", "infinitesimal", "gauge", "trivialize-step"))
    s.add_argument("file")
    s.set_defaults(func=cmd_deform)

    s = sub.add_parser("relate", parents=[common], help="Nijenhuis versus Rota-Baxter identities")
    s.add_argument("file")
    s.set_defaults(func=cmd_relate)

    s = sub.add_parser("les", parents=[common], help="verify the long exact sequence")
    s.add_argument("file")
    s.add_argument("--max-degree", type=int, default=2)
    s.add_argument("--shuffle-seed", type=int)
    s.set_defaults(func=cmd_les)
    return p


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    args.argv = [args.command] + argv[1:]
    try:
        report = args.func(args)
    except OmegaNijError as exc:
        payload = {"command": args.argv, "error": type(exc).__name__, "message": str(exc)}
        if exc.witness is not None:
            payload["witness"] = exc.witness
        code = exc.exit_code
    except ValueError as exc:
        payload = {"command": args.argv, "error": "SemanticError", "message": str(exc)}
        code = SemanticError.exit_code
    else:
        sys.stdout.write(report.to_json() if args.json else report.to_text())
        return 0 if report.verdict else 1
    rep = Report(payload.pop("command"), False, payload)
    if args.json:
        sys.stdout.write(rep.to_json())
    else:
        sys.stderr.write(rep.to_text())
    return code


if __name__ == "__main__":
    sys.exit(main())
