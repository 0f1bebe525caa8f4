"""Command-line interface.

Exit codes: 0 when a result or verdict was computed, 2 for input errors
(including failed structural preconditions, with the stage on stderr) and 3
when a computation window was too small to decide.
"""
from __future__ import annotations

import argparse
import sys
import time

from .errors import InconclusiveError, KoszulFgError, ParameterError, ParseError, StructuralError
from .field import GF, QQ
from .io import Report, load_document

__all__ = ["main", "build_parser", "run"]

EXIT_OK, EXIT_INPUT, EXIT_INCONCLUSIVE = 0, 2, 3


def build_parser():
    p = argparse.ArgumentParser(prog="koszulfg", description="Finite generation checks for graded symmetric algebras.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=None, help="representation dimension n (default 1, or 2 for potentials)")
    common.add_argument("--ext-bound", type=int, default=8)
    common.add_argument("--dual-bound", type=int, default=6)
    common.add_argument("--center-bound", type=int, default=6)
    common.add_argument("--gen-bound", type=int, default=4)
    common.add_argument("--horizon", type=int, default=6)
    common.add_argument("--char", type=int, default=None, help="field characteristic (0 or a prime)")
    common.add_argument("--json", action="store_true", help="emit a JSON report")
    common.add_argument("--seed-order", default=None,
                        help="comma-separated arrow precedence for the monomial order")
    sub = p.add_subparsers(dest="command", required=True)
    for name, helptext in [
        ("present", "extract a quiver with relations from the presented algebra"),
        ("trivext", "quiver with relations of the trivial extension"),
        ("jacobian", "cyclic derivatives and Jacobian relations of a potential"),
        ("exttable", "bigraded Ext table of T = L_0 over L"),
        ("dual", "Koszul dual dimensions (Yoneda algebra of T)"),
        ("preproj", "higher preprojective algebra dimensions"),
        ("nri", "n-representation-infinite test of the degree-0 algebra"),
        ("center", "graded and plain center truncations of the dual"),
        ("fgcheck", "end-to-end finite generation verdict"),
    ]:
        sp = sub.add_parser(name, parents=[common], help=helptext)
        sp.add_argument("file", help="input document")
    d = sub.add_parser("dimer", parents=[common], help="dimer model computations")
    d.add_argument("action", choices=["matchings", "grading", "consistency"])
    d.add_argument("file", help="input document")
    d.add_argument("--matching", default=None, help="comma-separated matched arrows for 'grading'")
    return p


def _bounds(args):
    return {"ext": args.ext_bound, "dual": args.dual_bound, "center": args.center_bound,
            "gen": args.gen_bound, "horizon": args.horizon}


def _precedence(doc, args):
    if not args.seed_order:
        return None
    names = [x.strip() for x in args.seed_order.split(",") if x.strip()]
    for a in names:
        if a not in doc.quiver.aindex:
            raise ParseError(f"unknown arrow {a!r} in --seed-order")
    return names


def _load(args):
    doc = load_document(args.file)
    if args.char is not None:
        field = QQ if args.char == 0 else GF(args.char)
        if field != doc.field:
            from .io import parse_document
            with open(args.file, encoding="utf-8") as fh:
                text = fh.read()
            doc = parse_document(text + f"\n[options]\nchar = {args.char}\n", args.file)
    return doc


def _matching_for(doc, warnings, explicit=None):
    """Arrow grading for a potential: explicit degrees, a named matching or the first good one."""
    from .dimer import degree_zero_finite_dim, matching_grading, perfect_matchings
    D = doc.dimer()
    if explicit:
        m = frozenset(x.strip() for x in explicit.split(",") if x.strip())
        return matching_grading(D, m), m
    opt = doc.options.get("matching")
    if opt:
        m = frozenset(x.strip() for x in opt.replace(",", " ").split())
        return matching_grading(D, m), m
    if doc.has_grading():
        return doc.grading, frozenset(a for a, d in doc.degrees.items() if d)
    for m in perfect_matchings(D):
        g = matching_grading(D, m)
        res = degree_zero_finite_dim(D.jacobian(g))
        if res.finite:
            warnings.append(f"no matching given; using {sorted(m)}")
            return g, m
    raise StructuralError("no perfect matching with finite-dimensional degree-0 part")


def algebras(doc, warnings):
    """``(A, L)``: the degree-0 algebra and the graded algebra the homological commands use.

    A trivially graded quiver algebra ``A`` gives ``L = ΔA``; a graded one is
    used as given with ``A = L_0``; a potential gives ``A = J_0`` for its
    matching grading and ``L = ΔA``.
    """
    from .algebra import algebra_from_presentation
    from .present import degree_zero_part, trivial_extension
    if doc.kind == "quiver-algebra":
        pres = doc.presentation()
        mode = doc.options.get("algebra", "as-given" if doc.has_grading() else "trivext")
        if mode == "trivext":
            A = _ungraded_algebra(doc)
            return A, trivial_extension(A), "trivial extension of the presented algebra"
        if mode != "as-given":
            raise ParseError(f"option algebra must be 'trivext' or 'as-given', not {mode!r}")
        L = algebra_from_presentation(pres)[0]
        return degree_zero_part(L), L, "presented graded algebra"
    g, m = _matching_for(doc, warnings)
    J = doc.presentation().with_grading(g)
    A = degree_zero_part(J)
    return A, trivial_extension(A), f"trivial extension of the degree-0 Jacobian algebra (matching {sorted(m)})"


def _ungraded_algebra(doc):
    from .algebra import algebra_from_presentation
    from .modcplx import ungraded
    pres = doc.presentation().with_grading({a: 0 for a in doc.quiver.arrow_names})
    return ungraded(algebra_from_presentation(pres)[0])


def _pres_json(P):
    from .present import minimal_relation_degrees
    rd = minimal_relation_degrees(P)
    return {"vertices": [str(v) for v in P.quiver.vertices],
            "arrows": [[a, str(s), str(t), P.grading[a]] for a, s, t in P.quiver.arrows],
            "relations": [str(r) for r in P.relations],
            "relation_lengths": rd.lengths, "quadratic": rd.is_quadratic}


def run(argv=None):
    """Parse ``argv`` and return ``(exit code, Report or None, error message)``."""
    args = build_parser().parse_args(argv)
    return _run(args)


def _run(args):
    warnings: list = []
    t0 = time.time()
    stage = "input"
    try:
        doc = _load(args)
        stage = args.command
        n = args.n if args.n is not None else (2 if doc.kind != "quiver-algebra" else 1)
        prec = _precedence(doc, args)
        report = _dispatch(args, doc, n, prec, warnings)
    except (ParseError, FileNotFoundError, IsADirectoryError, ParameterError) as exc:
        return EXIT_INPUT, None, f"error [{getattr(exc, 'stage', None) or stage}]: {exc}"
    except StructuralError as exc:
        return EXIT_INPUT, None, f"error [{exc.stage or stage}]: {exc}"
    except InconclusiveError as exc:
        hint = f" (try a bound of {exc.suggestion})" if exc.suggestion else ""
        return EXIT_INCONCLUSIVE, None, f"inconclusive [{exc.stage or stage}]: {exc}{hint}"
    except KoszulFgError as exc:
        return EXIT_INPUT, None, f"error [{exc.stage or stage}]: {exc}"
    report.evidence.setdefault("timing_seconds", round(time.time() - t0, 3))
    return EXIT_OK, report, ""


def _dispatch(args, doc, n, prec, warnings) -> Report:
    from . import centerfg, koszul, modcplx, present
    from .algebra import algebra_from_presentation
    cmd = args.command
    bounds = _bounds(args)
    inp = doc.describe()

    def report(evidence, verdict=None, result=None):
        return Report(cmd, inp, bounds, evidence, verdict, result, warnings)

    if cmd == "present":
        pres = doc.presentation()
        A = algebra_from_presentation(pres)[0]
        P = present.gabriel_presentation(A, precedence=prec)
        return report({"dimension": A.dim}, result=_pres_json(P))
    if cmd == "trivext":
        if doc.kind == "quiver-algebra":
            A = _ungraded_algebra(doc)
        else:
            A, _, _ = algebras(doc, warnings)
        D = present.trivial_extension(A)
        P = present.gabriel_presentation(D, precedence=prec)
        return report({"dimension": D.dim, "graded_dimensions": D.graded_dimensions()},
                      result=_pres_json(P))
    if cmd == "jacobian":
        from .potential import cyclic_derivative
        W = doc.potential_object()
        ders = {a: str(cyclic_derivative(W, a)) for a in doc.quiver.arrow_names}
        return report({"potential": str(W)}, result={"derivatives": ders})
    if cmd == "dimer":
        from . import dimer
        D = doc.dimer()
        if args.action == "matchings":
            ms = dimer.perfect_matchings(D)
            return report({"faces": [D.face_str(f) for f in D.faces]},
                          result={"matchings": [sorted(m, key=doc.quiver.aindex.get) for m in ms],
                                  "count": len(ms)})
        if args.action == "grading":
            g, m = _matching_for(doc, warnings, args.matching)
            J = D.jacobian(g)
            res = dimer.degree_zero_finite_dim(J)
            out = {"matching": sorted(m, key=doc.quiver.aindex.get), "finite": res.finite,
                   "dimension": res.dimension, "cycle": list(res.cycle) if res.cycle else None}
            if res.finite:
                A0 = present.degree_zero_part(J)
                out["degree_zero_presentation"] = _pres_json(present.gabriel_presentation(A0))
            return report({}, result=out)
        feas = dimer.consistency_feasible(D)
        warnings.append("consistency is tested through the existence of R-charges")
        return report({"charges": feas.charges}, verdict="feasible" if feas.feasible else "infeasible")

    A, L, how = algebras(doc, warnings)
    inp["graded_algebra"] = how
    if doc.field.characteristic:
        warnings.append(f"computed in characteristic {doc.field.characteristic}; "
                        "ranks and verdicts may differ over other fields")
    if cmd in ("center", "fgcheck"):
        warnings.append("computed over the given field without passing to an algebraic closure")
    if cmd == "nri":
        v = modcplx.n_rep_infinite_test(A, n, args.horizon)
        return report({"gldim": v.gldim, "reason": v.reason,
                       "homology": [{str(k): dv for k, dv in h.items()} for h in v.homology]},
                      verdict=v.verdict)
    if cmd == "preproj":
        P = modcplx.preprojective(A, n, args.dual_bound)
        return report({"n": n}, result={"graded_dimensions": P.dims})
    if cmd == "exttable":
        tbl = koszul.graded_ext_table(L, None, args.ext_bound)
        orth = koszul.orthogonality_check(tbl, n + 1)
        return report({"orthogonality": orth.verdict}, result=tbl.to_json())
    if cmd == "dual":
        G = koszul.koszul_dual(L, None, n + 1, args.dual_bound)
        return report({"n": n, "ext_support": [list(k) for k in G.ext_table.support()]},
                      result={"graded_dimensions": G.dims})
    if cmd == "center":
        G = koszul.koszul_dual(L, None, n + 1, args.center_bound)
        Cg = centerfg.center_truncation(G, args.center_bound, "graded")
        Cp = centerfg.center_truncation(G, args.center_bound, "plain")
        return report({"dual_dimensions": G.dims},
                      result={"graded": Cg.dims(), "plain": Cp.dims(),
                              "veronese2": centerfg.veronese_of_center(Cg, 2).dims()})
    if cmd == "fgcheck":
        b = centerfg.FgBounds(args.ext_bound, args.dual_bound, args.center_bound, args.gen_bound,
                              args.horizon)
        v = centerfg.fg_verdict(L, n, b)
        warnings.append("noetherianity of the center is not checked separately")
        ev = dict(v.evidence)
        ev["reason"] = v.reason
        return report(ev, verdict=v.outcome)
    raise ParameterError(f"unknown command {cmd}")


def main(argv=None):
    args = build_parser().parse_args(argv)
    code, report, err = _run(args)
    if err:
        print(err, file=sys.stderr)
    if report is not None:
        print(report.to_json() if args.json else report.to_text())
    return code


if __name__ == "__main__":
    sys.exit(main())
