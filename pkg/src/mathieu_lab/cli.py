"""Command-line entry point: ``mathieu-lab <group> <command> ...``.

Exit codes: 0 success, 1 property violation or search survivor, 2 usage,
input or I/O error.
"""

from __future__ import annotations

import argparse
import json
import logging
import re
import sys
from fractions import Fraction

from . import cases, charp, emap, imd1, search
from .config import load_config
from .errors import ConsistencyError, DecompositionFailed, MathieuLabError
from .lfunctional import L, L_power_profile, pairing
from .poly import QQ, XiZ, U, Z, parse_poly

log = logging.getLogger("mathieu_lab")


class Failure(Exception):
    """Raised by a command to report a property violation (exit code 1)."""


# ---------------------------------------------------------------- helpers


def _infer_n(texts, pattern=r"[Uxz](\d+)"):
    idx = [int(m) for t in texts for m in re.findall(pattern, t)]
    return max(idx, default=1)


def _n(args, *texts):
    return args.n if args.n is not None else _infer_n(texts)


def _ints(text):
    return [int(x) for x in text.replace(" ", "").split(",") if x]


def _rationals(text):
    return [QQ.normalize(Fraction(x)) for x in text.replace(" ", "").split(",") if x]


def emit(args, text, data):
    if args.format == "json":
        print(json.dumps(data, default=str))
    else:
        print(text)


# ---------------------------------------------------------------- lfunc


def cmd_lfunc_eval(args):
    n = _n(args, args.f)
    v = L(parse_poly(args.f, U(n)))
    emit(args, str(v), {"L": str(v)})


def cmd_lfunc_profile(args):
    n = _n(args, args.f)
    rep = L_power_profile(parse_poly(args.f, U(n)), args.m_max or args.cfg["m_max"], args.cfg["term_budget"])
    vals = ", ".join(str(v) for v in rep.values)
    text = f"values: [{vals}]\nfirst_nonzero_m: {rep.first_nonzero_m}"
    emit(args, text, rep.to_dict())


def cmd_lfunc_pairing(args):
    n = _n(args, args.f, args.g)
    v = pairing(parse_poly(args.f, U(n)), parse_poly(args.g, U(n)))
    emit(args, str(v), {"pairing": str(v)})


# ---------------------------------------------------------------- emap


def cmd_emap_apply(args):
    n = _n(args, *args.polys)
    polys = [parse_poly(t, XiZ(n)) for t in args.polys]
    if args.D:
        out = emap.apply_D(polys)
    else:
        if len(polys) != 1:
            raise MathieuLabError("E takes a single polynomial (use --D for a tuple)")
        out = emap.E(polys[0])
    emit(args, str(out), {"result": str(out)})


def cmd_emap_member(args):
    n = _n(args, args.f)
    f = parse_poly(args.f, XiZ(n))
    e = emap.E(f)
    data = {"member": not e, "E": str(e)}
    if args.witness and not e:
        hs = emap.preimage_D(f, args.cfg["emap_slack"])
        data["witness"] = None if hs is None else [str(h) for h in hs]
    text = ("member" if not e else "not member") + f"  (E(f) = {e})"
    if "witness" in data:
        text += f"\nwitness: {data['witness'] if data['witness'] is not None else 'none within bound'}"
    emit(args, text, data)


def cmd_emap_screen(args):
    n = _n(args, args.f)
    v = emap.screen(parse_poly(args.f, XiZ(n)), args.m_max or args.cfg["m_max"], args.cfg["term_budget"])
    d = v.to_dict()
    emit(args, " ".join(f"{k}={val}" for k, val in d.items()), d)


def cmd_emap_m2probe(args):
    n = _n(args, args.f, *args.g)
    f = parse_poly(args.f, XiZ(n))
    gs = [parse_poly(t, XiZ(n)) for t in args.g]
    rows = emap.m2_probe(f, gs, args.m_start, args.m_max or args.cfg["m_max"], args.cfg["term_budget"])
    text = "\n".join(f"g={r['g']} m={r['m']} E(f^m g)=0: {r['zero']}" for r in rows)
    emit(args, text, rows)


# ---------------------------------------------------------------- imd1


def _b(text):
    return parse_poly(text, imd1.B, imd1.RING)


def cmd_imd1_criterion(args):
    ok = imd1.criterion(_b(args.f))
    emit(args, "member" if ok else "not member", {"member": ok})


def cmd_imd1_witness(args):
    f = _b(args.f)
    w = imd1.witness(f)
    if w is None:
        emit(args, "none (criterion fails)", {"h": None})
        return
    if not w.verify():
        raise Failure(f"witness for {f} does not verify")
    emit(args, str(w.h), {"h": str(w.h), "verified": True})


def cmd_imd1_scaledL(args):
    g = parse_poly(args.g, Z(1))
    N = args.N if args.N is not None else max(g.degree(), 0)
    ok = imd1.scaled_L_test(g, N)
    emit(args, "member" if ok else "not member", {"member": ok, "N": N})


# ---------------------------------------------------------------- charp


def cmd_charp_syzygy(args):
    ctx = charp.CharPContext(args.p, args.n or len(args.g))
    S = charp.koszul_syzygy(ctx, [ctx.parse_A(t) for t in args.g])
    rows = {f"g{i + 1}{j + 1}": str(v) for (i, j), v in sorted(S.g.items()) if i < j}
    emit(args, "\n".join(f"{k} = {v}" for k, v in rows.items()), rows)


def cmd_charp_frobenius(args):
    r = _ints(args.r)
    ctx = charp.CharPContext(args.p, args.n or len(r))
    w = charp.frobenius_witness(ctx, args.i - 1, r)
    if not w.verify(ctx):
        raise Failure("Frobenius witness does not verify")
    h = w.h[args.i - 1]
    emit(args, f"h = {h}\ntarget = {w.target}", {"h": str(h), "target": str(w.target), "verified": True})


def cmd_charp_p2verify(args):
    n = args.n or _infer_n([args.f, args.g], r"[zt](\d+)")
    ctx = charp.CharPContext(args.p, n)
    try:
        rep = charp.theorem_p2_verify(ctx, ctx.parse(args.f), ctx.parse(args.g), args.m)
    except DecompositionFailed as exc:
        raise Failure(str(exc)) from exc
    emit(args, f"verified m={rep.m} pieces={rep.pieces}", rep.to_dict())


def cmd_charp_degenerate(args):
    rep = charp.degenerate_counterexample(args.p, args.degree)
    if not rep.confirmed:
        raise Failure(f"degenerate case not confirmed: {rep.to_dict()}")
    emit(args, f"confirmed: 1 in image, z^{args.p - 1} not in image (degree <= {rep.image_basis_degree})",
         rep.to_dict())


# ---------------------------------------------------------------- cases


def _cert_out(args, cert):
    if not cases.verify_certificate(cert):
        raise Failure(f"certificate failed re-verification: {cert.to_dict()}")
    emit(args, f"{cert.conclusion}: p={cert.p} residue={cert.residue} ({cert.statement})", cert.to_dict())


def cmd_cases_twomono(args):
    n = _n(args, args.M1, args.M2)
    res = cases.two_monomial_solve(parse_poly(args.M1, U(n)), parse_poly(args.M2, U(n)))
    text = f"h = {res.h}, pairing(h, h) = {res.pairing} -> " + ("only (0, 0)" if res.only_trivial else "nontrivial")
    emit(args, text, res.to_dict())


def cmd_cases_monounit(args):
    n = _n(args, args.f)
    _cert_out(args, cases.monomial_unit_certificate(parse_poly(args.f, U(n)), args.cfg["prime_cap"]))


def cmd_cases_smallest(args):
    n = _n(args, args.f)
    var = None if args.var is None else args.var - 1
    _cert_out(args, cases.smallest_term_certificate(parse_poly(args.f, U(n)), var, args.m, args.cfg["prime_cap"]))


def cmd_cases_gapseries(args):
    rep = cases.gap_series(_rationals(args.S), args.r, args.N if args.N is not None else args.cfg["gap_n"])
    if rep.flagged or not rep.check_inverse():
        raise Failure(f"no nonzero a_(mr) up to N = {rep.N}: {rep.to_dict()}")
    hit = "none (S = 1)" if rep.first_hit is None else f"m={rep.first_hit[0]} a_mr={rep.first_hit[1]}"
    emit(args, f"first_hit: {hit}", rep.to_dict())


def cmd_cases_congruence(args):
    ok = cases.congruence_check(args.p)
    emit(args, "holds" if ok else "fails", {"p": args.p, "holds": ok})
    if not ok:
        raise Failure(f"congruence fails at p = {args.p}")


def cmd_cases_quadratic(args):
    v = cases.quadratic_binary_test(args.c20, args.c11, args.c02, args.m_max, args.cfg["prime_cap"])
    if v.certificate:
        _cert_out(args, v.certificate)
        return
    if v.kind == "zero":
        emit(args, "f = 0", v.to_dict())
        return
    emit(args, f"square of a linear form (scale {v.scale}); first nonzero at m={v.linear.first_nonzero_m}",
         v.to_dict())


def cmd_cases_powersum(args):
    _cert_out(args, cases.power_sum_certificate(_ints(args.c), args.d, args.m, args.cfg["prime_cap"]))


def cmd_cases_linform(args):
    rep = cases.linear_form_power_test(_rationals(args.c), args.r, args.m_max)
    text = "\n".join(f"m={m} L={v}" for m, v in rep.rows)
    emit(args, text, rep.to_dict())


# ---------------------------------------------------------------- search / selftest


def _spec_from_args(args):
    if args.spec:
        return search.CandidateSpec.read(args.spec)
    if args.n is None or not args.support:
        raise MathieuLabError("give --spec FILE or both -n and --support")
    return search.CandidateSpec(
        n=args.n,
        support=search.parse_support(args.support, args.n),
        c_max=args.c_max if args.coeffs is None else None,
        coeffs=None if args.coeffs is None else _ints(args.coeffs),
        m_max=args.m_max or args.cfg["m_max"],
        dedupe=args.dedupe,
        terms=args.terms,
    )


def _search_out(args, summary):
    emit(args, f"candidates={summary.total} written={summary.written} "
               f"survivors={len(summary.survivors)} confirmed={len(summary.confirmed)}", summary.to_dict())
    if summary.confirmed:
        raise Failure(f"{len(summary.confirmed)} SURVIVOR(s) after escalation")


def _search_kw(args):
    return dict(limit=args.limit, timing=bool(args.cfg["timing"]), term_budget=args.cfg["term_budget"],
                checkpoint_every=args.cfg["checkpoint_every"], chunksize=args.cfg["chunksize"])


def cmd_search_run(args):
    spec = _spec_from_args(args)
    _search_out(args, search.run_search(spec, args.jobs, args.out, **_search_kw(args)))


def cmd_search_resume(args):
    _search_out(args, search.resume_search(args.out, args.jobs, **_search_kw(args)))


def cmd_selftest(args):
    from .selftest import run_selftest

    results = run_selftest(args.seed, args.scale, args.only)
    bad = [r for r in results if not r[1]]
    if args.format == "json":
        print(json.dumps([{"check": n, "ok": ok, "detail": d, "seconds": round(s, 3)} for n, ok, d, s in results]))
    else:
        for n, ok, d, s in results:
            print(f"{'PASS' if ok else 'FAIL'} {n:12s} {s:7.2f}s  {d}")
    if bad:
        raise Failure(f"{len(bad)} check(s) failed")


# ---------------------------------------------------------------- parser


def _globals(parser, suppress):
    d = argparse.SUPPRESS if suppress else None
    parser.add_argument("--config", default=d, help="flat key = value settings file")
    parser.add_argument("--jobs", type=int, default=d if suppress else 1, help="worker processes")
    parser.add_argument("--seed", type=int, default=d if suppress else 0, help="seed for random sampling")
    parser.add_argument("--format", choices=("text", "json"), default=d if suppress else "text")
    parser.add_argument("-v", "--verbose", action="store_true", default=d if suppress else False)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    _globals(common, suppress=True)

    ap = argparse.ArgumentParser(prog="mathieu-lab", description="Exact experiments with the factorial functional.")
    _globals(ap, suppress=False)
    groups = ap.add_subparsers(dest="group", required=True)

    def group(name, help):
        g = groups.add_parser(name, help=help)
        return g.add_subparsers(dest="cmd", required=True)

    def cmd(sub, name, fn, help):
        p = sub.add_parser(name, help=help, parents=[common])
        p.set_defaults(func=fn)
        return p

    def with_n(p):
        p.add_argument("-n", type=int, default=None, help="number of variables (inferred if omitted)")
        return p

    lf = group("lfunc", "factorial functional")
    with_n(cmd(lf, "eval", cmd_lfunc_eval, "L(f)")).add_argument("f")
    p = with_n(cmd(lf, "profile", cmd_lfunc_profile, "L(f^m) for m = 1..m_max"))
    p.add_argument("f")
    p.add_argument("--m-max", type=int)
    p = with_n(cmd(lf, "pairing", cmd_lfunc_pairing, "L(f g)"))
    p.add_argument("f")
    p.add_argument("g")

    em = group("emap", "the map E and image membership")
    p = with_n(cmd(em, "apply", cmd_emap_apply, "E(f), or D(h1..hn) with --D"))
    p.add_argument("polys", nargs="+")
    p.add_argument("--D", action="store_true", help="apply sum (x_i - d/dz_i) h_i instead")
    p = with_n(cmd(em, "member", cmd_emap_member, "is f in the image of D"))
    p.add_argument("f")
    p.add_argument("--witness", action="store_true", help="also search for a bounded preimage")
    p = with_n(cmd(em, "screen", cmd_emap_screen, "Newton polyhedron screening"))
    p.add_argument("f")
    p.add_argument("--m-max", type=int)
    p = with_n(cmd(em, "m2probe", cmd_emap_m2probe, "E(f^m g) = 0 table"))
    p.add_argument("f")
    p.add_argument("-g", action="append", required=True, help="monomial g (repeatable)")
    p.add_argument("--m-start", type=int, default=1)
    p.add_argument("--m-max", type=int)

    im = group("imd1", "univariate image over Q[a]")
    cmd(im, "criterion", cmd_imd1_criterion, "closed-form membership test").add_argument("f")
    cmd(im, "witness", cmd_imd1_witness, "explicit preimage h").add_argument("f")
    p = cmd(im, "scaledL", cmd_imd1_scaledL, "membership of g(a z)")
    p.add_argument("g")
    p.add_argument("-N", type=int)

    cp = group("charp", "characteristic p over F_p[t][z]")
    p = cmd(cp, "syzygy", cmd_charp_syzygy, "Koszul syzygy of (g1..gn)")
    p.add_argument("-p", type=int, required=True)
    p.add_argument("-n", type=int)
    p.add_argument("g", nargs="+")
    p = cmd(cp, "frobenius", cmd_charp_frobenius, "preimage of t_i^p z^r")
    p.add_argument("-p", type=int, required=True)
    p.add_argument("-n", type=int)
    p.add_argument("-i", type=int, default=1, help="1-based index")
    p.add_argument("-r", required=True, help="exponent vector, e.g. 1,0")
    p = cmd(cp, "p2verify", cmd_charp_p2verify, "witness for f^m g with m >= p^2")
    p.add_argument("-p", type=int, required=True)
    p.add_argument("-n", type=int)
    p.add_argument("-m", type=int)
    p.add_argument("f")
    p.add_argument("g")
    p = cmd(cp, "degenerate", cmd_charp_degenerate, "the a = 0 case")
    p.add_argument("-p", type=int, required=True)
    p.add_argument("--degree", type=int)

    cs = group("cases", "certified special cases")
    p = with_n(cmd(cs, "twomono", cmd_cases_twomono, "two-monomial polynomials"))
    p.add_argument("M1")
    p.add_argument("M2")
    with_n(cmd(cs, "monounit", cmd_cases_monounit, "monomial times unit")).add_argument("f")
    p = with_n(cmd(cs, "smallest", cmd_cases_smallest, "smallest-term shape"))
    p.add_argument("f")
    p.add_argument("--var", type=int, help="1-based variable index")
    p.add_argument("-m", type=int)
    p = cmd(cs, "gapseries", cmd_cases_gapseries, "first nonzero a_(mr) of 1/S")
    p.add_argument("-S", required=True, help="coefficients of S, e.g. 1,-1")
    p.add_argument("-r", type=int, required=True)
    p.add_argument("-N", type=int)
    cmd(cs, "congruence", cmd_cases_congruence, "the Wilson-type congruence").add_argument("-p", type=int, required=True)
    p = cmd(cs, "quadratic", cmd_cases_quadratic, "binary quadratic forms")
    for name in ("c20", "c11", "c02"):
        p.add_argument(name, type=int)
    p.add_argument("--m-max", type=int, default=4)
    p = cmd(cs, "powersum", cmd_cases_powersum, "sums of d-th powers")
    p.add_argument("-c", required=True, help="coefficients, e.g. 1,1")
    p.add_argument("-d", type=int, required=True)
    p.add_argument("-m", type=int)
    p = cmd(cs, "linform", cmd_cases_linform, "powers of a linear form")
    p.add_argument("-c", required=True)
    p.add_argument("-r", type=int, default=1)
    p.add_argument("--m-max", type=int, default=6)

    se = group("search", "lattice search for vanishing profiles")
    p = cmd(se, "run", cmd_search_run, "start a search")
    p.add_argument("--spec", help="flat key = value spec file")
    p.add_argument("-n", type=int)
    p.add_argument("--support", help="comma separated monomials")
    p.add_argument("--c-max", type=int, default=1)
    p.add_argument("--coeffs", help="explicit coefficient list, e.g. -2,-1,1,2")
    p.add_argument("--m-max", type=int)
    p.add_argument("--terms", type=int, help="use every subset of the support of this size")
    p.add_argument("--dedupe", action="store_true")
    p.add_argument("--out", required=True)
    p.add_argument("--limit", type=int, help="stop after this many records")
    p = cmd(se, "resume", cmd_search_resume, "continue an interrupted search")
    p.add_argument("--out", required=True)
    p.add_argument("--limit", type=int)

    p = groups.add_parser("selftest", help="run the invariant suite", parents=[common])
    p.set_defaults(func=cmd_selftest)
    p.add_argument("--scale", type=float, default=0.2)
    p.add_argument("--only", action="append")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args.cfg = load_config(args.config)
        args.func(args)
    except Failure as exc:
        print(f"violation: {exc}", file=sys.stderr)
        return 1
    except ConsistencyError as exc:
        print(f"violation: {exc}", file=sys.stderr)
        return 1
    except (MathieuLabError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
