"""Command-line interface.

Every subcommand prints human-readable text, or a JSON document with
``--json``. Exit codes: 0 success, 1 the property asked about is false,
2 usage or schema error, 3 resource limit, 4 internal invariant breach.
"""

import argparse
import json
import math
import sys

from . import coreset, folner, io, limits, render
from . import factor as fa
from . import lattice as lat
from . import recognizability as rc
from . import substitution as sb
from . import transform as tr
from .errors import ConstShapeError, UsageError


# ---------------------------------------------------------------- parsing

def parse_points(text):
    """'0,0;1,0' -> [(0, 0), (1, 0)]."""
    try:
        return [tuple(int(c) for c in item.split(",")) for item in text.split(";") if item.strip()]
    except ValueError:
        raise UsageError(f"cannot read points from {text!r}") from None


def parse_vector(text):
    pts = parse_points(text)
    if len(pts) != 1:
        raise UsageError(f"expected one vector, got {text!r}")
    return pts[0]


def pts(S):
    return [list(p) for p in sorted(S)]


def load_map(path, src, tgt):
    return fa.BlockMap.from_doc(io.read_json(path), src, tgt)


def load_pattern(path, sub):
    """A pattern document {"cells": [[coords..., symbol], ...]}."""
    doc = io.read_json(path)
    cells = {}
    for i, row in enumerate(doc.get("cells", [])):
        *p, s = row
        if s not in sub.index:
            raise UsageError(f"cells[{i}]: unknown symbol {s!r}")
        cells[tuple(int(c) for c in p)] = sub.index[s]
    return sb.Pattern(cells)


def pattern_doc(pattern, names):
    return {"cells": [list(p) + [names[a]] for p, a in sorted(pattern.cells.items())]}


# --------------------------------------------------------------- commands

def cmd_validate(a):
    sub = io.load(a.file)
    rep = sb.validate(sub, check_folner=not a.no_folner)
    text = "\n".join(f"{k}: {v}" for k, v in rep.items())
    return rep, text, 0 if rep.get("primitive") else 1


def cmd_folner(a):
    sub_or_sys = io.read_json(a.file)
    sys = io.substitution_from_doc(sub_or_sys).sys
    out = {}
    if a.B == "ball":
        B = None
    elif a.B == "K":
        B = coreset.compute_K(sys)[0]
    else:
        B = parse_points(a.B)
    v = folner.decide_folner(sys, B, mode=a.mode)
    out["verdict"] = v.to_dict()
    lines = [f"folner: {v.is_folner}", f"states: {v.state_count}  mode: {v.mode}"]
    if v.is_folner:
        lines.append("word: " + " ".join(str(tuple(f)) for f in v.word))
        lines.append(f"n: {v.n}  f: {v.witness_f}  verified: {v.witness_verified}")
    else:
        lines.append(f"states that cannot reach 0: {len(v.unreachable)}")
    if a.word:
        word = parse_points(a.word)
        K, _ = coreset.compute_K(sys)
        C = coreset.compute_C_LF(sys)
        f, ok = folner.verify_word(sys, lat.minkowski(C, K), word)
        out["forced_word"] = {"word": [list(w) for w in word],
                              "f": list(f), "n": len(word), "C_plus_K_in_Fn": ok}
        lines.append(f"forced word: f={f} n={len(word)} f+C+K in F_n: {ok}")
    if a.profile:
        vec = parse_vector(a.profile)
        ratios = folner.folner_profile(sys, vec, range(1, a.n + 1))
        out["profile"] = {"v": list(vec), "ratios": [str(r) for r in ratios]}
        lines.append("profile: " + " ".join(str(r) for r in ratios))
        if a.figure:
            render.figure_series(list(range(1, a.n + 1)), [float(r) for r in ratios], a.figure,
                                 "n", "|F_n Δ (v+F_n)| / |F_n|")
            out["figure"] = a.figure
    return out, "\n".join(lines), 0 if v.is_folner else 1


def cmd_kset(a):
    sys = io.load(a.file).sys
    K, j = coreset.compute_K(sys)
    doc = {"K": pts(K), "j_stable": j, "r_bar": sys.r_bar}
    return doc, f"K = {sorted(K)}\nj_stable = {j}", 0


def cmd_cset(a):
    sys = io.load(a.file).sys
    C = coreset.compute_C_LF(sys)
    zero = {(0,) * sys.d}
    inc = coreset.check_C_inclusions(sys, C, zero, lat.minkowski(sys.F1, sys.F1), a.n)
    doc = {"C": pts(C), "size": len(C), "inclusions": inc,
           "telescoping": coreset.check_C_telescoping(sys, C, a.n)}
    text = f"C ({len(C)} points) = {sorted(C)}\ninclusions: {inc}"
    return doc, text, 0


def _pattern_for(a, sub):
    what = a.what
    if what == "F1":
        return set(sub.sys.F1), None
    if what == "Fn":
        return set(lat.support_iterate(sub.sys, a.n)), None
    if what == "K":
        return sub.core()["K"], None
    if what == "C":
        return sub.core()["C"], None
    if what == "iterate":
        return sb.iterate(sub, a.letter or sub.alphabet[0], a.n), sub.alphabet
    if what == "germ":
        seeds = sb.periodic_seeds(sub)
        return seeds[a.index].pattern(), sub.alphabet
    if what == "window":
        seeds = sb.periodic_seeds(sub)
        return sb.expand_seed(sub, seeds[a.index], sb.box_window(sub.d, a.radius)), sub.alphabet
    raise UsageError(f"unknown object {what!r}")


def _emit(obj, names, fmt):
    if fmt == "ascii":
        return render.ascii_grid(obj, names)
    if fmt == "csv":
        return render.rows(obj, names)
    if fmt == "svg":
        return render.svg(obj, names)
    raise UsageError(f"unknown format {fmt!r}")


def cmd_render(a):
    sub = io.load(a.file)
    if a.what == "tile":
        tile = render.digit_tile(sub.sys, a.n)
        doc = {"points": tile.round(12).tolist()}
        text = "\n".join(",".join(f"{c:.12g}" for c in p) for p in tile)
        if a.figure:
            render.figure_tile(sub.sys, a.n, a.figure)
            doc["figure"] = a.figure
        return doc, text, 0
    obj, names = _pattern_for(a, sub)
    text = _emit(obj, names, a.format)
    doc = {"what": a.what, "format": a.format, "output": text}
    if a.figure:
        render.figure_pattern(obj, a.figure, names, title=a.what)
        doc["figure"] = a.figure
    return doc, text.rstrip("\n"), 0


def cmd_iterate(a):
    sub = io.load(a.file)
    p = sb.iterate(sub, a.letter or sub.alphabet[0], a.n)
    doc = pattern_doc(p, sub.alphabet)
    return doc, _emit(p, sub.alphabet, a.format).rstrip("\n"), 0


def cmd_seeds(a):
    sub = io.load(a.file)
    seeds = sb.periodic_seeds(sub, a.p_max)
    doc = {"K": pts(seeds[0].K) if seeds else [],
           "seeds": [{"period": s.period, "cells": sub.names(s.cells)} for s in seeds]}
    lines = [f"{len(seeds)} seeds over K = {list(seeds[0].K) if seeds else []}"]
    for s in seeds:
        lines.append(f"period {s.period}: {' '.join(sub.names(s.cells))}")
    return doc, "\n".join(lines), 0


def _support_arg(a, d):
    if a.support:
        return parse_points(a.support)
    if a.box is not None:
        lo, hi = a.box
        return sorted(lat.box_points(lo, hi, d))
    return sorted(lat.ball_points(a.radius, d))


def cmd_language(a):
    sub = io.load(a.file)
    P = _support_arg(a, sub.d)
    L = sb.language(sub, P)
    doc = {"support": pts(P), "count": len(L)}
    if a.list:
        doc["patterns"] = [sub.names(w) for w in L.words]
    text = f"{len(L)} patterns over {len(P)} points"
    if a.list:
        text += "\n" + "\n".join(" ".join(sub.names(w)) for w in L.words)
    return doc, text, 0


def cmd_complexity(a):
    sub = io.load(a.file)
    rs = list(range(0, a.r_max + 1))
    ps = [sb.complexity(sub, r) for r in rs]
    c = sb.complexity_constant(sub)
    e = sb.complexity_exponent(sub)
    holds = [sb.complexity_bound_holds(sub, r, p) for r, p in zip(rs, ps) if r >= 1]
    doc = {"r": rs, "p": ps, "constant": str(c), "exponent": e, "bound_holds": all(holds)}
    text = "r,p\n" + "\n".join(f"{r},{p}" for r, p in zip(rs, ps))
    text += f"\nexponent {e:.6g}, bound p(r) <= C r^e holds: {all(holds)}"
    if a.figure:
        render.figure_series(rs, ps, a.figure, "r", "p(r)", logy=True)
        doc["figure"] = a.figure
    return doc, text, 0 if all(holds) else 1


def cmd_repetitivity(a):
    sub = io.load(a.file)
    emp, blog = sb.repetitivity(sub, a.r, a.R_max)
    doc = {"r": a.r, "R_empirical": emp, "bound_log10": blog}
    return doc, f"R({a.r}) = {emp} (bound 10^{blog:.6g})", 0 if emp is not None else 3


def cmd_aperiodicity(a):
    sub = io.load(a.file)
    res = sb.aperiodicity_scan(sub, a.window, a.period_bound)
    doc = dict(res, periods=pts(res["periods"]))
    ok = not res["periods"]
    return doc, f"periods found: {res['periods'] or 'none'} (heuristic)", 0 if ok else 1


def _save_or_show(sub, path):
    doc = io.substitution_to_doc(sub)
    if path:
        io.save(sub, path)
    return doc


def cmd_change_support(a):
    sub = io.load(a.file)
    G1 = parse_points(a.support)
    new, pair = tr.change_support(sub, G1, a.window)
    doc = {"substitution": _save_or_show(new, a.out), "letters": new.n_letters,
           "B": pts(pair.checks.get("B", [])),
           "checks": {k: v for k, v in pair.checks.items() if k in ("roundtrip", "seed_transport", "seeds", "shortcut")},
           "verified_window": pair.verified_window}
    if a.maps:
        fwd = pair.forward.to_doc(a.file, "new")
        bwd = pair.backward.to_doc("new", a.file)
        with open(a.maps + ".forward.json", "w") as fh:
            fh.write(io.dumps(fwd))
        with open(a.maps + ".backward.json", "w") as fh:
            fh.write(io.dumps(bwd))
    text = f"{new.n_letters} letters, B = {doc['B']}\nchecks: {doc['checks']}"
    return doc, text, 0


def cmd_injectivize(a):
    sub = io.load(a.file)
    new, pair, steps = tr.injectivize(sub)
    doc = {"substitution": _save_or_show(new, a.out), "steps": steps,
           "coding": {sub.alphabet[k[0]]: new.alphabet[v] for k, v in pair.forward.table.items()}}
    return doc, f"{len(steps)} merge steps, {new.n_letters} letters", 0


def cmd_power(a):
    sub = io.load(a.file)
    new = sb.power(sub, a.n)
    doc = _save_or_show(new, a.out)
    return doc, io.dumps(doc).rstrip("\n") if not a.out else f"written to {a.out}", 0


def cmd_recog_bound(a):
    sub = io.load(a.file)
    c = rc.recog_bound(sub, a.variant)
    doc = c.to_doc()
    text = "\n".join([f"t = {c.t:.12g}", f"r_bar = {c.r_bar:.12g}", f"a = {c.a}",
                      f"R_bar = {c.R_bar}", f"n_bar = {c.n_bar}",
                      f"log10(bound) = {c.bound_log10}"])
    return doc, text, 0


def cmd_recog_empirical(a):
    sub = io.load(a.file)
    res = rc.empirical_recognizability(sub, a.window, a.R_max)
    doc = {"R_fail_below": res["R_fail_below"], "R_pass": res["R_pass"],
           "window_radius": a.window, "tested": [{"R": R, "ok": ok, **c} for R, ok, c in res["tested"]]}
    text = f"R_fail_below = {res['R_fail_below']}  R_pass = {res['R_pass']}"
    if a.power_law and res["R_pass"] is not None:
        pl = rc.power_law_check(sub, res["R_pass"], a.window)
        doc["power_law"] = pl
        text += f"\npower law: radius {pl['R2']} for ζ² holds: {pl['holds']}"
    return doc, text, 0 if res["R_pass"] is not None else 1


def cmd_desubstitute(a):
    sub = io.load(a.file)
    if a.pattern:
        w = load_pattern(a.pattern, sub)
    else:
        seed = sb.periodic_seeds(sub)[0]
        x = sb.expand_seed(sub, seed, sb.box_window(sub.d, a.radius))
        w = rc.shift_image(sub, x, parse_vector(a.shift) if a.shift else (0,) * sub.d)
    res = rc.desubstitute(sub, w, a.R)
    doc = {"j": list(res.j), "preimage": pattern_doc(res.preimage, sub.alphabet),
           "roundtrip": rc.roundtrip_ok(sub, w, res)}
    return doc, f"j = {res.j}, {len(res.preimage)} preimage cells, roundtrip {doc['roundtrip']}", 0


def cmd_verify_factor(a):
    src, tgt = io.load(a.source), io.load(a.target)
    bm = load_map(a.map, src, tgt)
    if a.f is not None:
        ok = fa.verify_commutation(bm, src, tgt, parse_vector(a.f), a.n)
        doc = {"n": a.n, "f": list(parse_vector(a.f)), "commutes": ok}
        return doc, f"commutes: {ok}", 0 if ok else 1
    cert = fa.certify_factor(bm, src, tgt, a.budget)
    doc = cert.to_doc(a.source, a.target)
    return doc, f"certified: n={cert.n} f={cert.f}", 0


def cmd_search_factor(a):
    src, tgt = io.load(a.source), io.load(a.target)
    P = _support_arg(a, src.d)
    certs = fa.search_factors(src, tgt, P, a.n_max)
    reps = fa.classes_modulo_shift(certs, src)
    doc = {"found": len(certs), "classes": len(reps),
           "certificates": [c.to_doc(a.source, a.target) for c in certs]}
    return doc, f"{len(certs)} maps, {len(reps)} classes modulo shift", 0 if certs else 1


def cmd_decide_factor(a):
    src, tgt = io.load(a.source), io.load(a.target)
    v = fa.decide_factorization(src, tgt, a.budget)
    doc = {"answer": v.answer, "searched_radius": v.searched_radius, "note": v.note,
           "certificate": v.certificate.to_doc(a.source, a.target) if v.certificate else None}
    text = f"{v.answer} (searched radius {v.searched_radius:.4g})"
    if v.note:
        text += f"\n{v.note}"
    return doc, text, {"yes": 0, "no": 1}.get(v.answer, 3)


def cmd_conjugacy(a):
    src, tgt = io.load(a.source), io.load(a.target)
    bm = load_map(a.map, src, tgt)
    inv = load_map(a.inverse, tgt, src) if a.inverse else None
    cert = fa.certify_factor(bm, src, tgt, a.budget)
    v = fa.check_conjugacy(cert, src, tgt, a.budget, inverse=inv)
    doc = {"conjugate": v.conjugate, "method": v.method, "power": v.power,
           "shift": list(v.shift) if v.shift is not None else None, "notes": v.notes,
           "inverse": v.inverse.to_doc(a.target, a.source) if v.inverse else None}
    return doc, f"conjugate: {v.conjugate} ({v.method})", 0 if v.conjugate else 1


def cmd_automorphisms(a):
    sub = io.load(a.file)
    P = _support_arg(a, sub.d)
    auts = fa.automorphism_census(sub, P, a.n_max)
    doc = {"classes": len(auts), "maps": [c.to_doc(a.file, a.file) for c in auts]}
    return doc, f"{len(auts)} automorphism classes modulo shift", 0


# ------------------------------------------------------------------ parser

def build_parser():
    p = argparse.ArgumentParser(prog="constshape", description=__doc__.splitlines()[0])
    p.add_argument("--json", action="store_true", help="print a JSON document")
    p.add_argument("--seed", type=int, default=None,
                   help="reserved; all algorithms are deterministic (recorded in output)")
    p.add_argument("--cap", action="append", default=[], metavar="NAME=VALUE",
                   help=f"override a resource cap ({', '.join(limits.DEFAULTS)})")
    sp = p.add_subparsers(dest="command", required=True)

    def sub(name, fn, help, file=True):
        q = sp.add_parser(name, help=help)
        if file:
            q.add_argument("file", help="substitution document or fixture name")
        q.set_defaults(fn=fn)
        return q

    def support_opts(q, radius=0.0):
        q.add_argument("--support", help="points 'x,y;x,y;...'")
        q.add_argument("--box", type=int, nargs=2, metavar=("LO", "HI"))
        q.add_argument("--radius", type=float, default=radius)

    q = sub("validate", cmd_validate, "validate a substitution")
    q.add_argument("--no-folner", action="store_true")
    q = sub("folner", cmd_folner, "decide the Følner property of (F_n)")
    q.add_argument("--mode", choices=["auto", "exact", "greedy"], default="auto")
    q.add_argument("--B", default="ball", help="'ball' (radius r̄), 'K', or points 'x,y;...'")
    q.add_argument("--word", help="verify a given word 'f;f;...' on C+K")
    q.add_argument("--profile", help="vector v for |F_n Δ (v+F_n)|/|F_n|")
    q.add_argument("--n", type=int, default=8)
    q.add_argument("--figure", help="write a PNG of the profile")
    sub("kset", cmd_kset, "the remainder set K")
    q = sub("cset", cmd_cset, "the covering set C and its inclusions")
    q.add_argument("--n", type=int, default=3)
    q = sub("iterate", cmd_iterate, "the pattern ζⁿ(a)")
    q.add_argument("--letter")
    q.add_argument("--n", type=int, default=2)
    q.add_argument("--format", choices=["ascii", "csv", "svg"], default="ascii")
    q = sub("render", cmd_render, "render supports, germs, iterates and tiles")
    q.add_argument("--what", choices=["F1", "Fn", "K", "C", "iterate", "germ", "window", "tile"],
                   default="F1")
    q.add_argument("--n", type=int, default=2)
    q.add_argument("--letter")
    q.add_argument("--index", type=int, default=0, help="seed index for germ/window")
    q.add_argument("--radius", type=int, default=8, help="window radius")
    q.add_argument("--format", choices=["ascii", "csv", "svg"], default="ascii")
    q.add_argument("--figure", help="also write a PNG figure")
    q = sub("seeds", cmd_seeds, "periodic germ seeds")
    q.add_argument("--p-max", type=int, default=2)
    q = sub("language", cmd_language, "patterns of the subshift over a support")
    support_opts(q, 1.0)
    q.add_argument("--list", action="store_true")
    q = sub("complexity", cmd_complexity, "pattern complexity p(r)")
    q.add_argument("--r-max", type=int, default=4)
    q.add_argument("--figure")
    q = sub("repetitivity", cmd_repetitivity, "empirical repetitivity and its bound")
    q.add_argument("--r", type=float, default=1.0)
    q.add_argument("--R-max", type=int, default=32)
    q = sub("aperiodicity-scan", cmd_aperiodicity, "look for periods on an expanded window")
    q.add_argument("--window", type=int, default=16)
    q.add_argument("--period-bound", type=float, default=8)
    q = sub("change-support", cmd_change_support, "conjugate substitution over a new domain")
    q.add_argument("--support", required=True, help="new fundamental domain 'x,y;...'")
    q.add_argument("--window", type=int, default=16)
    q.add_argument("--out", help="write the new substitution here")
    q.add_argument("--maps", help="prefix for the forward/backward block-map documents")
    q = sub("injectivize", cmd_injectivize, "merge letters with equal images")
    q.add_argument("--out")
    q = sub("power", cmd_power, "the substitution ζⁿ")
    q.add_argument("--n", type=int, default=2)
    q.add_argument("--out")
    q = sub("recog-bound", cmd_recog_bound, "the computable recognizability bound")
    q.add_argument("--variant", choices=["theorem", "prop"], default="theorem")
    q = sub("recog-empirical", cmd_recog_empirical, "empirical recognizability radius")
    q.add_argument("--window", type=int, default=32)
    q.add_argument("--R-max", type=int, default=16)
    q.add_argument("--power-law", action="store_true")
    q = sub("desubstitute", cmd_desubstitute, "write a window as S^j ζ(x')")
    q.add_argument("--pattern", help="pattern document; default: a shifted seed image")
    q.add_argument("--radius", type=int, default=6)
    q.add_argument("--shift")
    q.add_argument("--R", type=int, default=2)

    def pair(q, with_map=True):
        if with_map:
            q.add_argument("map", help="block-map document")
        q.add_argument("source")
        q.add_argument("target")

    q = sub("verify-factor", cmd_verify_factor, "verify or certify a block map", file=False)
    pair(q)
    q.add_argument("--n", type=int, default=1)
    q.add_argument("--f", help="shift vector; without it, search (n, f) up to --budget")
    q.add_argument("--budget", type=int, default=3)
    q = sub("search-factor", cmd_search_factor, "search block maps with a given support", file=False)
    pair(q, False)
    support_opts(q, 0.0)
    q.add_argument("--n-max", type=int, default=2)
    q = sub("decide-factor", cmd_decide_factor, "bounded factorization search", file=False)
    pair(q, False)
    q.add_argument("--budget", type=int, default=2)
    q = sub("conjugacy", cmd_conjugacy, "decide whether a factor map is invertible", file=False)
    pair(q)
    q.add_argument("--inverse", help="candidate inverse block-map document")
    q.add_argument("--budget", type=int, default=2)
    q = sub("automorphisms", cmd_automorphisms, "automorphisms modulo shift")
    support_opts(q, 0.0)
    q.add_argument("--n-max", type=int, default=2)
    return p


def _apply_caps(items):
    for item in items:
        name, _, val = item.partition("=")
        if name not in limits.DEFAULTS:
            raise UsageError(f"unknown cap {name!r}")
        try:
            limits.set_cap(name, int(val))
        except ValueError:
            raise UsageError(f"cap {name!r} needs an integer value") from None


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        seq = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [_jsonable(v) for v in seq]
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    return obj


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2
    try:
        _apply_caps(args.cap)
        doc, text, code = args.fn(args)
    except ConstShapeError as e:
        doc = {"command": args.command, "error": type(e).__name__, "message": str(e)}
        if args.json:
            print(json.dumps(doc, indent=2))
        else:
            print(f"error ({type(e).__name__}): {e}", file=sys.stderr)
        return e.exit_code
    finally:
        limits.reset_caps()
    if args.json:
        out = {"command": args.command, "seed": args.seed, "exit_code": code}
        out.update(_jsonable(doc))
        print(json.dumps(out, indent=2))
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
