"""Command-line front end: one verb per capability, JSON in, JSON out.

Elements travel as the JSON documents produced by core.to_json_dict (shape,
backend, nested [re, im] entries).  Every verb prints a single JSON payload
to standard output.  Exit codes: 0 on success, 2 when an emitted report has
"pass": false (the report is still printed), 1 on input errors with a
diagnostic on standard error.

The default equality/rank tolerance can be set with the WSTARKIT_TOLERANCE
environment variable; --tolerance overrides it per call.  --backend converts
loaded elements to the float ("f64") or exact Gaussian-rational ("exact")
backend before the operation.
"""
from __future__ import annotations

import argparse
import inspect
import json
import os
import sys
from fractions import Fraction

from . import atlas, car, core, cuntz, gns, groupoid, lattice, poisson, \
    semigroups, verify
from .core import Element
from .exact import QI
from .groupoid import Functional
from .poisson import CotangentElement, ScalarField, TangentElement

ENV_TOLERANCE = "WSTARKIT_TOLERANCE"


class CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(message)


def _load_element(path: str, backend=None) -> Element:
    if path == "-":
        data = sys.stdin.read()
    else:
        with open(path) as fh:
            data = fh.read()
    x = core.loads(data)
    return _to_backend(x, backend)


def _to_backend(x: Element, backend) -> Element:
    if backend is None or backend == x.backend:
        return x
    if backend == core.F64:
        return x.as_float()
    blocks = []
    for b in x.blocks:
        rows = []
        for i in range(b.shape[0]):
            rows.append([QI(Fraction(b[i, j].real), Fraction(b[i, j].imag))
                         for j in range(b.shape[1])])
        blocks.append(rows)
    return Element(blocks, core.QQI)


def _backend_arg(name):
    if name is None:
        return None
    return {"f64": core.F64, "exact": core.QQI}[name]


def _tolerance(args):
    val = getattr(args, "tolerance", None)
    if val is None:
        env = os.environ.get(ENV_TOLERANCE)
        val = float(env) if env else None
    if val is None:
        return None
    return core.ToleranceConfig(eps_eq=val, eps_rank=val)


def _matrix_json(m) -> dict:
    return {"re": [[float(v.real) for v in row] for row in m],
            "im": [[float(v.imag) for v in row] for row in m]}


def _complex_json(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def _emit(payload) -> int:
    print(json.dumps(payload, indent=2, sort_keys=True))
    if isinstance(payload, dict) and payload.get("pass") is False:
        return 2
    return 0


def _shape_arg(text):
    return tuple(int(t) for t in text.split(",") if t)


# --- verb handlers ----------------------------------------------------------

def _do_polar(args, tol, backend):
    x = _load_element(args.x, backend)
    u, absx = core.polar_decompose(x, tol)
    return {"u": core.to_json_dict(u), "absx": core.to_json_dict(absx)}


def _do_supports(args, tol, backend):
    x = _load_element(args.x, backend)
    return {"left": core.to_json_dict(core.left_support(x, tol)),
            "right": core.to_json_dict(core.right_support(x, tol)),
            "rank": list(core.rank_vector(x, tol))}


def _do_compose(args, tol, backend):
    x = _load_element(args.x, backend)
    y = _load_element(args.y, backend)
    return {"product": core.to_json_dict(groupoid.compose(x, y, tol).elem)}


def _do_inverse(args, tol, backend):
    x = _load_element(args.x, backend)
    return {"inverse": core.to_json_dict(groupoid.groupoid_inverse(x, tol).elem)}


def _do_inner_act(args, tol, backend):
    u = _load_element(args.u, backend)
    x = _load_element(args.x, backend)
    return {"result": core.to_json_dict(groupoid.inner_action(u, x, tol))}


def _do_predual_act(args, tol, backend):
    a = _load_element(args.u, backend)
    om = Functional(_load_element(args.rho, backend))
    if args.action == "inner":
        out = groupoid.I_star(a, om, tol)
    elif args.action == "left":
        out = groupoid.L_star(a, om)
    else:
        out = groupoid.R_star(a, om)
    return {"density": core.to_json_dict(out.density)}


def _do_lattice(args, tol, backend):
    p = _load_element(args.p, backend)
    q = _load_element(args.q, backend)
    if args.op == "meet":
        return {"projection": core.to_json_dict(lattice.meet(p, q, tol))}
    if args.op == "join":
        return {"projection": core.to_json_dict(lattice.join(p, q, tol))}
    if args.op == "equiv":
        ok, witness = lattice.mvn_equivalent(p, q, tol)
        out = {"equivalent": ok}
        if witness is not None:
            out["witness"] = core.to_json_dict(witness)
        return out
    rp = lattice.orbit_invariant(p, tol)
    rq = lattice.orbit_invariant(q, tol)
    return {"order": lattice.orbit_order(rp, rq),
            "invariants": [list(rp), list(rq)]}


def _do_closure(args, tol, backend):
    gens = [_load_element(f, backend) for f in args.generators]
    S = semigroups.generate_closure(gens, cap=args.cap)
    out = S.to_json_dict()
    out["size"] = S.size
    out["idempotents"] = len(S.idempotent_indices())
    if S.counterexample is not None:
        kind, idx = S.counterexample
        out["counterexample"] = {"kind": kind, "indices": list(idx)}
    return out


def _do_check_isg(args, tol, backend):
    gens = [_load_element(f, backend) for f in args.generators]
    S = semigroups.generate_closure(gens, cap=args.cap)
    ok, witness = semigroups.check_inverse_semigroup(S)
    report = {"check": "inverse-semigroup", "params": {"cap": args.cap},
              "seed": args.seed, "size": S.size, "closed": S.flags["closed"],
              "max_defect": 0.0 if ok else 1.0, "pass": ok, "witness": None}
    if witness is not None:
        report["witness"] = {"kind": witness[0], "indices": list(witness[1])}
    return report


def _do_monogenic_nf(args, tol, backend):
    form = semigroups.monogenic_normal_form(args.word)
    k, l, m = semigroups.gluskin_form(args.word)
    j, kk = semigroups.bicyclic_form(args.word)
    return {"p": form.p, "q": form.q, "power": form.power,
            "word": form.word(), "gluskin": [k, l, m],
            "bicyclic": [j, kk]}


def _do_cuntz_mul(args, tol, backend):
    x = cuntz.cuntz_loads(args.x, args.n)
    y = cuntz.cuntz_loads(args.y, args.n)
    prod = cuntz.cuntz_mul(x, y)
    out = {"product": cuntz.cuntz_dumps(prod)}
    if args.n == 1 and not prod.zero:
        out["exponents"] = list(cuntz.toeplitz_pair(prod))
    return out


def _do_car_mul(args, tol, backend):
    x = car.car_loads(args.x, args.n)
    y = car.car_loads(args.y, args.n)
    return {"product": car.car_dumps(car.car_mul(x, y))}


def _do_car_verify(args, tol, backend):
    rep = car.car_axiom_check(args.n, args.max_len)
    rep["seed"] = args.seed
    return rep


def _do_gns(args, tol, backend):
    rho = _load_element(args.rho, backend)
    sp = gns.gns_space(gns.State(rho))
    return {"dim": sp.dim, "spanning_vectors": len(sp.basis),
            "support": core.to_json_dict(sp.state.support)}


def _do_rep_phi(args, tol, backend):
    u = _load_element(args.u, backend)
    rho = _load_element(args.rho, backend)
    sp = gns.gns_space(gns.State(rho))
    phi, tgt = gns.groupoid_rep_phi(u, sp)
    return {"matrix": _matrix_json(phi),
            "target_density": core.to_json_dict(tgt.state.density),
            "dims": [tgt.dim, sp.dim]}


def _do_commutant(args, tol, backend):
    states = [gns.State(_load_element(f, backend)) for f in args.states]
    spaces = [gns.gns_space(s) for s in states]
    if args.arrow is not None:
        u = _load_element(args.arrow, backend)
        phi, _ = gns.groupoid_rep_phi(u, spaces[args.src],
                                      tgt=spaces[args.tgt])
        op = gns.embed_fiber_map(phi, spaces, args.src, args.tgt)
        kind = "fiber-map"
    elif args.element is not None:
        op = gns.direct_sum_rep(_load_element(args.element, backend), spaces)
        kind = "represented-element"
    else:
        raise CliError("commutant needs --arrow (with --src/--tgt) or --element")
    ok = gns.commutant_check(op, spaces)
    return {"check": "commutant", "params": {"kind": kind,
                                             "states": len(spaces)},
            "seed": args.seed, "max_defect": 0.0 if ok else 1.0, "pass": ok}


def _do_chart(args, tol, backend):
    p = _load_element(args.p, backend)
    if args.point is not None:
        q = _load_element(args.point, backend)
        return {"y": core.to_json_dict(atlas.chart_phi(p, q, tol))}
    if args.coord is not None:
        y = _load_element(args.coord, backend)
        return {"q": core.to_json_dict(atlas.chart_phi_inv(p, y, tol))}
    raise CliError("chart needs --point (projection) or --coord (coordinate)")


def _do_transition(args, tol, backend):
    p = _load_element(args.p, backend)
    p2 = _load_element(args.p2, backend)
    y = _load_element(args.y, backend)
    return {"y": core.to_json_dict(atlas.lattice_transition(p, p2, y, tol))}


def _do_poisson_bracket(args, tol, backend):
    a = _load_element(args.a, backend)
    b = _load_element(args.b, backend)
    om = Functional(_load_element(args.omega, backend))
    val = poisson.lie_poisson_bracket(ScalarField.linear(a),
                                      ScalarField.linear(b), om)
    return {"value": _complex_json(val)}


def _do_jacobi(args, tol, backend):
    elems = [_load_element(f, backend) for f in (args.a, args.b, args.c)]
    om = Functional(_load_element(args.omega, backend))
    if args.fd:
        fields = [ScalarField(lambda o, e=e: o.pair(e)) for e in elems]
    else:
        fields = [ScalarField.linear(e) for e in elems]
    return {"defect": float(poisson.jacobi_defect(*fields, om))}


def _tg_arrow(args, backend):
    return TangentElement(_load_element(args.g, backend),
                          _load_element(args.a, backend))


def _do_tg(args, tol, backend):
    if args.op == "identity":
        e = poisson.tg_identity(_load_element(args.g, backend))
        return {"base": core.to_json_dict(e.base),
                "vec": core.to_json_dict(e.vec)}
    if args.op == "compose":
        x = _tg_arrow(args, backend)
        y = TangentElement(_load_element(args.g2, backend),
                           _load_element(args.a2, backend))
        z = poisson.tg_compose(x, y)
        return {"base": core.to_json_dict(z.base),
                "vec": core.to_json_dict(z.vec)}
    x = _tg_arrow(args, backend)
    if args.op == "source":
        return {"value": core.to_json_dict(poisson.tg_source(x))}
    if args.op == "target":
        return {"value": core.to_json_dict(poisson.tg_target(x))}
    z = poisson.tg_inverse(x)
    return {"base": core.to_json_dict(z.base), "vec": core.to_json_dict(z.vec)}


def _ctg_arrow(args, backend):
    return CotangentElement(_load_element(args.g, backend),
                            _load_element(args.f, backend))


def _do_ctg(args, tol, backend):
    if args.op == "identity":
        e = poisson.ctg_identity(Functional(_load_element(args.g, backend)))
        return {"base": core.to_json_dict(e.base),
                "codensity": core.to_json_dict(e.codensity)}
    if args.op == "compose":
        x = _ctg_arrow(args, backend)
        y = CotangentElement(_load_element(args.g2, backend),
                             _load_element(args.f2, backend))
        z = poisson.ctg_compose(x, y)
        return {"base": core.to_json_dict(z.base),
                "codensity": core.to_json_dict(z.codensity)}
    x = _ctg_arrow(args, backend)
    if args.op == "source":
        return {"density": core.to_json_dict(poisson.ctg_source(x).density)}
    if args.op == "target":
        return {"density": core.to_json_dict(poisson.ctg_target(x).density)}
    z = poisson.ctg_inverse(x)
    return {"base": core.to_json_dict(z.base),
            "codensity": core.to_json_dict(z.codensity)}


def _do_lambda(args, tol, backend):
    g = _load_element(args.g, backend)
    v = _load_element(args.v, backend)
    if args.predual:
        out = poisson.lambda_star_immersion(CotangentElement(g, v))
        return {"arrow": core.to_json_dict(out.g),
                "point_density": core.to_json_dict(out.r.density)}
    out = poisson.lambda_immersion(TangentElement(g, v))
    return {"arrow": core.to_json_dict(out.g),
            "point": core.to_json_dict(out.r)}


def _strip_timing(rep):
    """Drop wall-clock fields so identical argv+seed give identical bytes."""
    if isinstance(rep, dict):
        return {k: _strip_timing(v) for k, v in rep.items()
                if k != "elapsed_s"}
    if isinstance(rep, list):
        return [_strip_timing(v) for v in rep]
    return rep


def _do_verify(args, tol, backend):
    kwargs = {}
    if args.samples is not None:
        kwargs["samples"] = args.samples
    if args.seed is not None:
        kwargs["seed"] = args.seed
    if args.tolerance is not None:
        kwargs["tol"] = args.tolerance
    if args.shape:
        kwargs["shapes"] = [_shape_arg(s) for s in args.shape]
    if args.points is not None:
        kwargs["points"] = args.points
    if args.depth is not None:
        kwargs["depth"] = args.depth
    if args.max_weight is not None:
        kwargs["max_weight"] = args.max_weight

    if args.suite == "all":
        suites = {}
        worst = 0.0
        ok = True
        for name, fn in verify.SUITES.items():
            accepted = set(inspect.signature(fn).parameters)
            rep = fn(**{k: v for k, v in kwargs.items() if k in accepted})
            suites[name] = _strip_timing(rep)
            worst = max(worst, rep["max_defect"])
            ok = ok and rep["pass"]
        return {"check": "all", "params": {"suites": sorted(suites)},
                "seed": args.seed, "max_defect": worst, "pass": ok,
                "suites": suites}

    if args.suite not in verify.SUITES:
        raise CliError("unknown suite %r; available: %s"
                       % (args.suite, ", ".join(sorted(verify.SUITES))))
    fn = verify.SUITES[args.suite]
    accepted = set(inspect.signature(fn).parameters)
    unknown = sorted(set(kwargs) - accepted)
    if unknown:
        raise CliError("suite %r does not take %s"
                       % (args.suite, ", ".join(unknown)))
    return _strip_timing(fn(**kwargs))


# --- parser ------------------------------------------------------------------

def _build_parser() -> _Parser:
    common = _Parser(add_help=False)
    common.add_argument("--tolerance", type=float, default=None,
                        help="equality/rank tolerance (default: env %s or "
                             "built-in)" % ENV_TOLERANCE)
    common.add_argument("--backend", choices=["f64", "exact"], default=None,
                        help="convert loaded elements to this backend")
    common.add_argument("--seed", type=int, default=0,
                        help="seed for randomized sampling")

    p = _Parser(prog="wstarkit", description=__doc__,
                formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="verb", required=True)

    def verb(name, handler, help_text):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        sp.set_defaults(handler=handler)
        return sp

    sp = verb("polar", _do_polar, "polar decomposition x = u|x|")
    sp.add_argument("x")

    sp = verb("supports", _do_supports, "left/right support projections")
    sp.add_argument("x")

    sp = verb("compose", _do_compose, "groupoid product (source = target)")
    sp.add_argument("x")
    sp.add_argument("y")

    sp = verb("inverse", _do_inverse, "groupoid inverse (pseudoinverse)")
    sp.add_argument("x")

    sp = verb("inner-act", _do_inner_act, "inner action x y iota(x)")
    sp.add_argument("u")
    sp.add_argument("x")

    sp = verb("predual-act", _do_predual_act,
              "action on a functional's density")
    sp.add_argument("u")
    sp.add_argument("rho")
    sp.add_argument("--action", choices=["inner", "left", "right"],
                    default="inner")

    sp = verb("lattice", _do_lattice, "projection lattice operations")
    sp.add_argument("op", choices=["meet", "join", "equiv", "orbit-order"])
    sp.add_argument("p")
    sp.add_argument("q")

    sp = verb("closure", _do_closure, "multiplicative *-closure of generators")
    sp.add_argument("generators", nargs="+")
    sp.add_argument("--cap", type=int, default=semigroups.CLOSURE_CAP)

    sp = verb("check-isg", _do_check_isg,
              "closure + inverse-semigroup axioms")
    sp.add_argument("generators", nargs="+")
    sp.add_argument("--cap", type=int, default=semigroups.CLOSURE_CAP)

    sp = verb("monogenic-nf", _do_monogenic_nf,
              "normal form of a word in letters u and U (= u*)")
    sp.add_argument("word")

    sp = verb("cuntz-mul", _do_cuntz_mul, "product of two isometry words")
    sp.add_argument("x")
    sp.add_argument("y")
    sp.add_argument("--n", type=int, required=True)

    sp = verb("car-mul", _do_car_mul, "product of two fermionic words")
    sp.add_argument("x")
    sp.add_argument("y")
    sp.add_argument("--n", type=int, required=True)

    sp = verb("car-verify", _do_car_verify,
              "fermionic word calculus vs matrix realization")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--max-len", type=int, default=3)

    sp = verb("gns", _do_gns, "fiber data of a state")
    sp.add_argument("rho")

    sp = verb("rep-phi", _do_rep_phi, "fiber map of an arrow at a state")
    sp.add_argument("u")
    sp.add_argument("rho")

    sp = verb("commutant", _do_commutant,
              "commutation with the direct-sum representation")
    sp.add_argument("states", nargs="+")
    sp.add_argument("--arrow", default=None)
    sp.add_argument("--src", type=int, default=0)
    sp.add_argument("--tgt", type=int, default=0)
    sp.add_argument("--element", default=None)

    sp = verb("chart", _do_chart, "projection chart around p")
    sp.add_argument("p")
    sp.add_argument("--point", default=None, help="projection to map down")
    sp.add_argument("--coord", default=None, help="coordinate to map up")

    sp = verb("transition", _do_transition,
              "chart transition between base projections")
    sp.add_argument("p")
    sp.add_argument("p2")
    sp.add_argument("y")

    sp = verb("verify", _do_verify, "run a verification suite (or 'all')")
    sp.add_argument("suite")
    sp.add_argument("--samples", type=int, default=None)
    sp.add_argument("--shape", action="append", default=None,
                    help="block sizes, e.g. 2 or 2,3 (repeatable)")
    sp.add_argument("--points", type=int, default=None)
    sp.add_argument("--depth", type=int, default=None)
    sp.add_argument("--max-weight", type=int, default=None)

    sp = verb("poisson-bracket", _do_poisson_bracket,
              "bracket of two coordinate fields at a density")
    sp.add_argument("a")
    sp.add_argument("b")
    sp.add_argument("omega")

    sp = verb("jacobi", _do_jacobi,
              "cyclic bracket defect of three coordinate fields")
    sp.add_argument("a")
    sp.add_argument("b")
    sp.add_argument("c")
    sp.add_argument("omega")
    sp.add_argument("--fd", action="store_true",
                    help="force finite-difference gradients")

    sp = verb("tg", _do_tg, "tangent-pair groupoid operations")
    sp.add_argument("op", choices=["source", "target", "identity",
                                   "inverse", "compose"])
    sp.add_argument("g")
    sp.add_argument("a", nargs="?", default=None)
    sp.add_argument("g2", nargs="?", default=None)
    sp.add_argument("a2", nargs="?", default=None)

    sp = verb("ctg", _do_ctg, "covector-pair groupoid operations")
    sp.add_argument("op", choices=["source", "target", "identity",
                                   "inverse", "compose"])
    sp.add_argument("g")
    sp.add_argument("f", nargs="?", default=None)
    sp.add_argument("g2", nargs="?", default=None)
    sp.add_argument("f2", nargs="?", default=None)

    sp = verb("lambda", _do_lambda,
              "immersion into the conjugation action groupoid")
    sp.add_argument("g")
    sp.add_argument("v")
    sp.add_argument("--predual", action="store_true")

    return p


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        tol = _tolerance(args)
        backend = _backend_arg(args.backend)
        payload = args.handler(args, tol, backend)
    except CliError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1
    except (core.DomainError, core.ShapeError, core.BackendError,
            json.JSONDecodeError, OSError, ValueError, KeyError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1
    return _emit(payload)


if __name__ == "__main__":
    sys.exit(main())
