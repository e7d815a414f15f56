"""Command-line front end.

Exit codes: 0 success, 2 precondition violation (the violated mathematical
hypothesis is named), 3 inconclusive at the given bounds.  Envelopes are
deterministic JSON (no timings, no environment data) so identical inputs
yield byte-identical output; with HWKIT_CACHE set, envelopes are cached
content-addressed and written with atomic replace.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import tempfile
from fractions import Fraction

from . import __version__, suite as suite_mod
from .bsdata import (BFunction, bfunction_snc, bfunction_whom_isolated,
                     classify_pair, genlevel_bound, reduce as breduce,
                     weight_bounds, weighted_minimal_exponent)
from .errors import (HwkitError, InconclusiveAtBound, ParseError,
                     PreconditionError)
from .exactalg import (WeightVector, fmt_rational, mono_str, parse_rational,
                       poly_parse)
from .ppd import (gamma_ideal, hodge_on_weight, hodge_weight_interval21,
                  parse_annihilator_file, weight_module_generators,
                  weight_step_presentation)
from .snc import SncDivisor, snc_f0_ideal
from .vforacle import (Bounds, certify_bfunction, crosscheck_hodge_weight,
                       verify_bfunction)
from .whom import QuasiHomogeneousGerm, whom_hodge_weight, whom_weight_top


def _canonical_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def envelope(command: str, inputs: dict, outputs: dict,
             bounds: dict | None = None, certificates=None,
             provenance=None) -> dict:
    env = {"tool": "hwkit", "version": __version__, "command": command,
           "inputs": inputs, "outputs": outputs}
    if bounds is not None:
        env["bounds"] = bounds
    if certificates is not None:
        env["certificates"] = certificates
    if provenance is not None:
        env["provenance"] = provenance
    return env


def _cache_lookup(key: str):
    root = os.environ.get("HWKIT_CACHE")
    if not root:
        return None, None
    os.makedirs(root, exist_ok=True)
    path = os.path.join(root, key + ".json")
    if os.path.exists(path):
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read(), path
    return None, path


def _cache_store(path: str, text: str):
    if not path:
        return
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(path), suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except OSError:
        if os.path.exists(tmp):
            os.unlink(tmp)


def cached_run(command: str, payload: dict, json_mode: bool, compute) -> dict:
    """Serve the envelope from the content-addressed cache when possible;
    otherwise compute, store atomically, and emit."""
    key = _cache_key(command, payload)
    cached, path = _cache_lookup(key)
    if cached is not None:
        env = json.loads(cached)
        sys.stdout.write(cached) if json_mode else _pretty(env)
        return env
    env = compute()
    text = _canonical_json(env)
    if path:
        _cache_store(path, text)
    sys.stdout.write(text) if json_mode else _pretty(env)
    return env


def _pretty(env: dict):
    print(f"hwkit {env['command']}")
    for k, v in env["outputs"].items():
        print(f"  {k}: {json.dumps(v, sort_keys=True) if isinstance(v, (dict, list)) else v}")


def _cache_key(command: str, payload: dict) -> str:
    blob = _canonical_json({"command": command, "payload": payload,
                            "version": __version__})
    return hashlib.sha256(blob.encode()).hexdigest()


# ---------------------------------------------------------------------------
# shared option handling


def _bounds(args) -> Bounds:
    return Bounds(order=args.order, xdeg=args.xdeg, dt=args.dtord)


def _add_bounds(p, order=4, xdeg=12, dtord=6):
    p.add_argument("--order", type=int, default=order)
    p.add_argument("--xdeg", type=int, default=xdeg)
    p.add_argument("--dtord", type=int, default=dtord)


def _reduced_bfunction(args):
    """Route to the closed-form b-function: a monomial goes through the
    monomial table, otherwise weights are required for the quasi-homogeneous
    route.  Returns (reduced b-function, source description)."""
    if getattr(args, "exponents", None):
        a = tuple(int(x) for x in args.exponents.split(","))
        return breduce(bfunction_snc(a)), {"exponents": list(a)}
    if not args.poly:
        raise PreconditionError("need --exponents or --poly")
    dim = args.dim or _infer_dim(args.poly)
    f = poly_parse(args.poly, dim)
    if len(f.terms) == 1:
        a = next(iter(f.terms))
        return breduce(bfunction_snc(a)), {"exponents": list(a)}
    if not args.weights:
        raise PreconditionError(
            "non-monomial input needs --weights for the quasi-homogeneous "
            "route", hypothesis="f is monomial or weight-1 quasi-homogeneous")
    w = WeightVector.parse(args.weights)
    germ = QuasiHomogeneousGerm(f, w)
    b = bfunction_whom_isolated(f, w, germ.milnor)
    return breduce(b), {"poly": str(f), "weights": str(w)}


def _infer_dim(text: str) -> int:
    import re
    idx = [int(m[1:]) for m in re.findall(r"[xd]\d+", text)]
    return max(idx) if idx else 1


def _normalize_alpha(alpha: Fraction):
    """Shift alpha into (0,1]; the integer part is bookkeeping only."""
    shift = -((-alpha.numerator) // alpha.denominator) - 1  # ceil(alpha) - 1
    return alpha - shift, shift


# ---------------------------------------------------------------------------
# verbs


def cmd_snc(args) -> int:
    a = tuple(int(x) for x in args.exponents.split(","))
    d = SncDivisor(a)
    alpha = parse_rational(args.alpha)
    norm, shift = _normalize_alpha(alpha)
    if args.stratum:
        d = d.restrict_to_stratum(int(x) - 1 for x in args.stratum.split(","))
    m = d.m_alpha(norm)
    lmax = m if args.lmax == "auto" else min(int(args.lmax), m)
    rows = []
    for l in range(lmax + 1):
        gens = snc_f0_ideal(d, norm, l).to_json()
        for k in range(args.kmax + 1):
            rows.append({"k": k, "l": l, "generators": gens})
    outputs = {"alpha_normalized": fmt_rational(norm),
               "alpha_integer_shift": shift,
               "weight_top_offset": m, "rows": rows}
    payload = {"exponents": list(a), "alpha": fmt_rational(alpha),
               "kmax": args.kmax, "lmax": str(args.lmax),
               "stratum": args.stratum}
    cached_run("snc", payload, args.json,
               lambda: envelope("snc", payload, outputs))
    return 0


def cmd_whom(args) -> int:
    dim = args.dim or _infer_dim(args.poly)
    f = poly_parse(args.poly, dim)
    w = WeightVector.parse(args.weights)
    germ = QuasiHomogeneousGerm(f, w)
    alpha = parse_rational(args.alpha)
    pres = whom_hodge_weight(germ, alpha, args.k, args.l)
    outputs = {"milnor_basis": [mono_str(m) for m in germ.milnor],
               "milnor_number": germ.mu,
               "weight_top_offset": whom_weight_top(germ, alpha),
               "presentation": pres.to_json()}
    payload = {"poly": str(f), "weights": str(w),
               "alpha": fmt_rational(alpha), "k": args.k, "l": args.l}
    cached_run("whom", payload, args.json,
               lambda: envelope("whom", payload, outputs))
    return 0


def cmd_bfun(args) -> int:
    bred, source = _reduced_bfunction(args)
    # rebuild the unreduced function for reporting
    roots = dict(bred.roots)
    roots[Fraction(-1)] = roots.get(Fraction(-1), 0) + 1
    if getattr(args, "exponents", None) or (args.poly and
                                            len(poly_parse(args.poly, args.dim or _infer_dim(args.poly)).terms) == 1):
        prov = "closed-form-snc"
    else:
        prov = "closed-form-whom"
    b = BFunction(roots, provenance=prov)
    certs = None
    if args.verify:
        if args.poly:
            f = poly_parse(args.poly, args.dim or _infer_dim(args.poly))
        else:
            a = tuple(int(x) for x in args.exponents.split(","))
            from .exactalg import Polynomial
            f = Polynomial.monomial(a)
        b, cert = certify_bfunction(f, b, args.order, args.xdeg)
        certs = [cert.to_json()]
    payload = {"source": source, "verify": bool(args.verify)}
    cached_run("bfun", payload, args.json,
               lambda: envelope("bfun", payload,
                                {"bfunction": b.to_json(),
                                 "product": b.product_string()},
                                certificates=certs))
    return 0


def cmd_verify(args) -> int:
    if args.what != "bfun":
        raise PreconditionError(f"unknown verification target {args.what!r}")
    dim = args.dim or _infer_dim(args.poly)
    f = poly_parse(args.poly, dim)
    b = BFunction.parse(args.b)
    payload = {"poly": str(f), "b": b.product_string(),
               "order": args.order, "xdeg": args.xdeg,
               "escalate": args.escalate}

    def compute():
        order, xdeg = args.order, args.xdeg
        attempts = []
        for _ in range(args.escalate + 1):
            cert = verify_bfunction(f, b, order, xdeg)
            attempts.append(cert.to_json())
            if cert.is_member():
                break
            order, xdeg = order * 2, xdeg * 2
        return envelope("verify", payload,
                        {"certificate": attempts[-1], "attempts": attempts})

    env = cached_run("verify", payload, args.json, compute)
    verdict = env["outputs"]["certificate"]["verdict"]
    return 0 if verdict == "member" else 3


def cmd_classify(args) -> int:
    bred, source = _reduced_bfunction(args)
    alpha = parse_rational(args.alpha)
    cls = classify_pair(bred, alpha)
    a0 = weighted_minimal_exponent(bred, 0)
    payload = {"source": source, "alpha": fmt_rational(alpha)}
    outputs = {"classification": cls.to_json(),
               "reduced_bfunction": bred.product_string(),
               "minimal_exponent": fmt_rational(a0) if a0 is not None else None}
    cached_run("classify", payload, args.json,
               lambda: envelope("classify", payload, outputs))
    return 0


def cmd_bounds(args) -> int:
    bred, source = _reduced_bfunction(args)
    alpha = parse_rational(args.alpha)
    dim = args.dim
    if not dim:
        if getattr(args, "exponents", None):
            dim = len(args.exponents.split(","))
        else:
            dim = _infer_dim(args.poly)
    lo, hi = weight_bounds(bred, alpha, dim)
    gl = genlevel_bound(bred, alpha, args.l, dim, graded=False)
    glg = genlevel_bound(bred, alpha, args.l, dim, graded=True)
    payload = {"source": source, "alpha": fmt_rational(alpha),
               "dim": dim, "l": args.l}
    outputs = {"weight_bounds": [lo, hi], "genlevel_bound": gl,
               "genlevel_bound_graded": glg,
               "reduced_bfunction": bred.product_string()}
    cached_run("bounds", payload, args.json,
               lambda: envelope("bounds", payload, outputs))
    return 0


def cmd_crosscheck(args) -> int:
    alpha = parse_rational(args.alpha)
    bounds = _bounds(args)
    if args.source == "snc":
        obj = SncDivisor(tuple(int(x) for x in args.exponents.split(",")))
        name = str(obj)
    else:
        dim = args.dim or _infer_dim(args.poly)
        obj = QuasiHomogeneousGerm(poly_parse(args.poly, dim),
                                   WeightVector.parse(args.weights))
        name = str(obj.f)
    payload = {"source": args.source, "f": name,
               "alpha": fmt_rational(alpha), "k": args.k, "l": args.l,
               "bounds": bounds.to_json(), "escalate": args.escalate}

    def compute():
        b = bounds
        attempts = []
        for _ in range(args.escalate + 1):
            cert = crosscheck_hodge_weight(args.source, obj, alpha, args.k,
                                           args.l, b)
            attempts.append(cert.to_json())
            if cert.is_member():
                break
            b = b.doubled()
        return envelope("crosscheck", payload,
                        {"certificate": attempts[-1], "attempts": attempts},
                        bounds=bounds.to_json())

    env = cached_run("crosscheck", payload, args.json, compute)
    verdict = env["outputs"]["certificate"]["verdict"]
    return 0 if verdict == "member" else 3


def cmd_ppd(args) -> int:
    with open(args.input, "r", encoding="utf-8") as fh:
        text = fh.read()
    payload = {"input_sha": hashlib.sha256(text.encode()).hexdigest(),
               "l": args.l, "k": args.k,
               "bounds": {"order": args.order, "xdeg": args.xdeg,
                          "dt": args.dtord},
               "weight_only": args.weight_only, "interval21": args.interval21}

    def compute():
        inp = parse_annihilator_file(text, dim=args.dim)
        bounds = _bounds(args)
        _, meta = weight_module_generators(inp, args.l, bounds)
        wpres = weight_step_presentation(inp, args.l, bounds)
        outputs = {"weight_presentation": wpres.to_json(),
                   "meta": meta,
                   "gamma": gamma_ideal(inp).to_json(),
                   "gamma_w0": gamma_ideal(inp, 0).to_json()}
        provenance = ["conditional: primality asserted, not verified"] \
            if inp.pp_asserted else []
        if not args.weight_only:
            if args.interval21:
                pres = hodge_weight_interval21(inp, args.l, args.k, bounds)
            else:
                pres = hodge_on_weight(inp, args.l, args.k, bounds)
            from .vforacle import reduce_presentation
            pres = reduce_presentation(pres, inp.f, bounds)
            outputs["hodge_presentation"] = pres.to_json()
        return envelope("ppd", payload, outputs, bounds=bounds.to_json(),
                        provenance=provenance)

    cached_run("ppd", payload, args.json, compute)
    return 0


def cmd_suite(args) -> int:
    payload = {"profile": args.profile}
    env = cached_run("suite", payload, args.json,
                     lambda: envelope("suite", payload,
                                      suite_mod.run_suite(args.profile)))
    passed = env["outputs"]["passed"]
    if args.profile == "starved":
        return 3 if passed else 1
    return 0 if passed else 1


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hwkit")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="verb", required=True)

    def common(p):
        p.add_argument("--json", action="store_true")
        p.add_argument("--dim", type=int, default=None)

    p = sub.add_parser("snc", help="closed-form tables for monomial divisors")
    common(p)
    p.add_argument("--exponents", required=True)
    p.add_argument("--alpha", required=True)
    p.add_argument("--lmax", default="auto")
    p.add_argument("--kmax", type=int, default=2)
    p.add_argument("--stratum", default=None)
    p.set_defaults(func=cmd_snc)

    p = sub.add_parser("whom", help="weighted-homogeneous isolated "
                                    "singularity tables")
    common(p)
    p.add_argument("--poly", required=True)
    p.add_argument("--weights", required=True)
    p.add_argument("--alpha", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.set_defaults(func=cmd_whom)

    p = sub.add_parser("bfun", help="closed-form b-function data")
    common(p)
    p.add_argument("--exponents")
    p.add_argument("--poly")
    p.add_argument("--weights")
    p.add_argument("--verify", action="store_true")
    p.add_argument("--order", type=int, default=4)
    p.add_argument("--xdeg", type=int, default=8)
    p.set_defaults(func=cmd_bfun)

    p = sub.add_parser("verify", help="oracle verification")
    common(p)
    p.add_argument("what", choices=["bfun"])
    p.add_argument("--poly", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--order", type=int, default=4)
    p.add_argument("--xdeg", type=int, default=8)
    p.add_argument("--escalate", type=int, default=0,
                   help="doublings to offer on an inconclusive verdict")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("classify", help="singularity class of the pair")
    common(p)
    p.add_argument("--exponents")
    p.add_argument("--poly")
    p.add_argument("--weights")
    p.add_argument("--alpha", required=True)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("bounds", help="highest-weight and generating-level "
                                      "bounds")
    common(p)
    p.add_argument("--exponents")
    p.add_argument("--poly")
    p.add_argument("--weights")
    p.add_argument("--alpha", required=True)
    p.add_argument("--l", type=int, default=0)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("crosscheck", help="master cross-check of a closed "
                                          "form against the oracle")
    common(p)
    p.add_argument("--source", choices=["snc", "whom"], required=True)
    p.add_argument("--exponents")
    p.add_argument("--poly")
    p.add_argument("--weights")
    p.add_argument("--alpha", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--escalate", type=int, default=0,
                   help="doublings to offer on an inconclusive verdict")
    _add_bounds(p)
    p.set_defaults(func=cmd_crosscheck)

    p = sub.add_parser("ppd", help="annihilator-presentation route")
    common(p)
    p.add_argument("--input", required=True)
    p.add_argument("--l", type=int, default=0)
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--weight-only", action="store_true")
    p.add_argument("--interval21", action="store_true")
    _add_bounds(p, xdeg=10)
    p.set_defaults(func=cmd_ppd)

    p = sub.add_parser("suite", help="acceptance battery")
    common(p)
    p.add_argument("--profile", default="default",
                   choices=["default", "corrupted", "starved"])
    p.set_defaults(func=cmd_suite)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except PreconditionError as exc:
        print(f"hypothesis violated: {exc.hypothesis}", file=sys.stderr)
        return 2
    except InconclusiveAtBound as exc:
        print(f"inconclusive at bounds {exc.bounds}: {exc}", file=sys.stderr)
        return 3
    except HwkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
