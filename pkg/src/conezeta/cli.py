"""Command line interface: JSON jobs in, JSON reports out.

Commands:
    conezeta reduce <job.json>   symbolic reduction + numeric self-evaluation
    conezeta verify <job.json>   reduction plus comparison with direct summation

Flags: --precision <digits>, --trace <path>, --seed <u64>, --max-pieces <n>.
Exit codes: 0 pass, 2 verification fail, 3 validation error, 4 divergent.
"""

import argparse
import json
import sys
from fractions import Fraction

from .exact import LatticeCharacter, rational_to_str, rational_from_str
from .geometry import LinearForm
from .pipeline import reduce_cone_zeta, PieceLimitExceeded
from .polylog import DivergentResult
from .numeric import eval_zexpr, eval_cone_zeta, zexpr_zero_check

SCHEMA_VERSION = 1

EXIT_PASS = 0
EXIT_VERIFY_FAIL = 2
EXIT_VALIDATION = 3
EXIT_DIVERGENT = 4


class ValidationError(Exception):
    pass


def _expect_keys(obj, allowed, where):
    unknown = set(obj) - set(allowed)
    if unknown:
        raise ValidationError("unknown fields in %s: %s"
                              % (where, sorted(unknown)))


def _parse_rational(x, where):
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return rational_from_str(x)
        except Exception:
            raise ValidationError("bad rational %r in %s" % (x, where))
    raise ValidationError("expected integer or \"p/q\" string in %s" % where)


def parse_job(doc):
    """Validate a job document; returns a dict of parsed fields."""
    if not isinstance(doc, dict):
        raise ValidationError("job must be a JSON object")
    _expect_keys(doc, {"ambientDim", "cone", "forms", "character", "options"},
                 "job")
    for key in ("ambientDim", "cone", "forms"):
        if key not in doc:
            raise ValidationError("missing field %r" % key)
    m = doc["ambientDim"]
    if not isinstance(m, int) or m < 1:
        raise ValidationError("ambientDim must be a positive integer")
    cone = doc["cone"]
    _expect_keys(cone, {"generators"}, "cone")
    gens = cone.get("generators")
    if not isinstance(gens, list) or not gens:
        raise ValidationError("cone.generators must be a nonempty matrix")
    parsed = []
    for row in gens:
        if len(row) != m:
            raise ValidationError("generator arity != ambientDim")
        out_row = []
        for x in row:
            q = _parse_rational(x, "cone.generators")
            if q.denominator != 1:
                raise ValidationError("generators must be integer vectors")
            out_row.append(int(q))
        parsed.append(out_row)
    gens = parsed
    forms = doc["forms"]
    if not isinstance(forms, list) or not forms:
        raise ValidationError("forms must be a nonempty matrix")
    fms = []
    for row in forms:
        if len(row) != m:
            raise ValidationError("form arity != ambientDim")
        fms.append(LinearForm([_parse_rational(x, "forms") for x in row]))
    warnings = []
    if "character" in doc and doc["character"] is not None:
        ch = doc["character"]
        _expect_keys(ch, {"modulus", "exponents"}, "character")
        N = ch.get("modulus")
        exps = ch.get("exponents")
        if not isinstance(N, int) or N < 1:
            raise ValidationError("character.modulus must be a positive "
                                  "integer")
        if not isinstance(exps, list) or len(exps) != m:
            raise ValidationError("character.exponents must have length "
                                  "ambientDim")
        ident = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
        character = LatticeCharacter(ident, N, [int(e) for e in exps])
    else:
        warnings.append("missing character; defaulting to trivial")
        character = None
    options = doc.get("options") or {}
    _expect_keys(options, {"precision", "trace", "seed", "maxPieces"},
                 "options")
    for key in ("precision", "seed", "maxPieces"):
        if key in options and (not isinstance(options[key], int)
                               or options[key] < 0):
            raise ValidationError("options.%s must be a nonnegative integer"
                                  % key)
    if "trace" in options and not isinstance(options["trace"], str):
        raise ValidationError("options.trace must be a path string")
    # positivity of the forms on the closed cone (interior follows)
    for f in fms:
        vals = [f(g) for g in gens]
        if any(v < 0 for v in vals) or all(v == 0 for v in vals):
            raise ValidationError("POSITIVITY: form %s is not positive on "
                                  "the cone interior" % (list(map(
                                      rational_to_str, f.coeffs)),))
    return {"m": m, "generators": gens, "forms": fms,
            "character": character, "options": options, "warnings": warnings}


def _cyclo_json(c):
    return {"modulus": c.N,
            "coords": [rational_to_str(x) for x in c.coords]}


def _symbols_json(result):
    out = []
    for coeff, sym in result.symbols():
        entry = {"coefficient": _cyclo_json(coeff)}
        if sym is None:
            entry["symbol"] = None
        else:
            entry["symbol"] = {
                "ks": list(sym.ks),
                "eps": [{"order": e.order, "exp": e.exp} for e in sym.eps],
            }
        out.append(entry)
    return out


def _trace_json(trace):
    return {"steps": [{"rule": s["rule"],
                       "inputs": repr(s["inputs"]),
                       "outputs": repr(s["outputs"])}
                      for s in trace.steps]}


def run_job(job, mode, precision=None, trace_path=None, seed=0,
            max_pieces=None):
    """Execute a parsed job; returns (report dict, exit code)."""
    tol = 10.0 ** (-(precision if precision is not None else 6))
    tol = max(tol, 1e-10)
    result = reduce_cone_zeta(
        job["generators"], job["forms"], character=job["character"],
        check_zero=zexpr_zero_check(tol=max(tol, 1e-8)),
        max_pieces=max_pieces, collect_trace=trace_path is not None)
    sym = eval_zexpr(result.value)
    report = {
        "schemaVersion": SCHEMA_VERSION,
        "seed": seed,
        "warnings": job["warnings"],
        "symbolicValue": _symbols_json(result),
        "numericSymbolic": {"re": sym.value.real, "im": sym.value.imag,
                            "bound": sym.error},
        "numericDirect": None,
        "pass": None,
        "budgets": {"tolerance": tol},
        "stats": result.stats,
    }
    code = EXIT_PASS
    if mode == "verify":
        ref = eval_cone_zeta(job["generators"], job["forms"],
                             job["character"], radius=1000)
        diff = abs(sym.value - ref.value)
        budget = max(tol, 4 * (sym.error + ref.error))
        ok = diff <= budget
        report["numericDirect"] = {"re": ref.value.real, "im": ref.value.imag,
                                   "bound": ref.error}
        report["pass"] = bool(ok)
        report["budgets"]["difference"] = diff
        report["budgets"]["allowed"] = budget
        if not ok:
            code = EXIT_VERIFY_FAIL
    if trace_path is not None and result.trace is not None:
        with open(trace_path, "w") as fh:
            json.dump(_trace_json(result.trace), fh, indent=1, sort_keys=True)
    return report, code


def main(argv=None):
    ap = argparse.ArgumentParser(prog="conezeta")
    ap.add_argument("command", choices=["reduce", "verify"])
    ap.add_argument("job", help="path to a JSON job file")
    ap.add_argument("--precision", type=int, default=None,
                    help="digits of verification tolerance (default 6)")
    ap.add_argument("--trace", default=None, metavar="PATH",
                    help="write the reduction trace to PATH")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-pieces", type=int, default=None)
    args = ap.parse_args(argv)

    try:
        with open(args.job) as fh:
            doc = json.load(fh)
        job = parse_job(doc)
    except (OSError, json.JSONDecodeError, ValidationError) as e:
        print(json.dumps({"error": "VALIDATION", "message": str(e)},
                         sort_keys=True))
        return EXIT_VALIDATION
    # command-line flags override the job's own options block
    opts = job["options"]
    precision = args.precision if args.precision is not None \
        else opts.get("precision")
    trace_path = args.trace if args.trace is not None else opts.get("trace")
    seed = args.seed if args.seed != 0 else opts.get("seed", 0)
    max_pieces = args.max_pieces if args.max_pieces is not None \
        else opts.get("maxPieces")
    try:
        report, code = run_job(job, args.command, precision=precision,
                               trace_path=trace_path, seed=seed,
                               max_pieces=max_pieces)
    except DivergentResult as e:
        print(json.dumps({"error": "DIVERGENT", "message": str(e)},
                         sort_keys=True))
        return EXIT_DIVERGENT
    except (PieceLimitExceeded, ValueError) as e:
        print(json.dumps({"error": "VALIDATION", "message": str(e)},
                         sort_keys=True))
        return EXIT_VALIDATION
    print(json.dumps(report, indent=1, sort_keys=True))
    return code


if __name__ == "__main__":
    sys.exit(main())
