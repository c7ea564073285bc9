"""Command-line front end.

Every command emits a single JSON (default) or TSV document on stdout
and is byte-deterministic for a fixed command line.  Exit codes:
0 success, 2 validation failure, 3 computation failure (stabilization
or pole).  Numeric output is produced at a precision configurable with
--precision-bits or the AFFSAT_PRECISION_BITS environment variable.

lambda indices are given in simple-coroot coordinates (--lambda 1,0)
with an optional level (--level, the central slot) and delta coordinate
(--delta-coord).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

import mpmath as mp

from .checks import hecke_relation_report
from .errors import PoleError, PreconditionError, StabilizationError
from .qrat import QRat
from .rootdata import (LatticeVector, affine_positive_coroots, build_root_datum,
                       stabilizer_poincare, weyl_enumerate)
from .satake import (delta_affine, gk_point_count, gk_series, inverse_satake_coeffs,
                     macdonald_affine, macdonald_finite)
from .zeta import CurveZeta, tamagawa_affine, tamagawa_finite
from .eisenstein import (EisensteinParam, affine_ct_w_sum, borel_constant_term,
                         correction_prefactor, eisenstein_residue)
from .hecke import HeckeAlgebra, HeckeElement


def _num_str(x, digits):
    if isinstance(x, (int,)):
        return str(x)
    if isinstance(x, Fraction):
        return str(x)
    return mp.nstr(mp.mpmathify(x), digits, strip_zeros=False)


def _jsonify(obj, digits):
    """Recursively render mpmath numbers as fixed-precision strings."""
    if isinstance(obj, dict):
        return {k: _jsonify(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v, digits) for v in obj]
    if isinstance(obj, QRat):
        return obj.to_json()
    if isinstance(obj, (mp.mpf, mp.mpc)):
        return _num_str(obj, digits)
    if isinstance(obj, Fraction):
        return str(obj)
    return obj


def _emit(doc, fmt, digits):
    doc = _jsonify(doc, digits)
    if fmt == "json":
        sys.stdout.write(json.dumps(doc, sort_keys=True, ensure_ascii=False,
                                    indent=2, separators=(",", ": ")) + "\n")
    else:
        for line in _tsv_lines(doc, ()):
            sys.stdout.write(line + "\n")


def _tsv_lines(doc, prefix):
    if isinstance(doc, dict):
        for k in sorted(doc):
            yield from _tsv_lines(doc[k], prefix + (str(k),))
    elif isinstance(doc, list):
        for i, v in enumerate(doc):
            yield from _tsv_lines(v, prefix + (str(i),))
    else:
        yield "%s\t%s" % (".".join(prefix), doc)


def _parse_lambda(args, rank):
    if args.lam is None:
        fin = (0,) * rank
    else:
        fin = tuple(int(t) for t in args.lam.split(","))
        if len(fin) != rank:
            raise PreconditionError("cli", "dispatch",
                                    "--lambda needs %d coordinates" % rank)
    return LatticeVector(getattr(args, "level", 0) or 0, fin,
                         getattr(args, "delta_coord", 0) or 0)


def _parse_curve(text):
    if text is None:
        return None
    if text.startswith("@"):
        with open(text[1:], "r", encoding="utf-8") as fh:
            return CurveZeta.from_json(json.load(fh))
    return CurveZeta.from_json(json.loads(text))


def _series_json(ser):
    return ser.to_json()


# -- command handlers -------------------------------------------------------------


def _cmd_rootdata(args):
    datum = build_root_datum(args.type)
    doc = datum.to_json()
    if args.affine_coroots is not None:
        doc["affine_positive_coroots"] = [
            {"root": v.to_json(), "multiplicity": m}
            for v, m in affine_positive_coroots(datum, args.affine_coroots)]
    if args.weyl_length is not None:
        els = weyl_enumerate(datum, affine=args.affine, max_length=args.weyl_length)
        doc["weyl_elements"] = [{"word": list(w.word), "length": w.length}
                                for w in els]
    if args.stabilizer is not None:
        lam = LatticeVector(args.level or 0,
                            tuple(int(t) for t in args.stabilizer.split(",")),
                            0)
        doc["stabilizer_poincare"] = stabilizer_poincare(
            datum, lam, affine=args.affine).to_json()
    return doc


def _cmd_macdonald(args):
    datum = build_root_datum(args.type)
    lam = _parse_lambda(args, datum.rank)
    if args.affine:
        sph = macdonald_affine(datum, lam, N=args.N,
                               L=args.L, height_window=args.height_window)
        return {"formula": "mac-aff", "lambda": sph.lam.to_json(),
                "truncation": args.N, "shells": sph.report["shells_run"],
                "report": {k: v for k, v in sph.report.items()
                           if k != "shell_changes"},
                "series": _series_json(sph.series)}
    sph = macdonald_finite(datum, lam)
    return {"formula": "mac", "lambda": sph.lam.to_json(), "truncation": None,
            "shells": None, "series": _series_json(sph.series)}


def _cmd_kostka(args):
    datum = build_root_datum(args.type)
    lam = _parse_lambda(args, datum.rank)
    raw = inverse_satake_coeffs(datum, lam)
    norm = inverse_satake_coeffs(datum, lam, normalized=True)

    def table(coeffs):
        return [{"mu": mu.to_json(), "value": c.to_json()}
                for mu, c in sorted(coeffs.items(),
                                    key=lambda kv: (-sum(kv[0].finite), kv[0].finite))]
    return {"formula": "inverse-satake", "lambda": lam.to_json(),
            "raw": table(raw), "normalized": table(norm)}


def _cmd_delta(args):
    datum = build_root_datum(args.type)
    doc = {"formula": "delta", "type": args.type, "truncation": args.N}
    if args.mode in ("product", "both"):
        ser, _ = delta_affine(datum, args.N, "product")
        doc["product"] = _series_json(ser)
    if args.mode in ("sum", "both"):
        ser, rep = delta_affine(datum, args.N, "sum", L=args.L)
        doc["sum"] = _series_json(ser)
        doc["report"] = {k: v for k, v in rep.items() if k != "shell_changes"}
    if args.mode == "both":
        doc["agree"] = doc["product"] == doc["sum"]
    return doc


def _cmd_gk(args):
    datum = build_root_datum(args.type)
    if args.mode == "finite":
        ser = gk_series(datum, "finite", depth=args.depth)
    else:
        ser = gk_series(datum, "affine", N=args.N, finite_window=args.height_window)
    counts = []
    for mu in ser.support():
        gamma = -mu
        counts.append({"gamma": gamma.to_json(),
                       "size": datum.rho_aff_pairing(gamma),
                       "count": gk_point_count(datum, ser, gamma).to_json()})
    return {"formula": "gk", "mode": args.mode, "type": args.type,
            "truncation": args.N, "depth": args.depth,
            "series": _series_json(ser), "point_counts": counts}


def _cmd_hecke_check(args):
    datum = build_root_datum(args.type)
    rep = hecke_relation_report(datum, affine=args.affine, cases=args.cases,
                                seed=args.seed)
    if args.roundtrip:
        alg = HeckeAlgebra(datum, affine=args.affine)
        el = alg.x_t(LatticeVector((1 if args.affine else 0),
                                   (1,) * datum.rank, 0),
                     alg._element_from_word(tuple(alg.group.gen_indices)[:2]),
                     QRat.make((0, -1, 1)))
        text = el.to_text()
        rep["roundtrip_ok"] = (HeckeElement.from_text(alg, text) == el
                               and HeckeElement.from_text(alg, text).to_text() == text)
        rep["roundtrip_example"] = text
    return rep


def _cmd_zeta(args):
    curve = _parse_curve(args.curve)
    doc = {"curve": curve.to_json(), "class_number": curve.class_number()}
    if args.s is not None:
        doc["s"] = args.s
        doc["value"] = curve.eval(mp.mpmathify(args.s))
    if args.residue:
        doc["residue_at_1"] = curve.residue_at_1()
    return doc


def _cmd_tamagawa(args):
    curve = _parse_curve(args.curve)
    datum = build_root_datum(args.type)
    doc = {"type": args.type, "curve": curve.to_json(), "mode": args.mode}
    if args.mode in ("formula", "both"):
        r = tamagawa_finite(curve, datum, "formula")
        doc["formula"] = {"symbolic": r["symbolic"].to_json(), "numeric": r["numeric"]}
    if args.mode in ("cohomology", "both"):
        r = tamagawa_finite(curve, datum, "cohomology")
        doc["cohomology"] = {"symbolic": r["symbolic"].to_json(),
                             "numeric": r["numeric"]}
    if args.mode == "both":
        doc["agree"] = doc["formula"]["symbolic"] == doc["cohomology"]["symbolic"]
    return doc


def _cmd_tamagawa_affine(args):
    datum = build_root_datum(args.type)
    curve = _parse_curve(args.curve) if args.curve else None
    r = tamagawa_affine(curve if curve else CurveZeta.projective_line(2), datum)
    doc = {"type": args.type, "product": r["product"], "cancelled": r["cancelled"],
           "numerator": r["numerator"], "denominator": r["denominator"],
           "unreduced": r["unreduced"]}
    if curve is not None:
        doc["curve"] = curve.to_json()
        doc["symbolic"] = r["symbolic"].to_json()
        doc["numeric"] = r["numeric"]
    return doc


def _cmd_constant_term(args):
    curve = _parse_curve(args.curve)
    datum = build_root_datum(args.type)
    if args.residue:
        rep = eisenstein_residue(curve, datum, tol=args.tol)
        rep["path"] = [{"t": p["t"], "value": p["value"]} for p in rep["path"]]
        return rep
    sigma = tuple(mp.mpmathify(t) for t in args.sigma.split(","))
    if len(sigma) != datum.rank:
        raise PreconditionError("cli", "dispatch",
                                "--sigma needs %d components" % datum.rank)
    return borel_constant_term(EisensteinParam(sigma, curve, datum),
                               require_convergent=not args.allow_divergent)


def _cmd_affine_ct(args):
    curve = _parse_curve(args.curve)
    datum = build_root_datum(args.type)
    if args.mode == "prefactor":
        rep = correction_prefactor(curve, datum, mp.mpmathify(args.s), args.J,
                                   tol=args.tol)
        return rep
    sigma = tuple(mp.mpmathify(t) for t in (args.sigma or "").split(",")) \
        if args.sigma else (mp.mpf(2),) * datum.rank
    rep = affine_ct_w_sum(EisensteinParam(sigma, curve, datum),
                          mp.mpmathify(args.s), args.J, args.L, tol=args.tol)
    rep["prefactor"] = {k: v for k, v in rep["prefactor"].items()
                        if k not in ("partials", "deltas")}
    return rep


# -- argument parsing ---------------------------------------------------------------


def _build_parser():
    top = argparse.ArgumentParser(
        prog="affsat",
        description="Exact affine Satake / Hecke / zeta-Eisenstein kernel")
    top.add_argument("--format", choices=("json", "tsv"), default="json")
    top.add_argument("--precision-bits", type=int,
                     default=int(os.environ.get("AFFSAT_PRECISION_BITS", "192")))
    sub = top.add_subparsers(dest="command", required=True)

    def cmd(name, fn, **kw):
        p = sub.add_parser(name, **kw)
        p.set_defaults(fn=fn)
        return p

    p = cmd("rootdata", _cmd_rootdata, help="root datum standing data")
    p.add_argument("--type", required=True)
    p.add_argument("--affine", action="store_true")
    p.add_argument("--affine-coroots", type=int, default=None, metavar="N")
    p.add_argument("--weyl-length", type=int, default=None, metavar="L")
    p.add_argument("--stabilizer", default=None, metavar="LAMBDA")
    p.add_argument("--level", type=int, default=0)

    p = cmd("macdonald", _cmd_macdonald, help="spherical value at lambda")
    p.add_argument("--type", required=True)
    p.add_argument("--lambda", dest="lam", default=None)
    p.add_argument("--level", type=int, default=0)
    p.add_argument("--delta-coord", type=int, default=0)
    p.add_argument("--affine", action="store_true")
    p.add_argument("--N", type=int, default=2)
    p.add_argument("--L", type=int, default=None)
    p.add_argument("--height-window", type=int, default=None)

    p = cmd("kostka", _cmd_kostka, help="inverse-Satake q-analogs")
    p.add_argument("--type", required=True)
    p.add_argument("--lambda", dest="lam", required=True)

    p = cmd("delta", _cmd_delta, help="affine correction factor")
    p.add_argument("--type", required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--mode", choices=("product", "sum", "both"), default="product")
    p.add_argument("--L", type=int, default=None)

    p = cmd("gk", _cmd_gk, help="Gindikin-Karpelevich series and point counts")
    p.add_argument("--type", required=True)
    p.add_argument("--mode", choices=("finite", "affine"), default="finite")
    p.add_argument("--depth", type=int, default=6)
    p.add_argument("--N", type=int, default=2)
    p.add_argument("--height-window", type=int, default=None)

    p = cmd("hecke-check", _cmd_hecke_check, help="relation suites")
    p.add_argument("--type", required=True)
    p.add_argument("--affine", action="store_true")
    p.add_argument("--cases", type=int, default=200)
    p.add_argument("--seed", type=int, default=20240405)
    p.add_argument("--roundtrip", action="store_true")

    p = cmd("zeta", _cmd_zeta, help="curve zeta evaluation")
    p.add_argument("--curve", required=True, help="inline JSON or @file")
    p.add_argument("--s", default=None)
    p.add_argument("--residue", action="store_true")

    p = cmd("tamagawa", _cmd_tamagawa, help="finite volume formula")
    p.add_argument("--type", required=True)
    p.add_argument("--curve", required=True)
    p.add_argument("--mode", choices=("formula", "cohomology", "both"),
                   default="both")

    p = cmd("tamagawa-affine", _cmd_tamagawa_affine, help="affine volume formula")
    p.add_argument("--type", required=True)
    p.add_argument("--curve", default=None)

    p = cmd("constant-term", _cmd_constant_term, help="Borel constant term")
    p.add_argument("--type", required=True)
    p.add_argument("--curve", required=True)
    p.add_argument("--sigma", default=None)
    p.add_argument("--residue", action="store_true")
    p.add_argument("--allow-divergent", action="store_true")
    p.add_argument("--tol", type=float, default=1e-6)

    p = cmd("affine-ct", _cmd_affine_ct, help="affine correction and constant term")
    p.add_argument("--type", required=True)
    p.add_argument("--curve", required=True)
    p.add_argument("--s", required=True)
    p.add_argument("--J", type=int, default=40)
    p.add_argument("--mode", choices=("prefactor", "w_sum"), default="prefactor")
    p.add_argument("--L", type=int, default=4)
    p.add_argument("--sigma", default=None)
    p.add_argument("--tol", type=float, default=1e-6)

    return top


def dispatch(argv):
    parser = _build_parser()
    args = parser.parse_args(argv)
    mp.mp.prec = max(args.precision_bits, 64)
    digits = max(int(args.precision_bits * 0.3010299957) - 4, 12)
    try:
        doc = args.fn(args)
    except PreconditionError as exc:
        err = {"error": {"module": exc.module, "operation": exc.operation,
                         "message": exc.message}}
        sys.stderr.write(json.dumps(err, sort_keys=True, ensure_ascii=False) + "\n")
        return 2
    except (StabilizationError, PoleError, ArithmeticError) as exc:
        detail = getattr(exc, "detail", {})
        err = {"error": {"kind": type(exc).__name__, "message": str(exc),
                         "detail": _jsonify(detail, digits)}}
        sys.stderr.write(json.dumps(err, sort_keys=True, ensure_ascii=False) + "\n")
        return 3
    _emit(doc, args.format, digits)
    return 0


def main():
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
