"""Command-line interface.

Exit codes: 0 = success/accepted/equal, 1 = rejected/unequal, 2 = usage,
parse, or type error.  ``--json`` switches every subcommand to a single
machine-readable verdict object on stdout.  The environment variable
``NOMHOL_DEPTH`` supplies the default quantifier bound.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import corpus
from . import frontend as F
from . import hol as H
from . import kernel as K
from . import pnl as P
from .capture import canonical_context, capture_check, capture_infer
from .semantics import (EnumerationError, SemanticsError, Valuation,
                        eval_pnl_prop, eval_pnl_term, square_check)
from .sexpr import SexprError
from .translate import TranslationError, translate, translate_derivation, \
    translate_signature

EXIT_OK, EXIT_REJECTED, EXIT_ERROR = 0, 1, 2


class _Usage(Exception):
    pass


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise _Usage(f"cannot read {path}: {e.strerror}")


def _emit(args, payload: dict, human: str) -> int:
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    elif human:
        print(human)
    return EXIT_OK if payload.get("ok", True) else EXIT_REJECTED


def _load_sig(args) -> P.PnlSignature:
    if args.sig is None:
        return corpus.SIG
    return F.parse_document(_read(args.sig), "sig").value


def _load_pnl(args, path: str, sig):
    return F.parse_document(_read(path), "pnl", sig).value


def _default_depth() -> int:
    raw = os.environ.get("NOMHOL_DEPTH", "0")
    try:
        return int(raw)
    except ValueError:
        raise _Usage(f"NOMHOL_DEPTH must be an integer, got {raw!r}")


def _depth(args) -> int:
    return _default_depth() if args.depth is None else args.depth


def _load_model(args, sig):
    if args.model is None:
        raise _Usage("this command needs --model")
    return F.parse_document(_read(args.model), "model", sig).value


def _load_valuation(args, sig) -> Valuation:
    if args.valuation is None:
        return Valuation()
    val = F.parse_document(_read(args.valuation), "valuation", sig).value
    val.validate(sig)
    return val


def _context(args, x) -> tuple:
    if args.context is not None:
        return F.parse_context_text(args.context)
    return canonical_context(capture_infer(x))


# ---------------------------------------------------------------------------
# subcommands

def _cmd_check(args) -> int:
    sig = _load_sig(args)
    if args.logic == "hol":
        hsig = translate_signature(sig).target
        d = F.parse_document(_read(args.file), "deriv-hol", sig, hsig).value
        v = K.check_hol(d, hsig)
    else:
        d = F.parse_document(_read(args.file), "deriv-pnl", sig).value
        mode = K.FULL if args.logic == "pnl-full" else K.RESTRICTED
        v = K.check_pnl(sig, d, mode)
    payload = {"ok": bool(v), "path": list(v.path), "message": v.message}
    if v:
        return _emit(args, payload, "accepted")
    where = "/".join(map(str, v.path)) or "root"
    return _emit(args, payload, f"rejected at {where}: {v.message}")


def _cmd_translate(args) -> int:
    sig = _load_sig(args)
    env = translate_signature(sig)
    if args.derivation:
        d = F.parse_document(_read(args.file), "deriv-pnl", sig).value
        ctx = F.parse_context_text(args.context) if args.context is not None else ()
        try:
            out = translate_derivation(env, d, ctx)
        except TranslationError as e:
            payload = {"ok": False, "path": list(e.path), "message": str(e)}
            return _emit(args, payload, f"rejected: {e}")
        text = F.render_derivation(out.tree, hol=True)
        payload = {"ok": True, "context": F.render_context(out.ctx_full),
                   "derivation": text}
        return _emit(args, payload,
                     f"; context {F.render_context(out.ctx_full)}\n{text}")
    x = _load_pnl(args, args.file, sig)
    ctx = _context(args, x)
    captured = capture_check(ctx, x)
    t = translate(env, ctx, x)
    text = F.render_hol(t)
    payload = {"ok": True, "context": F.render_context(ctx),
               "captured": captured, "term": text}
    note = "" if captured else "  ; warning: context does not capture-check"
    return _emit(args, payload,
                 f"; context {F.render_context(ctx)}{note}\n{text}")


def _cmd_infer_d(args) -> int:
    sig = _load_sig(args)
    x = _load_pnl(args, args.file, sig)
    ctx = canonical_context(capture_infer(x))
    return _emit(args, {"ok": True, "context": F.render_context(ctx)},
                 F.render_context(ctx))


def _cmd_alpha(args) -> int:
    sig = _load_sig(args)
    if args.hol:
        hsig = translate_signature(sig).target
        t = F.parse_document(_read(args.file), "hol", sig, hsig).value
        u = F.parse_document(_read(args.file2), "hol", sig, hsig).value
        same = H.alphabeta_eq(t, u)
    else:
        t = _load_pnl(args, args.file, sig)
        u = _load_pnl(args, args.file2, sig)
        same = P.alpha_eq(t, u)
    return _emit(args, {"ok": same},
                 "alpha-equal" if same else "not alpha-equal")


def _cmd_normalize(args) -> int:
    sig = _load_sig(args)
    hsig = translate_signature(sig).target
    t = F.parse_document(_read(args.file), "hol", sig, hsig).value
    H.hol_type_of(t, hsig)
    out = F.render_hol(H.beta_normalize(t))
    return _emit(args, {"ok": True, "term": out}, out)


def _cmd_eval(args) -> int:
    sig = _load_sig(args)
    model = _load_model(args, sig)
    val = _load_valuation(args, sig)
    x = _load_pnl(args, args.file, sig)
    depth = _depth(args)
    if isinstance(x, (P.Bot, P.Imp, P.Pred, P.All)):
        v, exact = eval_pnl_prop(model, val, x, depth)
        return _emit(args, {"ok": True, "value": v, "exact": exact},
                     f"{v}{'' if exact else '  ; bounded, not exact'}")
    out = F.render_term(eval_pnl_term(model, val, x))
    return _emit(args, {"ok": True, "term": out}, out)


def _cmd_square(args) -> int:
    sig = _load_sig(args)
    env = translate_signature(sig)
    model = _load_model(args, sig)
    val = _load_valuation(args, sig)
    x = _load_pnl(args, args.file, sig)
    ctx = _context(args, x)
    v = square_check(env, model, ctx, val, x, _depth(args))
    payload = {"ok": v.ok, "exact": v.exact, "kind": v.kind,
               "message": v.message}
    if v.ok:
        note = "" if v.exact else "  ; bounded, not exact"
        return _emit(args, payload, f"square commutes ({v.kind}){note}")
    return _emit(args, payload, f"square fails ({v.kind}): {v.message}")


# ---------------------------------------------------------------------------
# argument parsing and dispatch

def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="nomhol", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--sig", help="signature file (default: the bundled "
                                     "lambda-calculus signature)")
        p.add_argument("--json", action="store_true",
                       help="machine-readable verdicts")

    p = sub.add_parser("check", help="check a derivation file")
    common(p)
    p.add_argument("--logic", required=True,
                   choices=["pnl-full", "pnl-restricted", "hol"])
    p.add_argument("file")
    p.set_defaults(fn=_cmd_check)

    p = sub.add_parser("translate", help="translate a term, proposition, or "
                                         "derivation")
    common(p)
    p.add_argument("--context", help='capture context, e.g. "[nu@0,nu@1]"')
    p.add_argument("--infer-d", action="store_true",
                   help="infer the least capture context (the default)")
    p.add_argument("--derivation", action="store_true",
                   help="treat the file as a derivation")
    p.add_argument("file")
    p.set_defaults(fn=_cmd_translate)

    p = sub.add_parser("infer-d", help="print the least capture context")
    common(p)
    p.add_argument("file")
    p.set_defaults(fn=_cmd_infer_d)

    p = sub.add_parser("alpha", help="compare two files up to alpha")
    common(p)
    p.add_argument("--hol", action="store_true",
                   help="compare typed-lambda terms up to alpha-beta")
    p.add_argument("file")
    p.add_argument("file2")
    p.set_defaults(fn=_cmd_alpha)

    p = sub.add_parser("normalize", help="beta-normalize a typed-lambda term")
    common(p)
    p.add_argument("file")
    p.set_defaults(fn=_cmd_normalize)

    p = sub.add_parser("eval", help="evaluate a term or proposition in a model")
    common(p)
    p.add_argument("--model")
    p.add_argument("--valuation")
    p.add_argument("--depth", type=int)
    p.add_argument("file")
    p.set_defaults(fn=_cmd_eval)

    p = sub.add_parser("square", help="compare direct evaluation with the "
                                      "evaluation of the translation")
    common(p)
    p.add_argument("--model")
    p.add_argument("--valuation")
    p.add_argument("--context")
    p.add_argument("--depth", type=int)
    p.add_argument("file")
    p.set_defaults(fn=_cmd_square)

    return top


def run_cli(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_ERROR if e.code not in (0, None) else EXIT_OK
    try:
        return args.fn(args)
    except (_Usage, SexprError, P.SortError, P.SignatureError,
            H.HolTypeError, EnumerationError, SemanticsError,
            TranslationError, ValueError, TypeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


def main():
    raise SystemExit(run_cli())


if __name__ == "__main__":
    main()
