"""Trusted derivation checkers: two nominal sequent calculi differing only in
their axiom rule, and a higher-order sequent calculus.

Proof objects carry every rule parameter (principal indices, permutations,
quantifier witnesses), so checking is search-free.  Sequent sides are
deduplicated lists compared as sets under the calculus's equality:
alpha-equivalence on the nominal side, alpha-beta on the higher-order side.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from .atoms import Perm, set_subset
from . import hol as H
from . import pnl as P

FULL = "full"
RESTRICTED = "restricted"


@dataclass(frozen=True)
class Sequent:
    left: tuple
    right: tuple


def dedup(props, eq) -> tuple:
    out: list = []
    for p in props:
        if not any(eq(p, q) for q in out):
            out.append(p)
    return tuple(out)


def make_sequent(left, right, eq) -> Sequent:
    return Sequent(dedup(left, eq), dedup(right, eq))


def pnl_sequent(left, right) -> Sequent:
    return make_sequent(left, right, P.alpha_eq)


def hol_sequent(left, right) -> Sequent:
    return make_sequent(left, right, H.alphabeta_eq)


def _aset_eq(xs, ys, eq) -> bool:
    return all(any(eq(x, y) for y in ys) for x in xs) and \
        all(any(eq(x, y) for x in xs) for y in ys)


def _without(props, i) -> tuple:
    return props[:i] + props[i + 1:]


def _added(p, props, eq) -> tuple:
    if any(eq(p, q) for q in props):
        return props
    return (p,) + props


@dataclass(frozen=True)
class Node:
    rule: str  # ax | botl | impl | impr | alll | allr
    concl: Sequent
    children: tuple = ()
    perm: Perm = field(default_factory=Perm.identity)
    li: Optional[int] = None
    ri: Optional[int] = None
    witness: object = None


@dataclass(frozen=True)
class Verdict:
    ok: bool
    path: tuple = ()
    message: str = ""

    def __bool__(self):
        return self.ok


def _fail(path, message) -> Verdict:
    return Verdict(False, path, message)

OK = Verdict(True)

_ARITY = {"ax": 0, "botl": 0, "impl": 2, "impr": 1, "alll": 1, "allr": 1}


def _basic_shape(node: Node, path) -> Optional[Verdict]:
    want = _ARITY.get(node.rule)
    if want is None:
        return _fail(path, f"unknown rule {node.rule}")
    if len(node.children) != want:
        return _fail(path, f"{node.rule} expects {want} premises, got {len(node.children)}")
    return None


def _pick(props, i, path, side):
    if i is None or not (0 <= i < len(props)):
        return None, _fail(path, f"bad {side} index {i}")
    return props[i], None


def _one_of(got, candidates, eq) -> bool:
    return any(_aset_eq(got, want, eq) for want in candidates)


# ---------------------------------------------------------------------------
# nominal kernel

def check_pnl(sig: P.PnlSignature, node: Node, mode: str) -> Verdict:
    return _check_pnl(sig, node, mode, ())


def _check_pnl(sig, node: Node, mode: str, path) -> Verdict:
    bad = _basic_shape(node, path)
    if bad:
        return bad
    C = node.concl
    for phi in C.left + C.right:
        try:
            P.check_prop(sig, phi)
        except P.SortError as e:
            return _fail(path, f"ill-sorted formula: {e}")
    eq = P.alpha_eq
    match node.rule:
        case "ax":
            phi, err = _pick(C.left, node.li, path, "left")
            if err:
                return err
            psi, err = _pick(C.right, node.ri, path, "right")
            if err:
                return err
            if mode == RESTRICTED:
                if not node.perm.is_identity:
                    return _fail(path, "axiom permutation must be identity in restricted mode")
                if not eq(phi, psi):
                    return _fail(path, "axiom formulas not alpha-equal")
            else:
                if not eq(P.perm_act(node.perm, phi), psi):
                    return _fail(path, "permuted axiom formula does not match")
            return OK
        case "botl":
            phi, err = _pick(C.left, node.li, path, "left")
            if err:
                return err
            if not isinstance(phi, P.Bot):
                return _fail(path, "botl principal formula is not the false constant")
            return OK
        case "impl":
            phi, err = _pick(C.left, node.li, path, "left")
            if err:
                return err
            if not isinstance(phi, P.Imp):
                return _fail(path, "impl principal formula is not an implication")
            base = _without(C.left, node.li)
            c1, c2 = node.children
            if not (_one_of(c1.concl.left, [base, C.left], eq)
                    and _aset_eq(c1.concl.right, _added(phi.left, C.right, eq), eq)):
                return _fail(path + (0,), "first premise does not match impl")
            if not (_one_of(c2.concl.left,
                            [_added(phi.right, base, eq), _added(phi.right, C.left, eq)], eq)
                    and _aset_eq(c2.concl.right, C.right, eq)):
                return _fail(path + (1,), "second premise does not match impl")
        case "impr":
            phi, err = _pick(C.right, node.ri, path, "right")
            if err:
                return err
            if not isinstance(phi, P.Imp):
                return _fail(path, "impr principal formula is not an implication")
            base = _without(C.right, node.ri)
            c = node.children[0]
            if not (_aset_eq(c.concl.left, _added(phi.left, C.left, eq), eq)
                    and _one_of(c.concl.right,
                                [_added(phi.right, base, eq),
                                 _added(phi.right, C.right, eq)], eq)):
                return _fail(path + (0,), "premise does not match impr")
        case "alll":
            phi, err = _pick(C.left, node.li, path, "left")
            if err:
                return err
            if not isinstance(phi, P.All):
                return _fail(path, "alll principal formula is not a quantifier")
            r = node.witness
            if r is None:
                return _fail(path, "alll needs a witness term")
            try:
                if P.sort_of(sig, r) != phi.unknown.sort:
                    return _fail(path, "witness has the wrong sort")
            except P.SortError as e:
                return _fail(path, f"ill-sorted witness: {e}")
            if not set_subset(P.free_atoms(r), phi.unknown.pmss.as_cofin()):
                return _fail(path, "witness free atoms escape the permission set")
            inst = P.subst_one(phi.body, phi.unknown, r)
            base = _without(C.left, node.li)
            c = node.children[0]
            if not (_one_of(c.concl.left,
                            [_added(inst, base, eq), _added(inst, C.left, eq)], eq)
                    and _aset_eq(c.concl.right, C.right, eq)):
                return _fail(path + (0,), "premise does not match alll instance")
        case "allr":
            phi, err = _pick(C.right, node.ri, path, "right")
            if err:
                return err
            if not isinstance(phi, P.All):
                return _fail(path, "allr principal formula is not a quantifier")
            others = C.left + _without(C.right, node.ri)
            if any(phi.unknown in P.free_unknowns(p) for p in others):
                return _fail(path, "allr eigenvariable occurs free in the sequent")
            base = _without(C.right, node.ri)
            c = node.children[0]
            if not (_aset_eq(c.concl.left, C.left, eq)
                    and _one_of(c.concl.right,
                                [_added(phi.body, base, eq),
                                 _added(phi.body, C.right, eq)], eq)):
                return _fail(path + (0,), "premise does not match allr")
    for i, child in enumerate(node.children):
        v = _check_pnl(sig, child, mode, path + (i,))
        if not v:
            return v
    return OK


# ---------------------------------------------------------------------------
# higher-order kernel

def _forall_parts(phi):
    match phi:
        case H.App(H.Const("forall", _), H.Lam(v, body)):
            return v, body
    return None


def check_hol(node: Node, sig: Optional[H.HolSignature] = None) -> Verdict:
    return _check_hol(node, sig, ())


def _check_hol(node: Node, sig, path) -> Verdict:
    bad = _basic_shape(node, path)
    if bad:
        return bad
    C = node.concl
    for phi in C.left + C.right:
        try:
            if H.hol_type_of(phi, sig) != H.O:
                return _fail(path, f"formula is not a proposition: {phi!r}")
        except H.HolTypeError as e:
            return _fail(path, f"untypable formula: {e}")
    eq = H.alphabeta_eq
    match node.rule:
        case "ax":
            phi, err = _pick(C.left, node.li, path, "left")
            if err:
                return err
            psi, err = _pick(C.right, node.ri, path, "right")
            if err:
                return err
            if not eq(phi, psi):
                return _fail(path, "axiom formulas not alpha-beta-equal")
            return OK
        case "botl":
            phi, err = _pick(C.left, node.li, path, "left")
            if err:
                return err
            if not eq(phi, H.BOT):
                return _fail(path, "botl principal formula is not the false constant")
            return OK
        case "impl" | "impr":
            props = C.left if node.rule == "impl" else C.right
            idx = node.li if node.rule == "impl" else node.ri
            phi, err = _pick(props, idx, path, "left" if node.rule == "impl" else "right")
            if err:
                return err
            match H.beta_normalize(phi):
                case H.App(H.App(H.Const("imp", _), p), q):
                    pass
                case _:
                    return _fail(path, "principal formula is not an implication")
            if node.rule == "impl":
                base = _without(C.left, node.li)
                c1, c2 = node.children
                if not (_one_of(c1.concl.left, [base, C.left], eq)
                        and _aset_eq(c1.concl.right, _added(p, C.right, eq), eq)):
                    return _fail(path + (0,), "first premise does not match impl")
                if not (_one_of(c2.concl.left,
                                [_added(q, base, eq), _added(q, C.left, eq)], eq)
                        and _aset_eq(c2.concl.right, C.right, eq)):
                    return _fail(path + (1,), "second premise does not match impl")
            else:
                base = _without(C.right, node.ri)
                c = node.children[0]
                if not (_aset_eq(c.concl.left, _added(p, C.left, eq), eq)
                        and _one_of(c.concl.right,
                                    [_added(q, base, eq), _added(q, C.right, eq)], eq)):
                    return _fail(path + (0,), "premise does not match impr")
        case "alll":
            phi, err = _pick(C.left, node.li, path, "left")
            if err:
                return err
            parts = _forall_parts(H.beta_normalize(phi))
            if parts is None:
                return _fail(path, "alll principal formula is not a quantifier")
            v, body = parts
            t = node.witness
            if t is None:
                return _fail(path, "alll needs a witness term")
            try:
                if H.hol_type_of(t, sig) != H.var_type(v):
                    return _fail(path, "witness has the wrong type")
            except H.HolTypeError as e:
                return _fail(path, f"untypable witness: {e}")
            inst = H.App(H.Lam(v, body), t)
            base = _without(C.left, node.li)
            c = node.children[0]
            if not (_one_of(c.concl.left,
                            [_added(inst, base, eq), _added(inst, C.left, eq)], eq)
                    and _aset_eq(c.concl.right, C.right, eq)):
                return _fail(path + (0,), "premise does not match alll instance")
        case "allr":
            phi, err = _pick(C.right, node.ri, path, "right")
            if err:
                return err
            parts = _forall_parts(H.beta_normalize(phi))
            if parts is None:
                return _fail(path, "allr principal formula is not a quantifier")
            v, body = parts
            others = C.left + _without(C.right, node.ri)
            if any(v in H.fv(p) for p in others):
                return _fail(path, "allr eigenvariable occurs free in the sequent")
            base = _without(C.right, node.ri)
            c = node.children[0]
            if not (_aset_eq(c.concl.left, C.left, eq)
                    and _one_of(c.concl.right,
                                [_added(body, base, eq), _added(body, C.right, eq)], eq)):
                return _fail(path + (0,), "premise does not match allr")
    for i, child in enumerate(node.children):
        v = _check_hol(child, sig, path + (i,))
        if not v:
            return v
    return OK


# ---------------------------------------------------------------------------
# decidable fragment

def _hol_atomic(phi) -> bool:
    """No logical constants anywhere: only axiom steps could apply."""
    match phi:
        case H.Const(name, _):
            return name not in ("bot", "imp", "forall")
        case H.Var(_):
            return True
        case H.App(f, a):
            return _hol_atomic(f) and _hol_atomic(a)
        case H.Lam(_, b):
            return _hol_atomic(b)
        case H.HTup(items):
            return all(_hol_atomic(r) for r in items)
    return False


def hol_atomic_derivable(seq: Sequent) -> Optional[bool]:
    """Exact derivability for sequents of purely atomic formulas; None when
    a logical constant makes the question proof-search-shaped."""
    if not all(_hol_atomic(H.beta_normalize(p)) for p in seq.left + seq.right):
        return None
    return any(H.alphabeta_eq(p, q) for p in seq.left for q in seq.right)
