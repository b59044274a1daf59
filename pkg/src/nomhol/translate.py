"""Translation from the nominal syntax to the higher-order syntax: sorts to
types, formers to constants, suspended unknowns to context-applied variables,
and whole derivations rule-by-rule.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

from .atoms import Perm, set_subset
from .capture import (CaptureContext, canonical_context, capture_check,
                      capture_cover, capture_infer, make_context,
                      reindex_subst, restrict_context)
from . import hol as H
from . import kernel as K
from . import pnl as P


class TranslationError(Exception):
    def __init__(self, message, path=()):
        super().__init__(message)
        self.path = path


@dataclass(frozen=True)
class TranslationEnv:
    source: P.PnlSignature
    target: H.HolSignature

    def term_const(self, f: str) -> H.Const:
        arg, res = self.source.term_formers[f]
        return H.Const(f"g_{f}", H.ArrowT(H.sort_to_type(arg), H.name_sort_type(res)))

    def pred_const(self, p: str) -> H.Const:
        arg = self.source.prop_formers[p]
        return H.Const(f"g_{p}", H.ArrowT(H.sort_to_type(arg), H.O))


def translate_signature(sig: P.PnlSignature) -> TranslationEnv:
    consts = dict(H.BASE_SIGNATURE.constants)
    env = TranslationEnv(sig, H.HolSignature(consts))
    for f in sig.term_formers:
        consts[f"g_{f}"] = env.term_const(f).type
    for p in sig.prop_formers:
        consts[f"g_{p}"] = env.pred_const(p).type
    return env


def translate(env: TranslationEnv, ctx: CaptureContext, x) -> H.HolTerm:
    match x:
        case P.AtomT(a):
            return H.Var(H.AtomVar(a))
        case P.Tup(items):
            return H.HTup(tuple(translate(env, ctx, r) for r in items))
        case P.Former(f, arg):
            return H.App(env.term_const(f), translate(env, ctx, arg))
        case P.AbsT(a, body):
            return H.Lam(H.AtomVar(a), translate(env, ctx, body))
        case P.Sus(pi, unk):
            d_x = restrict_context(ctx, unk.pmss)
            head = H.Var(H.UnkVar(unk, d_x))
            return H.apps(head, *(H.Var(H.AtomVar(pi(a))) for a in d_x))
        case P.Bot():
            return H.BOT
        case P.Imp(p, q):
            return H.imp(translate(env, ctx, p), translate(env, ctx, q))
        case P.Pred(p, arg):
            return H.App(env.pred_const(p), translate(env, ctx, arg))
        case P.All(unk, body):
            v = H.UnkVar(unk, restrict_context(ctx, unk.pmss))
            return H.forall(v, translate(env, ctx, body))
    raise TypeError(f"not nominal syntax: {x!r}")


# ---------------------------------------------------------------------------
# derivation translation

def _merge_context(ctx: CaptureContext, needed) -> CaptureContext:
    extra = sorted(set(needed) - set(ctx))
    return make_context(tuple(ctx) + tuple(extra))


def _collect_sequents(node: K.Node):
    yield node.concl
    for c in node.children:
        yield from _collect_sequents(c)


@dataclass(frozen=True)
class TranslatedDerivation:
    tree: K.Node
    ctx: CaptureContext        # the caller's context
    ctx_full: CaptureContext   # the possibly-larger context actually used
    reindex: Mapping           # carries ctx_full translations back to ctx


def translate_sequent(env, ctx, seq: K.Sequent) -> K.Sequent:
    return K.hol_sequent([translate(env, ctx, p) for p in seq.left],
                         [translate(env, ctx, p) for p in seq.right])


def translate_derivation(env: TranslationEnv, node: K.Node,
                         ctx: CaptureContext = ()) -> TranslatedDerivation:
    _reject_equivariant_axioms(node, ())
    verdict = K.check_pnl(env.source, node, K.RESTRICTED)
    if not verdict:
        raise TranslationError(
            f"input derivation fails the restricted check: {verdict.message}",
            verdict.path)
    seqs = list(_collect_sequents(node))
    needed = set(capture_cover(seqs))
    for r in _witness_unknowns_terms(node):
        needed |= set(capture_infer(r))
    ctx_full = _merge_context(ctx, needed)
    tree = _translate_node(env, ctx_full, node)
    unknowns = frozenset().union(
        *(P.free_unknowns(p) for s in seqs for p in s.left + s.right)) \
        if seqs else frozenset()
    reindex = reindex_subst(ctx_full, ctx, unknowns)
    return TranslatedDerivation(tree, ctx, ctx_full, reindex)


def _witness_unknowns_terms(node: K.Node):
    if node.rule == "alll" and node.witness is not None:
        yield node.witness
    for c in node.children:
        yield from _witness_unknowns_terms(c)


def _reject_equivariant_axioms(node: K.Node, path):
    if node.rule == "ax" and not node.perm.is_identity:
        phi = node.concl.left[node.li] if node.li is not None and \
            node.li < len(node.concl.left) else None
        if phi is None or not P.alpha_eq(P.perm_act(node.perm, phi), phi):
            raise TranslationError(
                "equivariant axiom steps (a non-identity permutation changing "
                "the principal formula) have no higher-order counterpart", path)
    for i, c in enumerate(node.children):
        _reject_equivariant_axioms(c, path + (i,))


def _translate_node(env, ctx, node: K.Node) -> K.Node:
    concl = translate_sequent(env, ctx, node.concl)
    witness = None
    if node.rule == "alll":
        phi = node.concl.left[node.li]
        d_x = restrict_context(ctx, phi.unknown.pmss)
        witness = H.lams([H.AtomVar(a) for a in d_x],
                         translate(env, ctx, node.witness))
    children = tuple(_translate_node(env, ctx, c) for c in node.children)
    return K.Node(rule=node.rule, concl=concl, children=children,
                  li=node.li, ri=node.ri, witness=witness)


# ---------------------------------------------------------------------------
# erasing the guard argument added by signature saturation

def erase_pi(sig_pi: P.PnlSignature, node: K.Node, guard: P.Unknown) -> K.Node:
    """Strip the guard slot from every predicate and demote every axiom to the
    permutation-free rule, checking the permutation is invisible on the
    guard's permission set."""
    for seq in _collect_sequents(node):
        for phi in seq.left + seq.right:
            if not set_subset(P.free_atoms(phi), guard.pmss.as_cofin()):
                raise TranslationError(
                    "sequent formula mentions atoms outside the guard's "
                    "permission set")
    return _erase_node(node, guard, ())


def _strip_guard(phi):
    match phi:
        case P.Bot():
            return phi
        case P.Imp(p, q):
            return P.Imp(_strip_guard(p), _strip_guard(q))
        case P.Pred(name, P.Tup(items)) if len(items) == 2:
            return P.Pred(name, items[1])
        case P.All(unk, body):
            return P.All(unk, _strip_guard(body))
    raise TranslationError(f"formula lacks the guard slot: {phi!r}")


def _erase_node(node: K.Node, guard, path) -> K.Node:
    perm = node.perm
    if node.rule == "ax" and not perm.is_identity:
        moved = [a for a in perm.nontriv if a in guard.pmss and perm(a) != a]
        if moved:
            raise TranslationError(
                f"axiom permutation moves permitted atoms {sorted(moved)}; "
                "erasure would change the sequent", path)
        perm = Perm.identity()
    concl = K.pnl_sequent([_strip_guard(p) for p in node.concl.left],
                          [_strip_guard(p) for p in node.concl.right])
    children = tuple(_erase_node(c, guard, path + (i,))
                     for i, c in enumerate(node.children))
    return K.Node(rule=node.rule, concl=concl, children=children, perm=perm,
                  li=node.li, ri=node.ri, witness=node.witness)
