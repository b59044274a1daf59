"""Executable desk-scale models.

Ground nominal terms serve as carriers (term-formers act syntactically, so
support and the permutation action are computable); renamings act on them by
capture-avoiding atom replacement.  The free extension to renaming sets is
represented by suspended pairs (renaming, ground term) compared up to the
generated equivalence, and higher-order values are a small tagged union with
function values given by closures, constants, and deferred renamings.

The module provides evaluators for both syntaxes and a checker for the
commuting square relating a nominal term/proposition's direct value to the
value of its translation under the lifted valuation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional, Union

from .atoms import (Atom, CofinAtomSet, Perm, PermissionSet, Renaming,
                    fresh_atoms, freshening_pair, set_subset)
from .capture import CaptureContext, capture_check, restrict_context
from . import hol as H
from . import pnl as P
from .pnl import (AbsSort, AbsT, All, AtomT, BaseSort, Bot, Former, Imp,
                  NameSort, PnlSignature, Pred, Sus, TupleSort, Tup, Unknown,
                  alpha_eq, free_atoms, perm_act, sort_of, subst_apply)
from .translate import TranslationEnv, translate


class SemanticsError(Exception):
    pass


class SupportCapError(SemanticsError):
    pass


class EnumerationError(SemanticsError):
    pass


class UnboundVariableError(SemanticsError):
    pass


# ---------------------------------------------------------------------------
# ground elements

def is_ground(x) -> bool:
    match x:
        case AtomT(_) | Bot():
            return True
        case Tup(items):
            return all(is_ground(r) for r in items)
        case Former(_, arg) | Pred(_, arg):
            return is_ground(arg)
        case AbsT(_, body) | Imp(body, _):
            return is_ground(body) and (not isinstance(x, Imp) or is_ground(x.right))
        case Sus(_, _) | All(_, _):
            return False
    raise TypeError(f"not nominal syntax: {x!r}")


def supp(x) -> frozenset:
    """Support of a ground element: its free atoms, always a finite set."""
    return free_atoms(x).as_finite()


def ground_renaming_action(rho: Renaming, x):
    """Apply a renaming to a ground term, freshening binders that clash."""
    if rho.is_identity:
        return x
    match x:
        case AtomT(a):
            return AtomT(rho(a))
        case Tup(items):
            return Tup(tuple(ground_renaming_action(rho, r) for r in items))
        case Former(f, arg):
            return Former(f, ground_renaming_action(rho, arg))
        case AbsT(a, body):
            if a in rho.nontriv:
                avoid = free_atoms(body).union(CofinAtomSet.finite(rho.nontriv))
                c = fresh_atoms([a.sort], avoid)[0]
                body = perm_act(Perm.swap(c, a), body)
                a = c
            return AbsT(a, ground_renaming_action(rho, body))
    raise TypeError(f"not a ground term: {x!r}")


def abstract_atoms(atoms, x):
    """[a1]...[ak]x."""
    for a in reversed(tuple(atoms)):
        x = AbsT(a, x)
    return x


# ---------------------------------------------------------------------------
# the free extension: suspended renamings over ground elements

@dataclass(frozen=True)
class RenElem:
    """A representative pair denoting the suspension rho applied to val."""

    rho: Renaming
    val: object  # ground PnlTerm


def canonicalize(e: RenElem) -> RenElem:
    """Shrink the suspended renaming by pushing injective parts into the
    term: a move a -> t with t fresh for the term and no competing source is
    realized by renaming a to t directly."""
    val = e.val
    rho = e.rho.restrict(supp(val))
    changed = True
    while changed:
        changed = False
        moves = rho.moves()
        s = supp(val)
        sources: dict = {}
        for a, t in moves.items():
            sources.setdefault(t, []).append(a)
        for a in sorted(moves):
            t = moves[a]
            if t not in s and len(sources[t]) == 1:
                val = perm_act(Perm.swap(a, t), val)
                del moves[a]
                rho = Renaming(moves).restrict(supp(val))
                changed = True
                break
    return RenElem(rho, val)


def mk_ren(rho: Renaming, val) -> RenElem:
    return canonicalize(RenElem(rho, val))


def _complete_bijection(f: Mapping[Atom, Atom]) -> Perm:
    """Extend an injective sort-preserving finite map to a permutation."""
    dom, img = set(f), set(f.values())
    moves = dict(f)
    missing = sorted(img - dom)
    free = sorted(dom - img)
    by_sort: dict = {}
    for a in free:
        by_sort.setdefault(a.sort, []).append(a)
    for a in missing:
        moves[a] = by_sort[a.sort].pop(0)
    return Perm({a: b for a, b in moves.items() if a != b})


def ren_eq(e1: RenElem, e2: RenElem, support_cap: int = 8) -> bool:
    """Decide whether two representative pairs denote the same element of the
    free extension, by searching for a sort-respecting support bijection."""
    s1, s2 = sorted(supp(e1.val)), sorted(supp(e2.val))
    if len(s1) != len(s2):
        return False
    if len(s1) > support_cap:
        raise SupportCapError(
            f"support size {len(s1)} exceeds the configured cap {support_cap}")
    groups1: dict = {}
    groups2: dict = {}
    for a in s1:
        groups1.setdefault(a.sort, []).append(a)
    for a in s2:
        groups2.setdefault(a.sort, []).append(a)
    if set(groups1) != set(groups2) or any(
            len(groups1[k]) != len(groups2[k]) for k in groups1):
        return False
    sorts = sorted(groups1)
    pools = [itertools.permutations(groups2[k]) for k in sorts]
    for combo in itertools.product(*pools):
        f = {}
        for k, perm_targets in zip(sorts, combo):
            f.update(dict(zip(groups1[k], perm_targets)))
        pi = _complete_bijection(f)
        if not alpha_eq(perm_act(pi, e1.val), e2.val):
            continue
        if all(e1.rho(a) == e2.rho(f[a]) for a in s1):
            return True
    return False


# ---------------------------------------------------------------------------
# semantic values

@dataclass(frozen=True)
class BoolV:
    value: int

    def __post_init__(self):
        if self.value not in (0, 1):
            raise ValueError("boolean value must be 0 or 1")


@dataclass(frozen=True)
class AtomV:
    atom: Atom


@dataclass(frozen=True)
class RenV:
    elem: RenElem


@dataclass(frozen=True)
class TupV:
    items: tuple


@dataclass(frozen=True, eq=False)
class LamClos:
    bound: object          # HolVar
    body: object           # HolTerm
    env: object            # HolValuation
    support: frozenset
    ev: object             # HolEvaluator


@dataclass(frozen=True, eq=False)
class ConstFn:
    kind: str              # "imp" | "forall" | "former" | "pred"
    payload: object = None  # forall: domain type; former: name; pred: (name, spec)
    args: tuple = ()
    ev: object = None

    @property
    def support(self) -> frozenset:
        if self.kind == "pred":
            return self.payload[1].declared_support()
        return frozenset()


@dataclass(frozen=True, eq=False)
class PendingRen:
    rho: Renaming
    inner: object  # FnElem

    @property
    def support(self) -> frozenset:
        return self.rho.nontriv | self.inner.support


@dataclass(frozen=True, eq=False)
class RawFn:
    """A function value given directly by a host callable; used for model
    carriers that are not definable by closures over the term syntax."""

    func: Callable
    support: frozenset = frozenset()


FnElem = Union[LamClos, ConstFn, PendingRen, RawFn]


@dataclass(frozen=True, eq=False)
class FnV:
    fn: FnElem


SemVal = Union[BoolV, AtomV, RenV, TupV, FnV]


def supp_sem(v: SemVal) -> frozenset:
    match v:
        case BoolV(_):
            return frozenset()
        case AtomV(a):
            return frozenset([a])
        case RenV(e):
            return frozenset(e.rho(a) for a in supp(e.val))
        case TupV(items):
            return frozenset().union(*map(supp_sem, items)) if items else frozenset()
        case FnV(f):
            return f.support
    raise TypeError(f"not a semantic value: {v!r}")


def as_bool(v: SemVal) -> int:
    if isinstance(v, BoolV):
        return v.value
    raise SemanticsError(f"expected a boolean value, got {v!r}")


def as_atom(v: SemVal) -> Atom:
    match v:
        case AtomV(a):
            return a
        case RenV(RenElem(rho, AtomT(a))):
            return rho(a)
    raise SemanticsError(f"expected an atom value, got {v!r}")


def merge_ren_tuple(elems) -> RenElem:
    """Combine componentwise suspensions into one suspension over a tuple,
    choosing representatives whose renaming domains are pairwise disjoint and
    disjoint from the other components' supports."""
    elems = [canonicalize(e) for e in elems]
    supports = [supp(e.val) for e in elems]
    avoid = set().union(*(s | e.rho.nontriv for s, e in zip(supports, elems))) \
        if elems else set()
    used: set = set()
    out_moves: dict = {}
    vals = []
    for i, e in enumerate(elems):
        rho = e.rho
        others = set().union(*(s for j, s in enumerate(supports) if j != i)) \
            if len(elems) > 1 else set()
        conflicts = sorted(rho.dom & (used | others))
        if conflicts:
            fresh = fresh_atoms([a.sort for a in conflicts],
                                CofinAtomSet.finite(avoid | used))
            avoid |= set(fresh)
            pi = Perm({**dict(zip(conflicts, fresh)),
                       **dict(zip(fresh, conflicts))})
            val = perm_act(pi, e.val)
            rho = Renaming({pi(a): t for a, t in rho.moves().items()})
            e = RenElem(rho, val)
        used |= e.rho.dom
        out_moves.update(e.rho.moves())
        vals.append(e.val)
    return RenElem(Renaming(out_moves), Tup(tuple(vals)))


def as_ren(v: SemVal) -> RenElem:
    match v:
        case RenV(e):
            return canonicalize(e)
        case AtomV(a):
            return RenElem(Renaming.identity(), AtomT(a))
        case TupV(items):
            return merge_ren_tuple([as_ren(r) for r in items])
    raise SemanticsError(f"value has no suspension form: {v!r}")


def sem_eq(v1: SemVal, v2: SemVal, support_cap: int = 8) -> bool:
    """Equality of semantic values.  Tuple values (the componentwise product)
    are compared componentwise; a tuple value is compared against a merged
    suspension only by coercion through the natural map."""
    match (v1, v2):
        case (BoolV(a), BoolV(b)):
            return a == b
        case (TupV(xs), TupV(ys)):
            return len(xs) == len(ys) and all(
                sem_eq(a, b, support_cap) for a, b in zip(xs, ys))
        case (FnV(_), _) | (_, FnV(_)):
            raise SemanticsError("function values are not comparable")
    return ren_eq(as_ren(v1), as_ren(v2), support_cap)


def ren_act_sem(rho: Renaming, v: SemVal) -> SemVal:
    if rho.is_identity:
        return v
    match v:
        case BoolV(_):
            return v
        case AtomV(a):
            return AtomV(rho(a))
        case RenV(e):
            return RenV(mk_ren(rho.compose(e.rho), e.val))
        case TupV(items):
            return TupV(tuple(ren_act_sem(rho, r) for r in items))
        case FnV(f):
            return FnV(PendingRen(rho, f))
    raise TypeError(f"not a semantic value: {v!r}")


def _strip_for(e: RenElem, away: frozenset) -> RenElem:
    """An equivalent representative whose renaming domain avoids `away`."""
    e = canonicalize(e)
    bad = sorted(e.rho.dom & away)
    if not bad:
        return e
    avoid = supp(e.val) | e.rho.nontriv | away
    fresh = fresh_atoms([a.sort for a in bad], CofinAtomSet.finite(avoid))
    pi = Perm({**dict(zip(bad, fresh)), **dict(zip(fresh, bad))})
    val = perm_act(pi, e.val)
    rho = Renaming({pi(a): t for a, t in e.rho.moves().items()})
    return RenElem(rho, val)


def fn_apply(f: SemVal, a: SemVal) -> SemVal:
    match f:
        case RenV(RenElem(rho, AbsT(bound, body))):
            b = as_atom(a)
            if bound in rho.nontriv or bound == b:
                avoid = free_atoms(body).union(
                    CofinAtomSet.finite(rho.nontriv | {b, bound}))
                c = fresh_atoms([bound.sort], avoid)[0]
                body = perm_act(Perm.swap(c, bound), body)
                bound = c
            return RenV(mk_ren(Renaming.atomic(bound, b).compose(rho), body))
        case RenV(_):
            raise SemanticsError(f"applying a non-abstraction element: {f!r}")
        case FnV(LamClos() as clos):
            return clos.ev.eval(clos.body, clos.env.extend(clos.bound, a))
        case FnV(PendingRen(rho, inner)):
            blocked = CofinAtomSet.finite(supp_sem(a) | inner.support)
            r1, r2 = freshening_pair(rho.nontriv, blocked)
            return ren_act_sem(r2.compose(rho),
                               fn_apply(FnV(inner), ren_act_sem(r1, a)))
        case FnV(RawFn(func, _)):
            return func(a)
        case FnV(ConstFn() as c):
            return _const_apply(c, a)
    raise SemanticsError(f"not a function value: {f!r}")


def _const_apply(c: ConstFn, a: SemVal) -> SemVal:
    if c.kind == "imp":
        if not c.args:
            return FnV(ConstFn("imp", args=(as_bool(a),)))
        x, y = c.args[0], as_bool(a)
        return BoolV(max(1 - x, y))
    if c.kind == "former":
        e = as_ren(a)
        return RenV(RenElem(e.rho, Former(c.payload, e.val)))
    if c.kind == "pred":
        _, spec = c.payload
        e = _strip_for(as_ren(a), spec.declared_support())
        return BoolV(spec.apply(e.val))
    if c.kind == "forall":
        return c.ev._forall_generic(c.payload, a)
    raise SemanticsError(f"unknown constant function {c.kind}")


# ---------------------------------------------------------------------------
# predicate specifications and models

def pattern_atoms(p) -> frozenset:
    """The concrete atoms a pattern examines (binders excluded, pattern
    variables contribute nothing)."""
    match p:
        case AtomT(a):
            return frozenset([a])
        case Tup(items):
            return frozenset().union(*map(pattern_atoms, items)) if items else frozenset()
        case Former(_, arg):
            return pattern_atoms(arg)
        case AbsT(a, body):
            return pattern_atoms(body) - {a}
        case Sus(_, _):
            return frozenset()
    raise TypeError(f"not a pattern: {p!r}")


def match_pattern(pattern, term, binds: Optional[dict] = None) -> Optional[dict]:
    """First-order matching of a pattern (with unknowns as pattern variables)
    against a ground term, up to alpha; returns the bindings or None."""
    binds = {} if binds is None else binds
    match (pattern, term):
        case (Sus(pi, u), _):
            cand = perm_act(pi.inverse(), term)
            if u in binds:
                return binds if alpha_eq(binds[u], cand) else None
            if not set_subset(free_atoms(cand), u.pmss.as_cofin()):
                return None
            out = dict(binds)
            out[u] = cand
            return out
        case (AtomT(a), AtomT(b)):
            return binds if a == b else None
        case (Tup(ps), Tup(ts)):
            if len(ps) != len(ts):
                return None
            for p, t in zip(ps, ts):
                binds = match_pattern(p, t, binds)
                if binds is None:
                    return None
            return binds
        case (Former(f, p), Former(g, t)):
            return match_pattern(p, t, binds) if f == g else None
        case (AbsT(a, pb), AbsT(b, tb)):
            if a == b:
                return match_pattern(pb, tb, binds)
            if a.sort != b.sort or a in free_atoms(tb):
                return None
            return match_pattern(pb, perm_act(Perm.swap(a, b), tb), binds)
    return None


@dataclass(frozen=True)
class PredSpec:
    """An ordered pattern table interpreting one proposition-former."""

    clauses: tuple  # of (pattern, 0|1)
    default: int
    extra_support: frozenset = frozenset()

    def __post_init__(self):
        if self.default not in (0, 1):
            raise ValueError("default must be 0 or 1")
        for _, v in self.clauses:
            if v not in (0, 1):
                raise ValueError("clause value must be 0 or 1")

    def declared_support(self) -> frozenset:
        out = frozenset(self.extra_support)
        for p, _ in self.clauses:
            out |= pattern_atoms(p)
        return out

    def apply(self, x) -> int:
        for p, v in self.clauses:
            if match_pattern(p, x) is not None:
                return v
        return self.default


@dataclass(frozen=True)
class HerbrandModel:
    sig: PnlSignature
    preds: Mapping[str, PredSpec]

    def __post_init__(self):
        for name, spec in self.preds.items():
            if name not in self.sig.prop_formers:
                raise SemanticsError(f"undeclared proposition-former {name}")
            want = self.sig.prop_formers[name]
            for pattern, _ in spec.clauses:
                got = sort_of(self.sig, pattern)
                if got != want:
                    raise SemanticsError(
                        f"{name}: clause pattern has sort {got!r}, expected {want!r}")

    def spec(self, name: str) -> PredSpec:
        if name not in self.preds:
            raise SemanticsError(f"no interpretation for proposition-former {name}")
        return self.preds[name]


# ---------------------------------------------------------------------------
# canonical ground elements and valuations

def _base_ranks(sig: PnlSignature) -> dict:
    """Least former-nesting depth of a ground term for each base sort."""
    INF = float("inf")
    rank: dict = {}

    def sort_rank(s):
        match s:
            case NameSort(_):
                return 0
            case BaseSort(b):
                return rank.get(b, INF)
            case TupleSort(items):
                return max((sort_rank(r) for r in items), default=0)
            case AbsSort(_, body):
                return sort_rank(body)
        raise TypeError(f"not a sort: {s!r}")

    changed = True
    while changed:
        changed = False
        for f, (arg, res) in sig.term_formers.items():
            r = 1 + sort_rank(arg)
            if r < rank.get(res, INF):
                rank[res] = r
                changed = True
    return rank


def canonical_ground(sig: PnlSignature, sort, pmss: PermissionSet):
    """A deterministic ground term of the sort whose free atoms lie in the
    permission set."""
    ranks = _base_ranks(sig)

    def go(s):
        match s:
            case NameSort(n):
                i = -1
                while Atom(n, i) not in pmss:
                    i -= 1
                return AtomT(Atom(n, i))
            case BaseSort(b):
                if b not in ranks:
                    raise SemanticsError(f"base sort {b} has no ground terms")
                best = min((f for f, (_, res) in sig.term_formers.items() if res == b),
                           key=lambda f: (_sort_rank(ranks, sig.term_formers[f][0]), f))
                return Former(best, go(sig.term_formers[best][0]))
            case TupleSort(items):
                return Tup(tuple(go(r) for r in items))
            case AbsSort(n, body):
                return AbsT(Atom(n, -1), go(body))
        raise TypeError(f"not a sort: {s!r}")

    return go(sort)


def _sort_rank(ranks, s):
    match s:
        case NameSort(_):
            return 0
        case BaseSort(b):
            return ranks.get(b, float("inf"))
        case TupleSort(items):
            return max((_sort_rank(ranks, r) for r in items), default=0)
        case AbsSort(_, body):
            return _sort_rank(ranks, body)
    raise TypeError(f"not a sort: {s!r}")


class Valuation:
    """Finite assignment of ground terms to unknowns; unknowns outside the
    map receive a canonical ground element built inside their permission set."""

    def __init__(self, assignments: Optional[Mapping[Unknown, object]] = None):
        self.assignments = dict(assignments or {})

    def get(self, sig: PnlSignature, x: Unknown):
        if x in self.assignments:
            return self.assignments[x]
        return canonical_ground(sig, x.sort, x.pmss)

    def updated(self, x: Unknown, t) -> "Valuation":
        out = dict(self.assignments)
        out[x] = t
        return Valuation(out)

    def validate(self, sig: PnlSignature):
        for x, t in self.assignments.items():
            if not is_ground(t):
                raise SemanticsError(f"valuation value for {x!r} is not ground")
            if sort_of(sig, t) != x.sort:
                raise SemanticsError(f"valuation value for {x!r} has the wrong sort")
            if not set_subset(free_atoms(t), x.pmss.as_cofin()):
                raise SemanticsError(
                    f"valuation value for {x!r} escapes its permission set")


# ---------------------------------------------------------------------------
# the nominal evaluator

def eval_pnl_term(model: HerbrandModel, val: Valuation, r):
    match r:
        case AtomT(_):
            return r
        case Tup(items):
            return Tup(tuple(eval_pnl_term(model, val, x) for x in items))
        case Former(f, arg):
            return Former(f, eval_pnl_term(model, val, arg))
        case AbsT(a, body):
            return AbsT(a, eval_pnl_term(model, val, body))
        case Sus(pi, x):
            return perm_act(pi, val.get(model.sig, x))
    raise TypeError(f"not a term: {r!r}")


def pmss_window(pmss: PermissionSet, name_sorts, n_down: int = 2):
    """A finite, deterministic atom window inside a permission set."""
    out = []
    for ns in sorted(name_sorts):
        out.extend(sorted(a for a in pmss.plus if a.sort == ns))
        i, got = -1, 0
        while got < n_down:
            a = Atom(ns, i)
            if a in pmss:
                out.append(a)
                got += 1
            i -= 1
    return out


def default_window(sig: PnlSignature):
    return [Atom(n, i) for n in sorted(sig.name_sorts) for i in range(-2, 3)]


def enumerate_ground(sig: PnlSignature, sort, atoms, depth: int):
    """All ground terms of the sort over the atom window, with former nesting
    bounded by depth (abstraction binders may use one extra fresh atom)."""
    atoms = list(atoms)
    memo: dict = {}

    def go(s, d):
        key = (s, d)
        if key in memo:
            return memo[key]
        out = []
        match s:
            case NameSort(n):
                out = [AtomT(a) for a in atoms if a.sort == n]
            case BaseSort(b):
                if d > 0:
                    for f in sorted(sig.term_formers):
                        arg, res = sig.term_formers[f]
                        if res != b:
                            continue
                        out.extend(Former(f, t) for t in go(arg, d - 1))
            case TupleSort(items):
                pools = [go(r, d) for r in items]
                out = [Tup(combo) for combo in itertools.product(*pools)]
            case AbsSort(n, body):
                binders = [a for a in atoms if a.sort == n]
                binders += fresh_atoms([n], binders)
                out = [AbsT(a, t) for a in binders for t in go(body, d)]
            case _:
                raise TypeError(f"not a sort: {s!r}")
        memo[key] = out
        return out

    return go(sort, depth)


def eval_pnl_prop(model: HerbrandModel, val: Valuation, phi, depth: int = 0):
    """Returns (value, exact); exact is True iff phi is quantifier-free."""
    match phi:
        case Bot():
            return 0, True
        case Imp(p, q):
            vp, ep = eval_pnl_prop(model, val, p, depth)
            vq, eq_ = eval_pnl_prop(model, val, q, depth)
            return max(1 - vp, vq), ep and eq_
        case Pred(name, arg):
            spec = model.spec(name)
            return spec.apply(eval_pnl_term(model, val, arg)), True
        case All(x, body):
            if depth <= 0:
                raise EnumerationError(
                    "a quantifier requires a positive depth bound")
            window = pmss_window(x.pmss, model.sig.name_sorts)
            best = 1
            for t in enumerate_ground(model.sig, x.sort, window, depth):
                v, _ = eval_pnl_prop(model, val.updated(x, t), body, depth)
                if v == 0:
                    best = 0
                    break
            return best, False
    raise TypeError(f"not a proposition: {phi!r}")


# ---------------------------------------------------------------------------
# higher-order valuations

class HolValuation:
    """Layered finite map from higher-order variables to semantic values."""

    def __init__(self, mapping: Optional[Mapping] = None,
                 parent: Optional["HolValuation"] = None,
                 transform: Optional[Callable] = None):
        self.mapping = dict(mapping or {})
        self.parent = parent
        self.transform = transform

    def get(self, v) -> Optional[SemVal]:
        if v in self.mapping:
            return self.mapping[v]
        if self.parent is not None:
            got = self.parent.get(v)
            if got is not None and self.transform is not None:
                got = self.transform(v, got)
            return got
        return None

    def extend(self, v, value: SemVal) -> "HolValuation":
        return HolValuation({v: value}, parent=self)


class LiftedValuation(HolValuation):
    """The valuation induced by a nominal valuation at a translation context:
    each context-indexed unknown-variable receives the identity suspension of
    its value abstracted over its own context, and each atom-variable
    receives that atom."""

    def __init__(self, ctx: CaptureContext, val: Valuation, sig: PnlSignature):
        super().__init__()
        self.ctx = tuple(ctx)
        self.val = val
        self.sig = sig

    def get(self, v) -> Optional[SemVal]:
        match v:
            case H.AtomVar(a):
                return AtomV(a)
            case H.UnkVar(x, d):
                body = abstract_atoms(d, self.val.get(self.sig, x))
                return RenV(RenElem(Renaming.identity(), body))
        return None


def lift_valuation(ctx: CaptureContext, val: Valuation,
                   sig: PnlSignature) -> LiftedValuation:
    return LiftedValuation(ctx, val, sig)


def rename_valuation(rho: Renaming, parent: HolValuation) -> HolValuation:
    """Pointwise renaming of the unknown-variable entries of a valuation."""

    def tr(v, value):
        if isinstance(v, H.UnkVar):
            return ren_act_sem(rho, value)
        return value

    return HolValuation({}, parent=parent, transform=tr)


# ---------------------------------------------------------------------------
# the higher-order evaluator

class HolEvaluator:
    """Evaluates higher-order terms over a Herbrand model.  The `exact` flag
    drops to False whenever a quantifier is evaluated by bounded
    enumeration."""

    def __init__(self, tenv: Optional[TranslationEnv], model: HerbrandModel,
                 depth: int = 0):
        self.tenv = tenv
        self.model = model
        self.depth = depth
        self.exact = True

    # -- helpers ------------------------------------------------------------

    def _lookup(self, env: HolValuation, v) -> SemVal:
        got = env.get(v)
        if got is not None:
            return got
        if isinstance(v, H.AtomVar):
            return AtomV(v.atom)
        raise UnboundVariableError(f"unbound variable {v!r}")

    def _const_value(self, c: H.Const) -> SemVal:
        if c.name == "bot":
            return BoolV(0)
        if c.name == "imp":
            return FnV(ConstFn("imp"))
        if c.name == "forall":
            match c.type:
                case H.ArrowT(H.ArrowT(domain, _), _):
                    return FnV(ConstFn("forall", payload=domain, ev=self))
            raise SemanticsError(f"malformed quantifier constant {c!r}")
        if c.name.startswith("g_"):
            base = c.name[2:]
            if base in self.model.sig.term_formers:
                return FnV(ConstFn("former", payload=base))
            if base in self.model.sig.prop_formers:
                return FnV(ConstFn("pred", payload=(base, self.model.spec(base))))
        raise SemanticsError(f"uninterpreted constant {c.name}")

    def _forall_generic(self, domain, g: SemVal) -> SemVal:
        if domain == H.O:
            for cand in (BoolV(0), BoolV(1)):
                if as_bool(fn_apply(g, cand)) == 0:
                    return BoolV(0)
            return BoolV(1)
        sort = H.type_to_sort(self.model.sig, domain)
        if sort is None:
            raise EnumerationError(
                f"quantifier domain {domain!r} is not enumerable")
        if self.depth <= 0:
            raise EnumerationError("a quantifier requires a positive depth bound")
        self.exact = False
        for t in enumerate_ground(self.model.sig, sort,
                                  default_window(self.model.sig), self.depth):
            cand = RenV(RenElem(Renaming.identity(), t))
            if as_bool(fn_apply(g, cand)) == 0:
                return BoolV(0)
        return BoolV(1)

    def _forall_unknown(self, v, body, env: HolValuation) -> SemVal:
        """Quantification over a context-indexed unknown-variable ranges over
        identity suspensions of context-abstracted ground terms whose free
        atoms are permitted for the unknown."""
        if self.depth <= 0:
            raise EnumerationError("a quantifier requires a positive depth bound")
        self.exact = False
        x = v.unknown
        window = pmss_window(x.pmss, self.model.sig.name_sorts)
        for t in enumerate_ground(self.model.sig, x.sort, window, self.depth):
            cand = RenV(RenElem(Renaming.identity(), abstract_atoms(v.ctx, t)))
            if as_bool(self.eval(body, env.extend(v, cand))) == 0:
                return BoolV(0)
        return BoolV(1)

    # -- the evaluator ------------------------------------------------------

    def eval(self, t, env: HolValuation) -> SemVal:
        match t:
            case H.Var(v):
                return self._lookup(env, v)
            case H.Const(_, _):
                return self._const_value(t)
            case H.App(H.Const("forall", _), H.Lam(v, body)) if isinstance(v, H.UnkVar):
                return self._forall_unknown(v, body, env)
            case H.Lam(v, body):
                return self._eval_lam(v, body, env)
            case H.App(fn, arg):
                return fn_apply(self.eval(fn, env), self.eval(arg, env))
            case H.HTup(items):
                vals = [self.eval(r, env) for r in items]
                if self._all_image(items):
                    try:
                        return RenV(merge_ren_tuple([as_ren(v) for v in vals]))
                    except SemanticsError:
                        pass
                return TupV(tuple(vals))
        raise TypeError(f"not a term: {t!r}")

    def _all_image(self, items) -> bool:
        try:
            return all(
                H.type_to_sort(self.model.sig, H.hol_type_of(r)) is not None
                for r in items)
        except H.HolTypeError:
            return False

    def _eval_lam(self, v, body, env: HolValuation) -> SemVal:
        vt = H.var_type(v)
        try:
            whole = H.ArrowT(vt, H.hol_type_of(body))
            image = isinstance(H.type_to_sort(self.model.sig, whole), AbsSort)
        except H.HolTypeError:
            image = False
        if image and isinstance(v, H.AtomVar):
            a = v.atom
            others = frozenset()
            for w in H.fv(body) - {v}:
                others |= supp_sem(self._lookup(env, w))
            if a in others:
                avoid = others | _hol_atoms(body)
                c = fresh_atoms([a.sort], avoid)[0]
                body = H.hol_subst_parallel(body, {v: H.Var(H.AtomVar(c))})
                a = c
            inner = env.extend(H.AtomVar(a), AtomV(a))
            e = as_ren(self.eval(body, inner))
            rho = e.rho.restrict(supp(e.val) - {a})
            return RenV(RenElem(rho, AbsT(a, e.val)))
        support = frozenset()
        for w in H.fv(body) - {v}:
            support |= supp_sem(self._lookup(env, w))
        return FnV(LamClos(v, body, env, support, self))


def _hol_atoms(t) -> frozenset:
    match t:
        case H.Var(H.AtomVar(a)) | H.Lam(H.AtomVar(a), _):
            out = frozenset([a])
            if isinstance(t, H.Lam):
                out |= _hol_atoms(t.body)
            return out
        case H.Var(_) | H.Const(_, _):
            return frozenset()
        case H.Lam(_, body):
            return _hol_atoms(body)
        case H.App(fn, arg):
            return _hol_atoms(fn) | _hol_atoms(arg)
        case H.HTup(items):
            return frozenset().union(*map(_hol_atoms, items)) if items else frozenset()
    raise TypeError(f"not a term: {t!r}")


def eval_hol(tenv: Optional[TranslationEnv], model: HerbrandModel,
             env: HolValuation, t, depth: int = 0):
    """Returns (value, exact)."""
    ev = HolEvaluator(tenv, model, depth)
    out = ev.eval(t, env)
    return out, ev.exact


# ---------------------------------------------------------------------------
# the commuting square

@dataclass(frozen=True)
class SquareVerdict:
    ok: bool
    exact: bool
    kind: str
    lhs: object
    rhs: object
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok


def square_check(tenv: TranslationEnv, model: HerbrandModel,
                 ctx: CaptureContext, val: Valuation, x,
                 depth: int = 0) -> SquareVerdict:
    """Compare the direct value of a nominal term or proposition with the
    value of its translation under the lifted valuation."""
    ctx = tuple(ctx)
    if not capture_check(ctx, x):
        raise SemanticsError("the context does not capture-check the input")
    t = translate(tenv, ctx, x)
    lifted = lift_valuation(ctx, val, model.sig)
    ev = HolEvaluator(tenv, model, depth)
    hv = ev.eval(t, lifted)
    if isinstance(x, (Bot, Imp, Pred, All)):
        rv, exact_p = eval_pnl_prop(model, val, x, depth)
        lv = as_bool(hv)
        ok = lv == rv
        return SquareVerdict(ok, exact_p and ev.exact, "prop", lv, rv,
                             "" if ok else "boolean values differ")
    rhs = RenElem(Renaming.identity(), eval_pnl_term(model, val, x))
    ok = ren_eq(as_ren(hv), rhs)
    return SquareVerdict(ok, True, "term", hv, rhs,
                         "" if ok else "suspension elements differ")


# ---------------------------------------------------------------------------
# partial application of a model at a distinguished first slot

def convert_model(model_pi: HerbrandModel, z) -> HerbrandModel:
    """Fix the first tuple slot of every predicate to the ground term z:
    clauses whose first slot cannot match z are pruned, the rest are
    instantiated, and the declared support grows by the free atoms of z."""
    sig = model_pi.sig
    if not is_ground(z):
        raise SemanticsError("the distinguished argument must be ground")
    z_sort = sort_of(sig, z)
    new_props = {}
    for p, arg in sig.prop_formers.items():
        match arg:
            case TupleSort((first, rest)):
                if first != z_sort:
                    raise SemanticsError(
                        f"{p}: first slot has sort {first!r}, expected {z_sort!r}")
                new_props[p] = rest
            case _:
                raise SemanticsError(f"{p}: argument sort is not a pair")
    new_sig = PnlSignature(sig.name_sorts, sig.base_sorts,
                           dict(sig.term_formers), new_props)
    new_preds = {}
    for p, spec in model_pi.preds.items():
        clauses = []
        for pattern, v in spec.clauses:
            match pattern:
                case Tup((pz, pr)):
                    binds = match_pattern(pz, z)
                    if binds is None:
                        continue
                    clauses.append((subst_apply(P.PnlSubst(binds), pr), v))
                case _:
                    raise SemanticsError(f"{p}: clause pattern is not a pair")
        extra = spec.extra_support | supp(z)
        new_preds[p] = PredSpec(tuple(clauses), spec.default, extra)
    return HerbrandModel(new_sig, new_preds)
