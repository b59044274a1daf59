"""Simply-typed higher-order logic: types, terms, typing, alpha-equivalence,
capture-avoiding substitution, beta-normalization, and alpha-beta equality.

Constants carry their own types; the quantifier constant is generated on
demand per domain type.  Equality everywhere downstream is alpha-beta (no
eta).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Union

from .atoms import Atom, Perm, fresh_atoms
from .pnl import (AbsSort, BaseSort, NameSort, PnlSignature, PnlSort,
                  TupleSort, Unknown)


# ---------------------------------------------------------------------------
# types

@dataclass(frozen=True)
class BaseT:
    name: str

    def __repr__(self):
        return self.name


@dataclass(frozen=True)
class TupleT:
    items: tuple

    def __repr__(self):
        return "<" + ",".join(map(repr, self.items)) + ">"


@dataclass(frozen=True)
class ArrowT:
    arg: "HolType"
    res: "HolType"

    def __repr__(self):
        return f"({self.arg!r} -> {self.res!r})"


HolType = Union[BaseT, TupleT, ArrowT]

O = BaseT("o")


def name_sort_type(name: str) -> BaseT:
    return BaseT(f"mu_{name}")


def sort_to_type(sort: PnlSort) -> HolType:
    match sort:
        case NameSort(n) | BaseSort(n):
            return name_sort_type(n)
        case TupleSort(items):
            return TupleT(tuple(sort_to_type(s) for s in items))
        case AbsSort(n, body):
            return ArrowT(name_sort_type(n), sort_to_type(body))
    raise TypeError(f"not a sort: {sort!r}")


def type_to_sort(sig: PnlSignature, ty: HolType) -> Optional[PnlSort]:
    """Invert sort_to_type where possible; None for non-image types."""
    match ty:
        case BaseT(n) if n.startswith("mu_"):
            base = n[3:]
            if base in sig.name_sorts:
                return NameSort(base)
            if base in sig.base_sorts:
                return BaseSort(base)
            return None
        case TupleT(items):
            sorts = tuple(type_to_sort(sig, t) for t in items)
            return TupleSort(sorts) if all(s is not None for s in sorts) else None
        case ArrowT(BaseT(n), res) if n.startswith("mu_") and n[3:] in sig.name_sorts:
            body = type_to_sort(sig, res)
            return AbsSort(n[3:], body) if body is not None else None
    return None


# ---------------------------------------------------------------------------
# variables

@dataclass(frozen=True)
class AtomVar:
    atom: Atom

    def __repr__(self):
        return repr(self.atom)


@dataclass(frozen=True)
class UnkVar:
    unknown: Unknown
    ctx: tuple  # the context already restricted to pmss(unknown), in order

    def __post_init__(self):
        if len(set(self.ctx)) != len(self.ctx):
            raise ValueError("context atoms must be distinct")
        for a in self.ctx:
            if a not in self.unknown.pmss:
                raise ValueError(f"context atom {a} outside the permission set")

    def __repr__(self):
        return f"{self.unknown!r}_[{','.join(map(repr, self.ctx))}]"


@dataclass(frozen=True)
class PlainVar:
    type: HolType
    index: int

    def __repr__(self):
        return f"v{self.index}:{self.type!r}"


HolVar = Union[AtomVar, UnkVar, PlainVar]


def var_type(v: HolVar) -> HolType:
    match v:
        case AtomVar(a):
            return name_sort_type(a.sort)
        case UnkVar(unk, ctx):
            ty = sort_to_type(unk.sort)
            for a in reversed(ctx):
                ty = ArrowT(name_sort_type(a.sort), ty)
            return ty
        case PlainVar(ty, _):
            return ty
    raise TypeError(f"not a variable: {v!r}")


# ---------------------------------------------------------------------------
# terms

@dataclass(frozen=True)
class Var:
    var: HolVar


@dataclass(frozen=True)
class Lam:
    var: HolVar
    body: "HolTerm"


@dataclass(frozen=True)
class App:
    fn: "HolTerm"
    arg: "HolTerm"


@dataclass(frozen=True)
class HTup:
    items: tuple


@dataclass(frozen=True)
class Const:
    name: str
    type: HolType


HolTerm = Union[Var, Lam, App, HTup, Const]

BOT = Const("bot", O)
IMP = Const("imp", ArrowT(O, ArrowT(O, O)))


def forall_const(domain: HolType) -> Const:
    return Const("forall", ArrowT(ArrowT(domain, O), O))


def forall(v: HolVar, body: HolTerm) -> HolTerm:
    return App(forall_const(var_type(v)), Lam(v, body))


def imp(p: HolTerm, q: HolTerm) -> HolTerm:
    return App(App(IMP, p), q)


def apps(fn: HolTerm, *args: HolTerm) -> HolTerm:
    for u in args:
        fn = App(fn, u)
    return fn


def lams(vs: Iterable[HolVar], body: HolTerm) -> HolTerm:
    for v in reversed(list(vs)):
        body = Lam(v, body)
    return body


@dataclass(frozen=True)
class HolSignature:
    """Registry of the constants a document may mention."""

    constants: Mapping[str, HolType]

    def check_const(self, c: Const):
        if c.name == "forall":
            match c.type:
                case ArrowT(ArrowT(_, res_o), out_o) if res_o == O and out_o == O:
                    return
            raise HolTypeError(f"malformed quantifier constant {c!r}")
        want = self.constants.get(c.name)
        if want is None:
            raise HolTypeError(f"unknown constant {c.name}")
        if want != c.type:
            raise HolTypeError(f"constant {c.name} declared {want!r}, used at {c.type!r}")


BASE_SIGNATURE = HolSignature({"bot": O, "imp": IMP.type})


class HolTypeError(Exception):
    pass


def hol_type_of(t: HolTerm, sig: Optional[HolSignature] = None) -> HolType:
    match t:
        case Var(v):
            return var_type(v)
        case Lam(v, body):
            return ArrowT(var_type(v), hol_type_of(body, sig))
        case App(fn, arg):
            fty = hol_type_of(fn, sig)
            aty = hol_type_of(arg, sig)
            match fty:
                case ArrowT(want, res):
                    if want != aty:
                        raise HolTypeError(
                            f"application expects {want!r}, got {aty!r} in {t!r}")
                    return res
            raise HolTypeError(f"applying a non-function of type {fty!r}")
        case HTup(items):
            return TupleT(tuple(hol_type_of(r, sig) for r in items))
        case Const(_, ty):
            if sig is not None:
                sig.check_const(t)
            return ty
    raise HolTypeError(f"not a term: {t!r}")


# ---------------------------------------------------------------------------
# free variables, alpha-equivalence

def fv(t: HolTerm) -> frozenset:
    match t:
        case Var(v):
            return frozenset([v])
        case Lam(v, body):
            return fv(body) - {v}
        case App(fn, arg):
            return fv(fn) | fv(arg)
        case HTup(items):
            return frozenset().union(*map(fv, items)) if items else frozenset()
        case Const(_, _):
            return frozenset()
    raise TypeError(f"not a term: {t!r}")


def _alpha(t, u, env_t: dict, env_u: dict, level: int) -> bool:
    match (t, u):
        case (Var(v), Var(w)):
            lt, lu = env_t.get(v), env_u.get(w)
            if lt is None and lu is None:
                return v == w
            return lt == lu
        case (Lam(v, b1), Lam(w, b2)):
            if var_type(v) != var_type(w):
                return False
            et = dict(env_t)
            eu = dict(env_u)
            et[v] = level
            eu[w] = level
            return _alpha(b1, b2, et, eu, level + 1)
        case (App(f1, a1), App(f2, a2)):
            return _alpha(f1, f2, env_t, env_u, level) and \
                _alpha(a1, a2, env_t, env_u, level)
        case (HTup(xs), HTup(ys)):
            return len(xs) == len(ys) and all(
                _alpha(x, y, env_t, env_u, level) for x, y in zip(xs, ys))
        case (Const(n1, ty1), Const(n2, ty2)):
            return n1 == n2 and ty1 == ty2
    return False


def hol_alpha_eq(t: HolTerm, u: HolTerm) -> bool:
    return _alpha(t, u, {}, {}, 0)


# ---------------------------------------------------------------------------
# substitution

def _fresh_var_like(v: HolVar, avoid: frozenset) -> HolVar:
    match v:
        case AtomVar(a):
            taken = {w.atom for w in avoid if isinstance(w, AtomVar)}
            return AtomVar(fresh_atoms([a.sort], taken)[0])
        case UnkVar(unk, ctx):
            taken = {w.unknown.index for w in avoid
                     if isinstance(w, UnkVar) and w.unknown.sort == unk.sort
                     and w.unknown.pmss == unk.pmss and w.ctx == ctx}
            i = 0
            while i in taken:
                i += 1
            return UnkVar(Unknown(unk.sort, unk.pmss, i), ctx)
        case PlainVar(ty, _):
            taken = {w.index for w in avoid
                     if isinstance(w, PlainVar) and w.type == ty}
            i = 0
            while i in taken:
                i += 1
            return PlainVar(ty, i)
    raise TypeError(f"not a variable: {v!r}")


def hol_subst_parallel(t: HolTerm, mapping: Mapping[HolVar, HolTerm]) -> HolTerm:
    mapping = {v: u for v, u in mapping.items() if u != Var(v)}
    if not mapping:
        return t

    def go(t, mapping):
        match t:
            case Var(v):
                return mapping.get(v, t)
            case Const(_, _):
                return t
            case App(fn, arg):
                return App(go(fn, mapping), go(arg, mapping))
            case HTup(items):
                return HTup(tuple(go(r, mapping) for r in items))
            case Lam(v, body):
                inner = {w: u for w, u in mapping.items() if w != v}
                inner = {w: u for w, u in inner.items() if w in fv(body)}
                if not inner:
                    return t
                danger = frozenset().union(*(fv(u) for u in inner.values()))
                if v in danger:
                    avoid = danger | fv(body) | frozenset(inner)
                    v2 = _fresh_var_like(v, avoid)
                    inner[v] = Var(v2)
                    return Lam(v2, go(body, inner))
                return Lam(v, go(body, inner))
        raise TypeError(f"not a term: {t!r}")

    return go(t, mapping)


def hol_subst(t: HolTerm, v: HolVar, u: HolTerm) -> HolTerm:
    if hol_type_of(u) != var_type(v):
        raise HolTypeError(f"substituting {u!r} of wrong type for {v!r}")
    return hol_subst_parallel(t, {v: u})


def hol_perm_act(pi: Perm, t: HolTerm) -> HolTerm:
    """Permutation of atom-variables, bound and free alike."""
    match t:
        case Var(AtomVar(a)):
            return Var(AtomVar(pi(a)))
        case Var(_) | Const(_, _):
            return t
        case Lam(AtomVar(a), body):
            return Lam(AtomVar(pi(a)), hol_perm_act(pi, body))
        case Lam(v, body):
            return Lam(v, hol_perm_act(pi, body))
        case App(fn, arg):
            return App(hol_perm_act(pi, fn), hol_perm_act(pi, arg))
        case HTup(items):
            return HTup(tuple(hol_perm_act(pi, r) for r in items))
    raise TypeError(f"not a term: {t!r}")


# ---------------------------------------------------------------------------
# beta-normalization (leftmost-outermost)

def _whnf(t: HolTerm) -> HolTerm:
    while True:
        match t:
            case App(fn, arg):
                fn = _whnf(fn)
                match fn:
                    case Lam(v, body):
                        t = hol_subst_parallel(body, {v: arg})
                    case _:
                        return App(fn, arg)
            case _:
                return t


def beta_normalize(t: HolTerm) -> HolTerm:
    hol_type_of(t)  # simply-typed, hence strongly normalizing
    return _nf(t)


def _nf(t: HolTerm) -> HolTerm:
    t = _whnf(t)
    match t:
        case Var(_) | Const(_, _):
            return t
        case Lam(v, body):
            return Lam(v, _nf(body))
        case App(fn, arg):
            return App(_nf(fn), _nf(arg))
        case HTup(items):
            return HTup(tuple(_nf(r) for r in items))
    raise TypeError(f"not a term: {t!r}")


def alphabeta_eq(t: HolTerm, u: HolTerm) -> bool:
    if hol_type_of(t) != hol_type_of(u):
        raise HolTypeError("comparing terms of different types")
    return hol_alpha_eq(beta_normalize(t), beta_normalize(u))
