"""Permissive-nominal terms and propositions.

Terms carry permutation-suspended unknowns; equality used everywhere
downstream is the decidable alpha-equivalence implemented here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Union

from .atoms import (Atom, CofinAtomSet, Perm, PermissionSet, perm_image_set,
                    set_subset)


# ---------------------------------------------------------------------------
# sorts and signatures

@dataclass(frozen=True)
class NameSort:
    name: str

    def __repr__(self):
        return self.name


@dataclass(frozen=True)
class BaseSort:
    name: str

    def __repr__(self):
        return self.name


@dataclass(frozen=True)
class TupleSort:
    items: tuple

    def __repr__(self):
        return "<" + ",".join(map(repr, self.items)) + ">"


@dataclass(frozen=True)
class AbsSort:
    name: str  # the bound name-sort
    body: "PnlSort"

    def __repr__(self):
        return f"[{self.name}]{self.body!r}"


PnlSort = Union[NameSort, BaseSort, TupleSort, AbsSort]


class SignatureError(Exception):
    pass


@dataclass(frozen=True)
class PnlSignature:
    name_sorts: frozenset
    base_sorts: frozenset
    term_formers: Mapping[str, tuple]  # f -> (arg sort, result base-sort name)
    prop_formers: Mapping[str, PnlSort]  # P -> arg sort

    def __post_init__(self):
        if self.name_sorts & self.base_sorts:
            raise SignatureError("name sorts and base sorts must be disjoint")
        overlap = set(self.term_formers) & set(self.prop_formers)
        if overlap:
            raise SignatureError(f"former names used on both levels: {overlap}")
        for f, (arg, res) in self.term_formers.items():
            self._check_sort(arg, f)
            if res not in self.base_sorts:
                raise SignatureError(f"{f}: result sort {res} is not a declared base sort")
        for p, arg in self.prop_formers.items():
            self._check_sort(arg, p)

    def _check_sort(self, sort: PnlSort, owner: str):
        match sort:
            case NameSort(n):
                if n not in self.name_sorts:
                    raise SignatureError(f"{owner}: undeclared name sort {n}")
            case BaseSort(n):
                if n not in self.base_sorts:
                    raise SignatureError(f"{owner}: undeclared base sort {n}")
            case TupleSort(items):
                for s in items:
                    self._check_sort(s, owner)
            case AbsSort(n, body):
                if n not in self.name_sorts:
                    raise SignatureError(f"{owner}: undeclared name sort {n}")
                self._check_sort(body, owner)
            case _:
                raise SignatureError(f"{owner}: not a sort: {sort!r}")


@dataclass(frozen=True)
class Unknown:
    sort: PnlSort
    pmss: PermissionSet
    index: int

    def __repr__(self):
        return f"X{{{self.sort!r};{self.pmss!r};{self.index}}}"


# ---------------------------------------------------------------------------
# terms and propositions

@dataclass(frozen=True)
class AtomT:
    atom: Atom


@dataclass(frozen=True)
class Tup:
    items: tuple


@dataclass(frozen=True)
class Former:
    name: str
    arg: "PnlTerm"


@dataclass(frozen=True)
class AbsT:
    atom: Atom
    body: "PnlTerm"


@dataclass(frozen=True)
class Sus:
    perm: Perm
    unknown: Unknown

    @staticmethod
    def of(unknown: Unknown) -> "Sus":
        return Sus(Perm.identity(), unknown)


PnlTerm = Union[AtomT, Tup, Former, AbsT, Sus]


@dataclass(frozen=True)
class Bot:
    pass


@dataclass(frozen=True)
class Imp:
    left: "PnlProp"
    right: "PnlProp"


@dataclass(frozen=True)
class Pred:
    name: str
    arg: PnlTerm


@dataclass(frozen=True)
class All:
    unknown: Unknown
    body: "PnlProp"


PnlProp = Union[Bot, Imp, Pred, All]


class SortError(Exception):
    def __init__(self, message: str, subterm=None):
        super().__init__(message)
        self.subterm = subterm


def sort_of(sig: PnlSignature, t: PnlTerm) -> PnlSort:
    match t:
        case AtomT(a):
            if a.sort not in sig.name_sorts:
                raise SortError(f"undeclared name sort {a.sort}", t)
            return NameSort(a.sort)
        case Tup(items):
            return TupleSort(tuple(sort_of(sig, r) for r in items))
        case Former(f, arg):
            if f not in sig.term_formers:
                raise SortError(f"unknown term-former {f}", t)
            want, res = sig.term_formers[f]
            got = sort_of(sig, arg)
            if got != want:
                raise SortError(f"{f} expects {want!r}, got {got!r}", t)
            return BaseSort(res)
        case AbsT(a, body):
            if a.sort not in sig.name_sorts:
                raise SortError(f"undeclared name sort {a.sort}", t)
            return AbsSort(a.sort, sort_of(sig, body))
        case Sus(_, x):
            sig._check_sort(x.sort, "unknown")
            return x.sort
    raise SortError(f"not a term: {t!r}", t)


def check_prop(sig: PnlSignature, phi: PnlProp) -> bool:
    match phi:
        case Bot():
            return True
        case Imp(a, b):
            return check_prop(sig, a) and check_prop(sig, b)
        case Pred(p, arg):
            if p not in sig.prop_formers:
                raise SortError(f"unknown proposition-former {p}", phi)
            got = sort_of(sig, arg)
            if got != sig.prop_formers[p]:
                raise SortError(f"{p} expects {sig.prop_formers[p]!r}, got {got!r}", phi)
            return True
        case All(_, body):
            return check_prop(sig, body)
    raise SortError(f"not a proposition: {phi!r}", phi)


# ---------------------------------------------------------------------------
# permutation actions

def perm_act(pi: Perm, x):
    if pi.is_identity:
        return x
    match x:
        case AtomT(a):
            return AtomT(pi(a))
        case Tup(items):
            return Tup(tuple(perm_act(pi, r) for r in items))
        case Former(f, arg):
            return Former(f, perm_act(pi, arg))
        case AbsT(a, body):
            return AbsT(pi(a), perm_act(pi, body))
        case Sus(pi2, unk):
            return Sus(pi.compose(pi2), unk)
        case Bot():
            return x
        case Imp(a, b):
            return Imp(perm_act(pi, a), perm_act(pi, b))
        case Pred(p, arg):
            return Pred(p, perm_act(pi, arg))
        case All(unk, body):
            return All(unk, perm_act(pi, body))
    raise TypeError(f"not PNL syntax: {x!r}")


class Perm2:
    """Sort- and permission-set-preserving bijection on unknowns."""

    __slots__ = ("_map",)

    def __init__(self, moves: Mapping[Unknown, Unknown]):
        cleaned = {x: y for x, y in moves.items() if x != y}
        for x, y in cleaned.items():
            if x.sort != y.sort or x.pmss != y.pmss:
                raise ValueError(f"level-2 move {x!r} -> {y!r} changes sort or permission set")
        if set(cleaned.values()) != set(cleaned):
            raise ValueError("level-2 permutation must be a bijection")
        self._map = cleaned

    @staticmethod
    def swap(x: Unknown, y: Unknown) -> "Perm2":
        return Perm2({x: y, y: x}) if x != y else Perm2({})

    def __call__(self, x: Unknown) -> Unknown:
        return self._map.get(x, x)


def perm2_act(big_pi: Perm2, x):
    match x:
        case AtomT(_):
            return x
        case Tup(items):
            return Tup(tuple(perm2_act(big_pi, r) for r in items))
        case Former(f, arg):
            return Former(f, perm2_act(big_pi, arg))
        case AbsT(a, body):
            return AbsT(a, perm2_act(big_pi, body))
        case Sus(pi, unk):
            return Sus(pi, big_pi(unk))
        case Bot():
            return x
        case Imp(a, b):
            return Imp(perm2_act(big_pi, a), perm2_act(big_pi, b))
        case Pred(p, arg):
            return Pred(p, perm2_act(big_pi, arg))
        case All(unk, body):
            return All(big_pi(unk), perm2_act(big_pi, body))
    raise TypeError(f"not PNL syntax: {x!r}")


# ---------------------------------------------------------------------------
# free atoms / free unknowns

def free_atoms(x) -> CofinAtomSet:
    match x:
        case AtomT(a):
            return CofinAtomSet.finite([a])
        case Tup(items):
            out = CofinAtomSet.finite()
            for r in items:
                out = out.union(free_atoms(r))
            return out
        case Former(_, arg) | Pred(_, arg):
            return free_atoms(arg)
        case AbsT(a, body):
            return free_atoms(body).minus_finite([a])
        case Sus(pi, unk):
            return perm_image_set(pi, unk.pmss.as_cofin())
        case Bot():
            return CofinAtomSet.finite()
        case Imp(a, b):
            return free_atoms(a).union(free_atoms(b))
        case All(_, body):
            return free_atoms(body)
    raise TypeError(f"not PNL syntax: {x!r}")


def free_unknowns(x) -> frozenset:
    match x:
        case AtomT(_) | Bot():
            return frozenset()
        case Tup(items):
            return frozenset().union(*(free_unknowns(r) for r in items)) if items else frozenset()
        case Former(_, arg) | Pred(_, arg):
            return free_unknowns(arg)
        case AbsT(_, body):
            return free_unknowns(body)
        case Sus(_, unk):
            return frozenset([unk])
        case Imp(a, b):
            return free_unknowns(a) | free_unknowns(b)
        case All(unk, body):
            return free_unknowns(body) - {unk}
    raise TypeError(f"not PNL syntax: {x!r}")


# ---------------------------------------------------------------------------
# alpha-equivalence

def _perms_agree_on_pmss(p1: Perm, p2: Perm, pmss: PermissionSet) -> bool:
    for a in p1.nontriv | p2.nontriv:
        if a in pmss and p1(a) != p2(a):
            return False
    return True


def alpha_eq(x, y) -> bool:
    if x is y:
        return True
    match (x, y):
        case (AtomT(a), AtomT(b)):
            return a == b
        case (Tup(xs), Tup(ys)):
            return len(xs) == len(ys) and all(alpha_eq(a, b) for a, b in zip(xs, ys))
        case (Former(f, a), Former(g, b)):
            return f == g and alpha_eq(a, b)
        case (AbsT(a, r), AbsT(b, s)):
            if a == b:
                return alpha_eq(r, s)
            if a.sort != b.sort or b in free_atoms(r):
                return False
            return alpha_eq(perm_act(Perm.swap(b, a), r), s)
        case (Sus(p1, u1), Sus(p2, u2)):
            return u1 == u2 and _perms_agree_on_pmss(p1, p2, u1.pmss)
        case (Bot(), Bot()):
            return True
        case (Imp(a1, b1), Imp(a2, b2)):
            return alpha_eq(a1, a2) and alpha_eq(b1, b2)
        case (Pred(p, a), Pred(q, b)):
            return p == q and alpha_eq(a, b)
        case (All(u1, b1), All(u2, b2)):
            if u1 == u2:
                return alpha_eq(b1, b2)
            if u1.sort != u2.sort or u1.pmss != u2.pmss or u2 in free_unknowns(b1):
                return False
            return alpha_eq(perm2_act(Perm2.swap(u2, u1), b1), b2)
    return False


# ---------------------------------------------------------------------------
# level-2 substitution

class PnlSubst:
    """Finite map from unknowns to terms (identity elsewhere)."""

    __slots__ = ("_map",)

    def __init__(self, moves: Mapping[Unknown, PnlTerm]):
        self._map = {x: t for x, t in moves.items() if not alpha_eq(t, Sus.of(x))}

    def __call__(self, x: Unknown) -> PnlTerm:
        return self._map.get(x, Sus.of(x))

    def mapped(self) -> dict:
        return dict(self._map)

    def validate(self, sig: PnlSignature):
        for x, t in self._map.items():
            if sort_of(sig, t) != x.sort:
                raise SortError(f"substituting {t!r} of wrong sort for {x!r}", t)
            if not set_subset(free_atoms(t), x.pmss.as_cofin()):
                raise ValueError(f"free atoms of {t!r} escape the permission set of {x!r}")

    @property
    def nontriv(self) -> frozenset:
        produced = frozenset().union(
            *(free_unknowns(t) for t in self._map.values())) if self._map else frozenset()
        return frozenset(self._map) | produced


def _fresh_unknown_like(x: Unknown, avoid: Iterable[Unknown]) -> Unknown:
    taken = {u.index for u in avoid if u.sort == x.sort and u.pmss == x.pmss}
    i = 0
    while i in taken:
        i += 1
    return Unknown(x.sort, x.pmss, i)


def subst_apply(theta: PnlSubst, x):
    match x:
        case AtomT(_) | Bot():
            return x
        case Tup(items):
            return Tup(tuple(subst_apply(theta, r) for r in items))
        case Former(f, arg):
            return Former(f, subst_apply(theta, arg))
        case AbsT(a, body):
            return AbsT(a, subst_apply(theta, body))  # capturing, by design
        case Sus(pi, unk):
            return perm_act(pi, theta(unk))
        case Imp(a, b):
            return Imp(subst_apply(theta, a), subst_apply(theta, b))
        case Pred(p, arg):
            return Pred(p, subst_apply(theta, arg))
        case All(unk, body):
            if unk in theta.nontriv:
                fresh = _fresh_unknown_like(unk, theta.nontriv | free_unknowns(body))
                body = perm2_act(Perm2.swap(fresh, unk), body)
                unk = fresh
            return All(unk, subst_apply(theta, body))
    raise TypeError(f"not PNL syntax: {x!r}")


def subst_one(x, unk: Unknown, t: PnlTerm):
    """x[unk := t]."""
    return subst_apply(PnlSubst({unk: t}), x)


# ---------------------------------------------------------------------------
# signature saturation: tag every predicate with a guard argument

def saturate_signature(sig: PnlSignature, guard_sort: str) -> PnlSignature:
    if guard_sort in sig.base_sorts or guard_sort in sig.name_sorts:
        raise SignatureError(f"guard sort {guard_sort} already declared")
    props = {p: TupleSort((BaseSort(guard_sort), arg))
             for p, arg in sig.prop_formers.items()}
    return PnlSignature(sig.name_sorts, sig.base_sorts | {guard_sort},
                        dict(sig.term_formers), props)


def pi_translate(sig: PnlSignature, phi: PnlProp, guard: Unknown):
    """Saturated signature plus the proposition with every predicate guarded
    by the distinguished unknown."""
    match guard.sort:
        case BaseSort(name) if name not in sig.base_sorts:
            guard_sort = name
        case _:
            raise SortError("guard unknown must have a fresh base sort", guard)
    if not set_subset(free_atoms(phi), guard.pmss.as_cofin()):
        raise ValueError("free atoms of the proposition escape the guard's permission set")
    new_sig = saturate_signature(sig, guard_sort)

    def go(p):
        match p:
            case Bot():
                return p
            case Imp(a, b):
                return Imp(go(a), go(b))
            case Pred(name, arg):
                return Pred(name, Tup((Sus.of(guard), arg)))
            case All(unk, body):
                return All(unk, go(body))
        raise TypeError(f"not a proposition: {p!r}")

    return new_sig, go(phi)
