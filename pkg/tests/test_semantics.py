import random

import pytest

from nomhol.atoms import (Atom, CofinAtomSet, Perm, PermissionSet, Renaming,
                          freshening_pair, set_subset)
from nomhol.capture import canonical_context, capture_check, capture_infer
from nomhol import hol as H
from nomhol.corpus import restricted_derivations
from nomhol.pnl import (AbsT, All, AtomT, Bot, Former, Imp, Pred, PnlSignature,
                        Sus, Tup, TupleSort, Unknown, alpha_eq, free_atoms,
                        free_unknowns, perm_act, subst_one)
from nomhol.semantics import (AtomV, BoolV, ConstFn, EnumerationError, FnV,
                              HerbrandModel, HolValuation, LamClos, PendingRen,
                              PredSpec, RawFn, RenElem, RenV, SemanticsError,
                              SupportCapError, TupV, UnboundVariableError,
                              Valuation, abstract_atoms, as_atom, as_bool,
                              as_ren, canonical_ground, canonicalize,
                              convert_model, enumerate_ground, eval_hol,
                              eval_pnl_prop, eval_pnl_term, fn_apply,
                              ground_renaming_action, lift_valuation,
                              merge_ren_tuple, mk_ren, ren_act_sem, ren_eq,
                              rename_valuation, sem_eq, square_check, supp,
                              supp_sem)
from nomhol.translate import translate, translate_derivation, translate_signature

from gen import (IOTA, NSORT, NU, PMSS_ALL, PMSS_HALF, SIG, WINDOW, X0, X1,
                 rand_ground_term, rand_perm, rand_prop, rand_term)

ENV = translate_signature(SIG)
ID = Renaming.identity()


def a(i):
    return Atom(NU, i)


def var(i):
    return Former("var", AtomT(a(i)))


def app(s, t):
    return Former("app", Tup((s, t)))


# Pattern variables with a wide permission set so that matching never fails
# for permission reasons on desk-scale ground terms.
WIDE = PermissionSet(plus=frozenset(Atom(NU, i) for i in range(0, 40)))
W1 = Unknown(IOTA, WIDE, 90)
WN = Unknown(NSORT, WIDE, 92)

EQ_SPEC = PredSpec(((Tup((Sus.of(W1), Sus.of(W1))), 1),), 0)
ISVAR_SPEC = PredSpec(((Former("var", Sus.of(WN)), 1),), 0)
NONEQ_SPEC = PredSpec(((var(0), 1),), 0)          # support {nu@0}
NEG_EQ_SPEC = PredSpec(((Tup((Sus.of(W1), Sus.of(W1))), 0),), 1)

M_ISVAR = HerbrandModel(SIG, {"P": ISVAR_SPEC, "equal": EQ_SPEC})
M_NONEQ = HerbrandModel(SIG, {"P": NONEQ_SPEC, "equal": EQ_SPEC})
M_NEG = HerbrandModel(SIG, {"P": PredSpec((), 1), "equal": NEG_EQ_SPEC})
MODELS = [M_ISVAR, M_NONEQ, M_NEG]

GROUND_ALL = enumerate_ground(SIG, IOTA, [a(0), a(1), a(2)], 2)
GROUND_HALF = enumerate_ground(SIG, IOTA, [a(0), a(-1), a(-2)], 2)


def rand_val(rng):
    return Valuation({X0: rng.choice(GROUND_ALL), X1: rng.choice(GROUND_HALF)})


def rand_renaming(rng, atoms=tuple(WINDOW)):
    moves = {}
    for b in rng.sample(list(atoms), rng.randrange(0, len(atoms) + 1)):
        t = rng.choice(list(atoms))
        if t != b:
            moves[b] = t
    return Renaming(moves)


def d_for(*xs):
    need = frozenset()
    for x in xs:
        need |= capture_infer(x)
    return canonical_context(need)


# ---------------------------------------------------------------------------
# the renaming action on ground terms


def test_renaming_action_pointwise_may_identify():
    got = ground_renaming_action(Renaming.atomic(a(0), a(1)),
                                 Tup((AtomT(a(0)), AtomT(a(1)))))
    assert got == Tup((AtomT(a(1)), AtomT(a(1))))


def test_renaming_action_freshens_clashing_binders():
    x = AbsT(a(0), var(0))
    got = ground_renaming_action(Renaming.atomic(a(0), a(1)), x)
    assert alpha_eq(got, x)
    y = AbsT(a(0), app(var(0), var(1)))
    got = ground_renaming_action(Renaming.atomic(a(1), a(2)), y)
    assert alpha_eq(got, AbsT(a(0), app(var(0), var(2))))


def test_renaming_action_identity_and_monoid():
    rng = random.Random(501)
    for _ in range(200):
        x = rand_ground_term(rng)
        assert ground_renaming_action(ID, x) == x
        r1, r2 = rand_renaming(rng), rand_renaming(rng)
        lhs = ground_renaming_action(r1, ground_renaming_action(r2, x))
        rhs = ground_renaming_action(r1.compose(r2), x)
        assert alpha_eq(lhs, rhs), (x, r1, r2)


def test_renamed_support_is_pointwise_image():
    rng = random.Random(503)
    for _ in range(200):
        x = rand_ground_term(rng)
        rho = rand_renaming(rng)
        s = supp(x)
        image = {rho(q) for q in s}
        got = supp(ground_renaming_action(rho, x))
        assert got <= image
        if len({rho(q) for q in s}) == len(s):  # injective on the support
            assert got == image


def test_support_structural_laws():
    rng = random.Random(505)
    for _ in range(200):
        x = rand_ground_term(rng, 2)
        y = rand_ground_term(rng, 2)
        b = rng.choice(WINDOW)
        assert supp(AbsT(b, x)) == supp(x) - {b}
        assert supp(Tup((x, y))) == supp(x) | supp(y)
        assert supp(AtomT(b)) == {b}


# ---------------------------------------------------------------------------
# suspension pairs and their equality


def test_suspended_atoms_collapse_to_plain_atoms():
    assert ren_eq(RenElem(Renaming.atomic(a(0), a(1)), AtomT(a(0))),
                  RenElem(ID, AtomT(a(1))))
    rng = random.Random(507)
    for _ in range(200):
        rho = rand_renaming(rng)
        b = rng.choice(WINDOW)
        assert ren_eq(RenElem(rho, AtomT(b)), RenElem(ID, AtomT(rho(b))))
    # ...and distinct atoms stay distinct
    assert not ren_eq(RenElem(ID, AtomT(a(0))), RenElem(ID, AtomT(a(1))))


def test_collapsing_pair_differs_from_diagonal():
    collapsed = RenElem(Renaming.atomic(a(0), a(1)), Tup((AtomT(a(0)), AtomT(a(1)))))
    diagonal = RenElem(ID, Tup((AtomT(a(1)), AtomT(a(1)))))
    assert not ren_eq(collapsed, diagonal)


def test_ren_eq_reflexive_and_alpha_aware():
    rng = random.Random(509)
    for _ in range(200):
        x = rand_ground_term(rng)
        assert ren_eq(RenElem(ID, x), RenElem(ID, x))
    assert ren_eq(RenElem(ID, AbsT(a(0), var(0))), RenElem(ID, AbsT(a(1), var(1))))


def test_ren_eq_absorbs_permutations_into_the_term():
    rng = random.Random(511)
    for _ in range(200):
        x = rand_ground_term(rng)
        rho = rand_renaming(rng)
        pi = rand_perm(rng)
        pi_ren = Renaming({q: pi(q) for q in pi.nontriv})
        assert ren_eq(RenElem(rho.compose(pi_ren), x),
                      RenElem(rho, perm_act(pi, x))), (x, rho, pi)


def test_canonicalize_preserves_the_equivalence_class():
    rng = random.Random(513)
    for _ in range(200):
        x = rand_ground_term(rng)
        rho = rand_renaming(rng)
        e = mk_ren(rho, x)
        assert ren_eq(e, RenElem(rho, x))


def test_canonicalize_absorbs_injective_moves():
    e = canonicalize(RenElem(Renaming.atomic(a(0), a(3)), var(0)))
    assert e.rho.is_identity and alpha_eq(e.val, var(3))


def test_canonicalize_keeps_genuine_collapses():
    e = canonicalize(RenElem(Renaming.atomic(a(0), a(1)),
                             Tup((AtomT(a(0)), AtomT(a(1))))))
    assert not e.rho.is_identity


def test_ren_eq_support_cap():
    big = Tup(tuple(AtomT(a(i)) for i in range(9)))
    with pytest.raises(SupportCapError):
        ren_eq(RenElem(ID, big), RenElem(ID, big))


def test_componentwise_image_conflates_what_suspensions_distinguish():
    # The tuple-of-suspensions value of the collapsed pair coincides with the
    # diagonal componentwise, even though the merged suspensions differ.
    rho = Renaming.atomic(a(0), a(1))
    pair = TupV((RenV(RenElem(ID, AtomT(a(0)))), RenV(RenElem(ID, AtomT(a(1))))))
    diag = TupV((RenV(RenElem(ID, AtomT(a(1)))), RenV(RenElem(ID, AtomT(a(1))))))
    assert sem_eq(ren_act_sem(rho, pair), diag)
    assert not ren_eq(RenElem(rho, Tup((AtomT(a(0)), AtomT(a(1))))),
                      as_ren(diag))


# ---------------------------------------------------------------------------
# function values


def dup_fn():
    """Equivariant: wraps its argument twice under the pair former."""

    def f(v):
        e = as_ren(v)
        return RenV(RenElem(e.rho, app(e.val, e.val)))

    return RawFn(f, frozenset())


def pair_fn():
    """Pairs its argument with a fixed element; supported by that element's
    free atoms."""

    def f(v):
        return TupV((v, RenV(RenElem(ID, var(0)))))

    return RawFn(f, frozenset([a(0)]))


def dup_clos():
    """Duplication via the tuple-merging clause, as a closure.  NOT a
    supported function: merging splits entangled collapses apart."""
    pv = H.PlainVar(H.sort_to_type(IOTA), 5)
    t = H.Lam(pv, H.App(ENV.term_const("app"), H.HTup((H.Var(pv), H.Var(pv)))))
    v, _ = eval_hol(ENV, M_ISVAR, HolValuation(), t)
    assert isinstance(v, FnV) and isinstance(v.fn, LamClos)
    return v.fn


def abs_clos():
    """Wraps its argument under a fresh binder; a supported closure."""
    pv = H.PlainVar(H.sort_to_type(IOTA), 5)
    t = H.Lam(pv, H.App(ENV.term_const("lam"),
                        H.Lam(H.AtomVar(a(6)), H.Var(pv))))
    v, _ = eval_hol(ENV, M_ISVAR, HolValuation(), t)
    assert isinstance(v, FnV) and isinstance(v.fn, LamClos)
    return v.fn


def _rand_arg(rng):
    return RenV(mk_ren(rand_renaming(rng), rand_ground_term(rng, 2)))


def apply_with_pair(rho, g, arg, extra_avoid=()):
    blocked = CofinAtomSet.finite(supp_sem(arg) | g.support)
    r1, r2 = freshening_pair(rho.nontriv, blocked, avoid=extra_avoid)
    return ren_act_sem(r2.compose(rho), fn_apply(FnV(g), ren_act_sem(r1, arg)))


def test_deferred_renaming_independent_of_freshening_choice():
    rng = random.Random(515)
    fns = [dup_fn(), pair_fn(), abs_clos()]
    for i in range(210):
        g = fns[i % len(fns)]
        rho = rand_renaming(rng)
        arg = _rand_arg(rng)
        first = apply_with_pair(rho, g, arg)
        blocked = CofinAtomSet.finite(supp_sem(arg) | g.support)
        r1, _ = freshening_pair(rho.nontriv, blocked)
        second = apply_with_pair(rho, g, arg, extra_avoid=r1.img)
        assert sem_eq(first, second), (rho, arg)


def test_renaming_distributes_over_supported_application():
    rng = random.Random(517)
    fns = [dup_fn(), pair_fn(), abs_clos()]
    for i in range(300):
        g = fns[i % len(fns)]
        rho = rand_renaming(rng)
        arg = _rand_arg(rng)
        lhs = ren_act_sem(rho, fn_apply(FnV(g), arg))
        rhs = fn_apply(ren_act_sem(rho, FnV(g)), ren_act_sem(rho, arg))
        assert sem_eq(lhs, rhs), (rho, arg)


def test_merged_duplication_closure_is_not_a_supported_function():
    # Duplication routed through the tuple-merging clause fails the
    # distribution law under a collapsing renaming: acting first entangles
    # the two copies through a shared collapse, while applying the renamed
    # closure re-merges two independently relabeled copies.
    g = dup_clos()
    rho = Renaming({a(0): a(1), a(2): a(1)})
    arg = RenV(RenElem(ID, app(var(0), var(2))))
    lhs = ren_act_sem(rho, fn_apply(FnV(g), arg))
    rhs = fn_apply(ren_act_sem(rho, FnV(g)), ren_act_sem(rho, arg))
    assert not sem_eq(lhs, rhs)


def test_deferred_renaming_with_disjoint_domain_is_plain_application():
    rng = random.Random(519)
    g = pair_fn()
    checked = 0
    while checked < 200:
        rho = rand_renaming(rng)
        if rho.dom & g.support:
            continue
        arg = _rand_arg(rng)
        checked += 1
        assert sem_eq(fn_apply(FnV(PendingRen(rho, g)), arg),
                      fn_apply(FnV(g), arg)), (rho, arg)


def test_abstraction_elements_act_like_renaming_functions():
    rng = random.Random(521)
    for _ in range(220):
        x = rand_ground_term(rng, 3)
        b = rng.choice(WINDOW)
        f = RenV(RenElem(ID, AbsT(b, x)))
        assert ren_eq(as_ren(fn_apply(f, AtomV(b))), RenElem(ID, x))
        c = rng.choice(WINDOW + [a(7)])
        if c != b:
            got = as_ren(fn_apply(f, AtomV(c)))
            assert ren_eq(got, RenElem(Renaming.atomic(b, c), x)), (x, b, c)
        # the element is supported away from its bound atom
        assert ren_eq(as_ren(ren_act_sem(Renaming.atomic(b, a(9)), f)),
                      RenElem(ID, AbsT(b, x)))


def test_suspended_abstraction_application():
    # a suspended abstraction applied to an atom composes the atomic move
    rho = Renaming.atomic(a(1), a(2))
    f = RenV(RenElem(rho, AbsT(a(0), app(var(0), var(1)))))
    got = as_ren(fn_apply(f, AtomV(a(3))))
    assert ren_eq(got, RenElem(ID, app(var(3), var(2))))


def test_renaming_function_is_not_an_abstraction_element():
    # the function realizing [nu@0:=nu@1] on atoms differs from every
    # abstraction-of-an-atom element on at least one input
    raw = RawFn(lambda v: AtomV(Renaming.atomic(a(0), a(1))(as_atom(v))),
                frozenset([a(0), a(1)]))

    def table(g):
        return tuple(as_atom(fn_apply(g, AtomV(q))) for q in WINDOW)

    want = table(FnV(raw))
    candidates = [RenV(RenElem(ID, AbsT(c, AtomT(d))))
                  for c in WINDOW + [a(5)] for d in WINDOW + [a(5)]]
    assert all(table(g) != want for g in candidates)


def test_boolean_and_tuple_values_have_trivial_or_pointwise_action():
    rho = Renaming.atomic(a(0), a(1))
    assert ren_act_sem(rho, BoolV(1)) == BoolV(1)
    assert ren_act_sem(rho, AtomV(a(0))) == AtomV(a(1))
    v = RenV(RenElem(ID, Tup((AtomT(a(0)), AtomT(a(0))))))
    assert ren_eq(as_ren(ren_act_sem(rho, v)),
                  RenElem(ID, Tup((AtomT(a(1)), AtomT(a(1))))))


def test_function_values_are_not_comparable():
    with pytest.raises(SemanticsError):
        sem_eq(FnV(dup_fn()), FnV(dup_fn()))


# ---------------------------------------------------------------------------
# a carrier whose renaming action strictly shrinks supports


STAR = "star"


def exploding_act(rho, el):
    if el == STAR:
        return el
    x, y = el
    if rho(x) == rho(y):
        return STAR
    return (rho(x), rho(y))


def exploding_supp(el):
    return frozenset() if el == STAR else frozenset(el)


def test_collapsing_action_can_erase_the_support():
    el = (a(0), a(1))
    rho = Renaming.atomic(a(0), a(1))
    got = exploding_act(rho, el)
    assert got == STAR
    image = {rho(q) for q in exploding_supp(el)}
    assert exploding_supp(got) == frozenset()
    assert frozenset() < image  # strictly smaller than the pointwise image


# ---------------------------------------------------------------------------
# models, valuations, and the nominal evaluator


def test_model_rejects_undeclared_proposition_former():
    with pytest.raises(SemanticsError):
        HerbrandModel(SIG, {"missing": EQ_SPEC})


def test_model_rejects_ill_sorted_clause_pattern():
    with pytest.raises(SemanticsError):
        HerbrandModel(SIG, {"P": EQ_SPEC})  # pair pattern for a unary former


def test_pred_spec_validation():
    with pytest.raises(ValueError):
        PredSpec((), 2)
    with pytest.raises(ValueError):
        PredSpec(((var(0), 7),), 0)


def test_pred_spec_first_match_and_support():
    spec = PredSpec(((var(0), 1), (Sus.of(W1), 0)), 1)
    assert spec.apply(var(0)) == 1
    assert spec.apply(var(1)) == 0
    assert spec.declared_support() == frozenset([a(0)])
    assert ISVAR_SPEC.declared_support() == frozenset()


def test_pred_spec_matching_is_alpha_aware():
    islam = PredSpec(((Former("lam", AbsT(a(0), Sus.of(W1))), 1),), 0)
    assert islam.apply(Former("lam", AbsT(a(3), var(3)))) == 1
    assert islam.apply(var(0)) == 0


def test_valuation_defaults_are_canonical_and_permitted():
    v = Valuation()
    got = v.get(SIG, X0)
    assert alpha_eq(got, var(-1))
    assert set_subset(free_atoms(got), X0.pmss.as_cofin())
    assert alpha_eq(canonical_ground(SIG, TupleSort((IOTA, IOTA)), X0.pmss),
                    Tup((var(-1), var(-1))))


def test_valuation_validation():
    Valuation({X0: var(0)}).validate(SIG)
    with pytest.raises(SemanticsError):
        Valuation({X0: Sus.of(X1)}).validate(SIG)
    with pytest.raises(SemanticsError):
        Valuation({X0: AtomT(a(0))}).validate(SIG)
    with pytest.raises(SemanticsError):
        Valuation({X1: var(3)}).validate(SIG)  # nu@3 is not permitted for X1


def test_eval_term_examples():
    val = Valuation({X0: var(0)})
    assert eval_pnl_term(M_ISVAR, val, var(0)) == var(0)
    assert eval_pnl_term(M_ISVAR, val,
                         Sus(Perm.swap(a(1), a(0)), X0)) == var(1)
    got = eval_pnl_term(M_ISVAR, val, AbsT(a(0), Sus.of(X0)))
    assert alpha_eq(got, AbsT(a(0), var(0)))


def test_eval_prop_examples():
    val = Valuation()
    eq = lambda s, t: Pred("equal", Tup((s, t)))
    assert eval_pnl_prop(M_ISVAR, val, eq(var(0), var(0))) == (1, True)
    assert eval_pnl_prop(M_ISVAR, val, eq(var(0), var(1))) == (0, True)
    assert eval_pnl_prop(M_NONEQ, val, Pred("P", var(0))) == (1, True)
    assert eval_pnl_prop(M_NONEQ, val, Pred("P", var(1))) == (0, True)
    assert eval_pnl_prop(M_ISVAR, val, Bot()) == (0, True)
    assert eval_pnl_prop(M_ISVAR, val, Imp(Bot(), Bot())) == (1, True)
    refl = All(X0, eq(Sus.of(X0), Sus.of(X0)))
    assert eval_pnl_prop(M_ISVAR, val, refl, depth=2) == (1, False)
    allvar = All(X0, Pred("P", Sus.of(X0)))
    assert eval_pnl_prop(M_ISVAR, val, allvar, depth=2) == (0, False)


def test_eval_prop_requires_depth_for_quantifiers():
    with pytest.raises(EnumerationError):
        eval_pnl_prop(M_ISVAR, Valuation(), All(X0, Bot()))


def test_term_evaluation_equivariant():
    rng = random.Random(523)
    for _ in range(250):
        r = rand_term(rng)
        pi = rand_perm(rng)
        val = rand_val(rng)
        assert alpha_eq(perm_act(pi, eval_pnl_term(M_ISVAR, val, r)),
                        eval_pnl_term(M_ISVAR, val, perm_act(pi, r))), (r, pi)


def test_term_evaluation_support_bound():
    rng = random.Random(525)
    for _ in range(250):
        r = rand_term(rng)
        val = rand_val(rng)
        got = eval_pnl_term(M_ISVAR, val, r)
        assert set_subset(CofinAtomSet.finite(supp(got)), free_atoms(r)), r


def test_substitution_lemma():
    rng = random.Random(527)
    checked = 0
    while checked < 250:
        val = rand_val(rng)
        rp = rand_term(rng, 2)
        vrp = eval_pnl_term(M_ISVAR, val, rp)
        if not set_subset(free_atoms(vrp), X0.pmss.as_cofin()):
            continue
        checked += 1
        val2 = val.updated(X0, vrp)
        r = rand_term(rng)
        assert alpha_eq(eval_pnl_term(M_ISVAR, val2, r),
                        eval_pnl_term(M_ISVAR, val, subst_one(r, X0, rp)))
        phi = rand_prop(rng, quantifiers=False)
        assert eval_pnl_prop(M_ISVAR, val2, phi) == \
            eval_pnl_prop(M_ISVAR, val, subst_one(phi, X0, rp))


def test_valuation_relevance():
    rng = random.Random(529)
    junk = Unknown(IOTA, PMSS_ALL, 47)
    for _ in range(250):
        val = rand_val(rng)
        x = rand_term(rng)
        trimmed = Valuation({u: val.get(SIG, u) for u in free_unknowns(x)})
        noisy = trimmed.updated(junk, var(2))
        assert alpha_eq(eval_pnl_term(M_ISVAR, val, x),
                        eval_pnl_term(M_ISVAR, noisy, x))
        phi = rand_prop(rng, quantifiers=False)
        trimmed = Valuation({u: val.get(SIG, u) for u in free_unknowns(phi)})
        assert eval_pnl_prop(M_ISVAR, val, phi) == \
            eval_pnl_prop(M_ISVAR, trimmed.updated(junk, var(2)), phi)


# ---------------------------------------------------------------------------
# the higher-order evaluator


def test_eval_hol_constants():
    env = HolValuation()
    assert eval_hol(ENV, M_ISVAR, env, H.BOT)[0] == BoolV(0)
    assert eval_hol(ENV, M_ISVAR, env, H.imp(H.BOT, H.BOT))[0] == BoolV(1)


def test_eval_hol_boolean_quantifier_is_exact():
    v = H.PlainVar(H.O, 0)
    env = HolValuation()
    assert eval_hol(ENV, M_ISVAR, env, H.forall(v, H.Var(v)))[0] == BoolV(0)
    got, exact = eval_hol(ENV, M_ISVAR, env,
                          H.forall(v, H.imp(H.Var(v), H.Var(v))))
    assert got == BoolV(1) and exact


def test_eval_hol_non_enumerable_quantifier():
    v = H.PlainVar(H.ArrowT(H.O, H.O), 0)
    with pytest.raises(EnumerationError):
        eval_hol(ENV, M_ISVAR, HolValuation(), H.forall(v, H.BOT))


def test_eval_hol_unbound_variable():
    v = H.PlainVar(H.O, 3)
    with pytest.raises(UnboundVariableError):
        eval_hol(ENV, M_ISVAR, HolValuation(), H.Var(v))


def test_eval_hol_lambda_at_image_type_builds_an_abstraction():
    t = translate(ENV, (), AbsT(a(0), var(0)))
    got, exact = eval_hol(ENV, M_ISVAR, HolValuation(), t)
    assert exact
    assert ren_eq(as_ren(got), RenElem(ID, AbsT(a(0), var(0))))


def test_eval_hol_beta_agreement():
    rng = random.Random(531)
    checked = 0
    while checked < 100:
        x, rp = rand_term(rng), rand_term(rng, 2)
        ctx = d_for(x, rp)
        if not (capture_check(ctx, x) and capture_check(ctx, rp)):
            continue
        checked += 1
        t = translate(ENV, ctx, x)
        d_x = tuple(q for q in ctx if q in X0.pmss)
        u = H.lams([H.AtomVar(q) for q in d_x], translate(ENV, ctx, rp))
        v = H.UnkVar(X0, d_x)
        env = lift_valuation(ctx, rand_val(rng), SIG)
        lhs, _ = eval_hol(ENV, M_ISVAR, env, H.App(H.Lam(v, t), u))
        uval, _ = eval_hol(ENV, M_ISVAR, env, u)
        rhs, _ = eval_hol(ENV, M_ISVAR, env.extend(v, uval), t)
        assert sem_eq(lhs, rhs), (x, rp, ctx)


def test_hol_valuation_relevance():
    rng = random.Random(533)
    checked = 0
    junk = H.UnkVar(Unknown(IOTA, PMSS_ALL, 48), ())
    while checked < 220:
        x = rand_term(rng) if rng.random() < 0.6 \
            else rand_prop(rng, quantifiers=False)
        ctx = d_for(x)
        if not capture_check(ctx, x):
            continue
        checked += 1
        t = translate(ENV, ctx, x)
        env1 = lift_valuation(ctx, rand_val(rng), SIG)
        env2 = HolValuation({v: env1.get(v) for v in H.fv(t)})
        env2 = env2.extend(junk, RenV(RenElem(ID, var(2))))
        v1, _ = eval_hol(ENV, M_ISVAR, env1, t)
        v2, _ = eval_hol(ENV, M_ISVAR, env2, t)
        assert sem_eq(v1, v2), x


def test_lifted_valuation_examples():
    val = Valuation({X0: var(0)})
    env = lift_valuation((a(0),), val, SIG)
    got = env.get(H.UnkVar(X0, (a(0),)))
    assert got == RenV(RenElem(ID, AbsT(a(0), var(0))))
    assert env.get(H.UnkVar(X0, ())) == RenV(RenElem(ID, var(0)))
    assert env.get(H.AtomVar(a(1))) == AtomV(a(1))


def test_lifted_predicates_constant_across_representatives():
    rng = random.Random(535)
    for _ in range(220):
        rho = rand_renaming(rng)
        if rng.random() < 0.5:
            spec, x = ISVAR_SPEC, rand_ground_term(rng, 2)
            g = FnV(ConstFn("pred", payload=("P", spec)))
        else:
            spec = EQ_SPEC
            x = Tup((rand_ground_term(rng, 2), rand_ground_term(rng, 2)))
            g = FnV(ConstFn("pred", payload=("equal", spec)))
        got = as_bool(fn_apply(g, ren_act_sem(rho, RenV(RenElem(ID, x)))))
        assert got == spec.apply(x), (rho, x)
        # in particular a true instance stays true under every renaming
        if spec.apply(x) == 1:
            assert got == 1


def test_term_former_constants_push_suspensions_through():
    rng = random.Random(537)
    g = FnV(ConstFn("former", payload="var"))
    for _ in range(100):
        rho = rand_renaming(rng)
        b = rng.choice(WINDOW)
        got = as_ren(fn_apply(g, ren_act_sem(rho, AtomV(b))))
        assert ren_eq(got, RenElem(ID, var(rho(b).index)))


# Valuation entries built from atoms the generated propositions never
# mention, so that renaming the entries is observable only through the
# values themselves.  The canonical-representative evaluation identifies a
# suspended value with its renamed term, so insensitivity is asserted for
# renamings that keep distinct entry atoms distinct and land them clear of
# the proposition's own atoms; an irrelevant collapse is thrown in to
# exercise the non-injective part of the renaming harmlessly.
DEEP = [a(-5), a(-6), a(-7), a(-8)]
GROUND_DEEP = enumerate_ground(SIG, IOTA, DEEP, 2)


def deep_val(rng):
    return Valuation({X0: rng.choice(GROUND_DEEP), X1: rng.choice(GROUND_DEEP)})


def deep_renaming(rng):
    dom = rng.sample(DEEP, rng.randrange(1, len(DEEP) + 1))
    targets = rng.sample([a(-20), a(-21), a(-22), a(-23)], len(dom))
    moves = dict(zip(dom, targets))
    moves[a(-40)] = a(-42)
    moves[a(-41)] = a(-42)
    return Renaming(moves)


def test_translated_propositions_insensitive_to_valuation_renaming():
    rng = random.Random(539)
    for model in (M_ISVAR, M_NEG):
        checked = 0
        while checked < 110:
            phi = rand_prop(rng, quantifiers=False)
            ctx = d_for(phi)
            if not capture_check(ctx, phi):
                continue
            checked += 1
            t = translate(ENV, ctx, phi)
            env = lift_valuation(ctx, deep_val(rng), SIG)
            env2 = rename_valuation(deep_renaming(rng), env)
            assert as_bool(eval_hol(ENV, model, env, t)[0]) == \
                as_bool(eval_hol(ENV, model, env2, t)[0]), phi


def test_quantified_translations_insensitive_to_valuation_renaming():
    rng = random.Random(541)
    for _ in range(8):
        body = rand_prop(rng, 2, quantifiers=False)
        phi = All(X0, body)
        ctx = d_for(phi)
        if not capture_check(ctx, phi):
            continue
        t = translate(ENV, ctx, phi)
        env = lift_valuation(ctx, deep_val(rng), SIG)
        env2 = rename_valuation(deep_renaming(rng), env)
        assert as_bool(eval_hol(ENV, M_ISVAR, env, t, depth=2)[0]) == \
            as_bool(eval_hol(ENV, M_ISVAR, env2, t, depth=2)[0]), phi


def test_translated_terms_evaluate_to_identity_suspensions():
    rng = random.Random(543)
    checked = 0
    while checked < 220:
        x = rand_term(rng)
        ctx = d_for(x)
        if not capture_check(ctx, x):
            continue
        checked += 1
        t = translate(ENV, ctx, x)
        env = lift_valuation(ctx, rand_val(rng), SIG)
        got, _ = eval_hol(ENV, M_ISVAR, env, t)
        e = as_ren(got)
        assert ren_eq(e, RenElem(ID, ground_renaming_action(e.rho, e.val))), x


def test_fresh_atom_reassignment_commutes_with_renaming():
    rng = random.Random(545)
    fresh_a, fresh_b = a(40), a(41)
    for _ in range(220):
        x = rand_ground_term(rng)
        if rng.random() < 0.8:
            x = perm_act(Perm.swap(fresh_a, rng.choice(WINDOW)), x)
        t = translate(ENV, (), x)
        base = HolValuation()
        v1, _ = eval_hol(ENV, M_ISVAR, base.extend(H.AtomVar(fresh_a),
                                                   AtomV(fresh_b)), t)
        v0, _ = eval_hol(ENV, M_ISVAR, base, t)
        assert sem_eq(v1, ren_act_sem(Renaming.atomic(fresh_a, fresh_b), v0)), x


def test_reassignment_fails_when_the_atom_supports_another_value():
    # moving nu@0 while another variable's value still contains nu@0 must not
    # commute: one side keeps the atoms apart, the other collapses them
    u = H.UnkVar(X0, ())
    t = H.HTup((H.App(ENV.term_const("var"), H.Var(H.AtomVar(a(0)))), H.Var(u)))
    env = HolValuation({u: RenV(RenElem(ID, var(0)))})
    lhs, _ = eval_hol(ENV, M_ISVAR, env.extend(H.AtomVar(a(0)), AtomV(a(1))), t)
    rhs0, _ = eval_hol(ENV, M_ISVAR, env, t)
    rhs = ren_act_sem(Renaming.atomic(a(0), a(1)), rhs0)
    assert not sem_eq(lhs, rhs)


def test_abstracted_value_applied_to_permuted_context_atoms():
    rng = random.Random(547)
    checked = 0
    while checked < 300:
        x = rand_ground_term(rng)
        pi = rand_perm(rng)
        k = rng.randrange(0, 4)
        dp = tuple(rng.sample(WINDOW, k))
        if not (pi.nontriv & supp(x) <= set(dp)):
            continue
        checked += 1
        v = RenV(RenElem(ID, abstract_atoms(dp, x)))
        for q in dp:
            v = fn_apply(v, AtomV(pi(q)))
        assert ren_eq(as_ren(v), RenElem(ID, perm_act(pi, x))), (x, pi, dp)


# ---------------------------------------------------------------------------
# the commuting square


def test_square_on_ground_terms():
    verdict = square_check(ENV, M_ISVAR, (), Valuation(), var(0))
    assert verdict and verdict.exact and verdict.kind == "term"


def test_square_on_suspensions():
    ctx = (a(0), a(1), a(2))
    val = Valuation({X0: app(var(0), var(1))})
    v = square_check(ENV, M_ISVAR, ctx, val, Sus(Perm.swap(a(1), a(0)), X0))
    assert v.ok


def test_square_requires_a_capturing_context():
    with pytest.raises(SemanticsError):
        square_check(ENV, M_ISVAR, (), Valuation(), AbsT(a(0), Sus.of(X0)))


def test_square_random_terms():
    rng = random.Random(549)
    for model in MODELS:
        checked = 0
        while checked < 200:
            x = rand_term(rng)
            ctx = d_for(x)
            if not capture_check(ctx, x):
                continue
            checked += 1
            v = square_check(ENV, model, ctx, rand_val(rng), x)
            assert v.ok and v.exact, (x, ctx)


def test_square_random_quantifier_free_propositions():
    rng = random.Random(551)
    for model in MODELS:
        checked = 0
        while checked < 80:
            phi = rand_prop(rng, quantifiers=False)
            ctx = d_for(phi)
            if not capture_check(ctx, phi):
                continue
            checked += 1
            v = square_check(ENV, model, ctx, rand_val(rng), phi)
            assert v.ok and v.exact, (phi, ctx)


def _rand_quantified(rng, nested: bool):
    u = rng.choice([X0, X1])
    body = rand_prop(rng, 2, quantifiers=False)
    if nested:
        body = All(rng.choice([X0, X1]), body)
    return All(u, body)


def test_square_bounded_quantified_propositions():
    rng = random.Random(553)
    for model in MODELS:
        checked = 0
        while checked < 5:
            phi = _rand_quantified(rng, nested=False)
            ctx = d_for(phi)
            if not capture_check(ctx, phi):
                continue
            checked += 1
            depth = rng.choice([2, 3])
            v = square_check(ENV, model, ctx, rand_val(rng), phi, depth=depth)
            assert v.ok and not v.exact, (phi, depth)
    checked = 0
    while checked < 3:
        phi = _rand_quantified(rng, nested=True)
        ctx = d_for(phi)
        if not capture_check(ctx, phi):
            continue
        checked += 1
        v = square_check(ENV, M_ISVAR, ctx, rand_val(rng), phi, depth=2)
        assert v.ok and not v.exact, phi


def test_translated_derivations_evaluate_valid():
    rng = random.Random(555)
    for name, d in restricted_derivations():
        out = translate_derivation(ENV, d)
        seq = out.tree.concl
        for model in MODELS:
            for _ in range(3):
                env = lift_valuation((), rand_val(rng), SIG)
                left = [as_bool(eval_hol(ENV, model, env, f, depth=2)[0])
                        for f in seq.left]
                right = [as_bool(eval_hol(ENV, model, env, f, depth=2)[0])
                         for f in seq.right]
                assert any(v == 0 for v in left) or any(v == 1 for v in right), \
                    (name, left, right)


# ---------------------------------------------------------------------------
# partial application of a model at a distinguished first slot


SIG2 = PnlSignature(
    name_sorts=frozenset({NU}),
    base_sorts=frozenset({"iota"}),
    term_formers=dict(SIG.term_formers),
    prop_formers={"Q": TupleSort((IOTA, IOTA))},
)

PAIR_SPEC = PredSpec((
    (Tup((var(0), Sus.of(W1))), 1),
    (Tup((Sus.of(W1), Sus.of(W1))), 1),
    (Tup((var(1), var(2))), 0),
), 0)

M_PAIR = HerbrandModel(SIG2, {"Q": PAIR_SPEC})


def test_convert_model_agrees_with_direct_evaluation():
    rng = random.Random(557)
    for z in [var(0), var(1), app(var(0), var(0)),
              Former("lam", AbsT(a(0), var(0)))]:
        m = convert_model(M_PAIR, z)
        assert m.preds["Q"].extra_support >= supp(z)
        for _ in range(60):
            r = rand_ground_term(rng)
            assert m.spec("Q").apply(r) == PAIR_SPEC.apply(Tup((z, r))), (z, r)


def test_convert_model_default_only_and_pruning():
    m = convert_model(HerbrandModel(SIG2, {"Q": PredSpec((), 1)}), var(0))
    assert m.spec("Q").clauses == () and m.spec("Q").default == 1
    only = PredSpec(((Tup((var(5), Sus.of(W1))), 1),), 0)
    m = convert_model(HerbrandModel(SIG2, {"Q": only}), var(0))
    assert m.spec("Q").clauses == () and m.spec("Q").apply(var(5)) == 0


def test_convert_model_sort_mismatch():
    with pytest.raises(SemanticsError):
        convert_model(M_PAIR, AtomT(a(0)))
