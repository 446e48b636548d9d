import pytest

from ordlam.envseq import ListEnv, TreeEnv
from ordlam.errors import InvariantError
from ordlam.gen import gen_terms
from ordlam.machine import (
    EMPTY_ARGS,
    Closure,
    Done,
    Fuel,
    NON_BETA_RULES,
    Pair,
    Pending,
    RULE_BETA,
    RULE_CLOSE,
    RULE_SPLIT,
    Spine,
    apply_value,
    evaluate,
    machine_trace,
    normalize_by_evaluation,
    print_expr,
    print_ordered,
    print_value,
    run_machine,
    step,
    value_node_count,
    weight,
    whnf,
)
from ordlam.named import (
    FuelExhausted,
    Var,
    alpha_eq,
    normalize,
    parse_surface,
    reduce_once_all,
)
from ordlam.ordered import DOT, Free, OApp, OLam, parse_closed

S_NAMED = parse_surface(r"\x.\y.\z. x z (y z)")
S_BODY3 = OApp(OApp(DOT, 1, DOT), 2, OApp(DOT, 1, DOT))
OMEGA = parse_surface(r"(\x. x x) (\x. x x)")
MOTIVATING = parse_surface(r"(\x.\y. a b y) g f")


def spine(name, *args):
    stack = EMPTY_ARGS
    for a in args:
        stack = stack.append(a)
    return Spine(name, stack)


class TestEvaluate:
    def test_s_applied_to_three_free_variables(self):
        from ordlam.named import App as NApp

        t = NApp(NApp(NApp(S_NAMED, Var("g")), Var("f")), Var("n"))
        result = whnf(t)
        expected = spine("g", spine("n"), spine("f", spine("n")))
        assert result == expected
        assert print_value(result) == parse_surface("g n (f n)")

    def test_s_applied_to_two_gets_stuck_as_closure(self):
        from ordlam.named import App as NApp

        t = NApp(NApp(S_NAMED, Var("g")), Var("f"))
        result = whnf(t)
        expected = Closure(
            (1, 1), S_BODY3, ListEnv.from_values([spine("g"), spine("f")])
        )
        assert result == expected

    def test_free_variable_is_bare_spine(self):
        assert evaluate(Free("a"), ListEnv.empty()) == spine("a")

    def test_environment_arity_enforced(self):
        with pytest.raises(InvariantError):
            evaluate(Free("a"), ListEnv.singleton(spine("v")))
        with pytest.raises(InvariantError):
            evaluate(DOT, ListEnv.empty())

    def test_closure_exactness_enforced(self):
        with pytest.raises(InvariantError):
            Closure((0,), DOT, ListEnv.singleton(spine("v")))
        Closure((0,), DOT, ListEnv.empty())  # exact: binder owns the only dot

    def test_fuel_exhaustion_is_a_value(self):
        result = whnf(OMEGA, fuel=100)
        assert isinstance(result, FuelExhausted)
        assert result.spent == 100

    def test_fuel_object_reports_steps(self):
        fuel = Fuel(10_000)
        whnf(MOTIVATING, fuel)
        assert 0 < fuel.spent < 10_000


class TestApply:
    def test_spine_append(self):
        w = spine("w")
        assert apply_value(spine("x"), w) == spine("x", w)

    def test_closure_entry(self):
        closure = Closure(
            (1, 1), S_BODY3, ListEnv.from_values([spine("g"), spine("f")])
        )
        n = spine("n")
        direct = evaluate(
            S_BODY3, ListEnv.from_values([spine("g"), n, spine("f"), n])
        )
        assert apply_value(closure, n) == direct

    def test_discarding_closure_drops_argument(self):
        closure = Closure((), Free("a"), ListEnv.empty())
        assert apply_value(closure, spine("w")) == spine("a")


class TestWhnf:
    def test_motivating_term(self):
        assert print_value(whnf(MOTIVATING)) == parse_surface("a b f")

    def test_no_reduction_under_binder(self):
        from ordlam.named import Lam as NLam

        t = NLam("x", OMEGA)
        result = whnf(t, fuel=1000)
        assert isinstance(result, Closure)

    def test_divergence(self):
        assert isinstance(whnf(OMEGA, fuel=1000), FuelExhausted)

    def test_backends_agree(self):
        from ordlam.named import App as NApp

        t = NApp(NApp(NApp(S_NAMED, Var("g")), Var("f")), Var("n"))
        assert whnf(t, backend=ListEnv) == whnf(t, backend=TreeEnv)

    def test_typed_terms_always_reach_whnf(self):
        # Simply-typed terms normalize strongly, so evaluation terminates
        # on all of them; no such guarantee exists for the general corpus.
        for term in gen_terms(41, 200, 40, 1.0):
            assert not isinstance(whnf(term, fuel=100_000), FuelExhausted)


class TestPrinting:
    def test_round_trip_s(self):
        assert alpha_eq(print_ordered(parse_closed(S_NAMED), []), S_NAMED)

    def test_dot_prints_its_value(self):
        assert print_ordered(DOT, [spine("g")]) == Var("g")

    def test_binder_inserts_fresh_marker(self):
        printed = print_ordered(
            OLam((1, 1), S_BODY3), [spine("g"), spine("f")]
        )
        assert alpha_eq(printed, parse_surface(r"\z. g z (f z)"))

    def test_spine_prints_left_associated(self):
        v = spine("g", spine("n"), spine("f", spine("n")))
        assert print_value(v) == parse_surface("g n (f n)")

    def test_bare_spine(self):
        assert print_value(spine("x")) == Var("x")

    def test_closure_prints_via_binder_rule(self):
        closure = Closure(
            (1, 1), S_BODY3, ListEnv.from_values([spine("g"), spine("f")])
        )
        assert alpha_eq(print_value(closure), parse_surface(r"\z. g z (f z)"))

    def test_fresh_names_avoid_environment(self):
        # z0 is taken by the environment value, so the binder moves on.
        closure = Closure((0,), DOT, ListEnv.empty())
        pair = Pair(Done(closure), Done(spine("z0")))
        printed = print_expr(pair)
        assert alpha_eq(printed, parse_surface(r"(\u. u) z0"))

    def test_length_mismatch_is_internal_error(self):
        with pytest.raises(InvariantError):
            print_ordered(DOT, [])

    def test_pending_prints_as_its_term(self):
        e = Pending(parse_closed(S_NAMED), ListEnv.empty())
        assert alpha_eq(print_expr(e), S_NAMED)


class TestMachine:
    def test_close_rule(self):
        e = Pending(parse_closed(S_NAMED), ListEnv.empty())
        after, rule = step(e)
        assert rule == RULE_CLOSE
        assert isinstance(after, Done)
        assert isinstance(after.value, Closure)

    def test_split_rule(self):
        t = OApp(Free("a"), 0, Free("b"))
        after, rule = step(Pending(t, ListEnv.empty()))
        assert rule == RULE_SPLIT
        assert after == Pair(
            Pending(Free("a"), ListEnv.empty()), Pending(Free("b"), ListEnv.empty())
        )

    def test_stuck_on_done(self):
        assert step(Done(spine("x"))) is None

    def test_trace_reaches_big_step_result(self):
        from ordlam.named import App as NApp

        t = NApp(NApp(NApp(S_NAMED, Var("g")), Var("f")), Var("n"))
        final, steps = run_machine(Pending(parse_closed(t), ListEnv.empty()))
        assert isinstance(final, Done)
        assert final.value == whnf(t)
        assert steps > 0

    def test_small_step_count_matches_big_step_fuel(self):
        for term in gen_terms(21, 60, 40, 0.5):
            fuel = Fuel(2000)
            big = evaluate(parse_closed(term), ListEnv.empty(), fuel)
            final, steps = run_machine(
                Pending(parse_closed(term), ListEnv.empty()), 2000
            )
            if isinstance(big, FuelExhausted):
                assert steps == 2000
            else:
                assert isinstance(final, Done)
                assert final.value == big
                assert steps == fuel.spent

    def test_non_beta_steps_preserve_printed_term(self):
        e = Pending(parse_closed(MOTIVATING), ListEnv.empty())
        for before, after, rule in machine_trace(e, 1000):
            printed_before = print_expr(before)
            printed_after = print_expr(after)
            if rule in NON_BETA_RULES:
                assert alpha_eq(printed_before, printed_after)
            else:
                assert rule == RULE_BETA
                candidates = reduce_once_all(printed_before)
                assert any(alpha_eq(printed_after, c) for c in candidates)

    def test_weight_increases_on_non_beta_steps(self):
        e = Pending(parse_closed(MOTIVATING), ListEnv.empty())
        for before, after, rule in machine_trace(e, 1000):
            if rule in NON_BETA_RULES:
                assert weight(after) > weight(before)


class TestWeight:
    def test_pending_weighs_one(self):
        assert weight(Pending(Free("x"), ListEnv.empty())) == 1

    def test_bare_spine_weighs_two(self):
        assert weight(Done(spine("x"))) == 2

    def test_pair_sums(self):
        e = Pair(Done(spine("x")), Pending(Free("y"), ListEnv.empty()))
        assert weight(e) == 3

    def test_closure_weighs_two(self):
        assert weight(Done(Closure((0,), DOT, ListEnv.empty()))) == 2

    def test_spine_weight_exponential_in_arity(self):
        v = spine("x", *(spine("a") for _ in range(64)))
        assert weight(Done(v)) == 1 + 2**64 + 64 * 2


class TestArgSharing:
    def test_append_shares_existing_cells(self):
        base = EMPTY_ARGS.append(spine("a")).append(spine("b"))
        extended = base.append(spine("c"))
        assert base.to_list() == extended.to_list()[:2]
        # The old list is a structural tail of the new one, not a copy.
        assert extended._cell.prev is base._cell

    def test_spine_application_shares_argument_prefix(self):
        s0 = spine("x")
        s1 = apply_value(s0, spine("a"))
        s2 = apply_value(s1, spine("b"))
        assert s2.args._cell.prev is s1.args._cell


class TestNodeCount:
    def test_bare_spine(self):
        assert value_node_count(spine("x")) == 1

    def test_nested_spine(self):
        assert value_node_count(spine("x", spine("y"))) == 2

    def test_shared_value_counted_once(self):
        shared = spine("w", spine("u"))
        env = ListEnv.from_values([spine("g")]).multi_insert((0, 1), shared)
        closure = Closure((0,), OApp(DOT, 1, OApp(DOT, 1, OApp(DOT, 1, DOT))), env)
        # env is [shared, g, shared]: nodes = closure + shared(2) + g.
        assert value_node_count(closure) == 4


class TestNormalizeByEvaluation:
    def test_motivating_term(self):
        assert alpha_eq(
            normalize_by_evaluation(MOTIVATING), parse_surface("a b f")
        )

    def test_normalizes_under_binders(self):
        t = parse_surface(r"\x. (\y. y) x")
        assert alpha_eq(normalize_by_evaluation(t), parse_surface(r"\x. x"))

    def test_church_arithmetic_matches_oracle(self):
        t = parse_surface(r"(\m.\n. n m) (\s.\z. s (s z)) (\s.\z. s (s (s z)))")
        ours = normalize_by_evaluation(t)
        oracle = normalize(t)
        assert alpha_eq(ours, oracle)

    def test_agreement_with_oracle_on_corpus(self):
        for term in gen_terms(31, 120, 40, 0.6):
            oracle = normalize(term, fuel=20_000)
            if isinstance(oracle, FuelExhausted):
                continue
            ours = normalize_by_evaluation(term, fuel=100_000)
            if isinstance(ours, FuelExhausted):
                continue
            assert alpha_eq(ours, oracle)

    def test_divergence_reported(self):
        assert isinstance(normalize_by_evaluation(OMEGA, fuel=500), FuelExhausted)
