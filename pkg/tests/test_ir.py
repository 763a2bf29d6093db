import unittest
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from streamforge.errors import IRTypeError, ParseError
from streamforge.ir.parser import parse_online_expr, parse_program, parse_scheme
from streamforge.ir.printer import print_expr, print_program, print_scheme
from streamforge.ir.syntax import (
    XS, X, Apply, Builtin, Const, Filter, Foldl, Ite, Lambda, Length, Let, Map, OfflineProgram, OnlineScheme, Var,
    call, lam, num, y,
)
from streamforge.ir.tools import (
    beta_reduce, free_variables, list_expressions, rename_accums, size, substitute, walk,
)
from tests.fakes import COUNT_ABOVE, MEAN, VARIANCE, WELFORD, program

SUM_FOLD = Foldl(Builtin("+"), num(0), XS)


class TestParse(unittest.TestCase):
    def test_mean_program(self):
        p = parse_program(MEAN)
        self.assertEqual(p, OfflineProgram((), call("/", SUM_FOLD, Length(XS))))

    def test_print_mean(self):
        self.assertEqual(print_program(parse_program(MEAN)), "(program (xs) (/ (foldl + 0 xs) (length xs)))")

    def test_let_is_inlined(self):
        p = program(VARIANCE)
        self.assertFalse(any(isinstance(n, Let) for n in walk(p.body)))
        self.assertIn(call("/", SUM_FOLD, Length(XS)), list(walk(p.body.args[0].fn.body)))

    def test_extra_args(self):
        p = parse_program(COUNT_ABOVE)
        self.assertEqual(p.extra_args, ("t",))
        self.assertIsInstance(p.body.lst, Filter)
        self.assertEqual(free_variables(p.body), frozenset({"t"}))

    def test_list_typed_body_rejected(self):
        with self.assertRaises(ParseError) as ctx:
            parse_program("(program (xs) xs)")
        self.assertIn("scalar", str(ctx.exception))

    def test_errors_carry_position(self):
        with self.assertRaises(ParseError) as ctx:
            parse_program("(program (xs)\n  (frob 1 2))")
        self.assertEqual(ctx.exception.line, 2)
        self.assertIn("frob", str(ctx.exception))

    def test_unbalanced(self):
        with self.assertRaises(ParseError):
            parse_program("(program (xs) (+ 1 2)")
        with self.assertRaises(ParseError):
            parse_program("(program (xs) 1))")

    def test_reserved_argument_names(self):
        for bad in ("y1", "x", "foldl", "+", "_x1", "_n"):
            with self.assertRaises(ParseError):
                parse_program(f"(program (xs {bad}) 1)")

    def test_free_variable(self):
        with self.assertRaises(ParseError):
            parse_program("(program (xs) (+ z 1))")

    def test_zero_denominator_literal(self):
        with self.assertRaises(ParseError):
            parse_program("(program (xs) 1/0)")

    def test_list_combinator_in_online_expression(self):
        with self.assertRaises(ParseError):
            parse_online_expr("(length xs)", 1)


class TestScheme(unittest.TestCase):
    def test_parse_welford(self):
        s = parse_scheme(WELFORD)
        self.assertEqual(s.arity, 4)
        self.assertEqual(s.initializer, (0, 0, 0, 0))
        self.assertEqual(s.body[2], call("+", y(3), num(1)))
        self.assertEqual(s.body[3], call("+", y(4), X))

    def test_print_round_trip(self):
        s = parse_scheme(WELFORD)
        self.assertEqual(parse_scheme(print_scheme(s)), s)

    def test_args_round_trip(self):
        text = "(scheme (init 0) (args t) (update (y1) x (tuple (+ y1 (ite (> x t) 1 0)))))"
        s = parse_scheme(text)
        self.assertEqual(s.extra_args, ("t",))
        self.assertEqual(print_scheme(s), text)

    def test_arity_mismatch(self):
        with self.assertRaises(ParseError):
            parse_scheme("(scheme (init 0 0) (update (y1) x (tuple y1)))")

    def test_scheme_rejects_out_of_range_accumulator(self):
        with self.assertRaises(IRTypeError):
            OnlineScheme((0,), (y(2),))

    def test_online_expression_rejects_lists(self):
        with self.assertRaises(IRTypeError):
            OnlineScheme((0,), (Length(XS),))

    def test_printer_renames_colliding_lambda_params(self):
        s = OnlineScheme((0,), (Apply(lam("y1", call("+", Var("y1"), X)), (y(1),)),))
        text = print_scheme(s)
        self.assertIn("(lambda (p_1)", text)
        self.assertEqual(parse_scheme(text).arity, 1)


class TestTools(unittest.TestCase):
    def test_list_expressions_mean_order(self):
        self.assertEqual(list_expressions(program(MEAN)), [SUM_FOLD, Length(XS)])

    def test_list_expressions_variance_deduplicates_length(self):
        found = list_expressions(program(VARIANCE))
        self.assertEqual(len(found), 3)
        self.assertEqual(found[0], SUM_FOLD)
        self.assertEqual(found[1], Length(XS))
        self.assertIsInstance(found[2].fn, Lambda)

    def test_list_expressions_constant_program(self):
        self.assertEqual(list_expressions(parse_program("(program (xs) 42)")), [])

    def test_lambda_bound_expression_is_not_a_list_expression(self):
        p = parse_program("(program (xs) (foldl (lambda (a e) (+ a (foldl + e xs))) 0 xs))")
        self.assertEqual(len(list_expressions(p)), 1)

    def test_substitute_avoids_capture(self):
        e = lam("a", call("+", Var("a"), Var("b")))
        out = substitute(e, Var("b"), Var("a"))
        self.assertNotEqual(out.params, ("a",))
        self.assertEqual(free_variables(out), frozenset({"a"}))

    def test_substitute_type_mismatch(self):
        with self.assertRaises(IRTypeError):
            substitute(SUM_FOLD, XS, num(1))

    def test_beta_reduce(self):
        e = beta_reduce(call("+", num(1), num(2)))
        self.assertEqual(e, call("+", num(1), num(2)))
        applied = beta_reduce(Apply(lam("a", call("+", Var("a"), num(1))), (num(2),)))
        self.assertEqual(applied, call("+", num(2), num(1)))

    def test_size_and_rename(self):
        e = call("+", y(1), X)
        self.assertEqual(size(e), 3)
        self.assertEqual(rename_accums(e, {1: 3}), call("+", y(3), X))

    def test_map_filter_nodes(self):
        p = parse_program("(program (xs) (foldl + 0 (map (lambda (e) (* e e)) (filter (lambda (e) (> e 0)) xs))))")
        self.assertIsInstance(p.body.lst, Map)
        self.assertIsInstance(p.body.lst.lst, Filter)


_leaves = st.one_of(
    st.fractions(min_value=-5, max_value=5, max_denominator=4).map(Const),
    st.just(SUM_FOLD),
    st.just(Length(XS)),
)


def _extend(children):
    return st.one_of(
        st.tuples(st.sampled_from(["+", "-", "*", "/", "min"]), children, children).map(
            lambda t: call(t[0], t[1], t[2])),
        st.tuples(children, children, children).map(lambda t: Ite(call("<", t[0], t[1]), t[1], t[2])),
    )


class TestRoundTrip(unittest.TestCase):
    @settings(max_examples=150, derandomize=True, deadline=None)
    @given(st.recursive(_leaves, _extend, max_leaves=12))
    def test_print_then_parse(self, body):
        p = OfflineProgram((), body)
        self.assertEqual(parse_program(print_program(p)), p)

    def test_rational_literals(self):
        e = parse_online_expr("(+ -3/4 y1)", 1)
        self.assertEqual(e, call("+", Const(Fraction(-3, 4)), y(1)))
        self.assertEqual(print_expr(e), "(+ -3/4 y1)")


if __name__ == "__main__":
    unittest.main()
