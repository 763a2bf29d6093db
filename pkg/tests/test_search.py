import random
import unittest
from fractions import Fraction

import sympy as sp

from streamforge.enumsynth import METHOD_ENUM, METHOD_TEMPLATE_ENUM, enum_synthesize, grammar_ops
from streamforge.errors import SynthesisFailure, TemplateSolveError
from streamforge.evaluation.symbolic_exec import to_sympy
from streamforge.evaluation.terms import NEW_ELEM_SYMBOL, accum_symbol, terms_equal
from streamforge.ir.syntax import XS, X, Length, call, num, y
from streamforge.mine import ONE, Template, TemplateTerm, exact_template, mine_expressions, residue_values, templatize
from streamforge.polyinterp import N_SYMBOL, SamplePlan, interpolate, sample_points, solve_template
from streamforge.rfs import construct_rfs
from streamforge.verify import BOUNDED, TESTED, draw_samples, equivalence_report
from tests.fakes import COUNT_ABOVE, MAX, MEAN, SUM, VARIANCE, FakeLogger, program, quick_config


class TestTemplatize(unittest.TestCase):
    def test_constants_become_unknowns(self):
        y2, y4 = accum_symbol(2), accum_symbol(4)
        x = NEW_ELEM_SYMBOL
        t = templatize((y4 ** 2 - 6 * y4 * x + 12 * y2 + 9 * x ** 2) / 12)
        self.assertEqual(t.unknown_count, 4)
        self.assertEqual(len(t.denominator), 1)
        self.assertEqual(t.denominator[0].basis, ONE)
        fixed = [term for term in t.numerator if term.unknown is None]
        self.assertEqual([term.basis for term in fixed], [call("pow", y(4), num(2))])

    def test_round_trip_with_known_values(self):
        y2, y4 = accum_symbol(2), accum_symbol(4)
        x = NEW_ELEM_SYMBOL
        residue = (y4 ** 2 - 6 * y4 * x + 12 * y2 + 9 * x ** 2) / 12
        t = templatize(residue)
        self.assertTrue(terms_equal(residue_values(t, {1: Fraction(9), 2: Fraction(6), 3: Fraction(12),
                                                       4: Fraction(12)}), residue))

    def test_idempotent_on_templates(self):
        t = templatize(accum_symbol(1) + 3 * NEW_ELEM_SYMBOL + 2)
        again = templatize(t.as_sympy())
        self.assertEqual(again.unknowns, t.unknowns)

    def test_exact_template(self):
        t = exact_template(call("+", y(1), X))
        self.assertEqual(t.unknown_count, 0)
        self.assertEqual(t.body(), call("+", y(1), X))

    def test_instantiate(self):
        t = Template((TemplateTerm(1, Fraction(1), y(1)), TemplateTerm(None, Fraction(-1), X)))
        self.assertEqual(t.instantiate({1: num(2)}), call("-", call("*", num(2), y(1)), X))


class TestMining(unittest.TestCase):
    def test_variance_square_fold(self):
        phi = construct_rfs(program(VARIANCE))
        templates = mine_expressions(phi, phi[2], 3)
        self.assertEqual(len(templates), 1)
        [t] = templates
        self.assertEqual(t.unknown_count, 4)
        self.assertIn("??", str(t))
        fixed = [term.basis for term in t.numerator if term.unknown is None]
        self.assertEqual(fixed, [call("pow", y(4), num(2))])
        self.assertEqual(len(t.denominator), 1)
        self.assertIsNotNone(t.denominator[0].unknown)

    def test_shallow_depth_rejected(self):
        phi = construct_rfs(program(MEAN))
        with self.assertRaises(ValueError):
            mine_expressions(phi, phi[3], 1)

    def test_budget_exhaustion_gives_nothing(self):
        phi = construct_rfs(program(COUNT_ABOVE))
        logger = FakeLogger()
        self.assertEqual(mine_expressions(phi, phi[1], 6, node_budget=5, logger=logger), [])
        self.assertTrue(logger.messages("DEBUG"))


class TestPolyInterp(unittest.TestCase):
    def setUp(self):
        self.cfg = quick_config()

    def test_interpolate(self):
        poly = interpolate([(1, Fraction(2)), (2, Fraction(6)), (3, Fraction(12))])
        self.assertEqual(poly.as_expr(), N_SYMBOL ** 2 + N_SYMBOL)

    def test_interpolation_recovers_known_polynomials(self):
        n = N_SYMBOL
        for target in (2 * n, n ** 2 + n, n ** 2, sp.Integer(3), n ** 3 - 2 * n):
            points = [(k, Fraction(int(target.subs(n, k)))) for k in range(1, 12)]
            self.assertEqual(sp.expand(interpolate(points).as_expr() - target), 0, msg=str(target))

    def test_interpolate_duplicates(self):
        with self.assertRaises(ValueError):
            interpolate([(1, Fraction(1)), (1, Fraction(2))])

    def test_needs_length_accumulator(self):
        phi = construct_rfs(program(SUM))
        t = Template((TemplateTerm(1, Fraction(1), y(1)), TemplateTerm(2, Fraction(1), X)))
        with self.assertRaises(TemplateSolveError) as ctx:
            sample_points(phi[1], phi, t, SamplePlan.for_template(t, self.cfg))
        self.assertTrue(ctx.exception.not_applicable)

    def test_linear_template(self):
        phi = construct_rfs(program(MEAN))
        t = Template((TemplateTerm(1, Fraction(1), y(3)), TemplateTerm(2, Fraction(1), X)))
        points = sample_points(phi[3], phi, t, SamplePlan.for_template(t, self.cfg), random.Random(1))
        self.assertTrue(all(v == 1 for _, v in points[1]))
        expr = solve_template(phi[3], phi, t, SamplePlan.for_template(t, self.cfg), self.cfg)
        self.assertEqual(expr, call("+", call("*", num(1), y(3)), call("*", num(1), X)))

    def test_variance_template(self):
        phi = construct_rfs(program(VARIANCE))
        [t] = mine_expressions(phi, phi[2], 3)
        plan = SamplePlan.for_template(t, self.cfg)
        points = sample_points(phi[2], phi, t, plan, random.Random(5))
        self.assertNotIn(1, [n for n, _ in points[t.unknowns[0]]])
        expr = solve_template(phi[2], phi, t, plan, self.cfg)
        self.assertTrue(equivalence_report(phi, expr, phi[2], self.cfg).ok)
        s, n, sq, x = accum_symbol(4), accum_symbol(3), accum_symbol(2), NEW_ELEM_SYMBOL
        want = (s ** 2 - 2 * n * s * x + n * (n + 1) * sq + n ** 2 * x ** 2) / (n * (n + 1))
        self.assertTrue(terms_equal(to_sympy(expr), want))

    def test_wrong_template_is_rejected(self):
        phi = construct_rfs(program(MEAN))
        t = Template((TemplateTerm(1, Fraction(1), y(2)),))
        with self.assertRaises(TemplateSolveError):
            solve_template(phi[3], phi, t, SamplePlan.for_template(t, self.cfg), self.cfg)


class TestVerify(unittest.TestCase):
    def setUp(self):
        self.cfg = quick_config()
        self.phi = construct_rfs(program(MEAN))

    def test_samples_start_with_short_lists(self):
        samples = draw_samples(self.phi, Length(XS), 10, (0, 12), random.Random(0))
        self.assertEqual(len(samples[0].xs), 0)
        self.assertEqual(len(samples[1].xs), 1)

    def test_correct_candidate_is_bounded_verified(self):
        report = equivalence_report(self.phi, call("+", y(2), num(1)), Length(XS), self.cfg)
        self.assertTrue(report.ok)
        self.assertEqual(report.level, BOUNDED)

    def test_wrong_candidate(self):
        report = equivalence_report(self.phi, call("+", y(2), num(2)), Length(XS), self.cfg)
        self.assertFalse(report.ok)
        self.assertIn("xs=", report.failing)

    def test_piecewise_candidates_are_only_tested(self):
        phi = construct_rfs(program(MAX))
        report = equivalence_report(phi, call("max", y(1), X), phi[1], self.cfg)
        self.assertTrue(report.ok)
        self.assertEqual(report.level, TESTED)


class TestEnumSynth(unittest.TestCase):
    def setUp(self):
        self.cfg = quick_config()

    def test_grammar(self):
        self.assertEqual(grammar_ops(construct_rfs(program(MEAN)), Length(XS)), (["+", "/"], False))
        ops, use_ite = grammar_ops(construct_rfs(program(COUNT_ABOVE)), Length(XS))
        self.assertIn(">", ops)
        self.assertTrue(use_ite)

    def test_length_by_enumeration(self):
        phi = construct_rfs(program(MEAN))
        outcome = enum_synthesize(phi, Length(XS), [], self.cfg, hole_id=2)
        self.assertEqual(outcome.method, METHOD_ENUM)
        self.assertTrue(equivalence_report(phi, outcome.expr, Length(XS), self.cfg).ok)

    def test_exact_template_first(self):
        phi = construct_rfs(program(MEAN))
        outcome = enum_synthesize(phi, phi[3], [exact_template(call("+", y(3), X))], self.cfg)
        self.assertEqual(outcome.method, METHOD_TEMPLATE_ENUM)
        self.assertEqual(outcome.expr, call("+", y(3), X))

    def test_deterministic(self):
        phi = construct_rfs(program(SUM))
        first = enum_synthesize(phi, phi[1], [], self.cfg, hole_id=1)
        second = enum_synthesize(phi, phi[1], [], self.cfg, hole_id=1)
        self.assertEqual(first.expr, second.expr)

    def test_failure_carries_diagnostics(self):
        phi = construct_rfs(program(VARIANCE))
        with self.assertRaises(SynthesisFailure) as ctx:
            enum_synthesize(phi, phi[2], [], self.cfg.replace(max_size=4), hole_id=1)
        self.assertEqual(ctx.exception.hole_id, 1)
        self.assertTrue(ctx.exception.diagnostics)
        self.assertLessEqual(len(ctx.exception.diagnostics), 3)


if __name__ == "__main__":
    unittest.main()
