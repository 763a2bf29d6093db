import unittest
from fractions import Fraction

from hypothesis import assume, given, settings
from hypothesis import strategies as st

from streamforge.decompose import decompose
from streamforge.errors import AxiomError, ParseError
from streamforge.evaluation.concrete import Env, eval_offline, eval_online, eval_snoc, evaluate, run_scheme, step_scheme
from streamforge.evaluation.symbolic_exec import unroll
from streamforge.evaluation.terms import NEW_ELEM_SYMBOL, accum_symbol, elem_symbols, make_symbol, to_sympy_rational
from streamforge.ir.parser import parse_program
from streamforge.ir.syntax import X, OnlineScheme, call, num, y
from streamforge.rfs import construct_rfs, rfs_formula
from streamforge.strategy.implicate_solver import snoc_spec
from streamforge.symbolic.axioms import push_snoc, snoc_terms
from streamforge.symbolic.formula import ImplicateTemplate
from streamforge.symbolic.implicate import find_implicate, implicate_expr
from streamforge.synthesizer import synthesize
from tests.fakes import COUNT, COUNT_ABOVE, MAX, MEAN, SUM_OF_SQUARES, VARIANCE, program, quick_config

values = st.fractions(min_value=-20, max_value=20, max_denominator=6)
streams = st.lists(values, max_size=8)

UNROLLED = (MEAN, VARIANCE, SUM_OF_SQUARES, COUNT, MAX, COUNT_ABOVE)


def extras_for(p, t):
    return {name: t for name in p.extra_args}


class TestUnrollAgreesWithEvaluation(unittest.TestCase):
    @settings(max_examples=120, derandomize=True, deadline=None)
    @given(st.sampled_from(UNROLLED), st.lists(values, max_size=5), values)
    def test_unrolled_term_matches_concrete_run(self, text, xs, t):
        p = program(text)
        term, _ = unroll(p.body, len(xs))
        point = dict(zip(elem_symbols(len(xs)), xs))
        point.update({make_symbol(name): t for name in p.extra_args})
        self.assertEqual(term.evaluate(point), eval_offline(p, xs, [t] * len(p.extra_args)))


class TestImplicateSoundness(unittest.TestCase):
    CASES = ((MEAN, 2), (MEAN, 3), (SUM_OF_SQUARES, 1), (COUNT, 1), (VARIANCE, 3), (VARIANCE, 4))

    @classmethod
    def setUpClass(cls):
        cls.found = []
        for text, index in cls.CASES:
            phi = construct_rfs(program(text))
            formula = find_implicate(rfs_formula(phi), ImplicateTemplate(snoc_spec(phi[index])))
            cls.found.append((phi, phi[index], formula, implicate_expr(formula)))

    def test_every_case_has_an_implicate(self):
        for (text, index), (_, _, _, candidate) in zip(self.CASES, self.found):
            self.assertIsNotNone(candidate, msg=f"y{index} of {text}")

    @settings(max_examples=200, derandomize=True, deadline=None)
    @given(st.integers(min_value=0, max_value=len(CASES) - 1), streams, values)
    def test_implicate_predicts_the_appended_list(self, case, xs, x):
        phi, spec, formula, candidate = self.found[case]
        assume(candidate is not None)
        accums = phi.evaluate(xs)
        point = {accum_symbol(i): to_sympy_rational(v) for i, v in enumerate(accums, 1)}
        point[NEW_ELEM_SYMBOL] = to_sympy_rational(x)
        assume(all(c.subs(point) != 0 for c in formula.side_conditions))
        self.assertEqual(eval_online(candidate, accums, x), eval_snoc(spec, xs, x))


class TestEmittedSchemesAreInductive(unittest.TestCase):
    PROGRAMS = (MEAN, SUM_OF_SQUARES, COUNT_ABOVE, MAX)

    @classmethod
    def setUpClass(cls):
        cls.runs = []
        for text in cls.PROGRAMS:
            p = program(text)
            phi = construct_rfs(p)
            result = synthesize(p, quick_config())
            live = [i for i in range(1, phi.arity + 1) if i not in result.pruned_accumulators]
            cls.runs.append((p, phi, result.scheme, live))

    def test_initializer_is_the_signature_on_the_empty_list(self):
        for p, phi, scheme, live in self.runs:
            at_empty = phi.evaluate([], extras_for(p, Fraction(0)))
            self.assertEqual(scheme.initializer, tuple(at_empty[i - 1] for i in live))

    @settings(max_examples=150, derandomize=True, deadline=None)
    @given(st.integers(min_value=0, max_value=len(PROGRAMS) - 1), streams, values, values)
    def test_one_step_preserves_the_signature(self, which, xs, x, t):
        p, phi, scheme, live = self.runs[which]
        extras = extras_for(p, t)
        before = phi.evaluate(xs, extras)
        after = phi.evaluate(xs + [x], extras)
        stepped = step_scheme(scheme, tuple(before[i - 1] for i in live), x, extras)
        self.assertEqual(stepped, tuple(after[i - 1] for i in live))


class TestDecompositionIsSound(unittest.TestCase):
    PROGRAMS = (MEAN, VARIANCE, SUM_OF_SQUARES, COUNT_ABOVE, MAX)

    @settings(max_examples=150, derandomize=True, deadline=None)
    @given(st.sampled_from(PROGRAMS), st.booleans(), streams, values, values)
    def test_holes_filled_with_their_specifications(self, text, split, xs, x, t):
        p = program(text)
        phi = construct_rfs(p)
        sketch, specs = decompose(phi, p, use_decomposition=split)
        filled = sketch.fill({h: snoc_spec(spec) for h, spec in specs.items()})
        extras = extras_for(p, t)
        env = Env(names=extras, xs=tuple(xs), accums=phi.evaluate(xs, extras), new_elem=x)
        for i, component in enumerate(filled, 1):
            self.assertEqual(evaluate(component, env), eval_snoc(phi[i], xs, x, extras), msg=f"y{i}")


class TestAxiomsHold(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.terms = []
        for text in (MEAN, VARIANCE, COUNT_ABOVE, MAX):
            p = program(text)
            phi = construct_rfs(p)
            for entry in phi.entries:
                for term in snoc_terms(snoc_spec(entry)):
                    try:
                        cls.terms.append((p, term, push_snoc(term)))
                    except AxiomError:
                        continue

    def test_terms_were_collected(self):
        self.assertGreaterEqual(len(self.terms), 4)

    @settings(max_examples=150, derandomize=True, deadline=None)
    @given(st.data(), streams, values, values)
    def test_rewrite_keeps_the_value(self, data, xs, x, t):
        p, term, rewritten = data.draw(st.sampled_from(self.terms))
        env = Env(names=extras_for(p, t), xs=tuple(xs), new_elem=x)
        self.assertEqual(evaluate(rewritten, env), evaluate(term, env))


@st.composite
def schemes(draw):
    arity = draw(st.integers(min_value=1, max_value=4))
    leaves = [X, num(1), num(2)] + [y(i) for i in range(1, arity + 1)]
    ops = ("+", "-", "*", "max")

    def component():
        return call(draw(st.sampled_from(ops)), draw(st.sampled_from(leaves)), draw(st.sampled_from(leaves)))

    init = [draw(values) for _ in range(arity)]
    return OnlineScheme(tuple(init), tuple(component() for _ in range(arity)))


class TestSchemeReplay(unittest.TestCase):
    @settings(max_examples=20, derandomize=True, deadline=None)
    @given(schemes())
    def test_empty_stream_gives_the_first_initial_value(self, scheme):
        self.assertEqual(run_scheme(scheme, []), [scheme.initializer[0]])

    @settings(max_examples=60, derandomize=True, deadline=None)
    @given(schemes(), st.lists(values, min_size=1, max_size=6))
    def test_one_output_per_element(self, scheme, xs):
        outputs = run_scheme(scheme, xs)
        self.assertEqual(len(outputs), len(xs))
        acc = scheme.initializer
        for x in xs:
            acc = step_scheme(scheme, acc, x, {})
        self.assertEqual(outputs[-1], acc[0])


class TestRejectedPrograms(unittest.TestCase):
    def test_sorting_is_not_in_the_language(self):
        for text in ("(program (xs) (sort xs))", "(program (xs) (foldl + 0 (sort xs)))",
                     "(program (xs) (quantile xs 1/2))"):
            with self.assertRaises(ParseError, msg=text):
                parse_program(text)


if __name__ == "__main__":
    unittest.main()
