import json

from unittest import TestCase

from hypothesis import given
from hypothesis import settings
from hypothesis import strategies as st

from ordforge.bachmann import ThetaNotation
from ordforge.epsilon import EpsilonNotation
from ordforge.exp2 import Exp2Notation
from ordforge.functors import get_functor
from ordforge.harness import DISCLAIMER
from ordforge.harness import Report
from ordforge.harness import SuiteRunner
from ordforge.harness import binary_oracle
from ordforge.harness import check_functor_laws
from ordforge.harness import check_order_axioms
from ordforge.harness import cnf_oracle
from ordforge.harness import descent_fuzz
from ordforge.harness import key_oracle
from ordforge.harness import oracle_agreement
from ordforge.harness import oracle_for
from ordforge.harness import rank_oracle
from ordforge.harness import run_suite
from ordforge.harness import single_index_oracle
from ordforge.notation import Fragment
from ordforge.notation import ZERO
from ordforge.omega_omega import OmegaOmegaNotation
from ordforge.orders import Ordering
from ordforge.orders import finite
from ordforge.systems import load_denotations
from ordforge.veblen import PhiNotation

from .fixtures import collapsing_functor
from .fixtures import cyclic_compare


def int_compare(s, t):
    return Ordering.of(s, t)


class BrokenNotation(EpsilonNotation):
    name = 'broken'

    def compare(self, s, t):
        raise RuntimeError('no order')


class TestOrderAxioms(TestCase):
    def test_eps_over_empty_base(self):
        notation = EpsilonNotation(finite(0))
        report = check_order_axioms(notation.fragment(4), notation.compare, notation.show)
        self.assertTrue(report.passed, report.witnesses)
        self.assertEqual(report.details['pairs'], 'exhaustive')
        self.assertEqual(report.details['note'], DISCLAIMER)

    def test_exp2(self):
        notation = Exp2Notation(finite(3))
        frag = notation.fragment(4)
        self.assertEqual(len(frag), 8)
        self.assertTrue(check_order_axioms(frag, notation.compare, notation.show).passed)

    def test_cycle(self):
        report = check_order_axioms(Fragment('cyc', '-', 0, (0, 1, 2)), cyclic_compare)
        self.assertFalse(report.passed)
        self.assertGreater(report.details['failures']['transitivity'], 0)
        self.assertEqual(report.details['failures']['trichotomy'], 0)
        self.assertEqual(report.witnesses[0]['law'], 'transitivity')

    def test_unsorted(self):
        report = check_order_axioms(Fragment('rev', '-', 0, (2, 1, 0)), int_compare)
        self.assertFalse(report.passed)
        self.assertEqual(report.details['failures']['sortedness'], 2)
        self.assertEqual(report.details['failures']['transitivity'], 0)

    def test_sampled(self):
        frag = Fragment('ints', '-', 0, tuple(range(40)))
        report = check_order_axioms(frag, int_compare, exhaustive_limit=10, pair_limit=10, samples=500)
        self.assertTrue(report.passed)
        self.assertEqual(report.details['pairs'], '500 sampled pairs')
        self.assertEqual(report.details['transitivity'], '500 sampled triples')

    @settings(max_examples=10, deadline=None)
    @given(st.integers(min_value=0, max_value=4))
    def test_exp2_any_base(self, n):
        notation = Exp2Notation(finite(n))
        self.assertTrue(check_order_axioms(notation.fragment(n), notation.compare).passed)


class TestOracles(TestCase):
    def test_cnf(self):
        notation = EpsilonNotation(finite(0))
        report = oracle_agreement(notation.fragment(4), notation.compare, cnf_oracle(), notation.show)
        self.assertTrue(report.passed, report.witnesses)
        self.assertEqual(report.details['agreement'], 100.0)

    def test_binary(self):
        X = finite(4)
        notation = Exp2Notation(X)
        report = oracle_agreement(notation.fragment(4), notation.compare, binary_oracle(X))
        self.assertEqual(report.details['agreement'], 100.0)
        self.assertEqual(report.details['pairs'], 16 ** 2)

    def test_single_index(self):
        notation = PhiNotation(finite(1))
        report = oracle_agreement(notation.fragment(3), notation.compare, single_index_oracle())
        self.assertTrue(report.passed, report.witnesses)

    def test_rank(self):
        notation = PhiNotation(finite(2))
        frag = notation.fragment(3)
        oracle = rank_oracle(frag.terms[::-1], notation.compare)
        self.assertEqual(oracle_agreement(frag, notation.compare, oracle).details['agreement'], 100.0)

    def test_disagreement(self):
        frag = Fragment('ints', '-', 0, (0, 1, 2))
        report = oracle_agreement(frag, int_compare, key_oracle(lambda t: -t), name='reversed')
        self.assertFalse(report.passed)
        self.assertEqual(report.details['pairs'], 9)
        self.assertEqual(report.details['agreement'], round(100.0 * 3 / 9, 4))
        self.assertEqual(report.witnesses[0], {'terms': ['0', '1'], 'system': 'LT', 'oracle': 'GT'})

    def test_oracle_for(self):
        self.assertIsNotNone(oracle_for(Exp2Notation(finite(2))))
        self.assertIsNotNone(oracle_for(EpsilonNotation(finite(0))))
        self.assertIsNone(oracle_for(EpsilonNotation(finite(1))))
        self.assertIsNotNone(oracle_for(PhiNotation(finite(1))))
        self.assertIsNone(oracle_for(PhiNotation(finite(2))))
        self.assertIsNone(oracle_for(ThetaNotation.plain()))


class TestDescentFuzz(TestCase):
    def test_from_zero(self):
        report = descent_fuzz(EpsilonNotation(finite(0)), ZERO, trials=3)
        self.assertTrue(report.passed)
        self.assertEqual(report.details['max_chain'], 1)

    def test_eps_terminates(self):
        notation = EpsilonNotation(finite(1))
        start = notation.fragment(3).terms[-1]
        report = descent_fuzz(notation, start, trials=10, seed=3)
        self.assertTrue(report.passed)
        self.assertGreater(report.details['max_chain'], 1)
        self.assertEqual(report.details['start'], notation.show(start))

    def test_step_budget(self):
        notation = Exp2Notation(finite(3))
        start = notation.fragment(3).terms[-1]
        report = descent_fuzz(notation, start, trials=2, step_budget=1)
        self.assertFalse(report.passed)
        self.assertEqual(len(report.witnesses), 2)


class TestDenotedSystems(TestCase):
    def setUp(self):
        self.denotations = load_denotations('exp2', 3)

    def test_theta_over_exp2(self):
        notation = ThetaNotation.over_d(self.denotations)
        frag = notation.fragment(3)
        report = check_order_axioms(frag, notation.compare, notation.show)
        self.assertTrue(report.passed, report.witnesses)
        self.assertGreater(len(frag), 5)

    def test_omega_omega_over_exp2(self):
        notation = OmegaOmegaNotation.over_d(self.denotations, levels=2)
        frag = notation.fragment(3)
        report = check_order_axioms(frag, notation.compare, notation.show)
        self.assertTrue(report.passed, report.witnesses)
        self.assertGreater(len(frag), 5)


class TestLongFuzz(TestCase):
    def test_ten_thousand_trials(self):
        notation = Exp2Notation(finite(3))
        start = notation.fragment(3).terms[-1]
        report = descent_fuzz(notation, start, trials=10 ** 4, seed=1)
        self.assertTrue(report.passed, report.witnesses)
        self.assertEqual(report.details['trials'], 10 ** 4)
        self.assertLessEqual(report.details['max_chain'], 8)


class TestFunctorLaws(TestCase):
    def test_eps(self):
        report = check_functor_laws(get_functor('eps', 3), 2)
        self.assertTrue(report.passed, report.witnesses)

    def test_exp2(self):
        report = check_functor_laws(get_functor('exp2', 4), 3)
        self.assertTrue(report.passed, report.witnesses)
        self.assertEqual(report.bound, 4)

    def test_collapsing(self):
        report = check_functor_laws(collapsing_functor(), 2)
        self.assertFalse(report.passed)
        self.assertGreater(report.details['failures']['preservation'], 0)


class TestSuite(TestCase):
    def test_run_suite(self):
        systems = [EpsilonNotation(finite(0)), Exp2Notation(finite(2))]
        reports = run_suite(systems, ('identity',), bound=3, trials=3, quiet=True)
        self.assertEqual([r.check for r in reports],
                         ['order-axioms', 'oracle-agreement', 'descent-fuzz'] * 2 + ['functor-laws'])
        self.assertTrue(all(r.passed for r in reports), [r.to_dict() for r in reports if not r.passed])

    def test_crash_becomes_failure(self):
        runner = SuiteRunner(bound=2, trials=1, quiet=True)
        reports = runner.run([BrokenNotation(finite(0))])
        self.assertEqual(len(reports), 3)
        for report in reports:
            self.assertFalse(report.passed)
            self.assertEqual(report.system, 'broken')
            self.assertEqual(report.details['error'], 'no order')
        self.assertEqual(runner.current_check, '')

    def test_unknown_functor(self):
        reports = SuiteRunner(quiet=True).run([], ('nope',))
        self.assertEqual(len(reports), 1)
        self.assertFalse(reports[0].passed)
        self.assertEqual(reports[0].system, 'nope')


class TestReport(TestCase):
    def test_text(self):
        report = Report('order-axioms', 'eps', 4, True, [], {'terms': 2})
        self.assertEqual(report.to_text(), 'PASS order-axioms eps bound=4\n  terms: 2')

    def test_failed_text(self):
        report = Report('descent-fuzz', 'exp2', None, False, [{'trial': 0}])
        self.assertEqual(report.to_text(), "FAIL descent-fuzz exp2\n  witness: {'trial': 0}")

    def test_json(self):
        data = json.loads(Report('functor-laws', 'exp2', 3, False, [{'law': 'identity'}]).to_json())
        self.assertEqual(data['pass'], False)
        self.assertEqual(data['witnesses'], [{'law': 'identity'}])
        self.assertEqual(set(data), {'check', 'system', 'bound', 'pass', 'witnesses', 'details'})
