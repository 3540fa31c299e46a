from unittest import TestCase

from ordforge.bachmann import EpsD
from ordforge.bachmann import EpsX
from ordforge.bachmann import OMEGA
from ordforge.bachmann import Theta
from ordforge.bachmann import ThetaNotation
from ordforge.bachmann import coefficient_base
from ordforge.bachmann import collapse_to_base
from ordforge.bachmann import compare_theta
from ordforge.bachmann import enumerate_theta
from ordforge.bachmann import has_free_theta
from ordforge.bachmann import supp
from ordforge.bachmann import theta_map
from ordforge.bachmann import theta_monotone
from ordforge.bachmann import validate_term
from ordforge.epsilon import OmegaPower
from ordforge.epsilon import Sum
from ordforge.notation import ForeignLabelError
from ordforge.notation import FormationError
from ordforge.notation import NotationError
from ordforge.notation import SystemMismatchError
from ordforge.notation import ZERO
from ordforge.orders import Ordering
from ordforge.orders import explicit
from ordforge.orders import identity
from ordforge.orders import morphism
from ordforge.systems import load_denotations

PLAIN = ThetaNotation.plain()


class TestSupp(TestCase):
    def test_cardinal(self):
        self.assertEqual(supp(OMEGA), frozenset())
        self.assertEqual(supp(EpsX('a')), frozenset())

    def test_theta_is_its_own_support(self):
        self.assertEqual(supp(Theta(OMEGA)), frozenset([Theta(OMEGA)]))

    def test_e_term(self):
        t = EpsD('s', (Theta(ZERO), Theta(OMEGA)))
        self.assertEqual(supp(t), frozenset([Theta(ZERO), Theta(OMEGA)]))

    def test_sum(self):
        t = Sum((OMEGA, Theta(ZERO), ZERO))
        self.assertEqual(supp(t), frozenset([Theta(ZERO)]))

    def test_foreign(self):
        with self.assertRaises(NotationError):
            supp('x')


class TestComparePlain(TestCase):
    def test_theta_of_zero_below_theta_of_omega(self):
        self.assertEqual(compare_theta(PLAIN, Theta(ZERO), Theta(OMEGA)), Ordering.LT)

    def test_support_disjunct(self):
        self.assertEqual(compare_theta(PLAIN, Theta(OMEGA), Theta(Theta(OMEGA))), Ordering.LT)

    def test_zero_and_omega(self):
        self.assertEqual(compare_theta(PLAIN, ZERO, Theta(ZERO)), Ordering.LT)
        self.assertEqual(compare_theta(PLAIN, Theta(Sum((OMEGA, OMEGA))), OMEGA), Ordering.LT)
        self.assertEqual(compare_theta(PLAIN, OMEGA, Sum((OMEGA, ZERO))), Ordering.LT)

    def test_large_argument_with_small_support(self):
        self.assertEqual(compare_theta(PLAIN, Theta(Theta(ZERO)), Theta(OMEGA)), Ordering.LT)

    def test_validate(self):
        self.assertTrue(validate_term(PLAIN, Theta(Theta(ZERO))))
        self.assertFalse(validate_term(PLAIN, OmegaPower(OMEGA)))

    def test_foreign_atoms(self):
        with self.assertRaises(SystemMismatchError):
            compare_theta(PLAIN, EpsX('a'), ZERO)
        with self.assertRaises(FormationError):
            PLAIN.parse('E[@a]')

    def test_fragment(self):
        frag = enumerate_theta(PLAIN, 3)
        terms = frag.terms
        for s, t in zip(terms, terms[1:]):
            self.assertEqual(PLAIN.compare(s, t), Ordering.LT)
        chain = [ZERO, Theta(ZERO), Theta(Theta(ZERO)), OMEGA]
        positions = [frag.index(t) for t in chain]
        self.assertEqual(positions, sorted(positions))

    def test_monotone(self):
        terms = enumerate_theta(PLAIN, 3).terms
        for alpha in terms:
            for beta in terms:
                self.assertTrue(theta_monotone(PLAIN, alpha, beta))

    def test_round_trip(self):
        for t in enumerate_theta(PLAIN, 3):
            self.assertEqual(PLAIN.parse(PLAIN.show(t)), t)
        self.assertEqual(PLAIN.show(PLAIN.parse('th(Om + Om)')), 'th(Om + Om)')


class TestOverX(TestCase):
    def setUp(self):
        self.X = explicit(['a', 'b'])
        self.system = ThetaNotation.over_x(self.X)

    def test_e_atoms(self):
        self.assertEqual(compare_theta(self.system, EpsX('a'), EpsX('b')), Ordering.LT)
        self.assertEqual(compare_theta(self.system, OMEGA, EpsX('a')), Ordering.LT)
        self.assertEqual(compare_theta(self.system, Theta(EpsX('b')), OMEGA), Ordering.LT)

    def test_foreign_label(self):
        with self.assertRaises(ForeignLabelError):
            self.system.parse('E[@c]')

    def test_theta_map(self):
        apply = theta_map(identity(self.X))
        frag = enumerate_theta(self.system, 3)
        for t in frag:
            self.assertEqual(apply(t), t)

        Y = explicit(['p', 'q', 'r'])
        f = morphism(self.X, Y, {'a': 'p', 'b': 'r'})
        target = ThetaNotation.over_x(Y)
        apply = theta_map(f)
        self.assertEqual(apply(Theta(EpsX('b'))), Theta(EpsX('r')))
        for s, t in zip(frag.terms, frag.terms[1:]):
            self.assertEqual(target.compare(apply(s), apply(t)), Ordering.LT)

    def test_needs_base(self):
        with self.assertRaises(NotationError):
            ThetaNotation('x')


class TestOverD(TestCase):
    def setUp(self):
        self.system = ThetaNotation.over_d(load_denotations('identity'))

    def test_e_terms_follow_coefficients(self):
        s = EpsD('@0', (Theta(ZERO),))
        t = EpsD('@0', (Theta(OMEGA),))
        self.assertEqual(compare_theta(self.system, s, t), Ordering.LT)
        self.assertEqual(compare_theta(self.system, OMEGA, s), Ordering.LT)

    def test_formation(self):
        for bad in (EpsD('@0', (OMEGA,)), EpsD('@0', ()), EpsD('@9', (ZERO,))):
            with self.assertRaises(NotationError):
                self.system.validate(bad)

    def test_parse(self):
        term = self.system.parse('E{@0}(th(0))')
        self.assertEqual(term, EpsD('@0', (Theta(ZERO),)))
        self.assertEqual(self.system.show(term), 'E{@0}(th(0))')

    def test_matches_over_x(self):
        terms = [t for t in enumerate_theta(self.system, 3) if not has_free_theta(t)]
        X, labels = coefficient_base(self.system, terms)
        over_x = ThetaNotation.over_x(X)
        images = [collapse_to_base(t, labels) for t in terms]
        for s, t in zip(images, images[1:]):
            self.assertEqual(over_x.compare(s, t), Ordering.LT)

    def test_free_theta_has_no_counterpart(self):
        with self.assertRaises(FormationError):
            collapse_to_base(Theta(ZERO), {})
