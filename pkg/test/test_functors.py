from unittest import TestCase

from ordforge.functors import Constant
from ordforge.functors import ConstantNotation
from ordforge.functors import IdentityNotation
from ordforge.functors import functor_names
from ordforge.functors import get_functor
from ordforge.notation import ForeignLabelError
from ordforge.notation import FormationError
from ordforge.orders import Ordering
from ordforge.orders import finite
from ordforge.orders import morphism


class TestGetFunctor(TestCase):
    def test_names(self):
        for name in functor_names():
            if name != 'const:K':
                self.assertEqual(get_functor(name).name, name)
        self.assertIn('const:K', functor_names())

    def test_bound(self):
        self.assertEqual(get_functor('eps', 2).bound, 2)

    def test_constant(self):
        F = get_functor('const:3')
        self.assertEqual(F.name, 'const:3')
        self.assertEqual(len(F.terms(finite(5))), 3)

    def test_unknown(self):
        with self.assertRaises(KeyError):
            get_functor('zeta')
        with self.assertRaises(KeyError):
            get_functor('const:x')


class TestIdentityNotation(TestCase):
    def test_terms(self):
        notation = IdentityNotation(finite(3))
        self.assertEqual(notation.fragment(1).terms, (0, 1, 2))
        self.assertEqual(notation.fragment(0).terms, ())
        self.assertEqual(notation.show(2), '@2')

    def test_parse(self):
        notation = IdentityNotation(finite(3))
        self.assertEqual(notation.parse('@2'), 2)
        with self.assertRaises(ForeignLabelError):
            notation.parse('@5')
        with self.assertRaises(FormationError):
            notation.parse('w^0')

    def test_fmap(self):
        F = get_functor('identity')
        f = morphism(finite(2), finite(4), {0: 1, 1: 3})
        self.assertEqual(F.fmap(f, 1), 3)
        self.assertEqual(F.support(finite(2), 1), frozenset([1]))


class TestConstantNotation(TestCase):
    def test_order(self):
        notation = ConstantNotation(2, finite(0))
        self.assertEqual(notation.compare(Constant(0), Constant(1)), Ordering.LT)
        self.assertEqual(list(notation.reducts(Constant(1))), [Constant(0)])

    def test_validate(self):
        notation = ConstantNotation(2, finite(0))
        with self.assertRaises(FormationError):
            notation.validate(Constant(2))

    def test_morphisms_act_trivially(self):
        F = get_functor('const:2')
        f = morphism(finite(1), finite(2), {0: 1})
        self.assertEqual(F.fmap(f, Constant(1)), Constant(1))
