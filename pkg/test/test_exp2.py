from unittest import TestCase

from ordforge.exp2 import Exp2Notation
from ordforge.exp2 import Exp2Term
from ordforge.exp2 import binary_value
from ordforge.exp2 import compare_exp2
from ordforge.exp2 import enumerate_exp2
from ordforge.exp2 import exp2_map
from ordforge.notation import ForeignLabelError
from ordforge.notation import FormationError
from ordforge.orders import Ordering
from ordforge.orders import explicit
from ordforge.orders import finite
from ordforge.orders import identity
from ordforge.orders import morphism


class TestCompareExp2(TestCase):
    def setUp(self):
        self.X = explicit(['a', 'b'])

    def test_equal(self):
        self.assertEqual(compare_exp2(self.X, Exp2Term(('b',)), Exp2Term(('b',))), Ordering.EQ)

    def test_first_exponent(self):
        self.assertEqual(compare_exp2(self.X, Exp2Term(('a',)), Exp2Term(('b',))), Ordering.LT)

    def test_proper_prefix(self):
        self.assertEqual(compare_exp2(self.X, Exp2Term(('b',)), Exp2Term(('b', 'a'))), Ordering.LT)

    def test_foreign_label(self):
        with self.assertRaises(ForeignLabelError):
            compare_exp2(self.X, Exp2Term(('c',)), Exp2Term())

    def test_not_decreasing(self):
        with self.assertRaises(FormationError):
            compare_exp2(self.X, Exp2Term(('a', 'b')), Exp2Term())


class TestExp2Functor(TestCase):
    def test_identity(self):
        X = explicit(['a', 'b'])
        apply = exp2_map(identity(X))
        for t in enumerate_exp2(X):
            self.assertEqual(apply(t), t)

    def test_relabel(self):
        f = morphism(explicit(['a', 'b']), explicit(['p', 'q']), {'a': 'p', 'b': 'q'})
        self.assertEqual(exp2_map(f)(Exp2Term(('b', 'a'))), Exp2Term(('q', 'p')))


class TestEnumerateExp2(TestCase):
    def test_empty_base(self):
        self.assertEqual(enumerate_exp2(finite(0)).terms, (Exp2Term(),))

    def test_two_labels(self):
        frag = enumerate_exp2(explicit(['a', 'b']))
        expected = (Exp2Term(), Exp2Term(('a',)), Exp2Term(('b',)), Exp2Term(('b', 'a')))
        self.assertEqual(frag.terms, expected)

    def test_binary_numerals(self):
        X = finite(10)
        frag = enumerate_exp2(X)
        self.assertEqual(len(frag), 1024)
        self.assertEqual([binary_value(X, t) for t in frag], list(range(1024)))


class TestExp2Syntax(TestCase):
    def test_show_and_parse(self):
        notation = Exp2Notation(explicit(['a', 'b']))
        term = notation.parse('2^@a + 2^@b')
        self.assertEqual(term, Exp2Term(('b', 'a')))
        self.assertEqual(notation.show(term), '2^@b + 2^@a')
        self.assertEqual(notation.parse('0'), Exp2Term())

    def test_repeated_exponent(self):
        notation = Exp2Notation(finite(2))
        with self.assertRaises(FormationError):
            notation.parse('2^@1 + 2^@1')

    def test_foreign_construct(self):
        with self.assertRaises(FormationError):
            Exp2Notation(finite(2)).parse('w^0')

    def test_smaller_reducts(self):
        notation = Exp2Notation(finite(3))
        t = Exp2Term((2, 0))
        for r in notation.smaller_reducts(t):
            self.assertEqual(notation.compare(r, t), Ordering.LT)
        self.assertIn(Exp2Term((2,)), notation.smaller_reducts(t))
