import json

from unittest import TestCase

from ordforge.searchtree import ALL_AXIOMATIC
from ordforge.searchtree import DEPTH_EXHAUSTED
from ordforge.searchtree import OPEN_PATH
from ordforge.searchtree import AxiomTemplate
from ordforge.searchtree import AxiomaticSequentError
from ordforge.searchtree import Literal
from ordforge.searchtree import Member
from ordforge.searchtree import Num
from ordforge.searchtree import OpenFormulaError
from ordforge.searchtree import Var
from ordforge.searchtree import build_tree
from ordforge.searchtree import check_model_on_literals
from ordforge.searchtree import expand
from ordforge.searchtree import extract_path_model
from ordforge.searchtree import is_axiomatic
from ordforge.searchtree import kb_order
from ordforge.searchtree import negate
from ordforge.searchtree import open_paths
from ordforge.searchtree import parse_formula
from ordforge.searchtree import show
from ordforge.searchtree import show_sequent
from ordforge.syntax import ParseError

DEFAULT = AxiomTemplate.from_text('eq(0, 0)')


def sequent(*texts):
    return tuple(parse_formula(text) for text in texts)


class TestFormulas(TestCase):
    def test_parse_and_show(self):
        for text in ('or(eq(0, S(0)), nin(2, U1))', 'ex x.lt(x, add(1, mul(2, 3)))',
                     'allS X.and(in(0, X), nin(1, X))'):
            self.assertEqual(show(parse_formula(text)), text)

    def test_negate(self):
        f = parse_formula('all x.or(eq(x, 0), in(x, U0))')
        self.assertEqual(show(negate(f)), 'ex x.and(neq(x, 0), nin(x, U0))')
        self.assertEqual(negate(negate(f)), f)

    def test_syntax_error(self):
        with self.assertRaises(ParseError):
            parse_formula('eq(0, 1')


class TestTemplate(TestCase):
    def test_set_variable(self):
        template = AxiomTemplate.from_text('in(0, X)')
        self.assertEqual(template.variable, 'X')
        self.assertEqual(template.instance(3), Member(Num(0), 'U3', False))

    def test_closed_template(self):
        self.assertIsNone(DEFAULT.variable)
        self.assertEqual(DEFAULT.instance(5), Literal('neq', Num(0), Num(0)))

    def test_rejected(self):
        with self.assertRaises(OpenFormulaError):
            AxiomTemplate.from_text('in(x, X)')
        with self.assertRaises(OpenFormulaError):
            AxiomTemplate.from_text('and(in(0, X), in(0, Y))')


class TestIsAxiomatic(TestCase):
    def test_true_literal(self):
        self.assertTrue(is_axiomatic(sequent('eq(0, 0)')))

    def test_matching_membership(self):
        self.assertTrue(is_axiomatic(sequent('in(S 0, U3)', 'nin(1, U3)')))
        self.assertFalse(is_axiomatic(sequent('in(S 0, U3)', 'nin(1, U2)')))

    def test_false_literal(self):
        self.assertFalse(is_axiomatic(sequent('eq(0, 1)', 'in(0, U1)')))

    def test_open(self):
        with self.assertRaises(OpenFormulaError):
            is_axiomatic((Literal('eq', Var('x'), Num(0)),))


class TestExpand(TestCase):
    def test_not_reducible(self):
        template = AxiomTemplate.from_text('in(0, X)')
        gamma = sequent('eq(0, 1)')
        self.assertEqual(expand(gamma, 2, template), [gamma + sequent('nin(0, U2)')])

    def test_disjunction(self):
        gamma = sequent('eq(0, 1)', 'or(eq(1, 2), lt(2, 1))', 'eq(3, 4)')
        expected = sequent('eq(0, 1)', 'eq(1, 2)', 'lt(2, 1)', 'eq(3, 4)', 'neq(0, 0)')
        self.assertEqual(expand(gamma, 0, DEFAULT), [expected])

    def test_conjunction(self):
        children = expand(sequent('and(eq(0, 1), eq(1, 2))'), 0, DEFAULT)
        self.assertEqual(children, [sequent('eq(0, 1)', 'neq(0, 0)'), sequent('eq(1, 2)', 'neq(0, 0)')])

    def test_number_exists(self):
        gamma = sequent('ex x.eq(x, 7)')
        first = expand(gamma, 0, DEFAULT)[0]
        self.assertEqual(first, sequent('eq(0, 7)', 'neq(0, 0)', 'ex x.eq(x, 7)'))
        second = expand(first, 1, DEFAULT, [gamma, first])[0]
        self.assertEqual(second[-3:], sequent('eq(1, 7)', 'neq(0, 0)', 'ex x.eq(x, 7)'))

    def test_number_forall(self):
        children = expand(sequent('all x.lt(x, 5)'), 0, DEFAULT, witness_bound=2)
        self.assertEqual(children, [sequent('lt(0, 5)', 'neq(0, 0)'), sequent('lt(1, 5)', 'neq(0, 0)')])

    def test_set_exists(self):
        child = expand(sequent('exS X.in(0, X)'), 0, DEFAULT)[0]
        self.assertEqual(child, sequent('in(0, U0)', 'neq(0, 0)', 'exS X.in(0, X)'))

    def test_set_forall(self):
        gamma = sequent('nin(0, U0)', 'allS X.in(0, X)')
        child = expand(gamma, 0, DEFAULT)[0]
        # U0 is mentioned and U1 is reserved for this step
        self.assertEqual(child, sequent('nin(0, U0)', 'in(0, U2)', 'neq(0, 0)'))

    def test_axiomatic_input(self):
        with self.assertRaises(AxiomaticSequentError):
            expand(sequent('eq(0, 0)'), 0, DEFAULT)


class TestBuildTree(TestCase):
    def test_propositional(self):
        chains = build_tree(sequent('or(neq(0, 0), neq(0, 1))'))
        self.assertEqual(chains.status, ALL_AXIOMATIC)
        self.assertEqual(len(chains.tree), 2)

    def test_false_goal(self):
        chains = build_tree(sequent('eq(0, 1)'), depth=3)
        self.assertEqual(chains.status, OPEN_PATH)
        self.assertEqual(len(chains.tree), 4)

    def test_template_instances(self):
        template = AxiomTemplate.from_text('and(in(0, X), nin(0, X))')
        chains = build_tree((), template, depth=4)
        self.assertEqual(chains.sequents[(0,)], (template.instance(0),))
        self.assertEqual(chains.sequents[(0, 0)][-1], template.instance(1))
        self.assertEqual(chains.status, ALL_AXIOMATIC)

    def test_depth(self):
        goal = sequent('ex x.eq(x, 7)')
        self.assertEqual(build_tree(goal, depth=3).status, DEPTH_EXHAUSTED)
        self.assertEqual(build_tree(goal, depth=8).status, ALL_AXIOMATIC)

    def test_truncation(self):
        chains = build_tree(sequent('all x.lt(x, 5)'), witness_bound=2)
        self.assertTrue(chains.truncated)
        self.assertEqual(len(chains.tree.children(())), 2)
        self.assertEqual(chains.status, ALL_AXIOMATIC)

    def test_chain_lengths(self):
        chains = build_tree(sequent('and(eq(0, 1), or(eq(1, 2), eq(2, 2)))'), depth=4)
        for node in chains.tree:
            self.assertEqual(len(chains.chain(node)), len(node) + 1)

    def test_bad_bounds(self):
        with self.assertRaises(ValueError):
            build_tree((), depth=0)
        with self.assertRaises(ValueError):
            build_tree((), witness_bound=0)

    def test_json(self):
        data = json.loads(build_tree(sequent('eq(0, 1)'), depth=2).to_json())
        self.assertEqual(data['status'], OPEN_PATH)
        self.assertEqual(data['template'], 'eq(0, 0)')
        self.assertEqual(data['nodes'][0], {'node': [], 'axiomatic': False, 'chain': [['eq(0, 1)']]})

    def test_kb_order(self):
        chains = build_tree(sequent('and(eq(0, 0), eq(1, 1))'))
        self.assertEqual(kb_order(chains), [(0,), (1,), ()])


class TestPathModel(TestCase):
    def test_no_set_literals(self):
        self.assertEqual(extract_path_model([sequent('eq(0, 1)')]), {})

    def test_collect_values(self):
        path = [sequent('nin(3, U0)'), sequent('nin(3, U0)', 'nin(S S 0, U0)')]
        self.assertEqual(extract_path_model(path), {0: frozenset({2, 3})})

    def test_members_do_not_contribute(self):
        self.assertEqual(extract_path_model([sequent('in(4, U1)')]), {1: frozenset()})

    def test_axiomatic_path(self):
        with self.assertRaises(AxiomaticSequentError):
            extract_path_model([sequent('eq(1, 1)')])

    def test_open_path_model(self):
        template = AxiomTemplate.from_text('in(1, X)')
        chains = build_tree(sequent('in(0, U0)'), template, depth=3)
        paths = open_paths(chains)
        self.assertEqual(len(paths), 1)
        model = extract_path_model(paths[0])
        self.assertEqual(model[0], frozenset({1}))
        self.assertEqual(check_model_on_literals(paths[0], model), [])
        self.assertEqual(show_sequent(paths[0][1]), '[in(0, U0), nin(1, U0)]')
