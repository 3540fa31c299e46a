from ordforge.dilator import FunctorHandle
from ordforge.functors import IdentityNotation
from ordforge.orders import Ordering


class CollapsingNotation(IdentityNotation):
    '''X ↦ X with every morphism sending everything to the top of its target.'''

    name = 'collapsing'

    def fmap(self, f, t):
        return f.target.elements()[-1]


class SupportlessNotation(IdentityNotation):
    '''X ↦ X claiming that no term mentions any label.'''

    name = 'supportless'

    def support(self, t):
        return frozenset()


def collapsing_functor(bound=4):
    return FunctorHandle('collapsing', CollapsingNotation, bound)


def supportless_functor(bound=4):
    return FunctorHandle('supportless', SupportlessNotation, bound)


def cyclic_compare(s, t):
    '''0 < 1 < 2 < 0: antisymmetric but not transitive.'''
    if s == t:
        return Ordering.EQ
    return Ordering.LT if (t - s) % 3 == 1 else Ordering.GT


class LateCollapsingNotation(IdentityNotation):
    '''X ↦ X, except that morphisms into orders of size 3 or more send everything to the top.'''

    name = 'late-collapsing'

    def fmap(self, f, t):
        if len(f.target) < 3:
            return f(t)
        return f.target.elements()[-1]


def late_collapsing_functor(bound=4):
    return FunctorHandle('late-collapsing', LateCollapsingNotation, bound)
