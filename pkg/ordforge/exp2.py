'''
The base-2 exponential X ↦ 2^X: formal sums 2^{x_1} + ... + 2^{x_n} with
strictly decreasing exponents from the base order. The empty sum is the
least term.
'''
from dataclasses import dataclass
from itertools import combinations
from typing import Callable
from typing import Iterator
from typing import List
from typing import Tuple

from ordforge.notation import Fragment
from ordforge.notation import FormationError
from ordforge.notation import Notation
from ordforge.notation import lexicographic
from ordforge.orders import BaseOrder
from ordforge.orders import Label
from ordforge.orders import OrderMorphism
from ordforge.orders import Ordering
from ordforge.syntax import RawTerm


@dataclass(frozen=True)
class Exp2Term:
    exponents: Tuple[Label, ...] = ()


class Exp2Notation(Notation):
    name = 'exp2'
    relativized = True

    def compare(self, s: Exp2Term, t: Exp2Term) -> Ordering:
        return lexicographic(self.base.compare, s.exponents, t.exponents)  # type: ignore

    def validate(self, t: Exp2Term) -> None:
        if not isinstance(t, Exp2Term):
            raise FormationError(f'{t!r} is not a 2^X term', 'exp2 term formation')
        for label in t.exponents:
            self.check_label(label)
        for a, b in zip(t.exponents, t.exponents[1:]):
            if self.base.compare(b, a) != Ordering.LT:  # type: ignore
                raise FormationError(f'exponents of {self.show(t)} are not strictly decreasing',
                                     'strictly decreasing exponents')

    def size(self, t: Exp2Term) -> int:
        return len(t.exponents)

    def normalize(self, t: Exp2Term) -> Exp2Term:
        '''Sort exponents in decreasing order; repeated exponents are left for `validate`.'''
        return Exp2Term(tuple(sorted(t.exponents, key=self.base.position, reverse=True)))  # type: ignore

    def from_raw(self, raw: RawTerm) -> Exp2Term:
        if raw.kind == 'zero':
            return Exp2Term()
        if raw.kind == 'two_power':
            return Exp2Term((self.label(raw.token),))  # type: ignore
        if raw.kind == 'sum':
            labels: List[Label] = []
            for child in raw.children:
                labels.extend(self.from_raw(child).exponents)
            return Exp2Term(tuple(labels))
        raise self.unsupported(raw)

    def show(self, t: Exp2Term) -> str:
        if not t.exponents:
            return '0'
        return ' + '.join(f'2^{self.show_label(x)}' for x in t.exponents)

    def terms(self, bound: int) -> Iterator[Exp2Term]:
        elements = self.base.elements()  # type: ignore
        for k in range(min(bound, len(elements)) + 1):
            for chosen in combinations(elements, k):
                yield Exp2Term(tuple(reversed(chosen)))

    def reducts(self, t: Exp2Term) -> Iterator[Exp2Term]:
        xs = t.exponents
        for i in range(len(xs)):
            yield Exp2Term(xs[:i] + xs[i + 1:])
            for smaller in self.base.elements()[:self.base.position(xs[i])]:  # type: ignore
                yield self.normalize(Exp2Term(xs[:i] + (smaller,) + xs[i + 1:]))

    def fmap(self, f: OrderMorphism, t: Exp2Term) -> Exp2Term:
        return Exp2Term(tuple(f(x) for x in t.exponents))

    def support(self, t: Exp2Term) -> frozenset:
        return frozenset(t.exponents)


def compare_exp2(X: BaseOrder, s: Exp2Term, t: Exp2Term) -> Ordering:
    '''
    Compare two sums over X, rejecting foreign labels.

    >>> from ordforge.orders import parse_order
    >>> X = parse_order('list:[a,b]')
    >>> compare_exp2(X, Exp2Term(('b',)), Exp2Term(('b', 'a'))).name
    'LT'
    '''
    notation = Exp2Notation(X)
    notation.validate(s)
    notation.validate(t)
    return notation.compare(s, t)


def exp2_map(f: OrderMorphism) -> Callable[[Exp2Term], Exp2Term]:
    notation = Exp2Notation(f.target)
    return lambda t: notation.fmap(f, t)


def enumerate_exp2(X: BaseOrder) -> Fragment:
    '''All 2^n sums over a finite order, ascending.'''
    return Exp2Notation(X).fragment(len(X))


def binary_value(X: BaseOrder, t: Exp2Term) -> int:
    '''Read a sum as the binary numeral with bit `position(x)` set for each exponent.'''
    return sum(2 ** X.position(x) for x in t.exponents)
