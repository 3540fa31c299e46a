'''
The relativized Veblen functor φ_X and its extension Γ_X.

Terms are 0, φ_u(s) for u in the base order, formal Γ_u atoms (Γ_X
only) and non-increasing sums of at least two of the principal terms.
φ_u is the Veblen function whose index sits just above Γ_u, so Γ_u is
exactly the least term all of whose indices and labels are below u.
'''
from dataclasses import dataclass
from functools import cmp_to_key
from typing import Any
from typing import Callable
from typing import Dict
from typing import Iterator
from typing import List
from typing import Tuple

from ordforge.notation import COMPARE_CACHE_LIMIT
from ordforge.notation import Fragment
from ordforge.notation import FormationError
from ordforge.notation import Notation
from ordforge.notation import ZERO
from ordforge.notation import descending_combinations
from ordforge.notation import lexicographic
from ordforge.orders import BaseOrder
from ordforge.orders import Label
from ordforge.orders import OrderMorphism
from ordforge.orders import Ordering
from ordforge.syntax import RawTerm


@dataclass(frozen=True)
class Phi:
    label: Label
    arg: Any


@dataclass(frozen=True)
class GammaAtom:
    label: Label


@dataclass(frozen=True)
class PhiSum:
    summands: Tuple[Any, ...]


class PhiNotation(Notation):
    name = 'phi'
    relativized = True
    with_gamma = False

    def __init__(self, base=None):
        super().__init__(base)
        self._cache: Dict[Tuple[Any, Any], Ordering] = {}

    @staticmethod
    def summands(t: Any) -> Tuple[Any, ...]:
        if t == ZERO:
            return ()
        if isinstance(t, PhiSum):
            return t.summands
        return (t,)

    @staticmethod
    def from_summands(summands) -> Any:
        if not summands:
            return ZERO
        if len(summands) == 1:
            return summands[0]
        return PhiSum(tuple(summands))

    def _label_cmp(self, u: Label, v: Label) -> Ordering:
        return self.base.compare(u, v)  # type: ignore

    def compare(self, s: Any, t: Any) -> Ordering:
        key = (s, t)
        result = self._cache.get(key)
        if result is None:
            result = self._compare(s, t)
            if len(self._cache) >= COMPARE_CACHE_LIMIT:
                self._cache.clear()
            self._cache[key] = result
        return result

    def _compare(self, s: Any, t: Any) -> Ordering:
        if s == t:
            return Ordering.EQ
        if s == ZERO:
            return Ordering.LT
        if t == ZERO:
            return Ordering.GT
        if isinstance(s, PhiSum) or isinstance(t, PhiSum):
            return lexicographic(self.compare, self.summands(s), self.summands(t))
        return self._compare_principal(s, t)

    def _compare_principal(self, s: Any, t: Any) -> Ordering:
        if isinstance(s, GammaAtom) and isinstance(t, GammaAtom):
            return self._label_cmp(s.label, t.label)
        if isinstance(s, GammaAtom):
            return self._compare_principal(t, s).flip()
        if isinstance(t, GammaAtom):
            # φ_w(s) lies below Γ_u only when w < u and s does
            if self._label_cmp(s.label, t.label) == Ordering.LT:
                return self.compare(s.arg, t)
            return Ordering.GT
        relation = self._label_cmp(s.label, t.label)
        if relation == Ordering.LT:
            return self.compare(s.arg, t)
        if relation == Ordering.EQ:
            return self.compare(s.arg, t.arg)
        return self.compare(s, t.arg)

    def validate(self, t: Any) -> None:
        if t == ZERO:
            return
        if isinstance(t, GammaAtom):
            if not self.with_gamma:
                raise FormationError('Γ atoms only exist in the Γ system', 'phi term formation')
            self.check_label(t.label)
        elif isinstance(t, Phi):
            self.check_label(t.label)
            self.validate(t.arg)
            arg = t.arg
            if isinstance(arg, Phi) and self._label_cmp(t.label, arg.label) == Ordering.LT:
                raise FormationError(f'{self.show(t)} equals its argument {self.show(arg)}',
                                     'φ normal form: argument is not φ_v(t) with u < v')
            if isinstance(arg, GammaAtom) and self._label_cmp(t.label, arg.label) == Ordering.LT:
                raise FormationError(f'{self.show(t)} equals its argument {self.show(arg)}',
                                     'φ normal form: argument is not Γ_w with u < w')
        elif isinstance(t, PhiSum):
            if len(t.summands) < 2:
                raise FormationError('a sum needs at least two summands', 'sum length > 1')
            for p in t.summands:
                if not isinstance(p, (Phi, GammaAtom)):
                    raise FormationError(f'{p!r} is not additive principal',
                                         'summands are principal terms')
                self.validate(p)
            for a, b in zip(t.summands, t.summands[1:]):
                if self.compare(a, b) == Ordering.LT:
                    raise FormationError(f'summands of {self.show(t)} are not non-increasing',
                                         'non-increasing summands')
        else:
            raise FormationError(f'{t!r} is not a term of {self.name}', f'{self.name} term formation')

    def size(self, t: Any) -> int:
        if t == ZERO:
            return 0
        if isinstance(t, GammaAtom):
            return 1
        if isinstance(t, Phi):
            return 1 + self.size(t.arg)
        return sum(self.size(p) for p in t.summands)

    def normalize(self, t: Any) -> Any:
        if t == ZERO or isinstance(t, GammaAtom):
            return t
        if isinstance(t, Phi):
            arg = self.normalize(t.arg)
            if isinstance(arg, (Phi, GammaAtom)) and self._label_cmp(t.label, arg.label) == Ordering.LT:
                return arg
            return Phi(t.label, arg)
        return self.normalize_sum(t.summands)

    def normalize_sum(self, pieces) -> Any:
        summands: List[Any] = []
        for piece in pieces:
            summands.extend(self.summands(self.normalize(piece)))
        summands.sort(key=cmp_to_key(self.compare), reverse=True)
        return self.from_summands(summands)

    def from_raw(self, raw: RawTerm) -> Any:
        if raw.kind == 'zero':
            return ZERO
        if raw.kind == 'phi':
            return Phi(self.label(raw.token), self.from_raw(raw.children[0]))  # type: ignore
        if raw.kind == 'gamma' and self.with_gamma:
            return GammaAtom(self.label(raw.token))  # type: ignore
        if raw.kind == 'sum':
            return PhiSum(tuple(self.from_raw(child) for child in raw.children))
        raise self.unsupported(raw)

    def show(self, t: Any) -> str:
        if t == ZERO:
            return '0'
        if isinstance(t, GammaAtom):
            return f'G[{self.show_label(t.label)}]'
        if isinstance(t, Phi):
            return f'phi[{self.show_label(t.label)}]({self.show(t.arg)})'
        return ' + '.join(self.show(p) for p in t.summands)

    def principals(self, size: int, by_size: Dict[int, List[Any]]) -> List[Any]:
        labels = self.base.elements()  # type: ignore
        result: List[Any] = []
        if size == 1 and self.with_gamma:
            result.extend(GammaAtom(u) for u in labels)
        for u in labels:
            for arg in by_size[size - 1]:
                candidate = Phi(u, arg)
                if self.is_valid(candidate):
                    result.append(candidate)
        return result

    def terms(self, bound: int) -> List[Any]:
        by_size: Dict[int, List[Any]] = {0: [ZERO]}
        pool: List[Any] = []
        for size in range(1, bound + 1):
            pool.sort(key=cmp_to_key(self.compare))
            sums = [PhiSum(combo) for combo in descending_combinations(pool, self.size, size)]
            new_principals = self.principals(size, by_size)
            by_size[size] = new_principals + sums
            pool.extend(new_principals)
        return [t for size in sorted(by_size) for t in by_size[size]]

    def _smaller_labels(self, u: Label) -> List[Label]:
        return [v for v in self.base.elements(self.base.position(u))  # type: ignore
                if self._label_cmp(v, u) == Ordering.LT]

    def reducts(self, t: Any) -> Iterator[Any]:
        if t == ZERO:
            return
        if isinstance(t, GammaAtom):
            yield ZERO
            for v in self._smaller_labels(t.label):
                yield GammaAtom(v)
                yield Phi(v, ZERO)
            return
        if isinstance(t, Phi):
            yield ZERO
            yield t.arg
            for r in self.reducts(t.arg):
                yield self.normalize(Phi(t.label, r))
            for v in self._smaller_labels(t.label):
                yield self.normalize(Phi(v, t.arg))
            return
        summands = t.summands
        for i, p in enumerate(summands):
            rest = summands[:i] + summands[i + 1:]
            yield self.from_summands(rest)
            for r in self.reducts(p):
                yield self.normalize_sum(rest + (r,))

    def fmap(self, f: OrderMorphism, t: Any) -> Any:
        if t == ZERO:
            return ZERO
        if isinstance(t, GammaAtom):
            return GammaAtom(f(t.label))
        if isinstance(t, Phi):
            return Phi(f(t.label), self.fmap(f, t.arg))
        return PhiSum(tuple(self.fmap(f, p) for p in t.summands))

    def support(self, t: Any) -> frozenset:
        if t == ZERO:
            return frozenset()
        if isinstance(t, GammaAtom):
            return frozenset([t.label])
        if isinstance(t, Phi):
            return frozenset([t.label]) | self.support(t.arg)
        return frozenset().union(*(self.support(p) for p in t.summands))


class GammaNotation(PhiNotation):
    name = 'gamma'
    with_gamma = True


def compare_phi(X: BaseOrder, s: Any, t: Any) -> Ordering:
    '''Compare two φ_X terms; non-normal input raises FormationError.'''
    notation = PhiNotation(X)
    notation.validate(s)
    notation.validate(t)
    return notation.compare(s, t)


def compare_gamma(X: BaseOrder, s: Any, t: Any) -> Ordering:
    notation = GammaNotation(X)
    notation.validate(s)
    notation.validate(t)
    return notation.compare(s, t)


def normalize_phi(X: BaseOrder, t: Any, gamma: bool = False) -> Any:
    '''
    Absorb fixed points: φ_u(φ_v(t)) with u < v is φ_v(t), likewise for
    Γ_w with u < w; sums are flattened and sorted.
    '''
    notation = GammaNotation(X) if gamma else PhiNotation(X)
    return notation.normalize(t)


def phi_map(f: OrderMorphism, gamma: bool = False) -> Callable[[Any], Any]:
    notation = GammaNotation(f.target) if gamma else PhiNotation(f.target)
    return lambda t: notation.fmap(f, t)


def enumerate_phi(X: BaseOrder, max_size: int, gamma: bool = False) -> Fragment:
    notation = GammaNotation(X) if gamma else PhiNotation(X)
    return notation.fragment(max_size)


def below_gamma(X: BaseOrder, t: Any, u: Label) -> bool:
    '''True iff every φ index and Γ label in `t` is below u, that is t < Γ_u.'''
    return all(X.compare(v, u) == Ordering.LT for v in GammaNotation(X).support(t))


def single_index_key(t: Any) -> Tuple:
    '''
    Over a one-element base φ_u(s) behaves as ω^s; this maps such terms to
    the nested-tuple Cantor normal form order.
    '''
    if t == ZERO:
        return ()
    if isinstance(t, Phi):
        return (single_index_key(t.arg),)
    if isinstance(t, PhiSum):
        return tuple(single_index_key(p)[0] for p in t.summands)
    raise ValueError(f'{t!r} has no single-index reading')
