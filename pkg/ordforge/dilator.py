'''
Dilators on finite orders.

A `FunctorHandle` wraps a family of notation systems X ↦ F(X) together
with their action on morphisms. On top of it this module checks the
dilator conditions on finite instances (range condition for pullbacks,
finite support, naturality of supports), extracts a denotation system
from a functor and rebuilds a functor from a denotation system.

Every check over an infinite F(n) works on the fragment of terms up to a
size bound. All functors here preserve term size, so a bounded fragment
is mapped into the bounded fragment of the same bound.
'''
import json
import logging

from dataclasses import dataclass
from functools import cmp_to_key
from itertools import combinations
from typing import Any
from typing import Callable
from typing import Dict
from typing import FrozenSet
from typing import Iterable
from typing import Iterator
from typing import List
from typing import Optional
from typing import Sequence
from typing import Set
from typing import Tuple
from typing import Union

from ordforge.notation import FormationError
from ordforge.notation import Notation
from ordforge.notation import NotationError
from ordforge.orders import BaseOrder
from ordforge.orders import OrderMorphism
from ordforge.orders import Ordering
from ordforge.orders import all_morphisms
from ordforge.orders import check_morphism
from ordforge.orders import finite
from ordforge.orders import morphism
from ordforge.orders import pullback
from ordforge.syntax import RawTerm

logger = logging.getLogger('ordforge.dilator')


class PreconditionError(Exception):
    '''Error for checks called on input they are not defined for'''
    pass


class SupportNotFoundError(Exception):
    '''Error for terms with no finite support within the enumeration bound'''
    pass


class IncoherentDenotationsError(Exception):
    '''Error for denotation systems whose comparisons depend on more than the coefficient pattern'''
    pass


class FunctorHandle:
    '''
    Uniform face of a functor on linear orders.

    `factory` builds the notation system F(X) for a base order X; the
    morphism action and supports come from that system.
    '''

    def __init__(self,
                 name: str,
                 factory: Callable[[BaseOrder], Notation],
                 bound: int = 4):
        self.name = name
        self.factory = factory
        self.bound = bound
        self._systems: Dict[BaseOrder, Notation] = {}
        self._fragments: Dict[Tuple[BaseOrder, int], Tuple[Any, ...]] = {}

    def __repr__(self) -> str:
        return f'<FunctorHandle {self.name}>'

    def at(self, X: BaseOrder) -> Notation:
        if X not in self._systems:
            self._systems[X] = self.factory(X)
        return self._systems[X]

    def terms(self, X: BaseOrder, bound: Optional[int] = None) -> Tuple[Any, ...]:
        '''Sorted fragment of F(X) up to the size bound.'''
        key = (X, self.bound if bound is None else bound)
        if key not in self._fragments:
            self._fragments[key] = self.at(X).fragment(key[1]).terms
        return self._fragments[key]

    def compare(self, X: BaseOrder, s: Any, t: Any) -> Ordering:
        return self.at(X).compare(s, t)

    def fmap(self, f: OrderMorphism, t: Any) -> Any:
        return self.at(f.target).fmap(f, t)

    def support(self, X: BaseOrder, t: Any) -> FrozenSet:
        return self.at(X).support(t)

    def show(self, X: BaseOrder, t: Any) -> str:
        return self.at(X).show(t)

    def parse(self, X: BaseOrder, text: str) -> Any:
        return self.at(X).parse(text)

    def size(self, X: BaseOrder, t: Any) -> int:
        return self.at(X).size(t)

    def image(self, f: OrderMorphism, bound: Optional[int] = None) -> Set[Any]:
        '''ran(F(f)) within the bounded fragment.'''
        return {self.fmap(f, t) for t in self.terms(f.source, bound)}


def _check_pullback_square(f: OrderMorphism, g: OrderMorphism, h: OrderMorphism) -> None:
    if not (f.target == g.target == h.target):
        raise PreconditionError('f, g and h must share their target')
    for m in (f, g, h):
        if not m.source.is_finite or not check_morphism(m):
            raise PreconditionError(f'{m} is not a morphism between finite orders')
    if h.range != f.range & g.range:
        raise PreconditionError('range(h) must be range(f) ∩ range(g)')


def range_condition_witness(F: FunctorHandle,
                            f: OrderMorphism,
                            g: OrderMorphism,
                            h: OrderMorphism,
                            bound: Optional[int] = None) -> Optional[Dict[str, Any]]:
    '''None if ran(F(h)) = ran(F(f)) ∩ ran(F(g)), else the offending terms.'''
    _check_pullback_square(f, g, h)
    expected = F.image(f, bound) & F.image(g, bound)
    actual = F.image(h, bound)
    if expected == actual:
        return None
    C = f.target
    return {
        'f': f.as_dict(),
        'g': g.as_dict(),
        'h': h.as_dict(),
        'missing': sorted(F.show(C, t) for t in expected - actual),
        'extra': sorted(F.show(C, t) for t in actual - expected),
    }


def check_range_condition(F: FunctorHandle,
                          f: OrderMorphism,
                          g: OrderMorphism,
                          h: OrderMorphism,
                          bound: Optional[int] = None) -> bool:
    '''
    ran(F(h)) = ran(F(f)) ∩ ran(F(g)) on the bounded fragments, for
    range(h) = range(f) ∩ range(g).
    '''
    return range_condition_witness(F, f, g, h, bound) is None


def morphism_triples(max_order: int) -> Iterator[Tuple[OrderMorphism, OrderMorphism, OrderMorphism]]:
    '''Every pair f, g into fin:c (c <= max_order) with its pullback h.'''
    for c in range(max_order + 1):
        C = finite(c)
        into_c = [m for n in range(c + 1) for m in all_morphisms(finite(n), C)]
        for f in into_c:
            for g in into_c:
                yield f, g, pullback(f, g)[1]


def dilator_failures(F: FunctorHandle,
                     max_order: int,
                     bound: Optional[int] = None) -> Iterator[Dict[str, Any]]:
    for f, g, h in morphism_triples(max_order):
        witness = range_condition_witness(F, f, g, h, bound)
        if witness is not None:
            yield witness


def check_dilator(F: FunctorHandle, max_order: int, bound: Optional[int] = None) -> bool:
    '''The range condition for all morphism triples between orders of size <= max_order.'''
    for witness in dilator_failures(F, max_order, bound):
        logger.debug(f'{F.name}: range condition fails: {witness}')
        return False
    return True


def check_finite_support(F: FunctorHandle,
                         X: BaseOrder,
                         term: Any,
                         bound: Optional[int] = None) -> Tuple[int, OrderMorphism]:
    '''
    The least n with some f: fin:n → X such that `term` lies in ran(F(f)),
    together with the first such f.
    '''
    if not X.is_finite:
        raise PreconditionError(f'{X} is not finite')
    for n in range(len(X) + 1):
        source = finite(n)
        for f in all_morphisms(source, X):
            if term in F.image(f, bound):
                return n, f
    raise SupportNotFoundError(f'{F.show(X, term)} has no support within {X} at bound {bound}')


def _enumerating_morphism(X: BaseOrder, labels: Iterable[Any]) -> OrderMorphism:
    ordered = sorted(labels, key=X.position)
    return morphism(finite(len(ordered)), X, enumerate(ordered))


def supp_naturality_witness(F: FunctorHandle,
                            f: OrderMorphism,
                            bound: Optional[int] = None) -> Optional[Dict[str, Any]]:
    X, Y = f.source, f.target
    for sigma in F.terms(X, bound):
        support = F.support(X, sigma)
        image = F.fmap(f, sigma)
        if F.support(Y, image) != frozenset(f(x) for x in support):
            return {'term': F.show(X, sigma), 'reason': 'supp is not natural',
                    'map': f.as_dict()}
        iota = _enumerating_morphism(X, support)
        if sigma not in F.image(iota, bound):
            return {'term': F.show(X, sigma), 'reason': 'term is not in ran(F(ι_supp))'}
    return None


def check_supp_naturality(F: FunctorHandle, f: OrderMorphism, bound: Optional[int] = None) -> bool:
    '''
    supp_Y(F(f)(σ)) = f[supp_X(σ)] and σ ∈ ran(F(ι_σ)) for every fragment
    term σ of F(X), ι_σ enumerating supp_X(σ).
    '''
    return supp_naturality_witness(F, f, bound) is None


@dataclass(frozen=True)
class DenotationShape:
    index: str
    arity: int

    def __post_init__(self):
        if self.arity < 0:
            raise PreconditionError(f'Arity of {self.index} must be >= 0')


@dataclass(frozen=True)
class Denotation:
    '''(c; α_0, ..., α_{n-1}; k) with coefficients positions in fin:k.'''

    index: str
    coefficients: Tuple[int, ...]
    parameter: int


def collapse(xs: Sequence[Any],
             ys: Sequence[Any],
             compare: Callable[[Any, Any], Ordering]) -> Tuple[Tuple[int, ...], Tuple[int, ...], int]:
    '''
    Collapse two coefficient tuples into fin:k, k the size of their union:
    returns the positions of both tuples in the union and k.
    '''
    joint: List[Any] = []
    for x in sorted(set(xs) | set(ys), key=cmp_to_key(compare)):
        if not joint or compare(joint[-1], x) != Ordering.EQ:
            joint.append(x)

    def position(x):
        for i, y in enumerate(joint):
            if compare(x, y) == Ordering.EQ:
                return i
        raise PreconditionError(f'{x!r} vanished while collapsing')

    return tuple(position(x) for x in xs), tuple(position(y) for y in ys), len(joint)


class DenotationSystem:
    '''
    Denotations (c; α_0 < ... < α_{n-1}; k) with a comparison between
    denotations over the same parameter k.
    '''

    name = 'denotations'

    def shapes(self) -> Tuple[DenotationShape, ...]:
        raise NotImplementedError

    def shape(self, index: str) -> DenotationShape:
        for shape in self.shapes():
            if shape.index == index:
                return shape
        raise NotationError(f'Unknown denotation index {{{index}}} in {self.name}')

    @property
    def max_arity(self) -> int:
        return max((s.arity for s in self.shapes()), default=0)

    def validate(self, d: Denotation) -> None:
        shape = self.shape(d.index)
        if shape.arity != len(d.coefficients):
            raise FormationError(f'{{{d.index}}} takes {shape.arity} coefficients, got {len(d.coefficients)}',
                                 'denotation arity')
        for a, b in zip(d.coefficients, d.coefficients[1:]):
            if not a < b:
                raise FormationError(f'coefficients {d.coefficients} are not strictly increasing',
                                     'α_0 < ... < α_{n-1}')
        if any(c < 0 or c >= d.parameter for c in d.coefficients):
            raise FormationError(f'coefficients {d.coefficients} are not below {d.parameter}',
                                 'α_{n-1} < α')

    def compare(self, a: Denotation, b: Denotation) -> Ordering:
        if a.parameter != b.parameter:
            raise PreconditionError('denotations must share their parameter')
        if a == b:
            return Ordering.EQ
        return self._compare(a, b)

    def _compare(self, a: Denotation, b: Denotation) -> Ordering:
        raise NotImplementedError

    def all_denotations(self, k: int) -> List[Denotation]:
        return [Denotation(shape.index, coefficients, k)
                for shape in self.shapes() if shape.arity <= k
                for coefficients in combinations(range(k), shape.arity)]

    def denotations(self, k: int) -> List[Denotation]:
        '''All denotations over fin:k, ascending.'''
        return sorted(self.all_denotations(k), key=cmp_to_key(self.compare))


class FunctorDenotations(DenotationSystem):
    '''
    The denotation system of a functor: indices are the fragment elements
    of F(fin:n) which are not in the range of any F(f), f: fin:(n-1) → fin:n.
    '''

    def __init__(self, F: FunctorHandle, max_arity: int, bound: Optional[int] = None):
        self.F = F
        self.name = F.name
        self.bound = F.bound if bound is None else bound
        self._index_terms: Dict[str, Tuple[int, Any]] = {}
        shapes = []
        for n in range(max_arity + 1):
            X = finite(n)
            covered: Set[Any] = set()
            if n > 0:
                for f in all_morphisms(finite(n - 1), X):
                    covered |= F.image(f, self.bound)
            for term in F.terms(X, self.bound):
                if term not in covered:
                    token = F.show(X, term)
                    self._index_terms[token] = (n, term)
                    shapes.append(DenotationShape(token, n))
        self._shapes = tuple(shapes)
        logger.debug(f'{F.name}: {len(shapes)} denotation shapes up to arity {max_arity}')

    def shapes(self) -> Tuple[DenotationShape, ...]:
        return self._shapes

    def value(self, d: Denotation) -> Any:
        '''The element of F(fin:k) the denotation stands for.'''
        self.validate(d)
        n, term = self._index_terms[d.index]
        f = morphism(finite(n), finite(d.parameter), enumerate(d.coefficients))
        return self.F.fmap(f, term)

    def _compare(self, a: Denotation, b: Denotation) -> Ordering:
        return self.F.compare(finite(a.parameter), self.value(a), self.value(b))


class TableDenotations(DenotationSystem):
    '''
    Denotation system given by explicit ascending lists of all denotations
    over fin:k for each k in the table. Comparisons over a parameter
    without a table are collapsed to the joint coefficient pattern.
    '''

    def __init__(self,
                 name: str,
                 shapes: Iterable[DenotationShape],
                 tables: Dict[int, Sequence[Denotation]]):
        self.name = name
        self._shapes = tuple(shapes)
        self._ranks: Dict[int, Dict[Denotation, int]] = {}
        for k, ordered in tables.items():
            expected = set(self.all_denotations(k))
            if set(ordered) != expected or len(ordered) != len(expected):
                raise PreconditionError(f'Table for parameter {k} does not list every denotation exactly once')
            self._ranks[k] = {d: i for i, d in enumerate(ordered)}

    def shapes(self) -> Tuple[DenotationShape, ...]:
        return self._shapes

    def _compare(self, a: Denotation, b: Denotation) -> Ordering:
        if a.parameter not in self._ranks:
            xs, ys, k = collapse(a.coefficients, b.coefficients, Ordering.of)
            a, b = Denotation(a.index, xs, k), Denotation(b.index, ys, k)
            if k not in self._ranks:
                raise PreconditionError(f'{self.name} has no table for parameter {k}')
        ranks = self._ranks[a.parameter]
        return Ordering.of(ranks[a], ranks[b])


def denotations_to_json(D: DenotationSystem, max_parameter: int) -> str:
    return json.dumps({
        'name': D.name,
        'shapes': [{'index': s.index, 'arity': s.arity} for s in D.shapes()],
        'tables': {
            str(k): [[d.index, list(d.coefficients)] for d in D.denotations(k)]
            for k in range(max_parameter + 1)
        },
    }, ensure_ascii=False)


def denotations_from_json(data: Union[str, Dict[str, Any]]) -> TableDenotations:
    spec = json.loads(data) if isinstance(data, str) else data
    try:
        shapes = [DenotationShape(str(s['index']), int(s['arity'])) for s in spec['shapes']]
        tables = {
            int(k): [Denotation(str(index), tuple(coefficients), int(k))
                     for index, coefficients in rows]
            for k, rows in spec.get('tables', {}).items()
        }
    except (KeyError, TypeError, ValueError) as e:
        raise PreconditionError(f'Malformed denotation system: {e}') from e
    return TableDenotations(spec.get('name', 'table'), shapes, tables)


def coherence_failures(D: DenotationSystem, max_size: int) -> Iterator[Dict[str, Any]]:
    '''
    Comparisons which change when the coefficients of both denotations
    are moved along a morphism fin:k → fin:k'.
    '''
    for k in range(max_size + 1):
        items = D.all_denotations(k)
        for k2 in range(k, max_size + 1):
            for e in all_morphisms(finite(k), finite(k2)):
                for a in items:
                    for b in items:
                        ea = Denotation(a.index, tuple(e(c) for c in a.coefficients), k2)
                        eb = Denotation(b.index, tuple(e(c) for c in b.coefficients), k2)
                        before, after = D.compare(a, b), D.compare(ea, eb)
                        if before != after:
                            yield {'a': a, 'b': b, 'moved_to': k2,
                                   'before': before.name, 'after': after.name}


def check_coherence(D: DenotationSystem, max_size: int) -> bool:
    return next(coherence_failures(D, max_size), None) is None


def check_uniqueness(D: DenotationSystem, k: int) -> bool:
    '''Distinct denotations over fin:k never compare equal.'''
    items = D.all_denotations(k)
    return all(D.compare(a, b) != Ordering.EQ
               for i, a in enumerate(items) for b in items[i + 1:])


@dataclass(frozen=True)
class DenotationTerm:
    index: str
    labels: Tuple[Any, ...]


class DenotationNotation(Notation):
    '''F_D(X): denotations of D with coefficients from X.'''

    relativized = True

    def __init__(self, D: DenotationSystem, base: BaseOrder):
        super().__init__(base)
        self.D = D
        self.name = f'F[{D.name}]'

    def _pair(self, s: DenotationTerm, t: DenotationTerm) -> Tuple[Denotation, Denotation]:
        xs, ys, k = collapse(s.labels, t.labels, self.base.compare)  # type: ignore
        return Denotation(s.index, xs, k), Denotation(t.index, ys, k)

    def compare(self, s: DenotationTerm, t: DenotationTerm) -> Ordering:
        if s == t:
            return Ordering.EQ
        return self.D.compare(*self._pair(s, t))

    def validate(self, t: DenotationTerm) -> None:
        shape = self.D.shape(t.index)
        if shape.arity != len(t.labels):
            raise FormationError(f'{{{t.index}}} takes {shape.arity} coefficients', 'denotation arity')
        for label in t.labels:
            self.check_label(label)
        for a, b in zip(t.labels, t.labels[1:]):
            if self.base.compare(a, b) != Ordering.LT:  # type: ignore
                raise FormationError('coefficients are not strictly increasing', 'α_0 < ... < α_{n-1}')

    def size(self, t: DenotationTerm) -> int:
        return len(t.labels)

    def from_raw(self, raw: RawTerm) -> DenotationTerm:
        if raw.kind != 'eps_d':
            raise self.unsupported(raw)
        for child in raw.children:
            if child.kind != 'label':
                raise FormationError(f'coefficients of {self.name} are labels, got {child.kind}',
                                     'denotation coefficients')
        return DenotationTerm(raw.token, tuple(self.label(c.token) for c in raw.children))  # type: ignore

    def show(self, t: DenotationTerm) -> str:
        return f'E{{{t.index}}}({", ".join(self.show_label(x) for x in t.labels)})'

    def terms(self, bound: int) -> List[DenotationTerm]:
        elements = self.base.elements()  # type: ignore
        return [DenotationTerm(shape.index, labels)
                for shape in self.D.shapes() if shape.arity <= min(bound, len(elements))
                for labels in combinations(elements, shape.arity)]

    def fmap(self, f: OrderMorphism, t: DenotationTerm) -> DenotationTerm:
        return DenotationTerm(t.index, tuple(f(x) for x in t.labels))

    def support(self, t: DenotationTerm) -> frozenset:
        return frozenset(t.labels)


def denotations_from_functor(F: FunctorHandle,
                             max_arity: int,
                             bound: Optional[int] = None) -> FunctorDenotations:
    return FunctorDenotations(F, max_arity, bound)


def functor_from_denotations(D: DenotationSystem, check_size: int = 3) -> FunctorHandle:
    '''
    The functor F_D: X ↦ denotations with coefficients in X, acting on
    morphisms by moving coefficients. D is checked for coherence on
    parameters up to `check_size` first.
    '''
    witness = next(coherence_failures(D, check_size), None)
    if witness is not None:
        raise IncoherentDenotationsError(f'{D.name} is not coherent: {witness}')
    return FunctorHandle(f'F[{D.name}]', lambda X: DenotationNotation(D, X), bound=D.max_arity)


def check_round_trip(F: FunctorHandle,
                     max_order: int,
                     bound: Optional[int] = None) -> bool:
    '''
    F_D with D extracted from F is order-isomorphic to F on fin:n for
    n <= max_order, through the value map of D.
    '''
    D = denotations_from_functor(F, max_order, bound)
    G = functor_from_denotations(D)
    for n in range(max_order + 1):
        X = finite(n)
        rebuilt = [D.value(Denotation(t.index, tuple(t.labels), n)) for t in G.terms(X, n)]
        if rebuilt != list(F.terms(X, D.bound)):
            logger.debug(f'{F.name}: round trip differs on {X}')
            return False
    return True
