import json

from dataclasses import dataclass
from dataclasses import field
from enum import IntEnum
from functools import cmp_to_key
from itertools import combinations
from typing import Any
from typing import Dict
from typing import FrozenSet
from typing import Hashable
from typing import Iterable
from typing import Iterator
from typing import List
from typing import Optional
from typing import Tuple
from typing import Union

Label = Hashable
Node = Tuple[int, ...]

FINITE = 'finite'
OMEGA = 'omega'
EXPLICIT = 'explicit'


class OrderError(Exception):
    '''Error for malformed order descriptions and labels foreign to an order'''
    pass


class MorphismError(Exception):
    '''Error for maps which are not total or do not connect the stated orders'''
    pass


class TreeError(Exception):
    '''Error for node sets which are not trees and nodes outside a tree'''
    pass


class Ordering(IntEnum):
    '''Outcome of a comparison.'''

    LT = -1
    EQ = 0
    GT = 1

    def flip(self) -> 'Ordering':
        return Ordering(-self.value)

    @classmethod
    def of(cls, a: Any, b: Any) -> 'Ordering':
        '''Compare two python values which support < and ==.'''
        if a < b:
            return cls.LT
        if a == b:
            return cls.EQ
        return cls.GT


@dataclass(frozen=True)
class BaseOrder:
    '''
    A linear order whose elements are opaque labels.

    `fin:n` has the labels 0..n-1, `omega` has all natural numbers and
    `list:[a,b,c]` has the listed tokens in the listed order. The order of
    two labels is always read off the order, never off the labels
    themselves.
    '''

    kind: str
    size: Optional[int] = None
    labels: Tuple[str, ...] = ()
    _positions: Dict[Label, int] = field(default_factory=dict, compare=False,
                                         repr=False, hash=False)

    def __post_init__(self):
        if self.kind == FINITE:
            if not isinstance(self.size, int) or self.size < 0:
                raise OrderError(f'Finite order needs a size >= 0, got {self.size}')
        elif self.kind == EXPLICIT:
            if len(set(self.labels)) != len(self.labels):
                raise OrderError(f'Duplicate labels in {list(self.labels)}')
            object.__setattr__(self, 'size', len(self.labels))
            self._positions.update((label, i) for i, label in enumerate(self.labels))
        elif self.kind != OMEGA:
            raise OrderError(f'Unknown order kind {self.kind}')

    @property
    def is_finite(self) -> bool:
        return self.kind != OMEGA

    def __len__(self) -> int:
        if self.size is None:
            raise OrderError('omega has no finite length')
        return self.size

    def elements(self, bound: Optional[int] = None) -> Tuple[Label, ...]:
        '''
        Elements in ascending order. `omega` is only enumerable up to
        `bound`, which is then required.
        '''
        if self.kind == FINITE:
            return tuple(range(self.size))  # type: ignore
        if self.kind == EXPLICIT:
            return self.labels
        if bound is None:
            raise OrderError('omega needs an enumeration bound')
        return tuple(range(bound))

    def contains(self, label: Label) -> bool:
        if self.kind == EXPLICIT:
            return label in self._positions
        if isinstance(label, bool) or not isinstance(label, int) or label < 0:
            return False
        return self.kind == OMEGA or label < self.size  # type: ignore

    def position(self, label: Label) -> int:
        '''Rank of `label` in the order.'''
        if not self.contains(label):
            raise OrderError(f'{label!r} is not an element of {self}')
        if self.kind == EXPLICIT:
            return self._positions[label]
        return label  # type: ignore

    def compare(self, a: Label, b: Label) -> Ordering:
        return Ordering.of(self.position(a), self.position(b))

    def label(self, token: str) -> Label:
        '''Turn a textual token (as written after `@`) into an element.'''
        if self.kind == EXPLICIT:
            value: Label = token
        elif token.isdigit():
            value = int(token)
        else:
            value = token
        if not self.contains(value):
            raise OrderError(f'{token} is not an element of {self}')
        return value

    def describe(self) -> str:
        if self.kind == FINITE:
            return f'fin:{self.size}'
        if self.kind == OMEGA:
            return 'omega'
        return f'list:[{",".join(self.labels)}]'

    def __str__(self) -> str:
        return self.describe()


def finite(n: int) -> BaseOrder:
    return BaseOrder(FINITE, n)


def omega() -> BaseOrder:
    return BaseOrder(OMEGA)


def explicit(labels: Iterable[str]) -> BaseOrder:
    return BaseOrder(EXPLICIT, labels=tuple(labels))


def parse_order(text: str) -> BaseOrder:
    '''
    Parse the textual order syntax: `fin:N`, `omega` or `list:[a,b,c]`.

    >>> parse_order('list:[a, b]').elements()
    ('a', 'b')
    '''
    source = text.strip()
    if source == OMEGA:
        return omega()
    if source.startswith('fin:'):
        count = source[len('fin:'):].strip()
        if not count.isdigit():
            raise OrderError(f'Bad finite order size in {text!r}')
        return finite(int(count))
    if source.startswith('list:'):
        body = source[len('list:'):].strip()
        if not (body.startswith('[') and body.endswith(']')):
            raise OrderError(f'Explicit order must look like list:[a,b,c], got {text!r}')
        inner = body[1:-1].strip()
        labels = [token.strip() for token in inner.split(',')] if inner else []
        for token in labels:
            if not token or not all(c.isalnum() or c == '_' for c in token):
                raise OrderError(f'Bad label {token!r} in {text!r}')
        return explicit(labels)
    raise OrderError(f'Unknown order syntax {text!r}; use fin:N, omega or list:[...]')


@dataclass(frozen=True)
class OrderMorphism:
    '''
    A map between two orders given as a finite association list. Use
    `check_morphism` to find out whether it is strictly order-preserving.
    '''

    source: BaseOrder
    target: BaseOrder
    mapping: Tuple[Tuple[Label, Label], ...]
    _lookup: Dict[Label, Label] = field(default_factory=dict, compare=False,
                                        repr=False, hash=False)

    def __post_init__(self):
        self._lookup.update(self.mapping)
        if len(self._lookup) != len(self.mapping):
            raise MorphismError(f'Label mapped twice in {list(self.mapping)}')

    def __call__(self, label: Label) -> Label:
        try:
            return self._lookup[label]
        except KeyError:
            raise MorphismError(f'{label!r} is not in the domain of the map') from None

    def __len__(self) -> int:
        return len(self.mapping)

    @property
    def range(self) -> FrozenSet[Label]:
        return frozenset(self._lookup.values())

    def as_dict(self) -> Dict[Label, Label]:
        return dict(self._lookup)

    def domain_elements(self) -> Tuple[Label, ...]:
        bound = len(self.mapping) if self.source.kind == OMEGA else None
        return self.source.elements(bound)


def morphism(source: BaseOrder,
             target: BaseOrder,
             mapping: Union[Dict[Label, Label], Iterable[Tuple[Label, Label]]]) -> OrderMorphism:
    '''Build a morphism, listing its pairs in ascending source order.'''
    pairs = list(mapping.items()) if isinstance(mapping, dict) else list(mapping)

    def key(pair):
        return source.position(pair[0]) if source.contains(pair[0]) else -1

    return OrderMorphism(source, target, tuple(sorted(pairs, key=key)))


def identity(order: BaseOrder, bound: Optional[int] = None) -> OrderMorphism:
    return morphism(order, order, [(x, x) for x in order.elements(bound)])


def compose(g: OrderMorphism, f: OrderMorphism) -> OrderMorphism:
    '''Return g∘f.'''
    if f.target != g.source:
        raise MorphismError(f'Cannot compose: {f.target} is not {g.source}')
    return morphism(f.source, g.target, [(x, g(y)) for x, y in f.mapping])


def check_morphism(f: OrderMorphism) -> bool:
    '''
    True iff `f` is strictly order-preserving on its enumerated source.

    Raises MorphismError if the map is not total on the source or sends a
    label outside the target.
    '''
    elements = f.domain_elements()
    missing = [x for x in elements if x not in f.as_dict()]
    if missing:
        raise MorphismError(f'Map is not total on {f.source}: missing {missing}')
    for x, y in f.mapping:
        if not f.source.contains(x):
            raise MorphismError(f'{x!r} is not an element of {f.source}')
        if not f.target.contains(y):
            raise MorphismError(f'{y!r} is not an element of {f.target}')
    # consecutive pairs are enough in a linear order
    for a, b in zip(elements, elements[1:]):
        if f.target.compare(f(a), f(b)) != Ordering.LT:
            return False
    return True


def all_morphisms(source: BaseOrder, target: BaseOrder) -> Iterator[OrderMorphism]:
    '''Every strictly increasing map between two finite orders.'''
    domain = source.elements()
    for image in combinations(target.elements(), len(domain)):
        yield morphism(source, target, zip(domain, image))


def pullback(f: OrderMorphism, g: OrderMorphism) -> Tuple[BaseOrder, OrderMorphism]:
    '''
    Return (D, h) with h: D → C strictly increasing and
    range(h) = range(f) ∩ range(g), where D is the finite order of the
    intersection's size.
    '''
    if f.target != g.target:
        raise MorphismError(f'Pullback needs a shared target, got {f.target} and {g.target}')
    target = f.target
    common = sorted(f.range & g.range, key=target.position)
    order = finite(len(common))
    return order, morphism(order, target, enumerate(common))


def morphism_to_json(f: OrderMorphism) -> str:
    return json.dumps({
        'src': f.source.describe(),
        'tgt': f.target.describe(),
        'map': [[x, y] for x, y in f.mapping],
    })


def _coerce(order: BaseOrder, value: Any) -> Label:
    if order.kind == EXPLICIT:
        return str(value)
    if isinstance(value, str) and value.isdigit():
        return int(value)
    return value


def morphism_from_json(data: Union[str, Dict[str, Any]]) -> OrderMorphism:
    '''Read `{"src": ..., "tgt": ..., "map": [[a, x], ...]}`.'''
    spec = json.loads(data) if isinstance(data, str) else data
    try:
        source = parse_order(spec['src'])
        target = parse_order(spec['tgt'])
        pairs = [(_coerce(source, a), _coerce(target, b)) for a, b in spec['map']]
    except (KeyError, TypeError, ValueError) as e:
        raise MorphismError(f'Malformed morphism description: {e}') from e
    return morphism(source, target, pairs)


@dataclass(frozen=True)
class FiniteTree:
    '''A finite, prefix-closed set of sequences of natural numbers.'''

    nodes: FrozenSet[Node]

    def __post_init__(self):
        for node in self.nodes:
            if not isinstance(node, tuple) or any(
                    isinstance(i, bool) or not isinstance(i, int) or i < 0 for i in node):
                raise TreeError(f'Node {node!r} is not a sequence of natural numbers')
            if node and node[:-1] not in self.nodes:
                raise TreeError(f'Node {node} has no parent {node[:-1]}')

    @classmethod
    def from_nodes(cls, nodes: Iterable[Iterable[int]], close: bool = False) -> 'FiniteTree':
        '''Build a tree; with `close` every missing prefix is added.'''
        result = {tuple(node) for node in nodes}
        if close:
            for node in list(result):
                result.update(node[:i] for i in range(len(node)))
        return cls(frozenset(result))

    def __contains__(self, node: Any) -> bool:
        return node in self.nodes

    def __len__(self) -> int:
        return len(self.nodes)

    def __iter__(self) -> Iterator[Node]:
        return iter(sorted(self.nodes))

    def children(self, node: Node) -> List[Node]:
        if node not in self.nodes:
            raise TreeError(f'{node} is not a node of the tree')
        return sorted(n for n in self.nodes if len(n) == len(node) + 1 and n[:-1] == node)

    def leaves(self) -> List[Node]:
        parents = {node[:-1] for node in self.nodes if node}
        return sorted(node for node in self.nodes if node not in parents)


def kb_compare(tree: FiniteTree, a: Node, b: Node) -> Ordering:
    '''
    Kleene–Brouwer comparison: a proper extension is smaller than its
    prefix, otherwise the first differing entry decides.
    '''
    for node in (a, b):
        if node not in tree:
            raise TreeError(f'{node} is not a node of the tree')
    for x, y in zip(a, b):
        if x != y:
            return Ordering.of(x, y)
    return Ordering.of(len(b), len(a))


def kb_sort(tree: FiniteTree) -> List[Node]:
    '''All nodes in ascending Kleene–Brouwer order; the root comes last.'''
    return sorted(tree.nodes, key=cmp_to_key(lambda a, b: kb_compare(tree, a, b)))
