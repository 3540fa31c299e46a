'''
Shared pieces of all notation systems: the error hierarchy, the Fragment
type and the Notation base class the harness, the functors and the CLI
talk to.
'''
import logging

from dataclasses import dataclass
from functools import cmp_to_key
from typing import Any
from typing import Callable
from typing import Iterable
from typing import Iterator
from typing import List
from typing import Optional
from typing import Sequence
from typing import Tuple

from ordforge.orders import BaseOrder
from ordforge.orders import OrderError
from ordforge.orders import OrderMorphism
from ordforge.orders import Ordering
from ordforge.syntax import RawTerm
from ordforge.syntax import parse_term

logger = logging.getLogger('ordforge.notation')

# memoized comparisons kept per system before the memo is dropped
COMPARE_CACHE_LIMIT = 500000


class NotationError(Exception):
    '''Base error for terms which do not belong to a notation system'''
    pass


class FormationError(NotationError):
    '''Error for terms violating a formation clause; `clause` names it'''

    def __init__(self, message: str, clause: str = ''):
        self.clause = clause
        super().__init__(f'{message} (violates: {clause})' if clause else message)


class ForeignLabelError(NotationError):
    '''Error for terms mentioning a label outside the base order'''
    pass


class SystemMismatchError(NotationError):
    '''Error for comparing terms of different systems'''
    pass


@dataclass(frozen=True)
class Zero:
    '''The least term of every system.'''

    def __repr__(self) -> str:
        return 'ZERO'


ZERO = Zero()


def lexicographic(compare: Callable[[Any, Any], Ordering],
                  xs: Sequence[Any],
                  ys: Sequence[Any]) -> Ordering:
    '''First difference decides; a proper prefix is smaller.'''
    for x, y in zip(xs, ys):
        result = compare(x, y)
        if result != Ordering.EQ:
            return result
    return Ordering.of(len(xs), len(ys))


def descending_combinations(pool: Sequence[Any],
                            size_of: Callable[[Any], int],
                            total: int,
                            min_length: int = 2) -> Iterator[Tuple[Any, ...]]:
    '''
    Non-increasing sequences over an ascending `pool` whose sizes add up to
    exactly `total`. Every pool element must have size >= 1.
    '''
    def extend(prefix: List[Any], top: int, remaining: int) -> Iterator[Tuple[Any, ...]]:
        if remaining == 0:
            if len(prefix) >= min_length:
                yield tuple(prefix)
            return
        for i in range(top, -1, -1):
            size = size_of(pool[i])
            if size <= remaining:
                yield from extend(prefix + [pool[i]], i, remaining - size)

    yield from extend([], len(pool) - 1, total)


def increasing_combinations(pool: Sequence[Any],
                            size_of: Callable[[Any], int],
                            total: int,
                            length: int) -> Iterator[Tuple[Any, ...]]:
    '''Strictly increasing `length`-tuples over an ascending `pool` of exact total size.'''
    def extend(prefix: List[Any], start: int, remaining: int) -> Iterator[Tuple[Any, ...]]:
        if len(prefix) == length:
            if remaining == 0:
                yield tuple(prefix)
            return
        for i in range(start, len(pool)):
            size = size_of(pool[i])
            if size <= remaining:
                yield from extend(prefix + [pool[i]], i + 1, remaining - size)

    yield from extend([], 0, total)


@dataclass(frozen=True)
class Fragment:
    '''Sorted, duplicate-free finite slice of a notation system.'''

    system: str
    base: str
    bound: int
    terms: Tuple[Any, ...]

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[Any]:
        return iter(self.terms)

    def __getitem__(self, i: int) -> Any:
        return self.terms[i]

    def index(self, term: Any) -> int:
        return self.terms.index(term)


def sort_terms(terms: Iterable[Any], compare) -> Tuple[Any, ...]:
    '''Deduplicate (by equality) and sort with a three-way comparator.'''
    return tuple(sorted(set(terms), key=cmp_to_key(compare)))


class Notation:
    '''
    One notation system over one base.

    Subclasses implement `compare`, `validate`, `size`, `from_raw`, `show`,
    `terms` and `reducts`; everything else is derived. Terms are immutable
    hashable values, so fragments and caches can share them freely.
    '''

    name = ''
    relativized = False

    def __init__(self, base: Optional[BaseOrder] = None):
        self.base = base

    def describe_base(self) -> str:
        return self.base.describe() if self.base is not None else '-'

    def __repr__(self) -> str:
        return f'<{self.__class__.__name__} {self.name} over {self.describe_base()}>'

    def compare(self, s: Any, t: Any) -> Ordering:
        raise NotImplementedError

    def validate(self, t: Any) -> None:
        raise NotImplementedError

    def is_valid(self, t: Any) -> bool:
        try:
            self.validate(t)
        except NotationError:
            return False
        return True

    def size(self, t: Any) -> int:
        raise NotImplementedError

    def from_raw(self, raw: RawTerm) -> Any:
        raise NotImplementedError

    def show(self, t: Any) -> str:
        raise NotImplementedError

    def normalize(self, t: Any) -> Any:
        return t

    def terms(self, bound: int) -> Iterable[Any]:
        '''All valid terms of size at most `bound`, in no particular order.'''
        raise NotImplementedError

    def reducts(self, t: Any) -> Iterator[Any]:
        '''Candidate terms derived from `t` by one structural mutation.'''
        return iter(())

    def fmap(self, f: OrderMorphism, t: Any) -> Any:
        raise NotImplementedError(f'{self.name} is not a functor on base orders')

    def support(self, t: Any) -> frozenset:
        '''Base labels a term mentions.'''
        return frozenset()

    def label(self, token: str) -> Any:
        if self.base is None:
            raise ForeignLabelError(f'{self.name} has no base order, got @{token}')
        try:
            return self.base.label(token)
        except OrderError as e:
            raise ForeignLabelError(str(e)) from e

    def check_label(self, label: Any) -> None:
        if self.base is None or not self.base.contains(label):
            raise ForeignLabelError(f'{label!r} is not an element of {self.describe_base()}')

    def show_label(self, label: Any) -> str:
        return f'@{label}'

    def parse(self, text: str) -> Any:
        '''Parse, normalize and validate a term of this system.'''
        term = self.normalize(self.from_raw(parse_term(text)))
        self.validate(term)
        return term

    def sort(self, terms: Iterable[Any]) -> Tuple[Any, ...]:
        return sort_terms(terms, self.compare)

    def fragment(self, bound: int) -> Fragment:
        terms = self.sort(self.terms(bound))
        logger.debug(f'{self.name} over {self.describe_base()}, bound {bound}: {len(terms)} terms')
        return Fragment(self.name, self.describe_base(), bound, terms)

    def smaller_reducts(self, t: Any) -> List[Any]:
        '''Valid reducts which are strictly below `t`.'''
        result = []
        for r in self.reducts(t):
            if r != t and self.is_valid(r) and self.compare(r, t) == Ordering.LT:
                result.append(r)
        return result

    def unsupported(self, raw: RawTerm) -> FormationError:
        return FormationError(f'{raw.kind} terms do not exist in {self.name}',
                              f'{self.name} term formation')
