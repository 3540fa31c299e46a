'''
Cantor normal forms over ε-number atoms, and the ε_X functor built on
them.

`CnfNotation` holds the part shared by every system whose terms are
ω-power sums over atoms that are ε-numbers (ε_X here, the Bachmann
systems and the Ω_ω systems later): an atom A is identified with ω^A, a
sum is compared by its exponent list, and an atom is compared with a sum
through the sum's leading exponent. Subclasses only describe their atoms.
'''
import logging

from dataclasses import dataclass
from functools import cmp_to_key
from typing import Any
from typing import Callable
from typing import Dict
from typing import Iterable
from typing import Iterator
from typing import List
from typing import Sequence
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

logger = logging.getLogger('ordforge.epsilon')


@dataclass(frozen=True)
class Eps:
    label: Label


@dataclass(frozen=True)
class OmegaPower:
    exponent: Any


@dataclass(frozen=True)
class Sum:
    exponents: Tuple[Any, ...]


class CnfNotation(Notation):
    '''Cantor normal forms over the atoms a subclass describes.'''

    def __init__(self, base=None):
        super().__init__(base)
        self._cache: Dict[Tuple[Any, Any], Ordering] = {}

    # atoms

    def is_atom(self, t: Any) -> bool:
        raise NotImplementedError

    def compare_atoms(self, a: Any, b: Any) -> Ordering:
        raise NotImplementedError

    def validate_atom(self, a: Any) -> None:
        raise NotImplementedError

    def atom_size(self, a: Any) -> int:
        return 1

    def show_atom(self, a: Any) -> str:
        raise NotImplementedError

    def atom_from_raw(self, raw: RawTerm) -> Any:
        raise self.unsupported(raw)

    def atoms(self, size: int, by_size: Dict[int, List[Any]]) -> Iterable[Any]:
        '''Atoms of exactly `size`, given all terms of smaller size.'''
        return ()

    def atom_reducts(self, a: Any) -> Iterator[Any]:
        return iter(())

    def normalize_atom(self, a: Any) -> Any:
        return a

    def map_atom(self, f: OrderMorphism, a: Any) -> Any:
        return a

    def atom_support(self, a: Any) -> frozenset:
        return frozenset()

    # the CNF layer

    def exponents(self, t: Any) -> Tuple[Any, ...]:
        if t == ZERO:
            return ()
        if isinstance(t, OmegaPower):
            return (t.exponent,)
        if isinstance(t, Sum):
            return t.exponents
        return (t,)

    def from_exponents(self, exponents: Sequence[Any]) -> Any:
        if not exponents:
            return ZERO
        if len(exponents) == 1:
            e = exponents[0]
            return e if self.is_atom(e) else OmegaPower(e)
        return Sum(tuple(exponents))

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
        if self.is_atom(s) and self.is_atom(t):
            return self.compare_atoms(s, t)
        # an atom A is ω^A, so it takes part as the one-exponent list (A)
        return lexicographic(self.compare, self.exponents(s), self.exponents(t))

    def validate(self, t: Any) -> None:
        if t == ZERO:
            return
        if self.is_atom(t):
            self.validate_atom(t)
        elif isinstance(t, OmegaPower):
            if self.is_atom(t.exponent):
                raise FormationError(f'w^{self.show(t.exponent)} is the atom itself',
                                     'ω-exponent is not an ε-number atom')
            self.validate(t.exponent)
        elif isinstance(t, Sum):
            if len(t.exponents) < 2:
                raise FormationError('a sum needs at least two summands', 'sum length > 1')
            for e in t.exponents:
                self.validate(e)
            for a, b in zip(t.exponents, t.exponents[1:]):
                if self.compare(a, b) == Ordering.LT:
                    raise FormationError(f'summands of {self.show(t)} are not non-increasing',
                                         'non-increasing exponents')
        else:
            raise FormationError(f'{t!r} is not a term of {self.name}', f'{self.name} term formation')

    def size(self, t: Any) -> int:
        if t == ZERO:
            return 0
        if self.is_atom(t):
            return self.atom_size(t)
        return sum(self.summand_size(e) for e in self.exponents(t))

    def summand_size(self, exponent: Any) -> int:
        if self.is_atom(exponent):
            return self.atom_size(exponent)
        return 1 + self.size(exponent)

    def normalize(self, t: Any) -> Any:
        if t == ZERO:
            return ZERO
        if self.is_atom(t):
            return self.normalize_atom(t)
        return self.normalize_sum([t])

    def normalize_sum(self, pieces: Iterable[Any]) -> Any:
        '''
        Collect the exponents of all pieces, drop zeros, sort them
        non-increasing and rebuild the term; ω^A collapses to the atom A.
        '''
        exponents: List[Any] = []
        for piece in pieces:
            if piece == ZERO:
                continue
            if isinstance(piece, OmegaPower):
                exponents.append(self.normalize(piece.exponent))
            elif isinstance(piece, Sum):
                exponents.extend(self.normalize(e) for e in piece.exponents)
            else:
                exponents.append(self.normalize_atom(piece))
        exponents.sort(key=cmp_to_key(self.compare), reverse=True)
        return self.from_exponents(exponents)

    def show(self, t: Any) -> str:
        if t == ZERO:
            return '0'
        if self.is_atom(t):
            return self.show_atom(t)
        return ' + '.join(self.show_summand(e) for e in self.exponents(t))

    def show_summand(self, exponent: Any) -> str:
        if self.is_atom(exponent):
            return self.show_atom(exponent)
        if isinstance(exponent, Sum):
            return f'w^({self.show(exponent)})'
        return f'w^{self.show(exponent)}'

    def from_raw(self, raw: RawTerm) -> Any:
        if raw.kind == 'zero':
            return ZERO
        if raw.kind == 'omega_power':
            return OmegaPower(self.from_raw(raw.children[0]))
        if raw.kind == 'sum':
            return self.normalize_sum(self.from_raw(child) for child in raw.children)
        return self.atom_from_raw(raw)

    def principals(self, size: int, by_size: Dict[int, List[Any]]) -> List[Any]:
        result = list(self.atoms(size, by_size))
        result.extend(OmegaPower(e) for e in by_size[size - 1] if not self.is_atom(e))
        return result

    def admits(self, t: Any) -> bool:
        '''Whether a generated normal form belongs to the system's universe.'''
        return True

    def extra_terms(self, size: int, by_size: Dict[int, List[Any]]) -> Iterable[Any]:
        '''Terms of exactly `size` outside the Cantor normal form layer.'''
        return ()

    def terms(self, bound: int) -> List[Any]:
        by_size: Dict[int, List[Any]] = {0: [ZERO]}
        pool: List[Any] = []
        for size in range(1, bound + 1):
            pool.sort(key=cmp_to_key(self.compare))
            sums = [Sum(tuple(self.exponents(p)[0] for p in combo))
                    for combo in descending_combinations(pool, self.size, size)]
            new_principals = [p for p in self.principals(size, by_size) if self.admits(p)]
            by_size[size] = (new_principals
                             + [s for s in sums if self.admits(s)]
                             + list(self.extra_terms(size, by_size)))
            pool.extend(new_principals)
        return [t for size in sorted(by_size) for t in by_size[size]]

    def reducts(self, t: Any) -> Iterator[Any]:
        if t == ZERO:
            return
        if self.is_atom(t):
            yield ZERO
            yield OmegaPower(ZERO)
            yield from self.atom_reducts(t)
            return
        exponents = self.exponents(t)
        for i, e in enumerate(exponents):
            rest = exponents[:i] + exponents[i + 1:]
            yield self.from_exponents(rest)
            yield e
            for r in self.reducts(e):
                yield self.normalize_sum([self.from_exponents(rest), OmegaPower(r)])

    def fmap(self, f: OrderMorphism, t: Any) -> Any:
        if t == ZERO:
            return ZERO
        if self.is_atom(t):
            return self.map_atom(f, t)
        if isinstance(t, OmegaPower):
            return OmegaPower(self.fmap(f, t.exponent))
        return Sum(tuple(self.fmap(f, e) for e in t.exponents))

    def support(self, t: Any) -> frozenset:
        if t == ZERO:
            return frozenset()
        if self.is_atom(t):
            return self.atom_support(t)
        return frozenset().union(*(self.support(e) for e in self.exponents(t)))


class EpsilonNotation(CnfNotation):
    '''ε_X: Cantor normal forms whose atoms are formal ε-numbers ε_u, u ∈ X.'''

    name = 'eps'
    relativized = True

    def is_atom(self, t: Any) -> bool:
        return isinstance(t, Eps)

    def compare_atoms(self, a: Eps, b: Eps) -> Ordering:
        return self.base.compare(a.label, b.label)  # type: ignore

    def validate_atom(self, a: Eps) -> None:
        self.check_label(a.label)

    def show_atom(self, a: Eps) -> str:
        return f'e[{self.show_label(a.label)}]'

    def atom_from_raw(self, raw: RawTerm) -> Any:
        if raw.kind == 'eps':
            return Eps(self.label(raw.token))  # type: ignore
        raise self.unsupported(raw)

    def atoms(self, size: int, by_size: Dict[int, List[Any]]) -> Iterable[Any]:
        if size == 1:
            return [Eps(u) for u in self.base.elements()]  # type: ignore
        return ()

    def atom_reducts(self, a: Eps) -> Iterator[Any]:
        for v in self.base.elements(self.base.position(a.label)):  # type: ignore
            if self.base.compare(v, a.label) == Ordering.LT:  # type: ignore
                yield Eps(v)

    def map_atom(self, f: OrderMorphism, a: Eps) -> Eps:
        return Eps(f(a.label))

    def atom_support(self, a: Eps) -> frozenset:
        return frozenset([a.label])


def compare_eps(X: BaseOrder, s: Any, t: Any) -> Ordering:
    '''
    Compare two valid ε_X terms.

    >>> from ordforge.orders import finite
    >>> from ordforge.notation import ZERO
    >>> compare_eps(finite(0), OmegaPower(OmegaPower(ZERO)), Sum((ZERO, ZERO))).name
    'GT'
    '''
    notation = EpsilonNotation(X)
    notation.validate(s)
    notation.validate(t)
    return notation.compare(s, t)


def eps_map(f: OrderMorphism) -> Callable[[Any], Any]:
    '''The action of ε on a morphism: ε_u becomes ε_{f(u)} everywhere.'''
    notation = EpsilonNotation(f.target)
    return lambda t: notation.fmap(f, t)


def normalize_eps(X: BaseOrder, pieces: Iterable[Any]) -> Any:
    return EpsilonNotation(X).normalize_sum(pieces)


def enumerate_eps(X: BaseOrder, max_size: int) -> Fragment:
    return EpsilonNotation(X).fragment(max_size)


def cnf_key(t: Any) -> Tuple:
    '''
    Ordinal below ε₀ as nested tuples of exponents; python's tuple order is
    then the ordinal order. Only defined for terms without ε atoms.
    '''
    if t == ZERO:
        return ()
    if isinstance(t, OmegaPower):
        return (cnf_key(t.exponent),)
    if isinstance(t, Sum):
        return tuple(cnf_key(e) for e in t.exponents)
    raise ValueError(f'{t!r} is not below ε₀')
