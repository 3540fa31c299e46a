'''
Collapsing below a tower of regular cardinals: OT(Ω_ω·X) and OT_D(Ω_ω).

Both systems have the cardinals Ω_1 < Ω_2 < ... < Ω_ω and collapsing
functions ϑ_n with values in (Ω_{n-1}, Ω_n). ϑ_n(α) is only formed when
every element of supp_{Ω_n}(α) is below α.

OT(Ω_ω·X) adds, above Ω_ω, the terms Ω_ω + α and Ω_ω·u + α for u in a
base order and α < Ω_ω. OT_D(Ω_ω) instead closes under Cantor normal
forms and E-terms of a denotation system, which act as ε-numbers above
Ω_ω.
'''
import logging

from dataclasses import dataclass
from functools import cmp_to_key
from typing import Any
from typing import Callable
from typing import Dict
from typing import FrozenSet
from typing import Iterable
from typing import Iterator
from typing import List
from typing import Optional
from typing import Tuple

from ordforge.bachmann import EpsD
from ordforge.dilator import Denotation
from ordforge.dilator import DenotationSystem
from ordforge.dilator import collapse
from ordforge.epsilon import CnfNotation
from ordforge.epsilon import OmegaPower
from ordforge.epsilon import Sum
from ordforge.notation import Fragment
from ordforge.notation import FormationError
from ordforge.notation import NotationError
from ordforge.notation import SystemMismatchError
from ordforge.notation import ZERO
from ordforge.notation import increasing_combinations
from ordforge.orders import BaseOrder
from ordforge.orders import Label
from ordforge.orders import OrderMorphism
from ordforge.orders import Ordering
from ordforge.syntax import RawTerm

logger = logging.getLogger('ordforge.omega_omega')

OVER_X = 'x'
OVER_D = 'd'
DEFAULT_LEVELS = 3


@dataclass(frozen=True)
class OmegaN:
    n: int


@dataclass(frozen=True)
class OmegaOmega:
    def __repr__(self) -> str:
        return 'OMEGA_OMEGA'


OMEGA_OMEGA = OmegaOmega()


@dataclass(frozen=True)
class ThetaN:
    level: int
    arg: Any


@dataclass(frozen=True)
class OmegaTimes:
    '''Ω_ω·u + offset, offset below Ω_ω.'''

    label: Label
    offset: Any = ZERO


def supp_n(n: int, t: Any) -> FrozenSet[Any]:
    '''
    supp_{Ω_n}: ∅ for 0 and the cardinals, the union over exponents and
    E-coefficients, the offset's support for Ω_ω·u + α, and for ϑ_m(γ)
    the set {γ} ∪ supp_{Ω_n}(γ) when m >= n, else ∅.
    '''
    if t == ZERO or isinstance(t, (OmegaN, OmegaOmega)):
        return frozenset()
    if isinstance(t, OmegaPower):
        return supp_n(n, t.exponent)
    if isinstance(t, Sum):
        return frozenset().union(*(supp_n(n, e) for e in t.exponents))
    if isinstance(t, OmegaTimes):
        return supp_n(n, t.offset)
    if isinstance(t, ThetaN):
        if t.level < n:
            return frozenset()
        return frozenset([t.arg]) | supp_n(n, t.arg)
    if isinstance(t, EpsD):
        return frozenset().union(*(supp_n(n, c) for c in t.coefficients))
    raise NotationError(f'{t!r} is not a term of the Ω_ω systems')


class OmegaOmegaNotation(CnfNotation):

    def __init__(self,
                 mode: str = OVER_X,
                 base: Optional[BaseOrder] = None,
                 denotations: Optional[DenotationSystem] = None,
                 levels: int = DEFAULT_LEVELS):
        super().__init__(base)
        if mode == OVER_X and base is None:
            raise NotationError('OT(Ω_ω·X) needs a base order')
        if mode == OVER_D and denotations is None:
            raise NotationError('OT_D(Ω_ω) needs a denotation system')
        if levels < 1:
            raise NotationError('at least one level is needed')
        self.mode = mode
        self.denotations = denotations
        self.levels = levels
        self.relativized = mode == OVER_X
        self.name = 'om-x' if mode == OVER_X else 'om-d'

    @classmethod
    def over_x(cls, base: BaseOrder, levels: int = DEFAULT_LEVELS) -> 'OmegaOmegaNotation':
        return cls(OVER_X, base=base, levels=levels)

    @classmethod
    def over_d(cls, denotations: DenotationSystem, levels: int = DEFAULT_LEVELS) -> 'OmegaOmegaNotation':
        return cls(OVER_D, denotations=denotations, levels=levels)

    def describe_base(self) -> str:
        if self.mode == OVER_D:
            return f'D={self.denotations.name}'  # type: ignore
        return super().describe_base()

    def is_atom(self, t: Any) -> bool:
        return isinstance(t, (OmegaN, OmegaOmega, ThetaN, EpsD))

    @staticmethod
    def rank(a: Any) -> Tuple[int, int]:
        '''ϑ_n sits between Ω_{n-1} and Ω_n, Ω_ω above every finite level, E-terms above Ω_ω.'''
        if isinstance(a, ThetaN):
            return 0, 2 * a.level - 1
        if isinstance(a, OmegaN):
            return 0, 2 * a.n
        if isinstance(a, OmegaOmega):
            return 1, 0
        return 2, 0

    def compare_atoms(self, a: Any, b: Any) -> Ordering:
        ra, rb = self.rank(a), self.rank(b)
        if ra != rb:
            return Ordering.of(ra, rb)
        if isinstance(a, ThetaN):
            return self.compare(a.arg, b.arg)
        if isinstance(a, EpsD):
            xs, ys, k = collapse(a.coefficients, b.coefficients, self.compare)
            return self.denotations.compare(Denotation(a.index, xs, k),  # type: ignore
                                            Denotation(b.index, ys, k))
        return Ordering.EQ

    def _compare(self, s: Any, t: Any) -> Ordering:
        if isinstance(s, OmegaTimes) and isinstance(t, OmegaTimes):
            relation = self.base.compare(s.label, t.label)  # type: ignore
            return relation if relation != Ordering.EQ else self.compare(s.offset, t.offset)
        if isinstance(s, OmegaTimes):
            return Ordering.GT
        if isinstance(t, OmegaTimes):
            return Ordering.LT
        return super()._compare(s, t)

    def is_lower(self, t: Any) -> bool:
        return self.compare(t, OMEGA_OMEGA) == Ordering.LT

    def admits(self, t: Any) -> bool:
        if self.mode != OVER_X or t == ZERO or self.is_atom(t):
            return True
        for i, e in enumerate(self.exponents(t)):
            if i == 0 and e == OMEGA_OMEGA and isinstance(t, Sum):
                continue
            if not self.is_lower(e):
                return False
        return True

    def validate(self, t: Any) -> None:
        if isinstance(t, OmegaTimes):
            if self.mode != OVER_X:
                raise SystemMismatchError(f'Ω_ω·u terms belong to OT(Ω_ω·X), not {self.name}')
            self.check_label(t.label)
            self.validate(t.offset)
            if not self.is_lower(t.offset):
                raise FormationError(f'offset {self.show(t.offset)} is not below OmW',
                                     'Ω_ω·u + α with α < Ω_ω')
            return
        super().validate(t)
        if not self.admits(t):
            raise FormationError(f'{self.show(t)} is not of the form Ω_ω + α or below Ω_ω',
                                 'terms above Ω_ω are Ω_ω·u + α')

    def validate_atom(self, a: Any) -> None:
        if isinstance(a, OmegaN):
            if a.n < 1:
                raise FormationError(f'Om_{a.n} does not exist', 'Ω_n with n >= 1')
        elif isinstance(a, OmegaOmega):
            return
        elif isinstance(a, ThetaN):
            if a.level < 1:
                raise FormationError(f'th_{a.level} does not exist', 'ϑ_n with n >= 1')
            self.validate(a.arg)
            for gamma in supp_n(a.level, a.arg):
                if self.compare(gamma, a.arg) != Ordering.LT:
                    raise FormationError(
                        f'{self.show(gamma)} in supp_Om_{a.level}({self.show(a.arg)}) is not below the argument',
                        f'supp_Ω{a.level}(α) < α at level {a.level}')
        elif isinstance(a, EpsD):
            if self.mode != OVER_D:
                raise SystemMismatchError(f'E{{{a.index}}} belongs to OT_D(Ω_ω), not {self.name}')
            shape = self.denotations.shape(a.index)  # type: ignore
            if shape.arity != len(a.coefficients):
                raise FormationError(f'E{{{a.index}}} takes {shape.arity} coefficients', 'denotation arity')
            for c in a.coefficients:
                self.validate(c)
                if not self.is_lower(c):
                    raise FormationError(f'coefficient {self.show(c)} is not below OmW',
                                         'E-term coefficients below Ω_ω')
            for c, d in zip(a.coefficients, a.coefficients[1:]):
                if self.compare(c, d) != Ordering.LT:
                    raise FormationError('coefficients are not strictly increasing', 'α_0 < ... < α_{n-1}')
        else:
            raise FormationError(f'{a!r} is not a term of {self.name}', f'{self.name} term formation')

    def size(self, t: Any) -> int:
        if isinstance(t, OmegaTimes):
            return 1 + self.size(t.offset)
        return super().size(t)

    def atom_size(self, a: Any) -> int:
        if isinstance(a, ThetaN):
            return 1 + self.size(a.arg)
        if isinstance(a, EpsD):
            return 1 + sum(self.size(c) for c in a.coefficients)
        return 1

    def show(self, t: Any) -> str:
        if isinstance(t, OmegaTimes):
            head = f'OmW*{self.show_label(t.label)}'
            return head if t.offset == ZERO else f'{head} + {self.show(t.offset)}'
        return super().show(t)

    def show_atom(self, a: Any) -> str:
        if isinstance(a, OmegaN):
            return f'Om_{a.n}'
        if isinstance(a, OmegaOmega):
            return 'OmW'
        if isinstance(a, ThetaN):
            return f'th_{a.level}({self.show(a.arg)})'
        return f'E{{{a.index}}}({", ".join(self.show(c) for c in a.coefficients)})'

    def from_raw(self, raw: RawTerm) -> Any:
        if raw.kind == 'omega_times' and self.mode == OVER_X:
            return OmegaTimes(self.label(raw.token))  # type: ignore
        if raw.kind == 'sum':
            heads = [c for c in raw.children if c.kind == 'omega_times']
            if len(heads) == 1 and self.mode == OVER_X:
                rest = [self.from_raw(c) for c in raw.children if c.kind != 'omega_times']
                return OmegaTimes(self.label(heads[0].token), self.normalize_sum(rest))  # type: ignore
        return super().from_raw(raw)

    def atom_from_raw(self, raw: RawTerm) -> Any:
        if raw.kind == 'omega_n':
            return OmegaN(int(raw.token))  # type: ignore
        if raw.kind == 'omega_omega':
            return OMEGA_OMEGA
        if raw.kind == 'theta_n':
            return ThetaN(int(raw.token), self.from_raw(raw.children[0]))  # type: ignore
        if raw.kind == 'eps_d' and self.mode == OVER_D:
            return EpsD(raw.token, tuple(self.from_raw(c) for c in raw.children))  # type: ignore
        raise self.unsupported(raw)

    def normalize(self, t: Any) -> Any:
        if isinstance(t, OmegaTimes):
            return OmegaTimes(t.label, self.normalize(t.offset))
        return super().normalize(t)

    def normalize_atom(self, a: Any) -> Any:
        if isinstance(a, ThetaN):
            return ThetaN(a.level, self.normalize(a.arg))
        if isinstance(a, EpsD):
            return EpsD(a.index, tuple(self.normalize(c) for c in a.coefficients))
        return a

    def atoms(self, size: int, by_size: Dict[int, List[Any]]) -> Iterable[Any]:
        result: List[Any] = []
        if size == 1:
            result.extend(OmegaN(n) for n in range(1, self.levels + 1))
            result.append(OMEGA_OMEGA)
        for n in range(1, self.levels + 1):
            for alpha in by_size[size - 1]:
                candidate = ThetaN(n, alpha)
                if self.is_valid(candidate):
                    result.append(candidate)
        if self.mode == OVER_D:
            lower = [t for s in range(size) for t in by_size[s] if self.is_lower(t)]
            lower.sort(key=cmp_to_key(self.compare))
            for shape in self.denotations.shapes():  # type: ignore
                for coefficients in increasing_combinations(lower, self.size, size - 1, shape.arity):
                    result.append(EpsD(shape.index, coefficients))
        return result

    def extra_terms(self, size: int, by_size: Dict[int, List[Any]]) -> Iterable[Any]:
        if self.mode != OVER_X:
            return []
        return [OmegaTimes(u, alpha)
                for u in self.base.elements()  # type: ignore
                for alpha in by_size[size - 1]
                if self.is_lower(alpha)]

    def reducts(self, t: Any) -> Iterator[Any]:
        if isinstance(t, OmegaTimes):
            yield t.offset
            yield self.normalize_sum([OMEGA_OMEGA, t.offset])
            for v in self.base.elements(self.base.position(t.label)):  # type: ignore
                if self.base.compare(v, t.label) == Ordering.LT:  # type: ignore
                    yield OmegaTimes(v, t.offset)
            for r in self.reducts(t.offset):
                yield OmegaTimes(t.label, r)
            return
        yield from super().reducts(t)

    def atom_reducts(self, a: Any) -> Iterator[Any]:
        if isinstance(a, ThetaN):
            yield from supp_n(a.level, a.arg)
            if a.level > 1:
                yield OmegaN(a.level - 1)
                yield ThetaN(a.level - 1, a.arg)
            for r in self.reducts(a.arg):
                yield ThetaN(a.level, r)
        elif isinstance(a, OmegaN):
            yield ThetaN(a.n, ZERO)
            if a.n > 1:
                yield OmegaN(a.n - 1)
        elif isinstance(a, OmegaOmega):
            yield OmegaN(self.levels)
            yield ThetaN(self.levels, ZERO)
        elif isinstance(a, EpsD):
            yield OMEGA_OMEGA
            yield from a.coefficients
            for i, c in enumerate(a.coefficients):
                for r in self.reducts(c):
                    yield EpsD(a.index, a.coefficients[:i] + (r,) + a.coefficients[i + 1:])

    def fmap(self, f: OrderMorphism, t: Any) -> Any:
        if isinstance(t, OmegaTimes):
            return OmegaTimes(f(t.label), self.fmap(f, t.offset))
        return super().fmap(f, t)

    def map_atom(self, f: OrderMorphism, a: Any) -> Any:
        if isinstance(a, ThetaN):
            return ThetaN(a.level, self.fmap(f, a.arg))
        return a

    def support(self, t: Any) -> frozenset:
        if isinstance(t, OmegaTimes):
            return frozenset([t.label]) | self.support(t.offset)
        return super().support(t)

    def atom_support(self, a: Any) -> frozenset:
        if isinstance(a, ThetaN):
            return self.support(a.arg)
        if isinstance(a, EpsD):
            return frozenset().union(*(self.support(c) for c in a.coefficients))
        return frozenset()

    def level_of(self, t: Any) -> Optional[int]:
        '''The n with Ω_{n-1} <= t < Ω_n, or None when t >= Ω_ω.'''
        if not self.is_lower(t):
            return None
        n = 1
        while self.compare(t, OmegaN(n)) != Ordering.LT:
            n += 1
        return n


def compare_om(system: OmegaOmegaNotation, s: Any, t: Any) -> Ordering:
    '''
    >>> from ordforge.orders import finite
    >>> system = OmegaOmegaNotation.over_x(finite(1))
    >>> compare_om(system, ThetaN(1, OmegaN(2)), ThetaN(1, OmegaN(1))).name
    'GT'
    '''
    system.validate(s)
    system.validate(t)
    return system.compare(s, t)


def validate_om(system: OmegaOmegaNotation, t: Any) -> bool:
    return system.is_valid(t)


def om_map(f: OrderMorphism, levels: int = DEFAULT_LEVELS) -> Callable[[Any], Any]:
    notation = OmegaOmegaNotation.over_x(f.target, levels)
    return lambda t: notation.fmap(f, t)


def enumerate_om(system: OmegaOmegaNotation, max_size: int) -> Fragment:
    return system.fragment(max_size)
