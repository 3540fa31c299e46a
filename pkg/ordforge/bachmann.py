'''
Bachmann collapsing: OT(ϑ), OT_X(ϑ) and OT_D(ϑ).

All three share one term language: Cantor normal forms over the atoms
ϑ(α), Ω, and the ε-numbers above Ω. OT_X(ϑ) adds an atom E_x for every
element x of a base order, OT_D(ϑ) adds E^σ_{α_0,...,α_{n-1}} for every
denotation shape σ of a denotation system D and coefficients below Ω.
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
from ordforge.orders import explicit
from ordforge.syntax import RawTerm

logger = logging.getLogger('ordforge.bachmann')

PLAIN = 'plain'
OVER_X = 'x'
OVER_D = 'd'


@dataclass(frozen=True)
class Theta:
    arg: Any


@dataclass(frozen=True)
class BigOmega:
    def __repr__(self) -> str:
        return 'OMEGA'


OMEGA = BigOmega()


@dataclass(frozen=True)
class EpsX:
    label: Label


@dataclass(frozen=True)
class EpsD:
    index: str
    coefficients: Tuple[Any, ...]


def supp(t: Any) -> FrozenSet[Any]:
    '''
    The ε-numbers below Ω a term is built from: ∅ for 0, Ω and E_x, the
    term itself for ϑ-terms, the coefficient set for E^σ-terms and the
    union over the exponents of a Cantor normal form.
    '''
    if t == ZERO or t == OMEGA or isinstance(t, EpsX):
        return frozenset()
    if isinstance(t, Theta):
        return frozenset([t])
    if isinstance(t, EpsD):
        return frozenset(t.coefficients)
    if isinstance(t, OmegaPower):
        return supp(t.exponent)
    if isinstance(t, Sum):
        return frozenset().union(*(supp(e) for e in t.exponents))
    raise NotationError(f'{t!r} is not a Bachmann term')


class ThetaNotation(CnfNotation):
    '''One of OT(ϑ), OT_X(ϑ) or OT_D(ϑ), chosen by `mode`.'''

    def __init__(self,
                 mode: str = PLAIN,
                 base: Optional[BaseOrder] = None,
                 denotations: Optional[DenotationSystem] = None):
        super().__init__(base)
        if mode == OVER_X and base is None:
            raise NotationError('OT_X(ϑ) needs a base order')
        if mode == OVER_D and denotations is None:
            raise NotationError('OT_D(ϑ) needs a denotation system')
        self.mode = mode
        self.denotations = denotations
        self.relativized = mode == OVER_X
        self.name = {PLAIN: 'theta', OVER_X: 'theta-x', OVER_D: 'theta-d'}[mode]

    @classmethod
    def plain(cls) -> 'ThetaNotation':
        return cls(PLAIN)

    @classmethod
    def over_x(cls, base: BaseOrder) -> 'ThetaNotation':
        return cls(OVER_X, base=base)

    @classmethod
    def over_d(cls, denotations: DenotationSystem) -> 'ThetaNotation':
        return cls(OVER_D, denotations=denotations)

    def describe_base(self) -> str:
        if self.mode == OVER_D:
            return f'D={self.denotations.name}'  # type: ignore
        return super().describe_base()

    def is_atom(self, t: Any) -> bool:
        return isinstance(t, (Theta, BigOmega, EpsX, EpsD))

    @staticmethod
    def layer(a: Any) -> int:
        if isinstance(a, Theta):
            return 1
        if isinstance(a, BigOmega):
            return 2
        return 3

    def compare_atoms(self, a: Any, b: Any) -> Ordering:
        if self.layer(a) != self.layer(b):
            return Ordering.of(self.layer(a), self.layer(b))
        if isinstance(a, Theta):
            return Ordering.LT if self.theta_less(a, b) else Ordering.GT
        if isinstance(a, EpsX) and isinstance(b, EpsX):
            return self.base.compare(a.label, b.label)  # type: ignore
        if isinstance(a, EpsD) and isinstance(b, EpsD):
            return self.compare_denotations(a, b)
        if isinstance(a, BigOmega):
            return Ordering.EQ
        raise SystemMismatchError(f'{a!r} and {b!r} belong to different systems')

    def theta_less(self, a: Theta, b: Theta) -> bool:
        '''
        ϑ(α) < ϑ(β) iff α < β with supp(α) < ϑ(β), or ϑ(α) <= γ for some
        γ in supp(β).
        '''
        alpha, beta = a.arg, b.arg
        if self.compare(alpha, beta) == Ordering.LT and all(
                self.compare(gamma, b) == Ordering.LT for gamma in supp(alpha)):
            return True
        return any(self.compare(a, gamma) != Ordering.GT for gamma in supp(beta))

    def compare_denotations(self, a: EpsD, b: EpsD) -> Ordering:
        '''E^σ vs E^τ: collapse both coefficient tuples into fin:k and ask D.'''
        xs, ys, k = collapse(a.coefficients, b.coefficients, self.compare)
        return self.denotations.compare(Denotation(a.index, xs, k),  # type: ignore
                                        Denotation(b.index, ys, k))

    def validate_atom(self, a: Any) -> None:
        if isinstance(a, Theta):
            self.validate(a.arg)
        elif isinstance(a, BigOmega):
            return
        elif isinstance(a, EpsX):
            if self.mode != OVER_X:
                raise SystemMismatchError(f'E[{self.show_label(a.label)}] belongs to OT_X(ϑ), not {self.name}')
            self.check_label(a.label)
        elif isinstance(a, EpsD):
            if self.mode != OVER_D:
                raise SystemMismatchError(f'E{{{a.index}}} belongs to OT_D(ϑ), not {self.name}')
            shape = self.denotations.shape(a.index)  # type: ignore
            if shape.arity != len(a.coefficients):
                raise FormationError(f'E{{{a.index}}} takes {shape.arity} coefficients, '
                                     f'got {len(a.coefficients)}', 'denotation arity')
            for c in a.coefficients:
                self.validate(c)
                if self.compare(c, OMEGA) != Ordering.LT:
                    raise FormationError(f'coefficient {self.show(c)} is not below Om',
                                         'E-term coefficients below Ω')
            for c, d in zip(a.coefficients, a.coefficients[1:]):
                if self.compare(c, d) != Ordering.LT:
                    raise FormationError(f'coefficients of {self.show(a)} are not strictly increasing',
                                         'α_0 < ... < α_{n-1}')
        else:
            raise FormationError(f'{a!r} is not a term of {self.name}', f'{self.name} term formation')

    def atom_size(self, a: Any) -> int:
        if isinstance(a, Theta):
            return 1 + self.size(a.arg)
        if isinstance(a, EpsD):
            return 1 + sum(self.size(c) for c in a.coefficients)
        return 1

    def show_atom(self, a: Any) -> str:
        if isinstance(a, Theta):
            return f'th({self.show(a.arg)})'
        if isinstance(a, BigOmega):
            return 'Om'
        if isinstance(a, EpsX):
            return f'E[{self.show_label(a.label)}]'
        return f'E{{{a.index}}}({", ".join(self.show(c) for c in a.coefficients)})'

    def atom_from_raw(self, raw: RawTerm) -> Any:
        if raw.kind == 'theta':
            return Theta(self.from_raw(raw.children[0]))
        if raw.kind == 'big_omega':
            return OMEGA
        if raw.kind == 'eps_x' and self.mode == OVER_X:
            return EpsX(self.label(raw.token))  # type: ignore
        if raw.kind == 'eps_d' and self.mode == OVER_D:
            return EpsD(raw.token, tuple(self.from_raw(c) for c in raw.children))  # type: ignore
        raise self.unsupported(raw)

    def normalize_atom(self, a: Any) -> Any:
        if isinstance(a, Theta):
            return Theta(self.normalize(a.arg))
        if isinstance(a, EpsD):
            return EpsD(a.index, tuple(self.normalize(c) for c in a.coefficients))
        return a

    def atoms(self, size: int, by_size: Dict[int, List[Any]]) -> Iterable[Any]:
        result: List[Any] = [Theta(alpha) for alpha in by_size[size - 1]]
        if size == 1:
            result.append(OMEGA)
            if self.mode == OVER_X:
                result.extend(EpsX(x) for x in self.base.elements())  # type: ignore
        if self.mode == OVER_D:
            lower = [t for s in range(size) for t in by_size[s]
                     if self.compare(t, OMEGA) == Ordering.LT]
            lower.sort(key=cmp_to_key(self.compare))
            for shape in self.denotations.shapes():  # type: ignore
                for coefficients in increasing_combinations(lower, self.size, size - 1, shape.arity):
                    result.append(EpsD(shape.index, coefficients))
        return result

    def atom_reducts(self, a: Any) -> Iterator[Any]:
        if isinstance(a, Theta):
            yield from supp(a.arg)
            for r in self.reducts(a.arg):
                yield Theta(r)
        elif isinstance(a, BigOmega):
            yield Theta(ZERO)
            yield Theta(OMEGA)
        elif isinstance(a, EpsX):
            yield OMEGA
            for v in self.base.elements(self.base.position(a.label)):  # type: ignore
                if self.base.compare(v, a.label) == Ordering.LT:  # type: ignore
                    yield EpsX(v)
        elif isinstance(a, EpsD):
            yield OMEGA
            yield from a.coefficients
            for i, c in enumerate(a.coefficients):
                for r in self.reducts(c):
                    yield EpsD(a.index, a.coefficients[:i] + (r,) + a.coefficients[i + 1:])

    def map_atom(self, f: OrderMorphism, a: Any) -> Any:
        if isinstance(a, Theta):
            return Theta(self.fmap(f, a.arg))
        if isinstance(a, EpsX):
            return EpsX(f(a.label))
        return a

    def atom_support(self, a: Any) -> frozenset:
        if isinstance(a, Theta):
            return self.support(a.arg)
        if isinstance(a, EpsX):
            return frozenset([a.label])
        if isinstance(a, EpsD):
            return frozenset().union(*(self.support(c) for c in a.coefficients))
        return frozenset()


def compare_theta(system: ThetaNotation, s: Any, t: Any) -> Ordering:
    '''
    Compare two terms of the same Bachmann system; terms using another
    system's atoms raise SystemMismatchError.

    >>> plain = ThetaNotation.plain()
    >>> compare_theta(plain, Theta(OMEGA), Theta(Theta(OMEGA))).name
    'LT'
    '''
    system.validate(s)
    system.validate(t)
    return system.compare(s, t)


def validate_term(system: ThetaNotation, t: Any) -> bool:
    return system.is_valid(t)


def theta_map(f: OrderMorphism) -> Callable[[Any], Any]:
    '''OT_X(ϑ) on morphisms: every E_x becomes E_{f(x)}.'''
    notation = ThetaNotation.over_x(f.target)
    return lambda t: notation.fmap(f, t)


def enumerate_theta(system: ThetaNotation, max_size: int) -> Fragment:
    return system.fragment(max_size)


def theta_monotone(system: ThetaNotation, alpha: Any, beta: Any) -> bool:
    '''α < β and supp(α) < ϑ(β) imply ϑ(α) < ϑ(β).'''
    b = Theta(beta)
    premise = system.compare(alpha, beta) == Ordering.LT and all(
        system.compare(gamma, b) == Ordering.LT for gamma in supp(alpha))
    return not premise or system.compare(Theta(alpha), b) == Ordering.LT


def has_free_theta(t: Any) -> bool:
    '''True if a ϑ-term occurs outside every E-term coefficient.'''
    if isinstance(t, Theta):
        return True
    if isinstance(t, OmegaPower):
        return has_free_theta(t.exponent)
    if isinstance(t, Sum):
        return any(has_free_theta(e) for e in t.exponents)
    return False


def coefficient_base(system: ThetaNotation, terms: Iterable[Any]) -> Tuple[BaseOrder, Dict[Any, str]]:
    '''
    The explicit order of all one-coefficient E-term coefficients in
    `terms`, labelled x0 < x1 < ..., with the coefficient → label map.
    '''
    found = set()

    def collect(t: Any) -> None:
        if isinstance(t, EpsD):
            found.update(t.coefficients)
        elif isinstance(t, OmegaPower):
            collect(t.exponent)
        elif isinstance(t, Sum):
            for e in t.exponents:
                collect(e)

    for t in terms:
        collect(t)
    ordered = sorted(found, key=cmp_to_key(system.compare))
    labels = [f'x{i}' for i in range(len(ordered))]
    return explicit(labels), dict(zip(ordered, labels))


def collapse_to_base(t: Any, labels: Dict[Any, str]) -> Any:
    '''
    Send an OT_D(ϑ) term over the identity denotation system to OT_X(ϑ),
    E^•_α becoming E_x for the label x of α. Terms with a ϑ outside the
    E-coefficients have no counterpart.
    '''
    if t == ZERO or t == OMEGA:
        return t
    if isinstance(t, EpsD):
        if len(t.coefficients) != 1:
            raise FormationError(f'{t!r} does not have exactly one coefficient', 'identity denotation')
        return EpsX(labels[t.coefficients[0]])
    if isinstance(t, OmegaPower):
        return OmegaPower(collapse_to_base(t.exponent, labels))
    if isinstance(t, Sum):
        return Sum(tuple(collapse_to_base(e, labels) for e in t.exponents))
    raise FormationError(f'{t!r} has a ϑ-term outside the E-coefficients', 'collapse to base')
