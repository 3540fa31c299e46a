'''
Built-in functors on linear orders, as handles for the dilator checks.
'''
from dataclasses import dataclass
from typing import Any
from typing import Callable
from typing import Dict
from typing import Iterator
from typing import List

from ordforge.bachmann import ThetaNotation
from ordforge.dilator import FunctorHandle
from ordforge.epsilon import EpsilonNotation
from ordforge.exp2 import Exp2Notation
from ordforge.notation import FormationError
from ordforge.notation import Notation
from ordforge.omega_omega import OmegaOmegaNotation
from ordforge.orders import BaseOrder
from ordforge.orders import OrderMorphism
from ordforge.orders import Ordering
from ordforge.syntax import RawTerm
from ordforge.veblen import GammaNotation
from ordforge.veblen import PhiNotation


class IdentityNotation(Notation):
    '''X ↦ X: the terms are the labels themselves.'''

    name = 'identity'
    relativized = True

    def compare(self, s: Any, t: Any) -> Ordering:
        return self.base.compare(s, t)  # type: ignore

    def validate(self, t: Any) -> None:
        self.check_label(t)

    def size(self, t: Any) -> int:
        return 1

    def from_raw(self, raw: RawTerm) -> Any:
        if raw.kind == 'label':
            return self.label(raw.token)  # type: ignore
        raise self.unsupported(raw)

    def show(self, t: Any) -> str:
        return self.show_label(t)

    def terms(self, bound: int) -> List[Any]:
        return list(self.base.elements()) if bound >= 1 else []  # type: ignore

    def fmap(self, f: OrderMorphism, t: Any) -> Any:
        return f(t)

    def support(self, t: Any) -> frozenset:
        return frozenset([t])


@dataclass(frozen=True)
class Constant:
    value: int


class ConstantNotation(Notation):
    '''X ↦ fin:k, every morphism acting as the identity.'''

    def __init__(self, k: int, base: BaseOrder):
        super().__init__(base)
        self.k = k
        self.name = f'const:{k}'

    def compare(self, s: Constant, t: Constant) -> Ordering:
        return Ordering.of(s.value, t.value)

    def validate(self, t: Any) -> None:
        if not isinstance(t, Constant) or not 0 <= t.value < self.k:
            raise FormationError(f'{t!r} is not an element of fin:{self.k}', 'constant functor')

    def size(self, t: Constant) -> int:
        return 0

    def from_raw(self, raw: RawTerm) -> Any:
        raise self.unsupported(raw)

    def show(self, t: Constant) -> str:
        return f'#{t.value}'

    def terms(self, bound: int) -> List[Constant]:
        return [Constant(i) for i in range(self.k)]

    def reducts(self, t: Constant) -> Iterator[Constant]:
        return (Constant(i) for i in range(t.value))

    def fmap(self, f: OrderMorphism, t: Constant) -> Constant:
        return t


def constant_functor(k: int, bound: int = 4) -> FunctorHandle:
    return FunctorHandle(f'const:{k}', lambda X: ConstantNotation(k, X), bound)


def _theta_x(X: BaseOrder) -> Notation:
    return ThetaNotation.over_x(X)


def _om_x(X: BaseOrder) -> Notation:
    return OmegaOmegaNotation.over_x(X)


FACTORIES: Dict[str, Callable[[BaseOrder], Notation]] = {
    'identity': IdentityNotation,
    'exp2': Exp2Notation,
    'eps': EpsilonNotation,
    'phi': PhiNotation,
    'gamma': GammaNotation,
    'theta-x': _theta_x,
    'om-x': _om_x,
}


def functor_names() -> List[str]:
    return list(FACTORIES) + ['const:K']


def get_functor(name: str, bound: int = 4) -> FunctorHandle:
    '''
    Look up a built-in functor by name; `const:K` gives the constant
    functor with value fin:K.

    >>> get_functor('exp2').name
    'exp2'
    '''
    if name.startswith('const:'):
        count = name[len('const:'):]
        if not count.isdigit():
            raise KeyError(f'Bad constant functor {name}')
        return constant_functor(int(count), bound)
    if name not in FACTORIES:
        raise KeyError(f'Unknown functor {name}; use one of: {", ".join(functor_names())}')
    return FunctorHandle(name, FACTORIES[name], bound)
