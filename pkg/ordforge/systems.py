'''
Name → notation system lookup for the CLI and the check suite.
'''
import logging

from pathlib import Path
from typing import Callable
from typing import Dict
from typing import Optional

from ordforge.bachmann import ThetaNotation
from ordforge.dilator import DenotationSystem
from ordforge.dilator import FunctorDenotations
from ordforge.dilator import IncoherentDenotationsError
from ordforge.dilator import PreconditionError
from ordforge.dilator import denotations_from_json
from ordforge.dilator import functor_from_denotations
from ordforge.epsilon import EpsilonNotation
from ordforge.exp2 import Exp2Notation
from ordforge.functors import get_functor
from ordforge.notation import Notation
from ordforge.omega_omega import DEFAULT_LEVELS
from ordforge.omega_omega import OmegaOmegaNotation
from ordforge.orders import BaseOrder
from ordforge.veblen import GammaNotation
from ordforge.veblen import PhiNotation

logger = logging.getLogger('ordforge.systems')

RELATIVIZED = ('exp2', 'eps', 'phi', 'gamma', 'theta-x', 'om-x', 'denote')
DENOTED = ('theta-d', 'om-d', 'denote')
SYSTEMS = ('exp2', 'eps', 'phi', 'gamma', 'theta', 'theta-x', 'theta-d', 'om-x', 'om-d', 'denote')

DENOTATION_ARITY = 2


class UnknownSystemError(Exception):
    '''Error for a system or denotation selector that does not exist'''
    pass


def load_denotations(selector: str, bound: int = 4) -> DenotationSystem:
    '''
    A denotation system from a selector: a built-in functor name
    (identity, exp2, const:K, ...) or the path of a JSON table file.
    '''
    if selector.endswith('.json') or Path(selector).is_file():
        try:
            with open(selector, encoding='utf8') as f:
                return denotations_from_json(f.read())
        except OSError as e:
            raise UnknownSystemError(f'Cannot read denotation table {selector}: {e.strerror}') from e
        except (ValueError, PreconditionError) as e:
            raise UnknownSystemError(f'Bad denotation table {selector}: {e}') from e
    try:
        F = get_functor(selector, bound)
    except KeyError as e:
        raise UnknownSystemError(str(e)) from e
    return FunctorDenotations(F, DENOTATION_ARITY, bound)


def _denotation_terms(denotations: DenotationSystem, base: BaseOrder) -> Notation:
    try:
        return functor_from_denotations(denotations).at(base)
    except IncoherentDenotationsError as e:
        raise UnknownSystemError(str(e)) from e


def build_system(name: str,
                 base: Optional[BaseOrder] = None,
                 levels: int = DEFAULT_LEVELS,
                 denotations: Optional[DenotationSystem] = None) -> Notation:
    '''
    >>> from ordforge.orders import finite
    >>> build_system('eps', finite(2))
    <EpsilonNotation eps over fin:2>
    '''
    builders: Dict[str, Callable[[], Notation]] = {
        'exp2': lambda: Exp2Notation(base),
        'eps': lambda: EpsilonNotation(base),
        'phi': lambda: PhiNotation(base),
        'gamma': lambda: GammaNotation(base),
        'theta': ThetaNotation.plain,
        'theta-x': lambda: ThetaNotation.over_x(base),  # type: ignore
        'theta-d': lambda: ThetaNotation.over_d(denotations),  # type: ignore
        'om-x': lambda: OmegaOmegaNotation.over_x(base, levels),  # type: ignore
        'om-d': lambda: OmegaOmegaNotation.over_d(denotations, levels),  # type: ignore
        'denote': lambda: _denotation_terms(denotations, base),  # type: ignore
    }
    if name not in builders:
        raise UnknownSystemError(f'Unknown system {name}; use one of: {", ".join(SYSTEMS)}')
    if name in RELATIVIZED and base is None:
        raise UnknownSystemError(f'{name} needs a base order')
    if name in DENOTED and denotations is None:
        raise UnknownSystemError(f'{name} needs a denotation system')
    system = builders[name]()
    logger.debug(f'Built {system!r}')
    return system
