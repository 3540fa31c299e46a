'''
Parsers for the textual term and formula syntax.

Both grammars live next to this module as `.lark` files and are compiled
once with the LALR parser. Term parsing produces `RawTerm` trees which do
not yet belong to any notation system: every system reads the raw tree
and rejects constructs it does not have.
'''
import logging

from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Optional
from typing import Tuple

from lark import Lark
from lark import Transformer
from lark import Tree
from lark.exceptions import UnexpectedEOF
from lark.exceptions import UnexpectedInput

logger = logging.getLogger('ordforge.syntax')

GRAMMAR_DIR = Path(__file__).parent / 'grammars'


class ParseError(Exception):
    '''Error for text which does not match the grammar'''

    def __init__(self, message: str, line: int = 1, column: int = 1):
        self.line = line
        self.column = column
        super().__init__(message)


@dataclass(frozen=True)
class RawTerm:
    '''
    Parsed term before it is interpreted by a notation system.

    `kind` is the grammar alternative (`zero`, `eps`, `theta_n`, `sum`, ...),
    `token` the label, index or level text where the alternative has one.
    '''

    kind: str
    children: Tuple['RawTerm', ...] = ()
    token: Optional[str] = None

    def __str__(self) -> str:
        inner = ', '.join(str(c) for c in self.children)
        token = f'{self.token}' if self.token is not None else ''
        return f'{self.kind}[{token}]({inner})'


def _label(token) -> str:
    return str(token)[1:]


class _RawBuilder(Transformer):
    def start(self, items):
        return items[0]

    def sum(self, items):
        parts = []
        for item in items:
            if item.kind == 'sum':
                parts.extend(item.children)
            else:
                parts.append(item)
        if len(parts) == 1:
            return parts[0]
        return RawTerm('sum', tuple(parts))

    def zero(self, items):
        return RawTerm('zero')

    def omega_power(self, items):
        return RawTerm('omega_power', (items[0],))

    def two_power(self, items):
        return RawTerm('two_power', token=_label(items[0]))

    def eps(self, items):
        return RawTerm('eps', token=_label(items[0]))

    def phi(self, items):
        return RawTerm('phi', (items[1],), _label(items[0]))

    def gamma(self, items):
        return RawTerm('gamma', token=_label(items[0]))

    def theta(self, items):
        return RawTerm('theta', (items[0],))

    def theta_n(self, items):
        return RawTerm('theta_n', (items[1],), str(items[0])[len('th_'):])

    def big_omega(self, items):
        return RawTerm('big_omega')

    def omega_n(self, items):
        return RawTerm('omega_n', token=str(items[0])[len('Om_'):])

    def omega_omega(self, items):
        return RawTerm('omega_omega')

    def omega_times(self, items):
        return RawTerm('omega_times', token=_label(items[0]))

    def eps_x(self, items):
        return RawTerm('eps_x', token=_label(items[0]))

    def eps_d(self, items):
        index = str(items[0])[1:-1].strip()
        args = items[1] if len(items) > 1 and items[1] is not None else ()
        return RawTerm('eps_d', tuple(args), index)

    def label(self, items):
        return RawTerm('label', token=_label(items[0]))

    def args(self, items):
        return tuple(items)


@lru_cache(maxsize=None)
def _parser(grammar: str) -> Lark:
    logger.debug(f'Compiling grammar {grammar}')
    with open(GRAMMAR_DIR / grammar, encoding='utf8') as f:
        return Lark(f.read(), parser='lalr')


def _error_position(text: str, error: UnexpectedInput) -> Tuple[int, int]:
    '''1-based line and column; errors at end of input point past the last character.'''
    token = getattr(error, 'token', None)
    at_end = isinstance(error, UnexpectedEOF) or getattr(token, 'type', None) == '$END'
    lines = text.split('\n')
    if at_end:
        return len(lines), len(lines[-1]) + 1
    line = getattr(error, 'line', -1)
    column = getattr(error, 'column', -1)
    if not isinstance(line, int) or not isinstance(column, int) or line < 1 or column < 1:
        return len(lines), len(lines[-1]) + 1
    return line, column


def parse_tree(text: str, grammar: str) -> Tree:
    '''Parse `text` with one of the bundled grammars, raising ParseError.'''
    try:
        return _parser(grammar).parse(text)
    except UnexpectedInput as e:
        line, column = _error_position(text, e)
        where = f'column {column}' if '\n' not in text else f'line {line}, column {column}'
        raise ParseError(f'syntax error at {where}', line, column) from e


def parse_term(text: str) -> RawTerm:
    '''
    Parse a term of any notation system.

    >>> parse_term('w^0 + w^0').kind
    'sum'
    '''
    return _RawBuilder().transform(parse_tree(text, 'terms.lark'))
