'''
Deduction chains in ω-logic.

A chain Γ_0; Γ_1; ... is grown by reducing the leftmost non-literal
formula of the last sequent and appending the negated axiom instance
¬C(U_i) at step i. All chains up to a depth bound form a finite tree;
an open path of that tree yields the sets (M)_i = {t | t ∉ U_i occurs on
the path}, and the Kleene–Brouwer order linearizes a finished tree.
'''
import json
import logging
import re

from dataclasses import dataclass
from dataclasses import field
from typing import Any
from typing import Dict
from typing import FrozenSet
from typing import Iterable
from typing import List
from typing import Optional
from typing import Sequence
from typing import Set
from typing import Tuple
from typing import Union

from lark import Transformer

from ordforge.orders import FiniteTree
from ordforge.orders import Node
from ordforge.orders import kb_sort
from ordforge.syntax import parse_tree

logger = logging.getLogger('ordforge.searchtree')

ALL_AXIOMATIC = 'all-axiomatic'
OPEN_PATH = 'open-path'
DEPTH_EXHAUSTED = 'depth-exhausted'

_FREE_SET = re.compile(r'^U(\d+)$')


class OpenFormulaError(Exception):
    '''Error for a sequent formula with free number variables'''
    pass


class AxiomaticSequentError(Exception):
    '''Error for expanding or extracting a model from an axiomatic sequent'''
    pass


# numeric terms

@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Succ:
    arg: Any


@dataclass(frozen=True)
class Add:
    left: Any
    right: Any


@dataclass(frozen=True)
class Mul:
    left: Any
    right: Any


NumTerm = Union[Num, Var, Succ, Add, Mul]


def value(t: NumTerm) -> int:
    if isinstance(t, Num):
        return t.value
    if isinstance(t, Succ):
        return value(t.arg) + 1
    if isinstance(t, Add):
        return value(t.left) + value(t.right)
    if isinstance(t, Mul):
        return value(t.left) * value(t.right)
    raise OpenFormulaError(f'{show_term(t)} is not closed')


def show_term(t: NumTerm) -> str:
    if isinstance(t, Num):
        return str(t.value)
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Succ):
        return f'S({show_term(t.arg)})'
    name = 'add' if isinstance(t, Add) else 'mul'
    return f'{name}({show_term(t.left)}, {show_term(t.right)})'


def _term_vars(t: NumTerm) -> Set[str]:
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, Succ):
        return _term_vars(t.arg)
    if isinstance(t, (Add, Mul)):
        return _term_vars(t.left) | _term_vars(t.right)
    return set()


def _replace(t: NumTerm, var: str, by: NumTerm) -> NumTerm:
    if isinstance(t, Var):
        return by if t.name == var else t
    if isinstance(t, Succ):
        return Succ(_replace(t.arg, var, by))
    if isinstance(t, Add):
        return Add(_replace(t.left, var, by), _replace(t.right, var, by))
    if isinstance(t, Mul):
        return Mul(_replace(t.left, var, by), _replace(t.right, var, by))
    return t


# formulas, always in negation normal form

_NEGATED_RELATION = {'eq': 'neq', 'neq': 'eq', 'lt': 'nlt', 'nlt': 'lt'}


@dataclass(frozen=True)
class Literal:
    '''A primitive recursive relation or its negation on two terms.'''

    relation: str
    left: Any
    right: Any


@dataclass(frozen=True)
class Member:
    term: Any
    setvar: str
    positive: bool = True


@dataclass(frozen=True)
class And:
    parts: Tuple[Any, ...]


@dataclass(frozen=True)
class Or:
    parts: Tuple[Any, ...]


@dataclass(frozen=True)
class NumQuant:
    kind: str  # 'ex' or 'all'
    var: str
    body: Any


@dataclass(frozen=True)
class SetQuant:
    kind: str  # 'exS' or 'allS'
    var: str
    body: Any


Sequent = Tuple[Any, ...]


def is_literal(f: Any) -> bool:
    return isinstance(f, (Literal, Member))


def literal_true(f: Literal) -> bool:
    left, right = value(f.left), value(f.right)
    return {
        'eq': left == right,
        'neq': left != right,
        'lt': left < right,
        'nlt': not left < right,
    }[f.relation]


def negate(f: Any) -> Any:
    '''Negation pushed down to the literals.'''
    if isinstance(f, Literal):
        return Literal(_NEGATED_RELATION[f.relation], f.left, f.right)
    if isinstance(f, Member):
        return Member(f.term, f.setvar, not f.positive)
    if isinstance(f, And):
        return Or(tuple(negate(p) for p in f.parts))
    if isinstance(f, Or):
        return And(tuple(negate(p) for p in f.parts))
    if isinstance(f, NumQuant):
        return NumQuant('all' if f.kind == 'ex' else 'ex', f.var, negate(f.body))
    if isinstance(f, SetQuant):
        return SetQuant('allS' if f.kind == 'exS' else 'exS', f.var, negate(f.body))
    raise TypeError(f'{f!r} is not a formula')


def substitute(f: Any, var: str, by: NumTerm) -> Any:
    '''Replace the free number variable `var`.'''
    if isinstance(f, Literal):
        return Literal(f.relation, _replace(f.left, var, by), _replace(f.right, var, by))
    if isinstance(f, Member):
        return Member(_replace(f.term, var, by), f.setvar, f.positive)
    if isinstance(f, (And, Or)):
        return type(f)(tuple(substitute(p, var, by) for p in f.parts))
    if isinstance(f, NumQuant):
        return f if f.var == var else NumQuant(f.kind, f.var, substitute(f.body, var, by))
    if isinstance(f, SetQuant):
        return SetQuant(f.kind, f.var, substitute(f.body, var, by))
    raise TypeError(f'{f!r} is not a formula')


def substitute_set(f: Any, var: str, by: str) -> Any:
    '''Replace the free set variable `var` with the set variable `by`.'''
    if isinstance(f, Literal):
        return f
    if isinstance(f, Member):
        return Member(f.term, by if f.setvar == var else f.setvar, f.positive)
    if isinstance(f, (And, Or)):
        return type(f)(tuple(substitute_set(p, var, by) for p in f.parts))
    if isinstance(f, NumQuant):
        return NumQuant(f.kind, f.var, substitute_set(f.body, var, by))
    if isinstance(f, SetQuant):
        return f if f.var == var else SetQuant(f.kind, f.var, substitute_set(f.body, var, by))
    raise TypeError(f'{f!r} is not a formula')


def free_vars(f: Any) -> Set[str]:
    if isinstance(f, Literal):
        return _term_vars(f.left) | _term_vars(f.right)
    if isinstance(f, Member):
        return _term_vars(f.term)
    if isinstance(f, (And, Or)):
        return set().union(*(free_vars(p) for p in f.parts))
    if isinstance(f, NumQuant):
        return free_vars(f.body) - {f.var}
    return free_vars(f.body)


def free_set_vars(f: Any) -> Set[str]:
    if isinstance(f, Literal):
        return set()
    if isinstance(f, Member):
        return {f.setvar}
    if isinstance(f, (And, Or)):
        return set().union(*(free_set_vars(p) for p in f.parts))
    if isinstance(f, SetQuant):
        return free_set_vars(f.body) - {f.var}
    return free_set_vars(f.body)


def set_var(i: int) -> str:
    return f'U{i}'


def set_index(name: str) -> Optional[int]:
    '''i for the free set variable U<i>, None for any other name.'''
    match = _FREE_SET.match(name)
    return int(match.group(1)) if match else None


def show(f: Any) -> str:
    if isinstance(f, Literal):
        return f'{f.relation}({show_term(f.left)}, {show_term(f.right)})'
    if isinstance(f, Member):
        return f'{"in" if f.positive else "nin"}({show_term(f.term)}, {f.setvar})'
    if isinstance(f, And):
        return f'and({", ".join(show(p) for p in f.parts)})'
    if isinstance(f, Or):
        return f'or({", ".join(show(p) for p in f.parts)})'
    return f'{f.kind} {f.var}.{show(f.body)}'


def show_sequent(sequent: Sequent) -> str:
    return '[' + ', '.join(show(f) for f in sequent) + ']'


class _FormulaBuilder(Transformer):
    def start(self, items):
        return items[0]

    def conj(self, items):
        return And(tuple(items))

    def disj(self, items):
        return Or(tuple(items))

    def num_exists(self, items):
        return NumQuant('ex', str(items[0]), items[1])

    def num_forall(self, items):
        return NumQuant('all', str(items[0]), items[1])

    def set_exists(self, items):
        return SetQuant('exS', str(items[0]), items[1])

    def set_forall(self, items):
        return SetQuant('allS', str(items[0]), items[1])

    def eq(self, items):
        return Literal('eq', *items)

    def neq(self, items):
        return Literal('neq', *items)

    def lt(self, items):
        return Literal('lt', *items)

    def nlt(self, items):
        return Literal('nlt', *items)

    def member(self, items):
        return Member(items[0], str(items[1]), True)

    def non_member(self, items):
        return Member(items[0], str(items[1]), False)

    def numeral(self, items):
        return Num(int(items[0]))

    def succ(self, items):
        return Succ(items[0])

    def add(self, items):
        return Add(*items)

    def mul(self, items):
        return Mul(*items)

    def var(self, items):
        return Var(str(items[0]))


def parse_formula(text: str) -> Any:
    '''
    >>> show(parse_formula('or(eq(0, S 0), nin(2, U1))'))
    'or(eq(0, S(0)), nin(2, U1))'
    '''
    return _FormulaBuilder().transform(parse_tree(text, 'formulas.lark'))


@dataclass(frozen=True)
class AxiomTemplate:
    '''
    The formula C(X) whose negated instances ¬C(U_i) are interleaved into
    every chain. `variable` is None for a template without a set variable.
    '''

    variable: Optional[str]
    body: Any

    @classmethod
    def from_text(cls, text: str) -> 'AxiomTemplate':
        body = parse_formula(text)
        if free_vars(body):
            raise OpenFormulaError(f'template {text} has free number variables')
        candidates = sorted(v for v in free_set_vars(body) if set_index(v) is None)
        if len(candidates) > 1:
            raise OpenFormulaError(f'template {text} has more than one free set variable')
        return cls(candidates[0] if candidates else None, body)

    def instance(self, i: int) -> Any:
        '''¬C(U_i).'''
        body = self.body if self.variable is None else substitute_set(self.body, self.variable, set_var(i))
        return negate(body)

    def show(self) -> str:
        return show(self.body)


def _check_closed(sequent: Sequent) -> None:
    for f in sequent:
        if free_vars(f):
            raise OpenFormulaError(f'{show(f)} has free number variables {sorted(free_vars(f))}')


def is_axiomatic(sequent: Sequent) -> bool:
    '''
    A true literal, or s ∈ U and t ∉ U with equal values.

    >>> is_axiomatic((parse_formula('in(S 0, U3)'), parse_formula('nin(1, U3)')))
    True
    '''
    _check_closed(sequent)
    members: Set[Tuple[int, str]] = set()
    non_members: Set[Tuple[int, str]] = set()
    for f in sequent:
        if isinstance(f, Literal) and literal_true(f):
            return True
        if isinstance(f, Member):
            (members if f.positive else non_members).add((value(f.term), f.setvar))
    return bool(members & non_members)


def redex_position(sequent: Sequent) -> Optional[int]:
    '''Index of the leftmost formula which is not a literal.'''
    for position, f in enumerate(sequent):
        if not is_literal(f):
            return position
    return None


def _occurs(f: Any, history: Iterable[Sequent]) -> bool:
    return any(f in sequent for sequent in history)


def _mentions(sequent: Sequent, name: str) -> bool:
    return any(name in free_set_vars(f) for f in sequent)


def expand(sequent: Sequent,
           i: int,
           template: AxiomTemplate,
           history: Sequence[Sequent] = (),
           witness_bound: int = 3) -> List[Sequent]:
    '''
    Successors of Γ_i in a deduction chain. `history` is Γ_0; ...; Γ_i and
    defaults to Γ_i alone; ∀x yields one child for each m < witness_bound.
    '''
    if is_axiomatic(sequent):
        raise AxiomaticSequentError(f'{show_sequent(sequent)} is axiomatic')
    history = history or (sequent,)
    axiom = template.instance(i)
    position = redex_position(sequent)
    if position is None:
        return [sequent + (axiom,)]

    before, redex, after = sequent[:position], sequent[position], sequent[position + 1:]

    def successor(*middle: Any, retain: bool = False) -> Sequent:
        return before + middle + after + (axiom,) + ((redex,) if retain else ())

    if isinstance(redex, Or):
        return [successor(*redex.parts)]
    if isinstance(redex, And):
        return [successor(part) for part in redex.parts]
    if isinstance(redex, NumQuant) and redex.kind == 'ex':
        m = 0
        while _occurs(substitute(redex.body, redex.var, Num(m)), history):
            m += 1
        return [successor(substitute(redex.body, redex.var, Num(m)), retain=True)]
    if isinstance(redex, NumQuant):
        return [successor(substitute(redex.body, redex.var, Num(m))) for m in range(witness_bound)]
    if redex.kind == 'exS':
        m = 0
        while _occurs(substitute_set(redex.body, redex.var, set_var(m)), history):
            m += 1
        return [successor(substitute_set(redex.body, redex.var, set_var(m)), retain=True)]
    m = 0
    while m == i + 1 or _mentions(sequent, set_var(m)):
        m += 1
    return [successor(substitute_set(redex.body, redex.var, set_var(m)))]


@dataclass
class ChainTree:
    '''The tree of deduction chains; `sequents[node]` is the last sequent of the node's chain.'''

    tree: FiniteTree
    sequents: Dict[Node, Sequent]
    template: AxiomTemplate
    depth: int
    witness_bound: int
    truncated: bool = False
    status: str = DEPTH_EXHAUSTED
    axiomatic: Dict[Node, bool] = field(default_factory=dict)

    def chain(self, node: Node) -> List[Sequent]:
        return [self.sequents[node[:k]] for k in range(len(node) + 1)]

    def to_json(self) -> str:
        nodes = [{'node': list(node),
                  'axiomatic': self.axiomatic[node],
                  'chain': [[show(f) for f in sequent] for sequent in self.chain(node)]}
                 for node in self.tree]
        return json.dumps({
            'status': self.status,
            'template': self.template.show(),
            'depth': self.depth,
            'witness_bound': self.witness_bound,
            'truncated': self.truncated,
            'nodes': nodes,
        }, ensure_ascii=False, indent=2)


def build_tree(root: Sequence[Any] = (),
               template: Optional[AxiomTemplate] = None,
               depth: int = 8,
               witness_bound: int = 3) -> ChainTree:
    '''
    All deduction chains from `root` with at most `depth` steps. The
    status is all-axiomatic when every leaf is axiomatic, open-path when
    some leaf at the bound has nothing left to reduce, otherwise
    depth-exhausted.
    '''
    if depth < 1 or witness_bound < 1:
        raise ValueError('depth and witness bound must be at least 1')
    template = template or AxiomTemplate.from_text('eq(0, 0)')
    sequents: Dict[Node, Sequent] = {(): tuple(root)}
    axiomatic: Dict[Node, bool] = {}
    truncated = False
    stack: List[Node] = [()]
    while stack:
        node = stack.pop()
        sequent = sequents[node]
        axiomatic[node] = is_axiomatic(sequent)
        if axiomatic[node] or len(node) == depth:
            continue
        position = redex_position(sequent)
        if position is not None and isinstance(sequent[position], NumQuant) \
                and sequent[position].kind == 'all':
            truncated = True
        history = [sequents[node[:k]] for k in range(len(node) + 1)]
        for j, child in enumerate(expand(sequent, len(node), template, history, witness_bound)):
            sequents[node + (j,)] = child
            stack.append(node + (j,))

    tree = FiniteTree(frozenset(sequents))
    leaves = tree.leaves()
    if all(axiomatic[leaf] for leaf in leaves):
        status = ALL_AXIOMATIC
    elif any(not axiomatic[leaf] and len(leaf) == depth and redex_position(sequents[leaf]) is None
             for leaf in leaves):
        status = OPEN_PATH
    else:
        status = DEPTH_EXHAUSTED
    logger.debug(f'Search tree: {len(tree)} nodes, status {status}')
    return ChainTree(tree, sequents, template, depth, witness_bound, truncated, status, axiomatic)


def open_paths(chains: ChainTree) -> List[List[Sequent]]:
    '''Chains ending in a non-axiomatic leaf.'''
    return [chains.chain(leaf) for leaf in chains.tree.leaves() if not chains.axiomatic[leaf]]


def _set_names(f: Any) -> Set[str]:
    if isinstance(f, Literal):
        return set()
    if isinstance(f, Member):
        return {f.setvar}
    if isinstance(f, (And, Or)):
        return set().union(*(_set_names(p) for p in f.parts))
    return _set_names(f.body)


def extract_path_model(path: Sequence[Sequent]) -> Dict[int, FrozenSet[int]]:
    '''(M)_i = {value(t) | t ∉ U_i occurs on the path}, for every U_i on it.'''
    collected: Dict[int, Set[int]] = {}
    for sequent in path:
        if is_axiomatic(sequent):
            raise AxiomaticSequentError(f'{show_sequent(sequent)} is axiomatic')
        for f in sequent:
            for name in _set_names(f):
                index = set_index(name)
                if index is not None:
                    collected.setdefault(index, set())
            if isinstance(f, Member) and not f.positive:
                index = set_index(f.setvar)
                if index is not None:
                    collected[index].add(value(f.term))
    return {i: frozenset(values) for i, values in sorted(collected.items())}


def check_model_on_literals(path: Sequence[Sequent], model: Dict[int, FrozenSet[int]]) -> List[Any]:
    '''Literals on the path whose negation fails under U_i ↦ (M)_i.'''
    failures = []
    for sequent in path:
        for f in sequent:
            if isinstance(f, Literal) and literal_true(f):
                failures.append(f)
            elif isinstance(f, Member):
                index = set_index(f.setvar)
                if index is None:
                    continue
                inside = value(f.term) in model.get(index, frozenset())
                if inside == f.positive:
                    failures.append(f)
    return failures


def kb_order(chains: ChainTree) -> List[Node]:
    '''Nodes of the tree in Kleene–Brouwer order, root last.'''
    return kb_sort(chains.tree)
