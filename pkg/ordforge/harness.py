'''
Property checks applied uniformly to every notation system.

None of these checks proves well-foundedness. A fragment that sorts
cleanly and descent chains that always stop are finite evidence only,
and every report says so.
'''
import json
import logging
import random

from bisect import insort
from dataclasses import dataclass
from dataclasses import field
from functools import cmp_to_key
from typing import Any
from typing import Callable
from typing import Dict
from typing import Iterable
from typing import List
from typing import Optional
from typing import Sequence
from typing import Tuple

from ordforge.dilator import FunctorHandle
from ordforge.epsilon import cnf_key
from ordforge.exp2 import binary_value
from ordforge.functors import get_functor
from ordforge.notation import Fragment
from ordforge.notation import Notation
from ordforge.notation import ZERO
from ordforge.orders import BaseOrder
from ordforge.orders import Ordering
from ordforge.orders import all_morphisms
from ordforge.orders import compose
from ordforge.orders import finite
from ordforge.orders import identity
from ordforge.runner import CheckRunner
from ordforge.runner import allow_fail
from ordforge.veblen import single_index_key

logger = logging.getLogger('ordforge.harness')

Comparator = Callable[[Any, Any], Ordering]

EXHAUSTIVE_LIMIT = 300
PAIR_LIMIT = 2000
SAMPLED_TRIPLES = 100000
MAX_WITNESSES = 5

DISCLAIMER = 'finite evidence only; well-foundedness is not decided'


@dataclass
class Report:
    check: str
    system: str
    bound: Optional[int]
    passed: bool
    witnesses: List[Dict[str, Any]] = field(default_factory=list)
    details: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'check': self.check,
            'system': self.system,
            'bound': self.bound,
            'pass': self.passed,
            'witnesses': self.witnesses,
            'details': self.details,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, default=str)

    def to_text(self) -> str:
        head = f'{"PASS" if self.passed else "FAIL"} {self.check} {self.system}'
        if self.bound is not None:
            head += f' bound={self.bound}'
        lines = [head]
        lines.extend(f'  {key}: {value}' for key, value in self.details.items())
        lines.extend(f'  witness: {w}' for w in self.witnesses)
        return '\n'.join(lines)


def _witness(witnesses: List[Dict[str, Any]], **entry: Any) -> None:
    if len(witnesses) < MAX_WITNESSES:
        witnesses.append(entry)


def check_order_axioms(frag: Fragment,
                       compare: Comparator,
                       show: Callable[[Any], str] = repr,
                       seed: int = 0,
                       exhaustive_limit: int = EXHAUSTIVE_LIMIT,
                       pair_limit: int = PAIR_LIMIT,
                       samples: int = SAMPLED_TRIPLES) -> Report:
    '''
    Irreflexivity, ascending order of the fragment, trichotomy and
    antisymmetry over all pairs (seeded samples above `pair_limit` terms)
    and transitivity, exhaustive up to `exhaustive_limit` terms and over
    `samples` seeded random triples above.
    '''
    terms = frag.terms
    n = len(terms)
    witnesses: List[Dict[str, Any]] = []
    failures = {'irreflexivity': 0, 'trichotomy': 0, 'sortedness': 0, 'transitivity': 0}

    for t in terms:
        if compare(t, t) != Ordering.EQ:
            failures['irreflexivity'] += 1
            _witness(witnesses, law='irreflexivity', terms=[show(t)])

    # up[i] has bit j set iff terms[i] < terms[j]
    up = [0] * n

    def check_pair(i: int, j: int) -> None:
        forward, backward = compare(terms[i], terms[j]), compare(terms[j], terms[i])
        if forward == Ordering.EQ or backward != forward.flip():
            failures['trichotomy'] += 1
            _witness(witnesses, law='trichotomy', terms=[show(terms[i]), show(terms[j])],
                     relations=[forward.name, backward.name])
        if forward == Ordering.LT:
            up[i] |= 1 << j
        elif forward == Ordering.GT:
            up[j] |= 1 << i

    if n <= pair_limit:
        pairs = 'exhaustive'
        for i in range(n):
            for j in range(i + 1, n):
                check_pair(i, j)
    else:
        pairs = f'{samples} sampled pairs'
        rng = random.Random(seed)
        for _ in range(samples):
            i, j = sorted(rng.sample(range(n), 2))
            check_pair(i, j)
    for i in range(n - 1):
        if compare(terms[i], terms[i + 1]) != Ordering.LT:
            failures['sortedness'] += 1
            _witness(witnesses, law='sortedness', terms=[show(terms[i]), show(terms[i + 1])])

    if n <= exhaustive_limit:
        mode = 'exhaustive'
        for a in range(n):
            rest = up[a]
            while rest:
                b = (rest & -rest).bit_length() - 1
                rest &= rest - 1
                escaped = up[b] & ~up[a] & ~(1 << a)
                if escaped or (up[b] >> a) & 1:
                    c = (escaped & -escaped).bit_length() - 1 if escaped else a
                    failures['transitivity'] += 1
                    _witness(witnesses, law='transitivity',
                             terms=[show(terms[a]), show(terms[b]), show(terms[c])])
    else:
        mode = f'{samples} sampled triples'
        rng = random.Random(seed)
        for _ in range(samples):
            a, b, c = (terms[rng.randrange(n)] for _ in range(3))
            if compare(a, b) == Ordering.LT and compare(b, c) == Ordering.LT \
                    and compare(a, c) != Ordering.LT:
                failures['transitivity'] += 1
                _witness(witnesses, law='transitivity', terms=[show(a), show(b), show(c)])

    passed = not any(failures.values())
    logger.debug(f'Order axioms for {frag.system} over {frag.base}: {n} terms, {failures}')
    return Report('order-axioms', frag.system, frag.bound, passed, witnesses,
                  {'terms': n, 'pairs': pairs, 'transitivity': mode, 'failures': failures, 'note': DISCLAIMER})


def key_oracle(key: Callable[[Any], Any]) -> Comparator:
    '''A comparator from a key whose python order is the intended one.'''
    return lambda s, t: Ordering.of(key(s), key(t))


def binary_oracle(X: BaseOrder) -> Comparator:
    '''2^X read as binary numerals.'''
    return key_oracle(lambda t: binary_value(X, t))


def cnf_oracle() -> Comparator:
    '''Nested exponent tuples below ε₀.'''
    return key_oracle(cnf_key)


def single_index_oracle() -> Comparator:
    '''φ over a one-element base read as ω-powers.'''
    return key_oracle(single_index_key)


def rank_oracle(terms: Sequence[Any], compare: Comparator) -> Comparator:
    '''Ranks from a binary insertion sort of the terms in enumeration order.'''
    ranked: List[Any] = []
    key = cmp_to_key(compare)
    for t in terms:
        insort(ranked, key(t))
    ranks = {k.obj: i for i, k in enumerate(ranked)}  # type: ignore
    return key_oracle(lambda t: ranks[t])


def oracle_agreement(frag: Fragment,
                     compare: Comparator,
                     oracle: Comparator,
                     show: Callable[[Any], str] = repr,
                     name: str = 'oracle',
                     seed: int = 0,
                     pair_limit: int = PAIR_LIMIT,
                     samples: int = SAMPLED_TRIPLES) -> Report:
    '''
    Share of ordered pairs on which the comparator and the oracle agree;
    above `pair_limit` terms over `samples` seeded random pairs.
    '''
    terms = frag.terms
    if len(terms) <= pair_limit:
        pairs: Iterable[Tuple[Any, Any]] = ((s, t) for s in terms for t in terms)
    else:
        rng = random.Random(seed)
        pairs = ((rng.choice(terms), rng.choice(terms)) for _ in range(samples))
    total = agreed = 0
    witnesses: List[Dict[str, Any]] = []
    for s, t in pairs:
        total += 1
        ours, theirs = compare(s, t), oracle(s, t)
        if ours == theirs:
            agreed += 1
        else:
            _witness(witnesses, terms=[show(s), show(t)], system=ours.name, oracle=theirs.name)
    percentage = 100.0 if total == 0 else round(100.0 * agreed / total, 4)
    return Report('oracle-agreement', frag.system, frag.bound, agreed == total, witnesses,
                  {'oracle': name, 'pairs': total, 'agreement': percentage})


def descent_fuzz(notation: Notation,
                 start: Any,
                 trials: int = 100,
                 seed: int = 0,
                 step_budget: int = 10000,
                 mutation_budget: int = 64) -> Report:
    '''
    Random strictly descending chains from `start`: each step tries up to
    `mutation_budget` random reducts and moves to the first valid smaller
    one. A chain still going after `step_budget` steps is a suspect.
    '''
    rng = random.Random(seed)
    longest = 0
    suspects: List[Dict[str, Any]] = []
    for trial in range(trials):
        current = start
        chain = [start]
        while True:
            candidates = list(notation.reducts(current))
            rng.shuffle(candidates)
            following = None
            for candidate in candidates[:mutation_budget]:
                if candidate != current and notation.is_valid(candidate) \
                        and notation.compare(candidate, current) == Ordering.LT:
                    following = candidate
                    break
            if following is None:
                break
            chain.append(following)
            current = following
            if len(chain) > step_budget:
                _witness(suspects, trial=trial, chain=[notation.show(t) for t in chain[-20:]])
                break
        longest = max(longest, len(chain))
    logger.debug(f'Descent fuzz on {notation.name} from {notation.show(start)}: longest chain {longest}')
    return Report('descent-fuzz', notation.name, None, not suspects, suspects,
                  {'start': notation.show(start), 'trials': trials, 'seed': seed,
                   'max_chain': longest, 'note': DISCLAIMER})


def check_functor_laws(F: FunctorHandle, max_order: int, bound: Optional[int] = None) -> Report:
    '''
    F(id) = id, F(g∘f) = F(g)∘F(f) and strict monotonicity of F(f), for all
    morphisms between fin:0, ..., fin:max_order.
    '''
    witnesses: List[Dict[str, Any]] = []
    failures = {'identity': 0, 'composition': 0, 'preservation': 0}
    orders = [finite(n) for n in range(max_order + 1)]
    for X in orders:
        ident = identity(X)
        for t in F.terms(X, bound):
            if F.fmap(ident, t) != t:
                failures['identity'] += 1
                _witness(witnesses, law='identity', order=X.describe(), term=F.show(X, t))
    for A in orders:
        for B in orders[len(A):]:
            for f in all_morphisms(A, B):
                terms = F.terms(A, bound)
                for s, t in zip(terms, terms[1:]):
                    if F.compare(B, F.fmap(f, s), F.fmap(f, t)) != Ordering.LT:
                        failures['preservation'] += 1
                        _witness(witnesses, law='preservation', map=f.as_dict(),
                                 terms=[F.show(A, s), F.show(A, t)])
                for C in orders[len(B):]:
                    for g in all_morphisms(B, C):
                        gf = compose(g, f)
                        for t in terms:
                            if F.fmap(gf, t) != F.fmap(g, F.fmap(f, t)):
                                failures['composition'] += 1
                                _witness(witnesses, law='composition', f=f.as_dict(),
                                         g=g.as_dict(), term=F.show(A, t))
    return Report('functor-laws', F.name, F.bound if bound is None else bound,
                  not any(failures.values()), witnesses,
                  {'max_order': max_order, 'failures': failures})


def oracle_for(notation: Notation) -> Optional[Comparator]:
    '''The independent comparator available for a system, if any.'''
    if notation.name == 'exp2':
        return binary_oracle(notation.base)  # type: ignore
    base = notation.base
    if base is None or not base.is_finite:
        return None
    if notation.name == 'eps' and len(base) == 0:
        return cnf_oracle()
    if notation.name == 'phi' and len(base) == 1:
        return single_index_oracle()
    return None


class SuiteRunner(CheckRunner):
    '''Runs the checks of several systems, turning crashes into failed reports.'''

    def __init__(self,
                 bound: int = 4,
                 seed: int = 0,
                 trials: int = 20,
                 step_budget: int = 10000,
                 mutation_budget: int = 64,
                 **kwargs):
        super().__init__(**kwargs)
        self.bound = bound
        self.seed = seed
        self.trials = trials
        self.step_budget = step_budget
        self.mutation_budget = mutation_budget
        self._fragments: Dict[int, Fragment] = {}

    def fragment(self, notation: Notation) -> Fragment:
        if id(notation) not in self._fragments:
            self._fragments[id(notation)] = notation.fragment(self.bound)
        return self._fragments[id(notation)]

    def failure(self, check: str, *args, error: Exception) -> Report:
        system = args[0].name if args and isinstance(args[0], Notation) else str(args[0] if args else '')
        return Report(check, system, self.bound, False, [], {'error': str(error)})

    @allow_fail('Order axiom check crashed.')
    def order_axioms(self, notation: Notation) -> Report:
        frag = self.fragment(notation)
        return check_order_axioms(frag, notation.compare, notation.show, self.seed)

    @allow_fail('Oracle check crashed.')
    def oracle(self, notation: Notation) -> Report:
        oracle = oracle_for(notation)
        frag = self.fragment(notation)
        if oracle is None:
            return oracle_agreement(frag, notation.compare, rank_oracle(frag.terms[::-1], notation.compare),
                                    notation.show, 'rank')
        return oracle_agreement(frag, notation.compare, oracle, notation.show, 'independent')

    @allow_fail('Descent fuzz crashed.')
    def fuzz(self, notation: Notation) -> Report:
        frag = self.fragment(notation)
        start = frag.terms[-1] if frag.terms else ZERO
        return descent_fuzz(notation, start, self.trials, self.seed,
                            self.step_budget, self.mutation_budget)

    @allow_fail('Functor law check crashed.')
    def functor_laws(self, name: str, max_order: int) -> Report:
        return check_functor_laws(get_functor(name, self.bound), max_order)

    def run(self, systems: Sequence[Notation], functors: Sequence[str] = (), max_order: int = 2) -> List[Report]:
        reports: List[Report] = []
        for notation in systems:
            self.current_check = f'{notation.name} over {notation.describe_base()}'
            self.logger.info(f'Checking {self.current_check}')
            reports.append(self.order_axioms(notation))
            reports.append(self.oracle(notation))
            reports.append(self.fuzz(notation))
        for name in functors:
            self.current_check = f'functor {name}'
            self.logger.info(f'Checking {self.current_check}')
            reports.append(self.functor_laws(name, max_order))
        self.current_check = ''
        return reports


def run_suite(systems: Sequence[Notation],
              functors: Sequence[str] = (),
              bound: int = 4,
              seed: int = 0,
              trials: int = 20,
              max_order: int = 2,
              **kwargs) -> List[Report]:
    '''Every check for every given system and functor; crashes become failed reports.'''
    runner = SuiteRunner(bound=bound, seed=seed, trials=trials, **kwargs)
    return runner.run(systems, functors, max_order)
