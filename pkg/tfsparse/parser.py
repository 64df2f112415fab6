"""Bottom-up chart parsing as a least fixpoint.

The chart starts empty and is repeatedly extended with everything the
parsing step derives from it, until nothing new appears:

1. dot movement: an active prefix of some rule takes one more complete
   constituent to its right;
2. completion: an active item covering a rule's whole body yields the
   rule's head as a complete constituent;
3. prediction: an empty active item at every position;
4. ε-rules: their head, complete, at every position;
5. scanning: every category of every word.

A computation succeeds when a complete item spans the whole input and
unifies with the start symbol.
"""

import asyncio
import logging

from dataclasses import dataclass, field
from .afs import afs_unify
from .errors import UnificationFailure
from .mrs import AMRS, LAMBDA, amrs_order, substructure, unify_in_context
from .termination import guard_acyclic, divergence_sentinel
from .utils import _sentence

__all__ = ['ACT', 'COMP', 'ACCEPTED', 'REJECTED', 'BUDGET_EXHAUSTED', 'Item', 'Chart',
           'ComputationConfig', 'ComputationResult', 't_step', 'run', 'success',
           'filter_subsume', 'parse', 'parse_many']

log = logging.getLogger(__name__)
log.addHandler(logging.NullHandler())

ACT = 'ACT'
COMP = 'COMP'

ACCEPTED = 'accepted'
REJECTED = 'rejected'
BUDGET_EXHAUSTED = 'budget-exhausted'

SCHEDULES = ('naive', 'agenda')


class Item:
    """A chart item ``[i, A, j, status]``.

    Items are equal when ``i``, ``j``, ``status`` and ``A`` are; where an
    item came from (``provenance``), when it first appeared (``iteration``)
    and its chart ``id`` are bookkeeping.
    """

    __slots__ = ('i', 'amrs', 'j', 'status', 'provenance', 'iteration', 'id', 'key')

    def __init__(self, i, amrs, j, status, provenance=None, iteration=None):
        self.i = i
        self.amrs = amrs
        self.j = j
        self.status = status
        self.provenance = provenance or {}
        self.iteration = iteration
        self.id = None
        self.key = (i, j, status, amrs)

    def __eq__(self, other):
        if not isinstance(other, Item):
            return NotImplemented
        return self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f'[{self.i}, {self.amrs.avm()}, {self.j}, {self.status}]'

    @property
    def cell(self):
        return self.i, self.j, self.status

    @property
    def order_key(self):
        return self.i, self.j, self.status != ACT, len(self.amrs), self.amrs.sort_key

    def subsumes(self, other):
        """Item order: same cell and ``self.amrs ⪯ other.amrs``."""

        return self.cell == other.cell and amrs_order(self.amrs, other.amrs)

    def to_json(self):
        return {
            'id': self.id,
            'i': self.i,
            'j': self.j,
            'status': self.status,
            'iteration': self.iteration,
            'avm': self.amrs.to_json(),
            'provenance': self.provenance,
        }


class Chart:
    """A set of items, kept in the order they were first added."""

    def __init__(self, items=()):
        self._items = {}
        for x in items:
            self._items.setdefault(x.key, x)

    def __len__(self):
        return len(self._items)

    def __iter__(self):
        return iter(self._items.values())

    def __contains__(self, item):
        return item.key in self._items

    def keys(self):
        return set(self._items)

    def get(self, item):
        return self._items.get(item.key)

    def cell(self, i, j, status):
        return [x for x in self if x.i == i and x.j == j and x.status == status]

    def active(self):
        return [x for x in self if x.status == ACT]

    def complete(self):
        return [x for x in self if x.status == COMP]

    def to_json(self):
        return [x.to_json() for x in self]


def _provenance(case, rule=None, parents=(), word=None):
    found = {'case': case}
    if rule is not None:
        found['rule'] = rule
    if parents:
        found['parents'] = list(parents)
    if word is not None:
        found['word'] = word
    return found


def t_step(chart, grammar, words, fresh=None):
    """One application of the parsing step to ``chart``.

    Args:
        chart (Chart): The current items.
        grammar (Grammar): The grammar.
        words (list): The sentence.
        fresh (set, optional): Keys of the items added last time. When given,
            dot movement and completion only consider pairings that involve
            at least one of them.

    Returns:
        dict: Item key -> new :class:`Item` for every derived item, in
        derivation order. Failed unifications contribute nothing.
    """

    n = len(words)
    produced = {}

    def emit(item):
        produced.setdefault(item.key, item)

    def is_fresh(x):
        return fresh is None or x.key in fresh

    active = chart.active()
    by_start = {}
    for beta in chart.complete():
        by_start.setdefault(beta.i, []).append(beta)

    for rule in grammar.rules:
        m = len(rule)
        if m < 2:
            continue
        for alpha in active:
            k = len(alpha.amrs)
            if k > m - 1:
                continue
            try:
                b = unify_in_context(rule.amrs, range(1, k + 1), alpha.amrs)
            except UnificationFailure:
                continue

            if k == m - 1:
                if is_fresh(alpha):
                    emit(Item(alpha.i, substructure(b, m, m), alpha.j, COMP,
                              _provenance('completion', rule.name, [alpha.id])))
                continue

            for beta in by_start.get(alpha.j, ()):
                if not (is_fresh(alpha) or is_fresh(beta)):
                    continue
                try:
                    c = unify_in_context(b, [k + 1], beta.amrs.project(1))
                except UnificationFailure:
                    continue
                emit(Item(alpha.i, substructure(c, 1, k + 1), beta.j, ACT,
                          _provenance('dot', rule.name, [alpha.id, beta.id])))

    for i in range(n + 1):
        emit(Item(i, LAMBDA, i, ACT, _provenance('prediction')))
    for rule in grammar.epsilon_rules:
        for i in range(n + 1):
            emit(Item(i, rule.amrs, i, COMP, _provenance('epsilon', rule.name)))
    for i, word in enumerate(words, 1):
        for category in grammar.cat(word):
            emit(Item(i - 1, AMRS.from_afs(category), i, COMP, _provenance('scan', word=word)))
    return produced


def filter_subsume(chart):
    """Keep only the ⪯-minimal items of every ``(i, j, status)`` cell.

    Of several ⪯-equivalent items the one first in canonical order stays.

    Returns:
        Chart: A new chart; item objects are shared with ``chart``.
    """

    cells = {}
    for x in chart:
        cells.setdefault(x.cell, []).append(x)

    dropped = set()
    for members in cells.values():
        if len(members) < 2:
            continue
        for x in members:
            for y in members:
                if y is x or not amrs_order(y.amrs, x.amrs):
                    continue
                if not amrs_order(x.amrs, y.amrs) or y.order_key < x.order_key:
                    dropped.add(x.key)
                    break
    if dropped:
        log.debug(f'subsumption filter dropped {len(dropped)} items')
    return Chart(x for x in chart if x.key not in dropped)


def success(chart, grammar, n):
    """The first complete item over ``0..n`` that unifies with the start symbol.

    Candidates are tried by iteration of first appearance, then in canonical
    item order.

    Returns:
        Item: or ``None``.
    """

    candidates = [x for x in chart
                  if x.i == 0 and x.j == n and x.status == COMP and len(x.amrs) == 1]
    candidates.sort(key=lambda x: (x.iteration or 0, x.order_key))
    for x in candidates:
        try:
            afs_unify(x.amrs.project(1), grammar.start)
        except UnificationFailure:
            continue
        return x
    return None


@dataclass(frozen=True)
class ComputationConfig:
    """How a computation is run.

    Args:
        subsumption_filter (bool): Keep only ⪯-minimal items per cell.
        max_iterations (int): Applications of the parsing step before giving
            up; at least 1.
        acyclicity_guard (bool): Raise :class:`~tfsparse.errors.CyclicItemError`
            on the first cyclic item.
        trace_level (int): 0 keeps nothing extra, 1 logs every iteration at
            INFO, 2 also logs every new item at DEBUG.
        early_exit (bool): Stop as soon as the computation is successful.
        schedule (string): ``'naive'`` recomputes the step on the whole
            chart; ``'agenda'`` only pairs items with something new.
        sentinel_threshold (int, optional): Run the divergence sentinel
            after every iteration with this threshold.
    """

    subsumption_filter: bool = True
    max_iterations: int = 64
    acyclicity_guard: bool = True
    trace_level: int = 0
    early_exit: bool = True
    schedule: str = 'naive'
    sentinel_threshold: int = None

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError('max_iterations must be at least 1')
        if self.schedule not in SCHEDULES:
            raise ValueError(f"schedule must be one of {', '.join(SCHEDULES)}")
        if self.sentinel_threshold is not None and self.sentinel_threshold < 1:
            raise ValueError('sentinel_threshold must be at least 1')


@dataclass
class ComputationResult:
    verdict: str
    iterations: int
    chart: Chart
    words: list
    witness: Item = None
    fixpoint: bool = False
    sentinel: list = field(default_factory=list)

    @property
    def accepted(self):
        return self.verdict == ACCEPTED

    def to_json(self):
        """The chart dump: sentence, verdict and every item."""

        return {
            'sentence': self.words,
            'iterations': self.iterations,
            'verdict': self.verdict,
            'witness': self.witness.id if self.witness is not None else None,
            'items': self.chart.to_json(),
        }

    def golden(self):
        """Numbered item listing, one item per line, in chart order."""

        lines = []
        for x in self.chart:
            origin = x.provenance.get('case', '?')
            detail = x.provenance.get('rule') or x.provenance.get('word')
            if detail:
                origin += f' {detail}'
            parents = x.provenance.get('parents')
            if parents:
                origin += ' of ' + ', '.join(f'({p})' for p in parents)
            lines.append(f'({x.id}) [{x.i}, {x.amrs.avm()}, {x.j}, {x.status}]'
                         f'  % I_{x.iteration}, {origin}')
        lines.append(f'% {self.verdict} after {self.iterations} iterations')
        return '\n'.join(lines)


def _check_invariants(item, grammar):
    if item.status == COMP:
        assert len(item.amrs) == 1, f'complete item of length {len(item.amrs)}: {item!r}'
    elif len(item.amrs):
        k = len(item.amrs)
        assert any(len(r) > k and amrs_order(substructure(r.amrs, 1, k), item.amrs)
                   for r in grammar.rules), f'active item extends no rule prefix: {item!r}'


def run(grammar, words, cfg=None):
    """Compute the chart of ``words`` to a fixpoint, or until the budget runs out.

    Each iteration adds everything :func:`t_step` derives from the current
    chart, then applies the subsumption filter if configured. Without the
    filter every chart contains the previous one.

    Args:
        grammar (Grammar): The grammar.
        words (list or string): The sentence; a string is split on whitespace
            and lower-cased.
        cfg (ComputationConfig, optional): Defaults to ``ComputationConfig()``.

    Returns:
        ComputationResult

    Raises:
        UnknownWord: Some word is not in the lexicon.
        CyclicItemError: The acyclicity guard is on and a cyclic item appeared.
    """

    cfg = cfg or ComputationConfig()
    words = _sentence(words)
    grammar.check_words(words)
    n = len(words)

    chart = Chart()
    fresh = None
    witness = None
    fixpoint = False
    reports = {}
    iteration = 0
    last_id = 0
    for iteration in range(1, cfg.max_iterations + 1):
        produced = t_step(chart, grammar, words, fresh if cfg.schedule == 'agenda' else None)
        new = sorted((x for x in produced.values() if x not in chart),
                     key=lambda x: x.order_key)
        for x in new:
            last_id += 1
            x.iteration = iteration
            x.id = last_id

        extended = Chart(list(chart) + new)
        if cfg.subsumption_filter:
            extended = filter_subsume(extended)
        else:
            assert chart.keys() <= extended.keys(), 'chart shrank without the filter'

        added = extended.keys() - chart.keys()
        for x in extended:
            if x.key in added:
                if cfg.acyclicity_guard:
                    guard_acyclic(x)
                if __debug__:
                    _check_invariants(x, grammar)
                if cfg.trace_level >= 2:
                    log.debug(f'I_{iteration} + ({x.id}) {x!r}')

        if cfg.trace_level >= 1:
            log.info(f'iteration {iteration}: {len(added)} new, {len(extended)} items')
        else:
            log.debug(f'iteration {iteration}: {len(added)} new, {len(extended)} items')

        if extended.keys() == chart.keys():
            fixpoint = True
            break
        chart = extended
        fresh = added

        if cfg.sentinel_threshold is not None:
            for report in divergence_sentinel(chart, cfg.sentinel_threshold):
                reports[report.cell] = report

        if cfg.early_exit:
            witness = success(chart, grammar, n)
            if witness is not None:
                break

    if witness is None:
        witness = success(chart, grammar, n)
    if witness is not None:
        verdict = ACCEPTED
    elif fixpoint:
        verdict = REJECTED
    else:
        verdict = BUDGET_EXHAUSTED
    log.debug(f"{' '.join(words)!r}: {verdict} after {iteration} iterations")
    return ComputationResult(verdict, iteration, chart, words, witness, fixpoint,
                             [reports[c] for c in sorted(reports)])


def parse(grammar, sentence, **kwargs):
    """:func:`run` with a config built from keyword arguments."""

    return run(grammar, sentence, ComputationConfig(**kwargs))


async def parse_many(grammar, sentences, cfg=None, executor=None):
    """Run several independent computations concurrently.

    Args:
        grammar (Grammar): Shared by all computations; never modified.
        sentences (list): Sentences as accepted by :func:`run`.
        cfg (ComputationConfig, optional): Shared configuration.
        executor (concurrent.futures.Executor, optional): Where computations
            run; the event loop's default executor when ``None``.

    Returns:
        list: :class:`ComputationResult` per sentence, in input order.
    """

    loop = asyncio.get_running_loop()
    tasks = [loop.run_in_executor(executor, run, grammar, sentence, cfg)
             for sentence in sentences]
    return await asyncio.gather(*tasks)
