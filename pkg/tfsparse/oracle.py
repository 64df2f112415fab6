"""Derivation-based acceptor.

A deliberately naive second opinion on membership: it searches leftmost
strong derivations from the start symbol instead of building a chart, so
the parser can be checked against it sentence by sentence.
"""

import logging

from .afs import Workspace
from .errors import BudgetExhausted, IndexOutOfRange, UnificationFailure
from .mrs import AMRS, unify_in_context

__all__ = ['DerivationNode', 'Derivation', 'strong_derive_step', 'find_derivation', 'derives',
           'replay', 'DEFAULT_MAX_STEPS']

log = logging.getLogger(__name__)
log.addHandler(logging.NullHandler())

DEFAULT_MAX_STEPS = 12


def strong_derive_step(a, rule, j):
    """Expand element ``j`` of ``a`` with ``rule``.

    Element ``j`` is unified with the rule's head, then replaced by the
    rule's (now instantiated) body. Information flows both ways through
    shared classes, so neighbours of ``j`` and the body may both gain.

    Args:
        a (AMRS): The sentential form.
        rule (Rule): The rule applied.
        j (int): 1-based index into ``a``.

    Returns:
        AMRS: Of length ``len(a) - 1 + len(rule.body)``, or ``None`` if the
        head does not unify with element ``j``.

    Raises:
        IndexOutOfRange: ``j`` is not an index of ``a``.
    """

    if not 1 <= j <= len(a):
        raise IndexOutOfRange(span=(j, j), length=len(a))
    ws = Workspace(a.signature or rule.amrs.signature)
    ma = ws.add(a)
    mr = ws.add(rule.amrs)
    roots = [ma[r] for r in a.roots]
    ws.roots = roots
    try:
        ws.unify(roots[j - 1], mr[rule.amrs.roots[-1]])
    except UnificationFailure:
        return None
    body = [mr[r] for r in rule.amrs.roots[:-1]]
    return AMRS.from_workspace(ws, roots[:j - 1] + body + roots[j:])


class DerivationNode:
    """One step of a derivation.

    Attributes:
        amrs (AMRS): The sentential form after this step.
        rule (string): Name of the rule applied, ``None`` for the first form.
        index (int): The expanded element.
        span (tuple): ``(first, last)`` indices of the inserted body in
            ``amrs``; empty (``last < first``) for an ε-rule.
        parent (DerivationNode): The previous step.
    """

    __slots__ = ('amrs', 'rule', 'index', 'span', 'parent')

    def __init__(self, amrs, rule=None, index=None, body_length=0, parent=None):
        self.amrs = amrs
        self.rule = rule
        self.index = index
        self.span = None if index is None else (index, index + body_length - 1)
        self.parent = parent

    @property
    def is_leaf(self):
        return self.rule is None

    def __repr__(self):
        if self.is_leaf:
            return f'<DerivationNode leaf {self.amrs.avm()}>'
        return f'<DerivationNode {self.rule}@{self.index}>'


class Derivation:
    """A successful leftmost derivation.

    Args:
        steps (list): :class:`DerivationNode` objects, first form first.
        words (list): The sentence derived.
        pre_terminal (AMRS): The pre-terminal of the whole sentence that the last form unifies with.
    """

    def __init__(self, steps, words, pre_terminal):
        self.steps = steps
        self.words = list(words)
        self.pre_terminal = pre_terminal

    @property
    def step_count(self):
        return len(self.steps) - 1

    def __repr__(self):
        return f"<Derivation {' '.join(self.rules) or 'empty'}>"

    @property
    def rules(self):
        return [s.rule for s in self.steps[1:]]

    @property
    def final(self):
        return self.steps[-1].amrs

    def tree(self):
        """Derivation tree as nested dicts.

        Each node has ``rule`` (``None`` for a word), ``span`` (``[i, j]``
        word positions, 0-based and end-exclusive, or ``None`` below an
        ε-rule) and ``children``; word nodes also carry ``word``.
        """

        def node():
            return {'rule': None, 'span': None, 'children': []}

        first = self.steps[0]
        leaves = [node() for _ in range(len(first.amrs))]
        top = list(leaves)
        for step in self.steps[1:]:
            expanded = leaves[step.index - 1]
            expanded['rule'] = step.rule
            first_i, last_i = step.span
            expanded['children'] = [node() for _ in range(last_i - first_i + 1)]
            leaves = leaves[:step.index - 1] + expanded['children'] + leaves[step.index:]
        for position, leaf in enumerate(leaves):
            leaf['word'] = self.words[position]
            leaf['span'] = [position, position + 1]

        def spans(n):
            for child in n['children']:
                spans(child)
            covered = [c['span'] for c in n['children'] if c['span'] is not None]
            if covered and n['span'] is None:
                n['span'] = [covered[0][0], covered[-1][1]]
            return n

        return [spans(n) for n in top]

    def to_json(self):
        return {
            'words': self.words,
            'steps': [{'rule': s.rule, 'index': s.index, 'avm': s.amrs.to_json()}
                      for s in self.steps],
            'tree': self.tree(),
        }

    def render(self, verbose=False):
        """Text form: numbered steps, then the tree indented by depth."""

        lines = []
        for k, step in enumerate(self.steps):
            if step.is_leaf:
                head = f'{k}. start'
            else:
                head = f'{k}. {step.rule} at {step.index}'
            lines.append(f'{head}: {step.amrs.avm()}' if verbose else head)

        def walk(n, depth):
            span = '-' if n['span'] is None else f"{n['span'][0]}..{n['span'][1]}"
            label = n['rule'] if n['rule'] is not None else n.get('word', '(empty)')
            lines.append(f"{'  ' * depth}{label} [{span}]")
            for child in n['children']:
                walk(child, depth + 1)

        for n in self.tree():
            walk(n, 0)
        return '\n'.join(lines)


class _Search:
    def __init__(self, grammar, words, max_steps):
        self.grammar = grammar
        self.words = list(words)
        self.n = len(self.words)
        self.max_steps = max_steps
        self.pre_terminals = grammar.pre_terminals(self.words, 1, self.n)
        self.categories = [grammar.cat(w) for w in self.words]
        self.may_shrink = bool(grammar.epsilon_rules)
        self.exhausted = False

    def success(self, a):
        if len(a) != self.n:
            return None
        everything = range(1, self.n + 1)
        for p in self.pre_terminals:
            try:
                unify_in_context(a, everything, p)
            except UnificationFailure:
                continue
            return p
        return None

    def viable(self, a, frozen):
        if frozen > self.n:
            return False
        if not self.may_shrink and len(a) > self.n:
            return False
        for i in range(1, frozen + 1):
            element = a.project(i)
            if not any(self._compatible(element, c) for c in self.categories[i - 1]):
                return False
        return True

    @staticmethod
    def _compatible(element, category):
        try:
            unify_in_context(AMRS.from_afs(element), [1], category)
        except UnificationFailure:
            return False
        return True

    def successors(self, a, frozen):
        for j in range(frozen + 1, len(a) + 1):
            for rule in self.grammar.rules:
                b = strong_derive_step(a, rule, j)
                if b is not None and self.viable(b, j - 1):
                    yield rule, j, b, j - 1

    def run(self, start):
        for depth in range(self.max_steps + 1):
            log.debug(f'derivation search to depth {depth}')
            self.visited = {}
            self.final = depth == self.max_steps
            found = self.visit(DerivationNode(start), 0, depth)
            if found is not None:
                return found
        return None

    def visit(self, node, frozen, remaining):
        a = node.amrs
        key = (a, frozen)
        if self.visited.get(key, -1) >= remaining:
            return None
        self.visited[key] = remaining

        p = self.success(a)
        if p is not None:
            steps = []
            while node is not None:
                steps.append(node)
                node = node.parent
            return Derivation(steps[::-1], self.words, p)

        if remaining == 0:
            if self.final and not self.exhausted:
                for _, _, b, f in self.successors(a, frozen):
                    if (b, f) not in self.visited:
                        self.exhausted = True
                        break
            return None

        for rule, j, b, f in self.successors(a, frozen):
            child = DerivationNode(b, rule.name, j, len(rule) - 1, node)
            found = self.visit(child, f, remaining - 1)
            if found is not None:
                return found
        return None


def find_derivation(grammar, words, a=None, max_steps=DEFAULT_MAX_STEPS):
    """Search for a shortest leftmost derivation of ``words`` from ``a``.

    The search deepens one step at a time, tries rules in grammar order and
    indices left to right, and never revisits a (form, frozen prefix) state
    with less budget. A form is accepted once it unifies in context with
    some pre-terminal of the whole sentence.

    Args:
        grammar (Grammar): The grammar.
        words (list): The sentence.
        a (AMRS, optional): The first form. Defaults to the start symbol.
        max_steps (int): Largest number of rule applications tried.

    Returns:
        Derivation: or ``None`` if every derivation was ruled out within the
        budget.

    Raises:
        UnknownWord: Some word is not in the lexicon.
        BudgetExhausted: The budget ran out while derivations were still
            open, and none succeeded.
    """

    if max_steps < 0:
        raise ValueError('max_steps must be non-negative')
    grammar.check_words(words)
    if a is None:
        a = AMRS.from_afs(grammar.start)
    search = _Search(grammar, words, max_steps)
    found = search.run(a)
    if found is None and search.exhausted:
        raise BudgetExhausted(budget=max_steps, what='derivation step')
    if found is not None:
        log.debug(f'derived {" ".join(words)!r} in {found.step_count} steps: {found!r}')
    return found


def derives(grammar, words, a=None, max_steps=DEFAULT_MAX_STEPS):
    """``True`` iff :func:`find_derivation` finds a derivation."""

    return find_derivation(grammar, words, a, max_steps) is not None


def replay(grammar, words, steps, a=None):
    """Apply ``(rule name, index)`` steps in order, without any search.

    Returns:
        Derivation: if every step applies and the last form accepts
        ``words``; ``None`` otherwise.
    """

    if a is None:
        a = AMRS.from_afs(grammar.start)
    node = DerivationNode(a)
    for name, j in steps:
        rule = grammar.rule(name)
        b = strong_derive_step(node.amrs, rule, j)
        if b is None:
            return None
        node = DerivationNode(b, name, j, len(rule) - 1, node)
    search = _Search(grammar, words, 0)
    p = search.success(node.amrs)
    if p is None:
        return None
    chain = []
    while node is not None:
        chain.append(node)
        node = node.parent
    return Derivation(chain[::-1], words, p)
