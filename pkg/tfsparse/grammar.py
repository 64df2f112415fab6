import logging

from collections import Counter
from itertools import product
from warnings import warn
from .afs import Workspace
from .errors import (GrammarError, UnknownType, UnknownFeature, TagError, UnknownWord,
                     UnificationFailure)
from .mrs import AMRS, LAMBDA, concat, substructure
from .reader import parse_grammar, parse_avm, parse_avms
from .reader.syntax import Conj, TypeTerm, FeatTerm, TagTerm
from .signature import build_hierarchy, BOTTOM, TOP

__all__ = ['Rule', 'Grammar', 'GrammarLint', 'load_grammar', 'load_grammar_file', 'read_afs',
           'read_amrs']

log = logging.getLogger(__name__)
log.addHandler(logging.NullHandler())


class GrammarLint(UserWarning):
    """Something in the grammar is legal but probably not intended."""


class Rule:
    """A rule: a multi-rooted structure whose last element is the head.

    Args:
        name (string): Used in traces and derivations.
        amrs (AMRS): Body elements followed by the head; length at least 1.
    """

    __slots__ = ('name', 'amrs', 'head', 'body')

    def __init__(self, name, amrs):
        if not len(amrs):
            raise ValueError(f'rule {name} has no head')
        self.name = name
        self.amrs = amrs
        self.head = amrs.project(len(amrs))
        self.body = substructure(amrs, 1, len(amrs) - 1)

    def __len__(self):
        return len(self.amrs)

    @property
    def is_epsilon(self):
        return len(self.amrs) == 1

    def __eq__(self, other):
        if not isinstance(other, Rule):
            return NotImplemented
        return self.name == other.name and self.amrs == other.amrs

    def __hash__(self):
        return hash((self.name, self.amrs))

    def __repr__(self):
        return f'<Rule {self.name}/{len(self)}>'

    def render(self):
        *body, head = self.amrs.avm_elements()
        return f"{self.name}: {', '.join(body)}{' ' if body else ''}=> {head}."


class Grammar:
    """A loaded grammar.

    Args:
        signature (TypeHierarchy): The type system.
        rules (list): :class:`Rule` objects with distinct names.
        start (AFS): The start symbol.
        lexicon (dict): word -> tuple of :class:`AFS` categories.
    """

    def __init__(self, signature, rules, start, lexicon, source=None):
        self.signature = signature
        self.rules = tuple(rules)
        self.start = start
        self.lexicon = {word: tuple(cats) for word, cats in lexicon.items()}
        self.source = source

    def __repr__(self):
        return f'<Grammar {len(self.rules)} rules, {len(self.lexicon)} words>'

    @property
    def epsilon_rules(self):
        return [r for r in self.rules if r.is_epsilon]

    def rule(self, name):
        for r in self.rules:
            if r.name == name:
                return r
        raise KeyError(name)

    def cat(self, word):
        """The category set of ``word``.

        Raises:
            UnknownWord: ``word`` is not in the lexicon.
        """

        try:
            return self.lexicon[word]
        except KeyError:
            raise UnknownWord(word=word) from None

    def check_words(self, words):
        for word in words:
            self.cat(word)

    def pre_terminals(self, words, j, k):
        """Pre-terminals: every sequence of categories for ``words[j-1:k]``.

        Returns ``[λ]`` when ``j > k``. The order follows the lexicon order
        at each position.

        Raises:
            UnknownWord: Some word in the range is not in the lexicon.
        """

        if j > k:
            return [LAMBDA]
        cats = [[AMRS.from_afs(a) for a in self.cat(w)] for w in words[j - 1:k]]
        result = {}
        for choice in product(*cats):
            amrs = choice[0]
            for element in choice[1:]:
                amrs = concat(amrs, element)
            result[amrs] = None
        return list(result)

    def mentioned_types(self):
        structures = [self.start] + [r.amrs for r in self.rules]
        structures += [a for cats in self.lexicon.values() for a in cats]
        return {t for s in structures for t in s.types}

    def lints(self):
        """Non-fatal findings about the grammar.

        Each finding is also issued as a :class:`GrammarLint` warning.

        Returns:
            list: Messages for types whose whole upward cone goes unused,
            and for rule heads identical to a lexical category.
        """

        found = []
        mentioned = self.mentioned_types()
        for t in self.signature.types:
            if t != BOTTOM and not (self.signature.upward(t) & mentioned):
                found.append(f"type '{t}' is never used, nor is any of its subtypes")
        categories = {a: word for word, cats in self.lexicon.items() for a in cats}
        for r in self.rules:
            if r.head in categories:
                found.append(f"rule '{r.name}' has the category of '{categories[r.head]}' "
                             f'as its head')
        for msg in found:
            warn(msg, GrammarLint)
            log.warning(msg)
        return found

    def render(self):
        """Grammar file text that loads back to an equal grammar."""

        sig = self.signature
        lines = ['signature']
        for t in sig.types:
            if sig.immediate[t]:
                lines.append(f"{t} sub [{', '.join(sig.immediate[t])}].")
        if sig.features:
            lines.append(f"features [{', '.join(sig.features)}].")
        lines += ['', f'start {self.start.avm()}.', '', 'rules']
        lines += [r.render() for r in self.rules]
        lines += ['', 'lexicon']
        for word, cats in self.lexicon.items():
            lines += [f'{word} -> {a.avm()}.' for a in cats]
        return '\n'.join(lines) + '\n'


class _Elaborator:
    """Turns syntax-tree AVMs into canonical structures over a signature."""

    def __init__(self, signature, source=None):
        self.signature = signature
        self.source = source

    def where(self, node):
        return {'line': node.line, 'column': node.column, 'source': self.source}

    def clause(self, avms):
        """One root per AVM; tags are shared across all of them."""

        ws = Workspace(self.signature)
        self.tags = {}
        self.uses = Counter()
        self.sites = {}
        roots = []
        for avm in avms:
            n = ws.node()
            roots.append(n)
            self.conj(ws, avm, n)
        for tag, count in self.uses.items():
            if count == 1:
                raise TagError(tag=tag, detail='used only once', **self.where(self.sites[tag]))
        ws.roots = roots
        return AMRS.from_workspace(ws, roots)

    def conj(self, ws, conj, n):
        for term in conj.terms:
            self.term(ws, term, n)

    def term(self, ws, term, n):
        if isinstance(term, Conj):
            self.conj(ws, term, n)
        elif isinstance(term, TypeTerm):
            if term.name not in self.signature:
                raise UnknownType(type_name=term.name, **self.where(term))
            rep = ws.find(n)
            joined = self.signature.lub(ws.types[rep], term.name)
            if joined is TOP:
                raise GrammarError(
                    detail=f"type '{term.name}' is inconsistent with '{ws.types[rep]}'",
                    **self.where(term))
            ws.types[rep] = joined
        elif isinstance(term, FeatTerm):
            if not self.signature.has_feature(term.feature):
                raise UnknownFeature(feature=term.feature, **self.where(term))
            rep = ws.find(n)
            child = ws.arcs[rep].get(term.feature)
            if child is None:
                child = ws.node()
                ws.arc(rep, term.feature, child)
            self.term(ws, term.value, child)
        else:
            self.tag(ws, term, n)

    def tag(self, ws, term, n):
        self.uses[term.tag] += 1
        self.sites.setdefault(term.tag, term)
        if term.tag not in self.tags:
            self.tags[term.tag] = n
            if term.body is not None:
                self.conj(ws, term.body, n)
            return
        if term.body is not None:
            self.conj(ws, term.body, n)
        try:
            ws.unify(self.tags[term.tag], n)
        except UnificationFailure as exc:
            a, b = exc.types
            raise TagError(tag=term.tag, detail=f"inconsistent types '{a}' and '{b}'",
                           **self.where(term)) from None


def _collect_features(tree):
    found = set()

    def walk(term):
        if isinstance(term, Conj):
            for t in term.terms:
                walk(t)
        elif isinstance(term, FeatTerm):
            found.add(term.feature)
            walk(term.value)
        elif isinstance(term, TagTerm) and term.body is not None:
            walk(term.body)

    for clause in tree.start:
        walk(clause.avm)
    for clause in tree.rules:
        for avm in clause.body + (clause.head,):
            walk(avm)
    for clause in tree.entries:
        walk(clause.avm)
    return found


def load_grammar(text, source=None):
    """Read, validate and elaborate a grammar.

    Args:
        text (string): Grammar file contents.
        source (string, optional): File name used in error positions.

    Returns:
        Grammar

    Raises:
        GrammarSyntaxError: The text does not follow the grammar file syntax.
        SignatureError: The type declarations do not form a bounded-complete
            partial order.
        UnknownType, UnknownFeature, TagError, GrammarError: A clause does not
            elaborate to a well-typed structure.
    """

    tree = parse_grammar(text, source)

    if tree.features is not None:
        declared = tree.features.features
        if len(set(declared)) != len(declared):
            dup = next(f for f in declared if declared.count(f) > 1)
            raise GrammarError(detail=f"feature '{dup}' is declared twice",
                               line=tree.features.line, column=tree.features.column,
                               source=source)
        features = list(declared)
    else:
        features = sorted(_collect_features(tree))
    signature = build_hierarchy([(d.parent, list(d.subs)) for d in tree.typedecls], features)

    elab = _Elaborator(signature, source)

    if len(tree.start) != 1:
        at = tree.start[1] if tree.start else None
        raise GrammarError(detail=f'expected exactly one start clause, found {len(tree.start)}',
                           line=at and at.line, column=at and at.column, source=source)
    start = elab.clause([tree.start[0].avm]).project(1)

    rules, names = [], set()
    for clause in tree.rules:
        if clause.name in names:
            raise GrammarError(detail=f"rule '{clause.name}' is defined twice",
                               **elab.where(clause))
        names.add(clause.name)
        rules.append(Rule(clause.name, elab.clause(list(clause.body) + [clause.head])))
        log.debug(f'rule {clause.name}: {rules[-1].amrs.avm()}')

    lexicon = {}
    for clause in tree.entries:
        category = elab.clause([clause.avm]).project(1)
        cats = lexicon.setdefault(clause.word, [])
        if category not in cats:
            cats.append(category)

    grammar = Grammar(signature, rules, start, lexicon, source)
    log.debug(f'loaded {grammar!r}')
    return grammar


def load_grammar_file(path):
    """:func:`load_grammar` on the contents of ``path``."""

    with open(path, 'r', encoding='utf-8') as f:
        return load_grammar(f.read(), source=str(path))


def read_afs(signature, text):
    """Elaborate a single AVM term into an :class:`AFS`.

    >>> read_afs(sig, 'agr & NUM:sg & PERS:3rd').avm()
    'agr & PERS:3rd & NUM:sg'
    """

    return _Elaborator(signature).clause([parse_avm(text)]).project(1)


def read_amrs(signature, text):
    """Elaborate ``a, b, ...`` (or ``<a, b, ...>``) into an :class:`AMRS`.

    Tags are shared across the elements.
    """

    avms = parse_avms(text)
    if not avms:
        return AMRS.empty(signature)
    return _Elaborator(signature).clause(avms)
