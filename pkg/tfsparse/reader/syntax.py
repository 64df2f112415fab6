"""Recursive-descent reader for grammar files.

Produces a plain syntax tree; nothing here knows about the signature. The
tree is elaborated into structures by :mod:`tfsparse.grammar`.
"""

import logging

from collections import namedtuple
from ..errors import GrammarSyntaxError
from . import Tokenizer, pre_processors, symbols, token_cases

log = logging.getLogger(__name__)
log.addHandler(logging.NullHandler())

Conj = namedtuple('Conj', 'terms line column')
TypeTerm = namedtuple('TypeTerm', 'name line column')
FeatTerm = namedtuple('FeatTerm', 'feature value line column')
TagTerm = namedtuple('TagTerm', 'tag body line column')

TypeDecl = namedtuple('TypeDecl', 'parent subs line column')
FeatureDecl = namedtuple('FeatureDecl', 'features line column')
StartClause = namedtuple('StartClause', 'avm line column')
RuleClause = namedtuple('RuleClause', 'name body head line column')
EntryClause = namedtuple('EntryClause', 'word avm line column')
GrammarSource = namedtuple('GrammarSource', 'typedecls features start rules entries source')


class _Reader:
    def __init__(self, text, source=None, pre_processor_funcs=None, tokenizer_func=None):
        self.source = source
        for pp in pre_processor_funcs or pre_processors.DEFAULT_PRE_PROCESSORS:
            text = pp(text)
        tokenizer_func = tokenizer_func or Tokenizer(token_cases.DEFAULT_CASES).run
        self.tokens = tokenizer_func(text, source=source)
        self.pos = 0

    @property
    def tok(self):
        return self.tokens[self.pos]

    def peek(self, ahead=1):
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def fail(self, expected, tok=None):
        tok = tok or self.tok
        found = tok.text if tok.kind != 'eof' else 'end of input'
        raise GrammarSyntaxError(expected=expected, found=found, line=tok.line,
                                 column=tok.column, source=self.source)

    def at(self, text):
        return self.tok.kind == 'punctuation' and self.tok.text == text

    def at_word(self, word):
        return self.tok.kind == 'ident' and self.tok.text == word

    def expect(self, text):
        if not self.at(text):
            self.fail(f"'{text}'")
        return self.advance()

    def expect_kind(self, kind, what):
        if self.tok.kind != kind:
            self.fail(what)
        return self.advance()

    def advance(self):
        tok = self.tok
        self.pos += 1
        return tok

    # terms

    def avm(self):
        first = self.tok
        terms = [self.term()]
        while self.at('&'):
            self.advance()
            terms.append(self.term())
        return Conj(tuple(terms), first.line, first.column)

    def term(self):
        tok = self.tok
        if tok.kind == 'ident':
            self.advance()
            return TypeTerm(tok.text, tok.line, tok.column)
        if tok.kind == 'tag':
            self.advance()
            body = None
            if self.at('('):
                self.advance()
                body = self.avm()
                self.expect(')')
            return TagTerm(int(tok.text[1:]), body, tok.line, tok.column)
        if tok.kind == 'feature':
            self.advance()
            self.expect(':')
            return FeatTerm(tok.text, self.term(), tok.line, tok.column)
        if self.at('('):
            self.advance()
            inner = self.avm()
            self.expect(')')
            return inner
        self.fail('a type, a tag, a feature or "("')

    def avm_list(self, closers):
        """``avm ("," avm)*``, or nothing when the next token is a closer."""

        if self.tok.kind == 'punctuation' and self.tok.text in closers:
            return []
        avms = [self.avm()]
        while self.at(','):
            self.advance()
            avms.append(self.avm())
        return avms

    # grammar file

    def grammar(self):
        if not self.at_word(symbols.HEADER):
            self.fail(f"'{symbols.HEADER}'")
        self.advance()

        typedecls, features = [], None
        while True:
            if self.at_word(symbols.FEATURES) and self.peek().text == '[':
                if features is not None:
                    self.fail('one features declaration only')
                features = self.feature_decl()
            elif self.tok.kind == 'ident' and self.peek().kind == 'ident' \
                    and self.peek().text == symbols.SUB:
                typedecls.append(self.typedecl())
            else:
                break
        if not typedecls:
            self.fail('a type declaration')

        start, rules, entries = [], [], []
        while self.tok.kind != 'eof':
            if self.at_word('start'):
                tok = self.advance()
                start.append(StartClause(self.avm(), tok.line, tok.column))
                self.expect('.')
            elif self.at_word('rules'):
                self.advance()
                while self.tok.kind == 'ident' and self.peek().text == ':':
                    rules.append(self.rule())
            elif self.at_word('lexicon'):
                self.advance()
                while self.tok.kind == 'ident' and self.peek().text == '->':
                    entries.append(self.entry())
            else:
                self.fail(' or '.join(f"'{s}'" for s in symbols.SECTIONS))
        log.debug(f'read {len(typedecls)} type declarations, {len(rules)} rules, '
                  f'{len(entries)} lexical entries')
        return GrammarSource(typedecls, features, start, rules, entries, self.source)

    def feature_decl(self):
        tok = self.advance()
        self.expect('[')
        names = [self.expect_kind('feature', 'a feature name').text]
        while self.at(','):
            self.advance()
            names.append(self.expect_kind('feature', 'a feature name').text)
        self.expect(']')
        self.expect('.')
        return FeatureDecl(tuple(names), tok.line, tok.column)

    def typedecl(self):
        tok = self.advance()
        self.advance()
        self.expect('[')
        subs = [self.expect_kind('ident', 'a type name').text]
        while self.at(','):
            self.advance()
            subs.append(self.expect_kind('ident', 'a type name').text)
        self.expect(']')
        self.expect('.')
        return TypeDecl(tok.text, tuple(subs), tok.line, tok.column)

    def rule(self):
        name = self.advance()
        self.expect(':')
        body = self.avm_list(('=>',))
        self.expect('=>')
        head = self.avm()
        self.expect('.')
        return RuleClause(name.text, tuple(body), head, name.line, name.column)

    def entry(self):
        word = self.advance()
        self.expect('->')
        avm = self.avm()
        self.expect('.')
        return EntryClause(word.text, avm, word.line, word.column)

    def end(self):
        if self.tok.kind != 'eof':
            self.fail('end of input')


def parse_grammar(text, source=None, pre_processor_funcs=None, tokenizer_func=None):
    """Read a grammar file into a :data:`GrammarSource` syntax tree.

    Args:
        text (string): The grammar source.
        source (string, optional): File name used in error positions.
        pre_processor_funcs (list): Functions run on ``text`` before
            tokenizing, each taking and returning a string. Defaults to
            :data:`~tfsparse.reader.pre_processors.DEFAULT_PRE_PROCESSORS`.
        tokenizer_func (callable): Takes the text and a ``source`` keyword and
            returns tokens ending with ``'eof'``. Defaults to a
            :class:`~tfsparse.reader.core.Tokenizer` over
            :data:`~tfsparse.reader.token_cases.DEFAULT_CASES`.

    Raises:
        GrammarSyntaxError: With the position and the expected token.
    """

    return _Reader(text, source, pre_processor_funcs, tokenizer_func).grammar()


def parse_avm(text):
    """Read a single AVM term."""

    reader = _Reader(text)
    avm = reader.avm()
    reader.end()
    return avm


def parse_avms(text):
    """Read a comma-separated sequence of AVM terms, optionally in ``<...>``.

    The empty sequence is written ``<>``.
    """

    reader = _Reader(text)
    bracketed = reader.at('<')
    if bracketed:
        reader.advance()
    avms = reader.avm_list(('>',)) if bracketed else reader.avm_list(())
    if bracketed:
        reader.expect('>')
    reader.end()
    return avms
