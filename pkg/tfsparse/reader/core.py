import re

from collections import namedtuple
from ..errors import GrammarSyntaxError

Token = namedtuple('Token', 'kind text line column')
"""One lexeme with its 1-based source position. ``kind`` is the name of the
token case that matched it, or ``'eof'``."""


class RegexBuilder:
    r"""An alternation of literal symbols, each put through a template.

    Args:
        literals (iterable): Symbols to match. Each one is ``re.escape``'d
            before ``template`` sees it.
        template (callable): Turns one escaped symbol into a pattern.
        flags: ``re`` flags of the compiled regex.

    Example:
        The two arrows of the grammar syntax::

            >>> rb = RegexBuilder(['=>', '->'], lambda x: x)
            >>> print(rb.regex.pattern)
            =>|\->
    """

    def __init__(self, literals, template, flags=0):
        self.literals = list(literals)
        self.template = template
        self.regex = re.compile('|'.join(template(re.escape(s)) for s in self.literals), flags)

    def __repr__(self):
        return f'<RegexBuilder {self.regex.pattern!r}>'


class PreProcessorRegex:
    r"""Source rewriting by one ``re.sub`` pass per literal symbol.

    Args:
        literals (iterable): Symbols to search for, escaped as in
            :class:`RegexBuilder`.
        template (callable): Turns one escaped symbol into a search pattern.
        repl (string): What every match is replaced with.
        flags: ``re`` flags of each search regex.

    Example:
        Drop ``%`` comments up to the end of the line::

            >>> pp = PreProcessorRegex('%', lambda x: f'{x}.*', '')
            >>> pp.run('bot sub [a]. % the root')
            'bot sub [a]. '
    """

    def __init__(self, literals, template, repl, flags=0):
        self.repl = repl
        self.regexes = [RegexBuilder([s], template, flags).regex for s in literals]

    def run(self, text):
        """Apply the substitutions to ``text``, in order."""

        for regex in self.regexes:
            text = regex.sub(self.repl, text)
        return text

    def __repr__(self):
        passes = ', '.join(r.pattern for r in self.regexes)
        return f'<PreProcessorRegex [{passes}] -> {self.repl!r}>'


class Tokenizer:
    r"""A rule-based lexer built from named token cases.

    Every token case is a function returning a compiled regex. Its pattern
    becomes a named group called after the function, and all groups are
    tried as one alternation at each position of the text, so the first
    case in list order that matches decides the token kind.

    See the :mod:`tfsparse.reader.token_cases` module for the grammar cases.

    Args:
        regex_funcs (list): The token cases.
        skip (iterable): Token kinds that are matched but not returned.
            Defaults to ``('whitespace',)``.
        flags: ``re`` flags of the combined regex; the flags of the
            individual case regexes are not carried over.

    Raises:
        TypeError: ``regex_funcs`` is not a list of functions that return
            compiled regexes.

    Example:
        A tokenizer with two cases::

            >>> import re
            >>> def number():
            ...     return re.compile(r'\d+')
            >>> def plus():
            ...     return re.compile(r'\+')
            >>> t = Tokenizer([number, plus])
            >>> [tok.text for tok in t.run('1+22')]
            ['1', '+', '22', '']
    """

    def __init__(self, regex_funcs, skip=('whitespace',), flags=0):
        self.regex_funcs = regex_funcs
        self.skip = frozenset(skip)
        try:
            groups = [f'(?P<{case.__name__}>{case().pattern})' for case in regex_funcs]
        except (TypeError, AttributeError) as e:
            raise TypeError(f'token cases must be functions returning compiled regexes: {e}')
        self.total_regex = re.compile('|'.join(groups), flags)

    def run(self, text, source=None):
        """Split ``text`` into tokens.

        Args:
            text (string): Grammar source, already pre-processed.
            source (string, optional): Name reported in syntax errors.

        Returns:
            list: :class:`Token` objects, ending with an ``'eof'`` token.

        Raises:
            GrammarSyntaxError: No token case matches at some position.
        """

        tokens = []
        line, line_start = 1, 0
        pos = 0
        while pos < len(text):
            m = self.total_regex.match(text, pos)
            if m is None or m.end() == pos:
                raise GrammarSyntaxError(expected='a token', found=text[pos], line=line,
                                         column=pos - line_start + 1, source=source)
            value = m.group()
            if m.lastgroup not in self.skip:
                tokens.append(Token(m.lastgroup, value, line, pos - line_start + 1))
            newlines = value.count('\n')
            if newlines:
                line += newlines
                line_start = pos + value.rindex('\n') + 1
            pos = m.end()
        tokens.append(Token('eof', '', line, pos - line_start + 1))
        return tokens

    def __repr__(self):
        return f'<Tokenizer {[case.__name__ for case in self.regex_funcs]}>'
