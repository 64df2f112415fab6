__all__ = [
    'TFSError', 'SignatureError', 'CycleError', 'NotBoundedComplete', 'DuplicateType',
    'UnificationFailure', 'AlignmentError', 'IndexOutOfRange', 'CyclicStructure',
    'GrammarError', 'GrammarSyntaxError', 'UnknownType', 'UnknownFeature', 'TagError',
    'UnknownWord', 'BudgetExhausted', 'CyclicItemError'
]


def _path_str(path):
    return '.'.join(path) if path else '<root>'


class TFSError(Exception):
    """Exception that uses context to present a meaningful error message"""

    def __init__(self, msg=None, **kwargs):
        self._consume(kwargs)
        if kwargs:
            raise TypeError(f'unexpected context for {type(self).__name__}: {sorted(kwargs)}')
        self.msg = msg if msg else self.infer_msg()
        super().__init__(self.msg)

    def _consume(self, kwargs):
        pass

    def infer_msg(self):
        return None


class SignatureError(TFSError):
    """The type hierarchy is not a bounded-complete partial order."""


class CycleError(SignatureError):
    def _consume(self, kwargs):
        self.cycle = kwargs.pop('cycle', ())

    def infer_msg(self):
        if not self.cycle:
            return 'Subtype cycle in type hierarchy'
        return f"Type '{self.cycle[0]}' takes part in a subtype cycle: {' < '.join(self.cycle)}"


class NotBoundedComplete(SignatureError):
    def _consume(self, kwargs):
        self.pair = kwargs.pop('pair', None)
        self.bounds = kwargs.pop('bounds', ())

    def infer_msg(self):
        a, b = self.pair
        return (f"Types '{a}' and '{b}' have {len(self.bounds)} minimal upper bounds "
                f"({', '.join(self.bounds)}); the hierarchy is not bounded complete")


class DuplicateType(SignatureError):
    def _consume(self, kwargs):
        self.type_name = kwargs.pop('type_name', None)

    def infer_msg(self):
        return f"Type '{self.type_name}' is declared more than once"


class UnificationFailure(TFSError):
    """Two classes were merged whose types have no least upper bound.

    Carries both source types and the shortest path (by feature order) to the
    offending class, when one is known.
    """

    def _consume(self, kwargs):
        self.types = kwargs.pop('types', None)
        self.path = kwargs.pop('path', None)
        self.index = kwargs.pop('index', None)

    def infer_msg(self):
        where = ''
        if self.path is not None:
            where = f' at {_path_str(self.path)}'
            if self.index is not None:
                where += f' of element {self.index}'
        if self.types is None:
            return f'Unification failed{where}'
        a, b = self.types
        return f"Unification failed{where}: '{a}' and '{b}' are inconsistent"


class AlignmentError(TFSError):
    """Unification in context was asked for an index set the operands do not share."""


class IndexOutOfRange(TFSError, IndexError):
    def _consume(self, kwargs):
        self.span = kwargs.pop('span', None)
        self.length = kwargs.pop('length', None)

    def infer_msg(self):
        if self.span is None:
            return 'Index out of range'
        lo, hi = self.span
        return f'Sub-structure {lo}..{hi} is out of range for a structure of length {self.length}'


class CyclicStructure(TFSError):
    """An operation that needs a finite path set met a cyclic structure."""


class GrammarError(TFSError):
    """Error in a grammar source, located by line and column"""

    def _consume(self, kwargs):
        self.line = kwargs.pop('line', None)
        self.column = kwargs.pop('column', None)
        self.source = kwargs.pop('source', None)
        self.detail = kwargs.pop('detail', None)

    def infer_msg(self):
        return self.detail

    def __str__(self):
        if self.line is None:
            return str(self.msg)
        where = f'line {self.line}, column {self.column}'
        if self.source:
            where = f'{self.source}: {where}'
        return f'{where}: {self.msg}'


class GrammarSyntaxError(GrammarError):
    def _consume(self, kwargs):
        self.expected = kwargs.pop('expected', None)
        self.found = kwargs.pop('found', None)
        super()._consume(kwargs)

    def infer_msg(self):
        if self.expected is None:
            return super().infer_msg() or 'Syntax error'
        return f'Expected {self.expected}, found {self.found!r}'


class UnknownType(GrammarError):
    def _consume(self, kwargs):
        self.type_name = kwargs.pop('type_name', None)
        super()._consume(kwargs)

    def infer_msg(self):
        return f"Unknown type '{self.type_name}'"


class UnknownFeature(GrammarError):
    def _consume(self, kwargs):
        self.feature = kwargs.pop('feature', None)
        super()._consume(kwargs)

    def infer_msg(self):
        return f"Unknown feature '{self.feature}'"


class TagError(GrammarError):
    def _consume(self, kwargs):
        self.tag = kwargs.pop('tag', None)
        super()._consume(kwargs)

    def infer_msg(self):
        return f'Tag #{self.tag}: {self.detail}' if self.detail else f'Bad use of tag #{self.tag}'


class UnknownWord(TFSError, KeyError):
    def _consume(self, kwargs):
        self.word = kwargs.pop('word', None)

    def infer_msg(self):
        return f"Word not in lexicon: '{self.word}'"

    def __str__(self):
        return str(self.msg)


class BudgetExhausted(TFSError):
    """A bounded search or iteration ran out of budget before deciding."""

    def _consume(self, kwargs):
        self.budget = kwargs.pop('budget', None)
        self.what = kwargs.pop('what', 'search')

    def infer_msg(self):
        return f'{self.what.capitalize()} budget of {self.budget} exhausted before a decision'


class CyclicItemError(TFSError):
    def _consume(self, kwargs):
        self.item = kwargs.pop('item', None)
        self.cycle = kwargs.pop('cycle', None)

    def infer_msg(self):
        index, prefix, loop = self.cycle
        cell = f'[{self.item.i}, {self.item.j}, {self.item.status}]' if self.item else 'item'
        return (f'Cyclic structure in {cell}: element {index} at {_path_str(prefix)} '
                f'reaches itself via {_path_str(loop)}')
