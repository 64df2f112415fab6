from .errors import TFSError, UnificationFailure, GrammarError, UnknownWord, CyclicItemError
from .grammar import Grammar, load_grammar, load_grammar_file, read_afs, read_amrs
from .oracle import find_derivation, derives
from .parser import ComputationConfig, ComputationResult, run, parse, parse_many

__version__ = '0.1.0'

__all__ = ['TFSError', 'UnificationFailure', 'GrammarError', 'UnknownWord', 'CyclicItemError',
           'Grammar', 'load_grammar', 'load_grammar_file', 'read_afs', 'read_amrs',
           'find_derivation', 'derives', 'ComputationConfig', 'ComputationResult', 'run',
           'parse', 'parse_many']
