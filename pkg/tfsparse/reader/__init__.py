from .core import RegexBuilder, PreProcessorRegex, Tokenizer, Token
from .syntax import parse_grammar, parse_avm, parse_avms
