from . import PreProcessorRegex, symbols


def comments(text):
    """Blank out ``%`` line comments.

    Only the comment text is removed; line breaks stay, so token positions
    still match the source.
    """

    return PreProcessorRegex(
        literals=symbols.COMMENT,
        template=lambda x: f'{x}[^\\n]*',
        repl='').run(text)


def tabs(text):
    """Expand tabs so that reported columns match what an editor shows."""

    return text.expandtabs(4)


DEFAULT_PRE_PROCESSORS = [tabs, comments]
