# longest first, so that '=>' is not read as '=' followed by '>'
PUNCTUATION = ['=>', '->', '(', ')', '[', ']', ',', '.', ':', '&', '<', '>']

COMMENT = '%'

HEADER = 'signature'

SECTIONS = ['start', 'rules', 'lexicon']

SUB = 'sub'

FEATURES = 'features'
