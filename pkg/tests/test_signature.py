import pytest
from tfsparse.errors import CycleError, DuplicateType, NotBoundedComplete, SignatureError
from tfsparse.signature import BOTTOM, TOP, build_hierarchy

from strategies import SIG


@pytest.mark.parametrize('a, b, expected', [
    ('word', 'phrase', 'phrase'),
    ('phrase', 'word', 'phrase'),
    ('sign', 'phrase', 'phrase'),
    ('bot', 'sg', 'sg'),
    ('nom', 'nom', 'nom'),
    ('case', 'acc', 'acc'),
])
def test_lub(a, b, expected):
    assert SIG.lub(a, b) == expected


@pytest.mark.parametrize('a, b', [('n', 'v'), ('nom', 'acc'), ('word', 'agr'), ('elist', 'nelist')])
def test_lub_inconsistent(a, b):
    assert SIG.lub(a, b) is TOP


def test_subsumes():
    assert SIG.subsumes('sign', 'phrase')
    assert SIG.subsumes(BOTTOM, 'agr')
    assert SIG.subsumes('cat', 'cat')
    assert not SIG.subsumes('phrase', 'sign')
    assert not SIG.subsumes('n', 'v')


def test_upward():
    assert SIG.upward('cat') == {'cat', 'n', 'v', 's'}
    assert SIG.upward('sg') == {'sg'}


def test_height_is_a_rank():
    assert [SIG.height(t) for t in ('bot', 'sign', 'word', 'phrase')] == [0, 1, 2, 3]
    for t in SIG.types:
        for u in SIG.upward(t):
            if u != t:
                assert SIG.height(t) < SIG.height(u)


def test_feature_order():
    assert SIG.features[0] == 'SYN'
    assert SIG.sort_features(['NUM', 'CASE', 'SYN']) == ['SYN', 'CASE', 'NUM']
    assert SIG.has_feature('1ST')
    assert not SIG.has_feature('FOO')


def test_contains():
    assert 'phrase' in SIG
    assert 'verb' not in SIG
    assert TOP not in SIG


def test_unattached_types_go_below_bottom():
    h = build_hierarchy([('a', ['b'])])
    assert h.types == ('bot', 'a', 'b')
    assert h.immediate['bot'] == ('a',)
    assert h.lub('bot', 'b') == 'b'


def test_not_bounded_complete():
    with pytest.raises(NotBoundedComplete) as e:
        build_hierarchy([('bot', ['a', 'b']), ('a', ['c', 'd']), ('b', ['c', 'd'])])
    assert e.value.pair == ('a', 'b')
    assert e.value.bounds == ['c', 'd']
    assert "'a' and 'b'" in str(e.value)


def test_cycle():
    with pytest.raises(CycleError) as e:
        build_hierarchy([('a', ['b']), ('b', ['a'])])
    assert e.value.cycle == ['a', 'b', 'a']
    assert isinstance(e.value, SignatureError)


def test_bottom_as_subtype_is_a_cycle():
    with pytest.raises(CycleError):
        build_hierarchy([('a', ['bot'])])


@pytest.mark.parametrize('decls', [
    [('a', ['b']), ('a', ['c'])],
    [('a', ['b', 'b'])],
])
def test_duplicate_type(decls):
    with pytest.raises(DuplicateType):
        build_hierarchy(decls)


if __name__ == '__main__':
    pytest.main(['-x', __file__])
