import pytest
from hypothesis import assume, given, settings
from hypothesis.strategies import data, permutations, sampled_from

from tfsparse.errors import CyclicStructure
from tfsparse.signature import TOP
from tfsparse.tfs import (ConcreteTFS, Node, alphabetic_variant, delta, find_cycle, is_cyclic,
                          paths, rank, tfs_subsumes)

from strategies import SIG, concrete_tfs, rst_chain


def agr_sg():
    root, num = Node(), Node()
    return ConcreteTFS(SIG, root, {root: 'agr', num: 'sg'}, {root: {'NUM': num}})


def shared():
    root, q = Node(), Node()
    return ConcreteTFS(SIG, root, {root: 'bot', q: 'bot'}, {root: {'SUBJ': q, 'HEAD': q}})


def apart():
    root, q1, q2 = Node(), Node(), Node()
    return ConcreteTFS(SIG, root, {root: 'bot', q1: 'bot', q2: 'bot'},
                       {root: {'SUBJ': q1, 'HEAD': q2}})


def test_invalid_type():
    q = Node()
    with pytest.raises(ValueError):
        ConcreteTFS(SIG, q, {q: TOP})
    with pytest.raises(ValueError):
        ConcreteTFS(SIG, q, {q: 'verb'})


def test_unknown_feature():
    root, q = Node(), Node()
    with pytest.raises(ValueError):
        ConcreteTFS(SIG, root, {root: 'bot', q: 'bot'}, {root: {'FOO': q}})


def test_unreachable_node():
    root, q = Node(), Node()
    with pytest.raises(ValueError):
        ConcreteTFS(SIG, root, {root: 'bot', q: 'bot'})


def test_out_in_feature_order():
    s = shared()
    assert [f for f, _ in s.out(s.root)] == ['SUBJ', 'HEAD']


def test_delta():
    s = agr_sg()
    assert s.typing[delta(s, s.root, ('NUM',))] == 'sg'
    assert delta(s, s.root, ()) is s.root
    assert delta(s, s.root, ('NUM', 'PERS')) is None


def test_find_cycle():
    assert find_cycle(agr_sg()) is None
    assert find_cycle(rst_chain(2)) == (('RST', 'RST'), ('RST',))
    assert find_cycle(rst_chain(0)) == ((), ('RST',))


def test_is_cyclic():
    assert not is_cyclic(shared())
    assert is_cyclic(rst_chain(3))


def test_paths():
    assert list(paths(shared())) == [(), ('SUBJ',), ('HEAD',)]
    assert list(paths(rst_chain(0), max_length=2)) == [(), ('RST',), ('RST', 'RST')]


def test_paths_of_cyclic_structure():
    with pytest.raises(CyclicStructure):
        list(paths(rst_chain(1)))


def test_subsumption():
    a, b = agr_sg(), agr_sg()
    assert alphabetic_variant(a, b)
    root = Node()
    general = ConcreteTFS(SIG, root, {root: 'agr'})
    assert tfs_subsumes(general, a) == {root: a.root}
    assert tfs_subsumes(a, general) is None


def test_reentrancy_is_preserved():
    assert tfs_subsumes(apart(), shared()) is not None
    assert tfs_subsumes(shared(), apart()) is None


@pytest.mark.parametrize('i', range(10))
def test_descending_cyclic_chain(i):
    assert tfs_subsumes(rst_chain(i + 1), rst_chain(i)) is not None
    assert tfs_subsumes(rst_chain(i), rst_chain(i + 1)) is None


def test_rank():
    # types count one more than their height, so even a bot leaf adds to the
    # rank and adding a path is never free
    assert rank(agr_sg()) == 0 + 2 + 3
    assert rank(shared()) == 1 + 3


def test_rank_grows_with_sharing():
    # same paths and types, one node fewer
    assert rank(apart()) == 0 + 3
    assert rank(apart()) < rank(shared())


def test_rank_of_cyclic_structure():
    with pytest.raises(CyclicStructure):
        rank(rst_chain(0))


@given(concrete_tfs())
@settings(max_examples=1000, deadline=None)
def test_paths_are_prefix_closed(s):
    found = set(paths(s))
    assert () in found
    assert all(p[:-1] in found for p in found if p)
    assert all(delta(s, s.root, p) is not None for p in found)


@given(concrete_tfs(cyclic=True))
@settings(max_examples=1000, deadline=None)
def test_subsumption_is_reflexive(s):
    assert tfs_subsumes(s, s) == {q: q for q in s.nodes}


@given(data())
@settings(max_examples=500, deadline=None)
def test_rank_grows_with_types(data):
    specific = data.draw(concrete_tfs())
    typing = {q: data.draw(sampled_supertype(t)) for q, t in specific.typing.items()}
    assume(typing != specific.typing)
    general = ConcreteTFS(SIG, specific.root, typing, specific.arcs)

    assert tfs_subsumes(general, specific) is not None
    assert tfs_subsumes(specific, general) is None
    assert rank(general) < rank(specific)


@given(data())
@settings(max_examples=500, deadline=None)
def test_rank_grows_with_paths(data):
    s = data.draw(concrete_tfs(max_nodes=4))
    leaf = Node()
    q = data.draw(sampled_from(sorted(s.nodes, key=lambda n: n.serial)))
    free = [f for f in SIG.features if f not in s.arcs.get(q, {})]
    f = data.draw(sampled_from(free))
    arcs = {p: dict(out) for p, out in s.arcs.items()}
    arcs.setdefault(q, {})[f] = leaf
    bigger = ConcreteTFS(SIG, s.root, {**s.typing, leaf: 'bot'}, arcs)

    assert tfs_subsumes(s, bigger) is not None
    assert rank(s) < rank(bigger)


@given(data())
@settings(max_examples=500, deadline=None)
def test_rank_grows_with_reentrancy(data):
    s = data.draw(concrete_tfs())
    leaves = [q for q in sorted(s.nodes, key=lambda n: n.serial)
              if q is not s.root and not s.arcs.get(q)]
    assume(len(leaves) >= 2)
    keep, fused = data.draw(permutations(leaves))[:2]
    general = ConcreteTFS(SIG, s.root, {**s.typing, fused: s.typing[keep]}, s.arcs)
    arcs = {q: {f: keep if t is fused else t for f, t in out.items()}
            for q, out in s.arcs.items()}
    typing = {q: t for q, t in general.typing.items() if q is not fused}
    merged = ConcreteTFS(SIG, s.root, typing, arcs)

    assert tfs_subsumes(general, merged) is not None
    assert tfs_subsumes(merged, general) is None
    assert rank(merged) == rank(general) + 1


def sampled_supertype(t):
    return sampled_from([u for u in SIG.types if SIG.subsumes(u, t)])


if __name__ == '__main__':
    pytest.main(['-x', __file__])
