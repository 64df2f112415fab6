import dataclasses
import itertools
from concurrent.futures import ThreadPoolExecutor

import pytest
from tfsparse import grammars
from tfsparse.errors import CyclicItemError, UnknownWord
from tfsparse.grammar import load_grammar_file, read_afs, read_amrs
from tfsparse.mrs import AMRS, LAMBDA
from tfsparse.oracle import derives
from tfsparse.parser import (ACCEPTED, ACT, BUDGET_EXHAUSTED, COMP, REJECTED, Chart,
                             ComputationConfig, Item, filter_subsume, parse, parse_many, run,
                             t_step)
from tfsparse.utils import _compact_json

from strategies import EXAMPLE, SIG

JOHN_LOVES_FISH = 'john loves fish'

WITNESS = ('phrase & SYN:s & SUBJ:(head & AGR:#1(agr & PERS:3rd & NUM:sg)) '
           '& HEAD:(head & AGR:#1)')

JOHN = 'word & SYN:n & HEAD:(head & AGR:(agr & PERS:3rd & NUM:sg)) & CASE:case'
LOVES = ('word & SYN:v & HEAD:(head & AGR:(agr & NUM:sg)) '
         '& SBCT:(nelist & 1ST:(phrase & SYN:n) & RST:elist)')
FISH = 'word & SYN:n & HEAD:(head & AGR:agr) & CASE:case'

# Items of the full chart of "john loves fish", without the filter, with the
# iteration each must have appeared by. The lifted nouns complete under r2
# only once their ACT items from the second iteration exist, so by 3.
GOLDEN = [
    (0, JOHN, 1, COMP, 1),
    (1, LOVES, 2, COMP, 1),
    (2, FISH, 3, COMP, 1),
    (0, 'phrase & SYN:n & HEAD:(head & AGR:(agr & PERS:3rd & NUM:sg)) & CASE:nom', 1, ACT, 2),
    (2, 'phrase & SYN:n & HEAD:(head & AGR:agr) & CASE:nom', 3, ACT, 2),
    (1, 'word & SYN:v & HEAD:(head & AGR:(agr & NUM:sg)) '
        '& SBCT:(nelist & 1ST:(phrase & SYN:n & HEAD:head & CASE:acc) & RST:elist)', 2, ACT, 2),
    (0, 'phrase & SYN:n & HEAD:(head & AGR:(agr & PERS:3rd & NUM:sg)) & CASE:case', 1, COMP, 3),
    (2, 'phrase & SYN:n & HEAD:(head & AGR:agr) & CASE:case', 3, COMP, 3),
    (1, 'word & SYN:v & HEAD:(head & AGR:(agr & NUM:sg)) '
        '& SBCT:(nelist & 1ST:#1(phrase & SYN:n & HEAD:(head & AGR:agr) & CASE:acc) & RST:elist), '
        '#1', 3, ACT, 3),
    (1, 'phrase & SYN:v & HEAD:(head & AGR:(agr & NUM:sg)) & SBCT:elist', 3, COMP, 4),
    (0, 'phrase & SYN:n & HEAD:(head & AGR:#1(agr & PERS:3rd & NUM:sg)) & CASE:nom, '
        'phrase & SYN:v & HEAD:(head & AGR:#1) & SBCT:elist', 3, ACT, 5),
    (0, WITNESS, 3, COMP, 6),
]

SENTENCES = [list(words) for k in range(5)
             for words in itertools.product(['john', 'loves', 'fish'], repeat=k)]


def item(i, text, j, status):
    return Item(i, read_amrs(SIG, text), j, status)


def full(grammar, sentence, **kwargs):
    return parse(grammar, sentence, early_exit=False, **kwargs)


def test_item_equality_ignores_bookkeeping():
    a = Item(0, read_amrs(SIG, 'n'), 1, COMP, {'case': 'scan', 'word': 'x'}, 1)
    b = Item(0, read_amrs(SIG, 'n'), 1, COMP)
    assert a == b
    assert hash(a) == hash(b)
    assert a != Item(0, read_amrs(SIG, 'n'), 1, ACT)
    assert repr(b) == '[0, <n>, 1, COMP]'


def test_item_order_key():
    items = [item(1, 'n', 2, COMP), item(0, 'n', 1, COMP), item(0, 'n, v', 1, ACT),
             item(0, 'n', 1, ACT)]
    _out = [item(0, 'n', 1, ACT), item(0, 'n, v', 1, ACT), item(0, 'n', 1, COMP),
            item(1, 'n', 2, COMP)]
    assert sorted(items, key=lambda x: x.order_key) == _out


def test_item_subsumes():
    general = item(0, 'agr', 1, COMP)
    specific = item(0, 'agr & NUM:sg', 1, COMP)
    assert general.subsumes(specific)
    assert not specific.subsumes(general)
    assert not general.subsumes(item(1, 'agr & NUM:sg', 2, COMP))


def test_chart_keeps_first_insertion():
    first = Item(0, read_amrs(SIG, 'n'), 1, COMP, {'case': 'scan'})
    second = Item(0, read_amrs(SIG, 'n'), 1, COMP, {'case': 'completion'})
    chart = Chart([first, second, item(0, 'v', 1, COMP)])
    assert len(chart) == 2
    assert chart.get(second) is first
    assert second in chart
    assert len(chart.cell(0, 1, COMP)) == 2
    assert chart.active() == []


def test_t_step_on_empty_chart():
    produced = t_step(Chart(), EXAMPLE, JOHN_LOVES_FISH.split())
    items = list(produced.values())
    assert len(items) == 7
    predictions = [x for x in items if x.provenance['case'] == 'prediction']
    assert [(x.i, x.j) for x in predictions] == [(0, 0), (1, 1), (2, 2), (3, 3)]
    assert all(x.amrs == LAMBDA for x in predictions)
    scans = [x for x in items if x.provenance['case'] == 'scan']
    assert [(x.i, x.j, x.provenance['word']) for x in scans] == [
        (0, 1, 'john'), (1, 2, 'loves'), (2, 3, 'fish')]
    assert scans[1].amrs == AMRS.from_afs(EXAMPLE.cat('loves')[0])


def test_t_step_epsilon_rules():
    g = load_grammar_file(grammars.path('olp_demo'))
    produced = t_step(Chart(), g, ['a'])
    seeds = [x for x in produced.values() if x.provenance['case'] == 'epsilon']
    assert [(x.i, x.j, x.status) for x in seeds] == [(0, 0, COMP), (1, 1, COMP)]
    assert seeds[0].amrs == read_amrs(g.signature, 't & F:bot')


def test_filter_subsume():
    general = item(0, 'agr', 1, COMP)
    specific = item(0, 'agr & NUM:sg', 1, COMP)
    elsewhere = item(1, 'agr & NUM:sg', 2, COMP)
    active = item(0, 'agr & NUM:sg', 1, ACT)
    filtered = filter_subsume(Chart([specific, general, elsewhere, active]))
    assert list(filtered) == [general, elsewhere, active]


def test_accepted():
    result = parse(EXAMPLE, JOHN_LOVES_FISH)
    assert result.verdict == ACCEPTED
    assert result.accepted
    assert result.iterations == 6
    assert result.witness.amrs.project(1) == read_afs(SIG, WITNESS)
    assert (result.witness.i, result.witness.j, result.witness.status) == (0, 3, COMP)
    assert run(EXAMPLE, JOHN_LOVES_FISH.split()).witness == result.witness


def test_sentence_is_normalised():
    result = parse(EXAMPLE, '  John LOVES\tfish ')
    assert result.words == ['john', 'loves', 'fish']
    assert result.accepted


def test_accepted_without_filter():
    result = parse(EXAMPLE, JOHN_LOVES_FISH, subsumption_filter=False)
    assert result.accepted
    assert result.iterations == 6
    assert result.witness.amrs.project(1) == read_afs(SIG, WITNESS)


@pytest.mark.parametrize('i, text, j, status, by', GOLDEN)
def test_golden_items(i, text, j, status, by):
    result = full(EXAMPLE, JOHN_LOVES_FISH, subsumption_filter=False)
    assert result.fixpoint
    found = result.chart.get(item(i, text, j, status))
    assert found is not None
    assert found.iteration <= by


def test_filter_drops_lifted_subject():
    result = full(EXAMPLE, JOHN_LOVES_FISH)
    (subject,) = result.chart.cell(0, 1, COMP)
    assert subject.amrs == AMRS.from_afs(EXAMPLE.cat('john')[0])
    assert subject.provenance == {'case': 'scan', 'word': 'john'}

    # r2 also completes the r1 prefix over john, giving the nominative lift
    unfiltered = full(EXAMPLE, JOHN_LOVES_FISH, subsumption_filter=False)
    _out = {read_amrs(SIG, JOHN),
            read_amrs(SIG, 'phrase & SYN:n & HEAD:(head & AGR:(agr & PERS:3rd & NUM:sg)) & CASE:case'),
            read_amrs(SIG, 'phrase & SYN:n & HEAD:(head & AGR:(agr & PERS:3rd & NUM:sg)) & CASE:nom')}
    assert {x.amrs for x in unfiltered.chart.cell(0, 1, COMP)} == _out
    assert len(unfiltered.chart.cell(0, 1, COMP)) == 3


@pytest.mark.parametrize('sentence', [
    'loves fish john', 'john loves', 'john fish loves', 'fish', ''])
def test_rejected(sentence):
    result = parse(EXAMPLE, sentence)
    assert result.verdict == REJECTED
    assert result.fixpoint
    assert result.witness is None


def test_empty_sentence():
    result = parse(EXAMPLE, '')
    assert result.iterations == 2
    (prediction,) = result.chart
    assert prediction == Item(0, LAMBDA, 0, ACT)


def test_unknown_word():
    with pytest.raises(UnknownWord):
        parse(EXAMPLE, 'john hates fish')


def test_chart_invariants():
    result = full(EXAMPLE, JOHN_LOVES_FISH, subsumption_filter=False)
    ids = [x.id for x in result.chart]
    assert ids == list(range(1, len(ids) + 1))
    for x in result.chart:
        assert 1 <= x.iteration <= result.iterations
        assert 0 <= x.i <= x.j <= 3
        if x.status == COMP:
            assert len(x.amrs) == 1
        for parent in x.provenance.get('parents', ()):
            assert parent < x.id


def test_reproduced_items_keep_their_number():
    result = full(EXAMPLE, JOHN_LOVES_FISH, subsumption_filter=False)
    scan = result.chart.get(item(0, JOHN, 1, COMP))
    assert (scan.id, scan.iteration) == (2, 1)
    assert len({x.id for x in result.chart}) == len(result.chart)


@pytest.mark.parametrize('subsumption_filter', [True, False])
def test_schedules_agree(subsumption_filter):
    naive = full(EXAMPLE, JOHN_LOVES_FISH, subsumption_filter=subsumption_filter)
    agenda = full(EXAMPLE, JOHN_LOVES_FISH, subsumption_filter=subsumption_filter,
                  schedule='agenda')
    assert agenda.verdict == naive.verdict
    assert agenda.witness == naive.witness
    if not subsumption_filter:
        assert agenda.chart.keys() == naive.chart.keys()
        assert agenda.iterations == naive.iterations


@pytest.mark.parametrize('words', SENTENCES, ids=lambda w: ' '.join(w) or 'empty')
def test_agrees_with_derivations(words):
    expected = derives(EXAMPLE, words)
    assert parse(EXAMPLE, words).accepted == expected
    assert parse(EXAMPLE, words, subsumption_filter=False).accepted == expected


def test_only_weakly_offline_parsable():
    g = load_grammar_file(grammars.path('olp_demo'))
    filtered = parse(g, '')
    assert filtered.verdict == REJECTED
    assert filtered.iterations == 3

    unfiltered = parse(g, '', subsumption_filter=False, max_iterations=20)
    assert unfiltered.verdict == BUDGET_EXHAUSTED
    assert unfiltered.iterations == 20
    assert not unfiltered.fixpoint


def test_acyclicity_guard():
    g = load_grammar_file(grammars.path('cyclic_demo'))
    with pytest.raises(CyclicItemError) as e:
        parse(g, 'a')
    assert e.value.item.amrs.is_cyclic()
    assert e.value.item.iteration == 2
    assert 'reaches itself via F' in str(e.value)


def test_cyclic_items_without_guard():
    g = load_grammar_file(grammars.path('cyclic_demo'))
    result = parse(g, 'a', acyclicity_guard=False)
    assert result.verdict == REJECTED
    assert any(x.amrs.is_cyclic() for x in result.chart)


def test_config_defaults():
    cfg = ComputationConfig()
    assert cfg.subsumption_filter
    assert cfg.acyclicity_guard
    assert cfg.early_exit
    assert cfg.schedule == 'naive'
    assert cfg.sentinel_threshold is None
    with pytest.raises(dataclasses.FrozenInstanceError):
        cfg.max_iterations = 3


@pytest.mark.parametrize('kwargs', [
    {'max_iterations': 0},
    {'schedule': 'eager'},
    {'sentinel_threshold': 0},
])
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        ComputationConfig(**kwargs)


def test_budget_is_respected():
    result = parse(EXAMPLE, JOHN_LOVES_FISH, max_iterations=3)
    assert result.verdict == BUDGET_EXHAUSTED
    assert result.iterations == 3


def test_to_json():
    result = parse(EXAMPLE, JOHN_LOVES_FISH)
    dumped = result.to_json()
    assert dumped['sentence'] == ['john', 'loves', 'fish']
    assert dumped['verdict'] == ACCEPTED
    assert dumped['iterations'] == 6
    assert dumped['witness'] == result.witness.id
    assert dumped['items'][0] == {
        'id': 1, 'i': 0, 'j': 0, 'status': ACT, 'iteration': 1, 'avm': [],
        'provenance': {'case': 'prediction'}}


def test_output_is_deterministic():
    first = full(EXAMPLE, JOHN_LOVES_FISH)
    second = full(EXAMPLE, JOHN_LOVES_FISH)
    assert _compact_json(first.to_json()) == _compact_json(second.to_json())
    assert first.golden() == second.golden()


def test_golden():
    lines = parse(EXAMPLE, JOHN_LOVES_FISH).golden().splitlines()
    assert lines[0] == '(1) [0, <>, 0, ACT]  % I_1, prediction'
    assert lines[1] == '(2) [0, <word & SYN:n & HEAD:(head & AGR:(agr & PERS:3rd & NUM:sg)) ' \
                       '& CASE:case>, 1, COMP]  % I_1, scan john'
    assert lines[-1] == '% accepted after 6 iterations'


def test_trace_logging(caplog):
    with caplog.at_level('DEBUG', logger='tfsparse.parser'):
        parse(EXAMPLE, 'john', trace_level=2)
    assert 'iteration 1:' in caplog.text
    assert 'I_1 + (1) [0, <>, 0, ACT]' in caplog.text


@pytest.mark.asyncio
async def test_parse_many():
    sentences = [JOHN_LOVES_FISH, 'john loves', 'fish loves john']
    results = await parse_many(EXAMPLE, sentences)
    assert [r.verdict for r in results] == [ACCEPTED, REJECTED, ACCEPTED]
    assert [r.words for r in results] == [s.split() for s in sentences]


@pytest.mark.asyncio
async def test_parse_many_shares_config():
    cfg = ComputationConfig(max_iterations=2)
    results = await parse_many(EXAMPLE, [JOHN_LOVES_FISH, ''], cfg)
    assert [r.verdict for r in results] == [BUDGET_EXHAUSTED, REJECTED]


@pytest.mark.asyncio
async def test_parse_many_with_executor():
    with ThreadPoolExecutor(max_workers=2) as pool:
        results = await parse_many(EXAMPLE, ['fish loves fish', 'fish'], executor=pool)
    assert [r.verdict for r in results] == [ACCEPTED, REJECTED]


if __name__ == '__main__':
    pytest.main(['-x', __file__])
