import json
import pytest
from tfsparse import __version__
from tfsparse.cli import main

ACCEPTED_WITNESS = ('phrase & SYN:s & SUBJ:(head & AGR:#1(agr & PERS:3rd & NUM:sg)) '
                    '& HEAD:(head & AGR:#1)')


@pytest.fixture
def broken(tmp_path):
    path = tmp_path / 'broken.gr'
    path.write_text('signature\nbot sub [a].\nstart c.\n', encoding='utf-8')
    return str(path)


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_version(capsys):
    with pytest.raises(SystemExit) as e:
        main(['--version'])
    assert e.value.code == 0
    assert capsys.readouterr().out.strip() == f'tfsparse {__version__}'


def test_command_required(capsys):
    with pytest.raises(SystemExit) as e:
        main([])
    assert e.value.code == 2


def test_check(capsys):
    code, out, _ = run_cli(capsys, 'check', 'example')
    assert code == 0
    assert out == '3 rules, 3 lexical entries, signature OK\n'


def test_check_lints(capsys):
    code, out, _ = run_cli(capsys, 'check', 'olp_demo')
    assert code == 0
    assert out.splitlines()[1] == "lint: rule 'seed' has the category of 'a' as its head"


def test_check_broken(capsys, broken):
    code, out, err = run_cli(capsys, 'check', broken)
    assert code == 1
    assert out == ''
    assert err.startswith('error: ')
    assert "Unknown type 'c'" in err


def test_check_missing(capsys):
    code, _, err = run_cli(capsys, 'check', 'no_such_grammar')
    assert code == 1
    assert 'no_such_grammar' in err


def test_parse_accepted(capsys):
    code, out, _ = run_cli(capsys, 'parse', 'example', 'john loves fish', '--witness')
    assert code == 0
    assert out.splitlines() == ['accepted after 6 iterations', ACCEPTED_WITNESS]


@pytest.mark.parametrize('flags', [[], ['--no-filter'], ['--schedule', 'agenda']])
def test_parse_flags_agree(capsys, flags):
    code, out, _ = run_cli(capsys, 'parse', 'example', 'fish loves john', *flags)
    assert code == 0
    assert out.startswith('accepted after ')


def test_parse_rejected(capsys):
    code, out, _ = run_cli(capsys, 'parse', 'example', 'john loves')
    assert code == 1
    assert out.startswith('rejected after ')


def test_parse_budget_exhausted(capsys):
    code, out, _ = run_cli(capsys, 'parse', 'olp_demo', '', '--no-filter', '--max-iterations', '50')
    assert code == 2
    assert out == 'budget-exhausted after 50 iterations\n'


def test_parse_filtered_terminates(capsys):
    code, out, _ = run_cli(capsys, 'parse', 'olp_demo', '')
    assert code == 1
    assert out == 'rejected after 3 iterations\n'


def test_parse_unknown_word(capsys):
    code, out, err = run_cli(capsys, 'parse', 'example', 'john hates fish')
    assert code == 3
    assert out == ''
    assert err == "error: Word not in lexicon: 'hates'\n"


def test_parse_broken_grammar(capsys, broken):
    code, _, _ = run_cli(capsys, 'parse', broken, 'x')
    assert code == 3


def test_parse_cyclic(capsys):
    code, _, err = run_cli(capsys, 'parse', 'cyclic_demo', 'a')
    assert code == 4
    assert 'Cyclic structure' in err

    code, out, _ = run_cli(capsys, 'parse', 'cyclic_demo', 'a', '--no-guard-acyclic')
    assert code == 1
    assert out.startswith('rejected')


def test_parse_sentinel(capsys, tmp_path):
    path = tmp_path / 'ambiguous.gr'
    path.write_text('signature\nbot sub [a, b, c, s].\nstart s.\nlexicon\n'
                    'x -> a.\nx -> b.\nx -> c.\n', encoding='utf-8')
    with pytest.warns(RuntimeWarning):
        code, _, err = run_cli(capsys, 'parse', str(path), 'x', '--sentinel-threshold', '2')
    assert code == 1
    assert 'sentinel: cell [0, 1, \'COMP\'] holds 3 incomparable items' in err


@pytest.mark.parametrize('value', ['0', '-3', 'many'])
def test_bad_max_iterations(capsys, value):
    with pytest.raises(SystemExit) as e:
        main(['parse', 'example', 'john', '--max-iterations', value])
    assert e.value.code == 2


def test_chart_json(capsys):
    code, out, _ = run_cli(capsys, 'chart', 'example', 'john loves fish')
    assert code == 0
    dumped = json.loads(out)
    assert dumped['sentence'] == ['john', 'loves', 'fish']
    assert dumped['verdict'] == 'accepted'
    assert dumped['iterations'] > 6
    ids = {x['id'] for x in dumped['items']}
    assert dumped['witness'] in ids


def test_chart_golden(capsys):
    code, out, _ = run_cli(capsys, 'chart', 'example', '', '--golden')
    assert code == 1
    assert out.splitlines() == ['(1) [0, <>, 0, ACT]  % I_1, prediction',
                                '% rejected after 2 iterations']


def test_derive(capsys):
    code, out, _ = run_cli(capsys, 'derive', 'example', 'john loves fish')
    assert code == 0
    assert out.splitlines()[:3] == ['0. start', '1. r1 at 1', '2. r3 at 2']
    assert out.splitlines()[-1] == '    fish [2..3]'


def test_derive_json(capsys):
    code, out, _ = run_cli(capsys, 'derive', 'example', 'john loves fish', '--json')
    assert code == 0
    dumped = json.loads(out)
    assert [s['rule'] for s in dumped['steps']] == [None, 'r1', 'r3']


def test_derive_none(capsys):
    code, out, _ = run_cli(capsys, 'derive', 'example', 'john loves')
    assert code == 1
    assert out == 'none found\n'


def test_derive_budget(capsys):
    code, out, _ = run_cli(capsys, 'derive', 'example', 'john loves fish', '--max-steps', '0')
    assert code == 2
    assert out == 'none found (step budget 0 exhausted)\n'


def test_derive_unknown_word(capsys):
    code, _, err = run_cli(capsys, 'derive', 'example', 'mary')
    assert code == 3
    assert 'mary' in err


if __name__ == '__main__':
    pytest.main(['-x', __file__])
