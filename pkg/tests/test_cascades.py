import pytest

from scripts.cascades import (
    Fixed,
    Mix,
    StepKind,
    cascade_result_levels,
    cascade_transform,
    classify_form,
    is_seed,
    mcs,
    odd_cycle,
    pmcs,
    run_cascade,
    seeds,
    symbolic_cascade_transform,
    transform_base_pattern,
)
from scripts.core_sequence import CollatzDomainError, NotFoundWithinLimit
from scripts.forms import SymbolicForm, decompose, expand_dotted, find_pattern_shift, form_pattern


# ── forward cascades ─────────────────────────────────────────────────


def test_cascade_of_27():
    trace = run_cascade(27)
    assert trace.values == [27, 82, 41, 124, 62, 31]
    assert trace.result == 31
    assert trace.peak == 124
    assert [s.kind for s in trace.steps] == [StepKind.ODD, StepKind.EVEN] * 2 + [StepKind.EVEN]


def test_cascade_of_even_number_is_one_halving():
    trace = run_cascade(82)
    assert trace.values == [82, 41]
    assert trace.result == 41


def test_odd_cycle():
    assert odd_cycle(27) == 41
    assert odd_cycle(41) == 62
    with pytest.raises(CollatzDomainError):
        odd_cycle(4)


def test_transform_matches_simulation():
    for p in range(2, 13):
        for n in range(0, 1001):
            c = (1 << p) * n + (1 << (p - 1)) - 1
            trace = run_cascade(c)
            assert trace.result == cascade_transform(p, n)
            assert len(trace.steps) == 2 * p - 1
            assert trace.peak == 4 * trace.result


@pytest.mark.parametrize(
    "p, k, f", [(1, 1, 0), (2, 3, 1), (3, 9, 4), (4, 27, 13), (5, 81, 40), (6, 243, 121), (7, 729, 364)]
)
def test_cascade_transform_closed_form(p, k, f):
    assert cascade_transform(p, 0) == f
    assert cascade_transform(p, 1) - cascade_transform(p, 0) == k


def test_cascade_transform_domain():
    with pytest.raises(CollatzDomainError):
        cascade_transform(0, 1)


def test_eight_transform_base_pattern():
    assert transform_base_pattern(3, 18) == [2, 4, 2, 64, 2, 4, 2, 8, 2, 4, 2, 16, 2, 4, 2, 8, 2, 4]


def test_nine_n_plus_4_pattern_matches_itself_and_the_naturals():
    pattern = transform_base_pattern(3, 64)
    assert find_pattern_shift(pattern, pattern, 32) == 0
    # n = 0..17 line up with the standard bases of 28..45
    assert find_pattern_shift(pattern, form_pattern(1, 200), 18) == 27


def test_odd_cycle_form_rule():
    for c in range(1, 20_001, 2):
        d = decompose(c)
        e = decompose(odd_cycle(c))
        assert (e.p, e.n) == (d.p - 1, 3 * d.n + 1)
    assert odd_cycle(87) == 131
    assert odd_cycle(3) == 5


@pytest.mark.parametrize("p", range(2, 10))
def test_cascade_parity_rule(p):
    for n in range(201):
        trace = run_cascade((1 << p) * n + (1 << (p - 1)) - 1)
        kinds = [s.kind for s in trace.steps]
        assert kinds == [StepKind.ODD, StepKind.EVEN] * (p - 1) + [StepKind.EVEN]
        assert all(s.value % 2 == 0 for s in trace.steps[:-1:2])
        # each odd cycle ends odd except the last, which leaves a 2-form
        assert [s.value & 1 for s in trace.steps[1::2]] == [1] * (p - 2) + [0]


# ── composite-form classification ────────────────────────────────────


@pytest.mark.parametrize(
    "form, expected",
    [
        (SymbolicForm(12, 4), Fixed(2)),
        (SymbolicForm(3, 1), Mix(2)),
        (SymbolicForm(6, 1), Mix(4)),
        (SymbolicForm(12, 5), Fixed(4)),
        (SymbolicForm(48, 23), Fixed(16)),
        (SymbolicForm(128, 15), Fixed(32)),
    ],
)
def test_classify_form(form, expected):
    assert classify_form(form) == expected


def test_classification_agrees_with_members():
    from scripts.forms import standard_base

    for k in (2, 4, 6, 8, 12, 16, 24, 81, 162):
        for f in range(k):
            cls = classify_form(SymbolicForm(k, f))
            bases = {standard_base(k * n + f) for n in range(1, 200)}
            if isinstance(cls, Fixed):
                assert bases == {cls.base}
            else:
                assert len(bases) > 1
                assert min(bases) == cls.min_base


@pytest.mark.parametrize(
    "components, result",
    [
        ([4], SymbolicForm(3, 1)),
        ([4, 4], SymbolicForm(12, 4)),
        ([4, 8], SymbolicForm(24, 10)),
        ([8, 2], SymbolicForm(18, 4)),
        ([4, 2], SymbolicForm(6, 1)),
    ],
)
def test_symbolic_cascade_transform(components, result):
    s = expand_dotted(components)
    assert symbolic_cascade_transform(s) == result
    for n in range(20):
        assert run_cascade(s.at(n)).result == result.at(n)


def test_symbolic_cascade_transform_needs_common_cascade():
    with pytest.raises(CollatzDomainError):
        symbolic_cascade_transform(SymbolicForm(2, 1))
    with pytest.raises(CollatzDomainError):
        symbolic_cascade_transform(SymbolicForm(2, 0))


LEVEL1 = """
4 Mix 2 2 2 2 2 2 4+
8 2 4 Mix 8 8 8 8 16+
16 Mix 2 2 2 2 2 2 4+
32 2 4 8 Mix 16 16 16 32+
64 Mix 2 2 2 2 2 2 4+
128 2 4 Mix 8 8 8 8 16+
256 Mix 2 2 2 2 2 2 4+
512 2 4 8 16 Mix 32 32 64+
1024 Mix 2 2 2 2 2 2 4+
2048 2 4 Mix 8 8 8 8 16+
4096 Mix 2 2 2 2 2 2 4+
8192 2 4 8 Mix 16 16 16 32+
16384 Mix 2 2 2 2 2 2 4+
32768 2 4 Mix 8 8 8 8 16+
65536 Mix 2 2 2 2 2 2 4+
131072 2 4 8 16 32 Mix 64 128+
262144 Mix 2 2 2 2 2 2 4+
524288 2 4 Mix 8 8 8 8 16+
1048576 Mix 2 2 2 2 2 2 4+
2097152 2 4 8 Mix 16 16 16 32+
"""

LEVEL2 = """
4.2 4 Mix 8 8 8 8 8 16+
8.8 Mix 16 16 16 16 16 16 32+
16.2 4 8 Mix 16 16 16 16 32+
32.16 Mix 32 32 32 32 32 32 64+
64.2 4 Mix 8 8 8 8 8 16+
128.8 16 Mix 32 32 32 32 32 64+
256.2 4 8 16 Mix 32 32 32 64+
512.32 Mix 64 64 64 64 64 64 128+
1024.2 4 Mix 8 8 8 8 8 16+
2048.8 Mix 16 16 16 16 16 16 32+
4096.2 4 8 Mix 16 16 16 16 32+
8192.16 32 64 128 Mix 256 256 256 512+
16384.2 4 Mix 8 8 8 8 8 16+
32768.8 16 32 Mix 64 64 64 64 128+
65536.2 4 8 16 32 Mix 64 64 128+
131072.64 Mix 128 128 128 128 128 128 256+
262144.2 4 Mix 8 8 8 8 8 16+
524288.8 Mix 16 16 16 16 16 16 32+
1048576.2 4 8 Mix 16 16 16 16 32+
2097152.16 Mix 32 32 32 32 32 32 64+
"""

LEVEL3 = """
4.2.4 16 Mix 32 32 32 32 32 64+
8.8.2 Mix 32 32 32 32 32 32 64+
16.2.8 32 64 128 256 Mix 512 512 1024+
32.16.2 64 Mix 128 128 128 128 128 256+
64.2.4 Mix 16 16 16 16 16 16 32+
128.8.4 Mix 64 64 64 64 64 64 128+
256.2.16 64 128 Mix 256 256 256 256 512+
512.32.2 128 256 Mix 512 512 512 512 1024+
1024.2.4 16 32 Mix 64 64 64 64 128+
2048.8.2 32 64 Mix 128 128 128 128 256+
4096.2.8 Mix 32 32 32 32 32 32 64+
8192.16.16 512 Mix 1024 1024 1024 1024 1024 2048+
16384.2.4 Mix 16 16 16 16 16 16 32+
32768.8.8 Mix 128 128 128 128 128 128 256+
65536.2.32 128 256 Mix 512 512 512 512 1024+
131072.64.2 256 512 1024 Mix 2048 2048 2048 4096+
262144.2.4 16 Mix 32 32 32 32 32 64+
524288.8.2 Mix 32 32 32 32 32 32 64+
1048576.2.8 32 Mix 64 64 64 64 64 128+
2097152.16.2 Mix 64 64 64 64 64 64 128+
"""


@pytest.fixture(scope="module")
def levels():
    return cascade_result_levels(levels=3)


@pytest.mark.parametrize("level, printed", [(1, LEVEL1), (2, LEVEL2), (3, LEVEL3)])
def test_cascade_result_levels(levels, level, printed):
    expected = [line.split() for line in printed.strip().splitlines()]
    got = [
        [row.label, *(str(e) for e in row.entries), f"{row.mix_min_base}+"]
        for row in levels[level - 1]
    ]
    assert got == expected


# ── reverse cascades ─────────────────────────────────────────────────


def test_ladder_of_31():
    ladder = mcs(31)
    assert [r.value for r in ladder.rungs] == [62, 41, 27]
    assert ladder.mcs == 27
    assert ladder.mcs_form.notation() == "8(3)+3"


MCS_TABLE = {
    28: (37, 4), 29: (58, 2), 30: (60, 2), 31: (27, 8), 32: (64, 2), 33: (66, 2),
    34: (45, 4), 35: (70, 2), 36: (72, 2), 37: (49, 4), 38: (76, 2), 39: (78, 2),
    40: (15, 32), 41: (82, 2), 42: (84, 2), 43: (57, 4),
}


@pytest.mark.parametrize("v", sorted(MCS_TABLE))
def test_mcs_values(v):
    ladder = mcs(v)
    assert (ladder.mcs, ladder.mcs_form.base) == MCS_TABLE[v]
    # no higher cascade start exists
    assert ladder.mcs_form.n % 3 != 1


def test_every_ladder_rung_cascades_back_to_its_target():
    for v in range(1, 3_001):
        ladder = mcs(v)
        for rung in ladder.rungs:
            assert run_cascade(rung.value).result == v, (v, rung)
        assert ladder.mcs_form.n % 3 != 1


PMCS_TABLE = {
    28: 57, 29: 51, 31: 27, 32: 75, 34: 45, 35: 93, 37: 57, 38: 39, 40: 15, 41: 171, 43: 57,
}


@pytest.mark.parametrize("v", sorted(PMCS_TABLE))
def test_pmcs_values(v):
    assert pmcs(v).value == PMCS_TABLE[v]


def test_pmcs_chain_of_28():
    assert pmcs(28).chain == (28, 37, 49, 43, 57)


@pytest.mark.parametrize("v", [30, 33, 36, 39, 42])
def test_pmcs_rejects_multiples_of_three(v):
    with pytest.raises(CollatzDomainError):
        pmcs(v)


def test_pmcs_of_one_is_rejected():
    assert mcs(1).mcs == 1
    with pytest.raises(CollatzDomainError) as err:
        pmcs(1)
    assert "trivial cycle" in str(err.value)


def test_pmcs_limit():
    r = pmcs(28, max_iter=2)
    assert r == NotFoundWithinLimit(start=28, limit=2, last_value=49)


@pytest.mark.slow
def test_pmcs_terminates_below_1e5():
    for v in range(2, 100_001):
        if v % 3 == 0:
            continue
        r = pmcs(v)
        assert not isinstance(r, NotFoundWithinLimit), v
        assert r.value % 6 == 3


# ── seeds ────────────────────────────────────────────────────────────


def test_first_seeds():
    assert seeds(5) == [1, 5, 21, 85, 341]


def test_seed_identity():
    for i, k in enumerate(seeds(50), start=1):
        assert 3 * k + 1 == 4**i
        assert is_seed(k)


def test_is_seed():
    assert [c for c in range(1, 400) if is_seed(c)] == [1, 5, 21, 85, 341]
