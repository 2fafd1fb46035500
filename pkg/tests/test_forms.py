import pytest

from scripts.core_sequence import CollatzDomainError
from scripts.forms import (
    FormDescriptor,
    FormKind,
    SymbolicForm,
    decompose,
    decompose_symbolic,
    dotted_label,
    expand_dotted,
    find_pattern_shift,
    form_pattern,
    is_power_of_two,
    parse_dotted,
    reconstruct,
    standard_base,
    symbolic_notation,
    two_adic_valuation,
)


@pytest.mark.parametrize("x, v", [(1, 0), (2, 1), (12, 2), (96, 5), (2**100, 100)])
def test_two_adic_valuation(x, v):
    assert two_adic_valuation(x) == v


def test_two_adic_valuation_rejects_zero():
    with pytest.raises(CollatzDomainError):
        two_adic_valuation(0)


def test_is_power_of_two():
    assert [x for x in range(1, 70) if is_power_of_two(x)] == [1, 2, 4, 8, 16, 32, 64]
    assert not is_power_of_two(0)


@pytest.mark.parametrize(
    "c, p, n, notation",
    [
        (1, 2, 0, "4(0)+1"),
        (27, 3, 3, "8(3)+3"),
        (31, 6, 0, "64(0)+31"),
        (41, 2, 10, "4(10)+1"),
        (82, 1, 41, "2(41)"),
        (15, 5, 0, "32(0)+15"),
    ],
)
def test_decompose(c, p, n, notation):
    d = decompose(c)
    assert (d.p, d.n) == (p, n)
    assert d.kind is FormKind.STANDARD
    assert d.notation() == notation
    assert reconstruct(d) == c


def test_decompose_rejects_zero():
    with pytest.raises(CollatzDomainError):
        decompose(0)


def test_decompose_big_value():
    c = 10**142 - 10**6 + 1
    assert reconstruct(decompose(c)) == c


def test_nonstandard_form():
    # 4n+3 splits into 8n+3 (standard) and 8n+7 (non-standard)
    d = FormDescriptor(p=3, n=0, kind=FormKind.NONSTANDARD)
    assert d.offset == 7
    assert FormDescriptor(p=2, n=1, kind=FormKind.NONSTANDARD).value == 7


def test_descriptor_validation():
    with pytest.raises(CollatzDomainError):
        FormDescriptor(p=0, n=1)
    with pytest.raises(CollatzDomainError):
        FormDescriptor(p=2, n=-1)


def test_form_pattern():
    assert form_pattern(1, 8) == [4, 2, 8, 2, 4, 2, 16, 2]
    assert form_pattern(1, 15) == [4, 2, 8, 2, 4, 2, 16, 2, 4, 2, 8, 2, 4, 2, 32]
    assert standard_base(31) == 64


def test_symbolic_form_str_and_members():
    assert str(SymbolicForm(16, 3)) == "16n+3"
    assert str(SymbolicForm(2, 0)) == "2n"
    assert str(SymbolicForm(1, 0)) == "n"
    assert SymbolicForm(16, 3).at(2) == 35
    assert SymbolicForm(16, 3).is_composite
    assert not SymbolicForm(9, 4).is_composite


@pytest.mark.parametrize(
    "k, f, notation",
    [
        (64, 31, "64n+31"),
        (96, 47, "32(3n+1)+15"),
        (324, 161, "4(81n+40)+1"),
        (486, 242, "2(243n+121)"),
        (12, 4, "2(6n+2)"),
    ],
)
def test_decompose_symbolic(k, f, notation):
    s = SymbolicForm(k, f)
    p, m = decompose_symbolic(s)
    assert symbolic_notation(p, m) == notation
    for n in range(100):
        d = decompose(s.at(n))
        assert (d.p, d.n) == (p, m.at(n))


@pytest.mark.parametrize("k, f", [(243, 121), (4, 3), (6, 1), (1, 0)])
def test_decompose_symbolic_without_common_form(k, f):
    assert decompose_symbolic(SymbolicForm(k, f)) is None


@pytest.mark.parametrize("k, f", [(4, 4), (4, -1), (0, 0)])
def test_symbolic_form_rejects_bad_offsets(k, f):
    with pytest.raises(CollatzDomainError):
        SymbolicForm(k, f)


def test_parse_dotted():
    assert parse_dotted("16.4.8") == [16, 4, 8]
    assert parse_dotted(" 8 ") == [8]
    for bad in ("16.x", "", "4..2", "-4"):
        with pytest.raises(CollatzDomainError):
            parse_dotted(bad)


@pytest.mark.parametrize(
    "components, k, f",
    [
        ([8, 2], 16, 3),
        ([16, 4, 8], 512, 215),
        ([4, 4], 16, 5),
        ([4, 8], 32, 13),
        ([2], 2, 0),
    ],
)
def test_expand_dotted(components, k, f):
    assert expand_dotted(components) == SymbolicForm(k, f)


def test_expand_dotted_rejects_non_powers():
    with pytest.raises(CollatzDomainError):
        expand_dotted([8, 3])
    with pytest.raises(CollatzDomainError):
        expand_dotted([1])
    with pytest.raises(CollatzDomainError):
        expand_dotted([])


def test_dotted_label():
    assert dotted_label([16, 4, 8]) == "16.4.8"


def test_find_pattern_shift():
    assert find_pattern_shift([2, 4], [4, 2, 4], 2) == 1
    assert find_pattern_shift([64], [2, 4, 2], 1) is None
    with pytest.raises(CollatzDomainError):
        find_pattern_shift([2], [2, 4], 3)


@pytest.mark.slow
def test_decompose_roundtrip_first_million():
    seen = set()
    for c in range(1, 1_000_001):
        d = decompose(c)
        assert d.value == c
        assert d.offset == (1 << (d.p - 1)) - 1
        seen.add((d.p, d.n))
    assert len(seen) == 1_000_000
