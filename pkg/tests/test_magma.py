"""Cell-for-cell checks of the built-in tables plus an independent analyzer.

The expected tables are transcribed here a second time, by hand, so a typo
in the package data cannot silently agree with itself.
"""

import itertools

import pytest

from spinorlab.errors import DomainError
from spinorlab.magma import (
    FiniteMagma,
    analyze,
    builtin,
    compose,
    from_json,
    normalize_label,
    to_json,
)

AB = "(a,b)"
ABDOT = "(ab,·)"
DOTAB = "(·,ab)"
BA = "(b,a)"

EXPECTED_Z2 = {
    ("S", "S"): "S",
    ("S", "C"): "C",
    ("C", "S"): "C",
    ("C", "C"): "S",
}

EXPECTED_PREFER_STANDARD = [
    [AB, ABDOT, AB, BA],
    [ABDOT, ABDOT, ABDOT, ABDOT],
    [AB, ABDOT, DOTAB, BA],
    [ABDOT, ABDOT, BA, AB],
]

EXPECTED_PREFER_EXOTIC = [
    [AB, AB, DOTAB, DOTAB],
    [AB, ABDOT, DOTAB, BA],
    [DOTAB, DOTAB, DOTAB, DOTAB],
    [DOTAB, BA, DOTAB, AB],
]

CARRIER4 = (AB, ABDOT, DOTAB, BA)


def test_z2_every_cell():
    table = builtin("z2")
    assert table.carrier == ("S", "C")
    for (left, right), expected in EXPECTED_Z2.items():
        assert compose(table, left, right) == expected


def _assert_cells(magma, expected):
    assert magma.carrier == CARRIER4
    for i, left in enumerate(CARRIER4):
        for j, right in enumerate(CARRIER4):
            assert compose(magma, left, right) == expected[i][j]


def test_prefer_standard_every_cell():
    _assert_cells(builtin("prefer_standard"), EXPECTED_PREFER_STANDARD)


def test_prefer_exotic_every_cell():
    _assert_cells(builtin("prefer_exotic"), EXPECTED_PREFER_EXOTIC)


def test_builtin_rejects_unknown_name():
    with pytest.raises(DomainError):
        builtin("prefer_nothing")


def _brute_force(magma):
    """Independent re-derivation of every report field by raw enumeration."""
    labels = magma.carrier
    op = {(a, b): compose(magma, a, b) for a in labels for b in labels}
    identities = [
        e for e in labels if all(op[e, x] == x and op[x, e] == x for x in labels)
    ]
    absorbers = [
        z for z in labels if all(op[z, x] == z and op[x, z] == z for x in labels)
    ]
    commut = [
        (a, b)
        for a, b in itertools.combinations(labels, 2)
        if op[a, b] != op[b, a]
    ]
    assoc = [
        (a, b, c)
        for a, b, c in itertools.product(labels, repeat=3)
        if op[op[a, b], c] != op[a, op[b, c]]
    ]
    return identities, absorbers, commut, assoc


@pytest.mark.parametrize("name", ["z2", "prefer_standard", "prefer_exotic"])
def test_analyze_matches_brute_force(name):
    magma = builtin(name)
    report = analyze(magma)
    identities, absorbers, commut, assoc = _brute_force(magma)
    assert list(report.identities) == identities
    assert list(report.absorbers) == absorbers
    assert list(report.commutativity_violations) == commut
    assert report.associativity_violations == len(assoc)
    assert report.associativity_witness == (assoc[0] if assoc else None)


def test_z2_report():
    report = analyze(builtin("z2"))
    assert report.identities == ("S",)
    assert report.absorbers == ()
    assert report.commutativity_violations == ()
    assert report.associativity_violations == 0
    assert report.is_group


def test_prefer_standard_report():
    report = analyze(builtin("prefer_standard"))
    assert report.identities == (DOTAB,)
    assert report.absorbers == (ABDOT,)
    # exactly one commuting failure, surfaced verbatim
    assert report.commutativity_violations == ((AB, BA),)
    assert report.associativity_violations == 3
    assert report.associativity_witness == (BA, AB, BA)
    assert not report.is_group


def test_prefer_exotic_report():
    report = analyze(builtin("prefer_exotic"))
    assert report.identities == (ABDOT,)
    assert report.absorbers == (DOTAB,)
    assert report.commutativity_violations == ()
    assert report.associativity_violations == 2
    assert not report.is_group


def test_mirror_tables_swap_identity_and_absorber():
    standard = analyze(builtin("prefer_standard"))
    exotic = analyze(builtin("prefer_exotic"))
    assert standard.identities == exotic.absorbers
    assert standard.absorbers == exotic.identities


def test_ascii_alias_lookup():
    table = builtin("prefer_standard")
    assert compose(table, "(ab,.)", "(b,a)") == ABDOT
    assert compose(table, "(.,ab)", "(.,ab)") == DOTAB
    assert normalize_label("(ab,.)") == ABDOT
    # labels without 'ab' keep their periods
    assert normalize_label("x.y") == "x.y"


def test_index_prefers_exact_match():
    # a custom carrier spelled with ASCII periods must stay addressable
    magma = FiniteMagma("ascii", ("(ab,.)", "c"), ((0, 1), (1, 0)))
    assert magma.index("(ab,.)") == 0
    with pytest.raises(DomainError):
        magma.index("nope")


def test_json_round_trip():
    for name in ("z2", "prefer_standard", "prefer_exotic"):
        magma = builtin(name)
        again = from_json(to_json(magma))
        assert again.carrier == magma.carrier
        assert again.table == magma.table
        assert again.name == magma.name


def test_from_json_rejects_malformed():
    with pytest.raises(DomainError):
        from_json("not json")
    with pytest.raises(DomainError):
        from_json('{"carrier": ["a"]}')
    with pytest.raises(DomainError):
        from_json('{"carrier": ["a"], "table": [["x"]]}')
    with pytest.raises(DomainError):
        from_json('{"carrier": ["a", "a"], "table": [[0, 0], [0, 0]]}')


def test_table_validation():
    with pytest.raises(DomainError):
        FiniteMagma("bad", ("x", "y"), ((0, 1),))
    with pytest.raises(DomainError):
        FiniteMagma("bad", ("x", "y"), ((0, 5), (1, 0)))
