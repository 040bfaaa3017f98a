import numpy as np
import pytest

from spinorlab.chains import (
    ChainEvent,
    PreferenceContext,
    build_context,
    run_chain,
    select_table,
)
from spinorlab.errors import DomainError
from spinorlab.winding import WindingGradient

AB = "(a,b)"
ABDOT = "(ab,·)"
DOTAB = "(·,ab)"
BA = "(b,a)"


def _field(kz, scale=1.0):
    return WindingGradient(k=np.array([0.0, 0.0, kz]), holonomy=kz, scale=scale)


P = np.array([0.0, 0.0, 0.5])


def test_select_table_signs():
    assert select_table(_field(0.01), P) == "prefer_standard"
    assert select_table(_field(-0.01), P) == "prefer_exotic"
    assert select_table(_field(0.0), P) == "z2"
    # orthogonal winding axis is degenerate no matter how strong
    assert select_table(_field(5.0), np.array([1.0, 0.0, 0.0])) == "z2"


def test_select_table_scale_and_tol():
    # the scale knob multiplies the alignment, so scale 0 is degenerate
    assert select_table(_field(0.01, scale=0.0), P) == "z2"
    assert select_table(_field(0.01), P, tol=1.0) == "z2"
    with pytest.raises(DomainError):
        select_table(_field(0.01), P, tol=-1.0)


def test_context_consistency_enforced():
    ctx = build_context(_field(0.01), P)
    assert ctx.active_table == "prefer_standard"
    with pytest.raises(DomainError):
        PreferenceContext(
            field=_field(0.01), momentum=P, tol=ctx.tol, active_table="prefer_exotic"
        )


def test_single_involution_switches_table_and_composes():
    # aligned start, one event that flips the field then composes with (a,b)
    ctx = build_context(_field(0.01), P)
    final, trace = run_chain(AB, [ChainEvent(AB, involute_first=True)], ctx)
    assert final == AB
    assert len(trace) == 1
    assert trace[0].table == "prefer_exotic"
    assert trace[0].state == AB
    assert trace[0].step == 1


def test_double_involution_restores_table():
    ctx = build_context(_field(0.01), P)
    events = [
        ChainEvent(DOTAB, involute_first=True),
        ChainEvent(DOTAB, involute_first=True),
    ]
    final, trace = run_chain(AB, events, ctx)
    assert [entry.table for entry in trace] == ["prefer_exotic", "prefer_standard"]
    # (a,b) hits the prefer_exotic absorber, which is the prefer_standard identity
    assert trace[0].state == DOTAB
    assert final == DOTAB


def test_absorber_sticks_without_involution():
    ctx = build_context(_field(0.01), P)
    events = [ChainEvent(ABDOT), ChainEvent(BA), ChainEvent(DOTAB), ChainEvent(AB)]
    final, trace = run_chain(AB, events, ctx)
    assert all(entry.table == "prefer_standard" for entry in trace)
    assert all(entry.state == ABDOT for entry in trace)
    assert final == ABDOT


def test_state_label_survives_table_toggle():
    # reaching the prefer_standard absorber then flipping the field leaves the
    # label intact, and it acts as the prefer_exotic identity afterwards
    ctx = build_context(_field(0.01), P)
    events = [ChainEvent(ABDOT), ChainEvent(AB, involute_first=True)]
    final, trace = run_chain(AB, events, ctx)
    assert trace[0].state == ABDOT
    assert trace[1].table == "prefer_exotic"
    # under the flipped table the carried label is the identity, so the
    # operand passes through unchanged
    assert final == AB


def test_z2_parity_chain_matches_counting():
    rng = np.random.default_rng(23)
    ctx = build_context(_field(0.0), P)
    labels = ["S", "C", AB, BA]
    for _ in range(40):
        count = int(rng.integers(1, 12))
        picks = [labels[int(rng.integers(0, 4))] for _ in range(count)]
        involutions = [bool(rng.integers(0, 2)) for _ in range(count)]
        events = [
            ChainEvent(pick, involute_first=flip)
            for pick, flip in zip(picks, involutions)
        ]
        start = labels[int(rng.integers(0, 4))]
        final, trace = run_chain(start, events, ctx)
        # independent parity count: C and (b,a) each flip parity
        flips = sum(1 for pick in [start] + picks if pick in ("C", BA)) % 2
        assert final == ("C" if flips else "S")
        # involution never escapes the degenerate context
        assert all(entry.table == "z2" for entry in trace)


def test_z2_rejects_absorber_adjacent_labels():
    ctx = build_context(_field(0.0), P)
    with pytest.raises(DomainError):
        run_chain("S", [ChainEvent(ABDOT)], ctx)
    with pytest.raises(DomainError):
        run_chain("S", [ChainEvent("(.,ab)")], ctx)
    with pytest.raises(DomainError):
        run_chain(DOTAB, [ChainEvent("S")], ctx)


def test_parity_labels_need_degenerate_context():
    ctx = build_context(_field(0.01), P)
    with pytest.raises(DomainError):
        run_chain("S", [ChainEvent(AB)], ctx)
    with pytest.raises(DomainError):
        run_chain(AB, [ChainEvent("C")], ctx)


def test_ascii_operands_accepted():
    ctx = build_context(_field(0.01), P)
    final, _ = run_chain("(ab,.)", [ChainEvent("(.,ab)")], ctx)
    assert final == ABDOT
