"""Wreath elements over the cycle domain and the cover-group construction."""

import math
import random
from collections import Counter

import pytest

from arccover.catalog import resolve_group
from arccover.errors import ValidationError
from arccover.perm import Permutation, cycle_class, parse_cycles
from arccover.wreath import (
    K4_POSITIONS,
    CoverJob,
    WreathContext,
    build_cover_group,
    class_assignment,
    k4_tuple_data,
    kernel_witness,
    position_action,
    to_positions,
)


def P(text, degree):
    return parse_cycles(text, degree)


A5 = resolve_group("A5")
X = P("(1,2)(3,4)", 5)
Y = P("(1,2,3,4,5)", 5)


def job(n=4, y=Y, group=A5, x=X, name="A5"):
    return CoverJob(n=n, group=group, x=x, y=y, group_name=name)


def data_for(n=4, y=Y):
    return build_cover_group(job(n=n, y=y))


# ---------------------------------------------------------------------------
# element arithmetic
# ---------------------------------------------------------------------------


def test_comp_map_is_conjugation_indexing():
    ctx = data_for().ctx
    sigma = P("(2,3,4)", 4)
    amap = ctx.comp_map(sigma)
    for i, alpha in enumerate(ctx.cycles):
        assert ctx.cycles[amap[i]] == alpha.conjugate(sigma)


def test_comp_map_composes():
    ctx = data_for().ctx
    rng = random.Random(11)
    tops = [P("(2,3,4)", 4), P("(3,4)", 4), P("(1,2)", 4)]
    for _ in range(50):
        s1, s2 = rng.choice(tops), rng.choice(tops)
        m1, m2, m12 = ctx.comp_map(s1), ctx.comp_map(s2), ctx.comp_map(s1 * s2)
        assert all(m12[i] == m2[m1[i]] for i in range(ctx.k))


def _random_elements(data, rng, count):
    out = []
    w = data.ctx.identity_element()
    for _ in range(count):
        for _ in range(rng.randrange(1, 6)):
            w = w * rng.choice(data.y_gens)
        out.append(w)
    return out


def test_group_laws_random_sample():
    data = data_for()
    rng = random.Random(313)
    elems = _random_elements(data, rng, 60)
    ident = data.ctx.identity_element()
    for _ in range(300):
        a, b, c = rng.choice(elems), rng.choice(elems), rng.choice(elems)
        assert ((a * b) * c).key() == (a * (b * c)).key()
    for w in elems:
        assert (w * w.inverse()).key() == ident.key()
        assert (w.inverse() * w).key() == ident.key()
        assert w.inverse().inverse().key() == w.key()


def test_index_and_object_modes_agree():
    ctx_idx = data_for().ctx
    ctx_obj = WreathContext(4, A5, table=None)
    assert ctx_idx.index_mode and not ctx_obj.index_mode

    def clone(w):
        return ctx_obj.from_assignment(
            [ctx_idx.entry_perm(e) for e in w.f], w.sigma
        )

    rng = random.Random(77)
    elems = _random_elements(data_for(), rng, 20)
    for _ in range(60):
        a, b = rng.choice(elems), rng.choice(elems)
        assert (clone(a) * clone(b)).key() == (a * b).key()
        assert clone(a).inverse().key() == a.inverse().key()


def test_context_size_limit():
    with pytest.raises(ValidationError, match="materialize"):
        WreathContext(9, A5)


def test_embed_top_degree_check():
    ctx = data_for().ctx
    with pytest.raises(ValidationError):
        ctx.embed_top(P("(1,2)", 5))


def test_from_assignment_length_check():
    ctx = data_for().ctx
    with pytest.raises(ValidationError):
        ctx.from_assignment([ctx.identity_entry] * 5)


# ---------------------------------------------------------------------------
# the constructed generators
# ---------------------------------------------------------------------------


def test_assignment_by_class_n4():
    ctx = data_for().ctx
    f = class_assignment(ctx, X, Y)
    ex, ey, eyi = ctx.entry(X), ctx.entry(Y), ctx.entry(Y.inverse())
    by_class = {cycle_class(alpha): f[i] for i, alpha in enumerate(ctx.cycles)}
    assert by_class == {1: ey, 2: ex, 3: eyi}
    assert to_positions([ctx.entry_perm(e) for e in f]) == (
        Y, Y.inverse(), Y, Y.inverse(), X, X,
    )


@pytest.mark.parametrize(
    "n,expected",
    [
        (5, {"y": 6, "y_inv": 6, "x": 12, "id": 0}),
        (6, {"y": 24, "y_inv": 24, "x": 48, "id": 24}),
    ],
)
def test_assignment_entry_counts(n, expected):
    ctx = build_cover_group(job(n=n)).ctx
    f = class_assignment(ctx, X, Y)
    label = {
        ctx.entry(Y): "y",
        ctx.entry(Y.inverse()): "y_inv",
        ctx.entry(X): "x",
        ctx.identity_entry: "id",
    }
    counts = Counter(label[e] for e in f)
    assert {k: counts.get(k, 0) for k in expected} == expected


@pytest.mark.parametrize("n", [4, 5, 6])
def test_twist_identities(n):
    data = data_for(n=n)
    g = data.g
    assert (g * g).is_identity()
    for z in data.l_elements():
        assert (g * z).key() == (z * g).key()
    assert g.order() == 2
    assert len(data.h_elements()) == math.factorial(n - 1)


def test_kernel_witness_entries():
    data = data_for(n=5)
    s = kernel_witness(data)
    ctx = data.ctx
    assert s.sigma.is_identity()
    alpha = P("(1,2,3,4,5)", 5)
    got_front = ctx.entry_perm(s.f[ctx.cycle_index[alpha.key()]])
    got_back = ctx.entry_perm(s.f[ctx.cycle_index[alpha.inverse().key()]])
    assert got_front == Y * Y * X
    assert got_back == Y.inverse() * Y.inverse() * X
    assert got_front.cycle_string() == "(1,4,2,3,5)"
    assert got_back.cycle_string() == "(1,3,2,5,4)"


def test_kernel_witness_interleaved_entry_vanishes_at_n7():
    data = data_for(n=7)
    s = kernel_witness(data)
    ctx = data.ctx
    beta = P("(1,4,2,5,3,6,7)", 7)
    assert s.f[ctx.cycle_index[beta.key()]] == ctx.identity_entry


# ---------------------------------------------------------------------------
# job validation
# ---------------------------------------------------------------------------


def test_job_rejects_even_order_y():
    bad = job(y=P("(1,3)(2,4)", 5))
    assert any("odd prime, got 2" in p for p in bad.problems())


def test_job_rejects_prime_power_order_y():
    from arccover.groups import PermGroup

    a9 = PermGroup.from_cycle_strings(["(1,2,3)", "(1,2,3,4,5,6,7,8,9)"], 9)
    nine_cycle = P("(1,2,3,4,5,6,7,8,9)", 9)
    bad = CoverJob(n=4, group=a9, x=P("(1,2)(3,4)", 9), y=nine_cycle, group_name="A9")
    assert any("odd prime, got 9" in p for p in bad.problems())


def test_job_rejects_non_involution_x():
    bad = job(x=P("(1,2,3)", 5))
    assert any("|x| must be 2" in p for p in bad.problems())


def test_job_rejects_proper_subgroup():
    bad = job(x=P("(1,2)(3,4)", 5), y=P("(1,2,3)", 5))
    probs = bad.problems()
    assert any("proper subgroup" in p for p in probs)


def test_job_rejects_small_n():
    bad = job(n=3)
    assert any("n must be at least 4" in p for p in bad.problems())


def test_job_validate_raises():
    with pytest.raises(ValidationError):
        job(n=3).validate()


# ---------------------------------------------------------------------------
# the n = 4 positional conventions
# ---------------------------------------------------------------------------


def test_position_actions_match_frozen_oracles():
    assert position_action(P("(2,3,4)", 4)) == P("(1,4,6)(2,3,5)", 6)
    assert position_action(P("(3,4)", 4)) == P("(1,3)(2,4)(5,6)", 6)
    assert position_action(P("(1,2)", 4)) == P("(1,4)(2,3)(5,6)", 6)


def test_position_action_is_a_homomorphism():
    rng = random.Random(4)
    tops = [P("(2,3,4)", 4), P("(3,4)", 4), P("(1,2)", 4), P("(1,2,3,4)", 4)]
    for _ in range(40):
        a, b = rng.choice(tops), rng.choice(tops)
        assert position_action(a * b) == position_action(a) * position_action(b)


def test_k4_tuples_match_word_literals():
    data = data_for()
    tuples = k4_tuple_data(data)
    y, x, yi = Y, X, Y.inverse()
    expected = {
        "t1": (y*x*y, yi*x*yi, y*y*x, yi*yi*x, x*y*y, x*yi*yi),
        "t2": (y*y*x, yi*yi*x, y*x*y, yi*x*yi, x*yi*yi, x*y*y),
        "t3": (x*y*y, x*yi*yi, yi*yi*x, y*y*x, y*x*y, yi*x*yi),
    }
    got1, got2, got3 = tuples.tuples_in_positions()
    assert got1 == expected["t1"]
    assert got2 == expected["t2"]
    assert got3 == expected["t3"]
    assert got1[0].cycle_string() == "(1,2,5,3,4)"  # y*x*y


def test_k4_tuple_involutions_square_to_identity():
    tuples = k4_tuple_data(data_for())
    for s in (tuples.s1, tuples.s2, tuples.s3):
        assert (s * s).is_identity()


def test_k4_positions_are_the_six_cycles():
    ctx = data_for().ctx
    keys = {P(text, 4).key() for text in K4_POSITIONS}
    assert keys == {alpha.key() for alpha in ctx.cycles}


def test_tuple_data_requires_n4():
    with pytest.raises(ValidationError):
        k4_tuple_data(data_for(n=5))
