import pytest

from _oracles import conjugation_sweep
from abcgroups.conjugacy import (
    DEFAULT_ORBIT_BOUND,
    UnionFind,
    are_conjugate,
    brute_force_partition,
    conjugacy_key,
    matrix_quotient,
)
from abcgroups.enumeration import enumerate_ball
from abcgroups.groups import (
    Element,
    make_bs,
    make_lamplighter,
    make_matrix_context,
)

HYP = ((2, 1), (1, 1))


def as_block_set(ctx, blocks):
    return {frozenset(ctx.encode(g) for g in block) for block in blocks}


def key_partition(ctx, index, r):
    classes = {}
    for g in index.elements(r):
        classes.setdefault(conjugacy_key(ctx, g), []).append(g)
    return classes


# ---------------------------------------------------------------------------
# Key examples per family
# ---------------------------------------------------------------------------


def test_bs_positive_stratum():
    ctx = make_bs(2)
    # conjugation multiplies the kernel entry by powers of 2 mod 2^2 - 1
    assert are_conjugate(ctx, Element((1, 0), 2), Element((2, 0), 2))
    assert not are_conjugate(ctx, Element((1, 0), 2), Element((3, 0), 2))
    assert are_conjugate(ctx, Element((3, 0), 2), Element((0, 0), 2))
    # every (a, t) is conjugate into (0, t)
    assert are_conjugate(ctx, Element((5, 2), 1), Element((0, 0), 1))
    # negative strata behave symmetrically
    assert are_conjugate(ctx, Element((1, 0), -2), Element((2, 0), -2))
    assert not are_conjugate(ctx, Element((1, 0), -2), Element((3, 0), -2))


def test_bs_zero_stratum():
    ctx = make_bs(2)
    # t-conjugation scales by 2, so the odd part is the invariant
    assert are_conjugate(ctx, Element((1, 0), 0), Element((2, 0), 0))
    assert are_conjugate(ctx, Element((3, 2), 0), Element((12, 0), 0))
    assert not are_conjugate(ctx, Element((1, 0), 0), Element((-1, 0), 0))
    assert not are_conjugate(ctx, Element((1, 0), 0), Element((3, 0), 0))
    assert not are_conjugate(ctx, Element((1, 0), 0), Element((0, 0), 0))


def test_texp_is_invariant():
    ctx = make_bs(2)
    assert not are_conjugate(ctx, Element((0, 0), 1), Element((0, 0), -1))
    assert not are_conjugate(ctx, Element((1, 0), 0), Element((1, 0), 2))


def test_lamplighter_positive_stratum():
    ctx = make_lamplighter(2)
    a = Element(((0, 1), (3, 1)), 2)
    b = Element(((1, 1), (2, 1)), 2)
    assert are_conjugate(ctx, a, b)
    # a lone lamp cannot reach an even split across both residues
    assert not are_conjugate(ctx, Element(((0, 1), (1, 1)), 2), Element(((0, 1),), 2))


def test_lamplighter_zero_stratum():
    ctx = make_lamplighter(2)
    assert are_conjugate(ctx, Element(((0, 1),), 0), Element(((5, 1),), 0))
    assert are_conjugate(
        ctx, Element(((0, 1), (1, 1)), 0), Element(((3, 1), (4, 1)), 0)
    )
    assert not are_conjugate(
        ctx, Element(((0, 1), (1, 1)), 0), Element(((0, 1), (2, 1)), 0)
    )


def test_matrix_stratum_one_collapses():
    # |det(I - M)| = 1, so the t-exponent 1 stratum is a single class
    ctx = make_matrix_context(HYP)
    index = enumerate_ball(ctx, 4)
    keys = {conjugacy_key(ctx, g) for g in index.elements() if g.texp == 1}
    assert len(keys) == 1


def test_matrix_zero_stratum():
    ctx = make_matrix_context(HYP)
    e1 = Element((1, 0), 0)
    assert are_conjugate(ctx, e1, Element((2, 1), 0))
    assert are_conjugate(ctx, e1, Element((1, -1), 0))
    assert not are_conjugate(ctx, e1, Element((0, 1), 0))
    assert not are_conjugate(ctx, e1, Element((-1, 0), 0))


def test_unit_root_refusal():
    parabolic = make_matrix_context(((1, 1), (0, 1)))
    with pytest.raises(ValueError, match="root"):
        conjugacy_key(parabolic, Element((1, 0), 1))
    rotation = make_matrix_context(((0, -1), (1, 0)))
    with pytest.raises(ValueError):
        are_conjugate(rotation, Element((1, 0), 0), Element((0, 1), 0))
    # enumeration does not involve class keys and still works
    assert enumerate_ball(parabolic, 3).ball_size() > 1


# ---------------------------------------------------------------------------
# Quotient bookkeeping
# ---------------------------------------------------------------------------


def test_quotient_descriptor_round_trip():
    ctx = make_matrix_context(HYP)
    qd = matrix_quotient(ctx, 2)
    # |det(I - M^2)| = 5
    assert qd.order == 5
    seen = set()
    for residue in range(5):
        coords = (0, residue) if qd.diag == (1, 5) else (residue, 0)
        rep = qd.representative(coords)
        assert qd.coords(rep) == coords
        seen.add(qd.coords(rep))
    assert len(seen) == 5


def test_quotient_coords_well_defined():
    ctx = make_matrix_context(HYP)
    qd = matrix_quotient(ctx, 2)
    shift = tuple(
        a - b for a, b in zip((7, -3), ctx.phi_power((7, -3), 2))
    )
    for v in ((0, 0), (1, 0), (-4, 9), (12, 5)):
        moved = tuple(x + y for x, y in zip(v, shift))
        assert qd.coords(v) == qd.coords(moved)


def test_matrix_quotient_is_cached():
    ctx = make_matrix_context(HYP)
    assert matrix_quotient(ctx, 3) is matrix_quotient(ctx, 3)


# ---------------------------------------------------------------------------
# Union-find
# ---------------------------------------------------------------------------


def test_union_find():
    uf = UnionFind(range(6))
    uf.union(0, 1)
    uf.union(2, 3)
    uf.union(1, 2)
    assert uf.same(0, 3)
    assert not uf.same(0, 4)
    blocks = {frozenset(b) for b in uf.blocks()}
    assert blocks == {frozenset({0, 1, 2, 3}), frozenset({4}), frozenset({5})}


# ---------------------------------------------------------------------------
# Brute-force partition against the key partition and the raw sweep
# ---------------------------------------------------------------------------

AGREEMENT_CASES = [
    ("bs", 2, 3, 6, 13),
    ("bs", 2, 4, 8, 19),
    ("bs", 3, 3, 6, 17),
    ("lamplighter", 2, 4, 8, 19),
    ("lamplighter", 3, 3, 6, 17),
]


def build(family, param):
    if family == "bs":
        return make_bs(param)
    if family == "lamplighter":
        return make_lamplighter(param)
    return make_matrix_context(param)


@pytest.mark.parametrize("family,param,r,rc,expected", AGREEMENT_CASES)
def test_partition_matches_keys(family, param, r, rc, expected):
    ctx = build(family, param)
    index = enumerate_ball(ctx, rc)
    blocks = brute_force_partition(ctx, index, r, rc)
    classes = key_partition(ctx, index, r)
    assert len(blocks) == len(classes) == expected
    assert as_block_set(ctx, blocks) == as_block_set(ctx, classes.values())


def test_matrix_partition_matches_keys():
    ctx = make_matrix_context(HYP)
    index = enumerate_ball(ctx, 6)
    blocks = brute_force_partition(ctx, index, 3, 6)
    classes = key_partition(ctx, index, 3)
    assert len(blocks) == len(classes) == 27
    assert as_block_set(ctx, blocks) == as_block_set(ctx, classes.values())


def test_partition_matches_elementwise_sweep():
    # the solver-based merge must compute the same closure as literally
    # conjugating by every element of the conjugator ball
    for ctx, r, rc in (
        (make_bs(2), 3, 5),
        (make_lamplighter(2), 3, 5),
        (make_matrix_context(HYP), 2, 4),
    ):
        index = enumerate_ball(ctx, rc)
        fast = as_block_set(ctx, brute_force_partition(ctx, index, r, rc))
        slow = conjugation_sweep(
            ctx, list(index.elements(r)), list(index.elements(rc))
        )
        assert fast == slow


def test_partition_coarsens_with_conjugator_radius():
    ctx = make_bs(2)
    index = enumerate_ball(ctx, 8)
    small = brute_force_partition(ctx, index, 3, 4)
    large = brute_force_partition(ctx, index, 3, 8)
    assert len(small) >= len(large)
    big_blocks = as_block_set(ctx, large)
    for block in as_block_set(ctx, small):
        assert any(block <= bb for bb in big_blocks)


def test_partition_is_sound():
    # every merge the oracle makes is confirmed by the class invariant
    ctx = make_lamplighter(2)
    index = enumerate_ball(ctx, 6)
    for block in brute_force_partition(ctx, index, 3, 6):
        keys = {conjugacy_key(ctx, g) for g in block}
        assert len(keys) == 1


def test_partition_blocks_are_sorted():
    ctx = make_bs(2)
    index = enumerate_ball(ctx, 4)
    blocks = brute_force_partition(ctx, index, 2, 4)
    for block in blocks:
        assert block == sorted(block, key=ctx.encode)
    firsts = [ctx.encode(b[0]) for b in blocks]
    assert firsts == sorted(firsts)


def test_partition_argument_validation():
    ctx = make_bs(2)
    index = enumerate_ball(ctx, 4)
    with pytest.raises(ValueError):
        brute_force_partition(ctx, index, 4, 3)
    with pytest.raises(ValueError):
        brute_force_partition(ctx, index, 5, 6)


def test_key_partition_closed_under_inversion():
    # g ~ h forces g^-1 ~ h^-1; the key partitions must respect that
    for ctx in (make_bs(2), make_lamplighter(3), make_matrix_context(HYP)):
        index = enumerate_ball(ctx, 4)
        strata: dict[int, list[Element]] = {}
        for g in index.elements():
            strata.setdefault(g.texp, []).append(g)
        for els in strata.values():
            for i, g in enumerate(els):
                for h in els[i + 1 :]:
                    if are_conjugate(ctx, g, h):
                        assert are_conjugate(ctx, ctx.invert(g), ctx.invert(h))


def test_orbit_bound_parameter():
    ctx = make_matrix_context(HYP)
    g = Element((3, -2), 0)
    assert conjugacy_key(ctx, g, orbit_bound=DEFAULT_ORBIT_BOUND) == conjugacy_key(
        ctx, g, orbit_bound=8
    )
