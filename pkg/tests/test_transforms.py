import pytest
from hypothesis import given, strategies as st

from strategies import labeled_trees
from treeshift.transforms import (
    GtsMove,
    InvalidMoveError,
    KelmansMove,
    collapse_and_pendant,
    enumerate_gts_moves,
    gts,
    gts_preimages,
    is_proper,
    kelmans,
    make_gts_move,
    one_step_collapse_images,
    proper_gts_moves,
)
from treeshift.tree_core import (
    canonical_code,
    enumerate_trees,
    from_edges,
    metrics,
    path_tree,
    spider,
    star_tree,
)


def npend(t):
    return len(t.pendants())


# -- Kelmans -----------------------------------------------------------------------


def test_kelmans_p5_interior_edge():
    out = kelmans(path_tree(5), KelmansMove(1, 2))
    assert set(out.edges) == {(0, 1), (1, 2), (1, 3), (3, 4)}
    assert npend(out) == 3


def test_kelmans_pendant_v_is_identity():
    assert kelmans(star_tree(4), KelmansMove(0, 2)) == star_tree(4)
    assert kelmans(path_tree(6), KelmansMove(4, 5)) == path_tree(6)


def test_kelmans_rejects_non_edge():
    with pytest.raises(InvalidMoveError):
        kelmans(path_tree(5), KelmansMove(0, 2))


@pytest.mark.parametrize("n", range(3, 10))
def test_remark_on_kelmans(n):
    for t in enumerate_trees(n):
        d = metrics(t).diameter
        for a, b in t.edges:
            for u, v in ((a, b), (b, a)):
                out = kelmans(t, KelmansMove(u, v))
                if t.neighbors(v) == (u,):
                    assert out == t
                    continue
                if t.degree(u) == 1:
                    # u a leaf: u simply takes over v's role
                    assert canonical_code(out) == canonical_code(t)
                    continue
                assert npend(out) == npend(t) + 1
                assert d - metrics(out).diameter in (0, 1)


# -- collapse and pendant -------------------------------------------------------------


def test_collapse_p5_middle():
    out = collapse_and_pendant(path_tree(5), (1, 2))
    assert set(out.edges) == {(0, 1), (1, 2), (1, 3), (3, 4)}
    assert npend(out) == 3 and metrics(out).diameter == 3


def test_collapse_p4_gives_star():
    assert canonical_code(collapse_and_pendant(path_tree(4), (1, 2))) == canonical_code(star_tree(4))


@pytest.mark.parametrize("e", [(0, 1), (3, 4), (0, 2)])
def test_collapse_rejects(e):
    with pytest.raises(InvalidMoveError):
        collapse_and_pendant(path_tree(5), e)


# -- generalized tree shift ------------------------------------------------------------


def test_gts_moves_on_path():
    for n in range(2, 8):
        moves = enumerate_gts_moves(path_tree(n))
        assert len(moves) == n * (n - 1)


def test_gts_moves_on_star():
    moves = enumerate_gts_moves(star_tree(4))
    assert {(m.u, m.v) for m in moves} == {(0, i) for i in (1, 2, 3)} | {(i, 0) for i in (1, 2, 3)}
    assert not proper_gts_moves(star_tree(4))


def test_gts_moves_on_spider():
    t = spider(2, 2, 2)
    tips = {v for v in range(t.n) if t.degree(v) == 1}
    assert not [m for m in enumerate_gts_moves(t) if m.u in tips and m.v in tips]


@given(labeled_trees(min_n=2, max_n=9))
def test_gts_moves_are_exactly_the_valid_pairs(t):
    valid = set()
    for u in range(t.n):
        for v in range(t.n):
            if u != v and all(t.degree(x) == 2 for x in t.path(u, v)[1:-1]):
                valid.add((u, v))
    moves = enumerate_gts_moves(t)
    assert {(m.u, m.v) for m in moves} == valid
    for m in moves:
        assert m == make_gts_move(t, m.u, m.v)
        assert m.w == m.path[-2]


def test_gts_p5_example():
    m = make_gts_move(path_tree(5), 1, 3)
    assert m == GtsMove(1, 3, (1, 2, 3), 2)
    out = gts(path_tree(5), m)
    assert set(out.edges) == {(0, 1), (1, 2), (2, 3), (1, 4)}
    assert canonical_code(out) == canonical_code(spider(1, 1, 2))
    assert is_proper(path_tree(5), m)
    assert not is_proper(path_tree(5), make_gts_move(path_tree(5), 0, 3))
    assert not is_proper(star_tree(4), make_gts_move(star_tree(4), 0, 1))


def test_gts_rejects_invalid():
    t = spider(2, 2, 2)
    with pytest.raises(InvalidMoveError):
        gts(t, GtsMove(2, 4, tuple(t.path(2, 4)), t.path(2, 4)[-2]))
    with pytest.raises(InvalidMoveError):
        make_gts_move(t, 1, 1)
    with pytest.raises(InvalidMoveError):
        gts(path_tree(5), GtsMove(1, 3, (1, 2, 3), 1))


@given(labeled_trees(min_n=2, max_n=9), st.data())
def test_improper_gts_is_isomorphic(t, data):
    improper = [m for m in enumerate_gts_moves(t) if not is_proper(t, m)]
    if improper:
        m = data.draw(st.sampled_from(improper))
        assert canonical_code(gts(t, m)) == canonical_code(t)


@given(labeled_trees(min_n=2, max_n=10), st.data())
def test_reversed_move_gives_isomorphic_image(t, data):
    m = data.draw(st.sampled_from(enumerate_gts_moves(t)))
    r = m.reversed()
    assert r == make_gts_move(t, m.v, m.u)
    assert canonical_code(gts(t, r)) == canonical_code(gts(t, m))


@pytest.mark.parametrize("n", range(2, 11))
def test_gts_exhaustive(n):
    for t in enumerate_trees(n):
        for m in enumerate_gts_moves(t):
            out = gts(t, m)
            assert out.n == t.n and len(out.edges) == n - 1
            if is_proper(t, m):
                assert npend(out) == npend(t) + 1
            elif n <= 9:
                assert canonical_code(out) == canonical_code(t)


@pytest.mark.parametrize("n", range(3, 11))
def test_star_admits_no_proper_move(n):
    t = star_tree(n)
    assert all(not is_proper(t, m) for m in enumerate_gts_moves(t))


# -- preimages and the path ---------------------------------------------------------


def test_preimages_small():
    assert gts_preimages(path_tree(4), enumerate_trees(4)) == []
    pre = gts_preimages(star_tree(4), enumerate_trees(4))
    assert pre and all(t.is_path() for t, _ in pre)
    assert all(t.degree(m.u) == t.degree(m.v) == 2 for t, m in pre)
    assert gts_preimages(spider(2, 2, 2), enumerate_trees(7))


def test_preimages_universe_checks():
    with pytest.raises(ValueError):
        gts_preimages(path_tree(5), enumerate_trees(4))
    with pytest.raises(ValueError):
        gts_preimages(path_tree(5), enumerate_trees(5)[::-1])


@pytest.mark.parametrize("n", range(4, 11))
def test_every_non_path_has_a_preimage(n):
    universe = enumerate_trees(n)
    for t in universe:
        assert bool(gts_preimages(t, universe)) == (not t.is_path())


# -- collapse images of the path -----------------------------------------------------


def test_collapse_images_p7():
    images = one_step_collapse_images(7)
    info = {canonical_code(t): metrics(t) for t in enumerate_trees(7)}
    assert images
    assert all(info[c].diameter >= 5 for c in images)
    assert all(len(info[c].pendant_vertices) <= 3 for c in images)
    assert canonical_code(spider(2, 2, 2)) not in images


@pytest.mark.parametrize("n", range(4, 11))
def test_three_pendant_short_trees_missed(n):
    images = set(one_step_collapse_images(n))
    for t in enumerate_trees(n):
        m = metrics(t)
        if len(m.pendant_vertices) == 3 and m.diameter <= n - 3:
            assert canonical_code(t) not in images


def test_collapse_images_range():
    with pytest.raises(ValueError):
        one_step_collapse_images(3)
