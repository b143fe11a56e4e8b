import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import riplab as rl
from riplab.errors import CapError, InputError, ModelUnsupportedError

from util import brute_is_sparse, brute_members, brute_project_mass, brute_sparse_sets

BLOCK842 = rl.Model("block", 8, 4, 2)
TREE73 = rl.Model("tree", 7, 3)


def test_model_validation():
    with pytest.raises(InputError):
        rl.Model("block", 8, 4, 3)  # b does not divide k
    with pytest.raises(InputError):
        rl.Model("block", 10, 3, 3)  # b does not divide n
    with pytest.raises(InputError):
        rl.Model("tree", 8, 3)  # n not 2^h - 1
    with pytest.raises(InputError):
        rl.Model("general", 4, 5)
    with pytest.raises(InputError):
        rl.Model("general", 4, 2, b=2)
    with pytest.raises(InputError):
        rl.Model("hexagonal", 4, 2)


def test_model_text_roundtrip():
    for model in (BLOCK842, TREE73, rl.Model("general", 10, 4)):
        assert rl.parse_model(rl.format_model(model)) == model
    assert rl.parse_model("block:n=8,k=4,b=2") == BLOCK842
    with pytest.raises(InputError):
        rl.parse_model("block:n=8")


def test_support_text_roundtrip():
    assert rl.parse_support("3,1,2") == (1, 2, 3)
    assert rl.format_support((5, 1)) == "1,5"
    assert rl.parse_support("") == ()


def test_is_member_examples():
    assert rl.is_member(BLOCK842, (1, 2, 5, 6))
    assert not rl.is_member(BLOCK842, (1, 2, 3, 5))  # block 2 split
    assert rl.is_member(TREE73, (1, 2, 4))  # root -> left -> left
    assert not rl.is_member(TREE73, (1, 4, 5))  # parent 2 missing
    with pytest.raises(InputError):
        rl.is_member(BLOCK842, (0, 1, 2, 3))


def test_is_sparse_examples():
    assert rl.is_sparse(TREE73, (4,))
    assert not rl.is_sparse(BLOCK842, (1, 3, 5))  # touches 3 blocks > 2
    assert rl.is_sparse(rl.Model("general", 8, 2), ())


@pytest.mark.parametrize("model", [
    rl.Model("general", 8, 3),
    BLOCK842,
    rl.Model("block", 12, 6, 3),
    TREE73,
    rl.Model("tree", 15, 4),
])
def test_membership_against_brute_force(model):
    members = set(brute_members(model))
    assert set(rl.enumerate_members(model)) == members
    assert rl.model_size(model) == len(members)
    for size in range(0, model.k + 1):
        for cand in itertools.combinations(range(1, model.n + 1), size):
            assert rl.is_sparse(model, cand) == brute_is_sparse(model, cand)
            if size == model.k:
                assert rl.is_member(model, cand) == (cand in members)


def test_enumerate_sparse_sets_examples():
    assert rl.count_sparse_sets(BLOCK842, 1) == 8
    assert rl.count_sparse_sets(BLOCK842, 2) == 28
    assert list(rl.enumerate_sparse_sets(rl.Model("tree", 7, 2), 2)) == [(1, 2), (1, 3)]


@pytest.mark.parametrize("model", [
    rl.Model("general", 9, 4),
    BLOCK842,
    rl.Model("block", 12, 6, 2),
    rl.Model("tree", 15, 5),
])
def test_enumerate_sparse_sets_against_brute_force(model):
    for t in range(1, model.k + 1):
        got = list(rl.enumerate_sparse_sets(model, t))
        assert len(got) == len(set(got)), "duplicates yielded"
        assert sorted(got) == brute_sparse_sets(model, t)
        assert rl.count_sparse_sets(model, t) == len(got)


def test_enumeration_cap():
    with pytest.raises(CapError):
        list(rl.enumerate_sparse_sets(rl.Model("general", 30, 10), 10, cap=100))
    with pytest.raises(InputError):
        list(rl.enumerate_sparse_sets(BLOCK842, 0))
    with pytest.raises(InputError):
        list(rl.enumerate_sparse_sets(BLOCK842, 5))


def test_model_size_examples():
    assert rl.model_size(BLOCK842) == 6
    tree = rl.Model("tree", 31, 3)
    assert rl.model_size(tree) == 5
    assert rl.model_size(tree) <= 4 ** 3
    # tree counts stay under the 4^k estimate on a wider grid
    for n in (15, 31, 63):
        for k in range(1, 9):
            assert rl.model_size(rl.Model("tree", n, k)) <= 4 ** k


def test_project_examples():
    model = rl.Model("block", 4, 2, 2)
    support, xp = rl.project(model, np.array([3.0, 0.0, 2.0, 2.0]))
    assert support == (3, 4)
    assert np.array_equal(xp, [0.0, 0.0, 2.0, 2.0])
    support, _ = rl.project(model, np.array([3.0, 1.0, 2.0, 2.0]))
    assert support == (1, 2)  # tie 4 == 4 goes to the lowest block
    tree = rl.Model("tree", 7, 1)
    support, xp = rl.project(tree, np.array([0.0, 5.0, 6.0, 7.0, 1.0, 2.0, 3.0]))
    assert support == (1,) and xp[0] == 0.0 and np.count_nonzero(xp) == 0
    with pytest.raises(InputError):
        rl.project(model, np.zeros(5))


@pytest.mark.parametrize("model", [
    rl.Model("general", 9, 3),
    rl.Model("block", 12, 4, 2),
    rl.Model("tree", 15, 4),
    rl.Model("tree", 31, 5),
])
def test_project_matches_brute_force(model):
    rng = np.random.default_rng(10)
    for trial in range(40):
        x = rng.standard_normal(model.n)
        if trial % 3 == 0:
            x = np.round(x)  # exercise ties
        support, xp = rl.project(model, x)
        assert rl.is_member(model, support)
        assert np.array_equal(xp != 0, np.isin(np.arange(1, model.n + 1), support) & (x != 0))
        kept = float(np.abs(xp).sum())
        assert kept == pytest.approx(brute_project_mass(model, x), abs=1e-12)


def test_tree_cover_examples():
    assert rl.tree_cover(15, (15,)) == (1, 3, 7, 15)
    assert rl.tree_cover(15, (1,)) == (1,)
    leaves = tuple(range(8, 16))
    assert rl.tree_cover(15, leaves) == tuple(range(1, 16))
    with pytest.raises(InputError):
        rl.tree_cover(15, ())
    with pytest.raises(InputError):
        rl.tree_cover(12, (3,))


def test_tree_cover_properties_small():
    n = 63
    for size in (1, 2, 3):
        rng = np.random.default_rng(size)
        for _ in range(200):
            support = tuple(sorted(int(j) + 1 for j in rng.choice(n, size=size, replace=False)))
            cover = rl.tree_cover(n, support)  # size bound asserted inside
            assert set(support) | {1} <= set(cover)
            assert rl.is_sparse(rl.Model("tree", n, len(cover)), cover)


def test_model_partition_examples():
    assert rl.model_partition(BLOCK842) == (2, [(1, 2, 3, 4), (5, 6, 7, 8)])
    assert rl.model_partition(rl.Model("general", 8, 4)) == (4, [(1, 2, 3, 4), (5, 6, 7, 8)])
    l, parts = rl.model_partition(rl.Model("tree", 127, 16))
    assert l == 2
    sizes = [len(p) for p in parts]
    assert min(sizes) * 2 >= 16
    assert sum(sizes) * 4 >= 127


@pytest.mark.parametrize("model", [
    rl.Model("general", 10, 3),
    rl.Model("general", 8, 8),
    BLOCK842,
    rl.Model("block", 24, 8, 4),
    rl.Model("tree", 127, 16),
    rl.Model("tree", 255, 22),
])
def test_model_partition_properties(model):
    l, parts = rl.model_partition(model)
    seen: set = set()
    for part in parts:
        assert rl.is_sparse(model, part)
        assert 2 * len(part) >= model.k
        assert not seen.intersection(part)
        seen.update(part)
    assert 4 * len(seen) >= model.n
    assert 1 <= l <= model.k
    # every l-subset must be sparse; exhaustive when cheap, sampled otherwise
    if model.n <= 16:
        for cand in itertools.combinations(range(1, model.n + 1), l):
            assert rl.is_sparse(model, cand)
    else:
        rng = np.random.default_rng(3)
        for _ in range(300):
            cand = sorted(int(j) + 1 for j in rng.choice(model.n, size=l, replace=False))
            assert rl.is_sparse(model, cand)


def test_model_partition_tree_precondition():
    with pytest.raises(ModelUnsupportedError):
        rl.model_partition(rl.Model("tree", 127, 8))


def test_random_member_hits_every_member():
    rng = np.random.default_rng(0)
    model = rl.Model("tree", 15, 4)
    members = set(rl.enumerate_members(model))
    seen = {rl.random_member(model, rng) for _ in range(2000)}
    assert seen == members
    for kind_model in (rl.Model("general", 6, 2), rl.Model("block", 8, 4, 2)):
        members = set(rl.enumerate_members(kind_model))
        seen = {rl.random_member(kind_model, rng) for _ in range(1500)}
        assert seen == members


@given(st.data())
@settings(max_examples=80, deadline=None)
def test_member_implies_sparse(data):
    kind = data.draw(st.sampled_from(["general", "block", "tree"]))
    if kind == "general":
        n = data.draw(st.integers(2, 12))
        k = data.draw(st.integers(1, n))
        model = rl.Model("general", n, k)
    elif kind == "block":
        b = data.draw(st.integers(1, 3))
        n = b * data.draw(st.integers(2, 5))
        k = b * data.draw(st.integers(1, n // b))
        model = rl.Model("block", n, k, b)
    else:
        h = data.draw(st.integers(1, 3))
        n = 2 ** (h + 1) - 1
        k = data.draw(st.integers(1, n))
        model = rl.Model("tree", n, k)
    support = data.draw(st.sets(st.integers(1, model.n), max_size=model.k))
    support = tuple(sorted(support))
    if rl.is_member(model, support):
        assert rl.is_sparse(model, support)
    if rl.is_sparse(model, support):
        assert len(support) <= model.k
