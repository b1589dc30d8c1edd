"""Shared fixtures and independent test oracles.

The oracles here deliberately avoid the library's own code paths: nested
isomorphism is checked by exhaustive recursive matching, and the space of
all rooted binary leaf-labelled trees on a small label set is enumerated
directly, so canonical forms and the MAST solver can be validated against
something that cannot share their bugs.
"""

import random
from pathlib import Path

import pytest

from mastforge import Tree, make_balanced, parse

DATA_DIR = Path(__file__).parent / "data"

# Balanced 8-leaf tree arranged so {1,2,3,4} and {5,6,7,8} restrict to the
# caterpillars (1,2,3,4) and (5,6,7,8): the smallest perfectly packed shape.
PACKED_8_LEAVES = ["1", "2", "3", "8", "5", "6", "7", "4"]


@pytest.fixture(scope="session")
def packed8() -> Tree:
    return make_balanced(3, PACKED_8_LEAVES)


@pytest.fixture(scope="session")
def golden_s() -> Tree:
    return parse((DATA_DIR / "balanced2048_s.nwk").read_text())


@pytest.fixture(scope="session")
def golden_t() -> Tree:
    return parse((DATA_DIR / "balanced2048_t.nwk").read_text())


# ----------------------------------------------------------------------
# generators
# ----------------------------------------------------------------------

def random_tree(rng: random.Random, labels) -> Tree:
    """Uniformly merge subtrees until one remains (random topology)."""
    parts = list(labels)
    assert parts, "need at least one label"
    while len(parts) > 1:
        a = parts.pop(rng.randrange(len(parts)))
        b = parts.pop(rng.randrange(len(parts)))
        parts.append((a, b))
    return Tree.from_nested(parts[0])


def random_overlapping_pair(rng: random.Random, max_common: int = 10):
    """Two random trees sharing between 1 and ``max_common`` labels, each
    padded with its own private labels."""
    n_common = rng.randint(1, max_common)
    common = [f"c{i}" for i in range(n_common)]
    extra_s = [f"s{i}" for i in range(rng.randint(0, 6))]
    extra_t = [f"t{i}" for i in range(rng.randint(0, 6))]
    return (
        random_tree(rng, common + extra_s),
        random_tree(rng, common + extra_t),
        common,
    )


def relabel(tree: Tree, mapping: dict) -> Tree:
    """Rebuild ``tree`` with every leaf label passed through ``mapping``."""

    def walk(nested):
        if isinstance(nested, str):
            return mapping[nested]
        return (walk(nested[0]), walk(nested[1]))

    return Tree.from_nested(walk(tree.to_nested()))


def shuffle_children(tree: Tree, rng: random.Random) -> Tree:
    """Rebuild ``tree`` with child order randomly flipped at every node."""

    def walk(nested):
        if isinstance(nested, str):
            return nested
        a, b = walk(nested[0]), walk(nested[1])
        return (b, a) if rng.random() < 0.5 else (a, b)

    return Tree.from_nested(walk(tree.to_nested()))


# ----------------------------------------------------------------------
# independent oracles
# ----------------------------------------------------------------------

def nested_isomorphic(a, b) -> bool:
    """Unordered rooted isomorphism on nested forms by direct matching."""
    if isinstance(a, str) or isinstance(b, str):
        return a == b
    a1, a2 = a
    b1, b2 = b
    return (nested_isomorphic(a1, b1) and nested_isomorphic(a2, b2)) or (
        nested_isomorphic(a1, b2) and nested_isomorphic(a2, b1)
    )


def all_tree_shapes(labels: tuple):
    """Every rooted binary leaf-labelled tree on ``labels`` as a nested form
    ((2n-3)!! of them), enumerated by anchored bipartitions."""
    if len(labels) == 1:
        return [labels[0]]
    first, rest = labels[0], labels[1:]
    shapes = []
    for mask in range(1 << len(rest)):
        left = [rest[i] for i in range(len(rest)) if mask >> i & 1]
        right = tuple(rest[i] for i in range(len(rest)) if not mask >> i & 1)
        if not right:
            continue
        for ls in all_tree_shapes(tuple([first] + left)):
            for rs in all_tree_shapes(right):
                shapes.append((ls, rs))
    return shapes


def displayed_triple(tree: Tree, a: str, b: str, c: str) -> str:
    """Canonical form of the induced 3-leaf restriction."""
    return tree.restrict({a, b, c}).canonical_form()


def naive_mast_size(s: Tree, t: Tree) -> int:
    """Reference MAST size: memoized recursion written directly from the
    recurrence, sharing no code with the vectorized solver."""
    from functools import cache

    @cache
    def go(u: int, v: int) -> int:
        ru, rv = s.nodes[u], t.nodes[v]
        if ru.is_leaf and rv.is_leaf:
            return int(ru.label == rv.label)
        if ru.is_leaf:
            c, d = rv.children
            return max(go(u, c), go(u, d))
        if rv.is_leaf:
            a, b = ru.children
            return max(go(a, v), go(b, v))
        a, b = ru.children
        c, d = rv.children
        return max(
            go(a, c) + go(b, d),
            go(a, d) + go(b, c),
            go(u, c),
            go(u, d),
            go(a, v),
            go(b, v),
        )

    return go(s.root, t.root)
