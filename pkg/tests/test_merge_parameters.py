import random

import pytest

from dwmerge.errors import MergeError
from dwmerge.hierarchy_merge import merge_parameters


def maximal_paths(edges) -> set[tuple]:
    """Brute-force oracle: enumerate every maximal directed path edge by edge."""
    succ, pred = {}, {}
    nodes = set()
    for a, b in edges:
        succ.setdefault(a, set()).add(b)
        pred.setdefault(b, set()).add(a)
        nodes.update((a, b))
    sources = [n for n in sorted(nodes) if not pred.get(n)]
    sinks = {n for n in nodes if not succ.get(n)}
    out = set()

    def walk(path):
        last = path[-1]
        if last in sinks:
            out.add(tuple(path))
            return
        for nxt in sorted(succ[last]):
            walk(path + [nxt])

    for s in sources:
        walk([s])
    return out


def random_dag(rng, max_nodes=7):
    n = rng.randint(2, max_nodes)
    labels = [f"n{i}" for i in range(n)]
    rng.shuffle(labels)
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < 0.4:
                edges.append((labels[i], labels[j]))
    return edges


def test_worked_chain_fusion():
    fd = [("A", "B"), ("B", "C"), ("B", "F"), ("C", "E"), ("D", "B")]
    assert merge_parameters(fd) == {
        ("A", "B", "C", "E"), ("D", "B", "C", "E"),
        ("A", "B", "F"), ("D", "B", "F")}


def test_single_edge_passthrough():
    assert merge_parameters([("A", "B")]) == {("A", "B")}


def test_matches_maximal_path_oracle():
    rng = random.Random(20240817)
    for _ in range(300):
        edges = random_dag(rng)
        if not edges:
            continue
        assert merge_parameters(edges) == maximal_paths(edges)


def test_input_order_does_not_matter():
    rng = random.Random(9)
    edges = random_dag(rng)
    while not edges:
        edges = random_dag(rng)
    expected = merge_parameters(edges)
    for _ in range(5):
        shuffled = list(edges)
        rng.shuffle(shuffled)
        assert merge_parameters(shuffled) == expected


def test_every_edge_appears_as_adjacency():
    rng = random.Random(77)
    for _ in range(50):
        edges = random_dag(rng)
        if not edges:
            continue
        chains = merge_parameters(edges)
        for a, b in edges:
            assert any(a == c[i] and b == c[i + 1]
                       for c in chains for i in range(len(c) - 1))


def test_chains_are_pairwise_non_contained():
    # holds on transitively reduced inputs, which is what the pipeline feeds
    from dwmerge.hierarchy_merge import transitive_reduction
    rng = random.Random(13)
    for _ in range(50):
        edges = transitive_reduction(random_dag(rng))
        if not edges:
            continue
        chains = list(merge_parameters(edges))
        for i, c in enumerate(chains):
            for j, d in enumerate(chains):
                if i != j:
                    assert not _subsequence(c, d)


def _subsequence(small, big):
    it = iter(big)
    return all(x in it for x in small)


def test_cyclic_input_rejected():
    with pytest.raises(MergeError):
        merge_parameters([("A", "B"), ("B", "A")])
    with pytest.raises(ValueError):
        merge_parameters([("A",)])


def test_longer_orderings_fuse():
    assert merge_parameters([("A", "B", "C"), ("B", "C", "D")]) == {("A", "B", "C", "D")}
