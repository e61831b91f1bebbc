"""Strong-connectivity analysis of the interaction digraph.

An edge i -> j exists iff w_ij > 0 or the pair has ties (a tie counts as an
edge in both directions).  Strong connectivity of this digraph is exactly the
condition under which the maximum-likelihood estimate exists.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ComparisonData


@dataclass(frozen=True)
class InteractionDigraph:
    """Successor lists (CSR) of the who-can-reach-whom graph.

    Node k is player k; the successors of node i are indptr[i]:indptr[i+1]
    of ``targets``.  Derived deterministically from the comparison data.
    """

    n: int
    indptr: np.ndarray
    targets: np.ndarray

    def successors(self, i: int) -> np.ndarray:
        return self.targets[self.indptr[i] : self.indptr[i + 1]]


def interaction_digraph(data: ComparisonData) -> InteractionDigraph:
    adj = data.adjacency
    n = data.n_players
    keep = (adj.wins_out > 0) | (adj.ties > 0)
    rows = np.repeat(np.arange(n, dtype=np.int64), np.diff(adj.indptr))[keep]
    dst = adj.nbr[keep]
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.add.at(indptr, rows + 1, 1)
    np.cumsum(indptr, out=indptr)
    return InteractionDigraph(n, indptr, dst)


def _scc_csr(n: int, indptr: np.ndarray, dst: np.ndarray) -> list[list[int]]:
    """Tarjan's single-pass algorithm over CSR successor arrays.

    Iterative so that deep paths (chains of thousands of players) cannot hit
    the recursion limit.  Components come back with members ascending,
    ordered by their smallest member.
    """
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    components: list[list[int]] = []
    counter = 0

    for root in range(n):
        if index[root] != -1:
            continue
        work: list[tuple[int, int]] = [(root, int(indptr[root]))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, ptr = work[-1]
            if ptr < indptr[v + 1]:
                work[-1] = (v, ptr + 1)
                w = int(dst[ptr])
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, int(indptr[w])))
                elif on_stack[w]:
                    if index[w] < low[v]:
                        low[v] = index[w]
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                if low[v] < low[parent]:
                    low[parent] = low[v]
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comp.sort()
                components.append(comp)

    components.sort(key=lambda c: c[0])
    return components


def strongly_connected_components(data: ComparisonData) -> list[list[int]]:
    """Partition player indices into strongly connected components.

    Two players share a component iff each can reach the other along directed
    win edges (ties count both ways).
    """
    g = interaction_digraph(data)
    return _scc_csr(g.n, g.indptr, g.targets)


def restrict_to_largest_scc(data: ComparisonData) -> tuple[ComparisonData, list[str]]:
    """Filter the data to its largest strongly connected component.

    Returns the filtered data (indices remapped, id order preserved) and the
    ids of the removed players.  Size ties are broken by smallest member
    index, which makes the choice deterministic.
    """
    components = strongly_connected_components(data)
    largest = max(components, key=lambda c: (len(c), -c[0]))
    keep = set(largest)
    removed = [data.ids[i] for i in range(data.n_players) if i not in keep]
    if not removed:
        return data, []

    kept_ids = [data.ids[i] for i in sorted(keep)]
    remap = {old: new for new, old in enumerate(sorted(keep))}
    wins = {
        (remap[i], remap[j]): c
        for (i, j), c in data.wins.items()
        if i in keep and j in keep
    }
    ties = {
        (remap[i], remap[j]): c
        for (i, j), c in data.ties.items()
        if i in keep and j in keep
    }
    return ComparisonData(kept_ids, wins, ties), removed
