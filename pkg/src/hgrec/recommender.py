"""End-to-end recommendation: graft a target PR, seed a query, rank, filter.

A recommendation never mutates the base graph: the target PR (and its
contributor, when new) is added to a shallow overlay copy, connected by one
contributor edge plus its top-m strongest similar-PR edges, and scored by the
ranker. Candidates are the developer vertices minus the target's contributor
and any bot accounts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import ranker
from .config import HyperParams
from .corpus import ReviewCorpus
from .errors import HgrecError
from .hypergraph import (
    EdgeKind,
    Hyperedge,
    Hypergraph,
    Vertex,
    VertexKind,
    pr_pr_raw_row,
    scale_into_range,
    weight_pr_contributor,
    _span,
    _top_partners,
)


@dataclass(frozen=True)
class TargetPR:
    id: str
    contributor: str
    created_at: int
    files: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "files", tuple(sorted(set(self.files))))


@dataclass
class Recommendation:
    target: str
    k: int
    candidates: list[tuple[str, float]]

    @property
    def short(self) -> bool:
        """True when fewer than the requested k candidates were available."""
        return len(self.candidates) < self.k

    def ids(self) -> list[str]:
        return [dev for dev, _ in self.candidates]


def graft(
    base: Hypergraph,
    corpus: ReviewCorpus,
    target: TargetPR,
    params: HyperParams,
) -> Hypergraph:
    """Overlay the target PR onto the base graph.

    The dataset end bound is extended to the target's creation time when it
    postdates the corpus, keeping every time ratio in range. New edge weights
    are projected onto the base graph's per-family normalization scale so
    they are comparable with existing weights.
    """
    if not target.files:
        raise HgrecError(f"target PR {target.id!r} has no files")
    if base.params != params:
        raise HgrecError("graft params differ from the ones the base was built with")
    if base.files_pack is None:
        raise HgrecError("base graph carries no file pack; rebuild it from a corpus")

    t_start = base.bounds[0]
    t_end = max(base.bounds[1], target.created_at)

    vertices = list(base.vertices)
    vertex_ids = dict(base.vertex_ids)
    edges = list(base.edges)
    by_kind = {kind: list(ids) for kind, ids in base.by_kind.items()}

    def intern(kind: VertexKind, ref: str) -> int:
        key = (kind, ref)
        index = vertex_ids.get(key)
        if index is None:
            index = len(vertices)
            vertex_ids[key] = index
            vertices.append(Vertex(kind=kind, ref=ref, index=index))
        return index

    def add_edge(kind: EdgeKind, members: tuple[int, ...], raw: float) -> None:
        weight = scale_into_range(raw, base.raw_range.get(kind))
        by_kind[kind].append(len(edges))
        edges.append(
            Hyperedge(kind=kind, members=members, raw_weight=raw, weight=weight)
        )

    pr_v = intern(VertexKind.PR, target.id)
    contributor_v = intern(VertexKind.DEVELOPER, target.contributor)
    add_edge(
        EdgeKind.PR_CONTRIBUTOR,
        tuple(sorted((pr_v, contributor_v))),
        weight_pr_contributor(target, t_start, t_end),
    )

    pack = base.files_pack
    times = np.asarray([pr.created_at for pr in corpus.prs], dtype=np.float64)
    t_tokens, t_off = pack.pack_one(target.files)
    raw = pr_pr_raw_row(
        pack, times, _span(t_start, t_end), t_tokens, t_off, target.created_at
    )
    order_rank = np.empty(len(corpus.prs), dtype=np.int64)
    order = sorted(
        range(len(corpus.prs)),
        key=lambda i: (corpus.prs[i].created_at, corpus.prs[i].id),
    )
    for position, i in enumerate(order):
        order_rank[i] = position
    for j in _top_partners(raw, order_rank, params.top_m):
        partner_v = vertex_ids[(VertexKind.PR, corpus.prs[j].id)]
        add_edge(
            EdgeKind.PR_PR, tuple(sorted((pr_v, partner_v))), float(raw[j])
        )

    return Hypergraph(
        vertices=vertices,
        edges=edges,
        by_kind=by_kind,
        bounds=(t_start, t_end),
        raw_range=dict(base.raw_range),
        params=params,
        vertex_ids=vertex_ids,
        files_pack=pack,
    )


def query_vector(graph: Hypergraph, target: TargetPR) -> np.ndarray:
    """Indicator vector: 1 at the target PR and its contributor, 0 elsewhere."""
    query = np.zeros(graph.n_vertices, dtype=np.float64)
    pr_v = graph.vertex_index(VertexKind.PR, target.id)
    contributor_v = graph.vertex_index(VertexKind.DEVELOPER, target.contributor)
    if pr_v is None or contributor_v is None:
        raise HgrecError(f"target PR {target.id!r} is not grafted onto this graph")
    query[pr_v] = 1.0
    query[contributor_v] = 1.0
    return query


def rank_developers(
    scores: np.ndarray,
    graph: Hypergraph,
    corpus: ReviewCorpus,
    exclude: frozenset[str],
) -> list[tuple[str, float]]:
    """Developer vertices sorted by score, ties broken by historical comment
    count (more first) then id. Bot accounts and ``exclude`` are dropped."""
    counts = corpus.comment_counts()
    rows = []
    for v in graph.vertices:
        if v.kind is not VertexKind.DEVELOPER or v.ref in exclude:
            continue
        dev = corpus.developers.get(v.ref)
        if dev is not None and dev.is_bot:
            continue
        rows.append((v.ref, float(scores[v.index])))
    rows.sort(key=lambda row: (-row[1], -counts.get(row[0], 0), row[0]))
    return rows


def recommend(
    base: Hypergraph,
    corpus: ReviewCorpus,
    target: TargetPR,
    params: HyperParams,
    k: int,
) -> Recommendation:
    """Algorithmic pipeline: graft, seed, solve, filter and sort, truncate."""
    if k < 1:
        raise HgrecError(f"k must be >= 1, got {k}")
    graph = graft(base, corpus, target, params)
    system = ranker.assemble(graph, params.alpha)
    scores = ranker.solve(system, query_vector(graph, target), params)
    ranked = rank_developers(scores, graph, corpus, exclude=frozenset({target.contributor}))
    return Recommendation(target=target.id, k=k, candidates=ranked[:k])


class HypergraphRecommender:
    """fit/recommend wrapper caching the base graph per training corpus."""

    name = "hgrec"

    def __init__(self, params: HyperParams | None = None):
        self.params = params or HyperParams()
        self._corpus = None
        self._base = None

    def fit(self, corpus: ReviewCorpus) -> "HypergraphRecommender":
        from .hypergraph import build

        self._corpus = corpus
        self._base = build(corpus, self.params)
        return self

    @property
    def base_graph(self) -> Hypergraph:
        if self._base is None:
            raise HgrecError("recommender is not fitted")
        return self._base

    def recommend(self, target: TargetPR, k: int) -> Recommendation:
        if self._base is None:
            raise HgrecError("recommender is not fitted")
        return recommend(self._base, self._corpus, target, self.params, k)
