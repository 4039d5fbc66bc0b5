"""Classical and multilevel backbone extraction.

The multilevel variant splits the graph into local and global components
(via Louvain), filters every component on its own at the same fraction and
takes the union of the results.
"""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass
from typing import Optional, Union

import numpy as np

from spine.community import Partition, detect
from spine.components import ComponentStructure, extract_component_structure
from spine.filters import ALIASES, TIEBREAK_VERSION, Backbone, edge_budget, select_edges
from spine.graph import Graph

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExtractionPlan:
    filter_kind: str = "global_threshold"
    fraction: float = 0.3
    partition_seed: Union[int, str] = "auto"
    mode: str = "multilevel"

    def __post_init__(self):
        if self.filter_kind not in ALIASES:
            raise ValueError(f"unknown filter {self.filter_kind!r}")
        object.__setattr__(self, "filter_kind", ALIASES[self.filter_kind])
        if not 0.0 <= self.fraction <= 1.0:
            raise ValueError(f"fraction must be in [0, 1], got {self.fraction}")
        if self.mode not in ("classical", "multilevel"):
            raise ValueError(f"mode must be 'classical' or 'multilevel', got {self.mode!r}")

    def to_dict(self) -> dict:
        return asdict(self)


def classical_backbone(g: Graph, plan: ExtractionPlan) -> Backbone:
    """Apply the plan's filter once to the whole graph."""
    ids = select_edges(g, plan.filter_kind, plan.fraction)
    prov = {
        "method": plan.filter_kind,
        "mode": "classical",
        "fraction": plan.fraction,
        "partition_seed": None,
        "budget": edge_budget(g.n_edges, plan.fraction),
        "tiebreak": TIEBREAK_VERSION,
    }
    return Backbone(g.edge_subgraph(ids), prov)


def multilevel_backbone(
    g: Graph,
    plan: ExtractionPlan,
    partition: Optional[Partition] = None,
    structure: Optional[ComponentStructure] = None,
) -> Backbone:
    """Filter every local and global component independently, then merge.

    A precomputed ``partition`` (or full ``structure``) may be supplied to
    reuse one community detection across several extractions.
    """
    if g.n_edges == 0:
        logger.warning("graph has no edges; multilevel backbone is empty")
    if structure is None:
        if partition is None:
            partition = detect(g, plan.partition_seed) if g.n_edges else Partition(np.arange(g.n_nodes))
        structure = extract_component_structure(g, partition)
    kept = []
    records = []
    for comp in structure.components:
        local_ids = select_edges(comp.graph, plan.filter_kind, plan.fraction)
        kept.append(comp.edge_ids[local_ids])
        records.append({
            "kind": comp.kind,
            "index": comp.index,
            "nodes": comp.graph.n_nodes,
            "edges": comp.graph.n_edges,
            "budget": int(local_ids.shape[0]),
        })
    ids = np.concatenate(kept) if kept else np.zeros(0, dtype=np.int64)
    prov = {
        "method": plan.filter_kind,
        "mode": "multilevel",
        "fraction": plan.fraction,
        "partition_seed": structure.partition.seed,
        "communities": structure.partition.community_count,
        "budget": int(ids.shape[0]),
        "classical_budget": edge_budget(g.n_edges, plan.fraction),
        "tiebreak": TIEBREAK_VERSION,
        "components": records,
    }
    return Backbone(g.edge_subgraph(ids), prov)


def extract(g: Graph, plan: ExtractionPlan, partition: Optional[Partition] = None) -> Backbone:
    if plan.mode == "classical":
        return classical_backbone(g, plan)
    return multilevel_backbone(g, plan, partition=partition)
