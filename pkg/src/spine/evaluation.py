"""Compare a backbone with its original graph and sweep over edge fractions."""

from __future__ import annotations

import csv
import json
import logging
from dataclasses import asdict, dataclass, field, fields
from typing import Iterable, Optional, Sequence

import numpy as np

from spine import distances
from spine.community import (
    Partition,
    community_connectivity,
    detect,
    modularity,
    participation_coefficients,
    restrict_partition,
)
from spine.filters import TIEBREAK_VERSION, Backbone
from spine.graph import Graph, GlobalProperties, GraphError, degree_and_weight_sequences, global_properties
from spine.multilevel import ExtractionPlan, classical_backbone, multilevel_backbone

logger = logging.getLogger(__name__)

SPECTRAL_NODE_LIMIT = 5000
PARTICIPATION_BINS = 20


class ContainmentError(GraphError):
    """The backbone has an edge (or weight) that the original graph lacks."""


@dataclass
class EvaluationOptions:
    seed: object = "auto"
    force_spectral: bool = False
    spectral_node_limit: int = SPECTRAL_NODE_LIMIT
    partition: Optional[Partition] = None


@dataclass
class MetricsReport:
    original: GlobalProperties
    backbone: GlobalProperties
    preserved_node_fraction: float
    preserved_weight_fraction: float
    ks_degree: Optional[float]
    ks_weight: Optional[float]
    portrait_divergence: float
    laplacian_distance: Optional[float]
    netlsd_distance: Optional[float]
    modularity_original: Optional[float]
    modularity_backbone: Optional[float]
    participation_histograms: dict
    inter_intra: dict
    provenance: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "MetricsReport":
        d = dict(d)
        d["original"] = GlobalProperties(**d["original"])
        d["backbone"] = GlobalProperties(**d["backbone"])
        d["inter_intra"] = {k: (tuple(v) if isinstance(v, list) else v) for k, v in d["inter_intra"].items()}
        known = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in d.items() if k in known})

    @classmethod
    def from_json(cls, text: str) -> "MetricsReport":
        return cls.from_dict(json.loads(text))

    def headline(self) -> dict:
        return {
            "nodes": self.backbone.node_count,
            "edges": self.backbone.edge_count,
            "preserved_node_fraction": self.preserved_node_fraction,
            "preserved_weight_fraction": self.preserved_weight_fraction,
            "ks_degree": self.ks_degree,
            "ks_weight": self.ks_weight,
            "portrait_divergence": self.portrait_divergence,
            "laplacian_distance": self.laplacian_distance,
            "netlsd_distance": self.netlsd_distance,
            "modularity_original": self.modularity_original,
            "modularity_backbone": self.modularity_backbone,
        }


def check_containment(original: Graph, backbone: Graph) -> None:
    weights = {original.edge_key(i): w for i, w in enumerate(original.weight.tolist())}
    for i, w in enumerate(backbone.weight.tolist()):
        key = backbone.edge_key(i)
        if key not in weights:
            raise ContainmentError(f"backbone edge {key} is not in the original graph")
        if weights[key] != w:
            raise ContainmentError(f"backbone edge {key} has weight {w}, original has {weights[key]}")


def _histogram(values: np.ndarray) -> list[int]:
    counts, _ = np.histogram(values, bins=PARTICIPATION_BINS, range=(0.0, 1.0))
    return counts.tolist()


def evaluate(original: Graph, backbone, options: Optional[EvaluationOptions] = None) -> MetricsReport:
    """Full comparison of ``backbone`` (a Backbone or Graph) against ``original``.

    Backbone modularity comes from a fresh Louvain run on the backbone;
    inter/intra on the backbone is reported both under the original
    partition (restricted to surviving nodes) and under that fresh one.
    """
    options = options or EvaluationOptions()
    if isinstance(backbone, Backbone):
        bprov, bg = dict(backbone.provenance), backbone.graph
    else:
        bprov, bg = {}, backbone
    check_containment(original, bg)

    orig_props = global_properties(original)
    bb_props = global_properties(bg) if bg.n_nodes else _empty_properties()
    V, W = original.n_nodes, original.total_weight

    d1, w1 = degree_and_weight_sequences(original)
    d2, w2 = degree_and_weight_sequences(bg)
    ks_degree = distances.ks_statistic(d1, d2) if d2 else None
    ks_weight = distances.ks_statistic(w1, w2) if w2 else None

    pd = distances.portrait_divergence(original, bg) if bg.n_nodes else 1.0
    big = max(original.n_nodes, bg.n_nodes) > options.spectral_node_limit
    skipped = big and not options.force_spectral
    if skipped:
        logger.warning("spectral distances skipped (more than %d nodes)", options.spectral_node_limit)
        lap = lsd = None
    elif bg.n_nodes:
        s1, s2 = distances.laplacian_spectrum(original), distances.laplacian_spectrum(bg)
        lap = distances.spectrum_distance(s1, s2)
        lsd = float(np.linalg.norm(distances.heat_trace(s1) - distances.heat_trace(s2)))
    else:
        lap = float(np.linalg.norm(distances.laplacian_spectrum(original)))
        lsd = float(np.linalg.norm(distances.heat_trace(distances.laplacian_spectrum(original))))

    part = options.partition if options.partition is not None else (detect(original, options.seed) if original.n_edges else None)
    q_orig = modularity(original, part) if part is not None and W > 0 else None
    hist_orig = _histogram(participation_coefficients(original, part)) if part is not None else None
    inter_intra = {"original": community_connectivity(original, part) if part is not None else None}
    q_bb, hist_bb = None, None
    bb_own_seed = None
    if bg.n_edges and part is not None:
        restricted = restrict_partition(part, original, bg)
        inter_intra["backbone_original_partition"] = community_connectivity(bg, restricted)
        hist_bb = _histogram(participation_coefficients(bg, restricted))
        own = detect(bg, options.seed)
        bb_own_seed = own.seed
        q_bb = modularity(bg, own)
        inter_intra["backbone_own_partition"] = community_connectivity(bg, own)
    else:
        inter_intra["backbone_original_partition"] = (0.0, 0.0)

    provenance = {
        "backbone": bprov,
        "evaluation_seed": options.seed,
        "original_partition_seed": part.seed if part is not None else None,
        "backbone_partition_seed": bb_own_seed,
        "spectral_skipped": skipped,
        "tiebreak": TIEBREAK_VERSION,
    }
    return MetricsReport(
        original=orig_props,
        backbone=bb_props,
        preserved_node_fraction=bg.n_nodes / V,
        preserved_weight_fraction=bg.total_weight / W if W > 0 else 0.0,
        ks_degree=ks_degree,
        ks_weight=ks_weight,
        portrait_divergence=pd,
        laplacian_distance=lap,
        netlsd_distance=lsd,
        modularity_original=q_orig,
        modularity_backbone=q_bb,
        participation_histograms={"bins": PARTICIPATION_BINS, "original": hist_orig, "backbone": hist_bb},
        inter_intra=inter_intra,
        provenance=provenance,
    )


def _empty_properties() -> GlobalProperties:
    return GlobalProperties(0, 0, 0.0, None, None, 0.0, 0.0, 0, None, 0.0, 0.0, 0.0, 0.0, 0)


SWEEP_METRICS = (
    "nodes",
    "edges",
    "preserved_node_fraction",
    "preserved_weight_fraction",
    "ks_degree",
    "ks_weight",
    "portrait_divergence",
    "laplacian_distance",
    "netlsd_distance",
    "modularity_backbone",
)


def sweep(
    original: Graph,
    plan: ExtractionPlan,
    fractions: Sequence[float],
    options: Optional[EvaluationOptions] = None,
    modes: Iterable[str] = ("classical", "multilevel"),
) -> list[dict]:
    """Evaluate classical and multilevel backbones across ``fractions``.

    Returns long-format rows ``{fraction, mode, filter, metric, value}``.
    The original graph's partition is detected once and shared by every
    multilevel extraction and evaluation.
    """
    fractions = list(fractions)
    if not fractions:
        raise ValueError("at least one fraction is required")
    if any(not 0.0 < f <= 1.0 for f in fractions):
        raise ValueError("fractions must lie in (0, 1]")
    if fractions != sorted(fractions):
        raise ValueError("fractions must be sorted ascending")
    options = options or EvaluationOptions(seed=plan.partition_seed)
    part = options.partition or detect(original, plan.partition_seed)
    opts = EvaluationOptions(options.seed, options.force_spectral, options.spectral_node_limit, part)
    rows = []
    for f in fractions:
        for mode in modes:
            p = ExtractionPlan(plan.filter_kind, f, plan.partition_seed, mode)
            bb = classical_backbone(original, p) if mode == "classical" else multilevel_backbone(original, p, partition=part)
            rep = evaluate(original, bb, opts)
            head = rep.headline()
            for metric in SWEEP_METRICS:
                rows.append({"fraction": f, "mode": mode, "filter": p.filter_kind, "metric": metric, "value": head[metric]})
    return rows


def write_sweep_csv(rows: list[dict], path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=["fraction", "mode", "filter", "metric", "value"], lineterminator="\n")
        w.writeheader()
        for row in rows:
            v = row["value"]
            w.writerow({**row, "value": "" if v is None else repr(v)})
