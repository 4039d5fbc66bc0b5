import csv

import pytest

from conftest import make_graph
from spine.community import louvain
from spine.evaluation import (
    SWEEP_METRICS,
    ContainmentError,
    EvaluationOptions,
    MetricsReport,
    evaluate,
    sweep,
    write_sweep_csv,
)
from spine.filters import Backbone, global_threshold
from spine.multilevel import ExtractionPlan


def table(rows):
    return {(r["fraction"], r["mode"], r["metric"]): r["value"] for r in rows}


def test_identity_report(karate):
    rep = evaluate(karate, Backbone(karate), EvaluationOptions(seed=0))
    assert rep.preserved_node_fraction == 1 and rep.preserved_weight_fraction == 1
    assert rep.ks_degree == 0 and rep.ks_weight == 0
    assert rep.portrait_divergence == 0 and rep.laplacian_distance == 0 and rep.netlsd_distance == 0
    assert rep.inter_intra["original"] == (51.0, 180.0)
    assert sum(rep.inter_intra["original"]) == 231


def test_karate_classical_threshold_report(karate):
    rep = evaluate(karate, global_threshold(karate, 0.3), EvaluationOptions(seed=0))
    assert abs(rep.ks_degree - 0.339) <= 0.05
    assert abs(rep.ks_weight - 0.644) <= 0.05
    assert rep.backbone.edge_count == 23
    assert 0 <= rep.preserved_node_fraction <= 1 and 0 <= rep.preserved_weight_fraction <= 1
    assert 0 <= rep.portrait_divergence <= 1
    assert len(rep.participation_histograms["original"]) == 20
    assert sum(rep.participation_histograms["original"]) == 34
    inter, intra = rep.inter_intra["backbone_original_partition"]
    assert inter + intra == pytest.approx(rep.backbone.total_weight)


def test_containment_violation(karate):
    other = make_graph(2, [(0, 1, 1)])
    with pytest.raises(ContainmentError):
        evaluate(karate, other)
    from spine.graph import Graph

    g = Graph.from_edges(karate.labels, [(0, 1, 99)])
    with pytest.raises(ContainmentError):
        evaluate(karate, g)


def test_report_json_round_trip(karate):
    rep = evaluate(karate, global_threshold(karate, 0.3), EvaluationOptions(seed=0))
    again = MetricsReport.from_json(rep.to_json())
    assert again == rep
    assert again.to_json() == rep.to_json()


def test_spectral_skip_is_recorded(karate):
    rep = evaluate(karate, global_threshold(karate, 0.5), EvaluationOptions(seed=0, spectral_node_limit=10))
    assert rep.laplacian_distance is None and rep.netlsd_distance is None
    assert rep.provenance["spectral_skipped"] is True
    forced = evaluate(karate, global_threshold(karate, 0.5), EvaluationOptions(seed=0, spectral_node_limit=10, force_spectral=True))
    assert forced.laplacian_distance is not None


def test_provenance_embeds_seeds(karate):
    rep = evaluate(karate, global_threshold(karate, 0.3), EvaluationOptions(seed=0))
    assert rep.provenance["original_partition_seed"] == 0
    assert rep.provenance["backbone"]["method"] == "global_threshold"
    assert "tiebreak" in rep.provenance


def test_sweep_full_fraction_zero_distances(karate):
    rows = sweep(karate, ExtractionPlan("gt", 1.0, 0), [1.0])
    t = table(rows)
    for mode in ("classical", "multilevel"):
        for m in ("portrait_divergence", "laplacian_distance", "netlsd_distance", "ks_degree", "ks_weight"):
            assert t[(1.0, mode, m)] == 0


FRACTIONS = [round(0.1 * i, 1) for i in range(1, 10)]


@pytest.fixture(scope="module")
def karate_sweep(karate):
    return sweep(karate, ExtractionPlan("gt", 0.1, 0), FRACTIONS)


def test_sweep_shape(karate_sweep):
    for metric in SWEEP_METRICS:
        assert len([r for r in karate_sweep if r["metric"] == metric]) == 18


def test_sweep_portrait_trend(karate_sweep):
    t = table(karate_sweep)
    for mode in ("classical", "multilevel"):
        curve = [t[(f, mode, "portrait_divergence")] for f in FRACTIONS]
        assert all(b <= a + 0.05 for a, b in zip(curve, curve[1:])), curve


def test_classical_threshold_keeps_more_weight_at_equal_budget(karate_sweep):
    t = table(karate_sweep)
    for f in FRACTIONS:
        if t[(f, "multilevel", "edges")] <= t[(f, "classical", "edges")]:
            assert t[(f, "classical", "preserved_weight_fraction")] >= t[(f, "multilevel", "preserved_weight_fraction")]


def test_sweep_validation(karate):
    plan = ExtractionPlan("gt", 0.3, 0)
    for bad in ([], [0.0], [0.5, 0.2], [1.5]):
        with pytest.raises(ValueError):
            sweep(karate, plan, bad)


def test_sweep_csv(tmp_path, karate):
    rows = sweep(karate, ExtractionPlan("df", 0.3, 0), [0.5, 1.0])
    write_sweep_csv(rows, tmp_path / "s.csv")
    with open(tmp_path / "s.csv") as fh:
        got = list(csv.DictReader(fh))
    assert list(got[0]) == ["fraction", "mode", "filter", "metric", "value"]
    assert len(got) == len(rows) == 2 * 2 * len(SWEEP_METRICS)
    assert {r["filter"] for r in got} == {"disparity"}


def test_backbone_modularity_uses_fresh_partition(karate):
    bb = global_threshold(karate, 0.3)
    rep = evaluate(karate, bb, EvaluationOptions(seed=0))
    from spine.community import modularity

    assert rep.modularity_backbone == pytest.approx(modularity(bb.graph, louvain(bb.graph, 0)))
