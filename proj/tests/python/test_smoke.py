import json
import os
from pathlib import Path

import pytest

import stackpnr

DATA = Path(os.environ.get("STACKPNR_DATA_DIR", Path(__file__).resolve().parents[2] / "data"))
ARCH = DATA / "reference_arch.yaml"


def fixture(name):
    return (DATA / "fixtures" / f"{name}.blif").read_text()


def test_parse_and_pack():
    nl = stackpnr.parse_blif(fixture("chain3"))
    assert nl.lut_count == 3
    blocks = stackpnr.pack_blocks(nl)
    assert blocks.block_count > nl.lut_count
    assert blocks.dump().count("\n") == blocks.block_count


def test_parse_error_carries_kind():
    with pytest.raises(stackpnr.StackpnrError) as info:
        stackpnr.parse_blif(".model m\n.inputs a\n.outputs y\n.names a y\n2 1\n.end\n")
    assert info.value.kind == "MalformedTruthTableRow"


def test_formulas():
    assert stackpnr.sb_switch_count(24, False) == 36
    assert stackpnr.sb_switch_count(24, True) == 60
    assert stackpnr.max_manhattan_distance(10, 10, 4, 20) == 80
    arch = stackpnr.load_arch_file(str(ARCH))
    assert stackpnr.tsv_rc_delay(arch.tsv) == pytest.approx(1.05e-15, rel=0, abs=1e-30)


def test_partition_two_cliques():
    edges = [(b + i, b + j, 1) for b in (0, 4) for i in range(4) for j in range(i + 1, 4)]
    edges.append((3, 4, 1))
    g = stackpnr.CircuitGraph(8, edges)
    r = stackpnr.partition(g, 2, seed=3)
    assert r["cut"] == 1
    assert stackpnr.cut_size(g, r["tier_of"], 2) == 1


def test_swap_delta_matches_recount():
    g = stackpnr.CircuitGraph(4, [(0, 1, 1), (1, 2, 2), (2, 3, 1), (0, 3, 3)])
    tier_of = [0, 0, 1, 1]
    before = stackpnr.cut_size(g, tier_of, 2)
    delta = stackpnr.swap_delta_cost(g, tier_of, 2, 0, 2)
    after = stackpnr.cut_size(g, [1, 0, 0, 1], 2)
    assert after - before == delta


def test_critical_path():
    r = stackpnr.critical_path(["a", "b", "c"], [(0, 1, 1e-9), (1, 2, 2e-9), (0, 2, 1e-9)])
    assert r["cpd"] == pytest.approx(3e-9)
    assert r["path"] == [0, 1, 2]


def test_place_and_route():
    arch = stackpnr.load_arch_file(str(ARCH))
    blocks = stackpnr.pack_blocks(stackpnr.parse_blif(fixture("adder4")))
    g = stackpnr.build_graph(blocks)
    part = stackpnr.partition(g, arch.tiers, seed=2)
    r = stackpnr.place_and_route(blocks, part["tier_of"], arch, seed=2)
    assert r["success"]
    assert r["width"] % 2 == 0
    assert r["cpd"] > 0


def test_run_flow(tmp_path):
    blif = DATA / "fixtures" / "counter4.blif"
    m = stackpnr.run_flow(str(ARCH), str(blif), tiers=2, seed=5, out_dir=str(tmp_path), auto_grid=True)
    assert m.tiers == 2
    assert m.wmin >= 2
    assert len(m.per_tier) == 2
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["wmin"] == m.wmin
    assert stackpnr.FlowMetrics.from_json(m.to_json()) == m
    assert "counter4" in stackpnr.emit_table([m]) or m.circuit in stackpnr.emit_table([m])
