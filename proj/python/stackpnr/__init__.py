"""Python bindings for the stackpnr 3D FPGA place-and-route flow."""

from ._core import (
    Arch3D,
    BlockNetlist,
    CircuitGraph,
    FlowMetrics,
    Netlist,
    StackpnrError,
    TierMetrics,
    TsvParams,
    build_graph,
    chart_series,
    critical_path,
    cut_size,
    dmax,
    emit_table,
    is_3d_sb,
    load_arch,
    load_arch_file,
    max_manhattan_distance,
    pack_blocks,
    parse_blif,
    partition,
    place_and_route,
    run_flow,
    sb_switch_count,
    swap_delta_cost,
    transistor_count,
    tsv_rc_delay,
)

__all__ = [name for name in dir() if not name.startswith("_")]
