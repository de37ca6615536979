#pragma once

#include <string>

#include "stackpnr/arch.hpp"
#include "stackpnr/flow.hpp"
#include "stackpnr/netlist.hpp"

#ifndef STACKPNR_DATA_DIR
#error "STACKPNR_DATA_DIR must point at the data directory"
#endif

namespace fixtures {

inline std::string data_path(const std::string &rel) { return std::string(STACKPNR_DATA_DIR) + "/" + rel; }

inline stackpnr::Arch3D reference_arch() { return stackpnr::load_arch_file(data_path("reference_arch.yaml")); }

inline stackpnr::BlockNetlist packed(const std::string &blif, int cluster_size = 1)
{
    return stackpnr::pack_blocks(stackpnr::parse_blif(blif), cluster_size);
}

inline stackpnr::BlockNetlist packed_fixture(const std::string &name)
{
    return packed(stackpnr::read_text_file(data_path("fixtures/" + name + ".blif")));
}

} // namespace fixtures
