#pragma once

#include <filesystem>
#include <string>

#include "volta/network.hpp"

namespace volta {

// Network document format (JSON):
//   {
//     "vertices": ["0", "1", "2"],
//     "base": "2",
//     "edges": [{"u": "0", "v": "1", "c": 1.0}, ...]
//   }
// Decoding problems raise ParseError; structural problems (duplicate edges,
// bad conductances, disconnection, ...) are validation matters and surface
// through Network::validation().

NetworkData network_data_from_json(const std::string& text);
std::string network_data_to_json(const NetworkData& data);

NetworkData load_network_data(const std::filesystem::path& path);
void save_network_data(const std::filesystem::path& path, const NetworkData& data);

Network load_network(const std::filesystem::path& path);

}  // namespace volta
