#pragma once

#include <iosfwd>
#include <string>

#include "skyway/network.hpp"

namespace skyway {

/// Parses a network file. Throws ParseError for malformed text and
/// ValidationError for structural problems (dangling edge endpoints,
/// duplicate ids, empty node or edge lists).
SkywayNetwork load_network(std::istream& in);
SkywayNetwork load_network_string(const std::string& text);
SkywayNetwork load_network_file(const std::string& path);

/// Writes the network file format; the output re-parses to an equal
/// network. A zero-edge network still serializes (it fails reload).
void save_network(const SkywayNetwork& net, std::ostream& out);
std::string save_network_string(const SkywayNetwork& net);
void save_network_file(const SkywayNetwork& net, const std::string& path);

}  // namespace skyway
