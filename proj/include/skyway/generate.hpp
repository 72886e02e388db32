#pragma once

#include "skyway/network.hpp"

namespace skyway {

/// Random geometric network: num_nodes points uniform in
/// [0, network_size]^2, each connected toward its nearest neighbors
/// within radius neighbor_radius_frac * network_size (at most
/// max_connectivity candidates per node, symmetric union), restricted to
/// the largest connected component and re-indexed densely. Pure function
/// of params including seed. Throws Error when no edges can be formed.
SkywayNetwork generate_network(const GenParams& params);

}  // namespace skyway
