#include "skyway/io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace skyway {

namespace {

using nlohmann::json;

double require_number(const json& obj, const char* field, const char* where) {
    auto it = obj.find(field);
    if (it == obj.end() || !it->is_number()) {
        throw ParseError(std::string(where) + ": missing or non-numeric '" +
                         field + "'");
    }
    return it->get<double>();
}

int require_int(const json& obj, const char* field, const char* where) {
    auto it = obj.find(field);
    if (it == obj.end() || !it->is_number_integer()) {
        throw ParseError(std::string(where) + ": missing or non-integer '" +
                         field + "'");
    }
    return it->get<int>();
}

}  // namespace

SkywayNetwork load_network(std::istream& in) {
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError(std::string("network file: ") + e.what());
    }
    if (!doc.is_object()) {
        throw ParseError("network file: top-level value must be an object");
    }
    auto nodes_it = doc.find("nodes");
    auto edges_it = doc.find("edges");
    if (nodes_it == doc.end() || !nodes_it->is_array()) {
        throw ParseError("network file: missing 'nodes' array");
    }
    if (edges_it == doc.end() || !edges_it->is_array()) {
        throw ParseError("network file: missing 'edges' array");
    }

    std::vector<Node> nodes;
    nodes.reserve(nodes_it->size());
    std::size_t i = 0;
    for (const json& jn : *nodes_it) {
        const std::string where = "nodes[" + std::to_string(i++) + "]";
        if (!jn.is_object()) {
            throw ParseError(where + ": not an object");
        }
        Node n;
        n.id = require_int(jn, "id", where.c_str());
        n.x = require_number(jn, "x", where.c_str());
        n.y = require_number(jn, "y", where.c_str());
        nodes.push_back(n);
    }
    if (nodes.empty()) {
        throw ValidationError("network file: node list is empty");
    }

    // Coordinates drive edge lengths; look them up before constructing so
    // an absent 'length' can be recomputed.
    std::unordered_map<int, Point> pos;
    pos.reserve(nodes.size());
    for (const Node& n : nodes) pos[n.id] = n.pos();

    std::vector<Edge> edges;
    edges.reserve(edges_it->size());
    i = 0;
    for (const json& je : *edges_it) {
        const std::string where = "edges[" + std::to_string(i++) + "]";
        if (!je.is_object()) {
            throw ParseError(where + ": not an object");
        }
        Edge e;
        e.u = require_int(je, "u", where.c_str());
        e.v = require_int(je, "v", where.c_str());
        auto pu = pos.find(e.u);
        auto pv = pos.find(e.v);
        if (pu == pos.end() || pv == pos.end()) {
            throw ValidationError(where + ": edge references unknown node id");
        }
        auto len_it = je.find("length");
        if (len_it != je.end()) {
            if (!len_it->is_number()) {
                throw ParseError(where + ": non-numeric 'length'");
            }
            e.length = len_it->get<double>();
        } else {
            e.length = euclidean(pu->second, pv->second);
        }
        e.cost = e.length;
        e.battery = e.length;
        edges.push_back(e);
    }
    if (edges.empty()) {
        throw ValidationError("network file: edge list is empty");
    }

    std::uint64_t seed = 0;
    auto meta_it = doc.find("meta");
    if (meta_it != doc.end() && meta_it->is_object()) {
        auto seed_it = meta_it->find("seed");
        if (seed_it != meta_it->end() && seed_it->is_number_integer()) {
            seed = seed_it->get<std::uint64_t>();
        }
    }

    return SkywayNetwork(std::move(nodes), std::move(edges), seed);
}

SkywayNetwork load_network_string(const std::string& text) {
    std::istringstream in(text);
    return load_network(in);
}

SkywayNetwork load_network_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open network file: " + path);
    }
    return load_network(in);
}

void save_network(const SkywayNetwork& net, std::ostream& out) {
    json doc;
    doc["nodes"] = json::array();
    for (const Node& n : net.nodes()) {
        doc["nodes"].push_back({{"id", n.id}, {"x", n.x}, {"y", n.y}});
    }
    doc["edges"] = json::array();
    for (const Edge& e : net.edges()) {
        doc["edges"].push_back({{"u", e.u}, {"v", e.v}, {"length", e.length}});
    }
    doc["meta"] = {{"network_size", net.network_size()}, {"seed", net.seed()}};
    out << doc.dump(2) << "\n";
    if (!out) {
        throw Error("failed writing network stream");
    }
}

std::string save_network_string(const SkywayNetwork& net) {
    std::ostringstream out;
    save_network(net, out);
    return out.str();
}

void save_network_file(const SkywayNetwork& net, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot open output file: " + path);
    }
    save_network(net, out);
}

}  // namespace skyway
