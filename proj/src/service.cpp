#include "skyway/service.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

namespace skyway {

namespace {

const DroneProfile kDefaultDrone{"drone-0", 1e9, 1e9};

DroneDeliveryService make_service(const SkywayNetwork& net,
                                  const std::string& id, int from, int to,
                                  double start_time, double speed) {
    const double length = net.edge_length(from, to);
    DroneDeliveryService svc;
    svc.service_id = id;
    svc.drone = kDefaultDrone;
    svc.start_location = from;
    svc.end_location = to;
    svc.start_time = start_time;
    svc.end_time = start_time + length / speed;
    svc.qos = {{"length", length},
               {"cost", length},
               {"battery", length},
               {"flight_time", length / speed}};
    return svc;
}

std::vector<DroneDeliveryService> services_along(const SkywayNetwork& net,
                                                 const std::vector<int>& nodes,
                                                 const std::string& id_prefix,
                                                 double start_time,
                                                 double speed) {
    std::vector<DroneDeliveryService> out;
    double t = start_time;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        out.push_back(make_service(net,
                                   id_prefix + std::to_string(out.size()),
                                   nodes[i], nodes[i + 1], t, speed));
        t = out.back().end_time;
    }
    return out;
}

double plan_length(const std::vector<DroneDeliveryService>& services) {
    double total = 0.0;
    for (const auto& s : services) total += s.qos.at("length");
    return total;
}

}  // namespace

CompositionPlan compose_initial(const SkywayNetwork& net,
                                const CustomerDeliveryRequest& request,
                                double speed) {
    if (!(speed > 0.0)) {
        throw Error("compose_initial: speed must be positive");
    }
    if (request.source == request.destination) {
        throw Error("compose_initial: source equals destination");
    }
    SearchOutcome out =
        dijkstra(NetworkView(net), request.source, request.destination);
    if (!out.path) {
        throw Error("compose_initial: destination unreachable");
    }
    CompositionPlan plan;
    plan.request = request;
    plan.speed = speed;
    plan.services = services_along(net, out.path->nodes, "svc-",
                                   request.start_time, speed);
    plan.total_length = out.path->total_length;
    return plan;
}

CompositionPlan splice_plan(const SkywayNetwork& net,
                            const CompositionPlan& original,
                            const FailureEvent& failure, const Path& subpath) {
    const auto [fu, fv] = failure.failed_edge;
    if (subpath.nodes.size() < 2 || subpath.nodes.front() != fu ||
        subpath.nodes.back() != fv) {
        throw Error("splice_plan: subpath endpoints do not match failed edge");
    }
    std::size_t k = original.services.size();
    for (std::size_t i = 0; i < original.services.size(); ++i) {
        if (original.services[i].start_location == fu &&
            original.services[i].end_location == fv) {
            k = i;
            break;
        }
    }
    if (k == original.services.size()) {
        throw Error("splice_plan: failed edge is not a segment of the plan");
    }

    CompositionPlan plan;
    plan.request = original.request;
    plan.speed = original.speed;
    plan.services.assign(original.services.begin(),
                         original.services.begin() + k);

    double t = k == 0 ? original.request.start_time
                      : original.services[k - 1].end_time;
    const std::string prefix = "svc-" + std::to_string(k) + "-r";
    auto replacement = services_along(net, subpath.nodes, prefix, t, plan.speed);
    plan.services.insert(plan.services.end(), replacement.begin(),
                         replacement.end());
    t = plan.services.back().end_time;

    for (std::size_t i = k + 1; i < original.services.size(); ++i) {
        DroneDeliveryService svc = original.services[i];
        const double duration = svc.qos.at("length") / plan.speed;
        svc.start_time = t;
        svc.end_time = t + duration;
        t = svc.end_time;
        plan.services.push_back(std::move(svc));
    }
    plan.total_length = plan_length(plan.services);
    return plan;
}

std::pair<CompositionPlan, RecompositionResult> handle_failure(
    const SkywayNetwork& net, const CompositionPlan& plan,
    const FailureEvent& failure, Strategy strategy,
    const HandleFailureParams& params) {
    const auto [fu, fv] = failure.failed_edge;
    std::size_t k = plan.services.size();
    for (std::size_t i = 0; i < plan.services.size(); ++i) {
        const auto& svc = plan.services[i];
        if ((svc.start_location == fu && svc.end_location == fv) ||
            (svc.start_location == fv && svc.end_location == fu)) {
            k = i;
            break;
        }
    }
    if (k == plan.services.size()) {
        throw Error("handle_failure: failed edge is not a segment of the plan");
    }
    const DroneDeliveryService& segment = plan.services[k];
    if (segment.start_time < failure.timestamp - 1e-9) {
        throw Error("handle_failure: segment already traversed at failure time");
    }

    const NetworkView failed = with_failed_edge(net, fu, fv);
    const int from = segment.start_location;
    const int to = segment.end_location;
    const double cell =
        params.cell_size > 0.0 ? params.cell_size : net.network_size() / 20.0;

    if (strategy == Strategy::kGlobal) {
        SearchOutcome out =
            dijkstra(failed, from, plan.request.destination);
        RecompositionResult result;
        result.allowed_node_counts.push_back(net.num_nodes());
        result.allowed_edge_counts.push_back(net.num_edges());
        result.regions.emplace_back(WholeNetwork{});
        result.iterations = 1;
        result.search_elapsed = out.stats.elapsed;
        if (!out.path) {
            throw Error("handle_failure: destination unreachable");
        }
        result.path = out.path;

        CompositionPlan next;
        next.request = plan.request;
        next.speed = plan.speed;
        next.services.assign(plan.services.begin(), plan.services.begin() + k);
        const double t = k == 0 ? plan.request.start_time
                                : plan.services[k - 1].end_time;
        const std::string prefix = "svc-" + std::to_string(k) + "-g";
        auto tail = services_along(net, out.path->nodes, prefix, t, next.speed);
        next.services.insert(next.services.end(), tail.begin(), tail.end());
        next.total_length = plan_length(next.services);
        return {std::move(next), std::move(result)};
    }

    RecompositionResult result;
    switch (strategy) {
        case Strategy::kRadius:
            result = radius_recompose(failed, from, to);
            break;
        case Strategy::kCellDensity:
            result = cell_density_recompose(failed, from, to, cell);
            break;
        case Strategy::kTwoPhased:
            result = two_phased_recompose(failed, from, to,
                                          {params.val_frac, true});
            break;
        case Strategy::kGlobal:
            break;  // handled above
    }
    if (!result.path) {
        throw Error("handle_failure: destination unreachable");
    }
    // splice_plan matches the plan's direction for the failed segment
    FailureEvent oriented = failure;
    oriented.failed_edge = {from, to};
    CompositionPlan next = splice_plan(net, plan, oriented, *result.path);
    return {std::move(next), std::move(result)};
}

std::string plan_to_json(const CompositionPlan& plan) {
    using nlohmann::json;
    json j;
    j["request"] = {{"source", plan.request.source},
                    {"destination", plan.request.destination},
                    {"start_time", plan.request.start_time},
                    {"package_weight", plan.request.package_weight}};
    j["speed"] = plan.speed;
    j["total_length"] = plan.total_length;
    json services = json::array();
    for (const auto& svc : plan.services) {
        services.push_back({{"service_id", svc.service_id},
                            {"drone", svc.drone.id},
                            {"start_location", svc.start_location},
                            {"end_location", svc.end_location},
                            {"start_time", svc.start_time},
                            {"end_time", svc.end_time},
                            {"qos", svc.qos}});
    }
    j["services"] = std::move(services);
    return j.dump(2);
}

}  // namespace skyway
