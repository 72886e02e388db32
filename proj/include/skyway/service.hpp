#pragma once

#include <map>
#include <string>
#include <vector>

#include "skyway/reactive.hpp"

namespace skyway {

struct DroneDeliveryService {
    std::string service_id;
    DroneProfile drone;
    int start_location = 0;
    int end_location = 0;
    double start_time = 0.0;
    double end_time = 0.0;
    std::map<std::string, double> qos;  // length, cost, battery, flight_time
};

struct CustomerDeliveryRequest {
    int source = 0;
    int destination = 0;
    double start_time = 0.0;
    double package_weight = 1.0;
};

/// Ordered chain of per-edge services from the request source to its
/// destination. Immutable value; recomposition returns a new plan.
struct CompositionPlan {
    CustomerDeliveryRequest request;
    std::vector<DroneDeliveryService> services;
    double total_length = 0.0;
    double speed = 1.0;  // length units per time unit, for time stamping
};

/// Shortest-path plan over the full network; one service per edge with
/// sequential times starting at the request start time.
CompositionPlan compose_initial(const SkywayNetwork& net,
                                const CustomerDeliveryRequest& request,
                                double speed = 1.0);

/// Replaces the plan segment matching failure.failed_edge with the
/// subpath's segments and restamps times from the splice point onward.
/// Throws Error when the subpath endpoints do not match the segment.
CompositionPlan splice_plan(const SkywayNetwork& net,
                            const CompositionPlan& original,
                            const FailureEvent& failure, const Path& subpath);

enum class Strategy { kRadius, kCellDensity, kTwoPhased, kGlobal };

struct HandleFailureParams {
    double cell_size = 0.0;  // <= 0 picks network_size / 20
    double val_frac = 0.5;
};

/// Recomposes the plan around a failed segment that has not yet been
/// traversed. Local strategies reconnect the segment endpoints and
/// splice; kGlobal recomputes from the segment's start node to the
/// request destination over the failed view.
std::pair<CompositionPlan, RecompositionResult> handle_failure(
    const SkywayNetwork& net, const CompositionPlan& plan,
    const FailureEvent& failure, Strategy strategy,
    const HandleFailureParams& params = {});

std::string plan_to_json(const CompositionPlan& plan);

}  // namespace skyway
