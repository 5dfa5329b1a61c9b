#pragma once

#include <cstdint>
#include <string>

#include "planexec/executor.hpp"

namespace planexec::sim {

struct SimConfig {
    int robots = 1;  // 1..3
    enum class Profile { Simulated, Realistic };
    Profile profile = Profile::Simulated;
    double horizon_s = 2000.0;
    double battery_period_s = 300.0;  // <= 0 disables periodic low-battery events
    std::uint64_t seed = 42;
    std::string hub_log_path;     // optional: tee full auction traffic
    std::string status_log_path;  // optional: executor event records (JSONL)
    std::string dot_dir;          // optional: per-plan dependency graphs
};

struct Metrics {
    double total_time = 0.0;
    int plans = 0;
    int actions = 0;       // successfully executed actions
    double efficiency = 0.0;  // 100 * executed action time / total time
    int fails = 0;
    int replans = 0;
    int dishes = 0;        // successful cook executions

    bool operator==(const Metrics&) const = default;
};

/// Runs the kitchen scenario on a virtual clock: the controller draws two
/// random dishes, plans and executes, and immediately draws again; periodic
/// low-battery events cancel the running plan, constrain the robot to moving
/// and force a replan through a recharge. Fully deterministic per seed.
Metrics run_experiment(const SimConfig& cfg);

/// Appends one metrics column to a CSV (creating it when absent). Rows:
/// TotalTime, Plans, Actions, Efficiency, Fails, Replans, Dishes.
void export_metrics(const Metrics& m, const std::string& path);

/// Recomputes efficiency from a hub log: per confirmed auction, the span from
/// CONFIRM to the matching FINISH counts as executed action time.
double efficiency_from_hub_log(const std::string& hub_log_text, double total_time);

}  // namespace planexec::sim
