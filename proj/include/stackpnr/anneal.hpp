#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <string_view>
#include <vector>

namespace stackpnr {

// Annealing schedule shared by the partitioner and the placer.
struct SaSchedule
{
    // Defaults to the cost of the initial solution.
    std::optional<double> initial_temperature;
    double min_temperature = 0.5;
    // Used when a temperature saw fewer than two improving moves.
    double fallback_alpha = 0.9;
    double alpha_min = 0.5;
    double alpha_max = 0.99;
    // 0 selects the per-stage default (10 x problem size).
    int moves_per_temperature = 0;
    // Stall when the best cost improves by less than this fraction over
    // `stall_window` consecutive temperatures...
    double stall_min_improvement = 0.001;
    int stall_window = 5;
    // ...or when this many times N consecutive candidate moves are rejected.
    int stall_idle_factor = 20;
    uint64_t seed = 1;
};

/// Metropolis rule: improving moves are always taken, anything else is taken
/// when r < exp(-delta / T). r is a uniform draw in [0, 1).
bool accept_move(double delta, double temperature, double r);

/// Cooling coefficient for the next temperature: cost after the last
/// improving move over cost after the first one. Falls back to
/// schedule.fallback_alpha with fewer than two improving moves and always
/// clamps into [alpha_min, alpha_max].
class CoolingTracker
{
  public:
    void reset();
    // Record Cost_current after an accepted move with negative delta.
    void record_improvement(double cost_after);
    int improvements() const { return count_; }
    double alpha(const SaSchedule &schedule) const;

  private:
    int count_ = 0;
    double first_ = 0.0;
    double last_ = 0.0;
};

double clamp_alpha(double alpha, const SaSchedule &schedule);

enum class StopReason
{
    ZeroInitialCost,
    ZeroCost,
    MinTemperature,
    StallNoImprovement,
    StallNoAcceptance,
};

std::string_view stop_reason_name(StopReason reason);

class StallDetector
{
  public:
    StallDetector(const SaSchedule &schedule, int64_t moves_per_temperature);

    void record_move(bool accepted);
    void end_temperature(double best_cost);
    bool stalled() const { return reason_.has_value(); }
    std::optional<StopReason> reason() const { return reason_; }

  private:
    double min_improvement_;
    int window_;
    int64_t idle_limit_;
    int64_t idle_moves_ = 0;
    std::deque<double> best_history_;
    std::optional<StopReason> reason_;
};

struct TemperatureRecord
{
    double temperature = 0.0;
    double alpha = 0.0;
    int64_t moves = 0;
    int64_t accepted = 0;
    int improvements = 0;
    double cost = 0.0;
    double best_cost = 0.0;
};

struct AnnealTrace
{
    double initial_cost = 0.0;
    double initial_temperature = 0.0;
    int64_t moves_per_temperature = 0;
    std::vector<TemperatureRecord> temperatures;
    StopReason stop = StopReason::MinTemperature;
};

} // namespace stackpnr
