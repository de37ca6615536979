#include "stackpnr/anneal.hpp"

#include <algorithm>
#include <cmath>

namespace stackpnr {

bool accept_move(double delta, double temperature, double r)
{
    if (delta < 0)
        return true;
    return r < std::exp(-delta / temperature);
}

void CoolingTracker::reset() { count_ = 0; }

void CoolingTracker::record_improvement(double cost_after)
{
    if (count_ == 0)
        first_ = cost_after;
    last_ = cost_after;
    ++count_;
}

double CoolingTracker::alpha(const SaSchedule &schedule) const
{
    if (count_ < 2 || first_ <= 0.0)
        return clamp_alpha(schedule.fallback_alpha, schedule);
    return clamp_alpha(last_ / first_, schedule);
}

double clamp_alpha(double alpha, const SaSchedule &schedule) { return std::clamp(alpha, schedule.alpha_min, schedule.alpha_max); }

std::string_view stop_reason_name(StopReason reason)
{
    switch (reason) {
    case StopReason::ZeroInitialCost:
        return "zero_initial_cost";
    case StopReason::ZeroCost:
        return "zero_cost";
    case StopReason::MinTemperature:
        return "min_temperature";
    case StopReason::StallNoImprovement:
        return "stall_no_improvement";
    case StopReason::StallNoAcceptance:
        return "stall_no_acceptance";
    }
    return "?";
}

StallDetector::StallDetector(const SaSchedule &schedule, int64_t moves_per_temperature)
    : min_improvement_(schedule.stall_min_improvement), window_(schedule.stall_window),
      idle_limit_(static_cast<int64_t>(schedule.stall_idle_factor) * moves_per_temperature)
{
}

void StallDetector::record_move(bool accepted)
{
    if (accepted) {
        idle_moves_ = 0;
        return;
    }
    if (++idle_moves_ >= idle_limit_ && !reason_)
        reason_ = StopReason::StallNoAcceptance;
}

void StallDetector::end_temperature(double best_cost)
{
    best_history_.push_back(best_cost);
    if (static_cast<int>(best_history_.size()) > window_ + 1)
        best_history_.pop_front();
    if (static_cast<int>(best_history_.size()) == window_ + 1 && !reason_) {
        const double before = best_history_.front();
        if (before - best_cost < min_improvement_ * before)
            reason_ = StopReason::StallNoImprovement;
    }
}

} // namespace stackpnr
