#pragma once

#include <cstdint>

#include "sela/mission.hpp"

namespace sela::mission {

// Comparison methods. All of them learn first and then execute the task from
// the start pose, so learning steps are pure cost.

/// Phase 1 of babbling: random behaviors until the mean one-step-ahead
/// prediction error over the last drop-window samples falls below
/// epsilon_model, or babble_iterations. Returns the number of samples.
int learn_by_babbling(MissionState& mission, const Scenario& scenario, const MethodParams& params,
                      std::uint64_t seed);

/// Phase 1 of uncertainty sampling: exactly uncertainty_iterations picks of
/// the most uncertain candidate (step cap permitting).
int learn_by_uncertainty(MissionState& mission, const Scenario& scenario, const MethodParams& params);

RunRecord baseline_babbling(const Scenario& scenario, const MethodParams& params, std::uint64_t seed);
RunRecord baseline_uncertainty(const Scenario& scenario, const MethodParams& params,
                               std::uint64_t seed);

/// Episodic trial and error in four compass directions (+x, +y, -x, -y), the
/// pose being reset after every trial, followed by bang-bang execution with
/// the four learned behaviors.
RunRecord baseline_episodic_ite(const Scenario& scenario, const MethodParams& params,
                                std::uint64_t seed);

RunRecord run_method(Method method, const Scenario& scenario, const MethodParams& params,
                     std::uint64_t seed);

} // namespace sela::mission
