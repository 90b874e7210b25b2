#pragma once

#include <cstdint>
#include <string>

#include "tdmjls/mjls.hpp"
#include "tdmjls/model.hpp"

namespace tdmjls {

/// A fully specified experiment: model, network, algorithm parameters and
/// reproducibility knobs. Omitted optional fields take the documented
/// defaults (uniform mu0, K=500, T=10000, seed=0, size_guard=5000,
/// theta0=zeros).
struct Scenario {
    MultiAgentMdp mdp;
    CommNetwork net;
    double alpha = 0.0;
    Matrix theta0;               // p x M
    Vector initial_state_dist;   // length |S|
    std::int64_t horizon = 500;
    std::int64_t trials = 10000;
    std::uint64_t seed = 0;
    int size_guard = kDefaultSizeGuard;
};

/// Parses the JSON scenario file and applies defaults. Structural problems
/// (missing keys, wrong dimensions, non-finite numbers) throw
/// StructuralError; the file's invariants are not checked here.
Scenario parse_scenario(const std::string& path);

/// Full scenario validation report: MDP/network invariants plus the
/// initial-state distribution check.
ValidationReport validate(const Scenario& scenario);

/// parse_scenario followed by validation; throws ValidationError carrying
/// the complete report when any check fails.
Scenario load_scenario(const std::string& path);

std::uint64_t scenario_fingerprint(const Scenario& scenario);

}  // namespace tdmjls
