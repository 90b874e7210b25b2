#pragma once

#include <cstdint>
#include <vector>

#include "tdmjls/model.hpp"

namespace tdmjls {

/// One stochastic run of the decentralized TD(0) iteration.
struct TdRunResult {
    std::vector<Matrix> weights;  // Theta^0..Theta^K, each p x M
    std::vector<int> state_path;  // s^0..s^{K+1}
    std::uint64_t seed = 0;
};

/// Per-step sample means and standard errors of (1/M) sum_m ||theta_m - theta*||^2.
struct McEstimate {
    std::vector<double> deltas_hat;
    std::vector<double> stderrs;
    std::int64_t trials = 0;
    std::uint64_t seed = 0;
};

/// Deterministic per-trial seed: index `trial` of the splitmix64 stream
/// started at `master`. Pure in (master, trial), so growing the trial count
/// never reseeds earlier trials.
std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial);

/// Synchronous decentralized TD(0): every agent consensus-averages the
/// neighbors' step-k weights, then adds its local TD correction. The RNG
/// (mt19937_64 seeded with splitmix64(seed)) draws s^0 from mu0 followed by
/// one uniform per transition; identical seeds replay bit-for-bit.
TdRunResult run_td0(const MultiAgentMdp& mdp, const CommNetwork& net,
                    const Vector& initial_state_dist, double alpha,
                    const Matrix& theta0, std::int64_t horizon, std::uint64_t seed);

McEstimate monte_carlo_error(const MultiAgentMdp& mdp, const CommNetwork& net,
                             const Vector& initial_state_dist, double alpha,
                             const Matrix& theta0, std::int64_t horizon,
                             std::int64_t trials, std::uint64_t seed);

/// Exact delta^0..delta^K by exhaustive enumeration of state paths with
/// their probabilities; the independent oracle for the moment recursion.
/// Throws PathBudgetError when |S|^(K+2) exceeds 1e6.
std::vector<double> enumerate_error(const MultiAgentMdp& mdp, const CommNetwork& net,
                                    const Vector& initial_state_dist, double alpha,
                                    const Matrix& theta0, std::int64_t horizon);

}  // namespace tdmjls
