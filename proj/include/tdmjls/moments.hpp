#pragma once

#include <cstdint>
#include <vector>

#include "tdmjls/mjls.hpp"

namespace tdmjls {

/// Mode-conditioned first and second moments of the deviation state
/// xi^k = vec(Theta^k - Theta*): q_i = E[xi 1{z=i}], Q_i = E[xi xi^T 1{z=i}],
/// together with the mode marginal p_k.
struct MomentState {
    std::int64_t step = 0;
    std::vector<Vector> q;      // n vectors of length n_xi
    std::vector<Matrix> big_q;  // n symmetric n_xi x n_xi matrices
    Vector p_k;                 // length n

    Vector stacked_q() const;
    Vector stacked_q2() const;  // [vec(Q_1); ...; vec(Q_n)]
    double delta(int num_agents) const;  // (1/M) sum_i trace(Q_i)
};

/// Mean-squared estimation error trajectory delta^0..delta^K.
struct ErrorTrajectory {
    std::vector<double> deltas;
    std::vector<double> q_norms;   // ||E xi^k||_2 per step
    std::vector<double> trace_q;   // sum_i trace(Q_i^k) per step
    double alpha = 0.0;
    std::int64_t horizon = 0;
    std::uint64_t fingerprint = 0;
};

struct SteadyState {
    enum class Method { direct, fixed_point };
    Vector q_inf;      // length n * n_xi
    Vector q2_inf;     // length n * n_xi^2
    double delta_inf = 0.0;
    Method method = Method::direct;
};

/// Fitted tail decay of |delta^k - delta^inf| ~ c_hat * rho_hat^k.
struct RateEnvelope {
    double rho_hat = 0.0;
    double c_hat = 0.0;
    std::int64_t window_begin = 0;
    std::int64_t window_end = 0;
    int samples = 0;
};

/// Moments at k = 0 for a deterministic initial weight block Theta^0.
MomentState init_moments(const Matrix& theta0, const MeanDynamics& dynamics,
                         const JumpChain& chain);

/// One step of the exact recursion:
///   q_j'  = sum_i p_ij (H_i q_i + p_i G_i)
///   Q_j'  = sum_i p_ij (H_i Q_i H_i^T + 2 sym(H_i q_i G_i^T) + p_i G_i G_i^T)
///   p'    = P_z^T p
MomentState step_moments(const MomentState& state, const ModeSystem& modes,
                         const JumpChain& chain);

/// Exact delta^k for k = 0..horizon. Throws InstabilityError when a moment
/// entry exceeds 1e12 or turns non-finite.
ErrorTrajectory error_trajectory(const MultiAgentMdp& mdp, const CommNetwork& net,
                                 const Vector& initial_state_dist, double alpha,
                                 const Matrix& theta0, std::int64_t horizon);

/// Steady-state moments under sigma(H22) < 1: a direct linear solve when the
/// explicit matrices exist, otherwise fixed-point iteration of the recursion
/// at p_k = p_inf until the relative delta change drops below 1e-12.
SteadyState steady_state(const ModeSystem& modes, const JumpChain& chain,
                         const LtiMoments& lti);

/// Least-squares fit of log|delta^k - delta_inf| over the tail window
/// (first k with gap below 10% of the initial gap, through the last k with
/// gap above 1e-12). Throws InsufficientDataError below 5 usable samples.
RateEnvelope rate_envelope(const ErrorTrajectory& traj, const SteadyState& ss);

}  // namespace tdmjls
