#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "tdmjls/errors.hpp"

namespace tdmjls {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Finite multi-agent MDP under fixed local policies: the joint state
/// process is a plain Markov chain and each agent observes its own reward
/// table over state transitions.
struct MultiAgentMdp {
    int num_states = 0;           // |S|
    Matrix transition;            // |S| x |S| row-stochastic
    std::vector<Matrix> rewards;  // M tables, each |S| x |S|
    double discount = 0.0;        // gamma in (0,1)
    Matrix features;              // |S| x p, row s is phi(s)^T

    int num_agents() const { return static_cast<int>(rewards.size()); }
    int feature_dim() const { return static_cast<int>(features.cols()); }
    Vector feature(int s) const { return features.row(s).transpose(); }
};

/// Consensus weight matrix over the agent communication graph.
struct CommNetwork {
    Matrix weights;  // M x M, doubly stochastic

    int num_agents() const { return static_cast<int>(weights.rows()); }
};

/// Markov chain of consecutive state pairs z^k = (s^k, s^{k+1}).
///
/// Mode index i enumerates pairs (s_cur, s_next) in row-major order with
/// s_cur major: i = s_cur * |S| + s_next (0-based).
struct JumpChain {
    int num_states = 0;  // |S|
    int num_modes = 0;   // n = |S|^2
    Matrix transition;   // P_z, n x n row-stochastic
    Vector initial;      // p^0, length n
    Vector stationary;   // p^inf, length n
    double mixing_rate = 0.0;  // second-largest eigenvalue modulus of P_z

    std::pair<int, int> mode_pair(int i) const
    {
        return {i / num_states, i % num_states};
    }
    int mode_of(int s_cur, int s_next) const
    {
        return s_cur * num_states + s_next;
    }
};

/// Stationary averages of the per-mode update matrices and the fixed point
/// theta* of a_bar * theta + b_bar = 0.
struct MeanDynamics {
    Matrix a_bar;                       // p x p, Hurwitz
    std::vector<Vector> b_bar_agents;   // M vectors of length p
    Vector b_bar;                       // (1/M) sum of b_bar_agents
    Vector theta_star;                  // length p
};

/// Per-mode update data: a = phi(s) (gamma*phi(s') - phi(s))^T and the
/// columns of b are R_m(s,s') * phi(s).
struct ModeMatrices {
    Matrix a;  // p x p
    Matrix b;  // p x M
};

/// Runs every MultiAgentMdp and CommNetwork invariant and reports each as
/// pass/fail. Dimension mismatches and non-finite entries are structural
/// and throw instead of appearing in the report.
ValidationReport validate_scenario(const MultiAgentMdp& mdp, const CommNetwork& net);

/// Unique stationary distribution of an irreducible aperiodic row-stochastic
/// matrix, via eigendecomposition of P^T polished to a 1e-12 residual.
/// Throws ErgodicityError when the unit-modulus eigenvalue is not unique.
Vector stationary_distribution(const Matrix& transition);

/// Assembles the pair chain: p0_(s,s') = mu0(s) P_ss', transitions
/// (s,s') -> (s',t') with probability P_s't', stationary pi(s) P_ss'
/// cross-checked against the eigenvector computation.
JumpChain build_jump_chain(const MultiAgentMdp& mdp, const Vector& initial_state_dist);

ModeMatrices mode_matrices(const MultiAgentMdp& mdp, int mode);

/// Stationary-weighted mode averages. a_bar is cross-checked against the
/// closed form Phi^T diag(pi) (gamma P - I) Phi; throws NotHurwitzError when
/// a_bar has an eigenvalue with real part >= -1e-12.
MeanDynamics mean_dynamics(const MultiAgentMdp& mdp, const JumpChain& chain);

}  // namespace tdmjls
