#include "tdmjls/sim.hpp"

#include <cmath>
#include <random>

namespace tdmjls {

namespace {

/// Kahan-compensated accumulator; keeps trial sums exact enough that the
/// zero-variance degenerate case stays at machine precision.
struct Accumulator {
    double sum = 0.0;
    double carry = 0.0;

    void add(double v)
    {
        const double y = v - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

int sample_index(const Eigen::Ref<const Vector>& probs, double u)
{
    double cum = 0.0;
    const int n = static_cast<int>(probs.size());
    for (int i = 0; i < n; ++i) {
        cum += probs(i);
        if (u < cum) return i;
    }
    return n - 1;  // guard against cumulative rounding
}

/// One synchronous update given the observed transition (s, s_next).
Matrix td_update(const MultiAgentMdp& mdp, const CommNetwork& net, const Matrix& theta,
                 double alpha, int s, int s_next)
{
    const Vector phi = mdp.feature(s);
    const Vector phi_next = mdp.feature(s_next);
    const Vector direction = mdp.discount * phi_next - phi;

    Eigen::RowVectorXd d = direction.transpose() * theta;  // per-agent TD errors
    for (int m = 0; m < mdp.num_agents(); ++m) d(m) += mdp.rewards[m](s, s_next);
    return theta * net.weights.transpose() + alpha * phi * d;
}

void check_run_inputs(const MultiAgentMdp& mdp, const CommNetwork& net,
                      const Vector& mu0, const Matrix& theta0, std::int64_t horizon)
{
    if (horizon < 0) throw StructuralError("horizon must be nonnegative");
    if (mu0.size() != mdp.num_states || mu0.minCoeff() < 0.0 ||
        std::abs(mu0.sum() - 1.0) > 1e-12)
        throw StructuralError("initial_state_dist is not a probability vector over |S|");
    if (theta0.rows() != mdp.feature_dim() || theta0.cols() != mdp.num_agents())
        throw StructuralError("theta0 must be p x M");
    if (net.num_agents() != mdp.num_agents())
        throw StructuralError("network size does not match reward tables");
}

}  // namespace

std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial)
{
    std::uint64_t z = master + (trial + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

TdRunResult run_td0(const MultiAgentMdp& mdp, const CommNetwork& net,
                    const Vector& initial_state_dist, double alpha,
                    const Matrix& theta0, std::int64_t horizon, std::uint64_t seed)
{
    check_run_inputs(mdp, net, initial_state_dist, theta0, horizon);

    std::mt19937_64 rng(trial_seed(seed, 0));
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    TdRunResult out;
    out.seed = seed;
    out.weights.reserve(horizon + 1);
    out.state_path.reserve(horizon + 2);

    int s = sample_index(initial_state_dist, unif(rng));
    out.state_path.push_back(s);
    Matrix theta = theta0;
    out.weights.push_back(theta);

    for (std::int64_t k = 0; k <= horizon; ++k) {
        const int s_next = sample_index(mdp.transition.row(s).transpose(), unif(rng));
        out.state_path.push_back(s_next);
        if (k < horizon) {
            theta = td_update(mdp, net, theta, alpha, s, s_next);
            out.weights.push_back(theta);
        }
        s = s_next;
    }
    return out;
}

McEstimate monte_carlo_error(const MultiAgentMdp& mdp, const CommNetwork& net,
                             const Vector& initial_state_dist, double alpha,
                             const Matrix& theta0, std::int64_t horizon,
                             std::int64_t trials, std::uint64_t seed)
{
    check_run_inputs(mdp, net, initial_state_dist, theta0, horizon);
    if (trials < 2) throw StructuralError("at least 2 trials are required");

    const JumpChain chain = build_jump_chain(mdp, initial_state_dist);
    const MeanDynamics dynamics = mean_dynamics(mdp, chain);
    const Matrix theta_star_block = dynamics.theta_star.replicate(1, mdp.num_agents());
    const double inv_m = 1.0 / static_cast<double>(mdp.num_agents());

    std::vector<Accumulator> sums(horizon + 1), sq_sums(horizon + 1);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    for (std::int64_t t = 0; t < trials; ++t) {
        // Same draw order as run_td0 so a trial replays as run_td0 with
        // seed trial_seed(seed, t).
        std::mt19937_64 rng(trial_seed(trial_seed(seed, t), 0));
        int s = sample_index(initial_state_dist, unif(rng));
        Matrix theta = theta0;
        for (std::int64_t k = 0; k <= horizon; ++k) {
            const double err = inv_m * (theta - theta_star_block).squaredNorm();
            sums[k].add(err);
            sq_sums[k].add(err * err);
            if (k == horizon) break;
            const int s_next = sample_index(mdp.transition.row(s).transpose(), unif(rng));
            theta = td_update(mdp, net, theta, alpha, s, s_next);
            s = s_next;
        }
    }

    McEstimate est;
    est.trials = trials;
    est.seed = seed;
    est.deltas_hat.resize(horizon + 1);
    est.stderrs.resize(horizon + 1);
    const double n = static_cast<double>(trials);
    for (std::int64_t k = 0; k <= horizon; ++k) {
        const double mean = sums[k].sum / n;
        const double var = std::max(0.0, (sq_sums[k].sum - sums[k].sum * mean) / (n - 1.0));
        est.deltas_hat[k] = mean;
        est.stderrs[k] = std::sqrt(var / n);
    }
    return est;
}

std::vector<double> enumerate_error(const MultiAgentMdp& mdp, const CommNetwork& net,
                                    const Vector& initial_state_dist, double alpha,
                                    const Matrix& theta0, std::int64_t horizon)
{
    check_run_inputs(mdp, net, initial_state_dist, theta0, horizon);

    double budget = 1.0;
    for (std::int64_t k = 0; k < horizon + 2; ++k) {
        budget *= static_cast<double>(mdp.num_states);
        if (budget > 1e6)
            throw PathBudgetError("path enumeration over |S|^(K+2) paths exceeds 1e6; reduce K or |S|");
    }

    const JumpChain chain = build_jump_chain(mdp, initial_state_dist);
    const MeanDynamics dynamics = mean_dynamics(mdp, chain);
    const Matrix theta_star_block = dynamics.theta_star.replicate(1, mdp.num_agents());
    const double inv_m = 1.0 / static_cast<double>(mdp.num_agents());

    std::vector<double> deltas(horizon + 1, 0.0);

    // Depth-first walk over state-path prefixes; a prefix's probability is
    // the sum over all its full-path continuations.
    auto visit = [&](auto&& self, int s, const Matrix& theta, double prob, std::int64_t k) -> void {
        deltas[k] += prob * inv_m * (theta - theta_star_block).squaredNorm();
        if (k == horizon) return;
        for (int s_next = 0; s_next < mdp.num_states; ++s_next) {
            const double p = mdp.transition(s, s_next);
            if (p == 0.0) continue;
            self(self, s_next, td_update(mdp, net, theta, alpha, s, s_next), prob * p, k + 1);
        }
    };
    for (int s0 = 0; s0 < mdp.num_states; ++s0)
        if (initial_state_dist(s0) > 0.0)
            visit(visit, s0, theta0, initial_state_dist(s0), 0);
    return deltas;
}

}  // namespace tdmjls
