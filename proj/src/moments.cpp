#include "tdmjls/moments.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

#include "tdmjls/hash.hpp"

namespace tdmjls {

namespace {

constexpr double kBlowupThreshold = 1e12;
constexpr double kFixedPointRelTol = 1e-12;
constexpr std::int64_t kFixedPointMaxIters = 1000000;
constexpr double kStabilityMargin = 1e-12;
constexpr double kResidualTol = 1e-10;

Vector vec(const Matrix& m)
{
    return Eigen::Map<const Vector>(m.data(), m.size());
}

double max_abs_entry(const MomentState& s)
{
    double v = 0.0;
    for (const auto& q : s.q) v = std::max(v, q.cwiseAbs().maxCoeff());
    for (const auto& qq : s.big_q) v = std::max(v, qq.cwiseAbs().maxCoeff());
    return v;
}

bool state_finite(const MomentState& s)
{
    for (const auto& q : s.q)
        if (!q.allFinite()) return false;
    for (const auto& qq : s.big_q)
        if (!qq.allFinite()) return false;
    return true;
}

double sigma_h22_if_available(const ModeSystem& modes, const JumpChain& chain)
{
    const LtiMoments lti = assemble_lti(modes, chain);
    if (!lti.assembled_explicitly()) return std::numeric_limits<double>::quiet_NaN();
    Eigen::EigenSolver<Matrix> es(lti.h22(), /*computeEigenvectors=*/false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

[[noreturn]] void throw_instability(const ModeSystem& modes, const JumpChain& chain,
                                    std::int64_t step)
{
    const double sr = sigma_h22_if_available(modes, chain);
    std::string msg = "moment recursion diverged at step " + std::to_string(step);
    if (std::isfinite(sr)) msg += " (sigma(H22) = " + std::to_string(sr) + ")";
    throw InstabilityError(msg, step, sr);
}

SteadyState fixed_point_steady_state(const ModeSystem& modes, const JumpChain& chain)
{
    const int n = chain.num_modes;
    const int nx = modes.state_dim();

    MomentState state;
    state.step = 0;
    state.q.assign(n, Vector::Zero(nx));
    state.big_q.assign(n, Matrix::Zero(nx, nx));
    state.p_k = chain.stationary;

    double delta_prev = 0.0;
    for (std::int64_t it = 0; it < kFixedPointMaxIters; ++it) {
        MomentState next = step_moments(state, modes, chain);
        next.p_k = chain.stationary;  // hold the marginal at its limit
        if (!state_finite(next) || max_abs_entry(next) > kBlowupThreshold)
            throw UnstableSystemError(
                "fixed-point steady state diverged: sigma(H22) >= 1", std::numeric_limits<double>::quiet_NaN());
        const double delta = next.delta(modes.num_agents);
        state = std::move(next);
        if (it > 0 && std::abs(delta - delta_prev) <= kFixedPointRelTol * std::max(std::abs(delta), 1e-300))
            break;
        delta_prev = delta;
        if (it + 1 == kFixedPointMaxIters)
            throw UnstableSystemError("fixed-point steady state did not settle within 1e6 iterations",
                                      std::numeric_limits<double>::quiet_NaN());
    }

    SteadyState out;
    out.q_inf = state.stacked_q();
    out.q2_inf = state.stacked_q2();
    out.delta_inf = state.delta(modes.num_agents);
    out.method = SteadyState::Method::fixed_point;
    return out;
}

}  // namespace

Vector MomentState::stacked_q() const
{
    const int n = static_cast<int>(q.size());
    const int nx = n > 0 ? static_cast<int>(q[0].size()) : 0;
    Vector out(static_cast<long>(n) * nx);
    for (int i = 0; i < n; ++i) out.segment(static_cast<long>(i) * nx, nx) = q[i];
    return out;
}

Vector MomentState::stacked_q2() const
{
    const int n = static_cast<int>(big_q.size());
    const int nx = n > 0 ? static_cast<int>(big_q[0].rows()) : 0;
    Vector out(static_cast<long>(n) * nx * nx);
    for (int i = 0; i < n; ++i)
        out.segment(static_cast<long>(i) * nx * nx, nx * nx) = vec(big_q[i]);
    return out;
}

double MomentState::delta(int num_agents) const
{
    double total = 0.0;
    for (const auto& qq : big_q) total += qq.trace();
    return total / static_cast<double>(num_agents);
}

MomentState init_moments(const Matrix& theta0, const MeanDynamics& dynamics,
                         const JumpChain& chain)
{
    const int p = static_cast<int>(dynamics.theta_star.size());
    if (theta0.rows() != p)
        throw StructuralError("theta0 must have p rows");
    const int m = static_cast<int>(theta0.cols());
    if (m < 1) throw StructuralError("theta0 must have at least one column");

    const Matrix deviation = theta0 - dynamics.theta_star.replicate(1, m);
    const Vector xi0 = vec(deviation);

    MomentState state;
    state.step = 0;
    state.p_k = chain.initial;
    state.q.reserve(chain.num_modes);
    state.big_q.reserve(chain.num_modes);
    const Matrix outer = xi0 * xi0.transpose();
    for (int i = 0; i < chain.num_modes; ++i) {
        state.q.push_back(chain.initial(i) * xi0);
        state.big_q.push_back(chain.initial(i) * outer);
    }
    return state;
}

MomentState step_moments(const MomentState& state, const ModeSystem& modes,
                         const JumpChain& chain)
{
    const int n = chain.num_modes;
    const int nx = modes.state_dim();
    if (static_cast<int>(state.q.size()) != n || state.q[0].size() != nx)
        throw StructuralError("moment state does not match the mode system");

    MomentState next;
    next.step = state.step + 1;
    next.q.assign(n, Vector::Zero(nx));
    next.big_q.assign(n, Matrix::Zero(nx, nx));
    next.p_k = chain.transition.transpose() * state.p_k;

    for (int i = 0; i < n; ++i) {
        const Matrix& h = modes.h_modes[i];
        const Vector& g = modes.g_modes[i];
        const double pi_k = state.p_k(i);

        const Vector q_term = h * state.q[i] + pi_k * g;
        const Matrix hq = h * state.big_q[i] * h.transpose();
        const Matrix cross = (h * state.q[i]) * g.transpose();
        const Matrix q2_term = hq + cross + cross.transpose() + (pi_k * g) * g.transpose();

        for (int j = 0; j < n; ++j) {
            const double pij = chain.transition(i, j);
            if (pij == 0.0) continue;
            next.q[j] += pij * q_term;
            next.big_q[j] += pij * q2_term;
        }
    }
    for (auto& qq : next.big_q) qq = ((qq + qq.transpose()) * 0.5).eval();
    return next;
}

ErrorTrajectory error_trajectory(const MultiAgentMdp& mdp, const CommNetwork& net,
                                 const Vector& initial_state_dist, double alpha,
                                 const Matrix& theta0, std::int64_t horizon)
{
    if (horizon < 0) throw StructuralError("horizon must be nonnegative");

    const JumpChain chain = build_jump_chain(mdp, initial_state_dist);
    const MeanDynamics dynamics = mean_dynamics(mdp, chain);
    const ModeSystem modes = build_modes(mdp, net, chain, alpha, dynamics);

    ErrorTrajectory traj;
    traj.alpha = alpha;
    traj.horizon = horizon;
    Fnv1a hash;
    hash.add(mdp.transition).add(mdp.discount).add(mdp.features);
    for (const auto& r : mdp.rewards) hash.add(r);
    hash.add(net.weights)
        .add(Vector(initial_state_dist))
        .add(alpha)
        .add(theta0)
        .add(static_cast<std::int64_t>(horizon));
    traj.fingerprint = hash.digest();
    traj.deltas.reserve(horizon + 1);
    traj.q_norms.reserve(horizon + 1);
    traj.trace_q.reserve(horizon + 1);

    MomentState state = init_moments(theta0, dynamics, chain);
    for (std::int64_t k = 0;; ++k) {
        if (!state_finite(state) || max_abs_entry(state) > kBlowupThreshold)
            throw_instability(modes, chain, k);
        Vector mean = Vector::Zero(modes.state_dim());
        double trace = 0.0;
        for (int i = 0; i < chain.num_modes; ++i) {
            mean += state.q[i];
            trace += state.big_q[i].trace();
        }
        traj.deltas.push_back(trace / static_cast<double>(modes.num_agents));
        traj.q_norms.push_back(mean.norm());
        traj.trace_q.push_back(trace);
        if (k == horizon) break;
        state = step_moments(state, modes, chain);
    }
    return traj;
}

SteadyState steady_state(const ModeSystem& modes, const JumpChain& chain,
                         const LtiMoments& lti)
{
    if (!lti.assembled_explicitly()) return fixed_point_steady_state(modes, chain);

    Eigen::EigenSolver<Matrix> es(lti.h22(), /*computeEigenvectors=*/false);
    const double sr_h22 = es.eigenvalues().cwiseAbs().maxCoeff();
    if (!(sr_h22 < 1.0 - kStabilityMargin))
        throw UnstableSystemError(
            "steady state undefined: sigma(H22) = " + std::to_string(sr_h22), sr_h22);

    const auto [u_q, u_q2] = drive_terms(modes, chain, chain.stationary);
    const long dim_q = lti.h11().rows();
    const long dim_q2 = lti.h22().rows();
    const Matrix eye_q = Matrix::Identity(dim_q, dim_q);
    const Matrix eye_q2 = Matrix::Identity(dim_q2, dim_q2);

    SteadyState out;
    out.method = SteadyState::Method::direct;

    Eigen::PartialPivLU<Matrix> lu_q(eye_q - lti.h11());
    out.q_inf = lu_q.solve(u_q);
    out.q_inf += lu_q.solve(u_q - (eye_q - lti.h11()) * out.q_inf);  // one refinement pass

    const Vector rhs = lti.h21() * out.q_inf + u_q2;
    Eigen::PartialPivLU<Matrix> lu_q2(eye_q2 - lti.h22());
    out.q2_inf = lu_q2.solve(rhs);
    out.q2_inf += lu_q2.solve(rhs - (eye_q2 - lti.h22()) * out.q2_inf);

    if (((eye_q - lti.h11()) * out.q_inf - u_q).lpNorm<Eigen::Infinity>() > kResidualTol ||
        ((eye_q2 - lti.h22()) * out.q2_inf - rhs).lpNorm<Eigen::Infinity>() > kResidualTol)
        throw UnstableSystemError("steady-state solve residual exceeded 1e-10", sr_h22);

    out.delta_inf = lti.c_delta().dot(out.q2_inf);
    return out;
}

RateEnvelope rate_envelope(const ErrorTrajectory& traj, const SteadyState& ss)
{
    const auto& d = traj.deltas;
    const std::int64_t k_max = static_cast<std::int64_t>(d.size()) - 1;
    if (k_max < 0) throw InsufficientDataError("empty trajectory");

    const double initial_gap = std::abs(d[0] - ss.delta_inf);
    if (std::abs(d[k_max] - ss.delta_inf) >= 1e-6 * std::max(1.0, d[0]))
        throw InsufficientDataError("trajectory has not converged; extend the horizon");

    std::int64_t begin = -1;
    for (std::int64_t k = 0; k <= k_max; ++k) {
        if (std::abs(d[k] - ss.delta_inf) < 0.1 * initial_gap) {
            begin = k;
            break;
        }
    }
    std::int64_t end = -1;
    for (std::int64_t k = k_max; k >= 0; --k) {
        if (std::abs(d[k] - ss.delta_inf) > 1e-12) {
            end = k;
            break;
        }
    }
    if (begin < 0 || end < begin) throw InsufficientDataError("no usable tail window");

    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int count = 0;
    for (std::int64_t k = begin; k <= end; ++k) {
        const double gap = std::abs(d[k] - ss.delta_inf);
        if (gap == 0.0) continue;  // log undefined; skip
        const double x = static_cast<double>(k);
        const double y = std::log(gap);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++count;
    }
    if (count < 5) throw InsufficientDataError("fewer than 5 usable samples in the tail window");

    const double denom = count * sxx - sx * sx;
    const double slope = (count * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / count;

    RateEnvelope fit;
    fit.rho_hat = std::exp(slope);
    fit.c_hat = std::exp(intercept);
    fit.window_begin = begin;
    fit.window_end = end;
    fit.samples = count;
    return fit;
}

}  // namespace tdmjls
