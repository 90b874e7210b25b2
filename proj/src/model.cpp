#include "tdmjls/model.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <string>
#include <vector>

namespace tdmjls {

namespace {

constexpr double kStochasticTol = 1e-12;
constexpr double kRankTol = 1e-10;
constexpr double kUnitCircleTol = 1e-10;
constexpr double kCrossCheckTol = 1e-10;
constexpr double kHurwitzMargin = 1e-12;

bool finite(const Matrix& m) { return m.allFinite(); }

void require(bool cond, const std::string& msg)
{
    if (!cond) throw StructuralError(msg);
}

std::string fmt(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// Moduli of all eigenvalues, sorted descending.
std::vector<double> eigen_moduli(const Matrix& m)
{
    Eigen::EigenSolver<Matrix> es(m, /*computeEigenvectors=*/false);
    std::vector<double> mods(m.rows());
    for (int i = 0; i < m.rows(); ++i) mods[i] = std::abs(es.eigenvalues()[i]);
    std::sort(mods.begin(), mods.end(), std::greater<>());
    return mods;
}

/// True when exactly one eigenvalue has modulus above 1 - tol.
bool unique_unit_eigenvalue(const Matrix& m)
{
    int count = 0;
    for (double v : eigen_moduli(m))
        if (v > 1.0 - kUnitCircleTol) ++count;
    return count == 1;
}

/// Eigenvector of P^T for the eigenvalue closest to 1, normalized to sum 1.
/// No positivity requirement; the caller decides what to enforce.
Vector unit_left_eigenvector(const Matrix& transition)
{
    Eigen::EigenSolver<Matrix> es(transition.transpose());
    int best = 0;
    double best_dist = std::abs(es.eigenvalues()[0] - std::complex<double>(1.0, 0.0));
    for (int i = 1; i < transition.rows(); ++i) {
        const double d = std::abs(es.eigenvalues()[i] - std::complex<double>(1.0, 0.0));
        if (d < best_dist) {
            best_dist = d;
            best = i;
        }
    }
    Vector v = es.eigenvectors().col(best).real();
    const double total = v.sum();
    if (total == 0.0)
        throw ErgodicityError("stationary eigenvector sums to zero; chain is not ergodic");
    return v / total;
}

bool connected_graph(const Matrix& w)
{
    const int m = static_cast<int>(w.rows());
    std::vector<bool> seen(m, false);
    std::vector<int> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        for (int v = 0; v < m; ++v) {
            if (v == u || seen[v]) continue;
            if (w(u, v) > 0.0 || w(v, u) > 0.0) {
                seen[v] = true;
                stack.push_back(v);
            }
        }
    }
    return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

void check_structure(const MultiAgentMdp& mdp, const CommNetwork& net)
{
    const int s = mdp.num_states;
    require(s >= 1, "num_states must be positive");
    require(mdp.transition.rows() == s && mdp.transition.cols() == s,
            "transition must be |S| x |S|");
    require(!mdp.rewards.empty(), "at least one reward table is required");
    for (std::size_t m = 0; m < mdp.rewards.size(); ++m)
        require(mdp.rewards[m].rows() == s && mdp.rewards[m].cols() == s,
                "reward table " + std::to_string(m) + " must be |S| x |S|");
    require(mdp.features.rows() == s && mdp.features.cols() >= 1,
            "features must be |S| x p with p >= 1");
    require(finite(mdp.transition) && finite(mdp.features),
            "transition/features contain non-finite entries");
    for (const auto& r : mdp.rewards)
        require(finite(r), "reward table contains non-finite entries");
    require(std::isfinite(mdp.discount), "discount is not finite");

    const int m = mdp.num_agents();
    require(net.weights.rows() == m && net.weights.cols() == m,
            "network_weights must be M x M with M = number of reward tables");
    require(finite(net.weights), "network_weights contain non-finite entries");
}

}  // namespace

ValidationReport validate_scenario(const MultiAgentMdp& mdp, const CommNetwork& net)
{
    check_structure(mdp, net);

    ValidationReport report;
    auto add = [&](std::string name, bool ok, std::string msg) {
        report.checks.push_back({std::move(name), ok, std::move(msg)});
    };

    {
        bool ok = true;
        std::string msg;
        for (int i = 0; i < mdp.num_states && ok; ++i) {
            if (mdp.transition.row(i).minCoeff() < 0.0) {
                ok = false;
                msg = "row " + std::to_string(i) + " has a negative entry";
            } else if (std::abs(mdp.transition.row(i).sum() - 1.0) > kStochasticTol) {
                ok = false;
                msg = "row " + std::to_string(i) + " sums to " + fmt(mdp.transition.row(i).sum());
            }
        }
        add("transition row-stochastic", ok, msg);
    }

    add("discount in (0,1)", mdp.discount > 0.0 && mdp.discount < 1.0,
        mdp.discount > 0.0 && mdp.discount < 1.0 ? "" : "gamma = " + fmt(mdp.discount));

    {
        Eigen::JacobiSVD<Matrix> svd(mdp.features);
        const double smax = svd.singularValues()(0);
        const double smin = svd.singularValues()(svd.singularValues().size() - 1);
        const bool ok = mdp.features.cols() <= mdp.features.rows() && smin > kRankTol * smax;
        add("features full column rank", ok,
            ok ? "" : "singular values range [" + fmt(smin) + ", " + fmt(smax) + "]");
    }

    {
        const bool ok = unique_unit_eigenvalue(mdp.transition);
        add("transition irreducible and aperiodic", ok,
            ok ? "" : "unit-modulus eigenvalue is not unique");
    }

    {
        bool ok = net.weights.minCoeff() >= 0.0 && net.weights.maxCoeff() <= 1.0;
        std::string msg = ok ? "" : "entries outside [0,1]";
        for (int i = 0; i < net.num_agents() && ok; ++i) {
            if (std::abs(net.weights.row(i).sum() - 1.0) > kStochasticTol) {
                ok = false;
                msg = "row " + std::to_string(i) + " sums to " + fmt(net.weights.row(i).sum());
            } else if (std::abs(net.weights.col(i).sum() - 1.0) > kStochasticTol) {
                ok = false;
                msg = "column " + std::to_string(i) + " sums to " + fmt(net.weights.col(i).sum());
            }
        }
        add("network doubly stochastic", ok, msg);
    }

    const bool conn = connected_graph(net.weights);
    add("network connected", conn, conn ? "" : "positive-weight graph is disconnected");

    return report;
}

Vector stationary_distribution(const Matrix& transition)
{
    require(transition.rows() == transition.cols() && transition.rows() >= 1,
            "transition must be square");
    require(finite(transition), "transition contains non-finite entries");

    if (!unique_unit_eigenvalue(transition))
        throw ErgodicityError("chain is reducible or periodic: unit-modulus eigenvalue is not unique");

    Vector pi = unit_left_eigenvector(transition);

    // Polish with power iterations until the residual meets the contract.
    auto residual = [&] { return (transition.transpose() * pi - pi).lpNorm<Eigen::Infinity>(); };
    for (int iter = 0; iter < 1000 && residual() > kStochasticTol; ++iter) {
        pi = transition.transpose() * pi;
        pi /= pi.sum();
    }
    if (residual() > kStochasticTol)
        throw ErgodicityError("stationary distribution residual did not reach 1e-12");
    if (pi.minCoeff() <= 0.0)
        throw ErgodicityError("stationary distribution has a nonpositive entry");
    return pi;
}

JumpChain build_jump_chain(const MultiAgentMdp& mdp, const Vector& initial_state_dist)
{
    const int s = mdp.num_states;
    require(initial_state_dist.size() == s, "initial_state_dist must have |S| entries");
    require(initial_state_dist.allFinite() && initial_state_dist.minCoeff() >= 0.0 &&
                std::abs(initial_state_dist.sum() - 1.0) <= kStochasticTol,
            "initial_state_dist is not a probability vector");

    JumpChain chain;
    chain.num_states = s;
    chain.num_modes = s * s;
    const int n = chain.num_modes;
    const Matrix& p = mdp.transition;

    chain.transition = Matrix::Zero(n, n);
    chain.initial = Vector::Zero(n);
    chain.stationary = Vector::Zero(n);

    const Vector pi = stationary_distribution(p);

    for (int cur = 0; cur < s; ++cur) {
        for (int next = 0; next < s; ++next) {
            const int i = chain.mode_of(cur, next);
            chain.initial(i) = initial_state_dist(cur) * p(cur, next);
            chain.stationary(i) = pi(cur) * p(cur, next);
            for (int after = 0; after < s; ++after)
                chain.transition(i, chain.mode_of(next, after)) = p(next, after);
        }
    }

    // Cross-check the product-form stationary against the eigenvector route.
    if (!unique_unit_eigenvalue(chain.transition))
        throw ErgodicityError("pair chain has a non-unique unit-modulus eigenvalue");
    const Vector eig_stat = unit_left_eigenvector(chain.transition);
    if ((eig_stat - chain.stationary).lpNorm<Eigen::Infinity>() > kCrossCheckTol)
        throw ErgodicityError("pair-chain stationary distribution cross-check failed");

    // P_z factors through the second pair coordinate (P_z = F G with
    // G F = P), so its nonzero spectrum equals the state chain's and the
    // mixing rate can be read off the smaller, better-conditioned problem.
    const auto mods = eigen_moduli(p);
    chain.mixing_rate = mods.size() > 1 ? mods[1] : 0.0;
    if (!(chain.mixing_rate < 1.0))
        throw ErgodicityError("pair chain mixing rate is not below 1");
    return chain;
}

ModeMatrices mode_matrices(const MultiAgentMdp& mdp, int mode)
{
    const int s = mdp.num_states;
    if (mode < 0 || mode >= s * s) throw std::out_of_range("mode index out of range");
    const int cur = mode / s;
    const int next = mode % s;

    const Vector phi_cur = mdp.feature(cur);
    const Vector phi_next = mdp.feature(next);

    ModeMatrices out;
    out.a = phi_cur * (mdp.discount * phi_next - phi_cur).transpose();
    out.b.resize(mdp.feature_dim(), mdp.num_agents());
    for (int m = 0; m < mdp.num_agents(); ++m)
        out.b.col(m) = mdp.rewards[m](cur, next) * phi_cur;
    return out;
}

MeanDynamics mean_dynamics(const MultiAgentMdp& mdp, const JumpChain& chain)
{
    const int p = mdp.feature_dim();
    const int m = mdp.num_agents();
    require(chain.num_states == mdp.num_states, "jump chain does not match the MDP");

    MeanDynamics dyn;
    dyn.a_bar = Matrix::Zero(p, p);
    dyn.b_bar_agents.assign(m, Vector::Zero(p));
    for (int i = 0; i < chain.num_modes; ++i) {
        if (chain.stationary(i) == 0.0) continue;
        const ModeMatrices mm = mode_matrices(mdp, i);
        dyn.a_bar += chain.stationary(i) * mm.a;
        for (int a = 0; a < m; ++a)
            dyn.b_bar_agents[a] += chain.stationary(i) * mm.b.col(a);
    }

    // Closed-form route through the state chain must agree with the
    // mode-wise sum; disagreement means the chain was not built from mdp.
    const Vector pi = stationary_distribution(mdp.transition);
    const Matrix closed = mdp.features.transpose() * pi.asDiagonal() *
                          (mdp.discount * mdp.transition - Matrix::Identity(mdp.num_states, mdp.num_states)) *
                          mdp.features;
    if ((closed - dyn.a_bar).lpNorm<Eigen::Infinity>() > kCrossCheckTol)
        throw StructuralError("a_bar cross-check failed: jump chain inconsistent with the MDP");

    Eigen::EigenSolver<Matrix> es(dyn.a_bar, /*computeEigenvectors=*/false);
    const double max_real = es.eigenvalues().real().maxCoeff();
    if (!(max_real < -kHurwitzMargin))
        throw NotHurwitzError("a_bar is not Hurwitz (max eigenvalue real part " + fmt(max_real) +
                              "); scenario violates the stability assumptions");

    dyn.b_bar = Vector::Zero(p);
    for (const auto& b : dyn.b_bar_agents) dyn.b_bar += b;
    dyn.b_bar /= static_cast<double>(m);

    dyn.theta_star = dyn.a_bar.fullPivLu().solve(-dyn.b_bar);
    if ((dyn.a_bar * dyn.theta_star + dyn.b_bar).lpNorm<Eigen::Infinity>() > kCrossCheckTol)
        throw NotHurwitzError("fixed point residual exceeds 1e-10");
    return dyn;
}

}  // namespace tdmjls
