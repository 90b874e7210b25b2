// Acceptance suite: one line per criterion, nonzero exit when any fails.
//
// Every tolerance is pinned in code next to the check it gates. The
// statistical comparisons (criterion 2) carry a 1e-12 absolute floor on top
// of the 4-sigma band: with theta0 at the fixed point the k=1 per-trial
// error is deterministic, stderr is exactly zero, and the bound would
// otherwise demand bit-identical results from two different summation
// orders.

#include <Eigen/Eigenvalues>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "tdmjls/io.hpp"
#include "tdmjls/scenario.hpp"

using namespace tdmjls;

namespace {

int g_failures = 0;

void report(int criterion, const char* title, bool ok, const std::string& detail)
{
    std::printf("[%s] criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", criterion, title,
                detail.empty() ? "" : " — ", detail.c_str());
    if (!ok) ++g_failures;
}

std::string fmt(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

Scenario fixture(const char* name)
{
    return load_scenario(std::string(TDMJLS_SCENARIO_DIR) + "/" + name);
}

struct Built {
    JumpChain chain;
    MeanDynamics dynamics;
    ModeSystem modes;
    LtiMoments lti;
};

Built build(const Scenario& sc, double alpha, int guard = kDefaultSizeGuard)
{
    const JumpChain chain = build_jump_chain(sc.mdp, sc.initial_state_dist);
    const MeanDynamics dynamics = mean_dynamics(sc.mdp, chain);
    const ModeSystem modes = build_modes(sc.mdp, sc.net, chain, alpha, dynamics);
    return {chain, dynamics, modes, assemble_lti(modes, chain, guard)};
}

double seconds_since(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// ---- criterion 1: moment recursion vs path enumeration ----
void criterion_oracle_equivalence()
{
    const auto start = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (const char* name : {"e1.json", "e2.json"}) {
        const Scenario sc = fixture(name);
        const MeanDynamics dyn = mean_dynamics(sc.mdp, build_jump_chain(sc.mdp, sc.initial_state_dist));
        const Matrix theta_star_block = dyn.theta_star.replicate(1, sc.mdp.num_agents());
        for (double alpha : {0.05, 0.1}) {
            for (const Matrix& theta0 :
                 {theta_star_block, Matrix(Matrix::Ones(sc.mdp.feature_dim(), sc.mdp.num_agents()))}) {
                const auto oracle =
                    enumerate_error(sc.mdp, sc.net, sc.initial_state_dist, alpha, theta0, 6);
                const auto traj =
                    error_trajectory(sc.mdp, sc.net, sc.initial_state_dist, alpha, theta0, 6);
                for (std::size_t k = 0; k < oracle.size(); ++k)
                    worst = std::max(worst, std::abs(oracle[k] - traj.deltas[k]));
            }
        }
    }
    const double elapsed = seconds_since(start);
    report(1, "oracle equivalence (recursion vs enumeration, k<=6)",
           worst <= 1e-10 && elapsed < 5.0,
           "max |diff| = " + fmt(worst) + ", " + fmt(elapsed) + " s");
}

// ---- criterion 2: Monte Carlo agreement at 4 sigma ----
void criterion_monte_carlo()
{
    const auto start = std::chrono::steady_clock::now();
    const Scenario sc = fixture("e1.json");
    const std::int64_t horizon = 50;
    const auto traj = error_trajectory(sc.mdp, sc.net, sc.initial_state_dist, sc.alpha,
                                       sc.theta0, horizon);
    bool ok = false;
    std::string detail;
    for (std::uint64_t seed : {sc.seed, sc.seed + 1}) {  // one reseed retry
        const McEstimate mc = monte_carlo_error(sc.mdp, sc.net, sc.initial_state_dist, sc.alpha,
                                                sc.theta0, horizon, 100000, seed);
        ok = true;
        detail.clear();
        for (std::int64_t k : {1, 10, 50}) {
            const double diff = std::abs(mc.deltas_hat[k] - traj.deltas[k]);
            const double band = 4.0 * mc.stderrs[k] + 1e-12;
            detail += "k=" + std::to_string(k) + ": |diff|=" + fmt(diff) + " band=" + fmt(band) + "; ";
            if (diff > band) ok = false;
        }
        if (ok) break;
    }
    const double elapsed = seconds_since(start);
    report(2, "Monte Carlo agreement (T=1e5, 4 sigma)", ok && elapsed < 60.0,
           detail + fmt(elapsed) + " s");
}

// ---- criterion 3: steady-state consistency ----
void criterion_steady_state()
{
    const Scenario sc = fixture("e1.json");
    const Built b = build(sc, 0.1);
    const SteadyState direct = steady_state(b.modes, b.chain, b.lti);

    const auto traj = error_trajectory(sc.mdp, sc.net, sc.initial_state_dist, 0.1,
                                       Matrix::Ones(1, 2), 2000);
    const double traj_gap = std::abs(traj.deltas.back() - direct.delta_inf);

    const LtiMoments operator_lti = assemble_lti(b.modes, b.chain, /*size_guard=*/0);
    const SteadyState fp = steady_state(b.modes, b.chain, operator_lti);
    const double fp_gap = std::abs(fp.delta_inf - direct.delta_inf);

    report(3, "steady-state consistency (direct vs K=2000 vs fixed point)",
           traj_gap <= 1e-8 && fp_gap <= 1e-10,
           "|delta^2000 - delta_inf| = " + fmt(traj_gap) + ", |fp - direct| = " + fmt(fp_gap));
}

// ---- criterion 4: stability boundary by bisection ----
void criterion_stability_boundary()
{
    const Scenario sc = fixture("e1.json");
    const JumpChain chain = build_jump_chain(sc.mdp, sc.initial_state_dist);
    const MeanDynamics dyn = mean_dynamics(sc.mdp, chain);
    auto sigma22 = [&](double alpha) {
        const ModeSystem modes = build_modes(sc.mdp, sc.net, chain, alpha, dyn);
        return spectral_radius(assemble_lti(modes, chain).h22());
    };

    double lo = 0.01, hi = 2.0;
    if (!(sigma22(lo) < 1.0 && sigma22(hi) > 1.0)) {
        report(4, "stability boundary", false, "bracket [0.01, 2] does not straddle sigma=1");
        return;
    }
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (sigma22(mid) < 1.0 ? lo : hi) = mid;
    }
    const double alpha_crit = 0.5 * (lo + hi);
    const double sigma_at_crit = sigma22(alpha_crit);

    bool diverged = false;
    std::int64_t blow_step = -1;
    try {
        error_trajectory(sc.mdp, sc.net, sc.initial_state_dist, 1.05 * alpha_crit,
                         Matrix::Ones(1, 2), 100000);
    } catch (const InstabilityError& e) {
        diverged = true;
        blow_step = e.step;
    }

    bool converged = false;
    double tail_gap = std::numeric_limits<double>::infinity();
    try {
        const Built b = build(sc, 0.95 * alpha_crit);
        const SteadyState ss = steady_state(b.modes, b.chain, b.lti);
        const auto traj = error_trajectory(sc.mdp, sc.net, sc.initial_state_dist,
                                           0.95 * alpha_crit, Matrix::Ones(1, 2), 100000);
        tail_gap = std::abs(traj.deltas.back() - ss.delta_inf);
        converged = tail_gap <= 1e-6 * std::max(1.0, ss.delta_inf);
    } catch (const Error&) {
        converged = false;
    }

    report(4, "stability boundary (bisection + divergence/convergence)",
           std::abs(sigma_at_crit - 1.0) <= 1e-6 && diverged && converged,
           "alpha_crit = " + fmt(alpha_crit) + ", sigma = " + fmt(sigma_at_crit) +
               ", blow-up step = " + std::to_string(blow_step) +
               ", tail gap at 0.95*crit = " + fmt(tail_gap));
}

// ---- criterion 5: first-order eigenvalue perturbation ----
void criterion_eigen_perturbation()
{
    bool ok = true;
    std::string detail;
    for (const char* name : {"e1.json", "e2.json"}) {
        const Scenario sc = fixture(name);
        const double alpha = 0.005;
        const Built b = build(sc, alpha);
        Eigen::EigenSolver<Matrix> es(b.dynamics.a_bar);
        const double max_re = es.eigenvalues().real().maxCoeff();

        const double h22_slope = (spectral_radius(b.lti.h22()) - 1.0) / alpha;
        const double h11_slope = (spectral_radius(b.lti.h11()) - 1.0) / alpha;
        const bool case_ok = std::abs(h22_slope - 2.0 * max_re) <= 0.05 * std::abs(2.0 * max_re) &&
                             std::abs(h11_slope - max_re) <= 0.05 * std::abs(max_re);
        ok = ok && case_ok;
        detail += std::string(name) + ": (s22-1)/a=" + fmt(h22_slope) + " vs " +
                  fmt(2.0 * max_re) + ", (s11-1)/a=" + fmt(h11_slope) + " vs " + fmt(max_re) + "; ";
    }
    report(5, "eigenvalue perturbation at alpha=0.005 (5% relative)", ok, detail);
}

// ---- criterion 6: O(alpha) steady-state scaling ----
void criterion_alpha_scaling()
{
    bool ok = true;
    std::string detail;
    for (const char* name : {"e1.json", "e2.json"}) {
        const Scenario sc = fixture(name);
        const PerturbationSweep sweep =
            alpha_sweep(sc.mdp, sc.net, sc.initial_state_dist, {0.02, 0.01, 0.005});
        const bool case_ok = sweep.loglog_slope_delta >= 0.9 && sweep.loglog_slope_delta <= 1.1;
        ok = ok && case_ok;
        detail += std::string(name) + ": slope = " + fmt(sweep.loglog_slope_delta) + "; ";
    }
    report(6, "O(alpha) steady-state scaling over {0.02, 0.01, 0.005}", ok, detail);
}

// ---- criterion 7: rate envelope ----
void criterion_rate_envelope()
{
    const Scenario sc = fixture("e1.json");
    bool ok = true;
    std::string detail;
    for (double alpha : {0.05, 0.1}) {
        const Built b = build(sc, alpha);
        const SteadyState ss = steady_state(b.modes, b.chain, b.lti);
        const auto traj = error_trajectory(sc.mdp, sc.net, sc.initial_state_dist, alpha,
                                           Matrix::Ones(1, 2), 1500);
        const RateEnvelope fit = rate_envelope(traj, ss);
        const SpectralReport rep = spectrum_report(b.lti, b.chain, b.dynamics, alpha);
        const bool case_ok = fit.rho_hat <= rep.rate + 0.01;
        ok = ok && case_ok;
        detail += "alpha=" + fmt(alpha) + ": rho_hat=" + fmt(fit.rho_hat) +
                  " rate=" + fmt(rep.rate) + "; ";
    }
    report(7, "rate envelope (rho_hat <= max spectral rate + 0.01)", ok, detail);
}

// ---- criterion 8: degenerate-case reductions ----
void criterion_reductions()
{
    bool ok = true;
    std::string detail;

    // (a) M=1 reproduces the centralized recursion and simulator
    {
        Scenario sc = fixture("e1.json");
        sc.mdp.rewards.pop_back();
        sc.net.weights = Matrix::Constant(1, 1, 1.0);
        const double alpha = 0.1;
        const Built b = build(sc, alpha);
        const auto traj = error_trajectory(sc.mdp, sc.net, sc.initial_state_dist, alpha,
                                           Matrix::Constant(1, 1, 1.5), 40);

        // independent centralized moment recursion (scalars, no lift)
        const int n = b.chain.num_modes;
        std::vector<double> h(n), g(n), q(n), qq(n);
        Vector p = b.chain.initial;
        const double xi0 = 1.5 - b.dynamics.theta_star(0);
        for (int i = 0; i < n; ++i) {
            const ModeMatrices mm = mode_matrices(sc.mdp, i);
            h[i] = 1.0 + alpha * mm.a(0, 0);
            g[i] = alpha * (mm.b(0, 0) + mm.a(0, 0) * b.dynamics.theta_star(0));
            q[i] = p(i) * xi0;
            qq[i] = p(i) * xi0 * xi0;
        }
        double worst = 0.0;
        for (std::size_t k = 0; k < traj.deltas.size(); ++k) {
            double delta = 0.0;
            for (int i = 0; i < n; ++i) delta += qq[i];
            worst = std::max(worst, std::abs(delta - traj.deltas[k]));
            std::vector<double> q2(n, 0.0), qq2(n, 0.0);
            Vector p2 = Vector::Zero(n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    const double pij = b.chain.transition(i, j);
                    if (pij == 0.0) continue;
                    q2[j] += pij * (h[i] * q[i] + p(i) * g[i]);
                    qq2[j] += pij * (h[i] * qq[i] * h[i] + 2 * h[i] * q[i] * g[i] + p(i) * g[i] * g[i]);
                    p2(j) += pij * p(i);
                }
            q = q2;
            qq = qq2;
            p = p2;
        }

        // independent centralized simulator along the recorded path
        const TdRunResult run = run_td0(sc.mdp, sc.net, sc.initial_state_dist, alpha,
                                        Matrix::Constant(1, 1, 1.5), 40, 12345);
        double theta = 1.5, worst_sim = 0.0;
        for (std::size_t k = 0; k + 1 < run.weights.size(); ++k) {
            const int s = run.state_path[k], s_next = run.state_path[k + 1];
            const double phi = sc.mdp.features(s, 0);
            const double d =
                (sc.mdp.discount * sc.mdp.features(s_next, 0) - phi) * theta +
                sc.mdp.rewards[0](s, s_next);
            theta += alpha * phi * d;
            worst_sim = std::max(worst_sim, std::abs(run.weights[k + 1](0, 0) - theta));
        }
        ok = ok && worst <= 1e-12 && worst_sim <= 1e-12;
        detail += "M=1 recursion diff=" + fmt(worst) + ", simulator diff=" + fmt(worst_sim) + "; ";
    }

    // (b) alpha=0 with a consensual start is constant
    {
        const Scenario sc = fixture("e1.json");
        const auto traj = error_trajectory(sc.mdp, sc.net, sc.initial_state_dist, 0.0,
                                           Matrix::Ones(1, 2), 50);
        double worst = 0.0;
        for (double d : traj.deltas) worst = std::max(worst, std::abs(d - traj.deltas[0]));
        ok = ok && worst <= 1e-12;
        detail += "alpha=0 drift=" + fmt(worst) + "; ";
    }

    // (c) averaged iterate follows the single-agent recursion path-wise
    {
        double worst = 0.0;
        for (const char* name : {"e1.json", "e2.json"}) {
            const Scenario sc = fixture(name);
            for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
                const TdRunResult run = run_td0(sc.mdp, sc.net, sc.initial_state_dist, sc.alpha,
                                                Matrix::Ones(1, 2), 50, seed);
                for (std::size_t k = 0; k + 1 < run.weights.size(); ++k) {
                    const int s = run.state_path[k], s_next = run.state_path[k + 1];
                    const Vector phi = sc.mdp.feature(s);
                    const Matrix a =
                        phi * (sc.mdp.discount * sc.mdp.feature(s_next) - phi).transpose();
                    double r_bar = 0.0;
                    for (int m = 0; m < sc.mdp.num_agents(); ++m)
                        r_bar += sc.mdp.rewards[m](s, s_next);
                    r_bar /= sc.mdp.num_agents();
                    const Vector mean_k = run.weights[k].rowwise().mean();
                    const Vector predicted =
                        mean_k + sc.alpha * (a * mean_k + r_bar * phi);
                    worst = std::max(worst, (run.weights[k + 1].rowwise().mean() - predicted)
                                                .lpNorm<Eigen::Infinity>());
                }
            }
        }
        ok = ok && worst <= 1e-12;
        detail += "averaged-iterate residual=" + fmt(worst);
    }

    report(8, "reduction checks (M=1, alpha=0, averaged iterate)", ok, detail);
}

// ---- criterion 9: invariant suite ----
void criterion_invariants()
{
    bool ok = true;
    std::string detail;
    for (const char* name : {"e1.json", "e2.json"}) {
        const Scenario sc = fixture(name);

        const ValidationReport report_ = validate(sc);
        bool case_ok = report_.all_passed();

        const Built b = build(sc, sc.alpha);

        // Hurwitz margin of a_bar
        Eigen::EigenSolver<Matrix> es(b.dynamics.a_bar);
        case_ok = case_ok && es.eigenvalues().real().maxCoeff() < -1e-12;

        // closed-form a_bar cross-check
        const Vector pi = stationary_distribution(sc.mdp.transition);
        const Matrix closed =
            sc.mdp.features.transpose() * pi.asDiagonal() *
            (sc.mdp.discount * sc.mdp.transition -
             Matrix::Identity(sc.mdp.num_states, sc.mdp.num_states)) *
            sc.mdp.features;
        case_ok = case_ok && (closed - b.dynamics.a_bar).lpNorm<Eigen::Infinity>() <= 1e-10;

        // stationary mode law: product form vs long power iteration of P_z^T
        Vector pz_stat = Vector::Constant(b.chain.num_modes, 1.0 / b.chain.num_modes);
        for (int it = 0; it < 20000; ++it) {
            pz_stat = b.chain.transition.transpose() * pz_stat;
            pz_stat /= pz_stat.sum();
        }
        case_ok = case_ok && (pz_stat - b.chain.stationary).lpNorm<Eigen::Infinity>() <= 1e-10;

        // PSD of every Q_i^k along a stable run
        MomentState state = init_moments(Matrix::Ones(1, 2), b.dynamics, b.chain);
        double min_eig = 0.0;
        for (int k = 0; k < 100; ++k) {
            for (const auto& qq : state.big_q) {
                Eigen::SelfAdjointEigenSolver<Matrix> psd(qq);
                min_eig = std::min(min_eig, psd.eigenvalues().minCoeff());
            }
            state = step_moments(state, b.modes, b.chain);
        }
        case_ok = case_ok && min_eig >= -1e-10;

        ok = ok && case_ok;
        detail += std::string(name) + (case_ok ? ": all green; " : ": violation; ");
    }
    report(9, "invariant suite (validation, Hurwitz, cross-checks, PSD)", ok, detail);
}

}  // namespace

int main()
{
    criterion_oracle_equivalence();
    criterion_monte_carlo();
    criterion_steady_state();
    criterion_stability_boundary();
    criterion_eigen_perturbation();
    criterion_alpha_scaling();
    criterion_rate_envelope();
    criterion_reductions();
    criterion_invariants();

    if (g_failures > 0) std::printf("%d criterion(s) failed\n", g_failures);
    return g_failures;
}
