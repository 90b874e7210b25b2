#include "tdmjls/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>

namespace tdmjls {

namespace {

constexpr double kStabilityMargin = 1e-12;

const double kNaN = std::numeric_limits<double>::quiet_NaN();

double max_real_eigenvalue(const Matrix& m)
{
    Eigen::EigenSolver<Matrix> es(m, /*computeEigenvectors=*/false);
    return es.eigenvalues().real().maxCoeff();
}

}  // namespace

double spectral_radius(const Matrix& m)
{
    Eigen::EigenSolver<Matrix> es(m, /*computeEigenvectors=*/false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

std::pair<double, double> perturb_predict(const MeanDynamics& dynamics, double alpha)
{
    const double max_re = max_real_eigenvalue(dynamics.a_bar);
    const double pred11 = 1.0 + alpha * max_re;
    const double pred22 = 2.0 * pred11 - 1.0;  // = 1 + 2*alpha*max_re
    return {pred11, pred22};
}

SpectralReport spectrum_report(const LtiMoments& lti, const JumpChain& chain,
                               const MeanDynamics& dynamics, double alpha)
{
    if (!lti.assembled_explicitly())
        throw SizeGuardError("spectrum requires explicit matrices; size guard exceeded");

    SpectralReport rep;
    rep.alpha = alpha;
    rep.sr_h11 = spectral_radius(lti.h11());
    rep.sr_h22 = spectral_radius(lti.h22());
    rep.mixing = chain.mixing_rate;
    rep.rate = std::max({rep.sr_h11, rep.sr_h22, rep.mixing});
    rep.stable = rep.sr_h22 < 1.0 - kStabilityMargin;
    std::tie(rep.pred_sr_h11, rep.pred_sr_h22) = perturb_predict(dynamics, alpha);
    return rep;
}

std::vector<double> default_alpha_grid(double alpha0, int points)
{
    if (!(alpha0 > 0.0)) throw StructuralError("sweep requires a positive starting alpha");
    std::vector<double> grid(points);
    double a = alpha0;
    for (int i = 0; i < points; ++i, a *= 0.5) grid[i] = a;
    return grid;
}

PerturbationSweep alpha_sweep(const MultiAgentMdp& mdp, const CommNetwork& net,
                              const Vector& initial_state_dist,
                              const std::vector<double>& alphas, int size_guard)
{
    if (alphas.empty()) throw StructuralError("alpha grid is empty");
    std::vector<double> grid = alphas;
    std::sort(grid.begin(), grid.end(), std::greater<>());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0)) throw StructuralError("alpha grid entries must be positive");
        if (i > 0 && grid[i] == grid[i - 1]) throw StructuralError("alpha grid has duplicates");
    }

    const JumpChain chain = build_jump_chain(mdp, initial_state_dist);
    const MeanDynamics dynamics = mean_dynamics(mdp, chain);

    PerturbationSweep sweep;
    sweep.mixing = chain.mixing_rate;
    sweep.max_re_a_bar = max_real_eigenvalue(dynamics.a_bar);

    bool seen_stable = false;
    for (double alpha : grid) {
        const ModeSystem modes = build_modes(mdp, net, chain, alpha, dynamics);
        const LtiMoments lti = assemble_lti(modes, chain, size_guard);
        const SpectralReport rep = spectrum_report(lti, chain, dynamics, alpha);

        SweepRecord rec;
        rec.alpha = alpha;
        rec.sr_h11 = rep.sr_h11;
        rec.sr_h22 = rep.sr_h22;
        rec.pred_sr_h11 = rep.pred_sr_h11;
        rec.pred_sr_h22 = rep.pred_sr_h22;
        rec.stable = rep.stable;
        if (rep.stable) {
            const SteadyState ss = steady_state(modes, chain, lti);
            rec.delta_inf = ss.delta_inf;
            rec.q_inf_norm = ss.q_inf.norm();
            rec.q2_inf_norm = ss.q2_inf.norm();
        } else {
            rec.delta_inf = kNaN;
            rec.q_inf_norm = kNaN;
            rec.q2_inf_norm = kNaN;
            if (seen_stable) sweep.monotone_onset = false;
        }
        seen_stable = seen_stable || rep.stable;
        sweep.records.push_back(rec);
    }

    std::vector<const SweepRecord*> stable;
    for (const auto& r : sweep.records)
        if (r.stable) stable.push_back(&r);
    if (stable.empty())
        throw UnstableSystemError("alpha sweep: no stable grid point", kNaN);

    const SweepRecord& smallest = *stable.back();
    sweep.h11_slope = (smallest.sr_h11 - 1.0) / smallest.alpha;
    sweep.h22_slope = (smallest.sr_h22 - 1.0) / smallest.alpha;

    // log-log slope of delta_inf over the smallest stable alphas (up to 3).
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int count = 0;
    const std::size_t take = std::min<std::size_t>(3, stable.size());
    for (std::size_t t = 0; t < take; ++t) {
        const SweepRecord& r = *stable[stable.size() - 1 - t];
        if (!(r.delta_inf > 0.0)) continue;
        const double x = std::log(r.alpha);
        const double y = std::log(r.delta_inf);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++count;
    }
    if (count >= 2)
        sweep.loglog_slope_delta = (count * sxy - sx * sy) / (count * sxx - sx * sx);
    else
        sweep.loglog_slope_delta = kNaN;

    return sweep;
}

}  // namespace tdmjls
