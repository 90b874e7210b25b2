#pragma once

#include <utility>
#include <vector>

#include "tdmjls/moments.hpp"

namespace tdmjls {

/// Exact spectral radii of the lifted system plus the first-order small-alpha
/// predictions 1 + alpha*Re(lambda_maxre(a_bar)) and 1 + 2*alpha*Re(...).
struct SpectralReport {
    double sr_h11 = 0.0;
    double sr_h22 = 0.0;
    double mixing = 0.0;        // rho_tilde of the jump chain
    double rate = 0.0;          // max{sr_h11, sr_h22, mixing}
    bool stable = false;        // sr_h22 < 1 - 1e-12
    double pred_sr_h11 = 0.0;
    double pred_sr_h22 = 0.0;
    double alpha = 0.0;
};

struct SweepRecord {
    double alpha = 0.0;
    double sr_h11 = 0.0;
    double sr_h22 = 0.0;
    double pred_sr_h11 = 0.0;
    double pred_sr_h22 = 0.0;
    double delta_inf = 0.0;     // NaN when unstable
    double q_inf_norm = 0.0;    // NaN when unstable
    double q2_inf_norm = 0.0;   // NaN when unstable
    bool stable = false;
};

/// Exact per-alpha quantities along a decreasing step-size grid, with the
/// small-alpha slope diagnostics fitted on the stable subset.
struct PerturbationSweep {
    std::vector<SweepRecord> records;   // decreasing alpha
    double loglog_slope_delta = 0.0;    // d log(delta_inf) / d log(alpha), smallest 3 stable points
    double h11_slope = 0.0;             // (sr_h11 - 1)/alpha at the smallest stable alpha
    double h22_slope = 0.0;             // (sr_h22 - 1)/alpha at the smallest stable alpha
    double max_re_a_bar = 0.0;          // Re(lambda_maxre(a_bar))
    double mixing = 0.0;                // alpha-independent rho_tilde
    bool monotone_onset = true;         // once stable, all smaller alphas stable
};

SpectralReport spectrum_report(const LtiMoments& lti, const JumpChain& chain,
                               const MeanDynamics& dynamics, double alpha);

/// First-order predictions (pred_sr_h11, pred_sr_h22) from the eigenvalue of
/// a_bar with the largest real part.
std::pair<double, double> perturb_predict(const MeanDynamics& dynamics, double alpha);

PerturbationSweep alpha_sweep(const MultiAgentMdp& mdp, const CommNetwork& net,
                              const Vector& initial_state_dist,
                              const std::vector<double>& alphas,
                              int size_guard = kDefaultSizeGuard);

/// Geometric grid of `points` step sizes starting at alpha0 with ratio 1/2.
std::vector<double> default_alpha_grid(double alpha0, int points = 5);

double spectral_radius(const Matrix& m);

}  // namespace tdmjls
