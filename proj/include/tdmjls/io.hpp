#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "tdmjls/moments.hpp"
#include "tdmjls/sim.hpp"
#include "tdmjls/spectral.hpp"

namespace tdmjls {

/// Shortest round-trippable decimal form (17 significant digits).
std::string format_double(double v);

/// Commented metadata line carried by every artifact: version, scenario
/// fingerprint, seed, plus free-form key=value extras.
std::string metadata_line(std::uint64_t scenario_fingerprint, std::uint64_t seed,
                          const std::string& extras = "");

/// One joined row of the exact-vs-Monte-Carlo comparison. The z-score is
/// (delta_hat - delta_exact)/stderr; a zero stderr yields z = 0 when the
/// difference is within 1e-12 and +/-inf otherwise.
struct CompareRow {
    std::int64_t k = 0;
    double delta_exact = 0.0;
    double delta_hat = 0.0;
    double stderr_ = 0.0;
    double z = 0.0;
};

std::vector<CompareRow> compare_rows(const ErrorTrajectory& exact, const McEstimate& mc);

void write_trajectory_csv(std::ostream& out, const ErrorTrajectory& traj,
                          const std::string& metadata);
void write_mc_csv(std::ostream& out, const McEstimate& mc,
                  const std::vector<double>* exact, const std::string& metadata);
void write_sweep_csv(std::ostream& out, const PerturbationSweep& sweep,
                     const std::string& metadata);
void write_compare_csv(std::ostream& out, const std::vector<CompareRow>& rows,
                       const std::string& metadata);

std::string spectrum_text(const SpectralReport& report);
std::string spectrum_json(const SpectralReport& report);
std::string steady_text(const SteadyState& ss);
std::string sweep_summary_text(const PerturbationSweep& sweep);

}  // namespace tdmjls
