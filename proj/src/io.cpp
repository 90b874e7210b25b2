#include "tdmjls/io.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace tdmjls {

std::string format_double(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string metadata_line(std::uint64_t scenario_fingerprint, std::uint64_t seed,
                          const std::string& extras)
{
    char fp[32];
    std::snprintf(fp, sizeof(fp), "%016llx", static_cast<unsigned long long>(scenario_fingerprint));
    std::string line = "# tdmjls ";
    line += kVersion;
    line += " scenario=";
    line += fp;
    line += " seed=" + std::to_string(seed);
    if (!extras.empty()) line += " " + extras;
    return line;
}

std::vector<CompareRow> compare_rows(const ErrorTrajectory& exact, const McEstimate& mc)
{
    const std::size_t count = std::min(exact.deltas.size(), mc.deltas_hat.size());
    std::vector<CompareRow> rows(count);
    for (std::size_t k = 0; k < count; ++k) {
        CompareRow& r = rows[k];
        r.k = static_cast<std::int64_t>(k);
        r.delta_exact = exact.deltas[k];
        r.delta_hat = mc.deltas_hat[k];
        r.stderr_ = mc.stderrs[k];
        const double diff = r.delta_hat - r.delta_exact;
        if (r.stderr_ > 0.0)
            r.z = diff / r.stderr_;
        else
            r.z = std::abs(diff) <= 1e-12
                      ? 0.0
                      : std::copysign(std::numeric_limits<double>::infinity(), diff);
    }
    return rows;
}

void write_trajectory_csv(std::ostream& out, const ErrorTrajectory& traj,
                          const std::string& metadata)
{
    out << metadata << '\n';
    out << "k,delta,q_norm,trace_Q\n";
    for (std::size_t k = 0; k < traj.deltas.size(); ++k)
        out << k << ',' << format_double(traj.deltas[k]) << ',' << format_double(traj.q_norms[k])
            << ',' << format_double(traj.trace_q[k]) << '\n';
}

void write_mc_csv(std::ostream& out, const McEstimate& mc, const std::vector<double>* exact,
                  const std::string& metadata)
{
    out << metadata << '\n';
    out << "k,delta_hat,stderr,delta_exact\n";
    for (std::size_t k = 0; k < mc.deltas_hat.size(); ++k) {
        out << k << ',' << format_double(mc.deltas_hat[k]) << ','
            << format_double(mc.stderrs[k]) << ',';
        if (exact && k < exact->size()) out << format_double((*exact)[k]);
        out << '\n';
    }
}

void write_sweep_csv(std::ostream& out, const PerturbationSweep& sweep,
                     const std::string& metadata)
{
    out << metadata << '\n';
    out << "alpha,sr_h11,sr_h22,pred_sr_h11,pred_sr_h22,delta_inf,stable\n";
    for (const auto& r : sweep.records)
        out << format_double(r.alpha) << ',' << format_double(r.sr_h11) << ','
            << format_double(r.sr_h22) << ',' << format_double(r.pred_sr_h11) << ','
            << format_double(r.pred_sr_h22) << ',' << format_double(r.delta_inf) << ','
            << (r.stable ? 1 : 0) << '\n';
}

void write_compare_csv(std::ostream& out, const std::vector<CompareRow>& rows,
                       const std::string& metadata)
{
    out << metadata << '\n';
    out << "k,delta_exact,delta_hat,stderr,z\n";
    for (const auto& r : rows)
        out << r.k << ',' << format_double(r.delta_exact) << ',' << format_double(r.delta_hat)
            << ',' << format_double(r.stderr_) << ',' << format_double(r.z) << '\n';
}

std::string spectrum_text(const SpectralReport& report)
{
    std::ostringstream out;
    out << "alpha=" << format_double(report.alpha) << '\n'
        << "sr_h11=" << format_double(report.sr_h11) << '\n'
        << "sr_h22=" << format_double(report.sr_h22) << '\n'
        << "mixing=" << format_double(report.mixing) << '\n'
        << "rate=" << format_double(report.rate) << '\n'
        << "stable=" << (report.stable ? "true" : "false") << '\n'
        << "pred_sr_h11=" << format_double(report.pred_sr_h11) << '\n'
        << "pred_sr_h22=" << format_double(report.pred_sr_h22) << '\n';
    return out.str();
}

std::string spectrum_json(const SpectralReport& report)
{
    nlohmann::json j{
        {"alpha", report.alpha},
        {"sr_h11", report.sr_h11},
        {"sr_h22", report.sr_h22},
        {"mixing", report.mixing},
        {"rate", report.rate},
        {"stable", report.stable},
        {"pred_sr_h11", report.pred_sr_h11},
        {"pred_sr_h22", report.pred_sr_h22},
    };
    return j.dump(2) + "\n";
}

std::string steady_text(const SteadyState& ss)
{
    std::ostringstream out;
    out << "method=" << (ss.method == SteadyState::Method::direct ? "direct" : "fixed_point")
        << '\n'
        << "delta_inf=" << format_double(ss.delta_inf) << '\n'
        << "q_inf_norm=" << format_double(ss.q_inf.norm()) << '\n'
        << "q2_inf_norm=" << format_double(ss.q2_inf.norm()) << '\n';
    out << "q_inf=";
    for (long i = 0; i < ss.q_inf.size(); ++i)
        out << (i ? " " : "") << format_double(ss.q_inf(i));
    out << '\n' << "q2_inf=";
    for (long i = 0; i < ss.q2_inf.size(); ++i)
        out << (i ? " " : "") << format_double(ss.q2_inf(i));
    out << '\n';
    return out.str();
}

std::string sweep_summary_text(const PerturbationSweep& sweep)
{
    std::ostringstream out;
    out << "loglog_slope_delta_inf=" << format_double(sweep.loglog_slope_delta) << '\n'
        << "h11_slope=" << format_double(sweep.h11_slope) << '\n'
        << "h22_slope=" << format_double(sweep.h22_slope) << '\n'
        << "pred_h11_slope=" << format_double(sweep.max_re_a_bar) << '\n'
        << "pred_h22_slope=" << format_double(2.0 * sweep.max_re_a_bar) << '\n'
        << "mixing=" << format_double(sweep.mixing) << '\n'
        << "monotone_onset=" << (sweep.monotone_onset ? "true" : "false") << '\n';
    return out.str();
}

}  // namespace tdmjls
