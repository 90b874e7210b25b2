// Python bindings for the core analysis operations.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tdmjls/io.hpp"
#include "tdmjls/scenario.hpp"

namespace py = pybind11;
using namespace tdmjls;

PYBIND11_MODULE(_tdmjls, m) {
    m.doc() = "Exact finite-time error analysis for decentralized TD(0) over "
              "a Markov-jump-linear-system lift";
    m.attr("__version__") = kVersion;

    py::register_exception<StructuralError>(m, "StructuralError", PyExc_ValueError);
    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<ErgodicityError>(m, "ErgodicityError", PyExc_ValueError);
    py::register_exception<NotHurwitzError>(m, "NotHurwitzError", PyExc_ValueError);
    py::register_exception<UnstableSystemError>(m, "UnstableSystemError", PyExc_RuntimeError);
    py::register_exception<InstabilityError>(m, "InstabilityError", PyExc_RuntimeError);
    py::register_exception<SizeGuardError>(m, "SizeGuardError", PyExc_RuntimeError);
    py::register_exception<InsufficientDataError>(m, "InsufficientDataError", PyExc_RuntimeError);
    py::register_exception<PathBudgetError>(m, "PathBudgetError", PyExc_RuntimeError);

    py::class_<CheckResult>(m, "CheckResult")
        .def_readonly("name", &CheckResult::name)
        .def_readonly("passed", &CheckResult::passed)
        .def_readonly("message", &CheckResult::message)
        .def("__repr__", [](const CheckResult& c) {
            return "<CheckResult " + c.name + (c.passed ? " PASS>" : " FAIL>");
        });

    py::class_<ValidationReport>(m, "ValidationReport")
        .def_readonly("checks", &ValidationReport::checks)
        .def("all_passed", &ValidationReport::all_passed)
        .def("__str__", &ValidationReport::to_string);

    py::class_<MultiAgentMdp>(m, "MultiAgentMdp")
        .def(py::init([](int num_states, Matrix transition, std::vector<Matrix> rewards,
                         double gamma, Matrix features) {
                 MultiAgentMdp mdp;
                 mdp.num_states = num_states;
                 mdp.transition = std::move(transition);
                 mdp.rewards = std::move(rewards);
                 mdp.discount = gamma;
                 mdp.features = std::move(features);
                 return mdp;
             }),
             py::arg("num_states"), py::arg("transition"), py::arg("rewards"),
             py::arg("gamma"), py::arg("features"))
        .def_readonly("num_states", &MultiAgentMdp::num_states)
        .def_readonly("transition", &MultiAgentMdp::transition)
        .def_readonly("rewards", &MultiAgentMdp::rewards)
        .def_readonly("discount", &MultiAgentMdp::discount)
        .def_readonly("features", &MultiAgentMdp::features)
        .def_property_readonly("num_agents", &MultiAgentMdp::num_agents)
        .def_property_readonly("feature_dim", &MultiAgentMdp::feature_dim);

    py::class_<CommNetwork>(m, "CommNetwork")
        .def(py::init([](Matrix weights) {
                 CommNetwork net;
                 net.weights = std::move(weights);
                 return net;
             }),
             py::arg("weights"))
        .def_readonly("weights", &CommNetwork::weights)
        .def_property_readonly("num_agents", &CommNetwork::num_agents);

    py::class_<JumpChain>(m, "JumpChain")
        .def_readonly("num_states", &JumpChain::num_states)
        .def_readonly("num_modes", &JumpChain::num_modes)
        .def_readonly("transition", &JumpChain::transition)
        .def_readonly("initial", &JumpChain::initial)
        .def_readonly("stationary", &JumpChain::stationary)
        .def_readonly("mixing_rate", &JumpChain::mixing_rate)
        .def("mode_pair", &JumpChain::mode_pair)
        .def("mode_of", &JumpChain::mode_of);

    py::class_<MeanDynamics>(m, "MeanDynamics")
        .def_readonly("a_bar", &MeanDynamics::a_bar)
        .def_readonly("b_bar_agents", &MeanDynamics::b_bar_agents)
        .def_readonly("b_bar", &MeanDynamics::b_bar)
        .def_readonly("theta_star", &MeanDynamics::theta_star);

    py::class_<ModeMatrices>(m, "ModeMatrices")
        .def_readonly("a", &ModeMatrices::a)
        .def_readonly("b", &ModeMatrices::b);

    py::class_<ModeSystem>(m, "ModeSystem")
        .def_readonly("alpha", &ModeSystem::alpha)
        .def_readonly("h_modes", &ModeSystem::h_modes)
        .def_readonly("g_modes", &ModeSystem::g_modes)
        .def_readonly("theta_star_block", &ModeSystem::theta_star_block)
        .def_property_readonly("state_dim", &ModeSystem::state_dim)
        .def_property_readonly("num_modes", &ModeSystem::num_modes);

    py::class_<LtiMoments>(m, "LtiMoments")
        .def_property_readonly("assembled_explicitly", &LtiMoments::assembled_explicitly)
        .def_property_readonly("h11", &LtiMoments::h11)
        .def_property_readonly("h21", &LtiMoments::h21)
        .def_property_readonly("h22", &LtiMoments::h22)
        .def_property_readonly("c_delta", &LtiMoments::c_delta)
        .def("apply_h11", &LtiMoments::apply_h11)
        .def("apply_h21", &LtiMoments::apply_h21)
        .def("apply_h22", &LtiMoments::apply_h22)
        .def("apply_c_delta", &LtiMoments::apply_c_delta);

    py::class_<MomentState>(m, "MomentState")
        .def_readonly("step", &MomentState::step)
        .def_readonly("q", &MomentState::q)
        .def_readonly("big_q", &MomentState::big_q)
        .def_readonly("p_k", &MomentState::p_k)
        .def("delta", &MomentState::delta);

    py::class_<ErrorTrajectory>(m, "ErrorTrajectory")
        .def_readonly("deltas", &ErrorTrajectory::deltas)
        .def_readonly("q_norms", &ErrorTrajectory::q_norms)
        .def_readonly("trace_q", &ErrorTrajectory::trace_q)
        .def_readonly("alpha", &ErrorTrajectory::alpha)
        .def_readonly("horizon", &ErrorTrajectory::horizon)
        .def_readonly("fingerprint", &ErrorTrajectory::fingerprint);

    py::class_<SteadyState> steady(m, "SteadyState");
    py::enum_<SteadyState::Method>(steady, "Method")
        .value("direct", SteadyState::Method::direct)
        .value("fixed_point", SteadyState::Method::fixed_point);
    steady.def_readonly("q_inf", &SteadyState::q_inf)
        .def_readonly("q2_inf", &SteadyState::q2_inf)
        .def_readonly("delta_inf", &SteadyState::delta_inf)
        .def_readonly("method", &SteadyState::method);

    py::class_<RateEnvelope>(m, "RateEnvelope")
        .def_readonly("rho_hat", &RateEnvelope::rho_hat)
        .def_readonly("c_hat", &RateEnvelope::c_hat)
        .def_readonly("window_begin", &RateEnvelope::window_begin)
        .def_readonly("window_end", &RateEnvelope::window_end)
        .def_readonly("samples", &RateEnvelope::samples);

    py::class_<SpectralReport>(m, "SpectralReport")
        .def_readonly("sr_h11", &SpectralReport::sr_h11)
        .def_readonly("sr_h22", &SpectralReport::sr_h22)
        .def_readonly("mixing", &SpectralReport::mixing)
        .def_readonly("rate", &SpectralReport::rate)
        .def_readonly("stable", &SpectralReport::stable)
        .def_readonly("pred_sr_h11", &SpectralReport::pred_sr_h11)
        .def_readonly("pred_sr_h22", &SpectralReport::pred_sr_h22)
        .def_readonly("alpha", &SpectralReport::alpha);

    py::class_<SweepRecord>(m, "SweepRecord")
        .def_readonly("alpha", &SweepRecord::alpha)
        .def_readonly("sr_h11", &SweepRecord::sr_h11)
        .def_readonly("sr_h22", &SweepRecord::sr_h22)
        .def_readonly("pred_sr_h11", &SweepRecord::pred_sr_h11)
        .def_readonly("pred_sr_h22", &SweepRecord::pred_sr_h22)
        .def_readonly("delta_inf", &SweepRecord::delta_inf)
        .def_readonly("q_inf_norm", &SweepRecord::q_inf_norm)
        .def_readonly("q2_inf_norm", &SweepRecord::q2_inf_norm)
        .def_readonly("stable", &SweepRecord::stable);

    py::class_<PerturbationSweep>(m, "PerturbationSweep")
        .def_readonly("records", &PerturbationSweep::records)
        .def_readonly("loglog_slope_delta", &PerturbationSweep::loglog_slope_delta)
        .def_readonly("h11_slope", &PerturbationSweep::h11_slope)
        .def_readonly("h22_slope", &PerturbationSweep::h22_slope)
        .def_readonly("max_re_a_bar", &PerturbationSweep::max_re_a_bar)
        .def_readonly("mixing", &PerturbationSweep::mixing)
        .def_readonly("monotone_onset", &PerturbationSweep::monotone_onset);

    py::class_<TdRunResult>(m, "TdRunResult")
        .def_readonly("weights", &TdRunResult::weights)
        .def_readonly("state_path", &TdRunResult::state_path)
        .def_readonly("seed", &TdRunResult::seed);

    py::class_<McEstimate>(m, "McEstimate")
        .def_readonly("deltas_hat", &McEstimate::deltas_hat)
        .def_readonly("stderrs", &McEstimate::stderrs)
        .def_readonly("trials", &McEstimate::trials)
        .def_readonly("seed", &McEstimate::seed);

    py::class_<Scenario>(m, "Scenario")
        .def_readonly("mdp", &Scenario::mdp)
        .def_readonly("net", &Scenario::net)
        .def_readwrite("alpha", &Scenario::alpha)
        .def_readwrite("theta0", &Scenario::theta0)
        .def_readonly("initial_state_dist", &Scenario::initial_state_dist)
        .def_readwrite("horizon", &Scenario::horizon)
        .def_readwrite("trials", &Scenario::trials)
        .def_readwrite("seed", &Scenario::seed)
        .def_readwrite("size_guard", &Scenario::size_guard);

    m.def("validate_scenario", &validate_scenario, py::arg("mdp"), py::arg("net"));
    m.def("stationary_distribution", &stationary_distribution, py::arg("transition"));
    m.def("build_jump_chain", &build_jump_chain, py::arg("mdp"), py::arg("initial_state_dist"));
    m.def("mode_matrices", &mode_matrices, py::arg("mdp"), py::arg("mode"));
    m.def("mean_dynamics", &mean_dynamics, py::arg("mdp"), py::arg("chain"));
    m.def("build_modes", &build_modes, py::arg("mdp"), py::arg("net"), py::arg("chain"),
          py::arg("alpha"), py::arg("dynamics"));
    m.def("assemble_lti", &assemble_lti, py::arg("modes"), py::arg("chain"),
          py::arg("size_guard") = kDefaultSizeGuard);
    m.def("drive_terms", &drive_terms, py::arg("modes"), py::arg("chain"), py::arg("p_k"));
    m.def("init_moments", &init_moments, py::arg("theta0"), py::arg("dynamics"), py::arg("chain"));
    m.def("step_moments", &step_moments, py::arg("state"), py::arg("modes"), py::arg("chain"));
    m.def("error_trajectory", &error_trajectory, py::arg("mdp"), py::arg("net"),
          py::arg("initial_state_dist"), py::arg("alpha"), py::arg("theta0"), py::arg("horizon"));
    m.def("steady_state", &steady_state, py::arg("modes"), py::arg("chain"), py::arg("lti"));
    m.def("rate_envelope", &rate_envelope, py::arg("trajectory"), py::arg("steady"));
    m.def("spectrum_report", &spectrum_report, py::arg("lti"), py::arg("chain"),
          py::arg("dynamics"), py::arg("alpha"));
    m.def("perturb_predict", &perturb_predict, py::arg("dynamics"), py::arg("alpha"));
    m.def("alpha_sweep", &alpha_sweep, py::arg("mdp"), py::arg("net"),
          py::arg("initial_state_dist"), py::arg("alphas"),
          py::arg("size_guard") = kDefaultSizeGuard);
    m.def("default_alpha_grid", &default_alpha_grid, py::arg("alpha0"), py::arg("points") = 5);
    m.def("trial_seed", &trial_seed, py::arg("master"), py::arg("trial"));
    m.def("run_td0", &run_td0, py::arg("mdp"), py::arg("net"), py::arg("initial_state_dist"),
          py::arg("alpha"), py::arg("theta0"), py::arg("horizon"), py::arg("seed"));
    m.def("monte_carlo_error", &monte_carlo_error, py::arg("mdp"), py::arg("net"),
          py::arg("initial_state_dist"), py::arg("alpha"), py::arg("theta0"), py::arg("horizon"),
          py::arg("trials"), py::arg("seed"));
    m.def("enumerate_error", &enumerate_error, py::arg("mdp"), py::arg("net"),
          py::arg("initial_state_dist"), py::arg("alpha"), py::arg("theta0"), py::arg("horizon"));
    m.def("parse_scenario", &parse_scenario, py::arg("path"));
    m.def("validate", &validate, py::arg("scenario"));
    m.def("load_scenario", &load_scenario, py::arg("path"));
    m.def("scenario_fingerprint", &scenario_fingerprint, py::arg("scenario"));
}
