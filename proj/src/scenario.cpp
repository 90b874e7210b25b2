#include "tdmjls/scenario.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "tdmjls/hash.hpp"

namespace tdmjls {

namespace {

using nlohmann::json;

Matrix parse_matrix(const json& j, const std::string& key, long rows, long cols)
{
    if (!j.is_array() || j.empty())
        throw StructuralError(key + " must be a non-empty array of rows");
    const long r = static_cast<long>(j.size());
    if (!j[0].is_array()) throw StructuralError(key + " rows must be arrays");
    const long c = static_cast<long>(j[0].size());
    if ((rows >= 0 && r != rows) || (cols >= 0 && c != cols))
        throw StructuralError(key + " has shape " + std::to_string(r) + "x" + std::to_string(c) +
                              ", expected " + std::to_string(rows) + "x" + std::to_string(cols));
    Matrix m(r, c);
    for (long i = 0; i < r; ++i) {
        if (!j[i].is_array() || static_cast<long>(j[i].size()) != c)
            throw StructuralError(key + " row " + std::to_string(i) + " has inconsistent length");
        for (long k = 0; k < c; ++k) {
            if (!j[i][k].is_number())
                throw StructuralError(key + " contains a non-numeric entry");
            m(i, k) = j[i][k].get<double>();
        }
    }
    if (!m.allFinite()) throw StructuralError(key + " contains non-finite entries");
    return m;
}

Vector parse_vector(const json& j, const std::string& key, long size)
{
    if (!j.is_array() || (size >= 0 && static_cast<long>(j.size()) != size))
        throw StructuralError(key + " must be an array of length " + std::to_string(size));
    Vector v(static_cast<long>(j.size()));
    for (long i = 0; i < v.size(); ++i) {
        if (!j[i].is_number()) throw StructuralError(key + " contains a non-numeric entry");
        v(i) = j[i].get<double>();
    }
    if (!v.allFinite()) throw StructuralError(key + " contains non-finite entries");
    return v;
}

}  // namespace

Scenario parse_scenario(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw StructuralError("cannot open scenario file: " + path);

    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw StructuralError("scenario file is not valid JSON: " + std::string(e.what()));
    }

    for (const char* key : {"num_states", "transition", "gamma", "features", "rewards",
                            "network_weights", "alpha"})
        if (!j.contains(key)) throw StructuralError(std::string("missing required key: ") + key);

    Scenario sc;
    if (!j["num_states"].is_number_integer() || j["num_states"].get<long>() < 1)
        throw StructuralError("num_states must be a positive integer");
    sc.mdp.num_states = j["num_states"].get<int>();
    const int s = sc.mdp.num_states;

    sc.mdp.transition = parse_matrix(j["transition"], "transition", s, s);
    if (!j["gamma"].is_number()) throw StructuralError("gamma must be a number");
    sc.mdp.discount = j["gamma"].get<double>();
    if (!std::isfinite(sc.mdp.discount)) throw StructuralError("gamma is not finite");
    sc.mdp.features = parse_matrix(j["features"], "features", s, -1);

    if (!j["rewards"].is_array() || j["rewards"].empty())
        throw StructuralError("rewards must be a non-empty array of |S|x|S| matrices");
    for (std::size_t m = 0; m < j["rewards"].size(); ++m)
        sc.mdp.rewards.push_back(parse_matrix(j["rewards"][m], "rewards[" + std::to_string(m) + "]", s, s));
    const int agents = sc.mdp.num_agents();

    sc.net.weights = parse_matrix(j["network_weights"], "network_weights", agents, agents);

    if (!j["alpha"].is_number()) throw StructuralError("alpha must be a number");
    sc.alpha = j["alpha"].get<double>();
    if (!(sc.alpha >= 0.0)) throw StructuralError("alpha must be nonnegative");

    const int p = sc.mdp.feature_dim();
    sc.theta0 = j.contains("theta0") ? parse_matrix(j["theta0"], "theta0", p, agents)
                                     : Matrix::Zero(p, agents);
    sc.initial_state_dist = j.contains("initial_state_dist")
                                ? parse_vector(j["initial_state_dist"], "initial_state_dist", s)
                                : Vector::Constant(s, 1.0 / static_cast<double>(s));

    if (j.contains("horizon")) {
        if (!j["horizon"].is_number_integer() || j["horizon"].get<std::int64_t>() < 0)
            throw StructuralError("horizon must be a nonnegative integer");
        sc.horizon = j["horizon"].get<std::int64_t>();
    }
    if (j.contains("trials")) {
        if (!j["trials"].is_number_integer() || j["trials"].get<std::int64_t>() < 2)
            throw StructuralError("trials must be an integer >= 2");
        sc.trials = j["trials"].get<std::int64_t>();
    }
    if (j.contains("seed")) {
        if (!j["seed"].is_number_integer()) throw StructuralError("seed must be an integer");
        sc.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("size_guard")) {
        if (!j["size_guard"].is_number_integer() || j["size_guard"].get<long>() < 0)
            throw StructuralError("size_guard must be a nonnegative integer");
        sc.size_guard = j["size_guard"].get<int>();
    }
    return sc;
}

ValidationReport validate(const Scenario& scenario)
{
    ValidationReport report = validate_scenario(scenario.mdp, scenario.net);

    const Vector& mu0 = scenario.initial_state_dist;
    const bool ok = mu0.minCoeff() >= 0.0 && std::abs(mu0.sum() - 1.0) <= 1e-12;
    report.checks.push_back({"initial_state_dist is a probability vector", ok,
                             ok ? "" : "entries must be nonnegative and sum to 1"});
    return report;
}

Scenario load_scenario(const std::string& path)
{
    Scenario sc = parse_scenario(path);
    ValidationReport report = validate(sc);
    if (!report.all_passed()) throw ValidationError(std::move(report));
    return sc;
}

std::uint64_t scenario_fingerprint(const Scenario& scenario)
{
    Fnv1a h;
    h.add(static_cast<std::int64_t>(scenario.mdp.num_states));
    h.add(scenario.mdp.transition);
    for (const auto& r : scenario.mdp.rewards) h.add(r);
    h.add(scenario.mdp.discount);
    h.add(scenario.mdp.features);
    h.add(scenario.net.weights);
    h.add(scenario.alpha);
    h.add(scenario.theta0);
    h.add(scenario.initial_state_dist);
    h.add(scenario.horizon);
    h.add(scenario.trials);
    h.add(static_cast<std::int64_t>(scenario.seed));
    h.add(static_cast<std::int64_t>(scenario.size_guard));
    return h.digest();
}

}  // namespace tdmjls
