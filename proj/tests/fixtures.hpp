#pragma once

#include <random>

#include "tdmjls/model.hpp"

namespace tdmjls::testing {

struct Fixture {
    MultiAgentMdp mdp;
    CommNetwork net;
    Vector mu0;
};

/// Two states, flat transitions, two agents on a complete gossip network.
inline Fixture make_e1()
{
    Fixture f;
    f.mdp.num_states = 2;
    f.mdp.transition = (Matrix(2, 2) << 0.5, 0.5, 0.5, 0.5).finished();
    f.mdp.discount = 0.5;
    f.mdp.features = (Matrix(2, 1) << 1.0, -1.0).finished();
    f.mdp.rewards = {Matrix::Constant(2, 2, 1.0), Matrix::Constant(2, 2, 0.0)};
    f.net.weights = (Matrix(2, 2) << 0.5, 0.5, 0.5, 0.5).finished();
    f.mu0 = (Vector(2) << 1.0, 0.0).finished();
    return f;
}

/// E1 with features (1,2) and rewards R1=1, R2=2.
inline Fixture make_e2()
{
    Fixture f = make_e1();
    f.mdp.features = (Matrix(2, 1) << 1.0, 2.0).finished();
    f.mdp.rewards = {Matrix::Constant(2, 2, 1.0), Matrix::Constant(2, 2, 2.0)};
    return f;
}

/// Random ergodic scenario at desk scale: dense positive transition rows,
/// full-rank features, Metropolis-style doubly stochastic gossip weights.
inline Fixture make_random(std::mt19937_64& rng, int num_states = 3, int feature_dim = 2,
                           int num_agents = 2)
{
    std::uniform_real_distribution<double> unif(0.1, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    Fixture f;
    f.mdp.num_states = num_states;
    f.mdp.transition.resize(num_states, num_states);
    for (int i = 0; i < num_states; ++i) {
        for (int j = 0; j < num_states; ++j) f.mdp.transition(i, j) = unif(rng);
        f.mdp.transition.row(i) /= f.mdp.transition.row(i).sum();
    }
    f.mdp.discount = 0.7;
    f.mdp.features.resize(num_states, feature_dim);
    for (int i = 0; i < num_states; ++i)
        for (int j = 0; j < feature_dim; ++j) f.mdp.features(i, j) = gauss(rng);
    for (int m = 0; m < num_agents; ++m) {
        Matrix r(num_states, num_states);
        for (int i = 0; i < num_states; ++i)
            for (int j = 0; j < num_states; ++j) r(i, j) = gauss(rng);
        f.mdp.rewards.push_back(r);
    }

    // Symmetric doubly stochastic weights: lazy averaging on a ring.
    f.net.weights = Matrix::Zero(num_agents, num_agents);
    if (num_agents == 1) {
        f.net.weights(0, 0) = 1.0;
    } else {
        for (int m = 0; m < num_agents; ++m) {
            f.net.weights(m, m) = 0.5;
            f.net.weights(m, (m + 1) % num_agents) += 0.25;
            f.net.weights(m, (m + num_agents - 1) % num_agents) += 0.25;
        }
    }

    f.mu0 = Vector::Constant(num_states, 1.0 / num_states);
    return f;
}

}  // namespace tdmjls::testing
