#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "tdmjls/model.hpp"

namespace tdmjls {

/// Per-mode jump-system matrices at a fixed step size:
///   H_i = alpha * (I_M kron A_i) + W kron I_p,   G_i = alpha * vec(B_i + A_i Theta*).
struct ModeSystem {
    double alpha = 0.0;
    int num_agents = 0;   // M
    int feature_dim = 0;  // p
    std::vector<Matrix> h_modes;  // n matrices, n_xi x n_xi
    std::vector<Vector> g_modes;  // n vectors, length n_xi
    Matrix theta_star_block;      // p x M, columns all theta*

    int state_dim() const { return num_agents * feature_dim; }  // n_xi
    int num_modes() const { return static_cast<int>(h_modes.size()); }
};

inline constexpr int kDefaultSizeGuard = 5000;

/// Lifted LTI system propagating the stacked mode-conditioned moments.
///
/// Block (j,i) of h11 is p_ij H_i, of h22 is p_ij (H_i kron H_i), of h21 is
/// p_ij S_i with S_i = H_i kron G_i + G_i kron H_i. Explicit matrices are
/// assembled only when n * n_xi^2 fits the size guard; the mode-wise apply_*
/// routines work in either form.
class LtiMoments {
public:
    LtiMoments(ModeSystem modes, Matrix jump_transition, int size_guard);

    bool assembled_explicitly() const { return explicit_; }
    int num_modes() const { return modes_.num_modes(); }
    int state_dim() const { return modes_.state_dim(); }

    /// Explicit matrices; throw SizeGuardError when not assembled.
    const Matrix& h11() const;
    const Matrix& h21() const;
    const Matrix& h22() const;
    const Eigen::RowVectorXd& c_delta() const;

    /// Matrix-free applications, valid in both forms.
    Vector apply_h11(const Vector& stacked_q) const;
    Vector apply_h21(const Vector& stacked_q) const;
    Vector apply_h22(const Vector& stacked_q2) const;
    double apply_c_delta(const Vector& stacked_q2) const;

    const ModeSystem& modes() const { return modes_; }
    const Matrix& jump_transition() const { return p_z_; }

private:
    ModeSystem modes_;
    Matrix p_z_;
    bool explicit_ = false;
    Matrix h11_, h21_, h22_;
    Eigen::RowVectorXd c_delta_;
};

ModeSystem build_modes(const MultiAgentMdp& mdp, const CommNetwork& net,
                       const JumpChain& chain, double alpha, const MeanDynamics& dynamics);

LtiMoments assemble_lti(const ModeSystem& modes, const JumpChain& chain,
                        int size_guard = kDefaultSizeGuard);

/// Driving terms at mode marginal p_k: block j of u_q is sum_i p_ij p_i G_i,
/// block j of u_Q is sum_i p_ij p_i (G_i kron G_i).
std::pair<Vector, Vector> drive_terms(const ModeSystem& modes, const JumpChain& chain,
                                      const Vector& p_k);

}  // namespace tdmjls
