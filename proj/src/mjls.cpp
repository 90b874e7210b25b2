#include "tdmjls/mjls.hpp"

#include <unsupported/Eigen/KroneckerProduct>

namespace tdmjls {

namespace {

Vector vec(const Matrix& m)
{
    return Eigen::Map<const Vector>(m.data(), m.size());
}

Matrix unvec(const Eigen::Ref<const Vector>& v, int rows)
{
    return Eigen::Map<const Matrix>(v.data(), rows, static_cast<int>(v.size()) / rows);
}

}  // namespace

ModeSystem build_modes(const MultiAgentMdp& mdp, const CommNetwork& net,
                       const JumpChain& chain, double alpha, const MeanDynamics& dynamics)
{
    if (!(alpha >= 0.0)) throw StructuralError("alpha must be nonnegative");
    const int m = mdp.num_agents();
    const int p = mdp.feature_dim();
    if (net.num_agents() != m) throw StructuralError("network size does not match reward tables");

    ModeSystem sys;
    sys.alpha = alpha;
    sys.num_agents = m;
    sys.feature_dim = p;
    sys.theta_star_block = dynamics.theta_star.replicate(1, m);

    const Matrix consensus = Eigen::kroneckerProduct(net.weights, Matrix::Identity(p, p));
    const Matrix eye_m = Matrix::Identity(m, m);

    sys.h_modes.reserve(chain.num_modes);
    sys.g_modes.reserve(chain.num_modes);
    for (int i = 0; i < chain.num_modes; ++i) {
        const ModeMatrices mm = mode_matrices(mdp, i);
        sys.h_modes.push_back(alpha * Eigen::kroneckerProduct(eye_m, mm.a) + consensus);
        sys.g_modes.push_back(alpha * vec(mm.b + mm.a * sys.theta_star_block));
    }
    return sys;
}

LtiMoments::LtiMoments(ModeSystem modes, Matrix jump_transition, int size_guard)
    : modes_(std::move(modes)), p_z_(std::move(jump_transition))
{
    const int n = modes_.num_modes();
    const int nx = modes_.state_dim();
    const long q2_dim = static_cast<long>(n) * nx * nx;
    explicit_ = q2_dim <= size_guard;
    if (!explicit_) return;

    h11_ = Matrix::Zero(static_cast<long>(n) * nx, static_cast<long>(n) * nx);
    h21_ = Matrix::Zero(q2_dim, static_cast<long>(n) * nx);
    h22_ = Matrix::Zero(q2_dim, q2_dim);
    c_delta_ = Eigen::RowVectorXd::Zero(q2_dim);

    std::vector<Matrix> kron_hh(n);
    std::vector<Matrix> s_modes(n);
    for (int i = 0; i < n; ++i) {
        const Matrix& h = modes_.h_modes[i];
        const Vector& g = modes_.g_modes[i];
        kron_hh[i] = Eigen::kroneckerProduct(h, h);
        s_modes[i] = Eigen::kroneckerProduct(h, g) + Eigen::kroneckerProduct(g, h);
    }

    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double pij = p_z_(i, j);
            if (pij == 0.0) continue;
            h11_.block(static_cast<long>(j) * nx, static_cast<long>(i) * nx, nx, nx) =
                pij * modes_.h_modes[i];
            h21_.block(static_cast<long>(j) * nx * nx, static_cast<long>(i) * nx, nx * nx, nx) =
                pij * s_modes[i];
            h22_.block(static_cast<long>(j) * nx * nx, static_cast<long>(i) * nx * nx, nx * nx, nx * nx) =
                pij * kron_hh[i];
        }
    }

    const Vector trace_functional = vec(Matrix::Identity(nx, nx));
    for (int i = 0; i < n; ++i)
        c_delta_.segment(static_cast<long>(i) * nx * nx, nx * nx) =
            trace_functional.transpose() / static_cast<double>(modes_.num_agents);
}

const Matrix& LtiMoments::h11() const
{
    if (!explicit_) throw SizeGuardError("explicit H11 unavailable: size guard exceeded");
    return h11_;
}

const Matrix& LtiMoments::h21() const
{
    if (!explicit_) throw SizeGuardError("explicit H21 unavailable: size guard exceeded");
    return h21_;
}

const Matrix& LtiMoments::h22() const
{
    if (!explicit_) throw SizeGuardError("explicit H22 unavailable: size guard exceeded");
    return h22_;
}

const Eigen::RowVectorXd& LtiMoments::c_delta() const
{
    if (!explicit_) throw SizeGuardError("explicit C_delta unavailable: size guard exceeded");
    return c_delta_;
}

Vector LtiMoments::apply_h11(const Vector& stacked_q) const
{
    const int n = num_modes();
    const int nx = state_dim();
    Vector out = Vector::Zero(stacked_q.size());
    for (int i = 0; i < n; ++i) {
        const Vector hx = modes_.h_modes[i] * stacked_q.segment(static_cast<long>(i) * nx, nx);
        for (int j = 0; j < n; ++j) {
            const double pij = p_z_(i, j);
            if (pij != 0.0) out.segment(static_cast<long>(j) * nx, nx) += pij * hx;
        }
    }
    return out;
}

Vector LtiMoments::apply_h21(const Vector& stacked_q) const
{
    const int n = num_modes();
    const int nx = state_dim();
    Vector out = Vector::Zero(static_cast<long>(n) * nx * nx);
    for (int i = 0; i < n; ++i) {
        const Vector hx = modes_.h_modes[i] * stacked_q.segment(static_cast<long>(i) * nx, nx);
        const Matrix outer = hx * modes_.g_modes[i].transpose();
        const Vector sx = vec(Matrix(outer + outer.transpose()));
        for (int j = 0; j < n; ++j) {
            const double pij = p_z_(i, j);
            if (pij != 0.0) out.segment(static_cast<long>(j) * nx * nx, nx * nx) += pij * sx;
        }
    }
    return out;
}

Vector LtiMoments::apply_h22(const Vector& stacked_q2) const
{
    const int n = num_modes();
    const int nx = state_dim();
    Vector out = Vector::Zero(stacked_q2.size());
    for (int i = 0; i < n; ++i) {
        const Matrix x = unvec(stacked_q2.segment(static_cast<long>(i) * nx * nx, nx * nx), nx);
        const Vector hxh = vec(Matrix(modes_.h_modes[i] * x * modes_.h_modes[i].transpose()));
        for (int j = 0; j < n; ++j) {
            const double pij = p_z_(i, j);
            if (pij != 0.0) out.segment(static_cast<long>(j) * nx * nx, nx * nx) += pij * hxh;
        }
    }
    return out;
}

double LtiMoments::apply_c_delta(const Vector& stacked_q2) const
{
    const int n = num_modes();
    const int nx = state_dim();
    double total = 0.0;
    for (int i = 0; i < n; ++i)
        total += unvec(stacked_q2.segment(static_cast<long>(i) * nx * nx, nx * nx), nx).trace();
    return total / static_cast<double>(modes_.num_agents);
}

LtiMoments assemble_lti(const ModeSystem& modes, const JumpChain& chain, int size_guard)
{
    if (chain.num_modes != modes.num_modes())
        throw StructuralError("mode system and jump chain disagree on mode count");
    return LtiMoments(modes, chain.transition, size_guard);
}

std::pair<Vector, Vector> drive_terms(const ModeSystem& modes, const JumpChain& chain,
                                      const Vector& p_k)
{
    const int n = modes.num_modes();
    const int nx = modes.state_dim();
    if (p_k.size() != n) throw StructuralError("mode marginal has wrong length");

    Vector u_q = Vector::Zero(static_cast<long>(n) * nx);
    Vector u_q2 = Vector::Zero(static_cast<long>(n) * nx * nx);
    for (int i = 0; i < n; ++i) {
        if (p_k(i) == 0.0) continue;
        const Vector& g = modes.g_modes[i];
        const Vector gg = vec(Matrix(g * g.transpose()));
        for (int j = 0; j < n; ++j) {
            const double w = chain.transition(i, j) * p_k(i);
            if (w == 0.0) continue;
            u_q.segment(static_cast<long>(j) * nx, nx) += w * g;
            u_q2.segment(static_cast<long>(j) * nx * nx, nx * nx) += w * gg;
        }
    }
    return {u_q, u_q2};
}

}  // namespace tdmjls
