#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <cstring>
#include <string>

namespace tdmjls {

/// FNV-1a over raw little-endian bytes; used to fingerprint scenario inputs
/// so output artifacts can be traced back to exact inputs.
class Fnv1a {
public:
    Fnv1a& bytes(const void* data, std::size_t len)
    {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < len; ++i) {
            state_ ^= p[i];
            state_ *= 1099511628211ULL;
        }
        return *this;
    }

    Fnv1a& add(double v)
    {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof(bits));
        return bytes(&bits, sizeof(bits));
    }

    Fnv1a& add(std::int64_t v) { return bytes(&v, sizeof(v)); }

    Fnv1a& add(const Eigen::MatrixXd& m)
    {
        add(static_cast<std::int64_t>(m.rows()));
        add(static_cast<std::int64_t>(m.cols()));
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            for (Eigen::Index i = 0; i < m.rows(); ++i) add(m(i, j));
        return *this;
    }

    Fnv1a& add(const Eigen::VectorXd& v)
    {
        add(static_cast<std::int64_t>(v.size()));
        for (Eigen::Index i = 0; i < v.size(); ++i) add(v(i));
        return *this;
    }

    std::uint64_t digest() const { return state_; }

    std::string hex() const
    {
        char buf[17];
        std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(state_));
        return buf;
    }

private:
    std::uint64_t state_ = 1469598103934665603ULL;
};

}  // namespace tdmjls
