#pragma once

#include <cmath>
#include <random>

#include "irsmec/numerics.hpp"

namespace testing {

inline irsmec::CMatrix random_complex(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng)
{
    std::normal_distribution<double> n(0.0, 1.0);
    irsmec::CMatrix a(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            a(i, j) = irsmec::Complex(n(rng), n(rng));
        }
    }
    return a;
}

inline irsmec::CVector random_vector(Eigen::Index n, std::mt19937_64& rng)
{
    return random_complex(n, 1, rng).col(0);
}

inline irsmec::CMatrix random_hermitian(Eigen::Index n, std::mt19937_64& rng)
{
    const irsmec::CMatrix a = random_complex(n, n, rng);
    return (a + a.adjoint()) / 2.0;
}

inline irsmec::CMatrix random_psd(Eigen::Index n, Eigen::Index rank, std::mt19937_64& rng)
{
    const irsmec::CMatrix a = random_complex(n, rank, rng);
    return a * a.adjoint();
}

inline irsmec::CVector random_unit_modulus(Eigen::Index n, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(0.0, 2.0 * M_PI);
    irsmec::CVector w(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        w(i) = std::polar(1.0, u(rng));
    }
    return w;
}

inline double rel_diff(double a, double b)
{
    return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

}  // namespace testing
