#include "irsmec/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace irsmec {

namespace {

void require_square(const CMatrix& a, const char* what)
{
    if (a.rows() != a.cols() || a.rows() == 0) {
        throw DimensionError(std::string(what) + ": expected a non-empty square matrix, got " +
                             std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
    }
}

}  // namespace

CMatrix hermitian_part(const CMatrix& a)
{
    require_square(a, "hermitian_part");
    return (a + a.adjoint()) * 0.5;
}

HermitianEig eig_hermitian(const CMatrix& a)
{
    require_square(a, "eig_hermitian");
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitian_part(a));
    if (solver.info() != Eigen::Success) {
        throw NumericDomainError("eig_hermitian: eigensolver did not converge");
    }
    // Eigen returns ascending order.
    HermitianEig out;
    out.eigenvalues = solver.eigenvalues().reverse();
    out.eigenvectors = solver.eigenvectors().rowwise().reverse();
    return out;
}

CMatrix psd_project(const CMatrix& a)
{
    require_square(a, "psd_project");
    const HermitianEig eig = eig_hermitian(a);
    const RVector clipped = eig.eigenvalues.cwiseMax(0.0);
    CMatrix out = eig.eigenvectors * clipped.cast<Complex>().asDiagonal() * eig.eigenvectors.adjoint();
    return hermitian_part(out);
}

std::pair<CVector, double> dominant_eigvec(const CMatrix& a)
{
    const HermitianEig eig = eig_hermitian(a);
    CVector v = eig.eigenvectors.col(0);
    v.normalize();
    return {v, eig.eigenvalues(0)};
}

Complex standard_cgauss(RandomStream& stream)
{
    constexpr double kScale = 0.70710678118654752440;  // 1/sqrt(2)
    const double re = stream.normal();
    const double im = stream.normal();
    return {re * kScale, im * kScale};
}

CVector sample_cgauss(Eigen::Index n, const CMatrix& covariance, RandomStream& stream)
{
    if (n <= 0 || covariance.rows() != n || covariance.cols() != n) {
        throw DimensionError("sample_cgauss: covariance must be " + std::to_string(n) + "x" +
                             std::to_string(n));
    }
    const HermitianEig eig = eig_hermitian(covariance);
    const double scale = std::max(1.0, eig.eigenvalues.cwiseAbs().maxCoeff());
    if (eig.eigenvalues(n - 1) < -1e-8 * scale) {
        throw NumericDomainError("sample_cgauss: covariance is not positive semidefinite (min eigenvalue " +
                                 std::to_string(eig.eigenvalues(n - 1)) + ")");
    }
    CVector u(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        u(i) = standard_cgauss(stream);
    }
    const RVector root = eig.eigenvalues.cwiseMax(0.0).cwiseSqrt();
    return eig.eigenvectors * (root.cast<Complex>().asDiagonal() * u);
}

}  // namespace irsmec
