#pragma once

#include <complex>
#include <stdexcept>
#include <utility>

#include <Eigen/Dense>

#include "irsmec/random.hpp"

namespace irsmec {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

/// Thrown when operand shapes do not agree.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown when an input lies outside the mathematical domain of an operation
/// (non-positive distance, non-PSD covariance, zero phase reference, ...).
class NumericDomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Eigen-decomposition of a Hermitian matrix, eigenvalues in descending order.
/// Column i of `eigenvectors` pairs with `eigenvalues[i]`.
struct HermitianEig {
    RVector eigenvalues;
    CMatrix eigenvectors;
};

/// (A + A^H) / 2. Throws DimensionError for non-square input.
CMatrix hermitian_part(const CMatrix& a);

HermitianEig eig_hermitian(const CMatrix& a);

/// Nearest PSD matrix in Frobenius norm: V max(L, 0) V^H.
CMatrix psd_project(const CMatrix& a);

/// Top eigenpair of a Hermitian PSD matrix; the vector has unit norm.
std::pair<CVector, double> dominant_eigvec(const CMatrix& a);

/// Draws z = L u with L L^H = covariance and u ~ CN(0, I).
/// Real and imaginary parts of each u_i are N(0, 1/2).
CVector sample_cgauss(Eigen::Index n, const CMatrix& covariance, RandomStream& stream);

/// One CN(0, 1) draw.
Complex standard_cgauss(RandomStream& stream);

}  // namespace irsmec
