#pragma once

#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "irsmec/numerics.hpp"

// Small dense log-barrier interior-point solver for the problem shapes that
// appear in the resource-allocation subproblems:
//
//   maximize    F0(x)
//   subject to  Fi(x) > 0          (hard: domain constraints)
//               Gj(x) >= 0         (soft: rate constraints, may be infeasible)
//               Xb(x) >= 0         (Hermitian PSD blocks, affine in x)
//
// where every F is concave of the form
//   c + l.x + sum_l w_l ln(o_l + a_l.x) - sum_j q_j x_j^3     (w_l, q_j >= 0).
// Equality constraints on the Hermitian blocks (unit trace, unit diagonal)
// are eliminated by parameterizing each block over a basis of the
// constraint's null space.
namespace irsmec::conic {

struct LogTerm {
    double weight = 1.0;
    double offset = 0.0;
    RVector coeff;
};

struct CubicTerm {
    Eigen::Index index = 0;
    double coeff = 0.0;  // contributes -coeff * x[index]^3
};

class ConcaveFunction {
public:
    ConcaveFunction() = default;
    explicit ConcaveFunction(Eigen::Index dim) : linear(RVector::Zero(dim)) {}

    double constant = 0.0;
    RVector linear;
    std::vector<LogTerm> logs;
    std::vector<CubicTerm> cubes;

    [[nodiscard]] Eigen::Index dim() const { return linear.size(); }

    /// -inf when a log argument is not positive.
    [[nodiscard]] double value(const RVector& x) const;
    [[nodiscard]] RVector gradient(const RVector& x) const;
    /// hess += scale * Hessian(x).
    void add_hessian(const RVector& x, double scale, RMatrix& hess) const;

    /// Same function on a space with `extra` trailing coordinates it ignores.
    [[nodiscard]] ConcaveFunction widened(Eigen::Index extra) const;
};

struct HermitianEntry {
    Eigen::Index row = 0;
    Eigen::Index col = 0;
    Complex value;
};

/// X(x) = base + sum_j x[offset + j] * B_j with each B_j Hermitian and sparse.
class HermitianBlock {
public:
    /// Hermitian matrices with unit trace; base = I/n.
    static HermitianBlock trace_one(Eigen::Index n, Eigen::Index offset);
    /// Hermitian matrices with unit diagonal; base = I.
    static HermitianBlock unit_diagonal(Eigen::Index n, Eigen::Index offset);

    [[nodiscard]] Eigen::Index size() const { return base_.rows(); }
    [[nodiscard]] Eigen::Index offset() const { return offset_; }
    [[nodiscard]] Eigen::Index basis_size() const { return static_cast<Eigen::Index>(basis_.size()); }

    [[nodiscard]] CMatrix matrix(const RVector& x) const;
    /// Coordinates of a matrix satisfying the block's equality constraints.
    [[nodiscard]] RVector coordinates(const CMatrix& x) const;
    /// Re Tr(H X(x)) = functional_constant(H) + coefficients(H) . x[block]
    [[nodiscard]] double functional_constant(const CMatrix& h) const;
    [[nodiscard]] RVector functional_coefficients(const CMatrix& h) const;

    /// ln det X(x), or -inf when X(x) is not positive definite. On success
    /// fills the inverse when `inverse` is non-null.
    double log_det(const RVector& x, CMatrix* inverse = nullptr) const;
    /// Adds the gradient and Hessian of ln det X(x) given Y = X(x)^-1.
    void add_log_det_derivatives(const CMatrix& inverse, RVector& grad, RMatrix& hess) const;

private:
    HermitianBlock(CMatrix base, Eigen::Index offset) : base_(std::move(base)), offset_(offset) {}

    CMatrix base_;
    Eigen::Index offset_;
    std::vector<std::vector<HermitianEntry>> basis_;
    bool unit_trace_ = false;
};

struct Problem {
    Eigen::Index dim = 0;
    ConcaveFunction objective;
    std::vector<ConcaveFunction> hard;
    std::vector<ConcaveFunction> soft;
    std::vector<HermitianBlock> blocks;
};

struct Options {
    double tol = 1e-6;
    int max_newton = 600;
    double mu0 = 1.0;
    double shrink = 0.2;
};

enum class Status { Optimal, Infeasible, IterationLimit };

struct Result {
    Status status = Status::IterationLimit;
    RVector x;
    double objective = -std::numeric_limits<double>::infinity();
    double gap = std::numeric_limits<double>::infinity();  // barrier duality-gap bound
    int iterations = 0;
    // Largest achievable min_j Gj(x) found by the feasibility phase. Only
    // meaningful when the feasibility phase ran.
    double best_margin = std::numeric_limits<double>::quiet_NaN();
};

/// Starts from the first strictly feasible point in `starts`; when none is,
/// runs a feasibility phase from the first point that satisfies the hard and
/// PSD constraints. Throws std::invalid_argument if no start does.
Result solve(const Problem& problem, const std::vector<RVector>& starts, const Options& options);

}  // namespace irsmec::conic
