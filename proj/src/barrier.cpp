#include "irsmec/barrier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace irsmec::conic {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr Complex kI{0.0, 1.0};

// Off-diagonal basis pairs shared by both block shapes.
void push_off_diagonal(Eigen::Index n, std::vector<std::vector<HermitianEntry>>& basis)
{
    for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = a + 1; b < n; ++b) {
            basis.push_back({{a, b, Complex(1.0, 0.0)}, {b, a, Complex(1.0, 0.0)}});
            basis.push_back({{a, b, kI}, {b, a, -kI}});
        }
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// ConcaveFunction

double ConcaveFunction::value(const RVector& x) const
{
    double v = constant + linear.dot(x);
    for (const auto& term : logs) {
        const double arg = term.offset + term.coeff.dot(x);
        if (!(arg > 0.0)) {
            return kNegInf;
        }
        v += term.weight * std::log(arg);
    }
    for (const auto& c : cubes) {
        const double xi = x(c.index);
        v -= c.coeff * xi * xi * xi;
    }
    return v;
}

RVector ConcaveFunction::gradient(const RVector& x) const
{
    RVector g = linear;
    for (const auto& term : logs) {
        const double arg = term.offset + term.coeff.dot(x);
        g.noalias() += (term.weight / arg) * term.coeff;
    }
    for (const auto& c : cubes) {
        const double xi = x(c.index);
        g(c.index) -= 3.0 * c.coeff * xi * xi;
    }
    return g;
}

void ConcaveFunction::add_hessian(const RVector& x, double scale, RMatrix& hess) const
{
    for (const auto& term : logs) {
        const double arg = term.offset + term.coeff.dot(x);
        hess.noalias() -= (scale * term.weight / (arg * arg)) * (term.coeff * term.coeff.transpose());
    }
    for (const auto& c : cubes) {
        hess(c.index, c.index) -= scale * 6.0 * c.coeff * x(c.index);
    }
}

ConcaveFunction ConcaveFunction::widened(Eigen::Index extra) const
{
    ConcaveFunction out(dim() + extra);
    out.constant = constant;
    out.linear.head(dim()) = linear;
    for (const auto& term : logs) {
        LogTerm t{term.weight, term.offset, RVector::Zero(dim() + extra)};
        t.coeff.head(dim()) = term.coeff;
        out.logs.push_back(std::move(t));
    }
    out.cubes = cubes;
    return out;
}

// ---------------------------------------------------------------------------
// HermitianBlock

HermitianBlock HermitianBlock::trace_one(Eigen::Index n, Eigen::Index offset)
{
    HermitianBlock block(CMatrix::Identity(n, n) / static_cast<double>(n), offset);
    push_off_diagonal(n, block.basis_);
    for (Eigen::Index j = 0; j + 1 < n; ++j) {
        block.basis_.push_back({{j, j, Complex(1.0, 0.0)}, {n - 1, n - 1, Complex(-1.0, 0.0)}});
    }
    block.unit_trace_ = true;
    return block;
}

HermitianBlock HermitianBlock::unit_diagonal(Eigen::Index n, Eigen::Index offset)
{
    HermitianBlock block(CMatrix::Identity(n, n), offset);
    push_off_diagonal(n, block.basis_);
    return block;
}

CMatrix HermitianBlock::matrix(const RVector& x) const
{
    CMatrix out = base_;
    for (std::size_t j = 0; j < basis_.size(); ++j) {
        const double coef = x(offset_ + static_cast<Eigen::Index>(j));
        for (const auto& e : basis_[j]) {
            out(e.row, e.col) += coef * e.value;
        }
    }
    return out;
}

RVector HermitianBlock::coordinates(const CMatrix& x) const
{
    const CMatrix d = x - base_;
    RVector out(basis_size());
    for (std::size_t j = 0; j < basis_.size(); ++j) {
        const HermitianEntry& first = basis_[j].front();
        if (first.row != first.col) {
            out(static_cast<Eigen::Index>(j)) =
                first.value.real() != 0.0 ? d(first.row, first.col).real() : d(first.row, first.col).imag();
        } else {
            out(static_cast<Eigen::Index>(j)) = d(first.row, first.row).real();
        }
    }
    return out;
}

double HermitianBlock::functional_constant(const CMatrix& h) const
{
    return (h * base_).trace().real();
}

RVector HermitianBlock::functional_coefficients(const CMatrix& h) const
{
    RVector out(basis_size());
    for (std::size_t j = 0; j < basis_.size(); ++j) {
        Complex acc = 0.0;
        for (const auto& e : basis_[j]) {
            acc += e.value * h(e.col, e.row);
        }
        out(static_cast<Eigen::Index>(j)) = acc.real();
    }
    return out;
}

double HermitianBlock::log_det(const RVector& x, CMatrix* inverse) const
{
    const CMatrix m = matrix(x);
    Eigen::LLT<CMatrix> llt(m);
    if (llt.info() != Eigen::Success) {
        return kNegInf;
    }
    double out = 0.0;
    const auto& l = llt.matrixLLT();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        const double d = l(i, i).real();
        if (!(d > 0.0) || !std::isfinite(d)) {
            return kNegInf;
        }
        out += 2.0 * std::log(d);
    }
    if (inverse != nullptr) {
        *inverse = llt.solve(CMatrix::Identity(m.rows(), m.cols()));
    }
    return out;
}

void HermitianBlock::add_log_det_derivatives(const CMatrix& inverse, RVector& grad, RMatrix& hess) const
{
    const auto& y = inverse;
    const auto count = basis_.size();
    for (std::size_t i = 0; i < count; ++i) {
        Complex g = 0.0;
        for (const auto& e : basis_[i]) {
            g += e.value * y(e.col, e.row);
        }
        const Eigen::Index gi = offset_ + static_cast<Eigen::Index>(i);
        grad(gi) += g.real();
        for (std::size_t j = i; j < count; ++j) {
            Complex h = 0.0;
            for (const auto& a : basis_[i]) {
                for (const auto& b : basis_[j]) {
                    h += a.value * b.value * y(a.col, b.row) * y(b.col, a.row);
                }
            }
            const Eigen::Index gj = offset_ + static_cast<Eigen::Index>(j);
            hess(gi, gj) -= h.real();
            if (gj != gi) {
                hess(gj, gi) -= h.real();
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Barrier method

namespace {

struct Evaluation {
    double value = kNegInf;  // barrier-augmented objective
    double objective = kNegInf;
};

Evaluation evaluate(const Problem& p, const RVector& x, double mu)
{
    Evaluation ev;
    const double f0 = p.objective.value(x);
    if (!std::isfinite(f0)) {
        return ev;
    }
    double acc = f0 / mu;
    for (const auto& group : {&p.hard, &p.soft}) {
        for (const auto& g : *group) {
            const double v = g.value(x);
            if (!(v > 0.0) || !std::isfinite(v)) {
                return ev;
            }
            acc += std::log(v);
        }
    }
    for (const auto& block : p.blocks) {
        const double ld = block.log_det(x);
        if (!std::isfinite(ld)) {
            return ev;
        }
        acc += ld;
    }
    ev.value = acc;
    ev.objective = f0;
    return ev;
}

bool strictly_feasible(const Problem& p, const RVector& x, bool include_soft)
{
    auto positive = [&x](const std::vector<ConcaveFunction>& fs) {
        return std::all_of(fs.begin(), fs.end(), [&x](const ConcaveFunction& f) {
            const double v = f.value(x);
            return v > 0.0 && std::isfinite(v);
        });
    };
    if (!positive(p.hard) || (include_soft && !positive(p.soft))) {
        return false;
    }
    return std::all_of(p.blocks.begin(), p.blocks.end(),
                       [&x](const HermitianBlock& b) { return std::isfinite(b.log_det(x)); });
}

void derivatives(const Problem& p, const RVector& x, double mu, RVector& grad, RMatrix& hess)
{
    grad = p.objective.gradient(x) / mu;
    hess.setZero(p.dim, p.dim);
    p.objective.add_hessian(x, 1.0 / mu, hess);
    for (const auto& group : {&p.hard, &p.soft}) {
        for (const auto& g : *group) {
            const double v = g.value(x);
            const RVector gg = g.gradient(x);
            grad.noalias() += gg / v;
            g.add_hessian(x, 1.0 / v, hess);
            hess.noalias() -= (gg / v) * (gg / v).transpose();
        }
    }
    CMatrix inverse;
    for (const auto& block : p.blocks) {
        block.log_det(x, &inverse);
        block.add_log_det_derivatives(inverse, grad, hess);
    }
}

Eigen::Index barrier_count(const Problem& p)
{
    Eigen::Index m = static_cast<Eigen::Index>(p.hard.size() + p.soft.size());
    for (const auto& b : p.blocks) {
        m += b.size();
    }
    return std::max<Eigen::Index>(m, 1);
}

Result run_barrier(const Problem& p, RVector x, const Options& opt, std::optional<double> stop_above)
{
    Result res;
    const double m = static_cast<double>(barrier_count(p));
    double mu = opt.mu0;
    RVector grad;
    RMatrix hess;
    int newton = 0;

    while (true) {
        // Centering.
        for (int inner = 0; inner < 100; ++inner) {
            if (newton >= opt.max_newton) {
                res.status = Status::IterationLimit;
                res.x = x;
                res.objective = p.objective.value(x);
                res.gap = m * mu;
                res.iterations = newton;
                return res;
            }
            derivatives(p, x, mu, grad, hess);
            RMatrix neg = -hess;
            Eigen::LLT<RMatrix> llt(neg);
            double ridge = 0.0;
            while (llt.info() != Eigen::Success) {
                ridge = ridge == 0.0 ? 1e-12 * std::max(1.0, neg.diagonal().cwiseAbs().maxCoeff()) : ridge * 10.0;
                llt.compute(neg + ridge * RMatrix::Identity(p.dim, p.dim));
            }
            const RVector step = llt.solve(grad);
            const double decrement = grad.dot(step);
            if (!(decrement > 2e-9)) {
                break;
            }
            const Evaluation here = evaluate(p, x, mu);
            double alpha = 1.0;
            bool moved = false;
            for (int ls = 0; ls < 60; ++ls) {
                const RVector trial = x + alpha * step;
                const Evaluation there = evaluate(p, trial, mu);
                if (std::isfinite(there.value) && there.value >= here.value + 0.01 * alpha * decrement) {
                    x = trial;
                    moved = true;
                    break;
                }
                alpha *= 0.5;
            }
            ++newton;
            if (!moved) {
                break;
            }
            if (stop_above && p.objective.value(x) > *stop_above) {
                res.status = Status::Optimal;
                res.x = x;
                res.objective = p.objective.value(x);
                res.gap = m * mu;
                res.iterations = newton;
                return res;
            }
        }
        const double f0 = p.objective.value(x);
        if (m * mu <= opt.tol * std::max(1.0, std::abs(f0))) {
            res.status = Status::Optimal;
            res.x = x;
            res.objective = f0;
            res.gap = m * mu;
            res.iterations = newton;
            return res;
        }
        mu *= opt.shrink;
    }
}

}  // namespace

Result solve(const Problem& problem, const std::vector<RVector>& starts, const Options& options)
{
    for (const auto& s : starts) {
        if (s.size() == problem.dim && strictly_feasible(problem, s, true)) {
            return run_barrier(problem, s, options, std::nullopt);
        }
    }

    const RVector* origin = nullptr;
    for (const auto& s : starts) {
        if (s.size() == problem.dim && strictly_feasible(problem, s, false)) {
            origin = &s;
            break;
        }
    }
    if (origin == nullptr) {
        throw std::invalid_argument("conic::solve: no start point satisfies the domain constraints");
    }

    // Feasibility phase: maximize s subject to Gj(x) - s > 0.
    const Eigen::Index n = problem.dim;
    Problem aux;
    aux.dim = n + 1;
    aux.objective = ConcaveFunction(n + 1);
    aux.objective.linear(n) = 1.0;
    for (const auto& h : problem.hard) {
        aux.hard.push_back(h.widened(1));
    }
    double lowest = std::numeric_limits<double>::infinity();
    for (const auto& g : problem.soft) {
        ConcaveFunction w = g.widened(1);
        w.linear(n) = -1.0;
        aux.hard.push_back(std::move(w));
        lowest = std::min(lowest, g.value(*origin));
    }
    aux.blocks = problem.blocks;

    RVector start(n + 1);
    start.head(n) = *origin;
    start(n) = lowest - 1.0;

    constexpr double kMarginTarget = 1e-4;
    const Result phase1 = run_barrier(aux, start, options, kMarginTarget);
    const double margin = phase1.x(n);
    if (!(margin > 0.0)) {
        Result out;
        out.status = Status::Infeasible;
        out.x = phase1.x.head(n);
        out.objective = problem.objective.value(out.x);
        out.iterations = phase1.iterations;
        out.best_margin = margin;
        return out;
    }
    Result out = run_barrier(problem, phase1.x.head(n), options, std::nullopt);
    out.iterations += phase1.iterations;
    out.best_margin = margin;
    return out;
}

}  // namespace irsmec::conic
