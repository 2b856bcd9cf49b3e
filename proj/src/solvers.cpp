#include "irsmec/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace irsmec {

namespace {

using conic::ConcaveFunction;

// constant + coeff . x
struct Affine {
    double constant = 0.0;
    RVector coeff;
};

// Per-user pieces of the parametric problem as functions of the block
// variable x. Rates are in units of the bandwidth B, powers in W.
struct UserModel {
    Affine snr;    // a0 p_k q_k
    Affine local;  // f_k / (C B)
    Affine power;  // p_k + P_cn (+ cubic term below)
    Eigen::Index cube_index = -1;
    double cube_coeff = 0.0;
};

struct RateFunctions {
    ConcaveFunction objective;
    std::vector<ConcaveFunction> rates;  // one per user, >= 0 when the threshold is met
};

void add_log(ConcaveFunction& fn, double weight, const Affine& arg)
{
    fn.logs.push_back({weight, arg.constant, arg.coeff});
}

void add_affine(ConcaveFunction& fn, double scale, const Affine& a)
{
    fn.constant += scale * a.constant;
    fn.linear.noalias() += scale * a.coeff;
}

Affine zero_affine(Eigen::Index dim)
{
    return {0.0, RVector::Zero(dim)};
}

RateFunctions build_rate_functions(const SystemConfig& cfg, const std::vector<int>& order,
                                   const std::vector<UserModel>& users, const AuxState& aux, Access access,
                                   Eigen::Index dim)
{
    const int count = static_cast<int>(users.size());
    const double inv_ln2 = 1.0 / std::numbers::ln2;
    const double threshold = cfg.rate_threshold_bps / cfg.bandwidth_hz;
    const double price = aux.eta1 / cfg.bandwidth_hz;

    RateFunctions out;
    out.objective = ConcaveFunction(dim);
    out.rates.assign(count, ConcaveFunction(dim));

    for (int k = 0; k < count; ++k) {
        add_affine(out.objective, 1.0, users[k].local);
        add_affine(out.objective, -price, users[k].power);
        if (users[k].cube_index >= 0) {
            out.objective.cubes.push_back({users[k].cube_index, price * users[k].cube_coeff});
        }
        add_affine(out.rates[k], 1.0, users[k].local);
        out.rates[k].constant -= threshold;
    }

    if (access == Access::Noma) {
        Affine cumulative{1.0, RVector::Zero(dim)};  // 1 + sum of earlier-decoded SNRs
        for (int k : order) {
            const Affine before = cumulative;
            cumulative.constant += users[k].snr.constant;
            cumulative.coeff += users[k].snr.coeff;
            ConcaveFunction& rate = out.rates[k];
            add_log(rate, inv_ln2, cumulative);
            const double t = aux.t.at(k);
            rate.constant += inv_ln2 * (std::log(t) + 1.0);
            add_affine(rate, -inv_ln2 * t, before);
        }
        add_log(out.objective, inv_ln2, cumulative);
    } else {
        const double share = 1.0 / count;
        for (int k = 0; k < count; ++k) {
            Affine arg{1.0 + count * users[k].snr.constant, count * users[k].snr.coeff};
            add_log(out.objective, share * inv_ln2, arg);
            add_log(out.rates[k], share * inv_ln2, arg);
        }
    }
    return out;
}

int weakest_user(const std::vector<ConcaveFunction>& rates, const RVector& x)
{
    int worst = -1;
    double lowest = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < rates.size(); ++k) {
        const double v = rates[k].value(x);
        if (v < lowest) {
            lowest = v;
            worst = static_cast<int>(k);
        }
    }
    return worst;
}

double frequency_scale(const SystemConfig& cfg)
{
    return std::cbrt(cfg.power_budget_w() / cfg.capacitance);
}

void check_aux(const Allocation& alloc, const AuxState& aux)
{
    if (static_cast<int>(aux.t.size()) != alloc.users()) {
        throw DimensionError("AuxState: need one multiplier per user");
    }
    for (double t : aux.t) {
        if (!(t > 0.0)) {
            throw NumericDomainError("AuxState: multipliers must be positive");
        }
    }
}

struct LiftedSetup {
    conic::Problem problem;
    std::vector<ConcaveFunction> rates;
};

}  // namespace

double slack_tolerance(const SystemConfig& cfg)
{
    return 1e-6 * std::max(1.0, cfg.rate_threshold_bps);
}

PowerFreqSolution solve_power_freq(const ChannelRealization& real, const Allocation& alloc, const AuxState& aux,
                                   const SystemConfig& cfg, const SolverOptions& opts, const SchemeTraits& traits)
{
    check_aux(alloc, aux);
    const int k_users = real.users();
    const bool local = traits.local_computing;
    const Eigen::Index dim = local ? 2 * k_users : k_users;
    const double a0 = cfg.inverse_noise();
    const double fscale = frequency_scale(cfg);
    const double budget = cfg.power_budget_w();
    const std::vector<double> gains = channel_gains(real, alloc);

    std::vector<UserModel> users(k_users);
    conic::Problem problem;
    problem.dim = dim;
    for (int k = 0; k < k_users; ++k) {
        UserModel& u = users[k];
        u.snr = zero_affine(dim);
        u.snr.coeff(k) = a0 * gains[k];
        u.local = zero_affine(dim);
        u.power = zero_affine(dim);
        u.power.constant = cfg.circuit_power_w;
        u.power.coeff(k) = 1.0;

        ConcaveFunction p_positive(dim);
        p_positive.linear(k) = 1.0;
        problem.hard.push_back(std::move(p_positive));

        ConcaveFunction cap(dim);
        cap.constant = budget;
        cap.linear(k) = -1.0;
        if (local) {
            const Eigen::Index fi = k_users + k;
            u.local.coeff(fi) = fscale / (cfg.cycles_per_bit * cfg.bandwidth_hz);
            u.cube_index = fi;
            u.cube_coeff = cfg.capacitance * fscale * fscale * fscale;
            cap.cubes.push_back({fi, u.cube_coeff});

            ConcaveFunction f_positive(dim);
            f_positive.linear(fi) = 1.0;
            problem.hard.push_back(std::move(f_positive));
        }
        problem.hard.push_back(std::move(cap));
    }

    RateFunctions fns = build_rate_functions(cfg, real.sic_order(), users, aux, traits.access, dim);
    problem.objective = fns.objective;
    problem.soft = fns.rates;

    std::vector<RVector> starts;
    RVector center(dim);
    center.head(k_users).setConstant(budget / 4.0);
    if (local) {
        center.tail(k_users).setConstant(std::cbrt(0.25));
    }
    starts.push_back(center);
    RVector current(dim);
    for (int k = 0; k < k_users; ++k) {
        current(k) = alloc.p[k];
        if (local) {
            current(k_users + k) = alloc.f[k] / fscale;
        }
    }
    starts.push_back(current);

    const conic::Result res = conic::solve(problem, starts, opts.conic());

    PowerFreqSolution out;
    out.p.assign(k_users, 0.0);
    out.f.assign(k_users, 0.0);
    for (int k = 0; k < k_users; ++k) {
        out.p[k] = res.x(k);
        if (local) {
            out.f[k] = res.x(k_users + k) * fscale;
        }
    }
    out.objective = res.objective * cfg.bandwidth_hz;
    out.gap = res.gap * cfg.bandwidth_hz;
    out.iterations = res.iterations;
    out.feasible = res.status != conic::Status::Infeasible;
    out.best_margin_bps = res.best_margin * cfg.bandwidth_hz;
    return out;
}

namespace {

// Per-user SNR as an affine function of the lifted variable. `functional[k]`
// is the Hermitian matrix H with q_k = Tr(H X_k).
LiftedSetup setup_lifted(const ChannelRealization& real, const Allocation& alloc, const AuxState& aux,
                         const SystemConfig& cfg, const SchemeTraits& traits,
                         const std::vector<conic::HermitianBlock>& blocks, const std::vector<int>& block_of_user,
                         const std::vector<CMatrix>& functional, Eigen::Index dim)
{
    const int k_users = real.users();
    const double a0 = cfg.inverse_noise();
    std::vector<UserModel> users(k_users);
    for (int k = 0; k < k_users; ++k) {
        const conic::HermitianBlock& block = blocks[block_of_user[k]];
        UserModel& u = users[k];
        const double weight = a0 * alloc.p[k];
        u.snr = zero_affine(dim);
        u.snr.constant = weight * block.functional_constant(functional[k]);
        u.snr.coeff.segment(block.offset(), block.basis_size()) =
            weight * block.functional_coefficients(functional[k]);
        u.local = zero_affine(dim);
        u.local.constant =
            traits.local_computing ? local_rate(alloc.f[k], cfg.cycles_per_bit) / cfg.bandwidth_hz : 0.0;
        u.power = zero_affine(dim);
        u.power.constant = total_power(alloc, cfg, k);
    }
    RateFunctions fns = build_rate_functions(cfg, real.sic_order(), users, aux, traits.access, dim);
    LiftedSetup setup;
    setup.problem.dim = dim;
    setup.problem.objective = fns.objective;
    setup.problem.soft = fns.rates;
    setup.problem.blocks = blocks;
    setup.rates = std::move(fns.rates);
    return setup;
}

constexpr double kBlendWeights[] = {0.5, 0.1, 0.01, 1e-3};

}  // namespace

std::vector<ConicSolution> solve_beamforming(const ChannelRealization& real, const Allocation& alloc,
                                             const AuxState& aux, const SystemConfig& cfg,
                                             const SolverOptions& opts, const SchemeTraits& traits)
{
    check_aux(alloc, aux);
    const int k_users = real.users();
    const Eigen::Index n = real.antennas();
    const Eigen::Index per_user = n * n - 1;
    const Eigen::Index dim = per_user * k_users;

    std::vector<conic::HermitianBlock> blocks;
    std::vector<int> block_of_user(k_users);
    std::vector<CMatrix> functional(k_users);
    for (int k = 0; k < k_users; ++k) {
        blocks.push_back(conic::HermitianBlock::trace_one(n, per_user * k));
        block_of_user[k] = k;
        const CVector hbar = real.composite(k).adjoint() * alloc.w;  // g_k = hbar^H m
        functional[k] = hbar * hbar.adjoint();
    }

    LiftedSetup setup = setup_lifted(real, alloc, aux, cfg, traits, blocks, block_of_user, functional, dim);
    std::vector<RVector> starts{RVector::Zero(dim)};
    for (double a : kBlendWeights) {
        RVector s(dim);
        for (int k = 0; k < k_users; ++k) {
            const CVector& m = alloc.m[k];
            const CMatrix blend = (1.0 - a) * (m * m.adjoint()) / m.squaredNorm() +
                                  a * CMatrix::Identity(n, n) / static_cast<double>(n);
            s.segment(per_user * k, per_user) = blocks[k].coordinates(blend);
        }
        starts.push_back(std::move(s));
    }

    const conic::Result res = conic::solve(setup.problem, starts, opts.conic());
    const bool feasible = res.status != conic::Status::Infeasible;
    const int violated = feasible ? -1 : weakest_user(setup.rates, res.x);

    std::vector<ConicSolution> out(k_users);
    for (int k = 0; k < k_users; ++k) {
        out[k].x = blocks[k].matrix(res.x);
        out[k].objective = res.objective * cfg.bandwidth_hz;
        out[k].kkt_residual = res.gap * cfg.bandwidth_hz;
        out[k].iterations = res.iterations;
        out[k].feasible = feasible;
        out[k].violated_user = violated;
    }
    return out;
}

ConicSolution solve_irs_phase(const ChannelRealization& real, const Allocation& alloc, const AuxState& aux,
                              const SystemConfig& cfg, const SolverOptions& opts, const SchemeTraits& traits)
{
    check_aux(alloc, aux);
    const int k_users = real.users();
    const Eigen::Index n = real.elements() + 1;
    const Eigen::Index dim = n * (n - 1);

    std::vector<conic::HermitianBlock> blocks{conic::HermitianBlock::unit_diagonal(n, 0)};
    std::vector<int> block_of_user(k_users, 0);
    std::vector<CMatrix> functional(k_users);
    for (int k = 0; k < k_users; ++k) {
        const CVector hw = real.composite(k) * alloc.m[k];  // g_k = w^H hw
        functional[k] = hw * hw.adjoint();
    }
    LiftedSetup setup = setup_lifted(real, alloc, aux, cfg, traits, blocks, block_of_user, functional, dim);

    ConicSolution out;
    if (dim == 0) {
        // No reflecting elements: W = [1] is the only point.
        const RVector x(0);
        out.x = CMatrix::Identity(1, 1);
        out.objective = setup.problem.objective.value(x) * cfg.bandwidth_hz;
        out.feasible = std::all_of(setup.rates.begin(), setup.rates.end(),
                                   [&x](const ConcaveFunction& r) { return r.value(x) >= 0.0; });
        out.violated_user = out.feasible ? -1 : weakest_user(setup.rates, x);
        return out;
    }

    std::vector<RVector> starts{RVector::Zero(dim)};
    const CMatrix ww = alloc.w * alloc.w.adjoint();
    for (double a : kBlendWeights) {
        starts.push_back(blocks[0].coordinates((1.0 - a) * ww + a * CMatrix::Identity(n, n)));
    }

    const conic::Result res = conic::solve(setup.problem, starts, opts.conic());
    out.x = blocks[0].matrix(res.x);
    out.objective = res.objective * cfg.bandwidth_hz;
    out.kkt_residual = res.gap * cfg.bandwidth_hz;
    out.iterations = res.iterations;
    out.feasible = res.status != conic::Status::Infeasible;
    out.violated_user = out.feasible ? -1 : weakest_user(setup.rates, res.x);
    return out;
}

CVector map_to_feasible(const CVector& z, RecoveryMode mode)
{
    if (mode == RecoveryMode::Beam) {
        const double norm = z.norm();
        if (!(norm > 0.0)) {
            CVector e = CVector::Zero(z.size());
            e(0) = 1.0;
            return e;
        }
        return z / norm;
    }
    CVector out(z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        out(i) = std::abs(z(i)) > 0.0 ? z(i) / std::abs(z(i)) : Complex(1.0, 0.0);
    }
    const Complex ref = std::conj(out(z.size() - 1));
    return out * ref;
}

RecoveredVector recover_rank1(const CMatrix& x, const CandidateScorer& scorer, RecoveryMode mode, int draws,
                              RandomStream& stream, double slack_tol, double rank_one_threshold)
{
    const CMatrix psd = psd_project(x);
    const auto [top, lambda] = dominant_eigvec(psd);
    const double trace = psd.trace().real();

    RecoveredVector best;
    best.v = map_to_feasible(top, mode);
    best.score = scorer(best.v);
    best.feasible = best.score.min_slack() >= -slack_tol;
    best.rank_one = lambda >= (1.0 - rank_one_threshold) * trace;
    if (best.rank_one) {
        return best;
    }
    if (draws <= 0) {
        throw std::invalid_argument("recover_rank1: randomization count must be >= 1 for a rank > 1 solution");
    }

    auto better = [](const RecoveredVector& cand, const RecoveredVector& incumbent) {
        if (cand.feasible != incumbent.feasible) {
            return cand.feasible;
        }
        if (cand.feasible) {
            return cand.score.objective > incumbent.score.objective;
        }
        return cand.score.min_slack() > incumbent.score.min_slack();
    };

    for (int l = 0; l < draws; ++l) {
        RecoveredVector cand;
        cand.v = map_to_feasible(sample_cgauss(psd.rows(), psd, stream), mode);
        cand.score = scorer(cand.v);
        cand.feasible = cand.score.min_slack() >= -slack_tol;
        if (better(cand, best)) {
            best = std::move(cand);
        }
    }
    return best;
}

BeamRecovery recover_beams(const ChannelRealization& real, const Allocation& alloc, const AuxState& aux,
                           const SystemConfig& cfg, const SolverOptions& opts, const SchemeTraits& traits,
                           const std::vector<ConicSolution>& lifted, const RandomStream& stream)
{
    const int users = real.users();
    if (static_cast<int>(lifted.size()) != users) {
        throw DimensionError("recover_beams: need one lifted beam per user");
    }
    std::vector<CVector> hbar(users);
    std::vector<double> gains(users);
    for (int k = 0; k < users; ++k) {
        hbar[k] = real.composite(k).adjoint() * alloc.w;
        gains[k] = std::max(0.0, (hbar[k].adjoint() * psd_project(lifted[k].x) * hbar[k])(0, 0).real());
    }
    BeamRecovery out;
    out.beams.resize(users);
    for (int k = 0; k < users; ++k) {
        auto scorer = [&, k](const CVector& v) {
            std::vector<double> g = gains;
            g[k] = std::norm(hbar[k].dot(v));
            return score_gains(cfg, real.sic_order(), alloc.p, alloc.f, g, aux, traits.access);
        };
        RandomStream draws = stream.child("beam", static_cast<std::uint64_t>(k));
        const RecoveredVector rec = recover_rank1(lifted[k].x, scorer, RecoveryMode::Beam, opts.randomizations, draws,
                                                  slack_tolerance(cfg), opts.rank_one_threshold);
        out.beams[k] = rec.v;
        gains[k] = std::norm(hbar[k].dot(rec.v));
        out.rank_one = out.rank_one && rec.rank_one;
    }
    out.score = score_gains(cfg, real.sic_order(), alloc.p, alloc.f, gains, aux, traits.access);
    return out;
}

RecoveredVector recover_phase(const ChannelRealization& real, const Allocation& alloc, const AuxState& aux,
                              const SystemConfig& cfg, const SolverOptions& opts, const SchemeTraits& traits,
                              const ConicSolution& lifted, RandomStream& stream)
{
    const int users = real.users();
    std::vector<CVector> hw(users);
    for (int k = 0; k < users; ++k) {
        hw[k] = real.composite(k) * alloc.m[k];
    }
    auto scorer = [&](const CVector& w) {
        std::vector<double> g(users);
        for (int k = 0; k < users; ++k) {
            g[k] = std::norm(w.dot(hw[k]));
        }
        return score_gains(cfg, real.sic_order(), alloc.p, alloc.f, g, aux, traits.access);
    };
    return recover_rank1(lifted.x, scorer, RecoveryMode::Phase, opts.randomizations, stream, slack_tolerance(cfg),
                         opts.rank_one_threshold);
}

std::vector<double> phases_from_lifted(const CVector& w)
{
    if (w.size() < 1) {
        throw DimensionError("phases_from_lifted: need at least the reference entry");
    }
    const Eigen::Index m = w.size() - 1;
    for (Eigen::Index i = 0; i <= m; ++i) {
        if (std::abs(w(i)) == 0.0) {
            throw NumericDomainError("phases_from_lifted: zero entry at index " + std::to_string(i));
        }
    }
    constexpr double kTwoPi = 2.0 * std::numbers::pi;
    std::vector<double> theta(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        double a = std::arg(w(m) / w(i));
        if (a < 0.0) {
            a += kTwoPi;
        }
        theta[i] = a >= kTwoPi ? 0.0 : a;
    }
    return theta;
}

CVector lifted_from_phases(const std::vector<double>& theta)
{
    CVector w(static_cast<Eigen::Index>(theta.size()) + 1);
    for (std::size_t i = 0; i < theta.size(); ++i) {
        w(static_cast<Eigen::Index>(i)) = std::polar(1.0, -theta[i]);
    }
    w(w.size() - 1) = 1.0;
    return w;
}

}  // namespace irsmec
