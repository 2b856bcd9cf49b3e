#include "irsmec/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace irsmec {

ChannelRealization::ChannelRealization(std::vector<CVector> h_direct, std::vector<CVector> h_ue_irs,
                                       CMatrix h_irs_ap)
    : h_direct_(std::move(h_direct)), h_ue_irs_(std::move(h_ue_irs)), h_irs_ap_(std::move(h_irs_ap))
{
    if (h_direct_.empty() || h_direct_.size() != h_ue_irs_.size()) {
        throw DimensionError("ChannelRealization: need one direct and one UE-IRS channel per user");
    }
    const Eigen::Index n = h_irs_ap_.cols();
    const Eigen::Index m = h_irs_ap_.rows();
    if (n <= 0) {
        throw DimensionError("ChannelRealization: AP must have at least one antenna");
    }
    cascade_.reserve(h_direct_.size());
    composite_.reserve(h_direct_.size());
    for (std::size_t k = 0; k < h_direct_.size(); ++k) {
        if (h_direct_[k].size() != n || h_ue_irs_[k].size() != m) {
            throw DimensionError("ChannelRealization: user " + std::to_string(k) + " has mismatched link sizes");
        }
        CMatrix cascade = h_ue_irs_[k].conjugate().asDiagonal() * h_irs_ap_;
        CMatrix composite(m + 1, n);
        composite.topRows(m) = cascade;
        composite.row(m) = h_direct_[k].adjoint();
        cascade_.push_back(std::move(cascade));
        composite_.push_back(std::move(composite));
    }
    sic_order_ = irsmec::sic_order(*this);
    sic_rank_.assign(sic_order_.size(), 0);
    for (std::size_t r = 0; r < sic_order_.size(); ++r) {
        sic_rank_[sic_order_[r]] = static_cast<int>(r);
    }
}

ChannelRealization ChannelRealization::without_irs() const
{
    std::vector<CVector> zeroed;
    zeroed.reserve(h_ue_irs_.size());
    for (const auto& h : h_ue_irs_) {
        zeroed.push_back(CVector::Zero(h.size()));
    }
    return ChannelRealization(h_direct_, std::move(zeroed), h_irs_ap_);
}

double pathloss_gain(double d, double exponent, double reference_gain)
{
    if (!(d > 0.0)) {
        throw NumericDomainError("pathloss_gain: distance must be positive, got " + std::to_string(d));
    }
    return reference_gain * std::pow(d, -exponent);
}

ChannelRealization generate_channels(const SystemConfig& cfg, const RandomStream& stream)
{
    cfg.validate();
    const int n = cfg.ap_antennas;
    const int m = cfg.irs_elements;

    auto draw = [](Eigen::Index len, double gain, RandomStream s) {
        const double amp = std::sqrt(gain);
        CVector v(len);
        for (Eigen::Index i = 0; i < len; ++i) {
            v(i) = amp * standard_cgauss(s);
        }
        return v;
    };

    std::vector<CVector> h_direct;
    std::vector<CVector> h_ue_irs;
    for (int k = 0; k < cfg.users; ++k) {
        const Position& ue = cfg.ue_positions[k];
        const double d_direct = distance(ue, cfg.ap_position);
        const double d_irs = distance(ue, cfg.irs_position) + cfg.irs_distance_offset_m;
        h_direct.push_back(draw(n, pathloss_gain(d_direct, cfg.exponent_direct, cfg.reference_gain),
                                stream.child("direct", k)));
        h_ue_irs.push_back(
            draw(m, pathloss_gain(d_irs, cfg.exponent_ue_irs, cfg.reference_gain), stream.child("ue_irs", k)));
    }

    const double d_irs_ap = distance(cfg.irs_position, cfg.ap_position);
    const double irs_ap_gain = pathloss_gain(d_irs_ap, cfg.exponent_irs_ap, cfg.reference_gain);
    // Column-major fill from one stream: row i of H is the IRS element i.
    const CVector flat = draw(static_cast<Eigen::Index>(m) * n, irs_ap_gain, stream.child("irs_ap"));
    CMatrix h_irs_ap = Eigen::Map<const CMatrix>(flat.data(), m, n);

    return ChannelRealization(std::move(h_direct), std::move(h_ue_irs), std::move(h_irs_ap));
}

double identity_phase_gain(const ChannelRealization& real, int k)
{
    const CMatrix& h = real.composite(k);
    return (CVector::Ones(h.rows()).adjoint() * h).norm();
}

std::vector<int> sic_order(const ChannelRealization& real)
{
    const int users = real.users();
    std::vector<double> gains(users);
    for (int k = 0; k < users; ++k) {
        gains[k] = identity_phase_gain(real, k);
    }
    std::vector<int> order(users);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&gains](int a, int b) { return gains[a] < gains[b]; });
    return order;
}

Complex composite_gain(const ChannelRealization& real, int k, const CVector& w, const CVector& m)
{
    const CMatrix& h = real.composite(k);
    if (w.size() != h.rows() || m.size() != h.cols()) {
        throw DimensionError("composite_gain: expected w of length " + std::to_string(h.rows()) +
                             " and m of length " + std::to_string(h.cols()));
    }
    return w.dot(h * m);  // dot() conjugates its left operand
}

}  // namespace irsmec
