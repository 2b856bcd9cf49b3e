#pragma once

#include <vector>

#include "irsmec/config.hpp"
#include "irsmec/numerics.hpp"
#include "irsmec/random.hpp"

namespace irsmec {

/// One block-static channel snapshot.
///
/// Per user k: the direct AP-UE channel (length N), the UE-IRS channel
/// (length M), and the IRS-AP matrix (M x N, shared by all users). Derived:
///   cascade[k]   = diag(conj(h_ue_irs[k])) * h_irs_ap            (M x N)
///   composite[k] = [cascade[k]; h_direct[k]^H]                   ((M+1) x N)
/// so that for a lifted phase vector w (length M+1) and receive beam m the
/// effective scalar channel is w^H * composite[k] * m.
class ChannelRealization {
public:
    ChannelRealization(std::vector<CVector> h_direct, std::vector<CVector> h_ue_irs, CMatrix h_irs_ap);

    [[nodiscard]] int users() const { return static_cast<int>(h_direct_.size()); }
    [[nodiscard]] Eigen::Index antennas() const { return h_irs_ap_.cols(); }
    [[nodiscard]] Eigen::Index elements() const { return h_irs_ap_.rows(); }

    [[nodiscard]] const CVector& h_direct(int k) const { return h_direct_.at(k); }
    [[nodiscard]] const CVector& h_ue_irs(int k) const { return h_ue_irs_.at(k); }
    [[nodiscard]] const CMatrix& h_irs_ap() const { return h_irs_ap_; }
    [[nodiscard]] const CMatrix& cascade(int k) const { return cascade_.at(k); }
    [[nodiscard]] const CMatrix& composite(int k) const { return composite_.at(k); }

    /// User indices in SIC decoding order (weakest identity-phase gain first).
    [[nodiscard]] const std::vector<int>& sic_order() const { return sic_order_; }
    /// Position of user k inside sic_order().
    [[nodiscard]] int sic_rank(int k) const { return sic_rank_.at(k); }

    /// Same snapshot with the reflected path removed (UE-IRS channels zeroed).
    [[nodiscard]] ChannelRealization without_irs() const;

private:
    std::vector<CVector> h_direct_;
    std::vector<CVector> h_ue_irs_;
    CMatrix h_irs_ap_;
    std::vector<CMatrix> cascade_;
    std::vector<CMatrix> composite_;
    std::vector<int> sic_order_;
    std::vector<int> sic_rank_;
};

constexpr double kDefaultReferenceGain = 1e-3;

/// Large-scale power gain G0 * d^-c.
double pathloss_gain(double d, double exponent, double reference_gain = kDefaultReferenceGain);

/// Draws every link entry i.i.d. CN(0, 1) scaled by sqrt(pathloss_gain).
/// Each link uses its own child stream of `stream`, so a link's fading does
/// not depend on the array sizes of the other links.
ChannelRealization generate_channels(const SystemConfig& cfg, const RandomStream& stream);

/// Users sorted by || h_direct^H + h_ue_irs^H * h_irs_ap ||_2, non-decreasing,
/// ties kept in index order.
std::vector<int> sic_order(const ChannelRealization& real);

/// w^H * composite[k] * m.
Complex composite_gain(const ChannelRealization& real, int k, const CVector& w, const CVector& m);

/// Identity-phase gain used for SIC ordering.
double identity_phase_gain(const ChannelRealization& real, int k);

}  // namespace irsmec
