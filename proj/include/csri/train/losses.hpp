#pragma once

#include <cmath>
#include <stdexcept>

namespace csri::train {

struct LossWeights {
    double lambda_sr = 0.003;  // weighting of the pixel-fidelity term
};

inline void validate(const LossWeights& w) {
    if (!(w.lambda_sr >= 0.0))
        throw std::invalid_argument("LossWeights: lambda_sr must be >= 0");
}

// Per-step loss components. l_sr_fr and l_csrl are exact compositions of the
// other fields; see make_breakdown.
struct LossBreakdown {
    double l_sr = 0.0;
    double l_fr_syn = 0.0;
    double l_fr_nat = 0.0;
    double l_sr_fr = 0.0;
    double l_csrl = 0.0;
};

// l_fr_syn + lambda_sr * l_sr
inline double joint_loss(double l_fr_syn, double l_sr, const LossWeights& w) {
    return l_fr_syn + w.lambda_sr * l_sr;
}

// (l_fr_syn + l_fr_nat) + lambda_sr * l_sr
inline double csri_loss(double l_fr_syn, double l_fr_nat, double l_sr, const LossWeights& w) {
    return (l_fr_syn + l_fr_nat) + w.lambda_sr * l_sr;
}

inline LossBreakdown make_breakdown(double l_sr, double l_fr_syn, double l_fr_nat,
                                    const LossWeights& w) {
    LossBreakdown b;
    b.l_sr = l_sr;
    b.l_fr_syn = l_fr_syn;
    b.l_fr_nat = l_fr_nat;
    b.l_sr_fr = joint_loss(l_fr_syn, l_sr, w);
    b.l_csrl = csri_loss(l_fr_syn, l_fr_nat, l_sr, w);
    return b;
}

inline bool finite(const LossBreakdown& b) {
    return std::isfinite(b.l_sr) && std::isfinite(b.l_fr_syn) && std::isfinite(b.l_fr_nat) &&
           std::isfinite(b.l_sr_fr) && std::isfinite(b.l_csrl);
}

}  // namespace csri::train
