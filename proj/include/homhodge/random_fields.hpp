#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <random>

namespace homhodge {

// Smooth random scalar field on the torus [0, Lx) x [0, Ly): a constant
// offset plus four lowest-frequency Fourier modes with random phases. The
// oscillation amplitude is normalized so max |field - offset| <= amp_osc;
// gentle gradients keep the exponential dressing well-conditioned on coarse
// meshes.
class SmoothTorusField {
public:
    template <typename Rng>
    SmoothTorusField(double lx, double ly, double amp_osc, double amp_const, Rng& rng)
        : lx_(lx), ly_(ly) {
        std::uniform_real_distribution<double> unit(-1.0, 1.0);
        std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
        double total = 0.0;
        for (auto& c : coeff_) {
            c = unit(rng);
            total += std::abs(c);
        }
        const double scale = total > 0.0 ? amp_osc / total : 0.0;
        for (auto& c : coeff_) c *= scale;
        for (auto& p : phase_) p = angle(rng);
        offset_ = amp_const * unit(rng);
    }

    double operator()(double x, double y) const {
        const double tx = 2.0 * std::numbers::pi * x / lx_;
        const double ty = 2.0 * std::numbers::pi * y / ly_;
        return offset_ + coeff_[0] * std::sin(tx + phase_[0]) +
               coeff_[1] * std::cos(ty + phase_[1]) +
               coeff_[2] * std::sin(tx + ty + phase_[2]) +
               coeff_[3] * std::cos(tx - ty + phase_[3]);
    }

private:
    double lx_, ly_;
    double offset_ = 0.0;
    std::array<double, 4> coeff_{};
    std::array<double, 4> phase_{};
};

}  // namespace homhodge
