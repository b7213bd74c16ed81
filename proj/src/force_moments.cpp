#include "cqbm/force_moments.hpp"

#include <cmath>

namespace cqbm {

ForceMoments force_moments(const NormalModes& modes, const ForceSpec& f1, const ForceSpec& f2, double t) {
    check_caustic(modes, t);
    ForceMoments fm;
    for (int k = 0; k < 2; ++k) {
        const cplx z(modes.decay[k], modes.frequency[k]);
        const cplx a = force_exponential_moment(f1, t, z);
        const cplx b = force_exponential_moment(f2, t, z);
        fm.M[k] = a.imag();
        fm.N[k] = a.real();
        fm.M2[k] = b.imag();
        fm.N2[k] = b.real();
    }

    const double r1 = modes.ratio[0], r2 = modes.ratio[1];
    const double d = modes.coupling_factor();
    const double cot1 = 1.0 / std::tan(modes.frequency[0] * t);
    const double cot2 = 1.0 / std::tan(modes.frequency[1] * t);
    const auto& M = fm.M;
    const auto& N = fm.N;
    const auto& Mp = fm.M2;
    const auto& Np = fm.N2;

    fm.lambda1 = (-cot1 * M[0] + N[0] + r1 * r2 * cot2 * M[1] - r1 * r2 * N[1] - r1 * cot1 * Mp[0] + r1 * Np[0] +
                  r1 * cot2 * Mp[1] - r1 * Np[1]) /
                 d;
    fm.lambda2 = (r2 * cot1 * M[0] - r2 * N[0] - r2 * cot2 * M[1] + r2 * N[1] + r1 * r2 * cot1 * Mp[0] -
                  r1 * r2 * Np[0] - cot2 * Mp[1] + Np[1]) /
                 d;

    const double p1 = (M[0] + r1 * Mp[0]) / (d * std::sin(modes.frequency[0] * t) * std::exp(modes.decay[0] * t));
    const double p2 = (Mp[1] + r2 * M[1]) / (d * std::sin(modes.frequency[1] * t) * std::exp(modes.decay[1] * t));
    fm.phi = {p1 - r1 * p2, p2 - r2 * p1};
    return fm;
}

}  // namespace cqbm
