// Reference-device walk-through: derived rates, pump-enhanced coupling and
// the conversion peak, printed as plain text.

#include <cstdio>

#include "transducer/transducer.hpp"

using namespace transducer;

int main() {
    const auto c = reference_config();
    const auto op = resolve_operating_point(c);
    std::printf("g_EM/2pi          %10.3f MHz\n", op.g_em / two_pi / 1e6);
    std::printf("Gamma_ex/Gamma    %10.4f\n", op.ports.overcoupling());
    std::printf("|gamma_ex|/2pi    %10.3f MHz\n", op.mechanics.gamma_ex_res / two_pi / 1e6);
    std::printf("gamma_total/2pi   %10.3f MHz\n", op.mechanics.gamma_m_res / two_pi / 1e6);
    std::printf("|a2|^2            %10.3e\n", op.fields.photons_2());
    std::printf("|g_om|/2pi        %10.3f MHz\n", std::abs(op.fields.g_om) / two_pi / 1e6);

    const auto rwa = peak_efficiency(op, Approximation::rwa);
    const auto full = peak_efficiency(op, Approximation::full);
    std::printf("peak eta (rwa)    %10.4f at omega_m %+.3f MHz\n", rwa.eta, (rwa.omega - c.omega_m) / two_pi / 1e6);
    std::printf("peak eta (full)   %10.4f\n", full.eta);

    for (double p : {1e-4, 1e-3, 1e-2, 0.1, 0.3}) {
        auto cp = c;
        cp.P_in = p;
        std::printf("P_in = %7.1e W   eta_peak = %.4f\n", p, peak_efficiency(cp).eta);
    }
}
