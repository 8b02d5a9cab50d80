#pragma once

// Signal-flow graphs of the transducer, written directly from the Langevin
// equations. Each mode's self-loop is folded into its susceptibility, which
// multiplies every edge entering that mode. Node labels: ports a_in, c_in,
// f_o1, f_o2, f_m, a_out, c_out; modes a1, a2, b; conjugates carry a '+'.

#include <string>

#include "transducer/network.hpp"
#include "transducer/piezo.hpp"
#include "transducer/sfg.hpp"

namespace transducer {

inline SignalFlowGraph build_transducer_graph(const OperatingPoint& op, cplx s, bool rwa) {
    const auto& c = op.config;
    const auto chi = optical_susceptibilities(c, op.placement, s);
    const cplx chi_m = chi_m_effective(op, s);
    const cplx g = op.fields.g_om;
    const cplx sg = op.mechanics.sqrt_gamma_ex;
    const double s_int = std::sqrt(std::max(op.mechanics.gamma_int, 0.0));
    const double s_ex = std::sqrt(c.kappa_ex);

    SignalFlowGraph G;
    // d a1 = (i D1 - k1/2) a1 + iJ a2 + sqrt(k_ex) a_in + sqrt(k01) f_o1
    G.add_edge("a_in", "a1", chi.chi_1 * s_ex);
    G.add_edge("f_o1", "a1", chi.chi_1 * std::sqrt(c.kappa_0_1));
    G.add_edge("a2", "a1", chi.chi_1 * I * c.J);
    // d a2 = (i D2 - k2/2) a2 + iJ a1 + i g b [+ i g b+] + sqrt(k02) f_o2
    G.add_edge("a1", "a2", chi.chi_2 * I * c.J);
    G.add_edge("b", "a2", chi.chi_2 * I * g);
    G.add_edge("f_o2", "a2", chi.chi_2 * std::sqrt(c.kappa_0_2));
    // d b = (-i wm - gm/2) b + i g* a2 [+ i g a2+] + sqrt(gex) c_in + sqrt(gint) f_m
    G.add_edge("a2", "b", chi_m * I * std::conj(g));
    G.add_edge("c_in", "b", chi_m * sg);
    G.add_edge("f_m", "b", chi_m * s_int);
    // a_out = a_in - sqrt(k_ex) a1;  c_out = -c_in + sqrt(gex)* b
    G.add_edge("a_in", "a_out", 1.0);
    G.add_edge("a1", "a_out", -s_ex);
    G.add_edge("c_in", "c_out", -1.0);
    G.add_edge("b", "c_out", std::conj(sg));
    if (rwa) return G;

    const auto chic = conjugate_susceptibilities(c, op.placement, s);
    const cplx chi_mc = 1.0 / (s - I * c.omega_m + 0.5 * std::conj(op.mechanics.gamma_m));
    G.add_edge("a_in+", "a1+", chic.chi_1 * s_ex);
    G.add_edge("f_o1+", "a1+", chic.chi_1 * std::sqrt(c.kappa_0_1));
    G.add_edge("a2+", "a1+", chic.chi_1 * (-I * c.J));
    G.add_edge("a1+", "a2+", chic.chi_2 * (-I * c.J));
    G.add_edge("b+", "a2+", chic.chi_2 * (-I * std::conj(g)));
    G.add_edge("f_o2+", "a2+", chic.chi_2 * std::sqrt(c.kappa_0_2));
    G.add_edge("a2+", "b+", chi_mc * (-I * g));
    G.add_edge("c_in+", "b+", chi_mc * std::conj(sg));
    G.add_edge("f_m+", "b+", chi_mc * s_int);
    G.add_edge("a_in+", "a_out+", 1.0);
    G.add_edge("a1+", "a_out+", -s_ex);
    G.add_edge("c_in+", "c_out+", -1.0);
    G.add_edge("b+", "c_out+", sg);
    // counter-rotating couplings
    G.add_edge("b+", "a2", chi.chi_2 * I * g);
    G.add_edge("a2+", "b", chi_m * I * g);
    G.add_edge("b", "a2+", chic.chi_2 * (-I * std::conj(g)));
    G.add_edge("a2", "b+", chi_mc * (-I * std::conj(g)));
    return G;
}

// One-port reflection: line -> microwave mode c <-> mechanics b.
inline SignalFlowGraph build_s11_graph(const TransducerConfig& c, cplx s) {
    const double g = g_em(c);
    const double s_ex = std::sqrt(port_rates(c).Gamma_ex);
    const cplx x_mw = chi_mw(c, s);
    const cplx x_m = chi_m_bare(c, s);
    SignalFlowGraph G;
    G.add_edge("c_in", "c", x_mw * s_ex);
    G.add_edge("c", "b", x_m * I * g);
    G.add_edge("b", "c", x_mw * I * g);
    G.add_edge("c", "c_out", s_ex);
    G.add_edge("c_in", "c_out", -1.0);
    return G;
}

inline cplx s11_mason(const TransducerConfig& c, double omega) {
    return mason_gain(build_s11_graph(c, physical_s(omega)), "c_in", "c_out", omega);
}

}  // namespace transducer
