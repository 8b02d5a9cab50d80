#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "support.hpp"

using namespace transducer;

namespace {

std::set<std::string> label_set(const SignalFlowGraph& g, const GraphPath& p) {
    std::set<std::string> s;
    for (auto n : p.nodes) s.insert(g.label(n));
    return s;
}

std::string joined(const SignalFlowGraph& g, const GraphPath& p) {
    std::string s;
    for (auto n : p.nodes) s += (s.empty() ? "" : ",") + g.label(n);
    return s;
}

// Brute force: every node sequence starting at its smallest id that closes
// into a cycle, by exhaustive extension.
std::size_t brute_force_cycles(std::size_t n, const std::vector<std::vector<bool>>& adj) {
    std::size_t count = 0;
    std::vector<std::size_t> path;
    std::vector<bool> used(n, false);
    std::function<void(std::size_t)> go = [&](std::size_t start) {
        const std::size_t u = path.back();
        if (path.size() >= 2 && adj[u][start]) ++count;
        for (std::size_t v = start + 1; v < n; ++v)
            if (!used[v] && adj[u][v]) {
                used[v] = true;
                path.push_back(v);
                go(start);
                path.pop_back();
                used[v] = false;
            }
    };
    for (std::size_t s = 0; s < n; ++s) {
        path.assign(1, s);
        used.assign(n, false);
        used[s] = true;
        go(s);
    }
    return count;
}

const std::vector<std::set<std::string>> paper_pairs{
    {"b", "a2"}, {"b+", "a2+"}, {"a1", "a2"}, {"a1+", "a2+"}, {"b", "a2+"}, {"b+", "a2"}};

}  // namespace

TEST(Mason, ChainWithSplitLoop) {
    const cplx g1(0.3, 0.1), g2(-1.2, 0.4), L(0.2, -0.5);
    SignalFlowGraph g;
    g.add_edge("src", "x", g1);
    g.add_edge("x", "y", g2);
    g.add_edge("x", "aux", L);
    g.add_edge("aux", "x", 1.0);
    g.add_edge("y", "sink", 1.0);
    EXPECT_LE(relative_difference(mason_gain(g, "src", "sink"), g1 * g2 / (1.0 - L)), 1e-15);
}

TEST(Mason, AcyclicGraphHasNoLoops) {
    SignalFlowGraph g;
    g.add_edge("a", "b", 1.0);
    g.add_edge("a", "c", 2.0);
    g.add_edge("b", "d", 3.0);
    g.add_edge("c", "d", 4.0);
    EXPECT_TRUE(enumerate_loops(g).empty());
    EXPECT_EQ(mason_gain(g, "a", "d"), cplx(11.0));
    EXPECT_EQ(enumerate_forward_paths(g, g.node("a"), g.node("d")).size(), 2u);
}

TEST(Mason, CompleteDigraphCycleCount) {
    for (std::size_t n : {3u, 4u, 5u}) {
        SignalFlowGraph g;
        std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) {
                    g.add_edge(std::string(1, char('a' + i)), std::string(1, char('a' + j)), 0.1);
                    adj[i][j] = true;
                }
        EXPECT_EQ(enumerate_loops(g).size(), brute_force_cycles(n, adj)) << n;
        if (n == 4) EXPECT_EQ(enumerate_loops(g).size(), 20u);
    }
}

TEST(Mason, RandomSparseCycleCount) {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 30; ++t) {
        const std::size_t n = 5;
        std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
        SignalFlowGraph g;
        for (std::size_t i = 0; i < n; ++i) g.add_node(std::string(1, char('a' + i)));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j && rng() % 2) {
                    adj[i][j] = true;
                    g.add_edge(std::string(1, char('a' + i)), std::string(1, char('a' + j)), 0.1);
                }
        EXPECT_EQ(enumerate_loops(g).size(), brute_force_cycles(n, adj));
    }
}

TEST(Mason, NontouchingBasics) {
    SignalFlowGraph one;
    one.add_edge("a", "b", 0.5);
    one.add_edge("b", "a", 0.5);
    EXPECT_TRUE(nontouching_sets(enumerate_loops(one)).empty());

    SignalFlowGraph two = one;
    two.add_edge("c", "d", 0.1);
    two.add_edge("d", "c", 0.2);
    const auto sets = nontouching_sets(enumerate_loops(two));
    ASSERT_EQ(sets.size(), 1u);
    EXPECT_EQ(sets[0].size(), 1u);
    EXPECT_EQ(mason_determinant(enumerate_loops(two), sets), cplx(1.0 - 0.25 - 0.02 + 0.25 * 0.02));
}

TEST(Mason, ThreeDisjointLoops) {
    SignalFlowGraph g;
    for (const char* p : {"ab", "cd", "ef"}) {
        g.add_edge(std::string(1, p[0]), std::string(1, p[1]), 0.5);
        g.add_edge(std::string(1, p[1]), std::string(1, p[0]), 0.5);
    }
    const auto loops = enumerate_loops(g);
    const auto sets = nontouching_sets(loops);
    ASSERT_EQ(sets.size(), 2u);
    EXPECT_EQ(sets[0].size(), 3u);
    EXPECT_EQ(sets[1].size(), 1u);
    EXPECT_NEAR(std::abs(mason_determinant(loops, sets) - std::pow(0.75, 3)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(mason_determinant(loops, sets, 2) - (std::pow(0.75, 3) + 0.25 * 0.25 * 0.25)), 0.0, 1e-15);
}

TEST(TransducerGraph, RwaHasSingleForwardPath) {
    const auto op = resolve_operating_point(reference_config());
    const cplx s = physical_s(op.config.omega_m);
    const auto g = build_transducer_graph(op, s, true);
    const auto d = mason_decompose(g, "c_in", "a_out");
    ASSERT_EQ(d.forward_paths.size(), 1u);
    EXPECT_EQ(joined(g, d.forward_paths[0]), "c_in,b,a2,a1,a_out");
    const auto f = network_functions(op, s);
    const cplx expected = op.mechanics.sqrt_gamma_ex * std::sqrt(op.config.kappa_ex) * op.config.J * f.chi_m * f.chi_2 *
                          f.chi_1 * op.fields.g_om;
    // the two i factors of the couplings cancel the sign of the output edge
    EXPECT_LE(relative_difference(d.forward_paths[0].gain, expected), 1e-12);
    EXPECT_EQ(d.loops.size(), 2u);
}

TEST(TransducerGraph, FullGraphLoopsContainPaperPairs) {
    const auto op = resolve_operating_point(reference_config());
    const auto g = build_transducer_graph(op, physical_s(op.config.omega_m), false);
    const auto d = mason_decompose(g, "c_in", "a_out");
    std::vector<std::set<std::string>> two_node;
    for (const auto& l : d.loops)
        if (l.nodes.size() == 2) two_node.push_back(label_set(g, l));
    EXPECT_EQ(two_node.size(), 6u);
    for (const auto& p : paper_pairs) EXPECT_NE(std::find(two_node.begin(), two_node.end(), p), two_node.end());
}

TEST(TransducerGraph, FullGraphCompleteBookkeeping) {
    // the two-node loops are not the whole story: the coupled b / a2 / b+ / a2+
    // ring also closes two four-node cycles, and a second forward path detours
    // through them
    const auto op = resolve_operating_point(reference_config());
    const auto g = build_transducer_graph(op, physical_s(op.config.omega_m), false);
    const auto d = mason_decompose(g, "c_in", "a_out");
    EXPECT_EQ(d.forward_paths.size(), 2u);
    EXPECT_EQ(d.loops.size(), 8u);
    EXPECT_EQ(d.nontouching_count(2), 7u);
    EXPECT_EQ(d.nontouching_count(3), 0u);
    std::size_t four = 0;
    for (const auto& l : d.loops) four += l.nodes.size() == 4;
    EXPECT_EQ(four, 2u);
}

TEST(TransducerGraph, PairTruncationIsExact) {
    const auto op = resolve_operating_point(reference_config());
    const auto g = build_transducer_graph(op, physical_s(op.config.omega_m + 1e6), false);
    const auto loops = enumerate_loops(g);
    const auto sets = nontouching_sets(loops);
    EXPECT_EQ(mason_determinant(loops, sets, 2), mason_determinant(loops, sets));
}

TEST(TransducerGraph, DeterminantStructure) {
    // Mason's Delta against the loop-gain expansion, at random frequencies
    std::mt19937_64 rng(17);
    const auto op = resolve_operating_point(reference_config());
    std::uniform_real_distribution<double> off(-50.0, 50.0);
    for (int t = 0; t < 50; ++t) {
        const double w = op.config.omega_m + off(rng) * op.mechanics.gamma_m_res;
        const cplx s = physical_s(w);
        const auto k = counter_rotating_terms(op, s);
        const auto d = mason_decompose(build_transducer_graph(op, s, false), "c_in", "a_out", w);
        EXPECT_LE(relative_difference(d.determinant, exact_denominator(k)), 1e-12);
        EXPECT_LE(relative_difference(d.determinant, printed_denominator(k) - 2.0 * k.L1 * k.L2), 1e-12);
        ASSERT_EQ(d.forward_paths.size(), 2u);
        EXPECT_LE(relative_difference(d.forward_paths[0].gain * d.cofactors[0] + d.forward_paths[1].gain * d.cofactors[1],
                                      exact_numerator(k)),
                  1e-12);
    }
}

TEST(TransducerGraph, CuttingRingCouplingStopsConversion) {
    const auto op = resolve_operating_point(reference_config());
    const auto g = build_transducer_graph(op, physical_s(op.config.omega_m), false);
    const auto cut = remove_edges(g, [](const std::string& a, const std::string& b) {
        auto base = [](std::string x) { return x.back() == '+' ? x.substr(0, x.size() - 1) : x; };
        const auto x = base(a), y = base(b);
        return (x == "a1" && y == "a2") || (x == "a2" && y == "a1");
    });
    EXPECT_EQ(mason_gain(cut, "c_in", "a_out"), cplx{});
    EXPECT_TRUE(enumerate_forward_paths(cut, cut.node("c_in"), cut.node("a_out")).empty());
}

TEST(Mason, MatchesDenseSolve) {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> nd;
    for (int t = 0; t < 200; ++t) {
        const int n = 3 + t % 4;
        Eigen::MatrixXcd W = Eigen::MatrixXcd::Zero(n, n);
        SignalFlowGraph g;
        for (int i = 0; i < n; ++i) g.add_node("n" + std::to_string(i));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j && rng() % 3 != 0) W(j, i) = cplx(nd(rng), nd(rng));
        // spectral radius below one
        const double rho = W.eigenvalues().cwiseAbs().maxCoeff();
        if (rho > 0.0) W *= 0.8 / rho;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (W(j, i) != cplx{}) g.add_edge("n" + std::to_string(i), "n" + std::to_string(j), W(j, i));
        g.add_edge("in", "n0", 1.0);
        g.add_edge("n" + std::to_string(n - 1), "out", 1.0);
        Eigen::VectorXcd e = Eigen::VectorXcd::Zero(n);
        e(0) = 1.0;
        const Eigen::VectorXcd x = (Eigen::MatrixXcd::Identity(n, n) - W).lu().solve(e);
        EXPECT_LE(relative_difference(mason_gain(g, "in", "out"), x(n - 1)), 1e-10) << t;
    }
}

TEST(Mason, InsertionOrderIndependent) {
    const auto op = resolve_operating_point(reference_config());
    const auto g = build_transducer_graph(op, physical_s(op.config.omega_m), false);
    auto edges = g.edges();
    std::mt19937_64 rng(1);
    for (int t = 0; t < 5; ++t) {
        std::shuffle(edges.begin(), edges.end(), rng);
        SignalFlowGraph h;
        for (const auto& e : edges) h.add_edge(g.label(e.from), g.label(e.to), e.gain);
        const auto a = mason_decompose(g, "c_in", "a_out");
        const auto b = mason_decompose(h, "c_in", "a_out");
        EXPECT_EQ(canonical_form(g, a), canonical_form(h, b));
        EXPECT_LE(relative_difference(a.gain, b.gain), 1e-14);
    }
}

TEST(Mason, VanishingDeterminant) {
    SignalFlowGraph g;
    g.add_edge("s", "a", 1.0);
    g.add_edge("a", "b", 1.0);
    g.add_edge("b", "a", 1.0);
    g.add_edge("b", "t", 1.0);
    try {
        mason_gain(g, "s", "t", 2.5);
        FAIL();
    } catch (const SingularNetworkError& e) {
        EXPECT_EQ(e.omega(), 2.5);
    }
}

TEST(Mason, CycleCapOverflows) {
    // 8-node complete digraph has far more than 10^4 simple cycles
    SignalFlowGraph g;
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j)
            if (i != j) g.add_edge(std::to_string(i), std::to_string(j), 0.01);
    EXPECT_THROW(enumerate_loops(g), NumericalError);
}

TEST(Graph, RejectsSelfLoopsAndNonFinite) {
    SignalFlowGraph g;
    EXPECT_THROW(g.add_edge("a", "a", 0.5), std::invalid_argument);
    EXPECT_THROW(g.add_edge("a", "b", cplx(std::nan(""), 0.0)), std::invalid_argument);
    EXPECT_THROW(g.add_edge("a", "b", std::numeric_limits<double>::infinity()), std::invalid_argument);
    EXPECT_THROW(g.node("zz"), std::out_of_range);
}

TEST(Graph, ParallelEdgesMerge) {
    SignalFlowGraph g;
    g.add_edge("a", "b", cplx(1.0, 2.0));
    g.add_edge("a", "b", cplx(0.5, -1.0));
    EXPECT_EQ(g.gain("a", "b"), cplx(1.5, 1.0));
    EXPECT_EQ(g.edges().size(), 1u);
    EXPECT_EQ(g.gain("b", "a"), cplx{});
}

TEST(Graph, ReflectionGraphMatchesClosedForm) {
    const auto c = reference_config();
    const auto pr = port_rates(c);
    for (double w : linspace(c.omega_m - 10.0 * pr.Gamma, c.omega_m + 10.0 * pr.Gamma, 1001))
        EXPECT_LE(relative_difference(s11_mason(c, w), s11_at(c, physical_s(w))), 1e-12);
    std::mt19937_64 rng(13);
    for (int t = 0; t < 20; ++t) {
        const auto r = transducer::testing::random_config(rng);
        for (double w : linspace(0.9 * r.omega_m, 1.1 * r.omega_m, 101))
            EXPECT_LE(relative_difference(s11_mason(r, w), s11_at(r, physical_s(w))), 1e-12);
    }
}

TEST(Graph, DumpListsEverything) {
    const auto op = resolve_operating_point(reference_config());
    const auto g = build_transducer_graph(op, physical_s(op.config.omega_m), true);
    const auto d = mason_decompose(g, "c_in", "a_out");
    const auto text = dump(g, d);
    EXPECT_NE(text.find("P1: c_in -> b -> a2 -> a1 -> a_out"), std::string::npos);
    EXPECT_NE(text.find("loops:"), std::string::npos);
    EXPECT_NE(text.find("determinant:"), std::string::npos);
}
