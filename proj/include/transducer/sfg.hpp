#pragma once

// Signal-flow graphs with complex edge gains, simple path and cycle
// enumeration, non-touching loop sets and Mason's gain formula.
//
// Nodes are identified by label. All enumeration runs in label order, so the
// decomposition of a graph does not depend on the order in which nodes or
// edges were inserted.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "transducer/errors.hpp"
#include "transducer/numeric.hpp"

namespace transducer {

class SignalFlowGraph {
public:
    struct Edge {
        std::size_t from;
        std::size_t to;
        cplx gain;
    };

    // Returns the index of the node, creating it on first use.
    std::size_t add_node(std::string_view label) {
        auto it = index_.find(label);
        if (it != index_.end()) return it->second;
        const std::size_t id = labels_.size();
        labels_.emplace_back(label);
        index_.emplace(std::string(label), id);
        out_.emplace_back();
        return id;
    }

    // Parallel edges merge into one edge carrying the summed gain.
    void add_edge(std::string_view from, std::string_view to, cplx gain) {
        if (from == to) throw std::invalid_argument("self-loop on node '" + std::string(from) + "': split it into a susceptibility factor");
        if (!std::isfinite(gain.real()) || !std::isfinite(gain.imag()))
            throw std::invalid_argument("non-finite gain on edge " + std::string(from) + " -> " + std::string(to));
        const std::size_t a = add_node(from);
        const std::size_t b = add_node(to);
        out_[a][b] += gain;
    }

    bool contains(std::string_view label) const { return index_.find(label) != index_.end(); }

    std::size_t node(std::string_view label) const {
        auto it = index_.find(label);
        if (it == index_.end()) throw std::out_of_range("unknown node: " + std::string(label));
        return it->second;
    }

    const std::string& label(std::size_t id) const { return labels_.at(id); }
    std::size_t node_count() const noexcept { return labels_.size(); }

    bool has_edge(std::string_view from, std::string_view to) const {
        if (!contains(from) || !contains(to)) return false;
        return out_[node(from)].count(node(to)) > 0;
    }

    cplx gain(std::string_view from, std::string_view to) const {
        if (!has_edge(from, to)) return {0.0, 0.0};
        return out_[node(from)].at(node(to));
    }

    const std::map<std::size_t, cplx>& successors(std::size_t id) const { return out_.at(id); }

    // Edges ordered by (from label, to label).
    std::vector<Edge> edges() const {
        std::vector<Edge> e;
        for (std::size_t a = 0; a < out_.size(); ++a)
            for (const auto& [b, g] : out_[a]) e.push_back({a, b, g});
        std::sort(e.begin(), e.end(), [&](const Edge& x, const Edge& y) {
            if (labels_[x.from] != labels_[y.from]) return labels_[x.from] < labels_[y.from];
            return labels_[x.to] < labels_[y.to];
        });
        return e;
    }

    // Node ids sorted by label.
    std::vector<std::size_t> canonical_order() const {
        std::vector<std::size_t> ids(labels_.size());
        for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
        std::sort(ids.begin(), ids.end(), [&](std::size_t a, std::size_t b) { return labels_[a] < labels_[b]; });
        return ids;
    }

private:
    std::vector<std::string> labels_;
    std::map<std::string, std::size_t, std::less<>> index_;
    std::vector<std::map<std::size_t, cplx>> out_;
};

// Copy of the graph without the edges for which drop(from, to) is true.
inline SignalFlowGraph remove_edges(const SignalFlowGraph& g,
                                    const std::function<bool(const std::string&, const std::string&)>& drop) {
    SignalFlowGraph out;
    for (std::size_t id : g.canonical_order()) out.add_node(g.label(id));
    for (const auto& e : g.edges())
        if (!drop(g.label(e.from), g.label(e.to))) out.add_edge(g.label(e.from), g.label(e.to), e.gain);
    return out;
}

struct GraphPath {
    std::vector<std::size_t> nodes;  // node ids; for loops the closing edge returns to nodes.front()
    cplx gain;
};

inline constexpr std::size_t max_enumerated_cycles = 10000;

namespace detail {

inline std::vector<std::size_t> label_rank(const SignalFlowGraph& g) {
    const auto order = g.canonical_order();
    std::vector<std::size_t> rank(order.size());
    for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = r;
    return rank;
}

inline bool label_sequence_less(const SignalFlowGraph& g, const std::vector<std::size_t>& a,
                                const std::vector<std::size_t>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                        [&](std::size_t x, std::size_t y) { return g.label(x) < g.label(y); });
}

inline std::vector<std::size_t> sorted_nodes(std::vector<std::size_t> v) {
    std::sort(v.begin(), v.end());
    return v;
}

inline bool disjoint(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    // both sorted
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) return false;
        if (a[i] < b[j]) ++i;
        else ++j;
    }
    return true;
}

}  // namespace detail

// All simple directed cycles, each once, rotated to start at its
// lowest-labelled node and listed in label order.
inline std::vector<GraphPath> enumerate_loops(const SignalFlowGraph& g) {
    const auto rank = detail::label_rank(g);
    const auto order = g.canonical_order();
    std::vector<GraphPath> loops;
    std::vector<std::size_t> stack;
    std::vector<char> on_path(g.node_count(), 0);

    for (std::size_t start : order) {
        std::function<void(std::size_t, cplx)> dfs = [&](std::size_t u, cplx acc) {
            for (const auto& [v, w] : g.successors(u)) {
                if (rank[v] < rank[start]) continue;
                if (v == start) {
                    if (loops.size() >= max_enumerated_cycles)
                        throw NumericalError("enumerate_loops: more than " + std::to_string(max_enumerated_cycles) + " cycles");
                    loops.push_back({stack, acc * w});
                    continue;
                }
                if (on_path[v]) continue;
                on_path[v] = 1;
                stack.push_back(v);
                dfs(v, acc * w);
                stack.pop_back();
                on_path[v] = 0;
            }
        };
        stack.assign(1, start);
        on_path[start] = 1;
        dfs(start, cplx{1.0, 0.0});
        on_path[start] = 0;
    }
    std::stable_sort(loops.begin(), loops.end(),
                     [&](const GraphPath& a, const GraphPath& b) { return detail::label_sequence_less(g, a.nodes, b.nodes); });
    return loops;
}

// All simple paths from source to sink, in label order.
inline std::vector<GraphPath> enumerate_forward_paths(const SignalFlowGraph& g, std::size_t source, std::size_t sink) {
    std::vector<GraphPath> paths;
    std::vector<std::size_t> stack{source};
    std::vector<char> on_path(g.node_count(), 0);
    on_path[source] = 1;
    std::function<void(std::size_t, cplx)> dfs = [&](std::size_t u, cplx acc) {
        if (u == sink) {
            if (paths.size() >= max_enumerated_cycles)
                throw NumericalError("enumerate_forward_paths: more than " + std::to_string(max_enumerated_cycles) + " paths");
            paths.push_back({stack, acc});
            return;
        }
        for (const auto& [v, w] : g.successors(u)) {
            if (on_path[v]) continue;
            on_path[v] = 1;
            stack.push_back(v);
            dfs(v, acc * w);
            stack.pop_back();
            on_path[v] = 0;
        }
    };
    dfs(source, cplx{1.0, 0.0});
    std::stable_sort(paths.begin(), paths.end(),
                     [&](const GraphPath& a, const GraphPath& b) { return detail::label_sequence_less(g, a.nodes, b.nodes); });
    return paths;
}

// Index sets of mutually node-disjoint loops. Element k of the result holds
// the sets of size k + 2, each set ascending, sets in lexicographic order.
inline std::vector<std::vector<std::vector<std::size_t>>> nontouching_sets(const std::vector<GraphPath>& loops) {
    std::vector<std::vector<std::size_t>> nodes;
    nodes.reserve(loops.size());
    for (const auto& l : loops) nodes.push_back(detail::sorted_nodes(l.nodes));

    std::vector<std::vector<std::vector<std::size_t>>> by_order;
    std::vector<std::size_t> current;
    std::function<void(std::size_t)> extend = [&](std::size_t next) {
        for (std::size_t j = next; j < loops.size(); ++j) {
            bool ok = true;
            for (std::size_t i : current)
                if (!detail::disjoint(nodes[i], nodes[j])) { ok = false; break; }
            if (!ok) continue;
            current.push_back(j);
            if (current.size() >= 2) {
                if (by_order.size() < current.size() - 1) by_order.resize(current.size() - 1);
                by_order[current.size() - 2].push_back(current);
            }
            extend(j + 1);
            current.pop_back();
        }
    };
    extend(0);
    for (auto& sets : by_order) std::sort(sets.begin(), sets.end());
    return by_order;
}

// 1 - sum L + sum of disjoint pairs - ... up to sets of size max_order.
inline cplx mason_determinant(const std::vector<GraphPath>& loops,
                              const std::vector<std::vector<std::vector<std::size_t>>>& sets,
                              std::size_t max_order = std::numeric_limits<std::size_t>::max()) {
    cplx d{1.0, 0.0};
    if (max_order >= 1)
        for (const auto& l : loops) d -= l.gain;
    for (std::size_t k = 0; k < sets.size() && k + 2 <= max_order; ++k) {
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        for (const auto& set : sets[k]) {
            cplx prod{1.0, 0.0};
            for (std::size_t i : set) prod *= loops[i].gain;
            d += sign * prod;
        }
    }
    return d;
}

struct MasonDecomposition {
    std::vector<GraphPath> forward_paths;
    std::vector<GraphPath> loops;
    std::vector<std::vector<std::vector<std::size_t>>> nontouching;  // [k] holds sets of size k + 2
    cplx determinant;
    std::vector<cplx> cofactors;  // one per forward path
    cplx gain;

    std::size_t nontouching_count(std::size_t set_size) const {
        return set_size >= 2 && set_size - 2 < nontouching.size() ? nontouching[set_size - 2].size() : 0;
    }
};

namespace detail {

inline cplx cofactor(const std::vector<GraphPath>& loops, const std::vector<std::size_t>& path_nodes) {
    const auto pn = sorted_nodes(path_nodes);
    std::vector<GraphPath> free;
    for (const auto& l : loops)
        if (disjoint(sorted_nodes(l.nodes), pn)) free.push_back(l);
    return mason_determinant(free, nontouching_sets(free));
}

}  // namespace detail

inline MasonDecomposition mason_decompose(const SignalFlowGraph& g, std::string_view source, std::string_view sink,
                                          double omega = std::numeric_limits<double>::quiet_NaN()) {
    MasonDecomposition m;
    m.forward_paths = enumerate_forward_paths(g, g.node(source), g.node(sink));
    m.loops = enumerate_loops(g);
    m.nontouching = nontouching_sets(m.loops);
    m.determinant = mason_determinant(m.loops, m.nontouching);
    if (m.determinant == cplx{0.0, 0.0})
        throw SingularNetworkError(omega, "mason_gain: graph determinant vanishes");
    cplx num{0.0, 0.0};
    for (const auto& p : m.forward_paths) {
        m.cofactors.push_back(detail::cofactor(m.loops, p.nodes));
        num += p.gain * m.cofactors.back();
    }
    m.gain = num / m.determinant;
    return m;
}

inline cplx mason_gain(const SignalFlowGraph& g, std::string_view source, std::string_view sink,
                       double omega = std::numeric_limits<double>::quiet_NaN()) {
    return mason_decompose(g, source, sink, omega).gain;
}

namespace detail {

inline std::string join_labels(const SignalFlowGraph& g, const std::vector<std::size_t>& nodes, bool closed) {
    std::string s;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (i) s += " -> ";
        s += g.label(nodes[i]);
    }
    if (closed && !nodes.empty()) s += " -> " + g.label(nodes.front());
    return s;
}

inline std::string format_gain(cplx z) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "(%.6e, %.6e)", z.real(), z.imag());
    return buf;
}

}  // namespace detail

// Structure only (labels and index sets), independent of insertion order.
inline std::string canonical_form(const SignalFlowGraph& g, const MasonDecomposition& m) {
    std::ostringstream os;
    for (const auto& p : m.forward_paths) os << "P " << detail::join_labels(g, p.nodes, false) << '\n';
    for (const auto& l : m.loops) os << "L " << detail::join_labels(g, l.nodes, true) << '\n';
    for (std::size_t k = 0; k < m.nontouching.size(); ++k)
        for (const auto& set : m.nontouching[k]) {
            os << "N" << k + 2;
            for (std::size_t i : set) os << ' ' << i + 1;
            os << '\n';
        }
    return os.str();
}

inline std::string dump(const SignalFlowGraph& g, const MasonDecomposition& m) {
    std::ostringstream os;
    os << "nodes:";
    for (std::size_t id : g.canonical_order()) os << ' ' << g.label(id);
    os << "\nedges:\n";
    for (const auto& e : g.edges())
        os << "  " << g.label(e.from) << " -> " << g.label(e.to) << "  " << detail::format_gain(e.gain) << '\n';
    os << "forward paths:\n";
    for (std::size_t i = 0; i < m.forward_paths.size(); ++i)
        os << "  P" << i + 1 << ": " << detail::join_labels(g, m.forward_paths[i].nodes, false) << "  "
           << detail::format_gain(m.forward_paths[i].gain) << "  cofactor " << detail::format_gain(m.cofactors[i]) << '\n';
    os << "loops:\n";
    for (std::size_t i = 0; i < m.loops.size(); ++i)
        os << "  L" << i + 1 << ": " << detail::join_labels(g, m.loops[i].nodes, true) << "  "
           << detail::format_gain(m.loops[i].gain) << '\n';
    os << "non-touching sets:\n";
    for (std::size_t k = 0; k < m.nontouching.size(); ++k)
        for (const auto& set : m.nontouching[k]) {
            os << "  ";
            for (std::size_t j = 0; j < set.size(); ++j) os << (j ? " " : "") << 'L' << set[j] + 1;
            os << '\n';
        }
    os << "determinant: " << detail::format_gain(m.determinant) << '\n';
    os << "gain: " << detail::format_gain(m.gain) << '\n';
    return os.str();
}

}  // namespace transducer
