#include "csl/splice.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace csl {

Subtree Subtree::of(int rank, std::vector<Word> vertices) {
    Subtree x;
    x.rank = rank;
    std::unordered_set<Word, WordHash> set(vertices.begin(), vertices.end());
    bool has_identity = false;
    for (const Word& w : vertices) {
        if (w.rank() != rank) throw std::invalid_argument("subtree vertex rank mismatch");
        if (w.empty()) has_identity = true;
        if (!w.empty()) {
            std::vector<int> parent(w.letters().begin(), w.letters().end() - 1);
            if (!set.count(Word(rank, parent)))
                throw std::invalid_argument("subtree vertex set is not connected");
        }
    }
    if (!has_identity) throw std::invalid_argument("subtree must contain the identity");
    std::sort(vertices.begin(), vertices.end(), word_less);
    vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
    x.vertices = std::move(vertices);
    return x;
}

bool Subtree::contains(const Word& w) const {
    return std::binary_search(vertices.begin(), vertices.end(), w,
                              [](const Word& a, const Word& b) { return word_less(a, b); });
}

Word canonical_coset_rep(const Word& g, const CyclicWord& v) {
    Word vw = v.as_word();
    long bound = 2 * static_cast<long>(g.size()) / static_cast<long>(v.size()) + 2;
    Word best = g;
    Word fwd = g, bwd = g;
    Word vinv = vw.inverse();
    for (long k = 1; k <= bound; ++k) {
        fwd = multiply(fwd, vw);
        bwd = multiply(bwd, vinv);
        if (word_less(fwd, best)) best = fwd;
        if (word_less(bwd, best)) best = bwd;
    }
    return best;
}

namespace {

Word step(const Word& u, int letter) {
    std::vector<int> raw = u.letters();
    raw.push_back(letter);
    return reduce_word(raw, Basis(u.rank()));
}

std::vector<Word> collect_frontier(const Subtree& x) {
    std::vector<Word> frontier;
    for (const Word& u : x.vertices) {
        for (int d = -x.rank; d <= x.rank; ++d) {
            if (d == 0) continue;
            Word nb = step(u, d);
            if (!x.contains(nb)) frontier.push_back(nb);
        }
    }
    std::sort(frontier.begin(), frontier.end(), word_less);
    frontier.erase(std::unique(frontier.begin(), frontier.end()), frontier.end());
    return frontier;
}

Word line_anchor(const Word& u, const CyclicWord& v, std::size_t phase) {
    // anchor of the line through u whose forward spelling starts at v[phase]:
    // u * prefix_phase(v)^-1
    std::vector<int> raw = u.letters();
    for (std::size_t k = phase; k-- > 0;) raw.push_back(-v.letters()[k]);
    return reduce_word(raw, Basis(u.rank()));
}

}  // namespace

GeneralizedWhiteheadGraph generalized_whitehead_graph(const NormalizedMultiword& nmw,
                                                      const Subtree& x) {
    if (nmw.rank != x.rank) throw std::invalid_argument("rank mismatch");
    GeneralizedWhiteheadGraph g;
    g.rank = x.rank;
    g.frontier = collect_frontier(x);

    std::unordered_map<Word, std::size_t, WordHash> vertex_index;
    for (std::size_t i = 0; i < x.vertices.size(); ++i) vertex_index.emplace(x.vertices[i], i);

    for (std::size_t j = 0; j < nmw.roots.size(); ++j) {
        const CyclicWord& v = nmw.roots[j];
        const auto& l = v.letters();
        const std::size_t n = l.size();
        const std::size_t m = x.vertices.size();
        // local edge (u, i) has ports: back toward u*(-l[i]) and forward toward
        // u*l[(i+1)%n]; forward ports splice onto the next edge's back port
        // whenever the step stays inside the subtree.
        auto id = [&](std::size_t ui, std::size_t i) { return ui * n + i; };
        const std::size_t NONE = static_cast<std::size_t>(-1);
        std::vector<std::size_t> fwd_link(m * n, NONE), back_link(m * n, NONE);
        for (std::size_t ui = 0; ui < m; ++ui) {
            for (std::size_t i = 0; i < n; ++i) {
                Word nxt = step(x.vertices[ui], l[(i + 1) % n]);
                auto it = vertex_index.find(nxt);
                if (it != vertex_index.end()) {
                    fwd_link[id(ui, i)] = id(it->second, (i + 1) % n);
                    back_link[id(it->second, (i + 1) % n)] = id(ui, i);
                }
            }
        }
        std::vector<bool> used(m * n, false);
        for (std::size_t start = 0; start < m * n; ++start) {
            if (back_link[start] != NONE || used[start]) continue;
            // walk the chain forward
            std::size_t cur = start;
            used[cur] = true;
            while (fwd_link[cur] != NONE) {
                cur = fwd_link[cur];
                used[cur] = true;
            }
            std::size_t u1 = start / n, i1 = start % n;
            std::size_t uk = cur / n, ik = cur % n;
            GwgEdge e;
            e.from = step(x.vertices[u1], -l[i1]);
            e.to = step(x.vertices[uk], l[(ik + 1) % n]);
            e.root_index = j;
            e.line = canonical_coset_rep(line_anchor(x.vertices[u1], v, i1 + 1), v);
            g.edges.push_back(std::move(e));
        }
        for (std::size_t k = 0; k < m * n; ++k) {
            if (!used[k]) throw std::logic_error("splice chain walk left a cycle behind");
        }
    }
    return g;
}

GeneralizedWhiteheadGraph axis_walk_oracle(const NormalizedMultiword& nmw, const Subtree& x) {
    if (nmw.rank != x.rank) throw std::invalid_argument("rank mismatch");
    GeneralizedWhiteheadGraph g;
    g.rank = x.rank;
    g.frontier = collect_frontier(x);

    std::size_t max_len = 0;
    for (const Word& u : x.vertices) max_len = std::max(max_len, u.size());

    for (std::size_t j = 0; j < nmw.roots.size(); ++j) {
        const CyclicWord& v = nmw.roots[j];
        const auto& l = v.letters();
        const std::size_t n = l.size();
        std::unordered_set<Word, WordHash> seen_lines;
        for (const Word& u : x.vertices) {
            for (std::size_t p = 0; p < n; ++p) {
                Word rep = canonical_coset_rep(line_anchor(u, v, p), v);
                if (!seen_lines.insert(rep).second) continue;
                // axis positions z_k = rep * (prefix of v^inf of length k), k in Z
                long window = static_cast<long>(max_len + rep.size() + n + 2);
                std::vector<long> hits;
                Word z = rep;
                for (long k = 0; k <= window; ++k) {
                    if (x.contains(z)) hits.push_back(k);
                    z = step(z, l[static_cast<std::size_t>(k % static_cast<long>(n))]);
                }
                z = rep;
                for (long k = -1; k >= -window; --k) {
                    std::size_t idx = static_cast<std::size_t>(((k % static_cast<long>(n)) +
                                                               static_cast<long>(n)) %
                                                              static_cast<long>(n));
                    z = step(z, -l[idx]);
                    if (x.contains(z)) hits.push_back(k);
                }
                if (hits.empty()) throw std::logic_error("anchored line misses its anchor subtree");
                auto [mn_it, mx_it] = std::minmax_element(hits.begin(), hits.end());
                long mn = *mn_it, mx = *mx_it;
                if (static_cast<long>(hits.size()) != mx - mn + 1)
                    throw std::logic_error("line trace through subtree is not contiguous");
                auto at = [&](long k) {
                    Word w = rep;
                    if (k >= 0) {
                        for (long t = 0; t < k; ++t)
                            w = step(w, l[static_cast<std::size_t>(t % static_cast<long>(n))]);
                    } else {
                        for (long t = -1; t >= k; --t) {
                            std::size_t idx = static_cast<std::size_t>(
                                ((t % static_cast<long>(n)) + static_cast<long>(n)) %
                                static_cast<long>(n));
                            w = step(w, -l[idx]);
                        }
                    }
                    return w;
                };
                GwgEdge e;
                e.from = at(mn - 1);
                e.to = at(mx + 1);
                e.root_index = j;
                e.line = rep;
                g.edges.push_back(std::move(e));
            }
        }
    }
    return g;
}

namespace {

struct EdgeKey {
    std::size_t root;
    std::vector<int> line;
    std::vector<int> lo, hi;

    bool operator<(const EdgeKey& o) const {
        return std::tie(root, line, lo, hi) < std::tie(o.root, o.line, o.lo, o.hi);
    }
    bool operator==(const EdgeKey& o) const {
        return root == o.root && line == o.line && lo == o.lo && hi == o.hi;
    }
};

std::vector<EdgeKey> edge_keys(const GeneralizedWhiteheadGraph& g) {
    std::vector<EdgeKey> keys;
    keys.reserve(g.edges.size());
    for (const auto& e : g.edges) {
        EdgeKey k;
        k.root = e.root_index;
        k.line = e.line.letters();
        k.lo = e.from.letters();
        k.hi = e.to.letters();
        if (!(k.lo < k.hi)) std::swap(k.lo, k.hi);
        keys.push_back(std::move(k));
    }
    std::sort(keys.begin(), keys.end());
    return keys;
}

}  // namespace

bool gwg_equal(const GeneralizedWhiteheadGraph& a, const GeneralizedWhiteheadGraph& b) {
    if (a.rank != b.rank) return false;
    auto fa = a.frontier, fb = b.frontier;
    if (fa.size() != fb.size()) return false;
    for (std::size_t i = 0; i < fa.size(); ++i)
        if (fa[i] != fb[i]) return false;
    return edge_keys(a) == edge_keys(b);
}

GwgReport analyze_gwg(const GeneralizedWhiteheadGraph& g) {
    // Reuse the direction-graph machinery by relabeling frontier words.
    std::unordered_map<Word, std::size_t, WordHash> index;
    for (std::size_t i = 0; i < g.frontier.size(); ++i) index.emplace(g.frontier[i], i);

    const std::size_t nv = g.frontier.size();
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(nv);
    for (std::size_t ei = 0; ei < g.edges.size(); ++ei) {
        std::size_t a = index.at(g.edges[ei].from);
        std::size_t b = index.at(g.edges[ei].to);
        adj[a].push_back({ei, b});
        if (a != b) adj[b].push_back({ei, a});
    }

    GwgReport report;
    const std::size_t NONE = static_cast<std::size_t>(-1);
    std::vector<std::size_t> disc(nv, NONE), low(nv, NONE);
    std::vector<bool> is_cut(nv, false);
    std::vector<long> comp_of(nv, -1);
    std::vector<std::size_t> comp_edges;
    std::size_t timer = 0;

    struct Frame {
        std::size_t v, parent_edge, next;
    };
    for (std::size_t start = 0; start < nv; ++start) {
        if (disc[start] != NONE || adj[start].empty()) continue;
        long comp_id = static_cast<long>(report.component_count++);
        comp_edges.push_back(0);
        std::size_t root_children = 0;
        std::vector<Frame> stack;
        disc[start] = low[start] = timer++;
        comp_of[start] = comp_id;
        stack.push_back({start, NONE, 0});
        while (!stack.empty()) {
            Frame& f = stack.back();
            if (f.next < adj[f.v].size()) {
                auto [ei, w] = adj[f.v][f.next++];
                if (ei == f.parent_edge || w == f.v) continue;
                if (disc[w] == NONE) {
                    if (f.v == start) ++root_children;
                    disc[w] = low[w] = timer++;
                    comp_of[w] = comp_id;
                    stack.push_back({w, ei, 0});
                } else {
                    low[f.v] = std::min(low[f.v], disc[w]);
                }
            } else {
                std::size_t v = f.v;
                stack.pop_back();
                if (!stack.empty()) {
                    std::size_t u = stack.back().v;
                    low[u] = std::min(low[u], low[v]);
                    if (u != start && low[v] >= disc[u]) is_cut[u] = true;
                }
            }
        }
        if (root_children >= 2) is_cut[start] = true;
    }
    for (std::size_t ei = 0; ei < g.edges.size(); ++ei)
        comp_edges[static_cast<std::size_t>(comp_of[index.at(g.edges[ei].from)])]++;

    report.two_connected.assign(report.component_count, true);
    for (std::size_t v = 0; v < nv; ++v)
        if (is_cut[v]) report.two_connected[static_cast<std::size_t>(comp_of[v])] = false;
    for (std::size_t c = 0; c < report.component_count; ++c)
        if (comp_edges[c] < 2) report.two_connected[c] = false;
    report.has_two_connected_components = true;
    for (std::size_t c = 0; c < report.component_count; ++c)
        if (!report.two_connected[c]) report.has_two_connected_components = false;
    return report;
}

std::string gwg_dot(const GeneralizedWhiteheadGraph& g, char alphabet) {
    std::ostringstream os;
    os << "graph generalized_whitehead {\n";
    for (const Word& f : g.frontier) {
        std::string label = f.empty() ? "1" : render_word(f, alphabet);
        os << "  \"" << label << "\";\n";
    }
    for (const auto& e : g.edges) {
        std::string from = e.from.empty() ? "1" : render_word(e.from, alphabet);
        std::string to = e.to.empty() ? "1" : render_word(e.to, alphabet);
        os << "  \"" << from << "\" -- \"" << to << "\" [label=\"" << e.root_index << ":"
           << (e.line.empty() ? "1" : render_word(e.line, alphabet)) << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace csl
