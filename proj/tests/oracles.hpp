// Test-side oracles, independent of the library's decision paths.
#ifndef CSL_TESTS_ORACLES_HPP
#define CSL_TESTS_ORACLES_HPP

#include <random>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "csl/whitehead.hpp"
#include "csl/words.hpp"

namespace csl::oracles {

inline std::string cyclic_key(const CyclicWord& c) {
    std::string k;
    for (int l : c.letters()) {
        k += std::to_string(l);
        k += ',';
    }
    return k;
}

// The set of primitive conjugacy classes of length <= max_len, computed by a
// breadth-first ascent from the single generators using all Whitehead moves
// and keeping images of bounded length. By peak reduction, a word is
// primitive iff it appears here: a primitive word admits a non-length-
// increasing descent to a generator, and reversing that descent is a
// non-length-decreasing ascent from a generator.
inline std::set<std::string> primitive_classes_up_to(int rank, std::size_t max_len) {
    auto type1 = enumerate_type1_moves(rank);
    auto type2 = enumerate_type2_moves(rank);
    std::set<std::string> seen;
    std::vector<CyclicWord> frontier;
    for (int g = 1; g <= rank; ++g) {
        for (int s : {g, -g}) {
            CyclicWord c(rank, {s});
            if (seen.insert(cyclic_key(c)).second) frontier.push_back(c);
        }
    }
    while (!frontier.empty()) {
        std::vector<CyclicWord> next;
        for (const CyclicWord& c : frontier) {
            auto expand = [&](const WhiteheadMove& mv) {
                Word img = apply_whitehead_move(mv, c.as_word());
                if (img.empty()) return;
                CyclicWord ic = cyclic_normal_form(img).cyclic;
                if (ic.size() > max_len || ic.size() < c.size()) return;
                if (seen.insert(cyclic_key(ic)).second) next.push_back(ic);
            };
            for (const auto& mv : type1) expand(mv);
            for (const auto& mv : type2) expand(mv);
        }
        frontier = std::move(next);
    }
    return seen;
}

// Direct descent oracle: BFS over non-length-increasing Whitehead images of a
// single word, succeeding when a single generator class is reached.
inline bool primitive_by_descent(const Word& w) {
    int rank = w.rank();
    auto type1 = enumerate_type1_moves(rank);
    auto type2 = enumerate_type2_moves(rank);
    CyclicWord start = cyclic_normal_form(w).cyclic;
    std::set<std::string> seen{cyclic_key(start)};
    std::vector<CyclicWord> frontier{start};
    while (!frontier.empty()) {
        std::vector<CyclicWord> next;
        for (const CyclicWord& c : frontier) {
            if (c.size() == 1) return true;
            auto expand = [&](const WhiteheadMove& mv) {
                Word img = apply_whitehead_move(mv, c.as_word());
                CyclicWord ic = cyclic_normal_form(img).cyclic;
                if (ic.size() > c.size()) return;
                if (seen.insert(cyclic_key(ic)).second) next.push_back(ic);
            };
            for (const auto& mv : type1) expand(mv);
            for (const auto& mv : type2) expand(mv);
        }
        frontier = std::move(next);
    }
    return false;
}

// All cyclically reduced letter sequences of exactly length len over a rank.
inline std::vector<std::vector<int>> cyclically_reduced_sequences(int rank, std::size_t len) {
    std::vector<std::vector<int>> out;
    std::vector<std::vector<int>> partial{{}};
    for (std::size_t i = 0; i < len; ++i) {
        std::vector<std::vector<int>> next;
        for (const auto& s : partial) {
            for (int d = -rank; d <= rank; ++d) {
                if (d == 0) continue;
                if (!s.empty() && s.back() == -d) continue;
                auto t = s;
                t.push_back(d);
                next.push_back(std::move(t));
            }
        }
        partial = std::move(next);
    }
    for (auto& s : partial) {
        if (s.size() >= 2 && s.front() == -s.back()) continue;
        out.push_back(std::move(s));
    }
    return out;
}

inline Word random_reduced_word(std::mt19937& rng, int rank, int len) {
    std::uniform_int_distribution<int> gen(1, 2 * rank);
    std::vector<int> letters;
    while (static_cast<int>(letters.size()) < len) {
        int d = gen(rng);
        int x = d <= rank ? d : rank - d;
        if (!letters.empty() && letters.back() == -x) continue;
        letters.push_back(x);
    }
    return Word(rank, letters);
}

inline WhiteheadMove random_move(std::mt19937& rng, int rank) {
    auto type1 = enumerate_type1_moves(rank);
    auto type2 = enumerate_type2_moves(rank);
    std::uniform_int_distribution<std::size_t> pick(0, type1.size() + type2.size() - 1);
    std::size_t i = pick(rng);
    return i < type1.size() ? type1[i] : type2[i - type1.size()];
}

// Stallings folding: do the given words generate the whole free group?
// Build the wedge of loops labeled by the words, fold until no two edges at a
// vertex share a label, and check the based core graph is the full rose.
inline bool generates_free_group(int rank, const std::vector<Word>& words) {
    struct Edge {
        std::size_t from, to;
        int label;  // positive generator index
    };
    std::vector<Edge> edges;
    std::size_t next_vertex = 1;  // 0 is the basepoint
    for (const Word& w : words) {
        std::size_t cur = 0;
        for (std::size_t k = 0; k < w.size(); ++k) {
            std::size_t nxt = k + 1 == w.size() ? 0 : next_vertex++;
            int l = w.letters()[k];
            if (l > 0)
                edges.push_back({cur, nxt, l});
            else
                edges.push_back({nxt, cur, -l});
            cur = nxt;
        }
    }
    // fold: identify endpoints of same-labeled edges leaving a common vertex
    std::vector<std::size_t> owner(next_vertex);
    for (std::size_t v = 0; v < next_vertex; ++v) owner[v] = v;
    std::function<std::size_t(std::size_t)> find = [&](std::size_t v) {
        while (owner[v] != v) v = owner[v] = owner[owner[v]];
        return v;
    };
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t e1 = 0; e1 < edges.size() && !changed; ++e1) {
            for (std::size_t e2 = e1 + 1; e2 < edges.size() && !changed; ++e2) {
                if (edges[e1].label != edges[e2].label) continue;
                std::size_t f1 = find(edges[e1].from), f2 = find(edges[e2].from);
                std::size_t t1 = find(edges[e1].to), t2 = find(edges[e2].to);
                if (f1 == f2 && t1 != t2) {
                    owner[t1] = t2;
                    changed = true;
                } else if (t1 == t2 && f1 != f2) {
                    owner[f1] = f2;
                    changed = true;
                } else if (f1 == f2 && t1 == t2 && e1 != e2) {
                    edges.erase(edges.begin() + static_cast<long>(e2));
                    changed = true;
                }
            }
        }
    }
    // the folded graph carries the subgroup; it is everything iff the graph
    // collapses to one vertex with one loop per generator
    std::set<std::size_t> verts;
    for (const Edge& e : edges) {
        verts.insert(find(e.from));
        verts.insert(find(e.to));
    }
    if (verts.size() != 1) return false;
    std::set<int> labels;
    for (const Edge& e : edges) labels.insert(e.label);
    return static_cast<int>(labels.size()) == rank &&
           edges.size() == static_cast<std::size_t>(rank);
}

}  // namespace csl::oracles

#endif
