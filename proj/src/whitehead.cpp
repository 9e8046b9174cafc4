#include "csl/whitehead.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace csl {

std::size_t WhiteheadGraph::direction_slot(int direction, int rank) {
    // -rank..-1 map to 0..rank-1, 1..rank map to rank..2rank-1
    return direction < 0 ? static_cast<std::size_t>(direction + rank)
                         : static_cast<std::size_t>(rank + direction - 1);
}

int WhiteheadGraph::slot_direction(std::size_t slot, int rank) {
    int s = static_cast<int>(slot);
    return s < rank ? s - rank : s - rank + 1;
}

std::size_t WhiteheadGraph::degree(int direction) const {
    std::size_t d = 0;
    for (const auto& e : edges) {
        if (e.from == direction) ++d;
        if (e.to == direction) ++d;
    }
    return d;
}

bool GraphReport::all_isolated_edges() const {
    for (const auto& c : components)
        if (!c.isolated_edge) return false;
    return true;
}

bool GraphReport::has_two_connected_components() const {
    for (const auto& c : components)
        if (!c.two_connected) return false;
    return true;
}

NormalizedMultiword normalize_multiword(const Multiword& mw) {
    NormalizedMultiword out;
    out.rank = mw.rank;
    if (mw.members.empty()) throw std::invalid_argument("empty multiword");
    for (const Word& w : mw.members) {
        if (w.empty()) throw std::invalid_argument("multiword member is empty");
        if (w.rank() != mw.rank) throw std::invalid_argument("basis mismatch in multiword");
        CyclicNormalForm cnf = cyclic_normal_form(w);
        RootDecomposition rd = root_decomposition(cnf.cyclic);
        MemberClass mc;
        mc.exponent = rd.exponent;
        mc.conjugator = cnf.conjugator;
        bool found = false;
        for (std::size_t k = 0; k < out.roots.size() && !found; ++k) {
            switch (cyclic_compare(rd.root, out.roots[k])) {
                case CyclicRelation::EqualClass:
                    mc.root_index = k;
                    mc.inverted = false;
                    found = true;
                    break;
                case CyclicRelation::InverseClass:
                    mc.root_index = k;
                    mc.inverted = true;
                    found = true;
                    break;
                case CyclicRelation::Commensurable:
                    throw std::logic_error("indivisible roots cannot be properly commensurable");
                case CyclicRelation::Distinct:
                    break;
            }
        }
        if (!found) {
            mc.root_index = out.roots.size();
            mc.inverted = false;
            out.roots.push_back(rd.root);
            out.multiplicity.push_back(0);
        }
        out.multiplicity[mc.root_index] += 1;
        out.member_classes.push_back(std::move(mc));
    }
    return out;
}

WhiteheadGraph build_whitehead_graph(const NormalizedMultiword& nmw) {
    WhiteheadGraph g;
    g.rank = nmw.rank;
    for (std::size_t j = 0; j < nmw.roots.size(); ++j) {
        const auto& l = nmw.roots[j].letters();
        const std::size_t n = l.size();
        for (std::size_t i = 0; i < n; ++i) {
            // occurrence of x y with x = l[i], y = l[(i+1) % n], wraparound included
            WhiteheadEdge e;
            e.from = -l[i];
            e.to = l[(i + 1) % n];
            e.root_index = j;
            e.position = i;
            g.edges.push_back(e);
        }
    }
    return g;
}

namespace {

struct DfsFrame {
    std::size_t v;
    std::size_t parent_edge;
    std::size_t next_adj;
};

}  // namespace

GraphReport analyze_graph(const WhiteheadGraph& g) {
    const std::size_t nv = static_cast<std::size_t>(2 * g.rank);
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(nv);  // (edge idx, other slot)
    for (std::size_t ei = 0; ei < g.edges.size(); ++ei) {
        std::size_t a = WhiteheadGraph::direction_slot(g.edges[ei].from, g.rank);
        std::size_t b = WhiteheadGraph::direction_slot(g.edges[ei].to, g.rank);
        adj[a].push_back({ei, b});
        if (a != b) adj[b].push_back({ei, a});
    }

    GraphReport report;
    const std::size_t NONE = static_cast<std::size_t>(-1);
    std::vector<std::size_t> disc(nv, NONE), low(nv, NONE);
    std::vector<bool> is_cut(nv, false);
    std::vector<int> comp_of(nv, -1);
    std::size_t timer = 0;

    for (std::size_t start = 0; start < nv; ++start) {
        if (disc[start] != NONE || adj[start].empty()) continue;
        int comp_id = static_cast<int>(report.components.size());
        report.components.emplace_back();
        std::size_t root_children = 0;

        std::vector<DfsFrame> stack;
        disc[start] = low[start] = timer++;
        comp_of[start] = comp_id;
        stack.push_back({start, NONE, 0});
        while (!stack.empty()) {
            DfsFrame& f = stack.back();
            if (f.next_adj < adj[f.v].size()) {
                auto [ei, w] = adj[f.v][f.next_adj++];
                if (ei == f.parent_edge || w == f.v) continue;  // entering edge / self loop
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
                std::size_t pe = f.parent_edge;
                stack.pop_back();
                if (!stack.empty()) {
                    std::size_t u = stack.back().v;
                    low[u] = std::min(low[u], low[v]);
                    if (u != start && low[v] >= disc[u]) is_cut[u] = true;
                }
                (void)pe;
            }
        }
        if (root_children >= 2) is_cut[start] = true;
    }

    for (std::size_t s = 0; s < nv; ++s) {
        if (comp_of[s] >= 0) report.components[static_cast<std::size_t>(comp_of[s])].vertices.push_back(
            WhiteheadGraph::slot_direction(s, g.rank));
        if (is_cut[s]) report.cut_vertices.push_back(WhiteheadGraph::slot_direction(s, g.rank));
    }
    for (std::size_t ei = 0; ei < g.edges.size(); ++ei) {
        std::size_t a = WhiteheadGraph::direction_slot(g.edges[ei].from, g.rank);
        report.components[static_cast<std::size_t>(comp_of[a])].edges.push_back(ei);
    }
    for (auto& c : report.components) {
        c.isolated_edge = c.edges.size() == 1;
        bool has_cut = false;
        for (int v : c.vertices) {
            if (is_cut[WhiteheadGraph::direction_slot(v, g.rank)]) has_cut = true;
        }
        c.two_connected = c.edges.size() >= 2 && !has_cut;
    }
    return report;
}

namespace {

void validate_type2(const WhiteheadMove& m, int rank) {
    Basis b(rank);
    if (!b.contains(m.multiplier)) throw std::invalid_argument("bad multiplier");
    bool has_m = false;
    for (int d : m.set) {
        if (!b.contains(d)) throw std::invalid_argument("bad direction in move set");
        if (d == m.multiplier) has_m = true;
        if (d == -m.multiplier) throw std::invalid_argument("move set contains multiplier inverse");
    }
    if (!has_m) throw std::invalid_argument("move set must contain the multiplier");
}

}  // namespace

Word apply_whitehead_move(const WhiteheadMove& move, const Word& w) {
    int rank = w.rank();
    std::vector<int> raw;
    if (move.kind == WhiteheadMove::Kind::TypeI) {
        if (static_cast<int>(move.images.size()) != rank)
            throw std::invalid_argument("type I move image list does not match rank");
        std::vector<bool> seen(static_cast<std::size_t>(rank), false);
        Basis b(rank);
        for (int img : move.images) {
            if (!b.contains(img)) throw std::invalid_argument("bad image direction");
            std::size_t slot = static_cast<std::size_t>(std::abs(img) - 1);
            if (seen[slot]) throw std::invalid_argument("type I images are not a permutation");
            seen[slot] = true;
        }
        raw.reserve(w.size());
        for (int l : w.letters()) {
            int img = move.images[static_cast<std::size_t>(std::abs(l) - 1)];
            raw.push_back(l > 0 ? img : -img);
        }
    } else {
        validate_type2(move, rank);
        auto in_set = [&](int d) {
            return d != move.multiplier &&
                   std::binary_search(move.set.begin(), move.set.end(), d);
        };
        const int m = move.multiplier;
        raw.reserve(3 * w.size());
        for (int l : w.letters()) {
            int g = std::abs(l);
            if (g == std::abs(m)) {
                raw.push_back(l);
                continue;
            }
            bool p = in_set(-g);
            bool q = in_set(g);
            if (l > 0) {
                if (p) raw.push_back(m);
                raw.push_back(l);
                if (q) raw.push_back(-m);
            } else {
                if (q) raw.push_back(m);
                raw.push_back(l);
                if (p) raw.push_back(-m);
            }
        }
    }
    return reduce_word(raw, Basis(rank));
}

Multiword apply_whitehead_move(const WhiteheadMove& move, const Multiword& mw) {
    Multiword out;
    out.rank = mw.rank;
    out.members.reserve(mw.members.size());
    for (const Word& w : mw.members) out.members.push_back(apply_whitehead_move(move, w));
    return out;
}

WhiteheadMove WhiteheadMove::inverse() const {
    WhiteheadMove inv;
    inv.kind = kind;
    if (kind == Kind::TypeI) {
        inv.images.resize(images.size());
        for (std::size_t i = 0; i < images.size(); ++i) {
            int img = images[i];
            int gen = static_cast<int>(i) + 1;
            if (img > 0)
                inv.images[static_cast<std::size_t>(img - 1)] = gen;
            else
                inv.images[static_cast<std::size_t>(-img - 1)] = -gen;
        }
    } else {
        inv.multiplier = -multiplier;
        inv.set.reserve(set.size());
        for (int d : set)
            if (d != multiplier) inv.set.push_back(d);
        inv.set.push_back(-multiplier);
        std::sort(inv.set.begin(), inv.set.end());
    }
    return inv;
}

std::vector<WhiteheadMove> enumerate_type2_moves(int rank) {
    std::vector<int> dirs;
    for (int d = -rank; d <= rank; ++d)
        if (d != 0) dirs.push_back(d);
    std::vector<WhiteheadMove> moves;
    for (int m : dirs) {
        std::vector<int> others;
        for (int d : dirs)
            if (d != m && d != -m) others.push_back(d);
        const std::size_t k = others.size();
        for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
            WhiteheadMove mv;
            mv.kind = WhiteheadMove::Kind::TypeII;
            mv.multiplier = m;
            mv.set.push_back(m);
            for (std::size_t bit = 0; bit < k; ++bit)
                if (mask & (std::size_t{1} << bit)) mv.set.push_back(others[bit]);
            std::sort(mv.set.begin(), mv.set.end());
            moves.push_back(std::move(mv));
        }
    }
    return moves;
}

std::vector<WhiteheadMove> enumerate_type1_moves(int rank) {
    std::vector<int> perm(static_cast<std::size_t>(rank));
    std::iota(perm.begin(), perm.end(), 1);
    std::vector<WhiteheadMove> moves;
    do {
        for (std::size_t signs = 0; signs < (std::size_t{1} << rank); ++signs) {
            WhiteheadMove mv;
            mv.kind = WhiteheadMove::Kind::TypeI;
            mv.images.resize(static_cast<std::size_t>(rank));
            for (std::size_t i = 0; i < static_cast<std::size_t>(rank); ++i)
                mv.images[i] = (signs & (std::size_t{1} << i)) ? -perm[i] : perm[i];
            moves.push_back(std::move(mv));
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return moves;
}

namespace {

std::size_t roots_total(const std::vector<Word>& root_words) {
    std::size_t t = 0;
    for (const auto& w : root_words) t += w.size();
    return t;
}

// Distinct image roots of a multiword of root words under a move, in first
// occurrence order.
std::vector<Word> image_roots(const WhiteheadMove& mv, const std::vector<Word>& root_words,
                              int rank) {
    Multiword tmp{rank, {}};
    for (const auto& w : root_words) tmp.members.push_back(apply_whitehead_move(mv, w));
    NormalizedMultiword n = normalize_multiword(tmp);
    std::vector<Word> distinct;
    distinct.reserve(n.roots.size());
    for (const auto& r : n.roots) distinct.push_back(r.as_word());
    return distinct;
}

}  // namespace

MinimizationResult minimize_multiword(const Multiword& mw) {
    NormalizedMultiword start = normalize_multiword(mw);
    std::vector<Word> roots;
    for (const auto& r : start.roots) roots.push_back(r.as_word());

    std::vector<WhiteheadMove> applied;
    const std::vector<WhiteheadMove> candidates = enumerate_type2_moves(mw.rank);
    bool changed = true;
    while (changed) {
        changed = false;
        std::size_t cur = roots_total(roots);
        for (const auto& mv : candidates) {
            std::vector<Word> img = image_roots(mv, roots, mw.rank);
            if (roots_total(img) < cur) {
                roots = std::move(img);
                applied.push_back(mv);
                changed = true;
                break;
            }
        }
    }

    MinimizationResult res;
    res.moves = std::move(applied);
    res.minimal_members.rank = mw.rank;
    for (const Word& w : mw.members) {
        Word img = w;
        for (const auto& mv : res.moves) img = apply_whitehead_move(mv, img);
        res.minimal_members.members.push_back(std::move(img));
    }
    res.minimal = normalize_multiword(res.minimal_members);
    return res;
}

namespace {

std::string position_key(const std::vector<CyclicWord>& roots) {
    std::ostringstream os;
    for (const auto& r : roots) {
        for (int l : r.letters()) os << l << ',';
        os << ';';
    }
    return os.str();
}

}  // namespace

LevelSetResult level_set(const NormalizedMultiword& min, std::size_t budget) {
    const int rank = min.rank;
    const auto type2 = enumerate_type2_moves(rank);
    const auto type1 = enumerate_type1_moves(rank);
    const std::size_t total = min.total_length();

    {
        std::vector<Word> roots;
        for (const auto& r : min.roots) roots.push_back(r.as_word());
        for (const auto& mv : type2) {
            if (roots_total(image_roots(mv, roots, rank)) < total)
                throw std::invalid_argument("level_set requires a Whitehead-minimal multiword");
        }
    }

    LevelSetResult res;
    std::unordered_map<std::string, std::size_t> seen;
    auto add_position = [&](std::vector<CyclicWord> roots, std::size_t parent,
                            std::optional<WhiteheadMove> mv) -> bool {
        std::string key = position_key(roots);
        if (seen.count(key)) return false;
        if (res.positions.size() >= budget) {
            res.capped = true;
            return false;
        }
        seen.emplace(std::move(key), res.positions.size());
        NormalizedMultiword pos;
        pos.rank = rank;
        pos.roots = std::move(roots);
        pos.multiplicity = min.multiplicity;
        res.positions.push_back(std::move(pos));
        res.parent.push_back(parent);
        res.move_from_parent.push_back(std::move(mv));
        return true;
    };

    add_position(min.roots, static_cast<std::size_t>(-1), std::nullopt);
    std::size_t head = 0;
    while (head < res.positions.size() && !res.capped) {
        std::vector<CyclicWord> cur = res.positions[head].roots;
        auto try_move = [&](const WhiteheadMove& mv) {
            std::vector<CyclicWord> img;
            std::size_t t = 0;
            img.reserve(cur.size());
            for (const auto& r : cur) {
                Word iw = apply_whitehead_move(mv, r.as_word());
                CyclicWord c = cyclic_normal_form(iw).cyclic;
                t += c.size();
                img.push_back(std::move(c));
            }
            if (t == total) add_position(std::move(img), head, mv);
        };
        for (const auto& mv : type1) {
            try_move(mv);
            if (res.capped) break;
        }
        for (const auto& mv : type2) {
            if (res.capped) break;
            try_move(mv);
        }
        ++head;
    }
    return res;
}

bool is_basic(const Multiword& mw) {
    MinimizationResult m = minimize_multiword(mw);
    WhiteheadGraph g = build_whitehead_graph(m.minimal);
    return analyze_graph(g).all_isolated_edges();
}

PrimitivityResult is_primitive(const Word& w) {
    if (w.empty()) throw std::invalid_argument("empty word");
    PrimitivityResult out;
    RootDecomposition rd = root_decomposition(cyclic_normal_form(w).cyclic);
    if (rd.exponent > 1) return out;  // proper powers are never primitive
    MinimizationResult m = minimize_multiword(Multiword{w.rank(), {w}});
    out.primitive = m.minimal.total_length() == 1;
    out.moves = std::move(m.moves);
    return out;
}

std::vector<std::string> check_minimality_lemmas(const WhiteheadGraph& g,
                                                 const GraphReport& report) {
    std::vector<std::string> violations;
    if (!report.cut_vertices.empty()) violations.push_back("graph has a cut vertex");
    for (int d = -g.rank; d <= g.rank; ++d) {
        if (d == 0) continue;
        if (g.degree(d) != 1) continue;
        bool ok = false;
        for (const auto& c : report.components) {
            if (std::find(c.vertices.begin(), c.vertices.end(), d) == c.vertices.end()) continue;
            if (c.isolated_edge) {
                const auto& e = g.edges[c.edges[0]];
                ok = (e.from == d && e.to == -d) || (e.from == -d && e.to == d);
            }
        }
        if (!ok) violations.push_back("valence-one vertex not on an x--x^-1 isolated edge");
    }
    for (const auto& c : report.components) {
        if (!c.isolated_edge && !c.two_connected)
            violations.push_back("component neither 2-connected nor an isolated edge");
    }
    std::map<std::size_t, std::size_t> root_comp;
    for (std::size_t ci = 0; ci < report.components.size(); ++ci) {
        for (std::size_t ei : report.components[ci].edges) {
            std::size_t r = g.edges[ei].root_index;
            auto it = root_comp.find(r);
            if (it == root_comp.end())
                root_comp[r] = ci;
            else if (it->second != ci)
                violations.push_back("root contributes edges to more than one component");
        }
    }
    return violations;
}

std::string whitehead_graph_dot(const WhiteheadGraph& g, const GraphReport& report,
                                char alphabet) {
    auto dir_label = [&](int d) {
        Word w(g.rank, {d});
        return render_word(w, alphabet);
    };
    std::ostringstream os;
    os << "graph whitehead {\n";
    std::vector<int> comp_of(static_cast<std::size_t>(2 * g.rank), -1);
    for (std::size_t ci = 0; ci < report.components.size(); ++ci)
        for (int v : report.components[ci].vertices)
            comp_of[WhiteheadGraph::direction_slot(v, g.rank)] = static_cast<int>(ci);
    for (int d = -g.rank; d <= g.rank; ++d) {
        if (d == 0) continue;
        os << "  \"" << dir_label(d) << "\" [component=" << comp_of[WhiteheadGraph::direction_slot(d, g.rank)];
        if (std::find(report.cut_vertices.begin(), report.cut_vertices.end(), d) !=
            report.cut_vertices.end())
            os << ", cut=true, style=filled, fillcolor=red";
        os << "];\n";
    }
    for (const auto& e : g.edges) {
        os << "  \"" << dir_label(e.from) << "\" -- \"" << dir_label(e.to) << "\" [label=\""
           << e.root_index << ":" << e.position << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace csl
