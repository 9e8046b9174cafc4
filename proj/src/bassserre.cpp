#include "csl/bassserre.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <sstream>

#include "csl/splice.hpp"
#include "csl/whitehead.hpp"

namespace csl {

namespace {

long floordiv(long a, long b) {
    long q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}
long floormod(long a, long b) { return a - floordiv(a, b) * b; }

Word step_word(const Word& u, int letter) {
    std::vector<int> raw = u.letters();
    raw.push_back(letter);
    return reduce_word(raw, Basis(u.rank()));
}

std::size_t common_prefix(const Word& u, const Word& v) {
    std::size_t n = std::min(u.size(), v.size());
    std::size_t k = 0;
    while (k < n && u.letters()[k] == v.letters()[k]) ++k;
    return k;
}

long tree_dist(const Word& u, const Word& v) {
    return static_cast<long>(u.size() + v.size() - 2 * common_prefix(u, v));
}

Word line_anchor(const Word& u, const CyclicWord& v, std::size_t phase) {
    std::vector<int> raw = u.letters();
    for (std::size_t k = phase; k-- > 0;) raw.push_back(-v.letters()[k]);
    return reduce_word(raw, Basis(u.rank()));
}

// canonical coset representative of g<v> together with the exponent k such
// that rep = g * v^k
std::pair<Word, long> coset_rep_ex(const Word& g, const CyclicWord& v) {
    Word vw = v.as_word();
    Word vinv = vw.inverse();
    long bound = 2 * static_cast<long>(g.size()) / static_cast<long>(v.size()) + 2;
    Word best = g;
    long best_k = 0;
    Word fwd = g, bwd = g;
    for (long k = 1; k <= bound; ++k) {
        fwd = multiply(fwd, vw);
        bwd = multiply(bwd, vinv);
        if (word_less(fwd, best)) {
            best = fwd;
            best_k = k;
        }
        if (word_less(bwd, best)) {
            best = bwd;
            best_k = -k;
        }
    }
    return {best, best_k};
}

}  // namespace

SplittingSpec SplittingSpec::amalgam(int rank_a, int rank_b, Word wa, Word wb) {
    if (wa.empty() || wb.empty()) throw std::invalid_argument("edge words must be nonempty");
    SplittingSpec s;
    s.kind = Kind::Amalgam;
    s.rank_a = rank_a;
    s.rank_b = rank_b;
    s.word_a = std::move(wa);
    s.word_b = std::move(wb);
    return s;
}

SplittingSpec SplittingSpec::hnn(int rank, Word w1, Word w2) {
    if (w1.empty() || w2.empty()) throw std::invalid_argument("edge words must be nonempty");
    SplittingSpec s;
    s.kind = Kind::Hnn;
    s.rank_a = rank;
    s.rank_b = rank;
    s.word_a = std::move(w1);
    s.word_b = std::move(w2);
    s.alphabet_b = 'a';
    return s;
}

// ---------------------------------------------------------------- Complex

Complex::Complex(ComplexConfig cfg) : cfg_(std::move(cfg)) {
    if (cfg_.sides.empty()) throw std::invalid_argument("complex needs at least one side");
    spaces_.push_back(SpaceRecord{cfg_.base_side, -1});
}

PointKey Complex::center() const {
    return PointKey{0, Word(cfg_.sides[static_cast<std::size_t>(cfg_.base_side)].rank, {}), 0, 0};
}

PointKey Complex::gamma(long t) {
    return line_point(0, cfg_.base_family, cfg_.base_line_rep, cfg_.base_offset + t);
}

long Complex::strip_at(long space, int family, const Word& line_rep, int copy) {
    const SideConfig& side = side_config(space);
    const FamilyConfig& fam = side.families[static_cast<std::size_t>(family)];
    if (copy < 0 || copy >= fam.strips_per_line)
        throw std::invalid_argument("strip copy out of range");
    StripKey key{space, family, line_rep.letters(), copy};
    auto it = strip_index_.find(key);
    if (it != strip_index_.end()) return it->second;

    const SideConfig& far_side_cfg = cfg_.sides[static_cast<std::size_t>(fam.far_side)];
    const FamilyConfig& far_fam = far_side_cfg.families[static_cast<std::size_t>(fam.far_family)];
    long p_near = fam.period_arcs;
    long p_far = far_fam.period_arcs;
    long g = std::gcd(p_near, p_far);

    long id = static_cast<long>(strips_.size());
    StripRecord rec;
    rec.copy = copy;
    rec.side[0] = StripSide{space, family, line_rep,
                            copy * static_cast<long>(fam.root.size()) * side.subdiv, p_near / g};
    long far_space = static_cast<long>(spaces_.size());
    spaces_.push_back(SpaceRecord{fam.far_side, id});
    rec.side[1] = StripSide{far_space, fam.far_family, Word(far_side_cfg.rank, {}), 0, p_far / g};
    strips_.push_back(std::move(rec));
    strip_index_.emplace(std::move(key), id);
    // the strip is reachable from its far space as copy 0 of the origin line
    strip_index_.emplace(StripKey{far_space, fam.far_family, std::vector<int>{}, 0}, id);
    return id;
}

PointKey Complex::line_point(long space, int family, const Word& line_rep, long arc) const {
    const SideConfig& side = side_config(space);
    const CyclicWord& v = side.families[static_cast<std::size_t>(family)].root;
    const auto& l = v.letters();
    const long L = static_cast<long>(l.size());
    const long d = side.subdiv;
    long q = floordiv(arc, d);
    long r = floormod(arc, d);
    Word z = line_rep;
    if (q >= 0) {
        for (long m = 0; m < q; ++m)
            z = step_word(z, l[static_cast<std::size_t>(floormod(m, L))]);
    } else {
        for (long m = -1; m >= q; --m)
            z = step_word(z, -l[static_cast<std::size_t>(floormod(m, L))]);
    }
    if (r == 0) return PointKey{space, z, 0, 0};
    int letter = l[static_cast<std::size_t>(floormod(q, L))];
    if (letter > 0) return PointKey{space, z, letter, static_cast<int>(r)};
    return PointKey{space, step_word(z, letter), -letter, static_cast<int>(d - r)};
}

std::vector<Complex::LineHit> Complex::lines_through(const PointKey& p) {
    const SideConfig& side = side_config(p.space);
    const long d = side.subdiv;
    std::vector<LineHit> hits;
    for (std::size_t f = 0; f < side.families.size(); ++f) {
        const CyclicWord& v = side.families[f].root;
        const auto& l = v.letters();
        const long L = static_cast<long>(l.size());
        std::set<std::vector<int>> seen;
        if (p.off == 0) {
            for (long ph = 0; ph < L; ++ph) {
                auto [rep, k] = coset_rep_ex(line_anchor(p.at, v, static_cast<std::size_t>(ph)), v);
                if (!seen.insert(rep.letters()).second) continue;
                hits.push_back(LineHit{static_cast<int>(f), rep, (ph - k * L) * d});
            }
        } else {
            // lines running along the edge p.at -> p.at * gen
            for (long ph = 0; ph < L; ++ph) {
                int fwd = l[static_cast<std::size_t>(ph)];
                int bwd = l[static_cast<std::size_t>(floormod(ph - 1, L))];
                long shift = 0;
                if (fwd == p.gen)
                    shift = p.off;
                else if (bwd == -p.gen)
                    shift = -p.off;
                else
                    continue;
                auto [rep, k] = coset_rep_ex(line_anchor(p.at, v, static_cast<std::size_t>(ph)), v);
                if (!seen.insert(rep.letters()).second) continue;
                hits.push_back(LineHit{static_cast<int>(f), rep, (ph - k * L) * d + shift});
            }
        }
    }
    return hits;
}

std::vector<Complex::Neighbor> Complex::neighbors(const PointKey& p) {
    const SideConfig& side = side_config(p.space);
    const long d = side.subdiv;
    std::vector<Neighbor> out;
    if (p.off > 0) {
        if (p.off == 1)
            out.push_back({PointKey{p.space, p.at, 0, 0}, -1});
        else
            out.push_back({PointKey{p.space, p.at, p.gen, p.off - 1}, -1});
        if (p.off == d - 1)
            out.push_back({PointKey{p.space, step_word(p.at, p.gen), 0, 0}, -1});
        else
            out.push_back({PointKey{p.space, p.at, p.gen, p.off + 1}, -1});
    } else {
        for (int dir = -side.rank; dir <= side.rank; ++dir) {
            if (dir == 0) continue;
            if (d == 1) {
                out.push_back({PointKey{p.space, step_word(p.at, dir), 0, 0}, -1});
            } else if (dir > 0) {
                out.push_back({PointKey{p.space, p.at, dir, 1}, -1});
            } else {
                out.push_back(
                    {PointKey{p.space, step_word(p.at, dir), -dir, static_cast<int>(d - 1)}, -1});
            }
        }
    }
    for (const LineHit& hit : lines_through(p)) {
        const FamilyConfig& fam = side.families[static_cast<std::size_t>(hit.family)];
        for (int c = 0; c < fam.strips_per_line; ++c) {
            long sid = strip_at(p.space, hit.family, hit.rep, c);
            const StripRecord& rec = strips_[static_cast<std::size_t>(sid)];
            int s = (rec.side[0].space == p.space && rec.side[0].family == hit.family &&
                     rec.side[0].line_rep == hit.rep)
                        ? 0
                        : 1;
            const StripSide& near = rec.side[s];
            const StripSide& far = rec.side[1 - s];
            if (floormod(hit.arc - near.anchor_arc, near.step) != 0) continue;
            long rung = (hit.arc - near.anchor_arc) / near.step;
            PointKey q =
                line_point(far.space, far.family, far.line_rep, far.anchor_arc + rung * far.step);
            out.push_back({q, sid});
        }
    }
    return out;
}

long Complex::resolve_space(const SpaceRef& ref) {
    long space = 0;
    for (const SpaceStep& st : ref.steps) {
        const SideConfig& side = side_config(space);
        if (st.family < 0 || st.family >= static_cast<int>(side.families.size()))
            throw std::invalid_argument("space step family out of range");
        const CyclicWord& root = side.families[static_cast<std::size_t>(st.family)].root;
        if (st.line.rank() != side.rank) throw std::invalid_argument("space step rank mismatch");
        if (canonical_coset_rep(st.line, root) != st.line)
            throw std::invalid_argument("space step line is not a canonical representative");
        long sid = strip_at(space, st.family, st.line, st.copy);
        const StripRecord& rec = strips_[static_cast<std::size_t>(sid)];
        space = rec.side[0].space == space ? rec.side[1].space : rec.side[0].space;
    }
    return space;
}

SpaceRef Complex::space_ref(long space) const {
    SpaceRef ref;
    while (space != 0) {
        const SpaceRecord& rec = spaces_[static_cast<std::size_t>(space)];
        const StripRecord& strip = strips_[static_cast<std::size_t>(rec.parent_strip)];
        ref.steps.push_back(SpaceStep{strip.side[0].family, strip.side[0].line_rep, strip.copy});
        space = strip.side[0].space;
    }
    std::reverse(ref.steps.begin(), ref.steps.end());
    return ref;
}

PointKey Complex::resolve_point(const PointRef& ref) {
    long space = resolve_space(ref.space);
    const SideConfig& side = side_config(space);
    if (ref.at.rank() != side.rank) throw std::invalid_argument("point rank mismatch");
    if (ref.off == 0) {
        if (ref.gen != 0) throw std::invalid_argument("vertex points carry no edge direction");
        return PointKey{space, ref.at, 0, 0};
    }
    if (ref.gen < 1 || ref.gen > side.rank) throw std::invalid_argument("point edge out of range");
    if (ref.off < 1 || ref.off >= side.subdiv)
        throw std::invalid_argument("point offset out of range");
    return PointKey{space, ref.at, ref.gen, ref.off};
}

PointRef Complex::point_ref(const PointKey& key) const {
    PointRef ref;
    ref.space = space_ref(key.space);
    ref.at = key.at;
    ref.gen = key.gen;
    ref.off = key.off;
    return ref;
}

long Complex::resolve_strip(const StripRef& ref) {
    long space = resolve_space(ref.space);
    const SideConfig& side = side_config(space);
    if (ref.family < 0 || ref.family >= static_cast<int>(side.families.size()))
        throw std::invalid_argument("strip family out of range");
    const CyclicWord& root = side.families[static_cast<std::size_t>(ref.family)].root;
    if (canonical_coset_rep(ref.line, root) != ref.line)
        throw std::invalid_argument("strip line is not a canonical representative");
    return strip_at(space, ref.family, ref.line, ref.copy);
}

StripRef Complex::strip_ref(long id) const {
    const StripRecord& rec = strips_[static_cast<std::size_t>(id)];
    StripRef ref;
    ref.space = space_ref(rec.side[0].space);
    ref.family = rec.side[0].family;
    ref.line = rec.side[0].line_rep;
    ref.copy = rec.copy;
    return ref;
}

long Complex::same_space_distance(const PointKey& a, const PointKey& b) const {
    if (a.space != b.space) throw std::invalid_argument("points are in different spaces");
    const long d = side_config(a.space).subdiv;
    if (a.off == 0 && b.off == 0) return tree_dist(a.at, b.at) * d;
    if (a.off != 0 && b.off != 0 && a.at == b.at && a.gen == b.gen)
        return std::abs(static_cast<long>(a.off) - static_cast<long>(b.off));
    auto ends = [&](const PointKey& p) {
        std::vector<std::pair<Word, long>> e;
        if (p.off == 0) {
            e.push_back({p.at, 0});
        } else {
            e.push_back({p.at, p.off});
            e.push_back({step_word(p.at, p.gen), d - p.off});
        }
        return e;
    };
    long best = -1;
    for (const auto& [ua, oa] : ends(a)) {
        for (const auto& [ub, ob] : ends(b)) {
            long cand = tree_dist(ua, ub) * d + oa + ob;
            if (best < 0 || cand < best) best = cand;
        }
    }
    return best;
}

std::vector<PointKey> Complex::same_space_geodesic(const PointKey& a, const PointKey& b) const {
    const SideConfig& side = side_config(a.space);
    const long d = side.subdiv;
    auto horizontal_neighbors = [&](const PointKey& p) {
        std::vector<PointKey> out;
        if (p.off > 0) {
            out.push_back(p.off == 1 ? PointKey{p.space, p.at, 0, 0}
                                     : PointKey{p.space, p.at, p.gen, p.off - 1});
            out.push_back(p.off == d - 1 ? PointKey{p.space, step_word(p.at, p.gen), 0, 0}
                                         : PointKey{p.space, p.at, p.gen, p.off + 1});
        } else {
            for (int dir = -side.rank; dir <= side.rank; ++dir) {
                if (dir == 0) continue;
                if (d == 1)
                    out.push_back(PointKey{p.space, step_word(p.at, dir), 0, 0});
                else if (dir > 0)
                    out.push_back(PointKey{p.space, p.at, dir, 1});
                else
                    out.push_back(
                        PointKey{p.space, step_word(p.at, dir), -dir, static_cast<int>(d - 1)});
            }
        }
        return out;
    };
    std::vector<PointKey> path{a};
    PointKey cur = a;
    long remaining = same_space_distance(a, b);
    while (!(cur == b)) {
        bool advanced = false;
        for (const PointKey& nb : horizontal_neighbors(cur)) {
            if (same_space_distance(nb, b) == remaining - 1) {
                cur = nb;
                path.push_back(cur);
                --remaining;
                advanced = true;
                break;
            }
        }
        if (!advanced) throw std::logic_error("geodesic walk stalled");
    }
    return path;
}

// ------------------------------------------------------------ model setup

namespace {

// cyclic reduction without the canonicalizing rotation
Word cyclic_reduce_spelling(const Word& w) {
    std::vector<int> v = w.letters();
    while (v.size() >= 2 && v.front() == -v.back()) {
        v.erase(v.begin());
        v.pop_back();
    }
    return Word(w.rank(), std::move(v));
}

std::size_t rotation_phase(const CyclicWord& canon, const Word& spelled) {
    const auto& c = canon.letters();
    for (std::size_t p = 0; p < c.size(); ++p) {
        bool ok = true;
        for (std::size_t k = 0; k < c.size() && ok; ++k)
            ok = c[(p + k) % c.size()] == spelled.letters()[k];
        if (ok) return p;
    }
    throw std::logic_error("word is not a rotation of the canonical form");
}

ComplexConfig config_for_spec(const SplittingSpec& spec, std::size_t max_vertices) {
    ComplexConfig cfg;
    cfg.max_vertices = max_vertices;
    CyclicWord ca = cyclic_normal_form(spec.word_a).cyclic;
    CyclicWord cb = cyclic_normal_form(spec.word_b).cyclic;
    RootDecomposition ra = root_decomposition(ca);
    RootDecomposition rb = root_decomposition(cb);
    const long La = static_cast<long>(ca.size());
    const long Lb = static_cast<long>(cb.size());
    if (spec.kind == SplittingSpec::Kind::Amalgam) {
        SideConfig a;
        a.rank = spec.rank_a;
        a.subdiv = static_cast<int>(Lb);
        a.families.push_back(FamilyConfig{ra.root, ra.exponent, La * Lb, 1, 0});
        SideConfig b;
        b.rank = spec.rank_b;
        b.subdiv = static_cast<int>(La);
        b.families.push_back(FamilyConfig{rb.root, rb.exponent, Lb * La, 0, 0});
        cfg.sides = {a, b};
    } else {
        if (cyclic_compare(ra.root, rb.root) != CyclicRelation::Distinct)
            throw std::invalid_argument(
                "HNN edge words have commensurable roots; vertex spaces are not "
                "quasi-isometrically embedded");
        SideConfig a;
        a.rank = spec.rank_a;
        a.subdiv = 1;
        a.families.push_back(FamilyConfig{ra.root, ra.exponent, La, 0, 1});
        a.families.push_back(FamilyConfig{rb.root, rb.exponent, Lb, 0, 0});
        cfg.sides = {a};
    }
    cfg.base_side = 0;
    cfg.base_family = 0;
    cfg.base_period = cfg.sides[0].families[0].period_arcs;
    // anchor the base axis so that gamma spells the given edge word
    const CyclicWord& base_root = cfg.sides[0].families[0].root;
    const long Lr = static_cast<long>(base_root.size());
    const long subdiv = cfg.sides[0].subdiv;
    Word v0 = cyclic_reduce_spelling(spec.word_a);
    Word root_spelled(spec.rank_a,
                      std::vector<int>(v0.letters().begin(), v0.letters().begin() + Lr));
    std::size_t phase = rotation_phase(base_root, root_spelled);
    auto [rep, k] = coset_rep_ex(line_anchor(Word(spec.rank_a, {}), base_root, phase), base_root);
    cfg.base_line_rep = rep;
    cfg.base_offset = (static_cast<long>(phase) - k * Lr) * subdiv;
    return cfg;
}

ComplexConfig config_for_vf(const VfBallConfig& vf, std::size_t max_vertices) {
    ComplexConfig cfg;
    cfg.max_vertices = max_vertices;
    auto families_of = [](const VfFamilySet& set, int far_side, int far_base, int far_count) {
        std::vector<FamilyConfig> fams;
        for (std::size_t j = 0; j < set.roots.size(); ++j) {
            FamilyConfig f;
            f.root = set.roots[j];
            f.strips_per_line = set.strips_per_line;
            f.period_arcs =
                static_cast<long>(set.exponents[j]) * static_cast<long>(set.roots[j].size());
            f.far_side = far_side;
            f.far_family = far_base + static_cast<int>(j) % far_count;
            fams.push_back(std::move(f));
        }
        return fams;
    };
    if (vf.kind == VfBallConfig::Kind::Amalgam) {
        SideConfig a;
        a.rank = vf.rank_a;
        a.subdiv = 1;
        a.families = families_of(vf.lift_a, 1, 0, static_cast<int>(vf.lift_b.roots.size()));
        SideConfig b;
        b.rank = vf.rank_b;
        b.subdiv = 1;
        b.families = families_of(vf.lift_b, 0, 0, static_cast<int>(vf.lift_a.roots.size()));
        cfg.sides = {a, b};
    } else {
        SideConfig a;
        a.rank = vf.rank_a;
        a.subdiv = 1;
        int m1 = static_cast<int>(vf.lift_a.roots.size());
        int m2 = static_cast<int>(vf.lift_b.roots.size());
        a.families = families_of(vf.lift_a, 0, m1, m2);
        auto fams2 = families_of(vf.lift_b, 0, 0, m1);
        a.families.insert(a.families.end(), fams2.begin(), fams2.end());
        cfg.sides = {a};
    }
    cfg.base_side = 0;
    cfg.base_family = 0;
    cfg.base_period = cfg.sides[0].families[0].period_arcs;
    cfg.base_line_rep = Word(cfg.sides[0].rank, {});
    cfg.base_offset = 0;
    return cfg;
}

}  // namespace

std::shared_ptr<BassSerreModel> BassSerreModel::for_spec(const SplittingSpec& spec,
                                                         std::size_t max_vertices) {
    bool exact = spec.kind == SplittingSpec::Kind::Amalgam;
    return std::shared_ptr<BassSerreModel>(
        new BassSerreModel(config_for_spec(spec, max_vertices), exact));
}

std::shared_ptr<BassSerreModel> BassSerreModel::for_vf(const VfBallConfig& cfg,
                                                       std::size_t max_vertices) {
    return std::shared_ptr<BassSerreModel>(
        new BassSerreModel(config_for_vf(cfg, max_vertices), false));
}

const BassSerreBall& BassSerreModel::ball(long radius) {
    auto it = balls_.find(radius);
    if (it != balls_.end()) return it->second;
    BassSerreBall b;
    b.radius = radius;
    b.center = cx_.center();
    std::deque<PointKey> queue{b.center};
    b.dist.emplace(b.center, 0);
    b.order.push_back(b.center);
    while (!queue.empty()) {
        PointKey p = queue.front();
        queue.pop_front();
        long dp = b.dist.at(p);
        if (dp == radius) continue;
        for (const auto& nb : cx_.neighbors(p)) {
            if (b.dist.count(nb.point)) continue;
            if (b.dist.size() >= cx_.config().max_vertices)
                throw BudgetExceeded("ball vertex budget exceeded at radius " +
                                     std::to_string(radius));
            b.dist.emplace(nb.point, dp + 1);
            b.order.push_back(nb.point);
            queue.push_back(nb.point);
        }
    }
    return balls_.emplace(radius, std::move(b)).first->second;
}

const BassSerreBall& build_ball(BassSerreModel& model, long radius) { return model.ball(radius); }

bool BassSerreModel::distance_exceeds(const PointKey& a, const PointKey& b, long bound) {
    // d(a, b) <= bound iff some point lies within h of a and bound - h of b
    long h = bound / 2;
    auto wave = [&](const PointKey& from, long radius) {
        std::unordered_map<PointKey, long, PointKeyHash> dist;
        std::deque<PointKey> queue{from};
        dist.emplace(from, 0);
        while (!queue.empty()) {
            PointKey p = queue.front();
            queue.pop_front();
            long dp = dist.at(p);
            if (dp == radius) continue;
            for (const auto& nb : cx_.neighbors(p)) {
                if (dist.count(nb.point)) continue;
                if (dist.size() >= cx_.config().max_vertices)
                    throw BudgetExceeded("distance wave budget exceeded");
                dist.emplace(nb.point, dp + 1);
                queue.push_back(nb.point);
            }
        }
        return dist;
    };
    auto wa = wave(a, h);
    auto wb = wave(b, bound - h);
    for (const auto& [p, da] : wa) {
        auto it = wb.find(p);
        if (it != wb.end() && da + it->second <= bound) return false;
    }
    return true;
}

// ------------------------------------------------------------- the detour

namespace {

struct HSeg {
    long space = 0;
    int family = 0;
    Word rep;
    long from_arc = 0;
    long to_arc = 0;
    std::vector<long> forbidden;  // strips this segment must not cross
};
struct VSeg {
    long strip = -1;
    long rung = 0;
    int from_side = 0;
};
struct Seg {
    bool horizontal = true;
    HSeg h;
    VSeg v;
};

long seg_min_dist(const Complex& cx, const BassSerreBall& ball, const HSeg& s) {
    long lo = std::min(s.from_arc, s.to_arc), hi = std::max(s.from_arc, s.to_arc);
    long best = ball.radius + 1;
    for (long arc = lo; arc <= hi; ++arc) {
        auto it = ball.dist.find(cx.line_point(s.space, s.family, s.rep, arc));
        if (it != ball.dist.end()) best = std::min(best, it->second);
    }
    return best;
}

// arc position of a tree vertex on a line, searched within a bounded window
long arc_of_vertex_on_line(const Complex& cx, long space, int family, const Word& rep,
                           const Word& vertex) {
    const SideConfig& side = cx.side_config(space);
    const CyclicWord& v = side.families[static_cast<std::size_t>(family)].root;
    const long L = static_cast<long>(v.size());
    long bound = static_cast<long>(rep.size() + vertex.size()) + L + 2;
    Word z = rep;
    if (z == vertex) return 0;
    for (long m = 0; m < bound; ++m) {
        z = step_word(z, v.letters()[static_cast<std::size_t>(floormod(m, L))]);
        if (z == vertex) return (m + 1) * side.subdiv;
    }
    z = rep;
    for (long m = -1; m >= -bound; --m) {
        z = step_word(z, -v.letters()[static_cast<std::size_t>(floormod(m, L))]);
        if (z == vertex) return m * side.subdiv;
    }
    throw std::logic_error("vertex not found on line");
}

struct DetourBuilder {
    BassSerreModel& model;
    Complex& cx;
    long radius;  // i
    std::vector<Seg> path;
    std::vector<StageLogEntry> stages;

    DetourBuilder(BassSerreModel& m, long i) : model(m), cx(m.complex()), radius(i) {}

    long path_min_dist(const BassSerreBall& ball) {
        long best = ball.radius + 1;
        for (const Seg& s : path)
            if (s.horizontal) best = std::min(best, seg_min_dist(cx, ball, s.h));
        return best;
    }

    std::vector<Seg> push_vertical(const HSeg& s, long sid) {
        const auto& rec = cx.strip(sid);
        int near = (rec.side[0].space == s.space && rec.side[0].family == s.family &&
                    rec.side[0].line_rep == s.rep)
                       ? 0
                       : 1;
        const auto& ns = rec.side[near];
        const auto& fs = rec.side[1 - near];
        auto nearest_rung = [&](long arc) {
            long q = floordiv(arc - ns.anchor_arc, ns.step);
            long lo = ns.anchor_arc + q * ns.step, hi = lo + ns.step;
            return (arc - lo <= hi - arc) ? q : q + 1;
        };
        long rf = nearest_rung(s.from_arc);
        long rt = nearest_rung(s.to_arc);
        long rf_arc = ns.anchor_arc + rf * ns.step;
        long rt_arc = ns.anchor_arc + rt * ns.step;
        std::vector<Seg> out;
        std::vector<long> fb = s.forbidden;
        fb.push_back(sid);
        if (s.from_arc != rf_arc) {
            Seg pre;
            pre.h = HSeg{s.space, s.family, s.rep, s.from_arc, rf_arc, fb};
            out.push_back(pre);
        }
        Seg down;
        down.horizontal = false;
        down.v = VSeg{sid, rf, near};
        out.push_back(down);
        Seg far;
        far.h = HSeg{fs.space, fs.family, fs.line_rep, fs.anchor_arc + rf * fs.step,
                     fs.anchor_arc + rt * fs.step, {sid}};
        out.push_back(far);
        Seg up;
        up.horizontal = false;
        up.v = VSeg{sid, rt, 1 - near};
        out.push_back(up);
        if (rt_arc != s.to_arc) {
            Seg post;
            post.h = HSeg{s.space, s.family, s.rep, rt_arc, s.to_arc, fb};
            out.push_back(post);
        }
        return out;
    }

    // strips attached to the segment's line that it may still cross
    std::vector<long> allowed_strips(const HSeg& s) {
        const SideConfig& side = cx.side_config(s.space);
        const FamilyConfig& fam = side.families[static_cast<std::size_t>(s.family)];
        std::vector<long> out;
        for (int c = 0; c < fam.strips_per_line; ++c) {
            long sid = cx.strip_at(s.space, s.family, s.rep, c);
            if (std::find(s.forbidden.begin(), s.forbidden.end(), sid) == s.forbidden.end())
                out.push_back(sid);
        }
        return out;
    }

    std::vector<Seg> reroute(const HSeg& s, const BassSerreBall& ball) {
        const SideConfig& side = cx.side_config(s.space);
        const long d = side.subdiv;
        // window: convex hull of the ball's trace in this space plus the
        // segment's own tree vertices
        std::vector<Word> pts;
        for (const PointKey& p : ball.order)
            if (p.space == s.space && p.off == 0) pts.push_back(p.at);
        long lo = std::min(s.from_arc, s.to_arc), hi = std::max(s.from_arc, s.to_arc);
        long vlo = floordiv(lo, d) * d;
        long vhi = floordiv(hi, d) * d + (floormod(hi, d) != 0 ? d : 0);
        pts.push_back(cx.line_point(s.space, s.family, s.rep, vlo).at);
        pts.push_back(cx.line_point(s.space, s.family, s.rep, vhi).at);
        std::sort(pts.begin(), pts.end(), word_less);
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        // hull = union of tree geodesics from one member to all others
        std::vector<Word> hull;
        const Word root_pt = pts.front();
        for (const Word& w : pts) {
            std::size_t cp = common_prefix(root_pt, w);
            Word cur = root_pt;
            hull.push_back(cur);
            while (cur.size() > cp) {
                std::vector<int> raw(cur.letters().begin(), cur.letters().end() - 1);
                cur = Word(cur.rank(), raw);
                hull.push_back(cur);
            }
            for (std::size_t k = cp; k < w.size(); ++k) {
                cur = step_word(cur, w.letters()[k]);
                hull.push_back(cur);
            }
        }
        std::sort(hull.begin(), hull.end(), word_less);
        hull.erase(std::unique(hull.begin(), hull.end()), hull.end());

        // translate so the window contains the identity
        Word z = hull.front();
        Word zi = z.inverse();
        std::vector<Word> local;
        for (const Word& w : hull) local.push_back(multiply(zi, w));
        Subtree window = Subtree::of(side.rank, local);

        NormalizedMultiword nmw;
        nmw.rank = side.rank;
        for (const auto& f : side.families) {
            nmw.roots.push_back(f.root);
            nmw.multiplicity.push_back(1);
        }
        GeneralizedWhiteheadGraph gwg = generalized_whitehead_graph(nmw, window);

        const CyclicWord& my_root = side.families[static_cast<std::size_t>(s.family)].root;
        Word local_rep = canonical_coset_rep(multiply(zi, s.rep), my_root);
        long blocked = -1;
        for (std::size_t e = 0; e < gwg.edges.size(); ++e) {
            if (static_cast<int>(gwg.edges[e].root_index) == s.family &&
                gwg.edges[e].line == local_rep)
                blocked = static_cast<long>(e);
        }
        if (blocked < 0) throw std::logic_error("blocked line does not cross the window");

        std::unordered_map<Word, std::size_t, WordHash> idx;
        for (std::size_t k = 0; k < gwg.frontier.size(); ++k) idx.emplace(gwg.frontier[k], k);
        std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(gwg.frontier.size());
        for (std::size_t e = 0; e < gwg.edges.size(); ++e) {
            if (static_cast<long>(e) == blocked) continue;
            std::size_t a = idx.at(gwg.edges[e].from), b = idx.at(gwg.edges[e].to);
            adj[a].push_back({e, b});
            adj[b].push_back({e, a});
        }
        std::size_t src = idx.at(gwg.edges[static_cast<std::size_t>(blocked)].from);
        std::size_t dst = idx.at(gwg.edges[static_cast<std::size_t>(blocked)].to);
        const std::size_t NONE = static_cast<std::size_t>(-1);
        std::vector<std::size_t> prev_vertex(gwg.frontier.size(), NONE);
        std::vector<std::size_t> prev_edge(gwg.frontier.size(), NONE);
        std::deque<std::size_t> queue{src};
        prev_vertex[src] = src;
        while (!queue.empty() && prev_vertex[dst] == NONE) {
            std::size_t v = queue.front();
            queue.pop_front();
            for (auto [e, w] : adj[v]) {
                if (prev_vertex[w] != NONE) continue;
                prev_vertex[w] = v;
                prev_edge[w] = e;
                queue.push_back(w);
            }
        }
        if (prev_vertex[dst] == NONE)
            throw BudgetExceeded(
                "no detour: the generalized Whitehead graph component is not 2-connected");
        std::vector<std::size_t> edge_path;
        std::vector<std::size_t> vertex_path{dst};
        for (std::size_t v = dst; v != src; v = prev_vertex[v]) {
            edge_path.push_back(prev_edge[v]);
            vertex_path.push_back(prev_vertex[v]);
        }
        std::reverse(edge_path.begin(), edge_path.end());
        std::reverse(vertex_path.begin(), vertex_path.end());

        auto global_vertex = [&](const Word& w) { return multiply(z, w); };
        Word u_star = global_vertex(gwg.edges[static_cast<std::size_t>(blocked)].from);
        Word v_star = global_vertex(gwg.edges[static_cast<std::size_t>(blocked)].to);
        long u_arc = arc_of_vertex_on_line(cx, s.space, s.family, s.rep, u_star);
        long v_arc = arc_of_vertex_on_line(cx, s.space, s.family, s.rep, v_star);
        bool fwd = s.from_arc <= s.to_arc;
        bool u_first = fwd ? (u_arc < v_arc) : (u_arc > v_arc);
        if (!u_first) {
            std::swap(u_arc, v_arc);
            std::reverse(edge_path.begin(), edge_path.end());
            std::reverse(vertex_path.begin(), vertex_path.end());
        }

        std::vector<Seg> out;
        Seg head;
        head.h = HSeg{s.space, s.family, s.rep, s.from_arc, u_arc, s.forbidden};
        out.push_back(head);
        for (std::size_t k = 0; k < edge_path.size(); ++k) {
            const GwgEdge& e = gwg.edges[edge_path[k]];
            const CyclicWord& line_root = side.families[e.root_index].root;
            Word global_rep = canonical_coset_rep(multiply(z, e.line), line_root);
            Word a = global_vertex(gwg.frontier[vertex_path[k]]);
            Word b = global_vertex(gwg.frontier[vertex_path[k + 1]]);
            HSeg piece{
                s.space,
                static_cast<int>(e.root_index),
                global_rep,
                arc_of_vertex_on_line(cx, s.space, static_cast<int>(e.root_index), global_rep, a),
                arc_of_vertex_on_line(cx, s.space, static_cast<int>(e.root_index), global_rep, b),
                {}};
            // each detour piece crosses one of its own strips right away
            std::vector<long> strips = allowed_strips(piece);
            if (strips.empty()) throw BudgetExceeded("detour piece has no strip to cross");
            for (Seg& sub : push_vertical(piece, strips.front())) out.push_back(std::move(sub));
        }
        Seg tail;
        tail.h = HSeg{s.space, s.family, s.rep, v_arc, s.to_arc, s.forbidden};
        out.push_back(tail);
        return out;
    }

    bool run_rounds(long t_arc, bool exact_metric) {
        path.clear();
        Seg seed;
        seed.h = HSeg{0, cx.config().base_family, cx.config().base_line_rep,
                      cx.config().base_offset - t_arc, cx.config().base_offset + t_arc, {}};
        path.push_back(seed);

        const BassSerreBall& ball = model.ball(radius + 2);
        long round_cap = 4 * (radius + 2);
        long prev_min = -1;
        int stalls = 0;
        for (int round = 1; round <= round_cap; ++round) {
            long mind = path_min_dist(ball);
            if (mind > radius) return true;
            if (path.size() > 60000) throw BudgetExceeded("detour path grew past the segment cap");
            std::vector<Seg> next;
            int vertical = 0, reroutes = 0;
            for (const Seg& s : path) {
                if (!s.horizontal || seg_min_dist(cx, ball, s.h) > radius) {
                    next.push_back(s);
                    continue;
                }
                std::vector<long> strips = allowed_strips(s.h);
                std::vector<Seg> repl;
                if (!strips.empty()) {
                    ++vertical;
                    repl = push_vertical(s.h, strips.front());
                } else {
                    ++reroutes;
                    repl = reroute(s.h, ball);
                }
                for (Seg& r : repl) next.push_back(std::move(r));
            }
            path = std::move(next);
            long after = path_min_dist(ball);
            stages.push_back(StageLogEntry{round,
                                           std::to_string(vertical) + " vertical, " +
                                               std::to_string(reroutes) + " reroute",
                                           mind, after});
            if (exact_metric && after <= mind)
                throw BudgetExceeded("push round failed to make progress in the exact metric");
            if (!exact_metric) {
                if (after <= prev_min) {
                    if (++stalls > 2) return false;
                } else {
                    stalls = 0;
                }
            }
            prev_min = after;
        }
        return path_min_dist(ball) > radius;
    }

    DetourCertificate assemble(long t_arc) {
        DetourCertificate cert;
        cert.radius = radius;
        cert.t_arc = t_arc;
        cert.stages = stages;
        for (const Seg& s : path) {
            CertSegment cs;
            if (s.horizontal) {
                if (s.h.from_arc == s.h.to_arc) continue;
                cs.kind = CertSegment::Kind::Horizontal;
                cs.from =
                    cx.point_ref(cx.line_point(s.h.space, s.h.family, s.h.rep, s.h.from_arc));
                cs.to = cx.point_ref(cx.line_point(s.h.space, s.h.family, s.h.rep, s.h.to_arc));
            } else {
                cs.kind = CertSegment::Kind::Vertical;
                const auto& rec = cx.strip(s.v.strip);
                const auto& a = rec.side[s.v.from_side];
                const auto& b = rec.side[1 - s.v.from_side];
                cs.from = cx.point_ref(
                    cx.line_point(a.space, a.family, a.line_rep, a.anchor_arc + s.v.rung * a.step));
                cs.to = cx.point_ref(
                    cx.line_point(b.space, b.family, b.line_rep, b.anchor_arc + s.v.rung * b.step));
                cs.strip = cx.strip_ref(s.v.strip);
            }
            cert.segments.push_back(std::move(cs));
        }
        return cert;
    }
};

}  // namespace

DetourCertificate detour_certificate(BassSerreModel& model, long i) {
    if (i < 1) throw std::invalid_argument("certificate radius must be positive");
    Complex& cx = model.complex();
    const long period = model.base_period();

    long t_arc = period * i;
    const int max_retries = 6;
    for (int attempt = 0; attempt < max_retries; ++attempt) {
        if (!model.is_amalgam_metrization()) {
            // enlarge t until both endpoints measure at least 2i from the center
            bool far_enough = model.distance_exceeds(cx.gamma(t_arc), cx.center(), 2 * i - 1) &&
                              model.distance_exceeds(cx.gamma(-t_arc), cx.center(), 2 * i - 1);
            if (!far_enough) {
                t_arc *= 2;
                continue;
            }
        }
        DetourBuilder builder(model, i);
        if (builder.run_rounds(t_arc, model.is_amalgam_metrization())) {
            DetourCertificate cert = builder.assemble(t_arc);
            VerifyResult check = verify_certificate(model, cert);
            if (check.valid) return cert;
            if (model.is_amalgam_metrization())
                throw BudgetExceeded("constructed detour failed verification: " + check.reason);
        }
        t_arc *= 2;
    }
    throw BudgetExceeded("detour construction exhausted its retry budget at radius " +
                         std::to_string(i));
}

VerifyResult verify_certificate(BassSerreModel& model, const DetourCertificate& cert) {
    auto fail = [](const std::string& why) { return VerifyResult{false, why}; };
    try {
        if (cert.radius < 1) return fail("radius must be positive");
        if (cert.t_arc < 1) return fail("t must be positive");
        if (cert.segments.empty()) return fail("empty path");
        Complex& cx = model.complex();

        std::vector<std::vector<PointKey>> chains;
        for (const CertSegment& seg : cert.segments) {
            PointKey a = cx.resolve_point(seg.from);
            PointKey b = cx.resolve_point(seg.to);
            if (seg.kind == CertSegment::Kind::Horizontal) {
                if (a.space != b.space)
                    return fail("horizontal segment endpoints lie in different spaces");
                chains.push_back(cx.same_space_geodesic(a, b));
            } else {
                long sid = cx.resolve_strip(seg.strip);
                const auto& rec = cx.strip(sid);
                bool matched = false;
                for (int s = 0; s < 2 && !matched; ++s) {
                    const auto& ns = rec.side[s];
                    const auto& fs = rec.side[1 - s];
                    if (a.space != ns.space || b.space != fs.space) continue;
                    for (const auto& hit : cx.lines_through(a)) {
                        if (hit.family != ns.family || !(hit.rep == ns.line_rep)) continue;
                        if (floormod(hit.arc - ns.anchor_arc, ns.step) != 0) continue;
                        long rung = (hit.arc - ns.anchor_arc) / ns.step;
                        PointKey partner = cx.line_point(fs.space, fs.family, fs.line_rep,
                                                         fs.anchor_arc + rung * fs.step);
                        if (partner == b) {
                            matched = true;
                            break;
                        }
                    }
                }
                if (!matched) return fail("vertical segment is not a rung of the named strip");
                chains.push_back({a, b});
            }
        }
        for (std::size_t k = 0; k + 1 < chains.size(); ++k) {
            if (!(chains[k].back() == chains[k + 1].front()))
                return fail("consecutive segments do not share an endpoint");
        }
        if (!(chains.front().front() == cx.gamma(-cert.t_arc)))
            return fail("path does not start at gamma(-t)");
        if (!(chains.back().back() == cx.gamma(cert.t_arc)))
            return fail("path does not end at gamma(t)");

        const BassSerreBall& ball = model.ball(cert.radius + 2);
        for (const auto& chain : chains) {
            for (const PointKey& p : chain) {
                auto it = ball.dist.find(p);
                if (it != ball.dist.end() && it->second <= cert.radius)
                    return fail("path enters the forbidden ball: distance " +
                                std::to_string(it->second) + " <= " + std::to_string(cert.radius));
            }
        }
        return VerifyResult{true, ""};
    } catch (const BudgetExceeded& e) {
        return fail(std::string("budget: ") + e.what());
    } catch (const std::exception& e) {
        return fail(std::string("invalid reference: ") + e.what());
    }
}

std::string ball_dot(BassSerreModel& model, long radius) {
    const BassSerreBall& ball = model.ball(radius);
    Complex& cx = model.complex();
    static const char* palette[] = {"lightblue", "lightsalmon", "lightgreen", "plum"};
    std::ostringstream os;
    auto name = [&](const PointKey& p) {
        std::ostringstream n;
        n << "s" << p.space << ":" << (p.at.empty() ? "1" : render_word(p.at));
        if (p.off > 0) n << "+" << p.gen << "/" << p.off;
        return n.str();
    };
    os << "graph ball {\n";
    for (const PointKey& p : ball.order) {
        os << "  \"" << name(p) << "\" [fillcolor=" << palette[static_cast<std::size_t>(p.space) % 4]
           << ", style=filled, dist=" << ball.dist.at(p) << "];\n";
    }
    std::set<std::pair<std::string, std::string>> seen;
    for (const PointKey& p : ball.order) {
        for (const auto& nb : cx.neighbors(p)) {
            if (!ball.contains(nb.point)) continue;
            auto a = name(p), b = name(nb.point);
            if (a > b) std::swap(a, b);
            if (!seen.insert({a, b}).second) continue;
            os << "  \"" << a << "\" -- \"" << b << "\"";
            if (nb.strip >= 0) os << " [style=dashed]";  // rungs drawn as ladder steps
            os << ";\n";
        }
    }
    os << "}\n";
    return os.str();
}

}  // namespace csl
