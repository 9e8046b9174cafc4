#ifndef CSL_BASSSERRE_HPP
#define CSL_BASSSERRE_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "csl/words.hpp"

namespace csl {

// One-edge splitting data over an infinite cyclic group: an amalgam
// A *_<wA=wB> B or an HNN extension <A, t | t^-1 w1 t = w2>.
struct SplittingSpec {
    enum class Kind { Amalgam, Hnn };
    Kind kind = Kind::Amalgam;
    int rank_a = 0;
    int rank_b = 0;           // unused for HNN
    Word word_a;              // wA, or w1 for HNN
    Word word_b;              // wB over B's basis, or w2 over A's basis for HNN
    char alphabet_a = 'a';    // rendering alphabets for the two bases
    char alphabet_b = 'x';

    static SplittingSpec amalgam(int rank_a, int rank_b, Word wa, Word wb);
    static SplittingSpec hnn(int rank, Word w1, Word w2);
};

// Coarse model data for splittings of virtually free groups: vertex spaces
// are trees for the finite index free kernels, attachment lines are the axes
// of the lifted edge-subgroup roots, and every line carries as many strips as
// the index of the edge group in its commensurator.
struct VfFamilySet {
    std::vector<CyclicWord> roots;
    std::vector<int> exponents;   // period of the attached annulus in root lengths
    int strips_per_line = 1;
};
struct VfBallConfig {
    enum class Kind { Amalgam, Hnn };
    Kind kind = Kind::Amalgam;
    int rank_a = 0;
    int rank_b = 0;            // unused for HNN
    VfFamilySet lift_a;        // lift of the edge group to A's kernel (HNN: of c1)
    VfFamilySet lift_b;        // amalgam: lift to B's kernel; HNN: lift of c2
};

struct BudgetExceeded : std::runtime_error {
    explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

// ---- canonical, build independent references into the complex ----

// A space is addressed by the chain of strips leading to it from the base
// vertex space; a strip by its near-side space, line and copy index.
struct SpaceStep {
    int family = 0;
    Word line;  // canonical coset representative in the near space's coordinates
    int copy = 0;

    bool operator==(const SpaceStep& o) const {
        return family == o.family && line == o.line && copy == o.copy;
    }
};
struct SpaceRef {
    std::vector<SpaceStep> steps;
    bool operator==(const SpaceRef& o) const { return steps == o.steps; }
};
struct StripRef {
    SpaceRef space;
    int family = 0;
    Word line;
    int copy = 0;
};
// A point is a tree vertex of a space (off == 0) or an interior subdivision
// point of the tree edge from `at` toward generator `gen` (0 < off < subdiv).
struct PointRef {
    SpaceRef space;
    Word at;
    int gen = 0;
    int off = 0;
};

// ---- internal geometry ----

struct FamilyConfig {
    CyclicWord root;
    int strips_per_line = 1;
    long period_arcs = 0;  // arc length of one annulus period on this side
    int far_side = 0;
    int far_family = 0;
};
struct SideConfig {
    int rank = 0;
    int subdiv = 1;  // unit pieces per tree edge
    std::vector<FamilyConfig> families;
};
struct ComplexConfig {
    std::vector<SideConfig> sides;
    int base_side = 0;
    int base_family = 0;
    long base_period = 0;      // gamma(base_period * k) = w^k . center
    Word base_line_rep;        // canonical representative of the edge word's axis
    long base_offset = 0;      // arc position of the center on that axis
    std::size_t max_vertices = 4'000'000;
};

struct PointKey {
    long space = 0;
    Word at;
    int gen = 0;
    int off = 0;

    bool operator==(const PointKey& o) const {
        return space == o.space && gen == o.gen && off == o.off && at == o.at;
    }
};
struct PointKeyHash {
    std::size_t operator()(const PointKey& p) const {
        std::size_t h = hash_letters(p.gen * 64 + p.off, p.at.letters());
        return h ^ (static_cast<std::size_t>(p.space) * 0x9e3779b97f4a7c15ull);
    }
};

class Complex {
  public:
    explicit Complex(ComplexConfig cfg);

    const ComplexConfig& config() const { return cfg_; }
    int side_of_space(long space) const { return spaces_[static_cast<std::size_t>(space)].side; }
    const SideConfig& side_config(long space) const {
        return cfg_.sides[static_cast<std::size_t>(side_of_space(space))];
    }

    PointKey center() const;
    PointKey gamma(long t);

    // Strips attached along a line, created on demand. The line is named by
    // its canonical coset representative in the space's coordinates; copies
    // 0..strips_per_line-1 are parallel strips on the same line, copy c
    // anchored with an arc shear of c * |root| * subdiv.
    long strip_at(long space, int family, const Word& line_rep, int copy);

    struct StripSide {
        long space = 0;
        int family = 0;
        Word line_rep;
        long anchor_arc = 0;
        long step = 1;
    };
    struct StripRecord {
        StripSide side[2];  // side[0] = near (parent) side
        int copy = 0;
    };
    const StripRecord& strip(long id) const { return strips_[static_cast<std::size_t>(id)]; }
    long strip_count() const { return static_cast<long>(strips_.size()); }
    long space_count() const { return static_cast<long>(spaces_.size()); }

    // point at an arc position along a line (arc 0 at the representative)
    PointKey line_point(long space, int family, const Word& line_rep, long arc) const;

    struct LineHit {
        int family = 0;
        Word rep;
        long arc = 0;  // arc position of the queried point on this line
    };
    std::vector<LineHit> lines_through(const PointKey& p);

    struct Neighbor {
        PointKey point;
        long strip = -1;  // -1 horizontal, else the rung's strip
    };
    std::vector<Neighbor> neighbors(const PointKey& p);

    // canonical reference resolution (both directions)
    long resolve_space(const SpaceRef& ref);
    SpaceRef space_ref(long space) const;
    PointKey resolve_point(const PointRef& ref);
    PointRef point_ref(const PointKey& key) const;
    long resolve_strip(const StripRef& ref);
    StripRef strip_ref(long id) const;

    // exact distance between two points of one space (in arc units)
    long same_space_distance(const PointKey& a, const PointKey& b) const;
    // unit steps of the unique geodesic between two points of one space
    std::vector<PointKey> same_space_geodesic(const PointKey& a, const PointKey& b) const;

  private:
    struct SpaceRecord {
        int side = 0;
        long parent_strip = -1;  // -1 for the base space
    };
    struct StripKey {
        long space;
        int family;
        std::vector<int> rep;
        int copy;
        bool operator<(const StripKey& o) const {
            return std::tie(space, family, rep, copy) < std::tie(o.space, o.family, o.rep, o.copy);
        }
    };

    ComplexConfig cfg_;
    std::vector<SpaceRecord> spaces_;
    std::vector<StripRecord> strips_;
    std::map<StripKey, long> strip_index_;
};

// A finite metric ball: every vertex within `radius` unit steps of the
// center, with exact BFS distances.
struct BassSerreBall {
    long radius = 0;
    PointKey center;
    std::unordered_map<PointKey, long, PointKeyHash> dist;
    std::vector<PointKey> order;  // BFS discovery order

    bool contains(const PointKey& p) const { return dist.count(p) != 0; }
};

// ---- certificates ----

struct CertSegment {
    enum class Kind { Horizontal, Vertical };
    Kind kind = Kind::Horizontal;
    PointRef from;
    PointRef to;
    StripRef strip;  // vertical segments only
};

struct StageLogEntry {
    int round = 0;
    std::string action;
    long min_dist_before = 0;
    long min_dist_after = 0;
};

// A detour witnessing failure of the bottleneck property at radius i: a path
// from gamma(-t) to gamma(t) every point of which stays at distance > i from
// gamma(0).
struct DetourCertificate {
    long radius = 0;
    long t_arc = 0;
    std::vector<CertSegment> segments;
    std::vector<StageLogEntry> stages;
};

struct VerifyResult {
    bool valid = false;
    std::string reason;  // first failure, empty when valid
};

// Shared handle for a splitting's geometric model; balls are memoized per
// radius. Completed balls are immutable; the registries only grow.
class BassSerreModel {
  public:
    static std::shared_ptr<BassSerreModel> for_spec(const SplittingSpec& spec,
                                                    std::size_t max_vertices = 4'000'000);
    static std::shared_ptr<BassSerreModel> for_vf(const VfBallConfig& cfg,
                                                  std::size_t max_vertices = 4'000'000);

    Complex& complex() { return cx_; }
    const BassSerreBall& ball(long radius);

    bool is_amalgam_metrization() const { return exact_metric_; }
    long base_period() const { return cx_.config().base_period; }

    // true iff d(a, b) > bound, decided by two bounded BFS waves
    bool distance_exceeds(const PointKey& a, const PointKey& b, long bound);

  private:
    BassSerreModel(ComplexConfig cfg, bool exact_metric)
        : cx_(std::move(cfg)), exact_metric_(exact_metric) {}

    Complex cx_;
    bool exact_metric_ = false;
    std::map<long, BassSerreBall> balls_;
};

// Builds a ball of the given radius (unit arc steps) around the center.
const BassSerreBall& build_ball(BassSerreModel& model, long radius);

// Generates a verified detour certificate for radius i, following the push
// procedure: vertical pushes across a second strip where a line carries more
// than one, horizontal rerouting through the generalized Whitehead graph over
// the ball's trace otherwise. Throws BudgetExceeded when the construction
// cannot be completed within its retry budget.
DetourCertificate detour_certificate(BassSerreModel& model, long i);

// Recomputes everything from scratch: resolves every reference, checks the
// path is connected with endpoints gamma(-t), gamma(t), and checks every
// path point keeps distance > i from gamma(0) by BFS on a fresh ball.
VerifyResult verify_certificate(BassSerreModel& model, const DetourCertificate& cert);

std::string ball_dot(BassSerreModel& model, long radius);

}  // namespace csl

#endif
