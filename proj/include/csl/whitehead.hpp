#ifndef CSL_WHITEHEAD_HPP
#define CSL_WHITEHEAD_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "csl/words.hpp"

namespace csl {

// A finite list of nonempty words over a common basis.
struct Multiword {
    int rank = 0;
    std::vector<Word> members;
};

// Where a multiword member ended up during normalization.
struct MemberClass {
    std::size_t root_index = 0;  // index into NormalizedMultiword::roots
    int exponent = 1;            // member ~ conjugate of root^(+-exponent)
    bool inverted = false;       // true if the member's root is the inverse class
    Word conjugator;             // member = conjugator * v^e * conjugator^-1 (v = member's own root phase)
};

// The indivisible, cyclically reduced roots of the maximal cyclic classes
// meeting a multiword, with per-root member counts. Roots are kept in first
// occurrence order and are pairwise non-commensurable.
struct NormalizedMultiword {
    int rank = 0;
    std::vector<CyclicWord> roots;
    std::vector<int> multiplicity;
    std::vector<MemberClass> member_classes;  // parallel to the source multiword

    std::size_t total_length() const {
        std::size_t n = 0;
        for (const auto& r : roots) n += r.size();
        return n;
    }
};

// Direction vertices are signed generator indices, ordered -rank..-1,1..rank.
struct WhiteheadEdge {
    int from = 0;  // direction x^-1 for an occurrence of xy
    int to = 0;    // direction y
    std::size_t root_index = 0;
    std::size_t position = 0;  // index of x in the root's cyclic word
};

struct WhiteheadGraph {
    int rank = 0;
    std::vector<WhiteheadEdge> edges;

    std::size_t degree(int direction) const;
    static std::size_t direction_slot(int direction, int rank);
    static int slot_direction(std::size_t slot, int rank);
};

struct GraphComponent {
    std::vector<int> vertices;        // non-isolated directions in this component
    std::vector<std::size_t> edges;   // edge indices
    bool isolated_edge = false;       // exactly one edge
    bool two_connected = false;       // >= 2 edges and no cut point
};

struct GraphReport {
    std::vector<GraphComponent> components;
    std::vector<int> cut_vertices;

    bool all_isolated_edges() const;
    bool has_two_connected_components() const;  // every component 2-connected
};

// Whitehead automorphisms. A Type I move is a signed basis permutation given
// by the images of the positive generators. A Type II move has a multiplier m
// and a direction set S with m in S, m^-1 not in S; the multiplier's own
// generator is fixed and every other generator x maps to m^p x m^-q with
// p = [x^-1 in S \ {m}], q = [x in S \ {m}].
struct WhiteheadMove {
    enum class Kind { TypeI, TypeII };
    Kind kind = Kind::TypeII;
    std::vector<int> images;  // TypeI: images[i-1] = image direction of generator i
    int multiplier = 0;       // TypeII
    std::vector<int> set;     // TypeII: sorted direction set S

    WhiteheadMove inverse() const;
};

NormalizedMultiword normalize_multiword(const Multiword& mw);

WhiteheadGraph build_whitehead_graph(const NormalizedMultiword& nmw);

GraphReport analyze_graph(const WhiteheadGraph& g);

Word apply_whitehead_move(const WhiteheadMove& move, const Word& w);
Multiword apply_whitehead_move(const WhiteheadMove& move, const Multiword& mw);

// All Type II moves for a rank, in the deterministic (multiplier, subset)
// enumeration order used by the greedy minimizer.
std::vector<WhiteheadMove> enumerate_type2_moves(int rank);
// All Type I moves (signed permutations).
std::vector<WhiteheadMove> enumerate_type1_moves(int rank);

struct MinimizationResult {
    NormalizedMultiword minimal;
    Multiword minimal_members;  // move images of the input members
    std::vector<WhiteheadMove> moves;
};

// Greedy descent over Type II moves until no move shrinks the total root
// length. Whitehead's peak reduction guarantees the result is a global
// minimum over the automorphism orbit.
MinimizationResult minimize_multiword(const Multiword& mw);

struct LevelSetResult {
    std::vector<NormalizedMultiword> positions;
    bool capped = false;
    // positions[i] is reached from positions[parent[i]] by move_from_parent[i];
    // parent of the seed is npos.
    std::vector<std::size_t> parent;
    std::vector<std::optional<WhiteheadMove>> move_from_parent;
};

// Explores the minimal level set: positions reachable from a Whitehead
// minimal multiword by length preserving Type I / Type II moves. Roots keep
// their member order, so position roots stay aligned with the seed's roots.
LevelSetResult level_set(const NormalizedMultiword& min, std::size_t budget = 10000);

bool is_basic(const Multiword& mw);

// A single word is primitive iff it is indivisible and Whitehead-minimizes
// to a single generator.
struct PrimitivityResult {
    bool primitive = false;
    std::vector<WhiteheadMove> moves;
};
PrimitivityResult is_primitive(const Word& w);

// Post-hoc checks of the minimality lemmas; returns human readable violation
// descriptions (empty when all hold).
std::vector<std::string> check_minimality_lemmas(const WhiteheadGraph& g, const GraphReport& report);

std::string whitehead_graph_dot(const WhiteheadGraph& g, const GraphReport& report,
                                char alphabet = 'a');

}  // namespace csl

#endif
