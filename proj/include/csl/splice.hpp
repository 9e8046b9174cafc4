#ifndef CSL_SPLICE_HPP
#define CSL_SPLICE_HPP

#include <string>
#include <vector>

#include "csl/whitehead.hpp"
#include "csl/words.hpp"

namespace csl {

// A finite connected subtree of the Cayley tree containing the identity.
// Vertices are reduced words; connectedness is equivalent to the vertex set
// being closed under taking prefixes.
struct Subtree {
    int rank = 0;
    std::vector<Word> vertices;

    static Subtree of(int rank, std::vector<Word> vertices);
    bool contains(const Word& w) const;
};

struct GwgEdge {
    Word from;  // frontier vertices crossed by the line (entry/exit)
    Word to;
    std::size_t root_index = 0;
    Word line;  // canonical coset representative naming the line translate
};

// The line pattern a normalized multiword traces over a compact subtree:
// vertices are the elements adjacent to the subtree, and each translate of a
// root axis meeting the subtree contributes one edge between the frontier
// vertices where it enters and leaves.
struct GeneralizedWhiteheadGraph {
    int rank = 0;
    std::vector<Word> frontier;
    std::vector<GwgEdge> edges;
};

// Builds the graph by splicing the single-vertex Whitehead graphs at each
// subtree vertex along shared subtree edges.
GeneralizedWhiteheadGraph generalized_whitehead_graph(const NormalizedMultiword& nmw,
                                                      const Subtree& x);

// Direct construction from the definition: enumerate the axis translates that
// meet the subtree and record their entry/exit frontier pairs. Kept fully
// independent of the splicing path so the two can check each other.
GeneralizedWhiteheadGraph axis_walk_oracle(const NormalizedMultiword& nmw, const Subtree& x);

// Canonical (shortest, then lexicographically least) element of the coset
// g<v>, naming the line translate g·Axis(v).
Word canonical_coset_rep(const Word& g, const CyclicWord& v);

bool gwg_equal(const GeneralizedWhiteheadGraph& a, const GeneralizedWhiteheadGraph& b);

// Connectivity analysis of the generalized graph over its frontier vertices.
struct GwgReport {
    std::size_t component_count = 0;
    std::vector<bool> two_connected;  // per component: >= 2 edges and no cut point
    bool has_two_connected_components = false;
};
GwgReport analyze_gwg(const GeneralizedWhiteheadGraph& g);

std::string gwg_dot(const GeneralizedWhiteheadGraph& g, char alphabet = 'a');

}  // namespace csl

#endif
