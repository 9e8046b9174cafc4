#ifndef CSL_VFLIFT_HPP
#define CSL_VFLIFT_HPP

#include <optional>
#include <string>
#include <vector>

#include "csl/bassserre.hpp"
#include "csl/whitehead.hpp"
#include "csl/words.hpp"

namespace csl {

// Words in a virtually free group's generators: signed indices into the
// presentation's generator list, like free-group Words but unreduced.
using GWord = std::vector<int>;

struct VfGenerator {
    std::string name;        // single character
    std::vector<int> image;  // permutation of 0..degree-1
};

// A free product of finite cyclic groups and free generators, given by
// generator images in a finite permutation group. Relators are proper powers
// of single generators. Building the presentation runs the coset enumeration
// and Reidemeister-Schreier rewriting for the kernel of the permutation map,
// which is free for this class.
class VfPresentation {
  public:
    static VfPresentation build(std::vector<VfGenerator> generators,
                                const std::vector<std::string>& relators, int degree);

    std::size_t generator_count() const { return gens_.size(); }
    const std::vector<VfGenerator>& generators() const { return gens_; }
    int order_of_generator(std::size_t i) const { return orders_[i]; }  // 0 = infinite
    int degree() const { return degree_; }
    std::size_t q_order() const { return coset_count_; }
    int kernel_rank() const { return kernel_rank_; }
    std::size_t tree_depth() const { return tree_depth_; }
    const GWord& coset_rep(std::size_t q) const { return reps_[q]; }

    // expected kernel rank from the Euler characteristic of the free product
    long euler_rank() const;

    struct Rewrite {
        Word kernel_word;   // over the kernel basis
        std::size_t coset;  // image coset index (0 = kernel)
    };
    Rewrite rewrite(const GWord& g) const;

    GWord expand(const Word& kernel_word) const;  // kernel basis -> G letters
    GWord normal_form(const GWord& g) const;      // free product normal form
    bool is_identity(const GWord& g) const { return normal_form(g).empty(); }
    int order_of_image(const GWord& g) const;
    bool infinite_order(const GWord& g) const;

    GWord inverse(const GWord& g) const;
    GWord concat(const GWord& a, const GWord& b) const;
    GWord gpower(const GWord& g, int e) const;

    GWord parse(const std::string& text) const;
    std::string render(const GWord& g) const;

  private:
    std::vector<VfGenerator> gens_;
    std::vector<int> orders_;
    int degree_ = 0;
    std::size_t coset_count_ = 0;
    std::size_t tree_depth_ = 0;
    int kernel_rank_ = 0;
    std::vector<GWord> reps_;

    // transition tables: coset x generator -> coset
    std::vector<std::vector<std::size_t>> step_, step_inv_;
    // Schreier generator tokens: (coset, generator) -> token id; -1 tree edge
    std::vector<std::vector<long>> token_;
    // token -> signed kernel basis letters (basis tokens map to one letter,
    // eliminated tokens to their relator expansion)
    std::vector<std::vector<int>> token_letters_;
    // kernel basis letter -> originating (coset, generator)
    std::vector<std::pair<std::size_t, std::size_t>> basis_source_;
};

struct LiftedMultiword {
    GWord base;
    int k = 1;  // order of the base element's image in Q
    Word w;     // rewrite of base^k
    std::vector<Word> members;
    NormalizedMultiword normalized;
};

// Lift of the virtually cyclic subgroup generated by h to the kernel: since
// the kernel is normal the double cosets are plain cosets, so the members
// are the coset-rep conjugates of h^k rewritten into the kernel basis.
LiftedMultiword lift_multiword(const VfPresentation& pres, const GWord& h);

struct CommensuratorResult {
    std::vector<GWord> reps;  // coset representatives of Comm modulo <h>, identity first
};

// Exact commensurator computation: an element u*g_q commensurates <h> iff u
// solves a conjugacy equation between lift roots, whose full solution set is
// a coset of the root's centralizer. class_cap bounds the period search when
// collapsing to representatives modulo <h>.
CommensuratorResult commensurator(const VfPresentation& pres, const GWord& h, int class_cap = 64);

struct FactorReport {
    bool factor = false;
    bool almost_malnormal = false;
    bool basic = false;
    std::string diagnostic;
};

// h generates (up to finite index) a factor iff <h> is almost malnormal and
// its lift to the kernel is basic.
FactorReport is_factor(const VfPresentation& pres, const GWord& h);

struct VfSplittingSpec {
    enum class Kind { Amalgam, Hnn };
    Kind kind = Kind::Amalgam;
    VfPresentation a;
    std::optional<VfPresentation> b;  // amalgam only
    GWord c_a;                        // edge element in A (c1 for HNN)
    GWord c_b;                        // edge element in B (c2 in A for HNN)
};

struct VfVerdict {
    enum class Outcome { VirtuallyFree, NotVirtuallyFree };
    Outcome outcome = Outcome::VirtuallyFree;
    std::optional<int> witness_side;  // 0 or 1
    std::vector<WhiteheadMove> witness_moves;
    bool baumslag_solitar_like = false;  // HNN: commensurable conjugates found
    std::vector<DetourCertificate> certificates;
    FactorReport factor_a, factor_b;
    std::size_t level_set_size = 0;
    bool level_set_capped = false;
};

struct VfDecideOptions {
    long cert_radius_min = 1;
    long cert_radius_max = 4;
    bool certificates = true;
    std::size_t level_budget = 10000;
    std::size_t max_vertices = 4'000'000;
};

VfVerdict decide_vf(const VfSplittingSpec& spec, const VfDecideOptions& opt = {});

// Coarse-model configuration for a spec's complex (exposed for tooling).
VfBallConfig vf_ball_config(const VfSplittingSpec& spec);

}  // namespace csl

#endif
