#ifndef CSL_DECIDER_HPP
#define CSL_DECIDER_HPP

#include <optional>
#include <vector>

#include "csl/bassserre.hpp"
#include "csl/whitehead.hpp"
#include "csl/words.hpp"

namespace csl {

// Witness for a Free verdict: the edge word named by `side` is carried to a
// single generator by `moves`; for HNN the conjugators a_i realize the images
// as conjugates of the roots in the final basis.
struct FreeWitness {
    int side = 0;  // 0 = A / first edge word, 1 = B / second edge word
    std::vector<WhiteheadMove> moves;
    std::vector<Word> conjugators;  // HNN only (one per edge word)
    int collapsed_rank = 0;
};

// g * w1^p * g^-1 = w2^q exhibits a Baumslag-Solitar subgroup.
struct BaumslagSolitarCertificate {
    Word conjugator;
    long p = 0;
    long q = 0;
};

struct Verdict {
    enum class Outcome { Free, NotFree };
    Outcome outcome = Outcome::Free;
    std::optional<FreeWitness> witness;
    std::optional<BaumslagSolitarCertificate> baumslag_solitar;
    std::vector<DetourCertificate> certificates;

    // diagnostics
    std::vector<long> minimal_lengths;  // per side, -1 when short-circuited
    std::size_t level_set_size = 0;
    bool level_set_capped = false;
};

struct DecideOptions {
    long cert_radius_min = 1;
    long cert_radius_max = 4;
    bool certificates = true;  // generate (and verify) detour certificates
    std::size_t level_budget = 10000;
    std::size_t max_vertices = 4'000'000;
};

Verdict decide_amalgam(const SplittingSpec& spec, const DecideOptions& opt = {});
Verdict decide_hnn(const SplittingSpec& spec, const DecideOptions& opt = {});
Verdict decide(const SplittingSpec& spec, const DecideOptions& opt = {});

bool verify_witness(const SplittingSpec& spec, const FreeWitness& witness);
bool verify_baumslag_solitar(const SplittingSpec& spec, const BaumslagSolitarCertificate& cert);

}  // namespace csl

#endif
