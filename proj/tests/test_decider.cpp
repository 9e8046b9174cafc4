#include <random>

#include "csl/decider.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace csl;

namespace {

SplittingSpec amalgam(int ra, int rb, const std::string& wa, const std::string& wb) {
    return SplittingSpec::amalgam(ra, rb, parse_word(wa, ra), parse_word(wb, rb, 'x'));
}
SplittingSpec hnn(int r, const std::string& w1, const std::string& w2) {
    return SplittingSpec::hnn(r, parse_word(w1, r), parse_word(w2, r));
}

DecideOptions fast() {
    DecideOptions o;
    o.certificates = false;
    return o;
}

}  // namespace

TEST_CASE("amalgam with a primitive side is free") {
    Verdict v = decide_amalgam(amalgam(2, 2, "abAB", "x"));
    REQUIRE(v.outcome == Verdict::Outcome::Free);
    REQUIRE(v.witness.has_value());
    CHECK(v.witness->side == 1);
    CHECK(v.witness->collapsed_rank == 3);
    CHECK(verify_witness(amalgam(2, 2, "abAB", "x"), *v.witness));
}

TEST_CASE("surface-like amalgam is not free, with verified certificates") {
    DecideOptions opt;
    opt.cert_radius_max = 2;
    SplittingSpec spec = amalgam(2, 2, "abAB", "xyXY");
    Verdict v = decide_amalgam(spec, opt);
    REQUIRE(v.outcome == Verdict::Outcome::NotFree);
    CHECK_FALSE(v.witness.has_value());
    REQUIRE(v.certificates.size() == 2);
    auto model = BassSerreModel::for_spec(spec);
    for (const auto& cert : v.certificates) CHECK(verify_certificate(*model, cert).valid);
}

TEST_CASE("doubly divisible amalgam short-circuits to not free") {
    Verdict v = decide_amalgam(amalgam(2, 2, "aa", "xx"), fast());
    CHECK(v.outcome == Verdict::Outcome::NotFree);
    CHECK(v.minimal_lengths == std::vector<long>{-1, -1});
}

TEST_CASE("hnn with independent generators is free") {
    SplittingSpec spec = hnn(2, "a", "b");
    Verdict v = decide_hnn(spec);
    REQUIRE(v.outcome == Verdict::Outcome::Free);
    REQUIRE(v.witness.has_value());
    CHECK(v.witness->collapsed_rank == 2);
    CHECK(verify_witness(spec, *v.witness));
}

TEST_CASE("hnn conjugating a to its square is Baumslag-Solitar") {
    SplittingSpec spec = hnn(2, "a", "aa");
    Verdict v = decide_hnn(spec);
    REQUIRE(v.outcome == Verdict::Outcome::NotFree);
    REQUIRE(v.baumslag_solitar.has_value());
    CHECK(verify_baumslag_solitar(spec, *v.baumslag_solitar));
}

TEST_CASE("hnn commutator against a free generator at rank 3 is free") {
    SplittingSpec spec = hnn(3, "abAB", "c");
    Verdict v = decide_hnn(spec);
    REQUIRE(v.outcome == Verdict::Outcome::Free);
    CHECK(v.witness->collapsed_rank == 3);
    CHECK(verify_witness(spec, *v.witness));
}

TEST_CASE("hnn commutator against b is not free") {
    DecideOptions opt;
    opt.cert_radius_max = 1;
    SplittingSpec spec = hnn(2, "abAB", "b");
    Verdict v = decide_hnn(spec, opt);
    REQUIRE(v.outcome == Verdict::Outcome::NotFree);
    CHECK_FALSE(v.baumslag_solitar.has_value());
    REQUIRE(v.certificates.size() == 1);
    auto model = BassSerreModel::for_spec(spec);
    CHECK(verify_certificate(*model, v.certificates[0]).valid);
}

TEST_CASE("witness tampering is rejected") {
    SplittingSpec spec = hnn(2, "a", "b");
    Verdict v = decide_hnn(spec);
    REQUIRE(v.witness.has_value());
    FreeWitness w = *v.witness;

    FreeWitness wrong_rank = w;
    wrong_rank.collapsed_rank = 5;
    CHECK_FALSE(verify_witness(spec, wrong_rank));

    // witness presented for a not-free spec fails the criterion re-check
    SplittingSpec bad = hnn(2, "abAB", "b");
    Verdict nv = decide_hnn(bad, fast());
    REQUIRE(nv.outcome == Verdict::Outcome::NotFree);
    CHECK_FALSE(verify_witness(bad, w));

    // truncated move list on a spec that needs minimization
    SplittingSpec needs_moves = amalgam(2, 2, "aab", "x");
    Verdict fv = decide_amalgam(needs_moves);
    REQUIRE(fv.outcome == Verdict::Outcome::Free);
    if (fv.witness->side == 0) {
        FreeWitness cut = *fv.witness;
        REQUIRE(!cut.moves.empty());
        cut.moves.pop_back();
        CHECK_FALSE(verify_witness(needs_moves, cut));
    }
}

TEST_CASE("symmetry of the amalgam decision") {
    std::mt19937 rng(71);
    for (int t = 0; t < 15; ++t) {
        Word wa = oracles::random_reduced_word(rng, 2, 1 + t % 5);
        Word wb = oracles::random_reduced_word(rng, 2, 1 + (t / 2) % 5);
        SplittingSpec s1 = SplittingSpec::amalgam(2, 2, wa, wb);
        SplittingSpec s2 = SplittingSpec::amalgam(2, 2, wb, wa);
        CHECK(decide_amalgam(s1, fast()).outcome == decide_amalgam(s2, fast()).outcome);
    }
}

TEST_CASE("verdicts are invariant under basis changes") {
    std::mt19937 rng(73);
    for (int t = 0; t < 10; ++t) {
        SplittingSpec moved = amalgam(2, 2, "abAB", "xyXY");
        for (int k = 0; k < 5; ++k) {
            moved.word_a = apply_whitehead_move(oracles::random_move(rng, 2), moved.word_a);
            moved.word_b = apply_whitehead_move(oracles::random_move(rng, 2), moved.word_b);
        }
        CHECK(decide(moved, fast()).outcome == Verdict::Outcome::NotFree);
    }
    for (int t = 0; t < 10; ++t) {
        // HNN edge words live in the same vertex group: one automorphism moves both
        SplittingSpec moved = hnn(2, "abAB", "b");
        for (int k = 0; k < 5; ++k) {
            auto mv = oracles::random_move(rng, 2);
            moved.word_a = apply_whitehead_move(mv, moved.word_a);
            moved.word_b = apply_whitehead_move(mv, moved.word_b);
        }
        CHECK(decide(moved, fast()).outcome == Verdict::Outcome::NotFree);
    }
}

TEST_CASE("rank-one boundary cases") {
    // Z *_2Z Z: both edge words divisible, vertical-only detours exist
    DecideOptions opt;
    opt.cert_radius_max = 2;
    SplittingSpec klein = SplittingSpec::amalgam(1, 1, parse_word("aa", 1),
                                                 parse_word("xx", 1, 'x'));
    Verdict v = decide_amalgam(klein, opt);
    REQUIRE(v.outcome == Verdict::Outcome::NotFree);
    REQUIRE(v.certificates.size() == 2);
    auto model = BassSerreModel::for_spec(klein);
    for (const auto& cert : v.certificates) CHECK(verify_certificate(*model, cert).valid);

    // the Klein bottle group as an HNN extension: t a t^-1 = a^-1
    SplittingSpec kb = SplittingSpec::hnn(1, parse_word("a", 1), parse_word("A", 1));
    Verdict vb = decide_hnn(kb);
    REQUIRE(vb.outcome == Verdict::Outcome::NotFree);
    REQUIRE(vb.baumslag_solitar.has_value());
    CHECK(verify_baumslag_solitar(kb, *vb.baumslag_solitar));

    // Z *_Z Z along the identity is just Z
    SplittingSpec triv = SplittingSpec::amalgam(1, 1, parse_word("a", 1),
                                                parse_word("x", 1, 'x'));
    Verdict vt = decide_amalgam(triv);
    CHECK(vt.outcome == Verdict::Outcome::Free);
    CHECK(vt.witness->collapsed_rank == 1);
}

TEST_CASE("free instances built from the edge-collapse construction stay free") {
    std::mt19937 rng(79);
    for (int t = 0; t < 12; ++t) {
        // edge word = image of a generator under a random automorphism
        Word w = Word(2, {1});
        for (int k = 0; k < 5; ++k) w = apply_whitehead_move(oracles::random_move(rng, 2), w);
        SplittingSpec spec =
            SplittingSpec::amalgam(2, 2, w, oracles::random_reduced_word(rng, 2, 1 + t % 6));
        Verdict v = decide_amalgam(spec, fast());
        CHECK(v.outcome == Verdict::Outcome::Free);
        CHECK(verify_witness(spec, *v.witness));
    }
}
