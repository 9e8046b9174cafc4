#include "csl/json_io.hpp"
#include "doctest.h"

using namespace csl;

namespace {

SplittingSpec surface_amalgam() {
    return spec_from_json(ordered_json::parse(
        R"({"type":"amalgam","rankA":2,"rankB":2,"wA":"abAB","wB":"xyXY"})"));
}

}  // namespace

TEST_CASE("spec json round trip") {
    SplittingSpec s = surface_amalgam();
    CHECK(s.rank_a == 2);
    CHECK(render_word(s.word_b, 'x') == "xyXY");
    ordered_json j = spec_to_json(s);
    SplittingSpec s2 = spec_from_json(j);
    CHECK(s2.word_a == s.word_a);
    CHECK(s2.word_b == s.word_b);
    CHECK(spec_to_json(s2) == j);

    ordered_json h = ordered_json::parse(R"({"type":"hnn","rank":2,"w1":"abAB","w2":"b"})");
    SplittingSpec hs = spec_from_json(h);
    CHECK(spec_to_json(spec_from_json(spec_to_json(hs))) == spec_to_json(hs));
}

TEST_CASE("verdict and witness round trip") {
    SplittingSpec spec = spec_from_json(
        ordered_json::parse(R"({"type":"hnn","rank":3,"w1":"abAB","w2":"c"})"));
    Verdict v = decide(spec);
    REQUIRE(v.witness.has_value());
    ordered_json j = verdict_to_json(v, spec);
    CHECK(j["outcome"] == "free");
    FreeWitness w = witness_from_json(j["witness"], spec);
    CHECK(verify_witness(spec, w));
    CHECK(witness_to_json(w, spec) == j["witness"]);
}

TEST_CASE("certificate json round trip and cross-model verification") {
    SplittingSpec spec = surface_amalgam();
    auto model = BassSerreModel::for_spec(spec);
    DetourCertificate cert = detour_certificate(*model, 1);
    WireContext ctx = wire_context_for(spec);
    ordered_json j = certificate_to_json(cert, ctx);
    DetourCertificate back = certificate_from_json(j, ctx);
    CHECK(certificate_to_json(back, ctx) == j);

    auto fresh = BassSerreModel::for_spec(spec);
    CHECK(verify_certificate(*fresh, back).valid);
}

TEST_CASE("serialization is deterministic") {
    SplittingSpec spec = surface_amalgam();
    DecideOptions opt;
    opt.cert_radius_max = 1;
    Verdict v1 = decide(spec, opt);
    Verdict v2 = decide(spec, opt);
    CHECK(verdict_to_json(v1, spec).dump() == verdict_to_json(v2, spec).dump());
}

TEST_CASE("presentation and vf spec round trip") {
    ordered_json pj = ordered_json::parse(
        R"({"generators":[{"name":"r","image":[2,3,4,5,0,1]},{"name":"s","image":[3,4,5,0,1,2]}],
            "relators":["rrr","ss"],"q_size":6})");
    VfPresentation p = presentation_from_json(pj);
    CHECK(p.kernel_rank() == 2);
    ordered_json pj2 = presentation_to_json(p);
    VfPresentation p2 = presentation_from_json(pj2);
    CHECK(presentation_to_json(p2) == pj2);

    ordered_json vj;
    vj["type"] = "vf_hnn";
    vj["A"] = pj2;
    vj["c1"] = "sr";
    vj["c2"] = "rs";
    VfSplittingSpec vs = vf_spec_from_json(vj);
    CHECK(vf_spec_to_json(vf_spec_from_json(vf_spec_to_json(vs))) == vf_spec_to_json(vs));
}

TEST_CASE("tampered certificate json fails verification") {
    SplittingSpec spec = surface_amalgam();
    auto model = BassSerreModel::for_spec(spec);
    DetourCertificate cert = detour_certificate(*model, 1);
    WireContext ctx = wire_context_for(spec);
    ordered_json j = certificate_to_json(cert, ctx);
    // move an endpoint onto the center
    j["segments"][0]["from"]["at"] = "";
    DetourCertificate bad = certificate_from_json(j, ctx);
    auto fresh = BassSerreModel::for_spec(spec);
    CHECK_FALSE(verify_certificate(*fresh, bad).valid);
}
