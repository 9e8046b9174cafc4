// Acceptance suite: runs every criterion end to end and prints one pass/fail
// line per criterion. Exit code 0 iff all pass.
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <vector>

#include "csl/decider.hpp"
#include "csl/json_io.hpp"
#include "csl/splice.hpp"
#include "csl/vflift.hpp"
#include "oracles.hpp"

using namespace csl;
using Clock = std::chrono::steady_clock;

namespace {

struct Criterion {
    std::string name;
    std::function<bool(std::string&)> run;
    double limit_seconds = 0;  // 0 = no limit
};

std::vector<DetourCertificate> g_shipped;    // certificates shipped by criterion 4
std::vector<SplittingSpec> g_shipped_specs;  // parallel spec for each certificate

SplittingSpec amalgam(int ra, int rb, const std::string& wa, const std::string& wb) {
    return SplittingSpec::amalgam(ra, rb, parse_word(wa, ra), parse_word(wb, rb, 'x'));
}
SplittingSpec hnn(int r, const std::string& w1, const std::string& w2) {
    return SplittingSpec::hnn(r, parse_word(w1, r), parse_word(w2, r));
}

VfPresentation z2z3() {
    std::vector<int> r_img, s_img;
    for (int x = 0; x < 6; ++x) {
        r_img.push_back((x + 2) % 6);
        s_img.push_back((x + 3) % 6);
    }
    return VfPresentation::build({{"r", r_img}, {"s", s_img}}, {"rrr", "ss"}, 6);
}

// ---------------------------------------------------------------- criterion 1

bool criterion_primitivity(std::string& detail) {
    long checked = 0, disagreements = 0;
    for (auto [rank, maxlen] : {std::pair<int, int>{2, 8}, {3, 6}}) {
        auto primitive_set =
            oracles::primitive_classes_up_to(rank, static_cast<std::size_t>(maxlen));
        for (int len = 1; len <= maxlen; ++len) {
            for (const auto& seq :
                 oracles::cyclically_reduced_sequences(rank, static_cast<std::size_t>(len))) {
                Word w(rank, seq);
                bool expect =
                    primitive_set.count(oracles::cyclic_key(cyclic_normal_form(w).cyclic)) > 0;
                bool got = is_primitive(w).primitive;
                ++checked;
                if (expect != got) ++disagreements;
            }
        }
    }
    std::ostringstream os;
    os << checked << " words checked, " << disagreements << " disagreements";
    detail = os.str();
    return disagreements == 0 && checked > 20000;
}

// ---------------------------------------------------------------- criterion 2

bool criterion_minimality_lemmas(std::string& detail) {
    std::mt19937 rng(20240817);
    long violations = 0;
    for (int t = 0; t < 1000; ++t) {
        int rank = 2 + t % 2;
        int members = 1 + t % 3;
        Multiword mw{rank, {}};
        std::size_t total = 0;
        for (int i = 0; i < members && total < 12; ++i) {
            int len = 1 + static_cast<int>(rng() % 6);
            len = std::min<int>(len, static_cast<int>(12 - total));
            if (len == 0) break;
            Word w = oracles::random_reduced_word(rng, rank, len);
            total += w.size();
            mw.members.push_back(std::move(w));
        }
        if (mw.members.empty()) mw.members.push_back(oracles::random_reduced_word(rng, rank, 1));
        auto res = minimize_multiword(mw);
        auto g = build_whitehead_graph(res.minimal);
        auto report = analyze_graph(g);
        violations += static_cast<long>(check_minimality_lemmas(g, report).size());
    }
    std::ostringstream os;
    os << "1000 instances, " << violations << " lemma violations";
    detail = os.str();
    return violations == 0;
}

// ---------------------------------------------------------------- criterion 3

bool criterion_splice_oracle(std::string& detail) {
    std::mt19937 rng(7081);
    long mismatches = 0, detour_violations = 0, detour_checked = 0;
    for (int t = 0; t < 500; ++t) {
        int rank = 2 + t % 2;
        int members = 1 + t % 2;
        Multiword mw{rank, {}};
        for (int i = 0; i < members; ++i)
            mw.members.push_back(oracles::random_reduced_word(rng, rank, 1 + (3 * t + 2 * i) % 8));
        auto nmw = normalize_multiword(mw);

        std::vector<Word> verts{Word(rank, {})};
        std::size_t target = 1 + rng() % 6;
        while (verts.size() < target) {
            const Word& u = verts[rng() % verts.size()];
            int d = 1 + static_cast<int>(rng() % (2 * static_cast<unsigned>(rank)));
            int x = d <= rank ? d : rank - d;
            if (!u.empty() && u.letters().back() == -x) continue;
            std::vector<int> raw = u.letters();
            raw.push_back(x);
            Word nb(rank, raw);
            bool present = false;
            for (const Word& v : verts) present = present || v == nb;
            if (!present) verts.push_back(nb);
        }
        Subtree x = Subtree::of(rank, verts);

        auto a = generalized_whitehead_graph(nmw, x);
        auto b = axis_walk_oracle(nmw, x);
        if (!gwg_equal(a, b)) ++mismatches;

        // whenever the classical graph has 2-connected components, so must
        // the generalized graph over the subtree
        auto classical = analyze_graph(build_whitehead_graph(nmw));
        bool classical_2c = !classical.components.empty();
        for (const auto& c : classical.components) classical_2c = classical_2c && c.two_connected;
        if (classical_2c) {
            ++detour_checked;
            if (!analyze_gwg(a).has_two_connected_components) ++detour_violations;
        }
    }
    std::ostringstream os;
    os << "500 instances, " << mismatches << " splice/oracle mismatches, " << detour_violations
       << " connectivity violations (" << detour_checked << " qualifying)";
    detail = os.str();
    return mismatches == 0 && detour_violations == 0;
}

// ---------------------------------------------------------------- criterion 4

struct KnownVerdict {
    SplittingSpec spec;
    Verdict::Outcome expect;
    int expected_rank;  // -1 = not applicable
    bool expect_bs;
};

std::vector<KnownVerdict> known_verdicts() {
    return {
        {amalgam(2, 2, "abAB", "x"), Verdict::Outcome::Free, 3, false},
        {amalgam(2, 2, "abAB", "xyXY"), Verdict::Outcome::NotFree, -1, false},
        {hnn(2, "a", "b"), Verdict::Outcome::Free, 2, false},
        {hnn(2, "a", "aa"), Verdict::Outcome::NotFree, -1, true},
        {hnn(3, "abAB", "c"), Verdict::Outcome::Free, 3, false},
        {hnn(2, "abAB", "b"), Verdict::Outcome::NotFree, -1, false},
    };
}

bool criterion_known_verdicts(std::string& detail) {
    g_shipped.clear();
    g_shipped_specs.clear();
    int failures = 0;
    std::ostringstream os;
    for (const KnownVerdict& kv : known_verdicts()) {
        DecideOptions opt;
        opt.cert_radius_min = 1;
        opt.cert_radius_max = 4;
        Verdict v = decide(kv.spec, opt);
        bool ok = v.outcome == kv.expect;
        if (kv.expect == Verdict::Outcome::Free) {
            ok = ok && v.witness.has_value() && verify_witness(kv.spec, *v.witness);
            if (kv.expected_rank >= 0) ok = ok && v.witness->collapsed_rank == kv.expected_rank;
        } else if (kv.expect_bs) {
            ok = ok && v.baumslag_solitar.has_value() &&
                 verify_baumslag_solitar(kv.spec, *v.baumslag_solitar);
        } else {
            ok = ok && v.certificates.size() == 4;
            auto fresh = BassSerreModel::for_spec(kv.spec);
            for (const auto& cert : v.certificates) {
                ok = ok && verify_certificate(*fresh, cert).valid;
                g_shipped.push_back(cert);
                g_shipped_specs.push_back(kv.spec);
            }
        }
        if (!ok) {
            ++failures;
            os << " [failed: " << spec_to_json(kv.spec).dump() << "]";
        }
    }
    detail = "6 verdicts, radii 1..4, " + std::to_string(failures) + " failures" + os.str();
    return failures == 0;
}

// ---------------------------------------------------------------- criterion 5

bool criterion_invariance(std::string& detail) {
    std::mt19937 rng(318);
    auto base = known_verdicts();
    DecideOptions fast;
    fast.certificates = false;
    long mismatches = 0, runs = 0;
    for (int t = 0; t < 200; ++t) {
        const KnownVerdict& kv = base[static_cast<std::size_t>(t) % base.size()];
        SplittingSpec moved = kv.spec;
        if (moved.kind == SplittingSpec::Kind::Amalgam) {
            for (int k = 0; k < 5; ++k) {
                moved.word_a =
                    apply_whitehead_move(oracles::random_move(rng, moved.rank_a), moved.word_a);
                moved.word_b =
                    apply_whitehead_move(oracles::random_move(rng, moved.rank_b), moved.word_b);
            }
        } else {
            // HNN edge words live in one vertex group: the same automorphism
            // must move both
            for (int k = 0; k < 5; ++k) {
                auto mv = oracles::random_move(rng, moved.rank_a);
                moved.word_a = apply_whitehead_move(mv, moved.word_a);
                moved.word_b = apply_whitehead_move(mv, moved.word_b);
            }
        }
        ++runs;
        if (decide(moved, fast).outcome != kv.expect) ++mismatches;
    }
    detail = std::to_string(runs) + " basis changes, " + std::to_string(mismatches) +
             " verdict changes";
    return mismatches == 0;
}

// ---------------------------------------------------------------- criterion 6

bool criterion_example_group(std::string& detail) {
    std::ostringstream os;
    bool ok = true;
    VfPresentation z = z2z3();

    if (z.kernel_rank() != 2) {
        ok = false;
        os << " [kernel rank " << z.kernel_rank() << " != 2]";
    }

    auto r1 = z.rewrite(z.parse("srsrr"));
    auto r2 = z.rewrite(z.parse("srrsr"));
    if (r1.coset != 0 || r2.coset != 0) {
        ok = false;
        os << " [named generators not in kernel]";
    } else if (!oracles::generates_free_group(2, {r1.kernel_word, r2.kernel_word})) {
        ok = false;
        os << " [named generators do not generate the kernel]";
    }

    // conjugation action on the abelianization
    long m[2][2];
    for (int col = 0; col < 2; ++col) {
        GWord conj = z.concat(z.concat(z.parse("sr"), z.expand(Word(2, {col + 1}))),
                              z.inverse(z.parse("sr")));
        auto rw = z.rewrite(conj);
        long counts[2] = {0, 0};
        for (int l : rw.kernel_word.letters()) counts[std::abs(l) - 1] += l > 0 ? 1 : -1;
        m[0][col] = counts[0];
        m[1][col] = counts[1];
    }
    long m2[2][2], m3[2][2], m6[2][2];
    auto mul = [](long a[2][2], long b[2][2], long out[2][2]) {
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
    };
    mul(m, m, m2);
    mul(m2, m, m3);
    mul(m3, m3, m6);
    bool m3_ok = m3[0][0] == -1 && m3[1][1] == -1 && m3[0][1] == 0 && m3[1][0] == 0;
    bool m6_ok = m6[0][0] == 1 && m6[1][1] == 1 && m6[0][1] == 0 && m6[1][0] == 0;
    if (!m3_ok || !m6_ok) {
        ok = false;
        os << " [conjugation action is not of the expected order]";
    }

    // ten sampled infinite order elements: none generates a factor
    std::vector<std::string> sampled = {"sr",  "rs",    "srsr",  "rsrs",   "srr",
                                        "rrs", "srsrr", "srrsr", "srsrsr", "rsr"};
    int factor_count = 0, tested = 0;
    for (const std::string& s : sampled) {
        GWord h = z.parse(s);
        if (!z.infinite_order(h)) continue;
        ++tested;
        if (is_factor(z, h).factor) {
            ++factor_count;
            os << " [" << s << " claimed to generate a factor]";
        }
    }
    if (tested < 10 || factor_count != 0) ok = false;

    // splittings over the group are never virtually free
    VfDecideOptions opt;
    opt.cert_radius_min = 1;
    opt.cert_radius_max = 2;
    VfSplittingSpec amal;
    amal.kind = VfSplittingSpec::Kind::Amalgam;
    amal.a = z2z3();
    amal.b = z2z3();
    amal.c_a = z.parse("sr");
    amal.c_b = z.parse("sr");
    VfVerdict va = decide_vf(amal, opt);
    if (va.outcome != VfVerdict::Outcome::NotVirtuallyFree) {
        ok = false;
        os << " [amalgam of two copies not rejected]";
    } else if (va.certificates.size() != 2) {
        ok = false;
        os << " [expected 2 coarse-model certificates, got " << va.certificates.size() << "]";
    } else {
        auto fresh = BassSerreModel::for_vf(vf_ball_config(amal));
        for (const auto& cert : va.certificates) {
            if (!verify_certificate(*fresh, cert).valid) {
                ok = false;
                os << " [vf amalgam certificate failed]";
            }
        }
    }

    VfSplittingSpec hnn_spec;
    hnn_spec.kind = VfSplittingSpec::Kind::Hnn;
    hnn_spec.a = z2z3();
    hnn_spec.c_a = z.parse("sr");
    hnn_spec.c_b = z.parse("rs");
    if (decide_vf(hnn_spec, opt).outcome != VfVerdict::Outcome::NotVirtuallyFree) {
        ok = false;
        os << " [stable-letter extension not rejected]";
    }

    detail = "rank, generators, action, " + std::to_string(tested) +
             " factor probes, both splittings" + os.str();
    return ok;
}

// ---------------------------------------------------------------- criterion 7

bool criterion_certificate_soundness(std::string& detail) {
    if (g_shipped.empty()) {
        detail = "no shipped certificates recorded (criterion 4 must run first)";
        return false;
    }
    long valid = 0;
    for (std::size_t k = 0; k < g_shipped.size(); ++k) {
        auto fresh = BassSerreModel::for_spec(g_shipped_specs[k]);
        if (verify_certificate(*fresh, g_shipped[k]).valid) ++valid;
    }

    std::mt19937 rng(4242);
    long rejected = 0;
    const long tampers = 100;
    for (long t = 0; t < tampers; ++t) {
        std::size_t pick = rng() % g_shipped.size();
        DetourCertificate cert = g_shipped[pick];
        auto model = BassSerreModel::for_spec(g_shipped_specs[pick]);
        switch (rng() % 4) {
            case 0:  // path no longer starts at gamma(-t)
                cert.segments.front().from = model->complex().point_ref(model->complex().center());
                break;
            case 1: {  // splice the center into the middle of the path
                std::size_t at = 1 + rng() % (cert.segments.size() - 1);
                PointRef center_ref = model->complex().point_ref(model->complex().center());
                cert.segments[at - 1].to = center_ref;
                cert.segments[at].from = center_ref;
                break;
            }
            case 2:  // truncate: the path no longer reaches gamma(t)
                cert.segments.pop_back();
                break;
            case 3: {  // retarget a vertical segment onto a different strip
                for (auto& seg : cert.segments) {
                    if (seg.kind != CertSegment::Kind::Vertical) continue;
                    seg.strip.copy += 1;  // out of range or a sheared sibling
                    break;
                }
                break;
            }
        }
        if (!verify_certificate(*model, cert).valid) ++rejected;
    }
    std::ostringstream os;
    os << valid << "/" << g_shipped.size() << " shipped certificates verified, " << rejected << "/"
       << tampers << " tampered certificates rejected";
    detail = os.str();
    return valid == static_cast<long>(g_shipped.size()) && rejected == tampers;
}

}  // namespace

int main() {
    std::vector<Criterion> criteria = {
        {"1 primitivity oracle agreement", criterion_primitivity, 300},
        {"2 minimality lemmas on random corpus", criterion_minimality_lemmas, 0},
        {"3 splice/oracle equivalence", criterion_splice_oracle, 120},
        {"4 known verdicts with witnesses and certificates", criterion_known_verdicts, 600},
        {"5 verdict invariance under basis changes", criterion_invariance, 0},
        {"6 torsion example reproduction", criterion_example_group, 120},
        {"7 certificate soundness", criterion_certificate_soundness, 0},
    };

    int failures = 0;
    for (auto& c : criteria) {
        auto start = Clock::now();
        std::string detail;
        bool ok = false;
        try {
            ok = c.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        double seconds = std::chrono::duration<double>(Clock::now() - start).count();
        if (c.limit_seconds > 0 && seconds > c.limit_seconds) {
            ok = false;
            detail += " [time limit exceeded]";
        }
        std::printf("%s criterion %s (%.1fs): %s\n", ok ? "PASS" : "FAIL", c.name.c_str(), seconds,
                    detail.c_str());
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
