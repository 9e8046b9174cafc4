#include "csl/decider.hpp"

#include <algorithm>
#include <numeric>

namespace csl {

namespace {

struct SideAnalysis {
    CyclicWord cyclic;
    RootDecomposition root;
    bool divisible = false;
};

SideAnalysis analyze_side(const Word& w) {
    SideAnalysis s;
    if (w.empty()) throw std::invalid_argument("edge word is empty");
    s.cyclic = cyclic_normal_form(w).cyclic;
    s.root = root_decomposition(s.cyclic);
    s.divisible = s.root.exponent > 1;
    return s;
}

void attach_certificates(Verdict& v, const SplittingSpec& spec, const DecideOptions& opt) {
    if (!opt.certificates) return;
    auto model = BassSerreModel::for_spec(spec, opt.max_vertices);
    for (long i = opt.cert_radius_min; i <= opt.cert_radius_max; ++i)
        v.certificates.push_back(detour_certificate(*model, i));
}

// prefix p of x with x = p * rot * p^-1 where rot is the canonical rotation
Word rotation_prefix(const Word& x, const CyclicWord& target) {
    const std::size_t n = x.size();
    for (std::size_t k = 0; k < n; ++k) {
        bool match = true;
        for (std::size_t j = 0; j < n && match; ++j)
            match = x.letters()[(k + j) % n] == target.letters()[j];
        if (match) {
            std::vector<int> p(x.letters().begin(), x.letters().begin() + static_cast<long>(k));
            return Word(x.rank(), p);
        }
    }
    throw std::logic_error("target is not a rotation of the word");
}

}  // namespace

Verdict decide_amalgam(const SplittingSpec& spec, const DecideOptions& opt) {
    if (spec.kind != SplittingSpec::Kind::Amalgam)
        throw std::invalid_argument("spec is not an amalgam");
    SideAnalysis a = analyze_side(spec.word_a);
    SideAnalysis b = analyze_side(spec.word_b);

    Verdict v;
    v.minimal_lengths = {-1, -1};
    if (a.divisible && b.divisible) {
        // a proper power is never basic; skip Whitehead minimization entirely
        v.outcome = Verdict::Outcome::NotFree;
        attach_certificates(v, spec, opt);
        return v;
    }

    const Word* words[2] = {&spec.word_a, &spec.word_b};
    const SideAnalysis* sides[2] = {&a, &b};
    const int ranks[2] = {spec.rank_a, spec.rank_b};
    std::optional<MinimizationResult> winning;
    int winning_side = -1;
    for (int i = 0; i < 2 && !winning; ++i) {
        if (sides[i]->divisible) continue;
        MinimizationResult m = minimize_multiword(Multiword{ranks[i], {*words[i]}});
        v.minimal_lengths[static_cast<std::size_t>(i)] =
            static_cast<long>(m.minimal.total_length());
        if (m.minimal.total_length() == 1) {
            winning = std::move(m);
            winning_side = i;
        }
    }
    if (winning) {
        v.outcome = Verdict::Outcome::Free;
        FreeWitness w;
        w.side = winning_side;
        w.moves = winning->moves;
        w.collapsed_rank = spec.rank_a + spec.rank_b - 1;
        v.witness = std::move(w);
        return v;
    }
    v.outcome = Verdict::Outcome::NotFree;
    attach_certificates(v, spec, opt);
    return v;
}

Verdict decide_hnn(const SplittingSpec& spec, const DecideOptions& opt) {
    if (spec.kind != SplittingSpec::Kind::Hnn) throw std::invalid_argument("spec is not an HNN");
    SideAnalysis s1 = analyze_side(spec.word_a);
    SideAnalysis s2 = analyze_side(spec.word_b);
    const int rank = spec.rank_a;

    Verdict v;
    v.minimal_lengths = {-1, -1};

    CyclicRelation rel = cyclic_compare(s1.root.root, s2.root.root);
    if (rel != CyclicRelation::Distinct) {
        // the roots generate commensurable conjugates: a Baumslag-Solitar
        // subgroup sits inside, so the group is not even hyperbolic
        v.outcome = Verdict::Outcome::NotFree;
        Word r1 = s1.root.root.as_word();
        Word c1 = cyclic_normal_form(spec.word_a).conjugator;
        Word c2 = cyclic_normal_form(spec.word_b).conjugator;
        // roots are indivisible, so the relation is equality or inversion
        int sgn = rel == CyclicRelation::InverseClass ? -1 : 1;
        Word base = sgn == 1 ? r1 : r1.inverse();
        Word pfx = rotation_prefix(base, s2.root.root);
        Word z = pfx.inverse();
        long e1 = s1.root.exponent, e2 = s2.root.exponent;
        long g = std::gcd(e1, e2);
        BaumslagSolitarCertificate bs;
        bs.p = e2 / g;
        bs.q = sgn * (e1 / g);
        bs.conjugator = multiply(multiply(c2, z), c1.inverse());
        if (!verify_baumslag_solitar(spec, bs))
            throw std::logic_error("constructed Baumslag-Solitar certificate failed verification");
        v.baumslag_solitar = std::move(bs);
        return v;
    }

    // minimize the pair of root classes and search the minimal level set
    Multiword pair{rank, {spec.word_a, spec.word_b}};
    MinimizationResult m = minimize_multiword(pair);
    if (m.minimal.roots.size() != 2)
        throw std::logic_error("distinct root classes collapsed during minimization");
    std::size_t rid[2] = {m.minimal.member_classes[0].root_index,
                          m.minimal.member_classes[1].root_index};
    v.minimal_lengths = {static_cast<long>(m.minimal.roots[rid[0]].size()),
                         static_cast<long>(m.minimal.roots[rid[1]].size())};
    const long exps[2] = {s1.root.exponent, s2.root.exponent};

    LevelSetResult ls = level_set(m.minimal, opt.level_budget);
    v.level_set_size = ls.positions.size();
    v.level_set_capped = ls.capped;

    for (std::size_t pos = 0; pos < ls.positions.size(); ++pos) {
        const auto& roots = ls.positions[pos].roots;
        for (int i = 0; i < 2; ++i) {
            int j = 1 - i;
            if (exps[i] != 1) continue;
            const CyclicWord& vi = roots[rid[static_cast<std::size_t>(i)]];
            const CyclicWord& vj = roots[rid[static_cast<std::size_t>(j)]];
            if (vi.size() != 1) continue;
            int x = vi.letters()[0];
            bool disjoint = true;
            for (int l : vj.letters())
                if (l == x || l == -x) disjoint = false;
            if (!disjoint) continue;

            // found a splitting position: replay the move chain
            FreeWitness w;
            w.side = i;
            w.moves = m.moves;
            std::vector<WhiteheadMove> chain;
            for (std::size_t at = pos; ls.parent[at] != static_cast<std::size_t>(-1);
                 at = ls.parent[at])
                chain.push_back(*ls.move_from_parent[at]);
            std::reverse(chain.begin(), chain.end());
            w.moves.insert(w.moves.end(), chain.begin(), chain.end());
            for (const Word* ew : {&spec.word_a, &spec.word_b}) {
                Word img = *ew;
                for (const auto& mv : w.moves) img = apply_whitehead_move(mv, img);
                w.conjugators.push_back(cyclic_normal_form(img).conjugator);
            }
            w.collapsed_rank = rank;
            v.outcome = Verdict::Outcome::Free;
            v.witness = std::move(w);
            return v;
        }
    }

    v.outcome = Verdict::Outcome::NotFree;
    attach_certificates(v, spec, opt);
    return v;
}

Verdict decide(const SplittingSpec& spec, const DecideOptions& opt) {
    return spec.kind == SplittingSpec::Kind::Amalgam ? decide_amalgam(spec, opt)
                                                     : decide_hnn(spec, opt);
}

bool verify_witness(const SplittingSpec& spec, const FreeWitness& witness) {
    try {
        if (spec.kind == SplittingSpec::Kind::Amalgam) {
            if (witness.side != 0 && witness.side != 1) return false;
            const Word& w = witness.side == 0 ? spec.word_a : spec.word_b;
            if (root_decomposition(cyclic_normal_form(w).cyclic).exponent != 1) return false;
            Word img = w;
            for (const auto& mv : witness.moves) img = apply_whitehead_move(mv, img);
            if (cyclic_normal_form(img).cyclic.size() != 1) return false;
            return witness.collapsed_rank == spec.rank_a + spec.rank_b - 1;
        }
        if (witness.side != 0 && witness.side != 1) return false;
        if (witness.conjugators.size() != 2) return false;
        const Word* words[2] = {&spec.word_a, &spec.word_b};
        int i = witness.side, j = 1 - i;
        if (root_decomposition(cyclic_normal_form(*words[i]).cyclic).exponent != 1) return false;
        Word img[2];
        for (int k = 0; k < 2; ++k) {
            img[k] = *words[k];
            for (const auto& mv : witness.moves) img[k] = apply_whitehead_move(mv, img[k]);
            CyclicNormalForm cnf = cyclic_normal_form(img[k]);
            // the stored conjugator must realize the image as a conjugate
            if (multiply(multiply(witness.conjugators[static_cast<std::size_t>(k)],
                                  cnf.cyclic.as_word()),
                         witness.conjugators[static_cast<std::size_t>(k)].inverse()) != img[k])
                return false;
        }
        CyclicWord vi = cyclic_normal_form(img[i]).cyclic;
        if (vi.size() != 1) return false;
        int x = vi.letters()[0];
        for (int l : cyclic_normal_form(img[j]).cyclic.letters())
            if (l == x || l == -x) return false;
        return witness.collapsed_rank == spec.rank_a;
    } catch (const std::exception&) {
        return false;
    }
}

bool verify_baumslag_solitar(const SplittingSpec& spec, const BaumslagSolitarCertificate& cert) {
    try {
        if (spec.kind != SplittingSpec::Kind::Hnn) return false;
        if (cert.p == 0 || cert.q == 0) return false;
        Word lhs = multiply(multiply(cert.conjugator, power(spec.word_a, static_cast<int>(cert.p))),
                            cert.conjugator.inverse());
        return lhs == power(spec.word_b, static_cast<int>(cert.q));
    } catch (const std::exception&) {
        return false;
    }
}

}  // namespace csl
