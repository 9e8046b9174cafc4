#include "csl/json_io.hpp"

#include <algorithm>

namespace csl {

namespace {

std::string dir_string(int direction, char alphabet) {
    return render_word(Word(std::abs(direction), {direction}), alphabet);
}

int dir_from_string(const std::string& s, int rank, char alphabet) {
    Word w = parse_word(s, rank, alphabet);
    if (w.size() != 1) throw std::invalid_argument("expected a single direction letter");
    return w.letters()[0];
}

int side_of_space_json(const ordered_json& steps, const WireContext& ctx) {
    int side = ctx.base_side;
    for (const auto& s : steps) {
        int family = s.at("family").get<int>();
        if (family < 0 ||
            family >= static_cast<int>(ctx.far_side[static_cast<std::size_t>(side)].size()))
            throw std::invalid_argument("space step family out of range");
        side = ctx.far_side[static_cast<std::size_t>(side)][static_cast<std::size_t>(family)];
    }
    return side;
}

int side_of_space_ref(const SpaceRef& ref, const WireContext& ctx) {
    int side = ctx.base_side;
    for (const SpaceStep& st : ref.steps)
        side = ctx.far_side[static_cast<std::size_t>(side)][static_cast<std::size_t>(st.family)];
    return side;
}

ordered_json space_to_json(const SpaceRef& ref, const WireContext& ctx) {
    ordered_json steps = ordered_json::array();
    int side = ctx.base_side;
    for (const SpaceStep& st : ref.steps) {
        ordered_json s;
        s["family"] = st.family;
        s["line"] = render_word(st.line, ctx.alphabets[static_cast<std::size_t>(side)]);
        s["copy"] = st.copy;
        steps.push_back(std::move(s));
        side = ctx.far_side[static_cast<std::size_t>(side)][static_cast<std::size_t>(st.family)];
    }
    return steps;
}

SpaceRef space_from_json(const ordered_json& steps, const WireContext& ctx) {
    SpaceRef ref;
    int side = ctx.base_side;
    for (const auto& s : steps) {
        SpaceStep st;
        st.family = s.at("family").get<int>();
        if (st.family < 0 ||
            st.family >= static_cast<int>(ctx.far_side[static_cast<std::size_t>(side)].size()))
            throw std::invalid_argument("space step family out of range");
        st.line = parse_word(s.at("line").get<std::string>(),
                             ctx.ranks[static_cast<std::size_t>(side)],
                             ctx.alphabets[static_cast<std::size_t>(side)]);
        st.copy = s.at("copy").get<int>();
        ref.steps.push_back(std::move(st));
        side = ctx.far_side[static_cast<std::size_t>(side)][static_cast<std::size_t>(st.family)];
    }
    return ref;
}

ordered_json point_to_json(const PointRef& p, const WireContext& ctx) {
    ordered_json j;
    j["space"] = space_to_json(p.space, ctx);
    int side = side_of_space_ref(p.space, ctx);
    char alpha = ctx.alphabets[static_cast<std::size_t>(side)];
    j["at"] = render_word(p.at, alpha);
    if (p.off != 0) {
        j["edge"] = dir_string(p.gen, alpha);
        j["off"] = p.off;
    }
    return j;
}

PointRef point_from_json(const ordered_json& j, const WireContext& ctx) {
    PointRef p;
    p.space = space_from_json(j.at("space"), ctx);
    int side = side_of_space_ref(p.space, ctx);
    int rank = ctx.ranks[static_cast<std::size_t>(side)];
    char alpha = ctx.alphabets[static_cast<std::size_t>(side)];
    p.at = parse_word(j.at("at").get<std::string>(), rank, alpha);
    if (j.contains("off")) {
        p.off = j.at("off").get<int>();
        p.gen = dir_from_string(j.at("edge").get<std::string>(), rank, alpha);
    }
    return p;
}

ordered_json strip_to_json(const StripRef& s, const WireContext& ctx) {
    ordered_json out;
    out["space"] = space_to_json(s.space, ctx);
    int side = side_of_space_ref(s.space, ctx);
    out["family"] = s.family;
    out["line"] = render_word(s.line, ctx.alphabets[static_cast<std::size_t>(side)]);
    out["copy"] = s.copy;
    return out;
}

StripRef strip_from_json(const ordered_json& j, const WireContext& ctx) {
    StripRef s;
    s.space = space_from_json(j.at("space"), ctx);
    int side = side_of_space_json(j.at("space"), ctx);
    s.family = j.at("family").get<int>();
    s.line = parse_word(j.at("line").get<std::string>(), ctx.ranks[static_cast<std::size_t>(side)],
                        ctx.alphabets[static_cast<std::size_t>(side)]);
    s.copy = j.at("copy").get<int>();
    return s;
}

}  // namespace

WireContext wire_context_for(const SplittingSpec& spec) {
    WireContext ctx;
    if (spec.kind == SplittingSpec::Kind::Amalgam) {
        ctx.ranks = {spec.rank_a, spec.rank_b};
        ctx.alphabets = {spec.alphabet_a, spec.alphabet_b};
        ctx.far_side = {{1}, {0}};
    } else {
        ctx.ranks = {spec.rank_a};
        ctx.alphabets = {spec.alphabet_a};
        ctx.far_side = {{0, 0}};
    }
    return ctx;
}

WireContext wire_context_for(const VfBallConfig& cfg) {
    WireContext ctx;
    if (cfg.kind == VfBallConfig::Kind::Amalgam) {
        ctx.ranks = {cfg.rank_a, cfg.rank_b};
        ctx.alphabets = {'a', 'a'};
        ctx.far_side = {std::vector<int>(cfg.lift_a.roots.size(), 1),
                        std::vector<int>(cfg.lift_b.roots.size(), 0)};
    } else {
        ctx.ranks = {cfg.rank_a};
        ctx.alphabets = {'a'};
        ctx.far_side = {std::vector<int>(cfg.lift_a.roots.size() + cfg.lift_b.roots.size(), 0)};
    }
    return ctx;
}

ordered_json spec_to_json(const SplittingSpec& spec) {
    ordered_json j;
    j["schema"] = kSchemaTag;
    if (spec.kind == SplittingSpec::Kind::Amalgam) {
        j["type"] = "amalgam";
        j["rankA"] = spec.rank_a;
        j["rankB"] = spec.rank_b;
        j["wA"] = render_word(spec.word_a, spec.alphabet_a);
        j["wB"] = render_word(spec.word_b, spec.alphabet_b);
        if (spec.alphabet_a != 'a') j["alphabetA"] = std::string(1, spec.alphabet_a);
        if (spec.alphabet_b != 'x') j["alphabetB"] = std::string(1, spec.alphabet_b);
    } else {
        j["type"] = "hnn";
        j["rank"] = spec.rank_a;
        j["w1"] = render_word(spec.word_a, spec.alphabet_a);
        j["w2"] = render_word(spec.word_b, spec.alphabet_b);
    }
    return j;
}

SplittingSpec spec_from_json(const ordered_json& j) {
    std::string type = j.at("type").get<std::string>();
    if (type == "amalgam") {
        int ra = j.at("rankA").get<int>();
        int rb = j.at("rankB").get<int>();
        char alpha_a = j.contains("alphabetA") ? j["alphabetA"].get<std::string>().at(0) : 'a';
        char alpha_b = j.contains("alphabetB") ? j["alphabetB"].get<std::string>().at(0) : 'x';
        SplittingSpec s = SplittingSpec::amalgam(
            ra, rb, parse_word(j.at("wA").get<std::string>(), ra, alpha_a),
            parse_word(j.at("wB").get<std::string>(), rb, alpha_b));
        s.alphabet_a = alpha_a;
        s.alphabet_b = alpha_b;
        return s;
    }
    if (type == "hnn") {
        int r = j.at("rank").get<int>();
        return SplittingSpec::hnn(r, parse_word(j.at("w1").get<std::string>(), r),
                                  parse_word(j.at("w2").get<std::string>(), r));
    }
    throw std::invalid_argument("unknown splitting type: " + type);
}

ordered_json certificate_to_json(const DetourCertificate& cert, const WireContext& ctx) {
    ordered_json j;
    j["schema"] = kSchemaTag;
    j["radius"] = cert.radius;
    j["tMinus"] = -cert.t_arc;
    j["tPlus"] = cert.t_arc;
    ordered_json segs = ordered_json::array();
    for (const CertSegment& s : cert.segments) {
        ordered_json e;
        if (s.kind == CertSegment::Kind::Horizontal) {
            e["kind"] = "horizontal";
            e["space"] = space_to_json(s.from.space, ctx);
        } else {
            e["kind"] = "vertical";
            e["strip"] = strip_to_json(s.strip, ctx);
        }
        e["from"] = point_to_json(s.from, ctx);
        e["to"] = point_to_json(s.to, ctx);
        segs.push_back(std::move(e));
    }
    j["segments"] = std::move(segs);
    ordered_json stages = ordered_json::array();
    for (const StageLogEntry& st : cert.stages) {
        ordered_json e;
        e["round"] = st.round;
        e["action"] = st.action;
        e["minBefore"] = st.min_dist_before;
        e["minAfter"] = st.min_dist_after;
        stages.push_back(std::move(e));
    }
    j["stages"] = std::move(stages);
    return j;
}

DetourCertificate certificate_from_json(const ordered_json& j, const WireContext& ctx) {
    DetourCertificate cert;
    cert.radius = j.at("radius").get<long>();
    cert.t_arc = j.at("tPlus").get<long>();
    if (j.at("tMinus").get<long>() != -cert.t_arc)
        throw std::invalid_argument("certificate endpoints are not symmetric");
    for (const auto& e : j.at("segments")) {
        CertSegment s;
        std::string kind = e.at("kind").get<std::string>();
        if (kind == "horizontal") {
            s.kind = CertSegment::Kind::Horizontal;
        } else if (kind == "vertical") {
            s.kind = CertSegment::Kind::Vertical;
            s.strip = strip_from_json(e.at("strip"), ctx);
        } else {
            throw std::invalid_argument("unknown segment kind");
        }
        s.from = point_from_json(e.at("from"), ctx);
        s.to = point_from_json(e.at("to"), ctx);
        cert.segments.push_back(std::move(s));
    }
    if (j.contains("stages")) {
        for (const auto& e : j.at("stages")) {
            StageLogEntry st;
            st.round = e.at("round").get<int>();
            st.action = e.at("action").get<std::string>();
            st.min_dist_before = e.at("minBefore").get<long>();
            st.min_dist_after = e.at("minAfter").get<long>();
            cert.stages.push_back(std::move(st));
        }
    }
    return cert;
}

ordered_json moves_to_json(const std::vector<WhiteheadMove>& moves, int rank, char alphabet) {
    (void)rank;
    ordered_json arr = ordered_json::array();
    for (const WhiteheadMove& m : moves) {
        ordered_json j;
        if (m.kind == WhiteheadMove::Kind::TypeI) {
            j["kind"] = "type1";
            ordered_json imgs = ordered_json::array();
            for (int img : m.images) imgs.push_back(dir_string(img, alphabet));
            j["images"] = std::move(imgs);
        } else {
            j["kind"] = "type2";
            j["multiplier"] = dir_string(m.multiplier, alphabet);
            ordered_json set = ordered_json::array();
            for (int d : m.set) set.push_back(dir_string(d, alphabet));
            j["set"] = std::move(set);
        }
        arr.push_back(std::move(j));
    }
    return arr;
}

std::vector<WhiteheadMove> moves_from_json(const ordered_json& j, int rank, char alphabet) {
    std::vector<WhiteheadMove> moves;
    for (const auto& e : j) {
        WhiteheadMove m;
        std::string kind = e.at("kind").get<std::string>();
        if (kind == "type1") {
            m.kind = WhiteheadMove::Kind::TypeI;
            for (const auto& s : e.at("images"))
                m.images.push_back(dir_from_string(s.get<std::string>(), rank, alphabet));
        } else if (kind == "type2") {
            m.kind = WhiteheadMove::Kind::TypeII;
            m.multiplier = dir_from_string(e.at("multiplier").get<std::string>(), rank, alphabet);
            for (const auto& s : e.at("set"))
                m.set.push_back(dir_from_string(s.get<std::string>(), rank, alphabet));
            std::sort(m.set.begin(), m.set.end());
        } else {
            throw std::invalid_argument("unknown move kind");
        }
        moves.push_back(std::move(m));
    }
    return moves;
}

ordered_json witness_to_json(const FreeWitness& w, const SplittingSpec& spec) {
    ordered_json j;
    int rank = (w.side == 0 || spec.kind == SplittingSpec::Kind::Hnn) ? spec.rank_a : spec.rank_b;
    char alpha = spec.kind == SplittingSpec::Kind::Hnn
                     ? spec.alphabet_a
                     : (w.side == 0 ? spec.alphabet_a : spec.alphabet_b);
    if (spec.kind == SplittingSpec::Kind::Amalgam)
        j["side"] = w.side == 0 ? "A" : "B";
    else
        j["side"] = w.side + 1;
    j["moves"] = moves_to_json(w.moves, rank, alpha);
    if (spec.kind == SplittingSpec::Kind::Hnn) {
        ordered_json conj = ordered_json::array();
        for (const Word& c : w.conjugators) conj.push_back(render_word(c, alpha));
        j["conjugators"] = std::move(conj);
    }
    j["collapsedRank"] = w.collapsed_rank;
    return j;
}

FreeWitness witness_from_json(const ordered_json& j, const SplittingSpec& spec) {
    FreeWitness w;
    if (spec.kind == SplittingSpec::Kind::Amalgam) {
        std::string side = j.at("side").get<std::string>();
        if (side != "A" && side != "B") throw std::invalid_argument("bad witness side");
        w.side = side == "A" ? 0 : 1;
    } else {
        w.side = j.at("side").get<int>() - 1;
        if (w.side != 0 && w.side != 1) throw std::invalid_argument("bad witness side");
    }
    int rank = (w.side == 0 || spec.kind == SplittingSpec::Kind::Hnn) ? spec.rank_a : spec.rank_b;
    char alpha = spec.kind == SplittingSpec::Kind::Hnn
                     ? spec.alphabet_a
                     : (w.side == 0 ? spec.alphabet_a : spec.alphabet_b);
    w.moves = moves_from_json(j.at("moves"), rank, alpha);
    if (j.contains("conjugators")) {
        for (const auto& c : j.at("conjugators"))
            w.conjugators.push_back(parse_word(c.get<std::string>(), rank, alpha));
    }
    w.collapsed_rank = j.at("collapsedRank").get<int>();
    return w;
}

ordered_json verdict_to_json(const Verdict& v, const SplittingSpec& spec) {
    ordered_json j;
    j["schema"] = kSchemaTag;
    j["outcome"] = v.outcome == Verdict::Outcome::Free ? "free" : "not_free";
    if (v.witness) j["witness"] = witness_to_json(*v.witness, spec);
    if (v.baumslag_solitar) {
        ordered_json c;
        c["kind"] = "baumslag_solitar";
        c["conjugator"] = render_word(v.baumslag_solitar->conjugator, spec.alphabet_a);
        c["exponents"] = {v.baumslag_solitar->p, v.baumslag_solitar->q};
        j["certificate"] = std::move(c);
    } else if (!v.certificates.empty()) {
        WireContext ctx = wire_context_for(spec);
        ordered_json c;
        c["kind"] = "detour";
        ordered_json radii = ordered_json::array();
        ordered_json certs = ordered_json::array();
        for (const DetourCertificate& cert : v.certificates) {
            radii.push_back(cert.radius);
            certs.push_back(certificate_to_json(cert, ctx));
        }
        c["radii"] = std::move(radii);
        c["certificates"] = std::move(certs);
        j["certificate"] = std::move(c);
    }
    ordered_json diag;
    diag["minimalLengths"] = v.minimal_lengths;
    diag["levelSetSize"] = v.level_set_size;
    diag["capped"] = v.level_set_capped;
    j["diagnostics"] = std::move(diag);
    return j;
}

ordered_json presentation_to_json(const VfPresentation& p) {
    ordered_json j;
    j["schema"] = kSchemaTag;
    ordered_json gens = ordered_json::array();
    for (const VfGenerator& g : p.generators()) {
        ordered_json e;
        e["name"] = g.name;
        e["image"] = g.image;
        gens.push_back(std::move(e));
    }
    j["generators"] = std::move(gens);
    ordered_json rels = ordered_json::array();
    for (std::size_t i = 0; i < p.generator_count(); ++i) {
        int m = p.order_of_generator(i);
        if (m != 0)
            rels.push_back(std::string(static_cast<std::size_t>(m), p.generators()[i].name[0]));
    }
    j["relators"] = std::move(rels);
    j["q_size"] = p.degree();
    return j;
}

VfPresentation presentation_from_json(const ordered_json& j) {
    std::vector<VfGenerator> gens;
    for (const auto& e : j.at("generators")) {
        VfGenerator g;
        g.name = e.at("name").get<std::string>();
        g.image = e.at("image").get<std::vector<int>>();
        gens.push_back(std::move(g));
    }
    std::vector<std::string> rels;
    for (const auto& r : j.at("relators")) rels.push_back(r.get<std::string>());
    return VfPresentation::build(std::move(gens), rels, j.at("q_size").get<int>());
}

ordered_json vf_spec_to_json(const VfSplittingSpec& spec) {
    ordered_json j;
    j["schema"] = kSchemaTag;
    if (spec.kind == VfSplittingSpec::Kind::Amalgam) {
        j["type"] = "vf_amalgam";
        j["A"] = presentation_to_json(spec.a);
        j["B"] = presentation_to_json(*spec.b);
        j["cA"] = spec.a.render(spec.c_a);
        j["cB"] = spec.b->render(spec.c_b);
    } else {
        j["type"] = "vf_hnn";
        j["A"] = presentation_to_json(spec.a);
        j["c1"] = spec.a.render(spec.c_a);
        j["c2"] = spec.a.render(spec.c_b);
    }
    return j;
}

VfSplittingSpec vf_spec_from_json(const ordered_json& j) {
    VfSplittingSpec spec;
    std::string type = j.at("type").get<std::string>();
    if (type == "vf_amalgam") {
        spec.kind = VfSplittingSpec::Kind::Amalgam;
        spec.a = presentation_from_json(j.at("A"));
        spec.b = presentation_from_json(j.at("B"));
        spec.c_a = spec.a.parse(j.at("cA").get<std::string>());
        spec.c_b = spec.b->parse(j.at("cB").get<std::string>());
    } else if (type == "vf_hnn") {
        spec.kind = VfSplittingSpec::Kind::Hnn;
        spec.a = presentation_from_json(j.at("A"));
        spec.c_a = spec.a.parse(j.at("c1").get<std::string>());
        spec.c_b = spec.a.parse(j.at("c2").get<std::string>());
    } else {
        throw std::invalid_argument("unknown vf splitting type: " + type);
    }
    return spec;
}

ordered_json vf_verdict_to_json(const VfVerdict& v, const VfSplittingSpec& spec) {
    ordered_json j;
    j["schema"] = kSchemaTag;
    j["outcome"] = v.outcome == VfVerdict::Outcome::VirtuallyFree ? "virtually_free"
                                                                  : "not_virtually_free";
    if (v.witness_side) {
        ordered_json w;
        w["side"] = *v.witness_side == 0 ? "A" : "B";
        int rank = *v.witness_side == 0 ? spec.a.kernel_rank()
                                        : (spec.b ? spec.b->kernel_rank() : spec.a.kernel_rank());
        w["moves"] = moves_to_json(v.witness_moves, rank, 'a');
        j["witness"] = std::move(w);
    }
    if (v.baumslag_solitar_like) {
        ordered_json c;
        c["kind"] = "baumslag_solitar";
        j["certificate"] = std::move(c);
    } else if (!v.certificates.empty()) {
        WireContext ctx = wire_context_for(vf_ball_config(spec));
        ordered_json c;
        c["kind"] = "detour";
        ordered_json radii = ordered_json::array();
        ordered_json certs = ordered_json::array();
        for (const DetourCertificate& cert : v.certificates) {
            radii.push_back(cert.radius);
            certs.push_back(certificate_to_json(cert, ctx));
        }
        c["radii"] = std::move(radii);
        c["certificates"] = std::move(certs);
        j["certificate"] = std::move(c);
    }
    ordered_json diag;
    diag["factorA"] = v.factor_a.factor;
    diag["factorB"] = v.factor_b.factor;
    diag["levelSetSize"] = v.level_set_size;
    diag["capped"] = v.level_set_capped;
    j["diagnostics"] = std::move(diag);
    return j;
}

ordered_json whitehead_graph_to_json(const WhiteheadGraph& g, const GraphReport& report,
                                     char alphabet) {
    ordered_json j;
    j["schema"] = kSchemaTag;
    j["rank"] = g.rank;
    ordered_json verts = ordered_json::array();
    for (int d = 1; d <= g.rank; ++d) {
        verts.push_back(dir_string(d, alphabet));
        verts.push_back(dir_string(-d, alphabet));
    }
    j["vertices"] = std::move(verts);
    ordered_json edges = ordered_json::array();
    for (const WhiteheadEdge& e : g.edges) {
        ordered_json ej;
        ej["from"] = dir_string(e.from, alphabet);
        ej["to"] = dir_string(e.to, alphabet);
        ej["root"] = e.root_index;
        ej["position"] = e.position;
        edges.push_back(std::move(ej));
    }
    j["edges"] = std::move(edges);
    ordered_json comps = ordered_json::array();
    for (const GraphComponent& c : report.components) {
        ordered_json cj;
        ordered_json vs = ordered_json::array();
        for (int v : c.vertices) vs.push_back(dir_string(v, alphabet));
        cj["vertices"] = std::move(vs);
        cj["isolatedEdge"] = c.isolated_edge;
        cj["twoConnected"] = c.two_connected;
        comps.push_back(std::move(cj));
    }
    j["components"] = std::move(comps);
    ordered_json cuts = ordered_json::array();
    for (int v : report.cut_vertices) cuts.push_back(dir_string(v, alphabet));
    j["cutVertices"] = std::move(cuts);
    return j;
}

ordered_json gwg_to_json(const GeneralizedWhiteheadGraph& g, char alphabet) {
    ordered_json j;
    j["schema"] = kSchemaTag;
    j["rank"] = g.rank;
    ordered_json fr = ordered_json::array();
    for (const Word& f : g.frontier) fr.push_back(render_word(f, alphabet));
    j["frontier"] = std::move(fr);
    ordered_json edges = ordered_json::array();
    for (const GwgEdge& e : g.edges) {
        ordered_json ej;
        ej["from"] = render_word(e.from, alphabet);
        ej["to"] = render_word(e.to, alphabet);
        ej["root"] = e.root_index;
        ej["line"] = render_word(e.line, alphabet);
        edges.push_back(std::move(ej));
    }
    j["edges"] = std::move(edges);
    return j;
}

}  // namespace csl
