// csl: decides whether one-edge cyclic splittings of (virtually) free groups
// are (virtually) free, with machine-checkable witnesses and certificates.
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "csl/json_io.hpp"

using namespace csl;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitBudget = 3;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void emit(const ordered_json& j) { std::cout << j.dump(2) << "\n"; }

struct SpecInput {
    std::string inline_text;
    std::string file;

    bool provided() const { return !inline_text.empty() || !file.empty(); }
    ordered_json load() const {
        return ordered_json::parse(!inline_text.empty() ? inline_text : slurp(file));
    }
    void attach(CLI::App* cmd, const std::string& name, const std::string& desc) {
        cmd->add_option("--" + name, inline_text, desc + " (inline JSON)");
        cmd->add_option("--" + name + "-file", file, desc + " (path to JSON file)");
    }
};

Multiword read_multiword(int rank, const std::vector<std::string>& words, char alphabet) {
    if (rank < 1) throw std::invalid_argument("--rank is required and must be positive");
    if (words.empty()) throw std::invalid_argument("at least one --word is required");
    Multiword mw{rank, {}};
    for (const std::string& s : words) mw.members.push_back(parse_word(s, rank, alphabet));
    return mw;
}

Subtree read_subtree(int rank, const std::string& text, char alphabet) {
    std::vector<Word> verts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item == "1") item.clear();
        verts.push_back(parse_word(item, rank, alphabet));
    }
    return Subtree::of(rank, std::move(verts));
}

ordered_json minimize_json(const MinimizationResult& m, char alphabet) {
    ordered_json j;
    j["schema"] = kSchemaTag;
    ordered_json roots = ordered_json::array();
    for (const CyclicWord& r : m.minimal.roots) roots.push_back(render_cyclic(r, alphabet));
    j["roots"] = std::move(roots);
    j["multiplicities"] = m.minimal.multiplicity;
    j["totalLength"] = m.minimal.total_length();
    j["moves"] = moves_to_json(m.moves, m.minimal.rank, alphabet);
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "decides freeness of one-edge cyclic splittings of free groups and "
        "virtual freeness of splittings of virtually free groups, with "
        "verifiable witnesses and detour certificates"};
    app.require_subcommand(1);

    int rank = 0;
    std::vector<std::string> words;
    std::string word, subtree_text, element, format = "json";
    char alphabet = 'a';
    SpecInput spec_in, vf_spec_in, pres_in, cert_in, witness_in;
    long radius = 1, radius_min = 1, radius_max = 4;
    bool no_certs = false, exit_verdict = false;
    std::size_t level_budget = 10000, max_vertices = 4'000'000;
    int comm_bound = 64;
    std::string export_ball;
    long ball_radius = 4;

    auto* reduce_cmd = app.add_subcommand("reduce", "freely reduce a word");
    reduce_cmd->add_option("--rank", rank)->required();
    reduce_cmd->add_option("--word", word)->required();
    reduce_cmd->add_option("--alphabet", alphabet);

    auto* minimize_cmd = app.add_subcommand("minimize", "Whitehead-minimize a multiword");
    minimize_cmd->add_option("--rank", rank)->required();
    minimize_cmd->add_option("--word", words)->required();
    minimize_cmd->add_option("--alphabet", alphabet);

    auto* primitive_cmd = app.add_subcommand("primitive", "test primitivity of a word");
    primitive_cmd->add_option("--rank", rank)->required();
    primitive_cmd->add_option("--word", word)->required();
    primitive_cmd->add_option("--alphabet", alphabet);

    auto* basic_cmd = app.add_subcommand("basic", "test whether a multiword is basic");
    basic_cmd->add_option("--rank", rank)->required();
    basic_cmd->add_option("--word", words)->required();
    basic_cmd->add_option("--alphabet", alphabet);

    auto* wh_cmd = app.add_subcommand("wh-graph", "Whitehead graph of a multiword");
    wh_cmd->add_option("--rank", rank)->required();
    wh_cmd->add_option("--word", words)->required();
    wh_cmd->add_option("--format", format)->check(CLI::IsMember({"json", "dot"}));
    wh_cmd->add_option("--alphabet", alphabet);

    auto* gwh_cmd =
        app.add_subcommand("gen-wh-graph", "generalized Whitehead graph over a subtree");
    gwh_cmd->add_option("--rank", rank)->required();
    gwh_cmd->add_option("--word", words)->required();
    gwh_cmd->add_option("--subtree", subtree_text, "comma separated vertex words, 1 = identity")
        ->required();
    gwh_cmd->add_option("--format", format)->check(CLI::IsMember({"json", "dot"}));
    gwh_cmd->add_option("--alphabet", alphabet);

    auto* decide_cmd = app.add_subcommand("decide", "decide a splitting of free groups");
    spec_in.attach(decide_cmd, "spec", "splitting spec");
    decide_cmd->add_option("--radius-min", radius_min);
    decide_cmd->add_option("--radius-max", radius_max);
    decide_cmd->add_flag("--no-certificates", no_certs);
    decide_cmd->add_flag("--exit-verdict", exit_verdict, "exit 0 for free, 1 for not free");
    decide_cmd->add_option("--level-budget", level_budget);
    decide_cmd->add_option("--max-vertices", max_vertices);

    auto* detour_cmd = app.add_subcommand("detour", "build one detour certificate");
    spec_in.attach(detour_cmd, "spec", "splitting spec");
    vf_spec_in.attach(detour_cmd, "spec-vf", "virtually free splitting spec");
    detour_cmd->add_option("--radius", radius)->required();
    detour_cmd->add_option("--max-vertices", max_vertices);
    detour_cmd->add_option("--export-ball", export_ball, "write a DOT export of a ball here");
    detour_cmd->add_option("--ball-radius", ball_radius);

    auto* verify_cmd = app.add_subcommand("verify", "verify a certificate or witness");
    spec_in.attach(verify_cmd, "spec", "splitting spec");
    vf_spec_in.attach(verify_cmd, "spec-vf", "virtually free splitting spec");
    cert_in.attach(verify_cmd, "certificate", "detour certificate");
    witness_in.attach(verify_cmd, "witness", "free witness");
    verify_cmd->add_option("--max-vertices", max_vertices);

    auto* rs_cmd = app.add_subcommand("rs-kernel", "kernel basis and rewriting data");
    pres_in.attach(rs_cmd, "presentation", "virtually free presentation");

    auto* lift_cmd = app.add_subcommand("lift", "lift a cyclic subgroup to the kernel");
    pres_in.attach(lift_cmd, "presentation", "virtually free presentation");
    lift_cmd->add_option("--element", element)->required();

    auto* comm_cmd = app.add_subcommand("commensurator", "commensurator of a cyclic subgroup");
    pres_in.attach(comm_cmd, "presentation", "virtually free presentation");
    comm_cmd->add_option("--element", element)->required();
    comm_cmd->add_option("--bound", comm_bound, "period search cap");

    auto* factor_cmd = app.add_subcommand("factor", "test whether an element generates a factor");
    pres_in.attach(factor_cmd, "presentation", "virtually free presentation");
    factor_cmd->add_option("--element", element)->required();

    auto* vf_cmd = app.add_subcommand("decide-vf", "decide a splitting of virtually free groups");
    vf_spec_in.attach(vf_cmd, "spec", "virtually free splitting spec");
    vf_cmd->add_option("--radius-min", radius_min);
    vf_cmd->add_option("--radius-max", radius_max);
    vf_cmd->add_flag("--no-certificates", no_certs);
    vf_cmd->add_flag("--exit-verdict", exit_verdict);
    vf_cmd->add_option("--level-budget", level_budget);
    vf_cmd->add_option("--max-vertices", max_vertices);

    CLI11_PARSE(app, argc, argv);

    try {
        if (reduce_cmd->parsed()) {
            Word w = parse_word(word, rank, alphabet);
            ordered_json j;
            j["schema"] = kSchemaTag;
            j["word"] = render_word(w, alphabet);
            emit(j);
        } else if (minimize_cmd->parsed()) {
            emit(minimize_json(minimize_multiword(read_multiword(rank, words, alphabet)),
                               alphabet));
        } else if (primitive_cmd->parsed()) {
            PrimitivityResult r = is_primitive(parse_word(word, rank, alphabet));
            ordered_json j;
            j["schema"] = kSchemaTag;
            j["primitive"] = r.primitive;
            j["moves"] = moves_to_json(r.moves, rank, alphabet);
            emit(j);
        } else if (basic_cmd->parsed()) {
            ordered_json j;
            j["schema"] = kSchemaTag;
            j["basic"] = is_basic(read_multiword(rank, words, alphabet));
            emit(j);
        } else if (wh_cmd->parsed()) {
            auto nmw = normalize_multiword(read_multiword(rank, words, alphabet));
            auto g = build_whitehead_graph(nmw);
            auto report = analyze_graph(g);
            if (format == "dot")
                std::cout << whitehead_graph_dot(g, report, alphabet);
            else
                emit(whitehead_graph_to_json(g, report, alphabet));
        } else if (gwh_cmd->parsed()) {
            auto nmw = normalize_multiword(read_multiword(rank, words, alphabet));
            auto x = read_subtree(rank, subtree_text, alphabet);
            auto g = generalized_whitehead_graph(nmw, x);
            if (format == "dot")
                std::cout << gwg_dot(g, alphabet);
            else
                emit(gwg_to_json(g, alphabet));
        } else if (decide_cmd->parsed()) {
            if (!spec_in.provided()) throw std::invalid_argument("--spec is required");
            SplittingSpec spec = spec_from_json(spec_in.load());
            DecideOptions opt;
            opt.cert_radius_min = radius_min;
            opt.cert_radius_max = radius_max;
            opt.certificates = !no_certs;
            opt.level_budget = level_budget;
            opt.max_vertices = max_vertices;
            Verdict v = decide(spec, opt);
            emit(verdict_to_json(v, spec));
            if (exit_verdict) return v.outcome == Verdict::Outcome::Free ? 0 : 1;
        } else if (detour_cmd->parsed()) {
            std::shared_ptr<BassSerreModel> model;
            WireContext ctx;
            if (vf_spec_in.provided()) {
                VfSplittingSpec spec = vf_spec_from_json(vf_spec_in.load());
                VfBallConfig cfg = vf_ball_config(spec);
                ctx = wire_context_for(cfg);
                model = BassSerreModel::for_vf(cfg, max_vertices);
            } else if (spec_in.provided()) {
                SplittingSpec spec = spec_from_json(spec_in.load());
                ctx = wire_context_for(spec);
                model = BassSerreModel::for_spec(spec, max_vertices);
            } else {
                throw std::invalid_argument("--spec or --spec-vf is required");
            }
            DetourCertificate cert = detour_certificate(*model, radius);
            if (!export_ball.empty()) {
                std::ofstream out(export_ball);
                out << ball_dot(*model, ball_radius);
            }
            emit(certificate_to_json(cert, ctx));
        } else if (verify_cmd->parsed()) {
            ordered_json j;
            j["schema"] = kSchemaTag;
            if (cert_in.provided()) {
                std::shared_ptr<BassSerreModel> model;
                WireContext ctx;
                if (vf_spec_in.provided()) {
                    VfSplittingSpec spec = vf_spec_from_json(vf_spec_in.load());
                    VfBallConfig cfg = vf_ball_config(spec);
                    ctx = wire_context_for(cfg);
                    model = BassSerreModel::for_vf(cfg, max_vertices);
                } else if (spec_in.provided()) {
                    SplittingSpec spec = spec_from_json(spec_in.load());
                    ctx = wire_context_for(spec);
                    model = BassSerreModel::for_spec(spec, max_vertices);
                } else {
                    throw std::invalid_argument("--spec or --spec-vf is required");
                }
                DetourCertificate cert = certificate_from_json(cert_in.load(), ctx);
                VerifyResult res = verify_certificate(*model, cert);
                j["valid"] = res.valid;
                if (!res.valid) j["reason"] = res.reason;
            } else if (witness_in.provided()) {
                if (!spec_in.provided()) throw std::invalid_argument("--spec is required");
                SplittingSpec spec = spec_from_json(spec_in.load());
                FreeWitness w = witness_from_json(witness_in.load(), spec);
                j["valid"] = verify_witness(spec, w);
            } else {
                throw std::invalid_argument("--certificate or --witness is required");
            }
            emit(j);
        } else if (rs_cmd->parsed()) {
            if (!pres_in.provided()) throw std::invalid_argument("--presentation is required");
            VfPresentation p = presentation_from_json(pres_in.load());
            ordered_json j;
            j["schema"] = kSchemaTag;
            j["qOrder"] = p.q_order();
            j["kernelRank"] = p.kernel_rank();
            ordered_json reps = ordered_json::array();
            for (std::size_t q = 0; q < p.q_order(); ++q) reps.push_back(p.render(p.coset_rep(q)));
            j["cosetReps"] = std::move(reps);
            ordered_json basis = ordered_json::array();
            for (int l = 1; l <= p.kernel_rank(); ++l) {
                ordered_json b;
                b["letter"] = render_word(Word(p.kernel_rank(), {l}));
                b["word"] = p.render(p.expand(Word(p.kernel_rank(), {l})));
                basis.push_back(std::move(b));
            }
            j["basis"] = std::move(basis);
            emit(j);
        } else if (lift_cmd->parsed()) {
            if (!pres_in.provided()) throw std::invalid_argument("--presentation is required");
            VfPresentation p = presentation_from_json(pres_in.load());
            LiftedMultiword l = lift_multiword(p, p.parse(element));
            ordered_json j;
            j["schema"] = kSchemaTag;
            j["element"] = element;
            j["k"] = l.k;
            j["w"] = render_word(l.w);
            ordered_json mem = ordered_json::array();
            for (const Word& m : l.members) mem.push_back(render_word(m));
            j["members"] = std::move(mem);
            ordered_json roots = ordered_json::array();
            for (const CyclicWord& r : l.normalized.roots) roots.push_back(render_cyclic(r));
            j["roots"] = std::move(roots);
            j["multiplicities"] = l.normalized.multiplicity;
            emit(j);
        } else if (comm_cmd->parsed()) {
            if (!pres_in.provided()) throw std::invalid_argument("--presentation is required");
            VfPresentation p = presentation_from_json(pres_in.load());
            CommensuratorResult c = commensurator(p, p.parse(element), comm_bound);
            ordered_json j;
            j["schema"] = kSchemaTag;
            j["element"] = element;
            ordered_json reps = ordered_json::array();
            for (const GWord& g : c.reps) reps.push_back(p.render(g));
            j["reps"] = std::move(reps);
            j["index"] = c.reps.size();
            emit(j);
        } else if (factor_cmd->parsed()) {
            if (!pres_in.provided()) throw std::invalid_argument("--presentation is required");
            VfPresentation p = presentation_from_json(pres_in.load());
            FactorReport r = is_factor(p, p.parse(element));
            ordered_json j;
            j["schema"] = kSchemaTag;
            j["element"] = element;
            j["factor"] = r.factor;
            j["almostMalnormal"] = r.almost_malnormal;
            j["basic"] = r.basic;
            j["diagnostic"] = r.diagnostic;
            emit(j);
        } else if (vf_cmd->parsed()) {
            if (!vf_spec_in.provided()) throw std::invalid_argument("--spec is required");
            VfSplittingSpec spec = vf_spec_from_json(vf_spec_in.load());
            VfDecideOptions opt;
            opt.cert_radius_min = radius_min;
            opt.cert_radius_max = radius_max;
            opt.certificates = !no_certs;
            opt.level_budget = level_budget;
            opt.max_vertices = max_vertices;
            VfVerdict v = decide_vf(spec, opt);
            emit(vf_verdict_to_json(v, spec));
            if (exit_verdict) return v.outcome == VfVerdict::Outcome::VirtuallyFree ? 0 : 1;
        }
    } catch (const BudgetExceeded& e) {
        std::cerr << "budget exhausted: " << e.what() << "\n";
        return kExitBudget;
    } catch (const ordered_json::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitOk;
}
