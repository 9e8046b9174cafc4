#ifndef CSL_JSON_IO_HPP
#define CSL_JSON_IO_HPP

#include <string>
#include <vector>

#include "csl/decider.hpp"
#include "csl/splice.hpp"
#include "csl/vflift.hpp"
#include "json.hpp"

namespace csl {

using ordered_json = nlohmann::ordered_json;

inline constexpr const char* kSchemaTag = "csl/1";

// Enough of a complex's shape to serialize certificate references: per-side
// rank and rendering alphabet, and the side reached through each family.
struct WireContext {
    std::vector<int> ranks;
    std::vector<char> alphabets;
    std::vector<std::vector<int>> far_side;
    int base_side = 0;
};
WireContext wire_context_for(const SplittingSpec& spec);
WireContext wire_context_for(const VfBallConfig& cfg);

ordered_json spec_to_json(const SplittingSpec& spec);
SplittingSpec spec_from_json(const ordered_json& j);

ordered_json certificate_to_json(const DetourCertificate& cert, const WireContext& ctx);
DetourCertificate certificate_from_json(const ordered_json& j, const WireContext& ctx);

ordered_json witness_to_json(const FreeWitness& w, const SplittingSpec& spec);
FreeWitness witness_from_json(const ordered_json& j, const SplittingSpec& spec);

ordered_json verdict_to_json(const Verdict& v, const SplittingSpec& spec);

ordered_json presentation_to_json(const VfPresentation& p);
VfPresentation presentation_from_json(const ordered_json& j);

ordered_json vf_spec_to_json(const VfSplittingSpec& spec);
VfSplittingSpec vf_spec_from_json(const ordered_json& j);

ordered_json vf_verdict_to_json(const VfVerdict& v, const VfSplittingSpec& spec);

ordered_json whitehead_graph_to_json(const WhiteheadGraph& g, const GraphReport& report,
                                     char alphabet = 'a');
ordered_json gwg_to_json(const GeneralizedWhiteheadGraph& g, char alphabet = 'a');

ordered_json moves_to_json(const std::vector<WhiteheadMove>& moves, int rank, char alphabet);
std::vector<WhiteheadMove> moves_from_json(const ordered_json& j, int rank, char alphabet);

}  // namespace csl

#endif
