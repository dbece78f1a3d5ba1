#pragma once

#include <string>
#include <vector>

#include "toposz/contour_tree.hpp"

namespace toposz {

enum class FalseCaseKind : std::uint8_t { fp = 0, fn = 1, ft = 2 };

const char *to_string(FalseCaseKind k);

// One mismatch between the branch decompositions of the original and the
// decompressed simplified trees, with the grid-level data the bounds
// refinement needs: the pairing saddle (for FPs) and the branch's pre-image.
struct FalseCase {
    FalseCaseKind kind;
    VertexId extremum;
    bool has_kind_orig = false, has_kind_dec = false;
    CriticalKind kind_orig{}, kind_dec{};
    VertexId saddle;
    double persistence;
    std::vector<VertexId> region;  // branch path pre-image incl. path node vertices
};

struct FalseCaseReport {
    std::vector<FalseCase> cases;
    int fp = 0, fn = 0, ft = 0;
    bool empty() const { return cases.empty(); }
    int total() const { return fp + fn + ft; }
};

// Branches matched by extremum vertex: unmatched in tree_dec -> FP, unmatched
// in tree_orig -> FN, matched with different extremum kinds -> FT. Matched
// branches whose pairing saddles differ count as one FP plus one FN so the
// refinement touches both regions. Deterministic order.
FalseCaseReport detect_false_cases(const ContourTree &tree_orig, const ContourTree &tree_dec);

// One line per case: "FP|FN|FT <extremumVertex> <kind_orig> <kind_dec> <persistence>".
std::string to_text(const FalseCaseReport &report);

}  // namespace toposz
