#pragma once

#include <utility>
#include <vector>

#include "toposz/field.hpp"

namespace toposz {

// 0-dimensional persistence pairs, (birth, death) with death >= birth.
struct PersistenceDiagram {
    std::vector<std::pair<double, double>> pairs;
};

// Sublevel-set pairs by an ascending union-find sweep (elder rule), the
// essential class as the finite pair (global min, global max), and, unless
// disabled, the superlevel-set pairs of the descending sweep written as
// (saddle, maximum). Pairs are sorted for canonical comparison.
PersistenceDiagram persistence_diagram_0d(const ScalarField &field, bool include_superlevel = true);

}  // namespace toposz
