#pragma once

#include <cstdint>
#include <string>

#include "toposz/field.hpp"
#include "toposz/persistence.hpp"

namespace toposz {

double mse(const ScalarField &f, const ScalarField &g);

// 20 log10(max(f) / sqrt(MSE)); +infinity when the fields are identical.
double psnr(const ScalarField &f, const ScalarField &g);

double compression_ratio(std::uint64_t original_bytes, std::uint64_t compressed_bytes);

// Exact bottleneck distance: binary search over candidate values with a
// bipartite feasibility matching (diagonal projections allowed).
double bottleneck_distance(const PersistenceDiagram &a, const PersistenceDiagram &b);

// Exact q-Wasserstein (L-infinity ground metric, diagonal projections
// allowed) via an assignment solve on the diagonally augmented diagrams.
double wasserstein_distance(const PersistenceDiagram &a, const PersistenceDiagram &b, double q = 2.0);

struct MetricsReport {
    double psnr = 0.0;
    double mse = 0.0;
    double compression_ratio = 0.0;
    double bottleneck = 0.0;
    double wasserstein2 = 0.0;
    int fp = 0, fn = 0, ft = 0;
};

// One JSON object per line; infinite PSNR is emitted as null.
std::string to_json_line(const MetricsReport &report);

}  // namespace toposz
