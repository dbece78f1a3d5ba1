#pragma once

#include <string>

#include "toposz/codec.hpp"
#include "toposz/validate.hpp"

namespace toposz {

struct PipelineConfig {
    double xi = 0.01;        // global pointwise error bound on the normalized scale
    double eps = 0.1;        // persistence simplification threshold
    int m = 16;              // quantization code width
    int max_iterations = 100;
    Backend backend = Backend::deflate;
};

struct IterationStep {
    int step;           // 0 = initialization
    int fp, fn, ft;     // false cases detected after this step's decode
    double eb_percent;  // share of vertices whose bounds were updated before this encode
    double ratio;       // original bytes (4 per sample) / stream bytes
    double psnr;        // normalized-scale PSNR of this step's decode
};

struct IterationTrace {
    std::vector<IterationStep> steps;
};

std::string trace_csv(const IterationTrace &trace);

struct CompressResult {
    CompressedStream stream;
    IterationTrace trace;
};

struct IterationCapError : std::runtime_error {
    IterationTrace trace;
    FalseCaseReport residual;
    IterationCapError(std::string what, IterationTrace t, FalseCaseReport r)
        : std::runtime_error(std::move(what)), trace(std::move(t)), residual(std::move(r)) {}
};

// Full loop: normalize, simplify the contour tree, derive bounds, then
// encode/decode/compare/refine until the decompressed simplified tree
// branch-matches the original, growing the neighborhood layer count by one
// each round. Throws IterationCapError with the trace and the residual report
// when cfg.max_iterations is exhausted.
CompressResult compress(const ScalarField &field, const PipelineConfig &cfg);

// decode_field plus denormalization from the header range.
ScalarField decompress(const CompressedStream &stream);

}  // namespace toposz
