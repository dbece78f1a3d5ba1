#include "toposz/pipeline.hpp"

#include <cmath>
#include <cstdio>

#include "toposz/bounds.hpp"
#include "toposz/kernels.hpp"
#include "toposz/metrics.hpp"

namespace toposz {

std::string trace_csv(const IterationTrace &trace) {
    std::string out = "step,fp,fn,ft,eb_percent,ratio,psnr\n";
    char line[192];
    for (const IterationStep &s : trace.steps) {
        std::snprintf(line, sizeof line, "%d,%d,%d,%d,%.6f,%.6f,%.6f\n", s.step, s.fp, s.fn, s.ft,
                      s.eb_percent, s.ratio, s.psnr);
        out += line;
    }
    return out;
}

CompressResult compress(const ScalarField &field, const PipelineConfig &cfg) {
    if (!(cfg.xi > 0.0)) throw std::invalid_argument("xi must be positive");
    if (cfg.eps < 0.0) throw std::invalid_argument("eps must be nonnegative");
    if (cfg.max_iterations < 0) throw std::invalid_argument("max_iterations must be nonnegative");

    const ScalarField f = field.normalized ? field : normalize(field);
    const std::size_t n = f.vertex_count();

    const ContourTree tree_eps = simplify(build_contour_tree(f), cfg.eps);
    BoundsField bounds = initialize_bounds(f, tree_eps);
    const QuantizationConfig qcfg{cfg.xi, cfg.m};

    IterationTrace trace;
    double eb_percent = 100.0;
    for (int step = 0;; ++step) {
        CompressedStream stream = encode_field(f, bounds, qcfg, cfg.eps, cfg.backend);
        const ScalarField dec = decode_field(stream);
        const ContourTree tree_dec = simplify(build_contour_tree(dec), cfg.eps);
        const FalseCaseReport report = detect_false_cases(tree_eps, tree_dec);

        IterationStep row;
        row.step = step;
        row.fp = report.fp;
        row.fn = report.fn;
        row.ft = report.ft;
        row.eb_percent = eb_percent;
        row.ratio = compression_ratio(static_cast<std::uint64_t>(n) * 4, stream.bytes.size());
        row.psnr = psnr(f, dec);
        trace.steps.push_back(row);

        if (report.empty()) return {std::move(stream), std::move(trace)};
        if (step >= cfg.max_iterations)
            throw IterationCapError("false cases remain after " + std::to_string(step) +
                                        " refinement iterations",
                                    std::move(trace), report);

        // k-th refinement: k-layer neighborhoods, k+1 monotone buckets.
        // Applied sequentially, ordered by the anchor vertex (the saddle for
        // FPs, the extremum otherwise).
        const int k = step + 1;
        std::vector<const FalseCase *> ordered;
        for (const FalseCase &fc : report.cases) ordered.push_back(&fc);
        std::sort(ordered.begin(), ordered.end(), [](const FalseCase *a, const FalseCase *b) {
            const VertexId ka = a->kind == FalseCaseKind::fp ? a->saddle : a->extremum;
            const VertexId kb = b->kind == FalseCaseKind::fp ? b->saddle : b->extremum;
            if (ka != kb) return ka < kb;
            return static_cast<int>(a->kind) < static_cast<int>(b->kind);
        });
        const BoundsField before = bounds;
        for (const FalseCase *fc : ordered) {
            if (fc->kind == FalseCaseKind::fp)
                refine_for_false_positive(bounds, f, tree_eps, *fc, k);
            else
                refine_for_false_negative_or_type(bounds, f, tree_eps, *fc, k);
        }
        std::size_t changed = 0;
        for (std::size_t v = 0; v < n; ++v)
            if (bounds.lower[v] != before.lower[v] || bounds.upper[v] != before.upper[v]) ++changed;
        eb_percent = 100.0 * static_cast<double>(changed) / static_cast<double>(n);
    }
}

ScalarField decompress(const CompressedStream &stream) {
    return denormalize(decode_field(stream));
}

}  // namespace toposz
