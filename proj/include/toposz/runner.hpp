#pragma once

#include <array>
#include <string>
#include <vector>

#include "toposz/pipeline.hpp"

namespace toposz::run {

// Derived output paths: f.tsz -> f.trace.csv / f.manifest.json / f.residual.txt.
std::string trace_path(const std::string &output);
std::string manifest_path(const std::string &output);
std::string residual_path(const std::string &output);

struct CompressSpec {
    std::string input;
    std::string output;
    int rank = 2;
    std::array<std::size_t, 3> dims{1, 1, 1};
    PipelineConfig cfg;
    std::uint64_t seed = 0;  // recorded in the manifest only
};

// Writes the stream, the iteration-trace CSV and the manifest. On an
// iteration-cap failure the residual report and trace are still written and
// IterationCapError propagates.
void compress(const CompressSpec &spec);

struct DecompressSpec {
    std::string input;
    std::string output;
};
void decompress(const DecompressSpec &spec);

struct SynthSpec {
    std::string output;
    int rank = 2;
    std::array<std::size_t, 3> dims{1, 1, 1};
    std::uint64_t seed = 0;
    int components = 5;
    double noise = 0.0;
};
void synth(const SynthSpec &spec);

// With a stream, metrics and the tree comparison run against its decoded
// field (and the ratio column is filled); otherwise the raw f32 pair is
// compared after rescaling onto the original's normalized range.
struct EvalSpec {
    std::string original;
    std::string decompressed;
    std::string stream;
    int rank = 2;
    std::array<std::size_t, 3> dims{1, 1, 1};
    double eps = 0.1;
    std::string output;  // JSON-lines report
};
void eval(const EvalSpec &spec);

struct SweepSpec {
    std::string input;
    int rank = 2;
    std::array<std::size_t, 3> dims{1, 1, 1};
    std::vector<double> xis;   // sweep xi at fixed cfg.eps when non-empty
    std::vector<double> epss;  // sweep eps at fixed cfg.xi when non-empty
    PipelineConfig cfg;
    std::string output;  // CSV
};

// Independent pipeline runs per sweep point; TOPOSZ_THREADS caps the
// parallelism. Rows are written in sweep order regardless of scheduling.
void sweep(const SweepSpec &spec);

// Re-executes the run recorded in a manifest file (compress, synth or
// decompress); outputs land on the recorded paths.
void run_manifest(const std::string &path);

}  // namespace toposz::run
