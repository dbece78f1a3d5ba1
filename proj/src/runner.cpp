#include "toposz/runner.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>

#include <json.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "toposz/metrics.hpp"

namespace toposz::run {

namespace {

std::string strip_extension(const std::string &path) {
    const auto slash = path.find_last_of('/');
    const auto dot = path.find_last_of('.');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path;
    return path.substr(0, dot);
}

void write_file(const std::string &path, const void *data, std::size_t size) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FieldIOError("cannot open " + path + " for writing");
    out.write(static_cast<const char *>(data), static_cast<std::streamsize>(size));
    if (!out) throw FieldIOError("short write to " + path);
}

void write_file(const std::string &path, const std::string &text) {
    write_file(path, text.data(), text.size());
}

nlohmann::json dims_json(int rank, const std::array<std::size_t, 3> &dims) {
    nlohmann::json j = nlohmann::json::array();
    for (int a = 0; a < rank; ++a) j.push_back(dims[static_cast<std::size_t>(a)]);
    return j;
}

void parse_dims(const nlohmann::json &j, int &rank, std::array<std::size_t, 3> &dims) {
    rank = static_cast<int>(j.size());
    dims = {1, 1, 1};
    for (int a = 0; a < rank; ++a) dims[static_cast<std::size_t>(a)] = j[static_cast<std::size_t>(a)];
}

int thread_budget() {
#ifdef _OPENMP
    int n = omp_get_max_threads();
#else
    int n = 1;
#endif
    if (const char *env = std::getenv("TOPOSZ_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1) n = std::min(n, cap);
    }
    return n;
}

}  // namespace

std::string trace_path(const std::string &output) { return strip_extension(output) + ".trace.csv"; }
std::string manifest_path(const std::string &output) {
    return strip_extension(output) + ".manifest.json";
}
std::string residual_path(const std::string &output) {
    return strip_extension(output) + ".residual.txt";
}

void compress(const CompressSpec &spec) {
    nlohmann::json manifest;
    manifest["command"] = "compress";
    manifest["input"] = spec.input;
    manifest["rank"] = spec.rank;
    manifest["dims"] = dims_json(spec.rank, spec.dims);
    manifest["xi"] = spec.cfg.xi;
    manifest["eps"] = spec.cfg.eps;
    manifest["m"] = spec.cfg.m;
    manifest["max_iterations"] = spec.cfg.max_iterations;
    manifest["seed"] = spec.seed;
    manifest["outputs"] = {{"stream", spec.output},
                           {"trace", trace_path(spec.output)},
                           {"manifest", manifest_path(spec.output)}};

    const ScalarField field = load_raw(spec.input, spec.rank, spec.dims);
    try {
        CompressResult result = toposz::compress(field, spec.cfg);
        write_file(spec.output, result.stream.bytes.data(), result.stream.bytes.size());
        write_file(trace_path(spec.output), trace_csv(result.trace));
        write_file(manifest_path(spec.output), manifest.dump(2) + "\n");
    } catch (const IterationCapError &e) {
        write_file(trace_path(spec.output), trace_csv(e.trace));
        write_file(residual_path(spec.output), to_text(e.residual));
        write_file(manifest_path(spec.output), manifest.dump(2) + "\n");
        throw;
    }
}

void decompress(const DecompressSpec &spec) {
    std::ifstream in(spec.input, std::ios::binary | std::ios::ate);
    if (!in) throw FieldIOError("cannot open " + spec.input);
    CompressedStream stream;
    stream.bytes.resize(static_cast<std::size_t>(in.tellg()));
    in.seekg(0);
    in.read(reinterpret_cast<char *>(stream.bytes.data()),
            static_cast<std::streamsize>(stream.bytes.size()));
    if (!in) throw FieldIOError("short read from " + spec.input);
    save_raw(toposz::decompress(stream), spec.output);
}

void synth(const SynthSpec &spec) {
    const auto comps = random_components(spec.rank, spec.components, spec.seed);
    const ScalarField field =
        generate_gaussian_mixture(spec.rank, spec.dims, comps, spec.seed, spec.noise);
    save_raw(field, spec.output);

    nlohmann::json manifest;
    manifest["command"] = "synth";
    manifest["rank"] = spec.rank;
    manifest["dims"] = dims_json(spec.rank, spec.dims);
    manifest["seed"] = spec.seed;
    manifest["components"] = spec.components;
    manifest["noise"] = spec.noise;
    manifest["outputs"] = {{"field", spec.output}, {"manifest", manifest_path(spec.output)}};
    write_file(manifest_path(spec.output), manifest.dump(2) + "\n");
}

void eval(const EvalSpec &spec) {
    const ScalarField orig = load_raw(spec.original, spec.rank, spec.dims);
    const ScalarField f = normalize(orig);

    // When the stream is given, compare against its decoded field directly:
    // that is the object the compressor's guarantee speaks about. A raw f32
    // decompressed file adds one more rounding step that can displace
    // tie-broken saddle vertices.
    ScalarField g;
    std::uint64_t stream_bytes = 0;
    if (!spec.stream.empty()) {
        std::ifstream in(spec.stream, std::ios::binary | std::ios::ate);
        if (!in) throw FieldIOError("cannot open " + spec.stream);
        CompressedStream stream;
        stream.bytes.resize(static_cast<std::size_t>(in.tellg()));
        stream_bytes = stream.bytes.size();
        in.seekg(0);
        in.read(reinterpret_cast<char *>(stream.bytes.data()),
                static_cast<std::streamsize>(stream.bytes.size()));
        if (!in) throw FieldIOError("short read from " + spec.stream);
        g = decode_field(stream);
        if (g.rank != f.rank || g.dims != f.dims)
            throw std::invalid_argument("stream dims do not match --dims");
    } else if (!spec.decompressed.empty()) {
        // Raw pair mode: rescale onto the original's normalized range.
        g = load_raw(spec.decompressed, spec.rank, spec.dims);
        g.normalized = true;
        g.orig_min = f.orig_min;
        g.orig_max = f.orig_max;
        const double range = f.orig_max - f.orig_min;
        for (double &v : g.values) v = range > 0.0 ? (v - f.orig_min) / range : 0.0;
    } else {
        throw std::invalid_argument("eval needs --stream or --dec");
    }

    MetricsReport report;
    report.mse = mse(f, g);
    report.psnr = psnr(f, g);
    if (stream_bytes > 0)
        report.compression_ratio =
            compression_ratio(static_cast<std::uint64_t>(f.vertex_count()) * 4, stream_bytes);
    report.bottleneck = bottleneck_distance(persistence_diagram_0d(f), persistence_diagram_0d(g));
    report.wasserstein2 = wasserstein_distance(persistence_diagram_0d(f), persistence_diagram_0d(g));
    const ContourTree tf = simplify(build_contour_tree(f), spec.eps);
    const ContourTree tg = simplify(build_contour_tree(g), spec.eps);
    const FalseCaseReport fc = detect_false_cases(tf, tg);
    report.fp = fc.fp;
    report.fn = fc.fn;
    report.ft = fc.ft;

    std::string out = to_json_line(report) + "\n";
    if (!fc.empty()) out += to_text(fc);
    write_file(spec.output, out);
}

void sweep(const SweepSpec &spec) {
    const ScalarField raw = load_raw(spec.input, spec.rank, spec.dims);
    const ScalarField f = normalize(raw);

    struct Point {
        double xi, eps;
    };
    std::vector<Point> points;
    if (!spec.xis.empty())
        for (double xi : spec.xis) points.push_back({xi, spec.cfg.eps});
    if (!spec.epss.empty())
        for (double eps : spec.epss) points.push_back({spec.cfg.xi, eps});
    if (points.empty()) throw std::invalid_argument("sweep needs --sweep-xi or --sweep-eps");
    for (const Point &p : points) {
        if (!(p.xi > 0.0)) throw std::invalid_argument("sweep xi values must be positive");
        if (p.eps < 0.0) throw std::invalid_argument("sweep eps values must be nonnegative");
    }

    std::vector<std::string> rows(points.size());
    const int threads = thread_budget();
#pragma omp parallel for num_threads(threads) schedule(dynamic)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(points.size()); ++i) {
        const auto idx = static_cast<std::size_t>(i);
        PipelineConfig cfg = spec.cfg;
        cfg.xi = points[idx].xi;
        cfg.eps = points[idx].eps;
        int iterations;
        int fp = 0, fn = 0, ft = 0;
        double ratio, p;
        double bn = 0.0, w2 = 0.0;
        try {
            CompressResult result = toposz::compress(f, cfg);
            const IterationStep &last = result.trace.steps.back();
            iterations = last.step;
            ratio = last.ratio;
            p = last.psnr;
            const ScalarField dec = decode_field(result.stream);
            bn = bottleneck_distance(persistence_diagram_0d(f), persistence_diagram_0d(dec));
            w2 = wasserstein_distance(persistence_diagram_0d(f), persistence_diagram_0d(dec));
        } catch (const IterationCapError &e) {
            const IterationStep &last = e.trace.steps.back();
            iterations = last.step;
            ratio = last.ratio;
            p = last.psnr;
            fp = e.residual.fp;
            fn = e.residual.fn;
            ft = e.residual.ft;
        }
        char line[256];
        std::snprintf(line, sizeof line, "%.17g,%.17g,%d,%.6f,%.6f,%.9f,%.9f,%d,%d,%d\n",
                      cfg.xi, cfg.eps, iterations, ratio, p, bn, w2, fp, fn, ft);
        rows[idx] = line;
    }

    std::string csv = "xi,eps,iterations,ratio,psnr,bottleneck,wasserstein2,fp,fn,ft\n";
    for (const std::string &row : rows) csv += row;
    write_file(spec.output, csv);
}

void run_manifest(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw FieldIOError("cannot open " + path);
    nlohmann::json j;
    in >> j;
    const std::string command = j.at("command");
    if (command == "compress") {
        CompressSpec spec;
        spec.input = j.at("input");
        parse_dims(j.at("dims"), spec.rank, spec.dims);
        spec.cfg.xi = j.at("xi");
        spec.cfg.eps = j.at("eps");
        spec.cfg.m = j.at("m");
        spec.cfg.max_iterations = j.at("max_iterations");
        spec.seed = j.at("seed");
        spec.output = j.at("outputs").at("stream");
        compress(spec);
    } else if (command == "synth") {
        SynthSpec spec;
        parse_dims(j.at("dims"), spec.rank, spec.dims);
        spec.seed = j.at("seed");
        spec.components = j.at("components");
        spec.noise = j.at("noise");
        spec.output = j.at("outputs").at("field");
        synth(spec);
    } else {
        throw std::invalid_argument("manifest command not re-runnable: " + command);
    }
}

}  // namespace toposz::run
