// Command-line front-end: compress / decompress / eval / synth.
//
// Exit codes: 0 ok, 2 usage, 3 iteration cap exceeded, 4 I/O, 5 stream format.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "toposz/huffman.hpp"
#include "toposz/runner.hpp"

namespace {

struct DimsArg {
    int rank = 0;
    std::array<std::size_t, 3> dims{1, 1, 1};
};

DimsArg parse_dims(const std::string &text) {
    DimsArg out;
    std::size_t at = 0;
    while (at < text.size()) {
        const std::size_t comma = text.find(',', at);
        const std::string part = text.substr(at, comma == std::string::npos ? comma : comma - at);
        if (out.rank >= 3) throw CLI::ValidationError("--dims", "at most three extents");
        const long v = std::stol(part);
        if (v <= 0) throw CLI::ValidationError("--dims", "extents must be positive");
        out.dims[static_cast<std::size_t>(out.rank++)] = static_cast<std::size_t>(v);
        if (comma == std::string::npos) break;
        at = comma + 1;
    }
    if (out.rank < 2) throw CLI::ValidationError("--dims", "need two or three extents");
    return out;
}

std::vector<double> parse_list(const std::string &text) {
    std::vector<double> out;
    std::size_t at = 0;
    while (at < text.size()) {
        const std::size_t comma = text.find(',', at);
        out.push_back(std::stod(text.substr(at, comma == std::string::npos ? comma : comma - at)));
        if (comma == std::string::npos) break;
        at = comma + 1;
    }
    return out;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"topology-preserving error-bounded lossy compressor for 2D/3D scalar fields"};
    app.require_subcommand(1);

    std::string in_path, out_path, dims_text, dec_path, stream_path, sweep_xi_text, sweep_eps_text;
    int rank_flag = 0;
    double xi = 0.01, eps = 0.1;
    int m = 16, max_iterations = 100;
    std::uint64_t seed = 0;
    int components = 5;
    double noise = 0.0;

    CLI::App *c = app.add_subcommand("compress", "compress a raw f32 field to a .tsz stream");
    c->add_option("--in", in_path, "input raw file (little-endian f32, row-major)")->required();
    c->add_option("--out", out_path, "output .tsz path")->required();
    c->add_option("--dims", dims_text, "comma-separated extents, e.g. 64,64")->required();
    c->add_option("--rank", rank_flag, "grid rank (cross-checked against --dims)");
    c->add_option("--xi", xi, "global error bound on the normalized scale")->required();
    c->add_option("--eps", eps, "persistence simplification threshold")->required();
    c->add_option("--m", m, "quantization code width (default 16)");
    c->add_option("--max-iterations", max_iterations, "refinement iteration cap (default 100)");
    c->add_option("--seed", seed, "seed recorded in the manifest");

    CLI::App *d = app.add_subcommand("decompress", "decompress a .tsz stream to a raw f32 field");
    d->add_option("--in", in_path, "input .tsz path")->required();
    d->add_option("--out", out_path, "output raw path")->required();

    CLI::App *e = app.add_subcommand("eval", "metrics for a (field, decompressed) pair or sweeps");
    e->add_option("--in", in_path, "original raw field")->required();
    e->add_option("--dims", dims_text, "comma-separated extents")->required();
    e->add_option("--rank", rank_flag, "grid rank (cross-checked against --dims)");
    e->add_option("--dec", dec_path, "decompressed raw field (pair mode)");
    e->add_option("--stream", stream_path, "matching .tsz stream, enables the ratio column");
    e->add_option("--xi", xi, "base error bound for sweeps");
    e->add_option("--eps", eps, "persistence threshold");
    e->add_option("--m", m, "quantization code width");
    e->add_option("--max-iterations", max_iterations, "refinement iteration cap");
    e->add_option("--sweep-xi", sweep_xi_text, "comma-separated xi values (sweep mode)");
    e->add_option("--sweep-eps", sweep_eps_text, "comma-separated eps values (sweep mode)");
    e->add_option("--out", out_path, "output report (.jsonl for pairs, .csv for sweeps)")->required();

    CLI::App *s = app.add_subcommand("synth", "write a seeded Gaussian-mixture field");
    s->add_option("--out", out_path, "output raw path")->required();
    s->add_option("--dims", dims_text, "comma-separated extents")->required();
    s->add_option("--rank", rank_flag, "grid rank (cross-checked against --dims)");
    s->add_option("--seed", seed, "component-draw seed")->required();
    s->add_option("--components", components, "number of Gaussian components (default 5)");
    s->add_option("--noise", noise, "additive uniform noise amplitude (default 0)");

    try {
        app.parse(argc, argv);

        DimsArg dims;
        if (!dims_text.empty()) {
            dims = parse_dims(dims_text);
            if (rank_flag != 0 && rank_flag != dims.rank)
                throw CLI::ValidationError("--rank", "rank does not match --dims");
        }

        if (c->parsed()) {
            toposz::run::CompressSpec spec;
            spec.input = in_path;
            spec.output = out_path;
            spec.rank = dims.rank;
            spec.dims = dims.dims;
            spec.cfg = {xi, eps, m, max_iterations, toposz::Backend::deflate};
            spec.seed = seed;
            toposz::run::compress(spec);
        } else if (d->parsed()) {
            toposz::run::decompress({in_path, out_path});
        } else if (s->parsed()) {
            toposz::run::SynthSpec spec;
            spec.output = out_path;
            spec.rank = dims.rank;
            spec.dims = dims.dims;
            spec.seed = seed;
            spec.components = components;
            spec.noise = noise;
            toposz::run::synth(spec);
        } else if (e->parsed()) {
            if (!sweep_xi_text.empty() || !sweep_eps_text.empty()) {
                toposz::run::SweepSpec spec;
                spec.input = in_path;
                spec.rank = dims.rank;
                spec.dims = dims.dims;
                spec.xis = parse_list(sweep_xi_text);
                spec.epss = parse_list(sweep_eps_text);
                spec.cfg = {xi, eps, m, max_iterations, toposz::Backend::deflate};
                spec.output = out_path;
                toposz::run::sweep(spec);
            } else {
                if (dec_path.empty() && stream_path.empty())
                    throw CLI::ValidationError("--dec", "pair mode needs --dec or --stream");
                toposz::run::EvalSpec spec;
                spec.original = in_path;
                spec.decompressed = dec_path;
                spec.stream = stream_path;
                spec.rank = dims.rank;
                spec.dims = dims.dims;
                spec.eps = eps;
                spec.output = out_path;
                toposz::run::eval(spec);
            }
        }
        return 0;
    } catch (const CLI::ParseError &err) {
        const int rc = app.exit(err);
        return rc == 0 ? 0 : 2;
    } catch (const toposz::IterationCapError &err) {
        std::fprintf(stderr, "toposz: %s\nresidual report: %s\n", err.what(),
                     toposz::run::residual_path(out_path).c_str());
        return 3;
    } catch (const toposz::FieldIOError &err) {
        std::fprintf(stderr, "toposz: %s\n", err.what());
        return 4;
    } catch (const toposz::StreamError &err) {
        std::fprintf(stderr, "toposz: %s\n", err.what());
        return 5;
    } catch (const toposz::HuffmanError &err) {
        std::fprintf(stderr, "toposz: %s\n", err.what());
        return 5;
    } catch (const toposz::LosslessError &err) {
        std::fprintf(stderr, "toposz: %s\n", err.what());
        return 5;
    } catch (const std::invalid_argument &err) {
        std::fprintf(stderr, "toposz: %s\n", err.what());
        return 2;
    } catch (const std::exception &err) {
        std::fprintf(stderr, "toposz: %s\n", err.what());
        return 1;
    }
}
