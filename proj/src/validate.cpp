#include "toposz/validate.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

namespace toposz {

const char *to_string(FalseCaseKind k) {
    switch (k) {
        case FalseCaseKind::fp: return "FP";
        case FalseCaseKind::fn: return "FN";
        case FalseCaseKind::ft: return "FT";
    }
    return "?";
}

namespace {

struct Record {
    CriticalKind kind;
    VertexId saddle;
    double persistence;
    std::vector<VertexId> region;         // full branch path pre-image
    std::vector<VertexId> attach_region;  // pre-image of the saddle-incident path arc
};

// Per-extremum branch records; the root branch yields one record per global
// extremum so displaced global extrema surface like any other mismatch.
std::map<VertexId, Record> branch_records(const ContourTree &tree) {
    const auto regions = segmentation_regions(tree);
    std::map<VertexId, Record> out;
    for (const Branch &b : branch_decomposition(tree)) {
        Record rec;
        rec.kind = tree.nodes[b.extremum].kind;
        rec.saddle = tree.nodes[b.saddle].vertex;
        rec.persistence = b.persistence;
        rec.region.push_back(tree.nodes[b.extremum].vertex);
        for (std::uint32_t a : b.arcs) {
            rec.region.push_back(tree.nodes[tree.arcs[a].upper].vertex);
            rec.region.push_back(tree.nodes[tree.arcs[a].lower].vertex);
            rec.region.insert(rec.region.end(), regions[a].begin(), regions[a].end());
            if (tree.arcs[a].upper == b.saddle || tree.arcs[a].lower == b.saddle) {
                rec.attach_region.push_back(tree.nodes[tree.arcs[a].upper].vertex);
                rec.attach_region.push_back(tree.nodes[tree.arcs[a].lower].vertex);
                rec.attach_region.insert(rec.attach_region.end(), regions[a].begin(),
                                         regions[a].end());
            }
        }
        std::sort(rec.region.begin(), rec.region.end());
        rec.region.erase(std::unique(rec.region.begin(), rec.region.end()), rec.region.end());
        std::sort(rec.attach_region.begin(), rec.attach_region.end());
        rec.attach_region.erase(std::unique(rec.attach_region.begin(), rec.attach_region.end()),
                                rec.attach_region.end());
        out.emplace(tree.nodes[b.extremum].vertex, std::move(rec));
    }
    return out;
}

FalseCase make_case(FalseCaseKind kind, VertexId extremum, const Record &rec, bool from_orig) {
    FalseCase fc;
    fc.kind = kind;
    fc.extremum = extremum;
    fc.saddle = rec.saddle;
    fc.persistence = rec.persistence;
    fc.region = rec.region;
    if (from_orig) {
        fc.has_kind_orig = true;
        fc.kind_orig = rec.kind;
    } else {
        fc.has_kind_dec = true;
        fc.kind_dec = rec.kind;
    }
    return fc;
}

}  // namespace

FalseCaseReport detect_false_cases(const ContourTree &tree_orig, const ContourTree &tree_dec) {
    if (tree_orig.rank != tree_dec.rank || tree_orig.dims != tree_dec.dims)
        throw std::invalid_argument("trees were built over different grids");

    const auto orig = branch_records(tree_orig);
    const auto dec = branch_records(tree_dec);

    FalseCaseReport report;
    for (const auto &[vertex, rec] : dec) {
        if (!orig.contains(vertex)) {
            report.cases.push_back(make_case(FalseCaseKind::fp, vertex, rec, false));
            ++report.fp;
        }
    }
    for (const auto &[vertex, rec] : orig) {
        auto it = dec.find(vertex);
        if (it == dec.end()) {
            report.cases.push_back(make_case(FalseCaseKind::fn, vertex, rec, true));
            ++report.fn;
            continue;
        }
        if (rec.kind != it->second.kind) {
            FalseCase fc = make_case(FalseCaseKind::ft, vertex, rec, true);
            fc.has_kind_dec = true;
            fc.kind_dec = it->second.kind;
            report.cases.push_back(std::move(fc));
            ++report.ft;
        } else if (rec.saddle != it->second.saddle) {
            // Same extremum, different nesting: the defect sits where the
            // branch attaches, so refine around both saddles with the
            // saddle-incident arc pre-images rather than the whole branch.
            FalseCase fp = make_case(FalseCaseKind::fp, vertex, it->second, false);
            fp.region = it->second.attach_region;
            FalseCase fn = make_case(FalseCaseKind::fn, vertex, rec, true);
            fn.region = rec.attach_region;
            fn.region.push_back(rec.saddle);
            report.cases.push_back(std::move(fp));
            ++report.fp;
            report.cases.push_back(std::move(fn));
            ++report.fn;
        }
    }
    std::sort(report.cases.begin(), report.cases.end(), [](const FalseCase &a, const FalseCase &b) {
        if (a.extremum != b.extremum) return a.extremum < b.extremum;
        return static_cast<int>(a.kind) < static_cast<int>(b.kind);
    });
    return report;
}

std::string to_text(const FalseCaseReport &report) {
    std::string out;
    char line[128];
    for (const FalseCase &fc : report.cases) {
        std::snprintf(line, sizeof line, "%s %llu %s %s %.17g\n", to_string(fc.kind),
                      static_cast<unsigned long long>(fc.extremum),
                      fc.has_kind_orig ? to_string(fc.kind_orig) : "-",
                      fc.has_kind_dec ? to_string(fc.kind_dec) : "-", fc.persistence);
        out += line;
    }
    return out;
}

}  // namespace toposz
