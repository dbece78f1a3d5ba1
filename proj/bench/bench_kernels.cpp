// Times the OpenMP kernels against their serial reference twins and checks
// that both produce identical bits. Not part of the ctest suite.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "toposz/contour_tree.hpp"
#include "toposz/kernels.hpp"

using namespace toposz;

namespace {

double time_best_of(int repeats, const std::function<void()> &fn) {
    double best = 1e300;
    for (int r = 0; r < repeats; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const auto dt =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0);
        best = std::min(best, dt.count());
    }
    return best;
}

void row(const std::string &name, double serial_ms, double parallel_ms, bool equal) {
    std::printf("%-24s %10.3f ms %10.3f ms   x%-5.2f %s\n", name.c_str(), serial_ms, parallel_ms,
                serial_ms / parallel_ms, equal ? "bit-equal" : "MISMATCH");
}

}  // namespace

int main() {
    const std::array<std::size_t, 3> dims{768, 768, 1};
    const std::size_t n = dims[0] * dims[1];
    const auto comps = random_components(2, 12, 1);
#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (OpenMP disabled)\n");
#endif
    std::printf("grid: %zux%zu (%zu vertices)\n", dims[0], dims[1], n);
    std::printf("%-24s %13s %13s\n", "kernel", "serial", "parallel");

    std::vector<double> a(n), b(n);
    row("evaluate_mixture",
        time_best_of(3, [&] { kernels::serial::evaluate_mixture(2, dims, comps, a); }),
        time_best_of(3, [&] { kernels::evaluate_mixture(2, dims, comps, b); }), a == b);

    const auto mm_s = kernels::serial::min_max(a);
    const auto mm_p = kernels::min_max(a);
    row("min_max", time_best_of(3, [&] { (void)kernels::serial::min_max(a); }),
        time_best_of(3, [&] { (void)kernels::min_max(a); }), mm_s == mm_p);

    std::vector<double> na(n), nb(n);
    row("normalize_values",
        time_best_of(3, [&] { kernels::serial::normalize_values(a, mm_s.first, mm_s.second, na); }),
        time_best_of(3, [&] { kernels::normalize_values(a, mm_p.first, mm_p.second, nb); }),
        na == nb);

    double sq_s = 0, sq_p = 0;
    row("sum_squared_diff",
        time_best_of(3, [&] { sq_s = kernels::serial::sum_squared_diff(na, a); }),
        time_best_of(3, [&] { sq_p = kernels::sum_squared_diff(na, a); }), sq_s == sq_p);

    double mx_s = 0, mx_p = 0;
    row("max_abs_diff", time_best_of(3, [&] { mx_s = kernels::serial::max_abs_diff(na, a); }),
        time_best_of(3, [&] { mx_p = kernels::max_abs_diff(na, a); }), mx_s == mx_p);

    std::vector<std::uint8_t> mask(n, 0);
    for (std::size_t v = 0; v < n; v += 97) mask[v] = 1;
    std::vector<std::uint8_t> da, db;
    row("dilate_once", time_best_of(3, [&] { kernels::serial::dilate_once(2, dims, mask, da); }),
        time_best_of(3, [&] { kernels::dilate_once(2, dims, mask, db); }), da == db);

    // Bound fill over a real segmentation.
    const ScalarField f = generate_gaussian_mixture(2, {256, 256, 1}, comps, 1);
    const ContourTree tree = simplify(build_contour_tree(f), 0.1);
    std::vector<double> arc_lo(tree.arcs.size()), arc_hi(tree.arcs.size());
    for (std::size_t i = 0; i < tree.arcs.size(); ++i) {
        arc_lo[i] = tree.nodes[tree.arcs[i].lower].scalar;
        arc_hi[i] = tree.nodes[tree.arcs[i].upper].scalar;
    }
    std::vector<double> lo_s(f.vertex_count()), hi_s(f.vertex_count());
    std::vector<double> lo_p(f.vertex_count()), hi_p(f.vertex_count());
    row("fill_bounds",
        time_best_of(3,
                     [&] {
                         kernels::serial::fill_bounds(f.values, tree.vertex_arc, tree.vertex_node,
                                                      arc_lo, arc_hi, lo_s, hi_s);
                     }),
        time_best_of(3,
                     [&] {
                         kernels::fill_bounds(f.values, tree.vertex_arc, tree.vertex_node, arc_lo,
                                              arc_hi, lo_p, hi_p);
                     }),
        lo_s == lo_p && hi_s == hi_p);

    // Tree construction: the join/split sweeps run as two parallel sections,
    // so the comparison is one thread against the default team.
    const ScalarField g = generate_gaussian_mixture(2, {512, 512, 1}, comps, 2);
    double tree_serial, tree_parallel;
    ContourTree t1, t2;
#ifdef _OPENMP
    const int max_threads = omp_get_max_threads();
    omp_set_num_threads(1);
    tree_serial = time_best_of(3, [&] { (void)build_contour_tree(g); });
    t2 = build_contour_tree(g);
    omp_set_num_threads(max_threads);
#else
    tree_serial = time_best_of(3, [&] { (void)build_contour_tree(g); });
    t2 = build_contour_tree(g);
#endif
    tree_parallel = time_best_of(3, [&] { (void)build_contour_tree(g); });
    t1 = build_contour_tree(g);
    row("build_contour_tree", tree_serial, tree_parallel,
        t1.nodes.size() == t2.nodes.size() && t1.vertex_arc == t2.vertex_arc);

    return 0;
}
