#include <doctest.h>

#include <numeric>
#include <random>

#include "oracles.hpp"
#include "toposz/kernels.hpp"
#include "toposz/persistence.hpp"

using namespace toposz;

namespace {

ScalarField strip_field(const std::vector<double> &profile) {
    std::vector<double> values;
    for (int row = 0; row < 2; ++row)
        values.insert(values.end(), profile.begin(), profile.end());
    ScalarField f = make_field(2, {2, profile.size(), 1}, std::move(values));
    f.normalized = true;
    return f;
}

ScalarField random_small_field(int rank, const std::array<std::size_t, 3> &dims,
                               std::mt19937_64 &rng) {
    std::size_t n = 1;
    for (int a = 0; a < rank; ++a) n *= dims[a];
    std::vector<double> values(n);
    std::iota(values.begin(), values.end(), 0.0);
    for (double &v : values) v /= static_cast<double>(n - 1);
    for (std::size_t i = n - 1; i > 0; --i) std::swap(values[i], values[rng() % (i + 1)]);
    return make_field(rank, dims, std::move(values));
}

}  // namespace

TEST_CASE("monotone ramp has only the essential pair") {
    std::vector<double> values;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) values.push_back(i / 3.0);
    ScalarField f = make_field(2, {4, 4, 1}, std::move(values));
    f.normalized = true;
    const PersistenceDiagram d = persistence_diagram_0d(f);
    REQUIRE(d.pairs.size() == 1);
    CHECK(d.pairs[0] == std::pair<double, double>{0.0, 1.0});
}

TEST_CASE("double well gives the (0.3, 0.7) sublevel pair") {
    const ScalarField f = strip_field({1.0, 0.0, 0.7, 0.3, 1.0});
    const PersistenceDiagram d = persistence_diagram_0d(f, /*include_superlevel=*/false);
    REQUIRE(d.pairs.size() == 2);
    CHECK(d.pairs[0] == std::pair<double, double>{0.0, 1.0});
    CHECK(d.pairs[1] == std::pair<double, double>{0.3, 0.7});
    CHECK(oracle::kruskal_diagram_0d(f, false).pairs == d.pairs);
}

TEST_CASE("superlevel sweep adds the max-type pairs") {
    // Interior bump 0.6 over dip 0.4: the sublevel sweep sees the dip's
    // component die at 0.6, the superlevel sweep sees the bump die at 0.4.
    const ScalarField f = strip_field({0.0, 0.6, 0.4, 1.0});
    const PersistenceDiagram sub_only = persistence_diagram_0d(f, /*include_superlevel=*/false);
    REQUIRE(sub_only.pairs.size() == 2);
    CHECK(sub_only.pairs[0] == std::pair<double, double>{0.0, 1.0});
    CHECK(sub_only.pairs[1] == std::pair<double, double>{0.4, 0.6});

    const PersistenceDiagram both = persistence_diagram_0d(f);
    REQUIRE(both.pairs.size() == 3);
    CHECK(both.pairs[1] == std::pair<double, double>{0.4, 0.6});
    CHECK(both.pairs[2] == std::pair<double, double>{0.4, 0.6});
    CHECK(oracle::kruskal_diagram_0d(f, true).pairs == both.pairs);
}

TEST_CASE("constant shifts translate the diagram exactly") {
    std::mt19937_64 rng(5);
    const ScalarField f = random_small_field(2, {4, 4, 1}, rng);
    ScalarField g = f;
    for (double &v : g.values) v += 0.25;  // exact in binary
    const PersistenceDiagram df = persistence_diagram_0d(f);
    const PersistenceDiagram dg = persistence_diagram_0d(g);
    REQUIRE(df.pairs.size() == dg.pairs.size());
    for (std::size_t i = 0; i < df.pairs.size(); ++i) {
        CHECK(dg.pairs[i].first == df.pairs[i].first + 0.25);
        CHECK(dg.pairs[i].second == df.pairs[i].second + 0.25);
    }
}

TEST_CASE("random small fields match the kruskal oracle exactly") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        const ScalarField f = random_small_field(2, {4, 4, 1}, rng);
        REQUIRE(persistence_diagram_0d(f).pairs == oracle::kruskal_diagram_0d(f).pairs);
    }
    for (int trial = 0; trial < 50; ++trial) {
        const ScalarField f = random_small_field(3, {3, 3, 2}, rng);
        REQUIRE(persistence_diagram_0d(f).pairs == oracle::kruskal_diagram_0d(f).pairs);
    }
}

TEST_CASE("diagrams are stable under bounded perturbation") {
    // Sanity form of the stability bound via a pointwise check: every pair of
    // the perturbed diagram lies within delta of a pair or the diagonal.
    std::mt19937_64 rng(77);
    const std::vector<GaussianComponent> comps = random_components(2, 4, 19);
    const ScalarField f = generate_gaussian_mixture(2, {24, 24, 1}, comps, 0);
    ScalarField g = f;
    std::size_t i = 0;
    for (double &v : g.values) v += 0.0009765625 * ((i++ % 7) / 7.0);  // < 2^-10
    const double delta = kernels::max_abs_diff(f.values, g.values);
    const PersistenceDiagram df = persistence_diagram_0d(f);
    const PersistenceDiagram dg = persistence_diagram_0d(g);
    for (const auto &[birth, death] : dg.pairs) {
        bool close = (death - birth) / 2 <= delta + 1e-12;
        for (const auto &[b2, d2] : df.pairs)
            if (std::abs(birth - b2) <= delta + 1e-12 && std::abs(death - d2) <= delta + 1e-12)
                close = true;
        CHECK(close);
    }
}
