#include "doctest.h"

#include "robound/error.hpp"
#include "robound/grid.hpp"
#include "robound/rng.hpp"

#include <array>
#include <cmath>
#include <set>
#include <vector>

using namespace robound;

TEST_CASE("grid geometry basics") {
    GridGeometry g({{-1.0, 1.0}, {0.0, 3.0}}, {4, 6});
    CHECK(g.dim() == 2);
    CHECK(g.num_cells() == 24);
    CHECK(g.cell_size(0) == doctest::Approx(0.5));
    CHECK(g.cell_size(1) == doctest::Approx(0.5));
    CHECK(g.cell_volume() == doctest::Approx(0.25));
    // last axis fastest
    CHECK(g.strides()[0] == 6);
    CHECK(g.strides()[1] == 1);

    const std::array<std::size_t, 2> idx{2, 5};
    const std::size_t flat = g.flat_index(idx);
    CHECK(flat == 17);
    CHECK(g.multi_index(flat) == std::vector<std::size_t>{2, 5});
    const auto c = g.center(flat);
    CHECK(c[0] == doctest::Approx(0.25));
    CHECK(c[1] == doctest::Approx(2.75));
}

TEST_CASE("locate clamps to the nearest cell") {
    GridGeometry g({{0.0, 1.0}}, {10});
    const std::array<double, 1> inside{0.34};
    const std::array<double, 1> below{-5.0};
    const std::array<double, 1> above{7.0};
    CHECK(g.locate(inside) == 3);
    CHECK(g.locate(below) == 0);
    CHECK(g.locate(above) == 9);
}

TEST_CASE("padding keeps cell centres and sizes") {
    GridGeometry g({{0.0, 1.0}, {0.0, 2.0}}, {10, 20});
    const std::array<std::size_t, 2> pad{3, 1};
    GridGeometry p = g.padded(pad);
    CHECK(p.shape() == std::vector<std::size_t>{16, 22});
    CHECK(p.cell_size(0) == doctest::Approx(g.cell_size(0)));
    CHECK(p.cell_volume() == doctest::Approx(g.cell_volume()));
    CHECK(p.center_coord(0, 3) == doctest::Approx(g.center_coord(0, 0)));
    CHECK(p.center_coord(1, 1) == doctest::Approx(g.center_coord(1, 0)));
}

TEST_CASE("invalid geometry is rejected") {
    CHECK_THROWS_AS(GridGeometry({{1.0, 0.0}}, {10}), Error);
    CHECK_THROWS_AS(GridGeometry({{0.0, 1.0}}, {1}), Error);
    CHECK_THROWS_AS(GridGeometry({{0.0, 1.0}}, {4, 4}), Error);
}

TEST_CASE("rng streams are reproducible and distinct") {
    Rng a(42), b(42), c(43);
    for (int i = 0; i < 10; ++i) {
        const double x = a.uniform();
        CHECK(x == b.uniform());
        CHECK(x >= 0.0);
        CHECK(x < 1.0);
    }
    CHECK(a.bits() != c.bits());

    std::set<std::uint64_t> seeds;
    for (std::uint64_t i = 0; i < 1000; ++i) seeds.insert(derive_seed(7, i));
    CHECK(seeds.size() == 1000);
}

TEST_CASE("rng moments") {
    Rng rng(2024);
    const int n = 200000;
    double su = 0, sn = 0, sn2 = 0, se = 0;
    for (int i = 0; i < n; ++i) {
        su += rng.uniform();
        const double z = rng.normal();
        sn += z;
        sn2 += z * z;
        se += rng.exponential();
    }
    CHECK(su / n == doctest::Approx(0.5).epsilon(0.01));
    CHECK(std::abs(sn / n) < 0.01);
    CHECK(sn2 / n == doctest::Approx(1.0).epsilon(0.02));
    CHECK(se / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("below is uniform over its range") {
    Rng rng(5);
    std::array<int, 7> counts{};
    const int n = 70000;
    for (int i = 0; i < n; ++i) {
        const auto v = rng.below(7);
        REQUIRE(v < 7);
        ++counts[v];
    }
    double chi2 = 0.0;
    for (int c : counts) chi2 += (c - n / 7.0) * (c - n / 7.0) / (n / 7.0);
    CHECK(chi2 < 22.46);  // 6 dof, upper 1e-3
}

TEST_CASE("kappa range check") {
    CHECK_NOTHROW(check_kappa(0.0));
    CHECK_NOTHROW(check_kappa(0.4999));
    CHECK_THROWS_AS(check_kappa(0.5), Error);
    CHECK_THROWS_AS(check_kappa(-0.01), Error);
    try {
        check_kappa(0.6);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::KappaOutOfRange);
    }
}
