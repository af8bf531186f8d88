#include "doctest.h"

#include "robound/classifiers.hpp"
#include "robound/distributions.hpp"
#include "robound/error.hpp"
#include "robound/rng.hpp"

#include <array>
#include <cmath>
#include <memory>

using namespace robound;

namespace {

Classifier step_bayes() { return make_bayes_classifier(build_distribution(step_spec())); }

}  // namespace

TEST_CASE("grid prediction") {
    const auto h = step_bayes();
    CHECK(h.kind() == ClassifierKind::Bayes);
    const std::array<double, 1> left{-0.3};
    const std::array<double, 1> right{0.3};
    const std::array<double, 1> outside{4.0};
    CHECK(predict(h, left) == 0);
    CHECK(predict(h, right) == 1);
    CHECK(predict(h, outside) == 1);

    GridGeometry g({{0.0, 1.0}, {0.0, 1.0}}, {2, 2});
    const auto c = make_grid_classifier(g, 3, {0, 1, 2, 0});
    const std::array<double, 2> p{0.25, 0.75};
    CHECK(predict(c, p) == 1);
    const std::array<double, 2> q{0.75, 0.25};
    CHECK(predict(c, q) == 2);
}

TEST_CASE("labels are validated") {
    GridGeometry g({{0.0, 1.0}}, {4});
    CHECK_THROWS_AS(make_grid_classifier(g, 2, {0, 1, 2, 0}), Error);
    CHECK_THROWS_AS(make_grid_classifier(g, 2, {0, 1}), Error);
    CHECK_THROWS_AS(make_grid_classifier(g, 1, {0, 0, 0, 0}), Error);
    CHECK_THROWS_AS(make_voting_classifier(nullptr, make_kernel(Norm::Linf, 0.1, 1), 10, 0), Error);
}

TEST_CASE("exact mu of the step classifier") {
    const auto h = step_bayes();
    const auto k = make_kernel(Norm::Linf, 0.5, 1);
    const std::array<double, 1> zero{0.0};
    const std::array<double, 1> quarter{0.25};
    const auto m0 = mu(h, k, zero, ExactGridMode{}).mu;
    CHECK(m0[1] == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(m0[0] + m0[1] == doctest::Approx(1.0));
    CHECK(mu(h, k, quarter, ExactGridMode{}).mu[1] == doctest::Approx(0.75).epsilon(1e-9));

    // Monte Carlo agrees within a few binomial standard errors
    const auto mc = mu(h, k, quarter, MonteCarloMode{100000, 3}).mu;
    CHECK(std::abs(mc[1] - 0.75) < 0.005);
}

TEST_CASE("mu field matches pointwise mu at cell centres") {
    const auto d = build_distribution(moons_spec(80, 50));
    const auto h = make_bayes_classifier(d);
    const auto k = make_kernel(Norm::Linf, 0.15, 2);
    const auto field = mu_field(h.grid(), k);
    const auto& g = d.geometry();
    for (std::size_t c = 0; c < g.num_cells(); c += 37) {
        const auto m = mu(h, k, g.center(c), ExactGridMode{}).mu;
        CHECK(field[1][c] == doctest::Approx(m[1]).epsilon(1e-9));
    }
}

TEST_CASE("majority vote") {
    const auto h = step_bayes();
    const auto k = make_kernel(Norm::Linf, 0.5, 1);
    const std::array<double, 1> x{0.25};
    int ones = 0;
    for (std::uint64_t s = 0; s < 30; ++s) ones += vote(h, k, x, 1001, s) == 1 ? 1 : 0;
    CHECK(ones == 30);

    // a single sample returns label 1 with probability mu_1 = 0.75
    const int trials = 20000;
    int hits = 0;
    for (int s = 0; s < trials; ++s) hits += vote(h, k, x, 1, derive_seed(77, s)) == 1 ? 1 : 0;
    const double freq = static_cast<double>(hits) / trials;
    CHECK(std::abs(freq - 0.75) < 4.0 * std::sqrt(0.75 * 0.25 / trials));
}

TEST_CASE("voting agrees with the exact majority away from ties") {
    const auto d = build_distribution(moons_spec(80, 50));
    const auto inner = std::make_shared<const Classifier>(make_noisy_classifier(d, 0.15, 5));
    const auto k = make_kernel(Norm::Linf, 0.15, 2);
    const auto voter = make_voting_classifier(inner, k, 10000, 1);
    CHECK(voter.kind() == ClassifierKind::Voting);
    const auto field = mu_field(inner->grid(), k);
    const auto& g = d.geometry();
    int total = 0, agree = 0;
    for (std::size_t c = 0; c < g.num_cells(); c += 7) {
        const std::size_t exact = field[1][c] > field[0][c] ? 1 : 0;
        ++total;
        agree += predict(voter, g.center(c)) == exact ? 1 : 0;
    }
    CHECK(static_cast<double>(agree) / total >= 0.99);
}

TEST_CASE("voting is reproducible") {
    const auto d = build_distribution(canonical_normals_spec(200));
    const auto inner = std::make_shared<const Classifier>(make_noisy_classifier(d, 0.3, 2));
    const auto k = make_kernel(Norm::Linf, 0.15, 1);
    const auto a = materialize(make_voting_classifier(inner, k, 25, 9), d.geometry());
    const auto b = materialize(make_voting_classifier(inner, k, 25, 9), d.geometry());
    CHECK(a.labels() == b.labels());
    CHECK_THROWS_AS(mu(make_voting_classifier(inner, k, 25, 9), k, std::array<double, 1>{0.0}, ExactGridMode{}),
                    Error);
}

TEST_CASE("combined error") {
    auto e = combined_error(0.8, 0.95, 0.1);
    CHECK(e.e_cor == doctest::Approx(0.2));
    CHECK(e.e_cns == 0.0);
    CHECK(e.e == doctest::Approx(0.2));
    e = combined_error(0.8, 0.85, 0.1);
    CHECK(e.e_cns == 1.0);
    CHECK(e.e == 1.0);
    CHECK(combined_error(1.0, 1.0, 0.0).e == 0.0);
    CHECK_THROWS_AS(combined_error(0.5, 0.5, 0.5), Error);

    const auto d = build_distribution(step_spec());
    const auto h = make_bayes_classifier(d);
    const auto k = make_kernel(Norm::Linf, 0.15, 1);
    const std::array<double, 1> deep{0.6};
    const std::array<double, 1> edge{0.05};
    CHECK(point_error(h, d, k, 0.1, deep, ExactGridMode{}).e == doctest::Approx(0.0));
    // mu_1(0.05) = 0.2 / 0.3
    CHECK(point_error(h, d, k, 0.1, edge, ExactGridMode{}).e == 1.0);
    CHECK(point_error(h, d, k, 0.4, edge, ExactGridMode{}).e == doctest::Approx(0.0));
}

TEST_CASE("at most one label is consistent below one half") {
    GridGeometry g({{0.0, 1.0}, {0.0, 1.0}}, {30, 30});
    Rng rng(12);
    const auto k = make_kernel(Norm::Linf, 0.1, 2);
    for (int t = 0; t < 5; ++t) {
        std::vector<std::size_t> labels(g.num_cells());
        for (auto& l : labels) l = rng.below(3);
        const auto h = make_grid_classifier(g, 3, labels);
        const auto field = mu_field(h.grid(), k);
        for (double kappa : {0.0, 0.2, 0.45, 0.4999}) {
            for (std::size_t c = 0; c < g.num_cells(); ++c) {
                int consistent = 0;
                for (const auto& f : field) consistent += f[c] >= 1.0 - kappa ? 1 : 0;
                CHECK(consistent <= 1);
            }
        }
    }
}

TEST_CASE("mu slope in 1-D") {
    const auto d = build_distribution(step_spec());
    const auto h = make_bayes_classifier(d);
    for (double eps : {0.5, 0.15}) {
        const auto k = make_kernel(Norm::Linf, eps, 1);
        const auto field = mu_field(h.grid(), k);
        const double step = d.geometry().cell_size(0);
        double worst = 0.0;
        for (std::size_t c = 1; c < d.num_cells(); ++c) {
            worst = std::max(worst, std::abs(field[1][c] - field[1][c - 1]) / step);
        }
        CHECK(worst <= 1.0 / (2 * eps) + 10 * step);
        CHECK(worst >= 1.0 / (2 * eps) - 10 * step);
    }
}

TEST_CASE("noisy classifier") {
    const auto d = build_distribution(canonical_normals_spec());
    const auto bayes = make_bayes_classifier(d).grid();
    const auto a = make_noisy_classifier(d, 0.15, 4).grid();
    const auto b = make_noisy_classifier(d, 0.15, 4).grid();
    CHECK(a.labels() == b.labels());
    CHECK(a.kind() == ClassifierKind::Noisy);
    std::size_t flipped = 0;
    for (std::size_t c = 0; c < d.num_cells(); ++c) flipped += a.label(c) != bayes.label(c) ? 1 : 0;
    const double rate = static_cast<double>(flipped) / d.num_cells();
    CHECK(std::abs(rate - 0.15) < 4.0 * std::sqrt(0.15 * 0.85 / d.num_cells()));

    CHECK(make_noisy_classifier(d, 0.0, 1).grid().labels() == bayes.labels());
    CHECK_THROWS_AS(make_noisy_classifier(d, 1.5, 1), Error);
}

TEST_CASE("smoothed Bayes on the step keeps the boundary") {
    const auto d = build_distribution(step_spec());
    const auto s = make_smoothed_bayes_classifier(d, make_kernel(Norm::Linf, 0.15, 1));
    CHECK(s.kind() == ClassifierKind::SmoothedBayes);
    CHECK(s.grid().labels() == make_bayes_classifier(d).grid().labels());
}

TEST_CASE("materialize onto another grid") {
    const auto h = step_bayes();
    GridGeometry coarse({{-1.0, 1.0}}, {10});
    const auto m = materialize(h, coarse);
    for (std::size_t c = 0; c < 10; ++c) CHECK(m.label(c) == (c < 5 ? 0u : 1u));
    CHECK(to_string(ClassifierKind::Voting) == "voting");
}
