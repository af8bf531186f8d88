#include "doctest.h"

#include "robound/bayes.hpp"
#include "robound/error.hpp"
#include "robound/evaluation.hpp"

#include <boost/math/distributions/binomial.hpp>

#include <algorithm>
#include <cmath>
#include <memory>

using namespace robound;

TEST_CASE("vanilla accuracy") {
    const auto d = build_distribution(canonical_normals_spec());
    CHECK(vanilla_accuracy(make_bayes_classifier(d), d) == doctest::Approx(1.0 - bayes_error(d)).epsilon(1e-12));
    CHECK(vanilla_accuracy(make_constant_classifier(d.geometry(), 2, 0), d) == doctest::Approx(0.5).epsilon(1e-6));

    const auto step = build_distribution(step_spec());
    const double noisy = vanilla_accuracy(make_noisy_classifier(step, 0.15, 8), step);
    CHECK(std::abs(noisy - 0.85) < 0.02);
}

TEST_CASE("deterministic robust accuracy") {
    const auto d = build_distribution(step_spec());
    const auto k = make_kernel(Norm::Linf, 0.15, 1);
    const auto bayes = make_bayes_classifier(d);
    CHECK(det_robust_accuracy(bayes, d, k) == doctest::Approx(0.85).epsilon(2e-3));

    // a constant classifier never changes its label
    const auto flat = make_constant_classifier(d.geometry(), 2, 1);
    CHECK(det_robust_accuracy(flat, d, k) == doctest::Approx(vanilla_accuracy(flat, d)));

    // a vicinity inside a single cell
    const auto tiny = make_kernel(Norm::Linf, 1e-4, 1);
    CHECK(det_robust_accuracy(bayes, d, tiny) == doctest::Approx(vanilla_accuracy(bayes, d)).epsilon(2e-3));
}

TEST_CASE("probabilistic robust accuracy") {
    const auto d = build_distribution(step_spec());
    const auto k = make_kernel(Norm::Linf, 0.15, 1);
    const auto bayes = make_bayes_classifier(d);
    const double det = det_robust_accuracy(bayes, d, k);
    CHECK(prob_robust_accuracy(bayes, d, k, 0.0, ExactGridMode{}).value == doctest::Approx(det));
    CHECK(prob_robust_accuracy(bayes, d, k, 0.1, ExactGridMode{}).value == doctest::Approx(0.88).epsilon(2e-3));
    CHECK(prob_robust_accuracy(bayes, d, k, 0.4999, ExactGridMode{}).value ==
          doctest::Approx(vanilla_accuracy(bayes, d)).epsilon(2e-3));
    CHECK_THROWS_AS(prob_robust_accuracy(bayes, d, k, 0.5, ExactGridMode{}), Error);
}

TEST_CASE("ordering and monotonicity of the accuracies") {
    const auto d = build_distribution(moons_spec(160, 100));
    const auto k = make_kernel(Norm::Linf, 0.15, 2);
    for (const auto& h : {make_bayes_classifier(d), make_noisy_classifier(d, 0.15, 3),
                          make_smoothed_bayes_classifier(d, k)}) {
        const double van = vanilla_accuracy(h, d);
        const double det = det_robust_accuracy(h, d, k);
        double prev = det;
        for (double kappa : {0.0, 0.1, 0.2, 0.3, 0.4, 0.49}) {
            const double p = prob_robust_accuracy(h, d, k, kappa, ExactGridMode{}).value;
            CHECK(p >= prev - 1e-12);
            CHECK(p <= van + 1e-12);
            prev = p;
        }
    }
}

TEST_CASE("voting classifiers need Monte Carlo or materialisation") {
    const auto d = build_distribution(canonical_normals_spec(400));
    const auto k = make_kernel(Norm::Linf, 0.15, 1);
    const auto inner = std::make_shared<const Classifier>(make_noisy_classifier(d, 0.15, 1));
    const auto voter = make_voting_classifier(inner, k, 15, 2);
    try {
        det_robust_accuracy(voter, d, k);
        FAIL("expected ModeUnsupported");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ModeUnsupported);
    }
    CHECK_THROWS_AS(prob_robust_accuracy(voter, d, k, 0.1, ExactGridMode{}), Error);
    const auto r = evaluate(voter, d, k, 0.1, MonteCarloMode{50, 3});
    CHECK_FALSE(r.det_robust_acc.has_value());
    CHECK(r.prob_robust_acc <= r.vanilla_acc + 1e-12);
    CHECK(r.prob_robust_stderr > 0.0);
}

TEST_CASE("Monte Carlo against its exact expectation") {
    // With exact mu per cell, the Monte-Carlo decision at a cell is a binomial
    // threshold event, so mean and spread of the estimate are known.
    const auto d = build_distribution(canonical_normals_spec());
    const auto k = make_kernel(Norm::Linf, 0.15, 1);
    const double kappa = 0.1;
    const std::size_t m = 2000;
    for (const auto& h : {make_noisy_classifier(d, 0.05, 6), make_bayes_classifier(d)}) {
        const auto field = mu_field(h.grid(), k);
        double mean = 0.0, var = 0.0;
        for (std::size_t c = 0; c < d.num_cells(); ++c) {
            const std::size_t label = h.grid().label(c);
            const double w = d.density(label, c) * d.cell_volume();
            const double agree = std::clamp(field[label][c], 0.0, 1.0);
            // consistent iff the count of agreeing samples reaches m (1 - kappa)
            const double need = std::ceil(static_cast<double>(m) * (1.0 - kappa) - 1e-9);
            double q = 1.0;
            if (agree < 1.0) {
                const boost::math::binomial_distribution<double> bin(static_cast<double>(m), agree);
                q = need <= 0.0 ? 1.0 : boost::math::cdf(boost::math::complement(bin, need - 1.0));
            }
            mean += w * q;
            var += w * w * q * (1.0 - q);
        }
        const auto mc = prob_robust_accuracy(h, d, k, kappa, MonteCarloMode{m, 11});
        CHECK(std::abs(mc.value - mean) <= 4.0 * std::sqrt(var) + 1e-9);
        CHECK(mc.stderr_ == doctest::Approx(std::sqrt(var)).epsilon(0.5));
    }
}

TEST_CASE("evaluate bundles the three measures") {
    const auto d = build_distribution(step_spec());
    const auto k = make_kernel(Norm::Linf, 0.15, 1);
    const auto r = evaluate(make_bayes_classifier(d), d, k, 0.2, ExactGridMode{});
    CHECK(r.vanilla_acc == doctest::Approx(1.0));
    REQUIRE(r.det_robust_acc.has_value());
    CHECK(*r.det_robust_acc == doctest::Approx(0.85).epsilon(2e-3));
    CHECK(r.prob_robust_acc == doctest::Approx(0.91).epsilon(2e-3));
    CHECK(r.prob_robust_stderr == 0.0);
    CHECK(r.kappa == 0.2);
}

TEST_CASE("voting comparison") {
    const auto d = build_distribution(step_spec(400));
    const auto k = make_kernel(Norm::Linf, 0.15, 1);
    // the Bayes step classifier is already its own majority vote
    const auto same = compare_voting(make_bayes_classifier(d), d, k, 0.1, 401, {1, 2, 3});
    CHECK(same.deltas.size() == 3);
    CHECK(std::abs(same.mean_delta) < 5e-3);
    CHECK(same.ci_low <= same.mean_delta);
    CHECK(same.ci_high >= same.mean_delta);

    const auto noisy = compare_voting(make_noisy_classifier(d, 0.15, 2), d, k, 0.1, 100, {1, 2, 3, 4});
    CHECK(noisy.mean_delta > 0.0);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(noisy.deltas[i] == doctest::Approx(noisy.voting_prob_acc[i] - noisy.inner_prob_acc));
    }

    const auto single = compare_voting(make_bayes_classifier(d), d, k, 0.1, 1, {5});
    CHECK(single.ci_low == single.ci_high);
    CHECK_THROWS_AS(compare_voting(make_bayes_classifier(d), d, k, 0.1, 10, {}), Error);
}

TEST_CASE("sample size study") {
    const auto d = build_distribution(step_spec(400));
    const auto k = make_kernel(Norm::Linf, 0.15, 1);
    const auto flat = make_constant_classifier(d.geometry(), 2, 0);
    const auto rows = sample_size_study(flat, d, k, 0.1, {1, 5}, 4);
    REQUIRE(rows.size() == 2);
    for (const auto& r : rows) {
        CHECK(r.stddev == 0.0);
        CHECK(r.values.size() == 4);
        CHECK(r.mean == doctest::Approx(0.5));
    }
    const auto one = sample_size_study(make_noisy_classifier(d, 0.15, 1), d, k, 0.1, {10}, 1);
    CHECK(one.size() == 1);
    CHECK(one[0].stddev == 0.0);
    CHECK_THROWS_AS(sample_size_study(flat, d, k, 0.1, {10, 5}, 2), Error);
    CHECK_THROWS_AS(sample_size_study(flat, d, k, 0.1, {10}, 0), Error);
}
