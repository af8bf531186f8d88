#include "doctest.h"

#include "robound/error.hpp"
#include "robound/io.hpp"
#include "robound/svg.hpp"

#include <algorithm>
#include <filesystem>
#include <functional>

using namespace robound;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an exception");
    return ErrorCode::InvalidArgument;
}

std::filesystem::path scratch_dir() {
    auto dir = std::filesystem::temp_directory_path() / "robound_test_io";
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("spec round trips") {
    for (const auto& spec : {canonical_normals_spec(), step_spec(300), moons_spec(40, 30)}) {
        const auto back = io::parse_spec(io::spec_to_json(spec));
        CHECK(back.kind() == spec.kind());
        CHECK(back.priors == spec.priors);
        CHECK(back.shape == spec.shape);
        CHECK(io::spec_to_json(back) == io::spec_to_json(spec));
    }
}

TEST_CASE("spec parsing") {
    const std::string text = R"({
        "spec_version": 1, "kind": "truncated_normal_mixture",
        "priors": [0.5, 0.5], "domain": [[-5, 5]], "shape": [500],
        "params": {"classes": [[{"mean": [-1], "std": 0.8}], [{"mean": [1], "std": [0.8]}]]}
    })";
    const auto spec = io::parse_spec(text);
    CHECK(spec.kind() == "truncated_normal_mixture");
    const auto& p = std::get<NormalMixtureParams>(spec.params);
    CHECK(p.classes[1][0].stddev == std::vector<double>{0.8});
    CHECK(p.classes[0][0].weight == 1.0);

    CHECK(code_of([] { io::parse_spec("{not json"); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([] { io::parse_spec(R"({"spec_version": 2})"); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([] {
              io::parse_spec(R"({"spec_version": 1, "kind": "spiral", "priors": [1, 0],
                                 "domain": [[0, 1]], "shape": [10]})");
          }) == ErrorCode::InvalidArgument);
    CHECK(code_of([] {
              io::parse_spec(R"({"spec_version": 1, "kind": "moons", "priors": [0.5, 0.5], "shape": [10, 10]})");
          }) == ErrorCode::InvalidArgument);
}

TEST_CASE("kde spec with inline samples") {
    const std::string text = R"({
        "spec_version": 1, "kind": "kde_samples", "priors": [0.5, 0.5],
        "domain": [[-4, 4]], "shape": [400],
        "params": {"samples": [[-1.1, 0], [-0.9, 0], [-1.0, 0], [1.0, 1], [1.2, 1], [0.8, 1]], "bandwidth": "scott"}
    })";
    const auto spec = io::parse_spec(text);
    const auto& p = std::get<KdeParams>(spec.params);
    CHECK(p.samples.points.size() == 6);
    CHECK(p.bandwidth.empty());
    CHECK(build_distribution(spec).total_mass() == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("kde spec with a samples file") {
    const auto dir = scratch_dir();
    io::write_text(dir / "pts.csv", "x,y,label\n0.1,0.2,0\n0.3,0.1,0\n0.9,0.8,1\n0.7,0.9,1\n");
    io::write_text(dir / "spec.json", R"({"spec_version": 1, "kind": "kde_samples", "priors": [0.5, 0.5],
        "domain": [[-1, 2], [-1, 2]], "shape": [60, 60], "params": {"samples_file": "pts.csv", "bandwidth": 0.2}})");
    const auto spec = io::read_spec(dir / "spec.json");
    const auto& p = std::get<KdeParams>(spec.params);
    CHECK(p.samples.dim == 2);
    CHECK(p.bandwidth == std::vector<double>{0.2, 0.2});
}

TEST_CASE("sample parsing") {
    const auto s = io::parse_samples("# comment\n1.0;2.0;1\n3.0\t4.0\t0  # trailing\n\n5 6 1\n");
    CHECK(s.dim == 2);
    CHECK(s.points.size() == 3);
    CHECK(s.labels == std::vector<std::size_t>{1, 0, 1});
    CHECK(s.points[1] == std::vector<double>{3.0, 4.0});

    CHECK(code_of([] { io::parse_samples("1,2,0\n1,0\n"); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([] { io::parse_samples("1,2,0.5\n"); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([] { io::parse_samples("1,2,0\nfoo,3,1\n"); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([] { io::parse_samples("7\n"); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("grid distribution round trip") {
    const auto d = build_distribution(moons_spec(30, 20));
    const auto back = io::grid_from_json(io::grid_to_json(d));
    CHECK(back.geometry() == d.geometry());
    CHECK(back.class_densities() == d.class_densities());

    const auto path = scratch_dir() / "grid.json";
    io::write_grid(d, path);
    CHECK(io::read_grid(path).class_densities() == d.class_densities());

    CHECK(code_of([] { io::grid_from_json(R"({"format": "robound-classifier", "version": 1})"); }) ==
          ErrorCode::InvalidArgument);
    // mass far from one is rejected
    CHECK(code_of([] {
              io::grid_from_json(R"({"format": "robound-grid", "version": 1, "domain": [[0, 1]],
                                     "shape": [2], "num_classes": 2, "densities": [[3, 3], [3, 3]]})");
          }) == ErrorCode::InvalidArgument);
}

TEST_CASE("classifier round trip") {
    const auto d = build_distribution(step_spec(100));
    const auto h = make_noisy_classifier(d, 0.2, 3).grid();
    const auto back = io::classifier_from_json(io::classifier_to_json(h));
    CHECK(back.labels() == h.labels());
    CHECK(back.geometry() == h.geometry());

    const auto path = scratch_dir() / "clf.json";
    io::write_classifier(h, path);
    CHECK(io::read_classifier(path).labels() == h.labels());
    CHECK(code_of([] { io::read_classifier("/nonexistent/robound/clf.json"); }) == ErrorCode::Io);
}

TEST_CASE("reports serialise") {
    const auto d = build_distribution(step_spec(400));
    const auto k = make_kernel(Norm::Linf, 0.15, 1);
    const auto rep = kappa_sweep(d, k, {0.0, 0.2});
    const auto js = io::bounds_to_json(rep);
    CHECK(js.find("robound-bounds") != std::string::npos);
    CHECK(js.find("\"b_p\"") != std::string::npos);
    const auto csv = io::sweep_to_csv(rep);
    CHECK(csv.rfind("kappa,acc_bound\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);

    auto r = evaluate(make_bayes_classifier(d), d, k, 0.1, MonteCarloMode{10, 1});
    CHECK(io::report_to_json(r).find("monte_carlo") != std::string::npos);
    r.det_robust_acc.reset();
    CHECK(io::report_to_json(r).find("\"det_robust_acc\": null") != std::string::npos);
}

TEST_CASE("svg output is deterministic") {
    svg::Plot plot;
    plot.title = "bound";
    plot.x_label = "kappa";
    plot.y_label = "accuracy";
    plot.series.push_back({"a", {0.0, 0.1, 0.2}, {0.8, 0.85, 0.9}});
    plot.series.push_back({"b & c", {0.0, 0.2}, {0.7, 0.75}, "#d62728"});
    const auto a = svg::render(plot);
    CHECK(a == svg::render(plot));
    CHECK(a.rfind("<svg", 0) == 0);
    CHECK(a.find("</svg>") != std::string::npos);
    CHECK(a.find("b &amp; c") != std::string::npos);

    plot.log_x = true;
    plot.series[0].x = {1, 10, 100};
    plot.series[1].x = {1, 1000};
    CHECK(svg::render(plot) != a);
}
