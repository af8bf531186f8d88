#include "robound/robound.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <memory>

namespace py = pybind11;
using namespace robound;

namespace {

py::array_t<double> densities_array(const GridDistribution& d) {
    std::vector<py::ssize_t> shape{static_cast<py::ssize_t>(d.num_classes())};
    for (std::size_t s : d.geometry().shape()) shape.push_back(static_cast<py::ssize_t>(s));
    py::array_t<double> out(shape);
    double* dst = out.mutable_data();
    for (std::size_t k = 0; k < d.num_classes(); ++k) {
        const auto& src = d.class_density(k);
        std::copy(src.begin(), src.end(), dst + k * d.num_cells());
    }
    return out;
}

py::array_t<std::size_t> labels_array(const GridClassifier& g) {
    std::vector<py::ssize_t> shape;
    for (std::size_t s : g.geometry().shape()) shape.push_back(static_cast<py::ssize_t>(s));
    py::array_t<std::size_t> out(shape);
    std::copy(g.labels().begin(), g.labels().end(), out.mutable_data());
    return out;
}

MuMode mode_from(const std::string& mode, std::size_t m, std::uint64_t seed) {
    if (mode == "exact") return ExactGridMode{};
    if (mode == "mc") return MonteCarloMode{m, seed};
    throw Error(ErrorCode::InvalidArgument, "mode must be 'exact' or 'mc'");
}

}  // namespace

PYBIND11_MODULE(_robound, m) {
    m.doc() = "Robustness bounds and classifier evaluation on gridded distributions";

    static py::exception<Error> robound_error(m, "RoboundError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            const std::string msg = std::string(to_string(e.code())) + ": " + e.what();
            py::set_error(robound_error, msg.c_str());
        }
    });

    py::enum_<Norm>(m, "Norm").value("L1", Norm::L1).value("L2", Norm::L2).value("Linf", Norm::Linf);

    py::class_<VicinityKernel>(m, "VicinityKernel")
        .def_readonly("p", &VicinityKernel::p)
        .def_readonly("eps", &VicinityKernel::eps)
        .def_readonly("dim", &VicinityKernel::dim)
        .def("__repr__", [](const VicinityKernel& k) {
            return "VicinityKernel(p=" + to_string(k.p) + ", eps=" + std::to_string(k.eps) +
                   ", dim=" + std::to_string(k.dim) + ")";
        });
    m.def("make_kernel", [](const std::string& p, double eps, std::size_t dim) { return make_kernel(parse_norm(p), eps, dim); },
          py::arg("p"), py::arg("eps"), py::arg("dim"));
    m.def("kernel_volume", py::overload_cast<const VicinityKernel&>(&kernel_volume));

    // distributions
    py::class_<DistributionSpec>(m, "DistributionSpec")
        .def_property_readonly("kind", &DistributionSpec::kind)
        .def_readwrite("priors", &DistributionSpec::priors)
        .def_readwrite("shape", &DistributionSpec::shape)
        .def("to_json", [](const DistributionSpec& s) { return io::spec_to_json(s); });
    m.def("normals_spec", &canonical_normals_spec, py::arg("cells") = 2000);
    m.def("step_spec", &step_spec, py::arg("cells") = 2000);
    m.def("moons_spec", &moons_spec, py::arg("nx") = 400, py::arg("ny") = 250);
    m.def("parse_spec", [](const std::string& text) { return io::parse_spec(text); });
    m.def("read_spec", &io::read_spec);

    py::class_<GridDistribution>(m, "GridDistribution")
        .def_property_readonly("num_classes", &GridDistribution::num_classes)
        .def_property_readonly("num_cells", &GridDistribution::num_cells)
        .def_property_readonly("shape", [](const GridDistribution& d) { return d.geometry().shape(); })
        .def_property_readonly("cell_volume", &GridDistribution::cell_volume)
        .def_property_readonly("densities", &densities_array)
        .def("total_mass", &GridDistribution::total_mass)
        .def("center", [](const GridDistribution& d, std::size_t cell) { return d.geometry().center(cell); })
        .def("posterior", [](const GridDistribution& d, std::size_t cell) { return posterior(d, cell).probs; });
    m.def("build_distribution", &build_distribution);
    m.def("read_grid", &io::read_grid);
    m.def("write_grid", &io::write_grid);

    // bounds
    py::class_<BoundsEntry>(m, "BoundsEntry")
        .def_readonly("kappa", &BoundsEntry::kappa)
        .def_readonly("eps", &BoundsEntry::eps)
        .def_readonly("shrunk_eps", &BoundsEntry::shrunk_eps)
        .def_readonly("tau", &BoundsEntry::tau)
        .def_readonly("bayes_error", &BoundsEntry::bayes_error)
        .def_readonly("det_error", &BoundsEntry::det_error)
        .def_readonly("prob_error", &BoundsEntry::prob_error)
        .def_property_readonly("vanilla_acc_bound", &BoundsEntry::vanilla_acc_bound)
        .def_property_readonly("det_acc_bound", &BoundsEntry::det_acc_bound)
        .def_property_readonly("prob_acc_bound", &BoundsEntry::prob_acc_bound);
    m.def("bayes_error", &bayes_error);
    m.def("det_robust_bayes_error",
          [](const GridDistribution& d, const VicinityKernel& k, double tau) { return det_robust_bayes_error(d, k, tau); },
          py::arg("dist"), py::arg("kernel"), py::arg("tau") = kDefaultBoundaryTolerance);
    m.def("prob_robust_upper_bound",
          [](const GridDistribution& d, const VicinityKernel& k, double kappa, double tau) {
              return prob_robust_upper_bound(d, k, kappa, tau);
          },
          py::arg("dist"), py::arg("kernel"), py::arg("kappa"), py::arg("tau") = kDefaultBoundaryTolerance);
    m.def("kappa_sweep",
          [](const GridDistribution& d, const VicinityKernel& k, const std::vector<double>& kappas, double tau) {
              return kappa_sweep(d, k, kappas, tau).entries;
          },
          py::arg("dist"), py::arg("kernel"), py::arg("kappas"), py::arg("tau") = kDefaultBoundaryTolerance);
    m.def("shrunk_radius", &shrunk_radius);

    // classifiers
    py::class_<Classifier, std::shared_ptr<Classifier>>(m, "Classifier")
        .def_property_readonly("kind", [](const Classifier& c) { return to_string(c.kind()); })
        .def_property_readonly("num_classes", &Classifier::num_classes)
        .def_property_readonly("grid_backed", &Classifier::grid_backed)
        .def("labels", [](const Classifier& c) { return labels_array(c.grid()); })
        .def("predict", [](const Classifier& c, const std::vector<double>& x) { return predict(c, x); })
        .def("materialize",
             [](const Classifier& c, const GridDistribution& d) { return Classifier(materialize(c, d.geometry())); })
        .def("save", [](const Classifier& c, const std::filesystem::path& path) { io::write_classifier(c.grid(), path); });
    m.def("bayes_classifier", &make_bayes_classifier);
    m.def("smoothed_bayes_classifier", &make_smoothed_bayes_classifier);
    m.def("noisy_classifier", &make_noisy_classifier, py::arg("dist"), py::arg("rho") = kDefaultFlipRate,
          py::arg("seed") = 0);
    m.def("constant_classifier",
          [](const GridDistribution& d, std::size_t label) {
              return make_constant_classifier(d.geometry(), d.num_classes(), label);
          });
    m.def("grid_classifier",
          [](const GridDistribution& d, const std::vector<std::size_t>& labels) {
              return make_grid_classifier(d.geometry(), d.num_classes(), labels);
          });
    m.def("voting_classifier",
          [](const Classifier& inner, const VicinityKernel& k, std::size_t m, std::uint64_t seed) {
              return make_voting_classifier(std::make_shared<const Classifier>(inner), k, m, seed);
          },
          py::arg("inner"), py::arg("kernel"), py::arg("m") = 100, py::arg("seed") = 0);
    m.def("read_classifier", [](const std::filesystem::path& path) { return Classifier(io::read_classifier(path)); });
    m.def("mu",
          [](const Classifier& c, const VicinityKernel& k, const std::vector<double>& x, const std::string& mode,
             std::size_t m, std::uint64_t seed) { return mu(c, k, x, mode_from(mode, m, seed)).mu; },
          py::arg("classifier"), py::arg("kernel"), py::arg("point"), py::arg("mode") = "exact", py::arg("m") = 100,
          py::arg("seed") = 0);

    // evaluation
    py::class_<RobustnessReport>(m, "RobustnessReport")
        .def_readonly("vanilla_acc", &RobustnessReport::vanilla_acc)
        .def_readonly("det_robust_acc", &RobustnessReport::det_robust_acc)
        .def_readonly("prob_robust_acc", &RobustnessReport::prob_robust_acc)
        .def_readonly("prob_robust_stderr", &RobustnessReport::prob_robust_stderr)
        .def_readonly("kappa", &RobustnessReport::kappa)
        .def("to_json", [](const RobustnessReport& r) { return io::report_to_json(r); });
    m.def("evaluate",
          [](const Classifier& c, const GridDistribution& d, const VicinityKernel& k, double kappa,
             const std::string& mode, std::size_t m, std::uint64_t seed) {
              return evaluate(c, d, k, kappa, mode_from(mode, m, seed));
          },
          py::arg("classifier"), py::arg("dist"), py::arg("kernel"), py::arg("kappa"), py::arg("mode") = "exact",
          py::arg("m") = 100, py::arg("seed") = 0);

    py::class_<VotingComparison>(m, "VotingComparison")
        .def_readonly("inner_prob_acc", &VotingComparison::inner_prob_acc)
        .def_readonly("seeds", &VotingComparison::seeds)
        .def_readonly("voting_prob_acc", &VotingComparison::voting_prob_acc)
        .def_readonly("deltas", &VotingComparison::deltas)
        .def_readonly("mean_delta", &VotingComparison::mean_delta)
        .def_readonly("ci_low", &VotingComparison::ci_low)
        .def_readonly("ci_high", &VotingComparison::ci_high);
    m.def("compare_voting", &compare_voting, py::arg("inner"), py::arg("dist"), py::arg("kernel"), py::arg("kappa"),
          py::arg("m"), py::arg("seeds"));

    py::class_<SampleSizeRow>(m, "SampleSizeRow")
        .def_readonly("m", &SampleSizeRow::m)
        .def_readonly("mean", &SampleSizeRow::mean)
        .def_readonly("stddev", &SampleSizeRow::stddev)
        .def_readonly("values", &SampleSizeRow::values);
    m.def("sample_size_study", &sample_size_study, py::arg("inner"), py::arg("dist"), py::arg("kernel"),
          py::arg("kappa"), py::arg("m_list"), py::arg("trials"), py::arg("base_seed") = 0);

    // geometry
    m.def("overlap", [](const VicinityKernel& k, const std::vector<double>& shift) { return overlap(k, shift).value; });
    m.def("max_mu_change", &max_mu_change);
    m.def("min_adv_distance", &min_adv_distance);
    m.def("solve_shrink_numeric", &solve_shrink_numeric);
    m.def("directional_derivative_bound", &directional_derivative_bound);
}
