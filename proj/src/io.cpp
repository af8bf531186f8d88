#include "robound/io.hpp"

#include "robound/error.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace robound::io {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::InvalidArgument, what); }

json parse_json(const std::string& text, const char* what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        bad(std::string("malformed ") + what + ": " + e.what());
    }
}

template <class T>
T field(const json& j, const char* key) {
    if (!j.contains(key)) bad(std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        bad(std::string("field '") + key + "': " + e.what());
    }
}

std::vector<Interval> domain_from(const json& j) {
    std::vector<Interval> out;
    for (const auto& row : field<std::vector<std::vector<double>>>(j, "domain")) {
        if (row.size() != 2) bad("domain entries must be [lo, hi] pairs");
        out.push_back({row[0], row[1]});
    }
    return out;
}

json domain_to(const std::vector<Interval>& domain) {
    json out = json::array();
    for (const auto& iv : domain) out.push_back({iv.lo, iv.hi});
    return out;
}

std::vector<double> per_dim(const json& j, std::size_t n, const char* key) {
    const json& v = j.at(key);
    if (v.is_number()) return std::vector<double>(n, v.get<double>());
    return v.get<std::vector<double>>();
}

void check_format(const json& j, const char* format, int version) {
    if (field<std::string>(j, "format") != format) bad(std::string("expected a '") + format + "' document");
    const int v = field<int>(j, "version");
    if (v != version) {
        std::ostringstream os;
        os << format << " version " << v << " is not supported (expected " << version << ")";
        bad(os.str());
    }
}

json mode_to(const MuMode& mode) {
    if (const auto* mc = std::get_if<MonteCarloMode>(&mode)) {
        return {{"kind", "monte_carlo"}, {"m", mc->m}, {"seed", mc->seed}};
    }
    return {{"kind", "exact_grid"}};
}

}  // namespace

// ---------------------------------------------------------------------------

DistributionSpec parse_spec(const std::string& text, const std::filesystem::path& base_dir) {
    const json j = parse_json(text, "distribution spec");
    const int version = field<int>(j, "spec_version");
    if (version != kSpecVersion) {
        std::ostringstream os;
        os << "spec_version " << version << " is not supported (expected " << kSpecVersion << ")";
        bad(os.str());
    }
    DistributionSpec spec;
    spec.priors = field<std::vector<double>>(j, "priors");
    spec.domain = domain_from(j);
    spec.shape = field<std::vector<std::size_t>>(j, "shape");
    const std::size_t n = spec.domain.size();
    const std::string kind = field<std::string>(j, "kind");
    const json params = j.value("params", json::object());

    try {
        if (kind == "truncated_normal_mixture") {
            NormalMixtureParams p;
            for (const auto& cls : params.at("classes")) {
                std::vector<NormalComponent> comps;
                for (const auto& c : cls) {
                    comps.push_back({c.at("mean").get<std::vector<double>>(), per_dim(c, n, "std"),
                                     c.value("weight", 1.0)});
                }
                p.classes.push_back(std::move(comps));
            }
            spec.params = std::move(p);
        } else if (kind == "moons") {
            spec.params = MoonsParams{params.value("noise", 0.1), params.value("arc_points", std::size_t{1000})};
        } else if (kind == "uniform_boxes") {
            UniformBoxesParams p;
            for (const auto& cls : params.at("classes")) {
                std::vector<Box> boxes;
                for (const auto& b : cls) boxes.push_back({b.at("lo").get<std::vector<double>>(), b.at("hi").get<std::vector<double>>()});
                p.classes.push_back(std::move(boxes));
            }
            spec.params = std::move(p);
        } else if (kind == "kde_samples") {
            KdeParams p;
            if (params.contains("samples_file")) {
                std::filesystem::path path = params.at("samples_file").get<std::string>();
                if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
                p.samples = read_samples(path);
            } else if (params.contains("samples")) {
                std::ostringstream os;
                for (const auto& row : params.at("samples")) {
                    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i].dump();
                    os << '\n';
                }
                p.samples = parse_samples(os.str());
            } else {
                bad("kde_samples needs 'samples_file' or 'samples'");
            }
            if (params.contains("bandwidth") && !params.at("bandwidth").is_string()) {
                p.bandwidth = per_dim(params, n, "bandwidth");
            } else if (params.contains("bandwidth") && params.at("bandwidth").get<std::string>() != "scott") {
                bad("bandwidth must be 'scott', a number, or one number per dimension");
            }
            spec.params = std::move(p);
        } else {
            bad("unknown distribution kind '" + kind + "'");
        }
    } catch (const json::exception& e) {
        bad(std::string("params for ") + kind + ": " + e.what());
    }
    validate(spec);
    return spec;
}

DistributionSpec read_spec(const std::filesystem::path& path) {
    return parse_spec(read_text(path), path.parent_path());
}

std::string spec_to_json(const DistributionSpec& spec) {
    json j;
    j["spec_version"] = kSpecVersion;
    j["kind"] = spec.kind();
    j["priors"] = spec.priors;
    j["domain"] = domain_to(spec.domain);
    j["shape"] = spec.shape;
    json params = json::object();
    if (const auto* p = std::get_if<NormalMixtureParams>(&spec.params)) {
        json classes = json::array();
        for (const auto& cls : p->classes) {
            json comps = json::array();
            for (const auto& c : cls) comps.push_back({{"mean", c.mean}, {"std", c.stddev}, {"weight", c.weight}});
            classes.push_back(comps);
        }
        params["classes"] = classes;
    } else if (const auto* p = std::get_if<MoonsParams>(&spec.params)) {
        params = {{"noise", p->noise}, {"arc_points", p->arc_points}};
    } else if (const auto* p = std::get_if<UniformBoxesParams>(&spec.params)) {
        json classes = json::array();
        for (const auto& cls : p->classes) {
            json boxes = json::array();
            for (const auto& b : cls) boxes.push_back({{"lo", b.lo}, {"hi", b.hi}});
            classes.push_back(boxes);
        }
        params["classes"] = classes;
    } else if (const auto* p = std::get_if<KdeParams>(&spec.params)) {
        json rows = json::array();
        for (std::size_t i = 0; i < p->samples.points.size(); ++i) {
            json row = p->samples.points[i];
            row.push_back(p->samples.labels[i]);
            rows.push_back(row);
        }
        params["samples"] = rows;
        if (p->bandwidth.empty()) {
            params["bandwidth"] = "scott";
        } else {
            params["bandwidth"] = p->bandwidth;
        }
    }
    j["params"] = params;
    return j.dump(2);
}

// ---------------------------------------------------------------------------

LabeledSamples parse_samples(const std::string& text) {
    LabeledSamples out;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    bool seen_data = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        for (char& ch : line) {
            if (ch == ',' || ch == ';' || ch == '\t' || ch == '\r') ch = ' ';
        }
        std::istringstream row(line);
        std::vector<std::string> tokens;
        for (std::string tok; row >> tok;) tokens.push_back(tok);
        if (tokens.empty()) continue;

        std::vector<double> values;
        bool numeric = true;
        for (const auto& tok : tokens) {
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
            if (ec != std::errc() || ptr != tok.data() + tok.size()) {
                numeric = false;
                break;
            }
            values.push_back(v);
        }
        if (!numeric) {
            if (!seen_data) continue;  // header row
            std::ostringstream os;
            os << "sample line " << line_no << " is not numeric";
            bad(os.str());
        }
        seen_data = true;
        if (values.size() < 2) {
            std::ostringstream os;
            os << "sample line " << line_no << " needs at least one coordinate and a label";
            bad(os.str());
        }
        const double label = values.back();
        if (label < 0.0 || label != std::floor(label)) {
            std::ostringstream os;
            os << "sample line " << line_no << " has a non-integer label";
            bad(os.str());
        }
        values.pop_back();
        if (out.dim == 0) out.dim = values.size();
        if (values.size() != out.dim) {
            std::ostringstream os;
            os << "sample line " << line_no << " has " << values.size() << " coordinates, expected " << out.dim;
            bad(os.str());
        }
        out.points.push_back(std::move(values));
        out.labels.push_back(static_cast<std::size_t>(label));
    }
    return out;
}

LabeledSamples read_samples(const std::filesystem::path& path) { return parse_samples(read_text(path)); }

// ---------------------------------------------------------------------------

std::string grid_to_json(const GridDistribution& dist) {
    json j;
    j["format"] = "robound-grid";
    j["version"] = kGridVersion;
    j["domain"] = domain_to(dist.geometry().domain());
    j["shape"] = dist.geometry().shape();
    j["num_classes"] = dist.num_classes();
    j["densities"] = dist.class_densities();
    return j.dump();
}

GridDistribution grid_from_json(const std::string& text) {
    const json j = parse_json(text, "grid distribution");
    check_format(j, "robound-grid", kGridVersion);
    GridGeometry geom(domain_from(j), field<std::vector<std::size_t>>(j, "shape"));
    auto dens = field<std::vector<std::vector<double>>>(j, "densities");
    if (dens.size() != field<std::size_t>(j, "num_classes")) bad("num_classes does not match the density arrays");
    GridDistribution dist(std::move(geom), std::move(dens));
    const double mass = dist.total_mass();
    if (std::abs(mass - 1.0) > 1e-6) {
        std::ostringstream os;
        os.precision(10);
        os << "grid distribution is not normalised (mass " << mass << ")";
        bad(os.str());
    }
    return dist;
}

void write_grid(const GridDistribution& dist, const std::filesystem::path& path) {
    write_text(path, grid_to_json(dist));
}

GridDistribution read_grid(const std::filesystem::path& path) { return grid_from_json(read_text(path)); }

std::string classifier_to_json(const GridClassifier& classifier) {
    json j;
    j["format"] = "robound-classifier";
    j["version"] = kClassifierVersion;
    j["kind"] = to_string(classifier.kind());
    j["domain"] = domain_to(classifier.geometry().domain());
    j["shape"] = classifier.geometry().shape();
    j["num_classes"] = classifier.num_classes();
    j["labels"] = classifier.labels();
    return j.dump();
}

GridClassifier classifier_from_json(const std::string& text) {
    const json j = parse_json(text, "classifier");
    check_format(j, "robound-classifier", kClassifierVersion);
    GridGeometry geom(domain_from(j), field<std::vector<std::size_t>>(j, "shape"));
    return GridClassifier(std::move(geom), field<std::size_t>(j, "num_classes"),
                          field<std::vector<std::size_t>>(j, "labels"));
}

void write_classifier(const GridClassifier& classifier, const std::filesystem::path& path) {
    write_text(path, classifier_to_json(classifier));
}

GridClassifier read_classifier(const std::filesystem::path& path) { return classifier_from_json(read_text(path)); }

// ---------------------------------------------------------------------------

std::string bounds_to_json(const BoundsReport& report) {
    json j;
    j["format"] = "robound-bounds";
    j["version"] = kReportVersion;
    j["grid_shape"] = report.geometry.shape();
    j["domain"] = domain_to(report.geometry.domain());
    json entries = json::array();
    for (const auto& e : report.entries) {
        entries.push_back({
            {"kappa", e.kappa},
            {"eps", e.eps},
            {"shrunk_eps", e.shrunk_eps},
            {"p", to_string(e.p)},
            {"tau", e.tau},
            {"b_a", e.bayes_error},
            {"b_d", e.det_error},
            {"b_p", e.prob_error},
            {"acc_bounds", {{"vanilla", e.vanilla_acc_bound()}, {"det", e.det_acc_bound()}, {"prob", e.prob_acc_bound()}}},
        });
    }
    j["entries"] = entries;
    return j.dump(2);
}

std::string sweep_to_csv(const BoundsReport& report) {
    std::ostringstream os;
    os.precision(10);
    os << "kappa,acc_bound\n";
    for (const auto& e : report.entries) os << e.kappa << ',' << e.prob_acc_bound() << '\n';
    return os.str();
}

std::string report_to_json(const RobustnessReport& report) {
    json j;
    j["format"] = "robound-report";
    j["version"] = kReportVersion;
    j["vanilla_acc"] = report.vanilla_acc;
    j["det_robust_acc"] = report.det_robust_acc ? json(*report.det_robust_acc) : json(nullptr);
    j["prob_robust_acc"] = report.prob_robust_acc;
    j["prob_robust_stderr"] = report.prob_robust_stderr;
    j["kappa"] = report.kappa;
    j["eps"] = report.kernel.eps;
    j["p"] = to_string(report.kernel.p);
    j["mode"] = mode_to(report.mode);
    return j.dump(2);
}

// ---------------------------------------------------------------------------

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw Error(ErrorCode::Io, "write to '" + path.string() + "' failed");
}

}  // namespace robound::io
