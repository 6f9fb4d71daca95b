// spikeform: command-line front end for the spiked-covariance asymptotics
// library.  Four subcommands:
//
//   theory     evaluate one closed-form limit from the formula registry
//   simulate   run a config-driven Monte Carlo experiment and verify it
//   reproduce  run the two reference experiments (gaussian / ellipse pair
//              covariance at p=200, n=300) against their published values
//   verify     re-check the verdicts stored in a JSON report
//
// Exit codes: 0 = all verdicts pass, 1 = some verdict failed, 2 = usage or
// config error.
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spikeform/config.hpp"
#include "spikeform/errors.hpp"
#include "spikeform/linalg.hpp"
#include "spikeform/mp_core.hpp"
#include "spikeform/report.hpp"
#include "spikeform/sesquilinear.hpp"
#include "spikeform/simulate.hpp"
#include "spikeform/spiked_theory.hpp"

namespace {

using namespace spikeform;

// ----------------------------------------------------------------------
// theory subcommand
// ----------------------------------------------------------------------

struct TheoryArgs {
    std::string formula;
    double a = 0.0, a2 = 0.0, y = 0.0, nu4 = 0.0;
    bool has_a = false, has_a2 = false, has_y = false, has_nu4 = false;
    std::string dist;   // "", "gaussian", "uniform_iid" or "ellipse:A,B"
    std::size_t n = 0;  // sample size for raw-scale output (0 = not given)
    int powers = 2;     // moment count for the quadform covariance
};

struct FormulaInfo {
    const char* name;
    const char* args;
    const char* what;
};

constexpr FormulaInfo kRegistry[] = {
    {"phi", "--a --y", "spike-to-eigenvalue map a + y a/(a-1)"},
    {"m0..m7", "--a --y", "spectral integrals against F_y at l = phi(a)"},
    {"theta", "--a --y", "t^2/q with s = a-1, q = s^2-y, t = a-1+y"},
    {"w", "--a --y", "t^2/s^2"},
    {"theta-cross", "--a --a2 --y", "t_i t_j / (s_i s_j - y) for two spikes"},
    {"w-cross", "--a --a2 --y", "t_i t_j / (s_i s_j) for two spikes"},
    {"eig-var", "--y + model [--n]", "variance limit of sqrt(n)(l_i - phi(a_i))"},
    {"eig-cov", "--y + model [--n]", "covariance limit for the top two spikes"},
    {"eigvec-joint", "--a --y [--nu4]", "joint law of (u_i(i)^2, l_i) for one spike"},
    {"abjoint", "--a --y [--nu4]", "resolvent-pair trace limits and 2x2 block"},
    {"quadform", "--y [--powers] [--nu4]", "moment-vector covariance matrix"},
};

std::string registry_text() {
    std::ostringstream out;
    out << "theory formulas (values print with 12 significant digits):\n";
    for (const FormulaInfo& f : kRegistry) {
        char line[160];
        std::snprintf(line, sizeof line, "  %-14s %-24s %s\n", f.name, f.args, f.what);
        out << line;
    }
    out << "model selection: --a [--a2] with --dist gaussian|uniform_iid (default\n"
           "gaussian), or --dist ellipse:A,B (spikes derived as A^2/4, B^2/4);\n"
           "--nu4 is the excess kurtosis of the standardized coordinates (gaussian 0).\n";
    return out.str();
}

double need(const TheoryArgs& t, char which) {
    switch (which) {
        case 'a':
            if (!t.has_a) throw UsageError(t.formula + " requires --a");
            return t.a;
        case '2':
            if (!t.has_a2) throw UsageError(t.formula + " requires --a2");
            return t.a2;
        default:
            if (!t.has_y) throw UsageError(t.formula + " requires --y");
            return t.y;
    }
}

void print_value(const std::string& name, const std::string& formula, double v) {
    if (formula.empty())
        std::printf("%s = %.12g\n", name.c_str(), v);
    else
        std::printf("%s (%s) = %.12g\n", name.c_str(), formula.c_str(), v);
}

// model for eig-var / eig-cov: either explicit spikes with a named coordinate
// law, or the ellipse with derived spikes
spiked::SpikeModel model_from(const TheoryArgs& t) {
    const std::string dist = t.dist.empty() ? "gaussian" : t.dist;
    if (dist.rfind("ellipse:", 0) == 0) {
        const std::string axes = dist.substr(8);
        const std::size_t comma = axes.find(',');
        if (comma == std::string::npos) throw UsageError("--dist ellipse:A,B needs two axes");
        return spiked::ellipse_model(std::stod(axes.substr(0, comma)),
                                     std::stod(axes.substr(comma + 1)));
    }
    std::vector<double> spikes{need(t, 'a')};
    if (t.has_a2) spikes.push_back(t.a2);
    if (dist == "gaussian") return spiked::gaussian_model(spikes);
    if (dist == "uniform_iid") {
        std::vector<double> fourth;
        for (double a : spikes) fourth.push_back(1.8 * a * a);  // E[(sqrt(3a) U)^4]
        return spiked::independent_model(spikes, fourth);
    }
    throw UsageError("unknown --dist '" + dist + "' (gaussian, uniform_iid, ellipse:A,B)");
}

int cmd_theory(const TheoryArgs& t) {
    const std::string& f = t.formula;
    if (f == "phi") {
        print_value("phi", "a + y a/(a-1)", mp::phase_phi(need(t, 'a'), need(t, 'y')));
        return 0;
    }
    if (f.size() == 2 && f[0] == 'm' && f[1] >= '0' && f[1] <= '7') {
        static const char* integrand[8] = {"1/(l-x)",     "x/(l-x)",     "x^2/(l-x)^2",
                                           "x/(l-x)^2",   "1/(l-x)^2",   "x/(l-x)^3",
                                           "x^2/(l-x)^4", "x^2/(l-x)^3"};
        const int k = f[1] - '0';
        const double a = need(t, 'a'), y = need(t, 'y');
        const std::string label = "integral of " + std::string(integrand[k]) +
                                  " dF_y at l = phi(a)";
        print_value(f, label, mp::mp_integral_closed(static_cast<mp::Kind>(k), a, y));
        return 0;
    }
    if (f == "theta" || f == "w") {
        const spiked::ThetaW tw = spiked::theta_w_single(need(t, 'a'), need(t, 'y'));
        if (f == "theta")
            print_value("theta", "t^2/q, s = a-1, q = s^2-y, t = a-1+y", tw.theta);
        else
            print_value("w", "t^2/s^2, s = a-1, t = a-1+y", tw.w);
        return 0;
    }
    if (f == "theta-cross" || f == "w-cross") {
        const spiked::ThetaW tw =
            spiked::theta_w_cross(need(t, 'a'), need(t, '2'), need(t, 'y'));
        if (f == "theta-cross")
            print_value("theta-cross", "t_i t_j / (s_i s_j - y)", tw.theta);
        else
            print_value("w-cross", "t_i t_j / (s_i s_j)", tw.w);
        return 0;
    }
    if (f == "eig-var") {
        const double y = need(t, 'y');
        const spiked::SpikeModel model = model_from(t);
        for (std::size_t i = 0; i < model.M; ++i) {
            const double v = spiked::eigen_variance(model, y, i);
            char name[64], label[96];
            std::snprintf(name, sizeof name, "eig-var[%zu]", i + 1);
            std::snprintf(label, sizeof label,
                          "limit var of sqrt(n)(l_%zu - phi(a_%zu)), a_%zu = %g", i + 1,
                          i + 1, i + 1, model.spike(i));
            print_value(name, label, v);
            if (t.n > 0) {
                std::snprintf(name, sizeof name, "eig-var[%zu]/n", i + 1);
                std::snprintf(label, sizeof label, "var(l_%zu) at n = %zu", i + 1, t.n);
                print_value(name, label, v / static_cast<double>(t.n));
            }
        }
        return 0;
    }
    if (f == "eig-cov") {
        const double y = need(t, 'y');
        const spiked::SpikeModel model = model_from(t);
        if (model.M < 2) throw UsageError("eig-cov needs two spikes (--a2 or ellipse)");
        const double c = spiked::eigen_joint_cov(model, y, 0, 1);
        print_value("eig-cov", "limit cov of sqrt(n)-centered (l_1, l_2)", c);
        if (t.n > 0) {
            char label[64];
            std::snprintf(label, sizeof label, "cov(l_1, l_2) at n = %zu", t.n);
            print_value("eig-cov/n", label, c / static_cast<double>(t.n));
        }
        return 0;
    }
    if (f == "eigvec-joint") {
        const spiked::EigvecJoint ej =
            spiked::eigvec_joint(need(t, 'a'), need(t, 'y'), t.nu4);
        print_value("mean_proj", "q/(s t)", ej.mean_proj);
        print_value("v11", "var limit of sqrt(n)(u^2 - q/(s t))", ej.v11);
        print_value("v12", "cov limit of the projection and the eigenvalue", ej.v12);
        print_value("v22", "var limit of sqrt(n)(l - phi(a))", ej.v22);
        print_value("v12_alt", "alternative v12 rendering; fails the Cauchy-Schwarz "
                               "bound and the block reconstruction",
                    ej.v12_alt);
        return 0;
    }
    if (f == "abjoint") {
        const spiked::AbJoint ab = spiked::abjoint_quantities(need(t, 'a'), need(t, 'y'));
        print_value("lambda", "phi(a)", ab.lambda);
        print_value("alpha", "y/s", ab.alpha);
        print_value("beta", "y/q", ab.beta);
        print_value("w1", "Hadamard-trace limit of the first pair", ab.w1);
        print_value("w2", "Hadamard-trace limit of the second pair", ab.w2);
        print_value("w3", "Hadamard-trace limit of the mixed pair", ab.w3);
        print_value("tau1", "product-trace limit of the first pair", ab.tau1);
        print_value("tau2", "product-trace limit of the second pair", ab.tau2);
        print_value("tau3", "product-trace limit of the mixed pair", ab.tau3);
        if (t.has_nu4) {
            const la::Matrix B = spiked::abjoint_blocks(t.a, t.y, t.nu4);
            print_value("B11", "a^2 (w1 nu4 + 2 tau1)", B(0, 0));
            print_value("B12", "a^2 (w3 nu4 + 2 tau3)", B(0, 1));
            print_value("B22", "a^2 (w2 nu4 + 2 tau2)", B(1, 1));
        }
        return 0;
    }
    if (f == "quadform") {
        const double y = need(t, 'y');
        if (t.powers < 1) throw UsageError("quadform requires --powers >= 1");
        // the covariance builder takes the raw fourth moment of the entries
        const sesq::CovBlock block =
            sesq::quadform_covariance(t.powers, y, 3.0 + t.nu4);
        std::printf("quadform covariance, %d x %d, y = %.12g, excess kurtosis = %g:\n",
                    t.powers + 1, t.powers + 1, y, t.nu4);
        for (std::size_t r = 0; r < block.M.rows(); ++r) {
            for (std::size_t c = 0; c < block.M.cols(); ++c)
                std::printf("%s%.12g", c ? "  " : "  ", block.M(r, c));
            std::printf("\n");
        }
        return 0;
    }
    throw UsageError("unknown formula '" + f + "'");
}

// ----------------------------------------------------------------------
// shared run/report plumbing
// ----------------------------------------------------------------------

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << text;
}

void emit_report(const rep::Report& report, const std::string& format,
                 const std::string& out_dir) {
    if (format == "json")
        std::fputs(rep::to_json(report).c_str(), stdout);
    else if (format == "csv")
        std::fputs(rep::to_csv(report).c_str(), stdout);
    else
        std::fputs(rep::to_table(report).c_str(), stdout);
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        write_text_file(out_dir + "/report.json", rep::to_json(report));
    }
}

// theory value for one spiked-experiment target: asymptotic scale plus the
// divisor that maps it to the raw scale at finite n
struct TheoryRow {
    double asymptotic;
    double scale;
};

TheoryRow spiked_target_theory(const cfg::ExperimentConfig& config, const sim::Target& t) {
    const double y = config.theory_y();
    const double n = static_cast<double>(config.spiked.n);
    const std::vector<double> spikes = config.spiked.dist.spike_values();
    const spiked::SpikeModel model = config.spiked.dist.model();
    switch (t.kind) {
        case sim::TargetKind::EigMean:
            return {mp::phase_phi(spikes[t.i], y), 1.0};
        case sim::TargetKind::EigVar:
            return {spiked::eigen_variance(model, y, t.i), n};
        case sim::TargetKind::EigPairCov:
            return {spiked::eigen_joint_cov(model, y, t.i, t.j), n};
        case sim::TargetKind::ProjMean:
            return {spiked::eigvec_joint(spikes[t.i], y, config.spiked.dist.nu4(t.i))
                        .mean_proj,
                    1.0};
        case sim::TargetKind::ProjVar:
            return {spiked::eigvec_joint(spikes[t.i], y, config.spiked.dist.nu4(t.i)).v11,
                    n};
        default:
            return {spiked::eigvec_joint(spikes[t.i], y, config.spiked.dist.nu4(t.i)).v12,
                    n};
    }
}

// --dry-run: validate, print the theory side of every target, run nothing
int dry_run(const cfg::ExperimentConfig& config) {
    std::printf("dry-run: config OK (%s)\n", config.source.c_str());
    switch (config.experiment) {
        case cfg::ExperimentKind::Spiked: {
            const double y = config.theory_y();
            std::printf("spiked experiment: y = %.12g%s\n", y,
                        config.has_pn ? "" : " (y given directly; not runnable)");
            // default to the full per-spike target set when none are configured
            std::vector<sim::Target> targets = config.targets;
            if (targets.empty()) {
                const std::size_t M = config.spiked.dist.M();
                for (std::size_t i = 0; i < M; ++i) {
                    targets.push_back({sim::TargetKind::EigMean, i, 0});
                    targets.push_back({sim::TargetKind::EigVar, i, 0});
                    targets.push_back({sim::TargetKind::ProjMean, i, 0});
                    targets.push_back({sim::TargetKind::ProjVar, i, 0});
                    targets.push_back({sim::TargetKind::ProjEigCov, i, 0});
                    for (std::size_t j = i + 1; j < M; ++j)
                        targets.push_back({sim::TargetKind::EigPairCov, i, j});
                }
            }
            std::printf("%-22s %16s%s\n", "target", "theory",
                        config.has_pn ? "      theory(raw)" : "");
            for (const sim::Target& t : targets) {
                const TheoryRow row = spiked_target_theory(config, t);
                std::printf("%-22s %16.10g", cfg::target_spec(t).c_str(), row.asymptotic);
                if (config.has_pn) std::printf(" %16.10g", row.asymptotic / row.scale);
                std::printf("\n");
            }
            break;
        }
        case cfg::ExperimentKind::Quadform: {
            const double yn = config.quadform.y_n();
            const sesq::CovBlock block =
                sesq::quadform_covariance(config.quadform.powers, yn, 3.0);
            std::printf("quadform experiment: n = %zu, k = %zu, y_n = %.12g\n",
                        config.quadform.n, config.quadform.k, yn);
            std::printf("theory covariance (%zu x %zu):\n", block.M.rows(), block.M.cols());
            for (std::size_t r = 0; r < block.M.rows(); ++r) {
                for (std::size_t c = 0; c < block.M.cols(); ++c)
                    std::printf("  %.10g", block.M(r, c));
                std::printf("\n");
            }
            break;
        }
        case cfg::ExperimentKind::Forms: {
            config.require_runnable();
            const la::Matrix A = cfg::read_matrix_csv(config.matrix_a);
            const la::Matrix B = cfg::read_matrix_csv(config.matrix_b);
            if (A.rows() != config.forms.n || B.rows() != config.forms.n)
                throw ConfigError(config.source + ": matrix dimensions disagree with n");
            const sesq::CovBlock block = sesq::covariance_blocks(
                sesq::trace_limits_pair(A, A), sesq::trace_limits_pair(B, B),
                sesq::trace_limits_pair(A, B),
                sim::forms_moment_table(config.forms.rho1, config.forms.rho2));
            std::printf("forms experiment: n = %zu, rho1 = %g, rho2 = %g\n", config.forms.n,
                        config.forms.rho1, config.forms.rho2);
            std::printf("theory covariance (4 x 4):\n");
            for (std::size_t r = 0; r < 4; ++r) {
                for (std::size_t c = 0; c < 4; ++c) std::printf("  %.10g", block.M(r, c));
                std::printf("\n");
            }
            break;
        }
    }
    return 0;
}

// ----------------------------------------------------------------------
// simulate subcommand
// ----------------------------------------------------------------------

struct SimulateArgs {
    std::string config_path;
    std::uint64_t seed = 0;
    int reps = 0;
    double z = 0.0;
    bool has_seed = false, has_reps = false, has_z = false;
    std::string out_dir;
    std::string format = "table";
    bool dry = false;
};

int cmd_simulate(const SimulateArgs& args) {
    cfg::ExperimentConfig config = cfg::parse_config_file(args.config_path);
    if (args.has_seed) {
        config.spiked.master_seed = args.seed;
        config.quadform.master_seed = args.seed;
        config.forms.master_seed = args.seed;
    }
    if (args.has_reps) {
        config.spiked.R = args.reps;
        config.quadform.R = args.reps;
        config.forms.R = args.reps;
    }
    if (args.has_z) {
        if (!(args.z > 0.0)) throw UsageError("--z must be positive");
        config.z = args.z;
    }
    if (args.dry) return dry_run(config);

    config.require_runnable();
    rep::Report report;
    switch (config.experiment) {
        case cfg::ExperimentKind::Spiked: {
            const sim::SpikedResult result = sim::run_spiked(config.spiked);
            const sim::VerifyResult verify = sim::verify_spiked(
                config.spiked, result, config.targets, config.z, config.centering);
            report = rep::make_report(config, result, verify);
            if (!config.csv_dump.empty()) {
                std::string path = config.csv_dump;
                if (!args.out_dir.empty() &&
                    !std::filesystem::path(path).is_absolute()) {
                    std::filesystem::create_directories(args.out_dir);
                    path = args.out_dir + "/" + path;
                }
                rep::write_replicate_csv(path, result);
            }
            break;
        }
        case cfg::ExperimentKind::Quadform: {
            const sim::QuadformResult result = sim::run_quadform(config.quadform);
            report = rep::make_report(config, result);
            break;
        }
        case cfg::ExperimentKind::Forms: {
            const la::Matrix A = cfg::read_matrix_csv(config.matrix_a);
            const la::Matrix B = cfg::read_matrix_csv(config.matrix_b);
            const sim::FormsResult result = sim::run_forms(config.forms, A, B);
            report = rep::make_report(config, result, A, B);
            break;
        }
    }
    emit_report(report, args.format, args.out_dir);
    return report.all_pass ? 0 : 1;
}

// ----------------------------------------------------------------------
// reproduce subcommand
// ----------------------------------------------------------------------

struct ReproduceArgs {
    std::uint64_t seed = 31415926;
    int reps = 10000;
    double z = 4.0;
    std::string out_dir;
};

int cmd_reproduce(const ReproduceArgs& args) {
    struct Case {
        const char* name;
        sim::PopulationDist dist;
        double published;  // published raw-scale empirical cov(l_1, l_2)
    };
    std::vector<Case> cases(2);
    cases[0].name = "gaussian";
    cases[0].dist.kind = sim::DistKind::GaussianDiag;
    cases[0].dist.spikes = {9.0, 4.0};
    cases[0].published = 0.0019;
    cases[1].name = "ellipse";
    cases[1].dist.kind = sim::DistKind::UniformEllipse;
    cases[1].dist.A = 6.0;
    cases[1].dist.B = 4.0;
    cases[1].published = -0.0371;

    std::printf("%-9s %-13s %13s %13s %13s %12s  %s\n", "case", "quantity", "theory",
                "published", "ours", "SE", "verdict");
    std::printf("%s\n", std::string(94, '-').c_str());

    bool all_pass = true;
    for (const Case& c : cases) {
        sim::SpikedConfig config;
        config.p = 200;
        config.n = 300;
        config.dist = c.dist;
        config.R = args.reps;
        config.master_seed = args.seed;
        config.workers = 0;  // all cores
        const sim::SpikedResult result = sim::run_spiked(config);
        const std::vector<sim::Target> targets{{sim::TargetKind::EigPairCov, 0, 1}};
        const sim::VerifyResult verify = sim::verify_spiked(
            config, result, targets, args.z, sim::Centering::Empirical);
        const sim::TargetResult& t = verify.targets.at(0);
        all_pass = all_pass && verify.all_pass;
        std::printf("%-9s %-13s %13.6g %13.6g %13.6g %12.4g  %s\n", c.name, "cov(l_1,l_2)",
                    t.theory_raw, c.published, t.empirical_raw, t.se_raw,
                    t.pass ? "pass" : "FAIL");
        // the published empirical value must sit inside the same acceptance band
        const bool published_ok =
            std::abs(c.published - t.theory_raw) < args.z * t.se_raw;
        std::printf("%-9s %-13s published value inside the %.3g*SE band: %s\n", c.name, "",
                    args.z, published_ok ? "yes" : "NO");
        all_pass = all_pass && published_ok;

        if (!args.out_dir.empty()) {
            cfg::ExperimentConfig full;
            full.spiked = config;
            full.has_pn = true;
            full.targets = targets;
            full.z = args.z;
            full.source = std::string("reproduce:") + c.name;
            std::filesystem::create_directories(args.out_dir);
            write_text_file(args.out_dir + "/reproduce_" + c.name + ".json",
                            rep::to_json(rep::make_report(full, result, verify)));
        }
    }
    std::printf("\nreproduce: %s (seed %llu, R = %d)\n", all_pass ? "PASS" : "FAIL",
                static_cast<unsigned long long>(args.seed), args.reps);
    return all_pass ? 0 : 1;
}

// ----------------------------------------------------------------------
// verify subcommand
// ----------------------------------------------------------------------

int cmd_verify(const std::string& report_path, double z, bool has_z,
               const std::string& format) {
    std::ifstream in(report_path, std::ios::binary);
    if (!in) throw ConfigError("cannot open report '" + report_path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    rep::Report report = rep::from_json(buf.str());
    const bool ok = rep::reverify(report, has_z ? z : report.run.z);
    if (format == "json")
        std::fputs(rep::to_json(report).c_str(), stdout);
    else if (format == "csv")
        std::fputs(rep::to_csv(report).c_str(), stdout);
    else
        std::fputs(rep::to_table(report).c_str(), stdout);
    return ok ? 0 : 1;
}

// --y accepts plain decimals and exact fractions ("2/3")
double parse_ratio(const std::string& text) {
    const std::size_t slash = text.find('/');
    try {
        std::size_t pos = 0;
        if (slash == std::string::npos) {
            const double v = std::stod(text, &pos);
            if (pos != text.size()) throw std::invalid_argument("trailing");
            return v;
        }
        const double num = std::stod(text.substr(0, slash), &pos);
        const double den = std::stod(text.substr(slash + 1));
        if (den == 0.0) throw std::invalid_argument("zero denominator");
        return num / den;
    } catch (const std::exception&) {
        throw UsageError("--y: expected a number or a fraction p/q, got '" + text + "'");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spiked-covariance asymptotics: closed-form limits and Monte Carlo "
                 "verification"};
    app.require_subcommand(1);

    // ---- theory
    TheoryArgs th;
    std::string th_y;
    CLI::App* theory = app.add_subcommand("theory", "evaluate one closed-form limit");
    theory->add_option("formula", th.formula, "formula name (see listing on error)")
        ->required();
    CLI::Option* opt_a = theory->add_option("--a", th.a, "first spike value");
    CLI::Option* opt_a2 = theory->add_option("--a2", th.a2, "second spike value");
    CLI::Option* opt_y = theory->add_option("--y", th_y, "aspect ratio (number or p/q)");
    CLI::Option* opt_nu4 =
        theory->add_option("--nu4", th.nu4, "excess kurtosis of the coordinates");
    theory->add_option("--dist", th.dist, "gaussian | uniform_iid | ellipse:A,B");
    theory->add_option("--n", th.n, "sample size for raw-scale output");
    theory->add_option("--powers", th.powers, "moment count for quadform (default 2)");

    // ---- simulate
    SimulateArgs sa;
    CLI::App* simulate =
        app.add_subcommand("simulate", "run and verify a config-driven experiment");
    simulate->add_option("--config", sa.config_path, "experiment config file")->required();
    CLI::Option* s_seed = simulate->add_option("--seed", sa.seed, "master seed override");
    CLI::Option* s_reps = simulate->add_option("--reps", sa.reps, "replicate override");
    CLI::Option* s_z = simulate->add_option("--z", sa.z, "verdict threshold override");
    simulate->add_option("--out", sa.out_dir, "directory for report.json and CSV dumps");
    simulate->add_option("--format", sa.format, "stdout format: table | json | csv")
        ->check(CLI::IsMember({"table", "json", "csv"}));
    simulate->add_flag("--dry-run", sa.dry, "validate and print theory targets only");

    // ---- reproduce
    ReproduceArgs ra;
    CLI::App* reproduce = app.add_subcommand(
        "reproduce", "run the two reference pair-covariance experiments");
    reproduce->add_option("--seed", ra.seed, "master seed (default 31415926)");
    reproduce->add_option("--reps", ra.reps, "replicates per case (default 10000)");
    reproduce->add_option("--z", ra.z, "verdict threshold (default 4)");
    reproduce->add_option("--out", ra.out_dir, "directory for the two JSON reports");

    // ---- verify
    std::string v_path, v_format = "table";
    double v_z = 0.0;
    CLI::App* verify = app.add_subcommand("verify", "re-check a stored JSON report");
    verify->add_option("report", v_path, "report.json produced by simulate")->required();
    CLI::Option* v_zopt = verify->add_option("--z", v_z, "re-verify at this threshold");
    verify->add_option("--format", v_format, "stdout format: table | json | csv")
        ->check(CLI::IsMember({"table", "json", "csv"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(theory)) {
            th.has_a = opt_a->count() > 0;
            th.has_a2 = opt_a2->count() > 0;
            th.has_y = opt_y->count() > 0;
            th.has_nu4 = opt_nu4->count() > 0;
            if (th.has_y) th.y = parse_ratio(th_y);
            return cmd_theory(th);
        }
        if (app.got_subcommand(simulate)) {
            sa.has_seed = s_seed->count() > 0;
            sa.has_reps = s_reps->count() > 0;
            sa.has_z = s_z->count() > 0;
            return cmd_simulate(sa);
        }
        if (app.got_subcommand(reproduce)) return cmd_reproduce(ra);
        if (app.got_subcommand(verify))
            return cmd_verify(v_path, v_z, v_zopt->count() > 0, v_format);
    } catch (const UsageError& e) {
        std::fprintf(stderr, "usage error: %s\n\n%s", e.what(), registry_text().c_str());
        return 2;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
