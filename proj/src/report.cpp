// Report assembly and rendering.
#include "spikeform/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "spikeform/errors.hpp"
#include "spikeform/sesquilinear.hpp"

namespace spikeform::rep {

namespace {

using nlohmann::json;

double zscore_of(double empirical, double theory, double se) {
    if (se > 0.0) return std::abs(empirical - theory) / se;
    return empirical == theory ? 0.0 : HUGE_VAL;
}

std::string dist_string(const sim::PopulationDist& d) {
    std::ostringstream out;
    switch (d.kind) {
        case sim::DistKind::GaussianDiag:
            out << "gaussian spikes=[";
            break;
        case sim::DistKind::UniformIid:
            out << "uniform_iid spikes=[";
            break;
        case sim::DistKind::UniformEllipse:
            out << "ellipse A=" << d.A << " B=" << d.B;
            return out.str();
    }
    const auto& s = d.spikes;
    for (std::size_t i = 0; i < s.size(); ++i) out << (i ? ", " : "") << s[i];
    out << "]";
    return out.str();
}

// shared scaffolding for the two vector experiments (quadform / forms):
// columns -> mean and covariance targets against an exact covariance matrix
void add_vector_targets(Report& rep, const std::vector<std::vector<double>>& col,
                        const la::Matrix& theory, const std::vector<double>& mean_theory,
                        const char* mean_label, const char* cov_label, double z) {
    const std::size_t d = col.size();
    for (std::size_t a = 0; a < d; ++a) {
        if (mean_theory.empty()) break;
        ReportTarget t;
        t.label = std::string(mean_label) + "[" + std::to_string(a + 1) + "]";
        t.kind = "mean";
        t.i = a + 1;
        const sim::Stat s = sim::mean_se(col[a]);
        t.theory_asymptotic = t.theory_raw = mean_theory[a];
        t.empirical_asymptotic = t.empirical_raw = s.value;
        t.se_asymptotic = t.se_raw = s.se;
        t.zscore = zscore_of(s.value, mean_theory[a], s.se);
        t.pass = t.zscore < z;
        t.R = static_cast<int>(col[a].size());
        rep.targets.push_back(std::move(t));
    }
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = a; b < d; ++b) {
            ReportTarget t;
            t.label = std::string(cov_label) + "[" + std::to_string(a + 1) + "," +
                      std::to_string(b + 1) + "]";
            t.kind = "cov";
            t.i = a + 1;
            t.j = b + 1;
            const sim::Stat s = (a == b)
                                    ? sim::var_se(col[a], sim::Centering::Empirical)
                                    : sim::cov_se(col[a], col[b], sim::Centering::Empirical);
            t.theory_asymptotic = t.theory_raw = theory(a, b);
            t.empirical_asymptotic = t.empirical_raw = s.value;
            t.se_asymptotic = t.se_raw = s.se;
            t.zscore = zscore_of(s.value, theory(a, b), s.se);
            t.pass = t.zscore < z;
            t.R = static_cast<int>(col[a].size());
            rep.targets.push_back(std::move(t));
        }
    rep.no_targets = rep.targets.empty();
    rep.all_pass = rep.budget_ok;
    for (const auto& t : rep.targets) rep.all_pass = rep.all_pass && t.pass;
}

}  // namespace

Report make_report(const cfg::ExperimentConfig& config, const sim::SpikedResult& result,
                   const sim::VerifyResult& verify) {
    Report rep;
    rep.run.experiment = "spiked";
    rep.run.R_requested = result.R_requested;
    rep.run.R_effective = result.R_effective;
    rep.run.R_discarded = result.R_discarded;
    rep.run.sep_warnings = result.sep_warnings;
    rep.run.master_seed = config.spiked.master_seed;
    rep.run.z = verify.z_threshold;
    rep.run.centering =
        config.centering == sim::Centering::Empirical ? "empirical" : "theoretical";
    rep.run.p = config.spiked.p;
    rep.run.n = config.spiked.n;
    rep.run.y = config.theory_y();
    rep.run.dist = dist_string(config.spiked.dist);
    for (const sim::TargetResult& t : verify.targets) {
        ReportTarget r;
        r.label = t.label;
        r.kind = cfg::target_kind_name(t.target.kind);
        r.i = t.target.i + 1;
        r.j = t.target.kind == sim::TargetKind::EigPairCov ? t.target.j + 1 : 0;
        r.theory_asymptotic = t.theory_asymptotic;
        r.empirical_asymptotic = t.empirical_asymptotic;
        r.se_asymptotic = t.se_asymptotic;
        r.theory_raw = t.theory_raw;
        r.empirical_raw = t.empirical_raw;
        r.se_raw = t.se_raw;
        r.zscore = t.zscore;
        r.pass = t.pass;
        r.R = result.R_effective;
        rep.targets.push_back(std::move(r));
    }
    rep.budget_ok = verify.budget_ok;
    rep.no_targets = verify.no_targets;
    rep.all_pass = verify.all_pass;
    return rep;
}

Report make_report(const cfg::ExperimentConfig& config, const sim::QuadformResult& result) {
    Report rep;
    rep.run.experiment = "quadform";
    rep.run.R_requested = result.R_requested;
    rep.run.R_effective = result.R_effective;
    rep.run.master_seed = config.quadform.master_seed;
    rep.run.z = config.z;
    rep.run.n = config.quadform.n;
    rep.run.k = config.quadform.k;
    rep.run.powers = config.quadform.powers;
    rep.run.y = config.quadform.y_n();
    rep.run.dist = "gaussian entries";
    const std::size_t d = static_cast<std::size_t>(config.quadform.powers) + 1;
    std::vector<std::vector<double>> col(d);
    for (const auto& r : result.reps)
        for (std::size_t c = 0; c < d; ++c) col[c].push_back(r[c]);
    // Gaussian entries: raw fourth moment 3.  Means are not gated: the
    // centering constant differs from the finite-n mean at O(n^{-1/2}).
    const sesq::CovBlock theory =
        sesq::quadform_covariance(config.quadform.powers, config.quadform.y_n(), 3.0);
    add_vector_targets(rep, col, theory.M, {}, "quad_mean", "quad_cov", config.z);
    return rep;
}

Report make_report(const cfg::ExperimentConfig& config, const sim::FormsResult& result,
                   const la::Matrix& A, const la::Matrix& B) {
    Report rep;
    rep.run.experiment = "forms";
    rep.run.R_requested = result.R_requested;
    rep.run.R_effective = result.R_effective;
    rep.run.master_seed = config.forms.master_seed;
    rep.run.z = config.z;
    rep.run.n = config.forms.n;
    rep.run.rho1 = config.forms.rho1;
    rep.run.rho2 = config.forms.rho2;
    rep.run.matrix_a = config.matrix_a;
    rep.run.matrix_b = config.matrix_b;
    rep.run.dist = "gaussian pairs";
    std::vector<std::vector<double>> col(4);
    for (const auto& r : result.reps)
        for (std::size_t c = 0; c < 4; ++c) col[c].push_back(r[c]);
    const sesq::JointMomentTable table =
        sim::forms_moment_table(config.forms.rho1, config.forms.rho2);
    const sesq::TraceLimits tl_aa = sesq::trace_limits_pair(A, A);
    const sesq::TraceLimits tl_bb = sesq::trace_limits_pair(B, B);
    const sesq::TraceLimits tl_ab = sesq::trace_limits_pair(A, B);
    const sesq::CovBlock theory = sesq::covariance_blocks(tl_aa, tl_bb, tl_ab, table);
    // the centered scaled forms have exact mean zero
    add_vector_targets(rep, col, theory.M, {0.0, 0.0, 0.0, 0.0}, "form_mean", "form_cov",
                       config.z);
    return rep;
}

// ----------------------------------------------------------------------
// JSON
// ----------------------------------------------------------------------

std::string to_json(const Report& r) {
    json run{{"experiment", r.run.experiment},
             {"R_requested", r.run.R_requested},
             {"R_effective", r.run.R_effective},
             {"R_discarded", r.run.R_discarded},
             {"sep_warnings", r.run.sep_warnings},
             {"master_seed", r.run.master_seed},
             {"z", r.run.z},
             {"centering", r.run.centering},
             {"n", r.run.n},
             {"y", r.run.y}};
    if (r.run.experiment == "spiked") {
        run["p"] = r.run.p;
        run["dist"] = r.run.dist;
    } else if (r.run.experiment == "quadform") {
        run["k"] = r.run.k;
        run["powers"] = r.run.powers;
    } else if (r.run.experiment == "forms") {
        run["rho1"] = r.run.rho1;
        run["rho2"] = r.run.rho2;
        run["matrix_a"] = r.run.matrix_a;
        run["matrix_b"] = r.run.matrix_b;
    }
    json targets = json::array();
    for (const ReportTarget& t : r.targets)
        targets.push_back({{"label", t.label},
                           {"kind", t.kind},
                           {"i", t.i},
                           {"j", t.j},
                           {"theory_asymptotic", t.theory_asymptotic},
                           {"empirical_asymptotic", t.empirical_asymptotic},
                           {"se_asymptotic", t.se_asymptotic},
                           {"theory_raw", t.theory_raw},
                           {"empirical_raw", t.empirical_raw},
                           {"se_raw", t.se_raw},
                           {"zscore", t.zscore},
                           {"pass", t.pass},
                           {"R", t.R}});
    json doc{{"schema", r.schema},
             {"run", run},
             {"targets", targets},
             {"budget_ok", r.budget_ok},
             {"no_targets", r.no_targets},
             {"all_pass", r.all_pass}};
    return doc.dump(2) + "\n";
}

Report from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("report JSON: ") + e.what());
    }
    Report r;
    try {
        if (doc.at("schema").get<int>() != 1)
            throw ConfigError("report JSON: unsupported schema");
        r.schema = 1;
        const json& run = doc.at("run");
        r.run.experiment = run.at("experiment").get<std::string>();
        r.run.R_requested = run.at("R_requested").get<int>();
        r.run.R_effective = run.at("R_effective").get<int>();
        r.run.R_discarded = run.at("R_discarded").get<int>();
        r.run.sep_warnings = run.at("sep_warnings").get<int>();
        r.run.master_seed = run.at("master_seed").get<std::uint64_t>();
        r.run.z = run.at("z").get<double>();
        r.run.centering = run.at("centering").get<std::string>();
        r.run.n = run.at("n").get<std::size_t>();
        r.run.y = run.at("y").get<double>();
        r.run.p = run.value("p", std::size_t{0});
        r.run.k = run.value("k", std::size_t{0});
        r.run.powers = run.value("powers", 0);
        r.run.dist = run.value("dist", std::string{});
        r.run.rho1 = run.value("rho1", 0.0);
        r.run.rho2 = run.value("rho2", 0.0);
        r.run.matrix_a = run.value("matrix_a", std::string{});
        r.run.matrix_b = run.value("matrix_b", std::string{});
        for (const json& jt : doc.at("targets")) {
            ReportTarget t;
            t.label = jt.at("label").get<std::string>();
            t.kind = jt.at("kind").get<std::string>();
            t.i = jt.at("i").get<std::size_t>();
            t.j = jt.at("j").get<std::size_t>();
            t.theory_asymptotic = jt.at("theory_asymptotic").get<double>();
            t.empirical_asymptotic = jt.at("empirical_asymptotic").get<double>();
            t.se_asymptotic = jt.at("se_asymptotic").get<double>();
            t.theory_raw = jt.at("theory_raw").get<double>();
            t.empirical_raw = jt.at("empirical_raw").get<double>();
            t.se_raw = jt.at("se_raw").get<double>();
            t.zscore = jt.at("zscore").get<double>();
            t.pass = jt.at("pass").get<bool>();
            t.R = jt.at("R").get<int>();
            r.targets.push_back(std::move(t));
        }
        r.budget_ok = doc.at("budget_ok").get<bool>();
        r.no_targets = doc.at("no_targets").get<bool>();
        r.all_pass = doc.at("all_pass").get<bool>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("report JSON: missing or mistyped field: ") + e.what());
    }
    return r;
}

bool reverify(Report& r, double z) {
    r.run.z = z;
    r.all_pass = r.budget_ok;
    for (ReportTarget& t : r.targets) {
        t.zscore = zscore_of(t.empirical_raw, t.theory_raw, t.se_raw);
        t.pass = t.zscore < z;
        r.all_pass = r.all_pass && t.pass;
    }
    return r.all_pass;
}

// ----------------------------------------------------------------------
// Text renderings
// ----------------------------------------------------------------------

namespace {

std::string fmt(double v, int width) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%*.*g", width, 8, v);
    return buf;
}

}  // namespace

std::string to_table(const Report& r) {
    std::ostringstream out;
    out << "experiment: " << r.run.experiment;
    if (r.run.experiment == "spiked")
        out << "  (p=" << r.run.p << ", n=" << r.run.n << ", y=" << r.run.y
            << ", dist=" << r.run.dist << ")";
    else if (r.run.experiment == "quadform")
        out << "  (n=" << r.run.n << ", k=" << r.run.k << ", powers=" << r.run.powers
            << ", y_n=" << r.run.y << ", " << r.run.dist << ")";
    else if (r.run.experiment == "forms")
        out << "  (n=" << r.run.n << ", rho1=" << r.run.rho1 << ", rho2=" << r.run.rho2 << ")";
    out << "\n";
    out << "replicates: " << r.run.R_effective << " effective of " << r.run.R_requested
        << " requested, " << r.run.R_discarded << " discarded | seed " << r.run.master_seed
        << " | centering " << r.run.centering << " | z " << r.run.z << "\n";
    if (r.run.sep_warnings > 0)
        out << "separation warnings: " << r.run.sep_warnings
            << " replicates had the smallest tracked eigenvalue near the bulk edge\n";
    out << "\n";

    // raw columns only when some target actually distinguishes the two scales
    bool any_scaled = false;
    for (const auto& t : r.targets)
        if (t.theory_raw != t.theory_asymptotic || t.empirical_raw != t.empirical_asymptotic)
            any_scaled = true;

    std::size_t lw = 6;
    for (const auto& t : r.targets) lw = std::max(lw, t.label.size());
    char head[256];
    if (any_scaled)
        std::snprintf(head, sizeof head, "%-*s %14s %14s %14s %8s  %-7s %14s %14s",
                      static_cast<int>(lw), "target", "theory", "empirical", "SE", "z",
                      "verdict", "theory(raw)", "emp(raw)");
    else
        std::snprintf(head, sizeof head, "%-*s %14s %14s %14s %8s  %-7s",
                      static_cast<int>(lw), "target", "theory", "empirical", "SE", "z",
                      "verdict");
    out << head << "\n";
    out << std::string(std::string(head).size(), '-') << "\n";
    for (const auto& t : r.targets) {
        char zbuf[32];
        if (std::isinf(t.zscore))
            std::snprintf(zbuf, sizeof zbuf, "%8s", "inf");
        else
            std::snprintf(zbuf, sizeof zbuf, "%8.2f", t.zscore);
        char line[512];
        if (any_scaled)
            std::snprintf(line, sizeof line, "%-*s %s %s %s %s  %-7s %s %s",
                          static_cast<int>(lw), t.label.c_str(),
                          fmt(t.theory_asymptotic, 14).c_str(),
                          fmt(t.empirical_asymptotic, 14).c_str(),
                          fmt(t.se_asymptotic, 14).c_str(), zbuf, t.pass ? "pass" : "FAIL",
                          fmt(t.theory_raw, 14).c_str(), fmt(t.empirical_raw, 14).c_str());
        else
            std::snprintf(line, sizeof line, "%-*s %s %s %s %s  %-7s", static_cast<int>(lw),
                          t.label.c_str(), fmt(t.theory_asymptotic, 14).c_str(),
                          fmt(t.empirical_asymptotic, 14).c_str(),
                          fmt(t.se_asymptotic, 14).c_str(), zbuf, t.pass ? "pass" : "FAIL");
        out << line << "\n";
    }
    out << "\n";
    if (r.no_targets) out << "warning: no targets configured; nothing was verified\n";
    if (!r.budget_ok)
        out << "FAIL: discarded replicates exceed the 0.1% failure budget ("
            << r.run.R_discarded << " of " << r.run.R_requested << ")\n";
    out << (r.all_pass ? "ALL PASS" : "FAIL") << " (z = " << r.run.z << ")\n";
    return out.str();
}

std::string to_csv(const Report& r) {
    std::ostringstream out;
    out.precision(17);
    out << "label,kind,i,j,R,theory_asymptotic,empirical_asymptotic,se_asymptotic,"
           "theory_raw,empirical_raw,se_raw,zscore,pass\r\n";
    for (const auto& t : r.targets) {
        out << t.label << ',' << t.kind << ',' << t.i << ',' << t.j << ',' << t.R << ','
            << t.theory_asymptotic << ',' << t.empirical_asymptotic << ',' << t.se_asymptotic
            << ',' << t.theory_raw << ',' << t.empirical_raw << ',' << t.se_raw << ','
            << t.zscore << ',' << (t.pass ? "true" : "false") << "\r\n";
    }
    return out.str();
}

void write_replicate_csv(const std::string& path, const sim::SpikedResult& result) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write replicate CSV '" + path + "'");
    out.precision(17);
    const std::size_t M = result.reps.empty() ? 0 : result.reps.front().eig.size();
    out << "replicate";
    for (std::size_t i = 1; i <= M; ++i) out << ",l_" << i;
    for (std::size_t i = 1; i <= M; ++i) out << ",proj_" << i;
    out << "\r\n";
    for (const auto& rep : result.reps) {
        out << rep.index;
        for (double v : rep.eig) out << ',' << v;
        for (double v : rep.proj) out << ',' << v;
        out << "\r\n";
    }
}

}  // namespace spikeform::rep
