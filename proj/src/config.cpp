// Config parsing implementation: line-based `key = value` with strict key
// checking per experiment kind, plus the dense-matrix CSV reader/writer.
#include "spikeform/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "spikeform/errors.hpp"

namespace spikeform::cfg {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(trim(cur));
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

[[noreturn]] void fail(const std::string& source, int line, const std::string& msg) {
    throw ConfigError(source + ":" + std::to_string(line) + ": " + msg);
}

struct RawEntry {
    std::string value;
    int line = 0;
};

double parse_double(const std::string& source, int line, const std::string& key,
                    const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        fail(source, line, key + ": expected a number, got '" + value + "'");
    }
}

std::uint64_t parse_u64(const std::string& source, int line, const std::string& key,
                        const std::string& value) {
    try {
        std::size_t pos = 0;
        if (!value.empty() && value[0] == '-') throw std::invalid_argument("negative");
        const std::uint64_t v = std::stoull(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        fail(source, line, key + ": expected a non-negative integer, got '" + value + "'");
    }
}

std::size_t parse_size(const std::string& source, int line, const std::string& key,
                       const std::string& value) {
    const std::uint64_t v = parse_u64(source, line, key, value);
    return static_cast<std::size_t>(v);
}

int parse_int_positive(const std::string& source, int line, const std::string& key,
                       const std::string& value) {
    const std::uint64_t v = parse_u64(source, line, key, value);
    if (v == 0 || v > 1000000000ull)
        fail(source, line, key + ": expected a positive integer up to 1e9");
    return static_cast<int>(v);
}

const std::vector<std::string>& keys_for(ExperimentKind kind) {
    static const std::vector<std::string> spiked = {
        "schema",    "experiment", "p",       "n",          "y",        "dist",
        "spikes",    "R",          "master_seed", "workers", "z",       "targets",
        "centering", "eigensolver", "csv_dump"};
    static const std::vector<std::string> quadform = {
        "schema", "experiment", "n", "k", "powers", "R", "master_seed", "workers", "z"};
    static const std::vector<std::string> forms = {
        "schema", "experiment", "n",           "rho1",    "rho2", "matrix_a",
        "matrix_b", "R",        "master_seed", "workers", "z"};
    switch (kind) {
        case ExperimentKind::Quadform:
            return quadform;
        case ExperimentKind::Forms:
            return forms;
        default:
            return spiked;
    }
}

}  // namespace

std::string target_kind_name(sim::TargetKind kind) {
    switch (kind) {
        case sim::TargetKind::EigMean:
            return "eig_mean";
        case sim::TargetKind::EigVar:
            return "eig_var";
        case sim::TargetKind::EigPairCov:
            return "eig_pair_cov";
        case sim::TargetKind::ProjMean:
            return "proj_mean";
        case sim::TargetKind::ProjVar:
            return "proj_var";
        case sim::TargetKind::ProjEigCov:
            return "proj_eig_cov";
    }
    throw ConfigError("unknown target kind");
}

std::string target_spec(const sim::Target& t) {
    std::string out = target_kind_name(t.kind) + ":" + std::to_string(t.i + 1);
    if (t.kind == sim::TargetKind::EigPairCov) out += ":" + std::to_string(t.j + 1);
    return out;
}

std::vector<sim::Target> parse_targets(const std::string& text) {
    std::vector<sim::Target> out;
    for (const std::string& token : split(text, ',')) {
        if (token.empty()) throw ConfigError("targets: empty entry in list");
        const std::vector<std::string> parts = split(token, ':');
        sim::Target t;
        bool pair = false;
        const std::string& kind = parts[0];
        if (kind == "eig_mean")
            t.kind = sim::TargetKind::EigMean;
        else if (kind == "eig_var")
            t.kind = sim::TargetKind::EigVar;
        else if (kind == "eig_pair_cov") {
            t.kind = sim::TargetKind::EigPairCov;
            pair = true;
        } else if (kind == "proj_mean")
            t.kind = sim::TargetKind::ProjMean;
        else if (kind == "proj_var")
            t.kind = sim::TargetKind::ProjVar;
        else if (kind == "proj_eig_cov")
            t.kind = sim::TargetKind::ProjEigCov;
        else
            throw ConfigError(
                "targets: unknown kind '" + kind +
                "' (use eig_mean, eig_var, eig_pair_cov, proj_mean, proj_var, proj_eig_cov)");
        if (parts.size() != (pair ? 3u : 2u))
            throw ConfigError("targets: '" + token + "' needs " + (pair ? "two indices" : "one index"));
        auto idx = [&](const std::string& s) -> std::size_t {
            try {
                std::size_t pos = 0;
                const unsigned long v = std::stoul(s, &pos);
                if (pos != s.size() || v == 0) throw std::invalid_argument("bad index");
                return static_cast<std::size_t>(v - 1);  // 1-based in config
            } catch (const std::exception&) {
                throw ConfigError("targets: '" + token + "': indices are 1-based integers");
            }
        };
        t.i = idx(parts[1]);
        if (pair) {
            t.j = idx(parts[2]);
            if (t.i == t.j) throw ConfigError("targets: '" + token + "': indices must differ");
        }
        out.push_back(t);
    }
    return out;
}

double ExperimentConfig::theory_y() const {
    if (has_y) return y_direct;
    if (has_pn) return spiked.y();
    throw ConfigError(source + ": no aspect ratio available (give y, or p and n)");
}

void ExperimentConfig::require_runnable() const {
    if (experiment == ExperimentKind::Spiked && !has_pn)
        throw ConfigError(source + ": running the experiment requires p and n (y alone "
                          "only supports theory targets / --dry-run)");
    if (experiment == ExperimentKind::Forms && (matrix_a.empty() || matrix_b.empty()))
        throw ConfigError(source + ": forms experiment requires matrix_a and matrix_b");
}

ExperimentConfig parse_config_text(const std::string& text, const std::string& source_name) {
    // pass 1: raw key/value pairs with line numbers
    std::map<std::string, RawEntry> raw;
    {
        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const std::size_t hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            line = trim(line);
            if (line.empty()) continue;
            const std::size_t eq = line.find('=');
            if (eq == std::string::npos)
                fail(source_name, lineno, "expected 'key = value', got '" + line + "'");
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key.empty()) fail(source_name, lineno, "empty key");
            if (value.empty()) fail(source_name, lineno, key + ": empty value");
            if (raw.count(key)) fail(source_name, lineno, "duplicate key '" + key + "'");
            raw[key] = RawEntry{value, lineno};
        }
    }

    ExperimentConfig out;
    out.source = source_name;

    auto take = [&](const char* key) -> const RawEntry* {
        auto it = raw.find(key);
        return it == raw.end() ? nullptr : &it->second;
    };

    // schema gate first: refuse to interpret anything else without it
    {
        const RawEntry* e = take("schema");
        if (!e) throw ConfigError(source_name + ": missing 'schema = 1'");
        if (e->value != "1")
            fail(source_name, e->line, "unsupported schema '" + e->value + "' (expected 1)");
        out.schema = 1;
    }

    if (const RawEntry* e = take("experiment")) {
        if (e->value == "spiked")
            out.experiment = ExperimentKind::Spiked;
        else if (e->value == "quadform")
            out.experiment = ExperimentKind::Quadform;
        else if (e->value == "forms")
            out.experiment = ExperimentKind::Forms;
        else
            fail(source_name, e->line,
                 "experiment: expected spiked, quadform or forms, got '" + e->value + "'");
    }

    // reject unknown keys for the chosen experiment
    const std::vector<std::string>& allowed = keys_for(out.experiment);
    for (const auto& [key, entry] : raw)
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            fail(source_name, entry.line, "unknown key '" + key + "' for this experiment");

    // shared numeric knobs
    if (const RawEntry* e = take("R")) {
        const int R = parse_int_positive(source_name, e->line, "R", e->value);
        out.spiked.R = R;
        out.quadform.R = R;
        out.forms.R = R;
    }
    if (const RawEntry* e = take("master_seed")) {
        const std::uint64_t s = parse_u64(source_name, e->line, "master_seed", e->value);
        out.spiked.master_seed = s;
        out.quadform.master_seed = s;
        out.forms.master_seed = s;
    }
    if (const RawEntry* e = take("workers")) {
        const std::uint64_t w = parse_u64(source_name, e->line, "workers", e->value);
        if (w > 256) fail(source_name, e->line, "workers: expected 0..256");
        out.spiked.workers = static_cast<int>(w);
        out.quadform.workers = static_cast<int>(w);
        out.forms.workers = static_cast<int>(w);
    }
    if (const RawEntry* e = take("z")) {
        out.z = parse_double(source_name, e->line, "z", e->value);
        if (!(out.z > 0.0)) fail(source_name, e->line, "z: must be positive");
    }

    switch (out.experiment) {
        case ExperimentKind::Spiked: {
            const RawEntry* ep = take("p");
            const RawEntry* en = take("n");
            if (!!ep != !!en)
                throw ConfigError(source_name + ": p and n must be given together");
            if (ep) {
                out.spiked.p = parse_size(source_name, ep->line, "p", ep->value);
                out.spiked.n = parse_size(source_name, en->line, "n", en->value);
                out.has_pn = true;
            }
            if (const RawEntry* e = take("y")) {
                out.y_direct = parse_double(source_name, e->line, "y", e->value);
                out.has_y = true;
                if (!(out.y_direct > 0.0 && out.y_direct < 1.0))
                    fail(source_name, e->line, "y: must lie in (0,1)");
                if (out.has_pn && std::abs(out.y_direct - out.spiked.y()) > 1e-12)
                    fail(source_name, e->line, "y contradicts p/n");
            }
            if (!out.has_pn && !out.has_y)
                throw ConfigError(source_name + ": give y, or p and n");

            const RawEntry* ed = take("dist");
            if (!ed) throw ConfigError(source_name + ": missing dist");
            const RawEntry* es = take("spikes");
            if (ed->value == "gaussian" || ed->value == "uniform_iid") {
                out.spiked.dist.kind = ed->value == "gaussian" ? sim::DistKind::GaussianDiag
                                                               : sim::DistKind::UniformIid;
                if (!es)
                    fail(source_name, ed->line, "dist '" + ed->value + "' requires spikes");
                for (const std::string& tok : split(es->value, ','))
                    out.spiked.dist.spikes.push_back(
                        parse_double(source_name, es->line, "spikes", tok));
            } else if (ed->value.rfind("ellipse:", 0) == 0) {
                out.spiked.dist.kind = sim::DistKind::UniformEllipse;
                const std::vector<std::string> ax = split(ed->value.substr(8), ',');
                if (ax.size() != 2)
                    fail(source_name, ed->line, "dist: expected ellipse:A,B");
                out.spiked.dist.A = parse_double(source_name, ed->line, "dist", ax[0]);
                out.spiked.dist.B = parse_double(source_name, ed->line, "dist", ax[1]);
                if (es)
                    fail(source_name, es->line,
                         "spikes: not allowed with the ellipse (derived as A^2/4, B^2/4)");
            } else {
                fail(source_name, ed->line,
                     "dist: expected gaussian, uniform_iid or ellipse:A,B, got '" + ed->value +
                         "'");
            }
            out.spiked.dist.validate();

            if (const RawEntry* e = take("targets")) {
                try {
                    out.targets = parse_targets(e->value);
                } catch (const ConfigError& err) {
                    fail(source_name, e->line, err.what());
                }
                const std::size_t M = out.spiked.dist.M();
                for (const sim::Target& t : out.targets)
                    if (t.i >= M || (t.kind == sim::TargetKind::EigPairCov && t.j >= M))
                        fail(source_name, e->line,
                             "targets: index out of range for " + target_spec(t) + " (M = " +
                                 std::to_string(M) + ")");
            }
            if (const RawEntry* e = take("centering")) {
                if (e->value == "empirical")
                    out.centering = sim::Centering::Empirical;
                else if (e->value == "theoretical")
                    out.centering = sim::Centering::Theoretical;
                else
                    fail(source_name, e->line,
                         "centering: expected empirical or theoretical, got '" + e->value + "'");
            }
            if (const RawEntry* e = take("eigensolver")) {
                if (e->value == "auto")
                    out.spiked.solver = sim::Solver::Auto;
                else if (e->value == "jacobi")
                    out.spiked.solver = sim::Solver::Jacobi;
                else
                    fail(source_name, e->line,
                         "eigensolver: expected auto or jacobi, got '" + e->value + "'");
            }
            if (const RawEntry* e = take("csv_dump")) out.csv_dump = e->value;
            break;
        }
        case ExperimentKind::Quadform: {
            if (const RawEntry* e = take("n"))
                out.quadform.n = parse_size(source_name, e->line, "n", e->value);
            if (const RawEntry* e = take("k"))
                out.quadform.k = parse_size(source_name, e->line, "k", e->value);
            if (const RawEntry* e = take("powers"))
                out.quadform.powers = parse_int_positive(source_name, e->line, "powers", e->value);
            if (out.quadform.k >= out.quadform.n)
                throw ConfigError(source_name + ": need k < n for the quadform experiment");
            break;
        }
        case ExperimentKind::Forms: {
            if (const RawEntry* e = take("n"))
                out.forms.n = parse_size(source_name, e->line, "n", e->value);
            if (const RawEntry* e = take("rho1"))
                out.forms.rho1 = parse_double(source_name, e->line, "rho1", e->value);
            if (const RawEntry* e = take("rho2"))
                out.forms.rho2 = parse_double(source_name, e->line, "rho2", e->value);
            if (const RawEntry* e = take("matrix_a")) out.matrix_a = e->value;
            if (const RawEntry* e = take("matrix_b")) out.matrix_b = e->value;
            break;
        }
    }
    return out;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

// ----------------------------------------------------------------------
// Dense-matrix CSV
// ----------------------------------------------------------------------

la::Matrix read_matrix_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open matrix file '" + path + "'");
    std::string line;
    auto next_record = [&](std::string& out_line) {
        while (std::getline(in, out_line)) {
            if (!out_line.empty() && out_line.back() == '\r') out_line.pop_back();
            out_line = trim(out_line);
            if (!out_line.empty()) return true;
        }
        return false;
    };
    if (!next_record(line)) throw ConfigError(path + ": empty matrix file");
    std::size_t n = 0;
    try {
        std::size_t pos = 0;
        n = static_cast<std::size_t>(std::stoul(line, &pos));
        if (pos != line.size() || n == 0) throw std::invalid_argument("bad n");
    } catch (const std::exception&) {
        throw ConfigError(path + ": header must be the dimension n, got '" + line + "'");
    }
    la::Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!next_record(line))
            throw ConfigError(path + ": expected " + std::to_string(n) + " rows, got " +
                              std::to_string(i));
        const std::vector<std::string> cells = split(line, ',');
        if (cells.size() != n)
            throw ConfigError(path + ": row " + std::to_string(i + 1) + " has " +
                              std::to_string(cells.size()) + " values, expected " +
                              std::to_string(n));
        for (std::size_t j = 0; j < n; ++j) {
            try {
                std::size_t pos = 0;
                m(i, j) = std::stod(cells[j], &pos);
                if (pos != cells[j].size()) throw std::invalid_argument("trailing characters");
            } catch (const std::exception&) {
                throw ConfigError(path + ": row " + std::to_string(i + 1) + ", column " +
                                  std::to_string(j + 1) + ": bad number '" + cells[j] + "'");
            }
        }
    }
    if (next_record(line))
        throw ConfigError(path + ": trailing data after " + std::to_string(n) + " rows");
    return m;
}

void write_matrix_csv(const std::string& path, const la::Matrix& m) {
    if (m.rows() != m.cols()) throw ShapeError("matrix CSV: only square matrices");
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write matrix file '" + path + "'");
    out << m.rows() << "\r\n";
    out.precision(17);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) out << ',';
            out << m(i, j);
        }
        out << "\r\n";
    }
}

}  // namespace spikeform::cfg
