// Monte Carlo engine implementation.
#include "spikeform/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "spikeform/errors.hpp"
#include "spikeform/kernels.hpp"
#include "spikeform/mp_core.hpp"

namespace spikeform::sim {

namespace {

// ----------------------------------------------------------------------
// Worker pool: each worker owns one scratch context and pulls replicate
// indices from a shared counter.  Replicates are seeded individually, so the
// output is bit-identical for any worker count.
// ----------------------------------------------------------------------

template <typename MakeCtx, typename Fn>
void parallel_replicates(int R, int workers, MakeCtx make_ctx, Fn fn) {
    int w = workers;
    if (w <= 0) w = static_cast<int>(std::thread::hardware_concurrency());
    if (w < 1) w = 1;
    w = std::min(w, R);
    if (w == 1) {
        auto ctx = make_ctx();
        for (int r = 0; r < R; ++r) fn(r, ctx);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(w));
    for (int t = 0; t < w; ++t) {
        pool.emplace_back([&]() {
            auto ctx = make_ctx();
            for (int r = next.fetch_add(1); r < R; r = next.fetch_add(1)) fn(r, ctx);
        });
    }
    for (auto& th : pool) th.join();
}

void zero_matrix(la::Matrix& m) {
    std::fill(m.data(), m.data() + m.rows() * m.cols(), 0.0);
}

// Sample covariance S = (1/n) sum of row outer products; X holds one sample
// per row.  Accumulates the lower triangle and mirrors it, so S is exactly
// symmetric.
void sample_covariance_into(const la::Matrix& X, la::Matrix& S) {
    const std::size_t n = X.rows(), d = X.cols();
    zero_matrix(S);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t r = 0; r < n; ++r) la::syr_lower(S.data(), d, inv_n, X.row(r));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j) S(i, j) = S(j, i);
}

}  // namespace

std::mt19937_64 make_rng(std::uint64_t master_seed, std::uint64_t replicate) {
    std::seed_seq seq{static_cast<std::uint32_t>(master_seed >> 32),
                      static_cast<std::uint32_t>(master_seed & 0xffffffffu),
                      static_cast<std::uint32_t>(replicate >> 32),
                      static_cast<std::uint32_t>(replicate & 0xffffffffu)};
    return std::mt19937_64(seq);
}

// ----------------------------------------------------------------------
// PopulationDist
// ----------------------------------------------------------------------

std::size_t PopulationDist::M() const {
    return kind == DistKind::UniformEllipse ? 2 : spikes.size();
}

std::vector<double> PopulationDist::spike_values() const {
    if (kind == DistKind::UniformEllipse) return {A * A / 4.0, B * B / 4.0};
    return spikes;
}

spiked::SpikeModel PopulationDist::model() const {
    validate();
    switch (kind) {
        case DistKind::GaussianDiag:
            return spiked::gaussian_model(spikes);
        case DistKind::UniformEllipse:
            return spiked::ellipse_model(A, B);
        case DistKind::UniformIid: {
            std::vector<double> fourth(spikes.size());
            for (std::size_t i = 0; i < spikes.size(); ++i)
                fourth[i] = 1.8 * spikes[i] * spikes[i];  // E[(sqrt(3a) U)^4] = 9 a^2 / 5
            return spiked::independent_model(spikes, fourth);
        }
    }
    throw ConfigError("population distribution: unknown kind");
}

double PopulationDist::nu4(std::size_t i) const {
    if (i >= M()) throw IndexError("population distribution: spike index out of range");
    switch (kind) {
        case DistKind::GaussianDiag:
            return 0.0;
        case DistKind::UniformEllipse:
            return -1.0;
        case DistKind::UniformIid:
            return -1.2;
    }
    throw ConfigError("population distribution: unknown kind");
}

void PopulationDist::validate() const {
    if (kind == DistKind::UniformEllipse) {
        if (A <= 0.0 || B <= 0.0)
            throw ConfigError("ellipse distribution: semi-axes must be positive");
        if (A <= B)
            throw ConfigError("ellipse distribution: need A > B for two distinct spikes");
        return;
    }
    if (spikes.empty()) throw ConfigError("population distribution: need at least one spike");
    for (double a : spikes)
        if (a <= 0.0) throw ConfigError("population distribution: spikes must be positive");
    for (std::size_t i = 0; i + 1 < spikes.size(); ++i)
        if (spikes[i] <= spikes[i + 1])
            throw ConfigError("population distribution: spikes must be strictly decreasing");
}

// ----------------------------------------------------------------------
// Spiked-covariance experiment
// ----------------------------------------------------------------------

namespace {

// One sample row: M spike coordinates followed by p standard-normal noise
// coordinates.
struct RowSampler {
    const PopulationDist* dist;
    std::size_t M, p;
    std::vector<double> scale;  // per-coordinate scale for the iid kinds

    explicit RowSampler(const PopulationDist& d, std::size_t p_) : dist(&d), M(d.M()), p(p_) {
        const std::vector<double> a = d.spike_values();
        scale.resize(M);
        for (std::size_t i = 0; i < M; ++i)
            scale[i] = (d.kind == DistKind::UniformIid) ? std::sqrt(3.0 * a[i])
                                                        : std::sqrt(a[i]);
    }

    void fill(std::mt19937_64& gen, double* row) const {
        std::normal_distribution<double> normal(0.0, 1.0);
        switch (dist->kind) {
            case DistKind::GaussianDiag:
                for (std::size_t i = 0; i < M; ++i) row[i] = scale[i] * normal(gen);
                break;
            case DistKind::UniformIid: {
                std::uniform_real_distribution<double> unif(-1.0, 1.0);
                for (std::size_t i = 0; i < M; ++i) row[i] = scale[i] * unif(gen);
                break;
            }
            case DistKind::UniformEllipse: {
                // Uniform on the unit disk by rejection, then scaled onto the
                // ellipse (acceptance rate pi/4).
                std::uniform_real_distribution<double> unif(-1.0, 1.0);
                double u, v;
                do {
                    u = unif(gen);
                    v = unif(gen);
                } while (u * u + v * v > 1.0);
                row[0] = dist->A * u;
                row[1] = dist->B * v;
                break;
            }
        }
        for (std::size_t i = 0; i < p; ++i) row[M + i] = normal(gen);
    }
};

struct SpikedCtx {
    la::Matrix X, S;
};

struct SpikedSlot {
    bool ok = false;
    bool sep_warning = false;
    SpikedReplicate rep;
};

}  // namespace

SpikedResult run_spiked(const SpikedConfig& cfg) {
    cfg.dist.validate();
    if (cfg.R < 100) throw ConfigError("spiked run: need at least 100 replicates");
    if (cfg.p == 0 || cfg.n < 2) throw ConfigError("spiked run: need p >= 1 and n >= 2");
    const double y = cfg.y();
    if (y <= 0.0 || y >= 1.0) throw ConfigError("spiked run: p/n must lie in (0,1)");
    const std::vector<double> spikes = cfg.dist.spike_values();
    const double edge = 1.0 + std::sqrt(y);
    for (double a : spikes)
        if (a <= edge || mp::spike_in_bulk(a, y))
            throw ConfigError(
                "spiked run: every spike must exceed 1 + sqrt(p/n); the top "
                "eigenvalues track above-bulk spikes only");

    const std::size_t M = cfg.dist.M();
    const std::size_t d = M + cfg.p;
    const RowSampler sampler(cfg.dist, cfg.p);
    // Separation guard: flag replicates whose smallest tracked eigenvalue
    // comes within a relative 1e-6 of the finite-n bulk edge.
    const double b_edge = mp::mp_support(y).b_y;
    const double sep_threshold =
        b_edge * (1.0 + std::pow(static_cast<double>(cfg.n), -2.0 / 3.0)) * (1.0 + 1e-6);

    std::vector<SpikedSlot> slots(static_cast<std::size_t>(cfg.R));

    auto make_ctx = [&]() {
        SpikedCtx ctx;
        ctx.X = la::Matrix(cfg.n, d);
        ctx.S = la::Matrix(d, d);
        return ctx;
    };
    auto body = [&](int r, SpikedCtx& ctx) {
        SpikedSlot& slot = slots[static_cast<std::size_t>(r)];
        try {
            std::mt19937_64 gen =
                make_rng(cfg.master_seed, static_cast<std::uint64_t>(r));
            for (std::size_t row = 0; row < cfg.n; ++row)
                sampler.fill(gen, ctx.X.row(row));
            sample_covariance_into(ctx.X, ctx.S);

            std::vector<double> values;
            std::vector<double> proj(M);
            if (cfg.solver == Solver::Auto) {
                la::TopkResult top = la::topk_eigen(ctx.S, M, 1e-9);
                if (top.converged) {
                    values.assign(top.values.begin(), top.values.end());
                    for (std::size_t i = 0; i < M; ++i)
                        proj[i] = top.vectors_t(i, i) * top.vectors_t(i, i);
                }
            }
            if (values.empty()) {
                la::EigenResult full = la::jacobi_eigen(ctx.S);
                values.assign(full.values.begin(), full.values.begin() + static_cast<long>(M));
                for (std::size_t i = 0; i < M; ++i)
                    proj[i] = full.vectors_t(i, i) * full.vectors_t(i, i);
            }
            slot.rep.index = r;
            slot.rep.eig = std::move(values);
            slot.rep.proj = std::move(proj);
            slot.sep_warning = slot.rep.eig.back() <= sep_threshold;
            slot.ok = true;
        } catch (const std::exception&) {
            slot.ok = false;  // counted against the failure budget
        }
    };
    parallel_replicates(cfg.R, cfg.workers, make_ctx, body);

    SpikedResult out;
    out.R_requested = cfg.R;
    out.reps.reserve(static_cast<std::size_t>(cfg.R));
    for (auto& slot : slots) {
        if (!slot.ok) {
            ++out.R_discarded;
            continue;
        }
        if (slot.sep_warning) ++out.sep_warnings;
        out.reps.push_back(std::move(slot.rep));
    }
    out.R_effective = static_cast<int>(out.reps.size());
    return out;
}

la::Matrix sample_population(const PopulationDist& dist, std::size_t p, std::size_t n,
                             std::mt19937_64& gen) {
    dist.validate();
    const RowSampler sampler(dist, p);
    la::Matrix X(n, dist.M() + p);
    for (std::size_t row = 0; row < n; ++row) sampler.fill(gen, X.row(row));
    return X;
}

la::Matrix sample_covariance(const la::Matrix& X) {
    if (X.rows() == 0) throw DimensionError("sample covariance: need at least one sample");
    la::Matrix S(X.cols(), X.cols());
    sample_covariance_into(X, S);
    return S;
}

// ----------------------------------------------------------------------
// Quadratic-form experiment
// ----------------------------------------------------------------------

QuadformResult run_quadform(const QuadformConfig& cfg) {
    if (cfg.R < 100) throw ConfigError("quadform run: need at least 100 replicates");
    if (cfg.k < 2 || cfg.n < 2) throw ConfigError("quadform run: need k >= 2 and n >= 2");
    if (cfg.k >= cfg.n) throw ConfigError("quadform run: need k < n so that k/n < 1");
    if (cfg.powers < 1) throw ConfigError("quadform run: need at least one power");

    const double yn = cfg.y_n();
    const int i_max = cfg.powers;
    // Centering constants y_n^m * int x^m dG_{y_n} = y_n * moment_m(y_n).
    std::vector<double> center(static_cast<std::size_t>(i_max));
    for (int m = 1; m <= i_max; ++m)
        center[static_cast<std::size_t>(m - 1)] = sesq::f_moment(m, yn);
    const double root_n2 = std::sqrt(static_cast<double>(cfg.n) / 2.0);

    struct Ctx {
        la::Matrix V;                     // (k-1) x n, rows are raw vectors v_i
        std::vector<double> v1, u, t, w;  // scratch
    };
    std::vector<std::vector<double>> slots(static_cast<std::size_t>(cfg.R));

    auto make_ctx = [&]() {
        Ctx ctx;
        ctx.V = la::Matrix(cfg.k - 1, cfg.n);
        ctx.v1.resize(cfg.n);
        ctx.u.resize(cfg.n);
        ctx.w.resize(cfg.n);
        ctx.t.resize(cfg.k - 1);
        return ctx;
    };
    auto body = [&](int r, Ctx& ctx) {
        std::mt19937_64 gen = make_rng(cfg.master_seed, static_cast<std::uint64_t>(r));
        std::normal_distribution<double> normal(0.0, 1.0);
        for (std::size_t row = 0; row < cfg.k - 1; ++row) {
            double* vp = ctx.V.row(row);
            for (std::size_t c = 0; c < cfg.n; ++c) vp[c] = normal(gen);
        }
        for (std::size_t c = 0; c < cfg.n; ++c) ctx.v1[c] = normal(gen);

        const double inv_n = 1.0 / static_cast<double>(cfg.n);
        std::vector<double>& coords = slots[static_cast<std::size_t>(r)];
        coords.resize(static_cast<std::size_t>(i_max) + 1);
        ctx.u = ctx.v1;
        for (int m = 1; m <= i_max; ++m) {
            // u <- (V V^T / n) u
            la::matvec(ctx.V, ctx.u.data(), ctx.t.data());
            std::fill(ctx.w.begin(), ctx.w.end(), 0.0);
            for (std::size_t row = 0; row < cfg.k - 1; ++row)
                la::axpy(ctx.t[row] * inv_n, ctx.V.row(row), ctx.w.data(), cfg.n);
            std::swap(ctx.u, ctx.w);
            const double c_m = la::dot(ctx.v1.data(), ctx.u.data(), cfg.n) * inv_n;
            coords[static_cast<std::size_t>(m - 1)] =
                root_n2 * (c_m - center[static_cast<std::size_t>(m - 1)]);
        }
        const double norm = la::dot(ctx.v1.data(), ctx.v1.data(), cfg.n) * inv_n;
        coords[static_cast<std::size_t>(i_max)] = root_n2 * (norm - 1.0);
    };
    parallel_replicates(cfg.R, cfg.workers, make_ctx, body);

    QuadformResult out;
    out.R_requested = cfg.R;
    out.reps = std::move(slots);
    out.R_effective = static_cast<int>(out.reps.size());
    return out;
}

// ----------------------------------------------------------------------
// Two-matrix sesquilinear-form experiment
// ----------------------------------------------------------------------

sesq::JointMomentTable forms_moment_table(double rho1, double rho2) {
    sesq::JointMomentTable t;
    t.K = 2;
    t.Exx = la::Matrix::identity(2);
    t.Eyy = la::Matrix::identity(2);
    t.Exy = la::Matrix(2, 2);
    t.F = la::Matrix(2, 2);
    t.Exy(0, 0) = rho1;
    t.Exy(1, 1) = rho2;
    t.F(0, 0) = 1.0 + 2.0 * rho1 * rho1;  // Gaussian pair: E[x^2 y^2] = 1 + 2 rho^2
    t.F(1, 1) = 1.0 + 2.0 * rho2 * rho2;
    t.F(0, 1) = t.F(1, 0) = rho1 * rho2;  // independent pairs
    return t;
}

FormsResult run_forms(const FormsConfig& cfg, const la::Matrix& A, const la::Matrix& B) {
    if (cfg.R < 100) throw ConfigError("forms run: need at least 100 replicates");
    if (A.rows() != cfg.n || A.cols() != cfg.n || B.rows() != cfg.n || B.cols() != cfg.n)
        throw ShapeError("forms run: A and B must be n x n");
    // |rho| = 1 is the degenerate pair y = +/- x (same vector on both sides)
    if (std::abs(cfg.rho1) > 1.0 || std::abs(cfg.rho2) > 1.0)
        throw ConfigError("forms run: correlations must lie in [-1, 1]");

    double tr_a = 0.0, tr_b = 0.0;
    for (std::size_t i = 0; i < cfg.n; ++i) {
        tr_a += A(i, i);
        tr_b += B(i, i);
    }
    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(cfg.n));
    const double c1 = std::sqrt(1.0 - cfg.rho1 * cfg.rho1);
    const double c2 = std::sqrt(1.0 - cfg.rho2 * cfg.rho2);

    struct Ctx {
        std::vector<double> x1, x2, y1, y2, tmp;
    };
    std::vector<std::array<double, 4>> slots(static_cast<std::size_t>(cfg.R));

    auto make_ctx = [&]() {
        Ctx ctx;
        ctx.x1.resize(cfg.n);
        ctx.x2.resize(cfg.n);
        ctx.y1.resize(cfg.n);
        ctx.y2.resize(cfg.n);
        ctx.tmp.resize(cfg.n);
        return ctx;
    };
    auto body = [&](int r, Ctx& ctx) {
        std::mt19937_64 gen = make_rng(cfg.master_seed, static_cast<std::uint64_t>(r));
        std::normal_distribution<double> normal(0.0, 1.0);
        for (std::size_t u = 0; u < cfg.n; ++u) {
            ctx.x1[u] = normal(gen);
            ctx.x2[u] = normal(gen);
            ctx.y1[u] = cfg.rho1 * ctx.x1[u] + c1 * normal(gen);
            ctx.y2[u] = cfg.rho2 * ctx.x2[u] + c2 * normal(gen);
        }
        auto form = [&](const la::Matrix& Mx, const std::vector<double>& x,
                        const std::vector<double>& yv, double rho, double tr) {
            la::matvec(Mx, yv.data(), ctx.tmp.data());
            return (la::dot(x.data(), ctx.tmp.data(), cfg.n) - rho * tr) * inv_sqrt_n;
        };
        slots[static_cast<std::size_t>(r)] = {
            form(A, ctx.x1, ctx.y1, cfg.rho1, tr_a), form(A, ctx.x2, ctx.y2, cfg.rho2, tr_a),
            form(B, ctx.x1, ctx.y1, cfg.rho1, tr_b), form(B, ctx.x2, ctx.y2, cfg.rho2, tr_b)};
    };
    parallel_replicates(cfg.R, cfg.workers, make_ctx, body);

    FormsResult out;
    out.R_requested = cfg.R;
    out.reps = std::move(slots);
    out.R_effective = static_cast<int>(out.reps.size());
    return out;
}

// ----------------------------------------------------------------------
// Statistics
// ----------------------------------------------------------------------

namespace {

void require_reps(std::size_t n, std::size_t min_n, const char* what) {
    if (n < min_n)
        throw DomainError(std::string(what) + ": not enough replicates for a standard error");
}

// Jackknife SE from the vector of leave-one-out statistics.
double jackknife_se(const std::vector<double>& loo) {
    const double R = static_cast<double>(loo.size());
    double mean = 0.0;
    for (double v : loo) mean += v;
    mean /= R;
    double ss = 0.0;
    for (double v : loo) ss += (v - mean) * (v - mean);
    return std::sqrt((R - 1.0) / R * ss);
}

}  // namespace

Stat mean_se(const std::vector<double>& xs) {
    require_reps(xs.size(), 2, "mean");
    const double R = static_cast<double>(xs.size());
    double s1 = 0.0;
    for (double x : xs) s1 += x;
    const double mean = s1 / R;
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return Stat{mean, std::sqrt(ss / (R - 1.0) / R)};
}

Stat var_se(const std::vector<double>& xs, Centering centering, double center) {
    require_reps(xs.size(), 4, "variance");
    const std::size_t R = xs.size();
    const double Rd = static_cast<double>(R);
    std::vector<double> loo(R);
    Stat out;
    if (centering == Centering::Empirical) {
        double s1 = 0.0, s2 = 0.0;
        for (double x : xs) {
            s1 += x;
            s2 += x * x;
        }
        out.value = (s2 - s1 * s1 / Rd) / (Rd - 1.0);
        for (std::size_t r = 0; r < R; ++r) {
            const double s1r = s1 - xs[r], s2r = s2 - xs[r] * xs[r];
            loo[r] = (s2r - s1r * s1r / (Rd - 1.0)) / (Rd - 2.0);
        }
    } else {
        double s2c = 0.0;
        for (double x : xs) s2c += (x - center) * (x - center);
        out.value = s2c / Rd;
        for (std::size_t r = 0; r < R; ++r) {
            const double d = (xs[r] - center) * (xs[r] - center);
            loo[r] = (s2c - d) / (Rd - 1.0);
        }
    }
    out.se = jackknife_se(loo);
    return out;
}

Stat cov_se(const std::vector<double>& xs, const std::vector<double>& ys, Centering centering,
            double center_x, double center_y) {
    if (xs.size() != ys.size()) throw DimensionError("covariance: column length mismatch");
    require_reps(xs.size(), 4, "covariance");
    const std::size_t R = xs.size();
    const double Rd = static_cast<double>(R);
    std::vector<double> loo(R);
    Stat out;
    if (centering == Centering::Empirical) {
        double sx = 0.0, sy = 0.0, sxy = 0.0;
        for (std::size_t r = 0; r < R; ++r) {
            sx += xs[r];
            sy += ys[r];
            sxy += xs[r] * ys[r];
        }
        out.value = (sxy - sx * sy / Rd) / (Rd - 1.0);
        for (std::size_t r = 0; r < R; ++r) {
            const double sxr = sx - xs[r], syr = sy - ys[r], sxyr = sxy - xs[r] * ys[r];
            loo[r] = (sxyr - sxr * syr / (Rd - 1.0)) / (Rd - 2.0);
        }
    } else {
        double s = 0.0;
        for (std::size_t r = 0; r < R; ++r) s += (xs[r] - center_x) * (ys[r] - center_y);
        out.value = s / Rd;
        for (std::size_t r = 0; r < R; ++r) {
            const double d = (xs[r] - center_x) * (ys[r] - center_y);
            loo[r] = (s - d) / (Rd - 1.0);
        }
    }
    out.se = jackknife_se(loo);
    return out;
}

ShapeStats shape_stats(const std::vector<double>& xs) {
    require_reps(xs.size(), 4, "shape statistics");
    const double R = static_cast<double>(xs.size());
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= R;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double x : xs) {
        const double d = x - mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= R;
    m3 /= R;
    m4 /= R;
    ShapeStats out;
    if (m2 > 0.0) {
        out.skewness = m3 / std::pow(m2, 1.5);
        out.excess_kurtosis = m4 / (m2 * m2) - 3.0;
    }
    return out;
}

// ----------------------------------------------------------------------
// Verification
// ----------------------------------------------------------------------

namespace {

std::vector<double> eig_column(const SpikedResult& res, std::size_t i) {
    std::vector<double> col;
    col.reserve(res.reps.size());
    for (const auto& rep : res.reps) col.push_back(rep.eig[i]);
    return col;
}

std::vector<double> proj_column(const SpikedResult& res, std::size_t i) {
    std::vector<double> col;
    col.reserve(res.reps.size());
    for (const auto& rep : res.reps) col.push_back(rep.proj[i]);
    return col;
}

std::string index_label(const char* name, std::size_t i) {
    return std::string(name) + "[" + std::to_string(i + 1) + "]";
}

}  // namespace

VerifyResult verify_spiked(const SpikedConfig& cfg, const SpikedResult& result,
                           const std::vector<Target>& targets, double z_threshold,
                           Centering centering) {
    VerifyResult out;
    out.z_threshold = z_threshold;
    out.budget_ok = result.budget_ok();
    out.no_targets = targets.empty();
    const double y = cfg.y();
    const double n = static_cast<double>(cfg.n);
    const std::size_t M = cfg.dist.M();
    const std::vector<double> spikes = cfg.dist.spike_values();
    const spiked::SpikeModel model = cfg.dist.model();

    for (const Target& t : targets) {
        if (t.i >= M || (t.kind == TargetKind::EigPairCov && t.j >= M))
            throw IndexError("verify: target spike index out of range");
        TargetResult tr;
        tr.target = t;
        const double a_i = spikes[t.i];
        const double lambda_i = mp::phase_phi(a_i, y);
        // scale = n for variances/covariances of raw quantities, 1 for means
        double scale = n;
        Stat emp;  // raw-scale empirical statistic

        switch (t.kind) {
            case TargetKind::EigMean: {
                tr.label = index_label("eig_mean", t.i);
                tr.theory_raw = lambda_i;
                emp = mean_se(eig_column(result, t.i));
                scale = 1.0;
                break;
            }
            case TargetKind::EigVar: {
                tr.label = index_label("eig_var", t.i);
                tr.theory_raw = spiked::eigen_variance(model, y, t.i) / n;
                emp = var_se(eig_column(result, t.i), centering, lambda_i);
                break;
            }
            case TargetKind::EigPairCov: {
                tr.label = "eig_pair_cov[" + std::to_string(t.i + 1) + "," +
                           std::to_string(t.j + 1) + "]";
                tr.theory_raw = spiked::eigen_joint_cov(model, y, t.i, t.j) / n;
                const double lambda_j = mp::phase_phi(spikes[t.j], y);
                emp = cov_se(eig_column(result, t.i), eig_column(result, t.j), centering,
                             lambda_i, lambda_j);
                break;
            }
            case TargetKind::ProjMean: {
                tr.label = index_label("proj_mean", t.i);
                tr.theory_raw = spiked::eigvec_joint(a_i, y, cfg.dist.nu4(t.i)).mean_proj;
                emp = mean_se(proj_column(result, t.i));
                scale = 1.0;
                break;
            }
            case TargetKind::ProjVar: {
                tr.label = index_label("proj_var", t.i);
                const spiked::EigvecJoint ej = spiked::eigvec_joint(a_i, y, cfg.dist.nu4(t.i));
                tr.theory_raw = ej.v11 / n;
                emp = var_se(proj_column(result, t.i), centering, ej.mean_proj);
                break;
            }
            case TargetKind::ProjEigCov: {
                tr.label = index_label("proj_eig_cov", t.i);
                const spiked::EigvecJoint ej = spiked::eigvec_joint(a_i, y, cfg.dist.nu4(t.i));
                tr.theory_raw = ej.v12 / n;
                emp = cov_se(proj_column(result, t.i), eig_column(result, t.i), centering,
                             ej.mean_proj, lambda_i);
                break;
            }
        }

        tr.empirical_raw = emp.value;
        tr.se_raw = emp.se;
        tr.theory_asymptotic = tr.theory_raw * scale;
        tr.empirical_asymptotic = emp.value * scale;
        tr.se_asymptotic = emp.se * scale;
        tr.zscore = (emp.se > 0.0) ? std::abs(emp.value - tr.theory_raw) / emp.se
                                   : (emp.value == tr.theory_raw ? 0.0 : HUGE_VAL);
        tr.pass = tr.zscore < z_threshold;  // strict: pass iff |emp - theory| < z * SE
        out.targets.push_back(std::move(tr));
    }

    out.all_pass = out.budget_ok;
    for (const auto& tr : out.targets) out.all_pass = out.all_pass && tr.pass;
    return out;
}

}  // namespace spikeform::sim
