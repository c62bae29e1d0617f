#include "llg/study.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <stdexcept>
#include <thread>

namespace llg {

namespace {

// One planned run of a study.
struct RowSpec {
    double k = 0.0;
    int n = 0;       // nodes per axis
    int n_steps = 0;
};

constexpr int kMaxCoupledNodes = 48;  // per-axis guard for 3D sweeps

int steps_for(double T, double k) {
    const double ratio = T / k;
    const auto n = static_cast<int>(std::llround(ratio));
    if (n < 1 || std::abs(n * k - T) > 1e-9 * std::abs(T)) {
        throw std::invalid_argument("study: final time is not an integer multiple of k = " +
                                    std::to_string(k));
    }
    return n;
}

int nodes_for_spacing(double h) {
    const double inv = 1.0 / h;
    const auto intervals = static_cast<int>(std::llround(inv));
    if (intervals < 2 || std::abs(intervals * h - 1.0) > 1e-9) {
        throw std::invalid_argument("study: 1/h must be a whole number of intervals, got h = " +
                                    std::to_string(h));
    }
    return intervals + 1;  // node-centered Neumann grid
}

void validate(const StudyConfig& cfg) {
    if (cfg.dim != 1 && cfg.dim != 3) throw std::invalid_argument("study: dim must be 1 or 3");
    if (!(cfg.final_time > 0.0)) throw std::invalid_argument("study: final time must be > 0");
    if (cfg.levels.empty()) throw std::invalid_argument("study: refinement list is empty");
    for (double v : cfg.levels) {
        if (!(v > 0.0)) throw std::invalid_argument("study: refinement entries must be positive");
    }
    for (std::size_t i = 2; i <= cfg.levels.size(); ++i) {
        const double a = cfg.levels[i - 2], b = cfg.levels[i - 1];
        const bool increasing = cfg.levels[1] > cfg.levels[0];
        if ((increasing && b <= a) || (!increasing && b >= a)) {
            throw std::invalid_argument("study: refinement list must be strictly monotone");
        }
    }
    switch (cfg.study) {
        case StudyKind::Coupled3D:
            if (cfg.dim != 3) throw std::invalid_argument("study: Coupled3D requires dim = 3");
            break;
        case StudyKind::Temporal:
        case StudyKind::Spatial:
        case StudyKind::StabilityProbe:
            if (cfg.study == StudyKind::Spatial && cfg.fixed_steps < 1) {
                throw std::invalid_argument("study: fixed step count must be >= 1");
            }
            break;
        case StudyKind::NormPreservation:
            break;
    }
}

std::vector<RowSpec> plan_rows(const StudyConfig& cfg) {
    std::vector<RowSpec> specs;
    specs.reserve(cfg.levels.size());
    const double T = cfg.final_time;
    const bool sweeps_h = cfg.study == StudyKind::Spatial || cfg.study == StudyKind::Coupled3D ||
                          (cfg.study == StudyKind::NormPreservation && cfg.dim == 3);
    for (double level : cfg.levels) {
        RowSpec spec;
        if (sweeps_h) {
            spec.n = nodes_for_spacing(level);
            if (cfg.study == StudyKind::Coupled3D && spec.n > kMaxCoupledNodes && !cfg.allow_large) {
                throw std::invalid_argument(
                    "study: Coupled3D row exceeds " + std::to_string(kMaxCoupledNodes) +
                    " nodes per axis; pass the large-run override to proceed");
            }
            if (cfg.study == StudyKind::Spatial) {
                spec.n_steps = cfg.fixed_steps;
                spec.k = T / cfg.fixed_steps;
            } else {
                // coupled refinement k = h^2, step count rounded to land on T
                spec.n_steps = std::max(1, static_cast<int>(std::llround(T / (level * level))));
                spec.k = T / spec.n_steps;
            }
        } else {
            spec.n = cfg.fixed_n;
            spec.k = level;
            spec.n_steps = steps_for(T, level);
        }
        specs.push_back(spec);
    }
    return specs;
}

StudyRow run_row(const StudyConfig& cfg, const RowSpec& spec) {
    const Grid grid = make_grid(cfg.dim, spec.n, Boundary::Neumann);
    SchemeConfig sc;
    sc.kind = cfg.scheme;
    sc.dt = spec.k;
    sc.alpha = cfg.alpha;
    sc.picard_tol = cfg.picard_tol;
    sc.picard_max = cfg.picard_max;
    sc.helmholtz = cfg.helmholtz;

    StudyRow row;
    row.k = spec.k;
    row.h = grid.h;
    row.n_steps = spec.n_steps;

    const auto start = std::chrono::steady_clock::now();
    if (cfg.study == StudyKind::NormPreservation) {
        // unforced relaxation from the reference initial data m_e(., 0.01)
        const VectorField m0 = sample_exact(grid, 0.01);
        const Trajectory traj = integrate(m0, sc, spec.n_steps);
        double dev = 0.0;
        for (const StepDiagnostics& d : traj.diagnostics) dev = std::max(dev, d.norm_deviation);
        row.norm_deviation = dev;
    } else {
        ManufacturedProblem problem{cfg.dim, cfg.alpha, spec.n_steps * spec.k};
        const RunOutcome outcome = run_manufactured(problem, grid, sc, spec.n_steps);
        row.errors = outcome.errors;
        if (cfg.study == StudyKind::StabilityProbe) {
            row.norm_deviation = outcome.max_norm_deviation;
        }
    }
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return row;
}

int worker_count() {
    const char* env = std::getenv("LLG_WORKERS");
    if (!env) return 1;
    const long v = std::strtol(env, nullptr, 10);
    if (v < 1) return 1;
    return static_cast<int>(std::min<long>(v, 256));
}

[[noreturn]] void rethrow_with_row(std::size_t idx, const RowSpec& spec, const std::exception& e) {
    const std::string ctx = "study row " + std::to_string(idx) + " (k=" + std::to_string(spec.k) +
                            ", n=" + std::to_string(spec.n) + "): " + e.what();
    if (const auto* s = dynamic_cast<const SolverError*>(&e)) {
        throw SolverError(ctx, s->achieved_residual(), s->iterations());
    }
    if (dynamic_cast<const NumericalError*>(&e)) throw NumericalError(ctx);
    throw std::runtime_error(ctx);
}

std::vector<StudyRow> run_rows(const StudyConfig& cfg, const std::vector<RowSpec>& specs) {
    std::vector<StudyRow> rows(specs.size());
    const int workers = std::min<int>(worker_count(), static_cast<int>(specs.size()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < specs.size(); ++i) {
            try {
                rows[i] = run_row(cfg, specs[i]);
            } catch (const std::exception& e) {
                rethrow_with_row(i, specs[i], e);
            }
        }
        return rows;
    }
    // Rows are independent simulations; each runs single-threaded, so the
    // values cannot depend on the worker count.
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(specs.size());
    auto work = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= specs.size()) return;
            try {
                rows[i] = run_row(cfg, specs[i]);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int t = 0; t < workers; ++t) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
    for (std::size_t i = 0; i < errors.size(); ++i) {
        if (errors[i]) {
            try {
                std::rethrow_exception(errors[i]);
            } catch (const std::exception& e) {
                rethrow_with_row(i, specs[i], e);
            }
        }
    }
    return rows;
}

std::optional<OrderFit> fit_orders(const std::vector<StudyRow>& rows, bool against_k) {
    if (rows.size() < 2) return std::nullopt;
    std::vector<std::pair<double, double>> linf, l2, h1;
    for (const StudyRow& r : rows) {
        if (!r.errors) return std::nullopt;
        const double step = against_k ? r.k : r.h;
        if (!(step > 0.0) || !(r.errors->linf > 0.0) || !(r.errors->l2 > 0.0) ||
            !(r.errors->h1 > 0.0)) {
            return std::nullopt;
        }
        linf.emplace_back(step, r.errors->linf);
        l2.emplace_back(step, r.errors->l2);
        h1.emplace_back(step, r.errors->h1);
    }
    return OrderFit{estimate_order(linf), estimate_order(l2), estimate_order(h1)};
}

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

double estimate_order(std::span<const std::pair<double, double>> points) {
    if (points.size() < 2) {
        throw std::invalid_argument("estimate_order: need at least two points");
    }
    double mx = 0.0, my = 0.0;
    for (const auto& [step, err] : points) {
        if (!(step > 0.0) || !(err > 0.0)) {
            throw std::invalid_argument("estimate_order: steps and errors must be positive");
        }
        mx += std::log(step);
        my += std::log(err);
    }
    const double n = static_cast<double>(points.size());
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (const auto& [step, err] : points) {
        const double dx = std::log(step) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(err) - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("estimate_order: all steps identical");
    return sxy / sxx;
}

ConvergenceReport run_study(const StudyConfig& cfg) {
    validate(cfg);
    const std::vector<RowSpec> specs = plan_rows(cfg);
    ConvergenceReport report;
    report.config = cfg;
    report.rows = run_rows(cfg, specs);
    switch (cfg.study) {
        case StudyKind::Temporal:
            report.order_vs_k = fit_orders(report.rows, true);
            break;
        case StudyKind::Spatial:
            report.order_vs_h = fit_orders(report.rows, false);
            break;
        case StudyKind::Coupled3D:
            report.order_vs_k = fit_orders(report.rows, true);
            report.order_vs_h = fit_orders(report.rows, false);
            break;
        case StudyKind::NormPreservation:
        case StudyKind::StabilityProbe:
            break;
    }
    return report;
}

std::string csv_string(const ConvergenceReport& report) {
    const StudyKind kind = report.config.study;
    const bool has_h_column = kind == StudyKind::Spatial || kind == StudyKind::Coupled3D ||
                              (kind == StudyKind::NormPreservation && report.config.dim == 3);
    const bool has_k_column = kind != StudyKind::Spatial;
    const bool has_errors = kind == StudyKind::Temporal || kind == StudyKind::Spatial ||
                            kind == StudyKind::Coupled3D || kind == StudyKind::StabilityProbe;
    const bool has_deviation =
        kind == StudyKind::NormPreservation || kind == StudyKind::StabilityProbe;

    std::string out;
    auto emit_line = [&out](const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out += ',';
            out += fields[i];
        }
        out += '\n';
    };

    std::vector<std::string> header;
    if (has_k_column) header.push_back("k");
    if (has_h_column) header.push_back("h");
    if (has_errors) {
        header.push_back("linf");
        header.push_back("l2");
        header.push_back("h1");
    }
    if (has_deviation) header.push_back("norm_deviation");
    header.push_back("seconds");
    emit_line(header);

    for (const StudyRow& row : report.rows) {
        std::vector<std::string> fields;
        if (has_k_column) fields.push_back(fmt17(row.k));
        if (has_h_column) fields.push_back(fmt17(row.h));
        if (has_errors) {
            const NormTriple e = row.errors.value_or(NormTriple{});
            fields.push_back(fmt17(e.linf));
            fields.push_back(fmt17(e.l2));
            fields.push_back(fmt17(e.h1));
        }
        if (has_deviation) fields.push_back(fmt17(row.norm_deviation.value_or(0.0)));
        fields.push_back(fmt17(row.seconds));
        emit_line(fields);
    }

    auto emit_order = [&](const char* label, const OrderFit& fit) {
        std::vector<std::string> fields;
        fields.push_back(label);
        if (has_k_column && has_h_column) fields.push_back("");  // keep columns aligned
        fields.push_back(fmt17(fit.linf));
        fields.push_back(fmt17(fit.l2));
        fields.push_back(fmt17(fit.h1));
        emit_line(fields);
    };
    if (kind == StudyKind::Coupled3D) {
        if (report.order_vs_k) emit_order("order_vs_k", *report.order_vs_k);
        if (report.order_vs_h) emit_order("order_vs_h", *report.order_vs_h);
    } else if (report.order_vs_k) {
        emit_order("order", *report.order_vs_k);
    } else if (report.order_vs_h) {
        emit_order("order", *report.order_vs_h);
    }
    return out;
}

void write_csv(const ConvergenceReport& report, const std::filesystem::path& path) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw IoError("write_csv: cannot open " + path.string());
    file << csv_string(report);
    file.flush();
    if (!file) throw IoError("write_csv: write failed for " + path.string());
}

double parse_level_token(const std::string& token, double final_time) {
    std::string s = token;
    // trim
    const auto first = s.find_first_not_of(" \t");
    const auto last = s.find_last_not_of(" \t");
    if (first == std::string::npos) throw std::invalid_argument("empty refinement token");
    s = s.substr(first, last - first + 1);

    auto to_double = [](const std::string& text) {
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(text, &pos);
        } catch (const std::exception&) {
            throw std::invalid_argument("bad refinement token: " + text);
        }
        if (pos != text.size()) throw std::invalid_argument("bad refinement token: " + text);
        return v;
    };

    const auto slash = s.find('/');
    if (slash == std::string::npos) return to_double(s);
    const std::string num = s.substr(0, slash);
    const std::string den = s.substr(slash + 1);
    const double d = to_double(den);
    if (num == "T" || num == "t") return final_time / d;
    return to_double(num) / d;
}

std::vector<double> parse_levels(const std::string& text, double final_time) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const std::string tok =
            comma == std::string::npos ? text.substr(start) : text.substr(start, comma - start);
        out.push_back(parse_level_token(tok, final_time));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

}  // namespace llg
