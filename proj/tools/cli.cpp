#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <limits>
#include <sstream>

#include <CLI11.hpp>

#include "cfts/cf_operators.hpp"
#include "cfts/errors.hpp"
#include "cfts/linear.hpp"
#include "cfts/stability.hpp"

namespace cfts::cli {

namespace fs = std::filesystem;

namespace {

constexpr double kResidualLimit = 1e-8;

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

std::optional<double> to_real(std::string_view tok) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

double real_field(std::string_view tok, std::string_view field, int line) {
    auto v = to_real(tok);
    if (!v) {
        throw ParseError("line " + std::to_string(line) + ": " + std::string(field) +
                             ": expected a real number, got '" + std::string(tok) + "'",
                         line);
    }
    return *v;
}

std::size_t count_field(std::string_view tok, std::string_view field, int line) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
        throw ParseError("line " + std::to_string(line) + ": " + std::string(field) +
                             ": expected a non-negative integer, got '" + std::string(tok) + "'",
                         line);
    }
    return v;
}

[[noreturn]] void fail(int line, const std::string& msg) {
    throw ParseError("line " + std::to_string(line) + ": " + msg, line);
}

Signal parse_forcing(const std::vector<std::string_view>& tok, std::size_t from, int line) {
    if (from >= tok.size()) fail(line, "missing function form (constant, polynomial, sinusoid, table)");
    const std::string_view kind = tok[from];
    const std::size_t nargs = tok.size() - from - 1;
    auto arg = [&](std::size_t i) { return real_field(tok[from + 1 + i], kind, line); };
    if (kind == "constant") {
        if (nargs != 1) fail(line, "constant takes one value");
        return Signal::constant(arg(0));
    }
    if (kind == "polynomial") {
        if (nargs == 0) fail(line, "polynomial needs at least one coefficient");
        std::vector<double> c(nargs);
        for (std::size_t i = 0; i < nargs; ++i) c[i] = arg(i);
        auto f = [c](double t) {
            double v = 0.0;
            for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * t + *it;
            return v;
        };
        auto df = [c](double t) {
            double v = 0.0;
            for (std::size_t i = c.size(); i-- > 1;) v = v * t + static_cast<double>(i) * c[i];
            return v;
        };
        return Signal::closure(f, df);
    }
    if (kind == "sinusoid") {
        if (nargs != 3) fail(line, "sinusoid takes amplitude, frequency and phase");
        const double amp = arg(0), w = arg(1), phi = arg(2);
        return Signal::closure([=](double t) { return amp * std::sin(w * t + phi); },
                               [=](double t) { return amp * w * std::cos(w * t + phi); });
    }
    if (kind == "table") {
        if (nargs == 0) fail(line, "table needs at least one t:value pair");
        std::vector<double> ts, vs;
        for (std::size_t i = 0; i < nargs; ++i) {
            const std::string_view pair = tok[from + 1 + i];
            const auto colon = pair.find(':');
            if (colon == std::string_view::npos) fail(line, "table entries are written t:value");
            ts.push_back(real_field(pair.substr(0, colon), "table time", line));
            vs.push_back(real_field(pair.substr(colon + 1), "table value", line));
            if (i > 0 && !(ts[i] > ts[i - 1])) fail(line, "table times must increase");
        }
        return Signal::closure([ts, vs](double t) {
            if (t <= ts.front()) return vs.front();
            if (t >= ts.back()) return vs.back();
            const auto hi = static_cast<std::size_t>(std::upper_bound(ts.begin(), ts.end(), t) - ts.begin());
            const double w = (t - ts[hi - 1]) / (ts[hi] - ts[hi - 1]);
            return (1.0 - w) * vs[hi - 1] + w * vs[hi];
        });
    }
    fail(line, "unknown function form '" + std::string(kind) + "'");
}

RightHandSide parse_rhs(const std::vector<std::string_view>& tok, int line) {
    if (tok.empty()) fail(line, "rhs: missing form (zero, sine, affine)");
    if (tok[0] == "zero") {
        if (tok.size() != 1) fail(line, "rhs zero takes no arguments");
        return [](double, double) { return 0.0; };
    }
    if (tok[0] == "sine") {
        if (tok.size() != 2) fail(line, "rhs sine takes one amplitude");
        const double amp = real_field(tok[1], "rhs", line);
        return [amp](double, double x) { return amp * std::sin(x); };
    }
    if (tok[0] == "affine") {
        if (tok.size() < 3) fail(line, "rhs affine takes a slope and a function form");
        const double k = real_field(tok[1], "rhs", line);
        Signal u = parse_forcing(tok, 2, line);
        return [k, u](double t, double x) { return k * x + u(t); };
    }
    fail(line, "rhs: unknown form '" + std::string(tok[0]) + "'");
}

void finish(Scenario& s) {
    if (s.segments.empty()) fail(s.line, "scenario [" + s.name + "] has no segment lines");
    if (s.alphas.empty()) fail(s.line, "scenario [" + s.name + "] has no alphas");
    if (s.horizon && s.steps) fail(s.line, "scenario [" + s.name + "] sets both horizon and steps");
    try {
        (void)s.timescale();
    } catch (const DomainError& e) {
        fail(s.line, "scenario [" + s.name + "]: " + e.what());
    }
    if (s.equation == Equation::nonlinear) {
        if (!s.rhs) fail(s.line, "scenario [" + s.name + "] is nonlinear but has no rhs");
        if (!s.lipschitz) fail(s.line, "scenario [" + s.name + "] is nonlinear but has no lipschitz");
        for (double a : s.alphas) {
            if (a >= 1.0) fail(s.line, "scenario [" + s.name + "]: nonlinear scenarios need alpha < 1");
        }
    }
}

}  // namespace

TimeScale Scenario::timescale() const { return TimeScale(segments); }

double Scenario::end_point(const TimeScale& ts, double start) const {
    if (horizon) return ts.snap(*horizon);
    if (!steps) return ts.max();
    double t = ts.snap(start);
    for (std::size_t i = 0; i < *steps; ++i) {
        if (t >= ts.max()) {
            throw DomainError("scenario [" + name + "]: " + std::to_string(*steps) +
                              " steps run past the end of the time scale");
        }
        if (ts.mu(t) == 0.0) {
            throw DomainError("scenario [" + name + "]: steps needs scattered points; use horizon");
        }
        t = ts.sigma(t);
    }
    return t;
}

std::vector<Scenario> parse_config(std::string_view text) {
    std::vector<Scenario> out;
    Scenario* cur = nullptr;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view raw = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
        const std::string_view line = trim(raw);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') fail(line_no, "unterminated section header");
            const std::string name(trim(line.substr(1, line.size() - 2)));
            if (name.empty()) fail(line_no, "empty scenario name");
            for (char c : name) {
                if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-' && c != '.') {
                    fail(line_no, "scenario names use letters, digits, '_', '-' and '.'");
                }
            }
            for (const auto& s : out) {
                if (s.name == name) fail(line_no, "duplicate scenario [" + name + "]");
            }
            if (cur) finish(*cur);
            out.emplace_back();
            cur = &out.back();
            cur->name = name;
            cur->line = line_no;
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) fail(line_no, "expected key = value");
        if (!cur) fail(line_no, "key outside of a [scenario] section");
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));
        const auto tok = split_ws(value);
        if (tok.empty()) fail(line_no, std::string(key) + ": missing value");
        auto single = [&]() {
            if (tok.size() != 1) fail(line_no, std::string(key) + " takes one value");
            return tok[0];
        };

        if (key == "segment") {
            try {
                cur->segments.push_back(TimeScale::parse_segment(value, line_no));
            } catch (const ParseError& e) {
                throw ParseError(std::string("line ") + std::to_string(line_no) + ": segment: " + e.what(), line_no);
            }
        } else if (key == "equation") {
            if (single() == "linear") cur->equation = Equation::linear;
            else if (tok[0] == "nonlinear") cur->equation = Equation::nonlinear;
            else fail(line_no, "equation must be linear or nonlinear");
        } else if (key == "lambda") {
            cur->lambda = real_field(single(), key, line_no);
        } else if (key == "x0") {
            cur->x0 = real_field(single(), key, line_no);
        } else if (key == "u") {
            cur->u = parse_forcing(tok, 0, line_no);
        } else if (key == "rhs") {
            cur->rhs = parse_rhs(tok, line_no);
        } else if (key == "lipschitz") {
            const double l = real_field(single(), key, line_no);
            if (!(l > 0.0)) fail(line_no, "lipschitz must be positive");
            cur->lipschitz = l;
        } else if (key == "interval") {
            if (tok.size() != 2) fail(line_no, "interval takes a and b");
            const double a = real_field(tok[0], key, line_no), b = real_field(tok[1], key, line_no);
            if (!(a < b)) fail(line_no, "interval needs a < b");
            cur->interval = std::make_pair(a, b);
        } else if (key == "alphas") {
            cur->alphas.clear();
            for (auto t : tok) {
                const double a = real_field(t, key, line_no);
                if (!(a >= 0.0 && a <= 1.0)) fail(line_no, "alphas must lie in [0, 1]");
                cur->alphas.push_back(a);
            }
        } else if (key == "horizon") {
            cur->horizon = real_field(single(), key, line_no);
        } else if (key == "steps") {
            cur->steps = count_field(single(), key, line_no);
        } else if (key == "outputs") {
            cur->want_trajectory = cur->want_verdict = cur->want_residuals = false;
            for (auto t : tok) {
                if (t == "trajectory") cur->want_trajectory = true;
                else if (t == "verdict") cur->want_verdict = true;
                else if (t == "residuals") cur->want_residuals = true;
                else fail(line_no, "outputs: unknown output '" + std::string(t) + "'");
            }
        } else if (key == "dense_step") {
            cur->dense_step = real_field(single(), key, line_no);
        } else if (key == "tol") {
            const double v = real_field(single(), key, line_no);
            if (!(v > 0.0)) fail(line_no, "tol must be positive");
            cur->tol = v;
        } else if (key == "max_iter") {
            cur->max_iter = count_field(single(), key, line_no);
        } else {
            fail(line_no, "unknown key '" + std::string(key) + "'");
        }
    }
    if (cur) finish(*cur);
    if (out.empty()) throw ParseError("config defines no [scenario] sections", 0);
    return out;
}

std::vector<Scenario> load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open config '" + path + "'", 0);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

double Trajectory::max_residual() const {
    double m = 0.0;
    for (std::size_t i = 1; i < residual.size(); ++i) {
        if (!std::isnan(residual[i])) m = std::max(m, std::abs(residual[i]));
    }
    return m;
}

Trajectory simulate_linear(const Scenario& s, double alpha, const Tolerances& tol) {
    const TimeScale ts = s.timescale();
    const double end = s.end_point(ts, 0.0);
    Trajectory tr;
    if (alpha >= 1.0) {
        const Signal x = solve_classical_trajectory(ts, s.lambda, s.u, s.x0, end, s.dense_step, tol);
        tr.t = x.mesh();
        tr.x = x.values();
        for (double t : tr.t) {
            const bool defined = t < end || (ts.mu(t) == 0.0 && ts.in_kappa(t));
            tr.residual.push_back(defined ? residual_classical(ts, s.lambda, s.u, x, t, tol)
                                          : std::numeric_limits<double>::quiet_NaN());
        }
        return tr;
    }
    const LinearCFProblem prob(ts, s.lambda, s.u, s.x0, CFOrder(alpha), tol);
    const Signal x = solve_linear_trajectory(prob, end, s.dense_step, tol);
    tr.t = x.mesh();
    tr.x = x.values();
    for (double t : tr.t) tr.residual.push_back(residual_linear(prob, x, t, tol));
    return tr;
}

NonlinearRun simulate_nonlinear(const Scenario& s, double alpha, const Tolerances& tol) {
    const TimeScale ts = s.timescale();
    double a = ts.min();
    double b = 0.0;
    if (s.interval) {
        a = s.interval->first;
        b = s.interval->second;
    } else {
        b = s.end_point(ts, a);
    }
    const NonlinearCFProblem prob(ts, s.rhs, *s.lipschitz, a, b, s.x0, CFOrder(alpha));
    PicardOptions opts;
    opts.tol = s.tol.value_or(std::min(1e-10, tol.quadrature));
    opts.max_iter = s.max_iter;
    opts.dense_step = s.dense_step;
    NonlinearRun run{Trajectory{}, picard_solve(prob, opts)};
    const Signal& x = run.picard.solution;
    run.trajectory.t = x.mesh();
    run.trajectory.x = x.values();
    for (double t : run.trajectory.t) run.trajectory.residual.push_back(residual_nonlinear(prob, x, t, tol));
    return run;
}

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string short_fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

}  // namespace

std::string trajectory_csv(const Trajectory& tr) {
    std::string out = "t,x,residual\n";
    for (std::size_t i = 0; i < tr.t.size(); ++i) {
        out += fmt(tr.t[i]) + ',' + fmt(tr.x[i]) + ',' + fmt(tr.residual[i]) + '\n';
    }
    return out;
}

std::string csv_file_name(const std::string& scenario, double alpha) {
    return scenario + "_alpha" + short_fmt(alpha) + ".csv";
}

std::string figure_config(int which) {
    switch (which) {
        case 1:
            return "[fig1]\n"
                   "segment = grid 0 1 31\n"
                   "equation = linear\n"
                   "lambda = 0.2\n"
                   "x0 = 0\n"
                   "u = constant 1\n"
                   "alphas = 0.2 0.5 0.9 1\n"
                   "steps = 30\n"
                   "outputs = trajectory verdict\n";
        case 2:
            return "[fig2]\n"
                   "segment = grid 0 1 31\n"
                   "equation = linear\n"
                   "lambda = 4.2\n"
                   "x0 = 0\n"
                   "u = constant 1\n"
                   "alphas = 0.2 0.5\n"
                   "steps = 30\n"
                   "outputs = trajectory verdict\n";
        case 3: {
            std::string cfg;
            const char* hs[] = {"0.1", "0.5", "1"};
            const char* counts[] = {"31", "7", "4"};
            for (int i = 0; i < 3; ++i) {
                cfg += std::string("[fig3_h") + hs[i] + "]\n" + "segment = grid 0 " + hs[i] + ' ' +
                       counts[i] + "\n" +
                       "equation = linear\n"
                       "lambda = 0.2\n"
                       "x0 = 0\n"
                       "u = constant 1\n"
                       "alphas = 0.5\n"
                       "horizon = 3\n"
                       "outputs = trajectory verdict\n\n";
            }
            return cfg;
        }
        default:
            throw DomainError("figures are numbered 1, 2 and 3");
    }
}

Tolerances tolerances_from_env() {
    Tolerances tol;
    const char* env = std::getenv("CFTS_TOL");
    if (!env || !*env) return tol;
    auto v = to_real(trim(env));
    if (!v || !(*v > 0.0)) throw DomainError(std::string("CFTS_TOL must be a positive real, got '") + env + "'");
    tol.quadrature = *v;
    tol.derivative = *v;
    return tol;
}

namespace {

struct FileOut {
    fs::path path;
    std::string content;
};

struct Outcome {
    int code = Exit::ok;
    std::string error;
    std::string report;
    std::string warnings;
    std::vector<FileOut> files;
    double worst_residual = 0.0;
};

int classify(const std::exception_ptr& ep, std::string& msg) {
    try {
        std::rethrow_exception(ep);
    } catch (const NotContractive& e) {
        msg = e.what();
        return Exit::not_contractive;
    } catch (const NotRegressive& e) {
        msg = e.what();
        return Exit::regressivity_error;
    } catch (const NonRegressiveParameter& e) {
        msg = e.what();
        return Exit::regressivity_error;
    } catch (const NonRegressiveKernel& e) {
        msg = e.what();
        return Exit::regressivity_error;
    } catch (const ParseError& e) {
        msg = e.what();
        return Exit::config_error;
    } catch (const DomainError& e) {
        msg = e.what();
        return Exit::config_error;
    } catch (const std::exception& e) {
        msg = e.what();
        return Exit::failure;
    }
}

std::string verdict_csv(const Scenario& s) {
    const TimeScale ts = s.timescale();
    const auto h = ts.uniform_step();
    const bool continuous = !ts.is_discrete() && ts.graininess_values().empty();
    std::string out = verdict_csv_header() + '\n';
    for (double a : s.alphas) {
        if (a <= 0.0) continue;
        if (h) {
            out += verdict_csv_row(classify_hz(s.lambda, a, *h)) + '\n';
        } else if (continuous && a < 1.0) {
            out += verdict_csv_row(classify_r(s.lambda, a)) + '\n';
        }
    }
    return out;
}

Outcome run_scenario(const Scenario& s, const fs::path& dir, const Tolerances& tol) {
    Outcome oc;
    try {
        for (double a : s.alphas) {
            Trajectory tr;
            std::string label = "[" + s.name + " alpha=" + short_fmt(a) + "]";
            if (s.equation == Equation::nonlinear) {
                NonlinearRun run = simulate_nonlinear(s, a, tol);
                tr = std::move(run.trajectory);
                const PicardResult& p = run.picard;
                oc.report += label + "\n";
                oc.report += "q = " + fmt(p.contraction_q) + "\n";
                oc.report += "iterations = " + std::to_string(p.iterations) + "\n";
                oc.report += "final_defect = " + fmt(p.final_defect) + "\n";
                oc.report += "a_priori_bound = " + fmt(p.a_priori_bound) + "\n";
                oc.report += "max_residual = " + fmt(tr.max_residual()) + "\n";
                if (p.lipschitz_warning) {
                    oc.warnings += "warning: " + label + " sampled slope " + fmt(p.sampled_lipschitz) +
                                   " exceeds the supplied Lipschitz constant\n";
                }
            } else {
                tr = simulate_linear(s, a, tol);
                if (s.want_residuals) oc.report += label + " max_residual = " + fmt(tr.max_residual()) + "\n";
            }
            const double worst = tr.max_residual();
            oc.worst_residual = std::max(oc.worst_residual, worst);
            if (!(worst < kResidualLimit)) {
                oc.warnings += "warning: " + label + " max |residual| = " + fmt(worst) +
                               " is not below 1e-8\n";
            }
            if (s.want_trajectory) oc.files.push_back({dir / csv_file_name(s.name, a), trajectory_csv(tr)});
        }
        if (s.want_verdict && s.equation == Equation::linear) {
            oc.files.push_back({dir / (s.name + "_verdict.csv"), verdict_csv(s)});
        }
    } catch (...) {
        oc.code = classify(std::current_exception(), oc.error);
        oc.error = "scenario [" + s.name + "] (line " + std::to_string(s.line) + "): " + oc.error;
    }
    return oc;
}

void write_file(const FileOut& f) {
    std::ofstream os(f.path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write " + f.path.string());
    os << f.content;
}

int run_scenarios(const std::vector<Scenario>& scenarios, const fs::path& dir, bool strict,
                  const Tolerances& tol, std::ostream& out, std::ostream& err) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        err << "error: cannot create output directory " << dir << ": " << ec.message() << "\n";
        return Exit::failure;
    }
    std::vector<std::future<Outcome>> jobs;
    for (const auto& s : scenarios) {
        jobs.push_back(std::async(std::launch::async, [&s, &dir, &tol] { return run_scenario(s, dir, tol); }));
    }
    int code = Exit::ok;
    for (auto& job : jobs) {
        Outcome oc = job.get();
        out << oc.report;
        err << oc.warnings;
        for (const auto& f : oc.files) {
            write_file(f);
            out << "wrote " << f.path.string() << "\n";
        }
        if (oc.code != Exit::ok) {
            err << "error: " << oc.error << "\n";
            if (code == Exit::ok) code = oc.code;
        } else if (strict && !(oc.worst_residual < kResidualLimit) && code == Exit::ok) {
            code = Exit::residual_error;
        }
    }
    return code;
}

std::vector<double> parse_range(const std::string& spec, const std::string& flag) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    auto real = [&](const std::string& s) {
        auto v = to_real(trim(s));
        if (!v) throw CLI::ValidationError(flag, "expected a real or lo:hi:n, got '" + spec + "'");
        return *v;
    };
    if (parts.size() == 1) return {real(parts[0])};
    if (parts.size() != 3) throw CLI::ValidationError(flag, "ranges are written lo:hi:n");
    const double lo = real(parts[0]), hi = real(parts[1]);
    std::size_t n = 0;
    auto [ptr, ecode] = std::from_chars(parts[2].data(), parts[2].data() + parts[2].size(), n);
    if (ecode != std::errc() || ptr != parts[2].data() + parts[2].size() || n == 0) {
        throw CLI::ValidationError(flag, "range count must be a positive integer");
    }
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return v;
}

std::string gnuplot_script(int which, const std::vector<std::string>& csvs) {
    std::string gp = "set datafile separator ','\n"
                     "set xlabel 't'\n"
                     "set ylabel 'x(t)'\n"
                     "set key left top\n"
                     "set terminal pngcairo size 800,600\n"
                     "set output 'fig" + std::to_string(which) + ".png'\n"
                     "plot ";
    for (std::size_t i = 0; i < csvs.size(); ++i) {
        if (i) gp += ", \\\n     ";
        gp += "'" + csvs[i] + "' using 1:2 with linespoints title '" +
              csvs[i].substr(0, csvs[i].size() - 4) + "'";
    }
    return gp + "\n";
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Caputo-Fabrizio dynamic equations on time scales", "cfts"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    bool strict = false;
    auto* simulate = app.add_subcommand("simulate", "Simulate every scenario of a config and write CSV trajectories");
    simulate->add_option("config", config_path, "Scenario config file")->required();
    simulate->add_option("--out", out_dir, "Output directory");
    simulate->add_flag("--strict", strict, "Exit 5 when a residual is not below 1e-8");

    std::string nl_config;
    std::string nl_out = ".";
    bool nl_strict = false;
    auto* nonlinear = app.add_subcommand("solve-nonlinear", "Picard-solve the nonlinear scenarios of a config");
    nonlinear->add_option("config", nl_config, "Scenario config file")->required();
    nonlinear->add_option("--out", nl_out, "Output directory");
    nonlinear->add_flag("--strict", nl_strict, "Exit 5 when a residual is not below 1e-8");

    std::string lambda_spec, alpha_spec, h_spec, stab_out;
    bool continuous = false;
    auto* stability = app.add_subcommand("stability", "Classify (lambda, alpha, h) points; values may be lo:hi:n ranges");
    stability->add_option("--lambda", lambda_spec, "lambda or lo:hi:n")->required();
    stability->add_option("--alpha", alpha_spec, "alpha or lo:hi:n")->required();
    stability->set_help_flag("--help", "Print this help message and exit");
    auto* h_opt = stability->add_option("--h", h_spec, "grid step or lo:hi:n");
    auto* c_opt = stability->add_flag("--continuous", continuous, "Use the continuous criterion (T = R)");
    h_opt->excludes(c_opt);
    stability->add_option("--out", stab_out, "Write the verdict CSV here instead of stdout");

    int which = 0;
    std::string fig_out = ".";
    auto* figures = app.add_subcommand("figures", "Write the figure datasets and a gnuplot script");
    figures->add_option("--which", which, "Figure number")->required()->check(CLI::IsMember({1, 2, 3}));
    figures->add_option("--out", fig_out, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return Exit::ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return Exit::ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return Exit::config_error;
    }

    Tolerances tol;
    try {
        tol = tolerances_from_env();
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return Exit::config_error;
    }

    try {
        if (*simulate || *nonlinear) {
            const std::string& path = *simulate ? config_path : nl_config;
            std::vector<Scenario> scenarios;
            try {
                scenarios = load_config(path);
            } catch (const ParseError& e) {
                err << path << ": " << e.what() << "\n";
                return Exit::config_error;
            }
            if (*nonlinear) {
                std::erase_if(scenarios, [](const Scenario& s) { return s.equation != Equation::nonlinear; });
                if (scenarios.empty()) {
                    err << path << ": no scenario has equation = nonlinear\n";
                    return Exit::config_error;
                }
                return run_scenarios(scenarios, nl_out, nl_strict, tol, out, err);
            }
            return run_scenarios(scenarios, out_dir, strict, tol, out, err);
        }

        if (*stability) {
            if (!continuous && h_spec.empty()) {
                err << "error: stability needs --h or --continuous\n";
                return Exit::config_error;
            }
            std::vector<double> lambdas, alphas, hs;
            try {
                lambdas = parse_range(lambda_spec, "--lambda");
                alphas = parse_range(alpha_spec, "--alpha");
                if (!continuous) hs = parse_range(h_spec, "--h");
            } catch (const CLI::ValidationError& e) {
                err << "error: " << e.what() << "\n";
                return Exit::config_error;
            }
            std::string table = verdict_csv_header() + '\n';
            try {
                for (double h : continuous ? std::vector<double>{0.0} : hs) {
                    for (double a : alphas) {
                        for (double l : lambdas) {
                            table += verdict_csv_row(continuous ? classify_r(l, a) : classify_hz(l, a, h)) + '\n';
                        }
                    }
                }
            } catch (const DomainError& e) {
                err << "error: " << e.what() << "\n";
                return Exit::config_error;
            }
            if (stab_out.empty()) {
                out << table;
            } else {
                write_file({stab_out, table});
                out << "wrote " << stab_out << "\n";
            }
            return Exit::ok;
        }

        if (*figures) {
            const auto scenarios = parse_config(figure_config(which));
            const int code = run_scenarios(scenarios, fig_out, false, tol, out, err);
            std::vector<std::string> csvs;
            for (const auto& s : scenarios) {
                for (double a : s.alphas) csvs.push_back(csv_file_name(s.name, a));
            }
            if (which == 3) {
                const auto interval = TimeScale::interval(0.0, 3.0);
                const LinearCFProblem prob(interval, 0.2, Signal::constant(1.0), 0.0, CFOrder(0.5), tol);
                std::string ref = "t,x\n";
                for (int i = 0; i <= 300; ++i) {
                    const double t = 3.0 * i / 300.0;
                    ref += fmt(t) + ',' + fmt(solve_linear(prob, t, tol)) + '\n';
                }
                write_file({fs::path(fig_out) / "fig3_continuous.csv", ref});
                out << "wrote " << (fs::path(fig_out) / "fig3_continuous.csv").string() << "\n";
                csvs.push_back("fig3_continuous.csv");
            }
            const fs::path gp = fs::path(fig_out) / ("fig" + std::to_string(which) + ".gp");
            write_file({gp, gnuplot_script(which, csvs)});
            out << "wrote " << gp.string() << "\n";
            return code;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return Exit::failure;
    }
    return Exit::ok;
}

}  // namespace cfts::cli
