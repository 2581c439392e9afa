#include "cfts/timescale.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>
#include <string>
#include <type_traits>

#include "cfts/errors.hpp"

namespace cfts {

PointNotInTimeScale::PointNotInTimeScale(double t)
    : DomainError([t] {
          std::ostringstream os;
          os.precision(17);
          os << "point " << t << " does not belong to the time scale";
          return os.str();
      }()),
      point_(t) {}

std::string_view to_string(PointClass c) {
    switch (c) {
        case PointClass::dense: return "dense";
        case PointClass::right_scattered: return "right-scattered";
        case PointClass::left_scattered: return "left-scattered";
        case PointClass::isolated: return "isolated";
        case PointClass::right_dense_left_scattered: return "right-dense-left-scattered";
        case PointClass::left_dense_right_scattered: return "left-dense-right-scattered";
    }
    return "unknown";
}

namespace {

struct Atom {
    double a;
    double b;
    bool interval;
};

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) {
        throw DomainError(std::string(what) + " must be finite");
    }
}

Segment normalize(const Segment& s) {
    if (const auto* g = std::get_if<UniformGrid>(&s)) {
        if (g->count == 1) return IsolatedPoint{g->start};
    }
    return s;
}

void expand(const Segment& s, std::vector<Atom>& atoms) {
    std::visit(
        [&](const auto& seg) {
            using T = std::decay_t<decltype(seg)>;
            if constexpr (std::is_same_v<T, ContinuousInterval>) {
                require_finite(seg.a, "interval endpoint");
                require_finite(seg.b, "interval endpoint");
                if (!(seg.a < seg.b)) throw DomainError("interval needs a < b");
                atoms.push_back({seg.a, seg.b, true});
            } else if constexpr (std::is_same_v<T, UniformGrid>) {
                require_finite(seg.start, "grid start");
                require_finite(seg.step, "grid step");
                if (!(seg.step > 0.0)) throw DomainError("grid step must be positive");
                if (seg.count == 0) throw DomainError("grid needs at least one point");
                for (std::size_t j = 0; j < seg.count; ++j) {
                    const double t = seg.start + static_cast<double>(j) * seg.step;
                    atoms.push_back({t, t, false});
                }
            } else {
                require_finite(seg.t, "point");
                atoms.push_back({seg.t, seg.t, false});
            }
        },
        s);
}

}  // namespace

struct TimeScale::Data {
    std::vector<Segment> segments;
    std::vector<Piece> pieces;
    std::vector<double> starts;
    double min = 0.0;
    double max = 0.0;
    double tol = 1e-12;

    double tol_at(double t) const { return tol * std::max(1.0, std::abs(t)); }
};

TimeScale::TimeScale(std::vector<Segment> segments, double membership_tol) {
    if (segments.empty()) throw DomainError("a time scale needs at least one segment");
    auto data = std::make_shared<Data>();
    data->tol = membership_tol;

    std::vector<Atom> atoms;
    for (auto& s : segments) {
        s = normalize(s);
        expand(s, atoms);
    }
    std::stable_sort(atoms.begin(), atoms.end(),
                     [](const Atom& x, const Atom& y) {
                         return x.a < y.a || (x.a == y.a && !x.interval && y.interval);
                     });

    std::vector<Atom> merged;
    for (const Atom& x : atoms) {
        if (merged.empty()) {
            merged.push_back(x);
            continue;
        }
        Atom& last = merged.back();
        const double tol = data->tol_at(x.a);
        if (x.a > last.b + tol) {
            merged.push_back(x);
        } else if (std::abs(x.a - last.b) <= tol) {
            // shared endpoint
            if (!x.interval) continue;
            if (last.interval) {
                last.b = std::max(last.b, x.b);
            } else {
                last = x;
            }
        } else {
            throw DomainError("time-scale segments overlap near t = " + std::to_string(x.a));
        }
    }

    for (std::size_t i = 0; i < merged.size(); ++i) {
        const Atom& x = merged[i];
        if (x.interval) data->pieces.push_back({Piece::Kind::dense, x.a, x.b});
        if (i + 1 < merged.size()) {
            data->pieces.push_back({Piece::Kind::jump, x.b, merged[i + 1].a});
        }
    }
    for (const Piece& p : data->pieces) data->starts.push_back(p.start);
    data->min = merged.front().a;
    data->max = merged.back().b;
    data->segments = std::move(segments);
    data_ = std::move(data);
}

TimeScale TimeScale::interval(double a, double b) { return TimeScale({ContinuousInterval{a, b}}); }

TimeScale TimeScale::uniform(double start, double step, std::size_t count) {
    return TimeScale({UniformGrid{start, step, count}});
}

namespace {

std::vector<std::string_view> tokenize(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

double to_real(std::string_view tok, int line_no) {
    double v = 0.0;
    const auto* first = tok.data();
    const auto* last = tok.data() + tok.size();
    if (!tok.empty() && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || !std::isfinite(v)) {
        throw ParseError("expected a real number, got '" + std::string(tok) + "'", line_no);
    }
    return v;
}

std::size_t to_count(std::string_view tok, int line_no) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
        throw ParseError("expected a point count, got '" + std::string(tok) + "'", line_no);
    }
    return v;
}

}  // namespace

Segment TimeScale::parse_segment(std::string_view line, int line_no) {
    const auto tok = tokenize(line);
    if (tok.empty()) throw ParseError("empty segment", line_no);
    auto arity = [&](std::size_t n) {
        if (tok.size() != n + 1) {
            throw ParseError("'" + std::string(tok[0]) + "' takes " + std::to_string(n) +
                                 " arguments",
                             line_no);
        }
    };
    if (tok[0] == "interval") {
        arity(2);
        const double a = to_real(tok[1], line_no);
        const double b = to_real(tok[2], line_no);
        if (!(a < b)) throw ParseError("interval needs a < b", line_no);
        return ContinuousInterval{a, b};
    }
    if (tok[0] == "grid") {
        arity(3);
        const double h = to_real(tok[2], line_no);
        const std::size_t n = to_count(tok[3], line_no);
        if (!(h > 0.0)) throw ParseError("grid step must be positive", line_no);
        if (n == 0) throw ParseError("grid needs at least one point", line_no);
        return UniformGrid{to_real(tok[1], line_no), h, n};
    }
    if (tok[0] == "point") {
        arity(1);
        return IsolatedPoint{to_real(tok[1], line_no)};
    }
    throw ParseError("unknown segment kind '" + std::string(tok[0]) +
                         "' (expected interval, grid or point)",
                     line_no);
}

TimeScale TimeScale::parse(std::string_view description) {
    std::vector<Segment> segments;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= description.size()) {
        const std::size_t nl = description.find('\n', pos);
        std::string_view line = description.substr(pos, nl == std::string_view::npos
                                                            ? std::string_view::npos
                                                            : nl - pos);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        if (!tokenize(line).empty()) segments.push_back(parse_segment(line, line_no));
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
    if (segments.empty()) throw ParseError("time-scale description has no segments", line_no);
    try {
        return TimeScale(std::move(segments));
    } catch (const DomainError& e) {
        throw ParseError(e.what(), 0);
    }
}

double TimeScale::min() const noexcept { return data_->min; }
double TimeScale::max() const noexcept { return data_->max; }
const std::vector<Segment>& TimeScale::segments() const noexcept { return data_->segments; }
const std::vector<Piece>& TimeScale::pieces() const noexcept { return data_->pieces; }
double TimeScale::membership_tolerance() const noexcept { return data_->tol; }

double TimeScale::snap(double t) const {
    const Data& d = *data_;
    if (!std::isfinite(t)) throw PointNotInTimeScale(t);
    const double tol = d.tol_at(t);
    if (t < d.min - tol || t > d.max + tol) throw PointNotInTimeScale(t);
    if (std::abs(t - d.max) <= tol) return d.max;
    const auto it = std::upper_bound(d.starts.begin(), d.starts.end(), t + tol);
    if (it == d.starts.begin()) throw PointNotInTimeScale(t);
    const Piece& p = d.pieces[static_cast<std::size_t>(it - d.starts.begin()) - 1];
    if (std::abs(t - p.start) <= tol) return p.start;
    if (p.kind == Piece::Kind::dense) {
        if (std::abs(t - p.end) <= tol) return p.end;
        if (t > p.start && t < p.end) return t;
    }
    throw PointNotInTimeScale(t);
}

bool TimeScale::contains(double t) const {
    try {
        snap(t);
        return true;
    } catch (const PointNotInTimeScale&) {
        return false;
    }
}

std::size_t TimeScale::piece_index(double t) const {
    const Data& d = *data_;
    const double s = snap(t);
    if (s == d.max) return d.pieces.size();
    const auto it = std::upper_bound(d.starts.begin(), d.starts.end(), s);
    return static_cast<std::size_t>(it - d.starts.begin()) - 1;
}

double TimeScale::sigma(double t) const {
    const double s = snap(t);
    const std::size_t i = piece_index(s);
    if (i == data_->pieces.size()) return s;
    const Piece& p = data_->pieces[i];
    return p.is_jump() ? p.end : s;
}

double TimeScale::rho(double t) const {
    const Data& d = *data_;
    const double s = snap(t);
    if (s == d.min) return s;
    const std::size_t i = piece_index(s);
    if (i < d.pieces.size() && !d.pieces[i].is_jump() && s > d.pieces[i].start) return s;
    const Piece& prev = d.pieces[i - 1];
    return prev.is_jump() ? prev.start : s;
}

double TimeScale::mu(double t) const { return sigma(t) - snap(t); }

PointClass TimeScale::classify(double t) const {
    const double s = snap(t);
    const bool rs = sigma(s) > s;
    const bool ls = rho(s) < s;
    const bool at_min = s == min();
    const bool at_max = s == max();
    if (at_min && at_max) return PointClass::isolated;
    if (at_min) return rs ? PointClass::right_scattered : PointClass::dense;
    if (at_max) return ls ? PointClass::left_scattered : PointClass::dense;
    if (rs && ls) return PointClass::isolated;
    if (rs) return PointClass::left_dense_right_scattered;
    if (ls) return PointClass::right_dense_left_scattered;
    return PointClass::dense;
}

bool TimeScale::in_kappa(double t) const {
    const double s = snap(t);
    return s != max() || rho(s) == s;
}

std::vector<double> TimeScale::graininess_values() const {
    std::vector<double> out;
    for (const Piece& p : data_->pieces) {
        if (p.is_jump()) out.push_back(p.length());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end(),
                          [&](double x, double y) { return std::abs(x - y) <= data_->tol_at(y); }),
              out.end());
    return out;
}

bool TimeScale::is_discrete() const noexcept {
    return std::none_of(data_->pieces.begin(), data_->pieces.end(),
                        [](const Piece& p) { return !p.is_jump(); });
}

std::optional<double> TimeScale::uniform_step() const noexcept {
    if (data_->segments.size() != 1) return std::nullopt;
    if (const auto* g = std::get_if<UniformGrid>(&data_->segments.front())) return g->step;
    return std::nullopt;
}

std::vector<double> TimeScale::mesh(double from, double to, double dense_step) const {
    const Data& d = *data_;
    const double a = snap(from);
    const double b = snap(to);
    if (a > b) throw DomainError("mesh needs from <= to");
    std::vector<double> out;
    for (std::size_t i = piece_index(a); i < d.pieces.size() && d.pieces[i].start < b; ++i) {
        const Piece& p = d.pieces[i];
        if (p.is_jump()) {
            out.push_back(p.start);
            continue;
        }
        const double c = std::max(p.start, a);
        const double e = std::min(p.end, b);
        if (!(e > c)) continue;
        const double step = dense_step > 0.0 ? dense_step : p.length() / 256.0;
        const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil((e - c) / step - 1e-9)));
        for (std::size_t j = 0; j < n; ++j) {
            out.push_back(c + (e - c) * static_cast<double>(j) / static_cast<double>(n));
        }
    }
    out.push_back(b);
    return out;
}

double sigma(const TimeScale& ts, double t) { return ts.sigma(t); }
double rho(const TimeScale& ts, double t) { return ts.rho(t); }
double mu(const TimeScale& ts, double t) { return ts.mu(t); }

}  // namespace cfts
