#include "psh/quad.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <stdexcept>

#include "psh/errors.hpp"
#include "psh/frame.hpp"

namespace psh {

const char* to_string(Convergence c) {
    switch (c) {
        case Convergence::Converges: return "Converges";
        case Convergence::Diverges: return "Diverges";
        default: return "Inconclusive";
    }
}

std::vector<double> QuadConfig::default_schedule() {
    std::vector<double> s;
    for (int k = 3; k <= 12; ++k) s.push_back(std::ldexp(1.0, -k));
    return s;
}

namespace {

struct Rule15 {
    std::array<double, 15> x{};
    std::array<double, 15> w{};
};

const Rule15& gauss15() {
    static const Rule15 rule = [] {
        Rule15 r;
        constexpr int n = 15;
        for (int i = 0; i < n; ++i) {
            double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16) break;
            }
            {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
            }
            r.x[i] = x;
            r.w[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        return r;
    }();
    return rule;
}

double pairwise_sum(const double* v, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    std::size_t h = n / 2;
    return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

struct Evaluator {
    const Fn1& f;
    std::size_t count = 0;
    double operator()(double x) {
        ++count;
        double v = f(x);
        if (!std::isfinite(v)) throw NonIntegrable("integrand is not finite at x = " + std::to_string(x));
        return v;
    }
};

double gl_rule(Evaluator& f, double a, double b) {
    const Rule15& r = gauss15();
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < 15; ++i) s += r.w[i] * f(c + h * r.x[i]);
    return s * h;
}

struct End {
    bool cluster = false;
    double alpha = 0.0;
};

struct Panel {
    double a, b;
    End ea, eb;
    bool ts;
    double value = 0.0, err = 0.0;
    double left = 0.0, right = 0.0;  // Gauss halves, reused by children
};

void eval_gl(Evaluator& f, Panel& p, const double* whole) {
    double m = 0.5 * (p.a + p.b);
    double w = whole ? *whole : gl_rule(f, p.a, p.b);
    p.left = gl_rule(f, p.a, m);
    p.right = gl_rule(f, m, p.b);
    p.value = p.left + p.right;
    p.err = std::abs(w - p.value);
}

// Tanh-sinh on [a, b]. Singular ends away from 0 lose node resolution below
// ~1e-9 |e|; that sliver is replaced by the power-law tail f(e+ds) ds / (1-alpha).
void eval_ts(Evaluator& f, Panel& p, double rel) {
    double a = p.a, b = p.b, tail = 0.0;
    const double width = b - a;
    auto shrink = [&](double e, double alpha, int dir) -> double {
        if (alpha <= 0.0 || e == 0.0) return e;
        double ds = std::min(std::abs(e) * std::ldexp(1.0, -29), width / 8.0);
        double fe = f(e + dir * ds);
        tail += fe * ds / (1.0 - alpha);
        return e + dir * ds;
    };
    a = shrink(a, p.ea.alpha, +1);
    b = shrink(b, p.eb.alpha, -1);

    const double hw = 0.5 * (b - a);
    auto term = [&](double tau, bool& underflow) -> double {
        double u = 0.5 * kPi * std::sinh(std::abs(tau));
        double q = std::exp(-2.0 * u);
        double d = hw * 2.0 * q / (1.0 + q);
        double wt = hw * 0.5 * kPi * std::cosh(tau) * 4.0 * q / ((1.0 + q) * (1.0 + q));
        underflow = false;
        if (tau == 0.0) return wt * f(0.5 * (a + b));
        if (!(d > 0.0)) {
            underflow = true;
            return 0.0;
        }
        double x = tau > 0 ? b - d : a + d;
        bool sing = tau > 0 ? (p.eb.alpha > 0.0 && b == p.b) : (p.ea.alpha > 0.0 && a == p.a);
        if (sing && x == (tau > 0 ? b : a)) {
            underflow = true;
            return 0.0;
        }
        return wt * f(x);
    };

    constexpr double kTauMax = 6.0;
    constexpr int kMaxLevel = 6;
    double acc = 0.0, absacc = 0.0;
    bool uf = false;
    double t0 = term(0.0, uf);
    acc += t0;
    absacc += std::abs(t0);
    int kpos = 0, kneg = 0;
    for (int sgn : {+1, -1}) {
        int small = 0, k = 1;
        for (; k <= static_cast<int>(kTauMax); ++k) {
            double v = term(sgn * double(k), uf);
            if (uf) break;
            acc += v;
            absacc += std::abs(v);
            if (std::abs(v) <= 1e-18 * absacc) {
                if (++small >= 2) break;
            } else {
                small = 0;
            }
        }
        (sgn > 0 ? kpos : kneg) = std::min(k, static_cast<int>(kTauMax));
    }
    double prev = acc;  // h = 1
    double prev_diff = -1.0, est = prev, err = std::abs(prev);
    for (int level = 1; level <= kMaxLevel; ++level) {
        double h = std::ldexp(1.0, -level);
        double add = 0.0;
        int n = 1 << (level - 1);
        for (int k = 0; k < kpos * n; ++k) {
            double v = term((2 * k + 1) * h, uf);
            add += v;
            absacc += std::abs(v);
        }
        for (int k = 0; k < kneg * n; ++k) {
            double v = term(-(2 * k + 1) * h, uf);
            add += v;
            absacc += std::abs(v);
        }
        acc += add;
        double cur = acc * h;
        double diff = std::abs(cur - prev);
        est = cur;
        if (prev_diff > 0.0 && diff < prev_diff)
            err = std::min(diff, diff * diff / prev_diff);
        else
            err = diff;
        err = std::max(err, 1e-16 * absacc * h);
        prev_diff = diff;
        prev = cur;
        if (level >= 3 && err <= rel * std::abs(cur)) break;
    }
    p.value = est + tail;
    p.err = err + 1e-12 * std::abs(tail);
}

}  // namespace

IntegralEstimate integrate_interval(const Fn1& fn, double a, double b, std::vector<QuadPoint> points,
                                    double rel_tol, double abs_tol, std::size_t max_panels) {
    IntegralEstimate out;
    if (!(b > a)) return out.converged = true, out;
    Evaluator f{fn};

    std::sort(points.begin(), points.end(), [](const QuadPoint& l, const QuadPoint& r) { return l.x < r.x; });
    std::vector<double> cuts{a};
    std::vector<End> ends{End{}};
    for (const auto& q : points) {
        if (q.x < a || q.x > b) continue;
        if (q.x == a) {
            ends.front() = End{true, std::max(ends.front().alpha, q.alpha)};
            continue;
        }
        if (q.x == b) continue;
        if (q.x == cuts.back()) {
            ends.back().alpha = std::max(ends.back().alpha, q.alpha);
            continue;
        }
        cuts.push_back(q.x);
        ends.push_back(End{true, q.alpha});
    }
    cuts.push_back(b);
    ends.push_back(End{});
    for (const auto& q : points)
        if (q.x == b) ends.back() = End{true, std::max(ends.back().alpha, q.alpha)};

    const double ts_rel = std::max(rel_tol * 1e-2, 1e-15);
    std::vector<Panel> panels;
    auto make = [&](double pa, double pb, End ea, End eb, const double* whole) {
        Panel p{pa, pb, ea, eb, ea.cluster || eb.cluster};
        if (p.ts)
            eval_ts(f, p, ts_rel);
        else
            eval_gl(f, p, whole);
        return p;
    };
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        panels.push_back(make(cuts[i], cuts[i + 1], ends[i], ends[i + 1], nullptr));

    auto cmp = [&](std::size_t l, std::size_t r) { return panels[l].err < panels[r].err; };
    std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(cmp)> heap(cmp);
    double total = 0.0, total_err = 0.0, stuck = 0.0;
    for (std::size_t i = 0; i < panels.size(); ++i) {
        heap.push(i);
        total += panels[i].value;
        total_err += panels[i].err;
    }
    bool converged = false;
    while (true) {
        double target = std::max(abs_tol, rel_tol * std::abs(total));
        if (total_err <= target) {
            converged = true;
            break;
        }
        if (panels.size() >= max_panels || heap.empty()) break;
        std::size_t i = heap.top();
        heap.pop();
        Panel p = panels[i];
        double m = 0.5 * (p.a + p.b);
        if (!(m > p.a && m < p.b) || (p.b - p.a) < 1e-15 * std::max(1.0, std::abs(m))) {
            stuck += p.err;
            total_err -= p.err;
            panels[i].err = 0.0;
            continue;
        }
        Panel l, r;
        if (p.ts) {
            l = make(p.a, m, p.ea, End{}, nullptr);
            r = make(m, p.b, End{}, p.eb, nullptr);
        } else {
            l = make(p.a, m, End{}, End{}, &p.left);
            r = make(m, p.b, End{}, End{}, &p.right);
        }
        total += l.value + r.value - p.value;
        total_err += l.err + r.err - p.err;
        panels[i] = l;
        heap.push(i);
        panels.push_back(r);
        heap.push(panels.size() - 1);
    }

    std::sort(panels.begin(), panels.end(), [](const Panel& l, const Panel& r) { return l.a < r.a; });
    std::vector<double> vals, errs;
    vals.reserve(panels.size());
    errs.reserve(panels.size());
    for (const auto& p : panels) {
        vals.push_back(p.value);
        errs.push_back(p.err);
    }
    out.value = pairwise_sum(vals.data(), vals.size());
    out.abs_error = pairwise_sum(errs.data(), errs.size()) + stuck;
    out.evaluations = f.count;
    out.converged = converged && stuck <= std::max(abs_tol, rel_tol * std::abs(out.value));
    return out;
}

namespace {

void accumulate(IntegralEstimate& into, const IntegralEstimate& part) {
    into.value += part.value;
    into.abs_error += part.abs_error;
    into.evaluations += part.evaluations;
    into.converged = into.converged && part.converged;
}

}  // namespace

IntegralEstimate integrate_circle(const Fn1& f, const std::vector<SingularityTag>& tags, double tol,
                                  double exclusion, double abs_tol) {
    std::vector<QuadPoint> pts;
    std::vector<std::pair<double, double>> gaps;
    for (const auto& tg : tags) {
        double loc = wrap_angle(tg.location);
        if (exclusion > 0.0 && tg.exponent > 0.0) {
            double lo = loc - exclusion, hi = loc + exclusion;
            gaps.emplace_back(lo, hi);
            if (lo < -kPi) gaps.emplace_back(lo + kTwoPi, kPi);
            if (hi > kPi) gaps.emplace_back(-kPi, hi - kTwoPi);
            continue;
        }
        if (tg.exponent >= 1.0)
            throw NonIntegrable("boundary tag at t=" + std::to_string(loc) + " has exponent " +
                                std::to_string(tg.exponent) + " >= 1");
        pts.push_back({loc, std::max(0.0, tg.exponent)});
        if (loc == kPi) pts.push_back({-kPi, std::max(0.0, tg.exponent)});
    }
    std::vector<std::pair<double, double>> segs;
    if (gaps.empty()) {
        segs.emplace_back(-kPi, kPi);
    } else {
        std::sort(gaps.begin(), gaps.end());
        double cur = -kPi;
        for (auto [lo, hi] : gaps) {
            lo = std::max(lo, -kPi);
            hi = std::min(hi, kPi);
            if (lo > cur) segs.emplace_back(cur, lo);
            cur = std::max(cur, hi);
        }
        if (cur < kPi) segs.emplace_back(cur, kPi);
    }
    IntegralEstimate out;
    out.converged = true;
    for (auto [lo, hi] : segs) {
        std::vector<QuadPoint> sp;
        for (const auto& q : pts)
            if (q.x >= lo && q.x <= hi) sp.push_back(q);
        if (!gaps.empty()) {
            if (lo > -kPi) sp.push_back({lo, 0.0});
            if (hi < kPi) sp.push_back({hi, 0.0});
        }
        accumulate(out, integrate_interval(f, lo, hi, sp, tol, abs_tol / double(segs.size())));
    }
    return out;
}

IntegralEstimate integrate_disc(const Fn2& f, const std::vector<SingularityTag>& tags, double tol,
                                const DiscOptions& opts) {
    double rot = 0.0;
    bool rotated = false;
    std::vector<SingularityTag> tg;
    for (const auto& t : tags) tg.push_back({wrap_angle(t.location), t.exponent});
    if (opts.exclusion > 0.0) {
        for (const auto& t : tg)
            if (t.exponent > 0.0) {
                rot = t.location;
                break;
            }
        rotated = rot != 0.0;
        for (auto& t : tg) {
            t.location = wrap_angle(t.location - rot);
            if (t.exponent > 0.0 && std::abs(t.location) > 1e-12 && std::abs(std::abs(t.location) - kPi) > 1e-12)
                throw std::invalid_argument("disc exclusion supports tags at one point and its antipode only");
        }
    }
    const double cr = std::cos(rot), sr = std::sin(rot);

    double xa = -1.0, xb = 1.0;
    std::vector<QuadPoint> xpts;
    for (const auto& t : tg) {
        double reduced = t.exponent - 0.5;
        bool at_right = std::abs(t.location) < 1e-15;
        bool at_left = std::abs(std::abs(t.location) - kPi) < 1e-15;
        bool excluded = opts.exclusion > 0.0 && t.exponent > 0.0;
        if (excluded) {
            if (at_right) xb = std::min(xb, 1.0 - opts.exclusion);
            if (at_left) xa = std::max(xa, -1.0 + opts.exclusion);
            continue;
        }
        if (reduced >= 1.0)
            throw NonIntegrable("disc density tag at t=" + std::to_string(t.location) + " has reduced exponent " +
                                std::to_string(reduced) + " >= 1");
        if (at_right)
            xpts.push_back({1.0, std::max(0.0, reduced)});
        else if (at_left)
            xpts.push_back({-1.0, std::max(0.0, reduced)});
        else
            xpts.push_back({std::cos(t.location), std::max(0.0, t.exponent - 1.0)});
    }
    // chord length has square-root endpoints at x = -1, 1
    xpts.push_back({xa, 0.0});
    xpts.push_back({xb, 0.0});
    for (double x : opts.interior_x) xpts.push_back({x, 0.0});
    if (!(xb > xa)) return IntegralEstimate{0.0, 0.0, 0, true};

    IntegralEstimate out;
    out.converged = true;
    std::size_t inner_evals = 0;
    bool inner_ok = true;
    const double inner_rel = tol * 0.1;
    auto inner = [&](double x) -> double {
        double w2 = (1.0 - x) * (1.0 + x);
        if (!(w2 > 0.0)) return 0.0;
        double w = std::sqrt(w2);
        std::vector<QuadPoint> ypts;
        for (const auto& t : tg) {
            double cx = std::cos(t.location), sy = std::sin(t.location);
            if (std::abs(sy) < w) ypts.push_back({sy, 0.0});
            if (std::hypot(x - cx, w - sy) < 0.25) ypts.push_back({w, 0.0});
            if (std::hypot(x - cx, -w - sy) < 0.25) ypts.push_back({-w, 0.0});
        }
        for (double y : opts.interior_y)
            if (std::abs(y) < w) ypts.push_back({y, 0.0});
        Fn1 g;
        if (rotated)
            g = [&](double y) { return f(x * cr - y * sr, x * sr + y * cr); };
        else
            g = [&](double y) { return f(x, y); };
        IntegralEstimate e = integrate_interval(g, -w, w, ypts, inner_rel, 1e-300, 2000);
        inner_evals += e.evaluations;
        inner_ok = inner_ok && e.converged;
        return e.value;
    };
    out = integrate_interval(inner, xa, xb, xpts, tol, opts.abs_tol, 4000);
    out.evaluations = inner_evals;
    out.converged = out.converged && inner_ok;
    return out;
}

double fit_slope(std::span<const double> xs, std::span<const double> ys, double* rms) {
    const std::size_t n = xs.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= double(n);
    my /= double(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    double s = sxy / sxx;
    if (rms) {
        double r = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double e = ys[i] - (my + s * (xs[i] - mx));
            r += e * e;
        }
        *rms = std::sqrt(r / double(n));
    }
    return s;
}

DivergenceReport probe_divergence(const std::function<double(double)>& family, std::span<const double> schedule,
                                  const QuadConfig& cfg) {
    DivergenceReport rep;
    rep.exclusion_radii.assign(schedule.begin(), schedule.end());
    const std::size_t n = schedule.size();
    if (n < 5) {
        rep.note = "schedule needs at least 5 radii";
        return rep;
    }
    for (std::size_t i = 1; i < n; ++i)
        if (!(schedule[i] < schedule[i - 1])) {
            rep.note = "schedule must be strictly decreasing";
            return rep;
        }
    for (double e : schedule) {
        double v = family(e);
        rep.partial_values.push_back(v);
        if (!std::isfinite(v)) {
            rep.note = "non-finite partial value";
            return rep;
        }
    }
    double scale = 0.0;
    for (double v : rep.partial_values) scale = std::max(scale, std::abs(v));
    for (std::size_t i = 0; i + 1 < n; ++i) rep.increments.push_back(rep.partial_values[i + 1] - rep.partial_values[i]);

    const std::size_t m = std::min<std::size_t>(static_cast<std::size_t>(cfg.fit_points), rep.increments.size());
    const std::size_t first = rep.increments.size() - m;
    const double cauchy = std::max(10.0 * cfg.tol_1d, 1e-13) * std::max(scale, 1e-300);
    double maxinc = 0.0;
    for (std::size_t i = first; i < rep.increments.size(); ++i) maxinc = std::max(maxinc, std::abs(rep.increments[i]));
    if (maxinc <= cauchy) {
        rep.verdict = Convergence::Converges;
        rep.extrapolated = rep.partial_values.back();
        rep.note = "Cauchy tail below tolerance";
        return rep;
    }
    int sign = 0;
    bool consistent = true;
    std::vector<double> lx, ly;
    for (std::size_t i = first; i < rep.increments.size(); ++i) {
        double d = rep.increments[i];
        int s = d > 0 ? 1 : (d < 0 ? -1 : 0);
        if (s == 0 || (sign != 0 && s != sign)) consistent = false;
        sign = s;
        if (d != 0.0) {
            lx.push_back(std::log(std::sqrt(schedule[i] * schedule[i + 1])));
            ly.push_back(std::log(std::abs(d)));
        }
    }
    if (!consistent || lx.size() < 3) {
        rep.note = "increments change sign in the fit window";
        return rep;
    }
    double rms = 0.0;
    double s = fit_slope(lx, ly, &rms);
    rep.fitted_growth_exponent = s;
    if (rms > 0.25) {
        rep.note = "increments do not follow a power law (rms " + std::to_string(rms) + ")";
        return rep;
    }
    if (s >= cfg.convergence_slope) {
        rep.verdict = Convergence::Converges;
        double ratio = std::pow(schedule[n - 1] / schedule[n - 2], s);
        rep.extrapolated = rep.partial_values.back() + rep.increments.back() * ratio / (1.0 - ratio);
        rep.note = "increments decay geometrically";
        return rep;
    }
    if (sign < 0) {
        rep.note = "partial values decrease without settling";
        return rep;
    }
    rep.verdict = Convergence::Diverges;
    rep.note = s <= cfg.divergence_slope_threshold ? "power growth of partial values"
                                                    : "monotone non-Cauchy increments (logarithmic growth)";
    return rep;
}

}  // namespace psh
