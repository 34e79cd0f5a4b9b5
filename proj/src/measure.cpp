#include "psh/measure.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <thread>

#include <boost/math/tools/roots.hpp>

#include "psh/errors.hpp"

namespace psh {

unsigned worker_threads(unsigned requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("PSH_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body) {
    threads = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), n));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr err;
    std::mutex err_mu;
    for (unsigned w = 0; w < threads; ++w)
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < n; i += threads) body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lk(err_mu);
                if (!err) err = std::current_exception();
            }
        });
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

namespace {

double circ_dist(double a, double b) { return std::abs(wrap_angle(a - b)); }

// Fritsch-Butland slopes for monotone piecewise-cubic Hermite interpolation.
std::vector<double> pchip_slopes(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t m = x.size();
    std::vector<double> h(m - 1), del(m - 1), d(m, 0.0);
    for (std::size_t k = 0; k + 1 < m; ++k) {
        h[k] = x[k + 1] - x[k];
        del[k] = (y[k + 1] - y[k]) / h[k];
    }
    d[0] = del[0];
    d[m - 1] = del[m - 2];
    for (std::size_t k = 1; k + 1 < m; ++k) {
        if (del[k - 1] * del[k] <= 0.0) continue;
        double w1 = 2.0 * h[k] + h[k - 1], w2 = h[k] + 2.0 * h[k - 1];
        d[k] = (w1 + w2) / (w1 / del[k - 1] + w2 / del[k]);
    }
    return d;
}

double hermite(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& d, double t) {
    auto it = std::upper_bound(x.begin(), x.end(), t);
    std::size_t k = static_cast<std::size_t>(std::max<std::ptrdiff_t>(1, it - x.begin())) - 1;
    k = std::min(k, x.size() - 2);
    double h = x[k + 1] - x[k];
    double s = (t - x[k]) / h;
    double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
    double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
    return h00 * y[k] + h10 * h * d[k] + h01 * y[k + 1] + h11 * h * d[k + 1];
}

// Integral of lambda(psi(zeta)) |psi'(zeta)|^2 g(zeta) over the disc, in disc coordinates.
IntegralEstimate density_integral(const Exhaustion& u, const std::function<double(cplx)>& g,
                                  std::vector<SingularityTag> extra, double tol, double exclusion = 0.0) {
    const ConformalFrame& fr = u.frame;
    std::vector<SingularityTag> tags = u.density_boundary_tags;
    tags.insert(tags.end(), extra.begin(), extra.end());
    DiscOptions opt;
    opt.exclusion = exclusion;
    auto f = [&](double x, double y) {
        cplx zeta(x, y);
        double jac = fr.is_disc() ? 1.0 : std::norm(fr.psi_prime(zeta));
        cplx z = fr.is_disc() ? zeta : fr.psi(zeta);
        return u.laplacian_density(z) * jac * g(zeta);
    };
    return integrate_disc(f, tags, tol, opt);
}

}  // namespace

double ma_mass(const Exhaustion& u, const QuadConfig& cfg) {
    double atoms = 0.0;
    for (const auto& a : u.atoms) atoms += a.mass;
    if (!u.has_density) return atoms;
    auto one = [](cplx) { return 1.0; };
    bool risky = false;
    for (const auto& t : u.density_boundary_tags) risky = risky || t.exponent - 0.5 >= 1.0;
    if (!risky) return atoms + density_integral(u, one, {}, cfg.tol_2d).value / kTwoPi;

    auto family = [&](double eps) { return density_integral(u, one, {}, cfg.tol_2d, eps).value / kTwoPi; };
    DivergenceReport rep = probe_divergence(family, cfg.divergence_schedule, cfg);
    if (rep.verdict == Convergence::Converges) return atoms + rep.extrapolated;
    throw NonIntegrable("Monge-Ampere mass of " + u.name + " diverges: " + std::string(to_string(rep.verdict)) +
                        ", increment slope " + std::to_string(rep.fitted_growth_exponent) + " (" + rep.note + ")");
}

IntegralEstimate region_integral(const Exhaustion& u, double r, const std::function<double(cplx)>& F, double tol,
                                double abs_tol) {
    if (r > 0.0) throw DomainError("pseudoball level must be negative");
    const ConformalFrame& fr = u.frame;
    const cplx c = fr.inverse(u.center);
    const bool whole = r == 0.0;
    const bool pole = !u.atoms.empty() && std::abs(u.atoms.front().location - u.center) < 1e-15;
    const double inner_tol = tol * 0.1;
    const double inner_abs = std::max(0.1 * abs_tol / kTwoPi, 1e-300);
    bool ok = true;
    std::size_t evals = 0;

    auto at = [&](double rho, cplx e) { return c + rho * e; };
    auto g = [&](cplx zeta) {
        cplx z = fr.is_disc() ? zeta : fr.psi(zeta);
        return u.value(z) - r;
    };

    auto theta_fn = [&](double th) -> double {
        cplx e = std::polar(1.0, th);
        double b = (std::conj(c) * e).real();
        double R = -b + std::sqrt(b * b + 1.0 - std::norm(c));
        std::vector<std::pair<double, double>> segs;
        if (whole) {
            segs.emplace_back(0.0, R);
        } else {
            std::vector<double> rho;
            for (int j = 1; j < 48; ++j) rho.push_back(R * j / 48.0);
            for (int k = 6; k <= 30; ++k) rho.push_back(R * (1.0 - std::ldexp(1.0, -k)));
            std::sort(rho.begin(), rho.end());
            double prev_r = 0.0;
            double prev_g = pole ? -1.0 : g(c);
            bool inside = prev_g < 0.0;
            double start = 0.0;
            for (double rr : rho) {
                double gv = g(at(rr, e));
                if ((gv < 0.0) != (prev_g < 0.0)) {
                    std::uintmax_t it = 60;
                    auto fn = [&](double s) { return g(at(s, e)); };
                    auto tolf = [](double a, double bb) { return std::abs(bb - a) <= 1e-15 * std::max(1.0, a); };
                    auto root = boost::math::tools::toms748_solve(fn, prev_r, rr, prev_g, gv, tolf, it);
                    double x = 0.5 * (root.first + root.second);
                    if (inside)
                        segs.emplace_back(start, x);
                    else
                        start = x;
                    inside = !inside;
                }
                prev_r = rr;
                prev_g = gv;
            }
            if (inside) segs.emplace_back(start, R);
        }
        double sum = 0.0;
        for (auto [lo, hi] : segs) {
            std::vector<QuadPoint> pts;
            if (lo == 0.0 && pole) pts.push_back({0.0, 0.0});
            if (whole) pts.push_back({hi, 0.0});
            auto radial = [&](double rho) {
                cplx zeta = at(rho, e);
                if (fr.is_disc()) return F(zeta) * rho;
                return F(fr.psi(zeta)) * std::norm(fr.psi_prime(zeta)) * rho;
            };
            IntegralEstimate ie = integrate_interval(radial, lo, hi, pts, inner_tol, inner_abs, 2000);
            ok = ok && ie.converged;
            evals += ie.evaluations;
            sum += ie.value;
        }
        return sum;
    };
    IntegralEstimate out = integrate_interval(theta_fn, 0.0, kTwoPi, {}, tol, std::max(abs_tol, 1e-300), 2000);
    out.converged = out.converged && ok;
    out.evaluations += evals;
    return out;
}

double lelong_jensen_lhs(const Exhaustion& u, double r, const TestFunction& phi, const QuadConfig& cfg) {
    if (!(r < 0.0)) throw DomainError("Lelong-Jensen level must be negative");
    double total = 0.0;
    for (const auto& a : u.atoms)
        if (u.value(a.location) < r) total += a.mass * phi.value(a.location);
    for (const auto& a : phi.laplacian_atoms)
        if (u.value(a.location) < r) total += a.mass * (r - u.value(a.location));
    if (!u.has_density && phi.harmonic) return total;
    auto F = [&](cplx z) {
        double s = 0.0;
        if (u.has_density) s += phi.value(z) * u.laplacian_density(z);
        if (!phi.harmonic) s += (r - u.value(z)) * phi.laplacian(z);
        return s / kTwoPi;
    };
    total += region_integral(u, r, F, cfg.tol_2d, 1e-3 * cfg.tol_2d * std::abs(total)).value;
    return total;
}

double lelong_jensen_limit(const Exhaustion& u, const TestFunction& phi, const QuadConfig& cfg) {
    double total = 0.0;
    for (const auto& a : u.atoms) total += a.mass * phi.value(a.location);
    for (const auto& a : phi.laplacian_atoms) total -= a.mass * u.value(a.location);
    const ConformalFrame& fr = u.frame;
    if (u.has_density) {
        auto g = [&](cplx zeta) { return phi.value(fr.is_disc() ? zeta : fr.psi(zeta)); };
        total += density_integral(u, g, {}, cfg.tol_2d).value / kTwoPi;
    }
    if (!phi.harmonic) {
        auto F = [&](cplx z) { return -u.value(z) * phi.laplacian(z) / kTwoPi; };
        total += region_integral(u, 0.0, F, cfg.tol_2d, 1e-3 * cfg.tol_2d * std::abs(total)).value;
    }
    return total;
}

BoundaryDensity::BoundaryDensity(ExhaustionPtr u, const DensityOptions& opts) : u_(std::move(u)), opts_(opts) {
    total_mass_ = ma_mass(*u_, opts_.quad);
    const unsigned threads = worker_threads(opts_.threads);

    if (u_->has_density) {
        // near each tag: direct samples log-spaced on [model_radius, 2 direct_radius], both sides
        for (const auto& tg : u_->density_boundary_tags) {
            if (tg.exponent <= 0.0) continue;
            const double lo = std::log(opts_.model_radius), hi = std::log(2.0 * opts_.direct_radius);
            const int nn = std::max(8, static_cast<int>(std::ceil(16.0 * (hi - lo) / std::log(10.0))));
            std::vector<double> dist;
            for (int k = 0; k <= nn; ++k) dist.push_back(std::exp(lo + (hi - lo) * k / nn));
            std::vector<double> far;
            for (int k = 0; k <= 4; ++k) far.push_back(std::pow(10.0, -3.0 + 0.5 * k));
            std::vector<double> ts;
            for (double d : dist) ts.insert(ts.end(), {tg.location - d, tg.location + d});
            for (double d : far) ts.insert(ts.end(), {tg.location - d, tg.location + d});
            std::vector<double> vals(ts.size());
            parallel_for(ts.size(), threads, [&](std::size_t i) { vals[i] = beta_direct(ts[i]); });

            TagFit fit;
            fit.location = wrap_angle(tg.location);
            std::vector<double> lx, ly, fx, fy;
            for (std::size_t k = 0; k < dist.size(); ++k) {
                double lm = std::log(vals[2 * k]), lp = std::log(vals[2 * k + 1]);
                fit.log_dist.push_back(std::log(dist[k]));
                fit.log_minus.push_back(lm);
                fit.log_plus.push_back(lp);
                if (dist[k] >= 1e-5 * (1.0 - 1e-12) && dist[k] <= 1e-3 * (1.0 + 1e-12)) {
                    lx.push_back(std::log(dist[k]));
                    ly.push_back(0.5 * (lm + lp));
                }
            }
            std::size_t base = 2 * dist.size();
            for (std::size_t k = 0; k < far.size(); ++k) {
                fx.push_back(std::log(far[k]));
                fy.push_back(0.5 * (std::log(vals[base + 2 * k]) + std::log(vals[base + 2 * k + 1])));
            }
            fit.exponent = lx.size() >= 2 ? -fit_slope(lx, ly) : -fit_slope(fit.log_dist, fit.log_minus);
            fit.slope_far = fit_slope(fx, fy);
            fit.anchor_minus = vals[0];
            fit.anchor_plus = vals[1];
            fit.slope_minus = pchip_slopes(fit.log_dist, fit.log_minus);
            fit.slope_plus = pchip_slopes(fit.log_dist, fit.log_plus);
            fit.local_minus = -fit.slope_minus.front();
            fit.local_plus = -fit.slope_plus.front();
            fits_.push_back(fit);
            tags_.push_back({fit.location, fit.exponent});
        }

        // graded grid: geometric from each tag toward the midpoint of each gap
        std::vector<double> locs;
        for (const auto& f : fits_) locs.push_back(f.location);
        std::sort(locs.begin(), locs.end());
        if (locs.empty()) {
            for (std::size_t j = 0; j < opts_.grid; ++j) gt_.push_back(-kPi + kTwoPi * double(j) / double(opts_.grid));
        } else {
            const std::size_t per_half = std::max<std::size_t>(8, opts_.grid / (2 * locs.size()));
            const double tmin = 0.5 * opts_.direct_radius;
            for (std::size_t k = 0; k < locs.size(); ++k) {
                double a = locs[k];
                double b = k + 1 < locs.size() ? locs[k + 1] : locs[0] + kTwoPi;
                double half = 0.5 * (b - a);
                if (half <= tmin) continue;
                for (std::size_t j = 0; j < per_half; ++j) {
                    double d = tmin * std::pow(half / tmin, double(j) / double(per_half - 1));
                    gt_.push_back(wrap_angle(a + d));
                    if (j + 1 < per_half) gt_.push_back(wrap_angle(b - d));
                }
            }
            for (double& t : gt_)
                if (t == kPi) t = -kPi;
            std::sort(gt_.begin(), gt_.end());
            gt_.erase(std::unique(gt_.begin(), gt_.end(), [](double l, double r) { return std::abs(l - r) < 1e-14; }),
                      gt_.end());
        }
        gb_.assign(gt_.size(), 0.0);
        parallel_for(gt_.size(), threads, [&](std::size_t i) { gb_[i] = compute(gt_[i]); });

        // periodic extension and Fritsch-Butland slopes
        const std::size_t n = gt_.size(), pad = 2;
        for (std::size_t k = n - pad; k < n; ++k) {
            xt_.push_back(gt_[k] - kTwoPi);
            xb_.push_back(gb_[k]);
        }
        for (std::size_t k = 0; k < n; ++k) {
            xt_.push_back(gt_[k]);
            xb_.push_back(gb_[k]);
        }
        for (std::size_t k = 0; k < pad; ++k) {
            xt_.push_back(gt_[k] + kTwoPi);
            xb_.push_back(gb_[k]);
        }
        xd_ = pchip_slopes(xt_, xb_);
    }

    IntegralEstimate bm = pair_with_beta(*this, [](double) { return 1.0; }, {}, opts_.quad.tol_1d);
    boundary_mass_ = bm.value;
}

double BoundaryDensity::tag_distance(double t) const {
    double d = kPi;
    for (const auto& f : fits_) d = std::min(d, circ_dist(t, f.location));
    return d;
}

double BoundaryDensity::atoms_part(double t) const {
    double s = 0.0;
    for (const auto& a : u_->atoms) s += a.mass * poisson_kernel(frame(), a.location, t);
    return s;
}

double BoundaryDensity::compute(double t) const {
    double s = atoms_part(t);
    if (!u_->has_density) return s;
    for (const auto& tg : u_->density_boundary_tags)
        if (tg.exponent > 0.0 && circ_dist(t, tg.location) < 1e-15) return std::numeric_limits<double>::infinity();
    // Polar coordinates at e = e^{it}: zeta = e (1 - rho e^{i phi}), rho < 2 cos phi.
    // There P(zeta, e) dA = (2 cos phi - rho) drho dphi, so the kernel peak disappears.
    const ConformalFrame& fr = frame();
    const cplx e = std::polar(1.0, t);
    std::vector<double> dirs;
    for (const auto& tg : u_->density_boundary_tags) dirs.push_back(std::arg(1.0 - std::polar(1.0, tg.location - t)));
    std::vector<QuadPoint> outer_pts{{-0.5 * kPi, 0.0}, {0.5 * kPi, 0.0}};
    for (double d : dirs) outer_pts.push_back({d, 0.0});
    // a coarse pass fixes the absolute scale so roundoff in 1 - |zeta| near a tag is not chased
    double inner_rel = 1e-4, inner_abs = 1e-300;
    auto inner = [&](double phi) {
        const double len = 2.0 * std::cos(phi);
        if (len <= 0.0) return 0.0;
        const cplx ep = std::polar(1.0, phi);
        std::vector<QuadPoint> pts;
        for (double d : dirs)
            if (std::abs(phi - d) < 0.3) pts.push_back({len, 0.0});
        auto f = [&](double rho) {
            double w = len - rho;
            if (w <= 0.0) return 0.0;
            cplx zeta = e * (1.0 - rho * ep);
            if (std::norm(zeta) >= 1.0) return 0.0;
            double jac = fr.is_disc() ? 1.0 : std::norm(fr.psi_prime(zeta));
            cplx z = fr.is_disc() ? zeta : fr.psi(zeta);
            return w * u_->laplacian_density(z) * jac;
        };
        return integrate_interval(f, 0.0, len, pts, inner_rel, inner_abs, 300).value;
    };
    const double tol = opts_.quad.tol_2d;
    double coarse = std::abs(integrate_interval(inner, -0.5 * kPi, 0.5 * kPi, outer_pts, 1e-3, 0.0, 4000).value);
    inner_rel = 0.1 * tol;
    inner_abs = 0.1 * tol * coarse / kPi;
    IntegralEstimate ie = integrate_interval(inner, -0.5 * kPi, 0.5 * kPi, outer_pts, tol, 0.5 * tol * coarse, 4000);
    double w = fr.is_disc() ? 1.0 : std::abs(fr.psi_prime(e));
    return s + ie.value / (kTwoPi * kTwoPi * w);
}

double BoundaryDensity::beta_direct(double t) const {
    t = wrap_angle(t);
    if (!u_->has_density) return atoms_part(t);
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = memo_.find(t);
        if (it != memo_.end()) return it->second;
    }
    double v = compute(t);
    std::lock_guard<std::mutex> lk(mu_);
    memo_.emplace(t, v);
    return v;
}

double BoundaryDensity::interpolate(double t) const { return hermite(xt_, xb_, xd_, t); }

double BoundaryDensity::beta(double t) const {
    t = wrap_angle(t);
    if (!u_->has_density) return atoms_part(t);
    for (const auto& f : fits_) {
        double d = wrap_angle(t - f.location);
        double ad = std::abs(d);
        if (ad == 0.0) return std::numeric_limits<double>::infinity();
        if (ad < opts_.model_radius) {
            // power-law tail fitted near the tag
            double anchor = d < 0 ? f.anchor_minus : f.anchor_plus;
            return atoms_part(t) + (anchor - atoms_part(f.location + (d < 0 ? -1 : 1) * opts_.model_radius)) *
                                       std::pow(ad / opts_.model_radius, -(d < 0 ? f.local_minus : f.local_plus));
        }
        if (ad <= opts_.direct_radius)
            return std::exp(d < 0 ? hermite(f.log_dist, f.log_minus, f.slope_minus, std::log(ad))
                                  : hermite(f.log_dist, f.log_plus, f.slope_plus, std::log(ad)));
    }
    if (xt_.empty()) return beta_direct(t);
    return interpolate(t);
}

namespace {

std::vector<SingularityTag> merge_tags(const std::vector<SingularityTag>& a, const std::vector<SingularityTag>& b) {
    std::vector<SingularityTag> out;
    for (const auto* v : {&a, &b})
        for (const auto& t : *v) {
            double loc = wrap_angle(t.location);
            bool merged = false;
            for (auto& o : out)
                if (circ_dist(o.location, loc) < 1e-12) {
                    o.exponent += t.exponent;
                    merged = true;
                }
            if (!merged) out.push_back({loc, t.exponent});
        }
    return out;
}

}  // namespace

IntegralEstimate pair_with_beta(const BoundaryDensity& bd, const std::function<double(double)>& g,
                                const std::vector<SingularityTag>& g_tags, double tol, double exclusion) {
    std::vector<SingularityTag> tags = merge_tags(bd.tags(), g_tags);
    const bool disc = bd.frame().is_disc();
    auto f = [&](double t) {
        double w = disc ? 1.0 : bd.frame().boundary(t).weight;
        return g(t) * bd.beta(t) * w;
    };
    return integrate_circle(f, tags, tol, exclusion);
}

double weak_star_gap(const BoundaryDensity& bd, const std::function<double(double)>& phi_boundary, double r,
                     const QuadConfig& cfg) {
    const ConformalFrame& fr = bd.frame();
    // harmonic extension through Fourier coefficients of the boundary data
    constexpr int N = 1024;
    std::vector<cplx> coef(N / 2);
    for (int n = 0; n < N / 2; ++n) {
        cplx s = 0.0;
        for (int j = 0; j < N; ++j) {
            double t = kTwoPi * j / N;
            s += phi_boundary(t) * std::polar(1.0, -n * t);
        }
        coef[n] = s / double(N);
    }
    bool constant = true;
    for (int n = 1; n < N / 2; ++n) constant = constant && std::abs(coef[n]) < 1e-14 * (1.0 + std::abs(coef[0]));
    TestFunction H;
    H.harmonic = true;
    H.laplacian = [](cplx) { return 0.0; };
    H.value = [&, constant](cplx z) {
        if (constant) return coef[0].real();
        cplx zeta = fr.inverse(z);
        cplx s = 0.0;
        for (int n = N / 2 - 1; n >= 1; --n) s = (s + coef[n]) * zeta;
        return coef[0].real() + 2.0 * s.real();
    };
    double lhs = lelong_jensen_lhs(bd.exhaustion(), r, H, cfg);
    double rhs = pair_with_beta(bd, phi_boundary, {}, cfg.tol_1d).value;
    return std::abs(lhs - rhs);
}

BoundaryDensityPtr boundary_density(ExhaustionPtr u, const DensityOptions& opts) {
    return std::make_shared<const BoundaryDensity>(std::move(u), opts);
}

}  // namespace psh
