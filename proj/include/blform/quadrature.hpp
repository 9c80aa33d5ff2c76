#pragma once

#include "blform/datum.hpp"
#include "blform/function_spec.hpp"
#include "blform/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace blform {

/// Truncation and grid parameters. The kernel variable t runs over
/// [t_eps, t_max] in log-spaced Gauss panels with the +-t pairing applied
/// analytically; space is a uniform midpoint tensor grid on
/// [-xy_box, xy_box]^(dim). The *_uniform_* fields drive the absolutely
/// convergent (non principal value) t integrals.
struct QuadConfig {
    double t_eps = 1e-3;
    double t_max = 1e3;
    int t_panels = 64;
    double xy_box = 12.0;
    int xy_points = 256;
    bool refine = true;
    double tolerance = 1e-4;
    int t_uniform_points = 1536;
    double t_uniform_box = 20.0;

    void check() const {
        if (!(t_eps > 0) || !(t_eps < t_max)) throw std::invalid_argument("config: 0 < t_eps < t_max required");
        if (t_panels < 4) throw std::invalid_argument("config: at least 4 panels");
        if (xy_points < 16) throw std::invalid_argument("config: at least 16 grid points");
        if (!(xy_box > 0) || !(t_uniform_box > 0) || t_uniform_points < 16)
            throw std::invalid_argument("config: bad grid parameters");
    }

    QuadConfig refined() const {
        QuadConfig c = *this;
        c.t_panels *= 2;
        c.xy_points *= 2;
        c.t_uniform_points *= 2;
        c.refine = false;
        return c;
    }
};

struct QuadResult {
    Complex value{0.0, 0.0};
    double error_estimate = 0.0;
    bool converged = true;
};

/// Piecewise-constant Carleson phase: freq on [lo, hi), 0 where no piece applies.
struct PhasePiece {
    double lo = 0.0, hi = 0.0, freq = 0.0;
};

struct PiecewisePhase {
    std::vector<PhasePiece> pieces;
    double operator()(double x) const {
        for (const auto& p : pieces)
            if (x >= p.lo && x < p.hi) return p.freq;
        return 0.0;
    }
};

namespace grid {

struct Node {
    double t;
    double w;
};

/// Log-spaced panels over [eps, tmax], 8-node Gauss per panel.
inline std::vector<Node> pv_nodes(const QuadConfig& cfg) {
    static const double gx[4] = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                                 0.9602898564975363};
    static const double gw[4] = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                                 0.1012285362903763};
    std::vector<Node> nodes;
    nodes.reserve(static_cast<size_t>(cfg.t_panels) * 8);
    double ratio = std::pow(cfg.t_max / cfg.t_eps, 1.0 / cfg.t_panels);
    double left = cfg.t_eps;
    for (int p = 0; p < cfg.t_panels; ++p) {
        double right = left * ratio;
        double mid = 0.5 * (left + right);
        double half = 0.5 * (right - left);
        for (int g = 0; g < 4; ++g) {
            nodes.push_back({mid - half * gx[g], gw[g] * half});
            nodes.push_back({mid + half * gx[g], gw[g] * half});
        }
        left = right;
    }
    return nodes;
}

/// Midpoints of a uniform partition of [-box, box].
inline std::vector<double> midpoints(double box, int count) {
    std::vector<double> xs(count);
    double h = 2.0 * box / count;
    for (int i = 0; i < count; ++i) xs[i] = -box + (i + 0.5) * h;
    return xs;
}

struct Cell {
    int i, j;
    Complex weight; // static factor times the area element
};

/// Static-factor grid: cells whose magnitude cannot matter are dropped
/// (relative cutoff 1e-30, far below every tolerance in use).
inline std::vector<Cell> static_cells(const std::vector<double>& xs,
                                      const std::function<Complex(double, double)>& f) {
    std::vector<Cell> cells;
    double peak = 0.0;
    std::vector<Complex> values(xs.size() * xs.size());
    for (size_t i = 0; i < xs.size(); ++i)
        for (size_t j = 0; j < xs.size(); ++j) {
            Complex v = f(xs[i], xs[j]);
            values[i * xs.size() + j] = v;
            peak = std::max(peak, std::abs(v));
        }
    double cutoff = peak * 1e-30;
    double h = xs.size() > 1 ? xs[1] - xs[0] : 0.0;
    double area = h * h;
    for (size_t i = 0; i < xs.size(); ++i)
        for (size_t j = 0; j < xs.size(); ++j) {
            Complex v = values[i * xs.size() + j];
            if (std::abs(v) > cutoff)
                cells.push_back({static_cast<int>(i), static_cast<int>(j), v * area});
        }
    return cells;
}

} // namespace grid

namespace detail {

inline QuadResult with_refinement(const QuadConfig& cfg,
                                  const std::function<Complex(const QuadConfig&)>& run) {
    cfg.check();
    if (!cfg.refine) return QuadResult{run(cfg), 0.0, true};
    Complex coarse = run(cfg);
    Complex fine = run(cfg.refined());
    double err = std::abs(coarse - fine);
    bool ok = err <= cfg.tolerance * std::max(1.0, std::abs(fine));
    return QuadResult{fine, err, ok};
}

} // namespace detail

/// Truncated pairing integral over [t_eps, t_max] of (f(x+t) - f(x-t)) / t.
inline QuadResult hilbert_pairing(const SpecPtr& f, double x, const QuadConfig& cfg) {
    if (f->arity != 1) throw ArityMismatch("hilbert_pairing: f must be one-dimensional");
    return detail::with_refinement(cfg, [&](const QuadConfig& c) {
        auto nodes = grid::pv_nodes(c);
        Complex acc(0.0, 0.0);
        for (const auto& node : nodes)
            acc += (node.w / node.t) *
                   (eval_spec(f, x + node.t) - eval_spec(f, x - node.t));
        return acc;
    });
}

/// Grid L^p norm (sup over the grid for p = infinity).
inline double lp_norm(const SpecPtr& s, double p, int dim, const QuadConfig& cfg) {
    cfg.check();
    if (!(p >= 1)) throw std::invalid_argument("lp_norm: p must be at least 1");
    auto xs = grid::midpoints(cfg.xy_box, cfg.xy_points);
    double h = xs[1] - xs[0];
    if (dim == 1) {
        double acc = 0.0, peak = 0.0;
        for (double x : xs) {
            double v = std::abs(eval_spec(s, x));
            peak = std::max(peak, v);
            if (std::isfinite(p)) acc += std::pow(v, p) * h;
        }
        return std::isfinite(p) ? std::pow(acc, 1.0 / p) : peak;
    }
    if (dim != 2) throw std::invalid_argument("lp_norm: dim must be 1 or 2");
    double acc = 0.0, peak = 0.0;
    for (double x : xs)
        for (double y : xs) {
            double v = std::abs(eval_spec(s, x, y));
            peak = std::max(peak, v);
            if (std::isfinite(p)) acc += std::pow(v, p) * h * h;
        }
    return std::isfinite(p) ? std::pow(acc, 1.0 / p) : peak;
}

namespace detail {

/// Shared driver for the standard forms: `stat` is the t-independent factor
/// on the spatial grid; the remaining t-dependence is supplied per form.
/// Pairing in t is analytic: each node contributes (w/t) (I(t) - I(-t)).
template <typename Stat, typename Dyn>
Complex pv_tensor_run(const QuadConfig& c, Stat&& stat, Dyn&& dyn) {
    auto xs = grid::midpoints(c.xy_box, c.xy_points);
    auto cells = grid::static_cells(xs, stat);
    auto nodes = grid::pv_nodes(c);
    return indexed_sum(nodes.size(), [&](size_t k) {
        const auto& node = nodes[k];
        Complex acc(0.0, 0.0);
        for (const auto& cell : cells)
            acc += cell.weight * dyn(node.t, xs[cell.i], xs[cell.j]);
        return acc * (node.w / node.t);
    });
}

} // namespace detail

/// Truncated principal-value evaluation of the standard forms. The Zero tag
/// yields an exact zero. f is 1D; G, H are 2D.
inline QuadResult pv_form(const NormalForm& nf, const SpecPtr& f, const SpecPtr& g,
                          const SpecPtr& h, const QuadConfig& cfg) {
    if (f->arity != 1 || g->arity != 2 || h->arity != 2)
        throw ArityMismatch("pv_form: expects f 1D and G, H 2D");
    if (nf.tag == FormTag::Zero) return QuadResult{Complex(0.0, 0.0), 0.0, true};
    double beta = nf.tag == FormTag::L4 ? to_double(nf.beta) : 0.0;
    return detail::with_refinement(cfg, [&](const QuadConfig& c) {
        auto fg = [&](double x, double y) { return eval_spec(f, x) * eval_spec(g, x, y); };
        auto g_only = [&](double x, double y) { return eval_spec(g, x, y); };
        switch (nf.tag) {
            case FormTag::L1: // f(x) G(x,y) [H(x, y+t) - H(x, y-t)]
                return detail::pv_tensor_run(c, fg, [&](double t, double x, double y) {
                    return eval_spec(h, x, y + t) - eval_spec(h, x, y - t);
                });
            case FormTag::L2:
                return detail::pv_tensor_run(c, fg, [&](double t, double x, double y) {
                    return eval_spec(h, x + t, y) - eval_spec(h, x - t, y);
                });
            case FormTag::L3:
                return detail::pv_tensor_run(c, g_only, [&](double t, double x, double y) {
                    return eval_spec(f, x + t) * eval_spec(h, x, y + t) -
                           eval_spec(f, x - t) * eval_spec(h, x, y - t);
                });
            case FormTag::L4:
                return detail::pv_tensor_run(c, g_only, [&](double t, double x, double y) {
                    return eval_spec(f, x + t) * eval_spec(h, x + beta * t, y) -
                           eval_spec(f, x - t) * eval_spec(h, x - beta * t, y);
                });
            default:
                return Complex(0.0, 0.0);
        }
    });
}

/// Quadrilinear form with the bandlimited weight m(t); absolutely convergent,
/// plain tensor quadrature over a uniform t grid.
inline QuadResult smoothed_form_4beta(const SpecPtr& f, const SpecPtr& g, const SpecPtr& h,
                                      double beta, const QuadConfig& cfg) {
    if (f->arity != 1 || g->arity != 2 || h->arity != 2)
        throw ArityMismatch("smoothed_form_4beta: expects f 1D and G, H 2D");
    return detail::with_refinement(cfg, [&](const QuadConfig& c) {
        auto xs = grid::midpoints(c.xy_box, c.xy_points);
        auto cells = grid::static_cells(xs, [&](double x, double y) { return eval_spec(g, x, y); });
        auto ts = grid::midpoints(c.t_uniform_box, c.t_uniform_points);
        double ht = ts[1] - ts[0];
        return indexed_sum(ts.size(), [&](size_t k) {
            double t = ts[k];
            Complex m = bandlimited_m(t);
            if (m == Complex(0.0, 0.0)) return Complex(0.0, 0.0);
            Complex acc(0.0, 0.0);
            for (const auto& cell : cells)
                acc += cell.weight * eval_spec(f, xs[cell.i] + t) *
                       eval_spec(h, xs[cell.i] + beta * t, xs[cell.j]);
            return acc * m * ht;
        });
    });
}

/// Trilinear form of the bilinear Hilbert transform type, 2D grid.
inline QuadResult bht_form(const SpecPtr& f, const SpecPtr& g, const SpecPtr& h, double alpha,
                           const QuadConfig& cfg) {
    if (f->arity != 1 || g->arity != 1 || h->arity != 1)
        throw ArityMismatch("bht_form: expects three one-dimensional specs");
    return detail::with_refinement(cfg, [&](const QuadConfig& c) {
        auto xs = grid::midpoints(c.xy_box, c.xy_points);
        double hx = xs[1] - xs[0];
        std::vector<Complex> gv(xs.size());
        for (size_t i = 0; i < xs.size(); ++i) gv[i] = eval_spec(g, xs[i]);
        auto nodes = grid::pv_nodes(c);
        return indexed_sum(nodes.size(), [&](size_t k) {
            const auto& node = nodes[k];
            Complex acc(0.0, 0.0);
            for (size_t i = 0; i < xs.size(); ++i) {
                if (gv[i] == Complex(0.0, 0.0)) continue;
                double x = xs[i];
                acc += gv[i] * (eval_spec(f, x + node.t) * eval_spec(h, x + alpha * node.t) -
                                eval_spec(f, x - node.t) * eval_spec(h, x - alpha * node.t));
            }
            return acc * (node.w / node.t) * hx;
        });
    });
}

/// Carleson form with a piecewise-constant measurable phase N(x).
inline QuadResult carleson_form(const SpecPtr& f, const SpecPtr& g, const PiecewisePhase& phase,
                                const QuadConfig& cfg) {
    if (f->arity != 1 || g->arity != 1)
        throw ArityMismatch("carleson_form: expects one-dimensional specs");
    return detail::with_refinement(cfg, [&](const QuadConfig& c) {
        auto xs = grid::midpoints(c.xy_box, c.xy_points);
        double hx = xs[1] - xs[0];
        std::vector<Complex> gv(xs.size());
        std::vector<double> nv(xs.size());
        for (size_t i = 0; i < xs.size(); ++i) {
            gv[i] = eval_spec(g, xs[i]);
            nv[i] = phase(xs[i]);
        }
        auto nodes = grid::pv_nodes(c);
        return indexed_sum(nodes.size(), [&](size_t k) {
            const auto& node = nodes[k];
            Complex acc(0.0, 0.0);
            for (size_t i = 0; i < xs.size(); ++i) {
                if (gv[i] == Complex(0.0, 0.0)) continue;
                double x = xs[i];
                double ph = 2.0 * M_PI * nv[i] * node.t;
                Complex e_plus(std::cos(ph), std::sin(ph));
                acc += gv[i] * (eval_spec(f, x + node.t) * e_plus -
                                eval_spec(f, x - node.t) * std::conj(e_plus));
            }
            return acc * (node.w / node.t) * hx;
        });
    });
}

/// Triangular form in the rotated frame: integrand
/// Ft(z+t, y) G(y, z) Ht(z, y+t) / t over (t, y, z). Callers supply the
/// rotated-frame functions directly; for an original F(x, y) the first slot
/// is F(-u-v, v) and the third H(u, -u-v).
inline QuadResult tht_form(const SpecPtr& ft, const SpecPtr& g, const SpecPtr& ht,
                           const QuadConfig& cfg) {
    if (ft->arity != 2 || g->arity != 2 || ht->arity != 2)
        throw ArityMismatch("tht_form: expects three two-dimensional specs");
    return detail::with_refinement(cfg, [&](const QuadConfig& c) {
        // Static factor G(y, z): grid index i <-> y, j <-> z.
        auto stat = [&](double y, double z) { return eval_spec(g, y, z); };
        return detail::pv_tensor_run(c, stat, [&](double t, double y, double z) {
            return eval_spec(ft, z + t, y) * eval_spec(ht, z, y + t) -
                   eval_spec(ft, z - t, y) * eval_spec(ht, z, y - t);
        });
    });
}

/// Truncated special triangular form: f(x + alpha y) phi(y) G(y,z) H(z,x)
/// with kernel 1/(x+y+z), evaluated in the sheared frame x = t - y - z where
/// the kernel is exactly 1/t and the truncation is the symmetric one.
inline QuadResult trunc_special_form(const SpecPtr& f, const SpecPtr& g, const SpecPtr& h,
                                     double alpha, const QuadConfig& cfg) {
    if (f->arity != 1 || g->arity != 2 || h->arity != 2)
        throw ArityMismatch("trunc_special_form: expects f 1D and G, H 2D");
    return detail::with_refinement(cfg, [&](const QuadConfig& c) {
        // Static factor phi(y) G(y, z): grid index i <-> y, j <-> z.
        auto stat = [&](double y, double z) { return smooth_bump(y) * eval_spec(g, y, z); };
        return detail::pv_tensor_run(c, stat, [&](double t, double y, double z) {
            double xp = t - y - z;
            double xm = -t - y - z;
            return eval_spec(f, xp + alpha * y) * eval_spec(h, z, xp) -
                   eval_spec(f, xm + alpha * y) * eval_spec(h, z, xm);
        });
    });
}

} // namespace blform
