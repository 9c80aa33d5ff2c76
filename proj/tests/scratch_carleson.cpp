// Temporary development check; deleted before final build.
#include "blform/classify.hpp"
#include "blform/quadrature.hpp"

#include <chrono>
#include <iostream>

using namespace blform;
using Clock = std::chrono::steady_clock;

static double ms(Clock::time_point a, Clock::time_point b) {
    return std::chrono::duration<double, std::milli>(b - a).count();
}

int main(int argc, char** argv) {
    int steps = argc > 1 ? std::atoi(argv[1]) : 1;

    // Verified alpha = 1 witness (frame solution with c = 1, p = 0).
    EquivalenceWitness w;
    w.a1 = RationalMatrix{{1}};
    w.a2 = RationalMatrix{{0, -1}, {-1, 0}};
    w.a3 = RationalMatrix{{-1, 0}, {1, 1}};
    w.a4 = RationalMatrix{{1}};
    w.b = RationalMatrix{{1, 1, 1}, {0, -1, 0}, {-1, 0, 0}};
    std::cout << "witness verifies L3: " << verify_witness(special_family_datum(1), w, NormalForm::l3())
              << ", |det B| = " << to_double(determinant(w.b)) << "\n";

    auto f = spec::modulate(0.35, spec::gaussian(1.1));
    auto g = spec::gaussian(0.9);

    PiecewisePhase phase;
    double B = 8.0;
    if (steps == 1) {
        phase.pieces = {{-B, B, 3.0}};
    } else {
        phase.pieces = {{-B, 0.0, 3.0}, {0.0, B, -2.0}};
    }

    // F_G(u,v) = e^{-2 pi i N(u) v} sgn(g)|g|^{1/2}(u) phi_w(v)
    // F_H(u,v) = e^{+2 pi i N(u) v} |g|^{1/2}(u) phi_w2(v)
    auto wide = spec::dilate(8.0, spec::smooth_bump());
    auto wider = spec::dilate(16.0, spec::smooth_bump());
    std::vector<SpecPtr> g_terms, h_terms;
    for (const auto& piece : phase.pieces) {
        auto window = spec::box(piece.lo, piece.hi);
        g_terms.push_back(spec::tensor(spec::product({window, spec::sqrt_split(g, true)}),
                                       spec::modulate(-piece.freq, wide)));
        h_terms.push_back(spec::tensor(spec::product({window, spec::sqrt_split(g, false)}),
                                       spec::modulate(piece.freq, wider)));
    }
    auto fg = g_terms.size() == 1 ? g_terms[0] : spec::sum(g_terms);
    auto fh = h_terms.size() == 1 ? h_terms[0] : spec::sum(h_terms);

    auto mat = [](const RationalMatrix& m) {
        return std::vector<double>{to_double(m(0, 0)), to_double(m(0, 1)), to_double(m(1, 0)),
                                   to_double(m(1, 1))};
    };
    auto G = spec::pullback(2, 2, mat(w.a2), fg);
    auto H = spec::pullback(2, 2, mat(w.a3), fh);

    QuadConfig cfg;
    cfg.refine = false;
    cfg.t_eps = 1e-3;
    cfg.t_max = 16.0;
    cfg.t_panels = 48;
    cfg.xy_box = 9.0;
    cfg.xy_points = 768;

    auto t0 = Clock::now();
    auto lhs = trunc_special_form(f, G, H, 1.0, cfg);
    auto t1 = Clock::now();
    double detb = std::abs(to_double(determinant(w.b)));
    std::cout << "LHS = " << lhs.value << " [" << ms(t0, t1) << " ms]\n";

    QuadConfig c2 = cfg;
    c2.xy_box = 9.0;
    c2.xy_points = 768;
    t0 = Clock::now();
    auto rhs = carleson_form(f, g, phase, c2);
    t1 = Clock::now();
    double phi_l1 = 1.9;
    Complex rhs_scaled = rhs.value * phi_l1 * detb;
    std::cout << "carleson = " << rhs.value << " [" << ms(t0, t1) << " ms]\n";
    std::cout << "RHS*||phi||_1 = " << rhs_scaled << "\n";
    double rel = std::abs(lhs.value - rhs_scaled) /
                 std::max(std::abs(lhs.value), std::abs(rhs_scaled));
    std::cout << "relative mismatch = " << rel << "\n";
    return 0;
}
