#include "blform/function_spec.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace blform;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("point evaluations of the primitive shapes") {
    CHECK(eval_spec(spec::gaussian(1.0), 0.0).real() == 1.0);
    CHECK_THAT(eval_spec(spec::gaussian(2.0), 2.0).real(), WithinRel(std::exp(-M_PI), 1e-14));

    CHECK(eval_spec(spec::sign_step(), -2.0).real() == -1.0);
    CHECK(eval_spec(spec::sign_step(), 0.0).real() == 0.0);
    CHECK(eval_spec(spec::sign_step(), 3.0).real() == 1.0);
    CHECK(eval_spec(spec::sign_step(), -1.0).real() == 0.0);
    CHECK(eval_spec(spec::sign_step(), 2.0).real() == 1.0);

    double b95 = eval_spec(spec::smooth_bump(), 0.95).real();
    CHECK(b95 > 0.0);
    CHECK(b95 < 1.0);
    CHECK(eval_spec(spec::smooth_bump(), 0.9).real() == 1.0);
    CHECK(eval_spec(spec::smooth_bump(), -0.5).real() == 1.0);
    CHECK(eval_spec(spec::smooth_bump(), 1.0).real() == 0.0);
    CHECK(eval_spec(spec::smooth_bump(), 0.95).real() ==
          eval_spec(spec::smooth_bump(), -0.95).real());

    CHECK(eval_spec(spec::sign_window(3.0), 1.0).real() == 1.0);
    CHECK(eval_spec(spec::sign_window(3.0), -1.0).real() == -1.0);
    CHECK(eval_spec(spec::sign_window(3.0), 0.0).real() == 0.0);
    CHECK(eval_spec(spec::sign_window(3.0), 3.5).real() == 0.0);

    CHECK(eval_spec(spec::box(0.0, 1.0), 0.5).real() == 1.0);
    CHECK(eval_spec(spec::box(0.0, 1.0), -0.5).real() == 0.0);
}

TEST_CASE("smooth step transition is an exact partition") {
    for (double u : {0.1, 0.25, 0.5, 0.75, 0.9})
        CHECK_THAT(smooth_step(u) + smooth_step(1.0 - u), WithinAbs(1.0, 1e-15));
}

TEST_CASE("structural combinators") {
    // sup-norm preservation of the dilation on a sample of points
    auto dil = spec::dilate(8.0, spec::smooth_bump());
    CHECK(eval_spec(dil, 7.0).real() == 1.0);
    CHECK(eval_spec(dil, 8.0).real() == 0.0);

    CHECK(eval_spec(spec::scale(-2.5, spec::box(0.0, 1.0)), 0.5).real() == -2.5);

    auto mod = spec::modulate(3.0, spec::gaussian());
    CHECK_THAT(std::abs(eval_spec(mod, 1.3)), WithinRel(eval_spec(spec::gaussian(), 1.3).real(), 1e-13));
    // phase 2 pi * 3 * 1/12 = pi/2
    CHECK_THAT(eval_spec(mod, 1.0 / 12).imag(),
               WithinAbs(eval_spec(spec::gaussian(), 1.0 / 12).real(), 1e-12));

    auto t = spec::tensor(spec::gaussian(), spec::box(0.0, 1.0));
    CHECK(eval_spec(t, 0.0, 0.5).real() == 1.0);
    CHECK(eval_spec(t, 0.0, 1.5).real() == 0.0);

    auto sum = spec::sum({spec::box(0.0, 2.0), spec::box(1.0, 3.0)});
    CHECK(eval_spec(sum, 1.5).real() == 2.0);
    auto prod = spec::product({spec::box(0.0, 2.0), spec::box(1.0, 3.0)});
    CHECK(eval_spec(prod, 1.5).real() == 1.0);
    CHECK(eval_spec(prod, 0.5).real() == 0.0);
}

TEST_CASE("pullbacks") {
    // swap
    auto sw = spec::pullback(2, 2, {0, 1, 1, 0},
                             spec::tensor(spec::box(0.0, 1.0), spec::box(2.0, 3.0)));
    CHECK(eval_spec(sw, 2.5, 0.5).real() == 1.0);
    CHECK(eval_spec(sw, 0.5, 2.5).real() == 0.0);

    // affine shift
    auto sh = spec::pullback(2, 3, {1, 0, -2, 0, 1, 1},
                             spec::tensor(spec::gaussian(), spec::gaussian()));
    CHECK_THAT(eval_spec(sh, 2.0, -1.0).real(), WithinRel(1.0, 1e-14));

    // scalar argument map into a 1D spec
    auto half = spec::pullback(1, 1, {0.5}, spec::box(0.0, 1.0));
    CHECK(eval_spec(half, 1.5).real() == 1.0);

    // 2D point into a 1D spec
    auto line = spec::pullback(1, 2, {-1.0, 1.0}, spec::box(0.0, 1.0));
    CHECK(eval_spec(line, 1.0, 1.5).real() == 1.0);

    CHECK_THROWS_AS(spec::pullback(2, 2, {1, 0, 0, 1}, spec::gaussian()), ArityMismatch);
}

TEST_CASE("sqrt split") {
    auto neg = spec::scale(-4.0, spec::box(0.0, 1.0));
    CHECK(eval_spec(spec::sqrt_split(neg, false), 0.5).real() == 2.0);
    CHECK(eval_spec(spec::sqrt_split(neg, true), 0.5).real() == -2.0);
    CHECK(eval_spec(spec::sqrt_split(neg, true), 1.5).real() == 0.0);
}

TEST_CASE("arity discipline") {
    CHECK_THROWS_AS(eval_spec(spec::gaussian(), 0.0, 0.0), ArityMismatch);
    auto t = spec::tensor(spec::gaussian(), spec::gaussian());
    CHECK_THROWS_AS(eval_spec(t, 0.0), ArityMismatch);
    CHECK_THROWS_AS(spec::sum({spec::gaussian(), t}), ArityMismatch);
    CHECK_THROWS_AS(spec::modulate(1.0, t), ArityMismatch);
    CHECK_THROWS_AS(spec::tensor(t, spec::gaussian()), ArityMismatch);
}

TEST_CASE("bandlimited weight is an analytic signal with the right profile") {
    // |m| is even and peaks at 0 with half the plateau mass.
    CHECK_THAT(std::abs(bandlimited_m(0.0)), WithinAbs(0.95, 1e-6));
    CHECK_THAT(std::abs(bandlimited_m(1.7)), WithinAbs(std::abs(bandlimited_m(-1.7)), 1e-15));
    CHECK(std::abs(bandlimited_m(90.0)) < 1e-3);
    CHECK(bandlimited_m_l1() > 0.95);
    CHECK(bandlimited_m_l1() < 2.0);

    // Recovered Fourier transform: mass only on the positive half-line.
    auto m_hat = [](double xi) {
        Complex acc(0.0, 0.0);
        double step = 1.0 / 128.0;
        for (double t = -96.0; t <= 96.0; t += step) {
            double ph = -2.0 * M_PI * xi * t;
            acc += bandlimited_m(t) * Complex(std::cos(ph), std::sin(ph)) * step;
        }
        return acc;
    };
    CHECK_THAT(std::abs(m_hat(1.0)), WithinAbs(1.0, 5e-3));   // plateau center
    CHECK(std::abs(m_hat(-1.0)) < 5e-3);                      // nothing on the negative side
    CHECK(std::abs(m_hat(0.25)) < 5e-3);                      // below the support
    CHECK(std::abs(m_hat(2.0)) < 5e-3);                       // above the support
}

TEST_CASE("spec constructor validation") {
    CHECK_THROWS_AS(spec::gaussian(0.0), std::invalid_argument);
    CHECK_THROWS_AS(spec::box(1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(spec::sign_window(0.0), std::invalid_argument);
    CHECK_THROWS_AS(spec::dilate(0.0, spec::gaussian()), std::invalid_argument);
    CHECK_THROWS_AS(spec::sum({}), std::invalid_argument);
}
