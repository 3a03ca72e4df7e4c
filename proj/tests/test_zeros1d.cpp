#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "expsum/zeros1d.hpp"
#include "test_util.hpp"

using namespace expsum;
using namespace expsum::test;

namespace {

/// Closed-form count for 1 + e^z: zeros at i pi (2k+1).
long lattice_count_1pez(double r) {
    long c = 0;
    for (long k = 1;; k += 2) {
        if (M_PI * static_cast<double>(k) >= r) break;
        c += 2;
    }
    return c;
}

}  // namespace

TEST_CASE("count_zeros_disk closed-form cases") {
    QuasiPolynomial f = one_plus_ez();
    ContourSpec c;
    c.radius = 10.0;
    ZeroCountReport rep = count_zeros_disk(f, c);
    CHECK(rep.count == 4);  // +-i pi, +-3 i pi
    CHECK(rep.winding_residual < 0.25);

    QuasiPolynomial g = exp_sum_1d({{Complex(1, 0), Complex(1, 0)}});
    for (double r : {1.0, 5.0, 40.0}) {
        ContourSpec cg;
        cg.radius = r;
        CHECK(count_zeros_disk(g, cg).count == 0);  // e^z never vanishes
    }

    QuasiPolynomial zf(1, {poly_term_1d(Complex(0, 0), {Complex(0, 0), Complex(1, 0)})});
    ContourSpec cz;
    cz.radius = 1.0;
    CHECK(count_zeros_disk(zf, cz).count == 1);  // f = z

    CHECK_THROWS(count_zeros_disk(QuasiPolynomial(1, {}), cz));
}

TEST_CASE("count matches the exact lattice over many radii") {
    QuasiPolynomial f = one_plus_ez();
    for (int i = 0; i < 25; ++i) {
        double r = 1.7 + 3.9 * i;  // avoids multiples of pi
        if (std::abs(r - M_PI * std::round(r / M_PI)) < 0.05) r += 0.11;
        ContourSpec c;
        c.radius = r;
        ZeroCountReport rep = count_zeros_disk(f, c);
        CHECK(rep.count == lattice_count_1pez(r));
        CHECK(rep.winding_residual < 0.25);
    }
}

TEST_CASE("count is monotone in the radius") {
    QuasiPolynomial f = exp_sum_1d({{Complex(0, 0), Complex(1, 0)},
                                    {Complex(1, 0), Complex(2, 0)},
                                    {Complex(3, 0), Complex(1, 0)}});
    long last = -1;
    for (double r : {2.0, 5.0, 8.5, 13.0, 21.0}) {
        ContourSpec c;
        c.radius = r;
        long cnt = count_zeros_disk(f, c).count;
        CHECK(cnt >= last);
        last = cnt;
    }
}

TEST_CASE("a contour through a zero jitters and still reports") {
    QuasiPolynomial f = one_plus_ez();
    ContourSpec c;
    c.radius = M_PI;  // zeros at +-i pi sit exactly on this contour
    ZeroCountReport rep = count_zeros_disk(f, c);
    CHECK(rep.jitters >= 1);
    CHECK((rep.count == 0 || rep.count == 2));
}

TEST_CASE("scaling identity: count(scale(f,t), r) = count(f, t r)") {
    QuasiPolynomial f = one_plus_ez();
    for (double t : {2.0, 5.0, 17.0}) {
        ContourSpec a;
        a.radius = 2.0;
        ContourSpec b;
        b.radius = 2.0 * t;
        CHECK(count_zeros_disk(scale(f, t), a).count == count_zeros_disk(f, b).count);
    }
}

TEST_CASE("conjugation symmetry: real data gives even counts without real zeros") {
    // 1 + 2 e^z + e^{3z} > 0 on the real axis, so all zeros pair up
    QuasiPolynomial f = exp_sum_1d({{Complex(0, 0), Complex(1, 0)},
                                    {Complex(1, 0), Complex(2, 0)},
                                    {Complex(3, 0), Complex(1, 0)}});
    for (double r : {4.0, 9.0, 14.0}) {
        ContourSpec c;
        c.radius = r;
        CHECK(count_zeros_disk(f, c).count % 2 == 0);
    }
}

TEST_CASE("locate_zeros_disk pins the known zeros") {
    QuasiPolynomial f = one_plus_ez();
    ContourSpec c;
    c.radius = 4.0;
    LocateResult res = locate_zeros_disk(f, c);
    REQUIRE(res.zeros.size() == 2);
    CHECK(res.complete);
    std::sort(res.zeros.begin(), res.zeros.end(),
              [](const LocatedZero& a, const LocatedZero& b) { return a.z.imag() < b.z.imag(); });
    CHECK(std::abs(res.zeros[0].z - Complex(0, -M_PI)) < 1e-10);
    CHECK(std::abs(res.zeros[1].z - Complex(0, M_PI)) < 1e-10);
    CHECK(res.zeros[0].multiplicity == 1);
}

TEST_CASE("locate_zeros_disk reports multiplicity") {
    // f = z^2
    QuasiPolynomial f(1, {poly_term_1d(Complex(0, 0), {Complex(0, 0), Complex(0, 0), Complex(1, 0)})});
    ContourSpec c;
    c.radius = 1.0;
    LocateResult res = locate_zeros_disk(f, c);
    REQUIRE(res.zeros.size() == 1);
    CHECK(res.zeros[0].multiplicity == 2);
    CHECK(std::abs(res.zeros[0].z) < 1e-8);
    CHECK(res.complete);
}

TEST_CASE("locate_zeros_disk: quadratic-in-e^z oracle") {
    // 1 + e^z + e^{2z} = 0 <=> w^2 + w + 1 = 0 with w = e^z: z = +- 2 pi i / 3
    QuasiPolynomial f = exp_sum_1d({{Complex(0, 0), Complex(1, 0)},
                                    {Complex(1, 0), Complex(1, 0)},
                                    {Complex(2, 0), Complex(1, 0)}});
    ContourSpec c;
    c.radius = 3.0;
    LocateResult res = locate_zeros_disk(f, c);
    REQUIRE(res.zeros.size() == 2);
    std::sort(res.zeros.begin(), res.zeros.end(),
              [](const LocatedZero& a, const LocatedZero& b) { return a.z.imag() < b.z.imag(); });
    CHECK(std::abs(res.zeros[0].z - Complex(0, -2.0 * M_PI / 3.0)) < 1e-9);
    CHECK(std::abs(res.zeros[1].z - Complex(0, 2.0 * M_PI / 3.0)) < 1e-9);
}

TEST_CASE("density_slope recovers (beta-alpha)/pi") {
    QuasiPolynomial f = one_plus_ez();
    DensityFit fit = density_slope(f, {20.0, 40.0, 60.0, 80.0});
    CHECK(fit.slope == doctest::Approx(1.0 / M_PI).epsilon(0.05));

    QuasiPolynomial g = exp_sum_1d({{Complex(5, 0), Complex(1, 0)}});
    DensityFit fg = density_slope(g, {5.0, 10.0, 15.0, 20.0});
    CHECK(fg.slope == doctest::Approx(0.0));

    CHECK_THROWS(density_slope(f, {10.0, 20.0, 30.0}));          // too few radii
    CHECK_THROWS(density_slope(f, {10.0, 9.0, 30.0, 40.0}));     // not increasing
}
