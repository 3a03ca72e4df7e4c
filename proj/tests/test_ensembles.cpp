#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "expsum/ensembles.hpp"
#include "expsum/rng.hpp"
#include "expsum/serialize.hpp"
#include "test_util.hpp"

using namespace expsum;
using namespace expsum::test;

namespace {

QuasiPolynomial const_one() {
    return QuasiPolynomial(1, {QpTerm{Frequency::Zero(1),
                                      {PolyTerm{Eigen::VectorXi::Zero(1), Complex(1, 0)}}}});
}

QuasiPolynomial pure_exp(double xi) {
    return exp_sum_1d({{Complex(xi, 0), Complex(1, 0)}});
}

HermitianBasisSpace space_s0() {
    return HermitianBasisSpace({const_one(), pure_exp(1.0)}, CMatrix::Identity(2, 2));
}

/// S_N({0,1}) with the identity Gram on the monomial-exponential basis.
HermitianBasisSpace space_sn(int deg) {
    std::vector<QuasiPolynomial> basis;
    for (double xi : {0.0, 1.0})
        for (int d = 0; d <= deg; ++d) {
            PolyTerm p{Eigen::VectorXi::Constant(1, d), Complex(1, 0)};
            basis.emplace_back(1, std::vector<QpTerm>{QpTerm{freq1(Complex(xi, 0)), {p}}});
        }
    const long dim = static_cast<long>(basis.size());
    return HermitianBasisSpace(std::move(basis), CMatrix::Identity(dim, dim));
}

double logistic(double t) { return 1.0 / (1.0 + std::exp(-t)); }

}  // namespace

TEST_CASE("space construction validates its inputs") {
    CHECK_THROWS(HermitianBasisSpace({const_one()}, CMatrix::Identity(2, 2)));
    CMatrix notpd = CMatrix::Zero(1, 1);
    CHECK_THROWS_AS(HermitianBasisSpace({const_one()}, notpd), NumericError);
    CMatrix skew(1, 1);
    skew(0, 0) = Complex(0, 1);
    CHECK_THROWS(HermitianBasisSpace({const_one()}, skew));
    // basis frequency outside the declared spectrum
    CHECK_THROWS_AS(HermitianBasisSpace({pure_exp(2.0)}, CMatrix::Identity(1, 1),
                                        spectrum1({Complex(0, 0), Complex(1, 0)})),
                    SpectrumError);
}

TEST_CASE("evaluation-functional norms") {
    HermitianBasisSpace v = space_s0();
    for (double x : {-2.0, 0.0, 0.7, 3.0})
        CHECK(v.eval_functional_norm(pt1(Complex(x, 0.4))) ==
              doctest::Approx(std::sqrt(1.0 + std::exp(2.0 * x))).epsilon(1e-12));

    HermitianBasisSpace consts({const_one()}, CMatrix::Identity(1, 1));
    CHECK(consts.eval_functional_norm(pt1(Complex(5, -3))) == doctest::Approx(1.0));

    CMatrix gram(2, 2);
    gram << Complex(1, 0), Complex(0, 0), Complex(0, 0), Complex(4, 0);
    HermitianBasisSpace scaled({const_one(), pure_exp(1.0)}, gram);
    const double norm0 = scaled.eval_functional_norm(pt1(Complex(0, 0)));
    CHECK(norm0 == doctest::Approx(std::sqrt(1.25)).epsilon(1e-12));

    // maximization oracle: sup |f(0)| over ||f|| = 1 on a fine grid of the
    // ellipse |a|^2 + 4 |b|^2 = 1 (real slice suffices for the supremum)
    double best = 0.0;
    for (int i = 0; i <= 20000; ++i) {
        double th = M_PI * i / 20000.0;
        double a = std::cos(th), b = std::sin(th) / 2.0;
        best = std::max(best, std::abs(a + b));
    }
    CHECK(best == doctest::Approx(norm0).epsilon(1e-6));

    // log form survives far out
    CHECK(scaled.log_eval_functional_norm(pt1(Complex(2000.0, 1.0))) ==
          doctest::Approx(2000.0 + std::log(0.5)).epsilon(1e-9));
}

TEST_CASE("norms are invariant under a change of basis with consistent Gram") {
    HermitianBasisSpace v1 = space_s0();
    // basis {1+e^z, 1-e^z} for the same space and inner product
    QuasiPolynomial p = exp_sum_1d({{Complex(0, 0), Complex(1, 0)}, {Complex(1, 0), Complex(1, 0)}});
    QuasiPolynomial q = exp_sum_1d({{Complex(0, 0), Complex(1, 0)}, {Complex(1, 0), Complex(-1, 0)}});
    CMatrix gram(2, 2);
    gram << Complex(2, 0), Complex(0, 0), Complex(0, 0), Complex(2, 0);
    HermitianBasisSpace v2({p, q}, gram);
    SplitMix64 rng(3);
    for (int i = 0; i < 40; ++i) {
        ComplexPoint z = pt1(Complex(6.0 * rng.uniform() - 3.0, 6.0 * rng.uniform() - 3.0));
        double a = v1.eval_functional_norm(z);
        double b = v2.eval_functional_norm(z);
        CHECK(std::abs(a - b) <= 1e-10 * std::max(1.0, a));
    }
}

TEST_CASE("expected density closed forms") {
    HermitianBasisSpace v = space_s0();
    CHECK(expected_density_exact(v, Complex(0, 0)) ==
          doctest::Approx(1.0 / (4.0 * M_PI)).epsilon(1e-12));
    for (double x : {-1.5, -0.3, 0.9})
        for (double y : {0.0, 2.0}) {
            double s = logistic(2.0 * x);
            CHECK(expected_density_exact(v, Complex(x, y)) ==
                  doctest::Approx(s * (1.0 - s) / M_PI).epsilon(1e-10));
        }

    HermitianBasisSpace consts({const_one()}, CMatrix::Identity(1, 1));
    CHECK(expected_density_exact(consts, Complex(0.3, 0.1)) == doctest::Approx(0.0));
}

TEST_CASE("random sampling: determinism and Rayleigh scale") {
    HermitianBasisSpace v = space_s0();
    QuasiPolynomial a = sample_random_function(v, 4242);
    QuasiPolynomial b = sample_random_function(v, 4242);
    CHECK(to_json(a) == to_json(b));
    QuasiPolynomial c = sample_random_function(v, 4243);
    CHECK(to_json(a) != to_json(c));

    // V = span{1}: |f(0)| = |c| with E|c|^2 = 1
    HermitianBasisSpace consts({const_one()}, CMatrix::Identity(1, 1));
    double sum_sq = 0.0;
    const int n = 4000;
    for (int i = 0; i < n; ++i) {
        QuasiPolynomial f = sample_random_function(consts, derive_seed(77, i));
        sum_sq += std::norm(eval(f, pt1(Complex(0, 0))));
    }
    CHECK(sum_sq / n == doctest::Approx(1.0).epsilon(0.08));
}

TEST_CASE("averaged_count_1d: one-dimensional spaces never vanish") {
    HermitianBasisSpace v({pure_exp(1.0)}, CMatrix::Identity(1, 1));
    AveragedCount res = averaged_count_1d(v, 10.0, 1.0, 20, 9);
    CHECK(res.mean == 0.0);
    CHECK(res.stderr_mean == 0.0);
}

TEST_CASE("averaged_count_1d approaches (beta-alpha) r / pi and is deterministic") {
    HermitianBasisSpace v = space_s0();
    AveragedCount res = averaged_count_1d(v, 25.0, 1.0, 60, 2024);
    CHECK(std::abs(res.mean - 1.0 / M_PI) <= std::max(3.0 * res.stderr_mean, 0.02));

    AveragedCount again = averaged_count_1d(v, 25.0, 1.0, 60, 2024, 3);
    CHECK(res.mean == again.mean);  // bit-identical across worker counts
    CHECK(res.stderr_mean == again.stderr_mean);
}

TEST_CASE("averaged counts are invariant under a unitary basis rotation") {
    HermitianBasisSpace v1 = space_s0();
    QuasiPolynomial p = exp_sum_1d({{Complex(0, 0), Complex(1 / std::sqrt(2.0), 0)},
                                    {Complex(1, 0), Complex(1 / std::sqrt(2.0), 0)}});
    QuasiPolynomial q = exp_sum_1d({{Complex(0, 0), Complex(1 / std::sqrt(2.0), 0)},
                                    {Complex(1, 0), Complex(-1 / std::sqrt(2.0), 0)}});
    HermitianBasisSpace v2({p, q}, CMatrix::Identity(2, 2));
    AveragedCount a = averaged_count_1d(v1, 8.0, 1.5, 80, 31);
    AveragedCount b = averaged_count_1d(v2, 8.0, 1.5, 80, 32);
    const double err = 2.0 * std::hypot(a.stderr_mean, b.stderr_mean);
    CHECK(std::abs(a.mean - b.mean) <= std::max(err, 0.02));
}

TEST_CASE("regularity profile: regular space, closed-form deviation") {
    HermitianBasisSpace v = space_s0();
    RegularityProfile prof = regularity_profile(v, {10.0, 40.0}, 64, 0);
    REQUIRE(prof.rows.size() == 2);
    // sup over the angle sample sits at Re z ~ 0 where the deviation is log(2)/(2t)
    CHECK(prof.rows[1].sup_deviation ==
          doctest::Approx(std::log(2.0) / (2.0 * 40.0)).epsilon(1e-6));
    CHECK(prof.rows[0].sup_deviation > prof.rows[1].sup_deviation);
    CHECK(prof.bound_violations == 0);
}

TEST_CASE("regularity profile: non-regular witness keeps deviation 1 at z = -1") {
    HermitianBasisSpace witness({pure_exp(1.0)}, CMatrix::Identity(1, 1),
                                spectrum1({Complex(0, 0), Complex(1, 0)}));
    RegularityProfile prof = regularity_profile(witness, {5.0, 20.0, 80.0}, 64, 0);
    for (const auto& row : prof.rows) CHECK(row.sup_deviation >= 1.0 - 1e-9);
    // the witness direction z = -1 is angle index 32 of 64
    for (long ti = 0; ti < 3; ++ti)
        CHECK(prof.deviations(ti, 32) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(prof.bound_violations == 0);
}

TEST_CASE("regularity profile: quasi-polynomial space matches its closed form") {
    HermitianBasisSpace v = space_sn(2);
    RegularityProfile prof = regularity_profile(v, {10.0, 100.0, 300.0}, 64, 0);
    for (std::size_t i = 0; i < prof.rows.size(); ++i) {
        const double t = prof.t_list[i];
        const double expected =
            (std::log(1.0 + t * t + t * t * t * t) + std::log(2.0)) / (2.0 * t);
        CHECK(prof.rows[i].sup_deviation == doctest::Approx(expected).epsilon(1e-6));
    }
    // decreasing like O(log t / t); comfortably below 0.05 only by t = 300
    CHECK(prof.rows[2].sup_deviation < 0.05);
    CHECK(prof.rows[2].sup_deviation < prof.rows[0].sup_deviation);
    CHECK(prof.bound_violations == 0);
}

TEST_CASE("averaged means approach the limit as t grows, within error bars") {
    HermitianBasisSpace v = space_s0();
    AveragedCount m10 = averaged_count_1d(v, 10.0, 1.0, 60, 71);
    AveragedCount m25 = averaged_count_1d(v, 25.0, 1.0, 60, 72);
    AveragedCount m50 = averaged_count_1d(v, 50.0, 1.0, 60, 73);
    CHECK(m10.mean <= m25.mean + 2.0 * std::hypot(m10.stderr_mean, m25.stderr_mean));
    CHECK(m25.mean <= m50.mean + 2.0 * std::hypot(m25.stderr_mean, m50.stderr_mean));
    CHECK(std::abs(m50.mean - 1.0 / M_PI) <= std::max(3.0 * m50.stderr_mean, 5e-3));
}

TEST_CASE("inner-product independence of the averaged count") {
    HermitianBasisSpace v1 = space_s0();
    CMatrix gram(2, 2);
    gram << Complex(1, 0), Complex(0, 0), Complex(0, 0), Complex(4, 0);
    HermitianBasisSpace v2({const_one(), pure_exp(1.0)}, gram);
    AveragedCount a = averaged_count_1d(v1, 20.0, 1.0, 80, 555);
    AveragedCount b = averaged_count_1d(v2, 20.0, 1.0, 80, 556);
    const double err = 2.0 * std::hypot(a.stderr_mean, b.stderr_mean);
    CHECK(std::abs(a.mean - b.mean) <= std::max(err, 0.02));
}
