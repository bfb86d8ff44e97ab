#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "rangelab/error.hpp"
#include "rangelab/poly.hpp"

using namespace rangelab;

namespace {

MultiPoly xy_poly(std::initializer_list<std::pair<MultiIndex, double>> t) { return MultiPoly(2, t); }

MultiPoly random_poly(std::mt19937_64& rng, int dim, int degree, double lo = -1, double hi = 1) {
    std::uniform_real_distribution<double> u(lo, hi);
    MultiPoly p(dim);
    MultiIndex idx(dim, 0);
    // every monomial of total degree <= degree
    std::function<void(int, int)> rec = [&](int axis, int left) {
        if (axis == dim) {
            p.add_term(idx, u(rng));
            return;
        }
        for (int e = 0; e <= left; ++e) {
            idx[axis] = e;
            rec(axis + 1, left - e);
        }
        idx[axis] = 0;
    };
    rec(0, degree);
    return p;
}

MultiPoly random_int_poly(std::mt19937_64& rng, int degree) {
    std::uniform_int_distribution<int> u(-3, 3);
    MultiPoly p(2);
    for (int i = 0; i <= degree; ++i)
        for (int j = 0; i + j <= degree; ++j) p.add_term({i, j}, u(rng));
    if (p.degree() < 1) p.add_term({1, 0}, 1.0);
    return p;
}

// Sylvester matrix of p, q (as polynomials in x) at a fixed numeric y.
double numeric_sylvester_x(const MultiPoly& p, const MultiPoly& q, double y) {
    auto coeffs = [&](const MultiPoly& f) {
        std::vector<double> c(f.degree_in(0) + 1, 0.0);
        for (const auto& [idx, v] : f.terms()) c[idx[0]] += v * std::pow(y, idx[1]);
        return c;
    };
    const auto a = coeffs(p), b = coeffs(q);
    const int m = static_cast<int>(a.size()) - 1, n = static_cast<int>(b.size()) - 1;
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(m + n, m + n);
    for (int r = 0; r < n; ++r)
        for (int k = 0; k <= m; ++k) s(r, r + k) = a[m - k];
    for (int r = 0; r < m; ++r)
        for (int k = 0; k <= n; ++k) s(n + r, r + k) = b[n - k];
    return s.determinant();
}

// Complete homogeneous symmetric polynomial h_k by monomial enumeration.
double complete_h(int k, const std::vector<double>& xs) {
    if (k < 0) return 0.0;
    if (k == 0) return 1.0;
    double sum = 0.0;
    std::function<void(std::size_t, int, double)> rec = [&](std::size_t i, int left, double prod) {
        if (i + 1 == xs.size()) {
            sum += prod * std::pow(xs[i], left);
            return;
        }
        for (int e = 0; e <= left; ++e) rec(i + 1, left - e, prod * std::pow(xs[i], e));
    };
    rec(0, k, 1.0);
    return sum;
}

// Jacobi-Trudi: s_lambda = det[h_{lambda_i - i + j}].
double jacobi_trudi(const std::vector<int>& lambda, const std::vector<double>& xs) {
    const int l = static_cast<int>(lambda.size());
    Eigen::MatrixXd m(l, l);
    for (int i = 0; i < l; ++i)
        for (int j = 0; j < l; ++j) m(i, j) = complete_h(lambda[i] - i + j, xs);
    return l == 0 ? 1.0 : m.determinant();
}

}  // namespace

TEST_CASE("evaluate") {
    const MultiPoly p = xy_poly({{{1, 0}, 1.0}, {{0, 2}, -1.0}});
    CHECK(p(4.0, 2.0) == 0.0);
    const MultiPoly cubic = xy_poly({{{1, 0}, 1.0}, {{0, 3}, -1.0}});
    CHECK(cubic(1.0, 1.0) == 0.0);
    MultiPoly zero(2);
    zero.add_term({1, 1}, 0.0);
    CHECK(zero.is_zero());
    CHECK(zero(0.3, -7.0) == 0.0);
    const double bad[3] = {1, 2, 3};
    CHECK_THROWS_AS(p.evaluate(bad), Error);
}

TEST_CASE("terms that cancel are dropped and the degree follows") {
    MultiPoly p = xy_poly({{{3, 0}, 2.0}, {{0, 1}, 1.0}});
    CHECK(p.degree() == 3);
    p.add_term({3, 0}, -2.0);
    CHECK(p.degree() == 1);
    CHECK(p.terms().size() == 1);
}

TEST_CASE("partial derivative") {
    const MultiPoly circle = xy_poly({{{2, 0}, 1.0}, {{0, 2}, 1.0}, {{0, 0}, -1.0}});
    CHECK(partial_derivative(circle, 0) == xy_poly({{{1, 0}, 2.0}}));
    CHECK(partial_derivative(MultiPoly::constant(2, 5.0), 1).is_zero());
    const MultiPoly p = xy_poly({{{1, 0}, 1.0}, {{0, 3}, -1.0}});
    CHECK(partial_derivative(p, 1) == xy_poly({{{0, 2}, -3.0}}));
    CHECK_THROWS_AS(partial_derivative(p, 2), Error);

    std::mt19937_64 rng(11);
    for (int t = 0; t < 50; ++t) {
        const MultiPoly r = random_poly(rng, 3, 1 + t % 5);
        for (int axis = 0; axis < 3; ++axis) {
            const MultiPoly d = partial_derivative(r, axis);
            if (!d.is_zero()) CHECK(d.degree() <= r.degree() - 1);
        }
    }
}

TEST_CASE("restrict") {
    const MultiPoly p(3, {{{1, 0, 0}, 1.0}, {{0, 3, 0}, -1.0}, {{0, 0, 1}, 1.0}});
    CHECK(restrict(p, 2, 0.0) == xy_poly({{{1, 0}, 1.0}, {{0, 3}, -1.0}}));
    CHECK(restrict(xy_poly({{{1, 1}, 1.0}}), 1, 2.0) == MultiPoly(1, {{{1}, 2.0}}));

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (int t = 0; t < 100; ++t) {
        const int dim = 2 + t % 3;
        const MultiPoly r = random_poly(rng, dim, 1 + t % 4);
        const int axis = t % dim;
        std::vector<double> x(dim);
        for (double& v : x) v = u(rng);
        std::vector<double> rest;
        for (int j = 0; j < dim; ++j)
            if (j != axis) rest.push_back(x[j]);
        CHECK(restrict(r, axis, x[axis]).evaluate(rest) == doctest::Approx(r.evaluate(x)).epsilon(1e-12));
    }
}

TEST_CASE("implicit derivatives") {
    const MultiPoly circle = xy_poly({{{2, 0}, 1.0}, {{0, 2}, 1.0}, {{0, 0}, -1.0}});
    auto d = implicit_derivatives(circle, 0.0, 1.0, 2);
    CHECK(d[0] == doctest::Approx(0.0));
    CHECK(d[1] == doctest::Approx(-1.0));

    const MultiPoly cubic = xy_poly({{{0, 1}, 1.0}, {{3, 0}, -1.0}});
    d = implicit_derivatives(cubic, 1.0, 1.0, 3);
    CHECK(d[0] == doctest::Approx(3.0));
    CHECK(d[1] == doctest::Approx(6.0));
    CHECK(d[2] == doctest::Approx(6.0));

    const MultiPoly diag = xy_poly({{{0, 1}, 1.0}, {{1, 0}, -1.0}});
    d = implicit_derivatives(diag, 0.3, 0.3, 2);
    CHECK(d[0] == doctest::Approx(1.0));
    CHECK(d[1] == doctest::Approx(0.0));

    CHECK_THROWS_AS(implicit_derivatives(circle, 1.0, 0.0, 1), Error);
}

TEST_CASE("implicit derivatives match finite differences of the explicit branch") {
    // Upper branch of x^2/a^2 + y^2/b^2 = 1 at a point with nonzero slope.
    const double a = 0.7, b = 0.4, x0 = 0.3;
    const MultiPoly ell = xy_poly({{{2, 0}, 1.0 / (a * a)}, {{0, 2}, 1.0 / (b * b)}, {{0, 0}, -1.0}});
    auto y = [&](double x) { return b * std::sqrt(1.0 - x * x / (a * a)); };
    const auto d = implicit_derivatives(ell, x0, y(x0), 3);
    const double h = 1e-3;
    const double d1 = (y(x0 + h) - y(x0 - h)) / (2 * h);
    const double d2 = (y(x0 + h) - 2 * y(x0) + y(x0 - h)) / (h * h);
    const double d3 = (y(x0 + 2 * h) - 2 * y(x0 + h) + 2 * y(x0 - h) - y(x0 - 2 * h)) / (2 * h * h * h);
    CHECK(d[0] == doctest::Approx(d1).epsilon(1e-5));
    CHECK(d[1] == doctest::Approx(d2).epsilon(1e-5));
    CHECK(d[2] == doctest::Approx(d3).epsilon(1e-4));
}

TEST_CASE("max sublevel interval") {
    CHECK(max_sublevel_interval(MultiPoly(1, {{{2}, 1.0}}), 0.01, -1, 1) ==
          doctest::Approx(2 * std::sqrt(0.01)).epsilon(1e-9));
    CHECK(max_sublevel_interval(MultiPoly(1, {{{1}, 1.0}}), 0.5, -1, 1) == doctest::Approx(1.0).epsilon(1e-9));
    // x^2 - 1 with w = 0.1: two disjoint pieces of width sqrt(1.1) - sqrt(0.9)
    const double piece = std::sqrt(1.1) - std::sqrt(0.9);
    CHECK(max_sublevel_interval(MultiPoly(1, {{{2}, 1.0}, {{0}, -1.0}}), 0.1, -2, 2) ==
          doctest::Approx(piece).epsilon(1e-8));
    // empty sublevel set
    CHECK(max_sublevel_interval(MultiPoly(1, {{{2}, 1.0}, {{0}, 5.0}}), 0.1, -1, 1) == 0.0);
}

TEST_CASE("sublevel bound on random polynomials") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-1, 1);
    std::uniform_int_distribution<int> deg(1, 5);
    for (int t = 0; t < 60; ++t) {
        const int d = deg(rng);
        std::vector<double> c(d + 1);
        for (double& v : c) v = u(rng);
        c[d] = (u(rng) < 0 ? -1 : 1) * (0.1 + std::abs(u(rng)));
        const double w = t % 2 ? 1e-3 : 1e-2;
        const double len = max_sublevel_interval(MultiPoly::univariate(c), w, -2, 2, 16);
        CHECK(len <= 8 * std::pow(w / std::abs(c[d]), 1.0 / d));
    }
}

TEST_CASE("resultant examples") {
    const MultiPoly circle = xy_poly({{{2, 0}, 1.0}, {{0, 2}, 1.0}, {{0, 0}, -1.0}});
    const MultiPoly x = MultiPoly::variable(2, 0);
    const MultiPoly y = MultiPoly::variable(2, 1);
    const MultiPoly r = resultant(circle, x, 0);
    for (double yy : {-1.3, -1.0, 0.0, 0.4, 1.0, 2.0})
        CHECK(r(yy) == doctest::Approx(numeric_sylvester_x(circle, x, yy)));
    const auto roots = upoly::real_roots(r.univariate_coeffs(), -3, 3);
    REQUIRE(roots.size() == 2);
    CHECK(roots[0] == doctest::Approx(-1.0));
    CHECK(roots[1] == doctest::Approx(1.0));

    const MultiPoly shared_p = (x + MultiPoly::constant(2, 1.0)) * x;
    const MultiPoly shared_q = (x + MultiPoly::constant(2, 1.0)) * y;
    CHECK(resultant(shared_p, shared_q, 0).is_zero());

    const MultiPoly rxy = resultant(x, y, 0);
    CHECK(rxy.degree() == 1);
    CHECK(rxy.terms().size() == 1);
    CHECK(rxy.coeff({1}) != 0.0);
}

TEST_CASE("resultant agrees with numeric Sylvester determinants") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int t = 0; t < 40; ++t) {
        const MultiPoly p = random_poly(rng, 2, 1 + t % 4);
        const MultiPoly q = random_poly(rng, 2, 1 + (t / 4) % 3);
        const MultiPoly r = resultant(p, q, 0);
        for (int k = 0; k < 5; ++k) {
            const double yy = u(rng);
            const double want = numeric_sylvester_x(p, q, yy);
            CHECK(r(yy) == doctest::Approx(want).epsilon(1e-9).scale(1.0));
        }
    }
}

TEST_CASE("resultant vanishes exactly for shared factors") {
    std::mt19937_64 rng(3);
    int coprime_nonzero = 0;
    for (int t = 0; t < 40; ++t) {
        const MultiPoly f = random_int_poly(rng, 1 + t % 2);
        if (f.degree_in(0) == 0) continue;
        const MultiPoly g = random_int_poly(rng, 1 + t % 3);
        const MultiPoly h = random_int_poly(rng, 1 + (t + 1) % 3);
        CHECK(resultant(f * g, f * h, 0).is_zero());
        if (!resultant(g, h, 0).is_zero()) ++coprime_nonzero;
    }
    // generic integer pairs are coprime
    CHECK(coprime_nonzero >= 30);
}

TEST_CASE("vandermonde") {
    const double a[3] = {1, 2, 3};
    CHECK(vandermonde_det(a) == 2.0);
    const double b[1] = {0.7};
    CHECK(vandermonde_det(b) == 1.0);
    const double c[3] = {1, 1, 2};
    CHECK(vandermonde_det(c) == 0.0);
}

TEST_CASE("schur by tableau enumeration") {
    const double ones[2] = {1, 1};
    CHECK(schur(Partition({0, 0}), ones) == 1.0);
    CHECK(schur(Partition({1, 0}), ones) == 2.0);
    CHECK(schur(Partition({2, 0}), ones) == 3.0);
    CHECK(ssyt_count(Partition({2, 1}), 3) == 8);

    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(1, 2);
    for (int t = 0; t < 60; ++t) {
        const int n = 1 + t % 4;
        std::vector<int> parts(n);
        std::uniform_int_distribution<int> d(0, 3);
        for (int& v : parts) v = d(rng);
        std::sort(parts.rbegin(), parts.rend());
        std::vector<double> xs(n);
        for (double& v : xs) v = u(rng);
        CHECK(schur(Partition(parts), xs) == doctest::Approx(jacobi_trudi(parts, xs)).epsilon(1e-12));
    }
    const double big[6] = {1, 1, 1, 1, 1, 1};
    CHECK_THROWS_AS(schur(Partition({8, 8, 8}), big, 1000), Error);
    CHECK_THROWS_AS(Partition({1, 2}), Error);
}

TEST_CASE("generalized Vandermonde") {
    const double xs[3] = {1.2, 1.5, 1.9};
    CHECK(gen_vandermonde_det(Partition({0, 0, 0}), xs) == doctest::Approx(vandermonde_det(xs)));

    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(1, 2);
    for (int t = 0; t < 100; ++t) {
        const int n = 1 + t % 4;
        std::vector<int> parts(n);
        std::uniform_int_distribution<int> d(0, 3);
        for (int& v : parts) v = d(rng);
        std::sort(parts.rbegin(), parts.rend());
        std::vector<double> x(n);
        for (double& v : x) v = u(rng);
        const Partition lam(parts);
        const double ratio = gen_vandermonde_det(lam, x) / vandermonde_det(x);
        const int weight = std::accumulate(parts.begin(), parts.end(), 0);
        const double count = static_cast<double>(ssyt_count(lam, n));
        CHECK(ratio >= 1.0 - 1e-9);
        CHECK(ratio <= count * std::pow(2.0, weight) * (1 + 1e-9));
    }
}

TEST_CASE("determinant is multilinear in each column") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int t = 0; t < 50; ++t) {
        Eigen::MatrixXd a(4, 4);
        for (int i = 0; i < 16; ++i) a(i / 4, i % 4) = u(rng);
        const int col = t % 4;
        const double r = u(rng) * 3;
        Eigen::VectorXd w(4), v(4);
        for (int i = 0; i < 4; ++i) {
            w(i) = u(rng);
            v(i) = u(rng);
        }
        a.col(col) = r * w + v;
        Eigen::MatrixXd aw = a, av = a;
        aw.col(col) = w;
        av.col(col) = v;
        CHECK(std::abs(determinant(a) - (r * determinant(aw) + determinant(av))) <= 1e-9);
    }
    CHECK_THROWS_AS(determinant(Eigen::MatrixXd::Identity(65, 65)), Error);
}

TEST_CASE("monic parameter count") {
    CHECK(monic_param_count(2, 4) == 14);
    CHECK(monic_param_count(2, 5) == 20);
    CHECK(monic_param_count(2, 1) == 2);
    CHECK(monic_param_count(2, 2) == 5);
    CHECK(monic_param_count(3, 2) == 9);
}

TEST_CASE("real roots handle multiplicity") {
    // (y - 0.2)^2 (y + 0.5)
    const std::vector<double> p = upoly::mul(upoly::mul({-0.2, 1}, {-0.2, 1}), {0.5, 1});
    const auto r = upoly::real_roots(p, -1, 1);
    REQUIRE(r.size() == 2);
    CHECK(r[0] == doctest::Approx(-0.5));
    CHECK(r[1] == doctest::Approx(0.2).epsilon(1e-6));
    const auto six = upoly::real_roots({0, 0, 0, 0, 0, 0, 1}, -1, 1);
    REQUIRE(six.size() == 1);
    CHECK(six[0] == doctest::Approx(0.0));
}
