#include <catch2/catch_amalgamated.hpp>

#include <twistlab/twistlab.hpp>

#include "oracles.hpp"

#include <cmath>
#include <complex>
#include <vector>

using namespace twistlab;

namespace {

SparseVector flat(int n) {
    std::vector<SparseVector::Entry> es;
    for (int i = 1; i <= n; ++i) es.emplace_back(i, cplx(1.0, 0.0));
    return SparseVector::from_entries(std::move(es));
}

const SpaceSpec kL2 = SpaceSpec::lp(2.0);

Couple l1_linf(double theta = 0.5) { return {SpaceSpec::lp(1.0), SpaceSpec::lp_inf(), theta}; }

} // namespace

TEST_CASE("twisted quasinorm pinned values") {
    auto kp = CentralizerSpec::kalton_peck(kL2, PhiSpec::phi1());

    // the fiber and the quotient embed isometrically
    SparseVector w = sample_vector(31, 0);
    CHECK(twisted_quasinorm(kp, {w, SparseVector()}, kL2) == Catch::Approx(norm(kL2, w)));
    SparseVector z = sample_vector(31, 1);
    CHECK(twisted_quasinorm(kp, {apply(kp, z), z}, kL2) ==
          Catch::Approx(norm(kL2, z)).epsilon(1e-12));

    // (0, flat-n): the correction term contributes the full log weight
    for (int n : {4, 16, 64}) {
        double want = std::sqrt(double(n)) * (1.0 + 0.5 * std::log(double(n)));
        CHECK(twisted_quasinorm(kp, {SparseVector(), flat(n)}, kL2) ==
              Catch::Approx(want).epsilon(1e-12));
    }

    CHECK(twisted_quasinorm(kp, {SparseVector(), SparseVector()}, kL2) == 0.0);

    // homogeneity is exact because the map commutes with scalars
    SparseVector w2 = sample_vector(31, 2), z2 = sample_vector(31, 3);
    double base = twisted_quasinorm(kp, {w2, z2}, kL2);
    for (cplx mu : {cplx(3.0, 0.0), cplx(1.0, -2.0)}) {
        double got = twisted_quasinorm(kp, {w2.scaled(mu), z2.scaled(mu)}, kL2);
        CHECK(got == Catch::Approx(std::abs(mu) * base).epsilon(1e-12));
    }
}

TEST_CASE("analytic witness evaluation") {
    // on the (l1, linf) scale at one half the exponent is 2(1-z)
    SparseVector x = SparseVector::from_dense({0.6, 0.8});
    AnalyticWitness g(l1_linf(), x, {cplx(1.0, 0.0)});
    CHECK(g.p_theta == Catch::Approx(2.0));
    CHECK(g.base_norm == Catch::Approx(1.0));

    // g(theta) = base
    CHECK(max_abs_diff(g.evaluate(cplx(0.5, 0.0)), x) <= 1e-12);
    // at z = 1 the coordinates flatten to sign times N
    SparseVector at1 = g.evaluate(cplx(1.0, 0.0));
    CHECK(std::abs(at1.at(1) - cplx(1.0, 0.0)) <= 1e-12);
    CHECK(std::abs(at1.at(2) - cplx(1.0, 0.0)) <= 1e-12);
    // at z = 0 the moduli square
    SparseVector at0 = g.evaluate(cplx(0.0, 0.0));
    CHECK(std::abs(at0.at(1) - cplx(0.36, 0.0)) <= 1e-12);
    CHECK(std::abs(at0.at(2) - cplx(0.64, 0.0)) <= 1e-12);

    // scale endpoints must be plain lp
    CHECK_THROWS_AS(AnalyticWitness({SpaceSpec::tsirelson(), SpaceSpec::lp(1.0), 0.5}, x, {}),
                    ConfigError);
    CHECK_THROWS_AS(AnalyticWitness(l1_linf(), SparseVector(), {}), InputError);
}

TEST_CASE("taylor tuples of closed-form witnesses") {
    // equal endpoints freeze the scale: only the multiplier varies
    Couple flat_scale{kL2, kL2, 0.5};
    SparseVector x = sample_vector(37, 0);
    AnalyticWitness gc(flat_scale, x, {cplx(1.0, 0.0)});
    RochbergTuple tc = taylor_tuple(gc, 0.5, 4);
    CHECK(tc.order() == 4);
    CHECK(max_abs_diff(tc.g_hat(1), x) <= 1e-12 * x.max_abs());
    for (int k = 2; k <= 4; ++k) CHECK(tc.g_hat(k).max_abs() == 0.0);

    // x-hat^{2(1-z)}: first derivative is -2 x log(x-hat) coordinatewise
    SparseVector b = SparseVector::from_dense({0.6, 0.8});
    AnalyticWitness g(l1_linf(), b, {cplx(1.0, 0.0)});
    RochbergTuple t = taylor_tuple(g, 0.5, 2);
    CHECK(max_abs_diff(t.g_hat(1), b) <= 1e-12);
    for (const auto& e : b.entries()) {
        cplx want = e.second * (-2.0) * std::log(std::abs(e.second));
        CHECK(std::abs(t.g_hat(2).at(e.first) - want) <= 1e-12);
    }

    // a multiplier vanishing at theta shifts the coefficients up by one
    AnalyticWitness gz(l1_linf(), b, {cplx(0.0, 0.0), cplx(1.0, 0.0)});
    RochbergTuple tz = taylor_tuple(gz, 0.5, 2);
    CHECK(tz.g_hat(1).max_abs() == 0.0);
    CHECK(max_abs_diff(tz.g_hat(2), b) <= 1e-12);

    CHECK_THROWS_AS(taylor_tuple(g, 0.5, 0), InputError);
    CHECK_THROWS_AS(taylor_tuple(g, 0.5, kTaylorDepthCap + 1), SizeError);
    CHECK_THROWS_AS(t.g_hat(3), InputError);
    CHECK_THROWS_AS(t.g_hat(0), InputError);
}

TEST_CASE("taylor tuples match finite differences") {
    SparseVector b = sample_vector(41, 2).abs();
    std::vector<cplx> mult = {cplx(0.3, 0.2), cplx(1.0, 0.0), cplx(0.0, 0.5)};
    struct Case {
        Couple scale;
        double theta;
    };
    std::vector<Case> cases = {{l1_linf(0.5), 0.5},
                               {Couple{SpaceSpec::lp(4.0), SpaceSpec::lp(4.0 / 3.0), 0.25}, 0.25}};
    for (const auto& cs : cases) {
        AnalyticWitness g(cs.scale, b, mult);
        RochbergTuple t = taylor_tuple(g, cs.theta, 4);
        double scale = 1.0 + t.g_hat(1).max_abs();
        for (int k = 0; k <= 3; ++k) {
            for (const auto& e : b.entries()) {
                cplx fd = oracles::fd_taylor_coeff(g, cs.theta, k, e.first);
                CHECK(std::abs(t.g_hat(k + 1).at(e.first) - fd) <= 1e-5 * scale);
            }
        }
    }
}

TEST_CASE("boundary norms") {
    SparseVector b = sample_vector(43, 1);
    AnalyticWitness g(l1_linf(), b, {cplx(1.0, 0.0)});

    // unit multiplier: both boundary lines carry exactly the base norm
    BoundaryReport rep = witness_boundary_report(g, 65);
    CHECK(rep.grid_max == Catch::Approx(g.base_norm).epsilon(1e-12));
    CHECK(rep.lip_slack == 0.0);
    CHECK(rep.value == Catch::Approx(g.base_norm).epsilon(1e-12));

    // scaling the multiplier scales the report
    AnalyticWitness g3(l1_linf(), b, {cplx(-3.0, 0.0)});
    CHECK(witness_boundary_norm(g3, 65) == Catch::Approx(3.0 * g.base_norm).epsilon(1e-12));

    // m = z - theta: the window sup is sqrt(T^2 + max(theta,1-theta)^2) |N|,
    // attained at the window corners; the padded grid value dominates it
    AnalyticWitness gz(l1_linf(), b, {cplx(0.0, 0.0), cplx(1.0, 0.0)});
    BoundaryReport rz = witness_boundary_report(gz, 129);
    double sup = std::sqrt(kBoundaryWindow * kBoundaryWindow + 0.25) * g.base_norm;
    CHECK(rz.grid_max <= sup + 1e-12);
    CHECK(rz.value >= sup - 1e-12);

    // finer grids cannot increase the padded value
    CHECK(witness_boundary_norm(gz, 1025) <= witness_boundary_norm(gz, 65) + 1e-12);

    CHECK_THROWS_AS(witness_boundary_report(g, 2), InputError);
}

TEST_CASE("kernel derivative bound") {
    for (double theta : {0.25, 0.5}) {
        Couple c = l1_linf(theta);
        for (std::uint64_t k = 0; k < 6; ++k) {
            SparseVector b = sample_vector(47, k).abs();
            AnalyticWitness g(c, b, {cplx(0.0, 0.0), cplx(1.0, 0.0)});
            KernelReport rep = kernel_derivative_check(g, c);
            CHECK(rep.pass);
            CHECK(rep.margin >= 0.0);
            CHECK(rep.lhs <= rep.bound + rep.tol);
        }
    }

    // witnesses that do not vanish at theta are rejected
    Couple c = l1_linf();
    AnalyticWitness g1(c, SparseVector::unit(1), {cplx(1.0, 0.0)});
    CHECK_THROWS_AS(kernel_derivative_check(g1, c), InputError);

    // the zero multiplier vanishes identically and passes with lhs = 0
    AnalyticWitness g0(c, SparseVector::unit(1), {cplx(0.0, 0.0)});
    KernelReport r0 = kernel_derivative_check(g0, c);
    CHECK(r0.pass);
    CHECK(r0.lhs == 0.0);
}

TEST_CASE("tower projections") {
    SparseVector b = sample_vector(53, 0).abs();
    AnalyticWitness g(l1_linf(), b, {cplx(0.2, 0.1), cplx(1.0, 0.0), cplx(0.5, -0.3)});

    RochbergTuple t4 = taylor_tuple(g, 0.5, 4);

    // identity projection
    RochbergTuple id = rochberg_project(t4, 4);
    REQUIRE(id.order() == 4);
    for (int k = 1; k <= 4; ++k) CHECK(max_abs_diff(id.g_hat(k), t4.g_hat(k)) == 0.0);

    // jet arithmetic is degreewise, so truncating the tuple equals computing
    // the shorter tuple directly, coefficient for coefficient
    for (int n : {1, 2, 3}) {
        RochbergTuple tn = taylor_tuple(g, 0.5, n);
        RochbergTuple pr = rochberg_project(t4, n);
        REQUIRE(pr.order() == n);
        for (int k = 1; k <= n; ++k) CHECK(max_abs_diff(pr.g_hat(k), tn.g_hat(k)) == 0.0);
    }

    CHECK(rochberg_project(t4, 0).order() == 0);
    CHECK_THROWS_AS(rochberg_project(t4, 5), InputError);
    CHECK_THROWS_AS(rochberg_project(t4, -1), InputError);
}

TEST_CASE("tower embeddings") {
    Couple c = l1_linf();
    SparseVector b = sample_vector(59, 1).abs();
    AnalyticWitness g(c, b, {cplx(1.0, 0.0), cplx(0.4, 0.2)});
    RochbergTuple t2 = taylor_tuple(g, 0.5, 2);

    EmbedResult em = rochberg_embed(t2, 4, c);
    REQUIRE(em.tuple.order() == 4);

    // data map: exact zero pad at the low end, original data shifted up
    for (int k = 1; k <= 2; ++k) CHECK(em.tuple.g_hat(k).max_abs() == 0.0);
    for (int k = 1; k <= 2; ++k) CHECK(max_abs_diff(em.tuple.g_hat(k + 2), t2.g_hat(k)) == 0.0);

    // range sits inside the kernel of the complementary projection
    RochbergTuple low = rochberg_project(em.tuple, 2);
    for (int k = 1; k <= 2; ++k) CHECK(low.g_hat(k).max_abs() == 0.0);

    // certificate: psi has the exact jet (z - theta)^2 through order 4
    REQUIRE(em.certified);
    CHECK(em.remainder == 0.0);
    REQUIRE(em.psi_taylor.size() == 5);
    for (std::size_t k = 0; k < em.psi_taylor.size(); ++k) {
        cplx want = (k == 2) ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
        CHECK(std::abs(em.psi_taylor[k] - want) <= 1e-12);
    }
    CHECK(em.psi_sup > 0.0);

    // multiplying the witness by (z - theta) realizes the one-step embedding
    AnalyticWitness gz(c, b, {cplx(0.0, 0.0), cplx(1.0, 0.0), cplx(0.4, 0.2)});
    RochbergTuple tz = taylor_tuple(gz, 0.5, 3);
    EmbedResult em1 = rochberg_embed(t2, 3, c);
    for (int k = 1; k <= 3; ++k)
        CHECK(max_abs_diff(em1.tuple.g_hat(k), tz.g_hat(k)) <= 1e-12 * (1.0 + b.max_abs()));

    CHECK_THROWS_AS(rochberg_embed(t2, 2, c), InputError);
    RochbergTuple wrong = t2;
    wrong.theta = 0.25;
    CHECK_THROWS_AS(rochberg_embed(wrong, 4, c), InputError);
}
