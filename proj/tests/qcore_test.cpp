#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "decolab/constants.hpp"
#include "decolab/qcore.hpp"

using namespace decolab;
using Catch::Approx;

namespace {

StateVector two_level(cx a, cx b) {
    return StateVector({a, b}, FactorShape{2});
}

// Spin-1/2 S_x in units of hbar.
Eigen::MatrixXcd sx_matrix(double hbar) {
    Eigen::MatrixXcd m(2, 2);
    m << 0.0, 0.5 * hbar, 0.5 * hbar, 0.0;
    return m;
}

Eigen::MatrixXcd sz_matrix(double hbar) {
    Eigen::MatrixXcd m(2, 2);
    m << 0.5 * hbar, 0.0, 0.0, -0.5 * hbar;
    return m;
}

}  // namespace

TEST_CASE("factor shape flattening is row-major with first factor slowest", "[qcore]") {
    FactorShape s{2, 3, 2};
    REQUIRE(s.total() == 12);
    REQUIRE(s.flatten({0, 0, 0}) == 0);
    REQUIRE(s.flatten({0, 0, 1}) == 1);
    REQUIRE(s.flatten({0, 1, 0}) == 2);
    REQUIRE(s.flatten({1, 0, 0}) == 6);
    std::vector<std::size_t> idx;
    s.unflatten(7, idx);
    REQUIRE(idx == std::vector<std::size_t>{1, 0, 1});
    const std::vector<std::size_t> bad{2, 0};
    REQUIRE_THROWS_AS(FactorShape(bad), std::invalid_argument);
}

TEST_CASE("state construction repairs small norm drift and rejects large", "[qcore]") {
    const double drift = 1.0 + 5e-7;
    StateVector s({cx(drift, 0.0), cx(0.0, 0.0)}, FactorShape{2});
    double n2 = 0.0;
    for (auto a : s.amps()) n2 += std::norm(a);
    REQUIRE(std::abs(n2 - 1.0) < tol::norm_invariant);
    REQUIRE_THROWS_AS(StateVector({cx(1.1, 0.0), cx(0.0, 0.0)}, FactorShape{2}),
                      std::invalid_argument);
}

TEST_CASE("tensor product of basis states and dimension arithmetic", "[qcore]") {
    auto z0 = StateVector::basis(0, FactorShape{2});
    auto prod = tensor_product(z0, z0);
    REQUIRE(prod.dim() == 4);
    REQUIRE(prod[0] == cx(1.0, 0.0));
    for (std::size_t i = 1; i < 4; ++i) REQUIRE(std::abs(prod[i]) == 0.0);

    auto a = random_state(substream(11, 0), FactorShape{2});
    auto b = random_state(substream(11, 1), FactorShape{3});
    REQUIRE(tensor_product(a, b).dim() == 6);
}

TEST_CASE("pure density of equal superposition has four entries 1/2", "[qcore]") {
    const double r = 1.0 / std::sqrt(2.0);
    auto rho = pure_density(two_level(r, r));
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            REQUIRE(std::abs(rho.entry(i, j) - cx(0.5, 0.0)) < 1e-12);
    REQUIRE(pure_density(StateVector::basis(0, FactorShape{2})).entry(0, 0) == cx(1.0, 0.0));
}

TEST_CASE("pure states have unit purity", "[qcore]") {
    auto rho = pure_density(random_state(substream(12, 0), FactorShape{4}));
    REQUIRE(rho.purity() == Approx(1.0).margin(1e-10));
    rho.validate_positive();
}

TEST_CASE("partial trace of a product state returns the marginal exactly", "[qcore]") {
    for (std::uint64_t k = 0; k < 5; ++k) {
        auto a = random_state(substream(13, 2 * k), FactorShape{2});
        auto b = random_state(substream(13, 2 * k + 1), FactorShape{3});
        auto joint = pure_density(tensor_product(a, b));
        auto red_a = partial_trace(joint, {0});
        auto expect_a = pure_density(a);
        REQUIRE((red_a.mat() - expect_a.mat()).cwiseAbs().maxCoeff() < 1e-10);
        auto red_b = partial_trace(joint, {1});
        REQUIRE((red_b.mat() - pure_density(b).mat()).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("partial trace of a Bell state is maximally mixed", "[qcore]") {
    const double r = 1.0 / std::sqrt(2.0);
    StateVector bell({cx(r, 0), cx(0, 0), cx(0, 0), cx(r, 0)}, FactorShape{2, 2});
    for (std::size_t f : {std::size_t{0}, std::size_t{1}}) {
        auto red = partial_trace(pure_density(bell), {f});
        REQUIRE(std::abs(red.entry(0, 0) - cx(0.5, 0)) < 1e-12);
        REQUIRE(std::abs(red.entry(1, 1) - cx(0.5, 0)) < 1e-12);
        REQUIRE(std::abs(red.entry(0, 1)) < 1e-12);
    }
    REQUIRE_THROWS_AS(partial_trace(pure_density(bell), {0, 1}), std::invalid_argument);
    REQUIRE_THROWS_AS(partial_trace(pure_density(bell), {}), std::invalid_argument);
}

TEST_CASE("reduced spin matrix carries the environment overlap on off-diagonals", "[qcore]") {
    // |Psi> = alpha |0>|e+> + beta |1>|e->  with  <e-|e+> = s.
    const cx alpha(0.6, 0.2), beta(0.3, -0.695);
    const double anorm = std::sqrt(std::norm(alpha) + std::norm(beta));
    const cx a = alpha / anorm, b = beta / anorm;
    const cx s(0.42, -0.17);
    const double perp = std::sqrt(1.0 - std::norm(s));
    // e+ = (1,0,0), e- = (conj(s), perp, 0) so that <e-|e+> = s.
    std::vector<cx> amps(6, cx(0, 0));
    amps[0] = a;                 // |0>|0>
    amps[3] = b * std::conj(s);  // |1>|0>
    amps[4] = b * perp;          // |1>|1>
    StateVector joint(amps, FactorShape{2, 3});
    auto red = partial_trace(pure_density(joint), {0});
    REQUIRE(std::abs(red.entry(0, 0) - cx(std::norm(a), 0)) < 1e-12);
    REQUIRE(std::abs(red.entry(1, 1) - cx(std::norm(b), 0)) < 1e-12);
    REQUIRE(std::abs(red.entry(0, 1) - a * std::conj(b) * s) < 1e-12);
    REQUIRE(std::abs(red.entry(1, 0) - std::conj(a) * b * std::conj(s)) < 1e-12);
}

TEST_CASE("superposition versus mixture expectation values", "[qcore]") {
    const double hbar = constants::hbar;
    const double r = 1.0 / std::sqrt(2.0);
    auto sx = Operator::whole(sx_matrix(hbar), FactorShape{2});
    auto sz = Operator::whole(sz_matrix(hbar), FactorShape{2});

    auto rho_pure = pure_density(two_level(r, r));
    Eigen::MatrixXcd mix(2, 2);
    mix << 0.5, 0.0, 0.0, 0.5;
    DensityMatrix rho_mix(mix, FactorShape{2});

    REQUIRE(std::abs(expectation(sx, rho_mix)) < 1e-25 * hbar);
    REQUIRE(expectation(sx, rho_pure).real() == Approx(0.5 * hbar).epsilon(1e-12));
    REQUIRE(std::abs(expectation(sz, rho_pure)) < 1e-12 * hbar);
    REQUIRE(std::abs(expectation(sz, rho_mix)) < 1e-12 * hbar);

    // General amplitudes: <S_x> on the superposition is hbar Re(alpha conj(beta)).
    const cx al(0.5, 0.3), be(0.4, -0.2);
    const double n = std::sqrt(std::norm(al) + std::norm(be));
    auto rho_ab = pure_density(two_level(al / n, be / n));
    REQUIRE(expectation(sx, rho_ab).real() ==
            Approx(hbar * std::real((al / n) * std::conj(be / n))).epsilon(1e-12));

    auto id = Operator::whole(Eigen::MatrixXcd::Identity(2, 2), FactorShape{2});
    REQUIRE(expectation(id, rho_ab).real() == Approx(1.0).margin(1e-12));
}

TEST_CASE("expectation of a factor-local operator matches its embedding", "[qcore]") {
    auto g = substream(14, 0);
    auto psi = random_state(g, FactorShape{2, 3, 2});
    auto rho = pure_density(psi);
    Eigen::MatrixXcd block(3, 3);
    block << 1.0, cx(0, 0.5), 0.2,
             cx(0, -0.5), -0.3, cx(0.1, 0.1),
             0.2, cx(0.1, -0.1), 2.0;
    auto local = Operator::on_factor(block, 1, psi.shape());
    auto whole = Operator::whole(local.embedded(), psi.shape());
    REQUIRE(std::abs(expectation(local, rho) - expectation(whole, rho)) < 1e-12);

    // Same number via the stepwise route: trace out the other factors first.
    auto red = partial_trace(rho, {1});
    auto on_red = Operator::whole(block, red.shape());
    REQUIRE(std::abs(expectation(local, rho) - expectation(on_red, red)) < 1e-12);
}

TEST_CASE("expectation is linear in the operator", "[qcore]") {
    auto g = substream(15, 0);
    auto rho = pure_density(random_state(g, FactorShape{4}));
    Eigen::MatrixXcd m1 = Eigen::MatrixXcd::Random(4, 4);
    Eigen::MatrixXcd m2 = Eigen::MatrixXcd::Random(4, 4);
    auto e = [&](const Eigen::MatrixXcd& m) {
        return expectation(Operator::whole(m, FactorShape{4}), rho);
    };
    REQUIRE(std::abs(e(m1 + 2.5 * m2) - (e(m1) + 2.5 * e(m2))) < 1e-12);
}

TEST_CASE("schmidt decomposition of product and Bell states", "[qcore]") {
    auto a = random_state(substream(16, 0), FactorShape{2});
    auto b = random_state(substream(16, 1), FactorShape{3});
    auto sd = schmidt_decompose(tensor_product(a, b), {0});
    REQUIRE(sd.coefficients[0] == Approx(1.0).margin(1e-10));
    for (std::size_t k = 1; k < sd.coefficients.size(); ++k)
        REQUIRE(sd.coefficients[k] < 1e-10);

    const double r = 1.0 / std::sqrt(2.0);
    StateVector bell({cx(r, 0), cx(0, 0), cx(0, 0), cx(r, 0)}, FactorShape{2, 2});
    auto sb = schmidt_decompose(bell, {0});
    REQUIRE(sb.coefficients.size() == 2);
    REQUIRE(sb.coefficients[0] == Approx(r).margin(1e-10));
    REQUIRE(sb.coefficients[1] == Approx(r).margin(1e-10));
}

TEST_CASE("schmidt coefficients match a hand-solved Gram spectrum", "[qcore]") {
    // Independent oracle for a 2x3 state: singular values from the closed-form
    // eigenvalues of the 2x2 Gram matrix M M^dagger.
    auto psi = random_state(substream(17, 3), FactorShape{2, 3});
    Eigen::Matrix<cx, 2, 3> m;
    for (std::size_t i = 0; i < 6; ++i)
        m(static_cast<Eigen::Index>(i / 3), static_cast<Eigen::Index>(i % 3)) = psi[i];
    Eigen::Matrix<cx, 2, 2> gram = m * m.adjoint();
    const double tr = gram.trace().real();
    const double det = (gram(0, 0) * gram(1, 1) - gram(0, 1) * gram(1, 0)).real();
    const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
    const double l0 = std::sqrt((tr + disc) / 2.0), l1 = std::sqrt(std::max(0.0, (tr - disc) / 2.0));

    auto sd = schmidt_decompose(psi, {0});
    REQUIRE(sd.coefficients[0] == Approx(l0).margin(1e-10));
    REQUIRE(sd.coefficients[1] == Approx(l1).margin(1e-10));
    double sum2 = 0.0;
    for (double c : sd.coefficients) sum2 += c * c;
    REQUIRE(sum2 == Approx(1.0).margin(1e-10));
}

TEST_CASE("schmidt reconstruction reproduces the state, interleaved split included", "[qcore]") {
    for (auto left : std::vector<std::vector<std::size_t>>{{0}, {1}, {0, 2}}) {
        auto psi = random_state(substream(18, left.size()), FactorShape{2, 3, 2});
        auto sd = schmidt_decompose(psi, left);
        const detail::IndexSplit split(psi.shape(), left);
        std::vector<cx> rebuilt(psi.dim(), cx(0, 0));
        for (std::size_t k = 0; k < sd.coefficients.size(); ++k)
            for (std::size_t i = 0; i < psi.dim(); ++i)
                rebuilt[i] += sd.coefficients[k] * sd.left[k][split.group_of[i]] *
                              sd.right[k][split.rest_of[i]];
        cx overlap(0, 0);
        for (std::size_t i = 0; i < psi.dim(); ++i) overlap += std::conj(rebuilt[i]) * psi[i];
        REQUIRE(std::abs(std::abs(overlap) - 1.0) < tol::schmidt_reconstruct);

        // Orthonormality of both bases.
        for (std::size_t k = 0; k < sd.left.size(); ++k)
            for (std::size_t l = 0; l <= k; ++l) {
                const double expect = (k == l) ? 1.0 : 0.0;
                REQUIRE(std::abs(inner(sd.left[k], sd.left[l]) - cx(expect, 0)) < 1e-10);
                REQUIRE(std::abs(inner(sd.right[k], sd.right[l]) - cx(expect, 0)) < 1e-10);
            }
    }
}

TEST_CASE("coherence measure: diagonal, equal superposition, and linear scaling", "[qcore]") {
    Eigen::MatrixXcd diag(2, 2);
    diag << 0.3, 0.0, 0.0, 0.7;
    REQUIRE(coherence_offdiag(DensityMatrix(diag, FactorShape{2})) == 0.0);

    const double r = 1.0 / std::sqrt(2.0);
    auto rho = pure_density(two_level(r, r));
    REQUIRE(coherence_offdiag(rho) == Approx(1.0).margin(1e-12));

    for (double s : {0.0, 0.25, 0.8, 1.0}) {
        Eigen::MatrixXcd damped = rho.mat();
        damped(0, 1) *= s;
        damped(1, 0) *= s;
        DensityMatrix rd(damped, FactorShape{2});
        REQUIRE(coherence_offdiag(rd) == Approx(s * coherence_offdiag(rho)).margin(1e-12));
    }
}

TEST_CASE("coherence measure in an explicit basis and its orthonormality guard", "[qcore]") {
    const double r = 1.0 / std::sqrt(2.0);
    auto rho = pure_density(two_level(r, r));
    // In its own eigenbasis a pure state is diagonal.
    std::vector<StateVector> basis{two_level(r, r), two_level(r, -r)};
    REQUIRE(coherence_offdiag(rho, basis) == Approx(0.0).margin(1e-10));

    std::vector<StateVector> skew{two_level(1, 0), two_level(r, r)};
    REQUIRE_THROWS_AS(coherence_offdiag(rho, skew), std::invalid_argument);
}

TEST_CASE("unitary application preserves norm and composes with evolution", "[qcore]") {
    auto psi = random_state(substream(19, 0), FactorShape{2, 2});
    Eigen::MatrixXcd h(2, 2);
    h << 1.0, cx(0, 0.4), cx(0, -0.4), -0.7;
    auto u = hamiltonian_evolution(Operator::on_factor(h, 1, psi.shape()), 0.9);
    auto evolved = apply_unitary(u, psi);
    REQUIRE(evolved.dim() == psi.dim());
    // Forward then backward returns the ray.
    auto back = apply_unitary(hamiltonian_evolution(Operator::on_factor(h, 1, psi.shape()), -0.9),
                              evolved);
    REQUIRE(equal_up_to_phase(back, psi));
}
