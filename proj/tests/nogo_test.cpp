#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "decolab/nogo.hpp"
#include "decolab/rng.hpp"

using decolab::cx;
using decolab::impossibility_witness;
using decolab::impure_variant;
using decolab::make_random_scheme;
using decolab::non_ambiguity_margin;
using decolab::TolerantScheme;
using decolab::WitnessReport;

namespace {

// A calibrated unitary scheme with orthogonal branch images always lands the
// superposition at this distance from the down image.
const double kProofDistance = std::sqrt(2.0 - std::sqrt(2.0));

Eigen::VectorXcd basis_vec(std::size_t dim, std::size_t k) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
    v(static_cast<Eigen::Index>(k)) = cx(1.0, 0.0);
    return v;
}

// Two pointer cells, one ready microstate: |up,ready> -> |up pointer cell>,
// |down,ready> -> |down,down pointer cell>, filled to a permutation.
TolerantScheme tiny_scheme() {
    TolerantScheme s;
    s.apparatus_dim = 2;
    s.ready_states = {basis_vec(2, 0)};
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(4, 4);
    u(0, 0) = 1.0;
    u(3, 2) = 1.0;
    u(1, 1) = 1.0;
    u(2, 3) = 1.0;
    s.evolution = [u](const Eigen::VectorXcd& v) { return Eigen::VectorXcd(u * v); };
    return s;
}

Eigen::VectorXcd random_ready_combo(const TolerantScheme& s, std::mt19937_64& g) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(s.apparatus_dim));
    for (const auto& r : s.ready_states)
        v += cx(decolab::normal_unit(g), decolab::normal_unit(g)) * r;
    return v / v.norm();
}

}  // namespace

TEST_CASE("non-ambiguity margin on explicit sample sets", "[nogo]") {
    const TolerantScheme s = tiny_scheme();
    const Eigen::VectorXcd e0 = basis_vec(4, 0);
    const Eigen::VectorXcd e1 = basis_vec(4, 1);

    SECTION("orthogonal unit samples sit at sqrt(2)") {
        const double m = non_ambiguity_margin(s, {e0}, {e1});
        REQUIRE(m == Catch::Approx(std::sqrt(2.0)).epsilon(0).margin(1e-12));
    }
    SECTION("a shared state collapses the margin to zero") {
        const double m = non_ambiguity_margin(s, {e0, e1}, {e1});
        REQUIRE(m == Catch::Approx(0.0).epsilon(0).margin(1e-12));
    }
    SECTION("overlap 0.1 gives sqrt(1.8)") {
        Eigen::VectorXcd d = 0.1 * e0 + std::sqrt(0.99) * e1;
        const double m = non_ambiguity_margin(s, {e0}, {d});
        REQUIRE(m == Catch::Approx(std::sqrt(1.8)).epsilon(0).margin(1e-12));
    }
    SECTION("symmetric in the two sets") {
        Eigen::VectorXcd d = 0.3 * e0 + std::sqrt(0.91) * e1;
        const std::vector<Eigen::VectorXcd> a = {e0, 2.0 * e1};
        const std::vector<Eigen::VectorXcd> b = {d};
        REQUIRE(non_ambiguity_margin(s, a, b) ==
                Catch::Approx(non_ambiguity_margin(s, b, a)).epsilon(0).margin(1e-15));
    }
    SECTION("empty or zero-norm samples are rejected") {
        const std::vector<Eigen::VectorXcd> none;
        const std::vector<Eigen::VectorXcd> some = {e0};
        const std::vector<Eigen::VectorXcd> zero = {Eigen::VectorXcd::Zero(4)};
        REQUIRE_THROWS_AS(non_ambiguity_margin(s, none, some), std::invalid_argument);
        REQUIRE_THROWS_AS(non_ambiguity_margin(s, some, none), std::invalid_argument);
        REQUIRE_THROWS_AS(non_ambiguity_margin(s, some, zero), std::invalid_argument);
    }
}

TEST_CASE("pointer expectation windows define the branches", "[nogo]") {
    TolerantScheme s = tiny_scheme();
    const Eigen::VectorXcd up_state = basis_vec(4, 2);    // spin down, up pointer cell
    const Eigen::VectorXcd down_state = basis_vec(4, 1);  // spin up, down pointer cell

    REQUIRE(s.pointer_expectation(up_state) == Catch::Approx(1.0).epsilon(0).margin(1e-15));
    REQUIRE(s.pointer_expectation(down_state) == Catch::Approx(-1.0).epsilon(0).margin(1e-15));
    REQUIRE(s.up_branch(up_state));
    REQUIRE_FALSE(s.down_branch(up_state));
    REQUIRE(s.down_branch(down_state));
    REQUIRE_FALSE(s.up_branch(down_state));

    const Eigen::VectorXcd even = (up_state + down_state) / std::sqrt(2.0);
    REQUIRE_FALSE(s.up_branch(even));
    REQUIRE_FALSE(s.down_branch(even));
    REQUIRE_THROWS_AS(s.pointer_expectation(Eigen::VectorXcd::Zero(4)), std::invalid_argument);
}

TEST_CASE("scheme validation rejects malformed inputs", "[nogo]") {
    TolerantScheme odd = tiny_scheme();
    odd.apparatus_dim = 3;
    REQUIRE_THROWS_AS(odd.validate(), std::invalid_argument);

    TolerantScheme no_ready = tiny_scheme();
    no_ready.ready_states.clear();
    REQUIRE_THROWS_AS(no_ready.validate(), std::invalid_argument);

    TolerantScheme skewed = tiny_scheme();
    skewed.ready_states = {basis_vec(2, 0), basis_vec(2, 0)};
    REQUIRE_THROWS_AS(skewed.validate(), std::invalid_argument);

    TolerantScheme wide = tiny_scheme();
    wide.window = 1.0;
    REQUIRE_THROWS_AS(wide.validate(), std::invalid_argument);

    TolerantScheme no_eps = tiny_scheme();
    no_eps.epsilon = 0.0;
    REQUIRE_THROWS_AS(no_eps.validate(), std::invalid_argument);

    REQUIRE_THROWS_AS(impossibility_witness(tiny_scheme(), 1), std::invalid_argument);
}

TEST_CASE("witness on the explicit two-cell scheme", "[nogo]") {
    const TolerantScheme s = tiny_scheme();
    const WitnessReport rep = impossibility_witness(s);

    REQUIRE(rep.linearity_ok);
    REQUIRE(rep.linearity_residual < 1e-12);
    REQUIRE(rep.distance == Catch::Approx(kProofDistance).epsilon(0).margin(1e-12));
    REQUIRE(rep.bound_violated);
    REQUIRE(rep.max_epsilon ==
            Catch::Approx(std::sqrt(2.0) - kProofDistance).epsilon(0).margin(1e-12));
    REQUIRE(rep.window == Catch::Approx(s.window).epsilon(0).margin(0));
    REQUIRE(rep.ready_index == 0);
}

TEST_CASE("calibration failures are reported as errors", "[nogo]") {
    TolerantScheme identity = tiny_scheme();
    identity.evolution = [](const Eigen::VectorXcd& v) { return v; };
    REQUIRE_THROWS_AS(impossibility_witness(identity), std::runtime_error);

    TolerantScheme inflating = tiny_scheme();
    auto base = tiny_scheme().evolution;
    inflating.evolution = [base](const Eigen::VectorXcd& v) {
        return Eigen::VectorXcd(2.0 * base(v));
    };
    REQUIRE_THROWS_AS(impossibility_witness(inflating), std::runtime_error);
}

TEST_CASE("random calibrated schemes always violate the bound", "[nogo]") {
    const std::size_t dims[] = {8, 16, 32, 64};
    for (std::size_t trial = 0; trial < 20; ++trial) {
        auto g = decolab::substream(424207, trial);
        const std::size_t da = dims[trial % 4];
        const std::size_t n_ready = 1 + trial % 3;
        const TolerantScheme s = make_random_scheme(da, n_ready, g, 0.05, 0.2);
        const WitnessReport rep = impossibility_witness(s, trial % n_ready);

        INFO("trial " << trial << " apparatus_dim " << da);
        REQUIRE(rep.linearity_ok);
        REQUIRE(rep.bound_violated);
        REQUIRE(rep.distance <= 1.0 + 1e-9);
        REQUIRE(rep.distance == Catch::Approx(kProofDistance).epsilon(0).margin(1e-9));
        REQUIRE(rep.max_epsilon == Catch::Approx(std::sqrt(2.0) - rep.distance).margin(1e-12));
        REQUIRE(rep.window == Catch::Approx(0.05).epsilon(0).margin(0));
    }
}

TEST_CASE("calibration outputs are admissible yet the witness contradicts", "[nogo]") {
    auto g = decolab::substream(424208, 0);
    const TolerantScheme s = make_random_scheme(16, 4, g);

    std::vector<Eigen::VectorXcd> ups, downs;
    for (std::size_t i = 0; i < s.ready_states.size(); ++i) {
        ups.push_back(s.evolution(s.joint_input(0, i)));
        downs.push_back(s.evolution(s.joint_input(1, i)));
    }
    const double margin = non_ambiguity_margin(s, ups, downs);
    REQUIRE(margin == Catch::Approx(std::sqrt(2.0)).epsilon(0).margin(1e-10));
    REQUIRE(margin >= std::sqrt(2.0) - s.epsilon);

    const WitnessReport rep = impossibility_witness(s);
    REQUIRE(rep.bound_violated);
    REQUIRE(rep.distance < margin - 0.5);
}

TEST_CASE("a norm-dependent phase defeats the linearity probe", "[nogo]") {
    auto g = decolab::substream(424209, 0);
    TolerantScheme s = make_random_scheme(8, 2, g);
    auto base = s.evolution;
    s.evolution = [base](const Eigen::VectorXcd& v) {
        return Eigen::VectorXcd(base(v) * std::polar(1.0, 5.0 * (v.norm() - 1.0)));
    };

    const WitnessReport rep = impossibility_witness(s);
    REQUIRE_FALSE(rep.linearity_ok);
    REQUIRE(rep.linearity_residual > 0.1);
    REQUIRE(rep.distance <= 1.0 + 1e-9);  // the raw distance still lands low
    REQUIRE_FALSE(rep.bound_violated);    // but no contradiction is certified
    REQUIRE(rep.max_epsilon == 0.0);
}

TEST_CASE("impure variant agrees with the pure witness on a pure state", "[nogo]") {
    auto g = decolab::substream(424210, 0);
    const TolerantScheme s = make_random_scheme(8, 3, g);
    const Eigen::VectorXcd psi =
        (s.joint_input(0, 0) + s.joint_input(1, 0)) / std::sqrt(2.0);
    const Eigen::MatrixXcd rho0 = psi * psi.adjoint();

    const WitnessReport pure = impossibility_witness(s, 0);
    const WitnessReport rep = impure_variant(s, rho0);
    REQUIRE(rep.superposition_ok);
    REQUIRE(rep.purified_dim == s.joint_dim());
    REQUIRE(rep.distance == Catch::Approx(pure.distance).epsilon(0).margin(1e-10));
    REQUIRE(rep.bound_violated);
}

TEST_CASE("maximally mixed apparatus register still violates the bound", "[nogo]") {
    auto g = decolab::substream(424211, 0);
    const TolerantScheme s = make_random_scheme(4, 4, g);

    Eigen::MatrixXcd spin = Eigen::MatrixXcd::Constant(2, 2, cx(0.5, 0.0));
    Eigen::MatrixXcd rho0 = Eigen::MatrixXcd::Zero(8, 8);
    for (Eigen::Index a = 0; a < 2; ++a)
        for (Eigen::Index b = 0; b < 2; ++b)
            for (Eigen::Index j = 0; j < 4; ++j) rho0(a * 4 + j, b * 4 + j) = spin(a, b) * 0.25;

    const WitnessReport rep = impure_variant(s, rho0);
    REQUIRE(rep.superposition_ok);
    REQUIRE(rep.purified_dim == 8 * 4);
    REQUIRE(rep.distance <= 1.0 + 1e-9);
    REQUIRE(rep.distance == Catch::Approx(kProofDistance).epsilon(0).margin(1e-9));
    REQUIRE(rep.bound_violated);
}

TEST_CASE("rank-2 mixtures over ready microstates violate the bound", "[nogo]") {
    for (std::size_t trial = 0; trial < 20; ++trial) {
        auto g = decolab::substream(424212, trial);
        const TolerantScheme s = make_random_scheme(8, 3, g);
        const std::size_t dim = s.joint_dim();

        Eigen::MatrixXcd rho0 = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                                       static_cast<Eigen::Index>(dim));
        const double mu[] = {0.3, 0.7};
        for (int comp = 0; comp < 2; ++comp) {
            const Eigen::VectorXcd a = random_ready_combo(s, g);
            const Eigen::VectorXcd b = random_ready_combo(s, g);
            Eigen::VectorXcd phi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
            phi.head(static_cast<Eigen::Index>(s.apparatus_dim)) = a / std::sqrt(2.0);
            phi.tail(static_cast<Eigen::Index>(s.apparatus_dim)) = b / std::sqrt(2.0);
            rho0 += mu[comp] * (phi * phi.adjoint());
        }

        const WitnessReport rep = impure_variant(s, rho0);
        INFO("trial " << trial);
        REQUIRE(rep.superposition_ok);
        REQUIRE(rep.distance <= 1.0 + 1e-9);
        REQUIRE(rep.distance == Catch::Approx(kProofDistance).epsilon(0).margin(1e-9));
        REQUIRE(rep.bound_violated);
    }
}

TEST_CASE("impure variant input checks", "[nogo]") {
    auto g = decolab::substream(424213, 0);
    const TolerantScheme s = make_random_scheme(8, 2, g);
    const std::size_t dim = s.joint_dim();
    const Eigen::Index n = static_cast<Eigen::Index>(dim);

    SECTION("dimension mismatch") {
        const Eigen::MatrixXcd bad = Eigen::MatrixXcd::Identity(n - 1, n - 1) / double(n - 1);
        REQUIRE_THROWS_AS(impure_variant(s, bad), std::invalid_argument);
    }
    SECTION("non-unit trace") {
        const Eigen::MatrixXcd bad = Eigen::MatrixXcd::Identity(n, n);
        REQUIRE_THROWS_AS(impure_variant(s, bad), std::invalid_argument);
    }
    SECTION("non-Hermitian") {
        Eigen::MatrixXcd bad = Eigen::MatrixXcd::Zero(n, n);
        bad(0, 0) = 1.0;
        bad(0, 1) = 0.5;
        REQUIRE_THROWS_AS(impure_variant(s, bad), std::invalid_argument);
    }
    SECTION("purification cap") {
        const Eigen::MatrixXcd mixed = Eigen::MatrixXcd::Identity(n, n) / double(dim);
        REQUIRE_THROWS_AS(impure_variant(s, mixed, dim * 2), std::invalid_argument);
        REQUIRE_NOTHROW(impure_variant(s, mixed, dim * dim));
    }
    SECTION("missing down-spin component") {
        const Eigen::VectorXcd up_only = s.joint_input(0, 0);
        const Eigen::MatrixXcd bad = up_only * up_only.adjoint();
        REQUIRE_THROWS_AS(impure_variant(s, bad), std::invalid_argument);
    }
    SECTION("unequal spin weights block certification") {
        Eigen::MatrixXcd rho0 = Eigen::MatrixXcd::Zero(n, n);
        const Eigen::VectorXcd up_in = s.joint_input(0, 0);
        const Eigen::VectorXcd down_in = s.joint_input(1, 0);
        rho0 += 0.8 * (up_in * up_in.adjoint());
        rho0 += 0.2 * (down_in * down_in.adjoint());
        const WitnessReport rep = impure_variant(s, rho0);
        REQUIRE_FALSE(rep.superposition_ok);
        REQUIRE_FALSE(rep.bound_violated);
        REQUIRE(rep.distance > 1.0);
    }
}
