// nogo.hpp: numerical witness that a linear evolution cannot produce definite
// outcomes under a tolerant measurement scheme. The joint space is spin times
// an apparatus register whose basis halves carry pointer readings +1 and -1;
// branch membership is a pointer-expectation window. Includes the
// impure-initial-state variant run through purification.
#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "decolab/qcore.hpp"
#include "decolab/rng.hpp"

namespace decolab {

struct TolerantScheme {
    std::size_t apparatus_dim = 0;  // even; first half reads `up', second `down'
    std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)> evolution;
    bool unitary = true;            // when set, images must preserve the norm
    std::vector<Eigen::VectorXcd> ready_states;  // orthonormal apparatus states
    double window = 0.1;            // pointer expectation half-width
    double epsilon = 0.01;          // admissibility tolerance, in (0,1)

    std::size_t joint_dim() const { return 2 * apparatus_dim; }

    void validate() const {
        if (apparatus_dim < 2 || apparatus_dim % 2 != 0)
            throw std::invalid_argument("TolerantScheme: apparatus_dim must be even and >= 2");
        if (!evolution) throw std::invalid_argument("TolerantScheme: evolution not set");
        if (ready_states.empty())
            throw std::invalid_argument("TolerantScheme: at least one ready microstate required");
        if (!(window > 0.0 && window < 1.0) || !(epsilon > 0.0 && epsilon < 1.0))
            throw std::invalid_argument("TolerantScheme: window and epsilon must lie in (0,1)");
        for (std::size_t i = 0; i < ready_states.size(); ++i) {
            if (ready_states[i].size() != static_cast<Eigen::Index>(apparatus_dim))
                throw std::invalid_argument("TolerantScheme: ready state dimension mismatch");
            for (std::size_t j = 0; j <= i; ++j) {
                const cx ov = ready_states[j].dot(ready_states[i]);
                const double target = i == j ? 1.0 : 0.0;
                if (std::abs(ov - cx(target, 0.0)) > 1e-10)
                    throw std::invalid_argument("TolerantScheme: ready states must be orthonormal");
            }
        }
    }

    // |spin> (0 up, 1 down) tensor ready microstate, spin factor slowest.
    Eigen::VectorXcd joint_input(int spin, std::size_t ready_index) const {
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(joint_dim()));
        v.segment(static_cast<Eigen::Index>(spin) * static_cast<Eigen::Index>(apparatus_dim),
                  static_cast<Eigen::Index>(apparatus_dim)) = ready_states.at(ready_index);
        return v;
    }

    double pointer_expectation(const Eigen::VectorXcd& psi) const {
        const std::size_t half = apparatus_dim / 2;
        double plus = 0.0, total = 0.0;
        for (Eigen::Index k = 0; k < psi.size(); ++k) {
            const double w = std::norm(psi(k));
            const std::size_t j = static_cast<std::size_t>(k) % apparatus_dim;
            total += w;
            if (j < half) plus += w;
        }
        if (!(total > 0.0))
            throw std::invalid_argument("pointer_expectation: zero-norm state");
        return (2.0 * plus - total) / total;
    }

    bool up_branch(const Eigen::VectorXcd& psi) const {
        return std::abs(pointer_expectation(psi) - 1.0) <= window;
    }
    bool down_branch(const Eigen::VectorXcd& psi) const {
        return std::abs(pointer_expectation(psi) + 1.0) <= window;
    }
};

// Minimum pairwise distance between sampled up-branch and down-branch states;
// the scheme is admissible when this stays above sqrt(2) - epsilon. Samples
// are normalized before comparison.
inline double non_ambiguity_margin(const TolerantScheme& scheme,
                                   const std::vector<Eigen::VectorXcd>& samples_u,
                                   const std::vector<Eigen::VectorXcd>& samples_d) {
    (void)scheme;
    if (samples_u.empty() || samples_d.empty())
        throw std::invalid_argument("non_ambiguity_margin: sample sets must be non-empty");
    double best = std::numeric_limits<double>::infinity();
    for (const auto& u : samples_u)
        for (const auto& d : samples_d) {
            const double nu = u.norm(), nd = d.norm();
            if (!(nu > 0.0) || !(nd > 0.0))
                throw std::invalid_argument("non_ambiguity_margin: zero-norm sample");
            best = std::min(best, (u / nu - d / nd).norm());
        }
    return best;
}

struct WitnessReport {
    double distance = 0.0;        // || Psi_aft - down image ||
    bool bound_violated = false;  // distance <= 1 + 1e-9 with linearity intact
    bool linearity_ok = false;
    double linearity_residual = 0.0;
    double max_epsilon = 0.0;     // largest tolerance the contradiction covers
    double window = 0.0;          // echoed branch-window parameter
    std::size_t ready_index = 0;
    std::size_t purified_dim = 0;       // nonzero for the impure variant
    bool superposition_ok = true;       // equal spin weights in the initial state
};

namespace detail {

// Calibration sweep: every ready microstate must evolve into its branch, with
// the norm preserved when the scheme is flagged unitary. Returns the images.
inline void calibrate(const TolerantScheme& s, std::vector<Eigen::VectorXcd>& up_images,
                      std::vector<Eigen::VectorXcd>& down_images) {
    for (std::size_t i = 0; i < s.ready_states.size(); ++i) {
        Eigen::VectorXcd u = s.evolution(s.joint_input(0, i));
        Eigen::VectorXcd d = s.evolution(s.joint_input(1, i));
        if (s.unitary && (std::abs(u.norm() - 1.0) > 1e-10 || std::abs(d.norm() - 1.0) > 1e-10))
            throw std::runtime_error("impossibility_witness: unitary scheme does not preserve norm");
        if (!s.up_branch(u) || s.down_branch(u) || !s.down_branch(d) || s.up_branch(d))
            throw std::runtime_error("impossibility_witness: calibration failure on microstate " +
                                     std::to_string(i));
        up_images.push_back(std::move(u));
        down_images.push_back(std::move(d));
    }
}

}  // namespace detail

// The theorem's chain on microstate k: calibrate, probe linearity on a
// non-unit three-point superposition, evolve the equal spin superposition and
// measure its distance to the down-branch image. A calibrated linear scheme
// always lands at distance <= 1, contradicting admissibility for any
// epsilon < sqrt(2) - 1; the report never certifies the contradiction when the
// linearity probe fails.
inline WitnessReport impossibility_witness(const TolerantScheme& scheme, std::size_t k = 0) {
    scheme.validate();
    if (k >= scheme.ready_states.size())
        throw std::invalid_argument("impossibility_witness: ready index out of range");

    std::vector<Eigen::VectorXcd> up_images, down_images;
    detail::calibrate(scheme, up_images, down_images);

    WitnessReport rep;
    rep.window = scheme.window;
    rep.ready_index = k;

    const Eigen::VectorXcd x = scheme.joint_input(0, k);
    const Eigen::VectorXcd y = scheme.joint_input(1, k);
    const cx alpha(0.6, 0.0), beta(0.0, 0.3);
    const Eigen::VectorXcd probe = scheme.evolution(alpha * x + beta * y);
    rep.linearity_residual = (probe - alpha * up_images[k] - beta * down_images[k]).norm();
    rep.linearity_ok = rep.linearity_residual <= 1e-8;

    const Eigen::VectorXcd psi_aft = scheme.evolution((x + y) / std::sqrt(2.0));
    rep.distance = (psi_aft - down_images[k]).norm();
    rep.bound_violated = rep.linearity_ok && rep.distance <= 1.0 + 1e-9;
    rep.max_epsilon = rep.bound_violated ? std::sqrt(2.0) - rep.distance : 0.0;
    return rep;
}

// Impure-initial-state variant: rho0 is a joint density matrix; its
// purification column matrix Phi (one ancilla axis per retained eigenvector)
// is evolved columnwise and compared against the evolved, renormalized
// down-spin component. The bound needs the equal spin weight structure
// tr(P_up rho0) = tr(P_down rho0) = 1/2, which is checked and reported.
inline WitnessReport impure_variant(const TolerantScheme& scheme, const Eigen::MatrixXcd& rho0,
                                    std::size_t max_purified_dim = 4096) {
    scheme.validate();
    const Eigen::Index n = static_cast<Eigen::Index>(scheme.joint_dim());
    if (rho0.rows() != n || rho0.cols() != n)
        throw std::invalid_argument("impure_variant: rho0 dimension mismatch");
    const double scale = rho0.cwiseAbs().maxCoeff();
    if ((rho0 - rho0.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * std::max(scale, 1.0))
        throw std::invalid_argument("impure_variant: rho0 must be Hermitian");
    if (std::abs(rho0.trace() - cx(1.0, 0.0)) > 1e-8)
        throw std::invalid_argument("impure_variant: rho0 must have unit trace");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es((rho0 + rho0.adjoint()) / 2.0);
    if (es.eigenvalues().minCoeff() < -1e-10)
        throw std::invalid_argument("impure_variant: rho0 must be positive semidefinite");

    std::vector<Eigen::Index> kept;
    for (Eigen::Index i = 0; i < n; ++i)
        if (es.eigenvalues()(i) > 1e-12) kept.push_back(i);
    const std::size_t rank = kept.size();
    if (scheme.joint_dim() * rank > max_purified_dim)
        throw std::invalid_argument("impure_variant: purification exceeds the dimension cap");

    Eigen::MatrixXcd phi(n, static_cast<Eigen::Index>(rank));
    for (std::size_t c = 0; c < rank; ++c)
        phi.col(static_cast<Eigen::Index>(c)) =
            std::sqrt(es.eigenvalues()(kept[c])) * es.eigenvectors().col(kept[c]);

    const Eigen::Index half = n / 2;
    const double up_weight = phi.topRows(half).squaredNorm();
    const double down_weight = phi.bottomRows(half).squaredNorm();

    WitnessReport rep = impossibility_witness(scheme, 0);
    rep.purified_dim = scheme.joint_dim() * rank;
    rep.superposition_ok = std::abs(up_weight - 0.5) <= 1e-10 && std::abs(down_weight - 0.5) <= 1e-10;
    if (!(down_weight > 1e-12))
        throw std::invalid_argument("impure_variant: rho0 has no down-spin component");

    Eigen::MatrixXcd phi_aft(n, static_cast<Eigen::Index>(rank));
    Eigen::MatrixXcd down_aft(n, static_cast<Eigen::Index>(rank));
    for (std::size_t c = 0; c < rank; ++c) {
        const Eigen::Index ci = static_cast<Eigen::Index>(c);
        phi_aft.col(ci) = scheme.evolution(phi.col(ci));
        Eigen::VectorXcd down_part = phi.col(ci);
        down_part.head(half).setZero();
        down_aft.col(ci) = scheme.evolution(down_part);
    }
    down_aft /= std::sqrt(down_weight);

    rep.distance = (phi_aft - down_aft).norm();
    rep.bound_violated = rep.linearity_ok && rep.superposition_ok && rep.distance <= 1.0 + 1e-9;
    rep.max_epsilon = rep.bound_violated ? std::sqrt(2.0) - rep.distance : 0.0;
    return rep;
}

namespace detail {

inline Eigen::MatrixXcd random_gaussian(std::size_t rows, std::size_t cols, std::mt19937_64& g) {
    Eigen::MatrixXcd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index c = 0; c < m.cols(); ++c)
        for (Eigen::Index r = 0; r < m.rows(); ++r) m(r, c) = cx(normal_unit(g), normal_unit(g));
    return m;
}

inline Eigen::MatrixXcd random_isometry(std::size_t rows, std::size_t cols, std::mt19937_64& g) {
    const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(random_gaussian(rows, cols, g));
    return qr.householderQ() * Eigen::MatrixXcd::Identity(static_cast<Eigen::Index>(rows),
                                                          static_cast<Eigen::Index>(cols));
}

// Completes the orthonormal columns of `fixed` to a full unitary, keeping the
// fixed columns bit-exact in front.
inline Eigen::MatrixXcd complete_unitary(const Eigen::MatrixXcd& fixed, std::mt19937_64& g) {
    const Eigen::Index dim = fixed.rows();
    Eigen::MatrixXcd full(dim, dim);
    full.leftCols(fixed.cols()) = fixed;
    full.rightCols(dim - fixed.cols()) = random_gaussian(
        static_cast<std::size_t>(dim), static_cast<std::size_t>(dim - fixed.cols()), g);
    const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(full);
    Eigen::MatrixXcd q = qr.householderQ();
    q.leftCols(fixed.cols()) = fixed;
    return q;
}

}  // namespace detail

// Random calibrated scheme: orthonormal ready microstates, random orthonormal
// branch images inside the two pointer half-subspaces, and the unitary
// completion mapping one onto the other.
inline TolerantScheme make_random_scheme(std::size_t apparatus_dim, std::size_t n_ready,
                                         std::mt19937_64& g, double window = 0.1,
                                         double epsilon = 0.01) {
    // Each branch subspace has dimension apparatus_dim (half the pointer
    // positions, both spins), which bounds the number of calibrated microstates.
    if (apparatus_dim < 2 || apparatus_dim % 2 != 0 || n_ready < 1 || n_ready > apparatus_dim)
        throw std::invalid_argument(
            "make_random_scheme: need even apparatus_dim and 1 <= n_ready <= apparatus_dim");
    TolerantScheme s;
    s.apparatus_dim = apparatus_dim;
    s.window = window;
    s.epsilon = epsilon;

    const Eigen::MatrixXcd ready = detail::random_isometry(apparatus_dim, n_ready, g);
    for (std::size_t i = 0; i < n_ready; ++i)
        s.ready_states.push_back(ready.col(static_cast<Eigen::Index>(i)));

    const std::size_t dim = s.joint_dim();
    const std::size_t half = apparatus_dim / 2;
    // Branch subspaces: apparatus index below/above half, either spin.
    const Eigen::MatrixXcd up_small = detail::random_isometry(apparatus_dim, n_ready, g);
    const Eigen::MatrixXcd down_small = detail::random_isometry(apparatus_dim, n_ready, g);
    Eigen::MatrixXcd inputs(static_cast<Eigen::Index>(dim), 2 * static_cast<Eigen::Index>(n_ready));
    Eigen::MatrixXcd outputs(static_cast<Eigen::Index>(dim), 2 * static_cast<Eigen::Index>(n_ready));
    inputs.setZero();
    outputs.setZero();
    for (std::size_t i = 0; i < n_ready; ++i) {
        inputs.col(static_cast<Eigen::Index>(i)) = s.joint_input(0, i);
        inputs.col(static_cast<Eigen::Index>(n_ready + i)) = s.joint_input(1, i);
        for (std::size_t r = 0; r < apparatus_dim; ++r) {
            // Row r of the small isometries maps to (spin = r / half, offset r % half).
            const std::size_t spin = r / half;
            const Eigen::Index up_row = static_cast<Eigen::Index>(spin * apparatus_dim + r % half);
            const Eigen::Index down_row =
                static_cast<Eigen::Index>(spin * apparatus_dim + half + r % half);
            outputs(up_row, static_cast<Eigen::Index>(i)) =
                up_small(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i));
            outputs(down_row, static_cast<Eigen::Index>(n_ready + i)) =
                down_small(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i));
        }
    }
    const Eigen::MatrixXcd in_full = detail::complete_unitary(inputs, g);
    const Eigen::MatrixXcd out_full = detail::complete_unitary(outputs, g);
    const Eigen::MatrixXcd u = out_full * in_full.adjoint();
    s.evolution = [u](const Eigen::VectorXcd& v) { return Eigen::VectorXcd(u * v); };
    return s;
}

}  // namespace decolab
