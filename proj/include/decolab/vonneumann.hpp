// vonneumann.hpp: premeasurement with a pointer apparatus, Born-rule
// projective sampling, and robust-pointer-basis diagnostics.
//
// The pointer shift is realized as a cyclic translation on the finite grid;
// construction validates that no branch wraps, so the periodic boundary is
// never observable in a valid run.
#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "decolab/qcore.hpp"

namespace decolab {

// 1-D position eigenbasis for a pointer: uniform grid, a ready position, and
// the accumulated coupling g*tau (so eigenvalue * coupling is a position shift).
struct PointerApparatus {
    std::size_t num_points = 0;
    double x_first = 0.0;
    double spacing = 0.0;    // m
    std::size_t ready_index = 0;
    double coupling = 0.0;   // g*tau

    void validate() const {
        if (num_points < 1) throw std::invalid_argument("PointerApparatus: empty grid");
        if (!(spacing > 0.0)) throw std::invalid_argument("PointerApparatus: spacing must be positive");
        if (ready_index >= num_points) throw std::invalid_argument("PointerApparatus: ready index off grid");
    }

    double position(std::size_t i) const { return x_first + static_cast<double>(i) * spacing; }
    double ready_position() const { return position(ready_index); }
};

struct MeasurementRecord {
    double eigenvalue;
    StateVector collapsed_state;
    double probability;
};

namespace detail {

// Eigendecomposition with degenerate eigenvalues grouped: values within
// 1e-9 * spectral range share an eigenspace.
struct GroupedSpectrum {
    Eigen::VectorXd values;
    Eigen::MatrixXcd vectors;
    std::vector<std::vector<Eigen::Index>> groups;
    std::vector<double> group_values;
};

inline GroupedSpectrum decompose_grouped(const Eigen::MatrixXcd& m) {
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale)
        throw std::invalid_argument("decompose_grouped: matrix not Hermitian");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
    GroupedSpectrum out;
    out.values = es.eigenvalues();
    out.vectors = es.eigenvectors();
    const double range = out.values.maxCoeff() - out.values.minCoeff();
    const double tol = 1e-9 * std::max(range, 1e-300);
    for (Eigen::Index i = 0; i < out.values.size(); ++i) {
        if (out.groups.empty() || out.values(i) - out.values(out.groups.back().front()) > tol)
            out.groups.emplace_back();
        out.groups.back().push_back(i);
    }
    for (const auto& g : out.groups) {
        double mean = 0.0;
        for (Eigen::Index i : g) mean += out.values(i);
        out.group_values.push_back(mean / static_cast<double>(g.size()));
    }
    return out;
}

}  // namespace detail

// For input sum_k c_k |a_k>, produces sum_k c_k |a_k> (x) |X0 + a_k g tau>.
// The shift is snapped to the nearest grid point; snapping beyond spacing/10 or
// off the grid is an error.
inline StateVector premeasure(const StateVector& system, const PointerApparatus& apparatus,
                              const Operator& observable) {
    apparatus.validate();
    if (observable.shape() != system.shape())
        throw std::invalid_argument("premeasure: observable shape mismatch");
    const Eigen::MatrixXcd& obs =
        observable.acts_on_whole() ? observable.block() : observable.embedded();
    const auto spec = detail::decompose_grouped(obs);

    const std::size_t ds = system.dim();
    const std::size_t m = apparatus.num_points;
    const Eigen::VectorXcd coeff = spec.vectors.adjoint() * system.vec();

    std::vector<cx> joint(ds * m, cx(0.0, 0.0));
    for (Eigen::Index k = 0; k < spec.values.size(); ++k) {
        const double shift = spec.values(k) * apparatus.coupling;
        const double steps = shift / apparatus.spacing;
        const long snapped = std::lround(steps);
        if (std::abs(steps - static_cast<double>(snapped)) > 0.1)
            throw std::invalid_argument("premeasure: pointer shift does not snap to the grid");
        const long target = static_cast<long>(apparatus.ready_index) + snapped;
        if (target < 0 || target >= static_cast<long>(m))
            throw std::out_of_range("premeasure: shifted pointer position leaves the grid");
        for (std::size_t s = 0; s < ds; ++s)
            joint[s * m + static_cast<std::size_t>(target)] +=
                coeff(k) * spec.vectors(static_cast<Eigen::Index>(s), k);
    }
    return StateVector(std::move(joint), system.shape().concat(FactorShape{m}));
}

// Projective measurement: eigenvalue drawn with the squared amplitude of its
// eigenspace, state replaced by the normalized projection.
inline MeasurementRecord born_sample(const StateVector& state, const Operator& observable,
                                     std::mt19937_64& rng) {
    if (observable.shape() != state.shape())
        throw std::invalid_argument("born_sample: observable shape mismatch");
    const Eigen::MatrixXcd& obs =
        observable.acts_on_whole() ? observable.block() : observable.embedded();
    const auto spec = detail::decompose_grouped(obs);
    const Eigen::VectorXcd coeff = spec.vectors.adjoint() * state.vec();

    std::vector<double> probs(spec.groups.size(), 0.0);
    for (std::size_t g = 0; g < spec.groups.size(); ++g)
        for (Eigen::Index i : spec.groups[g]) probs[g] += std::norm(coeff(i));

    const double u = uniform_unit(rng);
    double acc = 0.0;
    std::size_t chosen = probs.size() - 1;
    for (std::size_t g = 0; g < probs.size(); ++g) {
        acc += probs[g];
        if (u <= acc) {
            chosen = g;
            break;
        }
    }

    Eigen::VectorXcd proj = Eigen::VectorXcd::Zero(coeff.size());
    for (Eigen::Index i : spec.groups[chosen]) proj += coeff(i) * spec.vectors.col(i);
    proj /= std::sqrt(std::max(probs[chosen], 1e-300));
    return MeasurementRecord{
        spec.group_values[chosen],
        StateVector(std::vector<cx>(proj.data(), proj.data() + proj.size()), state.shape()),
        probs[chosen]};
}

// Outcome probabilities over the full grouped spectrum, in spectrum order.
inline std::vector<std::pair<double, double>> outcome_distribution(const StateVector& state,
                                                                   const Operator& observable) {
    const Eigen::MatrixXcd& obs =
        observable.acts_on_whole() ? observable.block() : observable.embedded();
    const auto spec = detail::decompose_grouped(obs);
    const Eigen::VectorXcd coeff = spec.vectors.adjoint() * state.vec();
    std::vector<std::pair<double, double>> out;
    for (std::size_t g = 0; g < spec.groups.size(); ++g) {
        double p = 0.0;
        for (Eigen::Index i : spec.groups[g]) p += std::norm(coeff(i));
        out.emplace_back(spec.group_values[g], p);
    }
    return out;
}

struct RobustPointerReport {
    bool commutes = false;
    // h_k with H = sum_k h_k |p_k><p_k| in the pointer eigenbasis; present only
    // when the operators commute. basis columns are the |p_k> used (within a
    // degenerate pointer eigenspace, rotated to diagonalize H).
    std::optional<std::vector<double>> coefficients;
    Eigen::MatrixXcd basis;
};

inline RobustPointerReport robust_pointer_check(const Operator& h_int, const Operator& pointer_obs) {
    if (h_int.shape() != pointer_obs.shape() || h_int.acts_on_whole() != pointer_obs.acts_on_whole() ||
        (!h_int.acts_on_whole() && h_int.factor() != pointer_obs.factor()))
        throw std::invalid_argument("robust_pointer_check: operators must act on the same factor");
    const Eigen::MatrixXcd& h = h_int.block();
    const Eigen::MatrixXcd& p = pointer_obs.block();

    RobustPointerReport report;
    report.commutes = (h * p - p * h).cwiseAbs().maxCoeff() < 1e-10;
    if (!report.commutes) return report;

    auto spec = detail::decompose_grouped(p);
    Eigen::MatrixXcd basis(p.rows(), p.cols());
    std::vector<double> hk;
    Eigen::Index col = 0;
    for (const auto& group : spec.groups) {
        Eigen::MatrixXcd sub(p.rows(), static_cast<Eigen::Index>(group.size()));
        for (std::size_t j = 0; j < group.size(); ++j) sub.col(static_cast<Eigen::Index>(j)) = spec.vectors.col(group[j]);
        // Simultaneous diagonalization: H restricted to the eigenspace.
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sub.adjoint() * h * sub);
        const Eigen::MatrixXcd rotated = sub * es.eigenvectors();
        for (Eigen::Index j = 0; j < rotated.cols(); ++j) {
            basis.col(col++) = rotated.col(j);
            hk.push_back(es.eigenvalues()(j));
        }
    }
    report.coefficients = std::move(hk);
    report.basis = std::move(basis);
    return report;
}

}  // namespace decolab
