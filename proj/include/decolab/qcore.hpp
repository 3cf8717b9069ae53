// qcore.hpp: Hilbert-space primitives. States, density matrices, tensor
// composition, partial trace, expectations, Schmidt decomposition, coherence.
//
// Amplitude layout is row-major over factor indices, first factor slowest;
// every module shares this convention. All values are immutable after
// construction and safe for concurrent reads.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "decolab/rng.hpp"

namespace decolab {

using cx = std::complex<double>;

namespace tol {
inline constexpr double norm_invariant = 1e-10;   // post-construction norm check
inline constexpr double norm_repair = 1e-6;       // renormalize below, reject beyond
inline constexpr double hermiticity = 1e-10;
inline constexpr double positivity_floor = -1e-10;
inline constexpr double schmidt_reconstruct = 1e-8;
inline constexpr double basis_orthonormal = 1e-10;
}  // namespace tol

// Ordered subsystem dimensions defining the tensor structure of a space.
class FactorShape {
public:
    FactorShape() = default;
    FactorShape(std::initializer_list<std::size_t> dims) : dims_(dims) { validate(); }
    explicit FactorShape(std::vector<std::size_t> dims) : dims_(std::move(dims)) { validate(); }

    std::size_t num_factors() const { return dims_.size(); }
    std::size_t dim(std::size_t factor) const { return dims_.at(factor); }
    const std::vector<std::size_t>& dims() const { return dims_; }

    std::size_t total() const {
        std::size_t n = 1;
        for (std::size_t d : dims_) n *= d;
        return n;
    }

    // Flat index of a multi-index; first factor slowest.
    std::size_t flatten(const std::vector<std::size_t>& idx) const {
        if (idx.size() != dims_.size()) throw std::invalid_argument("FactorShape: multi-index rank mismatch");
        std::size_t flat = 0;
        for (std::size_t f = 0; f < dims_.size(); ++f) {
            if (idx[f] >= dims_[f]) throw std::out_of_range("FactorShape: component out of range");
            flat = flat * dims_[f] + idx[f];
        }
        return flat;
    }

    void unflatten(std::size_t flat, std::vector<std::size_t>& idx) const {
        idx.resize(dims_.size());
        for (std::size_t f = dims_.size(); f-- > 0;) {
            idx[f] = flat % dims_[f];
            flat /= dims_[f];
        }
    }

    bool operator==(const FactorShape& o) const { return dims_ == o.dims_; }
    bool operator!=(const FactorShape& o) const { return !(*this == o); }

    FactorShape concat(const FactorShape& o) const {
        std::vector<std::size_t> d = dims_;
        d.insert(d.end(), o.dims_.begin(), o.dims_.end());
        return FactorShape(std::move(d));
    }

private:
    void validate() const {
        if (dims_.empty()) throw std::invalid_argument("FactorShape: no factors");
        for (std::size_t d : dims_)
            if (d < 1) throw std::invalid_argument("FactorShape: dimension < 1");
    }

    std::vector<std::size_t> dims_;
};

// Normalized pure state over a factorized space.
class StateVector {
public:
    StateVector(std::vector<cx> amps, FactorShape shape)
        : amps_(std::move(amps)), shape_(std::move(shape)) {
        if (amps_.size() != shape_.total())
            throw std::invalid_argument("StateVector: amplitude count does not match shape");
        double n2 = 0.0;
        for (const cx& a : amps_) n2 += std::norm(a);
        const double n = std::sqrt(n2);
        if (std::abs(n - 1.0) > tol::norm_repair)
            throw std::invalid_argument("StateVector: norm " + std::to_string(n) +
                                        " deviates beyond repair threshold");
        for (cx& a : amps_) a /= n;
    }

    static StateVector basis(std::size_t index, FactorShape shape) {
        std::vector<cx> a(shape.total(), cx(0.0, 0.0));
        a.at(index) = cx(1.0, 0.0);
        return StateVector(std::move(a), std::move(shape));
    }

    const FactorShape& shape() const { return shape_; }
    const std::vector<cx>& amps() const { return amps_; }
    std::size_t dim() const { return amps_.size(); }
    cx operator[](std::size_t i) const { return amps_[i]; }

    Eigen::Map<const Eigen::VectorXcd> vec() const {
        return Eigen::Map<const Eigen::VectorXcd>(amps_.data(), static_cast<Eigen::Index>(amps_.size()));
    }

private:
    std::vector<cx> amps_;
    FactorShape shape_;
};

inline cx inner(const StateVector& a, const StateVector& b) {
    if (a.shape() != b.shape()) throw std::invalid_argument("inner: shape mismatch");
    cx s(0.0, 0.0);
    for (std::size_t i = 0; i < a.dim(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

inline double fidelity(const StateVector& a, const StateVector& b) { return std::abs(inner(a, b)); }

// Physical states are rays: equality is fidelity maximized over a global phase.
inline bool equal_up_to_phase(const StateVector& a, const StateVector& b, double eps = 1e-10) {
    return 1.0 - fidelity(a, b) <= eps;
}

// Unit-trace positive Hermitian matrix over a factorized space.
class DensityMatrix {
public:
    DensityMatrix(Eigen::MatrixXcd entries, FactorShape shape)
        : mat_(std::move(entries)), shape_(std::move(shape)) {
        const auto d = static_cast<Eigen::Index>(shape_.total());
        if (mat_.rows() != d || mat_.cols() != d)
            throw std::invalid_argument("DensityMatrix: entry block does not match shape");
        const double scale = std::max(1.0, mat_.cwiseAbs().maxCoeff());
        if ((mat_ - mat_.adjoint()).cwiseAbs().maxCoeff() > tol::hermiticity * scale)
            throw std::invalid_argument("DensityMatrix: not Hermitian");
        mat_ = 0.5 * (mat_ + mat_.adjoint().eval());
        const double tr = mat_.trace().real();
        if (std::abs(tr - 1.0) > tol::norm_repair)
            throw std::invalid_argument("DensityMatrix: trace " + std::to_string(tr) +
                                        " deviates beyond repair threshold");
        mat_ /= tr;
    }

    const Eigen::MatrixXcd& mat() const { return mat_; }
    const FactorShape& shape() const { return shape_; }
    std::size_t dim() const { return static_cast<std::size_t>(mat_.rows()); }
    cx entry(std::size_t i, std::size_t j) const {
        return mat_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }

    double min_eigenvalue() const {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(mat_, Eigen::EigenvaluesOnly);
        return es.eigenvalues().minCoeff();
    }

    // Positivity is part of the type contract but costs an eigensolve, so it is
    // a separate check rather than a constructor step.
    void validate_positive() const {
        if (min_eigenvalue() < tol::positivity_floor)
            throw std::invalid_argument("DensityMatrix: negative eigenvalue beyond floor");
    }

    double purity() const { return (mat_ * mat_).trace().real(); }

private:
    Eigen::MatrixXcd mat_;
    FactorShape shape_;
};

// Square matrix acting on one factor of a space, or on the whole space.
class Operator {
public:
    static constexpr std::size_t whole_space = static_cast<std::size_t>(-1);

    static Operator on_factor(Eigen::MatrixXcd m, std::size_t factor, FactorShape shape) {
        if (factor >= shape.num_factors()) throw std::invalid_argument("Operator: factor index out of range");
        const auto d = static_cast<Eigen::Index>(shape.dim(factor));
        if (m.rows() != d || m.cols() != d)
            throw std::invalid_argument("Operator: block does not match factor dimension");
        return Operator(std::move(m), factor, std::move(shape));
    }

    static Operator whole(Eigen::MatrixXcd m, FactorShape shape) {
        const auto d = static_cast<Eigen::Index>(shape.total());
        if (m.rows() != d || m.cols() != d)
            throw std::invalid_argument("Operator: block does not match total dimension");
        return Operator(std::move(m), whole_space, std::move(shape));
    }

    bool acts_on_whole() const { return factor_ == whole_space; }
    std::size_t factor() const { return factor_; }
    const Eigen::MatrixXcd& block() const { return mat_; }
    const FactorShape& shape() const { return shape_; }

    // Full-space matrix: identity on every factor except the designated one.
    Eigen::MatrixXcd embedded() const {
        if (acts_on_whole()) return mat_;
        const std::size_t total = shape_.total();
        Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(total),
                                                      static_cast<Eigen::Index>(total));
        const std::size_t df = shape_.dim(factor_);
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < total; ++i) {
            shape_.unflatten(i, idx);
            const std::size_t a = idx[factor_];
            for (std::size_t b = 0; b < df; ++b) {
                idx[factor_] = b;
                const std::size_t j = shape_.flatten(idx);
                out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    mat_(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
            }
            idx[factor_] = a;
        }
        return out;
    }

private:
    Operator(Eigen::MatrixXcd m, std::size_t factor, FactorShape shape)
        : mat_(std::move(m)), factor_(factor), shape_(std::move(shape)) {}

    Eigen::MatrixXcd mat_;
    std::size_t factor_;
    FactorShape shape_;
};

inline StateVector tensor_product(const StateVector& a, const StateVector& b) {
    std::vector<cx> out(a.dim() * b.dim());
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < b.dim(); ++j) out[i * b.dim() + j] = a[i] * b[j];
    return StateVector(std::move(out), a.shape().concat(b.shape()));
}

inline DensityMatrix pure_density(const StateVector& psi) {
    const auto v = psi.vec();
    return DensityMatrix(v * v.adjoint(), psi.shape());
}

namespace detail {

inline std::vector<std::size_t> checked_factor_subset(const FactorShape& shape,
                                                      std::vector<std::size_t> subset,
                                                      const char* what) {
    std::sort(subset.begin(), subset.end());
    if (std::adjacent_find(subset.begin(), subset.end()) != subset.end())
        throw std::invalid_argument(std::string(what) + ": repeated factor index");
    if (subset.empty()) throw std::invalid_argument(std::string(what) + ": empty factor set");
    if (subset.back() >= shape.num_factors())
        throw std::invalid_argument(std::string(what) + ": factor index out of range");
    return subset;
}

// Splits every flat index of `shape` into (index over `group`, index over rest),
// each flattened row-major in original factor order.
struct IndexSplit {
    IndexSplit(const FactorShape& shape, const std::vector<std::size_t>& group) {
        std::vector<bool> in_group(shape.num_factors(), false);
        for (std::size_t f : group) in_group[f] = true;
        group_dim = 1;
        rest_dim = 1;
        std::vector<std::size_t> gd, rd;
        for (std::size_t f = 0; f < shape.num_factors(); ++f) {
            (in_group[f] ? gd : rd).push_back(shape.dim(f));
            (in_group[f] ? group_dim : rest_dim) *= shape.dim(f);
        }
        const std::size_t total = shape.total();
        group_of.resize(total);
        rest_of.resize(total);
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < total; ++i) {
            shape.unflatten(i, idx);
            std::size_t g = 0, r = 0;
            for (std::size_t f = 0; f < shape.num_factors(); ++f) {
                if (in_group[f]) g = g * shape.dim(f) + idx[f];
                else r = r * shape.dim(f) + idx[f];
            }
            group_of[i] = g;
            rest_of[i] = r;
        }
    }

    std::size_t group_dim, rest_dim;
    std::vector<std::size_t> group_of, rest_of;
};

}  // namespace detail

inline DensityMatrix partial_trace(const DensityMatrix& rho, std::vector<std::size_t> keep) {
    keep = detail::checked_factor_subset(rho.shape(), std::move(keep), "partial_trace");
    if (keep.size() == rho.shape().num_factors())
        throw std::invalid_argument("partial_trace: keep set must be a strict subset");

    std::vector<std::size_t> kept_dims;
    for (std::size_t f : keep) kept_dims.push_back(rho.shape().dim(f));
    const detail::IndexSplit split(rho.shape(), keep);

    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(split.group_dim),
                                                  static_cast<Eigen::Index>(split.group_dim));
    const std::size_t total = rho.shape().total();
    for (std::size_t i = 0; i < total; ++i)
        for (std::size_t j = 0; j < total; ++j)
            if (split.rest_of[i] == split.rest_of[j])
                out(static_cast<Eigen::Index>(split.group_of[i]),
                    static_cast<Eigen::Index>(split.group_of[j])) += rho.entry(i, j);
    return DensityMatrix(std::move(out), FactorShape(std::move(kept_dims)));
}

inline cx expectation(const Operator& op, const DensityMatrix& rho) {
    if (op.shape() != rho.shape()) throw std::invalid_argument("expectation: shape mismatch");
    if (op.acts_on_whole())
        return (op.block().cwiseProduct(rho.mat().transpose())).sum();
    // Tr((I x A x I) rho) without materializing the embedding.
    const std::size_t total = rho.shape().total();
    const std::size_t df = rho.shape().dim(op.factor());
    cx tr(0.0, 0.0);
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < total; ++i) {
        rho.shape().unflatten(i, idx);
        const std::size_t a = idx[op.factor()];
        for (std::size_t b = 0; b < df; ++b) {
            idx[op.factor()] = b;
            const std::size_t j = rho.shape().flatten(idx);
            tr += op.block()(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) * rho.entry(j, i);
        }
        idx[op.factor()] = a;
    }
    return tr;
}

inline cx expectation(const Operator& op, const StateVector& psi) {
    return expectation(op, pure_density(psi));
}

struct SchmidtDecomposition {
    std::vector<double> coefficients;   // nonnegative, descending
    std::vector<StateVector> left;      // orthonormal states on the left group
    std::vector<StateVector> right;     // orthonormal states on the right group
};

// Bipartition given by the factor indices of the left group; the complement
// forms the right group. Degenerate coefficients are ordered by the position of
// the first nonvanishing component of the left vector (a convention; the
// decomposition itself is only unique up to degenerate rotations).
inline SchmidtDecomposition schmidt_decompose(const StateVector& psi,
                                              std::vector<std::size_t> left_factors) {
    left_factors = detail::checked_factor_subset(psi.shape(), std::move(left_factors), "schmidt_decompose");
    if (left_factors.size() == psi.shape().num_factors())
        throw std::invalid_argument("schmidt_decompose: left group must be a strict subset");

    const detail::IndexSplit split(psi.shape(), left_factors);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(split.group_dim),
                                                static_cast<Eigen::Index>(split.rest_dim));
    for (std::size_t i = 0; i < psi.dim(); ++i)
        m(static_cast<Eigen::Index>(split.group_of[i]), static_cast<Eigen::Index>(split.rest_of[i])) = psi[i];

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const Eigen::MatrixXcd u = svd.matrixU();
    const Eigen::MatrixXcd v = svd.matrixV();
    const auto rank = sv.size();

    std::vector<std::size_t> order(static_cast<std::size_t>(rank));
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto first_support = [&](std::size_t c) {
        for (Eigen::Index r = 0; r < u.rows(); ++r)
            if (std::abs(u(r, static_cast<Eigen::Index>(c))) > 1e-12) return r;
        return u.rows();
    };
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double la = sv(static_cast<Eigen::Index>(a)), lb = sv(static_cast<Eigen::Index>(b));
        if (std::abs(la - lb) > 1e-12) return la > lb;
        return first_support(a) < first_support(b);
    });

    std::vector<std::size_t> left_dims, right_dims;
    std::vector<bool> in_left(psi.shape().num_factors(), false);
    for (std::size_t f : left_factors) in_left[f] = true;
    for (std::size_t f = 0; f < psi.shape().num_factors(); ++f)
        (in_left[f] ? left_dims : right_dims).push_back(psi.shape().dim(f));
    const FactorShape lshape(left_dims), rshape(right_dims);

    SchmidtDecomposition out;
    for (std::size_t k : order) {
        const auto c = static_cast<Eigen::Index>(k);
        out.coefficients.push_back(sv(c));
        Eigen::VectorXcd lu = u.col(c), rv = v.col(c).conjugate();
        // Phase canonicalization: largest left component real positive.
        Eigen::Index imax = 0;
        lu.cwiseAbs().maxCoeff(&imax);
        if (std::abs(lu(imax)) > 1e-14) {
            const cx phase = lu(imax) / std::abs(lu(imax));
            lu /= phase;
            rv *= phase;
        }
        out.left.emplace_back(std::vector<cx>(lu.data(), lu.data() + lu.size()), lshape);
        out.right.emplace_back(std::vector<cx>(rv.data(), rv.data() + rv.size()), rshape);
    }
    return out;
}

// l1 sum of off-diagonal magnitudes of rho expressed in the given basis.
inline double coherence_offdiag(const DensityMatrix& rho, const std::vector<StateVector>& basis) {
    const auto d = static_cast<Eigen::Index>(rho.dim());
    if (basis.size() != rho.dim()) throw std::invalid_argument("coherence_offdiag: basis size mismatch");
    Eigen::MatrixXcd b(d, d);
    for (Eigen::Index c = 0; c < d; ++c) {
        if (basis[static_cast<std::size_t>(c)].shape() != rho.shape())
            throw std::invalid_argument("coherence_offdiag: basis state shape mismatch");
        b.col(c) = basis[static_cast<std::size_t>(c)].vec();
    }
    if ((b.adjoint() * b - Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff() >
        tol::basis_orthonormal)
        throw std::invalid_argument("coherence_offdiag: basis not orthonormal");
    const Eigen::MatrixXcd r = b.adjoint() * rho.mat() * b;
    double s = 0.0;
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j)
            if (i != j) s += std::abs(r(i, j));
    return s;
}

// Same measure in the computational basis.
inline double coherence_offdiag(const DensityMatrix& rho) {
    double s = 0.0;
    for (std::size_t i = 0; i < rho.dim(); ++i)
        for (std::size_t j = 0; j < rho.dim(); ++j)
            if (i != j) s += std::abs(rho.entry(i, j));
    return s;
}

// Applies a unitary; the constructor's repair rule catches non-unitary misuse
// through the norm drift it would cause.
inline StateVector apply_unitary(const Operator& u, const StateVector& psi) {
    if (u.shape() != psi.shape()) throw std::invalid_argument("apply_unitary: shape mismatch");
    Eigen::VectorXcd out;
    if (u.acts_on_whole()) {
        out = u.block() * psi.vec();
    } else {
        out = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(psi.dim()));
        const std::size_t df = psi.shape().dim(u.factor());
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < psi.dim(); ++i) {
            psi.shape().unflatten(i, idx);
            const std::size_t a = idx[u.factor()];
            cx acc(0.0, 0.0);
            for (std::size_t b = 0; b < df; ++b) {
                idx[u.factor()] = b;
                acc += u.block()(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) *
                       psi[psi.shape().flatten(idx)];
            }
            idx[u.factor()] = a;
            out(static_cast<Eigen::Index>(i)) = acc;
        }
    }
    return StateVector(std::vector<cx>(out.data(), out.data() + out.size()), psi.shape());
}

// exp(-i H t / hbar) for Hermitian H, via eigendecomposition.
inline Operator hamiltonian_evolution(const Operator& h, double t, double hbar = 1.0) {
    const Eigen::MatrixXcd& m = h.block();
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale)
        throw std::invalid_argument("hamiltonian_evolution: H not Hermitian");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
    Eigen::VectorXcd phases(es.eigenvalues().size());
    for (Eigen::Index i = 0; i < phases.size(); ++i)
        phases(i) = std::exp(cx(0.0, -es.eigenvalues()(i) * t / hbar));
    Eigen::MatrixXcd u = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    return h.acts_on_whole() ? Operator::whole(std::move(u), h.shape())
                             : Operator::on_factor(std::move(u), h.factor(), h.shape());
}

// Haar-random pure state: iid complex Gaussian amplitudes, normalized.
inline StateVector random_state(std::mt19937_64& g, FactorShape shape);

inline StateVector random_state(std::mt19937_64&& g, FactorShape shape) {
    return random_state(g, std::move(shape));
}

inline StateVector random_state(std::mt19937_64& g, FactorShape shape) {
    std::vector<cx> amps(shape.total());
    double n2 = 0.0;
    for (cx& a : amps) {
        a = cx(normal_unit(g), normal_unit(g));
        n2 += std::norm(a);
    }
    const double n = std::sqrt(n2);
    for (cx& a : amps) a /= n;
    return StateVector(std::move(amps), std::move(shape));
}

}  // namespace decolab
