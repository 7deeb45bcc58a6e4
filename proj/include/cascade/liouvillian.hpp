#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "cascade/errors.hpp"
#include "cascade/integrator.hpp"
#include "cascade/model.hpp"

namespace cascade {

inline constexpr std::size_t kSuperDim = kLevels * kLevels;

using Operator = Eigen::Matrix<Complex, kLevels, kLevels>;
using SuperVector = Eigen::Matrix<Complex, kSuperDim, 1>;
using SuperMatrix = Eigen::Matrix<Complex, kSuperDim, kSuperDim>;

/// |row><col|
inline Operator ket_bra(Level row, Level col) {
    Operator op = Operator::Zero();
    op(index(row), index(col)) = 1.0;
    return op;
}

/// Column-major position of element (row, col) in a vectorized operator.
constexpr std::size_t super_index(Level row, Level col) noexcept {
    return index(row) + kLevels * index(col);
}

inline SuperVector vectorize(const Operator& x) {
    return Eigen::Map<const SuperVector>(x.data());
}

inline Operator unvectorize(const SuperVector& v) {
    return Eigen::Map<const Operator>(v.data());
}

/// Dense (a (x) b) for 5x5 factors.
inline SuperMatrix kron(const Operator& a, const Operator& b) {
    SuperMatrix out;
    for (std::size_t i = 0; i < kLevels; ++i)
        for (std::size_t j = 0; j < kLevels; ++j)
            out.block<kLevels, kLevels>(i * kLevels, j * kLevels) = a(i, j) * b;
    return out;
}

/// 5x5 density matrix over [2X, X1, X2, u, g].
class DensityMatrix {
public:
    DensityMatrix() : rho_(Operator::Zero()) { rho_(0, 0) = 1.0; }

    /// Wraps a physical state; throws DomainError if it is not Hermitian with unit
    /// trace and no eigenvalue below -1e-10.
    explicit DensityMatrix(Operator rho, double tol = 1e-12) : rho_(std::move(rho)) {
        if (!is_hermitian(tol)) throw DomainError("DensityMatrix: not Hermitian");
        if (std::abs(trace() - 1.0) > tol) throw DomainError("DensityMatrix: trace != 1");
        if (min_eigenvalue() < -1e-10) throw DomainError("DensityMatrix: not positive");
    }

    static DensityMatrix pure(Level l) { return DensityMatrix(ket_bra(l, l)); }

    [[nodiscard]] const Operator& matrix() const noexcept { return rho_; }
    [[nodiscard]] Complex operator()(Level row, Level col) const {
        return rho_(index(row), index(col));
    }
    [[nodiscard]] double population(Level l) const { return rho_(index(l), index(l)).real(); }

    [[nodiscard]] double trace() const { return rho_.trace().real(); }
    [[nodiscard]] bool is_hermitian(double tol) const {
        return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() <= tol;
    }
    /// Smallest eigenvalue of the Hermitian part.
    [[nodiscard]] double min_eigenvalue() const {
        const Operator h = 0.5 * (rho_ + rho_.adjoint());
        Eigen::SelfAdjointEigenSolver<Operator> es(h, Eigen::EigenvaluesOnly);
        return es.eigenvalues().minCoeff();
    }

private:
    Operator rho_;
};

/// Switches used by the mutation check of the verify suite.
struct GeneratorOptions {
    bool flip_splitting_sign = false;
};

/// The 25x25 generator d vec(rho)/dt = M vec(rho).
class Liouvillian {
public:
    explicit Liouvillian(SuperMatrix m) : m_(std::move(m)) {}

    [[nodiscard]] const SuperMatrix& matrix() const noexcept { return m_; }

    /// Coefficient of rho_{src_row src_col} in d/dt rho_{row col}.
    [[nodiscard]] Complex coefficient(Level row, Level col, Level src_row, Level src_col) const {
        return m_(super_index(row, col), super_index(src_row, src_col));
    }

    [[nodiscard]] Operator apply(const Operator& x) const { return unvectorize(m_ * vectorize(x)); }

    /// exp(M tau) by scaling and squaring.
    [[nodiscard]] SuperMatrix propagator(double tau) const {
        if (tau < 0.0) throw DomainError("propagator: negative time");
        SuperMatrix p = (m_ * tau).exp();
        if (!p.allFinite()) throw NumericError("propagator: non-finite matrix exponential");
        return p;
    }

    [[nodiscard]] Eigen::Matrix<Complex, kSuperDim, 1> eigenvalues() const {
        Eigen::ComplexEigenSolver<SuperMatrix> es(m_, false);
        if (es.info() != Eigen::Success) throw NumericError("Liouvillian: eigensolver failed");
        return es.eigenvalues();
    }

    /// Decay rate of the slowest mode with Re(lambda) < -floor; zero if none.
    [[nodiscard]] double slowest_decay(double floor = 1e-9) const {
        double slowest = 0.0;
        for (const Complex& l : eigenvalues()) {
            const double rate = -l.real();
            if (rate > floor && (slowest == 0.0 || rate < slowest)) slowest = rate;
        }
        return slowest;
    }

private:
    SuperMatrix m_;
};

namespace detail {

/// vec(L x L^dag - {L^dag L, x}/2) as a superoperator.
inline SuperMatrix dissipator(const Operator& jump) {
    const Operator id = Operator::Identity();
    const Operator jdj = jump.adjoint() * jump;
    return kron(jump.conjugate(), jump) - 0.5 * kron(id, jdj) - 0.5 * kron(jdj.transpose(), id);
}

/// vec(-i[H, x]) as a superoperator.
inline SuperMatrix commutator(const Operator& h) {
    const Operator id = Operator::Identity();
    return Complex(0.0, -1.0) * (kron(id, h) - kron(h.transpose(), id));
}

} // namespace detail

/// Rotating-frame Hamiltonian: X1 at +delta_fs, u at -detuning, drive -rabi(|X2><u| + h.c.).
inline Operator cascade_hamiltonian(const CascadeParams& p, const GeneratorOptions& opt = {}) {
    const double split = opt.flip_splitting_sign ? -p.delta_fs : p.delta_fs;
    Operator h = split * ket_bra(Level::X1, Level::X1) - p.detuning * ket_bra(Level::Aux, Level::Aux)
                 - p.rabi * (ket_bra(Level::X2, Level::Aux) + ket_bra(Level::Aux, Level::X2));
    return h;
}

struct JumpChannel {
    double rate;
    Operator op;
};

/// Radiative and incoherent transfer channels. gamma21 moves X1 -> X2 and
/// gamma12 moves X2 -> X1.
inline std::vector<JumpChannel> cascade_channels(const CascadeParams& p) {
    return {
        {p.gamma1, ket_bra(Level::X1, Level::Biexciton)},
        {p.gamma2, ket_bra(Level::X2, Level::Biexciton)},
        {p.gamma3, ket_bra(Level::Ground, Level::X1)},
        {p.gamma4, ket_bra(Level::Ground, Level::X2)},
        {p.gamma_u, ket_bra(Level::Aux, Level::X2)},
        {p.gamma21, ket_bra(Level::X2, Level::X1)},
        {p.gamma12, ket_bra(Level::X1, Level::X2)},
    };
}

inline Liouvillian build_generator(const CascadeParams& p, const GeneratorOptions& opt = {}) {
    p.validate();
    SuperMatrix m = detail::commutator(cascade_hamiltonian(p, opt));
    for (const auto& [rate, op] : cascade_channels(p)) {
        if (rate != 0.0) m += rate * detail::dissipator(op);
    }
    return Liouvillian(std::move(m));
}

enum class EvolveMethod { Exponential, Integrator };

struct EvolveOptions {
    EvolveMethod method = EvolveMethod::Exponential;
    IntegratorTolerances tolerances{};
};

inline SuperVector evolve(const Liouvillian& gen, const SuperVector& x0, double tau,
                          const EvolveOptions& opt = {}) {
    if (tau < 0.0) throw DomainError("evolve: negative time");
    if (tau == 0.0) return x0;
    SuperVector out;
    if (opt.method == EvolveMethod::Exponential) {
        out = gen.propagator(tau) * x0;
    } else {
        const SuperMatrix& m = gen.matrix();
        out = integrate_dopri5([&m](const SuperVector& y) -> SuperVector { return m * y; }, x0, tau,
                               opt.tolerances);
    }
    if (!out.allFinite()) throw NumericError("evolve: non-finite result");
    return out;
}

/// e^{M tau} x0.
inline Operator evolve(const Liouvillian& gen, const Operator& x0, double tau,
                       const EvolveOptions& opt = {}) {
    return unvectorize(evolve(gen, vectorize(x0), tau, opt));
}

/// Evolves x0 along a nondecreasing grid of times (starting anywhere >= 0),
/// stepping from each grid point to the next.
inline std::vector<Operator> evolve_grid(const Liouvillian& gen, const Operator& x0,
                                         std::span<const double> taus,
                                         const EvolveOptions& opt = {}) {
    std::vector<Operator> out;
    out.reserve(taus.size());
    SuperVector state = vectorize(x0);
    double t = 0.0;
    for (const double tau : taus) {
        if (tau < t) throw DomainError("evolve_grid: times must be nondecreasing and >= 0");
        state = evolve(gen, state, tau - t, opt);
        t = tau;
        out.push_back(unvectorize(state));
    }
    return out;
}

} // namespace cascade
