#pragma once

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <vector>

#include "tiqec/common.hpp"
#include "tiqec/pauli.hpp"
#include "tiqec/rng.hpp"

namespace tiqec {

// Per-ion classical leakage bookkeeping. A leaked ion sits in an atomic level
// outside the computational subspace; coherences with it cannot build up, so
// one classical bit per ion suffices. Bits are set only by the
// damping/leakage channel and cleared by repumping or reset.
class LeakageFlags {
public:
    LeakageFlags() = default;
    explicit LeakageFlags(int n) : leaked_(n, false) {}

    bool leaked(int q) const { return leaked_[q]; }
    void set_leaked(int q, bool v) { leaked_[q] = v; }
    int count() const {
        int c = 0;
        for (bool b : leaked_)
            if (b) ++c;
        return c;
    }
    int size() const { return static_cast<int>(leaked_.size()); }

private:
    std::vector<bool> leaked_;
};

// Dense pure state over n qubits. Qubit 0 is the least-significant bit of the
// amplitude index. States are compared via fidelity; global phase carries no
// meaning anywhere in this codebase.
class PureState {
public:
    explicit PureState(int n_qubits, int max_qubits = kMaxQubits) : n_(n_qubits), leak(n_qubits) {
        require(n_qubits >= 1 && n_qubits <= max_qubits, "PureState: qubit count out of range");
        amps_.assign(std::size_t{1} << n_, cplx{0.0, 0.0});
        amps_[0] = 1.0;
    }

    int n_qubits() const { return n_; }
    std::size_t dim() const { return amps_.size(); }
    const std::vector<cplx>& amplitudes() const { return amps_; }
    std::vector<cplx>& amplitudes() { return amps_; }

    double norm_sq() const {
        double s = 0.0;
        for (const auto& a : amps_) s += std::norm(a);
        return s;
    }

    void renormalize() {
        const double n = std::sqrt(norm_sq());
        require(n > 0.0, "PureState: zero-norm state");
        for (auto& a : amps_) a /= n;
    }

    void set_computational_basis(std::uint64_t bits) {
        std::fill(amps_.begin(), amps_.end(), cplx{0.0, 0.0});
        amps_[bits] = 1.0;
    }

    // |<a|b>|^2
    static double fidelity(const PureState& a, const PureState& b) {
        require(a.n_ == b.n_, "fidelity: size mismatch");
        cplx ov{0.0, 0.0};
        for (std::size_t i = 0; i < a.amps_.size(); ++i) ov += std::conj(a.amps_[i]) * b.amps_[i];
        return std::norm(ov);
    }

    // Applies a raw 2x2 matrix to one qubit. Does not consult leakage flags;
    // callers that model physical gates go through the gate ops below.
    void apply_1q_matrix(int q, const std::array<cplx, 4>& u) {
        check_q(q);
        const std::size_t mask = std::size_t{1} << q;
        for (std::size_t i = 0; i < amps_.size(); ++i) {
            if (i & mask) continue;
            const cplx a0 = amps_[i];
            const cplx a1 = amps_[i | mask];
            amps_[i] = u[0] * a0 + u[1] * a1;
            amps_[i | mask] = u[2] * a0 + u[3] * a1;
        }
    }

    void apply_pauli(const PauliString& p) {
        require(p.n_qubits() == n_, "apply_pauli: size mismatch");
        for (int q = 0; q < n_; ++q) {
            switch (p.at(q)) {
                case Pauli::I: break;
                case Pauli::X: apply_1q_matrix(q, {cplx{0}, cplx{1}, cplx{1}, cplx{0}}); break;
                case Pauli::Y: apply_1q_matrix(q, {cplx{0}, -kI, kI, cplx{0}}); break;
                case Pauli::Z: apply_1q_matrix(q, {cplx{1}, cplx{0}, cplx{0}, cplx{-1}}); break;
            }
        }
    }

    void check_q(int q) const { require(q >= 0 && q < n_, "qubit index out of range"); }

    LeakageFlags leak;

private:
    int n_;
    std::vector<cplx> amps_;
};

namespace detail {

// exp(-i(theta/2) S_phi) on a single qubit, S_phi = cos(phi) X + sin(phi) Y.
inline std::array<cplx, 4> rotation_matrix(double theta, double phi) {
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    const cplx e_m = std::exp(-kI * phi);
    const cplx e_p = std::exp(kI * phi);
    return {cplx{c, 0.0}, -kI * s * e_m, -kI * s * e_p, cplx{c, 0.0}};
}

}  // namespace detail

// exp(-i(theta/2) sum_t S_phi^(t)) over the unleaked targets; factorizes into
// identical single-qubit rotations. Leaked targets are identities.
inline void apply_global_rotation(PureState& st, const std::vector<int>& targets, double theta,
                                  double phi) {
    require(!targets.empty(), "apply_global_rotation: empty target set");
    const auto u = detail::rotation_matrix(theta, phi);
    for (int q : targets) {
        st.check_q(q);
        if (st.leak.leaked(q)) continue;
        st.apply_1q_matrix(q, u);
    }
}

// exp(-i(theta/2) Z) on one addressed qubit; identity if leaked.
inline void apply_z_rotation(PureState& st, int q, double theta) {
    st.check_q(q);
    if (st.leak.leaked(q)) return;
    const cplx p0 = std::exp(-kI * (theta / 2.0));
    const cplx p1 = std::exp(kI * (theta / 2.0));
    const std::size_t mask = std::size_t{1} << q;
    auto& a = st.amplitudes();
    for (std::size_t i = 0; i < a.size(); ++i) a[i] *= (i & mask) ? p1 : p0;
}

// Moelmer-Soerensen gate exp(-i(theta/4) S_phi^2) over the unleaked targets.
// If fewer than two targets remain unleaked the drive closes a trivial
// phase-space trajectory and the gate acts as the identity.
inline void apply_ms(PureState& st, const std::vector<int>& targets, double theta, double phi) {
    require(targets.size() >= 2, "apply_ms: needs at least two targets");
    std::uint64_t seen = 0;
    std::vector<int> act;
    act.reserve(targets.size());
    for (int q : targets) {
        st.check_q(q);
        require(!(seen & (std::uint64_t{1} << q)), "apply_ms: duplicate target");
        seen |= std::uint64_t{1} << q;
        if (!st.leak.leaked(q)) act.push_back(q);
    }
    if (act.size() < 2) return;

    // S_phi = V Z V^dag per qubit, so the gate is a diagonal phase in the
    // rotated product basis: phase exp(-i(theta/4) m^2), m = k - 2*popcount.
    const cplx e_p = std::exp(kI * phi);
    const double r = 1.0 / std::sqrt(2.0);
    const std::array<cplx, 4> v = {cplx{r}, cplx{r}, r * e_p, -r * e_p};
    const std::array<cplx, 4> vdag = {cplx{r}, r * std::conj(e_p), cplx{r}, -r * std::conj(e_p)};

    for (int q : act) st.apply_1q_matrix(q, vdag);

    std::uint64_t mask = 0;
    for (int q : act) mask |= std::uint64_t{1} << q;
    const int k = static_cast<int>(act.size());
    std::array<cplx, 64> phases{};  // m^2 depends only on popcount
    for (int pc = 0; pc <= k; ++pc) {
        const double m = k - 2 * pc;
        phases[pc] = std::exp(-kI * (theta / 4.0) * m * m);
    }
    auto& a = st.amplitudes();
    for (std::size_t i = 0; i < a.size(); ++i)
        a[i] *= phases[static_cast<int>(std::popcount(i & mask))];

    for (int q : act) st.apply_1q_matrix(q, v);
}

// Projective z-basis measurement, Born sampling, outcome +1 for |0>.
// A leaked ion fluoresces on the cycling transition just like |0>, so it
// deterministically reports the bright (+1) outcome and the register is
// untouched.
inline int measure_z(PureState& st, int q, Rng& rng) {
    st.check_q(q);
    if (st.leak.leaked(q)) return +1;
    const std::size_t mask = std::size_t{1} << q;
    auto& a = st.amplitudes();
    double p0 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!(i & mask)) p0 += std::norm(a[i]);
    const bool zero = rng.uniform() < p0;
    const double keep = zero ? p0 : 1.0 - p0;
    const double scale = 1.0 / std::sqrt(std::max(keep, 1e-300));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if ((static_cast<bool>(i & mask)) == zero)
            a[i] = 0.0;
        else
            a[i] *= scale;
    }
    return zero ? +1 : -1;
}

// Collapses the qubit onto |0>/|1> without randomness (used by channel
// branches whose outcome was already sampled).
inline void project_qubit(PureState& st, int q, int bit) {
    const std::size_t mask = std::size_t{1} << q;
    auto& a = st.amplitudes();
    for (std::size_t i = 0; i < a.size(); ++i)
        if (static_cast<int>((i & mask) != 0) != bit) a[i] = 0.0;
    st.renormalize();
}

// Qubit reset by optical pumping: projective collapse of the target, then the
// target is pumped to |value| and flipped with probability flip_prob. Optical
// pumping addresses the full ground manifold, so the leaked bit is cleared.
inline void reset(PureState& st, int q, int value, double flip_prob, Rng& rng) {
    st.check_q(q);
    require(flip_prob >= 0.0 && flip_prob <= 1.0, "reset: flip_prob outside [0,1]");
    int current;
    if (st.leak.leaked(q)) {
        // Leaked slot is a |0> product placeholder by construction.
        st.leak.set_leaked(q, false);
        current = 0;
    } else {
        current = measure_z(st, q, rng) == +1 ? 0 : 1;
    }
    int target = value;
    if (rng.bernoulli(flip_prob)) target ^= 1;
    if (current != target) st.apply_1q_matrix(q, {cplx{0}, cplx{1}, cplx{1}, cplx{0}});
}

inline double pauli_expectation(const PureState& st, const PauliString& p) {
    require(p.n_qubits() == st.n_qubits(), "pauli_expectation: size mismatch");
    // P|i> = w(i) |i ^ flip>, with w(i) a power of i times signs from Y/Z.
    std::uint64_t flip = 0;
    for (int q = 0; q < st.n_qubits(); ++q)
        if (p.at(q) == Pauli::X || p.at(q) == Pauli::Y) flip |= std::uint64_t{1} << q;
    const auto& a = st.amplitudes();
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i) {
        cplx w{1.0, 0.0};
        for (int q = 0; q < st.n_qubits(); ++q) {
            const bool bit = (i >> q) & 1;
            switch (p.at(q)) {
                case Pauli::I: break;
                case Pauli::X: break;
                case Pauli::Y: w *= bit ? -kI : kI; break;
                case Pauli::Z: w *= bit ? -1.0 : 1.0; break;
            }
        }
        acc += std::conj(a[i ^ flip]) * w * a[i];
    }
    // i^phase from the string's tracked phase
    static const cplx ip[4] = {cplx{1, 0}, cplx{0, 1}, cplx{-1, 0}, cplx{0, -1}};
    acc *= ip[p.phase_exponent()];
    return acc.real();
}

// Applies an arbitrary k-qubit matrix (row-major, dimension 2^k) to the given
// targets (targets[0] = least significant bit of the local index). Used by
// Kraus sampling; bypasses leakage flags.
inline void apply_dense_matrix(PureState& st, const std::vector<int>& targets,
                               const std::vector<cplx>& m) {
    const int k = static_cast<int>(targets.size());
    const std::size_t d = std::size_t{1} << k;
    require(m.size() == d * d, "apply_dense_matrix: bad matrix size");
    std::vector<std::size_t> masks(k);
    for (int j = 0; j < k; ++j) {
        st.check_q(targets[j]);
        masks[j] = std::size_t{1} << targets[j];
    }
    std::uint64_t tmask = 0;
    for (auto msk : masks) tmask |= msk;
    auto& a = st.amplitudes();
    std::vector<cplx> in(d), out(d);
    for (std::size_t base = 0; base < a.size(); ++base) {
        if (base & tmask) continue;
        for (std::size_t r = 0; r < d; ++r) {
            std::size_t idx = base;
            for (int j = 0; j < k; ++j)
                if ((r >> j) & 1) idx |= masks[j];
            in[r] = a[idx];
        }
        for (std::size_t r = 0; r < d; ++r) {
            cplx s{0.0, 0.0};
            const cplx* row = &m[r * d];
            for (std::size_t c = 0; c < d; ++c) s += row[c] * in[c];
            out[r] = s;
        }
        for (std::size_t r = 0; r < d; ++r) {
            std::size_t idx = base;
            for (int j = 0; j < k; ++j)
                if ((r >> j) & 1) idx |= masks[j];
            a[idx] = out[r];
        }
    }
}

}  // namespace tiqec
