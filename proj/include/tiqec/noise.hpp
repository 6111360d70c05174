#pragma once

#include <cmath>
#include <string>

#include "tiqec/common.hpp"
#include "tiqec/ou.hpp"
#include "tiqec/rng.hpp"
#include "tiqec/statevec.hpp"

namespace tiqec {

enum class LeakMode {
    Full,        // Gamma'/Gamma = branching ratio (4/9 for the optical qubit)
    DampingOnly, // Gamma' = 0, all decay is amplitude damping
    Symmetric,   // Gamma = Gamma' = 1/(2 T1), worst-case leakage stress test
};

inline std::string to_string(LeakMode m) {
    switch (m) {
        case LeakMode::Full: return "full";
        case LeakMode::DampingOnly: return "damping_only";
        case LeakMode::Symmetric: return "symmetric";
    }
    return "?";
}

struct DecayRates {
    double gamma = 0.0;        // damping |1> -> |0>
    double gamma_prime = 0.0;  // leakage |1> -> |l>
};

// Environmental noise constants. The total spontaneous-decay rate is
// Gamma + Gamma' = 1/T1, split by the branching ratio; with T2 = 2*T1 the
// coherence decay is then entirely decay-limited (zero pure dephasing).
struct NoiseParams {
    double t1 = 1.1;               // [s]
    double t2 = 2.2;               // [s], must satisfy T2 <= 2 T1
    double branching_ratio = 4.0 / 9.0;  // Gamma'/Gamma
    LeakMode leak_mode = LeakMode::Full;

    OUProcess phase_ou{0.1, 0.01};        // laser phase drift (slow)
    OUProcess intensity_ou{2.2e-3, 0.0};  // relative intensity, tau_c = T2/1000

    double spam_init_flip = 5e-3;     // o5 reset infidelity
    double spam_readout_flip = 1e-3;  // o4 measurement infidelity
    double repump_eps = 0.070710678118654752;  // eps^2 = 5e-3 repump failure (o11)

    // Calibration targets (Table I infidelity columns); used by the OU
    // calibration sweeps and the synthesized MS channels.
    double one_qubit_infidelity = 5e-5;   // o3
    double ms2_infidelity = 1e-2;         // o1
    double msn_infidelity = 5e-2;         // o2

    DecayRates rates() const {
        require(t1 > 0.0 && t2 > 0.0, "NoiseParams: nonpositive T1/T2");
        require(t2 <= 2.0 * t1 + 1e-12, "NoiseParams: T2 must be <= 2*T1");
        const double total = 1.0 / t1;
        switch (leak_mode) {
            case LeakMode::DampingOnly: return {total, 0.0};
            case LeakMode::Symmetric: return {total / 2.0, total / 2.0};
            case LeakMode::Full: {
                const double b = branching_ratio;
                require(b >= 0.0, "NoiseParams: negative branching ratio");
                return {total / (1.0 + b), total * b / (1.0 + b)};
            }
        }
        return {};
    }

    // Pure-dephasing rate chosen so total coherence decay matches T2 given
    // the decay channel's own 1/(2 T1) contribution.
    double pure_dephasing_rate() const {
        const double r = 1.0 / t2 - 1.0 / (2.0 * t1);
        return r > 0.0 ? r : 0.0;
    }

    static NoiseParams current() {
        NoiseParams p;
        p.spam_init_flip = 5e-3;
        p.spam_readout_flip = 1e-3;
        p.one_qubit_infidelity = 5e-5;
        p.ms2_infidelity = 1e-2;
        p.msn_infidelity = 5e-2;
        return p;
    }

    static NoiseParams anticipated() {
        NoiseParams p;
        p.spam_init_flip = 5e-3;
        p.spam_readout_flip = 1e-4;
        p.one_qubit_infidelity = 1e-5;
        p.ms2_infidelity = 2e-4;
        p.msn_infidelity = 1e-3;
        return p;
    }
};

// Per-trial mutable noise state: the OU trajectories shared by all gates of
// one Monte Carlo trial.
struct NoiseContext {
    NoiseParams params;
    OUProcess phase;
    OUProcess intensity;

    explicit NoiseContext(const NoiseParams& p, Rng& rng) : params(p), phase(p.phase_ou), intensity(p.intensity_ou) {
        phase.thermalize(rng);
        intensity.thermalize(rng);
    }
};

inline int spam_flip(int outcome, double flip_prob, Rng& rng) {
    require(outcome == 1 || outcome == -1, "spam_flip: outcome must be +-1");
    return rng.bernoulli(flip_prob) ? -outcome : outcome;
}

// Intensity fluctuations rescale the pulse area: theta_eff = theta*sqrt(I/<I>)
// with I/<I> = 1 + F(t). Clamped at zero intensity.
inline double effective_theta(double theta, double intensity_sample) {
    const double ratio = 1.0 + intensity_sample;
    return ratio > 0.0 ? theta * std::sqrt(ratio) : 0.0;
}

inline void faulty_global_rotation(PureState& st, const std::vector<int>& targets, double theta,
                                   double phi, NoiseContext& ctx, double duration, Rng& rng) {
    const double fi = ctx.intensity.step(duration, rng);
    const double dphi = ctx.phase.step(duration, rng);
    apply_global_rotation(st, targets, effective_theta(theta, fi), phi + dphi);
}

// ac-Stark-shift rotations are insensitive to slow phase drifts; only the
// pulse area fluctuates.
inline void faulty_z_rotation(PureState& st, int target, double theta, NoiseContext& ctx,
                              double duration, Rng& rng) {
    const double fi = ctx.intensity.step(duration, rng);
    ctx.phase.step(duration, rng);
    apply_z_rotation(st, target, effective_theta(theta, fi));
}

struct DecayAngles {
    double theta_leak = 0.0;
    double theta_damp = 0.0;
};

// Rotation angles of the damping/leakage circuit:
//   theta_l = 2 asin sqrt[ G'(1-e^{-(G+G')t}) / (G+G') ]
//   theta_d = 2 asin sqrt[ G (1-e^{-(G+G')t}) / (G + G' e^{-(G+G')t}) ]
inline DecayAngles damping_leakage_angles(double duration, double gamma, double gamma_prime) {
    require(duration >= 0.0, "damping_leakage_angles: negative duration");
    require(gamma >= 0.0 && gamma_prime >= 0.0, "damping_leakage_angles: negative rate");
    const double tot = gamma + gamma_prime;
    if (tot == 0.0 || duration == 0.0) return {};
    const double e = std::exp(-tot * duration);
    const double pl = gamma_prime * (1.0 - e) / tot;
    const double pd = gamma * (1.0 - e) / (gamma + gamma_prime * e);
    DecayAngles a;
    a.theta_leak = 2.0 * std::asin(std::sqrt(std::min(1.0, pl)));
    a.theta_damp = 2.0 * std::asin(std::sqrt(std::min(1.0, pd)));
    return a;
}

namespace detail {

inline double population_one(const PureState& st, int q) {
    const std::size_t mask = std::size_t{1} << q;
    double w = 0.0;
    const auto& a = st.amplitudes();
    for (std::size_t i = 0; i < a.size(); ++i)
        if (i & mask) w += std::norm(a[i]);
    return w;
}

// Scales the |1> component of qubit q by factor and renormalizes; realizes
// the no-jump branch of the decay channel.
inline void scale_one_component(PureState& st, int q, double factor) {
    const std::size_t mask = std::size_t{1} << q;
    auto& a = st.amplitudes();
    for (std::size_t i = 0; i < a.size(); ++i)
        if (i & mask) a[i] *= factor;
    st.renormalize();
}

// Jump branch: the qubit is known to have been in |1>; collapse onto it and
// park the slot at |0> (for a decay event this IS the post-decay state, for
// a leak event the slot is an unused placeholder).
inline void collapse_one_to_zero(PureState& st, int q) {
    project_qubit(st, q, 1);
    st.apply_1q_matrix(q, {cplx{0}, cplx{1}, cplx{1}, cplx{0}});
}

}  // namespace detail

// Monte Carlo branch realization of the Kraus set {L0, L1, L2} of the
// damping+leakage channel, in the measurement-conditioned form (no ancilla
// qubits simulated). Leaked targets pass through unchanged.
inline void damping_leakage_channel(PureState& st, int q, double duration, double gamma,
                                    double gamma_prime, Rng& rng) {
    st.check_q(q);
    if (st.leak.leaked(q)) return;
    const auto ang = damping_leakage_angles(duration, gamma, gamma_prime);
    if (ang.theta_leak == 0.0 && ang.theta_damp == 0.0) return;

    const double sl = std::sin(ang.theta_leak / 2.0);
    const double pl = sl * sl;
    if (pl > 0.0) {
        const double w1 = detail::population_one(st, q);
        if (rng.uniform() < pl * w1) {
            detail::collapse_one_to_zero(st, q);
            st.leak.set_leaked(q, true);
            return;
        }
        detail::scale_one_component(st, q, std::cos(ang.theta_leak / 2.0));
    }
    const double sd = std::sin(ang.theta_damp / 2.0);
    const double pd = sd * sd;
    if (pd > 0.0) {
        const double w1 = detail::population_one(st, q);
        if (rng.uniform() < pd * w1) {
            detail::collapse_one_to_zero(st, q);
            return;
        }
        detail::scale_one_component(st, q, std::cos(ang.theta_damp / 2.0));
    }
}

// Idle storage noise: independent Markovian dephasing (Z flip) at the pure
// dephasing rate, followed by spontaneous decay (damping + leakage).
inline void idle_noise(PureState& st, const std::vector<int>& qubits, double duration,
                       const NoiseParams& params, Rng& rng) {
    if (duration <= 0.0) return;
    const double gphi = params.pure_dephasing_rate();
    const double pz = 0.5 * (1.0 - std::exp(-gphi * duration));
    const auto r = params.rates();
    for (int q : qubits) {
        if (!st.leak.leaked(q) && pz > 0.0 && rng.bernoulli(pz))
            st.apply_1q_matrix(q, {cplx{1}, cplx{0}, cplx{0}, cplx{-1}});
        damping_leakage_channel(st, q, duration, r.gamma, r.gamma_prime, rng);
    }
}

// Repumping pulse sequence. A leaked ion returns to the computational
// subspace with probability 1-eps^2, into a uniform classical mixture over
// |0>, |1>. An unleaked ion is merely stored for the pulse duration.
inline void repump(PureState& st, int q, double eps, double duration, const NoiseParams& params,
                   Rng& rng) {
    st.check_q(q);
    if (st.leak.leaked(q)) {
        if (rng.uniform() < eps * eps) return;  // repump failed
        st.leak.set_leaked(q, false);
        if (rng.bernoulli(0.5)) st.apply_1q_matrix(q, {cplx{0}, cplx{1}, cplx{1}, cplx{0}});
        return;
    }
    idle_noise(st, {q}, duration, params, rng);
}

// ---- OU constant calibration (bisection against Table I infidelities) ----

namespace detail {

// Average gate infidelity of the sampled faulty rotation against the ideal
// one, estimated over stationary OU draws. 2x2 unitaries only.
inline double mean_rotation_infidelity(double theta, double phi, double var_int, double var_phase,
                                       int n_samples, Rng& rng) {
    double acc = 0.0;
    for (int s = 0; s < n_samples; ++s) {
        const double fi = var_int > 0.0 ? std::sqrt(var_int) * rng.normal() : 0.0;
        const double fp = var_phase > 0.0 ? std::sqrt(var_phase) * rng.normal() : 0.0;
        const double te = effective_theta(theta, fi);
        const auto u = detail::rotation_matrix(theta, phi);
        const auto v = detail::rotation_matrix(te, phi + fp);
        // Tr(U^dag V)
        cplx tr = std::conj(u[0]) * v[0] + std::conj(u[1]) * v[1] + std::conj(u[2]) * v[2] +
                  std::conj(u[3]) * v[3];
        const double favg = (std::norm(tr) + 2.0) / 6.0;
        acc += 1.0 - favg;
    }
    return acc / n_samples;
}

}  // namespace detail

// Bisection on the diffusion constant so that the mean one-qubit gate
// infidelity matches the target. Intensity is calibrated against the
// z-rotation (axis drifts cannot affect it), the phase constant against the
// global rotation with the intensity constant already in place; each carries
// half the o3 error budget.
struct OUCalibration {
    double intensity_c = 0.0;
    double phase_c = 0.0;
};

inline OUCalibration calibrate_ou_constants(const NoiseParams& base, std::uint64_t seed,
                                            int n_samples = 20000) {
    const double target = base.one_qubit_infidelity;
    OUCalibration out;

    auto bisect = [&](auto&& infid_of_logc, double want) {
        double lo = -45.0, hi = 5.0;
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (infid_of_logc(mid) < want)
                lo = mid;
            else
                hi = mid;
        }
        return std::exp(0.5 * (lo + hi));
    };

    auto int_inf = [&](double logc) {
        Rng rng(seed);
        const double var = OUProcess::stationary_variance(base.intensity_ou.tau_c, std::exp(logc));
        return detail::mean_rotation_infidelity(kPi, 0.0, var, 0.0, n_samples, rng);
    };
    out.intensity_c = bisect(int_inf, target / 2.0);

    const double var_int = OUProcess::stationary_variance(base.intensity_ou.tau_c, out.intensity_c);
    auto ph_inf = [&](double logc) {
        Rng rng(seed + 1);
        const double var = OUProcess::stationary_variance(base.phase_ou.tau_c, std::exp(logc));
        return detail::mean_rotation_infidelity(kPi, 0.0, var_int, var, n_samples, rng);
    };
    out.phase_c = bisect(ph_inf, target);
    return out;
}

inline void apply_calibration(NoiseParams& p, const OUCalibration& cal) {
    p.intensity_ou.c = cal.intensity_c;
    p.phase_ou.c = cal.phase_c;
}

}  // namespace tiqec
