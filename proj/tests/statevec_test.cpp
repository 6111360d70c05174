#include "tiqec/statevec.hpp"

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "tiqec/pauli.hpp"
#include "tiqec/rng.hpp"

using namespace tiqec;

namespace {

PureState random_register(int n, Rng& rng) {
    PureState st(n);
    for (auto& a : st.amplitudes()) a = cplx(rng.normal(), rng.normal());
    st.renormalize();
    return st;
}

double state_fidelity_vs(const PureState& st, const oracle::Vec& v) {
    return oracle::fidelity(oracle::to_eigen(st), v);
}

}  // namespace

TEST(GlobalRotation, PauliXCase) {
    // theta=pi, phi=0 on |0> -> -i|1> (global phase tolerated via fidelity)
    PureState st(1);
    apply_global_rotation(st, {0}, kPi, 0.0);
    EXPECT_NEAR(std::abs(st.amplitudes()[0]), 0.0, 1e-12);
    EXPECT_NEAR(std::norm(st.amplitudes()[1]), 1.0, 1e-12);
    // exact amplitude check of the -i convention
    EXPECT_NEAR(std::abs(st.amplitudes()[1] - cplx(0.0, -1.0)), 0.0, 1e-12);
}

TEST(GlobalRotation, ThetaZeroIsIdentity) {
    Rng rng(7);
    PureState st = random_register(3, rng);
    PureState ref = st;
    apply_global_rotation(st, {0, 1, 2}, 0.0, 1.234);
    EXPECT_NEAR(PureState::fidelity(st, ref), 1.0, 1e-12);
}

TEST(GlobalRotation, MatchesMatrixExponentialOracle) {
    // theta=pi/2, phi=0 on 2-qubit |00>, compared against the 4x4 exp oracle
    PureState st(2);
    apply_global_rotation(st, {0, 1}, kPi / 2.0, 0.0);
    auto u = oracle::global_rotation_matrix({0, 1}, kPi / 2.0, 0.0, 2);
    oracle::Vec v0 = oracle::Vec::Zero(4);
    v0(0) = 1.0;
    EXPECT_NEAR(state_fidelity_vs(st, u * v0), 1.0, 1e-12);
}

TEST(GlobalRotation, SkipsLeakedTargets) {
    Rng rng(3);
    PureState st = random_register(2, rng);
    PureState ref = st;
    st.leak.set_leaked(1, true);
    ref.leak.set_leaked(1, true);
    apply_global_rotation(st, {0, 1}, 0.77, 0.2);
    apply_global_rotation(ref, {0}, 0.77, 0.2);
    EXPECT_NEAR(PureState::fidelity(st, ref), 1.0, 1e-12);
}

TEST(GlobalRotation, TargetOutOfRangeThrows) {
    PureState st(2);
    EXPECT_THROW(apply_global_rotation(st, {2}, 0.1, 0.0), Error);
    EXPECT_THROW(apply_global_rotation(st, {}, 0.1, 0.0), Error);
}

TEST(ZRotation, FullTurnIsGlobalPhase) {
    Rng rng(11);
    PureState st = random_register(2, rng);
    PureState ref = st;
    apply_z_rotation(st, 0, 2.0 * kPi);
    EXPECT_NEAR(PureState::fidelity(st, ref), 1.0, 1e-12);
}

TEST(ZRotation, PiMapsPlusToMinus) {
    PureState st(1);
    apply_global_rotation(st, {0}, kPi / 2.0, kPi / 2.0);  // |0> -> |+> up to phase
    EXPECT_NEAR(pauli_expectation(st, PauliString::parse(1, "X1")), 1.0, 1e-12);
    apply_z_rotation(st, 0, kPi);
    EXPECT_NEAR(pauli_expectation(st, PauliString::parse(1, "X1")), -1.0, 1e-12);
}

TEST(ZRotation, MatchesOracleOnRandomState) {
    Rng rng(5);
    PureState st = random_register(2, rng);
    oracle::Vec v = oracle::to_eigen(st);
    apply_z_rotation(st, 1, kPi / 3.0);
    auto u = oracle::z_rotation_matrix(1, kPi / 3.0, 2);
    EXPECT_GT(state_fidelity_vs(st, u * v), 1.0 - 1e-12);
}

TEST(MS, GhzFromTwoQubitVacuum) {
    // U_MS,0(pi/2)|00> = (|00> - i|11>)/sqrt(2) up to global phase
    PureState st(2);
    apply_ms(st, {0, 1}, kPi / 2.0, 0.0);
    oracle::Vec ghz = oracle::Vec::Zero(4);
    ghz(0) = 1.0 / std::sqrt(2.0);
    ghz(3) = cplx(0.0, -1.0) / std::sqrt(2.0);
    EXPECT_NEAR(state_fidelity_vs(st, ghz), 1.0, 1e-12);
}

TEST(MS, LargerRegistersMatchOracle) {
    for (int n : {3, 4, 5}) {
        PureState st(n);
        std::vector<int> targets(n);
        for (int i = 0; i < n; ++i) targets[i] = i;
        apply_ms(st, targets, kPi / 2.0, 0.0);
        auto u = oracle::ms_matrix(targets, kPi / 2.0, 0.0, n);
        oracle::Vec v0 = oracle::Vec::Zero(1 << n);
        v0(0) = 1.0;
        EXPECT_NEAR(state_fidelity_vs(st, u * v0), 1.0, 1e-12) << "n=" << n;
    }
}

TEST(MS, ThetaZeroIsIdentity) {
    Rng rng(9);
    PureState st = random_register(3, rng);
    PureState ref = st;
    apply_ms(st, {0, 2}, 0.0, 0.3);
    EXPECT_NEAR(PureState::fidelity(st, ref), 1.0, 1e-12);
}

TEST(MS, PhasePiHalfMatchesOracle) {
    Rng rng(13);
    PureState st = random_register(2, rng);
    oracle::Vec v = oracle::to_eigen(st);
    apply_ms(st, {0, 1}, kPi / 2.0, kPi / 2.0);
    auto u = oracle::ms_matrix({0, 1}, kPi / 2.0, kPi / 2.0, 2);
    EXPECT_GT(state_fidelity_vs(st, u * v), 1.0 - 1e-12);
}

TEST(MS, DuplicateTargetsThrow) {
    PureState st(2);
    EXPECT_THROW(apply_ms(st, {0, 0}, kPi / 2.0, 0.0), Error);
}

TEST(MS, CommutesWithTargetRelabeling) {
    Rng rng(17);
    PureState a = random_register(3, rng);
    PureState b = a;
    apply_ms(a, {0, 1, 2}, kPi / 2.0, 0.7);
    apply_ms(b, {2, 0, 1}, kPi / 2.0, 0.7);
    EXPECT_NEAR(PureState::fidelity(a, b), 1.0, 1e-12);
}

TEST(MS, SingleUnleakedTargetIsIdentity) {
    Rng rng(19);
    PureState st = random_register(2, rng);
    st.leak.set_leaked(0, true);
    PureState ref = st;
    apply_ms(st, {0, 1}, kPi / 2.0, 0.0);
    EXPECT_NEAR(PureState::fidelity(st, ref), 1.0, 1e-12);
}

TEST(MS, PropagationIdentityZi) {
    // U_MS,0(pi/2) Z_i == Y_i X_j U_MS,0(pi/2) on random states (fidelity, so
    // the overall +-1 convention drops out)
    Rng rng(23);
    for (int rep = 0; rep < 20; ++rep) {
        PureState a = random_register(2, rng);
        PureState b = a;
        apply_pauli_ref:
        a.apply_pauli(PauliString::parse(2, "Z1"));
        apply_ms(a, {0, 1}, kPi / 2.0, 0.0);
        apply_ms(b, {0, 1}, kPi / 2.0, 0.0);
        b.apply_pauli(PauliString::parse(2, "Y1X2"));
        EXPECT_GT(PureState::fidelity(a, b), 1.0 - 1e-12);
    }
}

TEST(MS, PropagationIdentityXi) {
    Rng rng(29);
    PureState a = random_register(2, rng);
    PureState b = a;
    a.apply_pauli(PauliString::parse(2, "X1"));
    apply_ms(a, {0, 1}, kPi / 2.0, 0.0);
    apply_ms(b, {0, 1}, kPi / 2.0, 0.0);
    b.apply_pauli(PauliString::parse(2, "X1"));
    EXPECT_GT(PureState::fidelity(a, b), 1.0 - 1e-12);
}

TEST(NormPreservation, RandomGateSequences) {
    Rng rng(31);
    PureState st = random_register(4, rng);
    for (int k = 0; k < 200; ++k) {
        const int kind = static_cast<int>(rng.uniform() * 3);
        const double theta = (rng.uniform() - 0.5) * 4.0 * kPi;
        const double phi = rng.uniform() * 2.0 * kPi;
        if (kind == 0)
            apply_global_rotation(st, {0, 1, 2, 3}, theta, phi);
        else if (kind == 1)
            apply_z_rotation(st, static_cast<int>(rng.uniform() * 4), theta);
        else
            apply_ms(st, {0, 1, 2, 3}, theta, phi);
        ASSERT_LT(std::abs(st.norm_sq() - 1.0), 1e-10);
    }
}

TEST(MeasureZ, DeterministicOnBasisStates) {
    PureState st(1);
    Rng rng(1);
    EXPECT_EQ(measure_z(st, 0, rng), +1);
    st.set_computational_basis(1);
    EXPECT_EQ(measure_z(st, 0, rng), -1);
}

TEST(MeasureZ, PlusStateIsFair) {
    Rng rng(37);
    const int trials = 100000;
    int plus = 0;
    for (int t = 0; t < trials; ++t) {
        PureState st(1);
        apply_global_rotation(st, {0}, kPi / 2.0, kPi / 2.0);
        if (measure_z(st, 0, rng) == +1) ++plus;
    }
    const double freq = static_cast<double>(plus) / trials;
    const double sigma = std::sqrt(0.25 / trials);
    EXPECT_NEAR(freq, 0.5, 3.0 * sigma);
}

TEST(MeasureZ, LeakedReportsBrightOutcome) {
    Rng rng(41);
    PureState st(2);
    apply_global_rotation(st, {0, 1}, kPi, 0.0);  // both to |1>
    st.leak.set_leaked(0, true);
    // leaked ion fluoresces: deterministically the |0> (+1) outcome
    for (int k = 0; k < 10; ++k) EXPECT_EQ(measure_z(st, 0, rng), +1);
}

TEST(Reset, ExactZeroWithoutFlip) {
    Rng rng(43);
    PureState st = random_register(2, rng);
    reset(st, 0, 0, 0.0, rng);
    EXPECT_NEAR(pauli_expectation(st, PauliString::parse(2, "Z1")), 1.0, 1e-12);
}

TEST(Reset, FlipFrequencyMatchesTableValue) {
    Rng rng(47);
    const int trials = 1000000;
    const double p = 5e-3;
    int flips = 0;
    PureState st(1);
    for (int t = 0; t < trials; ++t) {
        reset(st, 0, 0, p, rng);
        if (pauli_expectation(st, PauliString::parse(1, "Z1")) < 0.0) ++flips;
    }
    const double freq = static_cast<double>(flips) / trials;
    const double sigma = std::sqrt(p * (1 - p) / trials);
    EXPECT_NEAR(freq, p, 3.0 * sigma);
}

TEST(Reset, EntangledQubitLeavesConditionalState) {
    // Resetting one half of an entangled pair must leave the partner in the
    // post-measurement conditional state: checked against the 2-qubit
    // density-matrix average over many trials.
    Rng rng(53);
    const int trials = 20000;
    // |psi> = a|00> + b|11>
    const double a = std::sqrt(0.3), b = std::sqrt(0.7);
    double p_partner_one = 0.0;
    for (int t = 0; t < trials; ++t) {
        PureState st(2);
        st.amplitudes()[0] = a;
        st.amplitudes()[3] = b;
        reset(st, 0, 0, 0.0, rng);
        p_partner_one += 0.5 * (1.0 - pauli_expectation(st, PauliString::parse(2, "Z2")));
    }
    p_partner_one /= trials;
    // Measurement statistics of the partner must be unchanged: P(1) = b^2.
    const double sigma = std::sqrt(0.7 * 0.3 / trials);
    EXPECT_NEAR(p_partner_one, b * b, 4.0 * sigma);
}

TEST(Reset, ClearsLeakage) {
    Rng rng(59);
    PureState st(1);
    st.leak.set_leaked(0, true);
    reset(st, 0, 1, 0.0, rng);
    EXPECT_FALSE(st.leak.leaked(0));
    EXPECT_NEAR(pauli_expectation(st, PauliString::parse(1, "Z1")), -1.0, 1e-12);
}

TEST(Reset, RejectsBadFlipProb) {
    Rng rng(1);
    PureState st(1);
    EXPECT_THROW(reset(st, 0, 0, -0.1, rng), Error);
    EXPECT_THROW(reset(st, 0, 0, 1.1, rng), Error);
}

TEST(PauliExpectation, BasicValues) {
    PureState st(1);
    EXPECT_NEAR(pauli_expectation(st, PauliString::parse(1, "Z1")), 1.0, 1e-12);
    apply_global_rotation(st, {0}, kPi / 2.0, kPi / 2.0);  // |+>
    EXPECT_NEAR(pauli_expectation(st, PauliString::parse(1, "X1")), 1.0, 1e-12);
}

TEST(PauliExpectation, MatchesOracleOnRandomStates) {
    Rng rng(61);
    for (int rep = 0; rep < 10; ++rep) {
        PureState st = random_register(3, rng);
        oracle::Vec v = oracle::to_eigen(st);
        PauliString p = PauliString::parse(3, "X1Y2Z3");
        oracle::Mat m = oracle::embed(oracle::pauli_mat('X'), 0, 3) *
                        oracle::embed(oracle::pauli_mat('Y'), 1, 3) *
                        oracle::embed(oracle::pauli_mat('Z'), 2, 3);
        const double expect = (v.adjoint() * m * v)(0).real();
        EXPECT_NEAR(pauli_expectation(st, p), expect, 1e-10);
    }
}

TEST(PauliString, AlgebraAndParsing) {
    PauliString p = PauliString::parse(3, "X1 Z3");
    EXPECT_EQ(p.str(), "X1Z3");
    EXPECT_EQ(p.weight(), 2);
    PauliString q = PauliString::parse(3, "Z1");
    EXPECT_FALSE(p.commutes_with(q));
    PauliString xy = PauliString::parse(2, "X1") * PauliString::parse(2, "Y1");
    // X*Y = iZ
    EXPECT_EQ(xy.str(), "i*Z1");
}
