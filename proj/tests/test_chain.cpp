#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracle.hpp"
#include "ptchain/chain.hpp"
#include "ptchain/errors.hpp"

using namespace ptchain;

TEST(ChainSpec, RejectsBadInput) {
    EXPECT_THROW(ChainSpec(1, 1, 0.0), ValidationError);
    EXPECT_THROW(ChainSpec(10, 0, 0.0), ValidationError);
    EXPECT_THROW(ChainSpec(10, 6, 0.0), ValidationError);
    EXPECT_THROW(ChainSpec(11, 6, 0.0), ValidationError);
    EXPECT_THROW(ChainSpec(10, 2, -0.1), ValidationError);
    EXPECT_THROW(ChainSpec(10, 2, 0.1, 0.0), ValidationError);
    EXPECT_THROW(ChainSpec(10, 2, std::nan(""), 1.0), ValidationError);
    EXPECT_NO_THROW(ChainSpec(10, 5, 0.0));
    EXPECT_NO_THROW(ChainSpec(11, 5, 0.0));
}

TEST(ChainSpec, Accessors) {
    const ChainSpec s(20, 4, 0.3, 2.0);
    EXPECT_EQ(s.mirror_impurity_site(), 17);
    EXPECT_DOUBLE_EQ(s.mu(), 0.2);
    EXPECT_DOUBLE_EQ(s.gamma_over_hopping(), 0.15);
    EXPECT_EQ(s.onsite(4), Complex(0.0, 0.3));
    EXPECT_EQ(s.onsite(17), Complex(0.0, -0.3));
    EXPECT_EQ(s.onsite(5), Complex(0.0, 0.0));
    const auto d = s.onsite_potentials();
    ASSERT_EQ(d.size(), 20u);
    EXPECT_EQ(d[3], Complex(0.0, 0.3));
    EXPECT_EQ(d[16], Complex(0.0, -0.3));

    const ChainSpec t = s.with_gamma(1.5);
    EXPECT_EQ(t.n_sites(), 20);
    EXPECT_EQ(t.impurity_site(), 4);
    EXPECT_DOUBLE_EQ(t.gamma(), 1.5);
    EXPECT_DOUBLE_EQ(t.hopping(), 2.0);
}

TEST(MirrorSite, Involution) {
    for (int n = 1; n <= 9; ++n) EXPECT_EQ(mirror_site(mirror_site(n, 9), 9), n);
    EXPECT_EQ(mirror_site(5, 9), 5);
    EXPECT_THROW(mirror_site(0, 9), ValidationError);
    EXPECT_THROW(mirror_site(10, 9), ValidationError);
}

TEST(Hamiltonian, MatchesIndependentAssembly) {
    const ChainSpec s(9, 3, 0.7, 1.3);
    const ComplexMatrix h = build_hamiltonian(s);
    const auto ref = oracle::hamiltonian(9, 3, 0.7, 1.3);
    for (int i = 0; i < 9; ++i) {
        for (int j = 0; j < 9; ++j) {
            EXPECT_NEAR(h(i, j).real(), static_cast<double>(ref(i, j).real()), 1e-15);
            EXPECT_NEAR(h(i, j).imag(), static_cast<double>(ref(i, j).imag()), 1e-15);
        }
    }
}

TEST(Hamiltonian, PTSymmetric) {
    // P H* P == H with P the site reflection.
    const ChainSpec s(12, 4, 0.9);
    const ComplexMatrix h = build_hamiltonian(s);
    for (int i = 0; i < 12; ++i) {
        for (int j = 0; j < 12; ++j) {
            EXPECT_EQ(std::conj(h(11 - i, 11 - j)), h(i, j));
        }
    }
    EXPECT_NEAR(std::abs(h.trace()), 0.0, 1e-15);
}

TEST(HermitianSpectrum, MatchesDenseAtZeroGamma) {
    for (int n : {2, 3, 8, 13}) {
        const auto e = analytic_spectrum_hermitian(n, 1.5);
        const auto ref = oracle::eigenvalues(n, 1, 0.0, 1.5);
        ASSERT_EQ(e.size(), ref.size());
        for (std::size_t i = 0; i < e.size(); ++i) {
            EXPECT_NEAR(e[i], ref[i].real(), 1e-12);
            if (i > 0) {
                EXPECT_LT(e[i - 1], e[i]);
            }
        }
    }
    const auto three = analytic_spectrum_hermitian(3);
    EXPECT_NEAR(three[0], -std::numbers::sqrt2, 1e-15);
    EXPECT_NEAR(three[1], 0.0, 1e-15);
    EXPECT_NEAR(three[2], std::numbers::sqrt2, 1e-15);
}
