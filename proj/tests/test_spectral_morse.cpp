#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>

#include "shdx/errors.hpp"
#include "shdx/morse_form.hpp"
#include "shdx/spectral_free.hpp"
#include "shdx/symplectic.hpp"
#include "support.hpp"

using namespace shdx;
using shdx::test::max_abs;
using shdx::test::zero_block;

namespace {

double sorted_distance(std::vector<double> a, const Vector& b) {
    std::sort(a.begin(), a.end());
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b(static_cast<Eigen::Index>(i))));
    return worst;
}

}  // namespace

TEST_CASE("free spectrum formula matches the assembled form") {
    for (int m : {1, 2, 3}) {
        for (int n : {4, 7, 16}) {
            for (double alpha : {0.0, kPi, kPi / 3, 2.0, 5.5}) {
                const double h = 1.0 / n;
                const UnitCircleParam w(alpha);
                const FreeSpectrum fs = free_spectrum(m, n, h, w);
                const HessianForm form =
                    assemble_hessian(CoefficientSequence::constant(m, n, h, zero_block(m)), w);
                REQUIRE(form.dim() == 2 * m * n);
                CHECK(sorted_distance(fs.values(), form.eigenvalues()) <= 1e-9);
                CHECK(form.is_real() == w.is_real());
            }
        }
    }
}

TEST_CASE("free modes follow the closed form") {
    const int n = 6;
    const double h = 0.5;
    const FreeSpectrum fs = free_spectrum(2, n, h, UnitCircleParam(1.2));
    REQUIRE(fs.modes.size() == static_cast<std::size_t>(n));
    for (const auto& mode : fs.modes) {
        const double a = (mode.k * kPi + 0.6) / n;
        CHECK(mode.alpha_k == doctest::Approx(a));
        CHECK(mode.lambda_plus == doctest::Approx(2.0 / h * std::sin(a)));
        CHECK(mode.lambda_minus == doctest::Approx(-2.0 / h * std::sin(a)));
        CHECK(mode.multiplicity == 2);
    }
    int total = 0;
    for (const auto& e : fs.entries) total += e.multiplicity;
    CHECK(total == 2 * 2 * n);
    CHECK_THROWS_AS(free_spectrum(1, 1, 1.0, UnitCircleParam(0.0)), Error);
}

TEST_CASE("free eigenvectors are orthonormal eigenvectors of the form") {
    for (double alpha : {0.0, kPi, 1.0}) {
        const int m = 2;
        const int n = 5;
        const double h = 0.2;
        const UnitCircleParam w(alpha);
        const CMatrix hmat = assemble_hessian(CoefficientSequence::constant(m, n, h, zero_block(m)), w).complex_matrix();
        const auto vecs = free_eigenvectors(m, n, h, w);
        REQUIRE(vecs.size() == static_cast<std::size_t>(2 * m * n));
        CMatrix basis(2 * m * n, vecs.size());
        for (std::size_t i = 0; i < vecs.size(); ++i) {
            const auto& v = vecs[i];
            CHECK(v.hessian_value == doctest::Approx(-v.recursion_value));
            CHECK((hmat * v.values - v.hessian_value * v.values).norm() < 1e-10);
            basis.col(static_cast<Eigen::Index>(i)) = v.values;
        }
        CHECK((basis.adjoint() * basis - CMatrix::Identity(basis.cols(), basis.cols())).norm() < 1e-10);
    }
}

TEST_CASE("real free eigenvectors at omega = 1") {
    const int m = 1;
    const int n = 8;
    const double h = 1.0 / n;
    const Matrix hmat = assemble_hessian(CoefficientSequence::constant(m, n, h, zero_block(m)), UnitCircleParam::one())
                            .real_matrix();
    for (int k = 1; k < 4; ++k) {
        for (int branch : {1, -1}) {
            for (const Vector& v : free_real_eigenvectors(m, n, h, k, branch)) {
                const double lambda = (v.transpose() * hmat * v)(0, 0) / v.squaredNorm();
                CHECK((hmat * v - lambda * v).norm() < 1e-10 * (1.0 + std::abs(lambda)));
                CHECK(std::abs(std::abs(lambda) - 2.0 / h * std::sin(k * kPi / n)) < 1e-9);
            }
        }
    }
}

TEST_CASE("Hessian is Hermitian and its inertia sums to 2mN") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 24; ++trial) {
        const int m = 1 + trial % 3;
        const int n = 6 + trial % 5;
        const CoefficientSequence s = shdx::test::random_system(rng, m, n, 2.0);
        for (double a : {0.0, kPi, 0.9}) {
            const HessianForm form = assemble_hessian(s, UnitCircleParam(a));
            const CMatrix hm = form.complex_matrix();
            CHECK((hm - hm.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
            CHECK(inertia(form).total() == 2 * m * n);
        }
    }
}

TEST_CASE("inertia counts with a relative zero threshold") {
    Vector e(5);
    e << -3.0, -1e-12, 0.0, 1e-9, 2.0;
    const MorseTriple t = inertia(e, 1e-8);
    CHECK(t.minus == 1);
    CHECK(t.zero == 3);
    CHECK(t.plus == 1);
    CHECK(inertia(Vector::Zero(3)).zero == 3);
}

TEST_CASE("B = 0 examples") {
    const auto zero1 = CoefficientSequence::constant(1, 8, 0.125, zero_block(1));
    const MorseTriple t = morse_indices(zero1, UnitCircleParam::one());
    CHECK(t.minus == 7);
    CHECK(t.zero == 2);
    CHECK(t.plus == 7);
    const auto zero2 = CoefficientSequence::constant(2, 8, 0.125, zero_block(2));
    const MorseTriple t2 = morse_indices(zero2, UnitCircleParam::one());
    CHECK(t2.minus == 14);
    CHECK(t2.zero == 4);
    CHECK(t2.plus == 14);
    const MorseTriple t3 = morse_indices(zero1, UnitCircleParam(kPi / 3));
    CHECK(t3.zero == 0);
    CHECK(t3.minus == 8);
}

TEST_CASE("Floquet: m0 equals the nullity of the monodromy") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 30; ++trial) {
        const int m = 1 + trial % 3;
        const CoefficientSequence s = shdx::test::random_system(rng, m, 8);
        const Matrix mono = fundamental_solution(s).monodromy();
        for (double a : {0.0, kPi, 2.0}) {
            const UnitCircleParam w(a);
            CHECK(morse_inertia(s, w).zero == nullity(mono, w));
        }
    }
}

TEST_CASE("inertia is invariant under a cyclic shift of the coefficients") {
    std::mt19937_64 rng(43);
    const CoefficientSequence s = shdx::test::random_system(rng, 2, 8);
    std::vector<Matrix> shifted(s.blocks().begin() + 3, s.blocks().end());
    shifted.insert(shifted.end(), s.blocks().begin(), s.blocks().begin() + 3);
    const CoefficientSequence t(2, s.h(), shifted);
    for (double a : {0.0, 1.0, kPi}) {
        const MorseTriple x = morse_inertia(s, UnitCircleParam(a));
        const MorseTriple y = morse_inertia(t, UnitCircleParam(a));
        CHECK(x.minus == y.minus);
        CHECK(x.plus == y.plus);
    }
}

TEST_CASE("conjugate omega gives the same inertia") {
    std::mt19937_64 rng(44);
    const CoefficientSequence s = shdx::test::random_system(rng, 2, 6);
    const MorseTriple x = morse_inertia(s, UnitCircleParam(1.1));
    const MorseTriple y = morse_inertia(s, UnitCircleParam(-1.1));
    CHECK(x.minus == y.minus);
    CHECK(x.zero == y.zero);
}

TEST_CASE("adding a positive coefficient never lowers m-") {
    std::mt19937_64 rng(45);
    for (int trial = 0; trial < 10; ++trial) {
        const CoefficientSequence s = shdx::test::random_system(rng, 1, 8, 2.0);
        std::vector<Matrix> bigger = s.blocks();
        for (auto& b : bigger) b += 0.5 * Matrix::Identity(2, 2);
        const CoefficientSequence t(1, s.h(), bigger);
        CHECK(morse_inertia(t, UnitCircleParam(0.5)).minus >= morse_inertia(s, UnitCircleParam(0.5)).minus);
    }
}

TEST_CASE("floquet mismatch is reported when the threshold is absurd") {
    const auto zero1 = CoefficientSequence::constant(1, 8, 0.125, zero_block(1));
    CHECK_THROWS_AS(morse_indices(zero1, UnitCircleParam::one(), 0.9), Error);
}

TEST_CASE("discrete splitting numbers for B = 0 at omega = 1 are (m, m)") {
    for (int m : {1, 2}) {
        const auto s = CoefficientSequence::constant(m, 8, 0.125, zero_block(m));
        const SplittingPair p = splitting_discrete(s, UnitCircleParam::one());
        CHECK(p.plus == m);
        CHECK(p.minus == m);
        const SplittingPair q = splitting_discrete(s, UnitCircleParam(1.0));
        CHECK(q.plus == 0);
        CHECK(q.minus == 0);
    }
}

TEST_CASE("Hessian dump roundtrip") {
    std::mt19937_64 rng(46);
    const CoefficientSequence s = shdx::test::random_system(rng, 1, 4, 1.5);
    const auto path = (std::filesystem::temp_directory_path() / "shdx_dump_test.bin").string();
    for (double a : {0.0, 0.7}) {
        const HessianForm form = assemble_hessian(s, UnitCircleParam(a));
        write_hessian_dump(form, path);
        CHECK(std::filesystem::file_size(path) == 8 + 16 * 64);
        const CMatrix back = read_hessian_dump(path);
        CHECK((back - form.complex_matrix()).cwiseAbs().maxCoeff() == 0.0);
    }
    std::remove(path.c_str());
    CHECK_THROWS_AS(read_hessian_dump(path), Error);
    CHECK_THROWS_AS(write_hessian_dump(assemble_hessian(s, UnitCircleParam(0.0)), "/nonexistent/dir/h.bin"), Error);
}
