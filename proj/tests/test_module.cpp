#include <doctest.h>

#include "qpc/module.hpp"
#include "support.hpp"

using namespace qpc;
using qpc::testing::Rng;

namespace {

const Prime p3(3);
const Prime p5(5);

Matrix mat(std::initializer_list<std::initializer_list<long>> rows) {
    const auto r = static_cast<Eigen::Index>(rows.size());
    const auto c = r == 0 ? 0 : static_cast<Eigen::Index>(rows.begin()->size());
    Matrix m(r, c);
    Eigen::Index i = 0;
    for (const auto& row : rows) {
        Eigen::Index j = 0;
        for (long v : row) m(i, j++) = PLocal(v);
        ++i;
    }
    return m;
}

FgModule fg(int free_rank, std::vector<int> torsion) { return FgModule{free_rank, std::move(torsion)}; }

bool is_identity(const Matrix& m) { return m == Matrix::Identity(m.rows(), m.cols()); }

void check_smith(const Matrix& m, Prime p) {
    const auto s = smith_normal_form(m, p);
    CHECK(Matrix(s.U * m * s.V) == s.D);
    CHECK(is_identity(s.U * s.Uinv));
    CHECK(is_identity(s.V * s.Vinv));
    for (Eigen::Index i = 0; i < s.D.rows(); ++i)
        for (Eigen::Index j = 0; j < s.D.cols(); ++j)
            if (i != j) CHECK(s.D(i, j).is_zero());
    for (Eigen::Index i = 0; i < s.rank; ++i) {
        CHECK(s.D(i, i) == PLocal(prime_power(p, valuation(s.D(i, i), p))));
        if (i > 0) CHECK(valuation(s.D(i - 1, i - 1), p) <= valuation(s.D(i, i), p));
    }
    for (Eigen::Index i = 0; i < s.U.rows(); ++i)
        for (Eigen::Index j = 0; j < s.U.cols(); ++j) CHECK(is_p_local(s.U(i, j), p));
    for (Eigen::Index i = 0; i < s.V.rows(); ++i)
        for (Eigen::Index j = 0; j < s.V.cols(); ++j) CHECK(is_p_local(s.V(i, j), p));
}

}  // namespace

TEST_CASE("scalars") {
    CHECK_THROWS(Prime(2));
    CHECK_THROWS(Prime(9));
    CHECK(Prime(7).generator() == 8);
    CHECK(valuation(PLocal(18), p3) == 2);
    CHECK(valuation(PLocal::parse("9/2"), p3) == 2);
    CHECK(valuation(PLocal(0), p3) == kInfiniteValuation);
    CHECK(is_p_local(PLocal::parse("1/2"), p3));
    CHECK_FALSE(is_p_local(PLocal::parse("1/3"), p3));
    CHECK(reduce_mod(PLocal::parse("1/2"), p3, 2) == PLocal(5));
    CHECK(reduce_mod(PLocal(-1), p3, 1) == PLocal(2));
    CHECK(twist_scalar(p3, 1) == PLocal(16));
    CHECK(twist_scalar(p3, -1) == PLocal::parse("1/16"));
    CHECK(PLocal::parse("4/6") == PLocal::parse("2/3"));
    CHECK_THROWS(PLocal::parse("x/2"));
    CHECK_THROWS(PLocal::parse("1/0"));
}

TEST_CASE("smith normal form examples") {
    SUBCASE("unit normalization") {
        const auto s = smith_normal_form(mat({{2, 0}, {0, 3}}), p3);
        CHECK(s.D == mat({{1, 0}, {0, 3}}));
        check_smith(mat({{2, 0}, {0, 3}}), p3);
    }
    SUBCASE("zero matrix") {
        const Matrix z = Matrix::Zero(2, 3);
        const auto s = smith_normal_form(z, p3);
        CHECK(s.D == z);
        CHECK(is_identity(s.U));
        CHECK(is_identity(s.V));
        CHECK(s.rank == 0);
    }
    SUBCASE("[[p,1],[0,p]]") {
        for (long pv : {3L, 5L, 7L}) {
            const Prime p(pv);
            const Matrix m = mat({{pv, 1}, {0, pv}});
            // Hand reduction: swap columns, clear the p below the unit pivot,
            // then clear the row; the remaining entry is -p^2.
            Matrix oracle = m;
            oracle.col(0).swap(oracle.col(1));
            oracle.row(1) -= oracle(1, 0) * oracle.row(0);
            oracle.col(1) -= oracle(0, 1) * oracle.col(0);
            CHECK(oracle == mat({{1, 0}, {0, -pv * pv}}));
            CHECK(qpc::testing::invariant_valuations_oracle(m, p) == std::vector<int>{0, 2});
            const auto s = smith_normal_form(m, p);
            CHECK(s.D == mat({{1, 0}, {0, pv * pv}}));
            check_smith(m, p);
        }
    }
}

TEST_CASE("smith normal form properties") {
    Rng rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        const int r = qpc::testing::uniform(rng, 0, 4), c = qpc::testing::uniform(rng, 0, 4);
        Matrix m(r, c);
        for (Eigen::Index i = 0; i < r; ++i)
            for (Eigen::Index j = 0; j < c; ++j) {
                m(i, j) = qpc::testing::random_scalar(rng, p3, 9);
                if (qpc::testing::uniform(rng, 0, 2) == 0) m(i, j) *= PLocal(3);
            }
        check_smith(m, p3);
        const auto s = smith_normal_form(m, p3);
        // idempotence
        CHECK(smith_normal_form(s.D, p3).D == s.D);
        // determinantal divisors
        std::vector<int> got;
        for (Eigen::Index i = 0; i < s.rank; ++i) got.push_back(valuation(s.D(i, i), p3));
        CHECK(got == qpc::testing::invariant_valuations_oracle(m, p3));
        // determinant versus torsion
        if (r == c) {
            const PLocal det = qpc::testing::determinant_oracle(m);
            if (!det.is_zero()) {
                int sum = 0;
                for (int v : got) sum += v;
                CHECK(sum == valuation(det, p3));
                CHECK(normalize_presentation(p3, r, m).torsion_exponents.size() <= static_cast<std::size_t>(r));
            }
        }
    }
}

TEST_CASE("normalize_presentation examples") {
    CHECK(normalize_presentation(p3, 1, mat({{9}})) == fg(0, {2}));
    CHECK(normalize_presentation(p3, 1, mat({{1}})).is_zero());
    CHECK(normalize_presentation(p3, 2, mat({{3, 0}, {0, 0}})) == fg(1, {1}));
    CHECK(normalize_presentation(p3, 2, Matrix::Zero(2, 0)) == fg(2, {}));
    CHECK(normalize_presentation(p3, 2, mat({{3, 1}, {0, 3}})) == fg(0, {2}));
    CHECK(normalize_presentation(p5, 3, mat({{5, 0, 0}, {0, 25, 0}, {0, 0, 2}})) == fg(0, {2, 1}));
}

TEST_CASE("well-definedness") {
    const CyclicSum z = CyclicSum::free(p3, 1);
    const CyclicSum t1 = CyclicSum::cyclic(p3, 1);
    const CyclicSum t2 = CyclicSum::cyclic(p3, 2);
    CHECK_THROWS_AS(MatrixMap::make(t1, z, mat({{1}})), ValidationError);
    CHECK_THROWS_AS(MatrixMap::make(t1, t2, mat({{1}})), ValidationError);
    CHECK_NOTHROW(MatrixMap::make(t1, t2, mat({{3}})));
    CHECK_NOTHROW(MatrixMap::make(t2, t1, mat({{1}})));
    CHECK_THROWS_AS(MatrixMap::make(z, z, Matrix::Constant(1, 1, PLocal::parse("1/3"))), ValidationError);
    CHECK(MatrixMap::make(z, t1, mat({{4}})).matrix == mat({{1}}));
    CHECK(MatrixMap::make(z, t2, Matrix::Constant(1, 1, PLocal::parse("1/2"))).matrix == mat({{5}}));
}

TEST_CASE("kernel, cokernel, image examples") {
    const CyclicSum z = CyclicSum::free(p3, 1);
    SUBCASE("multiplication by p") {
        const auto kci = kernel_cokernel_image(MatrixMap::make(z, z, mat({{3}})));
        CHECK(kci.kernel().is_zero());
        CHECK(kci.cokernel() == fg(0, {1}));
        CHECK(kci.image() == fg(1, {}));
    }
    SUBCASE("zero map") {
        const CyclicSum m(p3, {0, 2});
        const CyclicSum n(p3, {1, 0});
        const auto kci = kernel_cokernel_image(MatrixMap::zero(m, n));
        CHECK(kci.kernel() == m.normal_form());
        CHECK(kci.cokernel() == n.normal_form());
        CHECK(kci.image().is_zero());
    }
    SUBCASE("Z_(p) -> Z/p^2, 1 -> p") {
        const auto f = MatrixMap::make(z, CyclicSum::cyclic(p3, 2), mat({{3}}));
        const auto kci = kernel_cokernel_image(f);
        CHECK(kci.kernel() == fg(1, {}));
        // Direct congruence solve: 3x = 0 mod 9 iff x in 3 Z_(3).
        CHECK(valuation(kci.kernel_inclusion.matrix(0, 0), p3) == 1);
        CHECK(kci.cokernel() == fg(0, {1}));
        CHECK(kci.image() == fg(0, {1}));
    }
}

TEST_CASE("homology examples") {
    const CyclicSum z = CyclicSum::free(p3, 1);
    const CyclicSum zero(p3);
    const auto mul_p = MatrixMap::make(z, z, mat({{3}}));
    CHECK(homology_at(MatrixMap::zero(zero, z), mul_p).is_zero());
    CHECK(homology_at(mul_p, MatrixMap::zero(z, zero)) == fg(0, {1}));
    const CyclicSum m(p3, {0, 2, 1});
    const auto id = MatrixMap::identity(m);
    CHECK(homology_at(MatrixMap::zero(zero, m), id).is_zero());
    CHECK(homology_at(id, MatrixMap::zero(m, zero)).is_zero());
    CHECK(homology_at(MatrixMap::zero(m, m), MatrixMap::zero(m, m)) == m.normal_form());
    CHECK_THROWS_WITH_AS(homology_at(id, id), doctest::Contains("not a complex"), ValidationError);
}

TEST_CASE("tensor examples") {
    for (int a = 1; a <= 3; ++a)
        for (int b = 1; b <= 3; ++b) CHECK(tensor_modules(p3, fg(0, {a}), fg(0, {b})) == fg(0, {std::min(a, b)}));
    CHECK(tensor_modules(p3, fg(2, {}), fg(0, {1})) == fg(0, {1, 1}));
    CHECK(tensor_modules(p3, fg(1, {2}), FgModule{}).is_zero());
    CHECK(tensor_modules(p3, fg(1, {2}), fg(1, {1})) == fg(1, {2, 1, 1}));
}

TEST_CASE("exactness on random maps") {
    Rng rng(2024);
    for (int trial = 0; trial < 1000; ++trial) {
        const CyclicSum src = qpc::testing::random_cyclic_sum(rng, p3);
        const CyclicSum tgt = qpc::testing::random_cyclic_sum(rng, p3);
        const MatrixMap f = qpc::testing::random_map(rng, src, tgt);
        const auto kci = kernel_cokernel_image(f);
        CHECK(compose(f, kci.kernel_inclusion).is_zero());
        CHECK(compose(kci.cokernel_projection, f).is_zero());
        CHECK(compose(kci.image_inclusion, kci.coimage_projection) == f);
        CHECK(is_injective(kci.kernel_inclusion));
        CHECK(is_injective(kci.image_inclusion));
        CHECK(is_surjective(kci.coimage_projection));
        CHECK(is_surjective(kci.cokernel_projection));
        CHECK(homology_at(kci.kernel_inclusion, kci.coimage_projection).is_zero());
        CHECK(homology_at(f, kci.cokernel_projection).is_zero());
        // rank-nullity over Q
        CHECK(kci.kernel().free_rank + kci.image().free_rank == src.free_rank());
        CHECK(kci.image().free_rank + kci.cokernel().free_rank == tgt.free_rank());
    }
}

TEST_CASE("tensor right-exactness") {
    Rng rng(77);
    for (int trial = 0; trial < 200; ++trial) {
        const CyclicSum a = qpc::testing::random_cyclic_sum(rng, p3, 3, 3);
        const CyclicSum m = qpc::testing::random_cyclic_sum(rng, p3, 3, 3);
        const CyclicSum b = qpc::testing::random_cyclic_sum(rng, p3, 3, 3);
        const auto surj = kernel_cokernel_image(qpc::testing::random_map(rng, a, b)).coimage_projection;
        REQUIRE(is_surjective(surj));
        CHECK(is_surjective(tensor(surj, MatrixMap::identity(m))));
        CHECK(is_surjective(tensor(MatrixMap::identity(m), surj)));
    }
}

TEST_CASE("tensor is bifunctorial") {
    Rng rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const CyclicSum a = qpc::testing::random_cyclic_sum(rng, p3, 2, 3);
        const CyclicSum b = qpc::testing::random_cyclic_sum(rng, p3, 2, 3);
        const CyclicSum c = qpc::testing::random_cyclic_sum(rng, p3, 2, 3);
        const CyclicSum d = qpc::testing::random_cyclic_sum(rng, p3, 2, 3);
        const auto f1 = qpc::testing::random_map(rng, a, b), f2 = qpc::testing::random_map(rng, b, c);
        const auto g1 = qpc::testing::random_map(rng, d, d), g2 = qpc::testing::random_map(rng, d, d);
        CHECK(tensor(f2 * f1, g2 * g1) == tensor(f2, g2) * tensor(f1, g1));
    }
}
