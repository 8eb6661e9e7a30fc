// Shared helpers for the test suites: seeded random generators and
// independent oracles that do not go through the Smith-form code paths.
#pragma once

#include <random>
#include <vector>

#include "qpc/adams.hpp"
#include "qpc/complex.hpp"
#include "qpc/module.hpp"

namespace qpc::testing {

using Rng = std::mt19937_64;

inline int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

/// Small p-local rational; occasionally with a denominator prime to p.
inline PLocal random_scalar(Rng& rng, Prime p, int bound = 6) {
    const int num = uniform(rng, -bound, bound);
    if (uniform(rng, 0, 4) != 0) return PLocal(num);
    int den = uniform(rng, 1, 4);
    while (den % p.value() == 0) ++den;
    return PLocal(mpz_class(num), mpz_class(den));
}

inline CyclicSum random_cyclic_sum(Rng& rng, Prime p, int max_rank = 4, int max_exp = 4) {
    const int n = uniform(rng, 0, max_rank);
    std::vector<int> orders;
    for (int i = 0; i < n; ++i) orders.push_back(uniform(rng, 0, 2) == 0 ? 0 : uniform(rng, 1, max_exp));
    return CyclicSum(p, orders);
}

/// Random homomorphism source -> target, respecting generator orders.
inline MatrixMap random_map(Rng& rng, const CyclicSum& source, const CyclicSum& target) {
    const Prime p = source.prime();
    Matrix m = Matrix::Zero(target.size(), source.size());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            const int e = source.order(j), f = target.order(i);
            if (e > 0 && f == 0) continue;
            PLocal c = random_scalar(rng, p);
            if (e > 0 && f > e) c *= PLocal(prime_power(p, f - e));
            if (uniform(rng, 0, 3) == 0) c *= PLocal(p.value());
            m(i, j) = c;
        }
    return MatrixMap::make(source, target, m);
}

/// Exact determinant over Q by Laplace expansion (small matrices only).
inline PLocal determinant_oracle(const Matrix& m) {
    const Eigen::Index n = m.rows();
    if (n == 0) return PLocal(1);
    if (n == 1) return m(0, 0);
    PLocal det(0);
    for (Eigen::Index j = 0; j < n; ++j) {
        if (m(0, j).is_zero()) continue;
        Matrix minor(n - 1, n - 1);
        for (Eigen::Index r = 1; r < n; ++r) {
            Eigen::Index c2 = 0;
            for (Eigen::Index c = 0; c < n; ++c)
                if (c != j) minor(r - 1, c2++) = m(r, c);
        }
        PLocal term = m(0, j) * determinant_oracle(minor);
        det = (j % 2 == 0) ? det + term : det - term;
    }
    return det;
}

/// Valuations of the Smith invariants via determinantal divisors: the k-th
/// divisor is the minimum valuation over all k x k minors.
inline std::vector<int> invariant_valuations_oracle(const Matrix& m, Prime p) {
    const Eigen::Index rows = m.rows(), cols = m.cols();
    std::vector<int> divisors;
    for (Eigen::Index k = 1; k <= std::min(rows, cols); ++k) {
        int best = kInfiniteValuation;
        std::vector<bool> rsel(static_cast<std::size_t>(rows), false), csel(static_cast<std::size_t>(cols), false);
        std::fill(rsel.end() - k, rsel.end(), true);
        do {
            std::fill(csel.begin(), csel.end(), false);
            std::fill(csel.end() - k, csel.end(), true);
            do {
                Matrix sub(k, k);
                Eigen::Index r2 = 0;
                for (Eigen::Index r = 0; r < rows; ++r) {
                    if (!rsel[static_cast<std::size_t>(r)]) continue;
                    Eigen::Index c2 = 0;
                    for (Eigen::Index c = 0; c < cols; ++c)
                        if (csel[static_cast<std::size_t>(c)]) sub(r2, c2++) = m(r, c);
                    ++r2;
                }
                best = std::min(best, valuation(determinant_oracle(sub), p));
            } while (std::next_permutation(csel.begin(), csel.end()));
        } while (std::next_permutation(rsel.begin(), rsel.end()));
        if (best == kInfiniteValuation) break;
        divisors.push_back(best);
    }
    std::vector<int> out;
    int prev = 0;
    for (int d : divisors) {
        out.push_back(d - prev);
        prev = d;
    }
    return out;
}

/// Unimodular integer matrix as a product of random elementary matrices.
inline Matrix random_unimodular(Rng& rng, Eigen::Index n) {
    Matrix u = Matrix::Identity(n, n);
    if (n < 2) return u;
    for (int step = 0; step < 2 * static_cast<int>(n); ++step) {
        const auto i = static_cast<Eigen::Index>(uniform(rng, 0, static_cast<int>(n) - 1));
        auto j = static_cast<Eigen::Index>(uniform(rng, 0, static_cast<int>(n) - 2));
        if (j >= i) ++j;
        u.row(i) += PLocal(uniform(rng, -2, 2)) * u.row(j);
    }
    return u;
}

/// Random object: a block sum of weight lines, non-split rank-2 pieces (in a
/// random basis) and cyclic torsion pieces with psi = 1 + p r or a twist
/// scalar.
inline AdamsModule random_adams_module(Rng& rng, Prime p, int max_pieces = 3, int max_exp = 3, long max_weight = 2,
                                       bool allow_torsion = true) {
    AdamsModule m = AdamsModule::zero(p);
    const int pieces = uniform(rng, 1, max_pieces);
    for (int k = 0; k < pieces; ++k) {
        const int kind = uniform(rng, 0, allow_torsion ? 2 : 1);
        const long a = uniform(rng, static_cast<int>(-max_weight), static_cast<int>(max_weight));
        if (kind == 0) {
            m = m + AdamsModule::line(p, a);
        } else if (kind == 1) {
            long b = uniform(rng, static_cast<int>(-max_weight), static_cast<int>(max_weight));
            Matrix psi(2, 2);
            psi << twist_scalar(p, a), PLocal(a == b ? 0 : uniform(rng, 0, 2)), PLocal(0), twist_scalar(p, b);
            const Matrix u = random_unimodular(rng, 2);
            const Matrix uinv = *solve(u, Matrix::Identity(2, 2), p);
            m = m + AdamsModule::make(CyclicSum::free(p, 2), u * psi * uinv);
        } else {
            const int e = uniform(rng, 1, max_exp);
            const PLocal s = uniform(rng, 0, 1) == 0 ? twist_scalar(p, a) : PLocal(1 + p.value() * uniform(rng, 0, 4));
            m = m + AdamsModule::make(CyclicSum::cyclic(p, e), Matrix::Constant(1, 1, s));
        }
    }
    return m;
}

/// Random element of Hom(M, N) in the category.
inline AdamsMap random_adams_map(Rng& rng, const AdamsModule& m, const AdamsModule& n) {
    const HomGroup hom(m, n);
    Matrix c(static_cast<Eigen::Index>(hom.generators().size()), 1);
    for (Eigen::Index k = 0; k < c.rows(); ++k) c(k, 0) = PLocal(uniform(rng, -3, 3));
    return hom.combine(c);
}

/// Random bounded complex: a direct sum of pieces M[d], [A -> B] and
/// [ker f -> A -> B] placed in degrees lo .. hi.
inline BoundedComplex random_bounded_complex(Rng& rng, Prime p, long lo, long hi, int pieces = 2, bool allow_torsion = true) {
    BoundedComplex x = BoundedComplex::zero(p);
    for (int k = 0; k < pieces; ++k) {
        const int kind = uniform(rng, 0, 2);
        const long top = uniform(rng, static_cast<int>(lo), static_cast<int>(hi));
        const AdamsModule a = random_adams_module(rng, p, 2, 2, 1, allow_torsion);
        if (kind == 0 || top == lo) {
            x = direct_sum(x, BoundedComplex::concentrated(a, top));
            continue;
        }
        const AdamsModule b = random_adams_module(rng, p, 2, 2, 1, allow_torsion);
        const AdamsMap f = random_adams_map(rng, a, b);
        if (kind == 1 || top - 1 == lo) {
            x = direct_sum(x, BoundedComplex::make(p, top - 1, {b, a}, {f}));
            continue;
        }
        const AdamsMap inc = kernel_cokernel_image(f).kernel_inclusion;
        x = direct_sum(x, BoundedComplex::make(p, top - 2, {b, a, inc.source}, {f, inc}));
    }
    return x;
}

/// Null-homotopic chain map d s + s d for random s_n : S_n -> T_{n+1},
/// plus c * id when S = T and with_identity is set.
inline ChainMap random_chain_map(Rng& rng, const BoundedComplex& s, const BoundedComplex& t, bool with_identity = true) {
    const long lo = std::min(s.lo(), t.lo()) - 1, hi = std::max(s.hi(), t.hi()) + 1;
    std::vector<AdamsMap> h;
    for (long n = lo - 1; n <= hi; ++n) h.push_back(random_adams_map(rng, s.level(n), t.level(n + 1)));
    auto hom = [&](long n) -> const AdamsMap& { return h[static_cast<std::size_t>(n - lo + 1)]; };
    const bool same = with_identity && s == t;
    const PLocal c(uniform(rng, -2, 2));
    std::vector<AdamsMap> comps;
    for (long n = lo; n <= hi; ++n) {
        AdamsMap f = compose(t.diff(n + 1), hom(n)) + compose(hom(n - 1), s.diff(n));
        if (same) f = f + scaled(AdamsMap::identity(s.level(n)), c);
        comps.push_back(f);
    }
    return ChainMap::make(s, t, lo, std::move(comps));
}

/// Null-homotopic chain map M -> UX from random s_n : M_n -> X_{n+1}.
inline ChainMapToPeriodic random_map_to_periodic(Rng& rng, const BoundedComplex& m, const PeriodicComplex& x) {
    if (m.empty()) return ChainMapToPeriodic::make(m, x, {});
    std::vector<AdamsMap> h;
    for (long n = m.lo() - 1; n <= m.hi(); ++n) h.push_back(random_adams_map(rng, m.level(n), x.level(n + 1)));
    auto hom = [&](long n) -> const AdamsMap& { return h[static_cast<std::size_t>(n - m.lo() + 1)]; };
    std::vector<AdamsMap> comps;
    for (long n = m.lo(); n <= m.hi(); ++n) comps.push_back(compose(x.diff(n + 1), hom(n)) + compose(hom(n - 1), m.diff(n)));
    return ChainMapToPeriodic::make(m, x, std::move(comps));
}

/// Null-homotopic periodic map d s + s d for random window s_n : X_n -> Y_{n+1}.
inline PeriodicMap random_periodic_map(Rng& rng, const PeriodicComplex& x, const PeriodicComplex& y) {
    const long period = x.period();
    std::vector<AdamsMap> h;
    for (long n = 0; n < period; ++n) h.push_back(random_adams_map(rng, x.level(n), y.level(n + 1)));
    auto hom = [&](long n) {
        const long r = ((n % period) + period) % period, k = (n - r) / period;
        return twist(h[static_cast<std::size_t>(r)], -k * x.weight());
    };
    std::vector<AdamsMap> comps;
    for (long n = 0; n < period; ++n) comps.push_back(compose(y.diff(n + 1), hom(n)) + compose(hom(n - 1), x.diff(n)));
    return PeriodicMap::make(x, y, std::move(comps));
}

/// min over units k < p^6 of v_p(k^{d(p-1)} - 1), computed in 64-bit
/// arithmetic modulo p^8 (valuations are capped at 8).
inline int brute_cross_annihilator(long p, long d) {
    unsigned long long mod = 1;
    for (int i = 0; i < 8; ++i) mod *= static_cast<unsigned long long>(p);
    unsigned long long limit = 1;
    for (int i = 0; i < 6; ++i) limit *= static_cast<unsigned long long>(p);
    const auto exponent = static_cast<unsigned long long>(d * (p - 1));
    int best = 8;
    for (unsigned long long k = 2; k < limit; ++k) {
        if (k % static_cast<unsigned long long>(p) == 0) continue;
        unsigned long long r = 1, b = k % mod;
        for (unsigned long long e = exponent; e > 0; e >>= 1, b = b * b % mod)
            if (e & 1) r = r * b % mod;
        unsigned long long x = (r + mod - 1) % mod;
        int v = 0;
        while (x != 0 && x % static_cast<unsigned long long>(p) == 0 && v < 8) {
            x /= static_cast<unsigned long long>(p);
            ++v;
        }
        if (x == 0) v = 8;
        best = std::min(best, v);
    }
    return best;
}

/// Isomorphism check that stays cheap on large modules: exhaustive search up
/// to three summands, otherwise equality of the eigenspace invariants
/// ker/coker(psi - g^{j(p-1)}) for |j| <= 8 on M and M/p.
inline bool similar_modules(const AdamsModule& a, const AdamsModule& b) {
    if (!(a.normal_form() == b.normal_form())) return false;
    if (a.size() <= 3) return is_isomorphic(a, b);
    const Prime p = a.prime();
    for (long j = -8; j <= 8; ++j) {
        const PLocal lambda = twist_scalar(p, j);
        for (const bool mod_p : {false, true}) {
            auto invariants = [&](const AdamsModule& m) {
                CyclicSum carrier = m.underlying();
                if (mod_p) carrier = CyclicSum(p, std::vector<int>(carrier.orders().size(), 1));
                const Eigen::Index n = m.size();
                const Matrix shifted = m.psi().matrix - lambda * Matrix::Identity(n, n);
                const auto kci = kernel_cokernel_image(MatrixMap::make(carrier, carrier, shifted));
                return std::make_pair(kci.kernel(), kci.cokernel());
            };
            if (invariants(a) != invariants(b)) return false;
        }
    }
    return true;
}

}  // namespace qpc::testing
