// Bounded and quasi-periodic chain complexes of Adams modules, periodification
// and its adjunctions, the unit monoid PI and tensor products.
//
// Conventions. A periodic complex of period N and twist weight w stores one
// window X_0..X_{N-1}, the differentials d_n : X_n -> X_{n-1} for 1 <= n < N,
// and a wrap map X_0 -> twist(X_{N-1}, w). The unrolled complex has
//   X_{n+kN} = twist(X_n, -kw),   d_{n+kN} = (-1)^{kN} d_n,
// with d_0 = wrap, and the structure isomorphism T(C) -> C[N] is the identity
// on underlying modules.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qpc/adams.hpp"

namespace qpc {

/// Prime, period N and twist weight w shared by all periodic objects of a
/// computation.
struct Config {
    Prime p;
    long period;
    long weight;

    /// (N, w) = (2p - 2, 2p - 2).
    static Config standard(Prime p) { return Config{p, 2 * p.value() - 2, 2 * p.value() - 2}; }
    friend bool operator==(const Config&, const Config&) = default;
    std::string str() const;
};

inline long sign(long e) { return (e % 2 == 0) ? 1 : -1; }

// ---------------------------------------------------------------------------
// Bounded complexes

class BoundedComplex {
public:
    /// Levels X_lo .. X_{lo + levels.size() - 1}; diffs[i] is d_{lo+i+1}.
    /// Throws ValidationError naming the degree when d o d != 0 or the data
    /// do not fit together.
    static BoundedComplex make(Prime p, long lo, std::vector<AdamsModule> levels, std::vector<AdamsMap> diffs);
    static BoundedComplex zero(Prime p) { return make(p, 0, {}, {}); }
    static BoundedComplex concentrated(const AdamsModule& m, long degree);
    /// D^n M: M in degrees n and n-1 joined by the identity.
    static BoundedComplex disk(const AdamsModule& m, long n);

    Prime prime() const { return p_; }
    long lo() const { return lo_; }
    long hi() const { return lo_ + static_cast<long>(levels_.size()) - 1; }
    bool empty() const { return levels_.empty(); }
    const AdamsModule& level(long n) const;
    /// d_n : X_n -> X_{n-1}; zero outside the support.
    AdamsMap diff(long n) const;
    AdamsModule homology(long n) const;
    /// Lowest and highest degrees with a nonzero level.
    std::optional<std::pair<long, long>> support() const;
    std::string str() const;

    friend bool operator==(const BoundedComplex&, const BoundedComplex&) = default;

private:
    BoundedComplex(Prime p, long lo, std::vector<AdamsModule> levels, std::vector<AdamsMap> diffs)
        : p_(p), lo_(lo), levels_(std::move(levels)), diffs_(std::move(diffs)), zero_(AdamsModule::zero(p)) {}

    Prime p_;
    long lo_;
    std::vector<AdamsModule> levels_;
    std::vector<AdamsMap> diffs_;
    AdamsModule zero_;
};

/// Degree n of the result is degree n - m of X; differentials times (-1)^m.
BoundedComplex shift(const BoundedComplex& x, long m);
BoundedComplex twist(const BoundedComplex& x, long n);
BoundedComplex direct_sum(const BoundedComplex& a, const BoundedComplex& b);

struct ChainMap {
    BoundedComplex source;
    BoundedComplex target;
    long lo = 0;
    std::vector<AdamsMap> components;  // degrees lo, lo + 1, ...

    /// Validates the chain condition in every degree.
    static ChainMap make(BoundedComplex source, BoundedComplex target, long lo, std::vector<AdamsMap> components);
    static ChainMap zero(BoundedComplex source, BoundedComplex target);
    static ChainMap identity(const BoundedComplex& x);
    AdamsMap component(long n) const;
    /// Empty when the chain condition holds, otherwise one line per bad degree.
    std::vector<std::string> chain_errors() const;
    long range_lo() const;
    long range_hi() const;
};

ChainMap compose(const ChainMap& g, const ChainMap& f);
ChainMap operator+(const ChainMap& a, const ChainMap& b);
ChainMap shift(const ChainMap& f, long m);
ChainMap twist(const ChainMap& f, long n);
MatrixMap homology_map(const ChainMap& f, long n);
bool is_quasi_iso(const ChainMap& f);

/// Koszul convention: d(x (x) y) = dx (x) y + (-1)^{|x|} x (x) dy. Summands of
/// degree n are ordered by the degree of the first factor.
BoundedComplex tensor(const BoundedComplex& a, const BoundedComplex& b);
ChainMap tensor(const ChainMap& f, const ChainMap& g);

// ---------------------------------------------------------------------------
// Periodic complexes

class PeriodicComplex {
public:
    static PeriodicComplex make(Config cfg, std::vector<AdamsModule> levels, std::vector<AdamsMap> diffs, AdamsMap wrap);
    /// The monoid PI: L_0 in window degree 0, zero elsewhere, zero differentials.
    static PeriodicComplex unit(Config cfg);
    static PeriodicComplex zero(Config cfg);

    const Config& config() const { return cfg_; }
    Prime prime() const { return cfg_.p; }
    long period() const { return cfg_.period; }
    long weight() const { return cfg_.weight; }
    const std::vector<AdamsModule>& window() const { return levels_; }
    const std::vector<AdamsMap>& window_diffs() const { return diffs_; }
    const AdamsMap& wrap() const { return wrap_; }

    AdamsModule level(long n) const;
    AdamsMap diff(long n) const;
    /// H_n of the unrolled complex, with its induced operator.
    AdamsModule homology(long n) const;
    std::vector<AdamsModule> homology() const;
    std::vector<std::string> errors() const;
    std::string str() const;

    friend bool operator==(const PeriodicComplex&, const PeriodicComplex&) = default;

private:
    PeriodicComplex(Config cfg, std::vector<AdamsModule> levels, std::vector<AdamsMap> diffs, AdamsMap wrap)
        : cfg_(cfg), levels_(std::move(levels)), diffs_(std::move(diffs)), wrap_(std::move(wrap)) {}

    Config cfg_;
    std::vector<AdamsModule> levels_;
    std::vector<AdamsMap> diffs_;
    AdamsMap wrap_;
};

PeriodicComplex shift(const PeriodicComplex& x, long m);
/// Twists every level and map by n. shift(X, N) equals twist(X, w).
PeriodicComplex twist(const PeriodicComplex& x, long n);
PeriodicComplex direct_sum(const PeriodicComplex& a, const PeriodicComplex& b);

struct PeriodicMapReport {
    bool valid = true;
    std::vector<std::string> diagnostics;  // one line per offending degree
    std::string str() const;
};

struct PeriodicMap {
    PeriodicComplex source;
    PeriodicComplex target;
    std::vector<AdamsMap> components;  // window degrees 0..N-1

    static PeriodicMap make(PeriodicComplex source, PeriodicComplex target, std::vector<AdamsMap> components);
    static PeriodicMap zero(PeriodicComplex source, PeriodicComplex target);
    static PeriodicMap identity(const PeriodicComplex& x);
    /// f_{n+kN} = twist(f_n, -kw).
    AdamsMap component(long n) const;
    friend bool operator==(const PeriodicMap&, const PeriodicMap&) = default;
};

PeriodicMapReport validate_periodic_map(const PeriodicComplex& source, const PeriodicComplex& target,
                                        const std::vector<AdamsMap>& components);
PeriodicMap compose(const PeriodicMap& g, const PeriodicMap& f);
PeriodicMap operator+(const PeriodicMap& a, const PeriodicMap& b);
PeriodicMap operator-(const PeriodicMap& a);
PeriodicMap shift(const PeriodicMap& f, long m);
/// [f, g] : A + B -> C.
PeriodicMap copair(const PeriodicMap& f, const PeriodicMap& g);
/// (f, g) : A -> B + C.
PeriodicMap pair(const PeriodicMap& f, const PeriodicMap& g);
MatrixMap homology_map(const PeriodicMap& f, long n);
bool is_quasi_iso(const PeriodicMap& f);
bool is_isomorphism(const PeriodicMap& f);

struct PeriodicCokernel {
    PeriodicComplex object;
    PeriodicMap projection;
};
PeriodicCokernel cokernel(const PeriodicMap& f);

// ---------------------------------------------------------------------------
// Periodification and its adjoints

/// (PM)_n = sum over k ascending of twist(M_{n+kN}, kw); the summand k
/// differential carries (-1)^{kN}.
PeriodicComplex periodify(const BoundedComplex& m, Config cfg);
PeriodicMap periodify(const ChainMap& f, Config cfg);
/// The right adjoint; for bounded input each degreewise product is finite.
PeriodicComplex coperiodify(const BoundedComplex& m, Config cfg);

/// A chain map M -> UX from a bounded complex to the unrolled periodic X.
struct ChainMapToPeriodic {
    BoundedComplex source;
    PeriodicComplex target;
    std::vector<AdamsMap> components;  // degrees source.lo() .. source.hi()

    static ChainMapToPeriodic make(BoundedComplex source, PeriodicComplex target, std::vector<AdamsMap> components);
    AdamsMap component(long n) const;
};

/// PeriodicMap PM -> X to its restriction M -> UX.
ChainMapToPeriodic flatten(const PeriodicMap& f, const BoundedComplex& m);
/// Chain map M -> UX to the PeriodicMap PM -> X.
PeriodicMap extend(const ChainMapToPeriodic& g);
/// The unit M -> UPM of the adjunction.
ChainMapToPeriodic unit_map(const BoundedComplex& m, Config cfg);

/// The unrolled data of a periodic complex over three periods together with
/// the action maps phi(k) : PI_{kN} ^ Y_n -> Y_{n+kN}, k in {-1, 0, 1}.
struct PIModule {
    Config cfg;
    long lo = 0;                        // = -N
    std::vector<AdamsModule> levels;    // degrees lo .. lo + 3N - 1
    std::vector<AdamsMap> diffs;        // d_n for lo < n < lo + 3N
    std::vector<std::vector<AdamsMap>> action;  // action[k + 1][i]: degree lo + i

    const AdamsModule& level(long n) const { return levels[static_cast<std::size_t>(n - lo)]; }
};

PIModule to_module(const PeriodicComplex& x);
/// Validates unitality, associativity, phi(1) phi(-1) = id, equivariance and
/// compatibility with the differential; throws ValidationError naming the
/// failing identity.
PeriodicComplex from_module(const PIModule& m);

/// X (x) Y for a periodic X and bounded Y; summands of degree n are
/// X_{n-b} ^ Y_b for b ascending.
PeriodicComplex tensor(const PeriodicComplex& x, const BoundedComplex& y);
PeriodicMap tensor(const PeriodicMap& f, const ChainMap& g);
/// PI (x) M -> PM, the natural isomorphism, built by matching summands.
PeriodicMap unit_tensor_iso(const BoundedComplex& m, Config cfg);

/// X (x)_PI Y by the window formula: degree n is the sum over 0 <= a < N of
/// X_a ^ Y_{n-a}. Requires an even period (PI is graded-commutative only
/// then) and equal configurations.
PeriodicComplex tensor_over_unit(const PeriodicComplex& x, const PeriodicComplex& y);
PeriodicMap tensor_over_unit(const PeriodicMap& f, const PeriodicMap& g);

}  // namespace qpc
