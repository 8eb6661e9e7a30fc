// Exact p-local scalars and the session prime.
#pragma once

#include <gmpxx.h>

#include <Eigen/Core>
#include <compare>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace qpc {

/// An odd prime. Construction rejects anything else.
class Prime {
public:
    explicit Prime(long value);
    long value() const { return value_; }
    /// The fixed topological generator g = 1 + p of the p-part of the units.
    long generator() const { return value_ + 1; }
    friend bool operator==(Prime, Prime) = default;

private:
    long value_;
};

/// Exact rational number; an element of Z_(p) once its denominator is known
/// to be prime to p. The prime is supplied at the point of use.
class PLocal {
public:
    PLocal() = default;
    PLocal(int v) : q_(v) {}
    PLocal(long v) : q_(v) {}
    explicit PLocal(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }
    explicit PLocal(const mpz_class& z) : q_(z) {}
    PLocal(const mpz_class& num, const mpz_class& den);

    /// Parses "a" or "a/b".
    static PLocal parse(const std::string& text);

    const mpq_class& rational() const { return q_; }
    mpz_class numerator() const { return q_.get_num(); }
    mpz_class denominator() const { return q_.get_den(); }
    bool is_zero() const { return sgn(q_) == 0; }
    std::string str() const { return q_.get_str(); }

    PLocal& operator+=(const PLocal& o) { q_ += o.q_; return *this; }
    PLocal& operator-=(const PLocal& o) { q_ -= o.q_; return *this; }
    PLocal& operator*=(const PLocal& o) { q_ *= o.q_; return *this; }
    PLocal& operator/=(const PLocal& o);

    friend PLocal operator+(PLocal a, const PLocal& b) { return a += b; }
    friend PLocal operator-(PLocal a, const PLocal& b) { return a -= b; }
    friend PLocal operator*(PLocal a, const PLocal& b) { return a *= b; }
    friend PLocal operator/(PLocal a, const PLocal& b) { return a /= b; }
    friend PLocal operator-(const PLocal& a) { return PLocal(mpq_class(-a.q_)); }

    friend bool operator==(const PLocal& a, const PLocal& b) { return a.q_ == b.q_; }
    friend bool operator!=(const PLocal& a, const PLocal& b) { return a.q_ != b.q_; }
    friend bool operator<(const PLocal& a, const PLocal& b) { return a.q_ < b.q_; }
    friend bool operator>(const PLocal& a, const PLocal& b) { return a.q_ > b.q_; }
    friend bool operator<=(const PLocal& a, const PLocal& b) { return a.q_ <= b.q_; }
    friend bool operator>=(const PLocal& a, const PLocal& b) { return a.q_ >= b.q_; }

    friend std::ostream& operator<<(std::ostream& os, const PLocal& x) { return os << x.str(); }

private:
    mpq_class q_;
};

/// v_p of an integer; requires z != 0.
int valuation(const mpz_class& z, Prime p);
/// v_p(x) for nonzero x; zero has infinite valuation, reported as INT_MAX.
int valuation(const PLocal& x, Prime p);
inline constexpr int kInfiniteValuation = std::numeric_limits<int>::max();

bool is_p_local(const PLocal& x, Prime p);
bool is_unit(const PLocal& x, Prime p);

mpz_class prime_power(Prime p, int e);
PLocal power(const PLocal& base, long exponent);

/// Canonical representative of x in [0, p^e) for p-local x.
PLocal reduce_mod(const PLocal& x, Prime p, int e);

/// g^{j(p-1)} for the fixed generator g = 1 + p.
PLocal twist_scalar(Prime p, long weight);

}  // namespace qpc

namespace Eigen {

template <>
struct NumTraits<qpc::PLocal> : GenericNumTraits<qpc::PLocal> {
    using Real = qpc::PLocal;
    using NonInteger = qpc::PLocal;
    using Literal = qpc::PLocal;
    using Nested = qpc::PLocal;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 4,
        AddCost = 16,
        MulCost = 32
    };
    static inline Real epsilon() { return Real(0); }
    static inline Real dummy_precision() { return Real(0); }
    static inline int digits10() { return 0; }
};

}  // namespace Eigen
