#include "qpc/scalar.hpp"

#include <cstdlib>

namespace qpc {

namespace {

bool is_odd_prime(long v) {
    if (v < 3 || v % 2 == 0) return false;
    for (long d = 3; d * d <= v; d += 2)
        if (v % d == 0) return false;
    return true;
}

}  // namespace

Prime::Prime(long value) : value_(value) {
    if (!is_odd_prime(value))
        throw std::invalid_argument("prime must be an odd prime, got " + std::to_string(value));
}

PLocal::PLocal(const mpz_class& num, const mpz_class& den) : q_(num, den) {
    if (den == 0) throw std::domain_error("zero denominator");
    q_.canonicalize();
}

PLocal PLocal::parse(const std::string& text) {
    auto slash = text.find('/');
    try {
        if (slash == std::string::npos) return PLocal(mpz_class(text));
        return PLocal(mpz_class(text.substr(0, slash)), mpz_class(text.substr(slash + 1)));
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("malformed scalar \"" + text + "\"");
    }
}

PLocal& PLocal::operator/=(const PLocal& o) {
    if (o.is_zero()) throw std::domain_error("division by zero");
    q_ /= o.q_;
    return *this;
}

int valuation(const mpz_class& z, Prime p) {
    if (z == 0) return kInfiniteValuation;
    mpz_class t = z;
    int v = 0;
    const mpz_class pp = p.value();
    while (mpz_divisible_p(t.get_mpz_t(), pp.get_mpz_t())) {
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), pp.get_mpz_t());
        ++v;
    }
    return v;
}

int valuation(const PLocal& x, Prime p) {
    if (x.is_zero()) return kInfiniteValuation;
    return valuation(x.numerator(), p) - valuation(x.denominator(), p);
}

bool is_p_local(const PLocal& x, Prime p) {
    return mpz_divisible_ui_p(x.rational().get_den_mpz_t(), static_cast<unsigned long>(p.value())) == 0;
}

bool is_unit(const PLocal& x, Prime p) { return !x.is_zero() && valuation(x, p) == 0; }

mpz_class prime_power(Prime p, int e) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p.value()), static_cast<unsigned long>(e));
    return r;
}

PLocal power(const PLocal& base, long exponent) {
    if (exponent == 0) return PLocal(1);
    const unsigned long n = static_cast<unsigned long>(std::labs(exponent));
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), base.rational().get_num_mpz_t(), n);
    mpz_pow_ui(den.get_mpz_t(), base.rational().get_den_mpz_t(), n);
    if (exponent < 0) std::swap(num, den);
    return PLocal(num, den);
}

PLocal reduce_mod(const PLocal& x, Prime p, int e) {
    if (!is_p_local(x, p)) throw std::domain_error("reduce_mod: " + x.str() + " is not p-local");
    const mpz_class m = prime_power(p, e);
    mpz_class inv;
    mpz_class den = x.denominator();
    mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), m.get_mpz_t());
    mpz_class r = x.numerator() * inv;
    mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t());
    return PLocal(r);
}

PLocal twist_scalar(Prime p, long weight) {
    return power(PLocal(p.generator()), weight * (p.value() - 1));
}

}  // namespace qpc
