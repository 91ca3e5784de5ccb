#include "mcflow/bdf.hpp"

#include "mcflow/errors.hpp"

#include <numeric>

namespace mcflow {

Fraction::Fraction(std::int64_t n, std::int64_t d) : num(n), den(d) {
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
}

Fraction Fraction::operator+(const Fraction& o) const {
    return Fraction(num * o.den + o.num * den, den * o.den);
}

Fraction Fraction::operator-(const Fraction& o) const {
    return Fraction(num * o.den - o.num * den, den * o.den);
}

Fraction Fraction::operator*(const Fraction& o) const {
    return Fraction(num * o.num, den * o.den);
}

namespace {

std::int64_t binomial(int n, int k) {
    if (k < 0 || k > n)
        return 0;
    std::int64_t r = 1;
    for (int i = 0; i < k; ++i)
        r = r * (n - i) / (i + 1);
    return r;
}

void check_order(int order) {
    if (order < 1 || order > 5)
        throw ConfigError("BDF order must be in 1..5, got " + std::to_string(order));
}

} // namespace

std::vector<Fraction> bdf_delta_rational(int order) {
    check_order(order);
    // delta_j = (-1)^j sum_{l=max(1,j)}^{q} binom(l, j) / l
    std::vector<Fraction> delta(order + 1);
    for (int j = 0; j <= order; ++j) {
        Fraction sum(0);
        for (int l = std::max(1, j); l <= order; ++l)
            sum = sum + Fraction(binomial(l, j), l);
        if (j % 2 != 0)
            sum = Fraction(-1) * sum;
        delta[j] = sum;
    }
    return delta;
}

std::vector<Fraction> bdf_gamma_rational(int order) {
    check_order(order);
    // gamma_j = (-1)^j binom(q, j+1)
    std::vector<Fraction> gamma(order);
    for (int j = 0; j < order; ++j)
        gamma[j] = Fraction((j % 2 == 0 ? 1 : -1) * binomial(order, j + 1));
    return gamma;
}

BDFScheme bdf_coefficients(int order) {
    const auto delta = bdf_delta_rational(order);
    const auto gamma = bdf_gamma_rational(order);
    BDFScheme scheme;
    scheme.order = order;
    scheme.delta.resize(order + 1);
    scheme.gamma.resize(order);
    for (int j = 0; j <= order; ++j)
        scheme.delta[j] = delta[j].value();
    for (int j = 0; j < order; ++j)
        scheme.gamma[j] = gamma[j].value();
    return scheme;
}

} // namespace mcflow
