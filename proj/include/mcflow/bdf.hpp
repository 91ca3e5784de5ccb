#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace mcflow {

/// Exact rational arithmetic for the BDF generating polynomials. The
/// coefficients have tiny denominators (<= 60 for q <= 5), so 64-bit
/// numerators never overflow.
struct Fraction {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Fraction() = default;
    Fraction(std::int64_t n, std::int64_t d = 1);

    Fraction operator+(const Fraction& o) const;
    Fraction operator-(const Fraction& o) const;
    Fraction operator*(const Fraction& o) const;
    bool operator==(const Fraction& o) const { return num == o.num && den == o.den; }

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

/// Coefficients of the q-step linearly implicit BDF method: delta from
/// delta(zeta) = sum_{l=1..q} (1-zeta)^l / l and the extrapolation weights
/// gamma from gamma(zeta) = (1-(1-zeta)^q)/zeta. Consistency demands
/// sum(delta) = 0, sum(gamma) = 1 and delta[0] > 0.
struct BDFScheme {
    int order = 0;              // q
    Eigen::VectorXd delta;      // q+1 entries, delta[0] multiplies the new value
    Eigen::VectorXd gamma;      // q entries, gamma[j] weights the (n-1-j)-th snapshot
};

/// Exact expansions; q in 1..5 (q = 1 is backward Euler, admitted for
/// startup; orders above 5 lose the linearly implicit convergence theory and
/// are rejected).
std::vector<Fraction> bdf_delta_rational(int order);
std::vector<Fraction> bdf_gamma_rational(int order);

BDFScheme bdf_coefficients(int order);

} // namespace mcflow
