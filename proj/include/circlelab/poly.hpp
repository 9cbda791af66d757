// Exact integer polynomials, polynomial maps and the multivariate
// polynomials used by PET differencing.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace circlelab::poly {

using BigInt = boost::multiprecision::cpp_int;

class IntPolynomial {
public:
    IntPolynomial() = default;
    explicit IntPolynomial(std::vector<BigInt> coeffs);
    IntPolynomial(std::initializer_list<long long> coeffs);

    static IntPolynomial monomial(const BigInt& c, int degree);
    // Accepts forms like "2n^3 - n", "3*n^2+100*n", "n", "-7".
    static IntPolynomial parse(std::string_view text);

    // -1 for the zero polynomial.
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }
    const std::vector<BigInt>& coeffs() const { return coeffs_; }
    BigInt coeff(int i) const;
    BigInt leading() const;

    std::string str(std::string_view var = "n") const;

    IntPolynomial operator+(const IntPolynomial& o) const;
    IntPolynomial operator-(const IntPolynomial& o) const;
    IntPolynomial operator*(const IntPolynomial& o) const;
    bool operator==(const IntPolynomial& o) const = default;

private:
    void trim();
    std::vector<BigInt> coeffs_;
};

BigInt eval(const IntPolynomial& p, const BigInt& n);

// Fixed-width evaluation for hot loops; throws std::overflow_error when a
// partial Horner value leaves the 127-bit range.
__int128 eval_i128(const std::vector<std::int64_t>& coeffs, std::int64_t n);
std::vector<std::int64_t> small_coeffs(const IntPolynomial& p);

bool is_admissible(const IntPolynomial& q, int d, double delta, double N, double A);

class PolynomialMap {
public:
    explicit PolynomialMap(std::vector<IntPolynomial> components);
    // Comma separated components, e.g. "n,n^2".
    static PolynomialMap parse(std::string_view text);

    std::size_t k() const { return comps_.size(); }
    const IntPolynomial& operator[](std::size_t i) const { return comps_[i]; }
    const std::vector<IntPolynomial>& components() const { return comps_; }
    int degree(std::size_t i) const { return comps_[i].degree(); }
    int total_degree() const;      // D
    int lifted_degree() const;     // sum d_i(d_i+1)/2
    int max_degree() const { return comps_.back().degree(); }
    bool has_zero_constant_terms() const;
    std::string str() const;

    // Truncation to the first l components.
    PolynomialMap head(std::size_t l) const;

private:
    std::vector<IntPolynomial> comps_;
};

// Multivariate integer polynomial in y (variable 0) and shift variables
// h1, h2, ... (variable j). Exponent vectors have trailing zeros trimmed.
class MultiPoly {
public:
    using Exponents = std::vector<int>;

    MultiPoly() = default;
    static MultiPoly constant(const BigInt& c);
    static MultiPoly variable(int index);
    static MultiPoly from_univariate(const IntPolynomial& p);

    bool is_zero() const { return terms_.empty(); }
    int degree_in(int var) const;           // -1 for zero
    int degree_y() const { return degree_in(0); }
    int num_vars() const;                   // highest variable index + 1
    const std::map<Exponents, BigInt>& terms() const { return terms_; }

    MultiPoly operator+(const MultiPoly& o) const;
    MultiPoly operator-(const MultiPoly& o) const;
    MultiPoly operator*(const MultiPoly& o) const;
    bool operator==(const MultiPoly& o) const = default;

    // p(y + shift, h...).
    MultiPoly shift_y(const MultiPoly& shift) const;
    // Replaces h_j by values[j-1] for j <= values.size().
    MultiPoly substitute(const std::vector<BigInt>& values) const;
    // Coefficient polynomial of y^e as a polynomial in the shift variables.
    MultiPoly coefficient_of_y(int e) const;
    // Requires no shift variables.
    IntPolynomial to_univariate() const;

    std::string str() const;

private:
    void add_term(Exponents e, const BigInt& c);
    std::map<Exponents, BigInt> terms_;
};

}  // namespace circlelab::poly
