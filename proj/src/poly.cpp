#include "circlelab/poly.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace circlelab::poly {

IntPolynomial::IntPolynomial(std::vector<BigInt> coeffs) : coeffs_(std::move(coeffs))
{
    trim();
}

IntPolynomial::IntPolynomial(std::initializer_list<long long> coeffs)
{
    for (long long c : coeffs)
        coeffs_.emplace_back(c);
    trim();
}

IntPolynomial IntPolynomial::monomial(const BigInt& c, int degree)
{
    if (degree < 0)
        throw std::invalid_argument("monomial: negative degree");
    std::vector<BigInt> v(static_cast<std::size_t>(degree) + 1);
    v.back() = c;
    return IntPolynomial(std::move(v));
}

void IntPolynomial::trim()
{
    while (!coeffs_.empty() && coeffs_.back() == 0)
        coeffs_.pop_back();
}

BigInt IntPolynomial::coeff(int i) const
{
    if (i < 0 || i >= static_cast<int>(coeffs_.size()))
        return 0;
    return coeffs_[static_cast<std::size_t>(i)];
}

BigInt IntPolynomial::leading() const
{
    return coeffs_.empty() ? BigInt(0) : coeffs_.back();
}

IntPolynomial IntPolynomial::operator+(const IntPolynomial& o) const
{
    std::vector<BigInt> v(std::max(coeffs_.size(), o.coeffs_.size()));
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = coeff(static_cast<int>(i)) + o.coeff(static_cast<int>(i));
    return IntPolynomial(std::move(v));
}

IntPolynomial IntPolynomial::operator-(const IntPolynomial& o) const
{
    std::vector<BigInt> v(std::max(coeffs_.size(), o.coeffs_.size()));
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = coeff(static_cast<int>(i)) - o.coeff(static_cast<int>(i));
    return IntPolynomial(std::move(v));
}

IntPolynomial IntPolynomial::operator*(const IntPolynomial& o) const
{
    if (is_zero() || o.is_zero())
        return {};
    std::vector<BigInt> v(coeffs_.size() + o.coeffs_.size() - 1);
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        for (std::size_t j = 0; j < o.coeffs_.size(); ++j)
            v[i + j] += coeffs_[i] * o.coeffs_[j];
    return IntPolynomial(std::move(v));
}

std::string IntPolynomial::str(std::string_view var) const
{
    if (is_zero())
        return "0";
    std::ostringstream out;
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
        BigInt c = coeffs_[static_cast<std::size_t>(i)];
        if (c == 0)
            continue;
        const bool neg = c < 0;
        if (neg)
            c = -c;
        if (first)
            out << (neg ? "-" : "");
        else
            out << (neg ? " - " : " + ");
        first = false;
        if (i == 0 || c != 1)
            out << c;
        if (i >= 1) {
            if (c != 1)
                out << "*";
            out << var;
            if (i > 1)
                out << "^" << i;
        }
    }
    return out.str();
}

namespace {

struct Cursor {
    std::string_view s;
    std::size_t pos = 0;

    void skip()
    {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
            ++pos;
    }
    bool done()
    {
        skip();
        return pos >= s.size();
    }
    char peek()
    {
        skip();
        return pos < s.size() ? s[pos] : '\0';
    }
    BigInt number()
    {
        skip();
        std::size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
            ++pos;
        if (start == pos)
            throw std::invalid_argument("polynomial parse: expected digits in '" + std::string(s) + "'");
        return BigInt(std::string(s.substr(start, pos - start)));
    }
};

}  // namespace

IntPolynomial IntPolynomial::parse(std::string_view text)
{
    Cursor cur{text};
    IntPolynomial acc;
    if (cur.done())
        throw std::invalid_argument("polynomial parse: empty input");
    bool first = true;
    char var = 0;   // any single letter, but the same one throughout
    while (!cur.done()) {
        int sign = 1;
        char c = cur.peek();
        if (c == '+' || c == '-') {
            sign = c == '-' ? -1 : 1;
            ++cur.pos;
        } else if (!first) {
            throw std::invalid_argument("polynomial parse: expected sign in '" + std::string(text) + "'");
        }
        first = false;
        BigInt coef = 1;
        bool have_coef = false;
        if (std::isdigit(static_cast<unsigned char>(cur.peek()))) {
            coef = cur.number();
            have_coef = true;
            if (cur.peek() == '*')
                ++cur.pos;
        }
        int deg = 0;
        if (std::isalpha(static_cast<unsigned char>(cur.peek()))) {
            if (var != 0 && cur.peek() != var)
                throw std::invalid_argument("polynomial parse: mixed variables in '" + std::string(text) + "'");
            var = cur.peek();
            ++cur.pos;
            deg = 1;
            if (cur.peek() == '^') {
                ++cur.pos;
                deg = static_cast<int>(cur.number());
            }
        } else if (!have_coef) {
            throw std::invalid_argument("polynomial parse: dangling sign in '" + std::string(text) + "'");
        }
        acc = acc + monomial(coef * sign, deg);
    }
    return acc;
}

BigInt eval(const IntPolynomial& p, const BigInt& n)
{
    BigInt acc = 0;
    const auto& c = p.coeffs();
    for (auto it = c.rbegin(); it != c.rend(); ++it)
        acc = acc * n + *it;
    return acc;
}

std::vector<std::int64_t> small_coeffs(const IntPolynomial& p)
{
    std::vector<std::int64_t> out;
    for (const auto& c : p.coeffs()) {
        if (c > std::numeric_limits<std::int64_t>::max() || c < std::numeric_limits<std::int64_t>::min())
            throw std::overflow_error("coefficient exceeds 64 bits");
        out.push_back(static_cast<std::int64_t>(c));
    }
    return out;
}

__int128 eval_i128(const std::vector<std::int64_t>& coeffs, std::int64_t n)
{
    __int128 acc = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
        __int128 next;
        if (__builtin_mul_overflow(acc, static_cast<__int128>(n), &next) ||
            __builtin_add_overflow(next, static_cast<__int128>(*it), &next))
            throw std::overflow_error("polynomial value exceeds 127 bits");
        acc = next;
    }
    return acc;
}

bool is_admissible(const IntPolynomial& q, int d, double delta, double N, double A)
{
    if (d <= 0)
        throw std::invalid_argument("is_admissible: d must be positive");
    if (q.degree() != d)
        return false;
    const double cap = A * std::pow(delta, -A);
    const double lead = std::fabs(q.leading().convert_to<double>());
    if (lead < std::pow(delta, A) / A || lead > cap)
        return false;
    for (int i = 0; i < d; ++i) {
        const double ci = std::fabs(q.coeff(i).convert_to<double>());
        if (ci > cap * std::pow(N, d - i))
            return false;
    }
    return true;
}

PolynomialMap::PolynomialMap(std::vector<IntPolynomial> components) : comps_(std::move(components))
{
    if (comps_.empty())
        throw std::invalid_argument("polynomial map needs at least one component");
    for (std::size_t i = 0; i < comps_.size(); ++i) {
        if (comps_[i].degree() < 1)
            throw std::invalid_argument("polynomial map components must have degree >= 1");
        if (i > 0 && comps_[i].degree() <= comps_[i - 1].degree())
            throw std::invalid_argument("polynomial map degrees must be strictly increasing");
    }
}

PolynomialMap PolynomialMap::parse(std::string_view text)
{
    std::vector<IntPolynomial> comps;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t comma = text.find(',', start);
        if (comma == std::string_view::npos)
            comma = text.size();
        comps.push_back(IntPolynomial::parse(text.substr(start, comma - start)));
        start = comma + 1;
    }
    return PolynomialMap(std::move(comps));
}

int PolynomialMap::total_degree() const
{
    int D = 0;
    for (const auto& p : comps_)
        D += p.degree();
    return D;
}

int PolynomialMap::lifted_degree() const
{
    int D = 0;
    for (const auto& p : comps_)
        D += p.degree() * (p.degree() + 1) / 2;
    return D;
}

bool PolynomialMap::has_zero_constant_terms() const
{
    for (const auto& p : comps_)
        if (p.coeff(0) != 0)
            return false;
    return true;
}

std::string PolynomialMap::str() const
{
    std::string out;
    for (std::size_t i = 0; i < comps_.size(); ++i) {
        if (i)
            out += ",";
        std::string c = comps_[i].str();
        c.erase(std::remove(c.begin(), c.end(), ' '), c.end());
        out += c;
    }
    return out;
}

PolynomialMap PolynomialMap::head(std::size_t l) const
{
    if (l == 0 || l > comps_.size())
        throw std::out_of_range("polynomial map truncation out of range");
    return PolynomialMap(std::vector<IntPolynomial>(comps_.begin(), comps_.begin() + static_cast<long>(l)));
}

// ---------------------------------------------------------------- MultiPoly

namespace {

void trim_exponents(MultiPoly::Exponents& e)
{
    while (!e.empty() && e.back() == 0)
        e.pop_back();
}

}  // namespace

void MultiPoly::add_term(Exponents e, const BigInt& c)
{
    if (c == 0)
        return;
    trim_exponents(e);
    auto [it, inserted] = terms_.try_emplace(std::move(e), c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0)
            terms_.erase(it);
    }
}

MultiPoly MultiPoly::constant(const BigInt& c)
{
    MultiPoly p;
    p.add_term({}, c);
    return p;
}

MultiPoly MultiPoly::variable(int index)
{
    MultiPoly p;
    Exponents e(static_cast<std::size_t>(index) + 1, 0);
    e[static_cast<std::size_t>(index)] = 1;
    p.add_term(std::move(e), 1);
    return p;
}

MultiPoly MultiPoly::from_univariate(const IntPolynomial& q)
{
    MultiPoly p;
    for (int i = 0; i <= q.degree(); ++i)
        p.add_term({i}, q.coeff(i));
    return p;
}

int MultiPoly::degree_in(int var) const
{
    int d = -1;
    for (const auto& [e, c] : terms_) {
        const int x = var < static_cast<int>(e.size()) ? e[static_cast<std::size_t>(var)] : 0;
        d = std::max(d, x);
    }
    return d;
}

int MultiPoly::num_vars() const
{
    std::size_t n = 0;
    for (const auto& [e, c] : terms_)
        n = std::max(n, e.size());
    return static_cast<int>(n);
}

MultiPoly MultiPoly::operator+(const MultiPoly& o) const
{
    MultiPoly r = *this;
    for (const auto& [e, c] : o.terms_)
        r.add_term(e, c);
    return r;
}

MultiPoly MultiPoly::operator-(const MultiPoly& o) const
{
    MultiPoly r = *this;
    for (const auto& [e, c] : o.terms_)
        r.add_term(e, -c);
    return r;
}

MultiPoly MultiPoly::operator*(const MultiPoly& o) const
{
    MultiPoly r;
    for (const auto& [ea, ca] : terms_) {
        for (const auto& [eb, cb] : o.terms_) {
            Exponents e(std::max(ea.size(), eb.size()), 0);
            for (std::size_t i = 0; i < ea.size(); ++i)
                e[i] += ea[i];
            for (std::size_t i = 0; i < eb.size(); ++i)
                e[i] += eb[i];
            r.add_term(std::move(e), ca * cb);
        }
    }
    return r;
}

MultiPoly MultiPoly::shift_y(const MultiPoly& shift) const
{
    const MultiPoly base = variable(0) + shift;
    const int dy = degree_y();
    std::vector<MultiPoly> powers{constant(1)};
    for (int i = 1; i <= dy; ++i)
        powers.push_back(powers.back() * base);
    MultiPoly r;
    for (const auto& [e, c] : terms_) {
        const int ey = e.empty() ? 0 : e[0];
        Exponents rest = e;
        if (!rest.empty())
            rest[0] = 0;
        MultiPoly mono;
        mono.add_term(rest, c);
        r = r + mono * powers[static_cast<std::size_t>(ey)];
    }
    return r;
}

MultiPoly MultiPoly::substitute(const std::vector<BigInt>& values) const
{
    MultiPoly r;
    for (const auto& [e, c] : terms_) {
        BigInt coef = c;
        Exponents rest = e;
        for (std::size_t j = 1; j < e.size(); ++j) {
            if (j - 1 < values.size()) {
                coef *= boost::multiprecision::pow(values[j - 1], static_cast<unsigned>(e[j]));
                rest[j] = 0;
            }
        }
        r.add_term(std::move(rest), coef);
    }
    return r;
}

MultiPoly MultiPoly::coefficient_of_y(int ey) const
{
    MultiPoly r;
    for (const auto& [e, c] : terms_) {
        const int x = e.empty() ? 0 : e[0];
        if (x != ey)
            continue;
        Exponents rest = e;
        if (!rest.empty())
            rest[0] = 0;
        r.add_term(std::move(rest), c);
    }
    return r;
}

IntPolynomial MultiPoly::to_univariate() const
{
    if (num_vars() > 1)
        throw std::logic_error("to_univariate: shift variables remain");
    std::vector<BigInt> v(static_cast<std::size_t>(std::max(0, degree_y() + 1)));
    for (const auto& [e, c] : terms_)
        v[e.empty() ? 0 : static_cast<std::size_t>(e[0])] = c;
    return IntPolynomial(std::move(v));
}

std::string MultiPoly::str() const
{
    if (terms_.empty())
        return "0";
    // graded by y-degree, highest first, then by shift monomial
    std::vector<std::pair<Exponents, BigInt>> ordered(terms_.rbegin(), terms_.rend());
    std::stable_sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
        const int ya = a.first.empty() ? 0 : a.first[0];
        const int yb = b.first.empty() ? 0 : b.first[0];
        return ya > yb;
    });
    std::ostringstream out;
    bool first = true;
    for (const auto& [e, c0] : ordered) {
        BigInt c = c0;
        const bool neg = c < 0;
        if (neg)
            c = -c;
        out << (first ? (neg ? "-" : "") : (neg ? " - " : " + "));
        first = false;
        std::vector<std::string> factors;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0)
                continue;
            std::string f = i == 0 ? "y" : "h" + std::to_string(i);
            if (e[i] > 1)
                f += "^" + std::to_string(e[i]);
            factors.push_back(f);
        }
        if (factors.empty() || c != 1) {
            out << c;
            if (!factors.empty())
                out << "*";
        }
        for (std::size_t i = 0; i < factors.size(); ++i)
            out << (i ? "*" : "") << factors[i];
    }
    return out.str();
}

}  // namespace circlelab::poly
