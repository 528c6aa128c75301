#include "qubitfield/polynomial.hpp"

#include <random>
#include <sstream>
#include <stdexcept>

namespace qubitfield {

int total_degree(const Exponent& e) {
    int d = 0;
    for (auto x : e) d += x;
    return d;
}

Polynomial Polynomial::constant(const Rational& c) {
    Polynomial p;
    p.add_term(Exponent{}, c);
    return p;
}

Polynomial Polynomial::variable(int i) {
    if (i < 0 || i >= kNumVars) throw std::out_of_range("Polynomial::variable: index out of range");
    Exponent e{};
    e[i] = 1;
    Polynomial p;
    p.add_term(e, 1);
    return p;
}

Polynomial Polynomial::linear(const std::array<Rational, kNumVars>& coeffs) {
    Polynomial p;
    for (int i = 0; i < kNumVars; ++i) {
        Exponent e{};
        e[i] = 1;
        p.add_term(e, coeffs[i]);
    }
    return p;
}

Rational Polynomial::coefficient(const Exponent& e) const {
    const auto it = terms_.find(e);
    return it == terms_.end() ? Rational(0) : it->second;
}

void Polynomial::add_term(const Exponent& e, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

int Polynomial::degree() const {
    int d = -1;
    for (const auto& [e, c] : terms_) d = std::max(d, total_degree(e));
    return d;
}

bool Polynomial::is_homogeneous(int deg) const {
    for (const auto& [e, c] : terms_)
        if (total_degree(e) != deg) return false;
    return true;
}

bool Polynomial::has_integer_coefficients() const {
    for (const auto& [e, c] : terms_)
        if (denominator(c) != 1) return false;
    return true;
}

std::pair<Exponent, Rational> Polynomial::leading_term() const {
    if (terms_.empty()) throw std::logic_error("leading_term of the zero polynomial");
    return *terms_.begin();
}

Rational Polynomial::evaluate(const std::array<Rational, kNumVars>& x) const {
    Rational sum = 0;
    for (const auto& [e, c] : terms_) {
        Rational t = c;
        for (int i = 0; i < kNumVars; ++i)
            for (int k = 0; k < e[i]; ++k) t *= x[i];
        sum += t;
    }
    return sum;
}

Rational Polynomial::evaluate(const std::array<long long, kNumVars>& x) const {
    std::array<Rational, kNumVars> r;
    for (int i = 0; i < kNumVars; ++i) r[i] = x[i];
    return evaluate(r);
}

double Polynomial::evaluate(const std::array<double, kNumVars>& x) const {
    double sum = 0.0;
    for (const auto& [e, c] : terms_) {
        double t = c.convert_to<double>();
        for (int i = 0; i < kNumVars; ++i)
            for (int k = 0; k < e[i]; ++k) t *= x[i];
        sum += t;
    }
    return sum;
}

Polynomial Polynomial::operator-() const {
    Polynomial p = *this;
    for (auto& [e, c] : p.terms_) c = -c;
    return p;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
}

Polynomial& Polynomial::operator*=(const Rational& s) {
    if (s == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [e, c] : terms_) c *= s;
    return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial p;
    for (const auto& [ea, ca] : a.terms_)
        for (const auto& [eb, cb] : b.terms_) {
            Exponent e;
            for (int i = 0; i < kNumVars; ++i) {
                const int s = ea[i] + eb[i];
                if (s > 255) throw std::overflow_error("Polynomial: exponent overflow");
                e[i] = static_cast<std::uint8_t>(s);
            }
            p.add_term(e, ca * cb);
        }
    return p;
}

Polynomial Polynomial::pow(int k) const {
    if (k < 0) throw std::invalid_argument("Polynomial::pow: negative exponent");
    Polynomial r = constant(1);
    for (int i = 0; i < k; ++i) r = r * *this;
    return r;
}

std::string Polynomial::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        Rational mag = c < 0 ? Rational(-c) : c;
        if (first)
            os << (c < 0 ? "-" : "");
        else
            os << (c < 0 ? " - " : " + ");
        first = false;
        const bool unit_monomial = total_degree(e) == 0;
        if (mag != 1 || unit_monomial) {
            os << mag;
            if (!unit_monomial) os << "*";
        }
        bool first_var = true;
        for (int i = 0; i < kNumVars; ++i) {
            if (e[i] == 0) continue;
            if (!first_var) os << "*";
            first_var = false;
            os << "l" << i;
            if (e[i] > 1) os << "^" << int(e[i]);
        }
    }
    return os.str();
}

// ---------------------------------------------------------------------------

namespace {

bool divides(const Exponent& a, const Exponent& b) {
    for (int i = 0; i < kNumVars; ++i)
        if (a[i] > b[i]) return false;
    return true;
}

Exponent minus(const Exponent& b, const Exponent& a) {
    Exponent e;
    for (int i = 0; i < kNumVars; ++i) e[i] = static_cast<std::uint8_t>(b[i] - a[i]);
    return e;
}

} // namespace

DivisionResult divide(const Polynomial& dividend, const Polynomial& divisor) {
    if (divisor.is_zero()) throw std::invalid_argument("divide: zero divisor");
    const auto [lt_e, lt_c] = divisor.leading_term();
    DivisionResult r;
    Polynomial p = dividend;
    while (!p.is_zero()) {
        const auto [e, c] = p.leading_term();
        if (divides(lt_e, e)) {
            Polynomial t;
            t.add_term(minus(e, lt_e), c / lt_c);
            r.quotient += t;
            p -= t * divisor;
        } else {
            Polynomial t;
            t.add_term(e, c);
            r.remainder += t;
            p -= t;
        }
    }
    return r;
}

std::optional<SquareRoot> exact_square_root(const Polynomial& p) {
    if (p.is_zero()) return std::nullopt;
    const auto [e0, c0] = p.leading_term();
    Exponent half;
    for (int i = 0; i < kNumVars; ++i) {
        if (e0[i] % 2 != 0) return std::nullopt;
        half[i] = static_cast<std::uint8_t>(e0[i] / 2);
    }
    const Polynomial h = p * Rational(1 / c0);

    // monic square root by successive leading-term correction
    Polynomial r;
    r.add_term(half, 1);
    const std::size_t max_terms = p.size() + 64;
    for (std::size_t iter = 0;; ++iter) {
        const Polynomial rem = h - r * r;
        if (rem.is_zero()) break;
        if (iter > max_terms) return std::nullopt;
        const auto [e, c] = rem.leading_term();
        if (!divides(half, e)) return std::nullopt;
        Polynomial t;
        t.add_term(minus(e, half), c / 2);
        // the correction must sort strictly after the current terms
        if (!(minus(e, half) < r.terms().rbegin()->first)) return std::nullopt;
        r += t;
    }

    // scale to a primitive integer polynomial
    BigInt lcm_den = 1;
    for (const auto& [e, c] : r.terms()) lcm_den = boost::multiprecision::lcm(lcm_den, denominator(c));
    Polynomial g = r * Rational(lcm_den);
    BigInt gcd_num = 0;
    for (const auto& [e, c] : g.terms()) gcd_num = boost::multiprecision::gcd(gcd_num, numerator(c));
    g *= Rational(1, gcd_num);

    // p = c0 * r^2 and g = (lcm/gcd) r
    const Rational scale(lcm_den, gcd_num);
    SquareRoot s{c0 / (scale * scale), g};
    if (!(s.root * s.root * s.kappa == p)) return std::nullopt;
    return s;
}

// ---------------------------------------------------------------------------

namespace {

void enumerate_lower_set(int vars, int max_total, std::vector<std::array<int, kNumVars - 1>>& out) {
    std::array<int, kNumVars - 1> cur{};
    std::function<void(int, int)> rec = [&](int i, int left) {
        if (i == vars) {
            out.push_back(cur);
            return;
        }
        for (int k = 0; k <= left; ++k) {
            cur[i] = k;
            rec(i + 1, left - k);
        }
        cur[i] = 0;
    };
    rec(0, max_total);
}

BigInt binomial(int n, int k) {
    BigInt r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

} // namespace

Polynomial interpolate_homogeneous(int degree,
                                   const std::function<BigInt(const std::array<long long, kNumVars>&)>& eval) {
    if (degree < 0 || degree > 20) throw std::invalid_argument("interpolate_homogeneous: unsupported degree");
    constexpr int kFree = kNumVars - 1;

    // values on the principal lattice t >= 0, |t| <= degree, with l0 = degree - |t|
    std::vector<std::array<int, kFree>> lattice;
    enumerate_lower_set(kFree, degree, lattice);
    std::map<std::array<int, kFree>, BigInt> value;
    for (const auto& t : lattice) {
        std::array<long long, kNumVars> x{};
        long long rest = degree;
        for (int i = 0; i < kFree; ++i) {
            x[i + 1] = t[i];
            rest -= t[i];
        }
        x[0] = rest;
        value[t] = eval(x);
    }

    // Newton coefficients: forward differences at the origin
    std::map<std::array<int, kFree>, BigInt> newton;
    for (const auto& g : lattice) {
        BigInt sum = 0;
        std::array<int, kFree> d{};
        std::function<void(int, int, BigInt)> rec = [&](int i, int sign_exp, BigInt weight) {
            if (i == kFree) {
                const BigInt term = weight * value.at(d);
                sum += (sign_exp % 2 == 0) ? term : BigInt(-term);
                return;
            }
            for (int k = 0; k <= g[i]; ++k) {
                d[i] = k;
                rec(i + 1, sign_exp + g[i] - k, weight * binomial(g[i], k));
            }
            d[i] = 0;
        };
        rec(0, 0, 1);
        if (sum != 0) newton[g] = sum;
    }

    // binom(t_i, k) as a polynomial in variable i+1
    auto falling = [](int var, int k) {
        Polynomial p = Polynomial::constant(1);
        BigInt fact = 1;
        for (int m = 0; m < k; ++m) {
            p = p * (Polynomial::variable(var) - Polynomial::constant(m));
            fact *= (m + 1);
        }
        return p * Rational(1, fact);
    };

    Polynomial dehom;
    for (const auto& [g, coeff] : newton) {
        Polynomial basis = Polynomial::constant(Rational(coeff));
        for (int i = 0; i < kFree; ++i)
            if (g[i] > 0) basis = basis * falling(i + 1, g[i]);
        dehom += basis;
    }

    // p(l) = sum_g a_g l^g ((sum l) / degree)^(degree - |g|)
    Polynomial s;
    for (int i = 0; i < kNumVars; ++i) s += Polynomial::variable(i);
    s *= Rational(1, degree == 0 ? 1 : degree);
    std::vector<Polynomial> s_pow(degree + 1);
    s_pow[0] = Polynomial::constant(1);
    for (int k = 1; k <= degree; ++k) s_pow[k] = s_pow[k - 1] * s;

    Polynomial p;
    for (const auto& [e, c] : dehom.terms()) {
        const int deg_e = total_degree(e);
        if (deg_e > degree) throw std::logic_error("interpolate_homogeneous: interpolant degree too high");
        Polynomial mono;
        mono.add_term(e, c);
        p += mono * s_pow[degree - deg_e];
    }

    if (!p.is_homogeneous(degree) && !p.is_zero())
        throw std::logic_error("interpolate_homogeneous: result is not homogeneous");
    if (!p.has_integer_coefficients())
        throw std::logic_error("interpolate_homogeneous: non-integer coefficient in the interpolant");

    // off-lattice consistency check, including negative coordinates
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<long long> u(-7, 7);
    for (int trial = 0; trial < 64; ++trial) {
        std::array<long long, kNumVars> x;
        for (auto& xi : x) xi = u(rng);
        if (p.evaluate(x) != Rational(eval(x)))
            throw std::logic_error("interpolate_homogeneous: interpolant disagrees with direct evaluation");
    }
    return p;
}

BigInt bareiss_determinant(std::vector<std::vector<BigInt>> m) {
    const std::size_t n = m.size();
    for (const auto& row : m)
        if (row.size() != n) throw std::invalid_argument("bareiss_determinant: matrix is not square");
    if (n == 0) return 1;
    BigInt prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            std::size_t piv = k + 1;
            while (piv < n && m[piv][k] == 0) ++piv;
            if (piv == n) return 0;
            std::swap(m[k], m[piv]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

} // namespace qubitfield
