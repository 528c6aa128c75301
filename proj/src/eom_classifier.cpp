#include "qubitfield/eom_classifier.hpp"

#include <cmath>
#include <stdexcept>

namespace qubitfield {

EomSpec::EomSpec(SuperOpCoeffs l, double m) : lambda(l), mu(m) {
    if (lambda.is_zero()) throw std::invalid_argument("EomSpec: lambda must not be the zero vector");
}

std::string to_string(EomTypeLabel t) {
    static const char* names[] = {"I", "II", "III", "IV", "V", "VI", "VII", "VIII"};
    return names[static_cast<int>(t) - 1];
}

EomTypeLabel parse_eom_type(const std::string& s) {
    for (int k = 1; k <= 8; ++k)
        if (to_string(static_cast<EomTypeLabel>(k)) == s) return static_cast<EomTypeLabel>(k);
    throw std::invalid_argument("unknown equation-of-motion type: " + s);
}

EomTypeLabel type_from_pattern(bool z1, bool z2, bool z3) {
    const int code = (z1 ? 1 : 0) | (z2 ? 2 : 0) | (z3 ? 4 : 0);
    switch (code) {
    case 0: return EomTypeLabel::I;
    case 1: return EomTypeLabel::II;
    case 2: return EomTypeLabel::III;
    case 4: return EomTypeLabel::IV;
    case 6: return EomTypeLabel::V;
    case 5: return EomTypeLabel::VI;
    case 3: return EomTypeLabel::VII;
    default: return EomTypeLabel::VIII;
    }
}

std::vector<std::vector<BigInt>> integer_left_multiplication(const StructureConstants& c,
                                                             const std::array<long long, kNumOmega>& lambda) {
    std::vector<std::vector<BigInt>> m(kNumOmega, std::vector<BigInt>(kNumOmega, 0));
    for (int a = 0; a < kNumOmega; ++a) {
        if (lambda[a] == 0) continue;
        for (int b = 0; b < kNumOmega; ++b)
            for (int g = 0; g < kNumOmega; ++g) m[b][g] += BigInt(lambda[a]) * c(a, b, g);
    }
    return m;
}

Polynomial determinant_polynomial(const StructureConstants& c) {
    return interpolate_homogeneous(kNumOmega, [&](const std::array<long long, kNumVars>& x) {
        return bareiss_determinant(integer_left_multiplication(c, x));
    });
}

namespace {

Exponent mono(std::initializer_list<int> vars) {
    Exponent e{};
    for (int v : vars) ++e[v];
    return e;
}

} // namespace

Polynomial printed_factor1() { return Polynomial::linear({1, -1, 0, 2, 0, 0}); }
Polynomial printed_factor2() { return Polynomial::linear({1, -1, 0, -4, 6, 0}); }

Polynomial printed_factor3() {
    Polynomial p;
    p.add_term(mono({3, 3}), 8);
    p.add_term(mono({4, 4}), 8);
    p.add_term(mono({2, 2}), -8);
    p.add_term(mono({1, 1}), 3);
    p.add_term(mono({0, 0}), -1);
    p.add_term(mono({1, 3}), 6);
    p.add_term(mono({1, 4}), 14);
    p.add_term(mono({3, 4}), 4);
    p.add_term(mono({0, 4}), 2);
    p.add_term(mono({0, 3}), 2);
    p.add_term(mono({0, 1}), -2);
    return p;
}

Factorization factorize(const Polynomial& det) {
    Factorization f;
    f.f1 = printed_factor1();
    f.f2 = printed_factor2();

    Polynomial rest = det;
    auto d1 = divide(rest, f.f1);
    f.f1_remainder = d1.remainder;
    f.f1_divides = d1.remainder.is_zero();
    if (f.f1_divides) rest = d1.quotient;

    auto d2 = divide(rest, f.f2);
    f.f2_remainder = d2.remainder;
    f.f2_divides = d2.remainder.is_zero();
    if (f.f2_divides) rest = d2.quotient;

    // a non-dividing printed factor is reported through the flags; only the
    // square-root step is fatal
    const auto root = exact_square_root(rest);
    if (!root)
        throw std::logic_error("factorize: the cofactor " + rest.to_string() + " is not a perfect square" +
                               (f.f1_divides && f.f2_divides ? "" : " (a printed linear factor did not divide)"));
    f.g = root->root;
    f.constant = root->kappa;

    const Polynomial printed = printed_factor3();
    const Exponent l0sq = mono({0, 0});
    const Rational pc = printed.coefficient(l0sq);
    const Rational gc = f.g.coefficient(l0sq);
    if (pc != 0 && gc != 0 && (pc < 0) != (gc < 0)) f.g = -f.g;

    std::map<Exponent, std::pair<Rational, Rational>> all;
    for (const auto& [e, c] : printed.terms()) all[e].first = c;
    for (const auto& [e, c] : f.g.terms()) all[e].second = c;
    for (const auto& [e, pr] : all)
        if (pr.first != pr.second) f.third_factor_diff.push_back({e, pr.first, pr.second});
    return f;
}

namespace {

FactorValues evaluate_factors(const std::array<double, kNumVars>& l, double scale, const Polynomial& a,
                              const Polynomial& b, const Polynomial& c) {
    FactorValues v;
    const Polynomial* ps[3] = {&a, &b, &c};
    for (int k = 0; k < 3; ++k) {
        v.f[k] = ps[k]->evaluate(l);
        const double thresh = 1e-9 * std::pow(scale, ps[k]->degree());
        v.zero[k] = std::abs(v.f[k]) <= thresh;
    }
    return v;
}

} // namespace

EomType classify(const EomSpec& spec, const Factorization& f) {
    std::array<double, kNumVars> l;
    for (int i = 0; i < kNumVars; ++i) l[i] = spec.lambda[i];
    const double scale = spec.lambda.norm();

    EomType t;
    t.massless = spec.mu == 0.0;
    t.factors = evaluate_factors(l, scale, f.f1, f.f2, f.g);
    t.type = type_from_pattern(t.factors.zero[0], t.factors.zero[1], t.factors.zero[2]);
    t.invertible = t.type == EomTypeLabel::I;
    t.printed_factors = evaluate_factors(l, scale, printed_factor1(), printed_factor2(), printed_factor3());
    t.printed_type = type_from_pattern(t.printed_factors.zero[0], t.printed_factors.zero[1], t.printed_factors.zero[2]);
    t.conflict = t.type != t.printed_type;
    return t;
}

std::vector<Table2Row> table2_crosscheck(const Factorization& f) {
    auto coeffs = [](std::array<double, 6> v) {
        SuperOpCoeffs c;
        c.v = v;
        return c;
    };
    struct Entry {
        std::string label;
        std::array<double, 6> lambda;
        EomTypeLabel printed;
    };
    using T = EomTypeLabel;
    const std::vector<Entry> entries = {
        {"box", {1, 0, 0, 0, 0, 0}, T::I},
        {"Omega2 box", {0, 0, 1, 0, 0, 0}, T::VII},
        {"(14 - Omega3 + Omega4) box", {14, 0, 0, -1, 1, 0}, T::I},
        {"(2 - Omega3 - Omega4) box", {2, 0, 0, -1, -1, 0}, T::VIII},
        {"(l - Omega3 + Omega4) box, l = -10", {-10, 0, 0, -1, 1, 0}, T::III},
        {"(l - Omega3 + Omega4) box, l = -2", {-2, 0, 0, -1, 1, 0}, T::IV},
        {"(l - Omega3 + Omega4) box, l = 2", {2, 0, 0, -1, 1, 0}, T::VI},
        {"(l - Omega3 + Omega4) box, l = 5", {5, 0, 0, -1, 1, 0}, T::I},
        {"(l - Omega3 - Omega4) box, l = -6", {-6, 0, 0, -1, -1, 0}, T::IV},
        {"(l - Omega3 - Omega4) box, l = 2", {2, 0, 0, -1, -1, 0}, T::VIII},
        {"(l - Omega3 - Omega4) box, l = 5", {5, 0, 0, -1, -1, 0}, T::I},
        {"(Omega2 + Omega5) box", {0, 0, 1, 0, 0, 1}, T::VIII},
    };
    std::vector<Table2Row> rows;
    for (const auto& e : entries) {
        Table2Row r{e.label, coeffs(e.lambda), e.printed, classify(EomSpec(coeffs(e.lambda), 0.0), f), false};
        r.agree = r.verdict.type == r.printed_label;
        rows.push_back(std::move(r));
    }
    return rows;
}

std::optional<EomSpec> equivalent_type1_reduction(const EomSpec& spec, const StructureConstants& c) {
    const auto inv = monoid_inverse(spec.lambda, c);
    if (inv.singular()) return std::nullopt;
    double w = 0.0;
    for (int a = 0; a < kNumOmega; ++a) w += (*inv.inverse)[a] * kOmegaOnTriple[a];
    return EomSpec(SuperOpCoeffs::unit(0), spec.mu == 0.0 ? 0.0 : spec.mu * w);
}

} // namespace qubitfield
