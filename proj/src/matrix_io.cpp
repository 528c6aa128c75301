#include "qubitfield/matrix_io.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace qubitfield {

namespace {
std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}
} // namespace

std::string format_complex(Complex z) {
    std::string out = fmt_double(z.real());
    const double im = z.imag();
    out += std::signbit(im) ? '-' : '+';
    out += fmt_double(std::abs(im));
    out += 'i';
    return out;
}

Complex parse_complex(const std::string& token) {
    if (token.size() < 4 || token.back() != 'i')
        throw std::runtime_error("matrix dump: malformed complex token '" + token + "'");
    // the imaginary sign is the last '+'/'-' that does not follow an exponent marker
    std::size_t split = std::string::npos;
    for (std::size_t p = token.size() - 2; p > 0; --p) {
        const char c = token[p];
        if ((c == '+' || c == '-') && token[p - 1] != 'e' && token[p - 1] != 'E') {
            split = p;
            break;
        }
    }
    if (split == std::string::npos)
        throw std::runtime_error("matrix dump: malformed complex token '" + token + "'");
    const std::string re = token.substr(0, split);
    const std::string im = token.substr(split, token.size() - split - 1);
    std::size_t used_re = 0, used_im = 0;
    double r = 0.0, m = 0.0;
    try {
        r = std::stod(re, &used_re);
        m = std::stod(im, &used_im);
    } catch (const std::exception&) {
        throw std::runtime_error("matrix dump: malformed complex token '" + token + "'");
    }
    if (used_re != re.size() || used_im != im.size())
        throw std::runtime_error("matrix dump: malformed complex token '" + token + "'");
    return {r, m};
}

void write_matrix(std::ostream& os, const Matrix& m) {
    os << "dims " << m.rows() << ' ' << m.cols() << '\n';
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c) os << ' ';
            os << format_complex(m(r, c));
        }
        os << '\n';
    }
}

Matrix read_matrix(std::istream& is) {
    std::string tag;
    long rows = 0, cols = 0;
    if (!(is >> tag) || tag != "dims" || !(is >> rows >> cols) || rows <= 0 || cols <= 0)
        throw std::runtime_error("matrix dump: expected header 'dims R C'");
    Matrix m(rows, cols);
    std::string tok;
    for (long r = 0; r < rows; ++r)
        for (long c = 0; c < cols; ++c) {
            if (!(is >> tok)) throw std::runtime_error("matrix dump: truncated data");
            m(r, c) = parse_complex(tok);
        }
    return m;
}

void write_triple(std::ostream& os, const OperatorTriple& t) {
    for (const auto& m : t) write_matrix(os, m);
}

OperatorTriple read_triple(std::istream& is) {
    OperatorTriple t;
    for (auto& m : t) m = read_matrix(is);
    return t;
}

} // namespace qubitfield
