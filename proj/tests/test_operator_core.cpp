#include "qubitfield/matrix_io.hpp"
#include "qubitfield/operator_core.hpp"
#include "qubitfield/parallel.hpp"
#include "qubitfield/random_ops.hpp"

#include <doctest.h>

#include <atomic>
#include <cmath>
#include <sstream>
#include <vector>

using namespace qubitfield;

namespace {

// Naive Kronecker product straight from the index definition.
Matrix naive_kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            for (Eigen::Index k = 0; k < b.rows(); ++k)
                for (Eigen::Index l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    return out;
}

// m_ab = sum_k A'(a r + k, b r + k) with A' in the product frame.
Matrix2 brute_partial_trace(const Matrix& a_product, std::size_t r) {
    Matrix2 m = Matrix2::Zero();
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (std::size_t k = 0; k < r; ++k) m(a, b) += a_product(a * r + k, b * r + k);
    return m;
}

} // namespace

TEST_CASE("pauli matrices and levi-civita") {
    const Complex i{0.0, 1.0};
    CHECK(pauli(1)(0, 1) == Complex(1.0));
    CHECK(pauli(2)(0, 1) == -i);
    CHECK(pauli(2)(1, 0) == i);
    CHECK(pauli(3)(1, 1) == Complex(-1.0));
    CHECK_THROWS_AS(pauli(0), std::out_of_range);
    CHECK((pauli(1) * pauli(2) - i * pauli(3)).norm() == 0.0);

    CHECK(levi_civita(0, 1, 2) == 1);
    CHECK(levi_civita(1, 2, 0) == 1);
    CHECK(levi_civita(2, 0, 1) == 1);
    CHECK(levi_civita(1, 0, 2) == -1);
    CHECK(levi_civita(0, 2, 1) == -1);
    CHECK(levi_civita(0, 0, 1) == 0);
}

TEST_CASE("kron matches the index definition") {
    Rng rng(3);
    const Matrix a = random_gaussian(2, 3, rng);
    const Matrix b = random_gaussian(4, 2, rng);
    CHECK((kron(a, b) - naive_kron(a, b)).norm() == doctest::Approx(0.0));
}

TEST_CASE("embedded triple obeys the algebra exactly") {
    for (std::size_t n : {2u, 4u, 6u, 8u}) {
        const QubitTriple t = embed_triple(n);
        CHECK(t.dim() == n);
        const TripleCheck c = verify_triple(t);
        CHECK(c.residual == 0.0);
        CHECK(c.pass());
    }
    CHECK_THROWS_AS(embed_triple(3), std::invalid_argument);
    CHECK_THROWS_AS(embed_triple(0), std::invalid_argument);
}

TEST_CASE("conjugated triples stay valid") {
    Rng rng(1);
    const QubitTriple t = embed_triple(6).conjugated(random_unitary(6, rng));
    CHECK(verify_triple(t).residual < 1e-13);
    for (int j = 0; j < 3; ++j) CHECK(is_hermitian(t[j]));
}

TEST_CASE("verify_triple classifies broken triples") {
    const QubitTriple e = embed_triple(4);
    // swapping q_1 and q_2 flips the sign of every commutator: q_2 q_1 - i q_3 = -2 i q_3
    const TripleCheck swapped = verify_triple(OperatorTriple{e[1], e[0], e[2]});
    CHECK(swapped.status == TripleStatus::algebra_violation);
    CHECK(swapped.residual == doctest::Approx(4.0));

    const Complex i{0.0, 1.0};
    const TripleCheck nh = verify_triple(OperatorTriple{i * e[0], e[1], e[2]});
    CHECK(nh.status == TripleStatus::non_hermitian);
    CHECK(nh.hermitian_defect == doctest::Approx(2.0 * std::sqrt(4.0)));

    CHECK_THROWS_AS(QubitTriple(OperatorTriple{e[0], e[0], e[2]}), std::invalid_argument);
    CHECK_NOTHROW(QubitTriple::unchecked(OperatorTriple{e[0], e[0], e[2]}));
}

TEST_CASE("product frame and partial trace") {
    Rng rng(7);
    for (std::size_t n : {2u, 4u, 6u}) {
        const QubitTriple t = embed_triple(n).conjugated(random_unitary(n, rng));
        const ProductFrame f(t);
        CHECK((f.basis().adjoint() * f.basis() - identity(n)).norm() < 1e-12);
        for (int j = 0; j < 3; ++j) {
            const Matrix target = kron(Matrix(pauli(j + 1)), identity(n / 2));
            CHECK((f.to_product(t[j]) - target).norm() < 1e-12);
        }

        const Matrix a = random_gaussian(n, n, rng);
        const Matrix2 m = partial_trace_rest(t, a);
        CHECK((m - brute_partial_trace(f.to_product(a), n / 2)).norm() < 1e-12);
        for (int j = 0; j < 3; ++j) {
            const Complex lhs = (a * t[j]).trace();
            const Complex rhs = (m * pauli(j + 1)).trace();
            CHECK(std::abs(lhs - rhs) < 1e-12);
        }
        CHECK(std::abs(m.trace() - a.trace()) < 1e-12);

        const ProductDecomposition d = decompose(f, a);
        CHECK((d.reconstruct() - f.to_product(a)).norm() < 1e-12);
        CHECK((f.from_product(f.to_product(a)) - a).norm() < 1e-12);
    }
}

TEST_CASE("matrix dump round trip is bit exact") {
    Rng rng(11);
    const Matrix m = random_gaussian(3, 5, rng) * 1e-7;
    std::stringstream ss;
    write_matrix(ss, m);
    const Matrix back = read_matrix(ss);
    CHECK(back.rows() == 3);
    CHECK(back.cols() == 5);
    CHECK((back - m).norm() == 0.0);

    const OperatorTriple t = embed_triple(4).ops();
    std::stringstream ts;
    write_triple(ts, t);
    const OperatorTriple tb = read_triple(ts);
    for (int j = 0; j < 3; ++j) CHECK((tb[j] - t[j]).norm() == 0.0);
}

TEST_CASE("complex token parsing") {
    CHECK(parse_complex("1.5-2i") == Complex(1.5, -2.0));
    CHECK(parse_complex("-3+0i") == Complex(-3.0, 0.0));
    CHECK(parse_complex("1e-05+2.5e+03i") == Complex(1e-5, 2.5e3));
    CHECK(format_complex(Complex(0.5, -0.25)) == "0.5-0.25i");
    CHECK_THROWS_AS(parse_complex("1.5"), std::runtime_error);
    CHECK_THROWS_AS(parse_complex("abc+1i"), std::runtime_error);
    std::stringstream bad("dims 2 2\n1+0i 0+0i\n");
    CHECK_THROWS_AS(read_matrix(bad), std::runtime_error);
    std::stringstream nohdr("2 2\n");
    CHECK_THROWS_AS(read_matrix(nohdr), std::runtime_error);
}

TEST_CASE("random helpers") {
    Rng rng(5);
    const Matrix u = random_unitary(5, rng);
    CHECK((u.adjoint() * u - identity(5)).norm() < 1e-12);
    CHECK(is_hermitian(random_hermitian(4, rng)));
    const Matrix rho = random_density(4, rng);
    CHECK(std::abs(rho.trace() - 1.0) < 1e-12);
    CHECK(std::abs(random_state(3, rng).norm() - 1.0) < 1e-12);

    Rng a(kDefaultSeed), b(kDefaultSeed);
    CHECK((random_hermitian(3, a) - random_hermitian(3, b)).norm() == 0.0);
}

TEST_CASE("parallel_for visits every index once and rethrows") {
    for (unsigned threads : {1u, 3u}) {
        set_max_threads(threads);
        std::vector<std::atomic<int>> hits(1000);
        parallel_for(hits.size(), [&](std::size_t i) { hits[i]++; });
        int total = 0;
        for (auto& h : hits) {
            CHECK(h.load() == 1);
            total += h.load();
        }
        CHECK(total == 1000);
        CHECK_THROWS_AS(parallel_for(50,
                                     [](std::size_t i) {
                                         if (i == 17) throw std::runtime_error("boom");
                                     }),
                        std::runtime_error);
    }
    set_max_threads(0);
}
