#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "forestsig/matrix.hpp"
#include "forestsig/tensor.hpp"
#include "forestsig/words.hpp"

using namespace forestsig;

namespace {

Matrix m2(Complex a, Complex b, Complex c, Complex d) {
    Matrix m(2);
    m(0, 0) = a;
    m(0, 1) = b;
    m(1, 0) = c;
    m(1, 1) = d;
    return m;
}

double word_diff(const AlgWord& x, const AlgWord& y) {
    if (x.size() != y.size()) return 1e9;
    double m = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, max_abs_diff(x[i], y[i]));
    return m;
}

// random word of words with a prescribed number of groups, sizes <= 3
WordOfWords random_word(int d, int ngroups, SplitMix64& rng) {
    WordOfWords w;
    for (int g = 0; g < ngroups; ++g) {
        AlgWord grp;
        const int len = static_cast<int>(rng.next() % 4);  // 0..3
        for (int l = 0; l < len; ++l) grp.push_back(random_matrix(d, rng));
        w.groups.push_back(grp);
    }
    return w;
}

// like random_word but with a budget on total letters, for the dense-tensor
// paths whose storage is (d*d)^letters
WordOfWords random_word_capped(int d, int ngroups, int max_group, int total_cap,
                               SplitMix64& rng) {
    WordOfWords w;
    int budget = total_cap;
    for (int g = 0; g < ngroups; ++g) {
        AlgWord grp;
        const int len =
            std::min(budget, static_cast<int>(rng.next() % (max_group + 1)));
        for (int l = 0; l < len; ++l) grp.push_back(random_matrix(d, rng));
        budget -= len;
        w.groups.push_back(grp);
    }
    return w;
}

std::vector<Matrix> random_args(int d, int n, SplitMix64& rng) {
    std::vector<Matrix> xs;
    for (int i = 0; i < n; ++i) xs.push_back(random_matrix(d, rng));
    return xs;
}

// factors of Op(w)(args) on a pure word, kept as matrices (not a tensor) so
// they can feed a second Op layer
std::vector<Matrix> op_factors(const WordOfWords& w, const std::vector<Matrix>& args) {
    std::vector<Matrix> factors;
    std::size_t next = 0;
    for (const AlgWord& g : w.groups) {
        Matrix acc = args[next++];
        for (const Matrix& letter : g) {
            acc = acc * letter;
            acc = acc * args[next++];
        }
        factors.push_back(acc);
    }
    return factors;
}

}  // namespace

TEST_CASE("matrix arithmetic") {
    const Matrix a = m2(1.0, Complex(0, 2), 3.0, Complex(-1, 1));
    const Matrix b = m2(Complex(0, 1), 1.0, 2.0, 0.0);

    SECTION("product against hand expansion") {
        const Matrix p = a * b;
        CHECK(p(0, 0) == Complex(0, 5));   // 1*i + 2i*2
        CHECK(p(0, 1) == Complex(1, 0));   // 1*1 + 2i*0
        CHECK(p(1, 0) == Complex(-2, 5));  // 3i + (-1+i)*2
        CHECK(p(1, 1) == Complex(3, 0));
    }
    SECTION("identity and zero") {
        CHECK(max_abs_diff(Matrix::identity(2) * a, a) == 0.0);
        CHECK(max_abs_diff(a * Matrix::identity(2), a) == 0.0);
        CHECK(max_abs_diff(Matrix::zero(2) * a, Matrix::zero(2)) == 0.0);
    }
    SECTION("adjoint and trace") {
        const Matrix s = adjoint(a);
        CHECK(s(0, 1) == Complex(3, 0));
        CHECK(s(1, 0) == Complex(0, -2));
        CHECK(max_abs_diff(adjoint(s), a) == 0.0);
        CHECK(trace(a) == Complex(0, 1));
        // tr(XY) = tr(YX)
        CHECK(std::abs(trace(a * b) - trace(b * a)) < 1e-14);
    }
    SECTION("norms") {
        Matrix diag(2);
        diag(0, 0) = 3.0;
        diag(1, 1) = Complex(0, -1);
        CHECK(spectral_norm(diag) == Catch::Approx(3.0).margin(1e-10));
        CHECK(frobenius_norm(diag) == Catch::Approx(std::sqrt(10.0)));
        // spectral <= frobenius, and both vanish only at zero
        CHECK(spectral_norm(a) <= frobenius_norm(a) + 1e-12);
        CHECK(spectral_norm(Matrix::zero(2)) == 0.0);
        // unitary has unit spectral norm: rotation by 0.7
        Matrix u(2);
        u(0, 0) = std::cos(0.7);
        u(0, 1) = -std::sin(0.7);
        u(1, 0) = std::sin(0.7);
        u(1, 1) = std::cos(0.7);
        CHECK(spectral_norm(u) == Catch::Approx(1.0).margin(1e-10));
    }
    SECTION("seeded generators are reproducible") {
        SplitMix64 r1(42), r2(42);
        const Matrix x = random_matrix(3, r1);
        const Matrix y = random_matrix(3, r2);
        CHECK(max_abs_diff(x, y) == 0.0);
        const Matrix h = random_hermitian(3, r1);
        CHECK(max_abs_diff(h, adjoint(h)) < 1e-15);
        for (const Complex& v : x.a) {
            CHECK(std::abs(v.real()) <= 1.0);
            CHECK(std::abs(v.imag()) <= 1.0);
        }
    }
}

TEST_CASE("tensor basics") {
    SplitMix64 rng(7);
    const Matrix a = random_matrix(2, rng);
    const Matrix b = random_matrix(2, rng);
    const Matrix c = random_matrix(2, rng);

    SECTION("pure tensor entries") {
        const Tensor t = pure_tensor({a, b}, 2);
        CHECK(t.order == 2);
        CHECK(t.data.size() == 16);
        // entry at (q1, q2) is a[q1] * b[q2]
        CHECK(t.data[t.flat({3, 2})] == a.a[3] * b.a[2]);
        CHECK(t.data[t.flat({0, 0})] == a.a[0] * b.a[0]);
    }
    SECTION("empty factor list is the unit scalar") {
        const Tensor one = pure_tensor({}, 2);
        CHECK(one.order == 0);
        CHECK(one.data[0] == Complex(1.0));
        CHECK(max_abs_diff(scalar_tensor(2, 1.0), one) == 0.0);
    }
    SECTION("outer product matches concatenated pure tensors") {
        const Tensor lhs = outer(pure_tensor({a}, 2), pure_tensor({b, c}, 2));
        const Tensor rhs = pure_tensor({a, b, c}, 2);
        CHECK(max_abs_diff(lhs, rhs) < 1e-15);
        // scalar acts as unit on either side
        CHECK(max_abs_diff(outer(scalar_tensor(2, 1.0), lhs), lhs) == 0.0);
        CHECK(max_abs_diff(outer(lhs, scalar_tensor(2, 1.0)), lhs) == 0.0);
    }
    SECTION("linear structure") {
        const Tensor t = pure_tensor({a, b}, 2);
        const Tensor u = pure_tensor({b, a}, 2);
        CHECK(max_abs_diff((t + u) - u, t) < 1e-15);
        CHECK(max_abs_diff(Complex(2.0) * t, t + t) < 1e-15);
        CHECK_THROWS_AS(t + pure_tensor({a}, 2), std::invalid_argument);
    }
}

TEST_CASE("permute_slots") {
    SplitMix64 rng(11);
    const Matrix a = random_matrix(2, rng);
    const Matrix b = random_matrix(2, rng);
    const Matrix c = random_matrix(2, rng);

    SECTION("swap on a pure pair") {
        const Tensor swapped = permute_slots(pure_tensor({a, b}, 2), {2, 1});
        CHECK(max_abs_diff(swapped, pure_tensor({b, a}, 2)) == 0.0);
    }
    SECTION("slot j of the result carries factor sigma(j)") {
        // the reference tensor multiplies the same entries in another order,
        // so compare up to ulps
        const Tensor t = permute_slots(pure_tensor({a, b, c}, 2), {3, 1, 2});
        CHECK(max_abs_diff(t, pure_tensor({c, a, b}, 2)) < 1e-15);
    }
    SECTION("identity and inverse") {
        Tensor t(2, 3);
        for (std::size_t i = 0; i < t.data.size(); ++i)
            t.data[i] = Complex(rng.uniform(), rng.uniform());
        CHECK(max_abs_diff(permute_slots(t, {1, 2, 3}), t) == 0.0);
        const Perm sigma = {2, 3, 1};
        CHECK(max_abs_diff(permute_slots(permute_slots(t, sigma), inverse(sigma)), t) == 0.0);
    }
    SECTION("composition law on dense order-3 tensors") {
        Tensor t(2, 3);
        for (std::size_t i = 0; i < t.data.size(); ++i)
            t.data[i] = Complex(rng.uniform(), rng.uniform());
        const std::vector<Perm> perms = all_permutations(3);
        for (const Perm& s : perms)
            for (const Perm& u : perms) {
                // pulling back twice composes in reverse order:
                // P_s(P_u(t)) picks factor u(s(j)) for slot j
                const Tensor lhs = permute_slots(permute_slots(t, u), s);
                const Tensor rhs = permute_slots(t, compose(u, s));
                CHECK(max_abs_diff(lhs, rhs) == 0.0);
            }
    }
    SECTION("size mismatch throws") {
        CHECK_THROWS_AS(permute_slots(pure_tensor({a, b}, 2), {1}), std::invalid_argument);
    }
}

TEST_CASE("contract_with_product") {
    SplitMix64 rng(13);
    const Matrix a = random_matrix(2, rng);
    const Matrix b = random_matrix(2, rng);
    const Matrix c = random_matrix(2, rng);

    SECTION("pair contracts to the matrix product") {
        CHECK(max_abs_diff(contract_with_product(pure_tensor({a, b}, 2)), a * b) < 1e-14);
    }
    SECTION("triple contracts to the triple product") {
        CHECK(max_abs_diff(contract_with_product(pure_tensor({a, b, c}, 2)), (a * b) * c) <
              1e-14);
    }
    SECTION("order one is the identity map") {
        CHECK(max_abs_diff(contract_with_product(pure_tensor({a}, 2)), a) < 1e-15);
    }
    SECTION("order zero lands on scalar multiples of the identity") {
        const Matrix m = contract_with_product(scalar_tensor(2, Complex(3, -2)));
        CHECK(m(0, 0) == Complex(3, -2));
        CHECK(m(1, 1) == Complex(3, -2));
        CHECK(m(0, 1) == Complex(0, 0));
    }
    SECTION("linear in the tensor argument") {
        const Tensor t = pure_tensor({a, b}, 2) + pure_tensor({b, a}, 2);
        CHECK(max_abs_diff(contract_with_product(t), a * b + b * a) < 1e-14);
    }
}

TEST_CASE("tensor adjoint and norms") {
    SplitMix64 rng(17);
    const Matrix a = random_matrix(2, rng);
    const Matrix b = random_matrix(2, rng);

    SECTION("slotwise conjugate transpose on pure tensors") {
        const Tensor t = adjoint(pure_tensor({a, b}, 2));
        CHECK(max_abs_diff(t, pure_tensor({adjoint(a), adjoint(b)}, 2)) == 0.0);
    }
    SECTION("involution") {
        Tensor t(2, 2);
        for (std::size_t i = 0; i < t.data.size(); ++i)
            t.data[i] = Complex(rng.uniform(), rng.uniform());
        CHECK(max_abs_diff(adjoint(adjoint(t)), t) == 0.0);
        CHECK(frobenius_norm(adjoint(t)) == Catch::Approx(frobenius_norm(t)));
    }
    SECTION("norm is multiplicative on pure tensors") {
        const double lhs = frobenius_norm(pure_tensor({a, b}, 2));
        CHECK(lhs == Catch::Approx(frobenius_norm(a) * frobenius_norm(b)));
    }
}

TEST_CASE("word insertion") {
    SplitMix64 rng(19);
    const Matrix a1 = random_matrix(2, rng);
    const Matrix a2 = random_matrix(2, rng);
    const Matrix w0 = random_matrix(2, rng);
    const Matrix w1 = random_matrix(2, rng);
    const Matrix w2 = random_matrix(2, rng);

    SECTION("interleaves fillers around the letters") {
        const AlgWord out = word_insert({a1, a2}, {{w0}, {w1}, {w2}});
        CHECK(word_diff(out, {w0, a1, w1, a2, w2}) == 0.0);
    }
    SECTION("multi-letter and empty fillers") {
        const AlgWord out = word_insert({a1}, {{w0, w1}, {}});
        CHECK(word_diff(out, {w0, w1, a1}) == 0.0);
    }
    SECTION("all-empty fillers reproduce the word") {
        const AlgWord out = word_insert({a1, a2}, {{}, {}, {}});
        CHECK(word_diff(out, {a1, a2}) == 0.0);
    }
    SECTION("empty word passes its single filler through") {
        const AlgWord out = word_insert({}, {{w0, w1}});
        CHECK(word_diff(out, {w0, w1}) == 0.0);
    }
    SECTION("filler count must be letters plus one") {
        CHECK_THROWS_AS(word_insert({a1, a2}, {{w0}, {w1}}), std::invalid_argument);
    }
}

TEST_CASE("vertical product of words of words") {
    SplitMix64 rng(23);
    const Matrix a1 = random_matrix(2, rng);
    const Matrix a2 = random_matrix(2, rng);
    const Matrix b1 = random_matrix(2, rng);
    const Matrix b2 = random_matrix(2, rng);
    const Matrix b3 = random_matrix(2, rng);

    SECTION("two-group against four-group insertion") {
        // (a1 | a2) grafted over (b1 b2 | empty | b3 | empty)
        const WordOfWords u{{{a1}, {a2}}};
        const WordOfWords v{{{b1, b2}, {}, {b3}, {}}};
        const WordOfWords p = nabla_t2(u, v);
        REQUIRE(p.num_groups() == 2);
        CHECK(word_diff(p.groups[0], {b1, b2, a1}) == 0.0);
        CHECK(word_diff(p.groups[1], {b3, a2}) == 0.0);
    }
    SECTION("all-empty lower word acts as identity") {
        const WordOfWords u{{{a1, a2}, {b1}}};
        WordOfWords v;
        v.groups.assign(static_cast<std::size_t>(u.num_inputs()), {});
        const WordOfWords p = nabla_t2(u, v);
        REQUIRE(p.num_groups() == u.num_groups());
        for (int g = 0; g < p.num_groups(); ++g)
            CHECK(word_diff(p.groups[g], u.groups[g]) == 0.0);
    }
    SECTION("arity mismatch throws") {
        const WordOfWords u{{{a1}}};  // needs 2 inputs
        const WordOfWords v{{{b1}, {b2}, {b3}}};
        CHECK_THROWS_AS(nabla_t2(u, v), std::invalid_argument);
    }
}

TEST_CASE("Op representation") {
    SplitMix64 rng(29);
    const Matrix A1 = random_matrix(2, rng);
    const std::vector<Matrix> X = random_args(2, 7, rng);

    SECTION("single letter") {
        const Tensor lhs = op_apply(WordOfWords{{{A1}}}, {X[0], X[1]}, 2);
        CHECK(max_abs_diff(lhs, pure_tensor({X[0] * A1 * X[1]}, 2)) == 0.0);
    }
    SECTION("empty group is the identity map") {
        const Tensor lhs = op_apply(WordOfWords{{{}}}, {X[0]}, 2);
        CHECK(max_abs_diff(lhs, pure_tensor({X[0]}, 2)) == 0.0);
    }
    SECTION("two groups with interleaved letters") {
        const Matrix a1 = random_matrix(2, rng), a2 = random_matrix(2, rng);
        const Matrix b1 = random_matrix(2, rng), b2 = random_matrix(2, rng);
        const Matrix b3 = random_matrix(2, rng);
        // Op(b1 b2 a1 | b3 a2) on seven arguments
        const WordOfWords w{{{b1, b2, a1}, {b3, a2}}};
        const Tensor lhs = op_apply(w, X, 2);
        const Matrix f0 = X[0] * b1 * X[1] * b2 * X[2] * a1 * X[3];
        const Matrix f1 = X[4] * b3 * X[5] * a2 * X[6];
        CHECK(max_abs_diff(lhs, pure_tensor({f0, f1}, 2)) == 0.0);
    }
    SECTION("empty outer word gives the unit scalar") {
        const Tensor lhs = op_apply(WordOfWords{}, {}, 2);
        CHECK(lhs.order == 0);
        CHECK(lhs.data[0] == Complex(1.0));
    }
    SECTION("argument count is checked") {
        CHECK_THROWS_AS(op_apply(WordOfWords{{{A1}}}, {X[0]}, 2), std::invalid_argument);
    }
    SECTION("multiplicative over outer concatenation") {
        for (int trial = 0; trial < 20; ++trial) {
            const WordOfWords u = random_word(2, 1 + static_cast<int>(rng.next() % 2), rng);
            const WordOfWords v = random_word(2, 1 + static_cast<int>(rng.next() % 2), rng);
            WordOfWords uv = u;
            uv.groups.insert(uv.groups.end(), v.groups.begin(), v.groups.end());
            const std::vector<Matrix> args = random_args(2, uv.num_inputs(), rng);
            const std::vector<Matrix> au(args.begin(), args.begin() + u.num_inputs());
            const std::vector<Matrix> av(args.begin() + u.num_inputs(), args.end());
            const Tensor lhs = op_apply(uv, args, 2);
            const Tensor rhs = outer(op_apply(u, au, 2), op_apply(v, av, 2));
            // the two sides associate the entry products differently, so
            // equality holds up to a few ulps rather than bitwise
            CHECK(max_abs_diff(lhs, rhs) < 1e-12);
        }
    }
}

TEST_CASE("Op intertwines the vertical product with composition") {
    SplitMix64 rng(31);
    int checked = 0;
    while (checked < 100) {
        const WordOfWords u = random_word(2, 1 + static_cast<int>(rng.next() % 3), rng);
        const WordOfWords v = random_word(2, u.num_inputs(), rng);
        const std::vector<Matrix> args = random_args(2, v.num_inputs(), rng);

        // feed the group products of Op(v) into Op(u); the flattened side
        // reassociates the same matrix chain, so allow a few ulps of slack
        const Tensor composed = op_apply(u, op_factors(v, args), 2);
        const Tensor direct = op_apply(nabla_t2(u, v), args, 2);
        const double scale = std::max(1.0, frobenius_norm(direct));
        REQUIRE(max_abs_diff(direct, composed) < 1e-11 * scale);
        ++checked;
    }
}

TEST_CASE("grouped tensors") {
    SplitMix64 rng(37);

    SECTION("shape validation") {
        CHECK_THROWS_AS(GroupedTensor(Tensor(2, 3), {1, 1}), std::invalid_argument);
        CHECK_NOTHROW(GroupedTensor(Tensor(2, 3), {1, 0, 2}));
        const GroupedTensor gt(Tensor(2, 2), {1, 0, 1});
        CHECK(gt.num_groups() == 3);
        CHECK(gt.num_inputs() == 5);
    }
    SECTION("dense evaluation agrees with the symbolic word") {
        for (int trial = 0; trial < 10; ++trial) {
            const WordOfWords w = random_word(2, 1 + static_cast<int>(rng.next() % 3), rng);
            const std::vector<Matrix> args = random_args(2, w.num_inputs(), rng);
            const Tensor sym = op_apply(w, args, 2);
            const Tensor dense = op_apply(grouped_from_word(w, 2), args);
            CHECK(max_abs_diff(sym, dense) < 1e-12);
        }
    }
    SECTION("evaluation is linear in the tensor") {
        const Matrix a = random_matrix(2, rng), b = random_matrix(2, rng);
        const std::vector<Matrix> args = random_args(2, 2, rng);
        GroupedTensor sum(pure_tensor({a}, 2) + pure_tensor({b}, 2), {1});
        const Tensor lhs = op_apply(sum, args);
        const Tensor rhs = op_apply(GroupedTensor(pure_tensor({a}, 2), {1}), args) +
                           op_apply(GroupedTensor(pure_tensor({b}, 2), {1}), args);
        CHECK(max_abs_diff(lhs, rhs) < 1e-12);
    }
    SECTION("argument count is checked") {
        CHECK_THROWS_AS(op_apply(GroupedTensor(Tensor(2, 1), {1}), {}), std::invalid_argument);
    }
}

TEST_CASE("vertical composition of grouped tensors") {
    SplitMix64 rng(41);

    SECTION("matches the symbolic insertion on the worked example") {
        const Matrix a1 = random_matrix(2, rng), a2 = random_matrix(2, rng);
        const Matrix b1 = random_matrix(2, rng), b2 = random_matrix(2, rng);
        const Matrix b3 = random_matrix(2, rng);
        const WordOfWords u{{{a1}, {a2}}};
        const WordOfWords v{{{b1, b2}, {}, {b3}, {}}};
        const GroupedTensor lhs = compose_end2(grouped_from_word(u, 2), grouped_from_word(v, 2));
        const GroupedTensor rhs = grouped_from_word(nabla_t2(u, v), 2);
        CHECK(lhs.groups == Composition{3, 2});
        CHECK(max_abs_diff(lhs.t, rhs.t) < 1e-12);
    }
    SECTION("matches the symbolic insertion on random pairs") {
        for (int trial = 0; trial < 100; ++trial) {
            const WordOfWords u =
                random_word_capped(2, 1 + static_cast<int>(rng.next() % 2), 2, 4, rng);
            const WordOfWords v = random_word_capped(2, u.num_inputs(), 1, 4, rng);
            const GroupedTensor lhs =
                compose_end2(grouped_from_word(u, 2), grouped_from_word(v, 2));
            const GroupedTensor rhs = grouped_from_word(nabla_t2(u, v), 2);
            REQUIRE(lhs.groups == rhs.groups);
            REQUIRE(max_abs_diff(lhs.t, rhs.t) < 1e-12);
        }
    }
    SECTION("evaluations compose") {
        for (int trial = 0; trial < 20; ++trial) {
            const WordOfWords u =
                random_word_capped(2, 1 + static_cast<int>(rng.next() % 2), 2, 4, rng);
            const WordOfWords v = random_word_capped(2, u.num_inputs(), 1, 4, rng);
            const std::vector<Matrix> args = random_args(2, v.num_inputs(), rng);
            const GroupedTensor composed =
                compose_end2(grouped_from_word(u, 2), grouped_from_word(v, 2));
            const Tensor lhs = op_apply(composed, args);
            const Tensor rhs = op_apply(u, op_factors(v, args), 2);
            const double scale = std::max(1.0, frobenius_norm(rhs));
            REQUIRE(max_abs_diff(lhs, rhs) < 1e-11 * scale);
        }
    }
    SECTION("arity mismatch throws") {
        const GroupedTensor u(Tensor(2, 1), {1});  // 2 inputs
        const GroupedTensor v(Tensor(2, 1), {1});  // 1 group
        CHECK_THROWS_AS(compose_end2(u, v), std::invalid_argument);
    }
}
