#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "forestsig/forest.hpp"
#include "forestsig/hopf.hpp"
#include "forestsig/path.hpp"
#include "forestsig/signature.hpp"
#include "forestsig/tree_tensors.hpp"
#include "support/quadrature_oracle.hpp"

using namespace forestsig;

namespace {

LevelledForest F(const std::string& text) { return parse_forest(text); }

std::vector<Matrix> random_args(int d, int n, SplitMix64& rng) {
    std::vector<Matrix> xs;
    for (int i = 0; i < n; ++i) xs.push_back(random_matrix(d, rng));
    return xs;
}

PathSpec linear_path(const Matrix& m, int grid) {
    PathSpec p;
    p.d = m.d;
    p.kind = PathSpec::Kind::polynomial;
    p.coeffs = {Matrix::zero(m.d), m};
    p.grid = grid;
    return p;
}

PathSpec constant_path(const Matrix& m, int grid) {
    PathSpec p;
    p.d = m.d;
    p.kind = PathSpec::Kind::polynomial;
    p.coeffs = {m};
    p.grid = grid;
    return p;
}

// the small profile used for identity sweeps; same shape as default_path but
// cheap enough to rebuild per test
PathSpec sweep_path(int grid = 200) { return random_polynomial_path(2, 3, 42, grid, true); }

Tensor closed_form_linear(const Matrix& m, double s, double t, int level) {
    std::vector<Matrix> factors(level, m);
    double c = 1.0;
    for (int k = 1; k <= level; ++k) c *= (t - s) / k;
    return Complex(c) * pure_tensor(factors, m.d);
}

}  // namespace

TEST_CASE("path profiles") {
    SECTION("polynomial value and derivative") {
        const PathSpec p = random_polynomial_path(2, 3, 7, 100, false);
        const double h = 1e-6;
        for (double t : {0.1, 0.5, 0.93}) {
            const Matrix fd =
                Complex(1.0 / (2 * h)) * (p.value(t + h) - p.value(t - h));
            CHECK(max_abs_diff(fd, p.derivative(t)) < 1e-6);
        }
    }
    SECTION("trigonometric value and derivative") {
        PathSpec p;
        p.d = 2;
        p.kind = PathSpec::Kind::trigonometric;
        SplitMix64 rng(11);
        for (int i = 0; i < 5; ++i) p.coeffs.push_back(random_matrix(2, rng));
        p.grid = 100;
        p.validate();
        const double h = 1e-6;
        for (double t : {0.2, 0.77}) {
            const Matrix fd =
                Complex(1.0 / (2 * h)) * (p.value(t + h) - p.value(t - h));
            CHECK(max_abs_diff(fd, p.derivative(t)) < 1e-5);
        }
    }
    SECTION("sampled path interpolates its samples") {
        SplitMix64 rng(13);
        PathSpec p;
        p.d = 2;
        p.kind = PathSpec::Kind::sampled;
        p.grid = 4;
        for (int j = 0; j <= 4; ++j) p.coeffs.push_back(random_matrix(2, rng));
        p.validate();
        CHECK(max_abs_diff(p.value(0.5), p.coeffs[2]) < 1e-15);
        const Matrix mid = Complex(0.5) * (p.coeffs[0] + p.coeffs[1]);
        CHECK(max_abs_diff(p.value(0.125), mid) < 1e-15);
    }
    SECTION("validation") {
        PathSpec p = sweep_path();
        p.grid = 1;
        CHECK_THROWS_AS(p.validate(), std::invalid_argument);

        PathSpec q = sweep_path();
        q.self_adjoint = true;
        SplitMix64 rng(17);
        q.coeffs[1] = random_matrix(2, rng);  // almost surely not Hermitian
        CHECK_THROWS_AS(q.validate(), std::invalid_argument);

        PathSpec r = sweep_path();
        r.kind = PathSpec::Kind::sampled;
        CHECK_THROWS_AS(r.validate(), std::invalid_argument);
    }
    SECTION("default profile") {
        const PathSpec p = default_path();
        CHECK(p.d == 2);
        CHECK(p.grid == 2000);
        CHECK(p.coeffs.size() == 4);
        CHECK(p.self_adjoint);
        for (const Matrix& m : p.coeffs) CHECK(max_abs_diff(m, adjoint(m)) < 1e-15);
        // reproducible
        CHECK(max_abs_diff(default_path().coeffs[3], p.coeffs[3]) == 0.0);
    }
}

TEST_CASE("level tensors") {
    SplitMix64 rng(23);

    SECTION("constant path vanishes above level zero") {
        const SignatureEngine eng(constant_path(random_matrix(2, rng), 32));
        const auto levels = eng.level_tensors(0.0, 1.0, 3);
        CHECK(levels[0].data[0] == Complex(1.0));
        for (int n = 1; n <= 3; ++n) CHECK(frobenius_norm(levels[n]) == 0.0);
    }
    SECTION("linear path closed form") {
        const Matrix m = random_matrix(2, rng);
        const SignatureEngine eng(linear_path(m, 64));
        for (double s : {0.0, 0.25})
            for (int n = 1; n <= 4; ++n) {
                const Tensor got = eng.level_tensor(s, 0.75, n);
                CHECK(max_abs_diff(got, closed_form_linear(m, s, 0.75, n)) < 1e-13);
            }
    }
    SECTION("level one is the exact increment") {
        const SignatureEngine eng(sweep_path());
        const Matrix inc = eng.path().value(0.7) - eng.path().value(0.2);
        CHECK(max_abs_diff(eng.level_tensor(0.2, 0.7, 1), pure_tensor({inc}, 2)) < 1e-12);
        const auto lp = eng.leftpoint_level_tensors(0.2, 0.7, 1);
        CHECK(max_abs_diff(lp[1], pure_tensor({inc}, 2)) < 1e-12);
    }
    SECTION("times snap to the grid") {
        const SignatureEngine eng(sweep_path(100));
        const Tensor a = eng.level_tensor(0.2000004, 0.7, 2);
        const Tensor b = eng.level_tensor(0.2, 0.6999996, 2);
        CHECK(max_abs_diff(a, b) == 0.0);
        CHECK_THROWS_AS(eng.level_tensor(0.7, 0.2, 1), std::invalid_argument);
        CHECK_THROWS_AS(eng.level_tensor(0.0, 1.2, 1), std::invalid_argument);
        CHECK_THROWS_AS(eng.level_tensor(0.0, 1.0, 9), std::invalid_argument);
    }
    SECTION("left-point scheme converges at first order") {
        for (int level : {2, 3}) {
            double err[2];
            for (int i = 0; i < 2; ++i) {
                const int grid = 250 << i;
                const SignatureEngine eng(sweep_path(grid));
                const Tensor exact = eng.level_tensor(0.0, 1.0, level);
                const Tensor left = eng.leftpoint_level_tensors(0.0, 1.0, level)[level];
                err[i] = frobenius_norm(left - exact);
            }
            const double ratio = err[0] / err[1];
            CHECK(ratio > 1.6);
            CHECK(ratio < 2.4);
        }
    }
}

TEST_CASE("permuted integrals") {
    SplitMix64 rng(29);

    SECTION("identity permutation changes nothing") {
        const SignatureEngine eng(sweep_path());
        CHECK(max_abs_diff(eng.permuted_integral(0.0, 1.0, {1, 2, 3}),
                           eng.level_tensor(0.0, 1.0, 3)) == 0.0);
    }
    SECTION("linear path is permutation invariant") {
        const SignatureEngine eng(linear_path(random_matrix(2, rng), 64));
        const Tensor base = eng.level_tensor(0.0, 1.0, 3);
        for (const Perm& s : all_permutations(3))
            CHECK(max_abs_diff(eng.permuted_integral(0.0, 1.0, s), base) < 1e-14);
    }
    SECTION("integration by parts at level two") {
        const SignatureEngine eng(sweep_path());
        const Tensor sum = eng.permuted_integral(0.1, 0.9, {1, 2}) +
                           eng.permuted_integral(0.1, 0.9, {2, 1});
        const Tensor inc = eng.level_tensor(0.1, 0.9, 1);
        CHECK(max_abs_diff(sum, outer(inc, inc)) < 1e-12);
    }
}

TEST_CASE("quadrature oracle agreement") {
    SECTION("level one is the exact increment") {
        const PathSpec p = sweep_path();
        const Tensor got = testing::oracle_quadrature(p, {1}, 0.2, 0.9);
        const Matrix inc = p.value(0.9) - p.value(0.2);
        CHECK(max_abs_diff(got, pure_tensor({inc}, 2)) < 1e-15);
    }
    SECTION("linear path against the closed form") {
        SplitMix64 rng(31);
        const Matrix m = random_matrix(2, rng);
        const PathSpec p = linear_path(m, 16);
        for (int n : {2, 3}) {
            Perm id(n);
            for (int i = 0; i < n; ++i) id[i] = i + 1;
            const Tensor got = testing::oracle_quadrature(p, id, 0.0, 1.0, 400);
            CHECK(max_abs_diff(got, closed_form_linear(m, 0.0, 1.0, n)) < 1e-5);
        }
    }
    SECTION("two independent schemes agree on the default profile") {
        const SignatureEngine eng(default_path());
        for (int n = 1; n <= 3; ++n) {
            Perm id(n);
            for (int i = 0; i < n; ++i) id[i] = i + 1;
            const Tensor table = eng.level_tensor(0.0, 1.0, n);
            const Tensor quad = testing::oracle_quadrature(eng.path(), id, 0.0, 1.0, 200);
            CHECK(max_abs_diff(table, quad) < 1e-4);
        }
        // a non-identity permutation too
        const Tensor table = eng.permuted_integral(0.0, 1.0, {2, 1});
        const Tensor quad = testing::oracle_quadrature(eng.path(), {2, 1}, 0.0, 1.0, 200);
        CHECK(max_abs_diff(table, quad) < 1e-4);
    }
}

TEST_CASE("contractions") {
    SplitMix64 rng(37);

    SECTION("the bare root is the identity map") {
        const SignatureEngine eng(sweep_path());
        const Matrix a = random_matrix(2, rng);
        CHECK(max_abs_diff(eng.full_contraction(F("e;0"), 0.1, 0.8, {a}), a) == 0.0);
    }
    SECTION("linear path with two vertices") {
        const Matrix m = random_matrix(2, rng);
        const SignatureEngine eng(linear_path(m, 64));
        const auto args = random_args(2, 3, rng);
        const Matrix expect = Complex(0.5) * (((((args[0] * m) * args[1]) * m) * args[2]));
        for (const char* tree : {"12;2", "21;2"}) {
            const Matrix got = eng.full_contraction(F(tree), 0.0, 1.0, args);
            CHECK(max_abs_diff(got, expect) < 1e-13);
        }
    }
    SECTION("one-dimensional algebra collapses to scalars") {
        const PathSpec p = random_polynomial_path(1, 3, 99, 128, false);
        const SignatureEngine eng(p);
        const auto args = random_args(1, 3, rng);
        const Complex inc = (p.value(1.0) - p.value(0.0)).a[0];
        const Complex expect = args[0].a[0] * args[1].a[0] * args[2].a[0] * inc * inc * 0.5;
        for (const char* tree : {"12;2", "21;2"}) {
            const Matrix got = eng.full_contraction(F(tree), 0.0, 1.0, args);
            CHECK(std::abs(got.a[0] - expect) < 1e-13);
        }
    }
    SECTION("single tree partial contraction matches the full one") {
        const SignatureEngine eng(sweep_path());
        const auto args = random_args(2, 4, rng);
        const LevelledForest tau = F("213;3");
        const Tensor part = eng.partial_contraction(tau, 0.0, 1.0, args);
        REQUIRE(part.order == 1);
        CHECK(max_abs_diff(tensor_to_matrix(part),
                           eng.full_contraction(tau, 0.0, 1.0, args)) == 0.0);
        CHECK_THROWS_AS(eng.full_contraction(F("1;1,0"), 0.0, 1.0, args),
                        std::invalid_argument);
    }
    SECTION("root forests pass their arguments through") {
        const SignatureEngine eng(sweep_path());
        const auto args = random_args(2, 3, rng);
        const Tensor got = eng.partial_contraction(F("e;0,0,0"), 0.0, 1.0, args);
        CHECK(max_abs_diff(got, pure_tensor(args, 2)) < 1e-15);
    }
    SECTION("argument counts are enforced") {
        const SignatureEngine eng(sweep_path());
        CHECK_THROWS_AS(eng.partial_contraction(F("1;1"), 0.0, 1.0, std::vector<Matrix>{}),
                        std::invalid_argument);
        CHECK_THROWS_AS(eng.forest_operator(F("12345;5"), 0.0, 1.0), std::invalid_argument);
    }
    SECTION("splitting reinterprets slots as grouped words") {
        const Tensor level3 = pure_tensor(random_args(2, 3, rng), 2);
        const GroupedTensor whole = split_integral(level3, {3});
        CHECK(whole.num_groups() == 1);
        CHECK(max_abs_diff(whole.t, level3) == 0.0);
        CHECK_THROWS_AS(split_integral(level3, {2, 2}), std::invalid_argument);

        // the five-vertex grouping (13245; 2,0,2,1,0) on a pure stand-in:
        // factors 2 and 5 stay bare arguments
        const auto letters = random_args(2, 5, rng);
        const auto xs = random_args(2, 10, rng);
        const GroupedTensor gt = split_integral(pure_tensor(letters, 2), {2, 0, 2, 1, 0});
        const Tensor got = op_apply(gt, xs);
        const Matrix f1 = xs[0] * letters[0] * xs[1] * letters[1] * xs[2];
        const Matrix f3 = xs[4] * letters[2] * xs[5] * letters[3] * xs[6];
        const Matrix f4 = xs[7] * letters[4] * xs[8];
        const Tensor expect = pure_tensor({f1, xs[3], f3, f4, xs[9]}, 2);
        CHECK(max_abs_diff(got, expect) < 1e-12);
    }
}

TEST_CASE("chen relation") {
    SECTION("the two-tree example decomposes into four terms") {
        CHECK(subforests(F("213;2,1")).size() == 4);
    }
    SECTION("degenerate middle points") {
        const SignatureEngine eng(sweep_path());
        SplitMix64 rng(41);
        const LevelledForest f = F("213;2,1");
        const auto args = random_args(2, 5, rng);
        CHECK(eng.chen_check(f, 0.0, 0.0, 1.0, args) < 1e-12);
        CHECK(eng.chen_check(f, 0.0, 1.0, 1.0, args) < 1e-12);
    }
    SECTION("sweep over small forests") {
        const SignatureEngine eng(sweep_path());
        SplitMix64 rng(43);
        for (int n = 1; n <= 3; ++n)
            for (int m = 1; m <= 3; ++m)
                for (const LevelledForest& f : forests_sized(n, m)) {
                    const auto args = random_args(2, n + m, rng);
                    REQUIRE(eng.chen_check(f, 0.0, 0.4, 1.0, args) < 1e-10);
                }
    }
}

TEST_CASE("triangular endomorphism") {
    SplitMix64 rng(47);

    SECTION("empty interval acts as the identity") {
        const SignatureEngine eng(sweep_path());
        const LevelledForest tau = F("213;3");
        const Tensor a = pure_tensor(random_args(2, 4, rng), 2);
        const TreeTensor out = eng.bar_apply(a, tau, 0.3, 0.3);
        CHECK(tt_distance(out, TreeTensor{{tau, a}}) < 1e-15);
    }
    SECTION("output trees are the lower cuts") {
        const SignatureEngine eng(sweep_path());
        const LevelledForest tau = F("213;3");
        const Tensor a = pure_tensor(random_args(2, 4, rng), 2);
        const TreeTensor out = eng.bar_apply(a, tau, 0.0, 1.0);
        REQUIRE(out.size() == 4);
        for (const auto& [tree, coeff] : out) {
            CHECK(tree.num_trees() == 1);
            CHECK(tree.vertices() <= 3);
            CHECK(coeff.order == tree.leaves());
        }
        // the top component is the original tensor
        CHECK(max_abs_diff(out.at(tau), a) < 1e-15);
    }
    SECTION("bare-root element is fixed") {
        const SignatureEngine eng(sweep_path());
        const Matrix a = random_matrix(2, rng);
        const TreeTensor out = eng.bar_apply(pure_tensor({a}, 2), root_forest(1), 0.0, 1.0);
        CHECK(tt_distance(out, tt_pure({a}, root_forest(1), 2)) < 1e-15);
    }
    SECTION("linear in the decoration") {
        const SignatureEngine eng(sweep_path());
        const LevelledForest tau = F("21;2");
        const Tensor a = pure_tensor(random_args(2, 3, rng), 2);
        const Tensor b = pure_tensor(random_args(2, 3, rng), 2);
        const TreeTensor sum = eng.bar_apply(a + b, tau, 0.0, 1.0);
        TreeTensor parts = eng.bar_apply(a, tau, 0.0, 1.0);
        for (const auto& [tree, coeff] : eng.bar_apply(b, tau, 0.0, 1.0))
            tt_add(parts, tree, coeff);
        CHECK(tt_distance(sum, parts) < 1e-12);
    }
    SECTION("composition over adjacent intervals") {
        const SignatureEngine eng(sweep_path());
        for (const char* tree : {"1;1", "21;2", "132;3", "213;3"}) {
            const LevelledForest tau = F(tree);
            const Tensor a = pure_tensor(random_args(2, tau.leaves(), rng), 2);
            const TreeTensor whole = eng.bar_apply(a, tau, 0.0, 1.0);
            const TreeTensor composed =
                eng.bar_apply(eng.bar_apply(a, tau, 0.0, 0.4), 0.4, 1.0);
            REQUIRE(tt_distance(whole, composed) / std::max(1.0, tt_norm(whole)) < 1e-10);
        }
    }
}

TEST_CASE("shuffle identity") {
    SECTION("level-two instance is integration by parts") {
        const SignatureEngine eng(sweep_path());
        SplitMix64 rng(53);
        // two one-vertex trees: composing their operators equals the sum of
        // the two-vertex products
        const auto args = random_args(2, 3, rng);
        CHECK(eng.shuffle_check(F("1;1"), F("1;1,0"), 0.0, 1.0, args) < 1e-12);
    }
    SECTION("root forests act as units") {
        const SignatureEngine eng(sweep_path());
        SplitMix64 rng(59);
        CHECK(eng.shuffle_check(F("e;0,0"), F("1;1,0"), 0.0, 1.0, random_args(2, 3, rng)) <
              1e-13);
        CHECK(eng.shuffle_check(F("1;1"), F("e;0,0"), 0.0, 1.0, random_args(2, 2, rng)) <
              1e-13);
    }
    SECTION("sweep over compatible pairs") {
        const SignatureEngine eng(sweep_path());
        SplitMix64 rng(61);
        int checked = 0;
        for (int nf = 0; nf <= 3; ++nf)
            for (int mf = 1; mf <= 2; ++mf)
                for (const LevelledForest& f : forests_sized(nf, mf)) {
                    const int want = f.leaves();
                    if (want > 4) continue;
                    for (int ng = 0; nf + ng <= 3; ++ng)
                        for (const LevelledForest& g : forests_sized(ng, want)) {
                            const auto args = random_args(2, nf + ng + mf, rng);
                            REQUIRE(eng.shuffle_check(f, g, 0.0, 1.0, args) < 1e-10);
                            ++checked;
                        }
                }
        CHECK(checked > 20);
    }
    SECTION("incompatible shapes throw") {
        const SignatureEngine eng(sweep_path());
        CHECK_THROWS_AS(eng.shuffle_check(F("1;1"), F("1;1"), 0.0, 1.0, {}),
                        std::invalid_argument);
    }
}

TEST_CASE("geometric identities") {
    SplitMix64 rng(67);
    const SignatureEngine eng(sweep_path());

    SECTION("decorated shuffle survives the endomorphism") {
        const std::vector<std::string> trees = {"e;0", "1;1", "12;2", "21;2"};
        for (const std::string& sa : trees)
            for (const std::string& sb : trees) {
                const LevelledForest alpha = F(sa), beta = F(sb);
                if (alpha.vertices() + beta.vertices() > 3) continue;
                const auto a = random_args(2, alpha.leaves(), rng);
                const auto b = random_args(2, beta.leaves(), rng);
                REQUIRE(eng.geometric_shuffle_check(a, alpha, b, beta, 0.0, 1.0) < 1e-10);
            }
    }
    SECTION("gap substitution commutes with the endomorphism") {
        // no gaps: plain one-letter word against a tree argument? p = 0 means
        // no arguments at all, sanity only
        const auto u0 = random_args(2, 1, rng);
        CHECK(eng.geometric_substitution_check(u0, {}, 0.0, 1.0) < 1e-15);

        // one gap, argument tree up to two vertices
        for (const char* sb : {"e;0", "1;1", "21;2"}) {
            const LevelledForest beta = F(sb);
            const auto u = random_args(2, 2, rng);
            const auto a = random_args(2, beta.leaves(), rng);
            REQUIRE(eng.geometric_substitution_check(u, {{a, beta}}, 0.0, 1.0) < 1e-10);
        }

        // two gaps, one-vertex arguments
        const auto u = random_args(2, 3, rng);
        const auto a1 = random_args(2, 2, rng);
        const auto a2 = random_args(2, 2, rng);
        REQUIRE(eng.geometric_substitution_check(
                    u, {{a1, F("1;1")}, {a2, F("1;1")}}, 0.0, 1.0) < 1e-10);
    }
    SECTION("argument count mismatch throws") {
        const auto u = random_args(2, 3, rng);
        CHECK_THROWS_AS(eng.geometric_substitution_check(u, {}, 0.0, 1.0),
                        std::invalid_argument);
    }
}
