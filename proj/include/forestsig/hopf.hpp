#pragma once

#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "forest.hpp"
#include "forest_vector.hpp"

namespace forestsig {

// --- Hopf structure maps ----------------------------------------------------

// Sum of lower (x) upper over every horizontal cut; ||f||+1 terms, all
// coefficients one.
inline ForestPairVector coproduct(const LevelledForest& f) {
    ForestPairVector out;
    for (int p = 0; p <= f.vertices(); ++p) out.add(horizontal_split(f, p), Rational(1));
    return out;
}

// Stack g on f, then riffle the two level blocks in all order-preserving
// ways. Requires the vertical compatibility nt(g) = |f|.
inline ForestVector product(const LevelledForest& f, const LevelledForest& g) {
    const LevelledForest stacked = horizontal_glue(f, g);
    ForestVector out;
    for (const Perm& s : riffle_perms(f.vertices(), g.vertices()))
        out.add(act(s, stacked), Rational(1));
    return out;
}

inline ForestVector product(const ForestVector& a, const ForestVector& b) {
    ForestVector out;
    for (const auto& [f, cf] : a.terms())
        for (const auto& [g, cg] : b.terms()) {
            ForestVector piece = product(f, g);
            piece *= cf * cg;
            out += piece;
        }
    return out;
}

// Nonzero (and equal to one, in grade nt) only on root forests.
inline Rational counit(const LevelledForest& f) {
    return Rational(f.is_root_forest() ? 1 : 0);
}

inline LevelledForest unit_forest(int width) { return root_forest(width); }

// Signed vertical mirror.
inline ForestVector antipode(const LevelledForest& f) {
    return ForestVector(vstar(f), Rational(f.vertices() % 2 ? -1 : 1));
}

inline ForestVector antipode(const ForestVector& v) {
    return v.map_terms([](const LevelledForest& f) { return antipode(f); });
}

// Braiding: act with the block swap on the stack f#g, then cut back at the
// level that now separates g's letters (below) from f's (above).
inline ForestPair braiding(const LevelledForest& f, const LevelledForest& g) {
    const LevelledForest stacked = horizontal_glue(f, g);
    const LevelledForest swapped = act(block_swap(f.vertices(), g.vertices()), stacked);
    return horizontal_split(swapped, g.vertices());
}

// --- exhaustive enumeration -------------------------------------------------

// Weak compositions of n into k parts, lexicographic.
inline std::vector<Composition> weak_compositions(int n, int k) {
    std::vector<Composition> out;
    if (k == 0) {
        if (n == 0) out.push_back({});
        return out;
    }
    Composition cur(k, 0);
    auto rec = [&](auto&& self, int pos, int left) -> void {
        if (pos == k - 1) {
            cur[pos] = left;
            out.push_back(cur);
            return;
        }
        for (int v = 0; v <= left; ++v) {
            cur[pos] = v;
            self(self, pos + 1, left - v);
        }
    };
    rec(rec, 0, n);
    return out;
}

// All forests with exactly n vertices and m trees, in report order.
inline std::vector<LevelledForest> forests_sized(int n, int m) {
    std::vector<LevelledForest> out;
    for (const Perm& s : all_permutations(n))
        for (const Composition& c : weak_compositions(n, m)) out.emplace_back(s, c);
    return out;
}

// All forests with ||f|| <= max_vertices and nt <= max_trees, including the
// empty forest, ordered by (vertices, trees, word, composition).
inline std::vector<LevelledForest> enumerate_forests(int max_vertices, int max_trees) {
    std::vector<LevelledForest> out;
    out.push_back(LevelledForest({}, {}));
    for (int n = 0; n <= max_vertices; ++n)
        for (int m = 1; m <= max_trees; ++m) {
            auto batch = forests_sized(n, m);
            out.insert(out.end(), batch.begin(), batch.end());
        }
    return out;
}

// --- axiom sweep -------------------------------------------------------------

struct AxiomResult {
    std::string axiom;
    std::string range;
    bool pass = true;
    long cases = 0;
    std::string counterexample;  // empty when pass

    AxiomResult(std::string name, std::string rng)
        : axiom(std::move(name)), range(std::move(rng)) {}

    void fail(const std::string& witness) {
        if (pass) { pass = false; counterexample = witness; }
    }
};

using ForestTriple = std::tuple<LevelledForest, LevelledForest, LevelledForest>;
using ForestTripleVector = LinComb<ForestTriple>;

namespace detail {
// Partners g of f under the vertical compatibility nt(g) = |f|, with g's
// vertex count at most extra.
inline std::vector<LevelledForest> compatible_partners(const LevelledForest& f, int extra) {
    std::vector<LevelledForest> out;
    for (int n = 0; n <= extra; ++n) {
        auto batch = forests_sized(n, f.leaves());
        out.insert(out.end(), batch.begin(), batch.end());
    }
    return out;
}
}  // namespace detail

// Exhaustive verification of the Hopf axioms over all forests within the
// bounds. Exact arithmetic throughout; any failure carries its first witness.
inline std::vector<AxiomResult> check_hopf_axioms(int max_vertices, int max_trees) {
    std::vector<AxiomResult> results;
    const std::string range = "vertices<=" + std::to_string(max_vertices) +
                              ", trees<=" + std::to_string(max_trees);
    const auto forests = enumerate_forests(max_vertices, max_trees);

    // coassociativity and counit laws
    {
        AxiomResult coassoc{"coassociativity", range};
        AxiomResult counit_law{"counit", range};
        for (const auto& f : forests) {
            ForestTripleVector lhs, rhs;
            ForestVector left_counit, right_counit;
            const ForestPairVector df = coproduct(f);
            for (const auto& [pair, c] : df.terms()) {
                const ForestPairVector dlo = coproduct(pair.first);
                for (const auto& [inner, ci] : dlo.terms())
                    lhs.add({inner.first, inner.second, pair.second}, c * ci);
                const ForestPairVector dhi = coproduct(pair.second);
                for (const auto& [inner, ci] : dhi.terms())
                    rhs.add({pair.first, inner.first, inner.second}, c * ci);
                left_counit.add(pair.second, c * counit(pair.first));
                right_counit.add(pair.first, c * counit(pair.second));
            }
            ++coassoc.cases;
            ++counit_law.cases;
            if (lhs != rhs) coassoc.fail(to_string(f));
            if (left_counit != ForestVector(f) || right_counit != ForestVector(f))
                counit_law.fail(to_string(f));
        }
        results.push_back(coassoc);
        results.push_back(counit_law);
    }

    // product unit, antipode identity
    {
        AxiomResult unit_law{"product-unit", range};
        AxiomResult antip{"antipode", range};
        for (const auto& f : forests) {
            ++unit_law.cases;
            if (product(f, root_forest(f.leaves())) != ForestVector(f) ||
                (f.num_trees() > 0 && product(root_forest(f.num_trees()), f) != ForestVector(f)))
                unit_law.fail(to_string(f));

            ForestVector left, right;
            const ForestPairVector df = coproduct(f);
            for (const auto& [pair, c] : df.terms()) {
                ForestVector l = product(antipode(pair.first), ForestVector(pair.second));
                ForestVector r = product(ForestVector(pair.first), antipode(pair.second));
                l *= c;
                r *= c;
                left += l;
                right += r;
            }
            ForestVector eta_eps;
            eta_eps.add(root_forest(f.num_trees()), counit(f));
            ++antip.cases;
            if (left != eta_eps || right != eta_eps) antip.fail(to_string(f));
        }
        results.push_back(unit_law);
        results.push_back(antip);
    }

    // pairwise laws on compatible pairs with total vertices within bound
    {
        AxiomResult compat{"bialgebra-compatibility", range};
        AxiomResult kk{"braiding-involution", range};
        AxiomResult comm{"braided-commutativity", range};
        for (const auto& f : forests) {
            for (const auto& g : detail::compatible_partners(f, max_vertices - f.vertices())) {
                ++compat.cases;
                const std::string witness = to_string(f) + " , " + to_string(g);

                ForestPairVector lhs;
                const ForestVector fg = product(f, g);
                for (const auto& [h, c] : fg.terms()) {
                    ForestPairVector piece = coproduct(h);
                    piece *= c;
                    lhs += piece;
                }
                ForestPairVector rhs;
                const ForestPairVector df = coproduct(f), dg = coproduct(g);
                for (const auto& [pf, cf] : df.terms())
                    for (const auto& [pg, cg] : dg.terms()) {
                        const auto [k1, k2] = braiding(pf.second, pg.first);
                        const ForestVector lo = product(pf.first, k1);
                        const ForestVector hi = product(k2, pg.second);
                        for (const auto& [a, ca] : lo.terms())
                            for (const auto& [b, cb] : hi.terms())
                                rhs.add({a, b}, cf * cg * ca * cb);
                    }
                if (lhs != rhs) compat.fail(witness);

                ++kk.cases;
                const auto [a, b] = braiding(f, g);
                if (braiding(a, b) != ForestPair{f, g}) kk.fail(witness);

                ++comm.cases;
                if (product(a, b) != product(f, g)) comm.fail(witness);
            }
        }
        results.push_back(compat);
        results.push_back(kk);
        results.push_back(comm);
    }

    // associativity of the product and the braiding triple law on chains
    {
        AxiomResult assoc{"product-associativity", range};
        AxiomResult triple{"braiding-triple", range};
        AxiomResult comm4{"braided-commutativity-chain", range};
        for (const auto& f : forests) {
            for (const auto& g : detail::compatible_partners(f, max_vertices - f.vertices())) {
                for (const auto& h :
                     detail::compatible_partners(g, max_vertices - f.vertices() - g.vertices())) {
                    const std::string witness =
                        to_string(f) + " , " + to_string(g) + " , " + to_string(h);

                    ++assoc.cases;
                    if (product(product(f, g), ForestVector(h)) !=
                        product(ForestVector(f), product(g, h)))
                        assoc.fail(witness);

                    ++triple.cases;
                    const auto [a, b] = braiding(f, g);
                    const auto [c2, d] = braiding(b, h);
                    const auto direct = braiding(f, horizontal_glue(g, h));
                    if (direct != ForestPair{horizontal_glue(a, c2), d}) triple.fail(witness);

                    // swap the middle pair of a 4-chain through K; the total
                    // product must not notice
                    const int used = f.vertices() + g.vertices() + h.vertices();
                    for (const auto& k :
                         detail::compatible_partners(h, max_vertices - used)) {
                        ++comm4.cases;
                        const ForestVector base =
                            product(product(product(f, g), ForestVector(h)), ForestVector(k));
                        const auto [g2, h2] = braiding(g, h);
                        const ForestVector swapped =
                            product(product(product(f, g2), ForestVector(h2)), ForestVector(k));
                        if (base != swapped)
                            comm4.fail(witness + " , " + to_string(k));
                    }
                }
            }
        }
        results.push_back(assoc);
        results.push_back(triple);
        results.push_back(comm4);
    }

    // horizontal shuffle algebra: associativity and the mirror anti-morphism
    {
        AxiomResult sh_assoc{"shuffle-associativity", range};
        AxiomResult th_anti{"theta-antimorphism", range};
        auto shuffle_vec = [](const LevelledForest& x, const LevelledForest& y) {
            ForestVector out;
            for (const auto& t : shuffle_forests(x, y)) out.add(t, Rational(1));
            return out;
        };
        for (const auto& f : forests) {
            for (const auto& g : forests) {
                if (f.vertices() + g.vertices() > max_vertices) continue;
                ++th_anti.cases;
                ForestVector lhs =
                    shuffle_vec(f, g).map_terms([](const LevelledForest& x) {
                        return ForestVector(theta(x));
                    });
                if (lhs != shuffle_vec(theta(g), theta(f)))
                    th_anti.fail(to_string(f) + " , " + to_string(g));
                for (const auto& h : forests) {
                    if (f.vertices() + g.vertices() + h.vertices() > max_vertices) continue;
                    ++sh_assoc.cases;
                    ForestVector left = shuffle_vec(f, g).map_terms(
                        [&](const LevelledForest& x) { return shuffle_vec(x, h); });
                    ForestVector right = shuffle_vec(g, h).map_terms(
                        [&](const LevelledForest& x) { return shuffle_vec(f, x); });
                    if (left != right) sh_assoc.fail(to_string(f) + " , " + to_string(g) + " , " +
                                                     to_string(h));
                }
            }
        }
        results.push_back(sh_assoc);
        results.push_back(th_anti);
    }

    return results;
}

}  // namespace forestsig
