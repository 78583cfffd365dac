#pragma once

#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "forest.hpp"
#include "tensor.hpp"
#include "words.hpp"

namespace forestsig {

// Linear combination of trees, each carrying a dense tensor of order equal to
// its leaf count: the working model for words-decorated trees. Keys are
// single trees; the zero coefficient is simply an absent key.
using TreeTensor = std::map<LevelledForest, Tensor>;

inline void tt_add(TreeTensor& acc, const LevelledForest& tree, const Tensor& coeff) {
    auto it = acc.find(tree);
    if (it == acc.end())
        acc.emplace(tree, coeff);
    else
        it->second += coeff;
}

inline TreeTensor tt_pure(const AlgWord& word, const LevelledForest& tree, int d) {
    if (tree.num_trees() != 1)
        throw std::invalid_argument("tt_pure: key must be a single tree, got " + to_string(tree));
    if (static_cast<int>(word.size()) != tree.leaves())
        throw std::invalid_argument("tt_pure: word length " + std::to_string(word.size()) +
                                    " != leaf count of " + to_string(tree));
    return TreeTensor{{tree, pure_tensor(word, d)}};
}

// Merge the seam: last factor of x times first factor of y, so pure words
// combine as A_1..A_{a-1} (A_a B_1) B_2..B_b. Output order a+b-1.
inline Tensor faces_product(const Tensor& x, const Tensor& y) {
    if (x.d != y.d) throw std::invalid_argument("faces_product: dimension mismatch");
    if (x.order < 1 || y.order < 1)
        throw std::invalid_argument("faces_product: both operands need at least one slot");
    const int d = x.d;
    const std::size_t slot = static_cast<std::size_t>(d) * d;
    const std::size_t prefixes = x.data.size() / slot;
    const std::size_t suffixes = y.data.size() / slot;
    Tensor out(d, x.order + y.order - 1);
    for (std::size_t p = 0; p < prefixes; ++p)
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                const Complex xv = x.data[p * slot + static_cast<std::size_t>(i) * d + j];
                if (xv == 0.0) continue;
                for (int l = 0; l < d; ++l) {
                    const std::size_t dst =
                        (p * slot + static_cast<std::size_t>(i) * d + l) * suffixes;
                    const std::size_t src = (static_cast<std::size_t>(j) * d + l) * suffixes;
                    for (std::size_t q = 0; q < suffixes; ++q)
                        out.data[dst + q] += xv * y.data[src + q];
                }
            }
    return out;
}

// Shuffle of decorated trees: words merge at the seam, level words riffle.
inline TreeTensor tt_shuffle(const TreeTensor& x, const TreeTensor& y) {
    TreeTensor out;
    for (const auto& [alpha, xt] : x)
        for (const auto& [beta, yt] : y) {
            const Tensor prod = faces_product(xt, yt);
            for (const LevelledForest& gamma : shuffle_forests(alpha, beta))
                tt_add(out, gamma, prod);
        }
    return out;
}

// Star: reverse the slots, conjugate-transpose each factor, mirror the tree.
inline TreeTensor tt_star(const TreeTensor& x) {
    TreeTensor out;
    for (const auto& [tree, t] : x) {
        Perm rev(t.order);
        for (int s = 0; s < t.order; ++s) rev[s] = t.order - s;
        tt_add(out, theta(tree), adjoint(permute_slots(t, rev)));
    }
    return out;
}

// Gap substitution: shuffle the arguments into the gaps of the decorated
// word U, i.e. (U_1 bullet) sh args[0] sh (U_2 bullet) sh ... sh (U_{p+1} bullet).
inline TreeTensor gap_substitution(const AlgWord& u, const std::vector<TreeTensor>& args,
                                   int d) {
    if (u.size() != args.size() + 1)
        throw std::invalid_argument("gap_substitution: need |U| = #args + 1, got " +
                                    std::to_string(u.size()) + " letters for " +
                                    std::to_string(args.size()) + " arguments");
    const LevelledForest bullet = root_forest(1);
    TreeTensor acc = tt_pure({u[0]}, bullet, d);
    for (std::size_t i = 0; i < args.size(); ++i) {
        acc = tt_shuffle(acc, args[i]);
        acc = tt_shuffle(acc, tt_pure({u[i + 1]}, bullet, d));
    }
    return acc;
}

// norms and comparisons treat an absent key as the zero tensor
inline double tt_norm(const TreeTensor& x) {
    double s = 0.0;
    for (const auto& [tree, t] : x) {
        (void)tree;
        const double f = frobenius_norm(t);
        s += f * f;
    }
    return std::sqrt(s);
}

inline double tt_distance(const TreeTensor& x, const TreeTensor& y) {
    double s = 0.0;
    for (const auto& [tree, t] : x) {
        auto it = y.find(tree);
        const double f = it == y.end() ? frobenius_norm(t) : frobenius_norm(t - it->second);
        s += f * f;
    }
    for (const auto& [tree, t] : y)
        if (x.find(tree) == x.end()) {
            const double f = frobenius_norm(t);
            s += f * f;
        }
    return std::sqrt(s);
}

}  // namespace forestsig
