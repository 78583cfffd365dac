#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "forest.hpp"
#include "hopf.hpp"
#include "path.hpp"
#include "tensor.hpp"
#include "tree_tensors.hpp"
#include "words.hpp"

namespace forestsig {

// Desk-scale caps keep dense tensor storage (d*d)^order in check; the
// environment can widen them for bigger machines.
inline int cap_from_env(const char* name, int fallback) {
    if (const char* v = std::getenv(name)) {
        const int x = std::atoi(v);
        if (x > 0) return x;
    }
    return fallback;
}
inline int max_dimension() { return cap_from_env("FORESTSIG_MAX_DIM", 3); }
inline int max_vertices() { return cap_from_env("FORESTSIG_MAX_VERTICES", 4); }
inline int max_trees() { return cap_from_env("FORESTSIG_MAX_TREES", 4); }

inline void check_forest_caps(const LevelledForest& f) {
    if (f.vertices() > max_vertices())
        throw std::invalid_argument("forest " + to_string(f) + " exceeds the vertex cap " +
                                    std::to_string(max_vertices()) +
                                    " (set FORESTSIG_MAX_VERTICES to raise it)");
    if (f.num_trees() > max_trees())
        throw std::invalid_argument("forest " + to_string(f) + " exceeds the tree cap " +
                                    std::to_string(max_trees()) +
                                    " (set FORESTSIG_MAX_TREES to raise it)");
}

// Reinterpret an order-n integral tensor as a word of words: grouping c cuts
// the slots into inner words, zero parts standing for the empty letter.
inline GroupedTensor split_integral(Tensor xsigma, Composition c) {
    return GroupedTensor(std::move(xsigma), std::move(c));
}

// Iterated-integral tensors of a sampled path, with the simplex convention
// that the first slot carries the latest time. Tables are built over the
// uniform grid and cached per (interval, scheme); query times snap to the
// nearest grid point.
class SignatureEngine {
  public:
    explicit SignatureEngine(PathSpec spec) : spec_(std::move(spec)) {
        spec_.validate();
        if (spec_.d > max_dimension())
            throw std::invalid_argument("path dimension " + std::to_string(spec_.d) +
                                        " exceeds the cap " + std::to_string(max_dimension()) +
                                        " (set FORESTSIG_MAX_DIM to raise it)");
        samples_.reserve(spec_.grid + 1);
        for (int j = 0; j <= spec_.grid; ++j)
            samples_.push_back(spec_.value(static_cast<double>(j) / spec_.grid));
    }

    const PathSpec& path() const { return spec_; }
    int grid() const { return spec_.grid; }

    int snap(double t) const {
        if (t < -1e-9 || t > 1.0 + 1e-9)
            throw std::invalid_argument("time " + std::to_string(t) + " outside [0,1]");
        return static_cast<int>(std::lround(std::clamp(t, 0.0, 1.0) * spec_.grid));
    }

    // Exact signature of the piecewise-linear interpolant: each grid step
    // contributes its truncated tensor exponential, concatenated with the
    // newest step in the leading slots.
    std::vector<Tensor> level_tensors(double s, double t, int max_level) const {
        return table(snap(s), snap(t), max_level, Scheme::exact);
    }
    // First-order left-point accumulation; kept solely to measure grid
    // convergence against the exact tables.
    std::vector<Tensor> leftpoint_level_tensors(double s, double t, int max_level) const {
        return table(snap(s), snap(t), max_level, Scheme::leftpoint);
    }
    Tensor level_tensor(double s, double t, int level) const {
        return level_tensors(s, t, level).at(level);
    }

    // slot j carries dX at the sigma(j)-th largest time
    Tensor permuted_integral(double s, double t, const Perm& sigma) const {
        return permute_slots(level_tensor(s, t, static_cast<int>(sigma.size())), sigma);
    }

    // the multi-output integral operator attached to a forest: permuted
    // integral tensor grouped by the forest's composition
    GroupedTensor forest_operator(const LevelledForest& f, double s, double t) const {
        check_forest_caps(f);
        return op_unchecked(f, s, t);
    }

    Tensor partial_contraction(const LevelledForest& f, double s, double t,
                               const std::vector<Matrix>& args) const {
        check_forest_caps(f);
        return op_apply(op_unchecked(f, s, t), args);
    }

    Matrix full_contraction(const LevelledForest& tau, double s, double t,
                            const std::vector<Matrix>& args) const {
        if (tau.num_trees() != 1)
            throw std::invalid_argument("full_contraction: " + to_string(tau) +
                                        " is not a single tree");
        return tensor_to_matrix(partial_contraction(tau, s, t, args));
    }

    // partial contraction against a general argument tensor, expanded over
    // the slot basis
    Tensor partial_contraction(const LevelledForest& f, double s, double t,
                               const Tensor& args) const {
        check_forest_caps(f);
        return contract_unchecked(f, s, t, args);
    }

    // Chen decomposition residual: the operator over [s,t] against the
    // convolution of lower parts over [u,t] with upper parts over [s,u].
    double chen_check(const LevelledForest& f, double s, double u, double t,
                      const std::vector<Matrix>& args) const {
        const Tensor lhs = partial_contraction(f, s, t, args);
        Tensor rhs(spec_.d, f.num_trees());
        for (int p = 0; p <= f.vertices(); ++p) {
            const auto cut = horizontal_split(f, p);
            const GroupedTensor op =
                compose_end2(op_unchecked(cut.first, u, t), op_unchecked(cut.second, s, u));
            rhs += op_apply(op, args);
        }
        return frobenius_norm(lhs - rhs) / std::max(1.0, frobenius_norm(lhs));
    }

    // Triangular endomorphism on decorated trees: the tensor on tau scatters
    // onto the lower cuts, each weighted by the contraction along its upper
    // complement.
    TreeTensor bar_apply(const Tensor& a, const LevelledForest& tau, double s, double t) const {
        if (tau.num_trees() != 1)
            throw std::invalid_argument("bar_apply: " + to_string(tau) + " is not a single tree");
        if (a.order != tau.leaves())
            throw std::invalid_argument("bar_apply: tensor order " + std::to_string(a.order) +
                                        " != leaf count of " + to_string(tau));
        check_forest_caps(tau);
        TreeTensor out;
        for (int p = 0; p <= tau.vertices(); ++p) {
            const auto cut = horizontal_split(tau, p);
            tt_add(out, cut.first, contract_unchecked(cut.second, s, t, a));
        }
        return out;
    }

    TreeTensor bar_apply(const TreeTensor& x, double s, double t) const {
        TreeTensor out;
        for (const auto& [tau, a] : x)
            for (const auto& [tree, coeff] : bar_apply(a, tau, s, t)) tt_add(out, tree, coeff);
        return out;
    }

    // Shuffle identity: composing the operators of f and g over one interval
    // matches the sum of operators over the product forests.
    double shuffle_check(const LevelledForest& f, const LevelledForest& g, double s, double t,
                         const std::vector<Matrix>& args) const {
        const GroupedTensor composed =
            compose_end2(forest_operator(f, s, t), forest_operator(g, s, t));
        const Tensor lhs = op_apply(composed, args);
        Tensor rhs(spec_.d, f.num_trees());
        const ForestVector terms = product(f, g);
        for (const auto& [h, c] : terms.terms())
            rhs += Complex(static_cast<double>(c.num) / static_cast<double>(c.den)) *
                   op_apply(op_unchecked(h, s, t), args);
        return frobenius_norm(lhs - rhs) / std::max(1.0, frobenius_norm(lhs));
    }

    // The endomorphism respects the shuffle of decorated trees.
    double geometric_shuffle_check(const AlgWord& a, const LevelledForest& alpha,
                                   const AlgWord& b, const LevelledForest& beta, double s,
                                   double t) const {
        const TreeTensor xa = tt_pure(a, alpha, spec_.d);
        const TreeTensor xb = tt_pure(b, beta, spec_.d);
        const TreeTensor lhs = bar_apply(tt_shuffle(xa, xb), s, t);
        const TreeTensor rhs = tt_shuffle(bar_apply(xa, s, t), bar_apply(xb, s, t));
        return tt_distance(lhs, rhs) / std::max(1.0, tt_norm(lhs));
    }

    // ... and commutes with gap substitution applied to the arguments.
    double geometric_substitution_check(const AlgWord& u,
                                        const std::vector<std::pair<AlgWord, LevelledForest>>&
                                            args,
                                        double s, double t) const {
        std::vector<TreeTensor> pures, barred;
        for (const auto& [word, tree] : args) {
            pures.push_back(tt_pure(word, tree, spec_.d));
            barred.push_back(bar_apply(pures.back(), s, t));
        }
        const TreeTensor lhs = gap_substitution(u, barred, spec_.d);
        const TreeTensor rhs = bar_apply(gap_substitution(u, pures, spec_.d), s, t);
        return tt_distance(lhs, rhs) / std::max(1.0, tt_norm(lhs));
    }

  private:
    enum class Scheme { exact, leftpoint };

    // cut pieces inside Chen sums and triangular expansions may exceed the
    // public caps (an upper complement is a root forest with one tree per
    // leaf below), so internal paths skip the entry validation
    GroupedTensor op_unchecked(const LevelledForest& f, double s, double t) const {
        return GroupedTensor(permuted_integral(s, t, f.sigma), f.comp);
    }

    Tensor contract_unchecked(const LevelledForest& f, double s, double t,
                              const Tensor& args) const {
        const GroupedTensor op = op_unchecked(f, s, t);
        if (args.order != op.num_inputs())
            throw std::invalid_argument("partial_contraction: argument tensor order " +
                                        std::to_string(args.order) + " != " +
                                        std::to_string(op.num_inputs()));
        const int d = spec_.d;
        Tensor out(d, op.num_groups());
        std::vector<int> q(args.order, 0);
        std::vector<Matrix> units(args.order, Matrix(d));
        for (std::size_t idx = 0; idx < args.data.size(); ++idx) {
            const Complex coeff = args.data[idx];
            if (coeff != 0.0) {
                for (int s2 = 0; s2 < args.order; ++s2) {
                    units[s2] = Matrix(d);
                    units[s2].a[q[s2]] = 1.0;
                }
                out += coeff * op_apply(op, units);
            }
            for (int s2 = args.order - 1; s2 >= 0; --s2) {
                if (++q[s2] < static_cast<int>(args.slot_size())) break;
                q[s2] = 0;
            }
        }
        return out;
    }

    std::vector<Tensor> table(int a, int b, int max_level, Scheme sc) const {
        if (a > b) throw std::invalid_argument("level_tensors: interval start after end");
        if (max_level < 0 || max_level > max_vertices())
            throw std::invalid_argument("level " + std::to_string(max_level) +
                                        " exceeds the vertex cap " +
                                        std::to_string(max_vertices()));
        const auto key = std::make_tuple(a, b, sc == Scheme::exact);
        auto it = cache_.find(key);
        if (it == cache_.end() || static_cast<int>(it->second.size()) <= max_level) {
            std::vector<Tensor> levels;
            levels.push_back(scalar_tensor(spec_.d, 1.0));
            for (int n = 1; n <= max_level; ++n) levels.emplace_back(spec_.d, n);
            for (int j = a; j < b; ++j) {
                const Matrix delta = samples_[j + 1] - samples_[j];
                std::vector<Tensor> pw{pure_tensor({delta}, spec_.d)};
                const int kmax = sc == Scheme::exact ? max_level : std::min(1, max_level);
                for (int k = 2; k <= kmax; ++k)
                    pw.push_back(Complex(1.0 / k) * outer(pw.back(), pw.front()));
                // descending levels so the additions read this step's old values
                for (int n = max_level; n >= 1; --n)
                    for (int k = 1; k <= std::min(n, kmax); ++k)
                        levels[n] += outer(pw[k - 1], levels[n - k]);
            }
            it = cache_.insert_or_assign(key, std::move(levels)).first;
        }
        return {it->second.begin(), it->second.begin() + max_level + 1};
    }

    PathSpec spec_;
    std::vector<Matrix> samples_;
    mutable std::map<std::tuple<int, int, bool>, std::vector<Tensor>> cache_;
};

}  // namespace forestsig
