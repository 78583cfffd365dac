#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "combinat.hpp"
#include "matrix.hpp"
#include "tensor.hpp"

namespace forestsig {

// Element of the double tensor algebra: a word of words over the matrix
// algebra. Inner groups may be empty (the ∅ letter); the empty outer word is
// the unit. Only pure words are represented symbolically; linear
// combinations live downstream as grouped dense tensors.
using AlgWord = std::vector<Matrix>;
struct WordOfWords {
    std::vector<AlgWord> groups;

    int num_groups() const { return static_cast<int>(groups.size()); }
    int num_letters() const {
        int n = 0;
        for (const auto& g : groups) n += static_cast<int>(g.size());
        return n;
    }
    // arguments consumed by Op: one more than letters per group
    int num_inputs() const { return num_letters() + num_groups(); }
};

// w_0 a_1 w_1 ... a_n w_n.
inline AlgWord word_insert(const AlgWord& w, const std::vector<AlgWord>& fillers) {
    if (fillers.size() != w.size() + 1)
        throw std::invalid_argument("word_insert: need |w|+1 fillers, got " +
                                    std::to_string(fillers.size()));
    AlgWord out(fillers[0]);
    for (std::size_t i = 0; i < w.size(); ++i) {
        out.push_back(w[i]);
        out.insert(out.end(), fillers[i + 1].begin(), fillers[i + 1].end());
    }
    return out;
}

// Vertical product on words of words: group i of u swallows the next
// |group_i|+1 groups of v by word insertion.
inline WordOfWords nabla_t2(const WordOfWords& u, const WordOfWords& v) {
    if (u.num_inputs() != v.num_groups())
        throw std::invalid_argument("nabla_t2: u wants " + std::to_string(u.num_inputs()) +
                                    " inputs but v has " + std::to_string(v.num_groups()) +
                                    " groups");
    WordOfWords out;
    std::size_t cursor = 0;
    for (const AlgWord& g : u.groups) {
        std::vector<AlgWord> fillers(v.groups.begin() + cursor,
                                     v.groups.begin() + cursor + g.size() + 1);
        cursor += g.size() + 1;
        out.groups.push_back(word_insert(g, fillers));
    }
    return out;
}

// Evaluate the Op representation on a pure word: group (A_1..A_n) with
// arguments (X_0..X_n) contributes the factor X_0 A_1 X_1 ... A_n X_n.
inline Tensor op_apply(const WordOfWords& w, const std::vector<Matrix>& args, int d) {
    if (static_cast<int>(args.size()) != w.num_inputs())
        throw std::invalid_argument("op_apply: need " + std::to_string(w.num_inputs()) +
                                    " arguments, got " + std::to_string(args.size()));
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
    return pure_tensor(factors, d);
}

// Dense counterpart: a tensor of letters plus the grouping that cuts its
// slots into inner words. Linear combinations of words with a common
// grouping collapse into one of these.
struct GroupedTensor {
    Tensor t;
    Composition groups;

    GroupedTensor() = default;
    GroupedTensor(Tensor tensor, Composition grouping)
        : t(std::move(tensor)), groups(std::move(grouping)) {
        int total = 0;
        for (int g : groups) {
            if (g < 0) throw std::invalid_argument("GroupedTensor: negative group");
            total += g;
        }
        if (total != t.order)
            throw std::invalid_argument("GroupedTensor: groups sum " + std::to_string(total) +
                                        " != order " + std::to_string(t.order));
    }

    int num_groups() const { return static_cast<int>(groups.size()); }
    int num_letters() const { return t.order; }
    int num_inputs() const { return num_letters() + num_groups(); }
};

inline GroupedTensor grouped_from_word(const WordOfWords& w, int d) {
    std::vector<Matrix> letters;
    Composition groups;
    for (const AlgWord& g : w.groups) {
        groups.push_back(static_cast<int>(g.size()));
        letters.insert(letters.end(), g.begin(), g.end());
    }
    return GroupedTensor(pure_tensor(letters, d), groups);
}

// Evaluate Op on a dense grouped tensor by expanding over the slot basis.
inline Tensor op_apply(const GroupedTensor& gt, const std::vector<Matrix>& args) {
    if (static_cast<int>(args.size()) != gt.num_inputs())
        throw std::invalid_argument("op_apply: need " + std::to_string(gt.num_inputs()) +
                                    " arguments, got " + std::to_string(args.size()));
    const int d = gt.t.d;
    Tensor out(d, gt.num_groups());
    const int k = gt.t.order;
    std::vector<int> q(k, 0);
    const std::size_t slot = gt.t.slot_size();
    for (std::size_t idx = 0; idx < gt.t.data.size(); ++idx) {
        const Complex coeff = gt.t.data[idx];
        if (coeff != 0.0) {
            std::vector<Matrix> factors;
            factors.reserve(gt.groups.size());
            std::size_t next = 0;
            int letter = 0;
            for (int group_len : gt.groups) {
                Matrix acc = args[next++];
                for (int l = 0; l < group_len; ++l) {
                    Matrix unit(d);
                    unit.a[q[letter++]] = 1.0;
                    acc = acc * unit;
                    acc = acc * args[next++];
                }
                factors.push_back(acc);
            }
            Tensor term = pure_tensor(factors, d);
            out += coeff * term;
        }
        for (int s = k - 1; s >= 0; --s) {
            if (++q[s] < static_cast<int>(slot)) break;
            q[s] = 0;
        }
    }
    return out;
}

// Vertical composition of grouped tensors: the dense realization of
// nabla_t2. The letters of u and v survive unchanged; only their slot order
// and the grouping are rebuilt from the insertion pattern.
inline GroupedTensor compose_end2(const GroupedTensor& u, const GroupedTensor& v) {
    if (u.num_inputs() != v.num_groups())
        throw std::invalid_argument("compose_end2: u wants " + std::to_string(u.num_inputs()) +
                                    " inputs but v has " + std::to_string(v.num_groups()) +
                                    " groups");
    // slot ids: u's letters are 1..k_u, v's letters k_u+1..k_u+k_v in the
    // outer product; walk the insertion to find the interleaved order
    const int ku = u.t.order;
    std::vector<int> v_group_start(v.groups.size() + 1, 0);
    for (std::size_t i = 0; i < v.groups.size(); ++i)
        v_group_start[i + 1] = v_group_start[i] + v.groups[i];

    Perm order;
    Composition groups;
    int v_cursor = 0;
    int u_letter = 0;
    for (int group_len : u.groups) {
        int new_len = 0;
        auto take_v_group = [&]() {
            const int g = v_cursor++;
            for (int s = v_group_start[g]; s < v_group_start[g + 1]; ++s) {
                order.push_back(ku + s + 1);
                ++new_len;
            }
        };
        take_v_group();
        for (int l = 0; l < group_len; ++l) {
            order.push_back(++u_letter);
            ++new_len;
            take_v_group();
        }
        groups.push_back(new_len);
    }
    return GroupedTensor(permute_slots(outer(u.t, v.t), order), groups);
}

}  // namespace forestsig
