#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace forestsig {

// Words are sequences of positive letters; permutations are words in one-line
// notation containing 1..n exactly once. Compositions are weak (parts >= 0).
using Word = std::vector<int>;
using Perm = std::vector<int>;
using Composition = std::vector<int>;

inline std::string word_str(const Word& w) {
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(w[i]);
    }
    return "[" + s + "]";
}

inline bool is_permutation(const Perm& p) {
    std::vector<bool> seen(p.size(), false);
    for (int v : p) {
        if (v < 1 || v > static_cast<int>(p.size()) || seen[v - 1]) return false;
        seen[v - 1] = true;
    }
    return true;
}

inline void require_permutation(const Perm& p, const char* where) {
    if (!is_permutation(p))
        throw std::invalid_argument(std::string(where) + ": not a permutation: " + word_str(p));
}

// (sigma . tau)(i) = sigma(tau(i)); both on the same ground set.
inline Perm compose(const Perm& sigma, const Perm& tau) {
    require_permutation(sigma, "compose");
    require_permutation(tau, "compose");
    if (sigma.size() != tau.size())
        throw std::invalid_argument("compose: size mismatch");
    Perm out(tau.size());
    for (std::size_t i = 0; i < tau.size(); ++i) out[i] = sigma[tau[i] - 1];
    return out;
}

inline Perm inverse(const Perm& p) {
    require_permutation(p, "inverse");
    Perm out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) out[p[i] - 1] = static_cast<int>(i) + 1;
    return out;
}

inline Perm identity_perm(int n) {
    Perm p(n);
    std::iota(p.begin(), p.end(), 1);
    return p;
}

// n, n-1, ..., 1.
inline Perm reversal(int n) {
    Perm p(n);
    for (int i = 0; i < n; ++i) p[i] = n - i;
    return p;
}

// q+1, ..., q+p, 1, ..., q on p+q letters: moves the last q-block in front of
// the first p-block when acting by composition on positions.
inline Perm block_swap(int p, int q) {
    Perm out;
    out.reserve(p + q);
    for (int i = 1; i <= p; ++i) out.push_back(q + i);
    for (int i = 1; i <= q; ++i) out.push_back(i);
    return out;
}

// Relabel distinct letters by their relative order: 5 2 9 -> 2 1 3.
inline Perm standardize(const Word& w) {
    std::vector<int> sorted(w.begin(), w.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("standardize: repeated letter in " + word_str(w));
    Perm out;
    out.reserve(w.size());
    for (int v : w) {
        auto it = std::lower_bound(sorted.begin(), sorted.end(), v);
        out.push_back(static_cast<int>(it - sorted.begin()) + 1);
    }
    return out;
}

// Subword of letters lying in the set A, order preserved.
inline Word word_restrict(const Word& w, const std::set<int>& a) {
    Word out;
    for (int v : w) if (a.count(v)) out.push_back(v);
    return out;
}

// Counts of letters outside A in the gaps cut by the A-letters of w.
// With q letters of A present this has q+1 parts: before the first A-letter,
// between consecutive ones, after the last. All-zero parts are kept.
inline Composition gap_composition(const Word& w, const std::set<int>& a) {
    Composition parts{0};
    for (int v : w) {
        if (a.count(v)) parts.push_back(0);
        else ++parts.back();
    }
    return parts;
}

inline Word shift_word(const Word& w, int k) {
    Word out(w);
    for (int& v : out) v += k;
    return out;
}

// u followed by v with v's letters shifted past u's alphabet.
inline Word shifted_concat(const Word& u, const Word& v) {
    Word out(u);
    const Word sv = shift_word(v, static_cast<int>(u.size()));
    out.insert(out.end(), sv.begin(), sv.end());
    return out;
}

// Permutations of a+b increasing on the first a and on the last b positions,
// enumerated by the value set of the first block in lexicographic order.
inline std::vector<Perm> riffle_perms(int a, int b) {
    if (a < 0 || b < 0) throw std::invalid_argument("riffle_perms: negative block size");
    std::vector<Perm> out;
    const int n = a + b;
    std::vector<int> pick(a);
    std::iota(pick.begin(), pick.end(), 1);
    while (true) {
        Perm p;
        p.reserve(n);
        std::vector<bool> used(n + 1, false);
        for (int v : pick) { p.push_back(v); used[v] = true; }
        for (int v = 1; v <= n; ++v) if (!used[v]) p.push_back(v);
        out.push_back(std::move(p));
        // next a-subset of [n] in lex order
        int i = a - 1;
        while (i >= 0 && pick[i] == n - (a - 1 - i)) --i;
        if (i < 0) break;
        ++pick[i];
        for (int j = i + 1; j < a; ++j) pick[j] = pick[j - 1] + 1;
    }
    return out;
}

// All interleavings of u and v keeping each word's internal order. The inputs
// must have disjoint letters so the results are honest words.
inline std::vector<Word> shuffle_words(const Word& u, const Word& v) {
    {
        std::set<int> su(u.begin(), u.end()), sv(v.begin(), v.end());
        if (su.size() != u.size() || sv.size() != v.size())
            throw std::invalid_argument("shuffle_words: repeated letter");
        for (int x : sv)
            if (su.count(x))
                throw std::invalid_argument("shuffle_words: alphabets overlap at " + std::to_string(x));
    }
    std::vector<Word> out;
    Word cur;
    cur.reserve(u.size() + v.size());
    auto rec = [&](auto&& self, std::size_t i, std::size_t j) -> void {
        if (i == u.size() && j == v.size()) { out.push_back(cur); return; }
        if (i < u.size()) {
            cur.push_back(u[i]);
            self(self, i + 1, j);
            cur.pop_back();
        }
        if (j < v.size()) {
            cur.push_back(v[j]);
            self(self, i, j + 1);
            cur.pop_back();
        }
    };
    rec(rec, 0, 0);
    return out;
}

inline std::int64_t factorial(int n) {
    std::int64_t f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

inline std::int64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::int64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// All permutations of 1..n in lexicographic order. Only sane for small n;
// the exact layer never needs more than n = 6.
inline std::vector<Perm> all_permutations(int n) {
    Perm p = identity_perm(n);
    std::vector<Perm> out;
    do out.push_back(p); while (std::next_permutation(p.begin(), p.end()));
    return out;
}

}  // namespace forestsig
