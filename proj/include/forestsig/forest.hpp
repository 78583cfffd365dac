#pragma once

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "combinat.hpp"

namespace forestsig {

// A levelled planar binary forest encoded as a split permutation: sigma lists
// the branching levels tree by tree (tree i owns the next comp[i] letters of
// the word), comp is a weak composition of |sigma|. Zero parts are meaningful:
// they are root-only trees. The width-m root forest is distinct for every m.
struct LevelledForest {
    Perm sigma;
    Composition comp;

    LevelledForest() = default;
    LevelledForest(Perm s, Composition c) : sigma(std::move(s)), comp(std::move(c)) {
        validate();
    }

    void validate() const {
        require_permutation(sigma, "LevelledForest");
        int total = 0;
        for (int part : comp) {
            if (part < 0) throw std::invalid_argument("LevelledForest: negative part");
            total += part;
        }
        if (total != static_cast<int>(sigma.size()))
            throw std::invalid_argument("LevelledForest: comp total " + std::to_string(total) +
                                        " != |sigma| = " + std::to_string(sigma.size()));
    }

    int vertices() const { return static_cast<int>(sigma.size()); }
    int num_trees() const { return static_cast<int>(comp.size()); }
    int leaves() const { return vertices() + num_trees(); }
    bool is_tree() const { return num_trees() == 1; }
    bool is_root_forest() const { return sigma.empty(); }

    // The word slice owned by tree i (0-based).
    Word tree_word(int i) const {
        int start = 0;
        for (int j = 0; j < i; ++j) start += comp[j];
        return Word(sigma.begin() + start, sigma.begin() + start + comp[i]);
    }

    friend bool operator==(const LevelledForest& a, const LevelledForest& b) {
        return a.sigma == b.sigma && a.comp == b.comp;
    }
    friend bool operator!=(const LevelledForest& a, const LevelledForest& b) { return !(a == b); }
    // Sort by size first so sweep reports come out in enumeration order.
    friend bool operator<(const LevelledForest& a, const LevelledForest& b) {
        if (a.sigma.size() != b.sigma.size()) return a.sigma.size() < b.sigma.size();
        if (a.comp.size() != b.comp.size()) return a.comp.size() < b.comp.size();
        if (a.sigma != b.sigma) return a.sigma < b.sigma;
        return a.comp < b.comp;
    }
};

// `<sigma>;<comp>`, e.g. "4132;0,1,2,1". The word is a digit run while all
// letters fit in one digit, comma-separated otherwise; compositions are always
// comma-separated; "e" stands for an empty sequence.
inline std::string to_string(const LevelledForest& f) {
    std::string s;
    if (f.sigma.empty()) {
        s = "e";
    } else if (f.vertices() <= 9) {
        for (int v : f.sigma) s += static_cast<char>('0' + v);
    } else {
        for (std::size_t i = 0; i < f.sigma.size(); ++i) {
            if (i) s += ',';
            s += std::to_string(f.sigma[i]);
        }
    }
    s += ';';
    if (f.comp.empty()) {
        s += 'e';
    } else {
        for (std::size_t i = 0; i < f.comp.size(); ++i) {
            if (i) s += ',';
            s += std::to_string(f.comp[i]);
        }
    }
    return s;
}

namespace detail {
inline std::vector<int> parse_seq(const std::string& text, const std::string& whole) {
    std::vector<int> out;
    if (text == "e") return out;
    if (text.empty())
        throw std::invalid_argument("forest parse: empty field in '" + whole + "'");
    // A comma-free multi-digit field is a digit run ("4132" = 4,1,3,2) except
    // when an inner zero makes it read as one number ("10" = ten, not 1,0);
    // all-zero runs like "00" stay runs so root forests can be typed tersely.
    if (text.find(',') == std::string::npos && text.size() > 1 &&
        text.find_first_not_of("0123456789") == std::string::npos) {
        const bool has_zero = text.find('0') != std::string::npos;
        const bool all_zero = text.find_first_not_of('0') == std::string::npos;
        if (!has_zero || all_zero) {
            for (char ch : text) out.push_back(ch - '0');
            return out;
        }
    }
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t next = text.find(',', pos);
        if (next == std::string::npos) next = text.size();
        const std::string tok = text.substr(pos, next - pos);
        if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
            throw std::invalid_argument("forest parse: bad token '" + tok + "' in '" + whole + "'");
        out.push_back(std::stoi(tok));
        if (next == text.size()) break;
        pos = next + 1;
    }
    return out;
}
}  // namespace detail

inline LevelledForest parse_forest(const std::string& text) {
    const std::size_t semi = text.find(';');
    if (semi == std::string::npos)
        throw std::invalid_argument("forest parse: missing ';' in '" + text + "'");
    return LevelledForest(detail::parse_seq(text.substr(0, semi), text),
                          detail::parse_seq(text.substr(semi + 1), text));
}

// Width-m root forest (m trees, no branchings).
inline LevelledForest root_forest(int m) {
    if (m < 0) throw std::invalid_argument("root_forest: negative width");
    return LevelledForest({}, Composition(m, 0));
}

// --- vertical structure ---------------------------------------------------

namespace detail {
// Can `fine` be cut into consecutive blocks summing to the parts of `coarse`?
// Zero parts make the cut ambiguous, hence the little DP instead of a greedy
// scan.
inline bool refines(const Composition& fine, const Composition& coarse) {
    const std::size_t nf = fine.size(), nc = coarse.size();
    std::vector<std::vector<bool>> ok(nf + 1, std::vector<bool>(nc + 1, false));
    ok[0][0] = true;
    for (std::size_t j = 0; j < nc; ++j) {
        for (std::size_t i = 0; i <= nf; ++i) {
            if (!ok[i][j]) continue;
            int sum = 0;
            for (std::size_t e = i; e <= nf; ++e) {
                if (sum == coarse[j] && e > i) ok[e][j + 1] = true;
                if (e == nf) break;
                sum += fine[e];
            }
            if (coarse[j] == 0 && i < nf && fine[i] == 0) ok[i + 1][j + 1] = true;
        }
    }
    return ok[nf][nc];
}
}  // namespace detail

// Refine the tree decomposition without touching the levels. d must cut each
// part of f.comp into consecutive pieces (possibly trivially).
inline LevelledForest vertical_split(const LevelledForest& f, const Composition& d) {
    int total = 0;
    for (int part : d) {
        if (part < 0) throw std::invalid_argument("vertical_split: negative part");
        total += part;
    }
    if (total != f.vertices() || !detail::refines(d, f.comp))
        throw std::invalid_argument("vertical_split: " + word_str(d) + " does not refine comp of " +
                                    to_string(f));
    return LevelledForest(f.sigma, d);
}

// Merge trees i and i+1 (1-based i) into one.
inline LevelledForest glue_at(const LevelledForest& f, int i) {
    if (i < 1 || i > f.num_trees() - 1)
        throw std::invalid_argument("glue_at: index " + std::to_string(i) + " out of range for " +
                                    to_string(f));
    Composition c(f.comp);
    c[i - 1] += c[i];
    c.erase(c.begin() + i);
    return LevelledForest(f.sigma, c);
}

// --- horizontal structure -------------------------------------------------

// Cut below generation p+1. The lower part keeps one tree per original tree
// (letters <= p in place); the upper part collects, tree by tree, the letters
// above p shifted down by p, cut into one new tree per gap between the lower
// letters. That convention makes nt(upper) = leaves(lower) automatic.
inline std::pair<LevelledForest, LevelledForest> horizontal_split(const LevelledForest& f, int p) {
    if (p < 0 || p > f.vertices())
        throw std::invalid_argument("horizontal_split: level " + std::to_string(p) +
                                    " out of range for " + to_string(f));
    std::set<int> low;
    for (int v = 1; v <= p; ++v) low.insert(v);

    Perm lower_sigma, upper_sigma;
    Composition lower_comp, upper_comp;
    for (int i = 0; i < f.num_trees(); ++i) {
        const Word w = f.tree_word(i);
        const Word lo = word_restrict(w, low);
        lower_sigma.insert(lower_sigma.end(), lo.begin(), lo.end());
        lower_comp.push_back(static_cast<int>(lo.size()));
        for (int v : w)
            if (v > p) upper_sigma.push_back(v - p);
        const Composition gaps = gap_composition(w, low);
        upper_comp.insert(upper_comp.end(), gaps.begin(), gaps.end());
    }
    return {LevelledForest(std::move(lower_sigma), std::move(lower_comp)),
            LevelledForest(std::move(upper_sigma), std::move(upper_comp))};
}

// One lower component per cut level, p = 0..||f||.
inline std::vector<LevelledForest> subforests(const LevelledForest& f) {
    std::vector<LevelledForest> out;
    out.reserve(f.vertices() + 1);
    for (int p = 0; p <= f.vertices(); ++p) out.push_back(horizontal_split(f, p).first);
    return out;
}

inline LevelledForest complement(const LevelledForest& f, const LevelledForest& fp) {
    auto [lower, upper] = horizontal_split(f, fp.vertices());
    if (lower != fp)
        throw std::invalid_argument("complement: " + to_string(fp) + " is not a subforest of " +
                                    to_string(f));
    return upper;
}

// Stack g's trees onto f's leaves left to right (levels of g shifted past
// f's). Inverse of horizontal_split at level ||f||: trees of g land in the
// gaps of f's tree words, one per leaf.
inline LevelledForest horizontal_glue(const LevelledForest& f, const LevelledForest& g) {
    if (g.num_trees() != f.leaves())
        throw std::invalid_argument("horizontal_glue: nt(g) = " + std::to_string(g.num_trees()) +
                                    " but f has " + std::to_string(f.leaves()) + " leaves");
    const int p = f.vertices();
    Perm sigma;
    Composition comp;
    int gi = 0;
    for (int i = 0; i < f.num_trees(); ++i) {
        const Word w = f.tree_word(i);
        int part = 0;
        auto push_gap = [&]() {
            const Word gw = shift_word(g.tree_word(gi++), p);
            sigma.insert(sigma.end(), gw.begin(), gw.end());
            part += static_cast<int>(gw.size());
        };
        push_gap();
        for (int v : w) {
            sigma.push_back(v);
            ++part;
            push_gap();
        }
        comp.push_back(part);
    }
    return LevelledForest(std::move(sigma), std::move(comp));
}

// --- shuffles, involutions, actions ----------------------------------------

// All riffles of the two level words; the seam trees (last of f, first of g)
// merge into one. Multiset of size C(||f||+||g||, ||f||), returned sorted.
inline std::vector<LevelledForest> shuffle_forests(const LevelledForest& f,
                                                   const LevelledForest& g) {
    if (f.comp.empty()) return {g};
    if (g.comp.empty()) return {f};
    Composition comp(f.comp);
    comp.back() += g.comp.front();
    comp.insert(comp.end(), g.comp.begin() + 1, g.comp.end());
    const Perm base = shifted_concat(f.sigma, g.sigma);
    std::vector<LevelledForest> out;
    for (const Perm& alpha : riffle_perms(f.vertices(), g.vertices())) {
        Perm word(base.size());
        for (std::size_t i = 0; i < base.size(); ++i) word[i] = alpha[base[i] - 1];
        out.emplace_back(std::move(word), comp);
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Horizontal mirror: reverse the word positions and the tree order.
inline LevelledForest theta(const LevelledForest& f) {
    Perm sigma(f.sigma.rbegin(), f.sigma.rend());
    Composition comp(f.comp.rbegin(), f.comp.rend());
    return LevelledForest(std::move(sigma), std::move(comp));
}

// Vertical mirror: complement every level, keep the shape grouping.
inline LevelledForest vstar(const LevelledForest& f) {
    const int n = f.vertices();
    Perm sigma(f.sigma);
    for (int& v : sigma) v = n + 1 - v;
    return LevelledForest(std::move(sigma), f.comp);
}

// Left action on levels.
inline LevelledForest act(const Perm& s, const LevelledForest& f) {
    if (static_cast<int>(s.size()) != f.vertices())
        throw std::invalid_argument("act: |s| != vertices of " + to_string(f));
    return LevelledForest(compose(s, f.sigma), f.comp);
}

// --- ASCII rendering --------------------------------------------------------

namespace detail {
struct RenderTree {
    // vertex level -> (left strand column, right strand column); strand column
    // of a subtree is the column of its leftmost leaf.
    std::vector<std::pair<int, int>>& branch;
    const Word& word;
    int leaf_col;

    int build(int lo, int hi) {  // word[lo..hi), returns strand column
        if (lo == hi) {
            int c = leaf_col;
            leaf_col += 2;
            return c;
        }
        int mi = lo;
        for (int j = lo + 1; j < hi; ++j)
            if (word[j] < word[mi]) mi = j;
        const int left = build(lo, mi);
        const int right = build(mi + 1, hi);
        branch[word[mi] - 1] = {left, right};
        return left;
    }
};
}  // namespace detail

// One row per generation, top generation first, exactly one branching per row
// (the pair of strands that merges walking top-down). Root strands close the
// picture.
inline std::string render_ascii(const LevelledForest& f) {
    const int n = f.vertices();
    std::vector<std::pair<int, int>> branch(n, {-1, -1});
    std::vector<int> roots;
    int col = 0;
    for (int i = 0; i < f.num_trees(); ++i) {
        const Word w = f.tree_word(i);
        detail::RenderTree rt{branch, w, col};
        roots.push_back(rt.build(0, static_cast<int>(w.size())));
        col = rt.leaf_col + 1;
    }
    if (f.num_trees() == 0) return "    (empty)\n";

    // leaf columns: 0,2,4,... inside each tree block, one extra space between
    // trees (matches the column assignment of the recursion above)
    std::set<int> alive;
    {
        int c2 = 0;
        for (int i = 0; i < f.num_trees(); ++i) {
            for (int l = 0; l <= f.comp[i]; ++l) {
                alive.insert(c2);
                c2 += 2;
            }
            c2 += 1;
        }
    }

    std::string out;
    auto strand_row = [&](const std::set<int>& cols) {
        std::string row(cols.empty() ? 0 : *cols.rbegin() + 1, ' ');
        for (int c : cols) row[c] = '|';
        return row;
    };
    out += "    " + strand_row(alive) + "\n";
    for (int p = n; p >= 1; --p) {
        auto [a, b] = branch[p - 1];
        std::string row(std::max(*alive.rbegin() + 1, b + 1), ' ');
        for (int c : alive) row[c] = '|';
        for (int c = a + 1; c < b; ++c) row[c] = '_';
        row[b] = '/';
        std::string label = std::to_string(p);
        out += label + std::string(4 - std::min<std::size_t>(label.size(), 3), ' ') + row + "\n";
        alive.erase(b);
    }
    out += "    " + strand_row(alive) + "\n";
    return out;
}

}  // namespace forestsig
