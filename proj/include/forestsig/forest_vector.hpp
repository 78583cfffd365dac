#pragma once

#include <map>
#include <ostream>
#include <sstream>
#include <utility>

#include "forest.hpp"
#include "rational.hpp"

namespace forestsig {

// Finite linear combination with exact coefficients over an ordered key type.
// Zero coefficients are never stored, so equality is plain map equality.
template <class Key>
class LinComb {
  public:
    using Terms = std::map<Key, Rational>;

    LinComb() = default;
    explicit LinComb(const Key& k, Rational c = Rational(1)) { add(k, c); }

    void add(const Key& k, const Rational& c) {
        if (c.is_zero()) return;
        auto [it, fresh] = terms_.try_emplace(k, c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    LinComb& operator+=(const LinComb& o) {
        for (const auto& [k, c] : o.terms_) add(k, c);
        return *this;
    }
    LinComb& operator-=(const LinComb& o) {
        for (const auto& [k, c] : o.terms_) add(k, -c);
        return *this;
    }
    LinComb& operator*=(const Rational& r) {
        if (r.is_zero()) { terms_.clear(); return *this; }
        for (auto& [k, c] : terms_) c *= r;
        return *this;
    }
    friend LinComb operator+(LinComb a, const LinComb& b) { return a += b; }
    friend LinComb operator-(LinComb a, const LinComb& b) { return a -= b; }
    friend LinComb operator*(const Rational& r, LinComb a) { return a *= r; }

    friend bool operator==(const LinComb& a, const LinComb& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const LinComb& a, const LinComb& b) { return !(a == b); }

    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    const Terms& terms() const { return terms_; }
    Rational coeff(const Key& k) const {
        auto it = terms_.find(k);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    // Linear extension of a key-to-combination map.
    template <class Fn>
    auto map_terms(Fn&& fn) const {
        using Out = decltype(fn(std::declval<const Key&>()));
        Out out;
        for (const auto& [k, c] : terms_) {
            Out piece = fn(k);
            piece *= c;
            out += piece;
        }
        return out;
    }

  private:
    Terms terms_;
};

using ForestVector = LinComb<LevelledForest>;
using ForestPair = std::pair<LevelledForest, LevelledForest>;
using ForestPairVector = LinComb<ForestPair>;

inline std::string to_string(const ForestVector& v) {
    if (v.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [f, c] : v.terms()) {
        if (!first) os << " + ";
        first = false;
        if (c != Rational(1)) os << c.str() << "*";
        os << to_string(f);
    }
    return os.str();
}

inline std::string to_string(const ForestPairVector& v) {
    if (v.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [p, c] : v.terms()) {
        if (!first) os << " + ";
        first = false;
        if (c != Rational(1)) os << c.str() << "*";
        os << to_string(p.first) << " (x) " << to_string(p.second);
    }
    return os.str();
}

}  // namespace forestsig
