#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "combinat.hpp"
#include "matrix.hpp"

namespace forestsig {

// Dense element of the k-th tensor power of the d x d matrix algebra. Each
// slot carries one index pair flattened to q = i*d + j; entries are addressed
// slot-major with slot 1 most significant. Order 0 holds a single scalar.
struct Tensor {
    int d = 0;
    int order = 0;
    std::vector<Complex> data;

    Tensor() = default;
    Tensor(int dim, int k) : d(dim), order(k) {
        if (dim < 1 || k < 0) throw std::invalid_argument("Tensor: bad shape");
        std::size_t len = 1;
        for (int s = 0; s < k; ++s) len *= static_cast<std::size_t>(dim) * dim;
        data.assign(len, Complex(0.0));
    }

    std::size_t slot_size() const { return static_cast<std::size_t>(d) * d; }

    // multi-index (q_1..q_k) -> flat offset
    std::size_t flat(const std::vector<int>& q) const {
        std::size_t idx = 0;
        for (int s = 0; s < order; ++s) idx = idx * slot_size() + static_cast<std::size_t>(q[s]);
        return idx;
    }

    friend Tensor operator+(const Tensor& x, const Tensor& y) {
        check_shape(x, y);
        Tensor out(x);
        for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] += y.data[i];
        return out;
    }
    friend Tensor operator-(const Tensor& x, const Tensor& y) {
        check_shape(x, y);
        Tensor out(x);
        for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] -= y.data[i];
        return out;
    }
    friend Tensor operator*(const Complex& c, const Tensor& x) {
        Tensor out(x);
        for (auto& v : out.data) v *= c;
        return out;
    }
    Tensor& operator+=(const Tensor& y) { return *this = *this + y; }
    Tensor& operator-=(const Tensor& y) { return *this = *this - y; }

    static void check_shape(const Tensor& x, const Tensor& y) {
        if (x.d != y.d || x.order != y.order)
            throw std::invalid_argument("Tensor: shape mismatch (" + std::to_string(x.order) +
                                        " vs " + std::to_string(y.order) + ")");
    }
};

inline Tensor scalar_tensor(int d, Complex value) {
    Tensor t(d, 0);
    t.data[0] = value;
    return t;
}

inline Tensor pure_tensor(const std::vector<Matrix>& factors, int d) {
    Tensor t(d, static_cast<int>(factors.size()));
    std::vector<int> q(factors.size(), 0);
    for (std::size_t idx = 0; idx < t.data.size(); ++idx) {
        Complex v = 1.0;
        for (int s = 0; s < t.order; ++s) v *= factors[s].a[q[s]];
        t.data[idx] = v;
        for (int s = t.order - 1; s >= 0; --s) {
            if (++q[s] < static_cast<int>(t.slot_size())) break;
            q[s] = 0;
        }
    }
    return t;
}

// u (x) v with u's slots first.
inline Tensor outer(const Tensor& u, const Tensor& v) {
    if (u.d != v.d) throw std::invalid_argument("outer: dimension mismatch");
    Tensor out(u.d, u.order + v.order);
    for (std::size_t i = 0; i < u.data.size(); ++i) {
        if (u.data[i] == 0.0) continue;
        const std::size_t base = i * v.data.size();
        for (std::size_t j = 0; j < v.data.size(); ++j) out.data[base + j] = u.data[i] * v.data[j];
    }
    return out;
}

// Slot j of the result carries slot sigma(j) of the input; on pure tensors
// this sends a_1 (x) ... (x) a_k to a_{sigma(1)} (x) ... (x) a_{sigma(k)}.
inline Tensor permute_slots(const Tensor& t, const Perm& sigma) {
    if (static_cast<int>(sigma.size()) != t.order)
        throw std::invalid_argument("permute_slots: |sigma| != order");
    require_permutation(sigma, "permute_slots");
    Tensor out(t.d, t.order);
    std::vector<int> q(t.order, 0);
    for (std::size_t idx = 0; idx < out.data.size(); ++idx) {
        std::vector<int> src(t.order);
        for (int s = 0; s < t.order; ++s) src[sigma[s] - 1] = q[s];
        out.data[idx] = t.data[t.flat(src)];
        for (int s = t.order - 1; s >= 0; --s) {
            if (++q[s] < static_cast<int>(t.slot_size())) break;
            q[s] = 0;
        }
    }
    return out;
}

// Multiply the slots out left to right, landing back in the algebra. The
// basis expansion contracts neighbouring index pairs: E_{ab} E_{bc} = E_{ac}.
inline Matrix contract_with_product(const Tensor& t) {
    if (t.order == 0) {
        Matrix m = Matrix::identity(t.d);
        return t.data[0] * m;
    }
    const int d = t.d;
    Matrix out(d);
    std::vector<int> q(t.order, 0);
    for (std::size_t idx = 0; idx < t.data.size(); ++idx) {
        const Complex v = t.data[idx];
        if (v != 0.0) {
            // product of matrix units E_{i_s j_s}: nonzero iff j_s == i_{s+1}
            bool chained = true;
            for (int s = 0; s + 1 < t.order; ++s)
                if (q[s] % d != q[s + 1] / d) { chained = false; break; }
            if (chained) {
                const int row = q[0] / d;
                const int col = q[t.order - 1] % d;
                out(row, col) += v;
            }
        }
        for (int s = t.order - 1; s >= 0; --s) {
            if (++q[s] < static_cast<int>(t.slot_size())) break;
            q[s] = 0;
        }
    }
    return out;
}

// Slotwise conjugate transpose (no slot reversal; word-level involutions
// handle their own reordering).
inline Tensor adjoint(const Tensor& t) {
    Tensor out(t.d, t.order);
    std::vector<int> q(t.order, 0);
    for (std::size_t idx = 0; idx < out.data.size(); ++idx) {
        std::vector<int> src(t.order);
        for (int s = 0; s < t.order; ++s) {
            const int i = q[s] / t.d, j = q[s] % t.d;
            src[s] = j * t.d + i;
        }
        out.data[idx] = std::conj(t.data[t.flat(src)]);
        for (int s = t.order - 1; s >= 0; --s) {
            if (++q[s] < static_cast<int>(t.slot_size())) break;
            q[s] = 0;
        }
    }
    return out;
}

// order-1 tensors live in the algebra itself
inline Matrix tensor_to_matrix(const Tensor& t) {
    if (t.order != 1)
        throw std::invalid_argument("tensor_to_matrix: order " + std::to_string(t.order) +
                                    " != 1");
    Matrix m(t.d);
    m.a = t.data;
    return m;
}

inline double frobenius_norm(const Tensor& t) {
    double s = 0.0;
    for (const Complex& v : t.data) s += std::norm(v);
    return std::sqrt(s);
}

inline double max_abs_diff(const Tensor& x, const Tensor& y) {
    Tensor::check_shape(x, y);
    double m = 0.0;
    for (std::size_t i = 0; i < x.data.size(); ++i)
        m = std::max(m, std::abs(x.data[i] - y.data[i]));
    return m;
}

}  // namespace forestsig
