#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace forestsig {

using Complex = std::complex<double>;

// Dense d x d complex matrix, row major. Small fixed sizes only (d <= 3 in
// every shipped configuration), so no external linear algebra is pulled in.
struct Matrix {
    int d = 0;
    std::vector<Complex> a;

    Matrix() = default;
    explicit Matrix(int dim) : d(dim), a(static_cast<std::size_t>(dim) * dim) {
        if (dim < 1) throw std::invalid_argument("Matrix: dimension must be >= 1");
    }

    Complex& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * d + j]; }
    const Complex& operator()(int i, int j) const {
        return a[static_cast<std::size_t>(i) * d + j];
    }

    static Matrix identity(int dim) {
        Matrix m(dim);
        for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
        return m;
    }
    static Matrix zero(int dim) { return Matrix(dim); }

    friend Matrix operator+(const Matrix& x, const Matrix& y) {
        Matrix out(x.d);
        for (std::size_t i = 0; i < x.a.size(); ++i) out.a[i] = x.a[i] + y.a[i];
        return out;
    }
    friend Matrix operator-(const Matrix& x, const Matrix& y) {
        Matrix out(x.d);
        for (std::size_t i = 0; i < x.a.size(); ++i) out.a[i] = x.a[i] - y.a[i];
        return out;
    }
    friend Matrix operator*(const Complex& c, const Matrix& x) {
        Matrix out(x.d);
        for (std::size_t i = 0; i < x.a.size(); ++i) out.a[i] = c * x.a[i];
        return out;
    }
    friend Matrix operator*(const Matrix& x, const Matrix& y) {
        Matrix out(x.d);
        for (int i = 0; i < x.d; ++i)
            for (int k = 0; k < x.d; ++k) {
                const Complex v = x(i, k);
                if (v == 0.0) continue;
                for (int j = 0; j < x.d; ++j) out(i, j) += v * y(k, j);
            }
        return out;
    }
    Matrix& operator+=(const Matrix& y) { return *this = *this + y; }
    Matrix& operator-=(const Matrix& y) { return *this = *this - y; }
};

inline Matrix adjoint(const Matrix& m) {
    Matrix out(m.d);
    for (int i = 0; i < m.d; ++i)
        for (int j = 0; j < m.d; ++j) out(i, j) = std::conj(m(j, i));
    return out;
}

inline Complex trace(const Matrix& m) {
    Complex t = 0.0;
    for (int i = 0; i < m.d; ++i) t += m(i, i);
    return t;
}

inline double frobenius_norm(const Matrix& m) {
    double s = 0.0;
    for (const Complex& v : m.a) s += std::norm(v);
    return std::sqrt(s);
}

// Largest singular value by power iteration on m* m. Deterministic start;
// plenty for d <= 3 where the iteration converges geometrically.
inline double spectral_norm(const Matrix& m, int iters = 200) {
    const Matrix g = adjoint(m) * m;
    std::vector<Complex> v(m.d);
    for (int i = 0; i < m.d; ++i) v[i] = Complex(1.0 + 0.13 * i, 0.37 - 0.11 * i);
    double lambda = 0.0;
    for (int it = 0; it < iters; ++it) {
        std::vector<Complex> w(m.d, 0.0);
        for (int i = 0; i < m.d; ++i)
            for (int j = 0; j < m.d; ++j) w[i] += g(i, j) * v[j];
        double nw = 0.0;
        for (const Complex& x : w) nw += std::norm(x);
        nw = std::sqrt(nw);
        if (nw == 0.0) return 0.0;
        lambda = nw;
        for (auto& x : w) x /= nw;
        v = std::move(w);
    }
    return std::sqrt(lambda);
}

inline double max_abs_diff(const Matrix& x, const Matrix& y) {
    double m = 0.0;
    for (std::size_t i = 0; i < x.a.size(); ++i)
        m = std::max(m, std::abs(x.a[i] - y.a[i]));
    return m;
}

// splitmix64: tiny, portable, seedable; keeps every test and CLI profile
// reproducible across platforms without depending on libstdc++'s
// distribution implementations.
struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    // uniform in [-1, 1]
    double uniform() {
        return 2.0 * (static_cast<double>(next() >> 11) * 0x1.0p-53) - 1.0;
    }
};

inline Matrix random_matrix(int d, SplitMix64& rng) {
    Matrix m(d);
    for (auto& v : m.a) {
        const double re = rng.uniform();
        const double im = rng.uniform();
        v = Complex(re, im);
    }
    return m;
}

inline Matrix random_hermitian(int d, SplitMix64& rng) {
    const Matrix m = random_matrix(d, rng);
    Matrix out(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) out(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
    return out;
}

}  // namespace forestsig
