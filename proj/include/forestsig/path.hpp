#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "matrix.hpp"

namespace forestsig {

// Matrix-valued driving path on [0,1]. Analytic kinds carry their
// coefficients; sampled paths carry the values themselves (grid+1 samples,
// linearly interpolated).
struct PathSpec {
    enum class Kind { polynomial, trigonometric, sampled };

    int d = 2;
    Kind kind = Kind::polynomial;
    std::vector<Matrix> coeffs;
    int grid = 2000;  // number of integration cells N
    bool self_adjoint = false;
    std::uint64_t seed = 0;  // provenance of generated coefficients, if any

    void validate() const {
        if (d < 1) throw std::invalid_argument("PathSpec: dimension must be >= 1");
        if (grid < 2) throw std::invalid_argument("PathSpec: grid must be >= 2");
        if (coeffs.empty()) throw std::invalid_argument("PathSpec: no coefficients");
        for (const Matrix& m : coeffs) {
            if (m.d != d) throw std::invalid_argument("PathSpec: coefficient dimension mismatch");
            if (self_adjoint && max_abs_diff(m, adjoint(m)) > 1e-12)
                throw std::invalid_argument("PathSpec: self_adjoint set but coefficient not Hermitian");
        }
        if (kind == Kind::sampled && static_cast<int>(coeffs.size()) != grid + 1)
            throw std::invalid_argument("PathSpec: sampled path needs grid+1 samples, got " +
                                        std::to_string(coeffs.size()));
    }

    Matrix value(double t) const {
        switch (kind) {
            case Kind::polynomial: {
                // Horner, highest degree first
                Matrix acc = coeffs.back();
                for (auto it = coeffs.rbegin() + 1; it != coeffs.rend(); ++it)
                    acc = Complex(t) * acc + *it;
                return acc;
            }
            case Kind::trigonometric: {
                // coeffs alternate (A_k, B_k): sum A_k cos(kt) + B_k sin(kt)
                Matrix acc(d);
                for (std::size_t i = 0; i < coeffs.size(); ++i) {
                    const double k = static_cast<double>(i / 2);
                    const double w = (i % 2 == 0) ? std::cos(k * t) : std::sin(k * t);
                    acc += Complex(w) * coeffs[i];
                }
                return acc;
            }
            case Kind::sampled: {
                const double x = std::min(std::max(t, 0.0), 1.0) * grid;
                const int j = std::min(static_cast<int>(x), grid - 1);
                const double frac = x - j;
                return Complex(1.0 - frac) * coeffs[j] + Complex(frac) * coeffs[j + 1];
            }
        }
        throw std::logic_error("PathSpec: bad kind");
    }

    Matrix derivative(double t) const {
        switch (kind) {
            case Kind::polynomial: {
                Matrix acc(d);
                for (std::size_t k = coeffs.size(); k-- > 1;)
                    acc = Complex(t) * acc + Complex(static_cast<double>(k)) * coeffs[k];
                return acc;
            }
            case Kind::trigonometric: {
                Matrix acc(d);
                for (std::size_t i = 0; i < coeffs.size(); ++i) {
                    const double k = static_cast<double>(i / 2);
                    const double w =
                        (i % 2 == 0) ? -k * std::sin(k * t) : k * std::cos(k * t);
                    acc += Complex(w) * coeffs[i];
                }
                return acc;
            }
            case Kind::sampled: {
                const double x = std::min(std::max(t, 0.0), 1.0) * grid;
                const int j = std::min(static_cast<int>(x), grid - 1);
                return Complex(static_cast<double>(grid)) * (coeffs[j + 1] - coeffs[j]);
            }
        }
        throw std::logic_error("PathSpec: bad kind");
    }
};

// Polynomial path of the given degree with seeded pseudo-random coefficients.
inline PathSpec random_polynomial_path(int d, int degree, std::uint64_t seed, int grid,
                                       bool hermitian) {
    PathSpec p;
    p.d = d;
    p.kind = PathSpec::Kind::polynomial;
    p.grid = grid;
    p.self_adjoint = hermitian;
    p.seed = seed;
    SplitMix64 rng(seed);
    for (int k = 0; k <= degree; ++k)
        p.coeffs.push_back(hermitian ? random_hermitian(d, rng) : random_matrix(d, rng));
    p.validate();
    return p;
}

// The standard numeric profile every zero-configuration check runs on.
inline PathSpec default_path() { return random_polynomial_path(2, 3, 42, 2000, true); }

}  // namespace forestsig
