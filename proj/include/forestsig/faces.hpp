#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "forest.hpp"
#include "hopf.hpp"
#include "signature.hpp"
#include "tree_tensors.hpp"

namespace forestsig {

// A faces-contraction element in the dense model: per tree, a word tensor
// with one slot per leaf. The operator semantics are in-order: a pure word
// (A_1,...,A_{n+1}) on a tree with n vertices is the n-ary map
// (X_1,...,X_n) -> A_1 X_1 A_2 X_2 ... X_n A_{n+1}; the tree carries the
// grading and the cut structure, not the evaluation order.
struct FacesContraction {
    int d = 1;
    TreeTensor terms;

    explicit FacesContraction(int dim = 1) : d(dim) {
        if (dim < 1) throw std::invalid_argument("FacesContraction: dimension must be >= 1");
    }
};

inline void fc_add(FacesContraction& m, const LevelledForest& tree, const Tensor& coeff) {
    if (tree.num_trees() != 1)
        throw std::invalid_argument("fc_add: key must be a single tree, got " + to_string(tree));
    if (coeff.d != m.d) throw std::invalid_argument("fc_add: dimension mismatch");
    if (coeff.order != tree.leaves())
        throw std::invalid_argument("fc_add: tensor order " + std::to_string(coeff.order) +
                                    " != leaf count of " + to_string(tree));
    tt_add(m.terms, tree, coeff);
}

inline FacesContraction sharp(const AlgWord& word, const LevelledForest& tree) {
    if (word.empty()) throw std::invalid_argument("sharp: empty word");
    FacesContraction m(word.front().d);
    fc_add(m, tree, pure_tensor(word, m.d));
    return m;
}

// --- word-tensor surgery -----------------------------------------------------

// Fix input `pos` of a word tensor to the matrix x: letters pos and pos+1
// merge into the single letter A_pos . x . A_{pos+1}.
inline Tensor fc_plug_tensor(const Tensor& t, int pos, const Matrix& x) {
    if (t.order < 2)
        throw std::invalid_argument("fc_plug_tensor: word tensor has no input to fix");
    if (pos < 1 || pos > t.order - 1)
        throw std::invalid_argument("fc_plug_tensor: input " + std::to_string(pos) +
                                    " out of range 1.." + std::to_string(t.order - 1));
    if (x.d != t.d) throw std::invalid_argument("fc_plug_tensor: dimension mismatch");
    const int d = t.d;
    const std::size_t slot = t.slot_size();
    std::size_t suffix = 1;
    for (int s = pos + 1; s < t.order; ++s) suffix *= slot;
    std::size_t prefixes = 1;
    for (int s = 1; s < pos; ++s) prefixes *= slot;

    Tensor out(d, t.order - 1);
    for (std::size_t a = 0; a < prefixes; ++a)
        for (int r = 0; r < d; ++r)
            for (int k = 0; k < d; ++k)
                for (int l = 0; l < d; ++l) {
                    const Complex xv = x(k, l);
                    if (xv == 0.0) continue;
                    for (int c = 0; c < d; ++c) {
                        const std::size_t src =
                            ((a * slot + static_cast<std::size_t>(r) * d + k) * slot +
                             static_cast<std::size_t>(l) * d + c) *
                            suffix;
                        const std::size_t dst =
                            (a * slot + static_cast<std::size_t>(r) * d + c) * suffix;
                        for (std::size_t b = 0; b < suffix; ++b)
                            out.data[dst + b] += t.data[src + b] * xv;
                    }
                }
    return out;
}

// Evaluate a word tensor at a full tuple of inputs, in order.
inline Matrix fc_eval_tensor(const Tensor& coeff, const std::vector<Matrix>& xs) {
    if (static_cast<int>(xs.size()) != coeff.order - 1)
        throw std::invalid_argument("fc_eval_tensor: need " + std::to_string(coeff.order - 1) +
                                    " inputs, got " + std::to_string(xs.size()));
    Tensor t = coeff;
    for (int pos = t.order - 1; pos >= 1; --pos) t = fc_plug_tensor(t, pos, xs[pos - 1]);
    return tensor_to_matrix(t);
}

// Evaluate the element at k inputs: only grade-k terms contribute.
inline Matrix fc_eval(const FacesContraction& m, const std::vector<Matrix>& xs) {
    Matrix out(m.d);
    for (const auto& [tree, coeff] : m.terms)
        if (tree.vertices() == static_cast<int>(xs.size())) out += fc_eval_tensor(coeff, xs);
    return out;
}

// Fix input `pos` across the element; terms without that input drop to zero.
inline FacesContraction fc_plug(const FacesContraction& m, int pos, const Matrix& x) {
    FacesContraction out(m.d);
    for (const auto& [tree, coeff] : m.terms) {
        if (tree.vertices() < pos) continue;
        Word sigma = tree.sigma;
        // the plug consumes the vertex at `pos`; relabel the levels above it
        // so the remaining word is again a permutation
        const int removed = sigma[pos - 1];
        sigma.erase(sigma.begin() + (pos - 1));
        for (int& v : sigma)
            if (v > removed) --v;
        fc_add(out, LevelledForest(sigma, {static_cast<int>(sigma.size())}),
               fc_plug_tensor(coeff, pos, x));
    }
    return out;
}

// --- shuffle algebra ----------------------------------------------------------

inline FacesContraction fc_shuffle(const FacesContraction& m, const FacesContraction& m2) {
    if (m.d != m2.d) throw std::invalid_argument("fc_shuffle: dimension mismatch");
    FacesContraction out(m.d);
    out.terms = tt_shuffle(m.terms, m2.terms);
    return out;
}

inline FacesContraction fc_star(const FacesContraction& m) {
    FacesContraction out(m.d);
    out.terms = tt_star(m.terms);
    return out;
}

inline double fc_distance(const FacesContraction& x, const FacesContraction& y) {
    return tt_distance(x.terms, y.terms);
}

// --- operator norm ------------------------------------------------------------

// sup of |u* m(X_1,..,X_n) v| over Frobenius-unit inputs and unit vectors u, v,
// by alternating coordinate maximization from a few seeded starts. Measuring
// the output in spectral norm makes the 0-input case the spectral norm of the
// constant, and keeps the norm submultiplicative under the seam product.
inline double opnorm_estimate(const Tensor& coeff, int restarts = 4, int iters = 60) {
    const int d = coeff.d;
    const int n = coeff.order - 1;
    SplitMix64 rng(0x6f70); // fixed seed: the estimate must be reproducible
    double best = 0.0;
    for (int r = 0; r < restarts; ++r) {
        std::vector<Matrix> xs;
        for (int i = 0; i < n; ++i) {
            Matrix x = random_matrix(d, rng);
            const double f = frobenius_norm(x);
            xs.push_back(Complex(1.0 / f) * x);
        }
        std::vector<Complex> u(d), v(d);
        for (int i = 0; i < d; ++i) {
            u[i] = Complex(1.0, 0.2 * i + 0.1 * r);
            v[i] = Complex(0.7 - 0.1 * i, 1.0);
        }
        auto normalize = [](std::vector<Complex>& w) {
            double s = 0.0;
            for (const Complex& c : w) s += std::norm(c);
            s = std::sqrt(s);
            if (s > 0.0)
                for (Complex& c : w) c /= s;
        };
        normalize(u);
        normalize(v);
        double value = 0.0;
        for (int it = 0; it < iters; ++it) {
            // u, v step: top singular pair of the current output matrix,
            // approached by one two-sided power step
            const Matrix out = fc_eval_tensor(coeff, xs);
            std::vector<Complex> nu(d, 0.0), nv(d, 0.0);
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) nu[i] += out(i, j) * v[j];
            normalize(nu);
            for (int j = 0; j < d; ++j)
                for (int i = 0; i < d; ++i) nv[j] += std::conj(out(i, j)) * nu[i];
            normalize(nv);
            u = nu;
            v = nv;
            // X_i step: the functional is linear in X_i, so the maximizer over
            // the Frobenius ball is the (normalized) gradient
            for (int i = 0; i < n; ++i) {
                Matrix grad(d);
                for (int a = 0; a < d; ++a)
                    for (int b = 0; b < d; ++b) {
                        Matrix e(d);
                        e(a, b) = 1.0;
                        std::vector<Matrix> probe = xs;
                        probe[i] = e;
                        const Matrix m = fc_eval_tensor(coeff, probe);
                        Complex val = 0.0;
                        for (int p = 0; p < d; ++p)
                            for (int q = 0; q < d; ++q) val += std::conj(u[p]) * m(p, q) * v[q];
                        grad(a, b) = std::conj(val);
                    }
                const double g = frobenius_norm(grad);
                if (g > 0.0) xs[i] = Complex(1.0 / g) * grad;
            }
            const Matrix out2 = fc_eval_tensor(coeff, xs);
            Complex val = 0.0;
            for (int p = 0; p < d; ++p)
                for (int q = 0; q < d; ++q) val += std::conj(u[p]) * out2(p, q) * v[q];
            const double nv2 = std::abs(val);
            if (std::abs(nv2 - value) < 1e-12 * std::max(1.0, value)) {
                value = nv2;
                break;
            }
            value = nv2;
        }
        best = std::max(best, value);
    }
    return best;
}

inline double fc_norm(const FacesContraction& m) {
    double s = 0.0;
    for (const auto& [tree, coeff] : m.terms)
        s += opnorm_estimate(coeff) / static_cast<double>(factorial(tree.vertices()));
    return s;
}

// --- the operators C ----------------------------------------------------------

// C_{Y_1..Y_k} plugs Y_1 at the top level, Y_2 at the next one down, and so
// on. Iterating from the top is what makes the family compose as
// C_A . C_B = C_{B,A}. Terms of grade < k vanish.
inline FacesContraction c_operator(const std::vector<Matrix>& ys, const FacesContraction& m) {
    const int k = static_cast<int>(ys.size());
    if (k == 0) return m;
    FacesContraction out(m.d);
    for (const auto& [tree, coeff] : m.terms) {
        const int n = tree.vertices();
        if (n < k) continue;
        Word sigma = tree.sigma;
        Tensor t = coeff;
        for (int j = 0; j < k; ++j) {
            const int level = n - j;
            int pos = 0;
            for (int i = 0; i < static_cast<int>(sigma.size()); ++i)
                if (sigma[i] == level) pos = i + 1;
            t = fc_plug_tensor(t, pos, ys[j]);
            sigma.erase(sigma.begin() + (pos - 1));
        }
        fc_add(out, LevelledForest(sigma, {n - k}), t);
    }
    return out;
}

// --- diagonal actions ---------------------------------------------------------

// Contract a word tensor over the faces of f with one matrix per vertex:
// unit w lands in the gap at its vertex's position, and the word collapses
// to one letter per tree of f.
inline Tensor faces_merge(const Tensor& coeff, const Composition& comp,
                          const std::vector<Matrix>& units) {
    int n = 0;
    for (int c : comp) n += c;
    if (static_cast<int>(units.size()) != n)
        throw std::invalid_argument("faces_merge: need one matrix per vertex");
    if (coeff.order != n + static_cast<int>(comp.size()))
        throw std::invalid_argument("faces_merge: word tensor order " +
                                    std::to_string(coeff.order) + " != face count " +
                                    std::to_string(n + static_cast<int>(comp.size())));
    // vertex w of tree i sits after letter w + i - 1; plug from the right so
    // earlier positions stay valid
    std::vector<int> gap(n);
    int w = 0;
    for (int i = 0; i < static_cast<int>(comp.size()); ++i)
        for (int c = 0; c < comp[i]; ++c) {
            gap[w] = (w + 1) + i;
            ++w;
        }
    Tensor t = coeff;
    for (int v = n - 1; v >= 0; --v) t = fc_plug_tensor(t, gap[v], units[v]);
    return t;
}

// One diagonal of the signature group element: the permuted integral's slots
// feed the vertex gaps of f in position order, separator gaps stay open.
inline Tensor calx_diagonal(const SignatureEngine& eng, const LevelledForest& f, double s,
                            double t, const Tensor& coeff) {
    const int d = eng.path().d;
    if (coeff.d != d) throw std::invalid_argument("calx_diagonal: dimension mismatch");
    if (coeff.order != f.leaves())
        throw std::invalid_argument("calx_diagonal: word tensor order " +
                                    std::to_string(coeff.order) + " != face count of " +
                                    to_string(f));
    const Tensor xsig = eng.permuted_integral(s, t, f.sigma);
    const int n = f.vertices();
    Tensor out(d, f.num_trees());
    std::vector<int> q(n, 0);
    std::vector<Matrix> units(n, Matrix(d));
    const std::size_t slot = static_cast<std::size_t>(d) * d;
    for (std::size_t idx = 0; idx < xsig.data.size(); ++idx) {
        const Complex c = xsig.data[idx];
        if (c != 0.0) {
            for (int v = 0; v < n; ++v) {
                units[v] = Matrix(d);
                units[v].a[q[v]] = 1.0;
            }
            out += c * faces_merge(coeff, f.comp, units);
        }
        for (int v = n - 1; v >= 0; --v) {
            if (++q[v] < static_cast<int>(slot)) break;
            q[v] = 0;
        }
    }
    return out;
}

// One diagonal of id + C_{Y_1..Yk}: vertex at position w takes Y_{k+1-level},
// so Y_1 serves the top level, matching the iterated-plug definition.
inline Tensor c_diagonal(const LevelledForest& f, const std::vector<Matrix>& ys,
                         const Tensor& coeff) {
    const int k = static_cast<int>(ys.size());
    if (f.vertices() != k)
        throw std::invalid_argument("c_diagonal: forest size " +
                                    std::to_string(f.vertices()) + " != argument count " +
                                    std::to_string(k));
    std::vector<Matrix> units;
    units.reserve(k);
    for (int w = 0; w < k; ++w) units.push_back(ys[k - f.sigma[w]]);
    return faces_merge(coeff, f.comp, units);
}

// --- triangular group elements --------------------------------------------------

// A triangular element stored through its constant diagonals: one operator
// per forest, word tensors in, word tensors out. The (tau', tau) component is
// the diagonal of tau \ tau' when tau' is a lower cut of tau and zero
// otherwise; every bullet-forest diagonal is the identity.
struct FacesGroupElement {
    int d = 1;
    std::function<Tensor(const LevelledForest&, const Tensor&)> diag;
};

inline FacesGroupElement identity_element(int d) {
    return {d, [d](const LevelledForest& f, const Tensor& coeff) {
                if (f.vertices() == 0) return coeff;
                return Tensor(d, f.num_trees());
            }};
}

inline FacesGroupElement signature_element(const SignatureEngine& eng, double s, double t) {
    const SignatureEngine* e = &eng;
    return {eng.path().d, [e, s, t](const LevelledForest& f, const Tensor& coeff) {
                return calx_diagonal(*e, f, s, t, coeff);
            }};
}

inline FacesGroupElement c_element(int d, std::vector<Matrix> ys) {
    const int k = static_cast<int>(ys.size());
    return {d, [d, k, ys = std::move(ys)](const LevelledForest& f, const Tensor& coeff) {
                if (f.vertices() == 0) return coeff;
                if (f.vertices() == k) return c_diagonal(f, ys, coeff);
                return Tensor(d, f.num_trees());
            }};
}

// Convolution of diagonals: sum over the cuts of f, the upper part acting
// first. This is the group law of triangular elements.
inline FacesGroupElement group_compose(const FacesGroupElement& x, const FacesGroupElement& y) {
    if (x.d != y.d) throw std::invalid_argument("group_compose: dimension mismatch");
    const auto xd = x.diag;
    const auto yd = y.diag;
    return {x.d, [xd, yd, d = x.d](const LevelledForest& f, const Tensor& coeff) {
                Tensor out(d, f.num_trees());
                for (int p = 0; p <= f.vertices(); ++p) {
                    const auto cut = horizontal_split(f, p);
                    out += xd(cut.first, yd(cut.second, coeff));
                }
                return out;
            }};
}

// Component lookup with the triangularity built in: zero unless tau' is what
// remains of tau below some cut.
inline Tensor component_apply(const FacesGroupElement& x, const LevelledForest& tau_p,
                              const LevelledForest& tau, const Tensor& coeff) {
    if (tau.num_trees() != 1 || tau_p.num_trees() != 1)
        throw std::invalid_argument("component_apply: components are indexed by trees");
    const int p = tau_p.vertices();
    if (p <= tau.vertices()) {
        const auto cut = horizontal_split(tau, p);
        if (cut.first == tau_p) return x.diag(cut.second, coeff);
    }
    return Tensor(x.d, tau_p.leaves());
}

// Full action on a dense element: each term scatters over the lower cuts of
// its tree, the upper complement acting on the word tensor.
inline FacesContraction group_apply(const FacesGroupElement& x, const FacesContraction& m) {
    FacesContraction out(m.d);
    for (const auto& [tau, coeff] : m.terms)
        for (int p = 0; p <= tau.vertices(); ++p) {
            const auto cut = horizontal_split(tau, p);
            fc_add(out, cut.first, x.diag(cut.second, coeff));
        }
    return out;
}

inline FacesContraction calx_apply(const SignatureEngine& eng, double s, double t,
                                   const FacesContraction& m) {
    return group_apply(signature_element(eng, s, t), m);
}

// The f-component evaluated at a full tuple of outer arguments.
inline Matrix calx_component(const SignatureEngine& eng, const LevelledForest& f, double s,
                             double t, const FacesContraction& m,
                             const std::vector<Matrix>& ys) {
    if (static_cast<int>(ys.size()) != f.num_trees() - 1)
        throw std::invalid_argument("calx_component: need " +
                                    std::to_string(f.num_trees() - 1) + " arguments, got " +
                                    std::to_string(ys.size()));
    Matrix out(eng.path().d);
    for (const auto& [tree, coeff] : m.terms)
        if (tree.vertices() == f.leaves() - 1)
            out += fc_eval_tensor(calx_diagonal(eng, f, s, t, coeff), ys);
    return out;
}

// --- identity checks -----------------------------------------------------------

// sharp intertwines the signature's triangular endomorphism on decorated
// words with the group element's action on faces-contractions.
inline double check_intertwining(const SignatureEngine& eng, const AlgWord& word,
                                 const LevelledForest& tree, double s, double t) {
    const int d = eng.path().d;
    const TreeTensor lhs = eng.bar_apply(pure_tensor(word, d), tree, s, t);
    const FacesContraction rhs = calx_apply(eng, s, t, sharp(word, tree));
    return tt_distance(lhs, rhs.terms) / std::max(1.0, tt_norm(lhs));
}

// Morphism property of the full action with respect to the shuffle.
inline double check_fc_morphism(const SignatureEngine& eng, const FacesContraction& m,
                                const FacesContraction& m2, double s, double t) {
    const FacesContraction lhs = calx_apply(eng, s, t, fc_shuffle(m, m2));
    const FacesContraction rhs =
        fc_shuffle(calx_apply(eng, s, t, m), calx_apply(eng, s, t, m2));
    return fc_distance(lhs, rhs) / std::max(1.0, tt_norm(lhs.terms));
}

// Group law: convolving the diagonals over [u,t] and [s,u] matches the
// diagonal over [s,t].
inline double check_fc_group_law(const SignatureEngine& eng, const LevelledForest& f,
                                 const Tensor& coeff, double s, double u, double t) {
    const FacesGroupElement composed =
        group_compose(signature_element(eng, u, t), signature_element(eng, s, u));
    const Tensor lhs = signature_element(eng, s, t).diag(f, coeff);
    const Tensor rhs = composed.diag(f, coeff);
    return frobenius_norm(lhs - rhs) / std::max(1.0, frobenius_norm(lhs));
}

// Simplicial compatibility: fixing output slots i in I of the f-component
// equals acting with the glued forest f^I on the word with the matching
// separator gaps filled.
inline double check_simplicial(const SignatureEngine& eng, const LevelledForest& f,
                               const AlgWord& word, const std::vector<int>& is,
                               const std::vector<Matrix>& xs, double s, double t) {
    if (is.size() != xs.size())
        throw std::invalid_argument("check_simplicial: index/argument count mismatch");
    const int d = eng.path().d;
    const Tensor coeff = pure_tensor(word, d);

    Tensor lhs = calx_diagonal(eng, f, s, t, coeff);
    for (int j = static_cast<int>(is.size()) - 1; j >= 0; --j)
        lhs = fc_plug_tensor(lhs, is[j], xs[j]);

    std::vector<int> seps(f.num_trees());
    int acc = 0;
    for (int i = 0; i < f.num_trees(); ++i) {
        acc += f.comp[i] + 1;
        seps[i] = acc;
    }
    Tensor plugged = coeff;
    LevelledForest glued = f;
    for (int j = static_cast<int>(is.size()) - 1; j >= 0; --j) {
        plugged = fc_plug_tensor(plugged, seps[is[j] - 1], xs[j]);
        glued = glue_at(glued, is[j]);
    }
    const Tensor rhs = calx_diagonal(eng, glued, s, t, plugged);
    return frobenius_norm(lhs - rhs) / std::max(1.0, frobenius_norm(lhs));
}

// Exchange law: braiding the pair of forests swaps the order in which two
// triangular elements consume a word.
inline double exchange_residual(const FacesGroupElement& x, const FacesGroupElement& y,
                                const LevelledForest& f, const LevelledForest& fp,
                                const Tensor& coeff) {
    if (fp.num_trees() != f.leaves())
        throw std::invalid_argument("exchange_residual: forests are not compatible, nt(" +
                                    to_string(fp) + ") != |" + to_string(f) + "|");
    const Tensor lhs = x.diag(f, y.diag(fp, coeff));
    const ForestPair k = braiding(f, fp);
    const Tensor rhs = y.diag(k.first, x.diag(k.second, coeff));
    return frobenius_norm(lhs - rhs) / std::max(1.0, frobenius_norm(lhs));
}

// Self-adjointness under conjugation by the star: the theta-mirrored diagonal
// sandwiched between word reversals matches the plain diagonal.
inline Tensor star_tensor(const Tensor& t) {
    Perm rev(t.order);
    for (int s = 0; s < t.order; ++s) rev[s] = t.order - s;
    return adjoint(permute_slots(t, rev));
}

inline double theta_conjugate_residual(const FacesGroupElement& x, const LevelledForest& f,
                                       const Tensor& coeff) {
    const Tensor lhs = star_tensor(x.diag(theta(f), star_tensor(coeff)));
    const Tensor rhs = x.diag(f, coeff);
    return frobenius_norm(lhs - rhs) / std::max(1.0, frobenius_norm(lhs));
}

}  // namespace forestsig
