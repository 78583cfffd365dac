#pragma once

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "faces.hpp"
#include "forest_vector.hpp"
#include "hopf.hpp"
#include "matrix.hpp"
#include "path.hpp"
#include "words.hpp"

// JSON encodings shared by the command-line tool and the acceptance runner.
// Objects serialize with sorted keys (nlohmann stores them that way), so a
// fixed config and seed always produce byte-identical reports.

namespace forestsig {

using Json = nlohmann::json;

// --- matrices and words -------------------------------------------------

// row-major nested arrays of [re, im] pairs
inline Json matrix_to_json(const Matrix& m) {
    Json rows = Json::array();
    for (int i = 0; i < m.d; ++i) {
        Json row = Json::array();
        for (int j = 0; j < m.d; ++j)
            row.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Matrix matrix_from_json(const Json& j) {
    if (!j.is_array() || j.empty())
        throw std::invalid_argument("matrix JSON: expected a non-empty array of rows");
    const int d = static_cast<int>(j.size());
    Matrix m(d);
    for (int i = 0; i < d; ++i) {
        const Json& row = j.at(i);
        if (!row.is_array() || static_cast<int>(row.size()) != d)
            throw std::invalid_argument("matrix JSON: row " + std::to_string(i) +
                                        " does not have " + std::to_string(d) + " entries");
        for (int k = 0; k < d; ++k) {
            const Json& e = row.at(k);
            if (!e.is_array() || e.size() != 2)
                throw std::invalid_argument("matrix JSON: entries are [re, im] pairs");
            m(i, k) = Complex(e.at(0).get<double>(), e.at(1).get<double>());
        }
    }
    return m;
}

inline Json word_to_json(const AlgWord& w) {
    Json out = Json::array();
    for (const Matrix& m : w) out.push_back(matrix_to_json(m));
    return out;
}

inline AlgWord word_from_json(const Json& j) {
    if (!j.is_array()) throw std::invalid_argument("word JSON: expected an array of matrices");
    AlgWord out;
    for (const Json& e : j) out.push_back(matrix_from_json(e));
    return out;
}

// list of lists of matrices; an empty inner list is the empty-word letter
inline Json word_of_words_to_json(const WordOfWords& w) {
    Json out = Json::array();
    for (const AlgWord& g : w.groups) out.push_back(word_to_json(g));
    return out;
}

inline WordOfWords word_of_words_from_json(const Json& j) {
    if (!j.is_array()) throw std::invalid_argument("word-of-words JSON: expected an array");
    WordOfWords out;
    for (const Json& g : j) out.groups.push_back(word_from_json(g));
    return out;
}

// --- path specifications --------------------------------------------------

inline std::string kind_name(PathSpec::Kind k) {
    switch (k) {
        case PathSpec::Kind::polynomial: return "poly";
        case PathSpec::Kind::trigonometric: return "trig";
        case PathSpec::Kind::sampled: return "sampled";
    }
    throw std::logic_error("PathSpec: bad kind");
}

inline PathSpec::Kind kind_from_name(const std::string& s) {
    if (s == "poly") return PathSpec::Kind::polynomial;
    if (s == "trig") return PathSpec::Kind::trigonometric;
    if (s == "sampled") return PathSpec::Kind::sampled;
    throw std::invalid_argument("PathSpec JSON: unknown kind \"" + s + "\"");
}

inline Json path_to_json(const PathSpec& p) {
    Json j;
    j["d"] = p.d;
    j["kind"] = kind_name(p.kind);
    Json coeffs = Json::array();
    for (const Matrix& m : p.coeffs) coeffs.push_back(matrix_to_json(m));
    j["coeffs"] = std::move(coeffs);
    j["grid"] = p.grid;
    j["self_adjoint"] = p.self_adjoint;
    j["seed"] = p.seed;
    return j;
}

inline PathSpec path_from_json(const Json& j) {
    if (!j.is_object()) throw std::invalid_argument("PathSpec JSON: expected an object");
    PathSpec p;
    p.d = j.at("d").get<int>();
    p.kind = kind_from_name(j.at("kind").get<std::string>());
    for (const Json& e : j.at("coeffs")) p.coeffs.push_back(matrix_from_json(e));
    p.grid = j.value("grid", 2000);
    p.self_adjoint = j.value("self_adjoint", false);
    p.seed = j.value("seed", std::uint64_t{0});
    p.validate();
    return p;
}

// --- exact forest vectors ---------------------------------------------------

inline Rational rational_from_string(const std::string& s) {
    const auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(std::stoll(s));
        return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
    } catch (const std::logic_error&) {
        throw std::invalid_argument("rational: cannot parse \"" + s + "\"");
    }
}

// list of {forest, coeff} with exact "p/q" coefficients
inline Json forest_vector_to_json(const ForestVector& v) {
    Json out = Json::array();
    for (const auto& [f, c] : v.terms())
        out.push_back(Json{{"forest", to_string(f)}, {"coeff", c.str()}});
    return out;
}

inline ForestVector forest_vector_from_json(const Json& j) {
    if (!j.is_array()) throw std::invalid_argument("forest vector JSON: expected an array");
    ForestVector out;
    for (const Json& e : j)
        out.add(parse_forest(e.at("forest").get<std::string>()),
                rational_from_string(e.at("coeff").get<std::string>()));
    return out;
}

// pair vectors print with "left"/"right" forests, used by coproduct output
inline Json forest_pair_vector_to_json(const ForestPairVector& v) {
    Json out = Json::array();
    for (const auto& [p, c] : v.terms())
        out.push_back(Json{{"left", to_string(p.first)},
                           {"right", to_string(p.second)},
                           {"coeff", c.str()}});
    return out;
}

// --- faces contractions -----------------------------------------------------

// Term list of {word, tree}. Dumping expands each coefficient tensor into
// matrix-unit words (exact; the scalar rides on the first letter), so the
// round trip reproduces the tensor bit for bit.
inline Json faces_to_json(const FacesContraction& m) {
    Json out = Json::array();
    for (const auto& [tree, t] : m.terms) {
        const int slots = static_cast<int>(t.slot_size());
        std::vector<int> q(t.order, 0);
        while (true) {
            const Complex c = t.data[t.flat(q)];
            if (c != Complex(0.0)) {
                Json word = Json::array();
                for (int s = 0; s < t.order; ++s) {
                    Matrix unit(t.d);
                    unit(q[s] / t.d, q[s] % t.d) = (s == 0) ? c : Complex(1.0);
                    word.push_back(matrix_to_json(unit));
                }
                out.push_back(Json{{"word", std::move(word)}, {"tree", to_string(tree)}});
            }
            int s = t.order;
            while (s-- > 0) {
                if (++q[s] < slots) break;
                q[s] = 0;
            }
            if (s < 0) break;
        }
    }
    return out;
}

inline FacesContraction faces_from_json(const Json& j, int d) {
    if (!j.is_array()) throw std::invalid_argument("faces JSON: expected an array of terms");
    FacesContraction out(d);
    for (const Json& e : j) {
        const AlgWord w = word_from_json(e.at("word"));
        fc_add(out, parse_forest(e.at("tree").get<std::string>()), pure_tensor(w, d));
    }
    return out;
}

// --- check records and reports ------------------------------------------

// One verified instance of an identity: which forests, which times, how far
// apart the two sides were.
struct CheckRecord {
    std::string identity;
    std::vector<std::string> forests;
    std::vector<double> times;
    double residual = 0.0;
    double tol = 0.0;
    bool pass = false;
};

inline CheckRecord make_record(std::string identity, std::vector<std::string> forests,
                               std::vector<double> times, double residual, double tol) {
    return CheckRecord{std::move(identity), std::move(forests), std::move(times),
                       residual, tol, residual <= tol};
}

inline Json record_to_json(const CheckRecord& r) {
    Json j;
    j["identity"] = r.identity;
    j["forests"] = r.forests;
    j["times"] = r.times;
    j["residual"] = r.residual;
    j["tol"] = r.tol;
    j["pass"] = r.pass;
    return j;
}

// Newline-delimited records followed by one summary object.
inline std::string render_report(const std::vector<CheckRecord>& records) {
    std::ostringstream os;
    long failures = 0;
    double worst = 0.0;
    for (const CheckRecord& r : records) {
        os << record_to_json(r).dump() << '\n';
        if (!r.pass) ++failures;
        if (r.residual > worst) worst = r.residual;
    }
    Json summary;
    summary["summary"] = true;
    summary["checks"] = records.size();
    summary["failures"] = failures;
    summary["max_residual"] = worst;
    summary["pass"] = failures == 0;
    os << summary.dump() << '\n';
    return os.str();
}

inline bool all_pass(const std::vector<CheckRecord>& records) {
    for (const CheckRecord& r : records)
        if (!r.pass) return false;
    return true;
}

// {axiom, range, status, cases, counterexample?}
inline Json axiom_to_json(const AxiomResult& r) {
    Json j;
    j["axiom"] = r.axiom;
    j["range"] = r.range;
    j["status"] = r.pass ? "pass" : "fail";
    j["cases"] = r.cases;
    if (!r.pass) j["counterexample"] = r.counterexample;
    return j;
}

inline std::string render_axiom_report(const std::vector<AxiomResult>& results) {
    std::ostringstream os;
    long failures = 0;
    for (const AxiomResult& r : results) {
        os << axiom_to_json(r).dump() << '\n';
        if (!r.pass) ++failures;
    }
    Json summary;
    summary["summary"] = true;
    summary["checks"] = results.size();
    summary["failures"] = failures;
    summary["pass"] = failures == 0;
    os << summary.dump() << '\n';
    return os.str();
}

}  // namespace forestsig
