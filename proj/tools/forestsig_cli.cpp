// Command-line front end: forest surgery, exact Hopf operations, and the
// numeric identity suites. Reports are newline-delimited JSON records plus a
// summary object; identical config and seed give byte-identical output.
//
// Exit codes: 0 all checks pass, 1 a check failed, 2 usage or config error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "forestsig/faces.hpp"
#include "forestsig/io.hpp"
#include "forestsig/signature.hpp"

namespace fs = forestsig;

namespace {

struct Opts {
    std::string literal;
    std::string other;
    int level = 0;
    int at = 1;
    int max_vertices = 3;
    int max_trees = 3;
    double tol = 0.0;  // 0 = keep the subcommand default
    std::uint64_t seed = 42;
    std::string path_file;
    std::string out_file;
};

fs::PathSpec load_path(const std::string& file) {
    if (file.empty()) return fs::default_path();
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open path spec '" + file + "'");
    return fs::path_from_json(fs::Json::parse(in));
}

std::vector<fs::Matrix> draw_args(int d, int n, fs::SplitMix64& rng) {
    std::vector<fs::Matrix> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out.push_back(fs::random_matrix(d, rng));
    return out;
}

fs::Tensor draw_coeff(int d, int order, fs::SplitMix64& rng) {
    return fs::pure_tensor(draw_args(d, order, rng), d);
}

// Total gap between the first-order scheme and the per-step exponentials at
// this grid, summed over levels 1..3. Halving the grid should roughly double
// it.
double scheme_gap(const fs::SignatureEngine& eng) {
    const auto exact = eng.level_tensors(0.0, 1.0, 3);
    const auto left = eng.leftpoint_level_tensors(0.0, 1.0, 3);
    double s = 0.0;
    for (int l = 1; l <= 3; ++l) s += fs::frobenius_norm(exact[l] - left[l]);
    return s;
}

// --- verify drivers, one per identity ------------------------------------

std::vector<fs::CheckRecord> run_chen(const fs::SignatureEngine& eng, const Opts& o,
                                      double tol) {
    std::vector<fs::CheckRecord> rec;
    fs::SplitMix64 rng(o.seed);
    const int d = eng.path().d;
    for (const fs::LevelledForest& f : fs::enumerate_forests(o.max_vertices, o.max_trees)) {
        if (f.num_trees() == 0) continue;
        const auto args = draw_args(d, f.vertices() + f.num_trees(), rng);
        const double r = eng.chen_check(f, 0.0, 0.4, 1.0, args);
        rec.push_back(fs::make_record("chen", {fs::to_string(f)}, {0.0, 0.4, 1.0}, r, tol));
    }
    if (eng.path().kind != fs::PathSpec::Kind::sampled) {
        fs::PathSpec half = eng.path();
        half.grid /= 2;
        const fs::SignatureEngine coarse(half);
        const double ratio = scheme_gap(coarse) / scheme_gap(eng);
        rec.push_back(fs::make_record("chen-convergence-ratio", {}, {0.0, 1.0},
                                      std::abs(ratio - 2.0), 0.4));
    }
    return rec;
}

std::vector<fs::CheckRecord> run_shuffle(const fs::SignatureEngine& eng, const Opts& o,
                                         double tol) {
    std::vector<fs::CheckRecord> rec;
    fs::SplitMix64 rng(o.seed);
    const int d = eng.path().d;
    for (int nf = 0; nf <= o.max_vertices; ++nf)
        for (int mf = 1; mf <= 2; ++mf)
            for (const fs::LevelledForest& f : fs::forests_sized(nf, mf)) {
                if (f.leaves() > fs::max_trees()) continue;
                for (int ng = 0; nf + ng <= o.max_vertices; ++ng)
                    for (const fs::LevelledForest& g : fs::forests_sized(ng, f.leaves())) {
                        const auto args = draw_args(d, nf + ng + mf, rng);
                        const double r = eng.shuffle_check(f, g, 0.0, 1.0, args);
                        rec.push_back(fs::make_record(
                            "shuffle", {fs::to_string(f), fs::to_string(g)}, {0.0, 1.0}, r,
                            tol));
                    }
            }
    return rec;
}

std::vector<fs::CheckRecord> run_geometric(const fs::SignatureEngine& eng, const Opts& o,
                                           double tol) {
    std::vector<fs::CheckRecord> rec;
    fs::SplitMix64 rng(o.seed);
    const int d = eng.path().d;

    const std::vector<std::string> trees = {"e;0", "1;1", "12;2", "21;2"};
    for (const std::string& sa : trees)
        for (const std::string& sb : trees) {
            const fs::LevelledForest alpha = fs::parse_forest(sa);
            const fs::LevelledForest beta = fs::parse_forest(sb);
            if (alpha.vertices() + beta.vertices() > o.max_vertices) continue;
            const auto a = draw_args(d, alpha.leaves(), rng);
            const auto b = draw_args(d, beta.leaves(), rng);
            const double r = eng.geometric_shuffle_check(a, alpha, b, beta, 0.0, 1.0);
            rec.push_back(fs::make_record("geometric-shuffle", {sa, sb}, {0.0, 1.0}, r, tol));
        }

    for (const char* sb : {"e;0", "1;1", "21;2"}) {
        const fs::LevelledForest beta = fs::parse_forest(sb);
        const auto u = draw_args(d, 2, rng);
        const auto word = draw_args(d, beta.leaves(), rng);
        const double r = eng.geometric_substitution_check(u, {{word, beta}}, 0.0, 1.0);
        rec.push_back(fs::make_record("geometric-substitution", {sb}, {0.0, 1.0}, r, tol));
    }
    {
        const auto u = draw_args(d, 3, rng);
        const fs::LevelledForest b1 = fs::parse_forest("1;1");
        const fs::LevelledForest b2 = fs::parse_forest("e;0");
        const double r = eng.geometric_substitution_check(
            u, {{draw_args(d, 2, rng), b1}, {draw_args(d, 1, rng), b2}}, 0.0, 1.0);
        rec.push_back(
            fs::make_record("geometric-substitution", {"1;1", "e;0"}, {0.0, 1.0}, r, tol));
    }
    return rec;
}

std::vector<fs::CheckRecord> run_group(const fs::SignatureEngine& eng, const Opts& o,
                                       double tol) {
    std::vector<fs::CheckRecord> rec;
    fs::SplitMix64 rng(o.seed);
    const int d = eng.path().d;
    for (const fs::LevelledForest& f : fs::enumerate_forests(o.max_vertices, o.max_trees)) {
        const fs::Tensor coeff = draw_coeff(d, f.leaves(), rng);
        const double r = fs::check_fc_group_law(eng, f, coeff, 0.0, 0.4, 1.0);
        rec.push_back(
            fs::make_record("group-law", {fs::to_string(f)}, {0.0, 0.4, 1.0}, r, tol));
    }
    return rec;
}

std::vector<fs::CheckRecord> run_simplicial(const fs::SignatureEngine& eng, const Opts& o,
                                            double tol) {
    std::vector<fs::CheckRecord> rec;
    fs::SplitMix64 rng(o.seed);
    const int d = eng.path().d;
    for (const fs::LevelledForest& f : fs::enumerate_forests(o.max_vertices, o.max_trees)) {
        const int gaps = f.num_trees() - 1;
        if (gaps < 1) continue;
        const auto word = draw_args(d, f.leaves(), rng);
        for (int mask = 1; mask < (1 << gaps); ++mask) {
            std::vector<int> is;
            for (int i = 1; i <= gaps; ++i)
                if (mask & (1 << (i - 1))) is.push_back(i);
            const auto xs = draw_args(d, static_cast<int>(is.size()), rng);
            const double r = fs::check_simplicial(eng, f, word, is, xs, 0.0, 1.0);
            fs::LevelledForest glued = f;
            for (int j = static_cast<int>(is.size()) - 1; j >= 0; --j)
                glued = fs::glue_at(glued, is[j]);
            rec.push_back(fs::make_record(
                "simplicial", {fs::to_string(f), fs::to_string(glued)}, {0.0, 1.0}, r, tol));
        }
    }
    return rec;
}

std::vector<fs::CheckRecord> run_intertwine(const fs::SignatureEngine& eng, const Opts& o,
                                            double tol) {
    std::vector<fs::CheckRecord> rec;
    fs::SplitMix64 rng(o.seed);
    const int d = eng.path().d;
    for (int n = 1; n <= o.max_vertices; ++n)
        for (const fs::LevelledForest& tree : fs::forests_sized(n, 1)) {
            const auto word = draw_args(d, tree.leaves(), rng);
            const double r = fs::check_intertwining(eng, word, tree, 0.0, 1.0);
            rec.push_back(
                fs::make_record("intertwine", {fs::to_string(tree)}, {0.0, 1.0}, r, tol));
        }
    // the action also respects the shuffle of contraction operators
    for (const char* sa : {"e;0", "1;1"})
        for (const char* sb : {"e;0", "1;1", "21;2"}) {
            const fs::LevelledForest ta = fs::parse_forest(sa);
            const fs::LevelledForest tb = fs::parse_forest(sb);
            const fs::FacesContraction ma = fs::sharp(draw_args(d, ta.leaves(), rng), ta);
            const fs::FacesContraction mb = fs::sharp(draw_args(d, tb.leaves(), rng), tb);
            const double r = fs::check_fc_morphism(eng, ma, mb, 0.0, 1.0);
            rec.push_back(fs::make_record("shuffle-morphism", {sa, sb}, {0.0, 1.0}, r, tol));
        }
    return rec;
}

std::vector<fs::CheckRecord> run_exchange(const fs::SignatureEngine& eng, const Opts& o,
                                          double tol) {
    std::vector<fs::CheckRecord> rec;
    fs::SplitMix64 rng(o.seed);
    const int d = eng.path().d;
    const fs::SignatureEngine eng2(
        fs::random_polynomial_path(d, 3, o.seed + 1, eng.grid(), false));
    const fs::FacesGroupElement x = fs::signature_element(eng, 0.0, 1.0);
    const fs::FacesGroupElement y = fs::signature_element(eng2, 0.0, 1.0);
    const fs::FacesGroupElement c = fs::c_element(d, draw_args(d, 1, rng));

    for (int nf = 0; nf <= 2; ++nf)
        for (int mf = 1; mf <= 2; ++mf)
            for (const fs::LevelledForest& f : fs::forests_sized(nf, mf))
                for (int nq = nf == 0 ? 1 : 0; nf + nq <= o.max_vertices; ++nq)
                    for (const fs::LevelledForest& fp : fs::forests_sized(nq, f.leaves())) {
                        const fs::Tensor coeff = draw_coeff(d, fp.leaves(), rng);
                        const double r = fs::exchange_residual(x, y, f, fp, coeff);
                        rec.push_back(fs::make_record(
                            "exchange", {fs::to_string(f), fs::to_string(fp)}, {0.0, 1.0}, r,
                            tol));
                        if (nq == 1) {
                            const double rc = fs::exchange_residual(x, c, f, fp, coeff);
                            rec.push_back(fs::make_record(
                                "exchange-c", {fs::to_string(f), fs::to_string(fp)},
                                {0.0, 1.0}, rc, tol));
                        }
                    }
    return rec;
}

std::vector<fs::CheckRecord> run_selfadjoint(const fs::SignatureEngine& eng, const Opts& o,
                                             double tol) {
    if (!eng.path().self_adjoint)
        throw std::runtime_error("selfadjoint needs a path spec with self_adjoint=true");
    std::vector<fs::CheckRecord> rec;
    fs::SplitMix64 rng(o.seed);
    const int d = eng.path().d;
    const fs::FacesGroupElement x = fs::signature_element(eng, 0.0, 1.0);
    for (const fs::LevelledForest& f : fs::enumerate_forests(o.max_vertices, o.max_trees)) {
        const fs::Tensor coeff = draw_coeff(d, f.leaves(), rng);
        const double r = fs::theta_conjugate_residual(x, f, coeff);
        rec.push_back(
            fs::make_record("theta-selfadjoint", {fs::to_string(f)}, {0.0, 1.0}, r, tol));
    }
    return rec;
}

int emit_report(const std::vector<fs::CheckRecord>& records, const std::string& out_file) {
    const std::string text = fs::render_report(records);
    std::cout << text;
    if (!out_file.empty()) {
        std::ofstream out(out_file);
        if (!out) throw std::runtime_error("cannot write report to '" + out_file + "'");
        out << text;
    }
    return fs::all_pass(records) ? 0 : 1;
}

int run_forest(const CLI::App& cmd, const Opts& o) {
    const fs::LevelledForest f = fs::parse_forest(o.literal);
    if (cmd.got_subcommand("parse")) {
        std::cout << fs::to_string(f) << "\n";
    } else if (cmd.got_subcommand("render")) {
        std::cout << fs::render_ascii(f);
    } else if (cmd.got_subcommand("split")) {
        const auto cut = fs::horizontal_split(f, o.level);
        std::cout << fs::Json{{"lower", fs::to_string(cut.first)},
                              {"upper", fs::to_string(cut.second)}}
                         .dump()
                  << "\n";
    } else if (cmd.got_subcommand("glue")) {
        std::cout << fs::to_string(fs::glue_at(f, o.at)) << "\n";
    } else if (cmd.got_subcommand("sub")) {
        fs::Json out = fs::Json::array();
        for (const fs::LevelledForest& g : fs::subforests(f)) out.push_back(fs::to_string(g));
        std::cout << out.dump() << "\n";
    } else if (cmd.got_subcommand("theta")) {
        std::cout << fs::to_string(fs::theta(f)) << "\n";
    } else {  // star
        std::cout << fs::to_string(fs::vstar(f)) << "\n";
    }
    return 0;
}

int run_hopf(const CLI::App& cmd, const Opts& o) {
    if (cmd.got_subcommand("check")) {
        const auto results = fs::check_hopf_axioms(o.max_vertices, o.max_trees);
        const std::string text = fs::render_axiom_report(results);
        std::cout << text;
        if (!o.out_file.empty()) {
            std::ofstream out(o.out_file);
            if (!out) throw std::runtime_error("cannot write report to '" + o.out_file + "'");
            out << text;
        }
        for (const fs::AxiomResult& r : results)
            if (!r.pass) return 1;
        return 0;
    }
    const fs::LevelledForest f = fs::parse_forest(o.literal);
    if (cmd.got_subcommand("coproduct")) {
        std::cout << fs::forest_pair_vector_to_json(fs::coproduct(f)).dump() << "\n";
    } else if (cmd.got_subcommand("product")) {
        const fs::LevelledForest g = fs::parse_forest(o.other);
        std::cout << fs::forest_vector_to_json(fs::product(f, g)).dump() << "\n";
    } else {  // antipode
        std::cout << fs::forest_vector_to_json(fs::antipode(f)).dump() << "\n";
    }
    return 0;
}

int run_verify(const CLI::App& cmd, const Opts& o) {
    if (o.max_vertices > fs::max_vertices() || o.max_trees > fs::max_trees())
        throw std::runtime_error("bounds exceed the engine caps (raise FORESTSIG_MAX_VERTICES "
                                 "/ FORESTSIG_MAX_TREES)");
    const fs::SignatureEngine eng(load_path(o.path_file));

    struct Driver {
        const char* name;
        double default_tol;
        std::vector<fs::CheckRecord> (*fn)(const fs::SignatureEngine&, const Opts&, double);
    };
    static const Driver drivers[] = {
        {"chen", 1e-6, run_chen},           {"shuffle", 1e-6, run_shuffle},
        {"geometric", 1e-6, run_geometric}, {"group", 1e-6, run_group},
        {"simplicial", 1e-12, run_simplicial}, {"intertwine", 1e-6, run_intertwine},
        {"exchange", 1e-12, run_exchange},  {"selfadjoint", 1e-8, run_selfadjoint},
    };
    for (const Driver& dr : drivers)
        if (cmd.got_subcommand(dr.name)) {
            const double tol = o.tol > 0.0 ? o.tol : dr.default_tol;
            return emit_report(dr.fn(eng, o, tol), o.out_file);
        }
    throw std::logic_error("verify: no driver matched");
}

}  // namespace

int main(int argc, char** argv) {
    Opts o;
    CLI::App app{"levelled-forest signatures: forest surgery, Hopf operations, and "
                 "numeric identity checks"};
    app.require_subcommand(1);

    CLI::App* forest = app.add_subcommand("forest", "parse and transform forest literals");
    forest->require_subcommand(1);
    for (const char* name : {"parse", "render", "split", "glue", "sub", "theta", "star"}) {
        CLI::App* sub = forest->add_subcommand(name, "");
        sub->add_option("literal", o.literal, "forest literal, e.g. \"213;2,1\"")->required();
        if (std::string(name) == "split")
            sub->add_option("--level", o.level, "keep generations <= level in the lower part")
                ->required();
        if (std::string(name) == "glue")
            sub->add_option("--at", o.at, "merge trees at this boundary (1-based)")
                ->required();
    }

    CLI::App* hopf = app.add_subcommand("hopf", "exact Hopf-algebra operations");
    hopf->require_subcommand(1);
    for (const char* name : {"coproduct", "product", "antipode"}) {
        CLI::App* sub = hopf->add_subcommand(name, "");
        sub->add_option("literal", o.literal, "forest literal")->required();
        if (std::string(name) == "product")
            sub->add_option("other", o.other, "second forest literal")->required();
    }
    {
        CLI::App* sub = hopf->add_subcommand("check", "run the exact axiom suite");
        sub->add_option("--max-vertices", o.max_vertices, "vertex bound (default 3)")
            ->check(CLI::NonNegativeNumber);
        sub->add_option("--max-trees", o.max_trees, "tree bound (default 3)")
            ->check(CLI::PositiveNumber);
        sub->add_option("--out", o.out_file, "also write the report to this file");
    }

    CLI::App* verify = app.add_subcommand("verify", "numeric identity suites over a path");
    verify->require_subcommand(1);
    for (const char* name : {"chen", "shuffle", "geometric", "group", "simplicial",
                             "intertwine", "exchange", "selfadjoint"}) {
        CLI::App* sub = verify->add_subcommand(name, "");
        sub->add_option("--path", o.path_file, "path spec JSON (default: built-in profile)");
        sub->add_option("--tol", o.tol, "residual tolerance (default per identity)")
            ->check(CLI::PositiveNumber);
        sub->add_option("--seed", o.seed, "seed for random words and arguments");
        sub->add_option("--max-vertices", o.max_vertices, "vertex bound (default 3)")
            ->check(CLI::NonNegativeNumber);
        sub->add_option("--max-trees", o.max_trees, "tree bound (default 3)")
            ->check(CLI::PositiveNumber);
        sub->add_option("--out", o.out_file, "also write the report to this file");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(forest)) return run_forest(*forest, o);
        if (app.got_subcommand(hopf)) return run_hopf(*hopf, o);
        return run_verify(*verify, o);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
