#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "siegel/acceptance.hpp"
#include "siegel/eisenstein.hpp"
#include "siegel/euler.hpp"
#include "siegel/fppoly.hpp"
#include "siegel/genus.hpp"
#include "siegel/pipeline.hpp"
#include "siegel/store.hpp"

using namespace siegel;
using nlohmann::json;

namespace {

constexpr int kExitOther = 1;
constexpr int kExitUsage = 2;
constexpr int kExitConsistency = 3;

struct Config {
    int n = 0;
    int k = 0;
    long p = 2;
    std::vector<std::string> matrix;
    std::string symbol;
    std::string det;
    int rank = -1;
    std::string cache;
    int workers = 1;
    std::string format = "json";
    int dim = -1;
    std::string kind = "standard";
    std::string checkpoint;
    int slices = 16;
    int max_slices = -1;
};

void progress(const std::string& msg) { std::cerr << "[siegel] " << msg << std::endl; }

std::string trim(const std::string& s) {
    auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

// FILE, "-" for standard input, or a literal such as [[2,1],[1,2]].
IntMatrix read_matrix(const std::string& arg) {
    std::string text;
    if (arg == "-") {
        std::stringstream ss;
        ss << std::cin.rdbuf();
        text = ss.str();
    } else if (!arg.empty() && arg[0] != '[' && std::filesystem::is_regular_file(arg)) {
        std::ifstream in(arg);
        std::stringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    } else {
        text = arg;
    }
    text = trim(text);
    if (text.empty()) throw UsageError("empty matrix input");
    IntMatrix m = parse_int_matrix(text);
    if (m.rows() != m.cols()) throw UsageError("matrix must be square");
    for (int i = 0; i < m.rows(); ++i) {
        if (m(i, i) % 2 != 0) throw UsageError("2t must have an even diagonal");
        for (int j = 0; j < i; ++j)
            if (m(i, j) != m(j, i)) throw UsageError("matrix must be symmetric");
    }
    return m;
}

SemiIntegralIndex read_index(const std::string& arg) {
    auto t = SemiIntegralIndex::from_2t(read_matrix(arg));
    if (!is_psd(t)) throw UsageError("index must be positive semidefinite");
    return t;
}

json rat_json(const BigRat& x) { return to_string(x); }

json nf_json(const NFElem& x) {
    json coords = json::array();
    QPoly rep = x.rep();
    if (rep.degree() < 0) coords.push_back("0");
    for (int i = 0; i <= rep.degree(); ++i) coords.push_back(to_string(rep.coeff(i)));
    return coords;
}

json poly_json(const QPoly& f) {
    json out = json::array();
    for (int i = 0; i <= f.degree(); ++i) out.push_back(to_string(f.coeff(i)));
    return out;
}

json field_json(const FieldPtr& f) {
    if (!f) return nullptr;
    return {{"modulus", poly_json(f->modulus())}, {"text", f->modulus().str("a")}};
}

void check_weight(const Config& c, int max_n) {
    if (c.n < 1 || c.n > max_n) throw UsageError("--n must be between 1 and " + std::to_string(max_n));
    if (c.k % 2 != 0 || c.k <= 2 * c.n + 1) throw UsageError("--k must be even and greater than 2n + 1");
}

void check_prime(const Config& c) {
    if (!is_prime(c.p)) throw UsageError("--p must be prime");
}

std::unique_ptr<Store> open_store(const Config& c) {
    std::string dir = c.cache;
    if (dir.empty()) {
        if (const char* env = std::getenv("SIEGEL_CACHE")) dir = env;
    }
    if (dir.empty()) return nullptr;
    auto s = std::make_unique<Store>(dir);
    s->seed_memos();
    return s;
}

void close_store(Store* s) {
    if (!s) return;
    s->absorb_memos();
    s->flush();
    auto st = s->stats();
    progress("cache " + s->dir().string() + ": " + std::to_string(s->size()) + " entries, " + std::to_string(st.hits) +
             " hits, " + std::to_string(st.misses) + " misses");
}

EnumOptions enum_options(const Config& c) {
    if (c.workers < 1) throw UsageError("--workers must be positive");
    EnumOptions o;
    o.workers = c.workers;
    return o;
}

void emit(const Config& c, const json& j, const std::string& text) {
    if (c.format == "json")
        std::cout << j.dump(2) << std::endl;
    else
        std::cout << text;
}

GenusSymbol symbol_input(const Config& c) {
    if (!c.matrix.empty()) {
        auto m = read_matrix(c.matrix[0]);
        if (!is_positive_definite(m)) throw UsageError("genus symbols need a positive definite 2t");
        return genus_symbol(m);
    }
    if (c.symbol.empty() || c.det.empty() || c.rank < 1) throw UsageError("give --matrix, or --symbol with --det and --rank");
    return parse_symbol(c.symbol, BigInt(c.det), c.rank);
}

int cmd_genus(const Config& c) {
    if (c.matrix.size() != 1) throw UsageError("genus needs one --matrix");
    auto m = read_matrix(c.matrix[0]);
    if (!is_positive_definite(m)) throw UsageError("genus symbols need a positive definite 2t");
    auto s = genus_symbol(m);
    json j{{"symbol", format_symbol(s)}, {"symbol_full", format_symbol_full(s)}, {"det2t", s.det2t.get_str()},
           {"rank", s.rank}, {"key", genus_key(s)}};
    emit(c, j, format_symbol(s) + "\n");
    return 0;
}

int cmd_fp(const Config& c) {
    auto s = symbol_input(c);
    auto store = open_store(c);
    json list = json::array();
    std::string text;
    for (long p : s.primes()) {
        auto r = fp_polynomial(s, p);
        if (store) check_consistency(store->fp_polynomial(s, p) == r.poly, "cached F_" + std::to_string(p) + " differs");
        list.push_back({{"p", p}, {"coefficients", poly_json(r.poly)}, {"degree", r.e_p}, {"sign", r.sign}});
        text += "F_" + std::to_string(p) + " = " + r.poly.str("X") + "\n";
    }
    close_store(store.get());
    emit(c, json{{"symbol", format_symbol(s)}, {"det2t", s.det2t.get_str()}, {"rank", s.rank}, {"F", list}}, text);
    return 0;
}

int cmd_eiscoef(const Config& c) {
    if (c.k % 2 != 0) throw UsageError("--k must be even");
    auto store = open_store(c);
    BigRat value;
    json j{{"k", c.k}};
    if (!c.matrix.empty()) {
        auto t = read_index(c.matrix[0]);
        if (c.k <= t.n() + 1) throw UsageError("weight must exceed degree + 1");
        j["matrix"] = t.str();
        if (store) {
            auto split = rank_split(t);
            value = split.m == 0 ? store->eis_coefficient(GenusSymbol{}, c.k)
                                 : store->eis_coefficient(genus_symbol(split.u.two_t()), c.k);
        } else {
            value = eis_coefficient(t, c.k);
        }
    } else {
        auto s = symbol_input(c);
        if (c.k <= s.rank + 1) throw UsageError("weight must exceed rank + 1");
        j["symbol"] = format_symbol(s);
        value = store ? store->eis_coefficient(s, c.k) : eis_coefficient_definite(s, c.k);
    }
    close_store(store.get());
    j["value"] = rat_json(value);
    emit(c, j, to_string(value) + "\n");
    return 0;
}

int cmd_pullback(const Config& c) {
    if (c.matrix.size() != 2) throw UsageError("pullback needs two --matrix values");
    auto t1 = read_index(c.matrix[0]), t2 = read_index(c.matrix[1]);
    if (t1.n() != t2.n()) throw UsageError("indices must have the same degree");
    int n = t1.n();
    if (c.k % 2 != 0 || c.k <= 2 * n + 1) throw UsageError("--k must be even and greater than 2n + 1");
    auto opt = enum_options(c);
    auto store = open_store(c);
    json j{{"t1", t1.str()}, {"t2", t2.str()}, {"k", c.k}};
    std::string text;
    if (!c.checkpoint.empty()) {
        if (!store) throw UsageError("--checkpoint needs --cache or SIEGEL_CACHE");
        progress("resumable run " + c.checkpoint + " over " + std::to_string(c.slices) + " slices");
        auto r = run_resumable(*store, c.checkpoint, t1, t2, c.k, c.slices, opt, c.max_slices);
        j["count"] = r.count;
        j["slices_done"] = r.slices_done;
        j["slices"] = r.slices;
        j["complete"] = r.complete();
        if (r.complete()) j["value"] = rat_json(r.value);
        text = r.complete() ? to_string(r.value) + "\n"
                            : "partial: " + std::to_string(r.slices_done) + "/" + std::to_string(r.slices) + " slices\n";
    } else {
        progress("enumerating R(t1 x t2)");
        BigRat v = store ? store->pullback(t1, t2, c.k, opt) : pullback_coefficient(t1, t2, c.k, opt);
        j["count"] = count_R(t1, t2, opt);
        j["value"] = rat_json(v);
        text = to_string(v) + "\n";
    }
    close_store(store.get());
    emit(c, j, text);
    return 0;
}

SpaceResult space_for(const Config& c) {
    check_weight(c, 3);
    SpaceOptions so;
    so.known_dim = c.dim;
    so.enumeration = enum_options(c);
    progress("growing the pullback Gram matrix for n = " + std::to_string(c.n) + ", k = " + std::to_string(c.k));
    auto sp = compute_space(c.n, c.k, so);
    progress("rank " + std::to_string(sp.bases.dim_M) + " on " + std::to_string(sp.growth.pm.T.size()) + " indices");
    return sp;
}

json truncated_json(const TruncatedForm& f) {
    json vals = json::array();
    for (auto& v : f.values) vals.push_back(nf_json(v));
    return vals;
}

json pullback_form_json(const PullbackForm& f) {
    json cols = json::array();
    for (std::size_t i = 0; i < f.columns.size(); ++i)
        if (f.weights[i] != 0) cols.push_back({{"t", f.columns[i].str()}, {"weight", rat_json(f.weights[i])}});
    return cols;
}

int cmd_basis(const Config& c) {
    auto store = open_store(c);
    auto sp = space_for(c);
    close_store(store.get());
    const auto& b = sp.bases;
    json T = json::array();
    for (auto& t : sp.growth.pm.T) T.push_back(t.str());
    json full = json::array(), cusp = json::array();
    for (std::size_t i = 0; i < b.full.size(); ++i)
        full.push_back({{"values", truncated_json(b.full[i])}, {"columns", pullback_form_json(b.full_forms[i])}});
    for (std::size_t i = 0; i < b.cusp.size(); ++i)
        cusp.push_back({{"values", truncated_json(b.cusp[i])}, {"columns", pullback_form_json(b.cusp_forms[i])}});
    json j{{"n", c.n},          {"k", c.k},         {"dim_M", b.dim_M},
           {"dim_S", b.dim_S},  {"T", T},           {"rank_history", sp.growth.rank_history},
           {"singular", sp.growth.pm.singular_count()}, {"full_basis", full}, {"cusp_basis", cusp}};
    std::ostringstream os;
    os << "dim M_" << c.k << "(Gamma_" << c.n << ") = " << b.dim_M << "\ndim S_" << c.k << "(Gamma_" << c.n
       << ") = " << b.dim_S << "\n";
    emit(c, j, os.str());
    return 0;
}

std::vector<HeckeEigenData> eigen_for(const Config& c, const SpaceResult& sp, bool squares) {
    check_prime(c);
    progress("Hecke operators at p = " + std::to_string(c.p));
    return cusp_eigenforms(sp, c.p, squares);
}

int cmd_eigen(const Config& c) {
    auto store = open_store(c);
    auto sp = space_for(c);
    auto eig = eigen_for(c, sp, true);
    close_store(store.get());
    json forms = json::array();
    std::ostringstream os;
    for (auto& e : eig) {
        json t2 = json::array();
        for (auto& l : e.lambda_T2) t2.push_back(nf_json(l));
        forms.push_back({{"field", field_json(e.field)}, {"lambda_T", nf_json(e.lambda_T)}, {"lambda_Ti", t2},
                         {"multiplicity", e.multiplicity}});
        os << "lambda(T(" << c.p << ")) = " << e.lambda_T << "\n";
        for (std::size_t i = 0; i < e.lambda_T2.size(); ++i)
            os << "  lambda(T_" << i << "(" << c.p << "^2)) = " << e.lambda_T2[i] << "\n";
    }
    emit(c, json{{"n", c.n}, {"k", c.k}, {"p", c.p}, {"dim_S", sp.bases.dim_S}, {"eigenforms", forms}}, os.str());
    return 0;
}

int cmd_euler(const Config& c) {
    if (c.kind != "standard" && c.kind != "spinor") throw UsageError("--kind must be standard or spinor");
    if (c.kind == "spinor" && c.n != 3) throw UsageError("spinor factors are implemented for n = 3");
    if (c.n < 2) throw UsageError("Euler factors from T_i(p^2) need n >= 2");
    auto store = open_store(c);
    auto sp = space_for(c);
    auto eig = eigen_for(c, sp, true);
    close_store(store.get());
    json forms = json::array();
    std::ostringstream os;
    for (auto& e : eig) {
        auto lam = lambda_vector(e);
        EulerFactor f = c.kind == "standard" ? standard_factor(lam, c.n, c.k, c.p)
                                             : spinor_factor_deg3(e.lambda_T, g_vector(lam, c.n, c.p), c.p);
        json coeffs = json::array();
        for (auto& x : f.coeffs) coeffs.push_back(nf_json(x));
        forms.push_back({{"field", field_json(e.field)}, {"coefficients", coeffs}});
        os << nfpoly_str(f.coeffs) << "\n";
    }
    emit(c, json{{"n", c.n}, {"k", c.k}, {"p", c.p}, {"kind", c.kind}, {"factors", forms}}, os.str());
    return 0;
}

int cmd_congruence(const Config& c) {
    auto store = open_store(c);
    auto sp = space_for(c);
    check_prime(c);
    progress("eigenforms of the full space at p = " + std::to_string(c.p));
    auto eig = full_eigenforms(sp, c.p);
    auto trunc = eigen_truncations(eig, sp.growth.pm);
    progress("solving for the constants c");
    auto cs = solve_c(trunc, sp.growth.pm);
    std::vector<BigInt> skipped;
    auto hits = congruence_scan(cs, c.k, &skipped);
    close_store(store.get());
    json forms = json::array();
    for (std::size_t i = 0; i < eig.size(); ++i)
        forms.push_back({{"field", field_json(eig[i].field)}, {"lambda_T", nf_json(eig[i].lambda_T)},
                         {"c", nf_json(cs[i])}, {"values", truncated_json(trunc[i])}});
    json report = json::array();
    std::ostringstream os;
    for (auto& h : hits) {
        json neg = json::array();
        for (auto& e : h.negative)
            neg.push_back({{"form", e.form}, {"ideal", e.ideal}, {"residue_degree", e.residue_degree}, {"valuation", e.valuation}});
        report.push_back({{"p", h.p}, {"pattern", h.pattern}, {"unsupported", h.unsupported}, {"negative", neg}});
        os << "p = " << h.p << (h.pattern ? "  congruence-neighbor pattern" : "") << (h.unsupported ? "  (unsupported)" : "")
           << "\n";
    }
    if (hits.empty()) os << "no big primes in the denominators of c\n";
    json rest = json::array();
    for (auto& u : skipped) {
        rest.push_back(u.get_str());
        os << "not analyzed: denominator part " << u.get_str() << "\n";
    }
    json T = json::array();
    for (auto& t : sp.growth.pm.T) T.push_back(t.str());
    emit(c,
         json{{"n", c.n},
              {"k", c.k},
              {"normalization", "first nonzero coefficient in T-order is 1"},
              {"T", T},
              {"eigenforms", forms},
              {"primes", report},
              {"skipped", rest}},
         os.str());
    return 0;
}

int cmd_selftest(const Config& c) {
    std::vector<Criterion> fast;
    for (auto& cr : acceptance_criteria())
        if (cr.fast) fast.push_back(cr);
    std::vector<CriterionResult> results;
    int failures = 0;
    json list = json::array();
    for (auto& cr : fast) {
        progress("criterion " + std::to_string(cr.id) + ": " + cr.name);
        auto r = run_criterion(cr);
        if (!r.pass) ++failures;
        if (c.format == "text") std::cout << format_result(r) << std::endl;
        list.push_back({{"criterion", r.id}, {"name", r.name}, {"pass", r.pass}, {"seconds", r.seconds}, {"detail", r.detail}});
    }
    if (c.format == "json") std::cout << json{{"results", list}, {"failures", failures}}.dump(2) << std::endl;
    if (failures > 0) throw ConsistencyError(std::to_string(failures) + " selftest criteria failed");
    return 0;
}

int report_error(const char* kind, const std::string& msg, int code) {
    std::cerr << json{{"error", kind}, {"message", msg}, {"exit_code", code}}.dump() << std::endl;
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Siegel modular forms of degree <= 3: genus symbols, F_p polynomials, Eisenstein coefficients, "
                 "pullback bases, Hecke eigenvalues and Euler factors"};
    app.require_subcommand(1);
    Config cfg;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--cache", cfg.cache, "cache directory (default: $SIEGEL_CACHE, else no cache)");
        sub->add_option("--workers", cfg.workers, "worker threads for enumeration");
        sub->add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"json", "text"}));
    };
    auto add_matrix = [&](CLI::App* sub, int count) {
        std::string help = "2t as FILE, - (stdin) or a literal like [[2,1],[1,2]]";
        if (count > 1) help += "; repeat for each index";
        auto o = sub->add_option("--matrix", cfg.matrix, help);
        o->allow_extra_args(false);
        o->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    };
    auto add_symbol = [&](CLI::App* sub) {
        sub->add_option("--symbol", cfg.symbol, "genus symbol text, e.g. \"4^{-2}_4 3^{-1}\"");
        sub->add_option("--det", cfg.det, "det(2t) for --symbol");
        sub->add_option("--rank", cfg.rank, "rank for --symbol");
    };
    auto add_space = [&](CLI::App* sub) {
        sub->add_option("--n", cfg.n, "degree")->required();
        sub->add_option("--k", cfg.k, "weight")->required();
        sub->add_option("--dim", cfg.dim, "known dim M_k (-1: built-in table, 0: rank stabilization only)");
    };

    auto* genus = app.add_subcommand("genus", "genus symbol of a positive definite 2t");
    add_matrix(genus, 1);
    add_common(genus);
    auto* fp = app.add_subcommand("fp", "F_p polynomials for p | 2 det(2t)");
    add_matrix(fp, 1);
    add_symbol(fp);
    add_common(fp);
    auto* eis = app.add_subcommand("eiscoef", "Siegel Eisenstein Fourier coefficient");
    eis->add_option("--k", cfg.k, "weight")->required();
    add_matrix(eis, 1);
    add_symbol(eis);
    add_common(eis);
    auto* pb = app.add_subcommand("pullback", "pullback coefficient sum over R(t1 x t2)");
    pb->add_option("--k", cfg.k, "weight")->required();
    add_matrix(pb, 2);
    pb->add_option("--checkpoint", cfg.checkpoint, "name of a resumable run stored under the cache");
    pb->add_option("--slices", cfg.slices, "slices for --checkpoint");
    pb->add_option("--max-slices", cfg.max_slices, "stop after this many new slices");
    add_common(pb);
    auto* basis = app.add_subcommand("basis", "dimensions and truncated bases");
    add_space(basis);
    add_common(basis);
    auto* eigen = app.add_subcommand("eigen", "Hecke eigenvalues of the cusp eigenforms");
    add_space(eigen);
    eigen->add_option("--p", cfg.p, "prime");
    add_common(eigen);
    auto* euler = app.add_subcommand("euler", "standard or spinor p-Euler factors");
    add_space(euler);
    euler->add_option("--p", cfg.p, "prime");
    euler->add_option("--kind", cfg.kind, "standard | spinor")->check(CLI::IsMember({"standard", "spinor"}));
    add_common(euler);
    auto* cong = app.add_subcommand("congruence", "constants c of the pullback decomposition and big primes");
    add_space(cong);
    cong->add_option("--p", cfg.p, "prime for the Hecke decomposition");
    add_common(cong);
    auto* self = app.add_subcommand("selftest", "fast tier of the acceptance checks");
    self->add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"json", "text"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return report_error("usage", e.what(), kExitUsage);
    }

    try {
        if (*genus) return cmd_genus(cfg);
        if (*fp) return cmd_fp(cfg);
        if (*eis) return cmd_eiscoef(cfg);
        if (*pb) return cmd_pullback(cfg);
        if (*basis) return cmd_basis(cfg);
        if (*eigen) return cmd_eigen(cfg);
        if (*euler) return cmd_euler(cfg);
        if (*cong) return cmd_congruence(cfg);
        if (*self) return cmd_selftest(cfg);
    } catch (const UsageError& e) {
        return report_error("usage", e.what(), kExitUsage);
    } catch (const ConsistencyError& e) {
        return report_error("consistency", e.what(), kExitConsistency);
    } catch (const std::exception& e) {
        return report_error("internal", e.what(), kExitOther);
    }
    return kExitOther;
}
