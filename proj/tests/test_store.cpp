#include "doctest.h"

#include <fstream>

#include "siegel/eisenstein.hpp"
#include "siegel/fppoly.hpp"
#include "siegel/store.hpp"

using namespace siegel;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    fs::path d = fs::temp_directory_path() / ("siegel-store-test-" + name);
    fs::remove_all(d);
    return d;
}

SemiIntegralIndex idx(const char* s) { return SemiIntegralIndex::parse_2t(s); }

void append_line(const fs::path& file, const std::string& text) {
    std::ofstream out(file, std::ios::app | std::ios::binary);
    out << text;
}

}  // namespace

TEST_CASE("cold and warm keys") {
    auto d = fresh_dir("basic");
    int calls = 0;
    auto compute = [&] {
        ++calls;
        return std::string("42/5");
    };
    {
        Store s(d);
        CHECK(s.get_or_compute("x", "a", compute) == "42/5");
        CHECK(s.get_or_compute("x", "a", compute, 3) == "42/5");
        CHECK(calls == 1);
        CHECK(s.multiplicity("x", "a") == 4);
        CHECK(s.stats().hits == 1);
        CHECK(s.stats().misses == 1);
    }
    {
        Store s(d);
        CHECK(s.lookup("x", "a") == std::optional<std::string>("42/5"));
        CHECK(s.get_or_compute("x", "a", compute) == "42/5");
        CHECK(calls == 1);
        CHECK(s.multiplicity("x", "a") == 5);
    }
    fs::remove(d / "index.tsv");
    {
        Store s(d);
        CHECK(s.multiplicity("x", "a") == 5);
        CHECK(s.size() == 1);
    }
    CHECK_THROWS_AS(Store(d).get_or_compute("x", "tab\tkey", compute), UsageError);
}

TEST_CASE("corruption is fatal") {
    SUBCASE("audit mismatch") {
        auto d = fresh_dir("audit");
        auto g = genus_symbol(parse_int_matrix("[[2,1],[1,2]]"));
        {
            Store s(d);
            s.get_or_compute("eis", eis_key(g, 10), [] { return std::string("7"); });
        }
        Store::Options opt;
        opt.audit_rate = 1.0;
        Store s(d, opt);
        CHECK_THROWS_AS(s.eis_coefficient(g, 10), ConsistencyError);
    }
    SUBCASE("audits pass on honest values") {
        auto d = fresh_dir("audit-ok");
        auto g = genus_symbol(parse_int_matrix("[[2,1],[1,2]]"));
        { Store(d).eis_coefficient(g, 10); }
        Store::Options opt;
        opt.audit_rate = 1.0;
        Store s(d, opt);
        CHECK(s.eis_coefficient(g, 10) == eis_coefficient(idx("[[2,1],[1,2]]"), 10));
        CHECK(s.stats().audits == 1);
    }
    SUBCASE("conflicting records") {
        auto d = fresh_dir("conflict");
        { Store(d).get_or_compute("x", "a", [] { return std::string("1"); }); }
        append_line(d / "store.log", "V\tx\ta\t2\t\n");
        CHECK_THROWS_AS(Store{d}, ConsistencyError);
    }
    SUBCASE("torn tail is dropped") {
        auto d = fresh_dir("torn");
        { Store(d).get_or_compute("x", "a", [] { return std::string("1"); }); }
        append_line(d / "store.log", "V\tx\tb\t3");
        Store s(d);
        CHECK(s.size() == 1);
        s.get_or_compute("x", "c", [] { return std::string("9"); });
        s.flush();
        Store again(d);
        CHECK(again.lookup("x", "c") == std::optional<std::string>("9"));
    }
    SUBCASE("version mismatch") {
        auto d = fresh_dir("version");
        fs::create_directories(d);
        append_line(d / "store.log", "#siegel-store\t99\n");
        CHECK_THROWS_AS(Store{d}, UsageError);
    }
}

TEST_CASE("cache transparency and multiplicities") {
    auto d = fresh_dir("pullback");
    Store s(d);
    std::vector<std::pair<const char*, const char*>> pairs{{"[[2,1],[1,2]]", "[[2,0],[0,2]]"},
                                                          {"[[2,1],[1,2]]", "[[2,1],[1,2]]"},
                                                          {"[[2,0],[0,0]]", "[[4,2],[2,4]]"}};
    for (auto [a, b] : pairs) {
        auto t1 = idx(a), t2 = idx(b);
        auto sum_hits = [&] {
            std::uint64_t total = 0;
            std::ifstream in(d / "index.tsv");
            std::string line;
            std::getline(in, line);
            while (std::getline(in, line))
                if (line.rfind("eis\t", 0) == 0) total += std::stoull(line.substr(line.rfind('\t') + 1));
            return total;
        };
        s.flush();
        std::uint64_t before = sum_hits();
        BigRat v = s.pullback(t1, t2, 10);
        s.flush();
        std::uint64_t after = sum_hits();
        CHECK(v == pullback_coefficient_direct(t1, t2, 10));
        CHECK(after - before == count_R(t1, t2));
    }
    eis_cache_enable(false);
    CHECK(s.pullback(idx("[[2,1],[1,2]]"), idx("[[4,1],[1,2]]"), 12) ==
          pullback_coefficient_direct(idx("[[2,1],[1,2]]"), idx("[[4,1],[1,2]]"), 12));
    eis_cache_enable(true);

    auto g = genus_symbol(parse_int_matrix("[[2,1,0],[1,2,1],[0,1,4]]"));
    CHECK(s.fp_polynomial(g, 2) == fp_polynomial(g, 2).poly);
    CHECK(s.fp_polynomial(g, 2) == fp_polynomial(g, 2).poly);

    pullback_cache_clear();
    s.seed_memos();
    BigRat out;
    CHECK(pullback_cache_get(pullback_key(idx("[[2,1],[1,2]]"), idx("[[2,0],[0,2]]"), 10), out));
    CHECK(out == pullback_coefficient_direct(idx("[[2,1],[1,2]]"), idx("[[2,0],[0,2]]"), 10));
}

TEST_CASE("checkpoint and resume") {
    auto t1 = idx("[[2,1],[1,2]]"), t2 = idx("[[4,2],[2,4]]");
    auto d1 = fresh_dir("ckpt-a");
    auto d2 = fresh_dir("ckpt-b");
    Store whole(d1), parts(d2);
    auto full = run_resumable(whole, "run", t1, t2, 10, 6);
    CHECK(full.complete());
    CHECK(full.count == count_R(t1, t2));
    CHECK(full.value == pullback_coefficient_direct(t1, t2, 10));

    auto half = run_resumable(parts, "run", t1, t2, 10, 6, {}, 3);
    CHECK(!half.complete());
    CHECK(half.slices_done == 3);
    EnumOptions two;
    two.workers = 2;
    auto rest = run_resumable(parts, "run", t1, t2, 10, 6, two);
    CHECK(rest.complete());
    CHECK(rest.count == full.count);
    CHECK(rest.value == full.value);

    // tiny degree-one run, counting only
    auto a = SemiIntegralIndex::parse_2t("[[2]]");
    auto r1 = run_resumable(parts, "tiny", a, a, 0, 2, {}, 1);
    auto r2 = run_resumable(parts, "tiny", a, a, 0, 2);
    CHECK(r1.slices_done == 1);
    CHECK(r2.count == 5);

    CHECK_THROWS_AS(run_resumable(parts, "run", t1, t1, 10, 6), UsageError);
    std::ofstream(d2 / "checkpoints" / "old.ckpt") << "#siegel-checkpoint\t0\n";
    CHECK_THROWS_AS(run_resumable(parts, "old", t1, t2, 10, 6), UsageError);
}
