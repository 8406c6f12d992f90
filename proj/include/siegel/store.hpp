#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <string>

#include "siegel/arith.hpp"
#include "siegel/genus.hpp"
#include "siegel/poly.hpp"
#include "siegel/pullback.hpp"

namespace siegel {

constexpr int kStoreVersion = 1;

// Persistent cache: an append-only log of tab-separated records plus an index
// of record offsets. Keys are (kind, key) pairs; values are canonical text.
//
//   store.log    "V<TAB>kind<TAB>key<TAB>value<TAB>note" and "M<TAB>kind<TAB>key<TAB>hits"
//   index.tsv    "kind<TAB>key<TAB>offset<TAB>hits", headed by the log size it describes
class Store {
public:
    struct Options {
        double audit_rate = 0.0;  // fraction of warm hits recomputed and compared
        std::uint64_t seed = 1;
    };
    struct Stats {
        std::uint64_t hits = 0;
        std::uint64_t misses = 0;
        std::uint64_t audits = 0;
    };

    explicit Store(std::filesystem::path dir);
    Store(std::filesystem::path dir, Options opt);
    ~Store();
    Store(const Store&) = delete;
    Store& operator=(const Store&) = delete;

    // SIEGEL_CACHE if set, else ./siegel-cache
    static std::filesystem::path default_dir();

    const std::filesystem::path& dir() const { return dir_; }

    // Cached value, or compute(), store and return it. `hits` is added to the
    // key's multiplicity either way. Audits call `recompute` (default: compute).
    std::string get_or_compute(const std::string& kind, const std::string& key,
                               const std::function<std::string()>& compute, std::uint64_t hits = 1,
                               const std::string& note = "", const std::function<std::string()>& recompute = {});
    std::optional<std::string> lookup(const std::string& kind, const std::string& key) const;
    std::uint64_t multiplicity(const std::string& kind, const std::string& key) const;
    std::size_t size() const;
    Stats stats() const;

    // Typed entries.
    BigRat eis_coefficient(const GenusSymbol& s, int k, std::uint64_t hits = 1);
    QPoly fp_polynomial(const GenusSymbol& s, long p);
    // Pullback sum through the genus tally; every genus coefficient goes
    // through the store with its multiplicity.
    BigRat pullback(const SemiIntegralIndex& t1, const SemiIntegralIndex& t2, int k, const EnumOptions& opt = {});

    // Push stored Eisenstein and pullback values into the in-process memos.
    void seed_memos() const;
    // Record everything the in-process memos hold (values only, no hits).
    void absorb_memos();

    // Writes pending multiplicities to the log and rewrites the index.
    void flush();

private:
    struct Entry {
        std::uint64_t offset = 0;
        std::uint64_t hits = 0;
        std::uint64_t pending = 0;
        std::optional<std::string> value;
    };
    using Key = std::pair<std::string, std::string>;

    void open();
    void rebuild_index();
    bool load_index();
    std::string read_value(const Entry& e) const;
    void append_value(const std::string& kind, const std::string& key, const std::string& value,
                      const std::string& note);
    bool audit_pick();

    std::filesystem::path dir_;
    Options opt_;
    mutable std::mutex mu_;
    std::map<Key, Entry> entries_;
    std::ofstream log_;
    std::uint64_t log_size_ = 0;
    std::mt19937_64 rng_;
    Stats stats_;
};

std::string rat_to_text(const BigRat& v);
BigRat rat_from_text(const std::string& s);

// Enumeration runs split into deterministic slices of the outermost loop;
// each finished slice is appended to a checkpoint file under dir/checkpoints.
struct RunResult {
    std::uint64_t count = 0;
    BigRat value = 0;  // pullback sum when k > 0
    int slices_done = 0;
    int slices = 0;
    bool complete() const { return slices_done == slices; }
};
// k = 0 counts R(t1 x t2) only. At most max_new slices are processed per call
// (negative: all); a later call with the same name resumes.
RunResult run_resumable(Store& store, const std::string& name, const SemiIntegralIndex& t1,
                        const SemiIntegralIndex& t2, int k, int slices, const EnumOptions& opt = {},
                        int max_new = -1);

}  // namespace siegel
