#include "siegel/store.hpp"

#include <cstdlib>
#include <sstream>
#include <vector>

#include "siegel/eisenstein.hpp"
#include "siegel/fppoly.hpp"

namespace siegel {

namespace fs = std::filesystem;

namespace {

const char* kLogHeader = "#siegel-store";
const char* kIndexHeader = "#siegel-index";
const char* kCheckpointHeader = "#siegel-checkpoint";

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == '\t') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

void check_field(const std::string& s) {
    if (s.find_first_of("\t\n") != std::string::npos) throw UsageError("store fields may not contain tabs or newlines");
}

std::string header_line(const char* tag) { return std::string(tag) + "\t" + std::to_string(kStoreVersion); }

void check_header(const std::string& line, const char* tag, const fs::path& path) {
    auto f = split_tabs(line);
    if (f.size() < 2 || f[0] != tag) throw UsageError("not a store file: " + path.string());
    if (f[1] != std::to_string(kStoreVersion))
        throw UsageError("format version " + f[1] + " of " + path.string() + " is not supported (expected " +
                         std::to_string(kStoreVersion) + ")");
}

}  // namespace

std::string rat_to_text(const BigRat& v) { return v.get_str(); }

BigRat rat_from_text(const std::string& s) {
    BigRat v;
    if (v.set_str(s, 10) != 0) throw ConsistencyError("malformed rational in store: " + s);
    v.canonicalize();
    return v;
}

Store::Store(fs::path dir) : Store(std::move(dir), Options{}) {}

Store::Store(fs::path dir, Options opt) : dir_(std::move(dir)), opt_(opt), rng_(opt.seed) { open(); }

Store::~Store() {
    try {
        flush();
    } catch (...) {
    }
}

fs::path Store::default_dir() {
    if (const char* env = std::getenv("SIEGEL_CACHE"); env && *env) return env;
    return "siegel-cache";
}

void Store::open() {
    fs::create_directories(dir_);
    fs::path log = dir_ / "store.log";
    if (!fs::exists(log)) {
        std::ofstream out(log);
        out << header_line(kLogHeader) << "\n";
    }
    {
        std::ifstream in(log);
        std::string first;
        std::getline(in, first);
        check_header(first, kLogHeader, log);
    }
    log_size_ = fs::file_size(log);
    if (!load_index()) rebuild_index();
    log_.open(log, std::ios::app | std::ios::binary);
    if (!log_) throw UsageError("cannot open " + log.string() + " for appending");
}

bool Store::load_index() {
    fs::path idx = dir_ / "index.tsv";
    std::ifstream in(idx);
    if (!in) return false;
    std::string line;
    if (!std::getline(in, line)) return false;
    auto h = split_tabs(line);
    if (h.size() != 3 || h[0] != kIndexHeader || h[1] != std::to_string(kStoreVersion)) return false;
    if (std::stoull(h[2]) != log_size_) return false;
    entries_.clear();
    while (std::getline(in, line)) {
        auto f = split_tabs(line);
        if (f.size() != 4) return false;
        Entry e;
        e.offset = std::stoull(f[2]);
        e.hits = std::stoull(f[3]);
        entries_[{f[0], f[1]}] = e;
    }
    return true;
}

void Store::rebuild_index() {
    entries_.clear();
    std::ifstream in(dir_ / "store.log", std::ios::binary);
    std::string line;
    std::uint64_t offset = 0;
    std::optional<std::uint64_t> torn;
    bool first = true;
    while (std::getline(in, line)) {
        std::uint64_t here = offset;
        offset += line.size() + 1;
        if (first) {
            first = false;
            continue;
        }
        if (offset > log_size_) {
            // torn final append without a newline
            torn = here;
            break;
        }
        if (line.empty()) continue;
        auto f = split_tabs(line);
        if (f[0] == "V" && f.size() >= 4) {
            Key key{f[1], f[2]};
            auto it = entries_.find(key);
            if (it == entries_.end()) {
                Entry e;
                e.offset = here;
                e.value = f[3];
                entries_[key] = e;
            } else if (read_value(it->second) != f[3]) {
                throw ConsistencyError("store corruption: conflicting values for " + f[1] + " " + f[2]);
            }
        } else if (f[0] == "M" && f.size() == 4) {
            entries_[{f[1], f[2]}].hits += std::stoull(f[3]);
        } else {
            throw ConsistencyError("store corruption: malformed log line at offset " + std::to_string(here));
        }
    }
    in.close();
    if (torn) {
        fs::resize_file(dir_ / "store.log", *torn);
        log_size_ = *torn;
    }
    for (auto& [key, e] : entries_)
        if (!e.value) throw ConsistencyError("store corruption: hit counts without a record for " + key.second);
}

std::string Store::read_value(const Entry& e) const {
    if (e.value) return *e.value;
    std::ifstream in(dir_ / "store.log", std::ios::binary);
    in.seekg(static_cast<std::streamoff>(e.offset));
    std::string line;
    std::getline(in, line);
    auto f = split_tabs(line);
    if (f.size() < 4 || f[0] != "V") throw ConsistencyError("store index points at a non-record line");
    return f[3];
}

void Store::append_value(const std::string& kind, const std::string& key, const std::string& value,
                         const std::string& note) {
    std::string line = "V\t" + kind + "\t" + key + "\t" + value + "\t" + note + "\n";
    Entry e;
    e.offset = log_size_;
    e.value = value;
    log_ << line;
    log_.flush();
    log_size_ += line.size();
    entries_[{kind, key}] = e;
}

bool Store::audit_pick() {
    if (opt_.audit_rate <= 0) return false;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return u(rng_) < opt_.audit_rate;
}

std::string Store::get_or_compute(const std::string& kind, const std::string& key,
                                  const std::function<std::string()>& compute, std::uint64_t hits,
                                  const std::string& note, const std::function<std::string()>& recompute) {
    check_field(kind);
    check_field(key);
    check_field(note);
    std::string value;
    bool audit = false;
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = entries_.find({kind, key});
        if (it != entries_.end()) {
            it->second.pending += hits;
            ++stats_.hits;
            if (!it->second.value) it->second.value = read_value(it->second);
            value = *it->second.value;
            audit = audit_pick();
            if (audit) ++stats_.audits;
        }
    }
    if (!value.empty()) {
        if (audit && (recompute ? recompute() : compute()) != value) throw ConsistencyError("store corruption: audit mismatch for " + kind + " " + key);
        return value;
    }
    std::string fresh = compute();
    check_field(fresh);
    if (fresh.empty()) throw UsageError("store values may not be empty");
    std::lock_guard<std::mutex> lock(mu_);
    auto it = entries_.find({kind, key});
    if (it != entries_.end()) {
        // lost a race: the first write wins and must agree
        if (!it->second.value) it->second.value = read_value(it->second);
        if (*it->second.value != fresh) throw ConsistencyError("store corruption: racing values differ for " + kind + " " + key);
        it->second.pending += hits;
        ++stats_.hits;
        return fresh;
    }
    ++stats_.misses;
    append_value(kind, key, fresh, note);
    entries_[{kind, key}].pending = hits;
    return fresh;
}

std::optional<std::string> Store::lookup(const std::string& kind, const std::string& key) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = entries_.find({kind, key});
    if (it == entries_.end()) return std::nullopt;
    return read_value(it->second);
}

std::uint64_t Store::multiplicity(const std::string& kind, const std::string& key) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = entries_.find({kind, key});
    return it == entries_.end() ? 0 : it->second.hits + it->second.pending;
}

std::size_t Store::size() const {
    std::lock_guard<std::mutex> lock(mu_);
    return entries_.size();
}

Store::Stats Store::stats() const {
    std::lock_guard<std::mutex> lock(mu_);
    return stats_;
}

BigRat Store::eis_coefficient(const GenusSymbol& s, int k, std::uint64_t hits) {
    if (s.rank == 0) {
        get_or_compute("eis", "0|k" + std::to_string(k), [] { return std::string("1"); }, hits, "zero index");
        return BigRat(1);
    }
    std::string note = format_symbol(s) + ";det=" + s.det2t.get_str() + ";rank=" + std::to_string(s.rank) +
                       ";k=" + std::to_string(k);
    return rat_from_text(get_or_compute(
        "eis", eis_key(s, k), [&] { return rat_to_text(eis_coefficient_definite(s, k)); }, hits, note,
        [&] { return rat_to_text(eis_coefficient_uncached(s, k)); }));
}

QPoly Store::fp_polynomial(const GenusSymbol& s, long p) {
    std::string key = genus_key(s) + "|p" + std::to_string(p);
    std::string note = format_symbol(s) + ";det=" + s.det2t.get_str() + ";rank=" + std::to_string(s.rank) +
                       ";p=" + std::to_string(p);
    std::string text = get_or_compute(
        "fp", key,
        [&] {
            auto r = siegel::fp_polynomial(s, p);
            std::string out;
            for (int i = 0; i <= r.poly.degree(); ++i) out += (i ? "," : "") + rat_to_text(r.poly.coeff(i));
            return out;
        },
        1, note);
    std::vector<BigRat> c;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) c.push_back(rat_from_text(item));
    return QPoly(c);
}

BigRat Store::pullback(const SemiIntegralIndex& t1, const SemiIntegralIndex& t2, int k, const EnumOptions& opt) {
    std::string key = pullback_key(t1, t2, k);
    return rat_from_text(get_or_compute("pb", key, [&] {
        GenusTally tally = tally_genera(t1, t2, opt);
        BigRat sum = 0;
        for (auto& [gk, g] : tally.genera) sum += BigRat(static_cast<long>(g.count)) * eis_coefficient(g.symbol, k, g.count);
        return rat_to_text(sum);
    }));
}

void Store::seed_memos() const {
    std::lock_guard<std::mutex> lock(mu_);
    for (auto& [key, e] : entries_) {
        if (key.first == "eis" && key.second.rfind("0|", 0) != 0) eis_cache_put(key.second, rat_from_text(read_value(e)));
        if (key.first == "pb") pullback_cache_put(key.second, rat_from_text(read_value(e)));
    }
}

void Store::absorb_memos() {
    auto absorb = [this](const std::string& kind, const std::map<std::string, BigRat>& memo) {
        for (auto& [key, v] : memo) {
            std::string text = rat_to_text(v);
            if (auto old = lookup(kind, key)) {
                if (*old != text) throw ConsistencyError("store corruption: memo disagrees with stored " + kind + " " + key);
                continue;
            }
            get_or_compute(kind, key, [&] { return text; }, 0);
        }
    };
    absorb("eis", eis_cache_snapshot());
    absorb("pb", pullback_cache_snapshot());
}

void Store::flush() {
    std::lock_guard<std::mutex> lock(mu_);
    if (!log_) return;
    for (auto& [key, e] : entries_) {
        if (e.pending == 0) continue;
        std::string line = "M\t" + key.first + "\t" + key.second + "\t" + std::to_string(e.pending) + "\n";
        log_ << line;
        log_size_ += line.size();
        e.hits += e.pending;
        e.pending = 0;
    }
    log_.flush();
    fs::path tmp = dir_ / "index.tsv.tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        out << kIndexHeader << "\t" << kStoreVersion << "\t" << log_size_ << "\n";
        for (auto& [key, e] : entries_)
            out << key.first << "\t" << key.second << "\t" << e.offset << "\t" << e.hits << "\n";
    }
    fs::rename(tmp, dir_ / "index.tsv");
}

RunResult run_resumable(Store& store, const std::string& name, const SemiIntegralIndex& t1,
                        const SemiIntegralIndex& t2, int k, int slices, const EnumOptions& opt, int max_new) {
    if (slices < 1) throw UsageError("need at least one slice");
    check_field(name);
    if (name.find('/') != std::string::npos) throw UsageError("checkpoint names may not contain '/'");
    fs::path dir = store.dir() / "checkpoints";
    fs::create_directories(dir);
    fs::path path = dir / (name + ".ckpt");
    std::string task = "task\t" + t1.str() + "\t" + t2.str() + "\t" + std::to_string(k) + "\t" + std::to_string(slices);

    RunResult res;
    res.slices = slices;
    std::vector<bool> done(static_cast<std::size_t>(slices), false);
    if (fs::exists(path)) {
        std::ifstream in(path);
        std::string line;
        std::getline(in, line);
        check_header(line, kCheckpointHeader, path);
        std::getline(in, line);
        if (line != task) throw UsageError("checkpoint " + path.string() + " belongs to a different run");
        while (std::getline(in, line)) {
            auto f = split_tabs(line);
            if (f.size() != 4 || f[0] != "slice") continue;  // torn tail
            int s = std::stoi(f[1]);
            if (s < 0 || s >= slices || done[static_cast<std::size_t>(s)]) throw ConsistencyError("checkpoint corruption");
            done[static_cast<std::size_t>(s)] = true;
            res.count += std::stoull(f[2]);
            res.value += rat_from_text(f[3]);
            ++res.slices_done;
        }
    } else {
        std::ofstream out(path);
        out << header_line(kCheckpointHeader) << "\n" << task << "\n";
    }

    std::ofstream out(path, std::ios::app);
    int fresh = 0;
    for (int s = 0; s < slices; ++s) {
        if (done[static_cast<std::size_t>(s)]) continue;
        if (max_new >= 0 && fresh >= max_new) break;
        std::uint64_t cnt = 0;
        BigRat val = 0;
        if (k > 0) {
            GenusTally tally = tally_genera(t1, t2, opt, s, slices);
            cnt = tally.total;
            for (auto& [gk, g] : tally.genera)
                val += BigRat(static_cast<long>(g.count)) * store.eis_coefficient(g.symbol, k, g.count);
        } else {
            cnt = enumerate_R(t1, t2, [](const IntMatrix&) {}, opt, s, slices);
        }
        out << "slice\t" << s << "\t" << cnt << "\t" << rat_to_text(val) << "\n";
        out.flush();
        res.count += cnt;
        res.value += val;
        ++res.slices_done;
        ++fresh;
    }
    store.flush();
    return res;
}

}  // namespace siegel
