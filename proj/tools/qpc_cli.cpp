#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qpc/io.hpp"
#include "qpc/picard.hpp"

using namespace qpc;
using io::Json;

namespace {

enum Exit { ok = 0, refuted = 1, inconclusive = 2, internal = 3 };

struct Options {
    std::optional<long> p;
    std::optional<long> period;
    std::optional<long> weight;
    std::string window = "-2:2";
    int max_rank = 2;
    int depth = 8;
    std::string family = "standard";
    std::string json_report;
    std::string output;
    std::map<std::string, std::string> inputs;
    std::string mode = "quasi";
    int degree = 2;
    bool right = false;
};

/// Text and JSON forms of a report, filled from the same calls so that the
/// two always agree.
class Report {
public:
    void field(const std::string& key, const std::string& text, Json json) {
        text_.emplace_back(key, text);
        json_[key] = std::move(json);
    }
    void field(const std::string& key, const std::string& text) { field(key, text, text); }
    void flag(const std::string& key, bool value) { field(key, value ? "yes" : "no", value); }
    void number(const std::string& key, long value) { field(key, std::to_string(value), value); }

    std::string text() const {
        std::ostringstream os;
        for (const auto& [k, v] : text_) {
            std::vector<std::string> lines;
            std::istringstream in(v);
            for (std::string line; std::getline(in, line);) lines.push_back(line);
            while (!lines.empty() && lines.back().empty()) lines.pop_back();
            std::size_t indent = std::string::npos;
            for (const auto& l : lines)
                if (!l.empty()) indent = std::min(indent, l.find_first_not_of(' '));
            if (lines.size() == 1 && indent == 0) {
                os << k << ": " << lines.front() << "\n";
                continue;
            }
            os << k << ":\n";
            for (const auto& l : lines) os << "  " << (l.size() > indent ? l.substr(indent) : std::string()) << "\n";
        }
        return os.str();
    }
    const Json& json() const { return json_; }

private:
    std::vector<std::pair<std::string, std::string>> text_;
    Json json_ = Json::object();
};

struct Outcome {
    int code = ok;
    std::string status;
    std::optional<Json> output;  // document written with --output
};

std::string optional_str(const std::optional<long>& v) { return v ? std::to_string(*v) : std::string("none"); }
Json optional_json(const std::optional<long>& v) { return v ? Json(*v) : Json(nullptr); }

std::string module_list(const std::vector<AdamsModule>& ms, long lo) {
    std::ostringstream os;
    for (std::size_t i = 0; i < ms.size(); ++i) os << "H_" << lo + static_cast<long>(i) << " = " << ms[i].str() << "\n";
    return os.str();
}

Json module_list_json(const std::vector<AdamsModule>& ms, long lo) {
    Json j = Json::object();
    for (std::size_t i = 0; i < ms.size(); ++i) j[std::to_string(lo + static_cast<long>(i))] = io::to_json(ms[i]);
    return j;
}

Json to_json(const FgModule& m) { return Json{{"free_rank", m.free_rank}, {"torsion", m.torsion_exponents}}; }

// ---------------------------------------------------------------------------
// Session: prime, configuration and family from flags and documents

class Session {
public:
    explicit Session(const Options& o) : o_(o) {
        if (o.depth < 1) throw io::InputError("--depth must be at least 1");
        if (o.max_rank < 1) throw io::InputError("--max-rank must be at least 1");
        if (o.period && *o.period < 1) throw io::InputError("--period must be at least 1");
        for (const auto& [name, path] : o.inputs) docs_.emplace(name, io::read_document(path));
        std::optional<long> p = o.p;
        for (const auto& [name, d] : docs_) p = io::document_prime(d, p).value();
        if (!p) throw io::InputError("the prime is given neither by --p nor by an input document");
        try {
            p_ = Prime(*p);
        } catch (const std::exception& e) {
            throw io::InputError(std::string("--p: ") + e.what());
        }
    }

    Prime prime() const { return *p_; }
    const io::Document& doc(const std::string& name) const { return docs_.at(name); }
    const std::string& kind(const std::string& name) const { return doc(name).kind; }

    /// Configuration for bounded inputs, from the flags.
    Config config() const {
        const long std_n = 2 * prime().value() - 2;
        return Config{prime(), o_.period.value_or(std_n), o_.weight.value_or(std_n)};
    }

    /// A periodic input's own configuration must agree with explicit flags.
    void check_config(const Config& cfg, const std::string& what) const {
        if ((o_.period && *o_.period != cfg.period) || (o_.weight && *o_.weight != cfg.weight))
            throw io::InputError(what + ": configuration " + cfg.str() + " disagrees with --period/--twist-weight");
    }

    std::pair<long, long> window() const {
        const std::string& w = o_.window;
        try {
            std::size_t used = 0;
            if (auto colon = w.find(':'); colon != std::string::npos) {
                const long lo = std::stol(w.substr(0, colon), &used);
                if (used != colon) throw std::invalid_argument(w);
                const long hi = std::stol(w.substr(colon + 1), &used);
                if (used != w.size() - colon - 1 || lo > hi) throw std::invalid_argument(w);
                return {lo, hi};
            }
            const long k = std::stol(w, &used);
            if (used != w.size() || k < 0) throw std::invalid_argument(w);
            return {-k, k};
        } catch (const std::logic_error&) {
            throw io::InputError("--window: expected LO:HI or K, got \"" + w + "\"");
        }
    }

    /// standard, lines, stable (maps only) or a family document.
    DetectionFamily family(const std::function<DetectionFamily()>& stable = {}) const {
        const auto [lo, hi] = window();
        if (o_.family == "standard") return DetectionFamily::standard(prime(), lo, hi, o_.max_rank);
        if (o_.family == "lines") {
            std::vector<long> ws;
            for (long j = lo; j <= hi; ++j) ws.push_back(j);
            return DetectionFamily::lines(prime(), ws);
        }
        if (o_.family == "stable") {
            if (!stable) throw io::InputError("--family stable needs a map input");
            return stable();
        }
        const auto d = io::read_document(o_.family);
        return io::as_family(d, io::document_prime(d, prime().value()));
    }

    int depth() const { return o_.depth; }
    const Options& options() const { return o_; }

private:
    const Options& o_;
    std::map<std::string, io::Document> docs_;
    std::optional<Prime> p_;
};

void echo_config(Report& r, const Config& cfg) {
    r.field("configuration", cfg.str(),
            Json{{"p", cfg.p.value()}, {"period", cfg.period}, {"twist_weight", cfg.weight}});
}

void echo_family(Report& r, const DetectionFamily& f) {
    Json labels = f.labels;
    r.field("family", f.str(), Json{{"description", f.str()}, {"labels", labels}});
}

ResolveMode parse_mode(const std::string& m) {
    if (m == "quasi") return ResolveMode::quasi;
    if (m == "relative") return ResolveMode::relative;
    throw io::InputError("--mode: expected quasi or relative, got \"" + m + "\"");
}

// ---------------------------------------------------------------------------
// Subcommands

Outcome cmd_homology(const Session& s, Report& r) {
    const auto& d = s.doc("input");
    if (d.kind == "periodic_complex") {
        const auto x = io::as_periodic(d, s.prime());
        echo_config(r, x.config());
        const auto h = x.homology();
        r.field("homology", module_list(h, 0), module_list_json(h, 0));
        return {ok, "success", std::nullopt};
    }
    const auto x = io::as_bounded(d, s.prime());
    r.number("p", s.prime().value());
    std::vector<AdamsModule> h;
    for (long n = x.lo(); !x.empty() && n <= x.hi(); ++n) h.push_back(x.homology(n));
    r.field("homology", h.empty() ? "0" : module_list(h, x.lo()), module_list_json(h, x.lo()));
    return {ok, "success", std::nullopt};
}

Outcome cmd_tensor(const Session& s, Report& r) {
    const auto& a = s.doc("a");
    const auto& b = s.doc("b");
    if (a.kind == "complex" && b.kind == "complex") {
        const auto t = tensor(io::as_bounded(a, s.prime()), io::as_bounded(b, s.prime()));
        r.number("p", s.prime().value());
        r.field("product", t.str(), io::to_json(t));
        std::vector<AdamsModule> h;
        for (long n = t.lo(); !t.empty() && n <= t.hi(); ++n) h.push_back(t.homology(n));
        r.field("homology", h.empty() ? "0" : module_list(h, t.lo()), module_list_json(h, t.lo()));
        return {ok, "success", io::document("complex", s.prime(), t)};
    }
    if (a.kind == "periodic_complex") {
        const auto x = io::as_periodic(a, s.prime());
        s.check_config(x.config(), a.name);
        const PeriodicComplex t = b.kind == "complex" ? tensor(x, io::as_bounded(b, s.prime()))
                                                      : tensor_over_unit(x, io::as_periodic(b, s.prime()));
        echo_config(r, t.config());
        r.field("operation", b.kind == "complex" ? "X (x) M" : "X (x)_PI Y");
        r.field("product", t.str(), io::to_json(t));
        const auto h = t.homology();
        r.field("homology", module_list(h, 0), module_list_json(h, 0));
        return {ok, "success", io::document("periodic_complex", s.prime(), t)};
    }
    throw io::InputError(b.name + ": a bounded complex can only be tensored with a bounded complex; give the periodic "
                                  "factor as -a");
}

Outcome finish_derived(const DerivedTensor& t, Report& r) {
    r.field("homology", module_list(t.homology, t.lo), module_list_json(t.homology, t.lo));
    r.flag("truncated", t.truncated);
    r.flag("family complete", !t.incomplete);
    if (t.truncated || t.incomplete) return {inconclusive, "inconclusive", std::nullopt};
    return {ok, "success", std::nullopt};
}

Outcome cmd_derived_tensor(const Session& s, Report& r) {
    const auto& a = s.doc("a");
    const auto& b = s.doc("b");
    const auto fam = s.family();
    if (a.kind == "periodic_complex" && b.kind == "periodic_complex") {
        const auto x = io::as_periodic(a, s.prime());
        const auto y = io::as_periodic(b, s.prime());
        s.check_config(x.config(), a.name);
        echo_config(r, x.config());
        echo_family(r, fam);
        r.number("depth", s.depth());
        return finish_derived(derived_tensor(x, y, fam, s.depth()), r);
    }
    if (a.kind == "complex" && b.kind == "complex") {
        r.number("p", s.prime().value());
        echo_family(r, fam);
        r.number("depth", s.depth());
        return finish_derived(derived_tensor(io::as_bounded(a, s.prime()), io::as_bounded(b, s.prime()), fam, s.depth()),
                              r);
    }
    throw io::InputError(b.name + ": both factors must be bounded or both periodic");
}

Outcome cmd_periodify(const Session& s, Report& r) {
    const auto m = io::as_bounded(s.doc("input"), s.prime());
    const Config cfg = s.config();
    const auto x = s.options().right ? coperiodify(m, cfg) : periodify(m, cfg);
    echo_config(r, cfg);
    r.field("functor", s.options().right ? "right adjoint" : "periodification");
    r.field("result", x.str(), io::to_json(x));
    const auto h = x.homology();
    r.field("homology", module_list(h, 0), module_list_json(h, 0));
    return {ok, "success", io::document("periodic_complex", s.prime(), x)};
}

Outcome cmd_transpose(const Session& s, Report& r) {
    const auto& d = s.doc("input");
    if (d.kind == "chain_map_to_periodic") {
        const auto g = io::as_chain_map_to_periodic(d, s.prime());
        const auto f = extend(g);
        echo_config(r, f.source.config());
        r.field("direction", "extend");
        r.flag("round trip", flatten(f, g.source).components == g.components);
        r.field("result", "periodic map P M -> X", io::to_json(f));
        return {ok, "success", io::document("periodic_map", s.prime(), f)};
    }
    const auto f = io::as_periodic_map(d, s.prime());
    if (!find_cut(f.source))
        throw io::InputError(d.name + ": at /source: the source has no zero differential, so it is not "
                                      "recognisably a periodification");
    const auto m = cut_open(f.source);
    const auto g = flatten(f, m);
    echo_config(r, f.source.config());
    r.field("direction", "flatten");
    r.flag("round trip", extend(g) == f);
    r.field("result", "chain map M -> U X", io::to_json(g));
    return {ok, "success", io::document("chain_map_to_periodic", s.prime(), g)};
}

template <class F>
Outcome with_map(const Session& s, Report& r, F&& body) {
    const auto& d = s.doc("input");
    if (d.kind == "chain_map") {
        r.number("p", s.prime().value());
        return body(io::as_chain_map(d, s.prime()));
    }
    if (d.kind == "periodic_map") {
        const auto f = io::as_periodic_map(d, s.prime());
        s.check_config(f.source.config(), d.name);
        echo_config(r, f.source.config());
        return body(f);
    }
    throw io::InputError(d.name + ": at /kind: expected a chain_map or a periodic_map, got a " + d.kind);
}

std::pair<long, long> homology_range(const ChainMap& f) { return default_range(f); }
std::pair<long, long> homology_range(const PeriodicMap& f) { return {0, f.source.period() - 1}; }

template <class M>
std::string homology_maps(const M& f) {
    std::ostringstream os;
    const auto [lo, hi] = homology_range(f);
    for (long n = lo; n <= hi; ++n) {
        const auto h = homology_map(f, n);
        os << "H_" << n << ": " << h.source.normal_form().str() << " -> " << h.target.normal_form().str() << "\n";
    }
    return os.str();
}

Outcome cmd_check_map(const Session& s, Report& r) {
    if (s.kind("input") == "chain_map_to_periodic") {
        const auto g = io::as_chain_map_to_periodic(s.doc("input"), s.prime());
        echo_config(r, g.target.config());
        r.field("valid", "yes", true);
        r.field("transpose", "periodic map P M -> X", io::to_json(extend(g)));
        return {ok, "valid", std::nullopt};
    }
    return with_map(s, r, [&](const auto& f) {
        r.field("valid", "yes", true);
        r.flag("quasi-isomorphism", is_quasi_iso(f));
        r.flag("injective cofibration", is_injective_cofibration(f));
        return Outcome{ok, "valid", std::nullopt};
    });
}

Outcome cmd_check_quasi_iso(const Session& s, Report& r) {
    return with_map(s, r, [&](const auto& f) {
        const bool q = is_quasi_iso(f);
        r.field("homology maps", homology_maps(f));
        r.flag("quasi-isomorphism", q);
        return Outcome{q ? ok : refuted, q ? "holds" : "fails", std::nullopt};
    });
}

Outcome cmd_check_p_equiv(const Session& s, Report& r) {
    return with_map(s, r, [&](const auto& f) {
        const auto fam = s.family([&] { return stable_family(f); });
        echo_family(r, fam);
        const auto rep = is_relative_equivalence(f, fam);
        Json failing = rep.failing;
        r.field("range", std::to_string(rep.lo) + " .. " + std::to_string(rep.hi), Json{rep.lo, rep.hi});
        r.field("members", [&] {
            std::string t;
            for (const auto& m : rep.members) t += m + "\n";
            return t;
        }(), rep.members);
        r.field("failing", rep.failing.empty() ? "none" : [&] {
            std::string t;
            for (const auto& m : rep.failing) t += (t.empty() ? "" : ", ") + m;
            return t;
        }(), failing);
        r.flag("relative equivalence", rep.holds);
        return Outcome{rep.holds ? ok : refuted, rep.holds ? "holds" : "fails", std::nullopt};
    });
}

Outcome cmd_check_cofibration(const Session& s, Report& r) {
    const auto& d = s.doc("input");
    CofibrationCertificate c;
    const auto fam = s.family();
    if (d.kind == "periodic_complex") {
        const auto x = io::as_periodic(d, s.prime());
        s.check_config(x.config(), d.name);
        echo_config(r, x.config());
        r.field("question", "is 0 -> X a cofibration");
        c = check_cofibrant(x, fam);
    } else {
        const auto f = io::as_periodic_map(d, s.prime());
        s.check_config(f.source.config(), d.name);
        echo_config(r, f.source.config());
        r.field("question", "is f a cofibration");
        c = check_cofibration(f, fam);
    }
    echo_family(r, fam);
    r.field("certificate", c.str(),
            Json{{"cofibration", c.cofibration},
                 {"inconclusive", c.inconclusive},
                 {"split", c.split},
                 {"projective_cokernel", c.projective_cokernel},
                 {"filtration", c.filtration},
                 {"reason", c.reason}});
    if (c.inconclusive) return {inconclusive, "inconclusive", std::nullopt};
    return {c.cofibration ? ok : refuted, c.cofibration ? "certified" : "refuted", std::nullopt};
}

Outcome cmd_resolve(const Session& s, Report& r) {
    const auto& d = s.doc("input");
    const auto mode = parse_mode(s.options().mode);
    const auto fam = s.family();
    if (d.kind == "periodic_complex") {
        const auto x = io::as_periodic(d, s.prime());
        s.check_config(x.config(), d.name);
        if (!find_cut(x))
            throw io::InputError(d.name + ": no window differential is zero, so the complex cannot be cut open and "
                                          "resolved");
        const auto res = resolve(x, mode, fam, s.depth());
        echo_config(r, x.config());
        echo_family(r, fam);
        r.field("mode", to_string(mode));
        r.number("depth", s.depth());
        r.number("cut", res.cut);
        r.field("resolution", res.complex.str(), io::to_json(res.complex));
        r.flag("quasi-isomorphism", is_quasi_iso(res.augmentation));
        r.flag("truncated", res.truncated);
        r.flag("family complete", !res.incomplete);
        const bool done = !res.truncated && !res.incomplete;
        return {done ? ok : inconclusive, done ? "success" : "inconclusive",
                io::document("periodic_map", s.prime(), res.augmentation)};
    }
    const auto x = io::as_bounded(d, s.prime());
    const auto res = resolve(x, mode, fam, s.depth());
    r.number("p", s.prime().value());
    echo_family(r, fam);
    r.field("mode", to_string(mode));
    r.number("depth", s.depth());
    r.field("resolution", res.complex.str(), io::to_json(res.complex));
    r.flag("quasi-isomorphism", is_quasi_iso(res.augmentation));
    r.flag("relative equivalence", is_relative_equivalence(res.augmentation, fam).holds);
    r.flag("truncated", res.truncated);
    r.flag("family complete", !res.incomplete);
    const bool done = !res.truncated && !res.incomplete;
    return {done ? ok : inconclusive, done ? "success" : "inconclusive",
            io::document("chain_map", s.prime(), res.augmentation)};
}

Outcome cmd_ext(const Session& s, Report& r) {
    const auto m = io::as_module(s.doc("m"), s.prime());
    const auto n = io::as_module(s.doc("n"), s.prime());
    const auto mode = parse_mode(s.options().mode);
    if (s.options().degree < 0) throw io::InputError("--degree must be non-negative");
    const auto fam = s.family();
    const auto e = ext_relative(m, n, fam, s.options().degree, mode);
    r.number("p", s.prime().value());
    echo_family(r, fam);
    r.field("mode", to_string(mode));
    std::ostringstream os;
    Json groups = Json::array();
    for (std::size_t i = 0; i < e.groups.size(); ++i) {
        os << "Ext^" << i << " = " << e.groups[i].str() << "\n";
        groups.push_back(to_json(e.groups[i]));
    }
    r.field("ext", os.str(), groups);
    r.flag("truncated", e.truncated);
    r.flag("family complete", !e.incomplete);
    const bool done = !e.truncated && !e.incomplete;
    return {done ? ok : inconclusive, done ? "success" : "inconclusive", std::nullopt};
}

PeriodicMap periodic_map_input(const Session& s, const std::string& name) {
    const auto& d = s.doc(name);
    if (d.kind == "chain_map") return periodify(io::as_chain_map(d, s.prime()), s.config());
    const auto f = io::as_periodic_map(d, s.prime());
    s.check_config(f.source.config(), d.name);
    return f;
}

Outcome cmd_pushout_product(const Session& s, Report& r) {
    const auto f = periodic_map_input(s, "f");
    const auto g = periodic_map_input(s, "g");
    if (!(f.source.config() == g.source.config()))
        throw io::InputError(s.doc("g").name + ": configuration differs from that of the first map");
    const auto pp = pushout_product(f, g);
    echo_config(r, f.source.config());
    r.field("corner", pp.corner.str(), io::to_json(pp.corner));
    const auto h = pp.corner.homology();
    r.field("corner homology", module_list(h, 0), module_list_json(h, 0));
    r.flag("monomorphism", pp.is_mono());
    r.flag("quasi-isomorphism", pp.is_quasi_iso());
    return {ok, "success", io::document("periodic_map", f.source.prime(), pp.corner_map)};
}

Outcome cmd_witness_suite(const Session& s, Report& r) {
    const Config cfg = s.config();
    const auto w = witness_suite(cfg);
    echo_config(r, cfg);
    Json js = Json::array();
    for (const auto& x : w.witnesses) {
        std::string t = x.reproduced ? "reproduced\n" : "NOT reproduced\n";
        for (const auto& line : x.details) t += line + "\n";
        r.field(x.name, t, Json{{"reproduced", x.reproduced}, {"details", x.details}});
    }
    r.flag("all reproduced", w.all_reproduced());
    return {w.all_reproduced() ? ok : refuted, w.all_reproduced() ? "reproduced" : "not reproduced", std::nullopt};
}

Outcome cmd_picard_certify(const Session& s, Report& r) {
    const auto c = io::as_periodic(s.doc("c"), s.prime());
    const auto d = io::as_periodic(s.doc("d"), s.prime());
    s.check_config(c.config(), s.doc("c").name);
    if (!(c.config() == d.config()))
        throw io::InputError(s.doc("d").name + ": configuration " + d.config().str() + " differs from " +
                             c.config().str());
    const auto fam = s.family();
    const auto cert = certify_inverse_pair(c, d, fam, s.depth());
    echo_config(r, cert.cfg);
    echo_family(r, fam);
    r.number("depth", s.depth());
    r.field("shift of C", optional_str(cert.shift_c), optional_json(cert.shift_c));
    r.field("shift of D", optional_str(cert.shift_d), optional_json(cert.shift_d));
    r.field("shift of C (x)^L D", optional_str(cert.shift), optional_json(cert.shift));
    r.field("homology", module_list(cert.homology, 0), module_list_json(cert.homology, 0));
    r.field("expected", module_list(cert.expected, 0), module_list_json(cert.expected, 0));
    Json mism = cert.mismatches;
    std::string mt;
    for (const auto& m : cert.mismatches) mt += m + "\n";
    r.field("mismatches", mt.empty() ? "none" : mt, mism);
    r.flag("truncated", cert.truncated);
    r.flag("family complete", !cert.incomplete);
    r.field("verdict", to_string(cert.verdict));
    const int code = cert.verdict == Verdict::certified ? ok : cert.verdict == Verdict::refuted ? refuted : inconclusive;
    return {code, to_string(cert.verdict), std::nullopt};
}

Outcome cmd_picard_identify(const Session& s, Report& r) {
    const auto x = io::as_periodic(s.doc("input"), s.prime());
    s.check_config(x.config(), s.doc("input").name);
    echo_config(r, x.config());
    const auto h = x.homology();
    r.field("homology", module_list(h, 0), module_list_json(h, 0));
    const auto i = identify_shift(x);
    r.field("shift", optional_str(i), optional_json(i));
    if (x.weight() == 0 && i) r.field("note", "twist weight 0: the shift is determined modulo the period only");
    return {i ? ok : refuted, i ? "identified" : "not a shift of the unit", std::nullopt};
}

// ---------------------------------------------------------------------------

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io::InputError(path + ": cannot write file");
    out << text;
}

struct Command {
    const char* name;
    const char* help;
    std::vector<std::pair<std::string, std::string>> inputs;  // option flags, key
    Outcome (*run)(const Session&, Report&);
};

}  // namespace

int main(int argc, char** argv) {
    Options o;
    CLI::App app{"Quasi-periodic chain complexes over Adams modules: homological algebra and Picard certification"};
    app.require_subcommand(1);

    const std::vector<Command> commands = {
        {"homology", "Homology of a bounded or periodic complex", {{"-i,--input", "input"}}, cmd_homology},
        {"tensor", "Tensor product of complexes", {{"-a", "a"}, {"-b", "b"}}, cmd_tensor},
        {"derived-tensor", "Derived tensor product via cofibrant resolutions", {{"-a", "a"}, {"-b", "b"}},
         cmd_derived_tensor},
        {"periodify", "Periodification (or its right adjoint with --right) of a bounded complex",
         {{"-i,--input", "input"}}, cmd_periodify},
        {"transpose", "Adjunction transpose of M -> UX or of PM -> X", {{"-i,--input", "input"}}, cmd_transpose},
        {"check-map", "Validate a map and report its basic properties", {{"-i,--input", "input"}}, cmd_check_map},
        {"check-quasi-iso", "Decide whether a map is a quasi-isomorphism", {{"-i,--input", "input"}},
         cmd_check_quasi_iso},
        {"check-p-equiv", "Decide whether a map is a relative equivalence over a detection family",
         {{"-i,--input", "input"}}, cmd_check_p_equiv},
        {"check-cofibration", "Certify a cofibration (or cofibrancy of a periodic complex)", {{"-i,--input", "input"}},
         cmd_check_cofibration},
        {"resolve", "Cofibrant resolution of a complex", {{"-i,--input", "input"}}, cmd_resolve},
        {"ext", "Relative Ext groups of two modules", {{"-M", "m"}, {"-N", "n"}}, cmd_ext},
        {"pushout-product", "Pushout-product of two maps", {{"-f", "f"}, {"-g", "g"}}, cmd_pushout_product},
        {"witness-suite", "Reproduce the three counterexample witnesses", {}, cmd_witness_suite},
        {"picard-certify", "Certify that C and D are inverse in the Picard group", {{"-C", "c"}, {"-D", "d"}},
         cmd_picard_certify},
        {"picard-identify", "Recognise a shift of the unit from homology", {{"-i,--input", "input"}},
         cmd_picard_identify},
    };

    bool mode_given = false;
    std::map<std::string, std::string> paths;
    for (const auto& c : commands) {
        auto* sub = app.add_subcommand(c.name, c.help);
        for (const auto& [flags, key] : c.inputs)
            sub->add_option(flags, paths[std::string(c.name) + "/" + key], "input document")->required();
        sub->add_option("--p", o.p, "odd prime");
        sub->add_option("--period", o.period, "period N (default 2p-2)");
        sub->add_option("--twist-weight", o.weight, "twist weight w (default 2p-2)");
        sub->add_option("--window", o.window, "family weight window LO:HI or K for -K:K")->capture_default_str();
        sub->add_option("--max-rank", o.max_rank, "largest family member rank")->capture_default_str();
        sub->add_option("--depth", o.depth, "resolution depth")->capture_default_str();
        sub->add_option("--family", o.family, "standard, lines, stable or a family document")->capture_default_str();
        sub->add_option("--json-report", o.json_report, "also write the report as JSON to this file");
        if (std::string(c.name) == "periodify") sub->add_flag("--right", o.right, "use the right adjoint");
        if (std::string(c.name) == "resolve" || std::string(c.name) == "ext")
            sub->add_option("--mode", o.mode, "quasi or relative")->each([&](const std::string&) { mode_given = true; });
        if (std::string(c.name) == "ext")
            sub->add_option("--degree", o.degree, "highest Ext degree")->capture_default_str();
        if (c.inputs.size() == 1 || std::string(c.name) == "tensor" || std::string(c.name) == "pushout-product")
            sub->add_option("-o,--output", o.output, "write the resulting object to this file");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return refuted;
    }

    const Command* cmd = nullptr;
    for (const auto& c : commands)
        if (app.got_subcommand(c.name)) cmd = &c;
    for (const auto& [flags, key] : cmd->inputs) o.inputs[key] = paths[std::string(cmd->name) + "/" + key];

    try {
        if (std::string(cmd->name) == "ext" && !mode_given) o.mode = "relative";
        const Session s(o);
        Report r;
        r.field("command", cmd->name);
        const Outcome out = cmd->run(s, r);
        r.field("status", out.status);
        r.number("exit", out.code);
        std::cout << r.text();
        if (!o.json_report.empty()) {
            Json j{{"schema_version", io::schema_version}};
            for (const auto& [k, v] : r.json().items()) j[k] = v;
            write_file(o.json_report, io::dump(j));
        }
        if (!o.output.empty() && out.output) write_file(o.output, io::dump(*out.output));
        return out.code;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return refuted;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return internal;
    }
}
