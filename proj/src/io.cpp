#include "qpc/io.hpp"

#include <fstream>
#include <regex>
#include <set>
#include <sstream>

namespace qpc::io {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw InputError("at " + (path.empty() ? std::string("/") : path) + ": " + msg);
}

std::string child(const std::string& path, const std::string& key) { return path + "/" + key; }
std::string child(const std::string& path, std::size_t i) { return path + "/" + std::to_string(i); }

void expect_object(const Json& j, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) fail(path, "expected an object");
    const std::set<std::string> keys(allowed.begin(), allowed.end());
    for (const auto& [k, v] : j.items())
        if (!keys.count(k)) fail(child(path, k), "unknown field \"" + k + "\"");
}

const Json& field(const Json& j, const char* key, const std::string& path) {
    auto it = j.find(key);
    if (it == j.end()) fail(path, std::string("missing field \"") + key + "\"");
    return *it;
}

long integer(const Json& j, const std::string& path) {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    return j.get<long>();
}

long degree_key(const std::string& key, const std::string& path) {
    static const std::regex re("-?(0|[1-9][0-9]*)");
    if (!std::regex_match(key, re)) fail(child(path, key), "degree keys must be integers, got \"" + key + "\"");
    return std::stol(key);
}

/// Rethrows library validation failures against the object's path.
template <class F>
auto checked(const std::string& path, F&& build) -> decltype(build()) {
    try {
        return build();
    } catch (const InputError&) {
        throw;
    } catch (const ValidationError& e) {
        fail(path, e.what());
    }
}

std::optional<long> line_weight(const AdamsModule& m) {
    if (m.size() != 1 || !m.underlying().is_free()) return std::nullopt;
    const auto w = validate_object(m.underlying(), m.psi().matrix).weights;
    if (w.size() != 1) return std::nullopt;
    return w.front();
}

bool free_first(const CyclicSum& c) {
    bool torsion = false;
    for (int o : c.orders()) {
        if (o != 0) torsion = true;
        else if (torsion) return false;
    }
    return true;
}

std::map<long, Json> degree_entries(const Json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object keyed by degree");
    std::map<long, Json> out;
    for (const auto& [k, v] : j.items()) out.emplace(degree_key(k, path), v);
    return out;
}

}  // namespace

std::string format_scalar(const PLocal& x) { return x.rational().get_str(); }

PLocal parse_scalar(const Json& j, Prime p, const std::string& path) {
    static const std::regex re(R"(-?[0-9]+(/[0-9]+)?)");
    if (!j.is_string()) fail(path, "scalars must be strings \"a\" or \"a/b\"");
    const auto s = j.get<std::string>();
    if (!std::regex_match(s, re)) fail(path, "malformed scalar \"" + s + "\"");
    mpq_class q(s, 10);
    if (q.get_den() == 0) fail(path, "zero denominator in \"" + s + "\"");
    q.canonicalize();
    if (mpz_divisible_ui_p(q.get_den().get_mpz_t(), static_cast<unsigned long>(p.value())))
        fail(path, "\"" + s + "\" is not p-local for p = " + std::to_string(p.value()));
    return PLocal(q);
}

Json to_json(const Matrix& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(format_scalar(m(i, k)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const Json& j, Eigen::Index rows, Eigen::Index cols, Prime p, const std::string& path) {
    if (!j.is_array()) fail(path, "expected a matrix (array of rows)");
    if (static_cast<Eigen::Index>(j.size()) != rows)
        fail(path, "expected " + std::to_string(rows) + " rows, got " + std::to_string(j.size()));
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const Json& row = j[static_cast<std::size_t>(i)];
        const std::string rp = child(path, static_cast<std::size_t>(i));
        if (!row.is_array()) fail(rp, "expected a row (array of scalars)");
        if (static_cast<Eigen::Index>(row.size()) != cols)
            fail(rp, "expected " + std::to_string(cols) + " entries, got " + std::to_string(row.size()));
        for (Eigen::Index k = 0; k < cols; ++k)
            m(i, k) = parse_scalar(row[static_cast<std::size_t>(k)], p, child(rp, static_cast<std::size_t>(k)));
    }
    return m;
}

Json to_json(const AdamsModule& m) {
    if (auto w = line_weight(m); w && m.psi().matrix(0, 0) == twist_scalar(m.prime(), *w)) return Json{{"line", *w}};
    Json j = Json::object();
    const auto& orders = m.underlying().orders();
    if (free_first(m.underlying())) {
        int rank = 0;
        Json torsion = Json::array();
        for (int o : orders) {
            if (o == 0) ++rank;
            else torsion.push_back(o);
        }
        j["rank"] = rank;
        j["torsion"] = torsion;
    } else {
        j["orders"] = orders;
    }
    j["psi"] = to_json(m.psi().matrix);
    return j;
}

AdamsModule module_from_json(const Json& j, Prime p, const std::string& path) {
    if (j.is_object() && j.contains("line")) {
        expect_object(j, path, {"line"});
        return AdamsModule::line(p, integer(j["line"], child(path, "line")));
    }
    std::vector<int> orders;
    if (j.is_object() && j.contains("orders")) {
        expect_object(j, path, {"orders", "psi"});
        const Json& o = j["orders"];
        if (!o.is_array()) fail(child(path, "orders"), "expected an array of exponents");
        for (std::size_t i = 0; i < o.size(); ++i) {
            const long e = integer(o[i], child(child(path, "orders"), i));
            if (e < 0) fail(child(child(path, "orders"), i), "exponents must be non-negative");
            orders.push_back(static_cast<int>(e));
        }
    } else {
        expect_object(j, path, {"rank", "torsion", "psi"});
        const long rank = integer(field(j, "rank", path), child(path, "rank"));
        if (rank < 0) fail(child(path, "rank"), "rank must be non-negative");
        orders.assign(static_cast<std::size_t>(rank), 0);
        const Json& t = field(j, "torsion", path);
        if (!t.is_array()) fail(child(path, "torsion"), "expected an array of exponents");
        for (std::size_t i = 0; i < t.size(); ++i) {
            const long e = integer(t[i], child(child(path, "torsion"), i));
            if (e < 1) fail(child(child(path, "torsion"), i), "torsion exponents must be positive");
            orders.push_back(static_cast<int>(e));
        }
    }
    const auto n = static_cast<Eigen::Index>(orders.size());
    const Matrix psi = matrix_from_json(field(j, "psi", path), n, n, p, child(path, "psi"));
    return checked(path, [&] { return AdamsModule::make(CyclicSum(p, orders), psi); });
}

Json to_json(const BoundedComplex& x) {
    Json levels = Json::object(), diffs = Json::object();
    for (long n = x.lo(); !x.empty() && n <= x.hi(); ++n) {
        levels[std::to_string(n)] = to_json(x.level(n));
        if (n > x.lo()) diffs[std::to_string(n)] = to_json(x.diff(n).matrix());
    }
    return Json{{"levels", levels}, {"diffs", diffs}};
}

BoundedComplex bounded_from_json(const Json& j, Prime p, const std::string& path) {
    expect_object(j, path, {"levels", "diffs"});
    const auto lv = degree_entries(field(j, "levels", path), child(path, "levels"));
    const auto df = j.contains("diffs") ? degree_entries(j["diffs"], child(path, "diffs")) : std::map<long, Json>{};
    if (lv.empty()) {
        if (!df.empty()) fail(child(path, "diffs"), "differentials given for a complex without levels");
        return BoundedComplex::zero(p);
    }
    const long lo = lv.begin()->first, hi = lv.rbegin()->first;
    std::vector<AdamsModule> levels;
    for (long n = lo; n <= hi; ++n) {
        auto it = lv.find(n);
        levels.push_back(it == lv.end() ? AdamsModule::zero(p)
                                        : module_from_json(it->second, p, child(child(path, "levels"), std::to_string(n))));
    }
    for (const auto& [n, v] : df)
        if (n <= lo || n > hi)
            fail(child(child(path, "diffs"), std::to_string(n)), "differential outside the range of levels");
    std::vector<AdamsMap> diffs;
    for (long n = lo + 1; n <= hi; ++n) {
        const AdamsModule& s = levels[static_cast<std::size_t>(n - lo)];
        const AdamsModule& t = levels[static_cast<std::size_t>(n - lo - 1)];
        auto it = df.find(n);
        if (it == df.end()) {
            diffs.push_back(AdamsMap::zero(s, t));
            continue;
        }
        const std::string dp = child(child(path, "diffs"), std::to_string(n));
        const Matrix m = matrix_from_json(it->second, t.size(), s.size(), p, dp);
        diffs.push_back(checked(dp, [&] { return AdamsMap::make(s, t, m); }));
    }
    return checked(path, [&] { return BoundedComplex::make(p, lo, levels, diffs); });
}

Json to_json(const PeriodicComplex& x) {
    Json levels = Json::array(), diffs = Json::array();
    for (const auto& m : x.window()) levels.push_back(to_json(m));
    for (const auto& d : x.window_diffs()) diffs.push_back(to_json(d.matrix()));
    return Json{{"period", x.period()},
                {"twist_weight", x.weight()},
                {"levels", levels},
                {"diffs", diffs},
                {"wrap", to_json(x.wrap().matrix())}};
}

PeriodicComplex periodic_from_json(const Json& j, Prime p, const std::string& path) {
    expect_object(j, path, {"period", "twist_weight", "levels", "diffs", "wrap"});
    const long n = integer(field(j, "period", path), child(path, "period"));
    if (n < 1) fail(child(path, "period"), "period must be positive");
    const long w = integer(field(j, "twist_weight", path), child(path, "twist_weight"));
    const Config cfg{p, n, w};
    const Json& lv = field(j, "levels", path);
    if (!lv.is_array() || static_cast<long>(lv.size()) != n)
        fail(child(path, "levels"), "expected an array of " + std::to_string(n) + " levels");
    std::vector<AdamsModule> levels;
    for (std::size_t i = 0; i < lv.size(); ++i) levels.push_back(module_from_json(lv[i], p, child(child(path, "levels"), i)));
    const Json& df = field(j, "diffs", path);
    if (!df.is_array() || static_cast<long>(df.size()) != n - 1)
        fail(child(path, "diffs"), "expected an array of " + std::to_string(n - 1) + " differentials d_1 .. d_" +
                                       std::to_string(n - 1));
    std::vector<AdamsMap> diffs;
    for (std::size_t i = 0; i < df.size(); ++i) {
        const AdamsModule& s = levels[i + 1];
        const AdamsModule& t = levels[i];
        const std::string dp = child(child(path, "diffs"), i);
        const Matrix m = matrix_from_json(df[i], t.size(), s.size(), p, dp);
        diffs.push_back(checked(dp, [&] { return AdamsMap::make(s, t, m); }));
    }
    const AdamsModule top = twist(levels.back(), w);
    const std::string wp = child(path, "wrap");
    const Matrix wm = matrix_from_json(field(j, "wrap", path), top.size(), levels.front().size(), p, wp);
    const AdamsMap wrap = checked(wp, [&] { return AdamsMap::make(levels.front(), top, wm); });
    return checked(path, [&] { return PeriodicComplex::make(cfg, levels, diffs, wrap); });
}

Json to_json(const AdamsMap& f) {
    return Json{{"source", to_json(f.source)}, {"target", to_json(f.target)}, {"matrix", to_json(f.matrix())}};
}

AdamsMap map_from_json(const Json& j, Prime p, const std::string& path) {
    expect_object(j, path, {"source", "target", "matrix"});
    const AdamsModule s = module_from_json(field(j, "source", path), p, child(path, "source"));
    const AdamsModule t = module_from_json(field(j, "target", path), p, child(path, "target"));
    const Matrix m = matrix_from_json(field(j, "matrix", path), t.size(), s.size(), p, child(path, "matrix"));
    return checked(path, [&] { return AdamsMap::make(s, t, m); });
}

namespace {

template <class Target>
std::vector<AdamsMap> bounded_components(const Json& j, const BoundedComplex& s, const Target& t, Prime p,
                                         const std::string& path) {
    const auto entries = degree_entries(j, path);
    std::vector<AdamsMap> comps;
    for (const auto& [n, v] : entries)
        if (s.empty() || n < s.lo() || n > s.hi()) fail(child(path, std::to_string(n)), "component outside the source");
    for (long n = s.lo(); !s.empty() && n <= s.hi(); ++n) {
        const AdamsModule& a = s.level(n);
        const AdamsModule b = t.level(n);
        auto it = entries.find(n);
        if (it == entries.end()) {
            comps.push_back(AdamsMap::zero(a, b));
            continue;
        }
        const std::string cp = child(path, std::to_string(n));
        const Matrix m = matrix_from_json(it->second, b.size(), a.size(), p, cp);
        comps.push_back(checked(cp, [&] { return AdamsMap::make(a, b, m); }));
    }
    return comps;
}

}  // namespace

Json to_json(const ChainMap& f) {
    Json comps = Json::object();
    for (long n = f.source.lo(); !f.source.empty() && n <= f.source.hi(); ++n)
        comps[std::to_string(n)] = to_json(f.component(n).matrix());
    return Json{{"source", to_json(f.source)}, {"target", to_json(f.target)}, {"components", comps}};
}

ChainMap chain_map_from_json(const Json& j, Prime p, const std::string& path) {
    expect_object(j, path, {"source", "target", "components"});
    const BoundedComplex s = bounded_from_json(field(j, "source", path), p, child(path, "source"));
    const BoundedComplex t = bounded_from_json(field(j, "target", path), p, child(path, "target"));
    const auto comps = bounded_components(field(j, "components", path), s, t, p, child(path, "components"));
    return checked(path, [&] { return ChainMap::make(s, t, s.empty() ? 0 : s.lo(), comps); });
}

Json to_json(const PeriodicMap& f) {
    Json comps = Json::array();
    for (const auto& c : f.components) comps.push_back(to_json(c.matrix()));
    return Json{{"source", to_json(f.source)}, {"target", to_json(f.target)}, {"components", comps}};
}

PeriodicMap periodic_map_from_json(const Json& j, Prime p, const std::string& path) {
    expect_object(j, path, {"source", "target", "components"});
    const PeriodicComplex s = periodic_from_json(field(j, "source", path), p, child(path, "source"));
    const PeriodicComplex t = periodic_from_json(field(j, "target", path), p, child(path, "target"));
    if (!(s.config() == t.config())) fail(path, "source and target have different configurations");
    const Json& c = field(j, "components", path);
    if (!c.is_array() || static_cast<long>(c.size()) != s.period())
        fail(child(path, "components"), "expected an array of " + std::to_string(s.period()) + " components");
    std::vector<AdamsMap> comps;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const AdamsModule& a = s.window()[i];
        const AdamsModule& b = t.window()[i];
        const std::string cp = child(child(path, "components"), i);
        const Matrix m = matrix_from_json(c[i], b.size(), a.size(), p, cp);
        comps.push_back(checked(cp, [&] { return AdamsMap::make(a, b, m); }));
    }
    return checked(path, [&] { return PeriodicMap::make(s, t, comps); });
}

Json to_json(const ChainMapToPeriodic& f) {
    Json comps = Json::object();
    for (long n = f.source.lo(); !f.source.empty() && n <= f.source.hi(); ++n)
        comps[std::to_string(n)] = to_json(f.component(n).matrix());
    return Json{{"source", to_json(f.source)}, {"target", to_json(f.target)}, {"components", comps}};
}

ChainMapToPeriodic chain_map_to_periodic_from_json(const Json& j, Prime p, const std::string& path) {
    expect_object(j, path, {"source", "target", "components"});
    const BoundedComplex s = bounded_from_json(field(j, "source", path), p, child(path, "source"));
    const PeriodicComplex t = periodic_from_json(field(j, "target", path), p, child(path, "target"));
    const auto comps = bounded_components(field(j, "components", path), s, t, p, child(path, "components"));
    return checked(path, [&] { return ChainMapToPeriodic::make(s, t, comps); });
}

Json to_json(const DetectionFamily& f) {
    Json members = Json::array();
    for (const auto& m : f.members) members.push_back(to_json(m));
    return Json{{"members", members}, {"labels", f.labels}};
}

DetectionFamily family_from_json(const Json& j, Prime p, const std::string& path) {
    expect_object(j, path, {"members", "labels"});
    const Json& ms = field(j, "members", path);
    if (!ms.is_array()) fail(child(path, "members"), "expected an array of modules");
    DetectionFamily fam{p, 0, 0, 1, {}, {}};
    bool seen = false;
    for (std::size_t i = 0; i < ms.size(); ++i) {
        const std::string mp = child(child(path, "members"), i);
        AdamsModule m = module_from_json(ms[i], p, mp);
        if (!m.underlying().is_free()) fail(mp, "family members must be dualisable (torsion-free)");
        fam.max_rank = std::max(fam.max_rank, static_cast<int>(m.size()));
        for (long w : validate_object(m.underlying(), m.psi().matrix).weights) {
            fam.window_lo = seen ? std::min(fam.window_lo, w) : w;
            fam.window_hi = seen ? std::max(fam.window_hi, w) : w;
            seen = true;
        }
        fam.members.push_back(std::move(m));
    }
    if (j.contains("labels")) {
        const Json& ls = j["labels"];
        if (!ls.is_array() || ls.size() != ms.size())
            fail(child(path, "labels"), "expected one label per member");
        for (std::size_t i = 0; i < ls.size(); ++i) {
            if (!ls[i].is_string()) fail(child(child(path, "labels"), i), "labels must be strings");
            fam.labels.push_back(ls[i].get<std::string>());
        }
    } else {
        for (std::size_t i = 0; i < ms.size(); ++i) fam.labels.push_back("P" + std::to_string(i));
    }
    return fam;
}

Json document(const std::string& kind, Prime p, const Json& body) {
    Json j{{"schema_version", schema_version}, {"kind", kind}, {"p", p.value()}};
    for (const auto& [k, v] : body.items()) j[k] = v;
    return j;
}

Document parse_document(const std::string& text, const std::string& name) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        // e.byte is the 1-based offset of the offending character.
        std::size_t line = 1, col = 1;
        const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        for (std::size_t i = 0; i < end; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        std::string what = e.what();
        if (auto pos = what.find(": "); pos != std::string::npos) what = what.substr(pos + 2);
        throw InputError(name + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + what);
    }
    try {
        if (!j.is_object()) fail("", "a document must be a JSON object");
        auto v = j.find("schema_version");
        if (v == j.end()) fail("", "missing field \"schema_version\"");
        if (!v->is_number_integer() || v->get<long>() != schema_version)
            fail("/schema_version", "unsupported schema version " + v->dump() + " (expected " +
                                        std::to_string(schema_version) + ")");
        auto k = j.find("kind");
        if (k == j.end()) fail("", "missing field \"kind\"");
        if (!k->is_string()) fail("/kind", "kind must be a string");
        Document d{name, k->get<std::string>(), std::nullopt, Json::object()};
        static const std::set<std::string> kinds{"module",       "complex",      "periodic_complex",
                                                 "map",          "chain_map",    "periodic_map",
                                                 "chain_map_to_periodic", "family"};
        if (!kinds.count(d.kind)) fail("/kind", "unknown kind \"" + d.kind + "\"");
        if (auto p = j.find("p"); p != j.end()) d.p = integer(*p, "/p");
        for (const auto& [key, value] : j.items())
            if (key != "schema_version" && key != "kind" && key != "p") d.body[key] = value;
        return d;
    } catch (const InputError& e) {
        throw InputError(name + ": " + e.what());
    }
}

Document read_document(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError(path + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_document(ss.str(), path);
}

Prime document_prime(const Document& d, std::optional<long> requested) {
    if (d.p && requested && *d.p != *requested)
        throw InputError(d.name + ": at /p: document is over p = " + std::to_string(*d.p) + " but p = " +
                         std::to_string(*requested) + " was requested");
    const long p = d.p ? *d.p : requested ? *requested : 0;
    if (p == 0) throw InputError(d.name + ": the prime is given neither in the document nor with --p");
    try {
        return Prime(p);
    } catch (const std::exception& e) {
        throw InputError(d.name + ": at /p: " + e.what());
    }
}

namespace {

template <class F>
auto decode(const Document& d, const char* kind, F&& f) -> decltype(f()) {
    if (d.kind != kind) throw InputError(d.name + ": at /kind: expected a " + kind + ", got a " + d.kind);
    try {
        return f();
    } catch (const InputError& e) {
        throw InputError(d.name + ": " + e.what());
    }
}

}  // namespace

BoundedComplex as_bounded(const Document& d, Prime p) {
    return decode(d, "complex", [&] { return bounded_from_json(d.body, p, ""); });
}
PeriodicComplex as_periodic(const Document& d, Prime p) {
    return decode(d, "periodic_complex", [&] { return periodic_from_json(d.body, p, ""); });
}
AdamsModule as_module(const Document& d, Prime p) {
    return decode(d, "module", [&] { return module_from_json(d.body, p, ""); });
}
ChainMap as_chain_map(const Document& d, Prime p) {
    return decode(d, "chain_map", [&] { return chain_map_from_json(d.body, p, ""); });
}
PeriodicMap as_periodic_map(const Document& d, Prime p) {
    return decode(d, "periodic_map", [&] { return periodic_map_from_json(d.body, p, ""); });
}
ChainMapToPeriodic as_chain_map_to_periodic(const Document& d, Prime p) {
    return decode(d, "chain_map_to_periodic", [&] { return chain_map_to_periodic_from_json(d.body, p, ""); });
}
DetectionFamily as_family(const Document& d, Prime p) {
    return decode(d, "family", [&] { return family_from_json(d.body, p, ""); });
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace qpc::io
