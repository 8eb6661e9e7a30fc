#include "qpc/complex.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace qpc {

namespace {

long floor_div(long a, long b) {
    long q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

long floor_mod(long a, long b) { return a - b * floor_div(a, b); }

std::string join(const std::vector<std::string>& lines) {
    std::string out;
    for (const auto& l : lines) {
        if (!out.empty()) out += "; ";
        out += l;
    }
    return out;
}

/// A direct sum with keyed summands and their column/row offsets.
struct Layout {
    Prime p;
    std::vector<long> keys;
    std::vector<AdamsModule> parts;
    std::vector<Eigen::Index> offsets;
    Eigen::Index total = 0;

    explicit Layout(Prime prime) : p(prime) {}

    void add(long key, AdamsModule m) {
        keys.push_back(key);
        offsets.push_back(total);
        total += m.size();
        parts.push_back(std::move(m));
    }

    std::optional<std::size_t> find(long key) const {
        for (std::size_t i = 0; i < keys.size(); ++i)
            if (keys[i] == key) return i;
        return std::nullopt;
    }

    AdamsModule sum() const {
        if (parts.empty()) return AdamsModule::zero(p);
        CyclicSum u(p);
        for (const auto& m : parts) u = u + m.underlying();
        Matrix psi = Matrix::Zero(total, total);
        for (std::size_t i = 0; i < parts.size(); ++i)
            psi.block(offsets[i], offsets[i], parts[i].size(), parts[i].size()) = parts[i].psi().matrix;
        return AdamsModule::unchecked(u, psi);
    }
};

/// Accumulates blocks of a map between two layouts.
struct BlockMatrix {
    const Layout& source;
    const Layout& target;
    Matrix m;

    BlockMatrix(const Layout& s, const Layout& t) : source(s), target(t), m(Matrix::Zero(t.total, s.total)) {}

    void add(std::size_t ti, std::size_t si, const Matrix& block) {
        m.block(target.offsets[ti], source.offsets[si], block.rows(), block.cols()) += block;
    }

    AdamsMap build(const AdamsModule& src, const AdamsModule& tgt) const { return AdamsMap::make(src, tgt, m); }
    AdamsMap build() const { return build(source.sum(), target.sum()); }
};

void require_config(const Config& a, const Config& b, const char* what) {
    if (!(a == b)) throw ValidationError(std::string(what) + ": configurations differ (" + a.str() + " vs " + b.str() + ")");
}

AdamsMap zero_map(const AdamsModule& s, const AdamsModule& t) { return AdamsMap::zero(s, t); }

MatrixMap homology_map_of(const AdamsMap& s_in, const AdamsMap& s_out, const AdamsMap& t_in, const AdamsMap& t_out,
                          const AdamsMap& f) {
    const auto hs = homology_subquotient(s_in.map, s_out.map);
    const auto ht = homology_subquotient(t_in.map, t_out.map);
    return induced_map(hs, ht, f.matrix());
}

}  // namespace

std::string Config::str() const {
    std::ostringstream os;
    os << "p=" << p.value() << " N=" << period << " w=" << weight;
    return os.str();
}

// ---------------------------------------------------------------------------
// Bounded complexes

BoundedComplex BoundedComplex::make(Prime p, long lo, std::vector<AdamsModule> levels, std::vector<AdamsMap> diffs) {
    const std::size_t expected = levels.empty() ? 0 : levels.size() - 1;
    if (diffs.size() != expected)
        throw ValidationError("bounded complex: expected " + std::to_string(expected) + " differentials, got " +
                              std::to_string(diffs.size()));
    for (const auto& m : levels)
        if (!(m.prime() == p)) throw ValidationError("bounded complex: level over a different prime");
    std::vector<std::string> errors;
    for (std::size_t i = 0; i < diffs.size(); ++i) {
        const long n = lo + static_cast<long>(i) + 1;
        if (!(diffs[i].source == levels[i + 1]) || !(diffs[i].target == levels[i]))
            errors.push_back("d_" + std::to_string(n) + " does not map X_" + std::to_string(n) + " to X_" +
                             std::to_string(n - 1));
    }
    if (errors.empty())
        for (std::size_t i = 1; i < diffs.size(); ++i)
            if (!compose(diffs[i - 1], diffs[i]).is_zero())
                errors.push_back("d o d != 0 at degree " + std::to_string(lo + static_cast<long>(i) + 1));
    if (!errors.empty()) throw ValidationError("bounded complex: " + join(errors));
    return BoundedComplex(p, lo, std::move(levels), std::move(diffs));
}

BoundedComplex BoundedComplex::concentrated(const AdamsModule& m, long degree) {
    return make(m.prime(), degree, {m}, {});
}

BoundedComplex BoundedComplex::disk(const AdamsModule& m, long n) {
    return make(m.prime(), n - 1, {m, m}, {AdamsMap::identity(m)});
}

const AdamsModule& BoundedComplex::level(long n) const {
    if (n < lo_ || n > hi()) return zero_;
    return levels_[static_cast<std::size_t>(n - lo_)];
}

AdamsMap BoundedComplex::diff(long n) const {
    if (n > lo_ && n <= hi()) return diffs_[static_cast<std::size_t>(n - lo_ - 1)];
    return zero_map(level(n), level(n - 1));
}

AdamsModule BoundedComplex::homology(long n) const { return homology_at(diff(n + 1), diff(n)); }

std::optional<std::pair<long, long>> BoundedComplex::support() const {
    std::optional<std::pair<long, long>> s;
    for (long n = lo_; n <= hi(); ++n) {
        if (level(n).is_zero()) continue;
        if (!s) s = std::make_pair(n, n);
        s->second = n;
    }
    return s;
}

std::string BoundedComplex::str() const {
    if (empty()) return "0";
    std::ostringstream os;
    for (long n = hi(); n >= lo_; --n) {
        os << "  X_" << n << " = " << level(n).str();
        if (n > lo_) os << "  d_" << n << " = " << diff(n).map.matrix.rows() << "x" << diff(n).map.matrix.cols();
        os << "\n";
    }
    return os.str();
}

BoundedComplex shift(const BoundedComplex& x, long m) {
    if (x.empty()) return x;
    std::vector<AdamsModule> levels;
    std::vector<AdamsMap> diffs;
    for (long n = x.lo(); n <= x.hi(); ++n) {
        levels.push_back(x.level(n));
        if (n > x.lo()) diffs.push_back(scaled(x.diff(n), PLocal(sign(m))));
    }
    return BoundedComplex::make(x.prime(), x.lo() + m, std::move(levels), std::move(diffs));
}

BoundedComplex twist(const BoundedComplex& x, long t) {
    if (x.empty()) return x;
    std::vector<AdamsModule> levels;
    std::vector<AdamsMap> diffs;
    for (long n = x.lo(); n <= x.hi(); ++n) {
        levels.push_back(twist(x.level(n), t));
        if (n > x.lo()) diffs.push_back(twist(x.diff(n), t));
    }
    return BoundedComplex::make(x.prime(), x.lo(), std::move(levels), std::move(diffs));
}

BoundedComplex direct_sum(const BoundedComplex& a, const BoundedComplex& b) {
    if (a.empty()) return b;
    if (b.empty()) return a;
    const long lo = std::min(a.lo(), b.lo()), hi = std::max(a.hi(), b.hi());
    std::vector<AdamsModule> levels;
    std::vector<AdamsMap> diffs;
    for (long n = lo; n <= hi; ++n) {
        levels.push_back(a.level(n) + b.level(n));
        if (n > lo) diffs.push_back(direct_sum(a.diff(n), b.diff(n)));
    }
    return BoundedComplex::make(a.prime(), lo, std::move(levels), std::move(diffs));
}

// ---------------------------------------------------------------------------
// Chain maps

ChainMap ChainMap::make(BoundedComplex source, BoundedComplex target, long lo, std::vector<AdamsMap> components) {
    ChainMap f{std::move(source), std::move(target), lo, std::move(components)};
    std::vector<std::string> errors;
    for (long n = f.range_lo(); n <= f.range_hi(); ++n) {
        const auto& c = f.components[static_cast<std::size_t>(n - lo)];
        if (!(c.source == f.source.level(n)) || !(c.target == f.target.level(n)))
            errors.push_back("component " + std::to_string(n) + " has the wrong source or target");
    }
    if (errors.empty()) errors = f.chain_errors();
    if (!errors.empty()) throw ValidationError("chain map: " + join(errors));
    return f;
}

ChainMap ChainMap::zero(BoundedComplex source, BoundedComplex target) {
    return ChainMap{std::move(source), std::move(target), 0, {}};
}

ChainMap ChainMap::identity(const BoundedComplex& x) {
    std::vector<AdamsMap> comps;
    for (long n = x.lo(); n <= x.hi(); ++n) comps.push_back(AdamsMap::identity(x.level(n)));
    return ChainMap{x, x, x.lo(), std::move(comps)};
}

long ChainMap::range_lo() const { return lo; }
long ChainMap::range_hi() const { return lo + static_cast<long>(components.size()) - 1; }

AdamsMap ChainMap::component(long n) const {
    if (n >= range_lo() && n <= range_hi()) return components[static_cast<std::size_t>(n - lo)];
    return zero_map(source.level(n), target.level(n));
}

std::vector<std::string> ChainMap::chain_errors() const {
    std::vector<std::string> errors;
    long a = std::min(source.lo(), target.lo()), b = std::max(source.hi(), target.hi()) + 1;
    if (!components.empty()) {
        a = std::min(a, range_lo());
        b = std::max(b, range_hi() + 1);
    }
    for (long n = a; n <= b; ++n)
        if (!(compose(target.diff(n), component(n)) == compose(component(n - 1), source.diff(n))))
            errors.push_back("chain condition fails at degree " + std::to_string(n));
    return errors;
}

namespace {

std::pair<long, long> union_range(const ChainMap& f, const ChainMap& g) {
    long lo = std::min(f.source.lo(), f.target.lo()), hi = std::max(f.source.hi(), f.target.hi());
    lo = std::min({lo, g.source.lo(), g.target.lo()});
    hi = std::max({hi, g.source.hi(), g.target.hi()});
    return {lo, hi};
}

}  // namespace

ChainMap compose(const ChainMap& g, const ChainMap& f) {
    if (!(f.target == g.source)) throw ValidationError("compose: chain maps are not composable");
    const auto [lo, hi] = union_range(f, g);
    std::vector<AdamsMap> comps;
    for (long n = lo; n <= hi; ++n) comps.push_back(compose(g.component(n), f.component(n)));
    return ChainMap{f.source, g.target, lo, std::move(comps)};
}

ChainMap operator+(const ChainMap& a, const ChainMap& b) {
    if (!(a.source == b.source) || !(a.target == b.target)) throw ValidationError("sum of chain maps with different endpoints");
    const auto [lo, hi] = union_range(a, b);
    std::vector<AdamsMap> comps;
    for (long n = lo; n <= hi; ++n) comps.push_back(a.component(n) + b.component(n));
    return ChainMap{a.source, a.target, lo, std::move(comps)};
}

ChainMap shift(const ChainMap& f, long m) {
    return ChainMap{shift(f.source, m), shift(f.target, m), f.lo + m, f.components};
}

ChainMap twist(const ChainMap& f, long t) {
    std::vector<AdamsMap> comps;
    for (const auto& c : f.components) comps.push_back(twist(c, t));
    return ChainMap{twist(f.source, t), twist(f.target, t), f.lo, std::move(comps)};
}

MatrixMap homology_map(const ChainMap& f, long n) {
    return homology_map_of(f.source.diff(n + 1), f.source.diff(n), f.target.diff(n + 1), f.target.diff(n), f.component(n));
}

bool is_quasi_iso(const ChainMap& f) {
    long lo = std::min(f.source.lo(), f.target.lo()), hi = std::max(f.source.hi(), f.target.hi());
    for (long n = lo; n <= hi; ++n)
        if (!is_isomorphism(homology_map(f, n))) return false;
    return true;
}

namespace {

Layout bounded_tensor_layout(const BoundedComplex& a, const BoundedComplex& b, long n) {
    Layout l(a.prime());
    for (long i = a.lo(); i <= a.hi(); ++i) {
        const long j = n - i;
        if (j < b.lo() || j > b.hi()) continue;
        l.add(i, smash(a.level(i), b.level(j)));
    }
    return l;
}

}  // namespace

BoundedComplex tensor(const BoundedComplex& a, const BoundedComplex& b) {
    if (a.empty() || b.empty()) return BoundedComplex::zero(a.prime());
    const long lo = a.lo() + b.lo(), hi = a.hi() + b.hi();
    std::vector<Layout> layouts;
    std::vector<AdamsModule> levels;
    for (long n = lo; n <= hi; ++n) {
        layouts.push_back(bounded_tensor_layout(a, b, n));
        levels.push_back(layouts.back().sum());
    }
    std::vector<AdamsMap> diffs;
    for (long n = lo + 1; n <= hi; ++n) {
        const Layout& src = layouts[static_cast<std::size_t>(n - lo)];
        const Layout& tgt = layouts[static_cast<std::size_t>(n - lo - 1)];
        BlockMatrix bm(src, tgt);
        for (std::size_t s = 0; s < src.keys.size(); ++s) {
            const long i = src.keys[s], j = n - i;
            if (auto t = tgt.find(i - 1))
                bm.add(*t, s, kronecker(a.diff(i).matrix(), Matrix::Identity(b.level(j).size(), b.level(j).size())));
            if (auto t = tgt.find(i))
                bm.add(*t, s, kronecker(Matrix::Identity(a.level(i).size(), a.level(i).size()), b.diff(j).matrix()) *
                                  PLocal(sign(i)));
        }
        diffs.push_back(bm.build(levels[static_cast<std::size_t>(n - lo)], levels[static_cast<std::size_t>(n - lo - 1)]));
    }
    return BoundedComplex::make(a.prime(), lo, std::move(levels), std::move(diffs));
}

ChainMap tensor(const ChainMap& f, const ChainMap& g) {
    const BoundedComplex src = tensor(f.source, g.source), tgt = tensor(f.target, g.target);
    if (src.empty() || tgt.empty()) return ChainMap::zero(src, tgt);
    const long lo = std::min(src.lo(), tgt.lo()), hi = std::max(src.hi(), tgt.hi());
    std::vector<AdamsMap> comps;
    for (long n = lo; n <= hi; ++n) {
        const Layout ls = bounded_tensor_layout(f.source, g.source, n);
        const Layout lt = bounded_tensor_layout(f.target, g.target, n);
        BlockMatrix bm(ls, lt);
        for (std::size_t s = 0; s < ls.keys.size(); ++s)
            if (auto t = lt.find(ls.keys[s])) bm.add(*t, s, smash(f.component(ls.keys[s]), g.component(n - ls.keys[s])).matrix());
        comps.push_back(bm.build(src.level(n), tgt.level(n)));
    }
    return ChainMap::make(src, tgt, lo, std::move(comps));
}

// ---------------------------------------------------------------------------
// Periodic complexes

PeriodicComplex PeriodicComplex::make(Config cfg, std::vector<AdamsModule> levels, std::vector<AdamsMap> diffs,
                                      AdamsMap wrap) {
    if (cfg.period < 1) throw ValidationError("periodic complex: period must be positive");
    const auto n = static_cast<std::size_t>(cfg.period);
    if (levels.size() != n || diffs.size() != n - 1)
        throw ValidationError("periodic complex: expected " + std::to_string(n) + " levels and " + std::to_string(n - 1) +
                              " differentials");
    std::vector<std::string> errors;
    for (const auto& m : levels)
        if (!(m.prime() == cfg.p)) errors.push_back("level over a different prime");
    for (std::size_t i = 0; i + 1 < n; ++i)
        if (!(diffs[i].source == levels[i + 1]) || !(diffs[i].target == levels[i]))
            errors.push_back("d_" + std::to_string(i + 1) + " does not map X_" + std::to_string(i + 1) + " to X_" +
                             std::to_string(i));
    if (!(wrap.source == levels[0]) || !(wrap.target == twist(levels[n - 1], cfg.weight)))
        errors.push_back("wrap does not map X_0 to twist(X_" + std::to_string(n - 1) + ", " + std::to_string(cfg.weight) + ")");
    if (!errors.empty()) throw ValidationError("periodic complex: " + join(errors));
    PeriodicComplex x(cfg, std::move(levels), std::move(diffs), std::move(wrap));
    errors = x.errors();
    if (!errors.empty()) throw ValidationError("periodic complex: " + join(errors));
    return x;
}

PeriodicComplex PeriodicComplex::unit(Config cfg) {
    std::vector<AdamsModule> levels(static_cast<std::size_t>(cfg.period), AdamsModule::zero(cfg.p));
    levels[0] = AdamsModule::unit(cfg.p);
    std::vector<AdamsMap> diffs;
    for (long n = 1; n < cfg.period; ++n)
        diffs.push_back(zero_map(levels[static_cast<std::size_t>(n)], levels[static_cast<std::size_t>(n - 1)]));
    AdamsMap wrap = zero_map(levels[0], twist(levels.back(), cfg.weight));
    return make(cfg, std::move(levels), std::move(diffs), std::move(wrap));
}

PeriodicComplex PeriodicComplex::zero(Config cfg) {
    const AdamsModule z = AdamsModule::zero(cfg.p);
    std::vector<AdamsModule> levels(static_cast<std::size_t>(cfg.period), z);
    std::vector<AdamsMap> diffs(static_cast<std::size_t>(cfg.period - 1), zero_map(z, z));
    return make(cfg, std::move(levels), std::move(diffs), zero_map(z, z));
}

AdamsModule PeriodicComplex::level(long n) const {
    const long r = floor_mod(n, cfg_.period), k = floor_div(n, cfg_.period);
    return twist(levels_[static_cast<std::size_t>(r)], -k * cfg_.weight);
}

AdamsMap PeriodicComplex::diff(long n) const {
    const long r = floor_mod(n, cfg_.period), k = floor_div(n, cfg_.period);
    const AdamsMap& base = r == 0 ? wrap_ : diffs_[static_cast<std::size_t>(r - 1)];
    AdamsMap d = twist(base, -k * cfg_.weight);
    if (sign(k * cfg_.period) < 0) d = -d;
    return d;
}

AdamsModule PeriodicComplex::homology(long n) const { return homology_at(diff(n + 1), diff(n)); }

std::vector<AdamsModule> PeriodicComplex::homology() const {
    std::vector<AdamsModule> h;
    for (long n = 0; n < cfg_.period; ++n) h.push_back(homology(n));
    return h;
}

std::vector<std::string> PeriodicComplex::errors() const {
    std::vector<std::string> errors;
    for (long n = 1; n <= cfg_.period; ++n)
        if (!compose(diff(n - 1), diff(n)).is_zero()) errors.push_back("d o d != 0 at degree " + std::to_string(n));
    return errors;
}

std::string PeriodicComplex::str() const {
    std::ostringstream os;
    for (long n = cfg_.period - 1; n >= 0; --n) os << "  X_" << n << " = " << levels_[static_cast<std::size_t>(n)].str() << "\n";
    return os.str();
}

PeriodicComplex shift(const PeriodicComplex& x, long m) {
    const long n = x.period();
    const PLocal s(sign(m));
    std::vector<AdamsModule> levels;
    std::vector<AdamsMap> diffs;
    for (long i = 0; i < n; ++i) {
        levels.push_back(x.level(i - m));
        if (i > 0) diffs.push_back(scaled(x.diff(i - m), s));
    }
    return PeriodicComplex::make(x.config(), std::move(levels), std::move(diffs), scaled(x.diff(-m), s));
}

PeriodicComplex twist(const PeriodicComplex& x, long t) {
    std::vector<AdamsModule> levels;
    std::vector<AdamsMap> diffs;
    for (const auto& m : x.window()) levels.push_back(twist(m, t));
    for (const auto& d : x.window_diffs()) diffs.push_back(twist(d, t));
    return PeriodicComplex::make(x.config(), std::move(levels), std::move(diffs), twist(x.wrap(), t));
}

PeriodicComplex direct_sum(const PeriodicComplex& a, const PeriodicComplex& b) {
    require_config(a.config(), b.config(), "direct sum");
    std::vector<AdamsModule> levels;
    std::vector<AdamsMap> diffs;
    for (long n = 0; n < a.period(); ++n) {
        levels.push_back(a.level(n) + b.level(n));
        if (n > 0) diffs.push_back(direct_sum(a.diff(n), b.diff(n)));
    }
    return PeriodicComplex::make(a.config(), std::move(levels), std::move(diffs), direct_sum(a.wrap(), b.wrap()));
}

// ---------------------------------------------------------------------------
// Periodic maps

std::string PeriodicMapReport::str() const {
    if (valid) return "valid periodic map";
    return "invalid periodic map: " + join(diagnostics);
}

PeriodicMapReport validate_periodic_map(const PeriodicComplex& source, const PeriodicComplex& target,
                                        const std::vector<AdamsMap>& components) {
    PeriodicMapReport r;
    auto fail = [&](std::string s) {
        r.valid = false;
        r.diagnostics.push_back(std::move(s));
    };
    if (!(source.config() == target.config())) {
        fail("configurations differ");
        return r;
    }
    const long n = source.period();
    if (static_cast<long>(components.size()) != n) {
        fail("expected " + std::to_string(n) + " components, got " + std::to_string(components.size()));
        return r;
    }
    for (long i = 0; i < n; ++i) {
        const auto& c = components[static_cast<std::size_t>(i)];
        if (!(c.source == source.level(i)) || !(c.target == target.level(i)))
            fail("component " + std::to_string(i) + " has the wrong source or target");
    }
    if (!r.valid) return r;
    const Config& cfg = source.config();
    for (long i = 1; i < n; ++i) {
        const auto& fi = components[static_cast<std::size_t>(i)];
        const auto& fj = components[static_cast<std::size_t>(i - 1)];
        if (!(compose(target.diff(i), fi) == compose(fj, source.diff(i))))
            fail("chain condition fails at degree " + std::to_string(i));
    }
    const AdamsMap last = twist(components.back(), cfg.weight);
    if (!(compose(target.wrap(), components.front()) == compose(last, source.wrap())))
        fail("chain condition fails at the wrap (degree 0)");
    return r;
}

PeriodicMap PeriodicMap::make(PeriodicComplex source, PeriodicComplex target, std::vector<AdamsMap> components) {
    const auto report = validate_periodic_map(source, target, components);
    if (!report.valid) throw ValidationError(report.str());
    return PeriodicMap{std::move(source), std::move(target), std::move(components)};
}

PeriodicMap PeriodicMap::zero(PeriodicComplex source, PeriodicComplex target) {
    require_config(source.config(), target.config(), "zero map");
    std::vector<AdamsMap> comps;
    for (long n = 0; n < source.period(); ++n) comps.push_back(zero_map(source.level(n), target.level(n)));
    return PeriodicMap{std::move(source), std::move(target), std::move(comps)};
}

PeriodicMap PeriodicMap::identity(const PeriodicComplex& x) {
    std::vector<AdamsMap> comps;
    for (const auto& m : x.window()) comps.push_back(AdamsMap::identity(m));
    return PeriodicMap{x, x, std::move(comps)};
}

AdamsMap PeriodicMap::component(long n) const {
    const long period = source.period();
    const long r = floor_mod(n, period), k = floor_div(n, period);
    return twist(components[static_cast<std::size_t>(r)], -k * source.weight());
}

PeriodicMap compose(const PeriodicMap& g, const PeriodicMap& f) {
    if (!(f.target == g.source)) throw ValidationError("compose: periodic maps are not composable");
    std::vector<AdamsMap> comps;
    for (std::size_t i = 0; i < f.components.size(); ++i) comps.push_back(compose(g.components[i], f.components[i]));
    return PeriodicMap{f.source, g.target, std::move(comps)};
}

PeriodicMap operator+(const PeriodicMap& a, const PeriodicMap& b) {
    if (!(a.source == b.source) || !(a.target == b.target)) throw ValidationError("sum of periodic maps with different endpoints");
    std::vector<AdamsMap> comps;
    for (std::size_t i = 0; i < a.components.size(); ++i) comps.push_back(a.components[i] + b.components[i]);
    return PeriodicMap{a.source, a.target, std::move(comps)};
}

PeriodicMap operator-(const PeriodicMap& a) {
    std::vector<AdamsMap> comps;
    for (const auto& c : a.components) comps.push_back(-c);
    return PeriodicMap{a.source, a.target, std::move(comps)};
}

PeriodicMap shift(const PeriodicMap& f, long m) {
    std::vector<AdamsMap> comps;
    for (long n = 0; n < f.source.period(); ++n) comps.push_back(f.component(n - m));
    return PeriodicMap{shift(f.source, m), shift(f.target, m), std::move(comps)};
}

PeriodicMap copair(const PeriodicMap& f, const PeriodicMap& g) {
    if (!(f.target == g.target)) throw ValidationError("copair: targets differ");
    const PeriodicComplex src = direct_sum(f.source, g.source);
    std::vector<AdamsMap> comps;
    for (long n = 0; n < src.period(); ++n)
        comps.push_back(AdamsMap::make(src.level(n), f.target.level(n),
                                       hconcat(f.components[static_cast<std::size_t>(n)].matrix(),
                                               g.components[static_cast<std::size_t>(n)].matrix())));
    return PeriodicMap{src, f.target, std::move(comps)};
}

PeriodicMap pair(const PeriodicMap& f, const PeriodicMap& g) {
    if (!(f.source == g.source)) throw ValidationError("pair: sources differ");
    const PeriodicComplex tgt = direct_sum(f.target, g.target);
    std::vector<AdamsMap> comps;
    for (long n = 0; n < tgt.period(); ++n)
        comps.push_back(AdamsMap::make(f.source.level(n), tgt.level(n),
                                       vconcat(f.components[static_cast<std::size_t>(n)].matrix(),
                                               g.components[static_cast<std::size_t>(n)].matrix())));
    return PeriodicMap{f.source, tgt, std::move(comps)};
}

MatrixMap homology_map(const PeriodicMap& f, long n) {
    return homology_map_of(f.source.diff(n + 1), f.source.diff(n), f.target.diff(n + 1), f.target.diff(n), f.component(n));
}

bool is_quasi_iso(const PeriodicMap& f) {
    for (long n = 0; n < f.source.period(); ++n)
        if (!is_isomorphism(homology_map(f, n))) return false;
    return true;
}

bool is_isomorphism(const PeriodicMap& f) {
    for (const auto& c : f.components)
        if (!is_isomorphism(c.map)) return false;
    return true;
}

PeriodicCokernel cokernel(const PeriodicMap& f) {
    const Config& cfg = f.source.config();
    const long n = cfg.period;
    std::vector<Subquotient> cok;
    std::vector<AdamsModule> levels;
    std::vector<AdamsMap> proj;
    for (long i = 0; i < n; ++i) {
        const auto& c = f.components[static_cast<std::size_t>(i)];
        cok.push_back(cokernel_subquotient(c.map));
        const Subquotient& q = cok.back();
        levels.push_back(AdamsModule::unchecked(q.module(), induced_map(q, q, c.target.psi().matrix).matrix));
        const Eigen::Index t = c.target.size();
        proj.push_back(AdamsMap::make(c.target, levels.back(), q.project(Matrix::Identity(t, t))));
    }
    std::vector<AdamsMap> diffs;
    for (long i = 1; i < n; ++i) {
        const auto a = static_cast<std::size_t>(i);
        diffs.push_back(AdamsMap::make(levels[a], levels[a - 1], induced_map(cok[a], cok[a - 1], f.target.diff(i).matrix()).matrix));
    }
    AdamsMap wrap = AdamsMap::make(levels[0], twist(levels.back(), cfg.weight),
                                   induced_map(cok.front(), cok.back(), f.target.wrap().matrix()).matrix);
    PeriodicComplex object = PeriodicComplex::make(cfg, std::move(levels), std::move(diffs), std::move(wrap));
    PeriodicMap projection = PeriodicMap::make(f.target, object, std::move(proj));
    return PeriodicCokernel{std::move(object), std::move(projection)};
}

// ---------------------------------------------------------------------------
// Periodification

namespace {

/// Summands of (PM)_r: key k, module twist(M_{r+kN}, kw), k ascending.
Layout periodic_layout(const BoundedComplex& m, const Config& cfg, long r) {
    Layout l(cfg.p);
    if (m.empty()) return l;
    const long kmin = floor_div(m.lo() - r + cfg.period - 1, cfg.period);
    for (long k = kmin; r + k * cfg.period <= m.hi(); ++k) l.add(k, twist(m.level(r + k * cfg.period), k * cfg.weight));
    return l;
}

}  // namespace

PeriodicComplex periodify(const BoundedComplex& m, Config cfg) {
    if (m.empty()) return PeriodicComplex::zero(cfg);
    const long n = cfg.period;
    std::vector<Layout> layouts;
    std::vector<AdamsModule> levels;
    for (long r = 0; r < n; ++r) {
        layouts.push_back(periodic_layout(m, cfg, r));
        levels.push_back(layouts.back().sum());
    }
    std::vector<AdamsMap> diffs;
    for (long r = 1; r < n; ++r) {
        const Layout& src = layouts[static_cast<std::size_t>(r)];
        const Layout& tgt = layouts[static_cast<std::size_t>(r - 1)];
        BlockMatrix bm(src, tgt);
        for (std::size_t s = 0; s < src.keys.size(); ++s) {
            const long k = src.keys[s];
            if (auto t = tgt.find(k)) bm.add(*t, s, m.diff(r + k * n).matrix() * PLocal(sign(k * n)));
        }
        diffs.push_back(bm.build(levels[static_cast<std::size_t>(r)], levels[static_cast<std::size_t>(r - 1)]));
    }
    const Layout& src = layouts.front();
    const Layout& tgt = layouts.back();
    BlockMatrix bm(src, tgt);
    for (std::size_t s = 0; s < src.keys.size(); ++s) {
        const long k = src.keys[s];
        if (auto t = tgt.find(k - 1)) bm.add(*t, s, m.diff(k * n).matrix() * PLocal(sign(k * n)));
    }
    AdamsMap wrap = bm.build(levels.front(), twist(levels.back(), cfg.weight));
    return PeriodicComplex::make(cfg, std::move(levels), std::move(diffs), std::move(wrap));
}

PeriodicMap periodify(const ChainMap& f, Config cfg) {
    const PeriodicComplex src = periodify(f.source, cfg), tgt = periodify(f.target, cfg);
    std::vector<AdamsMap> comps;
    for (long r = 0; r < cfg.period; ++r) {
        const Layout ls = periodic_layout(f.source, cfg, r), lt = periodic_layout(f.target, cfg, r);
        BlockMatrix bm(ls, lt);
        for (std::size_t s = 0; s < ls.keys.size(); ++s)
            if (auto t = lt.find(ls.keys[s])) bm.add(*t, s, f.component(r + ls.keys[s] * cfg.period).matrix());
        comps.push_back(bm.build(src.level(r), tgt.level(r)));
    }
    return PeriodicMap::make(src, tgt, std::move(comps));
}

PeriodicComplex coperiodify(const BoundedComplex& m, Config cfg) {
    // Product over all k of twist(M_{n+kN}, kw). Factors vanish outside the
    // support, so the product is indexed by the degrees of M.
    const long n = cfg.period;
    std::map<long, std::map<long, AdamsModule>> factors;  // window degree -> k -> factor
    for (long r = 0; r < n; ++r) factors[r];
    for (long d = m.lo(); !m.empty() && d <= m.hi(); ++d) {
        const long r = floor_mod(d, n), k = floor_div(d, n);
        factors[r].emplace(k, twist(m.level(d), k * cfg.weight));
    }
    std::vector<Layout> layouts;
    std::vector<AdamsModule> levels;
    for (long r = 0; r < n; ++r) {
        Layout l(cfg.p);
        for (const auto& [k, f] : factors[r]) l.add(k, f);
        layouts.push_back(l);
        levels.push_back(l.sum());
    }
    auto component_map = [&](long r_src, long r_tgt, long k_offset, const AdamsModule& src, const AdamsModule& tgt) {
        const Layout& ls = layouts[static_cast<std::size_t>(r_src)];
        const Layout& lt = layouts[static_cast<std::size_t>(r_tgt)];
        BlockMatrix bm(ls, lt);
        for (std::size_t t = 0; t < lt.keys.size(); ++t) {
            const long k = lt.keys[t] + k_offset;
            if (auto s = ls.find(k)) bm.add(t, *s, m.diff(r_src + k * n).matrix() * PLocal(sign(k * n)));
        }
        return bm.build(src, tgt);
    };
    std::vector<AdamsMap> diffs;
    for (long r = 1; r < n; ++r)
        diffs.push_back(component_map(r, r - 1, 0, levels[static_cast<std::size_t>(r)], levels[static_cast<std::size_t>(r - 1)]));
    AdamsMap wrap = component_map(0, n - 1, 1, levels.front(), twist(levels.back(), cfg.weight));
    return PeriodicComplex::make(cfg, std::move(levels), std::move(diffs), std::move(wrap));
}

ChainMapToPeriodic ChainMapToPeriodic::make(BoundedComplex source, PeriodicComplex target, std::vector<AdamsMap> components) {
    if (source.empty()) return ChainMapToPeriodic{std::move(source), std::move(target), {}};
    if (static_cast<long>(components.size()) != source.hi() - source.lo() + 1)
        throw ValidationError("chain map to periodic complex: wrong number of components");
    ChainMapToPeriodic g{std::move(source), std::move(target), std::move(components)};
    std::vector<std::string> errors;
    for (long n = g.source.lo(); n <= g.source.hi(); ++n) {
        const auto& c = g.components[static_cast<std::size_t>(n - g.source.lo())];
        if (!(c.source == g.source.level(n)) || !(c.target == g.target.level(n)))
            errors.push_back("component " + std::to_string(n) + " has the wrong source or target");
    }
    if (errors.empty())
        for (long n = g.source.lo(); n <= g.source.hi() + 1; ++n)
            if (!(compose(g.target.diff(n), g.component(n)) == compose(g.component(n - 1), g.source.diff(n))))
                errors.push_back("chain condition fails at degree " + std::to_string(n));
    if (!errors.empty()) throw ValidationError("chain map to periodic complex: " + join(errors));
    return g;
}

AdamsMap ChainMapToPeriodic::component(long n) const {
    if (!source.empty() && n >= source.lo() && n <= source.hi()) return components[static_cast<std::size_t>(n - source.lo())];
    return zero_map(source.level(n), target.level(n));
}

ChainMapToPeriodic flatten(const PeriodicMap& f, const BoundedComplex& m) {
    const Config& cfg = f.source.config();
    if (!(f.source == periodify(m, cfg))) throw ValidationError("flatten: source is not the periodification of the given complex");
    std::vector<AdamsMap> comps;
    for (long n = m.lo(); !m.empty() && n <= m.hi(); ++n) {
        const long r = floor_mod(n, cfg.period), q = floor_div(n, cfg.period);
        const Layout l = periodic_layout(m, cfg, r);
        const std::size_t i = *l.find(q);
        const Matrix cols = f.components[static_cast<std::size_t>(r)].matrix().middleCols(l.offsets[i], l.parts[i].size());
        comps.push_back(AdamsMap::make(m.level(n), f.target.level(n), cols));
    }
    return ChainMapToPeriodic::make(m, f.target, std::move(comps));
}

PeriodicMap extend(const ChainMapToPeriodic& g) {
    const Config& cfg = g.target.config();
    const PeriodicComplex src = periodify(g.source, cfg);
    std::vector<AdamsMap> comps;
    for (long r = 0; r < cfg.period; ++r) {
        const Layout l = periodic_layout(g.source, cfg, r);
        Matrix m = Matrix::Zero(g.target.level(r).size(), 0);
        for (const long k : l.keys) m = hconcat(m, g.component(r + k * cfg.period).matrix());
        comps.push_back(AdamsMap::make(src.level(r), g.target.level(r), m));
    }
    return PeriodicMap::make(src, g.target, std::move(comps));
}

ChainMapToPeriodic unit_map(const BoundedComplex& m, Config cfg) {
    const PeriodicComplex pm = periodify(m, cfg);
    std::vector<AdamsMap> comps;
    for (long n = m.lo(); !m.empty() && n <= m.hi(); ++n) {
        const long r = floor_mod(n, cfg.period), q = floor_div(n, cfg.period);
        const Layout l = periodic_layout(m, cfg, r);
        const std::size_t i = *l.find(q);
        Matrix inc = Matrix::Zero(l.total, l.parts[i].size());
        inc.block(l.offsets[i], 0, l.parts[i].size(), l.parts[i].size()) = Matrix::Identity(l.parts[i].size(), l.parts[i].size());
        comps.push_back(AdamsMap::make(m.level(n), pm.level(n), inc));
    }
    return ChainMapToPeriodic::make(m, pm, std::move(comps));
}

// ---------------------------------------------------------------------------
// PI-modules

PIModule to_module(const PeriodicComplex& x) {
    const Config& cfg = x.config();
    const long n = cfg.period;
    PIModule m{cfg, -n, {}, {}, {}};
    for (long d = -n; d < 2 * n; ++d) {
        m.levels.push_back(x.level(d));
        if (d > -n) m.diffs.push_back(x.diff(d));
    }
    for (long k = -1; k <= 1; ++k) {
        std::vector<AdamsMap> row;
        for (long d = -n; d < 2 * n; ++d) {
            const AdamsModule src = smash(AdamsModule::line(cfg.p, -k * cfg.weight), x.level(d));
            const long e = d + k * n;
            if (e >= -n && e < 2 * n)
                row.push_back(AdamsMap::make(src, x.level(e), Matrix::Identity(src.size(), src.size())));
            else
                row.push_back(zero_map(src, AdamsModule::zero(cfg.p)));
        }
        m.action.push_back(std::move(row));
    }
    return m;
}

PeriodicComplex from_module(const PIModule& m) {
    const Config& cfg = m.cfg;
    const long n = cfg.period;
    const long lo = -n, hi = 2 * n - 1;
    if (m.lo != lo || static_cast<long>(m.levels.size()) != 3 * n || static_cast<long>(m.diffs.size()) != 3 * n - 1 ||
        m.action.size() != 3)
        throw ValidationError("PI-module: data must cover degrees -N .. 2N-1 with actions for k = -1, 0, 1");
    for (const auto& row : m.action)
        if (static_cast<long>(row.size()) != 3 * n) throw ValidationError("PI-module: action row has the wrong length");
    auto act = [&](long k, long d) -> const AdamsMap& { return m.action[static_cast<std::size_t>(k + 1)][static_cast<std::size_t>(d - lo)]; };
    auto dif = [&](long d) -> const AdamsMap& { return m.diffs[static_cast<std::size_t>(d - lo - 1)]; };
    auto in_range = [&](long d) { return d >= lo && d <= hi; };
    std::vector<std::string> errors;
    for (long d = lo + 1; d <= hi; ++d) {
        if (!(dif(d).source == m.level(d)) || !(dif(d).target == m.level(d - 1)))
            errors.push_back("d_" + std::to_string(d) + " has the wrong source or target");
        else if (d > lo + 1 && !compose(dif(d - 1), dif(d)).is_zero())
            errors.push_back("d o d != 0 at degree " + std::to_string(d));
    }
    for (long k = -1; k <= 1; ++k)
        for (long d = lo; d <= hi; ++d) {
            if (!in_range(d + k * n)) continue;
            const AdamsMap& phi = act(k, d);
            const AdamsModule src = smash(AdamsModule::line(cfg.p, -k * cfg.weight), m.level(d));
            if (!(phi.source == src) || !(phi.target == m.level(d + k * n)))
                errors.push_back("phi(" + std::to_string(k) + ") at degree " + std::to_string(d) + " has the wrong source or target");
            else if (!is_equivariant(phi.source, phi.target, phi.map))
                errors.push_back("phi(" + std::to_string(k) + ") at degree " + std::to_string(d) + " is not equivariant");
        }
    if (!errors.empty()) throw ValidationError("PI-module: " + join(errors));
    for (long d = lo; d <= hi; ++d)
        if (!(act(0, d).matrix() == Matrix::Identity(m.level(d).size(), m.level(d).size())))
            errors.push_back("unit law phi(0) = id fails at degree " + std::to_string(d));
    for (long k = -1; k <= 1; ++k)
        for (long l = -1; l <= 1; ++l) {
            if (k + l < -1 || k + l > 1) continue;
            for (long d = lo; d <= hi; ++d) {
                if (!in_range(d + l * n) || !in_range(d + (k + l) * n)) continue;
                if (!(act(k, d + l * n).matrix() * act(l, d).matrix() == act(k + l, d).matrix()))
                    errors.push_back("associativity phi(" + std::to_string(k) + ") phi(" + std::to_string(l) + ") = phi(" +
                                     std::to_string(k + l) + ") fails at degree " + std::to_string(d));
            }
        }
    for (long d = lo + n; d <= hi; ++d) {
        const Eigen::Index s = m.level(d).size();
        if (!(act(1, d - n).matrix() * act(-1, d).matrix() == Matrix::Identity(s, s)))
            errors.push_back("phi(1) phi(-1) = id fails at degree " + std::to_string(d));
    }
    for (long k = -1; k <= 1; ++k)
        for (long d = lo + 1; d <= hi; ++d) {
            if (!in_range(d + k * n) || !in_range(d - 1 + k * n)) continue;
            if (!(dif(d + k * n).matrix() * act(k, d).matrix() == act(k, d - 1).matrix() * dif(d).matrix() * PLocal(sign(k * n))))
                errors.push_back("phi(" + std::to_string(k) + ") does not commute with d at degree " + std::to_string(d));
        }
    if (!errors.empty()) throw ValidationError("PI-module: " + join(errors));
    std::vector<AdamsModule> levels;
    std::vector<AdamsMap> diffs;
    for (long d = 0; d < n; ++d) {
        levels.push_back(m.level(d));
        if (d > 0) diffs.push_back(dif(d));
    }
    AdamsMap wrap = AdamsMap::make(levels.front(), twist(levels.back(), cfg.weight), act(1, -1).matrix() * dif(0).matrix());
    return PeriodicComplex::make(cfg, std::move(levels), std::move(diffs), std::move(wrap));
}

// ---------------------------------------------------------------------------
// Tensor products

namespace {

/// Degree n of X (x) Y: key b, module X_{n-b} ^ Y_b.
Layout mixed_layout(const PeriodicComplex& x, const BoundedComplex& y, long n) {
    Layout l(x.prime());
    for (long b = y.lo(); !y.empty() && b <= y.hi(); ++b) l.add(b, smash(x.level(n - b), y.level(b)));
    return l;
}

AdamsMap mixed_diff(const PeriodicComplex& x, const BoundedComplex& y, long n) {
    const Layout src = mixed_layout(x, y, n), tgt = mixed_layout(x, y, n - 1);
    BlockMatrix bm(src, tgt);
    for (std::size_t s = 0; s < src.keys.size(); ++s) {
        const long b = src.keys[s], a = n - b;
        const auto ys = y.level(b).size();
        bm.add(s, s, kronecker(x.diff(a).matrix(), Matrix::Identity(ys, ys)));
        if (auto t = tgt.find(b - 1)) {
            const auto xs = x.level(a).size();
            bm.add(*t, s, kronecker(Matrix::Identity(xs, xs), y.diff(b).matrix()) * PLocal(sign(a)));
        }
    }
    return bm.build();
}

/// Degree n of X (x)_PI Y: key a in [0, N), module X_a ^ Y_{n-a}.
Layout unit_layout(const PeriodicComplex& x, const PeriodicComplex& y, long n) {
    Layout l(x.prime());
    for (long a = 0; a < x.period(); ++a) l.add(a, smash(x.level(a), y.level(n - a)));
    return l;
}

AdamsMap unit_diff(const PeriodicComplex& x, const PeriodicComplex& y, long n) {
    const Layout src = unit_layout(x, y, n), tgt = unit_layout(x, y, n - 1);
    const long period = x.period();
    BlockMatrix bm(src, tgt);
    for (std::size_t s = 0; s < src.keys.size(); ++s) {
        const long a = src.keys[s], b = n - a;
        const auto ys = y.level(b).size(), xs = x.level(a).size();
        const Matrix dx = a == 0 ? x.wrap().matrix() : x.diff(a).matrix();
        bm.add(static_cast<std::size_t>(a == 0 ? period - 1 : a - 1), s, kronecker(dx, Matrix::Identity(ys, ys)));
        bm.add(s, s, kronecker(Matrix::Identity(xs, xs), y.diff(b).matrix()) * PLocal(sign(a)));
    }
    return bm.build();
}

}  // namespace

PeriodicComplex tensor(const PeriodicComplex& x, const BoundedComplex& y) {
    const long n = x.period();
    std::vector<AdamsModule> levels;
    std::vector<AdamsMap> diffs;
    for (long i = 0; i < n; ++i) {
        levels.push_back(mixed_layout(x, y, i).sum());
        if (i > 0) diffs.push_back(mixed_diff(x, y, i));
    }
    return PeriodicComplex::make(x.config(), std::move(levels), std::move(diffs), mixed_diff(x, y, 0));
}

PeriodicMap tensor(const PeriodicMap& f, const ChainMap& g) {
    const PeriodicComplex src = tensor(f.source, g.source), tgt = tensor(f.target, g.target);
    std::vector<AdamsMap> comps;
    for (long n = 0; n < src.period(); ++n) {
        const Layout ls = mixed_layout(f.source, g.source, n), lt = mixed_layout(f.target, g.target, n);
        BlockMatrix bm(ls, lt);
        for (std::size_t s = 0; s < ls.keys.size(); ++s) {
            const long b = ls.keys[s];
            if (auto t = lt.find(b)) bm.add(*t, s, smash(f.component(n - b), g.component(b)).matrix());
        }
        comps.push_back(bm.build(src.level(n), tgt.level(n)));
    }
    return PeriodicMap::make(src, tgt, std::move(comps));
}

PeriodicMap unit_tensor_iso(const BoundedComplex& m, Config cfg) {
    const PeriodicComplex unit = PeriodicComplex::unit(cfg);
    const PeriodicComplex src = tensor(unit, m), tgt = periodify(m, cfg);
    std::vector<AdamsMap> comps;
    for (long r = 0; r < cfg.period; ++r) {
        const Layout ls = mixed_layout(unit, m, r), lt = periodic_layout(m, cfg, r);
        BlockMatrix bm(ls, lt);
        for (std::size_t t = 0; t < lt.keys.size(); ++t) {
            const long b = r + lt.keys[t] * cfg.period;
            const auto s = ls.find(b);
            const auto sz = lt.parts[t].size();
            if (s) bm.add(t, *s, Matrix::Identity(sz, sz));
        }
        comps.push_back(bm.build(src.level(r), tgt.level(r)));
    }
    return PeriodicMap::make(src, tgt, std::move(comps));
}

PeriodicComplex tensor_over_unit(const PeriodicComplex& x, const PeriodicComplex& y) {
    require_config(x.config(), y.config(), "tensor over PI");
    if (x.period() % 2 != 0) throw ValidationError("tensor over PI requires an even period");
    const long n = x.period();
    std::vector<AdamsModule> levels;
    std::vector<AdamsMap> diffs;
    for (long i = 0; i < n; ++i) {
        levels.push_back(unit_layout(x, y, i).sum());
        if (i > 0) diffs.push_back(unit_diff(x, y, i));
    }
    return PeriodicComplex::make(x.config(), std::move(levels), std::move(diffs), unit_diff(x, y, 0));
}

PeriodicMap tensor_over_unit(const PeriodicMap& f, const PeriodicMap& g) {
    const PeriodicComplex src = tensor_over_unit(f.source, g.source), tgt = tensor_over_unit(f.target, g.target);
    std::vector<AdamsMap> comps;
    for (long n = 0; n < src.period(); ++n) {
        const Layout ls = unit_layout(f.source, g.source, n), lt = unit_layout(f.target, g.target, n);
        BlockMatrix bm(ls, lt);
        for (std::size_t s = 0; s < ls.keys.size(); ++s) {
            const long a = ls.keys[s];
            bm.add(s, s, smash(f.component(a), g.component(n - a)).matrix());
        }
        comps.push_back(bm.build(src.level(n), tgt.level(n)));
    }
    return PeriodicMap::make(src, tgt, std::move(comps));
}

}  // namespace qpc
