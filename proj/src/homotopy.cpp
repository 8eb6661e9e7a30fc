#include "qpc/homotopy.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

namespace qpc {

namespace {

long floor_div(long a, long b) {
    long q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

std::string range_str(long lo, long hi) { return "[" + std::to_string(lo) + ", " + std::to_string(hi) + "]"; }

struct HomData {
    std::vector<HomGroup> groups;
    HomComplex complex;

    const HomGroup& group(long n) const { return groups[static_cast<std::size_t>(n - complex.lo)]; }
};

template <class C>
HomData hom_data(const AdamsModule& p, const C& x, long lo, long hi) {
    if (!is_dualisable(p)) throw ValidationError("hom complex: source object is not dualisable (torsion present)");
    HomData h{{}, HomComplex{p.prime(), lo, {}, {}}};
    for (long n = lo; n <= hi; ++n) {
        h.groups.emplace_back(p, x.level(n));
        h.complex.levels.push_back(h.groups.back().module());
    }
    for (long n = lo + 1; n <= hi; ++n) {
        const HomGroup& src = h.group(n);
        const HomGroup& tgt = h.group(n - 1);
        const AdamsMap d = x.diff(n);
        Matrix m(tgt.module().size(), static_cast<Eigen::Index>(src.generators().size()));
        for (std::size_t k = 0; k < src.generators().size(); ++k)
            m.col(static_cast<Eigen::Index>(k)) = tgt.coordinates(compose(d, src.generators()[k])).col(0);
        h.complex.diffs.push_back(MatrixMap::make(src.module(), tgt.module(), m));
    }
    return h;
}

/// f_* : Hom(P, X_n) -> Hom(P, Y_n) in module coordinates.
MatrixMap hom_induced(const HomGroup& src, const HomGroup& tgt, const AdamsMap& f) {
    Matrix m(tgt.module().size(), static_cast<Eigen::Index>(src.generators().size()));
    for (std::size_t k = 0; k < src.generators().size(); ++k)
        m.col(static_cast<Eigen::Index>(k)) = tgt.coordinates(compose(f, src.generators()[k])).col(0);
    return MatrixMap::make(src.module(), tgt.module(), m);
}

template <class F>
RelativeReport relative_equivalence_impl(const F& f, const DetectionFamily& family, long lo, long hi) {
    RelativeReport r;
    r.family = family.str();
    r.lo = lo;
    r.hi = hi;
    for (std::size_t k = 0; k < family.members.size(); ++k) {
        const AdamsModule& p = family.members[k];
        const HomData hs = hom_data(p, f.source, lo - 1, hi + 1);
        const HomData ht = hom_data(p, f.target, lo - 1, hi + 1);
        std::string verdict = "quasi-isomorphism on " + range_str(lo, hi);
        bool ok = true;
        for (long n = lo; n <= hi && ok; ++n) {
            const MatrixMap fn = hom_induced(hs.group(n), ht.group(n), f.component(n));
            const auto a = homology_subquotient(hs.complex.diff(n + 1), hs.complex.diff(n));
            const auto b = homology_subquotient(ht.complex.diff(n + 1), ht.complex.diff(n));
            if (!is_isomorphism(induced_map(a, b, fn.matrix))) {
                ok = false;
                verdict = "not a quasi-isomorphism at degree " + std::to_string(n) + " (" +
                          a.module().normal_form().str() + " -> " + b.module().normal_form().str() + ")";
            }
        }
        r.members.push_back(family.labels[k] + ": " + verdict);
        if (!ok) {
            r.holds = false;
            r.failing.push_back(family.labels[k]);
        }
    }
    return r;
}

template <class F>
RelativeReport relative_fibration_impl(const F& f, const DetectionFamily& family, long lo, long hi) {
    RelativeReport r;
    r.family = family.str();
    r.lo = lo;
    r.hi = hi;
    for (std::size_t k = 0; k < family.members.size(); ++k) {
        const AdamsModule& p = family.members[k];
        std::string verdict = "surjective on " + range_str(lo, hi);
        bool ok = true;
        for (long n = lo; n <= hi && ok; ++n) {
            const HomGroup s(p, f.source.level(n)), t(p, f.target.level(n));
            if (!is_surjective(hom_induced(s, t, f.component(n)))) {
                ok = false;
                verdict = "not surjective at degree " + std::to_string(n);
            }
        }
        r.members.push_back(family.labels[k] + ": " + verdict);
        if (!ok) {
            r.holds = false;
            r.failing.push_back(family.labels[k]);
        }
    }
    return r;
}

/// Least m with (psi - 1)^m F(psi) = 0 on the module, F the product of
/// (psi - g^{j(p-1)}) over its distinct free weights.
int unipotent_length(const AdamsModule& m) {
    const Matrix& a = m.psi().matrix;
    const Matrix id = Matrix::Identity(m.size(), m.size());
    std::vector<long> w = free_weights(m);
    w.erase(std::unique(w.begin(), w.end()), w.end());
    Matrix cur = id;
    for (long j : w) cur = (a - id * twist_scalar(m.prime(), j)) * cur;
    int length = 0;
    while (!MatrixMap::make(m.underlying(), m.underlying(), cur).is_zero()) {
        cur = (a - id) * cur;
        if (++length > 4096) throw std::logic_error("unipotent_length: psi - 1 is not topologically nilpotent");
    }
    return length;
}

template <class F>
DetectionFamily stable_family_impl(const F& f, std::pair<long, long> range) {
    const Prime p = f.source.prime();
    long s = 1;
    int e = 0, length = 0;
    std::vector<long> roots;
    for (long n = range.first; n <= range.second; ++n)
        for (const AdamsModule& m : {f.source.level(n), f.target.level(n)}) {
            for (long w : free_weights(m)) {
                s = std::max(s, std::abs(w));
                roots.push_back(w);
            }
            for (int o : m.underlying().orders()) e = std::max(e, o);
            length = std::max(length, unipotent_length(m));
        }
    const long bound = s * prime_power(p, e).get_si();
    DetectionFamily fam = DetectionFamily::standard(p, -bound, bound, 1);
    // Roots congruent to 1 modulo p^e act on torsion like psi - 1.
    const long step = e > 0 ? prime_power(p, e - 1).get_si() : 1;
    for (long k = 1; k <= length; ++k) roots.push_back(k * step);
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    if (!roots.empty()) {
        fam.members.push_back(companion_module(p, roots));
        fam.labels.push_back("A(rank " + std::to_string(roots.size()) + ")");
        fam.max_rank = std::max(fam.max_rank, static_cast<int>(roots.size()));
    }
    return fam;
}

// ---------------------------------------------------------------------------
// Covers

struct Cover {
    AdamsModule module;
    AdamsMap map;
    bool complete = true;
};

bool contained(const Matrix& image, const CyclicSum& target, const Matrix& columns) {
    return solve(hconcat(image, target.relations()), columns, target.prime()).has_value();
}

/// Sign choice making the first nonzero entry of normalizer * h positive.
AdamsMap normalized(const AdamsMap& h, const Matrix& normalizer) {
    const Matrix amb = normalizer * h.matrix();
    for (Eigen::Index j = 0; j < amb.cols(); ++j)
        for (Eigen::Index i = 0; i < amb.rows(); ++i)
            if (!amb(i, j).is_zero()) return amb(i, j) < PLocal(0) ? -h : h;
    return h;
}

/// Greedy cover of w by family members, by increasing rank and in family
/// order within a rank. Quasi mode adds a
/// hom generator when it enlarges the image, stops at surjectivity and then
/// drops redundant summands; relative mode adds it when it is not already in the image of Hom(P, C).
Cover cover(const AdamsModule& w, const DetectionFamily& family, ResolveMode mode, const Matrix& normalizer) {
    const Prime p = w.prime();
    AdamsModule c = AdamsModule::zero(p);
    Matrix img = Matrix::Zero(w.size(), 0);
    if (w.is_zero()) return Cover{c, AdamsMap::zero(c, w), true};
    const Matrix id = Matrix::Identity(w.size(), w.size());
    auto surjective = [&] { return contained(img, w.underlying(), id); };
    std::vector<std::size_t> order(family.members.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return family.members[a].size() < family.members[b].size();
    });
    // Summands added so far, as (member index, map to w).
    std::vector<std::pair<std::size_t, AdamsMap>> added;
    std::map<std::pair<std::size_t, std::size_t>, std::vector<AdamsMap>> between;
    auto hom_between = [&](std::size_t i, std::size_t k) -> const std::vector<AdamsMap>& {
        auto it = between.find({i, k});
        if (it == between.end())
            it = between.emplace(std::make_pair(i, k), HomGroup(family.members[i], family.members[k]).generators()).first;
        return it->second;
    };
    for (const std::size_t index : order) {
        const AdamsModule& member = family.members[index];
        if (mode == ResolveMode::quasi && surjective()) break;
        const HomGroup hom(member, w);
        if (hom.generators().empty()) continue;
        // Image of Hom(member, C) in Hom(member, w).
        Matrix reached = Matrix::Zero(hom.module().size(), 0);
        auto reach = [&](std::size_t k, const AdamsMap& h) {
            for (const AdamsMap& g : hom_between(index, k)) reached = hconcat(reached, hom.coordinates(compose(h, g)));
        };
        if (mode == ResolveMode::relative)
            for (const auto& [k, h] : added) reach(k, h);
        for (const AdamsMap& gen : hom.generators()) {
            const AdamsMap h = normalized(gen, normalizer);
            const bool add = mode == ResolveMode::quasi ? !contained(img, w.underlying(), h.matrix())
                                                        : !contained(reached, hom.module(), hom.coordinates(h));
            if (!add) continue;
            c = c + member;
            img = hconcat(img, h.matrix());
            added.emplace_back(index, h);
            if (mode == ResolveMode::relative) reach(index, h);
            if (mode == ResolveMode::quasi && surjective()) break;
        }
    }
    const bool complete = mode == ResolveMode::relative || surjective();
    if (mode == ResolveMode::quasi && complete) {
        // Drop summands the others already cover, latest first.
        auto assemble = [&](std::size_t skip) {
            c = AdamsModule::zero(p);
            img = Matrix::Zero(w.size(), 0);
            for (std::size_t k = 0; k < added.size(); ++k)
                if (k != skip) {
                    c = c + family.members[added[k].first];
                    img = hconcat(img, added[k].second.matrix());
                }
        };
        for (std::size_t k = added.size(); k-- > 0;) {
            assemble(k);
            if (surjective()) added.erase(added.begin() + static_cast<std::ptrdiff_t>(k));
        }
        assemble(added.size());
    }
    return Cover{c, AdamsMap::make(c, w, img), complete};
}

/// Cover of m by the relative cover followed by a search for a section.
bool is_family_retract(const AdamsModule& m, const DetectionFamily& family) {
    if (m.is_zero()) return true;
    const Cover cv = cover(m, family, ResolveMode::relative, Matrix::Identity(m.size(), m.size()));
    const HomGroup sections(m, cv.module), ends(m, m);
    Matrix a(ends.module().size(), static_cast<Eigen::Index>(sections.generators().size()));
    for (std::size_t k = 0; k < sections.generators().size(); ++k)
        a.col(static_cast<Eigen::Index>(k)) = ends.coordinates(compose(cv.map, sections.generators()[k])).col(0);
    return contained(a, ends.module(), ends.coordinates(AdamsMap::identity(m)));
}

BoundedComplex trimmed(const BoundedComplex& x) {
    const auto s = x.support();
    if (!s) return BoundedComplex::zero(x.prime());
    std::vector<AdamsModule> levels;
    std::vector<AdamsMap> diffs;
    for (long n = s->first; n <= s->second; ++n) {
        levels.push_back(x.level(n));
        if (n > s->first) diffs.push_back(x.diff(n));
    }
    return BoundedComplex::make(x.prime(), s->first, std::move(levels), std::move(diffs));
}

long max_abs_weight(const std::vector<AdamsModule>& levels) {
    long s = 0;
    for (const auto& m : levels)
        for (long w : free_weights(m)) s = std::max(s, std::abs(w));
    return s;
}

}  // namespace

// ---------------------------------------------------------------------------
// Hom complexes

CyclicSum HomComplex::level(long n) const {
    if (n < lo || n > hi()) return CyclicSum(p);
    return levels[static_cast<std::size_t>(n - lo)];
}

MatrixMap HomComplex::diff(long n) const {
    if (n > lo && n <= hi()) return diffs[static_cast<std::size_t>(n - lo - 1)];
    return MatrixMap::zero(level(n), level(n - 1));
}

FgModule HomComplex::homology(long n) const { return homology_at(diff(n + 1), diff(n)); }

std::string HomComplex::str() const {
    std::ostringstream os;
    for (long n = hi(); n >= lo; --n) os << "  Hom_" << n << " = " << level(n).normal_form().str() << "\n";
    return os.str();
}

HomComplex hom_complex(const AdamsModule& p, const BoundedComplex& x, long lo, long hi) {
    return hom_data(p, x, lo, hi).complex;
}

HomComplex hom_complex(const AdamsModule& p, const PeriodicComplex& x, long lo, long hi) {
    return hom_data(p, x, lo, hi).complex;
}

std::pair<long, long> default_range(const ChainMap& f) {
    long lo = std::min(f.source.lo(), f.target.lo()), hi = std::max(f.source.hi(), f.target.hi());
    if (f.source.empty()) lo = f.target.lo();
    if (f.target.empty()) hi = f.source.hi();
    if (f.source.empty() && f.target.empty()) return {0, 0};
    return {lo - 1, hi + 1};
}

std::pair<long, long> default_range(const PeriodicMap& f) { return {-f.source.period(), 2 * f.source.period() - 1}; }

std::string RelativeReport::str() const {
    std::ostringstream os;
    os << "verdict: " << (holds ? "holds" : "fails") << "\n";
    os << "degrees: " << range_str(lo, hi) << "\n";
    os << family << "\n";
    for (const auto& m : members) os << "  " << m << "\n";
    return os.str();
}

RelativeReport is_relative_equivalence(const ChainMap& f, const DetectionFamily& family,
                                       std::optional<std::pair<long, long>> range) {
    const auto [lo, hi] = range.value_or(default_range(f));
    return relative_equivalence_impl(f, family, lo, hi);
}

RelativeReport is_relative_equivalence(const PeriodicMap& f, const DetectionFamily& family,
                                       std::optional<std::pair<long, long>> range) {
    const auto [lo, hi] = range.value_or(default_range(f));
    return relative_equivalence_impl(f, family, lo, hi);
}

RelativeReport is_relative_fibration(const ChainMap& f, const DetectionFamily& family,
                                     std::optional<std::pair<long, long>> range) {
    const auto [lo, hi] = range.value_or(default_range(f));
    return relative_fibration_impl(f, family, lo, hi);
}

RelativeReport is_relative_fibration(const PeriodicMap& f, const DetectionFamily& family,
                                     std::optional<std::pair<long, long>> range) {
    const auto [lo, hi] = range.value_or(default_range(f));
    return relative_fibration_impl(f, family, lo, hi);
}

bool is_injective_cofibration(const ChainMap& f) {
    const auto [lo, hi] = default_range(f);
    for (long n = lo; n <= hi; ++n)
        if (!is_injective(f.component(n).map)) return false;
    return true;
}

bool is_injective_cofibration(const PeriodicMap& f) {
    for (const auto& c : f.components)
        if (!is_injective(c.map)) return false;
    return true;
}

std::vector<long> free_weights(const AdamsModule& m) { return validate_object(m.underlying(), m.psi().matrix).weights; }

DetectionFamily stable_family(const ChainMap& f) { return stable_family_impl(f, default_range(f)); }
DetectionFamily stable_family(const PeriodicMap& f) { return stable_family_impl(f, default_range(f)); }

DetectionFamily twist_closure(const DetectionFamily& family, long weight, long k_max) {
    DetectionFamily out = family;
    if (weight == 0) return out;
    for (long k = 1; k <= k_max; ++k)
        for (long t : {-k, k})
            for (std::size_t i = 0; i < family.members.size(); ++i) {
                const AdamsModule m = twist(family.members[i], t * weight);
                if (std::find(out.members.begin(), out.members.end(), m) != out.members.end()) continue;
                out.members.push_back(m);
                out.labels.push_back("T^" + std::to_string(t) + " " + family.labels[i]);
            }
    return out;
}

// ---------------------------------------------------------------------------
// Resolutions

std::string to_string(ResolveMode mode) { return mode == ResolveMode::quasi ? "quasi" : "relative"; }

std::string Resolution::str() const {
    std::ostringstream os;
    os << "resolution (mode " << to_string(mode) << ", depth " << depth << ")\n";
    os << "truncated: " << (truncated ? "yes" : "no") << "\n";
    os << "family complete: " << (incomplete ? "no" : "yes") << "\n";
    os << family << "\n";
    os << complex.str();
    return os.str();
}

std::string PeriodicResolution::str() const {
    std::ostringstream os;
    os << "periodic resolution (mode " << to_string(mode) << ", depth " << depth << ", cut at window degree " << cut << ")\n";
    os << "truncated: " << (truncated ? "yes" : "no") << "\n";
    os << "family complete: " << (incomplete ? "no" : "yes") << "\n";
    os << family << "\n";
    os << complex.str();
    return os.str();
}

Resolution resolve(const BoundedComplex& input, ResolveMode mode, const DetectionFamily& family, int depth) {
    const Prime p = input.prime();
    if (depth < 1) throw ValidationError("resolve: depth must be at least 1");
    const BoundedComplex x = trimmed(input);
    Resolution out{BoundedComplex::zero(p), ChainMap::zero(BoundedComplex::zero(p), input), mode, depth, false, false,
                   family.str()};
    if (x.empty()) return out;
    if (x.hi() - x.lo() > depth)
        throw ValidationError("resolve: depth " + std::to_string(depth) + " is smaller than the span of the complex (" +
                              std::to_string(x.hi() - x.lo()) + ")");
    const long lo = x.lo();
    std::vector<AdamsModule> levels;
    std::vector<AdamsMap> diffs, aug;
    const AdamsModule zero = AdamsModule::zero(p);
    AdamsMap cycles = AdamsMap::zero(zero, zero);     // Z_{n-1}(Q) -> Q_{n-1}
    AdamsMap prev_aug = AdamsMap::zero(zero, x.level(lo - 1));  // Q_{n-1} -> X_{n-1}
    for (long n = lo;; ++n) {
        const AdamsModule& z = cycles.source;
        const AdamsModule s = z + x.level(n);
        const AdamsMap phi = AdamsMap::make(s, x.level(n - 1),
                                            hconcat(compose(prev_aug, cycles).matrix(), -x.diff(n).matrix()));
        const AdamsMap jw = kernel_cokernel_image(phi).kernel_inclusion;
        const AdamsModule& w = jw.source;
        const Matrix normalizer = block_diagonal(cycles.matrix(), Matrix::Identity(x.level(n).size(), x.level(n).size())) *
                                  jw.matrix();
        const Cover cv = cover(w, family, mode, normalizer);
        if (n > x.hi() && cv.module.is_zero()) {
            if (mode == ResolveMode::quasi && !w.is_zero()) out.incomplete = true;
            break;
        }
        if (n > lo + depth) {
            out.truncated = true;
            break;
        }
        if (!cv.complete) out.incomplete = true;
        const Matrix jk = jw.matrix().topRows(z.size());
        const Matrix jx = jw.matrix().bottomRows(x.level(n).size());
        const AdamsMap q = AdamsMap::make(cv.module, x.level(n), jx * cv.map.matrix());
        if (n > lo) {
            diffs.push_back(AdamsMap::make(cv.module, levels.back(), cycles.matrix() * jk * cv.map.matrix()));
            cycles = kernel_cokernel_image(diffs.back()).kernel_inclusion;
        } else {
            cycles = AdamsMap::identity(cv.module);
        }
        levels.push_back(cv.module);
        aug.push_back(q);
        prev_aug = q;
    }
    out.complex = BoundedComplex::make(p, lo, levels, diffs);
    out.augmentation = ChainMap::make(out.complex, input, lo, aug);
    return out;
}

std::optional<long> find_cut(const PeriodicComplex& x) {
    if (x.wrap().is_zero()) return 0;
    for (long c = 1; c < x.period(); ++c)
        if (x.window_diffs()[static_cast<std::size_t>(c - 1)].is_zero()) return c;
    return std::nullopt;
}

BoundedComplex cut_open(const PeriodicComplex& x) {
    const auto c = find_cut(x);
    if (!c) throw ValidationError("no window differential (or wrap) is zero; the complex cannot be cut open");
    std::vector<AdamsModule> levels;
    std::vector<AdamsMap> diffs;
    for (long n = *c; n < *c + x.period(); ++n) {
        levels.push_back(x.level(n));
        if (n > *c) diffs.push_back(x.diff(n));
    }
    BoundedComplex m = BoundedComplex::make(x.prime(), *c, std::move(levels), std::move(diffs));
    if (!(periodify(m, x.config()) == x)) throw std::logic_error("cut_open: periodification does not reproduce the complex");
    return m;
}

PeriodicResolution resolve(const PeriodicComplex& x, ResolveMode mode, const DetectionFamily& family, int depth) {
    const Config& cfg = x.config();
    const auto cut = find_cut(x);
    if (!cut) throw ValidationError("resolve: periodic input has no zero window differential (or wrap) to cut at");
    const long c = *cut;
    const BoundedComplex m = cut_open(x);
    const long top = c + cfg.period - 1 + depth;
    const long k_max = std::max(floor_div(top, cfg.period), 0L) + 1;
    const DetectionFamily closed = twist_closure(family, cfg.weight, k_max);
    const Resolution r = resolve(m, mode, closed, depth);
    PeriodicComplex q = periodify(r.complex, cfg);
    PeriodicMap aug = periodify(r.augmentation, cfg);
    return PeriodicResolution{std::move(q), std::move(aug), mode, depth, r.truncated, r.incomplete, closed.str(), c};
}

// ---------------------------------------------------------------------------
// Derived functors

std::string DerivedTensor::str() const {
    std::ostringstream os;
    os << "truncated: " << (truncated ? "yes" : "no") << "\n";
    os << "family complete: " << (incomplete ? "no" : "yes") << "\n";
    for (std::size_t i = 0; i < homology.size(); ++i)
        os << "H_" << lo + static_cast<long>(i) << " = " << homology[i].str() << "\n";
    return os.str();
}

DerivedTensor derived_tensor(const PeriodicComplex& x, const PeriodicComplex& y, const DetectionFamily& family, int depth) {
    if (!(x.config() == y.config())) throw ValidationError("derived tensor: configurations differ");
    const auto rx = resolve(x, ResolveMode::quasi, family, depth);
    const auto ry = resolve(y, ResolveMode::quasi, family, depth);
    const PeriodicComplex z = tensor_over_unit(rx.complex, ry.complex);
    return DerivedTensor{0, z.homology(), rx.truncated || ry.truncated, rx.incomplete || ry.incomplete, rx.family};
}

DerivedTensor derived_tensor(const BoundedComplex& x, const BoundedComplex& y, const DetectionFamily& family, int depth) {
    const auto rx = resolve(x, ResolveMode::quasi, family, depth);
    const auto ry = resolve(y, ResolveMode::quasi, family, depth);
    const BoundedComplex z = tensor(rx.complex, ry.complex);
    DerivedTensor out{z.lo(), {}, rx.truncated || ry.truncated, rx.incomplete || ry.incomplete, rx.family};
    for (long n = z.lo(); !z.empty() && n <= z.hi(); ++n) out.homology.push_back(z.homology(n));
    return out;
}

std::string ExtGroups::str() const {
    std::ostringstream os;
    os << "mode: " << to_string(mode) << "\n";
    os << "resolution continues past the last group: " << (truncated ? "yes" : "no") << "\n";
    os << "family complete: " << (incomplete ? "no" : "yes") << "\n";
    for (std::size_t s = 0; s < groups.size(); ++s) os << "Ext^" << s << " = " << groups[s].str() << "\n";
    return os.str();
}

ExtGroups ext_relative(const AdamsModule& m, const AdamsModule& n, const DetectionFamily& family, int s_max,
                       ResolveMode mode) {
    if (s_max < 0) throw ValidationError("ext: s_max must be non-negative");
    const Resolution r = resolve(BoundedComplex::concentrated(m, 0), mode, family, s_max + 1);
    std::vector<HomGroup> homs;
    for (long s = 0; s <= s_max + 1; ++s) homs.emplace_back(r.complex.level(s), n);
    // delta_s : Hom(Q_s, N) -> Hom(Q_{s+1}, N), f -> f o d_{s+1}
    std::vector<MatrixMap> delta;
    for (long s = 0; s <= s_max; ++s) {
        const HomGroup& a = homs[static_cast<std::size_t>(s)];
        const HomGroup& b = homs[static_cast<std::size_t>(s + 1)];
        Matrix mat(b.module().size(), static_cast<Eigen::Index>(a.generators().size()));
        for (std::size_t k = 0; k < a.generators().size(); ++k)
            mat.col(static_cast<Eigen::Index>(k)) = b.coordinates(compose(a.generators()[k], r.complex.diff(s + 1))).col(0);
        delta.push_back(MatrixMap::make(a.module(), b.module(), mat));
    }
    ExtGroups out{mode, {}, r.truncated, r.incomplete, r.family};
    for (long s = 0; s <= s_max; ++s) {
        const MatrixMap in = s == 0 ? MatrixMap::zero(CyclicSum(m.prime()), homs[0].module()) : delta[static_cast<std::size_t>(s - 1)];
        out.groups.push_back(homology_at(in, delta[static_cast<std::size_t>(s)]));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Cofibrations

std::string CofibrationCertificate::str() const {
    std::ostringstream os;
    os << "verdict: " << (cofibration ? "cofibration" : inconclusive ? "inconclusive" : "not a cofibration") << "\n";
    os << "degreewise split: " << (split ? "yes" : "no") << "\n";
    os << "cokernel levels relatively projective: " << (projective_cokernel ? "yes" : "no") << "\n";
    if (!reason.empty()) os << "reason: " << reason << "\n";
    os << family << "\n";
    for (const auto& l : filtration) os << "  " << l << "\n";
    return os.str();
}

CofibrationCertificate check_cofibration(const PeriodicMap& f, const DetectionFamily& family) {
    const Config& cfg = f.source.config();
    CofibrationCertificate cert;
    cert.split = true;
    for (long n = 0; n < cfg.period; ++n) {
        const AdamsMap& fn = f.components[static_cast<std::size_t>(n)];
        if (fn.source.is_zero()) continue;
        const HomGroup retractions(fn.target, fn.source), ends(fn.source, fn.source);
        Matrix a(ends.module().size(), static_cast<Eigen::Index>(retractions.generators().size()));
        for (std::size_t k = 0; k < retractions.generators().size(); ++k)
            a.col(static_cast<Eigen::Index>(k)) = ends.coordinates(compose(retractions.generators()[k], fn)).col(0);
        if (!contained(a, ends.module(), ends.coordinates(AdamsMap::identity(fn.source)))) {
            cert.split = false;
            cert.reason = "no equivariant retraction at window degree " + std::to_string(n);
            cert.family = family.str();
            return cert;
        }
    }
    const PeriodicComplex q = cokernel(f).object;
    long s = max_abs_weight(q.window());
    s += std::max(std::abs(family.window_lo), std::abs(family.window_hi));
    const long k_max = cfg.weight == 0 ? 0 : s / std::abs(cfg.weight) + 1;
    const DetectionFamily closed = twist_closure(family, cfg.weight, k_max);
    cert.family = closed.str();
    cert.projective_cokernel = true;
    for (long n = 0; n < cfg.period; ++n)
        if (!is_family_retract(q.window()[static_cast<std::size_t>(n)], closed)) {
            cert.projective_cokernel = false;
            cert.reason = "cokernel level at window degree " + std::to_string(n) + " (" +
                          q.window()[static_cast<std::size_t>(n)].normal_form().str() + ") is not a retract of family sums";
            return cert;
        }
    if (!find_cut(q)) {
        cert.inconclusive = true;
        cert.reason = "cokernel has no zero window differential; no cell filtration found";
        return cert;
    }
    const BoundedComplex m = cut_open(q);
    for (long k = m.lo(); k <= m.hi(); ++k) {
        if (m.level(k).is_zero()) continue;
        cert.filtration.push_back("F_" + std::to_string(k) + ": attach P(S^" + std::to_string(k - 1) + " -> D^" +
                                  std::to_string(k) + ") on " + m.level(k).str());
    }
    if (cert.filtration.empty()) cert.filtration.push_back("no cells (zero cokernel)");
    cert.cofibration = true;
    return cert;
}

// ---------------------------------------------------------------------------
// Pushout-products

std::string PushoutProduct::str() const {
    std::ostringstream os;
    os << "corner object:\n" << corner.str();
    bool zero = true;
    for (const auto& c : corner_map.components) zero = zero && c.is_zero();
    os << "corner map zero: " << (zero ? "yes" : "no") << "\n";
    os << "corner map mono: " << (is_mono() ? "yes" : "no") << "\n";
    os << "corner map quasi-isomorphism: " << (is_quasi_iso() ? "yes" : "no") << "\n";
    return os.str();
}

PushoutProduct pushout_product(const PeriodicMap& f, const PeriodicMap& g) {
    const auto id = [](const PeriodicComplex& x) { return PeriodicMap::identity(x); };
    const PeriodicMap f_w = tensor_over_unit(f, id(g.source));   // U W -> V W
    const PeriodicMap u_g = tensor_over_unit(id(f.source), g);   // U W -> U X
    const PeriodicMap v_g = tensor_over_unit(id(f.target), g);   // V W -> V X
    const PeriodicMap f_x = tensor_over_unit(f, id(g.target));   // U X -> V X
    const PeriodicMap a = pair(f_w, -u_g);
    const PeriodicMap b = copair(v_g, f_x);
    const PeriodicCokernel c = cokernel(a);
    std::vector<AdamsMap> comps;
    for (long n = 0; n < c.object.period(); ++n) {
        const auto i = static_cast<std::size_t>(n);
        const Subquotient from = cokernel_subquotient(a.components[i].map);
        const AdamsModule& target = b.target.window()[i];
        comps.push_back(AdamsMap::make(c.object.window()[i], target, b.components[i].matrix() * from.lift()));
    }
    PeriodicMap corner_map = PeriodicMap::make(c.object, b.target, std::move(comps));
    const PeriodicComplex& vw = f_w.target;
    const PeriodicComplex& ux = u_g.target;
    PeriodicMap from_vw = compose(c.projection, pair(id(vw), PeriodicMap::zero(vw, ux)));
    PeriodicMap from_ux = compose(c.projection, pair(PeriodicMap::zero(ux, vw), id(ux)));
    return PushoutProduct{f, g, c.object, std::move(corner_map), std::move(from_vw), std::move(from_ux)};
}

ChainMap sphere_to_disk(const AdamsModule& p, long n) {
    const auto s = BoundedComplex::concentrated(p, n - 1);
    const auto d = BoundedComplex::disk(p, n);
    return ChainMap::make(s, d, n - 1, {AdamsMap::identity(p)});
}

ChainMap zero_to_disk(const AdamsModule& p, long n) {
    return ChainMap::zero(BoundedComplex::zero(p.prime()), BoundedComplex::disk(p, n));
}

// ---------------------------------------------------------------------------
// Witnesses

bool WitnessReport::all_reproduced() const {
    return std::all_of(witnesses.begin(), witnesses.end(), [](const Witness& w) { return w.reproduced; });
}

std::string WitnessReport::str() const {
    std::ostringstream os;
    os << "configuration: " << cfg.str() << "\n";
    for (const auto& w : witnesses) {
        os << "witness " << w.name << ": " << (w.reproduced ? "reproduced" : "NOT reproduced") << "\n";
        for (const auto& d : w.details) os << "  " << d << "\n";
    }
    return os.str();
}

WitnessReport witness_suite(Config cfg) {
    const Prime p = cfg.p;
    const AdamsModule l0 = AdamsModule::unit(p);
    const AdamsModule zp = AdamsModule::make(CyclicSum::cyclic(p, 1), Matrix::Constant(1, 1, PLocal(1)));
    const PLocal pv(p.value());
    const auto src = BoundedComplex::make(p, 0, {l0, l0}, {AdamsMap::make(l0, l0, Matrix::Constant(1, 1, pv))});
    const auto tgt = BoundedComplex::concentrated(zp, 0);
    const auto q = ChainMap::make(src, tgt, 0, {AdamsMap::make(l0, zp, Matrix::Constant(1, 1, PLocal(1)))});
    WitnessReport report{cfg, {}};

    {
        Witness w{"(a) quasi-isomorphism that is not a relative equivalence", false, {}};
        const bool quasi = is_quasi_iso(q);
        const auto family = DetectionFamily::standard(p, -1, 1, 1);
        const auto rel = is_relative_equivalence(q, family);
        const bool at_l1 = std::find(rel.failing.begin(), rel.failing.end(), "L_1") != rel.failing.end();
        w.details.push_back("q : [L_0 --p--> L_0] -> (Z/p, psi = 1) in degree 0");
        w.details.push_back(std::string("quasi-isomorphism: ") + (quasi ? "yes" : "no"));
        w.details.push_back(std::string("relative equivalence: ") + (rel.holds ? "yes" : "no"));
        for (const auto& m : rel.members) w.details.push_back("  " + m);
        w.reproduced = quasi && !rel.holds && at_l1;
        report.witnesses.push_back(std::move(w));
    }
    {
        Witness w{"(b) pushout-product of monomorphisms that is not a monomorphism", false, {}};
        const auto unit = PeriodicComplex::unit(cfg);
        auto comps = PeriodicMap::identity(unit).components;
        comps[0] = AdamsMap::make(l0, l0, Matrix::Constant(1, 1, pv));
        const auto times_p = PeriodicMap::make(unit, unit, comps);
        const auto pz = periodify(tgt, cfg);
        const auto g = PeriodicMap::zero(PeriodicComplex::zero(cfg), pz);
        const auto pp = pushout_product(times_p, g);
        bool zero = true;
        for (const auto& c : pp.corner_map.components) zero = zero && c.is_zero();
        const bool mono_f = is_injective_cofibration(times_p), mono_g = is_injective_cofibration(g);
        const bool corner_is_pz = pp.corner.window()[0].normal_form() == FgModule{0, {1}};
        w.details.push_back("f = p : PI -> PI, g = 0 -> P(Z/p); both monomorphisms: " +
                            std::string(mono_f && mono_g ? "yes" : "no"));
        w.details.push_back("the divisible V of the classical example is replaced by p : PI -> PI");
        w.details.push_back("corner object P(Z/p): " + std::string(corner_is_pz ? "yes" : "no"));
        w.details.push_back(std::string("corner map zero: ") + (zero ? "yes" : "no"));
        w.details.push_back(std::string("corner map mono: ") + (pp.is_mono() ? "yes" : "no"));
        w.reproduced = mono_f && mono_g && zero && corner_is_pz && !pp.is_mono();
        report.witnesses.push_back(std::move(w));
    }
    {
        Witness w{"(c) periodification preserves a nontrivial quasi-isomorphism", false, {}};
        const auto pq = periodify(q, cfg);
        const bool quasi = is_quasi_iso(pq), iso = is_isomorphism(pq);
        w.details.push_back(std::string("P(q) quasi-isomorphism: ") + (quasi ? "yes" : "no"));
        w.details.push_back(std::string("P(q) isomorphism: ") + (iso ? "yes" : "no"));
        w.reproduced = quasi && !iso;
        report.witnesses.push_back(std::move(w));
    }
    return report;
}

}  // namespace qpc
