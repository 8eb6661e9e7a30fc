#include "qpc/adams.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace qpc {

namespace {

using Poly = std::vector<PLocal>;  // coefficients, constant term first

Poly characteristic_polynomial(const Matrix& a) {
    // Faddeev-LeVerrier; exact over Q.
    const Eigen::Index n = a.rows();
    Poly c(static_cast<std::size_t>(n + 1), PLocal(0));
    c[static_cast<std::size_t>(n)] = PLocal(1);
    Matrix mk = Matrix::Zero(n, n);
    const Matrix id = Matrix::Identity(n, n);
    for (Eigen::Index k = 1; k <= n; ++k) {
        mk = Matrix(a * mk) + id * c[static_cast<std::size_t>(n - k + 1)];
        const Matrix amk = a * mk;
        PLocal tr(0);
        for (Eigen::Index i = 0; i < n; ++i) tr += amk(i, i);
        c[static_cast<std::size_t>(n - k)] = -tr / PLocal(static_cast<long>(k));
    }
    return c;
}

/// Divides by (x - root) if exact.
bool divide_root(Poly& f, const PLocal& root) {
    if (f.size() < 2) return false;
    Poly q(f.size() - 1, PLocal(0));
    PLocal carry(0);
    for (std::size_t k = f.size() - 1; k > 0; --k) {
        carry = f[k] + carry * root;
        q[k - 1] = carry;
    }
    if (!(f[0] + carry * root).is_zero()) return false;
    f = std::move(q);
    return true;
}

mpq_class abs_bound(const Poly& f) {
    mpq_class lead = f.back().rational();
    mpq_class m = 0;
    for (std::size_t k = 0; k + 1 < f.size(); ++k) {
        mpq_class v = abs(f[k].rational() / lead);
        if (v > m) m = v;
    }
    return m + 1;
}

std::vector<Eigen::Index> free_indices(const CyclicSum& m) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index i = 0; i < m.size(); ++i)
        if (m.order(i) == 0) idx.push_back(i);
    return idx;
}

Matrix free_block(const CyclicSum& m, const Matrix& psi) {
    const auto idx = free_indices(m);
    const auto r = static_cast<Eigen::Index>(idx.size());
    Matrix a(r, r);
    for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index j = 0; j < r; ++j) a(i, j) = psi(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
    return a;
}

/// Weights j with g^{j(p-1)} a root of the characteristic polynomial, with
/// multiplicity; nullopt if some root is not of that form.
std::optional<std::vector<long>> weights_of(const Matrix& a, Prime p) {
    Poly f = characteristic_polynomial(a);
    std::vector<long> weights;
    auto take = [&](long j) {
        const PLocal lambda = twist_scalar(p, j);
        while (divide_root(f, lambda)) weights.push_back(j);
    };
    take(0);
    if (f.size() > 1 && !f[0].is_zero()) {
        const mpq_class upper = abs_bound(f);
        for (long j = 1; f.size() > 1 && twist_scalar(p, j).rational() <= upper; ++j) take(j);
        Poly rev(f.rbegin(), f.rend());
        const mpq_class lower = abs_bound(rev);
        for (long j = 1; f.size() > 1 && twist_scalar(p, -j).rational() * lower >= 1; ++j) take(-j);
    }
    if (f.size() > 1) return std::nullopt;
    std::sort(weights.begin(), weights.end());
    return weights;
}

bool unipotent_mod_p(const Matrix& psi, Prime p) {
    const Eigen::Index n = psi.rows();
    if (n == 0) return true;
    const long q = p.value();
    std::vector<std::vector<long>> nmat(static_cast<std::size_t>(n), std::vector<long>(static_cast<std::size_t>(n)));
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            long v = reduce_mod(psi(i, j), p, 1).numerator().get_si();
            if (i == j) v = (v + q - 1) % q;
            nmat[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = v;
        }
    auto power = nmat;
    for (Eigen::Index step = 1; step < n; ++step) {
        auto next = power;
        for (std::size_t i = 0; i < power.size(); ++i)
            for (std::size_t j = 0; j < power.size(); ++j) {
                long s = 0;
                for (std::size_t k = 0; k < power.size(); ++k) s = (s + power[i][k] * nmat[k][j]) % q;
                next[i][j] = s;
            }
        power = std::move(next);
    }
    for (const auto& row : power)
        for (long v : row)
            if (v != 0) return false;
    return true;
}

std::string matrix_str(const Matrix& m) {
    std::ostringstream os;
    os << "[";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        if (i) os << ", ";
        os << "[";
        for (Eigen::Index j = 0; j < m.cols(); ++j) os << (j ? ", " : "") << m(i, j);
        os << "]";
    }
    os << "]";
    return os.str();
}

void require_same(const AdamsModule& a, const AdamsModule& b, const char* what) {
    if (!(a == b)) throw std::invalid_argument(std::string(what) + ": object mismatch");
}

}  // namespace

std::string ObjectReport::str() const {
    std::ostringstream os;
    os << (valid ? "valid" : "invalid");
    if (!weights.empty() || valid) {
        os << "; weights {";
        for (std::size_t i = 0; i < weights.size(); ++i) os << (i ? ", " : "") << weights[i];
        os << "}";
    }
    if (split) os << "; " << (*split ? "split" : "non-split");
    for (const auto& f : failures) os << "\n  - " << f;
    return os.str();
}

ObjectReport validate_object(const CyclicSum& underlying, const Matrix& psi) {
    ObjectReport r;
    const Prime p = underlying.prime();
    if (auto err = well_definedness_error(underlying, underlying, psi); !err.empty()) {
        r.valid = false;
        r.failures.push_back("psi is not an endomorphism: " + err);
        return r;
    }
    const MatrixMap f = MatrixMap::make(underlying, underlying, psi);
    if (!is_surjective(f)) r.failures.push_back("psi is not invertible");
    if (!unipotent_mod_p(f.matrix, p)) r.failures.push_back("psi is not unipotent modulo p (continuity)");

    const Matrix a = free_block(underlying, f.matrix);
    auto weights = weights_of(a, p);
    if (!weights) {
        r.failures.push_back("some rational eigenvalue of psi is not of the form g^{j(p-1)}");
    } else {
        std::vector<long> distinct = *weights;
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        Matrix prod = Matrix::Identity(a.rows(), a.cols());
        for (long j : distinct) prod = prod * (a - Matrix::Identity(a.rows(), a.cols()) * twist_scalar(p, j));
        bool zero = true;
        for (Eigen::Index i = 0; i < prod.rows() && zero; ++i)
            for (Eigen::Index k = 0; k < prod.cols(); ++k)
                if (!prod(i, k).is_zero()) zero = false;
        if (!zero)
            r.failures.push_back("minimal polynomial of psi is not squarefree (not rationally diagonalizable)");
        else
            r.weights = *weights;
    }
    r.valid = r.failures.empty();
    if (r.valid && underlying.is_free()) {
        std::vector<long> distinct = r.weights;
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        Matrix span(a.rows(), 0);
        for (long j : distinct)
            span = hconcat(span, kernel_lattice(a - Matrix::Identity(a.rows(), a.cols()) * twist_scalar(p, j), p));
        const auto s = smith_normal_form(span, p);
        bool units = s.rank == a.rows();
        for (Eigen::Index i = 0; i < s.rank && units; ++i) units = s.D(i, i) == PLocal(1);
        r.split = units;
    }
    return r;
}

// ---------------------------------------------------------------------------

AdamsModule AdamsModule::make(CyclicSum underlying, const Matrix& psi) {
    const auto report = validate_object(underlying, psi);
    if (!report.valid) {
        std::string msg = "invalid Adams module:";
        for (const auto& f : report.failures) msg += " " + f + ";";
        msg.pop_back();
        throw ValidationError(msg);
    }
    return unchecked(std::move(underlying), psi);
}

AdamsModule AdamsModule::unchecked(CyclicSum underlying, const Matrix& psi) {
    CyclicSum copy = underlying;
    return AdamsModule(MatrixMap::make(std::move(copy), std::move(underlying), psi));
}

AdamsModule AdamsModule::line(Prime p, long weight) {
    return AdamsModule(MatrixMap{CyclicSum::free(p, 1), CyclicSum::free(p, 1), Matrix::Constant(1, 1, twist_scalar(p, weight))});
}

AdamsModule AdamsModule::zero(Prime p) { return AdamsModule(MatrixMap::zero(CyclicSum(p), CyclicSum(p))); }

std::string AdamsModule::str() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    os << "(";
    for (Eigen::Index i = 0; i < size(); ++i) {
        if (i) os << " + ";
        const int e = underlying().order(i);
        os << (e == 0 ? std::string("Z_(p)") : e == 1 ? std::string("Z/p") : "Z/p^" + std::to_string(e));
    }
    os << ", psi = " << matrix_str(psi_.matrix) << ")";
    return os.str();
}

AdamsModule operator+(const AdamsModule& a, const AdamsModule& b) {
    return AdamsModule::unchecked(a.underlying() + b.underlying(), block_diagonal(a.psi().matrix, b.psi().matrix));
}

// ---------------------------------------------------------------------------

bool is_equivariant(const AdamsModule& source, const AdamsModule& target, const MatrixMap& f) {
    return compose(target.psi(), f) == compose(f, source.psi());
}

AdamsMap AdamsMap::make(AdamsModule source, AdamsModule target, const Matrix& m) {
    MatrixMap f = MatrixMap::make(source.underlying(), target.underlying(), m);
    if (!is_equivariant(source, target, f)) throw ValidationError("map is not psi-equivariant");
    return AdamsMap{std::move(source), std::move(target), std::move(f)};
}

AdamsMap AdamsMap::zero(AdamsModule source, AdamsModule target) {
    MatrixMap f = MatrixMap::zero(source.underlying(), target.underlying());
    return AdamsMap{std::move(source), std::move(target), std::move(f)};
}

AdamsMap AdamsMap::identity(const AdamsModule& m) { return AdamsMap{m, m, MatrixMap::identity(m.underlying())}; }

AdamsMap compose(const AdamsMap& g, const AdamsMap& f) {
    require_same(f.target, g.source, "compose");
    return AdamsMap{f.source, g.target, compose(g.map, f.map)};
}

AdamsMap operator+(const AdamsMap& a, const AdamsMap& b) {
    require_same(a.source, b.source, "sum");
    require_same(a.target, b.target, "sum");
    return AdamsMap{a.source, a.target, a.map + b.map};
}

AdamsMap operator-(const AdamsMap& a) { return AdamsMap{a.source, a.target, -a.map}; }
AdamsMap operator-(const AdamsMap& a, const AdamsMap& b) { return a + (-b); }
AdamsMap scaled(const AdamsMap& f, const PLocal& c) { return AdamsMap{f.source, f.target, scaled(f.map, c)}; }

AdamsMap direct_sum(const AdamsMap& a, const AdamsMap& b) {
    return AdamsMap{a.source + b.source, a.target + b.target, direct_sum(a.map, b.map)};
}

std::optional<int> cross_annihilator_exponent(Prime p, long d) {
    if (d == 0) return std::nullopt;
    return 1 + valuation(mpz_class(d), p);
}

// ---------------------------------------------------------------------------

HomBasis::HomBasis(const CyclicSum& s, const CyclicSum& t) : source(s), target(t), module(s.prime()) {
    std::vector<int> orders;
    for (Eigen::Index j = 0; j < s.size(); ++j)
        for (Eigen::Index i = 0; i < t.size(); ++i) {
            const int e = s.order(j), f = t.order(i);
            if (e > 0 && f == 0) continue;
            positions.emplace_back(i, j);
            if (e == 0) {
                orders.push_back(f);
                entry_scale.emplace_back(1);
            } else {
                orders.push_back(std::min(e, f));
                entry_scale.emplace_back(prime_power(s.prime(), std::max(0, f - e)));
            }
        }
    module = CyclicSum(s.prime(), std::move(orders));
}

Matrix HomBasis::matrix_of(const Matrix& coordinates) const {
    Matrix m = Matrix::Zero(target.size(), source.size());
    for (std::size_t k = 0; k < positions.size(); ++k) {
        const auto [i, j] = positions[k];
        m(i, j) += coordinates(static_cast<Eigen::Index>(k), 0) * entry_scale[k];
    }
    return reduce_rows(target, std::move(m));
}

Matrix HomBasis::coordinates_of(const Matrix& hom) const {
    Matrix c(module.size(), 1);
    for (std::size_t k = 0; k < positions.size(); ++k) {
        const auto [i, j] = positions[k];
        c(static_cast<Eigen::Index>(k), 0) = hom(i, j) / entry_scale[k];
    }
    return reduce_rows(module, std::move(c));
}

namespace {

/// The operator on Hom_Z(M, N) given by f -> op(f), as a matrix on HomBasis.
template <typename Op>
MatrixMap hom_operator(const HomBasis& b, Op op) {
    const Eigen::Index n = b.module.size();
    Matrix m(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        Matrix e = Matrix::Zero(n, 1);
        e(k, 0) = PLocal(1);
        m.col(k) = b.coordinates_of(op(b.matrix_of(e)));
    }
    return MatrixMap::make(b.module, b.module, m);
}

Subquotient equivariant_kernel(const HomBasis& b, const AdamsModule& source, const AdamsModule& target) {
    const Matrix& ps = source.psi().matrix;
    const Matrix& pt = target.psi().matrix;
    return kernel_subquotient(hom_operator(b, [&](const Matrix& f) { return reduce_rows(b.target, pt * f - f * ps); }));
}

}  // namespace

HomGroup::HomGroup(const AdamsModule& source, const AdamsModule& target)
    : source_(source), target_(target), basis_(source.underlying(), target.underlying()),
      kernel_(equivariant_kernel(basis_, source, target)) {
    const Matrix lift = kernel_.lift();
    for (Eigen::Index k = 0; k < lift.cols(); ++k)
        generators_.push_back(AdamsMap{source_, target_, MatrixMap::make(source_.underlying(), target_.underlying(), basis_.matrix_of(lift.col(k)))});
}

Matrix HomGroup::coordinates(const AdamsMap& f) const { return kernel_.project(basis_.coordinates_of(f.matrix())); }

AdamsMap HomGroup::combine(const Matrix& coefficients) const {
    return AdamsMap{source_, target_, MatrixMap::make(source_.underlying(), target_.underlying(), basis_.matrix_of(kernel_.lift() * coefficients))};
}

// ---------------------------------------------------------------------------

AdamsModule twist(const AdamsModule& m, long n) {
    if (n == 0) return m;
    return AdamsModule::unchecked(m.underlying(), m.psi().matrix * twist_scalar(m.prime(), n));
}

AdamsMap twist(const AdamsMap& f, long n) { return AdamsMap{twist(f.source, n), twist(f.target, n), f.map}; }

AdamsModule smash(const AdamsModule& a, const AdamsModule& b) {
    const MatrixMap t = tensor(a.psi(), b.psi());
    return AdamsModule::unchecked(t.source, t.matrix);
}

AdamsMap smash(const AdamsMap& f, const AdamsMap& g) {
    return AdamsMap{smash(f.source, g.source), smash(f.target, g.target), tensor(f.map, g.map)};
}

bool is_dualisable(const AdamsModule& m) { return m.is_free(); }

std::optional<MatrixMap> inverse(const MatrixMap& f) {
    if (!(f.source.normal_form() == f.target.normal_form()) || !is_isomorphism(f)) return std::nullopt;
    const Eigen::Index n = f.target.size();
    auto x = solve(hconcat(f.matrix, f.target.relations()), Matrix::Identity(n, n), f.source.prime());
    if (!x) return std::nullopt;
    return MatrixMap::make(f.target, f.source, x->topRows(f.source.size()));
}

std::optional<AdamsMap> inverse(const AdamsMap& f) {
    auto g = inverse(f.map);
    if (!g) return std::nullopt;
    return AdamsMap{f.target, f.source, std::move(*g)};
}

AdamsModule dual(const AdamsModule& m) {
    if (!is_dualisable(m)) throw ValidationError("not dualisable: underlying module " + m.normal_form().str() + " has torsion");
    auto inv = inverse(m.psi());
    if (!inv) throw ValidationError("psi is not invertible");
    return AdamsModule::unchecked(m.underlying(), inv->matrix.transpose());
}

AdamsModule function_object(const AdamsModule& m, const AdamsModule& n) { return smash(dual(m), n); }

AdamsModule internal_hom(const AdamsModule& m, const AdamsModule& n) {
    const HomBasis b(m.underlying(), n.underlying());
    auto inv = inverse(m.psi());
    if (!inv) throw ValidationError("psi is not invertible");
    const Matrix& pn = n.psi().matrix;
    const Matrix& pinv = inv->matrix;
    const MatrixMap action = hom_operator(b, [&](const Matrix& f) { return reduce_rows(b.target, pn * f * pinv); });
    return AdamsModule::unchecked(b.module, action.matrix);
}

AdamsMap dual_comparison(const AdamsModule& m, const AdamsModule& n) {
    const AdamsModule source = function_object(m, n);
    const AdamsModule target = internal_hom(m, n);
    // With free M both sides index generators by (source j, target i), j outer.
    return AdamsMap::make(source, target, Matrix::Identity(target.size(), source.size()));
}

std::string DualisableCertificate::str() const {
    std::ostringstream os;
    os << (dualisable ? "dualisable" : "not dualisable");
    for (const auto& c : checked) os << "\n  " << c;
    return os.str();
}

DualisableCertificate certify_dualisable(const AdamsModule& m, const DetectionFamily& family) {
    DualisableCertificate c;
    if (!m.is_free()) {
        c.checked.push_back("torsion present: " + m.normal_form().str());
        return c;
    }
    c.dualisable = true;
    for (std::size_t k = 0; k < family.members.size(); ++k) {
        const bool iso = is_isomorphism(dual_comparison(m, family.members[k]).map);
        c.checked.push_back("DM ^ N -> F(M, N) for N = " + family.labels[k] + (iso ? ": iso" : ": NOT iso"));
        c.dualisable = c.dualisable && iso;
    }
    return c;
}

// ---------------------------------------------------------------------------

std::optional<AdamsMap> find_isomorphism(const AdamsModule& m, const AdamsModule& n) {
    if (!(m.prime() == n.prime()) || !(m.normal_form() == n.normal_form())) return std::nullopt;
    if (m.is_zero()) return AdamsMap::zero(m, n);
    const HomGroup hom(m, n);
    const auto& gens = hom.generators();
    const auto s = static_cast<Eigen::Index>(gens.size());
    if (s == 0) return std::nullopt;
    const long q = m.prime().value();
    // A map is surjective iff it is surjective mod p; with equal normal forms
    // a surjection is an isomorphism.
    auto try_coeffs = [&](const std::vector<long>& c) -> std::optional<AdamsMap> {
        Matrix coeff(s, 1);
        for (Eigen::Index k = 0; k < s; ++k) coeff(k, 0) = PLocal(c[static_cast<std::size_t>(k)]);
        AdamsMap f = hom.combine(coeff);
        if (rank_mod_p(f.matrix(), m.prime()) == n.size()) return f;
        return std::nullopt;
    };
    double space = 1;
    for (Eigen::Index k = 0; k < s; ++k) space *= static_cast<double>(q);
    std::vector<long> c(static_cast<std::size_t>(s), 0);
    if (space <= 65536.0) {
        while (true) {
            if (auto f = try_coeffs(c)) return f;
            std::size_t k = 0;
            while (k < c.size() && ++c[k] == q) c[k++] = 0;
            if (k == c.size()) break;
        }
        return std::nullopt;
    }
    std::mt19937_64 rng(0x5eed);
    std::uniform_int_distribution<long> dist(0, q - 1);
    for (int trial = 0; trial < 4096; ++trial) {
        for (auto& x : c) x = dist(rng);
        if (auto f = try_coeffs(c)) return f;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------

AdamsKernelCokernelImage kernel_cokernel_image(const AdamsMap& f) {
    const auto ker = kernel_subquotient(f.map);
    const auto coker = cokernel_subquotient(f.map);
    const auto im = image_subquotient(f.map);
    const Matrix& ps = f.source.psi().matrix;
    const Matrix& pt = f.target.psi().matrix;
    const AdamsModule kmod = AdamsModule::unchecked(ker.module(), induced_map(ker, ker, ps).matrix);
    const AdamsModule cmod = AdamsModule::unchecked(coker.module(), induced_map(coker, coker, pt).matrix);
    const AdamsModule imod = AdamsModule::unchecked(im.module(), induced_map(im, im, ps).matrix);
    const Eigen::Index m = f.source.size(), n = f.target.size();
    return AdamsKernelCokernelImage{
        AdamsMap::make(kmod, f.source, ker.lift()),
        AdamsMap::make(f.target, cmod, coker.project(Matrix::Identity(n, n))),
        AdamsMap::make(f.source, imod, im.project(Matrix::Identity(m, m))),
        AdamsMap::make(imod, f.target, f.matrix() * im.lift()),
    };
}

AdamsModule homology_at(const AdamsMap& d_in, const AdamsMap& d_out) {
    const auto h = homology_subquotient(d_in.map, d_out.map);
    return AdamsModule::unchecked(h.module(), induced_map(h, h, d_in.target.psi().matrix).matrix);
}

// ---------------------------------------------------------------------------

namespace {

std::vector<long> ordered_window(long lo, long hi) {
    std::vector<long> w;
    for (long j = lo; j <= hi; ++j) w.push_back(j);
    std::sort(w.begin(), w.end(), [](long a, long b) {
        const long aa = a < 0 ? -a : a, bb = b < 0 ? -b : b;
        return aa != bb ? aa < bb : a < b;
    });
    return w;
}

}  // namespace

/// Z_(p)[psi]/(f) for f the product of (t - g^{j(p-1)}) over the given
/// distinct weights, psi acting by the companion matrix of f.
AdamsModule companion_module(Prime p, const std::vector<long>& weights) {
    std::vector<PLocal> f{PLocal(1)};
    for (long j : weights) {
        const PLocal root = twist_scalar(p, j);
        std::vector<PLocal> next(f.size() + 1, PLocal(0));
        for (std::size_t i = 0; i < f.size(); ++i) {
            next[i + 1] += f[i];
            next[i] -= root * f[i];
        }
        f = std::move(next);
    }
    const auto n = static_cast<Eigen::Index>(weights.size());
    Matrix psi = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i + 1 < n; ++i) psi(i + 1, i) = PLocal(1);
    for (Eigen::Index i = 0; i < n; ++i) psi(i, n - 1) = -f[static_cast<std::size_t>(i)];
    return AdamsModule::make(CyclicSum::free(p, static_cast<int>(n)), psi);
}

DetectionFamily DetectionFamily::standard(Prime p, long lo, long hi, int max_rank) {
    if (lo > hi) throw std::invalid_argument("detection family: empty weight window");
    DetectionFamily fam = lines(p, ordered_window(lo, hi));
    fam.window_lo = lo;
    fam.window_hi = hi;
    fam.max_rank = max_rank;
    if (max_rank < 2) return fam;
    const auto w = ordered_window(lo, hi);
    for (long a : w)
        for (long b : w) {
            if (a == b) continue;
            Matrix psi(2, 2);
            psi << twist_scalar(p, a), PLocal(1), PLocal(0), twist_scalar(p, b);
            fam.members.push_back(AdamsModule::make(CyclicSum::free(p, 2), psi));
            fam.labels.push_back("E(" + std::to_string(a) + "," + std::to_string(b) + ")");
        }
    for (int r = 3; r <= max_rank && r <= static_cast<int>(w.size()); ++r) {
        std::vector<bool> pick(w.size(), false);
        std::fill(pick.begin(), pick.begin() + r, true);
        do {
            std::vector<long> sub;
            std::string label;
            for (std::size_t i = 0; i < w.size(); ++i)
                if (pick[i]) {
                    label += (sub.empty() ? "A(" : ",") + std::to_string(w[i]);
                    sub.push_back(w[i]);
                }
            fam.members.push_back(companion_module(p, sub));
            fam.labels.push_back(label + ")");
        } while (std::prev_permutation(pick.begin(), pick.end()));
    }
    return fam;
}

DetectionFamily DetectionFamily::lines(Prime p, const std::vector<long>& weights) {
    DetectionFamily fam{p, 0, 0, 1, {}, {}};
    fam.max_rank = 1;
    if (!weights.empty()) {
        fam.window_lo = *std::min_element(weights.begin(), weights.end());
        fam.window_hi = *std::max_element(weights.begin(), weights.end());
    }
    for (long j : weights) {
        fam.members.push_back(AdamsModule::line(p, j));
        fam.labels.push_back("L_" + std::to_string(j));
    }
    return fam;
}

std::string DetectionFamily::str() const {
    std::ostringstream os;
    os << "detection family (p=" << p.value() << ", window [" << window_lo << ", " << window_hi << "], max rank "
       << max_rank << ", " << members.size() << " members):";
    for (const auto& l : labels) os << " " << l;
    return os.str();
}

}  // namespace qpc
