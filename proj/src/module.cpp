#include "qpc/module.hpp"

#include <algorithm>
#include <sstream>

namespace qpc {

std::string FgModule::str() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    if (free_rank > 0) {
        os << "Z_(p)";
        if (free_rank > 1) os << "^" << free_rank;
        first = false;
    }
    for (int e : torsion_exponents) {
        if (!first) os << " + ";
        os << "Z/p";
        if (e > 1) os << "^" << e;
        first = false;
    }
    return os.str();
}

// ---------------------------------------------------------------------------

CyclicSum::CyclicSum(Prime p, std::vector<int> orders) : p_(p), orders_(std::move(orders)) {
    for (int e : orders_)
        if (e < 0) throw std::invalid_argument("negative generator order");
}

CyclicSum CyclicSum::free(Prime p, int rank) { return CyclicSum(p, std::vector<int>(static_cast<std::size_t>(rank), 0)); }

CyclicSum CyclicSum::cyclic(Prime p, int exponent) { return CyclicSum(p, {exponent}); }

CyclicSum CyclicSum::from_normal_form(Prime p, const FgModule& m) {
    std::vector<int> orders(static_cast<std::size_t>(m.free_rank), 0);
    orders.insert(orders.end(), m.torsion_exponents.begin(), m.torsion_exponents.end());
    return CyclicSum(p, std::move(orders));
}

bool CyclicSum::is_free() const {
    return std::all_of(orders_.begin(), orders_.end(), [](int e) { return e == 0; });
}

int CyclicSum::free_rank() const {
    return static_cast<int>(std::count(orders_.begin(), orders_.end(), 0));
}

FgModule CyclicSum::normal_form() const {
    FgModule m;
    for (int e : orders_) {
        if (e == 0)
            ++m.free_rank;
        else
            m.torsion_exponents.push_back(e);
    }
    std::sort(m.torsion_exponents.begin(), m.torsion_exponents.end(), std::greater<>());
    return m;
}

Matrix CyclicSum::relations() const {
    const Eigen::Index n = size();
    const auto t = static_cast<Eigen::Index>(n - free_rank());
    Matrix r = Matrix::Zero(n, t);
    Eigen::Index c = 0;
    for (Eigen::Index i = 0; i < n; ++i)
        if (order(i) > 0) r(i, c++) = PLocal(prime_power(p_, order(i)));
    return r;
}

CyclicSum operator+(const CyclicSum& a, const CyclicSum& b) {
    if (!(a.p_ == b.p_)) throw std::invalid_argument("direct sum of modules over different primes");
    std::vector<int> orders = a.orders_;
    orders.insert(orders.end(), b.orders_.begin(), b.orders_.end());
    return CyclicSum(a.p_, std::move(orders));
}

// ---------------------------------------------------------------------------

Matrix reduce_rows(const CyclicSum& target, Matrix m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        const int e = target.order(i);
        if (e == 0) continue;
        for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = reduce_mod(m(i, j), target.prime(), e);
    }
    return m;
}

std::string well_definedness_error(const CyclicSum& source, const CyclicSum& target, const Matrix& m) {
    if (m.rows() != target.size() || m.cols() != source.size()) {
        std::ostringstream os;
        os << "matrix is " << m.rows() << "x" << m.cols() << ", expected " << target.size() << "x"
           << source.size();
        return os.str();
    }
    const Prime p = source.prime();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            const PLocal& a = m(i, j);
            if (!is_p_local(a, p)) return "entry (" + std::to_string(i) + "," + std::to_string(j) + ") = " + a.str() + " is not p-local";
            const int e = source.order(j);
            if (e == 0 || a.is_zero()) continue;
            const int f = target.order(i);
            const bool ok = (f != 0) && (valuation(a, p) >= f - e);
            if (!ok) {
                std::ostringstream os;
                os << "order violation: generator " << j << " has order p^" << e << " but its image has coefficient "
                   << a << " on generator " << i << (f == 0 ? " of infinite order" : " of order p^" + std::to_string(f));
                return os.str();
            }
        }
    }
    return {};
}

MatrixMap MatrixMap::make(CyclicSum source, CyclicSum target, Matrix m) {
    if (!(source.prime() == target.prime())) throw ValidationError("map between modules over different primes");
    if (auto err = well_definedness_error(source, target, m); !err.empty()) throw ValidationError(err);
    Matrix reduced = reduce_rows(target, std::move(m));
    return MatrixMap{std::move(source), std::move(target), std::move(reduced)};
}

MatrixMap MatrixMap::zero(CyclicSum source, CyclicSum target) {
    Matrix m = Matrix::Zero(target.size(), source.size());
    return MatrixMap{std::move(source), std::move(target), std::move(m)};
}

MatrixMap MatrixMap::identity(const CyclicSum& m) {
    return MatrixMap{m, m, Matrix::Identity(m.size(), m.size())};
}

bool MatrixMap::is_zero() const {
    for (Eigen::Index i = 0; i < matrix.rows(); ++i)
        for (Eigen::Index j = 0; j < matrix.cols(); ++j)
            if (!matrix(i, j).is_zero()) return false;
    return true;
}

MatrixMap compose(const MatrixMap& g, const MatrixMap& f) {
    if (!(f.target == g.source)) throw std::invalid_argument("compose: module mismatch");
    Matrix m = g.matrix * f.matrix;
    return MatrixMap{f.source, g.target, reduce_rows(g.target, std::move(m))};
}

MatrixMap operator+(const MatrixMap& a, const MatrixMap& b) {
    if (!(a.source == b.source) || !(a.target == b.target)) throw std::invalid_argument("sum of maps: module mismatch");
    return MatrixMap{a.source, a.target, reduce_rows(a.target, a.matrix + b.matrix)};
}

MatrixMap operator-(const MatrixMap& a) { return MatrixMap{a.source, a.target, reduce_rows(a.target, -a.matrix)}; }

MatrixMap operator-(const MatrixMap& a, const MatrixMap& b) { return a + (-b); }

MatrixMap scaled(const MatrixMap& f, const PLocal& c) {
    return MatrixMap{f.source, f.target, reduce_rows(f.target, f.matrix * c)};
}

MatrixMap direct_sum(const MatrixMap& a, const MatrixMap& b) {
    return MatrixMap{a.source + b.source, a.target + b.target, block_diagonal(a.matrix, b.matrix)};
}

// ---------------------------------------------------------------------------

PLocal PLocalRing::unit_part(const PLocal& x) const {
    const int v = qpc::valuation(x, p);
    if (v == 0) return x;
    const mpz_class pv = prime_power(p, v < 0 ? -v : v);
    return v > 0 ? x / PLocal(pv) : x * PLocal(pv);
}

SmithForm<PLocal> smith_normal_form(const Matrix& m, Prime p) {
    return smith_normal_form<PLocal>(m, PLocalRing{p});
}

Matrix kernel_lattice(const Matrix& a, Prime p) {
    const auto s = smith_normal_form(a, p);
    return s.V.rightCols(a.cols() - s.rank);
}

Matrix lattice_basis(const Matrix& gens, Prime p) {
    const auto s = smith_normal_form(gens, p);
    Matrix b(gens.rows(), s.rank);
    for (Eigen::Index i = 0; i < s.rank; ++i) b.col(i) = s.Uinv.col(i) * s.D(i, i);
    return b;
}

namespace {

std::optional<Matrix> solve_with(const SmithForm<PLocal>& s, Eigen::Index unknowns, const Matrix& b, Prime p) {
    Matrix y = s.U * b;
    for (Eigen::Index i = s.rank; i < y.rows(); ++i)
        for (Eigen::Index j = 0; j < y.cols(); ++j)
            if (!y(i, j).is_zero()) return std::nullopt;
    Matrix z = Matrix::Zero(unknowns, b.cols());
    for (Eigen::Index i = 0; i < s.rank; ++i)
        for (Eigen::Index j = 0; j < b.cols(); ++j) {
            PLocal q = y(i, j) / s.D(i, i);
            if (!is_p_local(q, p)) return std::nullopt;
            z(i, j) = std::move(q);
        }
    return Matrix(s.V * z);
}

}  // namespace

std::optional<Matrix> solve(const Matrix& a, const Matrix& b, Prime p) {
    if (a.rows() != b.rows()) throw std::invalid_argument("solve: row mismatch");
    return solve_with(smith_normal_form(a, p), a.cols(), b, p);
}

Normalization normalize(Prime p, Eigen::Index generators, const Matrix& relations) {
    if (relations.rows() != generators) throw std::invalid_argument("normalize: relation matrix has wrong row count");
    const auto s = smith_normal_form(relations, p);
    std::vector<Eigen::Index> picked;
    std::vector<int> orders;
    for (Eigen::Index i = s.rank; i < generators; ++i) {
        picked.push_back(i);
        orders.push_back(0);
    }
    for (Eigen::Index i = s.rank - 1; i >= 0; --i) {
        const int v = valuation(s.D(i, i), p);
        if (v == 0) continue;
        picked.push_back(i);
        orders.push_back(v);
    }
    const auto r = static_cast<Eigen::Index>(picked.size());
    Normalization n{CyclicSum(p, orders), Matrix(r, generators), Matrix(generators, r)};
    for (Eigen::Index k = 0; k < r; ++k) {
        n.to_normal.row(k) = s.U.row(picked[static_cast<std::size_t>(k)]);
        n.from_normal.col(k) = s.Uinv.col(picked[static_cast<std::size_t>(k)]);
    }
    n.to_normal = reduce_rows(n.module, n.to_normal);
    return n;
}

FgModule normalize_presentation(Prime p, Eigen::Index generators, const Matrix& relations) {
    return normalize(p, generators, relations).module.normal_form();
}

// ---------------------------------------------------------------------------

Subquotient::Subquotient(Prime p, Matrix basis, const Matrix& relations)
    : p_(p), basis_(std::move(basis)), basis_snf_(smith_normal_form(basis_, p)),
      normal_{CyclicSum(p), Matrix(), Matrix()} {
    if (basis_snf_.rank != basis_.cols()) throw std::invalid_argument("Subquotient: basis is not linearly independent");
    auto coords = basis_coordinates(relations);
    if (!coords) throw std::invalid_argument("Subquotient: relations are not contained in the lattice");
    normal_ = normalize(p, basis_.cols(), *coords);
}

std::optional<Matrix> Subquotient::basis_coordinates(const Matrix& ambient) const {
    return solve_with(basis_snf_, basis_.cols(), ambient, p_);
}

Matrix Subquotient::project(const Matrix& ambient) const {
    auto coords = basis_coordinates(ambient);
    if (!coords) throw std::invalid_argument("Subquotient::project: vector outside the lattice");
    return reduce_rows(module(), normal_.to_normal * *coords);
}

bool Subquotient::contains(const Matrix& ambient) const { return basis_coordinates(ambient).has_value(); }

Subquotient whole(const CyclicSum& m) {
    return Subquotient(m.prime(), Matrix::Identity(m.size(), m.size()), m.relations());
}

namespace {

Matrix kernel_basis_of_map(const MatrixMap& f) {
    const Matrix a = hconcat(f.matrix, f.target.relations());
    const Matrix k = kernel_lattice(a, f.source.prime());
    return k.topRows(f.source.size());
}

}  // namespace

Subquotient kernel_subquotient(const MatrixMap& f) {
    return Subquotient(f.source.prime(), kernel_basis_of_map(f), f.source.relations());
}

Subquotient image_subquotient(const MatrixMap& f) {
    const Eigen::Index m = f.source.size();
    return Subquotient(f.source.prime(), Matrix::Identity(m, m), kernel_basis_of_map(f));
}

Subquotient cokernel_subquotient(const MatrixMap& f) {
    const Eigen::Index n = f.target.size();
    return Subquotient(f.source.prime(), Matrix::Identity(n, n), hconcat(f.matrix, f.target.relations()));
}

Subquotient homology_subquotient(const MatrixMap& d_in, const MatrixMap& d_out) {
    if (!(d_in.target == d_out.source)) throw std::invalid_argument("homology: differentials do not compose");
    if (!compose(d_out, d_in).is_zero()) throw ValidationError("not a complex: d_out * d_in != 0");
    return Subquotient(d_in.source.prime(), kernel_basis_of_map(d_out), hconcat(d_in.matrix, d_in.target.relations()));
}

MatrixMap induced_map(const Subquotient& from, const Subquotient& to, const Matrix& ambient) {
    return MatrixMap{from.module(), to.module(), to.project(ambient * from.lift())};
}

KernelCokernelImage kernel_cokernel_image(const MatrixMap& f) {
    const auto ker = kernel_subquotient(f);
    const auto coker = cokernel_subquotient(f);
    const auto im = image_subquotient(f);
    const Eigen::Index m = f.source.size(), n = f.target.size();
    return KernelCokernelImage{
        MatrixMap::make(ker.module(), f.source, ker.lift()),
        MatrixMap{f.target, coker.module(), coker.project(Matrix::Identity(n, n))},
        MatrixMap{f.source, im.module(), im.project(Matrix::Identity(m, m))},
        MatrixMap::make(im.module(), f.target, f.matrix * im.lift()),
    };
}

Eigen::Index rank_mod_p(const Matrix& m, Prime p) {
    const long q = p.value();
    std::vector<std::vector<long>> a(static_cast<std::size_t>(m.rows()), std::vector<long>(static_cast<std::size_t>(m.cols())));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = reduce_mod(m(i, j), p, 1).numerator().get_si();
    auto inv = [q](long x) {
        long r = 1, b = x % q, e = q - 2;
        for (; e > 0; e >>= 1, b = b * b % q)
            if (e & 1) r = r * b % q;
        return r;
    };
    std::size_t rank = 0;
    for (std::size_t c = 0; c < static_cast<std::size_t>(m.cols()) && rank < a.size(); ++c) {
        std::size_t piv = rank;
        while (piv < a.size() && a[piv][c] == 0) ++piv;
        if (piv == a.size()) continue;
        std::swap(a[piv], a[rank]);
        const long s = inv(a[rank][c]);
        for (auto& x : a[rank]) x = x * s % q;
        for (std::size_t r = 0; r < a.size(); ++r) {
            if (r == rank || a[r][c] == 0) continue;
            const long f = a[r][c];
            for (std::size_t k = 0; k < a[r].size(); ++k) a[r][k] = ((a[r][k] - f * a[rank][k]) % q + q) % q;
        }
        ++rank;
    }
    return static_cast<Eigen::Index>(rank);
}

bool is_injective(const MatrixMap& f) { return kernel_subquotient(f).module().is_zero(); }
bool is_surjective(const MatrixMap& f) { return cokernel_subquotient(f).module().is_zero(); }
bool is_isomorphism(const MatrixMap& f) { return is_injective(f) && is_surjective(f); }

FgModule homology_at(const MatrixMap& d_in, const MatrixMap& d_out) {
    return homology_subquotient(d_in, d_out).module().normal_form();
}

// ---------------------------------------------------------------------------

CyclicSum tensor(const CyclicSum& a, const CyclicSum& b) {
    std::vector<int> orders;
    orders.reserve(static_cast<std::size_t>(a.size() * b.size()));
    for (int x : a.orders())
        for (int y : b.orders()) orders.push_back(x == 0 ? y : (y == 0 ? x : std::min(x, y)));
    return CyclicSum(a.prime(), std::move(orders));
}

MatrixMap tensor(const MatrixMap& f, const MatrixMap& g) {
    CyclicSum target = tensor(f.target, g.target);
    Matrix m = reduce_rows(target, kronecker(f.matrix, g.matrix));
    return MatrixMap{tensor(f.source, g.source), std::move(target), std::move(m)};
}

FgModule tensor_modules(Prime p, const FgModule& a, const FgModule& b) {
    return tensor(CyclicSum::from_normal_form(p, a), CyclicSum::from_normal_form(p, b)).normal_form();
}

Matrix kronecker(const Matrix& a, const Matrix& b) {
    Matrix k(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return k;
}

Matrix block_diagonal(const Matrix& a, const Matrix& b) {
    Matrix m = Matrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
    m.topLeftCorner(a.rows(), a.cols()) = a;
    m.bottomRightCorner(b.rows(), b.cols()) = b;
    return m;
}

Matrix hconcat(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows()) throw std::invalid_argument("hconcat: row mismatch");
    Matrix m(a.rows(), a.cols() + b.cols());
    m.leftCols(a.cols()) = a;
    m.rightCols(b.cols()) = b;
    return m;
}

Matrix vconcat(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.cols()) throw std::invalid_argument("vconcat: column mismatch");
    Matrix m(a.rows() + b.rows(), a.cols());
    m.topRows(a.rows()) = a;
    m.bottomRows(b.rows()) = b;
    return m;
}

}  // namespace qpc
