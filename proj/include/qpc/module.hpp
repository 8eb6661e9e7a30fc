// Finitely generated Z_(p)-modules, maps between them, and the exact
// kernel / cokernel / image / homology machinery built on Smith normal form.
#pragma once

#include <Eigen/Core>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qpc/scalar.hpp"
#include "qpc/smith.hpp"

namespace qpc {

using Matrix = MatrixX<PLocal>;

class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Canonical normal form Z_(p)^r + sum_i Z/p^{e_i}, e_1 >= e_2 >= ... > 0.
struct FgModule {
    int free_rank = 0;
    std::vector<int> torsion_exponents;

    bool is_zero() const { return free_rank == 0 && torsion_exponents.empty(); }
    std::string str() const;
    friend bool operator==(const FgModule&, const FgModule&) = default;
    friend std::ostream& operator<<(std::ostream& os, const FgModule& m) { return os << m.str(); }
};

/// An explicit generator sequence: generator i has order p^{orders[i]}, with
/// 0 meaning infinite order. Maps are matrices against these generators.
/// Unlike FgModule the order of summands is arbitrary, so direct sums are
/// plain concatenation.
class CyclicSum {
public:
    explicit CyclicSum(Prime p, std::vector<int> orders = {});
    static CyclicSum free(Prime p, int rank);
    static CyclicSum cyclic(Prime p, int exponent);
    static CyclicSum from_normal_form(Prime p, const FgModule& m);

    Prime prime() const { return p_; }
    const std::vector<int>& orders() const { return orders_; }
    int order(Eigen::Index i) const { return orders_[static_cast<std::size_t>(i)]; }
    Eigen::Index size() const { return static_cast<Eigen::Index>(orders_.size()); }
    bool is_zero() const { return orders_.empty(); }
    bool is_free() const;
    int free_rank() const;

    FgModule normal_form() const;
    /// Columns p^{e} e_i for every torsion generator i.
    Matrix relations() const;

    friend CyclicSum operator+(const CyclicSum& a, const CyclicSum& b);
    friend bool operator==(const CyclicSum& a, const CyclicSum& b) {
        return a.p_ == b.p_ && a.orders_ == b.orders_;
    }

private:
    Prime p_;
    std::vector<int> orders_;
};

/// Reduces every row belonging to a torsion generator of `target` to its
/// canonical representative in [0, p^e).
Matrix reduce_rows(const CyclicSum& target, Matrix m);

/// Empty string when the matrix defines a homomorphism source -> target,
/// otherwise a description of the first violated order condition.
std::string well_definedness_error(const CyclicSum& source, const CyclicSum& target, const Matrix& m);

/// Homomorphism between explicit generator sequences; matrix is target x source
/// and always held in reduced form, so equality of maps is equality of fields.
struct MatrixMap {
    CyclicSum source;
    CyclicSum target;
    Matrix matrix;

    /// Validates well-definedness and p-locality, then reduces.
    static MatrixMap make(CyclicSum source, CyclicSum target, Matrix m);
    static MatrixMap zero(CyclicSum source, CyclicSum target);
    static MatrixMap identity(const CyclicSum& m);

    bool is_zero() const;
    friend bool operator==(const MatrixMap&, const MatrixMap&) = default;
};

MatrixMap compose(const MatrixMap& g, const MatrixMap& f);
inline MatrixMap operator*(const MatrixMap& g, const MatrixMap& f) { return compose(g, f); }
MatrixMap operator+(const MatrixMap& a, const MatrixMap& b);
MatrixMap operator-(const MatrixMap& a, const MatrixMap& b);
MatrixMap operator-(const MatrixMap& a);
MatrixMap scaled(const MatrixMap& f, const PLocal& c);
MatrixMap direct_sum(const MatrixMap& a, const MatrixMap& b);

// ---------------------------------------------------------------------------
// Smith normal form and lattices

struct PLocalRing {
    Prime p;
    int valuation(const PLocal& x) const { return qpc::valuation(x, p); }
    PLocal unit_part(const PLocal& x) const;
};

SmithForm<PLocal> smith_normal_form(const Matrix& m, Prime p);

/// Basis (as columns) of {x : A x = 0} in Z_(p)^{cols(A)}.
Matrix kernel_lattice(const Matrix& a, Prime p);
/// Basis of the Z_(p)-span of the columns of `gens`.
Matrix lattice_basis(const Matrix& gens, Prime p);
/// Some X over Z_(p) with A X = B, if one exists.
std::optional<Matrix> solve(const Matrix& a, const Matrix& b, Prime p);

/// Normal form of the cokernel of `relations` (generators x relations) with
/// the coordinate change to and from the normal-form generators.
struct Normalization {
    CyclicSum module;
    Matrix to_normal;    // module.size() x generators
    Matrix from_normal;  // generators x module.size()
};
Normalization normalize(Prime p, Eigen::Index generators, const Matrix& relations);
FgModule normalize_presentation(Prime p, Eigen::Index generators, const Matrix& relations);

/// L / R for lattices R <= L <= Z_(p)^n, where L is given by a basis and R by
/// generators. This is the common carrier for kernels, images, cokernels and
/// homology, and supports transporting maps between such quotients.
class Subquotient {
public:
    Subquotient(Prime p, Matrix basis, const Matrix& relations);

    const CyclicSum& module() const { return normal_.module; }
    Eigen::Index ambient_rank() const { return basis_.rows(); }
    /// Ambient coordinates of each normal-form generator (n x r).
    Matrix lift() const { return basis_ * normal_.from_normal; }
    /// Reduced module coordinates of ambient vectors lying in L.
    Matrix project(const Matrix& ambient) const;
    bool contains(const Matrix& ambient) const;

private:
    std::optional<Matrix> basis_coordinates(const Matrix& ambient) const;

    Prime p_;
    Matrix basis_;
    SmithForm<PLocal> basis_snf_;
    Normalization normal_;
};

Subquotient kernel_subquotient(const MatrixMap& f);
Subquotient image_subquotient(const MatrixMap& f);  // as a quotient of the source
Subquotient cokernel_subquotient(const MatrixMap& f);
Subquotient homology_subquotient(const MatrixMap& d_in, const MatrixMap& d_out);
/// Whole module as a subquotient of its own free cover. Its module() is the
/// normal form, whose generators may be permuted relative to m.
Subquotient whole(const CyclicSum& m);

/// The map from.module() -> to.module() induced by an ambient map whose
/// matrix sends from's ambient free cover to to's ambient free cover.
MatrixMap induced_map(const Subquotient& from, const Subquotient& to, const Matrix& ambient);

struct KernelCokernelImage {
    MatrixMap kernel_inclusion;     // ker -> source
    MatrixMap cokernel_projection;  // target -> coker
    MatrixMap coimage_projection;   // source -> im
    MatrixMap image_inclusion;      // im -> target
    FgModule kernel() const { return kernel_inclusion.source.normal_form(); }
    FgModule cokernel() const { return cokernel_projection.target.normal_form(); }
    FgModule image() const { return image_inclusion.source.normal_form(); }
};
KernelCokernelImage kernel_cokernel_image(const MatrixMap& f);

/// Rank over F_p of the reduction of a p-local matrix.
Eigen::Index rank_mod_p(const Matrix& m, Prime p);

bool is_injective(const MatrixMap& f);
bool is_surjective(const MatrixMap& f);
bool is_isomorphism(const MatrixMap& f);

/// ker(d_out) / im(d_in); throws ValidationError("not a complex") when
/// d_out * d_in != 0.
FgModule homology_at(const MatrixMap& d_in, const MatrixMap& d_out);

/// Generator (i, j) of the product has order min(order_i, order_j) and index
/// i * b.size() + j, matching the Kronecker product of matrices.
CyclicSum tensor(const CyclicSum& a, const CyclicSum& b);
MatrixMap tensor(const MatrixMap& f, const MatrixMap& g);
FgModule tensor_modules(Prime p, const FgModule& a, const FgModule& b);

Matrix kronecker(const Matrix& a, const Matrix& b);
Matrix block_diagonal(const Matrix& a, const Matrix& b);
Matrix hconcat(const Matrix& a, const Matrix& b);
Matrix vconcat(const Matrix& a, const Matrix& b);

}  // namespace qpc
