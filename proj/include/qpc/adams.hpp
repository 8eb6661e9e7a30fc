// Finitely generated p-local modules with Adams operations. The whole action
// of the p-local units is carried by the single operator psi = psi^g for the
// fixed generator g = 1 + p.
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qpc/module.hpp"

namespace qpc {

struct ObjectReport {
    bool valid = true;
    std::vector<std::string> failures;
    /// Weight multiset of the rational part, sorted; empty when the
    /// eigenvalue condition fails.
    std::vector<long> weights;
    /// For free underlying modules: whether psi is diagonalizable over Z_(p),
    /// i.e. the object is a direct sum of weight lines.
    std::optional<bool> split;
    std::string str() const;
};

ObjectReport validate_object(const CyclicSum& underlying, const Matrix& psi);

class AdamsModule {
public:
    /// Validates and throws ValidationError listing every failed condition.
    static AdamsModule make(CyclicSum underlying, const Matrix& psi);
    /// Skips the eigenvalue checks; used for subquotients whose operator is
    /// reported as computed.
    static AdamsModule unchecked(CyclicSum underlying, const Matrix& psi);
    static AdamsModule line(Prime p, long weight);
    static AdamsModule unit(Prime p) { return line(p, 0); }
    static AdamsModule zero(Prime p);

    Prime prime() const { return psi_.source.prime(); }
    const CyclicSum& underlying() const { return psi_.source; }
    const MatrixMap& psi() const { return psi_; }
    FgModule normal_form() const { return underlying().normal_form(); }
    Eigen::Index size() const { return underlying().size(); }
    bool is_zero() const { return underlying().is_zero(); }
    bool is_free() const { return underlying().is_free(); }
    std::string str() const;

    friend bool operator==(const AdamsModule&, const AdamsModule&) = default;

private:
    explicit AdamsModule(MatrixMap psi) : psi_(std::move(psi)) {}
    MatrixMap psi_;
};

AdamsModule operator+(const AdamsModule& a, const AdamsModule& b);

/// psi-equivariant homomorphism.
struct AdamsMap {
    AdamsModule source;
    AdamsModule target;
    MatrixMap map;

    /// Checks well-definedness and equivariance.
    static AdamsMap make(AdamsModule source, AdamsModule target, const Matrix& m);
    static AdamsMap zero(AdamsModule source, AdamsModule target);
    static AdamsMap identity(const AdamsModule& m);
    const Matrix& matrix() const { return map.matrix; }
    bool is_zero() const { return map.is_zero(); }
    friend bool operator==(const AdamsMap&, const AdamsMap&) = default;
};

bool is_equivariant(const AdamsModule& source, const AdamsModule& target, const MatrixMap& f);

AdamsMap compose(const AdamsMap& g, const AdamsMap& f);
inline AdamsMap operator*(const AdamsMap& g, const AdamsMap& f) { return compose(g, f); }
AdamsMap operator+(const AdamsMap& a, const AdamsMap& b);
AdamsMap operator-(const AdamsMap& a, const AdamsMap& b);
AdamsMap operator-(const AdamsMap& a);
AdamsMap scaled(const AdamsMap& f, const PLocal& c);
AdamsMap direct_sum(const AdamsMap& a, const AdamsMap& b);

/// v_p(g^{d(p-1)} - 1) = 1 + v_p(d); nullopt for d = 0 (no constraint).
std::optional<int> cross_annihilator_exponent(Prime p, long d);

/// Hom_Z(M, N) as an explicit module. Generators run over entry positions
/// (i, j), source index j outer, skipping pairs with torsion source and free
/// target (no nonzero maps). The generator for (i, j) is the matrix with the
/// single entry p^{max(0, f - e)} at (i, j).
struct HomBasis {
    CyclicSum source;
    CyclicSum target;
    CyclicSum module;
    std::vector<std::pair<Eigen::Index, Eigen::Index>> positions;
    std::vector<PLocal> entry_scale;

    explicit HomBasis(const CyclicSum& source, const CyclicSum& target);
    Matrix matrix_of(const Matrix& coordinates) const;  // coordinates: module.size() x 1
    Matrix coordinates_of(const Matrix& hom) const;
};

/// Hom in the category: the kernel of f -> psi_N f - f psi_M on Hom_Z(M, N).
class HomGroup {
public:
    HomGroup(const AdamsModule& source, const AdamsModule& target);

    const CyclicSum& module() const { return kernel_.module(); }
    FgModule normal_form() const { return module().normal_form(); }
    const std::vector<AdamsMap>& generators() const { return generators_; }
    /// Coordinates of an equivariant map against generators().
    Matrix coordinates(const AdamsMap& f) const;
    AdamsMap combine(const Matrix& coefficients) const;

private:
    AdamsModule source_, target_;
    HomBasis basis_;
    Subquotient kernel_;
    std::vector<AdamsMap> generators_;
};

AdamsModule twist(const AdamsModule& m, long n);
AdamsMap twist(const AdamsMap& f, long n);

AdamsModule smash(const AdamsModule& a, const AdamsModule& b);
AdamsMap smash(const AdamsMap& f, const AdamsMap& g);

bool is_dualisable(const AdamsModule& m);
/// Throws ValidationError("not dualisable") on torsion.
AdamsModule dual(const AdamsModule& m);
AdamsModule function_object(const AdamsModule& m, const AdamsModule& n);
/// Hom_Z(M, N) with the conjugation action f -> psi_N f psi_M^{-1}.
AdamsModule internal_hom(const AdamsModule& m, const AdamsModule& n);
/// The natural map DM ^ N -> Hom(M, N), phi (x) y -> (x -> phi(x) y).
AdamsMap dual_comparison(const AdamsModule& m, const AdamsModule& n);

struct DualisableCertificate {
    bool dualisable = false;
    std::vector<std::string> checked;  // one line per detection-family member
    std::string str() const;
};

/// Inverse of an isomorphism, if f is one.
std::optional<MatrixMap> inverse(const MatrixMap& f);
std::optional<AdamsMap> inverse(const AdamsMap& f);

/// Searches Hom(M, N) for an isomorphism. Exhaustive mod p when the search
/// space has at most 2^16 points, otherwise a seeded random sample.
std::optional<AdamsMap> find_isomorphism(const AdamsModule& m, const AdamsModule& n);
inline bool is_isomorphic(const AdamsModule& m, const AdamsModule& n) { return find_isomorphism(m, n).has_value(); }

struct AdamsKernelCokernelImage {
    AdamsMap kernel_inclusion;
    AdamsMap cokernel_projection;
    AdamsMap coimage_projection;
    AdamsMap image_inclusion;
};
AdamsKernelCokernelImage kernel_cokernel_image(const AdamsMap& f);

/// ker(d_out) / im(d_in) with its induced operator.
AdamsModule homology_at(const AdamsMap& d_in, const AdamsMap& d_out);

/// Dualisable objects used to probe relative-projective notions.
struct DetectionFamily {
    Prime p;
    long window_lo = 0;
    long window_hi = 0;
    int max_rank = 2;
    std::vector<AdamsModule> members;
    std::vector<std::string> labels;

    /// Lines L_j for j in the window ordered 0, -1, 1, -2, 2, ..., then the
    /// non-split extensions [[g^{a(p-1)}, 1], [0, g^{b(p-1)}]], a != b, then
    /// for 3 <= r <= max_rank the companion modules of the r-element subsets.
    static DetectionFamily standard(Prime p, long lo, long hi, int max_rank = 2);
    static DetectionFamily lines(Prime p, const std::vector<long>& weights);
    std::string str() const;
};

/// Z_(p)[psi]/(f) for f the product of (t - g^{j(p-1)}) over the given
/// distinct weights, psi acting by the companion matrix of f.
AdamsModule companion_module(Prime p, const std::vector<long>& weights);

DualisableCertificate certify_dualisable(const AdamsModule& m, const DetectionFamily& family);

}  // namespace qpc
