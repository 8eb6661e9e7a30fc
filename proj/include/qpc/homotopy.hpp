// Hom complexes, relative (family-based) homotopical predicates, resolutions,
// derived tensor products, relative Ext and pushout-products.
//
// Every relative notion is taken with respect to an explicit DetectionFamily,
// and every report names the family it used.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qpc/complex.hpp"

namespace qpc {

/// Hom(P, X_n) over a finite degree range with induced differentials.
struct HomComplex {
    Prime p;
    long lo = 0;
    std::vector<CyclicSum> levels;  // degrees lo .. lo + levels.size() - 1
    std::vector<MatrixMap> diffs;   // diffs[i] = d_{lo+i+1}

    long hi() const { return lo + static_cast<long>(levels.size()) - 1; }
    CyclicSum level(long n) const;
    MatrixMap diff(long n) const;
    FgModule homology(long n) const;
    std::string str() const;
};

/// Throws ValidationError when P is not dualisable.
HomComplex hom_complex(const AdamsModule& p, const BoundedComplex& x, long lo, long hi);
HomComplex hom_complex(const AdamsModule& p, const PeriodicComplex& x, long lo, long hi);

/// Degree range used by default: the union of supports widened by one for
/// bounded maps, [-N, 2N) for periodic ones.
std::pair<long, long> default_range(const ChainMap& f);
std::pair<long, long> default_range(const PeriodicMap& f);

struct RelativeReport {
    bool holds = true;
    std::string family;
    long lo = 0, hi = 0;
    std::vector<std::string> members;  // one line per member
    std::vector<std::string> failing;  // labels of members that fail
    std::string str() const;
};

/// Hom(P, f) is a quasi-isomorphism on [lo, hi] for every member P.
RelativeReport is_relative_equivalence(const ChainMap& f, const DetectionFamily& family,
                                       std::optional<std::pair<long, long>> range = std::nullopt);
RelativeReport is_relative_equivalence(const PeriodicMap& f, const DetectionFamily& family,
                                       std::optional<std::pair<long, long>> range = std::nullopt);
/// Hom(P, f_n) is surjective on [lo, hi] for every member P.
RelativeReport is_relative_fibration(const ChainMap& f, const DetectionFamily& family,
                                     std::optional<std::pair<long, long>> range = std::nullopt);
RelativeReport is_relative_fibration(const PeriodicMap& f, const DetectionFamily& family,
                                     std::optional<std::pair<long, long>> range = std::nullopt);

bool is_injective_cofibration(const ChainMap& f);
bool is_injective_cofibration(const PeriodicMap& f);
inline bool is_injective_weak_equivalence(const ChainMap& f) { return is_quasi_iso(f); }
inline bool is_injective_weak_equivalence(const PeriodicMap& f) { return is_quasi_iso(f); }

/// Free weights of a module (sorted, with multiplicity).
std::vector<long> free_weights(const AdamsModule& m);

/// Lines L_j for |j| <= p^e * s, where s >= 1 bounds the free weights and e
/// the torsion exponents of all levels in the default range, together with a
/// cyclic member A = Z_(p)[psi]/(f) whose f kills every level. Hom(A, -) is
/// the underlying module on those levels, so a relative equivalence over this
/// family is a quasi-isomorphism.
DetectionFamily stable_family(const ChainMap& f);
DetectionFamily stable_family(const PeriodicMap& f);

/// The family together with twist(P, k w) for 0 < |k| <= k_max, ordered by |k|.
DetectionFamily twist_closure(const DetectionFamily& family, long weight, long k_max);

// ---------------------------------------------------------------------------
// Resolutions

enum class ResolveMode { quasi, relative };
std::string to_string(ResolveMode mode);

struct Resolution {
    BoundedComplex complex;
    ChainMap augmentation;
    ResolveMode mode = ResolveMode::quasi;
    int depth = 0;
    bool truncated = false;   // stopped at the depth limit with work left
    bool incomplete = false;  // some cover could not be completed by the family
    std::string family;
    std::string str() const;
};

struct PeriodicResolution {
    PeriodicComplex complex;
    PeriodicMap augmentation;
    ResolveMode mode = ResolveMode::quasi;
    int depth = 0;
    bool truncated = false;
    bool incomplete = false;
    std::string family;
    long cut = 0;  // window degree whose differential was zero
    std::string str() const;
};

/// Degree-by-degree cover of the pullback Z_{n-1}(Q) x_{X_{n-1}} X_n by
/// family members (greedy, in family order). Q lives in [lo, lo + depth].
Resolution resolve(const BoundedComplex& x, ResolveMode mode, const DetectionFamily& family, int depth = 8);

/// A window degree c with d_c = 0 (c = 0 meaning the wrap), if any.
std::optional<long> find_cut(const PeriodicComplex& x);
/// The bounded complex on unrolled degrees [c, c + N - 1]; its
/// periodification equals x. Throws when no cut exists.
BoundedComplex cut_open(const PeriodicComplex& x);

/// Resolves a bounded complex M with PM = x and periodifies. Throws
/// ValidationError when x has no zero window differential.
PeriodicResolution resolve(const PeriodicComplex& x, ResolveMode mode, const DetectionFamily& family, int depth = 8);

// ---------------------------------------------------------------------------
// Derived functors

struct DerivedTensor {
    long lo = 0;  // first degree of `homology`
    std::vector<AdamsModule> homology;
    bool truncated = false;
    bool incomplete = false;
    std::string family;
    std::string str() const;
};

/// Homology of QX (x)_PI QY over the window, Q the quasi-mode resolution.
DerivedTensor derived_tensor(const PeriodicComplex& x, const PeriodicComplex& y, const DetectionFamily& family,
                             int depth = 8);
/// Bounded version: homology of QX (x) QY.
DerivedTensor derived_tensor(const BoundedComplex& x, const BoundedComplex& y, const DetectionFamily& family,
                             int depth = 8);

struct ExtGroups {
    ResolveMode mode = ResolveMode::quasi;
    std::vector<FgModule> groups;  // Ext^0 .. Ext^{s_max}
    bool truncated = false;
    bool incomplete = false;
    std::string family;
    std::string str() const;
};

ExtGroups ext_relative(const AdamsModule& m, const AdamsModule& n, const DetectionFamily& family, int s_max,
                       ResolveMode mode = ResolveMode::relative);

// ---------------------------------------------------------------------------
// Cofibrations and pushout-products

struct CofibrationCertificate {
    bool cofibration = false;
    bool inconclusive = false;
    bool split = false;
    bool projective_cokernel = false;
    std::vector<std::string> filtration;  // cell structure of the cokernel
    std::string reason;
    std::string family;
    std::string str() const;
};

/// Degreewise split mono (retraction found in Hom) whose cokernel has levels
/// that are retracts of family sums and a cell filtration. Certification is
/// sufficient, not necessary: without a zero window differential the result
/// is inconclusive.
CofibrationCertificate check_cofibration(const PeriodicMap& f, const DetectionFamily& family);
inline CofibrationCertificate check_cofibrant(const PeriodicComplex& x, const DetectionFamily& family) {
    return check_cofibration(PeriodicMap::zero(PeriodicComplex::zero(x.config()), x), family);
}

struct PushoutProduct {
    PeriodicMap f, g;
    PeriodicComplex corner;  // (V W) +_{U W} (U X)
    PeriodicMap corner_map;  // corner -> V X
    PeriodicMap from_vw;     // V W -> corner
    PeriodicMap from_ux;     // U X -> corner
    bool is_mono() const { return is_injective_cofibration(corner_map); }
    bool is_quasi_iso() const { return qpc::is_quasi_iso(corner_map); }
    std::string str() const;
};

PushoutProduct pushout_product(const PeriodicMap& f, const PeriodicMap& g);

/// S^{n-1} P -> D^n P.
ChainMap sphere_to_disk(const AdamsModule& p, long n);
/// 0 -> D^n P.
ChainMap zero_to_disk(const AdamsModule& p, long n);

// ---------------------------------------------------------------------------
// Witnesses

struct Witness {
    std::string name;
    bool reproduced = false;
    std::vector<std::string> details;
};

struct WitnessReport {
    Config cfg;
    std::vector<Witness> witnesses;
    bool all_reproduced() const;
    std::string str() const;
};

/// (a) a quasi-isomorphism that is not a relative equivalence, (b) the
/// failure of the pushout-product axiom for monomorphisms, (c) P preserving
/// a nontrivial quasi-isomorphism.
WitnessReport witness_suite(Config cfg);

}  // namespace qpc
