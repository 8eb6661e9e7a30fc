// Certification of inverse pairs in the Picard group and recognition of
// shifts of the unit PI.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qpc/homotopy.hpp"

namespace qpc {

enum class Verdict { certified, refuted, inconclusive };
std::string to_string(Verdict v);

/// i with H(X) isomorphic to H(PI[i]) in every window degree, read off from
/// window homology. With twist weight 0 the shift is only known modulo N and
/// the window representative is returned.
std::optional<long> shift_of_homology(const std::vector<AdamsModule>& homology, Config cfg);
std::optional<long> identify_shift(const PeriodicComplex& c);

struct PicardCertificate {
    Verdict verdict = Verdict::inconclusive;
    Config cfg;
    std::string family;
    std::vector<AdamsModule> homology;  // H_n(C (x)^L D), window degrees
    std::vector<AdamsModule> expected;  // H_n(PI)
    std::vector<std::string> mismatches;
    std::optional<long> shift;          // of C (x)^L D
    std::optional<long> shift_c, shift_d;
    bool truncated = false;
    bool incomplete = false;
    std::string str() const;
};

/// Compares the homology of C (x)^L D with that of PI degree by degree.
/// Certified needs an isomorphism everywhere and no truncation; a mismatch
/// refutes only when the resolutions were complete.
PicardCertificate certify_inverse_pair(const PeriodicComplex& c, const PeriodicComplex& d, const DetectionFamily& family,
                                       int depth = 8);

}  // namespace qpc
