#include "qpc/picard.hpp"

#include <sstream>

namespace qpc {

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::certified: return "certified";
        case Verdict::refuted: return "refuted";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

std::optional<long> shift_of_homology(const std::vector<AdamsModule>& homology, Config cfg) {
    std::optional<long> r;
    for (std::size_t n = 0; n < homology.size(); ++n) {
        if (homology[n].is_zero()) continue;
        if (r) return std::nullopt;
        r = static_cast<long>(n);
    }
    if (!r) return std::nullopt;
    const AdamsModule& h = homology[static_cast<std::size_t>(*r)];
    if (h.size() != 1 || !h.underlying().is_free()) return std::nullopt;
    const auto weights = free_weights(h);
    if (weights.size() != 1) return std::nullopt;
    const long m = weights.front();
    // PI[i] carries L_{-kw} in degree i + kN, so r = i + kN and m = -kw.
    if (cfg.weight == 0) return m == 0 ? r : std::nullopt;
    if (m % cfg.weight != 0) return std::nullopt;
    return *r + (m / cfg.weight) * cfg.period;
}

std::optional<long> identify_shift(const PeriodicComplex& c) { return shift_of_homology(c.homology(), c.config()); }

std::string PicardCertificate::str() const {
    auto shift_str = [](const std::optional<long>& s) { return s ? std::to_string(*s) : std::string("none"); };
    std::ostringstream os;
    os << "verdict: " << to_string(verdict) << "\n";
    os << "configuration: " << cfg.str() << "\n";
    os << family << "\n";
    os << "truncated: " << (truncated ? "yes" : "no") << "\n";
    os << "family complete: " << (incomplete ? "no" : "yes") << "\n";
    os << "shift of C: " << shift_str(shift_c) << "\n";
    os << "shift of D: " << shift_str(shift_d) << "\n";
    os << "shift of C (x)^L D: " << shift_str(shift) << "\n";
    for (std::size_t n = 0; n < homology.size(); ++n)
        os << "H_" << n << " = " << homology[n].str() << "   expected " << expected[n].str() << "\n";
    for (const auto& m : mismatches) os << "mismatch: " << m << "\n";
    return os.str();
}

PicardCertificate certify_inverse_pair(const PeriodicComplex& c, const PeriodicComplex& d, const DetectionFamily& family,
                                       int depth) {
    if (!(c.config() == d.config())) throw ValidationError("picard: configurations differ");
    const DerivedTensor t = derived_tensor(c, d, family, depth);
    const Config cfg = c.config();
    PicardCertificate out{Verdict::inconclusive,
                          cfg,
                          family.str(),
                          t.homology,
                          PeriodicComplex::unit(cfg).homology(),
                          {},
                          shift_of_homology(t.homology, cfg),
                          identify_shift(c),
                          identify_shift(d),
                          t.truncated,
                          t.incomplete};
    for (std::size_t n = 0; n < out.homology.size(); ++n)
        if (!is_isomorphic(out.homology[n], out.expected[n]))
            out.mismatches.push_back("degree " + std::to_string(n) + ": " + out.homology[n].str() + " is not " +
                                     out.expected[n].str());
    if (out.truncated || out.incomplete)
        out.verdict = Verdict::inconclusive;
    else
        out.verdict = out.mismatches.empty() ? Verdict::certified : Verdict::refuted;
    return out;
}

}  // namespace qpc
