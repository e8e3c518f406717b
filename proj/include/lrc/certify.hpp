// Per-k certificate assembly: combine verified (k, p) certificates with the
// small-divisor lcm and the product bound into a proof of the conjecture for
// k, chained on the certificate for k-1 down to the trivial k <= 2 base.
//
// The logic: any counterexample speed product is a positive multiple of
// lcm({2..k+1} u S), so combined_lcm > product_bound(k) contradicts the
// product upper bound and no counterexample exists.
#pragma once

#include "lrc/bounds.hpp"
#include "lrc/rational.hpp"
#include "lrc/search.hpp"

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace lrc {

// The k <= 2 base case needs no computation.
struct Axiom {
    int k = 2;

    static Axiom base(int k) {
        if (k < 1 || k > 2) throw std::invalid_argument("Axiom: only k in {1,2}");
        return Axiom{k};
    }
};

struct ConjectureCertificate {
    int k = 0;
    BigInt base_lcm;                   // lcm(2..k+1)
    std::vector<long long> prime_set;  // verified moduli, ascending
    BigInt combined_lcm;               // lcm({2..k+1} u prime_set)
    Rational bound;                    // product_bound(k)
    Rational margin;                   // combined_lcm / bound, reduced
    std::string depends_on;            // "axiom-k2" or "k<k-1> <digest>"
    std::vector<std::pair<long long, std::string>> prime_cert_refs;  // (p, digest)
    std::string engine_version;
};

struct CertifyError : std::runtime_error {
    enum class Kind { Negative, Inconclusive, Usage };
    Kind kind;
    CertifyError(Kind kind_, const std::string& msg) : std::runtime_error(msg), kind(kind_) {}
};

// Table of verified moduli per k, the published parameter sets.
const std::vector<long long>& reference_prime_set(int k);

// lcm({2..k+1} u moduli); generic, so prime powers are handled correctly.
BigInt combined_lcm(int k, std::span<const long long> moduli);

using ChainAnchor = std::variant<Axiom, ConjectureCertificate>;

// Checks every prime certificate is Verified for this k, computes the exact
// lcm and margin, and rejects unless margin > 1 strictly and the dependency
// resolves to a valid k-1 certificate (or the axiom when k == 3).
ConjectureCertificate assemble(int k, const std::vector<PrimeCertificate>& prime_certs,
                               const ChainAnchor& dependency);

// Recomputes bound, base lcm, combined lcm and margin from the certificate's
// own fields and throws CertifyError when anything disagrees or margin <= 1.
void revalidate(const ConjectureCertificate& cert);

struct ChainOptions {
    bool allow_stored = false;  // accept provenance=stored prime certificates
    std::map<int, std::vector<long long>> prime_set_override;
};

using PrimeCertLoader = std::function<std::optional<PrimeCertificate>(int k, long long p)>;

// Builds certificates for k = 3..target_k in order, each depending on the
// previous. Fails at the first insufficient k, reporting the shortfall.
std::vector<ConjectureCertificate> certify_chain(int target_k, const PrimeCertLoader& loader,
                                                 const ChainOptions& options = {});

}  // namespace lrc
