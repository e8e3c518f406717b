#include "lrc/certify.hpp"

#include "lrc/cert_io.hpp"
#include "lrc/version.hpp"

#include <algorithm>

namespace lrc {

const std::vector<long long>& reference_prime_set(int k) {
    static const std::map<int, std::vector<long long>> sets = {
        {3, {7, 11, 13}},
        {4, {17, 19, 23, 29, 31, 37}},
        {5, {23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71}},
        {6, {13, 19, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103}},
        {7, {31,  37,  43,  47,  53,  59,  61,  67,  71,  73,  79,  83,  89, 97,
             101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163}},
    };
    auto it = sets.find(k);
    if (it == sets.end())
        throw CertifyError(CertifyError::Kind::Usage,
                           "no reference prime set for k=" + std::to_string(k) +
                               " (supported: 3..7); supply one explicitly");
    return it->second;
}

BigInt combined_lcm(int k, std::span<const long long> moduli) {
    BigInt acc = lcm_small_divisors(k);
    for (long long p : moduli) acc = big_lcm(acc, BigInt(p));
    return acc;
}

ConjectureCertificate assemble(int k, const std::vector<PrimeCertificate>& prime_certs,
                               const ChainAnchor& dependency) {
    if (k < 3) throw CertifyError(CertifyError::Kind::Usage, "assemble: k must be >= 3");

    ConjectureCertificate cert;
    cert.k = k;
    cert.engine_version = kEngineVersion;

    for (const auto& pc : prime_certs) {
        if (pc.k != k)
            throw CertifyError(CertifyError::Kind::Usage,
                               "assemble: certificate for k=" + std::to_string(pc.k) +
                                   " mixed into the k=" + std::to_string(k) + " set");
        if (pc.verdict == Verdict::Inconclusive)
            throw CertifyError(CertifyError::Kind::Inconclusive,
                               "assemble: k=" + std::to_string(k) + " p=" + std::to_string(pc.p) +
                                   " is inconclusive");
        if (pc.verdict != Verdict::Verified)
            throw CertifyError(CertifyError::Kind::Negative,
                               "assemble: k=" + std::to_string(k) + " p=" + std::to_string(pc.p) +
                                   " is falsified");
        cert.prime_set.push_back(pc.p);
        cert.prime_cert_refs.emplace_back(pc.p, prime_cert_digest(pc));
    }
    std::sort(cert.prime_set.begin(), cert.prime_set.end());
    if (std::adjacent_find(cert.prime_set.begin(), cert.prime_set.end()) != cert.prime_set.end())
        throw CertifyError(CertifyError::Kind::Usage, "assemble: duplicate modulus in prime set");
    std::sort(cert.prime_cert_refs.begin(), cert.prime_cert_refs.end());

    cert.base_lcm = lcm_small_divisors(k);
    cert.combined_lcm = combined_lcm(k, cert.prime_set);
    cert.bound = product_bound(k);
    cert.margin = Rational(cert.combined_lcm) / cert.bound;
    if (!(cert.margin > Rational(1)))
        throw CertifyError(CertifyError::Kind::Negative,
                           "assemble: k=" + std::to_string(k) + " prime set is insufficient: lcm " +
                               cert.combined_lcm.str() + " <= bound " + cert.bound.str() +
                               " (margin " + cert.margin.str() + ")");

    if (const Axiom* ax = std::get_if<Axiom>(&dependency)) {
        if (ax->k != k - 1)
            throw CertifyError(CertifyError::Kind::Usage,
                               "assemble: k=" + std::to_string(k) +
                                   " cannot anchor on the k<=2 axiom; k=" + std::to_string(k - 1) +
                                   " must be certified first");
        cert.depends_on = "axiom-k" + std::to_string(ax->k);
    } else {
        const auto& prev = std::get<ConjectureCertificate>(dependency);
        if (prev.k != k - 1)
            throw CertifyError(CertifyError::Kind::Usage,
                               "assemble: dependency is for k=" + std::to_string(prev.k) +
                                   ", expected k=" + std::to_string(k - 1));
        revalidate(prev);
        cert.depends_on = "k" + std::to_string(prev.k) + " " + conjecture_cert_digest(prev);
    }
    return cert;
}

void revalidate(const ConjectureCertificate& cert) {
    auto fail = [&cert](const std::string& what) {
        throw CertifyError(CertifyError::Kind::Negative,
                           "revalidate: k=" + std::to_string(cert.k) + " certificate: " + what);
    };
    if (cert.k < 3) fail("k out of range");
    if (cert.base_lcm != lcm_small_divisors(cert.k)) fail("base lcm mismatch");
    if (cert.combined_lcm != combined_lcm(cert.k, cert.prime_set)) fail("combined lcm mismatch");
    if (cert.bound != product_bound(cert.k)) fail("bound mismatch");
    if (cert.margin != Rational(cert.combined_lcm) / cert.bound) fail("margin mismatch");
    if (!(cert.margin > Rational(1))) fail("margin not greater than 1");
}

std::vector<ConjectureCertificate> certify_chain(int target_k, const PrimeCertLoader& loader,
                                                 const ChainOptions& options) {
    if (target_k < 3)
        throw CertifyError(CertifyError::Kind::Usage, "certify_chain: target k must be >= 3");

    std::vector<ConjectureCertificate> chain;
    for (int k = 3; k <= target_k; ++k) {
        const auto& override = options.prime_set_override;
        const std::vector<long long>& moduli =
            override.count(k) ? override.at(k) : reference_prime_set(k);

        std::vector<PrimeCertificate> certs;
        for (long long p : moduli) {
            auto cert = loader(k, p);
            if (!cert)
                throw CertifyError(CertifyError::Kind::Negative,
                                   "chain: k=" + std::to_string(k) +
                                       ": missing prime certificate for p=" + std::to_string(p));
            if (cert->provenance == "stored" && !options.allow_stored)
                throw CertifyError(CertifyError::Kind::Negative,
                                   "chain: k=" + std::to_string(k) + " p=" + std::to_string(p) +
                                       ": certificate is a stored fixture; pass --assume-stored "
                                       "to trust it or --recompute to regenerate");
            certs.push_back(std::move(*cert));
        }
        ChainAnchor anchor =
            (k == 3) ? ChainAnchor{Axiom::base(2)} : ChainAnchor{chain.back()};
        chain.push_back(assemble(k, certs, anchor));
    }
    return chain;
}

}  // namespace lrc
