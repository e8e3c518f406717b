// Certificate files: human-readable key/value text with decimal big integers.
// One file per (k, p) verification and one per k-level certificate. A digest
// line binds the content; wall time is informational and excluded from it.
#pragma once

#include "lrc/certify.hpp"
#include "lrc/search.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace lrc {

struct CertError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string serialize(const PrimeCertificate& cert);
PrimeCertificate parse_prime_certificate(const std::string& text);

std::string serialize(const ConjectureCertificate& cert);
ConjectureCertificate parse_conjecture_certificate(const std::string& text);

// Digest over the canonical payload (wall time excluded), FNV-1a 64 in hex.
std::string prime_cert_digest(const PrimeCertificate& cert);
std::string conjecture_cert_digest(const ConjectureCertificate& cert);

std::string prime_cert_filename(int k, long long p);
std::string conjecture_cert_filename(int k);

// Directory of certificate files.
class CertStore {
  public:
    explicit CertStore(std::filesystem::path dir, bool create = false);

    std::optional<PrimeCertificate> load_prime(int k, long long p) const;
    std::optional<ConjectureCertificate> load_conjecture(int k) const;
    std::filesystem::path save(const PrimeCertificate& cert) const;
    std::filesystem::path save(const ConjectureCertificate& cert) const;

    PrimeCertLoader prime_loader() const;
    const std::filesystem::path& dir() const { return dir_; }

  private:
    std::filesystem::path dir_;
};

}  // namespace lrc
