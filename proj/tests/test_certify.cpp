#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lrc/cert_io.hpp"
#include "lrc/certify.hpp"
#include "lrc/search.hpp"

#include "support/oracles.hpp"

#include <filesystem>
#include <fstream>
#include <unistd.h>

using namespace lrc;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("lrc-certify-" + std::to_string(::getpid()) + "-" + std::to_string(counter()++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    static int& counter() {
        static int c = 0;
        return c;
    }
};

PrimeCertificate verified_stub(int k, long long p) {
    PrimeCertificate cert;
    cert.k = k;
    cert.p = p;
    cert.verdict = Verdict::Verified;
    cert.nodes_explored = 1;
    cert.engine_version = "stub";
    cert.pruning = "bound,sibling,forced,gcd-early";
    return cert;
}

std::vector<PrimeCertificate> verified_stubs(int k, const std::vector<long long>& moduli) {
    std::vector<PrimeCertificate> out;
    for (long long p : moduli) out.push_back(verified_stub(k, p));
    return out;
}

template <typename E, typename F>
void check_throws_containing(F&& fn, const std::string& needle) {
    try {
        fn();
        FAIL_CHECK("expected an exception mentioning '" << needle << "'");
    } catch (const E& e) {
        CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
}

}  // namespace

TEST_CASE("k=3 assembly matches the published row") {
    std::vector<PrimeCertificate> certs;
    for (long long p : {7, 11, 13}) {
        SearchConfig cfg;
        certs.push_back(verify_prime(3, p, cfg));
        REQUIRE(certs.back().verdict == Verdict::Verified);
    }
    const ConjectureCertificate cert = assemble(3, certs, Axiom::base(2));
    CHECK(cert.base_lcm == 12);
    CHECK(cert.combined_lcm == 12012);
    CHECK(cert.bound == Rational(1728));
    CHECK(cert.margin == Rational(12012, 1728));
    CHECK(cert.margin == Rational(1001, 144));
    CHECK(cert.depends_on == "axiom-k2");
    CHECK(cert.prime_cert_refs.size() == 3);
    CHECK_NOTHROW(revalidate(cert));
}

TEST_CASE("k=4 assembly from verified certificates") {
    const auto certs = verified_stubs(4, reference_prime_set(4));
    const ConjectureCertificate k3 = assemble(3, verified_stubs(3, {7, 11, 13}), Axiom::base(2));
    const ConjectureCertificate cert = assemble(4, certs, k3);

    // independent route: pairwise-coprime primes > k+1, so the lcm is a plain product
    BigInt product = 60;
    for (long long p : reference_prime_set(4)) product *= p;
    CHECK(cert.combined_lcm == product);
    CHECK(cert.combined_lcm == BigInt("14826649620"));
    CHECK(cert.combined_lcm > big_pow(BigInt(10), 10));
    CHECK(cert.margin > Rational(1));
    CHECK(cert.depends_on.rfind("k3 ", 0) == 0);
}

TEST_CASE("assembly rejections") {
    // falsified certificate in the set
    auto certs = verified_stubs(3, {7, 11, 13});
    certs[1].verdict = Verdict::Falsified;
    certs[1].witness = BadCover{{1, 3, 4}};
    check_throws_containing<CertifyError>([&] { assemble(3, certs, Axiom::base(2)); },
                                          "falsified");

    // inconclusive certificate in the set
    certs = verified_stubs(3, {7, 11, 13});
    certs[0].verdict = Verdict::Inconclusive;
    CHECK_THROWS_AS(assemble(3, certs, Axiom::base(2)), CertifyError);

    // insufficient margin: lcm(2..5) * 17 = 1020 << 3906250000
    check_throws_containing<CertifyError>(
        [] { assemble(4, verified_stubs(4, {17}), Axiom::base(2)); }, "insufficient");

    // broken dependency: k=4 cannot anchor on the axiom
    CHECK_THROWS_AS(assemble(4, verified_stubs(4, reference_prime_set(4)), Axiom::base(2)),
                    CertifyError);

    // wrong-k certificate mixed in
    certs = verified_stubs(3, {7, 11});
    certs.push_back(verified_stub(4, 13));
    CHECK_THROWS_AS(assemble(3, certs, Axiom::base(2)), CertifyError);

    // duplicate modulus
    CHECK_THROWS_AS(assemble(3, verified_stubs(3, {7, 7, 11, 13}), Axiom::base(2)), CertifyError);

    CHECK_THROWS_AS(Axiom::base(3), std::invalid_argument);
}

TEST_CASE("margin shortfall is reported exactly") {
    try {
        assemble(4, verified_stubs(4, {17}), Axiom::base(2));
        FAIL("expected CertifyError");
    } catch (const CertifyError& e) {
        CHECK(e.kind == CertifyError::Kind::Negative);
        CHECK(std::string(e.what()).find(Rational(1020, BigInt("3906250000")).str()) !=
              std::string::npos);
    }
}

TEST_CASE("combined lcm against the factored oracle, prime powers included") {
    // the k=5 set may include the prime powers 25 and 32
    std::vector<long long> with_powers = {23, 25, 29, 31, 32};
    BigInt got = combined_lcm(5, with_powers);
    std::vector<long long> everything = {2, 3, 4, 5, 6};
    everything.insert(everything.end(), with_powers.begin(), with_powers.end());
    CHECK(got == testing::factored_lcm(everything));

    // pairwise-coprime primes all above k+1: lcm is base times the product
    for (int k : {3, 4, 5, 6, 7}) {
        const auto& moduli = reference_prime_set(k);
        std::vector<long long> primes_only;
        BigInt product = 1;
        for (long long p : moduli) {
            if (p == 25 || p == 32) continue;
            primes_only.push_back(p);
            product *= p;
        }
        CHECK(combined_lcm(k, primes_only) == lcm_small_divisors(k) * product);
    }
}

TEST_CASE("prime certificate round trip") {
    SearchConfig cfg;
    const PrimeCertificate falsified = verify_prime(3, 5, cfg);
    const PrimeCertificate parsed = parse_prime_certificate(serialize(falsified));
    CHECK(serialize(parsed) == serialize(falsified));
    CHECK(parsed.k == 3);
    CHECK(parsed.p == 5);
    CHECK(parsed.verdict == Verdict::Falsified);
    REQUIRE(parsed.witness);
    CHECK(parsed.witness->tuple == falsified.witness->tuple);
    CHECK(parsed.nodes_explored == falsified.nodes_explored);
    CHECK(parsed.wall_ms == falsified.wall_ms);
}

TEST_CASE("conjecture certificate round trip") {
    const ConjectureCertificate cert = assemble(3, verified_stubs(3, {7, 11, 13}), Axiom::base(2));
    const ConjectureCertificate parsed = parse_conjecture_certificate(serialize(cert));
    CHECK(serialize(parsed) == serialize(cert));
    CHECK(parsed.combined_lcm == cert.combined_lcm);
    CHECK(parsed.margin == cert.margin);
    CHECK(parsed.prime_cert_refs == cert.prime_cert_refs);
    CHECK_NOTHROW(revalidate(parsed));
}

TEST_CASE("truncated and corrupted certificate files are rejected whole") {
    const std::string good = serialize(verified_stub(3, 7));

    // drop the digest line entirely
    const std::string truncated = good.substr(0, good.find("digest "));
    check_throws_containing<CertError>([&] { parse_prime_certificate(truncated); }, "truncated");

    // cut bytes mid-document
    CHECK_THROWS_AS(parse_prime_certificate(good.substr(0, good.size() / 2)), CertError);

    // flip a digit inside a digested field
    std::string corrupted = good;
    corrupted.replace(corrupted.find("nodes 1"), 7, "nodes 2");
    check_throws_containing<CertError>([&] { parse_prime_certificate(corrupted); }, "digest");

    CHECK_THROWS_AS(parse_prime_certificate(""), CertError);
    CHECK_THROWS_AS(parse_conjecture_certificate(good), CertError);  // wrong document kind
}

TEST_CASE("store saves and loads certificates bit-exactly") {
    TempDir tmp;
    CertStore store(tmp.path, true);
    SearchConfig cfg;

    const PrimeCertificate prime = verify_prime(3, 7, cfg);
    store.save(prime);
    auto loaded = store.load_prime(3, 7);
    REQUIRE(loaded);
    CHECK(serialize(*loaded) == serialize(prime));
    CHECK_FALSE(store.load_prime(3, 999).has_value());

    const ConjectureCertificate cert = assemble(3, verified_stubs(3, {7, 11, 13}), Axiom::base(2));
    store.save(cert);
    auto loaded_cert = store.load_conjecture(3);
    REQUIRE(loaded_cert);
    CHECK(serialize(*loaded_cert) == serialize(cert));
}

TEST_CASE("chain over an in-memory loader") {
    std::map<std::pair<int, long long>, PrimeCertificate> bank;
    for (int k = 3; k <= 7; ++k)
        for (long long p : reference_prime_set(k)) bank[{k, p}] = verified_stub(k, p);

    PrimeCertLoader loader = [&bank](int k, long long p) -> std::optional<PrimeCertificate> {
        auto it = bank.find({k, p});
        if (it == bank.end()) return std::nullopt;
        return it->second;
    };

    const auto chain = certify_chain(7, loader);
    REQUIRE(chain.size() == 5);
    for (size_t i = 0; i < chain.size(); ++i) {
        CHECK(chain[i].k == static_cast<int>(i) + 3);
        CHECK(chain[i].margin > Rational(1));
        CHECK_NOTHROW(revalidate(chain[i]));
    }
    CHECK(chain[0].depends_on == "axiom-k2");
    for (size_t i = 1; i < chain.size(); ++i) {
        const std::string expected =
            "k" + std::to_string(chain[i - 1].k) + " " + conjecture_cert_digest(chain[i - 1]);
        CHECK(chain[i].depends_on == expected);
    }

    // a single k=3 chain anchors on the axiom
    CHECK(certify_chain(3, loader).size() == 1);

    // broken link: nothing is emitted past the first failure
    bank.erase({4, 19});
    check_throws_containing<CertifyError>([&] { certify_chain(7, loader); }, "k=4");

    // stored certificates need the explicit opt-in
    bank[{4, 19}] = verified_stub(4, 19);
    bank[{4, 19}].provenance = "stored";
    check_throws_containing<CertifyError>([&] { certify_chain(7, loader); }, "stored");
    ChainOptions allow;
    allow.allow_stored = true;
    CHECK(certify_chain(7, loader, allow).size() == 5);

    // prime set overrides flow through to the failure report
    ChainOptions thin;
    thin.prime_set_override[4] = {17};
    check_throws_containing<CertifyError>([&] { certify_chain(4, loader, thin); },
                                          "insufficient");
}

TEST_CASE("revalidation catches doctored certificates") {
    ConjectureCertificate cert = assemble(3, verified_stubs(3, {7, 11, 13}), Axiom::base(2));
    CHECK_NOTHROW(revalidate(cert));

    ConjectureCertificate wrong_lcm = cert;
    wrong_lcm.combined_lcm = 12013;
    CHECK_THROWS_AS(revalidate(wrong_lcm), CertifyError);

    ConjectureCertificate wrong_margin = cert;
    wrong_margin.margin = Rational(2);
    CHECK_THROWS_AS(revalidate(wrong_margin), CertifyError);

    ConjectureCertificate thin = cert;
    thin.prime_set = {7};
    thin.combined_lcm = combined_lcm(3, thin.prime_set);  // 84 < 1728
    thin.margin = Rational(thin.combined_lcm) / thin.bound;
    CHECK_THROWS_AS(revalidate(thin), CertifyError);
}
