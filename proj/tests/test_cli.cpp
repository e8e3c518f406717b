#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lrc/cert_io.hpp"
#include "lrc/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

using namespace lrc;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("lrc-cli-" + std::to_string(::getpid()) + "-" + std::to_string(counter()++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    static int& counter() {
        static int c = 0;
        return c;
    }
};

struct RunResult {
    int code;
    std::string out;
    std::string err;
};

RunResult run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("exit code matrix") {
    TempDir tmp;
    const std::string dir = tmp.path.string();

    // 0: verified
    CHECK(run_cli({"verify", "--k", "3", "--p", "7", "--cert-dir", dir}).code == 0);
    // 1: falsified, witness printed
    auto falsified = run_cli({"verify", "--k", "3", "--p", "5", "--cert-dir", dir});
    CHECK(falsified.code == 1);
    CHECK(falsified.out.find("falsified") != std::string::npos);
    CHECK(falsified.out.find("witness") != std::string::npos);
    CHECK(run_cli({"verify", "--k", "6", "--p", "17", "--cert-dir", dir}).code == 1);
    // 2: budget exhausted
    CHECK(run_cli({"verify", "--k", "3", "--p", "7", "--budget", "10", "--cert-dir", dir}).code ==
          2);
    // 3: usage errors
    CHECK(run_cli({"verify", "--k", "3"}).code == 3);                      // missing --p
    CHECK(run_cli({"verify", "--k", "2", "--p", "7", "--cert-dir", dir}).code == 3);  // k < 3
    CHECK(run_cli({"nonsense"}).code == 3);
    CHECK(run_cli({}).code == 3);
    CHECK(run_cli({"verify", "--k", "3", "--p", "7", "--prunes", "bogus"}).code == 3);

    // oracles
    CHECK(run_cli({"oracle", "lr", "--speeds", "1,2,3"}).code == 0);
    CHECK(run_cli({"oracle", "lr", "--speeds", "1,2", "--threshold", "1/2"}).code == 1);
    CHECK(run_cli({"oracle", "lr", "--speeds", "0,2"}).code == 3);
    CHECK(run_cli({"oracle", "lr", "--speeds", "1,2", "--threshold", "2/3"}).code == 3);
    CHECK(run_cli({"oracle", "naive", "--k", "3", "--p", "7"}).code == 0);
    CHECK(run_cli({"oracle", "naive", "--k", "3", "--p", "5"}).code == 1);
    CHECK(run_cli({"oracle", "naive", "--k", "3", "--p", "7", "--guard", "10"}).code == 3);
    CHECK(run_cli({"oracle"}).code == 3);

    // certify: empty store fails with a named link, then succeeds once fed
    auto missing = run_cli({"certify", "--k", "3", "--cert-dir", dir + "/empty"});
    CHECK(missing.code == 1);
    CHECK(missing.err.find("missing") != std::string::npos);
    for (const char* p : {"7", "11", "13"})
        REQUIRE(run_cli({"verify", "--k", "3", "--p", p, "--cert-dir", dir}).code == 0);
    auto certified = run_cli({"certify", "--k", "3", "--cert-dir", dir});
    CHECK(certified.code == 0);
    CHECK(certified.out.find("1001/144") != std::string::npos);
    CHECK(certified.out.find("12012") != std::string::npos);

    // help is a success path
    CHECK(run_cli({"--help"}).code == 0);
    CHECK(run_cli({"verify", "--help"}).code == 0);

    // table1 with a zero budget reports stored entries only
    auto stored = run_cli({"table1", "--budget-minutes", "0", "--cert-dir", dir});
    CHECK(stored.code == 0);
    CHECK(stored.out.find("live") == std::string::npos);
}

TEST_CASE("verify writes a loadable certificate and honors LRC_CERT_DIR") {
    TempDir tmp;
    ::setenv("LRC_CERT_DIR", tmp.path.c_str(), 1);
    CHECK(run_cli({"verify", "--k", "3", "--p", "11"}).code == 0);
    ::unsetenv("LRC_CERT_DIR");

    CertStore store(tmp.path);
    auto cert = store.load_prime(3, 11);
    REQUIRE(cert);
    CHECK(cert->verdict == Verdict::Verified);
    CHECK(cert->provenance == "computed");
}

TEST_CASE("machine-readable reports round-trip through the loaders") {
    TempDir tmp;
    const std::string dir = tmp.path.string();

    auto verify = run_cli({"verify", "--k", "3", "--p", "7", "--report", "--cert-dir", dir});
    CHECK(verify.code == 0);
    const PrimeCertificate prime = parse_prime_certificate(verify.out);
    CHECK(prime.k == 3);
    CHECK(prime.p == 7);
    CHECK(prime.verdict == Verdict::Verified);

    for (const char* p : {"11", "13"})
        REQUIRE(run_cli({"verify", "--k", "3", "--p", p, "--cert-dir", dir}).code == 0);
    auto certify = run_cli({"certify", "--k", "3", "--report", "--cert-dir", dir});
    CHECK(certify.code == 0);
    const ConjectureCertificate cert = parse_conjecture_certificate(certify.out);
    CHECK(cert.k == 3);
    CHECK(cert.combined_lcm == 12012);
    CHECK_NOTHROW(revalidate(cert));
}

TEST_CASE("certify with a thin override reports the shortfall") {
    TempDir tmp;
    const std::string dir = tmp.path.string();
    REQUIRE(run_cli({"verify", "--k", "3", "--p", "7", "--cert-dir", dir}).code == 0);
    REQUIRE(run_cli({"verify", "--k", "3", "--p", "11", "--cert-dir", dir}).code == 0);
    REQUIRE(run_cli({"verify", "--k", "3", "--p", "13", "--cert-dir", dir}).code == 0);
    REQUIRE(run_cli({"verify", "--k", "4", "--p", "17", "--cert-dir", dir}).code == 0);

    auto thin = run_cli({"certify", "--k", "4", "--primes", "17", "--cert-dir", dir});
    CHECK(thin.code == 1);
    CHECK(thin.err.find("insufficient") != std::string::npos);

    auto bad_list = run_cli({"certify", "--k", "4", "--primes", "17,zap", "--cert-dir", dir});
    CHECK(bad_list.code == 3);
}

TEST_CASE("interrupt and resume through the command line") {
    TempDir tmp;
    const std::string dir = tmp.path.string();
    const std::string ck = (tmp.path / "resume.ck").string();

    auto full = run_cli({"verify", "--k", "4", "--p", "17", "--cert-dir", dir});
    REQUIRE(full.code == 0);

    auto cut = run_cli({"verify", "--k", "4", "--p", "17", "--cert-dir", dir, "--budget", "500",
                        "--checkpoint", ck});
    CHECK(cut.code == 2);
    auto resumed = run_cli({"verify", "--k", "4", "--p", "17", "--cert-dir", dir, "--checkpoint",
                            ck});
    CHECK(resumed.code == 0);

    // the resumed certificate matches the uninterrupted one except wall time
    CertStore store(tmp.path);
    auto cert = store.load_prime(4, 17);
    REQUIRE(cert);
    CHECK(cert->verdict == Verdict::Verified);

    // a checkpoint from another instance is a usage error
    CHECK(run_cli({"verify", "--k", "4", "--p", "19", "--cert-dir", dir, "--checkpoint", ck})
              .code == 3);
}

TEST_CASE("parallel verify prints the nondeterminism notice") {
    TempDir tmp;
    auto r = run_cli({"verify", "--k", "3", "--p", "7", "--workers", "2", "--cert-dir",
                      tmp.path.string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("may vary") != std::string::npos);

    auto det = run_cli({"verify", "--k", "3", "--p", "7", "--workers", "2", "--deterministic",
                        "--cert-dir", tmp.path.string()});
    CHECK(det.code == 0);
    CHECK(det.out.find("may vary") == std::string::npos);
}
