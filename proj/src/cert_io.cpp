#include "lrc/cert_io.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>
#include <vector>

namespace lrc {

namespace {

constexpr const char* kPrimeMagic = "lrc-prime-certificate v1";
constexpr const char* kConjectureMagic = "lrc-conjecture-certificate v1";

std::string fnv1a_hex(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// Lines entering the digest: everything except wall-ms and the digest itself.
std::string digest_of_lines(const std::vector<std::string>& lines) {
    std::string acc;
    for (const auto& line : lines) {
        if (line.rfind("wall-ms ", 0) == 0 || line.rfind("digest ", 0) == 0) continue;
        acc += line;
        acc += '\n';
    }
    return fnv1a_hex(acc);
}

std::vector<std::string> prime_payload(const PrimeCertificate& c) {
    std::vector<std::string> lines;
    lines.push_back(kPrimeMagic);
    lines.push_back("k " + std::to_string(c.k));
    lines.push_back("p " + std::to_string(c.p));
    lines.push_back("modulus " + std::to_string(static_cast<long long>(c.k + 1) * c.p));
    lines.push_back("verdict " + to_string(c.verdict));
    if (c.witness) {
        std::string w = "witness";
        for (long long v : c.witness->tuple) w += ' ' + std::to_string(v);
        lines.push_back(w);
    }
    lines.push_back("nodes " + std::to_string(c.nodes_explored));
    lines.push_back("wall-ms " + std::to_string(c.wall_ms));
    lines.push_back("engine " + c.engine_version);
    lines.push_back("pruning " + c.pruning);
    lines.push_back("workers " + std::to_string(c.workers));
    lines.push_back("provenance " + c.provenance);
    return lines;
}

std::vector<std::string> conjecture_payload(const ConjectureCertificate& c) {
    std::vector<std::string> lines;
    lines.push_back(kConjectureMagic);
    lines.push_back("k " + std::to_string(c.k));
    lines.push_back("base-lcm " + c.base_lcm.str());
    std::string ps = "prime-set";
    for (long long p : c.prime_set) ps += ' ' + std::to_string(p);
    lines.push_back(ps);
    lines.push_back("combined-lcm " + c.combined_lcm.str());
    lines.push_back("bound " + c.bound.str());
    lines.push_back("margin " + c.margin.str());
    lines.push_back("depends-on " + c.depends_on);
    for (const auto& [p, digest] : c.prime_cert_refs)
        lines.push_back("prime-cert " + std::to_string(p) + ' ' + digest);
    lines.push_back("engine " + c.engine_version);
    return lines;
}

std::string join_with_digest(const std::vector<std::string>& lines) {
    std::string out;
    for (const auto& line : lines) {
        out += line;
        out += '\n';
    }
    out += "digest " + digest_of_lines(lines) + '\n';
    return out;
}

// Splits the text into lines, validates the magic header and the digest
// trailer, and returns the payload lines.
std::vector<std::string> checked_lines(const std::string& text, const char* magic) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) lines.push_back(line);
    }
    if (lines.empty() || lines.front() != magic)
        throw CertError(std::string("certificate: expected header '") + magic + "'");
    if (lines.back().rfind("digest ", 0) != 0)
        throw CertError("certificate: missing digest line (truncated file?)");
    const std::string stored = lines.back().substr(7);
    lines.pop_back();
    if (stored != digest_of_lines(lines))
        throw CertError("certificate: digest mismatch (corrupted file)");
    return lines;
}

struct FieldReader {
    explicit FieldReader(const std::vector<std::string>& lines) {
        for (size_t i = 1; i < lines.size(); ++i) fields.emplace_back(split(lines[i]));
    }

    static std::pair<std::string, std::string> split(const std::string& line) {
        auto sp = line.find(' ');
        if (sp == std::string::npos) return {line, ""};
        return {line.substr(0, sp), line.substr(sp + 1)};
    }

    std::string take(const std::string& key) {
        auto v = take_optional(key);
        if (!v) throw CertError("certificate: missing field '" + key + "'");
        return *v;
    }

    std::optional<std::string> take_optional(const std::string& key) {
        for (auto it = fields.begin(); it != fields.end(); ++it) {
            if (it->first == key) {
                std::string v = it->second;
                fields.erase(it);
                return v;
            }
        }
        return std::nullopt;
    }

    std::vector<std::pair<std::string, std::string>> take_all(const std::string& key) {
        std::vector<std::pair<std::string, std::string>> out;
        for (auto it = fields.begin(); it != fields.end();) {
            if (it->first == key) {
                out.emplace_back(*it);
                it = fields.erase(it);
            } else {
                ++it;
            }
        }
        return out;
    }

    void expect_empty() const {
        if (!fields.empty())
            throw CertError("certificate: unknown field '" + fields.front().first + "'");
    }

    std::vector<std::pair<std::string, std::string>> fields;
};

long long to_ll(const std::string& s, const char* what) {
    try {
        size_t pos = 0;
        long long v = std::stoll(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw CertError(std::string("certificate: bad ") + what + " value '" + s + "'");
    }
}

std::vector<long long> to_ll_list(const std::string& s, const char* what) {
    std::vector<long long> out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) out.push_back(to_ll(tok, what));
    return out;
}

}  // namespace

std::string serialize(const PrimeCertificate& cert) { return join_with_digest(prime_payload(cert)); }

PrimeCertificate parse_prime_certificate(const std::string& text) {
    auto lines = checked_lines(text, kPrimeMagic);
    FieldReader r(lines);
    PrimeCertificate c;
    c.k = static_cast<int>(to_ll(r.take("k"), "k"));
    c.p = to_ll(r.take("p"), "p");
    const long long modulus = to_ll(r.take("modulus"), "modulus");
    if (modulus != static_cast<long long>(c.k + 1) * c.p)
        throw CertError("certificate: modulus does not match (k+1)*p");
    c.verdict = verdict_from_string(r.take("verdict"));
    if (auto w = r.take_optional("witness")) c.witness = BadCover{to_ll_list(*w, "witness")};
    if (c.verdict == Verdict::Falsified && !c.witness)
        throw CertError("certificate: falsified verdict without witness");
    if (c.verdict != Verdict::Falsified && c.witness)
        throw CertError("certificate: witness on a non-falsified verdict");
    c.nodes_explored = static_cast<unsigned long long>(to_ll(r.take("nodes"), "nodes"));
    c.wall_ms = to_ll(r.take("wall-ms"), "wall-ms");
    c.engine_version = r.take("engine");
    c.pruning = r.take("pruning");
    c.workers = static_cast<int>(to_ll(r.take("workers"), "workers"));
    c.provenance = r.take("provenance");
    if (c.provenance != "computed" && c.provenance != "stored")
        throw CertError("certificate: provenance must be computed or stored");
    r.expect_empty();
    return c;
}

std::string serialize(const ConjectureCertificate& cert) {
    return join_with_digest(conjecture_payload(cert));
}

ConjectureCertificate parse_conjecture_certificate(const std::string& text) {
    auto lines = checked_lines(text, kConjectureMagic);
    FieldReader r(lines);
    ConjectureCertificate c;
    try {
        c.k = static_cast<int>(to_ll(r.take("k"), "k"));
        c.base_lcm = BigInt(r.take("base-lcm"));
        c.prime_set = to_ll_list(r.take("prime-set"), "prime-set");
        c.combined_lcm = BigInt(r.take("combined-lcm"));
        c.bound = Rational::parse(r.take("bound"));
        c.margin = Rational::parse(r.take("margin"));
    } catch (const CertError&) {
        throw;
    } catch (const std::exception& e) {
        throw CertError(std::string("certificate: bad numeric field: ") + e.what());
    }
    c.depends_on = r.take("depends-on");
    for (const auto& [key, value] : r.take_all("prime-cert")) {
        (void)key;
        auto sp = value.find(' ');
        if (sp == std::string::npos) throw CertError("certificate: bad prime-cert line");
        c.prime_cert_refs.emplace_back(to_ll(value.substr(0, sp), "prime-cert"),
                                       value.substr(sp + 1));
    }
    c.engine_version = r.take("engine");
    r.expect_empty();
    return c;
}

std::string prime_cert_digest(const PrimeCertificate& cert) {
    return digest_of_lines(prime_payload(cert));
}

std::string conjecture_cert_digest(const ConjectureCertificate& cert) {
    return digest_of_lines(conjecture_payload(cert));
}

std::string prime_cert_filename(int k, long long p) {
    return "prime-k" + std::to_string(k) + "-p" + std::to_string(p) + ".cert";
}

std::string conjecture_cert_filename(int k) {
    return "conjecture-k" + std::to_string(k) + ".cert";
}

CertStore::CertStore(std::filesystem::path dir, bool create) : dir_(std::move(dir)) {
    if (create) std::filesystem::create_directories(dir_);
}

namespace {

std::optional<std::string> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw CertError("cannot write " + path.string());
    out << content;
    if (!out) throw CertError("short write to " + path.string());
}

}  // namespace

std::optional<PrimeCertificate> CertStore::load_prime(int k, long long p) const {
    auto text = read_file(dir_ / prime_cert_filename(k, p));
    if (!text) return std::nullopt;
    PrimeCertificate cert = parse_prime_certificate(*text);
    if (cert.k != k || cert.p != p)
        throw CertError("certificate " + prime_cert_filename(k, p) + " holds a different (k, p)");
    return cert;
}

std::optional<ConjectureCertificate> CertStore::load_conjecture(int k) const {
    auto text = read_file(dir_ / conjecture_cert_filename(k));
    if (!text) return std::nullopt;
    ConjectureCertificate cert = parse_conjecture_certificate(*text);
    if (cert.k != k)
        throw CertError("certificate " + conjecture_cert_filename(k) + " holds a different k");
    return cert;
}

std::filesystem::path CertStore::save(const PrimeCertificate& cert) const {
    auto path = dir_ / prime_cert_filename(cert.k, cert.p);
    write_file(path, serialize(cert));
    return path;
}

std::filesystem::path CertStore::save(const ConjectureCertificate& cert) const {
    auto path = dir_ / conjecture_cert_filename(cert.k);
    write_file(path, serialize(cert));
    return path;
}

PrimeCertLoader CertStore::prime_loader() const {
    return [store = *this](int k, long long p) { return store.load_prime(k, p); };
}

}  // namespace lrc
