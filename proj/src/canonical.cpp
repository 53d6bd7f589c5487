#include "rsenv/canonical.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <system_error>

#include <openssl/evp.h>

#include "rsenv/errors.hpp"

namespace rsenv {

std::string shortest_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc()) throw Error("failed to format double");
    return std::string(buf, ptr);
}

namespace {

void dump_canonical(const nlohmann::json& v, std::string& out) {
    using value_t = nlohmann::json::value_t;
    switch (v.type()) {
        case value_t::null:
            out += "null";
            break;
        case value_t::boolean:
            out += v.get<bool>() ? "true" : "false";
            break;
        case value_t::number_integer:
            out += std::to_string(v.get<std::int64_t>());
            break;
        case value_t::number_unsigned:
            out += std::to_string(v.get<std::uint64_t>());
            break;
        case value_t::number_float: {
            const double d = v.get<double>();
            if (!std::isfinite(d)) throw Error("canonical JSON cannot carry non-finite reals");
            out += shortest_double(d);
            break;
        }
        case value_t::string:
            // nlohmann's dump handles escaping; a bare string has no layout.
            out += v.dump();
            break;
        case value_t::array: {
            out += '[';
            bool first = true;
            for (const auto& el : v) {
                if (!first) out += ',';
                first = false;
                dump_canonical(el, out);
            }
            out += ']';
            break;
        }
        case value_t::object: {
            // nlohmann::json objects are std::map-backed: iteration is
            // already in lexicographic key order.
            out += '{';
            bool first = true;
            for (auto it = v.begin(); it != v.end(); ++it) {
                if (!first) out += ',';
                first = false;
                out += nlohmann::json(it.key()).dump();
                out += ':';
                dump_canonical(it.value(), out);
            }
            out += '}';
            break;
        }
        default:
            throw Error("unsupported JSON value type in canonical form");
    }
}

}  // namespace

std::string canonical_dump(const nlohmann::json& value) {
    std::string out;
    dump_canonical(value, out);
    return out;
}

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr))
        throw Error("sha256 digest failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xF];
    }
    return out;
}

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read file: " + path.string());
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return sha256_hex(bytes);
}

}  // namespace rsenv
