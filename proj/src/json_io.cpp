#include "csl/json_io.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace csl {

Json matrix_to_json(const ComplexMatrix& m) {
    const std::size_t n = m.dim();
    Json re = Json::array(), im = Json::array();
    for (std::size_t i = 0; i < n; ++i) {
        Json rrow = Json::array(), irow = Json::array();
        for (std::size_t j = 0; j < n; ++j) {
            rrow.push_back(m(i, j).real());
            irow.push_back(m(i, j).imag());
        }
        re.push_back(std::move(rrow));
        im.push_back(std::move(irow));
    }
    return Json{{"n", n}, {"re", std::move(re)}, {"im", std::move(im)}};
}

ComplexMatrix matrix_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("re") || !j.contains("im"))
        throw ParseError("matrix: expected object with n, re, im", 0);
    const std::size_t n = j.at("n").get<std::size_t>();
    const Json& re = j.at("re");
    const Json& im = j.at("im");
    if (re.size() != n || im.size() != n) throw ParseError("matrix: row count mismatch", 0);
    std::vector<Complex> entries;
    entries.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        if (re[i].size() != n || im[i].size() != n) throw ParseError("matrix: column count mismatch", i);
        for (std::size_t k = 0; k < n; ++k)
            entries.emplace_back(re[i][k].get<double>(), im[i][k].get<double>());
    }
    return ComplexMatrix(n, std::move(entries));
}

Json roots_to_json(const RootList& roots) {
    Json arr = Json::array();
    for (const auto& r : roots) arr.push_back(Json::array({r.real(), r.imag()}));
    return arr;
}

RootList roots_from_json(const Json& j) {
    if (!j.is_array()) throw ParseError("roots: expected array of [re, im] pairs", 0);
    RootList roots;
    roots.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        const Json& pair = j[i];
        if (!pair.is_array() || pair.size() != 2) throw ParseError("roots: expected [re, im]", i);
        roots.emplace_back(pair[0].get<double>(), pair[1].get<double>());
    }
    return roots;
}

namespace {

void dump_double(std::string& out, double v) {
    if (!std::isfinite(v)) throw Error("canonical_dump: non-finite number");
    if (v == 0.0) v = 0.0;  // "-0" does not survive a parse round trip
    std::array<char, 48> buf;
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                   std::chars_format::general, 17);
    out.append(buf.data(), res.ptr);
}

void dump(std::string& out, const Json& j) {
    switch (j.type()) {
        case Json::value_t::null: out += "null"; break;
        case Json::value_t::boolean: out += j.get<bool>() ? "true" : "false"; break;
        case Json::value_t::number_integer: out += std::to_string(j.get<std::int64_t>()); break;
        case Json::value_t::number_unsigned: out += std::to_string(j.get<std::uint64_t>()); break;
        case Json::value_t::number_float: dump_double(out, j.get<double>()); break;
        case Json::value_t::string: out += Json(j.get<std::string>()).dump(); break;
        case Json::value_t::array: {
            out += '[';
            bool first = true;
            for (const Json& item : j) {
                if (!first) out += ',';
                first = false;
                dump(out, item);
            }
            out += ']';
            break;
        }
        case Json::value_t::object: {
            // nlohmann objects iterate in sorted key order already.
            out += '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ',';
                first = false;
                out += Json(it.key()).dump();
                out += ':';
                dump(out, it.value());
            }
            out += '}';
            break;
        }
        default: throw Error("canonical_dump: unsupported JSON type");
    }
}

}  // namespace

std::string canonical_dump(const Json& j) {
    std::string out;
    dump(out, j);
    return out;
}

namespace {

// Reflected Castagnoli polynomial.
std::array<std::uint32_t, 256> make_crc32c_table() {
    std::array<std::uint32_t, 256> table{};
    for (std::uint32_t i = 0; i < 256; ++i) {
        std::uint32_t c = i;
        for (int k = 0; k < 8; ++k) c = (c & 1) ? (0x82F63B78u ^ (c >> 1)) : (c >> 1);
        table[i] = c;
    }
    return table;
}

}  // namespace

std::uint32_t crc32c(const std::string& bytes) {
    static const auto table = make_crc32c_table();
    std::uint32_t c = 0xFFFFFFFFu;
    for (unsigned char ch : bytes) c = table[(c ^ ch) & 0xFFu] ^ (c >> 8);
    return c ^ 0xFFFFFFFFu;
}

std::string crc32c_hex(const std::string& bytes) {
    static const char* digits = "0123456789abcdef";
    const std::uint32_t c = crc32c(bytes);
    std::string hex(8, '0');
    for (int i = 0; i < 8; ++i) hex[7 - i] = digits[(c >> (4 * i)) & 0xF];
    return hex;
}

std::string checked_line(const Json& j) {
    std::string canon = canonical_dump(j);
    const std::string sum = crc32c_hex(canon);
    if (canon.size() < 2 || canon.back() != '}')
        throw Error("checked_line: records must be JSON objects");
    canon.pop_back();
    canon += canon.size() > 1 ? ",\"crc32c\":\"" : "\"crc32c\":\"";
    canon += sum;
    canon += "\"}";
    return canon;
}

Json parse_checked_line(const std::string& line, std::size_t record_index) {
    Json j;
    try {
        j = Json::parse(line);
    } catch (const std::exception& e) {
        throw ChecksumMismatch("log line " + std::to_string(record_index) + " is not valid JSON",
                               record_index);
    }
    if (!j.is_object() || !j.contains("crc32c"))
        throw ChecksumMismatch("log line " + std::to_string(record_index) + " has no checksum",
                               record_index);
    const std::string stated = j.at("crc32c").get<std::string>();
    j.erase("crc32c");
    if (crc32c_hex(canonical_dump(j)) != stated)
        throw ChecksumMismatch("checksum mismatch at record " + std::to_string(record_index),
                               record_index);
    return j;
}

}  // namespace csl
