#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "orient/align.hpp"
#include "orient/error.hpp"
#include "orient/format.hpp"

namespace orient {
namespace {

// 17 significant digits reproduce any double exactly on reload.
void append_number(std::string& out, double v) { append_double(out, v, 17); }

void append_array(std::string& out, const std::vector<double>& values) {
    out += '[';
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ", ";
        append_number(out, values[i]);
    }
    out += ']';
}

std::vector<double> number_array(const nlohmann::json& j, const char* key, std::size_t expect) {
    if (!j.contains(key) || !j[key].is_array())
        raise(errc::malformed_input, std::string("transform: missing array \"") + key + "\"");
    std::vector<double> out;
    out.reserve(j[key].size());
    for (const auto& v : j[key]) {
        if (!v.is_number()) raise(errc::malformed_input, std::string("transform: non-numeric entry in \"") + key + "\"");
        double x = v.get<double>();
        if (!std::isfinite(x)) raise(errc::malformed_input, std::string("transform: non-finite entry in \"") + key + "\"");
        out.push_back(x);
    }
    if (out.size() != expect)
        raise(errc::malformed_input, std::string("transform: \"") + key + "\" has wrong length");
    return out;
}

}  // namespace

std::string to_json(const SimilarityTransform& t) {
    // Hand-emitted so the key order and number formatting are fixed; the
    // CLI's byte-for-byte determinism depends on it.
    std::string out;
    out += "{\n  \"variant\": \"";
    out += variant_name(t.variant);
    out += "\",\n  \"d\": ";
    out += std::to_string(t.d);
    out += ",\n  \"rotation\": ";
    append_array(out, t.rotation.values);
    out += ",\n  \"scale\": ";
    append_number(out, t.scale);
    out += ",\n  \"source_centroid\": ";
    append_array(out, t.source_centroid);
    out += ",\n  \"target_centroid\": ";
    append_array(out, t.target_centroid);
    out += "\n}\n";
    return out;
}

SimilarityTransform transform_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object()) raise(errc::malformed_input, "transform: invalid JSON");
    if (!j.contains("variant") || !j["variant"].is_string())
        raise(errc::malformed_input, "transform: missing \"variant\"");
    auto variant = parse_variant(j["variant"].get<std::string>());
    if (!variant) raise(errc::malformed_input, "transform: unknown variant \"" + j["variant"].get<std::string>() + "\"");
    if (!j.contains("d") || !j["d"].is_number_unsigned() || j["d"].get<std::size_t>() == 0)
        raise(errc::malformed_input, "transform: \"d\" must be a positive integer");
    if (!j.contains("scale") || !j["scale"].is_number())
        raise(errc::malformed_input, "transform: missing \"scale\"");

    SimilarityTransform t;
    t.variant = *variant;
    t.d = j["d"].get<std::size_t>();
    t.scale = j["scale"].get<double>();
    if (!std::isfinite(t.scale)) raise(errc::malformed_input, "transform: non-finite scale");
    t.rotation = Matrix(t.d, t.d);
    t.rotation.values = number_array(j, "rotation", t.d * t.d);
    t.source_centroid = number_array(j, "source_centroid", t.d);
    t.target_centroid = number_array(j, "target_centroid", t.d);
    return t;
}

void save_transform(const SimilarityTransform& t, const std::string& path) {
    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) raise(errc::io, "cannot open " + tmp.string() + " for writing");
        std::string body = to_json(t);
        out.write(body.data(), static_cast<std::streamsize>(body.size()));
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            raise(errc::io, "write error on " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        raise(errc::io, "cannot replace " + path);
    }
}

SimilarityTransform load_transform(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(errc::io, "cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    if (in.bad()) raise(errc::io, "read error on " + path);
    return transform_from_json(buf.str());
}

}  // namespace orient
