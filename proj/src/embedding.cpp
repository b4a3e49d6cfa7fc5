#include "polar/embedding.hpp"

#include <cmath>
#include <fstream>

#include <httplib.h>
#include <json.hpp>
#include <openssl/evp.h>

#include "polar/rng.hpp"
#include "polar/types.hpp"

namespace polar {

std::string sha256_hex(std::string_view text) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw ServiceError("sha256 digest failed");
    }
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xf]);
    }
    return out;
}

DeterministicEmbedding::DeterministicEmbedding(int dimension) : dimension_(dimension) {
    if (dimension < 2) {
        throw ConfigError("deterministic embedding dimension must be at least 2");
    }
}

std::vector<std::vector<double>> DeterministicEmbedding::embed(
    const std::vector<std::string>& texts) {
    std::vector<std::vector<double>> out;
    out.reserve(texts.size());
    for (const auto& text : texts) {
        SplitMix64 g(fnv1a64(text));
        std::vector<double> v(static_cast<size_t>(dimension_));
        double norm_sq = 0.0;
        for (auto& x : v) {
            x = 2.0 * g.next_unit() - 1.0;
            norm_sq += x * x;
        }
        if (norm_sq == 0.0) {
            v[0] = 1.0;
            norm_sq = 1.0;
        }
        const double inv = 1.0 / std::sqrt(norm_sq);
        for (auto& x : v) x *= inv;
        out.push_back(std::move(v));
    }
    return out;
}

FileBackedEmbedding::FileBackedEmbedding(const std::filesystem::path& sidecar) {
    std::ifstream in(sidecar, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open embedding sidecar: " + sidecar.string());
    }
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError(sidecar.string() + ":" + std::to_string(line_no) +
                                  ": sidecar parse error: " + e.what());
        }
        auto vec = j.at("vector").get<std::vector<double>>();
        if (dimension_ == 0) {
            dimension_ = static_cast<int>(vec.size());
        } else if (static_cast<int>(vec.size()) != dimension_) {
            throw ValidationError(sidecar.string() + ":" + std::to_string(line_no) +
                                  ": vector dimension mismatch");
        }
        by_digest_[j.at("sha256").get<std::string>()] = std::move(vec);
    }
    if (by_digest_.empty()) {
        throw ConfigError("embedding sidecar is empty: " + sidecar.string());
    }
}

std::vector<std::vector<double>> FileBackedEmbedding::embed(
    const std::vector<std::string>& texts) {
    std::vector<std::vector<double>> out;
    out.reserve(texts.size());
    for (const auto& text : texts) {
        auto it = by_digest_.find(sha256_hex(text));
        if (it == by_digest_.end()) {
            throw ServiceError("embedding sidecar has no vector for a text (digest " +
                               sha256_hex(text) + ")");
        }
        out.push_back(it->second);
    }
    return out;
}

HttpEmbedding::HttpEmbedding(std::string base_url, double timeout_s)
    : base_url_(std::move(base_url)), timeout_s_(timeout_s) {}

std::vector<std::vector<double>> HttpEmbedding::embed(const std::vector<std::string>& texts) {
    if (texts.empty()) return {};
    httplib::Client client(base_url_);
    client.set_read_timeout(std::chrono::milliseconds(static_cast<long>(timeout_s_ * 1000)));
    nlohmann::json body{{"texts", texts}};
    auto res = client.Post("/embed", body.dump(), "application/json");
    if (!res) {
        throw ServiceError("embedding request failed: " + httplib::to_string(res.error()));
    }
    if (res->status != 200) {
        throw ServiceError("embedding endpoint returned status " + std::to_string(res->status));
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::exception& e) {
        throw ServiceError(std::string("embedding response parse error: ") + e.what());
    }
    auto vectors = j.at("vectors").get<std::vector<std::vector<double>>>();
    if (vectors.size() != texts.size()) {
        throw ServiceError("embedding endpoint returned wrong vector count");
    }
    for (const auto& v : vectors) {
        if (dimension_ == 0) dimension_ = static_cast<int>(v.size());
        if (static_cast<int>(v.size()) != dimension_) {
            throw ServiceError("embedding endpoint returned inconsistent dimensions");
        }
    }
    return vectors;
}

std::unique_ptr<EmbeddingProvider> make_embedding_provider(const std::string& spec) {
    if (spec == "test") {
        return std::make_unique<DeterministicEmbedding>();
    }
    if (spec.rfind("test:", 0) == 0) {
        return std::make_unique<DeterministicEmbedding>(std::stoi(spec.substr(5)));
    }
    if (spec.rfind("file:", 0) == 0) {
        return std::make_unique<FileBackedEmbedding>(spec.substr(5));
    }
    if (spec.rfind("http://", 0) == 0 || spec.rfind("https://", 0) == 0) {
        return std::make_unique<HttpEmbedding>(spec);
    }
    throw ConfigError("unknown embedding provider spec: '" + spec +
                      "' (expected test | test:<dim> | file:<path> | http(s)://<base_url>)");
}

}  // namespace polar
