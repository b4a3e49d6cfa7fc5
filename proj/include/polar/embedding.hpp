#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace polar {

/// Sentence-embedding abstraction. The real multilingual model is an
/// external artifact; filtering only ever sees vectors through this
/// interface.
class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;

    virtual const std::string& name() const = 0;
    virtual int dimension() const = 0;

    /// One vector per input text, each of dimension(). Same text must map
    /// to the same vector within a run. Throws ServiceError on failure.
    virtual std::vector<std::vector<double>> embed(const std::vector<std::string>& texts) = 0;
};

std::string sha256_hex(std::string_view text);

/// Pseudo-embeddings derived from a hash of the text: unit vectors,
/// reproducible everywhere, no model download. Distinct texts land nearly
/// orthogonal; identical texts collide exactly, which is what the dedup
/// tests need.
class DeterministicEmbedding : public EmbeddingProvider {
public:
    explicit DeterministicEmbedding(int dimension = 16);

    const std::string& name() const override { return name_; }
    int dimension() const override { return dimension_; }
    std::vector<std::vector<double>> embed(const std::vector<std::string>& texts) override;

private:
    std::string name_ = "test_deterministic";
    int dimension_;
};

/// Sidecar lookup: JSONL lines {"sha256": <hex of UTF-8 text>, "vector": [...]}.
/// Missing texts are an error; the sidecar is expected to be precomputed.
class FileBackedEmbedding : public EmbeddingProvider {
public:
    explicit FileBackedEmbedding(const std::filesystem::path& sidecar);

    const std::string& name() const override { return name_; }
    int dimension() const override { return dimension_; }
    std::vector<std::vector<double>> embed(const std::vector<std::string>& texts) override;

private:
    std::string name_ = "file_backed";
    int dimension_ = 0;
    std::unordered_map<std::string, std::vector<double>> by_digest_;
};

/// POST {base_url}/embed {"texts": [...]} -> {"vectors": [[...]]}
class HttpEmbedding : public EmbeddingProvider {
public:
    explicit HttpEmbedding(std::string base_url, double timeout_s = 30.0);

    const std::string& name() const override { return name_; }
    int dimension() const override { return dimension_; }
    std::vector<std::vector<double>> embed(const std::vector<std::string>& texts) override;

private:
    std::string name_ = "http";
    std::string base_url_;
    double timeout_s_;
    int dimension_ = 0;  // learned from the first response
};

/// "test" | "test:<dim>" | "file:<path>" | "http(s)://<base_url>"
std::unique_ptr<EmbeddingProvider> make_embedding_provider(const std::string& spec);

}  // namespace polar
