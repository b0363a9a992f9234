#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "matmcd/llm/embedding.hpp"

namespace matmcd::da {

struct RetrievedChunk {
    std::size_t id = 0;
    std::string source;
    std::string body;
    std::vector<double> embedding;  // unit length unless the text had no features
};

struct SourceDocument {
    std::string source;
    std::string text;
};

struct RetrievalHit {
    RetrievedChunk chunk;
    double score = 0.0;
};

inline constexpr std::size_t kDefaultChunkChars = 2000;
inline constexpr std::size_t kDefaultOverlapChars = 200;

/// Sliding windows of at most `chunk_chars` characters. A window end is
/// pulled back to just after the nearest whitespace when one lies close
/// enough; the next window starts exactly `overlap_chars` before it, so the
/// first chunk followed by every later chunk minus its first `overlap_chars`
/// characters rebuilds `text`.
std::vector<std::string> chunk_text(std::string_view text, std::size_t chunk_chars, std::size_t overlap_chars);

/// Inverse of chunk_text.
std::string reconstruct_text(const std::vector<std::string>& chunks, std::size_t overlap_chars);

/// Scales to unit L2 norm; an all-zero vector stays zero.
void normalize(std::vector<double>& v);

std::vector<RetrievedChunk> build_rag_index(const std::vector<SourceDocument>& docs, std::size_t chunk_chars,
                                            std::size_t overlap_chars, const llm::Embedder& embedder);

/// Exact top-k by inner product; ties go to the lower chunk id.
std::vector<RetrievalHit> mips_retrieve(const std::vector<RetrievedChunk>& index, std::string_view query,
                                        std::size_t k, const llm::Embedder& embedder);

/// Deterministic signed feature hashing of lowercase word tokens (FNV-1a).
class HashingEmbedder {
public:
    explicit HashingEmbedder(std::size_t dimension = 1024);

    std::vector<double> operator()(std::string_view text) const;
    std::size_t dimension() const noexcept { return dimension_; }

private:
    std::size_t dimension_;
};

}  // namespace matmcd::da
