#include "matmcd/da/rag.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>

#include "matmcd/util/error.hpp"
#include "matmcd/util/text.hpp"

namespace matmcd::da {

std::vector<std::string> chunk_text(std::string_view text, std::size_t chunk_chars, std::size_t overlap_chars) {
    if (chunk_chars == 0 || overlap_chars >= chunk_chars) {
        throw Error("chunk size must exceed the overlap");
    }
    std::vector<std::string> chunks;
    const std::size_t stride = chunk_chars - overlap_chars;
    // Snapping never eats more than a quarter of the stride, so every window advances.
    const std::size_t snap_window = std::min<std::size_t>(100, stride / 4);
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = std::min(text.size(), start + chunk_chars);
        if (end < text.size()) {
            for (std::size_t k = 0; k < snap_window && end - k > start + overlap_chars + 1; ++k) {
                if (std::isspace(static_cast<unsigned char>(text[end - k - 1]))) {
                    end -= k;
                    break;
                }
            }
        }
        chunks.emplace_back(text.substr(start, end - start));
        if (end == text.size()) break;
        start = end - overlap_chars;
    }
    return chunks;
}

std::string reconstruct_text(const std::vector<std::string>& chunks, std::size_t overlap_chars) {
    std::string out;
    for (std::size_t i = 0; i < chunks.size(); ++i) {
        out += i == 0 ? chunks[i] : chunks[i].substr(std::min(overlap_chars, chunks[i].size()));
    }
    return out;
}

void normalize(std::vector<double>& v) {
    double sq = 0.0;
    for (double x : v) sq += x * x;
    if (sq <= 0.0) return;
    const double inv = 1.0 / std::sqrt(sq);
    for (double& x : v) x *= inv;
}

std::vector<RetrievedChunk> build_rag_index(const std::vector<SourceDocument>& docs, std::size_t chunk_chars,
                                            std::size_t overlap_chars, const llm::Embedder& embedder) {
    std::vector<RetrievedChunk> index;
    std::size_t dimension = 0;
    for (const auto& doc : docs) {
        if (text::trim(doc.text).empty()) continue;
        for (auto& body : chunk_text(doc.text, chunk_chars, overlap_chars)) {
            RetrievedChunk chunk;
            chunk.id = index.size();
            chunk.source = doc.source;
            chunk.embedding = embedder(body);
            if (chunk.embedding.empty()) throw GatewayError("embedder returned an empty vector");
            if (dimension == 0) dimension = chunk.embedding.size();
            if (chunk.embedding.size() != dimension) throw GatewayError("embedder changed dimension mid-index");
            normalize(chunk.embedding);
            chunk.body = std::move(body);
            index.push_back(std::move(chunk));
        }
    }
    return index;
}

std::vector<RetrievalHit> mips_retrieve(const std::vector<RetrievedChunk>& index, std::string_view query,
                                        std::size_t k, const llm::Embedder& embedder) {
    if (k == 0) throw Error("retrieval needs k >= 1");
    if (index.empty()) return {};
    std::vector<double> q = embedder(query);
    normalize(q);
    std::vector<std::pair<double, std::size_t>> scored;
    scored.reserve(index.size());
    for (std::size_t pos = 0; pos < index.size(); ++pos) {
        const auto& e = index[pos].embedding;
        if (e.size() != q.size()) throw GatewayError("query embedding dimension differs from the index");
        double dot = 0.0;
        for (std::size_t d = 0; d < q.size(); ++d) dot += q[d] * e[d];
        scored.emplace_back(dot, pos);
    }
    const std::size_t take = std::min(k, scored.size());
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(take), scored.end(),
                      [&](const auto& a, const auto& b) {
                          if (a.first != b.first) return a.first > b.first;
                          return index[a.second].id < index[b.second].id;
                      });
    std::vector<RetrievalHit> hits;
    hits.reserve(take);
    for (std::size_t r = 0; r < take; ++r) hits.push_back({index[scored[r].second], scored[r].first});
    return hits;
}

HashingEmbedder::HashingEmbedder(std::size_t dimension) : dimension_(dimension) {
    if (dimension_ == 0) throw Error("embedding dimension must be positive");
}

std::vector<double> HashingEmbedder::operator()(std::string_view input) const {
    std::vector<double> v(dimension_, 0.0);
    for (const auto& token : text::tokenize_words(input)) {
        std::uint64_t h = 14695981039346656037ULL;
        for (unsigned char c : token) {
            h ^= c;
            h *= 1099511628211ULL;
        }
        const double sign = (h >> 63) ? -1.0 : 1.0;
        v[h % dimension_] += sign;
    }
    normalize(v);
    return v;
}

}  // namespace matmcd::da
