#pragma once

#include "proedscan/image.hpp"
#include "proedscan/ingest.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace proedscan::dedup {

// 64-bit difference hash. Equal decoded pixel grids always produce equal
// hashes: the reduction is pure integer arithmetic.
struct PerceptualHash {
    std::uint64_t bits = 0;

    friend bool operator==(const PerceptualHash&, const PerceptualHash&) = default;
};

// Grayscale (Rec. 601 luma), box-filtered to 9 columns x 8 rows; bit
// (r, c) is set iff cell (r, c) is strictly brighter than (r, c+1),
// packed row-major from the most significant bit. Cell comparisons
// cross-multiply integer luma sums, so ties and scaling never drift.
PerceptualHash dhash(const Image& image);

// 1 - hamming(a, b)/64. Multiples of 1/64 are exact in a double.
double similarity(PerceptualHash a, PerceptualHash b);

int hamming_distance(PerceptualHash a, PerceptualHash b);

std::string to_hex16(PerceptualHash h);
std::optional<PerceptualHash> from_hex16(const std::string& s);

struct DupCluster {
    std::vector<std::string> member_asset_ids;
    std::string canonical_asset_id;
};

struct HashedAsset {
    std::string asset_id;
    UtcInstant posted_at;
    PerceptualHash hash;
};

// Connected components of the graph with an edge wherever similarity >=
// threshold (transitive closure). Singletons are clusters of size one.
std::vector<DupCluster> cluster_near_duplicates(const std::vector<HashedAsset>& assets,
                                                double threshold = 0.90);

// Earliest posted_at wins; ties break to the lexicographically smallest
// asset_id.
std::string select_canonical(const std::vector<HashedAsset>& members);

enum class RemovalReason { same_url, same_bytes, near_duplicate };
std::string to_string(RemovalReason r);

struct Removal {
    std::string removed_asset_id;
    std::string removed_tweet_id;
    RemovalReason reason;
    std::string canonical_asset_id;
};

// Collapses assets sharing a source_url or identical bytes (equal
// asset_id) down to one canonical entry each.
std::vector<ingest::ImageAsset> dedup_exact(const std::vector<ingest::ImageAsset>& assets,
                                            std::vector<Removal>& removals);

// Hash index artifact: `asset_id<TAB>hex16` lines.
std::string serialize_hash_index(const std::vector<HashedAsset>& assets,
                                 const std::string& config_digest);
std::vector<std::pair<std::string, PerceptualHash>> parse_hash_index(const std::string& text);

std::string serialize_removals(const std::vector<Removal>& removals, const std::string& config_digest);

} // namespace proedscan::dedup
