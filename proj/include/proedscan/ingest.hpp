#pragma once

#include "proedscan/timeutil.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace proedscan::ingest {

// One archived post. Hashtags are stored lowercase without '#'.
struct TweetRecord {
    std::string tweet_id;
    UtcInstant posted_at;
    std::vector<std::string> hashtags;
    std::int64_t likes = 0;
    std::int64_t retweets = 0;
    std::int64_t replies = 0;
    std::vector<std::string> image_urls;

    friend bool operator==(const TweetRecord&, const TweetRecord&) = default;
};

struct HashtagTaxonomy {
    std::set<std::string> pro_ed;
    std::set<std::string> not_pro_ed;

    static HashtagTaxonomy defaults();
    bool sides_disjoint() const;
};

enum class SourceClass { pro_ed, not_pro_ed, conflict, unlabeled };
enum class FetchStatus { pending, fetched, failed, skipped_non_image };

std::string to_string(SourceClass c);
std::string to_string(FetchStatus s);
std::optional<SourceClass> source_class_from_string(const std::string& s);
std::optional<FetchStatus> fetch_status_from_string(const std::string& s);

// One fetched (or attempted) image link. asset_id is the SHA-256 of the
// fetched bytes, so identical bytes collapse to one store blob even when
// several tweets link them.
struct ImageAsset {
    std::string asset_id; // empty until fetched
    std::string source_url;
    std::string tweet_id;
    UtcInstant posted_at;
    FetchStatus fetch_status = FetchStatus::pending;
    std::string byte_path; // relative to the store root, empty unless fetched
    SourceClass source_class = SourceClass::unlabeled;

    friend bool operator==(const ImageAsset&, const ImageAsset&) = default;
};

struct ParseIssue {
    std::size_t line_number = 0; // 1-based
    std::string reason;
};

struct ParseReport {
    std::vector<ParseIssue> skipped;
    std::vector<ParseIssue> duplicate_ids;
};

// Newline-delimited JSON records. Malformed lines and repeated tweet ids
// are skipped and reported, never fatal.
std::vector<TweetRecord> parse_metadata(const std::vector<std::string>& lines, ParseReport& report);

// Canonical JSONL form; parse_metadata(serialize(r)) == r.
std::string serialize_record(const TweetRecord& record);

struct ImageLink {
    std::string tweet_id;
    std::string url;
    UtcInstant posted_at;

    friend bool operator==(const ImageLink&, const ImageLink&) = default;
};

std::vector<ImageLink> extract_image_links(const std::vector<TweetRecord>& records);

SourceClass assign_source_class(const std::set<std::string>& hashtags, const HashtagTaxonomy& taxonomy);

struct FetchPolicy {
    double timeout_seconds = 10.0;
    int max_retries = 2;
    int max_parallel = 4;
};

struct FetchFailure {
    std::string url;
    std::string error;
};

struct FetchReport {
    std::int64_t fetched = 0;
    std::int64_t failed = 0;
    std::int64_t skipped_non_image = 0;
    std::int64_t already_present = 0;
    std::vector<FetchFailure> failures;
};

// Content-addressed image store: blobs at <root>/<first 2 hex>/<id>.<ext>,
// index at <root>/assets.jsonl.
class ImageStore {
public:
    explicit ImageStore(std::filesystem::path root);

    const std::filesystem::path& root() const { return root_; }

    std::filesystem::path blob_path(const std::string& asset_id, const std::string& ext) const;
    static std::string relative_blob_path(const std::string& asset_id, const std::string& ext);

    // Write-once; returns false if the blob already existed.
    bool put_blob(const std::string& asset_id, const std::string& ext,
                  const std::vector<std::uint8_t>& bytes) const;
    std::optional<std::vector<std::uint8_t>> read_blob(const std::string& relative_path) const;

    std::vector<ImageAsset> load_index(const std::string& filename = "assets.jsonl") const;
    void save_index(const std::vector<ImageAsset>& assets, const std::string& config_digest,
                    const std::string& filename = "assets.jsonl") const;

private:
    std::filesystem::path root_;
};

std::string serialize_asset(const ImageAsset& asset);
std::optional<ImageAsset> parse_asset(const std::string& line);

// Downloads every link into the store. http(s) URLs go over the wire;
// "file:" URLs (absolute file:///path or relative file:rel/path) read the
// local filesystem so archived corpora replay offline. Existing
// fetched entries in `assets` are left untouched; new entries are
// appended. Up to policy.max_parallel transfers run concurrently.
FetchReport fetch_images(const std::vector<ImageLink>& links, const ImageStore& store,
                         const FetchPolicy& policy, std::vector<ImageAsset>& assets);

// Archive adapter: reads serialized metadata records from a file, or from
// every regular file in a directory (sorted by name).
class LocalArchiveSource {
public:
    explicit LocalArchiveSource(std::filesystem::path path) : path_(std::move(path)) {}
    std::vector<std::string> read_lines() const;

private:
    std::filesystem::path path_;
};

} // namespace proedscan::ingest
