#include "proedscan/ingest.hpp"

#include "proedscan/artifacts.hpp"
#include "proedscan/digest.hpp"
#include "proedscan/image.hpp"
#include "proedscan/text.hpp"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <map>
#include <stdexcept>
#include <thread>

namespace proedscan::ingest {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

HashtagTaxonomy HashtagTaxonomy::defaults() {
    HashtagTaxonomy t;
    t.pro_ed = {"proana", "thinspo", "thinspiration", "fitspiration", "fitspo"};
    t.not_pro_ed = {"ootd", "fakecandid", "animals", "pets", "travel", "photography"};
    return t;
}

bool HashtagTaxonomy::sides_disjoint() const {
    for (const auto& tag : pro_ed) {
        if (not_pro_ed.count(tag)) return false;
    }
    return true;
}

std::string to_string(SourceClass c) {
    switch (c) {
        case SourceClass::pro_ed: return "pro_ed";
        case SourceClass::not_pro_ed: return "not_pro_ed";
        case SourceClass::conflict: return "conflict";
        case SourceClass::unlabeled: return "unlabeled";
    }
    return "unlabeled";
}

std::string to_string(FetchStatus s) {
    switch (s) {
        case FetchStatus::pending: return "pending";
        case FetchStatus::fetched: return "fetched";
        case FetchStatus::failed: return "failed";
        case FetchStatus::skipped_non_image: return "skipped_non_image";
    }
    return "pending";
}

std::optional<SourceClass> source_class_from_string(const std::string& s) {
    if (s == "pro_ed") return SourceClass::pro_ed;
    if (s == "not_pro_ed") return SourceClass::not_pro_ed;
    if (s == "conflict") return SourceClass::conflict;
    if (s == "unlabeled") return SourceClass::unlabeled;
    return std::nullopt;
}

std::optional<FetchStatus> fetch_status_from_string(const std::string& s) {
    if (s == "pending") return FetchStatus::pending;
    if (s == "fetched") return FetchStatus::fetched;
    if (s == "failed") return FetchStatus::failed;
    if (s == "skipped_non_image") return FetchStatus::skipped_non_image;
    return std::nullopt;
}

namespace {

std::string normalize_hashtag(const std::string& raw) {
    std::string tag = trim(raw);
    if (!tag.empty() && tag[0] == '#') tag.erase(0, 1);
    return ascii_lower(tag);
}

std::optional<std::string> id_as_string(const json& v) {
    if (v.is_string()) {
        std::string s = v.get<std::string>();
        if (s.empty()) return std::nullopt;
        return s;
    }
    if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
    if (v.is_number_integer()) {
        auto n = v.get<std::int64_t>();
        if (n < 0) return std::nullopt;
        return std::to_string(n);
    }
    return std::nullopt;
}

std::optional<std::int64_t> count_field(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_number_integer()) return std::nullopt;
    auto n = it->get<std::int64_t>();
    if (n < 0) return std::nullopt;
    return n;
}

std::optional<TweetRecord> record_from_line(const std::string& line, std::string& error) {
    json obj = json::parse(line, nullptr, false);
    if (obj.is_discarded() || !obj.is_object()) {
        error = "invalid JSON object";
        return std::nullopt;
    }
    TweetRecord rec;
    if (auto it = obj.find("id"); it != obj.end()) {
        auto id = id_as_string(*it);
        if (!id) {
            error = "invalid 'id'";
            return std::nullopt;
        }
        rec.tweet_id = *id;
    } else {
        error = "missing 'id'";
        return std::nullopt;
    }
    if (auto it = obj.find("created_at"); it != obj.end() && it->is_string()) {
        auto t = parse_iso8601(it->get<std::string>());
        if (!t) {
            error = "invalid 'created_at'";
            return std::nullopt;
        }
        rec.posted_at = *t;
    } else {
        error = "missing 'created_at'";
        return std::nullopt;
    }
    if (auto it = obj.find("hashtags"); it != obj.end() && it->is_array()) {
        for (const auto& h : *it) {
            if (!h.is_string()) {
                error = "non-string hashtag";
                return std::nullopt;
            }
            std::string tag = normalize_hashtag(h.get<std::string>());
            if (!tag.empty()) rec.hashtags.push_back(tag);
        }
    } else {
        error = "missing 'hashtags'";
        return std::nullopt;
    }
    auto likes = count_field(obj, "like_count");
    auto retweets = count_field(obj, "retweet_count");
    auto replies = count_field(obj, "reply_count");
    if (!likes || !retweets || !replies) {
        error = "missing or negative engagement count";
        return std::nullopt;
    }
    rec.likes = *likes;
    rec.retweets = *retweets;
    rec.replies = *replies;
    if (auto it = obj.find("image_urls"); it != obj.end() && it->is_array()) {
        for (const auto& u : *it) {
            if (!u.is_string()) {
                error = "non-string image url";
                return std::nullopt;
            }
            rec.image_urls.push_back(u.get<std::string>());
        }
    } else {
        error = "missing 'image_urls'";
        return std::nullopt;
    }
    return rec;
}

} // namespace

std::vector<TweetRecord> parse_metadata(const std::vector<std::string>& lines, ParseReport& report) {
    std::vector<TweetRecord> records;
    std::set<std::string> seen_ids;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) continue;
        std::string error;
        auto rec = record_from_line(lines[i], error);
        if (!rec) {
            report.skipped.push_back({i + 1, error});
            continue;
        }
        if (!seen_ids.insert(rec->tweet_id).second) {
            report.duplicate_ids.push_back({i + 1, "duplicate tweet id " + rec->tweet_id});
            continue;
        }
        records.push_back(std::move(*rec));
    }
    return records;
}

std::string serialize_record(const TweetRecord& record) {
    ordered_json obj;
    obj["id"] = record.tweet_id;
    obj["created_at"] = format_iso8601(record.posted_at);
    obj["hashtags"] = record.hashtags;
    obj["like_count"] = record.likes;
    obj["retweet_count"] = record.retweets;
    obj["reply_count"] = record.replies;
    obj["image_urls"] = record.image_urls;
    return obj.dump();
}

std::vector<ImageLink> extract_image_links(const std::vector<TweetRecord>& records) {
    std::vector<ImageLink> links;
    for (const auto& rec : records) {
        for (const auto& url : rec.image_urls) {
            links.push_back({rec.tweet_id, url, rec.posted_at});
        }
    }
    return links;
}

SourceClass assign_source_class(const std::set<std::string>& hashtags, const HashtagTaxonomy& taxonomy) {
    bool pro = false, not_pro = false;
    for (const auto& tag : hashtags) {
        if (taxonomy.pro_ed.count(tag)) pro = true;
        if (taxonomy.not_pro_ed.count(tag)) not_pro = true;
    }
    if (pro && not_pro) return SourceClass::conflict;
    if (pro) return SourceClass::pro_ed;
    if (not_pro) return SourceClass::not_pro_ed;
    return SourceClass::unlabeled;
}

ImageStore::ImageStore(std::filesystem::path root) : root_(std::move(root)) {
    std::filesystem::create_directories(root_);
}

std::string ImageStore::relative_blob_path(const std::string& asset_id, const std::string& ext) {
    return asset_id.substr(0, 2) + "/" + asset_id + "." + ext;
}

std::filesystem::path ImageStore::blob_path(const std::string& asset_id, const std::string& ext) const {
    return root_ / relative_blob_path(asset_id, ext);
}

bool ImageStore::put_blob(const std::string& asset_id, const std::string& ext,
                          const std::vector<std::uint8_t>& bytes) const {
    const auto path = blob_path(asset_id, ext);
    if (std::filesystem::exists(path)) return false;
    atomic_write_file(path, bytes);
    return true;
}

std::optional<std::vector<std::uint8_t>> ImageStore::read_blob(const std::string& relative_path) const {
    return read_binary_file(root_ / relative_path);
}

std::string serialize_asset(const ImageAsset& asset) {
    ordered_json obj;
    obj["asset_id"] = asset.asset_id;
    obj["source_url"] = asset.source_url;
    obj["tweet_id"] = asset.tweet_id;
    obj["posted_at"] = format_iso8601(asset.posted_at);
    obj["fetch_status"] = to_string(asset.fetch_status);
    if (!asset.byte_path.empty()) obj["byte_path"] = asset.byte_path;
    obj["source_class"] = to_string(asset.source_class);
    return obj.dump();
}

std::optional<ImageAsset> parse_asset(const std::string& line) {
    json obj = json::parse(line, nullptr, false);
    if (obj.is_discarded() || !obj.is_object()) return std::nullopt;
    ImageAsset a;
    try {
        a.asset_id = obj.value("asset_id", "");
        a.source_url = obj.at("source_url").get<std::string>();
        a.tweet_id = obj.at("tweet_id").get<std::string>();
        auto t = parse_iso8601(obj.at("posted_at").get<std::string>());
        if (!t) return std::nullopt;
        a.posted_at = *t;
        auto status = fetch_status_from_string(obj.at("fetch_status").get<std::string>());
        if (!status) return std::nullopt;
        a.fetch_status = *status;
        a.byte_path = obj.value("byte_path", "");
        auto cls = source_class_from_string(obj.at("source_class").get<std::string>());
        if (!cls) return std::nullopt;
        a.source_class = *cls;
    } catch (const json::exception&) {
        return std::nullopt;
    }
    return a;
}

std::vector<ImageAsset> ImageStore::load_index(const std::string& filename) const {
    std::vector<ImageAsset> assets;
    auto text = read_text_file(root_ / filename);
    if (!text) return assets;
    const auto lines = split_lines(*text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) continue;
        // header line carries artifact name + config digest
        json probe = json::parse(lines[i], nullptr, false);
        if (probe.is_object() && probe.contains("artifact")) continue;
        auto asset = parse_asset(lines[i]);
        if (!asset) {
            throw std::runtime_error(filename + ": malformed asset record at line " +
                                     std::to_string(i + 1));
        }
        assets.push_back(std::move(*asset));
    }
    return assets;
}

void ImageStore::save_index(const std::vector<ImageAsset>& assets, const std::string& config_digest,
                            const std::string& filename) const {
    std::string out;
    ordered_json header;
    header["artifact"] = filename == "assets.jsonl" ? "assets" : "asset_index";
    header["config_digest"] = config_digest;
    out += header.dump();
    out += '\n';
    for (const auto& asset : assets) {
        out += serialize_asset(asset);
        out += '\n';
    }
    atomic_write_file(root_ / filename, out);
}

namespace {

struct FetchedBody {
    bool ok = false;
    std::string error;
    std::vector<std::uint8_t> bytes;
    std::string content_type;
};

FetchedBody fetch_file_url(const std::string& url) {
    FetchedBody body;
    std::string path;
    if (url.rfind("file://", 0) == 0) {
        path = url.substr(7);
    } else {
        path = url.substr(5); // "file:rel/path", resolved against the working directory
    }
    auto bytes = read_binary_file(path);
    if (!bytes) {
        body.error = "cannot read " + path;
        return body;
    }
    body.ok = true;
    body.bytes = std::move(*bytes);
    return body;
}

FetchedBody fetch_http_url(const std::string& url, const FetchPolicy& policy) {
    FetchedBody body;
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
        body.error = "unsupported url scheme";
        return body;
    }
    const auto path_begin = url.find('/', scheme_end + 3);
    const std::string base = path_begin == std::string::npos ? url : url.substr(0, path_begin);
    const std::string target = path_begin == std::string::npos ? "/" : url.substr(path_begin);

    httplib::Client client(base);
    client.set_follow_location(true);
    const auto timeout_ms = std::chrono::milliseconds(std::int64_t(policy.timeout_seconds * 1000));
    client.set_connection_timeout(timeout_ms);
    client.set_read_timeout(timeout_ms);

    for (int attempt = 0; attempt <= policy.max_retries; ++attempt) {
        auto res = client.Get(target);
        if (res && res->status >= 200 && res->status < 300) {
            body.ok = true;
            body.bytes.assign(res->body.begin(), res->body.end());
            body.content_type = res->get_header_value("Content-Type");
            return body;
        }
        body.error = res ? "http status " + std::to_string(res->status)
                         : "transport error (" + httplib::to_string(res.error()) + ")";
    }
    return body;
}

std::string extension_for(const FetchedBody& body) {
    auto sniffed = sniff_image_extension(std::span(body.bytes.data(), body.bytes.size()));
    if (sniffed) return *sniffed;
    // trust an image/* content type when the magic is unknown
    auto ct = ascii_lower(body.content_type);
    if (ct.rfind("image/", 0) == 0) {
        auto sub = ct.substr(6);
        if (auto sep = sub.find(';'); sep != std::string::npos) sub = sub.substr(0, sep);
        sub = trim(sub);
        if (!sub.empty()) return sub == "jpeg" ? "jpg" : sub;
    }
    return "";
}

} // namespace

FetchReport fetch_images(const std::vector<ImageLink>& links, const ImageStore& store,
                         const FetchPolicy& policy, std::vector<ImageAsset>& assets) {
    FetchReport report;

    std::map<std::pair<std::string, std::string>, std::size_t> existing;
    for (std::size_t i = 0; i < assets.size(); ++i) {
        existing.emplace(std::make_pair(assets[i].tweet_id, assets[i].source_url), i);
    }

    auto is_settled = [&](const ImageAsset& a) {
        if (a.fetch_status == FetchStatus::fetched) {
            return std::filesystem::exists(store.root() / a.byte_path);
        }
        return a.fetch_status == FetchStatus::skipped_non_image;
    };

    // unique URLs that still need a transfer
    std::vector<std::string> urls;
    std::map<std::string, std::size_t> url_slot;
    for (const auto& link : links) {
        auto it = existing.find({link.tweet_id, link.url});
        if (it != existing.end() && is_settled(assets[it->second])) continue;
        if (url_slot.emplace(link.url, urls.size()).second) urls.push_back(link.url);
    }

    struct Outcome {
        FetchStatus status = FetchStatus::failed;
        std::string asset_id;
        std::string ext;
        std::string error;
    };
    std::vector<Outcome> outcomes(urls.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= urls.size()) return;
            const std::string& url = urls[i];
            FetchedBody body = (url.rfind("file:", 0) == 0) ? fetch_file_url(url)
                                                            : fetch_http_url(url, policy);
            Outcome& out = outcomes[i];
            if (!body.ok) {
                out.status = FetchStatus::failed;
                out.error = body.error;
                continue;
            }
            const std::string ext = extension_for(body);
            if (ext.empty() || body.bytes.empty()) {
                out.status = FetchStatus::skipped_non_image;
                continue;
            }
            out.status = FetchStatus::fetched;
            out.asset_id = sha256_hex(std::span(body.bytes.data(), body.bytes.size()));
            out.ext = ext;
            store.put_blob(out.asset_id, ext, body.bytes);
        }
    };

    const int n_threads = std::max(1, std::min<int>(policy.max_parallel, int(urls.size())));
    std::vector<std::thread> pool;
    pool.reserve(std::size_t(n_threads));
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    // merge results in link order so the index is deterministic
    std::set<std::pair<std::string, std::string>> counted;
    for (const auto& link : links) {
        const auto key = std::make_pair(link.tweet_id, link.url);
        if (!counted.insert(key).second) continue;
        auto it = existing.find(key);
        if (it != existing.end() && is_settled(assets[it->second])) {
            ++report.already_present;
            continue;
        }
        const Outcome& out = outcomes[url_slot.at(link.url)];
        ImageAsset asset;
        if (it != existing.end()) asset = assets[it->second];
        asset.source_url = link.url;
        asset.tweet_id = link.tweet_id;
        asset.posted_at = link.posted_at;
        asset.fetch_status = out.status;
        switch (out.status) {
            case FetchStatus::fetched:
                asset.asset_id = out.asset_id;
                asset.byte_path = ImageStore::relative_blob_path(out.asset_id, out.ext);
                ++report.fetched;
                break;
            case FetchStatus::skipped_non_image:
                ++report.skipped_non_image;
                break;
            default:
                ++report.failed;
                report.failures.push_back({link.url, out.error});
                break;
        }
        if (it != existing.end()) {
            assets[it->second] = asset;
        } else {
            assets.push_back(asset);
        }
    }
    return report;
}

std::vector<std::string> LocalArchiveSource::read_lines() const {
    if (std::filesystem::is_directory(path_)) {
        std::vector<std::filesystem::path> files;
        for (const auto& entry : std::filesystem::directory_iterator(path_)) {
            if (entry.is_regular_file()) files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
        std::vector<std::string> lines;
        for (const auto& f : files) {
            auto text = read_text_file(f);
            if (!text) throw std::runtime_error("cannot read archive file: " + f.string());
            auto file_lines = split_lines(*text);
            lines.insert(lines.end(), file_lines.begin(), file_lines.end());
        }
        return lines;
    }
    auto text = read_text_file(path_);
    if (!text) throw std::runtime_error("cannot read archive: " + path_.string());
    return split_lines(*text);
}

} // namespace proedscan::ingest
