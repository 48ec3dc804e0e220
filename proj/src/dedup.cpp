#include "proedscan/dedup.hpp"

#include "proedscan/artifacts.hpp"
#include "proedscan/text.hpp"

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>
#include <stdexcept>

namespace proedscan::dedup {

namespace {

// Integer luma sums over the 9x8 box partition. sum is 1000x the Rec. 601
// luma accumulated over the cell; comparisons cross-multiply with the cell
// areas instead of dividing.
struct LumaCell {
    unsigned long long sum = 0;
    unsigned long long area = 0;
};

LumaCell cell_luma(const Image& img, int ox, int oy, int out_w, int out_h) {
    int x0 = int(std::int64_t(ox) * img.width / out_w);
    int x1 = int(std::int64_t(ox + 1) * img.width / out_w);
    if (x1 <= x0) x1 = x0 + 1;
    int y0 = int(std::int64_t(oy) * img.height / out_h);
    int y1 = int(std::int64_t(oy + 1) * img.height / out_h);
    if (y1 <= y0) y1 = y0 + 1;
    LumaCell cell;
    cell.area = (unsigned long long)(x1 - x0) * (unsigned long long)(y1 - y0);
    for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) {
            if (img.channels >= 3) {
                cell.sum += 299ull * img.at(x, y, 0) + 587ull * img.at(x, y, 1) +
                            114ull * img.at(x, y, 2);
            } else {
                cell.sum += 1000ull * img.at(x, y, 0);
            }
        }
    }
    return cell;
}

bool brighter(const LumaCell& a, const LumaCell& b) {
    return (unsigned __int128)a.sum * b.area > (unsigned __int128)b.sum * a.area;
}

} // namespace

PerceptualHash dhash(const Image& image) {
    if (image.width < 1 || image.height < 1 || image.pixels.empty()) {
        throw std::invalid_argument("dhash: empty image");
    }
    constexpr int cols = 9, rows = 8;
    LumaCell grid[rows][cols];
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            grid[r][c] = cell_luma(image, c, r, cols, rows);
        }
    }
    std::uint64_t bits = 0;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c + 1 < cols; ++c) {
            bits = (bits << 1) | (brighter(grid[r][c], grid[r][c + 1]) ? 1u : 0u);
        }
    }
    return PerceptualHash{bits};
}

int hamming_distance(PerceptualHash a, PerceptualHash b) {
    return std::popcount(a.bits ^ b.bits);
}

double similarity(PerceptualHash a, PerceptualHash b) {
    return 1.0 - double(hamming_distance(a, b)) / 64.0;
}

std::string to_hex16(PerceptualHash h) {
    static const char* hex = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 0; i < 16; ++i) {
        s[std::size_t(15 - i)] = hex[(h.bits >> (4 * i)) & 0xf];
    }
    return s;
}

std::optional<PerceptualHash> from_hex16(const std::string& s) {
    if (s.size() != 16) return std::nullopt;
    std::uint64_t bits = 0;
    for (char c : s) {
        int v;
        if (c >= '0' && c <= '9') v = c - '0';
        else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
        else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
        else return std::nullopt;
        bits = (bits << 4) | std::uint64_t(v);
    }
    return PerceptualHash{bits};
}

namespace {

struct UnionFind {
    std::vector<std::size_t> parent;

    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }

    std::size_t find(std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }

    void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

} // namespace

std::vector<DupCluster> cluster_near_duplicates(const std::vector<HashedAsset>& assets,
                                                double threshold) {
    const std::size_t n = assets.size();
    UnionFind uf(n);
    // exhaustive O(n^2); fine for corpora in the tens of thousands
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (similarity(assets[i].hash, assets[j].hash) >= threshold) {
                uf.unite(i, j);
            }
        }
    }
    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < n; ++i) groups[uf.find(i)].push_back(i);

    std::vector<DupCluster> clusters;
    clusters.reserve(groups.size());
    std::vector<std::size_t> order;
    for (auto& [root, members] : groups) {
        (void)root;
        order.push_back(members.front());
    }
    std::sort(order.begin(), order.end());
    for (std::size_t first : order) {
        const auto& members = groups.at(uf.find(first));
        DupCluster cluster;
        std::vector<HashedAsset> member_assets;
        for (std::size_t idx : members) {
            cluster.member_asset_ids.push_back(assets[idx].asset_id);
            member_assets.push_back(assets[idx]);
        }
        cluster.canonical_asset_id = select_canonical(member_assets);
        clusters.push_back(std::move(cluster));
    }
    return clusters;
}

std::string select_canonical(const std::vector<HashedAsset>& members) {
    if (members.empty()) throw std::invalid_argument("select_canonical: empty cluster");
    const HashedAsset* best = &members.front();
    for (const auto& m : members) {
        if (m.posted_at < best->posted_at ||
            (m.posted_at == best->posted_at && m.asset_id < best->asset_id)) {
            best = &m;
        }
    }
    return best->asset_id;
}

std::string to_string(RemovalReason r) {
    switch (r) {
        case RemovalReason::same_url: return "same_url";
        case RemovalReason::same_bytes: return "same_bytes";
        case RemovalReason::near_duplicate: return "near_duplicate";
    }
    return "same_bytes";
}

namespace {

// Deterministic keep rule for exact-duplicate groups: earliest posted_at,
// then smallest asset_id, then tweet_id and url as final tie-breakers
// (same-bytes duplicates share an asset_id).
bool keeps_over(const ingest::ImageAsset& a, const ingest::ImageAsset& b) {
    if (a.posted_at != b.posted_at) return a.posted_at < b.posted_at;
    if (a.asset_id != b.asset_id) return a.asset_id < b.asset_id;
    if (a.tweet_id != b.tweet_id) return a.tweet_id < b.tweet_id;
    return a.source_url < b.source_url;
}

} // namespace

std::vector<ingest::ImageAsset> dedup_exact(const std::vector<ingest::ImageAsset>& assets,
                                            std::vector<Removal>& removals) {
    const std::size_t n = assets.size();
    UnionFind uf(n);
    std::map<std::string, std::size_t> by_url;
    std::map<std::string, std::size_t> by_bytes;
    // reason recorded per asset at the moment it joins a group
    std::vector<RemovalReason> join_reason(n, RemovalReason::same_bytes);
    std::vector<bool> joined(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        auto [url_it, url_new] = by_url.emplace(assets[i].source_url, i);
        if (!url_new) {
            uf.unite(i, url_it->second);
            join_reason[i] = RemovalReason::same_url;
            joined[i] = true;
        }
        if (!assets[i].asset_id.empty()) {
            auto [bytes_it, bytes_new] = by_bytes.emplace(assets[i].asset_id, i);
            if (!bytes_new) {
                uf.unite(i, bytes_it->second);
                if (!joined[i]) join_reason[i] = RemovalReason::same_bytes;
                joined[i] = true;
            }
        }
    }

    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < n; ++i) groups[uf.find(i)].push_back(i);

    std::vector<ingest::ImageAsset> kept;
    std::vector<std::size_t> kept_order;
    std::vector<Removal> out;
    for (auto& [root, members] : groups) {
        (void)root;
        std::size_t keep = members.front();
        for (std::size_t idx : members) {
            if (keeps_over(assets[idx], assets[keep])) keep = idx;
        }
        kept_order.push_back(keep);
        for (std::size_t idx : members) {
            if (idx == keep) continue;
            out.push_back({assets[idx].asset_id, assets[idx].tweet_id, join_reason[idx],
                           assets[keep].asset_id});
        }
    }
    std::sort(kept_order.begin(), kept_order.end());
    kept.reserve(kept_order.size());
    for (std::size_t idx : kept_order) kept.push_back(assets[idx]);
    removals.insert(removals.end(), out.begin(), out.end());
    return kept;
}

std::string serialize_hash_index(const std::vector<HashedAsset>& assets,
                                 const std::string& config_digest) {
    std::string out = "# proedscan hash index\n# config_digest=" + config_digest + "\n";
    for (const auto& a : assets) {
        out += a.asset_id;
        out += '\t';
        out += to_hex16(a.hash);
        out += '\n';
    }
    return out;
}

std::vector<std::pair<std::string, PerceptualHash>> parse_hash_index(const std::string& text) {
    std::vector<std::pair<std::string, PerceptualHash>> out;
    for (const auto& line : split_lines(text)) {
        if (line.empty() || line[0] == '#') continue;
        auto fields = split(line, '\t');
        if (fields.size() != 2) throw std::runtime_error("hash index: malformed line");
        auto h = from_hex16(fields[1]);
        if (!h) throw std::runtime_error("hash index: bad hash for " + fields[0]);
        out.emplace_back(fields[0], *h);
    }
    return out;
}

std::string serialize_removals(const std::vector<Removal>& removals, const std::string& config_digest) {
    nlohmann::ordered_json header;
    header["artifact"] = "removal_report";
    header["config_digest"] = config_digest;
    std::string out = header.dump() + "\n";
    for (const auto& r : removals) {
        nlohmann::ordered_json obj;
        obj["removed_asset_id"] = r.removed_asset_id;
        obj["removed_tweet_id"] = r.removed_tweet_id;
        obj["reason"] = to_string(r.reason);
        obj["canonical_asset_id"] = r.canonical_asset_id;
        out += obj.dump();
        out += '\n';
    }
    return out;
}

} // namespace proedscan::dedup
