#include "proedscan/dataset.hpp"

#include "proedscan/digest.hpp"
#include "proedscan/rng.hpp"
#include "proedscan/text.hpp"

#include <cmath>
#include <stdexcept>

namespace proedscan::dataset {

std::vector<LabeledExample> label_examples(const std::vector<ingest::ImageAsset>& assets,
                                           std::vector<Exclusion>& excluded) {
    std::vector<LabeledExample> out;
    for (const auto& asset : assets) {
        switch (asset.source_class) {
            case ingest::SourceClass::pro_ed:
                out.push_back({asset.asset_id, 0, asset.source_class});
                break;
            case ingest::SourceClass::not_pro_ed:
                out.push_back({asset.asset_id, 1, asset.source_class});
                break;
            case ingest::SourceClass::conflict:
                excluded.push_back({asset.asset_id, "cross-class hashtags"});
                break;
            case ingest::SourceClass::unlabeled:
                excluded.push_back({asset.asset_id, "no taxonomy hashtag"});
                break;
        }
    }
    return out;
}

std::string to_string(Split s) {
    switch (s) {
        case Split::train: return "train";
        case Split::val: return "val";
        case Split::test: return "test";
    }
    return "train";
}

std::optional<Split> split_from_string(const std::string& s) {
    if (s == "train") return Split::train;
    if (s == "val") return Split::val;
    if (s == "test") return Split::test;
    return std::nullopt;
}

std::vector<LabeledExample> DatasetManifest::examples_in(Split s) const {
    std::vector<LabeledExample> out;
    for (const auto& ex : examples) {
        if (assignment.at(ex.asset_id) == s) out.push_back(ex);
    }
    return out;
}

namespace {

// split sizes for N examples; half-away-from-zero rounding, test first
struct SplitSizes {
    std::int64_t n_test = 0, n_val = 0, n_train = 0;
};

SplitSizes sizes_for(std::int64_t n, double test_frac, double val_frac) {
    SplitSizes s;
    s.n_test = std::llround(test_frac * double(n));
    s.n_val = std::llround(val_frac * double(n - s.n_test));
    s.n_train = n - s.n_test - s.n_val;
    return s;
}

std::int64_t smallest_viable_n(double test_frac, double val_frac) {
    for (std::int64_t n = 3; n < 1000000; ++n) {
        auto s = sizes_for(n, test_frac, val_frac);
        if (s.n_test >= 1 && s.n_val >= 1 && s.n_train >= 1) return n;
    }
    return -1;
}

} // namespace

DatasetManifest split(std::vector<LabeledExample> examples, std::uint64_t seed, double test_frac,
                      double val_frac, bool allow_single_class) {
    if (!(test_frac > 0.0 && test_frac < 1.0) || !(val_frac > 0.0 && val_frac < 1.0)) {
        throw std::invalid_argument("split: fractions must lie in (0,1)");
    }
    const std::int64_t n = std::int64_t(examples.size());
    const auto sizes = sizes_for(n, test_frac, val_frac);
    if (n < 3 || sizes.n_test < 1 || sizes.n_val < 1 || sizes.n_train < 1) {
        throw std::invalid_argument(
            "split: " + std::to_string(n) + " examples cannot populate train/val/test; smallest viable N is " +
            std::to_string(smallest_viable_n(test_frac, val_frac)));
    }
    bool has0 = false, has1 = false;
    for (const auto& ex : examples) (ex.label == 0 ? has0 : has1) = true;
    if (!(has0 && has1) && !allow_single_class) {
        throw std::invalid_argument(
            "split: dataset contains a single class; pass allow_single_class to proceed");
    }

    DatasetManifest manifest;
    manifest.split_seed = seed;
    manifest.test_frac = test_frac;
    manifest.val_frac = val_frac;

    std::vector<std::size_t> order(examples.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    SplitMix64 rng(derive_stream_seed(seed, 0));
    seeded_shuffle(order, rng);

    for (std::int64_t i = 0; i < n; ++i) {
        const auto& ex = examples[order[std::size_t(i)]];
        Split s = i < sizes.n_test            ? Split::test
                  : i < sizes.n_test + sizes.n_val ? Split::val
                                                   : Split::train;
        manifest.assignment[ex.asset_id] = s;
        manifest.counts[int(s)].by_label[ex.label] += 1;
    }
    manifest.examples = std::move(examples);
    return manifest;
}

std::string serialize_manifest(const DatasetManifest& m, const std::string& config_digest) {
    std::string out = "# proedscan dataset manifest\n# config_digest=" + config_digest + "\n";
    out += "seed\t" + std::to_string(m.split_seed) + "\n";
    out += "test_frac\t" + format_double(m.test_frac) + "\n";
    out += "val_frac\t" + format_double(m.val_frac) + "\n";
    out += "n\t" + std::to_string(m.examples.size()) + "\n";
    for (int s = 0; s < 3; ++s) {
        const auto name = to_string(Split(s));
        out += "n_" + name + "\t" + std::to_string(m.counts[s].total()) + "\n";
        out += "n_" + name + "_label0\t" + std::to_string(m.counts[s].by_label[0]) + "\n";
        out += "n_" + name + "_label1\t" + std::to_string(m.counts[s].by_label[1]) + "\n";
    }
    out += "\n";
    for (const auto& ex : m.examples) {
        out += ex.asset_id + "\t" + std::to_string(ex.label) + "\t" +
               to_string(m.assignment.at(ex.asset_id)) + "\n";
    }
    return out;
}

DatasetManifest parse_manifest(const std::string& text) {
    DatasetManifest m;
    bool in_rows = false;
    for (const auto& line : split_lines(text)) {
        if (line.empty()) {
            in_rows = true;
            continue;
        }
        if (line[0] == '#') continue;
        auto fields = split(line, '\t');
        if (!in_rows) {
            if (fields.size() != 2) throw std::runtime_error("manifest: malformed header line");
            if (fields[0] == "seed") m.split_seed = std::uint64_t(*parse_int(fields[1]));
            else if (fields[0] == "test_frac") m.test_frac = *parse_double(fields[1]);
            else if (fields[0] == "val_frac") m.val_frac = *parse_double(fields[1]);
            continue;
        }
        if (fields.size() != 3) throw std::runtime_error("manifest: malformed example line");
        auto s = split_from_string(fields[2]);
        auto label = parse_int(fields[1]);
        if (!s || !label || (*label != 0 && *label != 1)) {
            throw std::runtime_error("manifest: bad label or split for " + fields[0]);
        }
        ingest::SourceClass cls =
            *label == 0 ? ingest::SourceClass::pro_ed : ingest::SourceClass::not_pro_ed;
        m.examples.push_back({fields[0], int(*label), cls});
        m.assignment[fields[0]] = *s;
        m.counts[int(*s)].by_label[*label] += 1;
    }
    return m;
}

std::string split_digest(const std::vector<LabeledExample>& examples) {
    std::string blob;
    for (const auto& ex : examples) {
        blob += ex.asset_id;
        blob += '\t';
        blob += std::to_string(ex.label);
        blob += '\n';
    }
    return sha256_hex(blob);
}

} // namespace proedscan::dataset
