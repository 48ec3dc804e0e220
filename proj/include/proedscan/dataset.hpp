#pragma once

#include "proedscan/ingest.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace proedscan::dataset {

// Numeric labels follow the source taxonomy: 0 = Pro-ED, 1 = Not Pro-ED.
struct LabeledExample {
    std::string asset_id;
    int label = 0;
    ingest::SourceClass source_class = ingest::SourceClass::unlabeled;

    friend bool operator==(const LabeledExample&, const LabeledExample&) = default;
};

struct Exclusion {
    std::string asset_id;
    std::string reason;
};

// pro_ed -> 0, not_pro_ed -> 1; conflict and unlabeled assets are excluded
// with a reason, never silently dropped.
std::vector<LabeledExample> label_examples(const std::vector<ingest::ImageAsset>& assets,
                                           std::vector<Exclusion>& excluded);

enum class Split { train, val, test };
std::string to_string(Split s);
std::optional<Split> split_from_string(const std::string& s);

struct SplitCounts {
    std::int64_t by_label[2] = {0, 0};
    std::int64_t total() const { return by_label[0] + by_label[1]; }
};

struct DatasetManifest {
    std::vector<LabeledExample> examples;
    std::uint64_t split_seed = 0;
    double test_frac = 0.20;
    double val_frac = 0.10; // of the non-test remainder
    std::map<std::string, Split> assignment;
    SplitCounts counts[3]; // indexed by Split

    Split split_of(const std::string& asset_id) const { return assignment.at(asset_id); }
    std::vector<LabeledExample> examples_in(Split s) const;
};

// Seeded permutation split: round(test_frac*N) examples to test first,
// round(val_frac*remainder) to val, rest to train. Rounding is half away
// from zero. Identical (examples, seed) always produces the identical
// assignment.
DatasetManifest split(std::vector<LabeledExample> examples, std::uint64_t seed,
                      double test_frac = 0.20, double val_frac = 0.10,
                      bool allow_single_class = false);

std::string serialize_manifest(const DatasetManifest& manifest, const std::string& config_digest);
DatasetManifest parse_manifest(const std::string& text);

// Digest over the ordered (asset_id, label) pairs of one split; evaluation
// reports carry it so comparisons across different splits are rejected.
std::string split_digest(const std::vector<LabeledExample>& examples);

} // namespace proedscan::dataset
