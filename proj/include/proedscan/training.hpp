#pragma once

#include "proedscan/dataset.hpp"
#include "proedscan/image.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace proedscan::training {

enum class Arch { resnet152, vit_b16, toy_linear };
std::string to_string(Arch a);
std::optional<Arch> arch_from_string(const std::string& s);

struct PreprocessSpec {
    int input_side = 0; // 0 = native resolution
    double mean[3] = {0, 0, 0};
    double stddev[3] = {1, 1, 1};
};

struct ModelBackendDescriptor {
    Arch architecture = Arch::toy_linear;
    std::string pretrain_corpus = "imagenet-1k";
    int num_classes = 2;
    // where <arch>.fx frozen-extractor files live; unused by toy_linear
    std::filesystem::path weights_dir;
};

// Frozen feature extractor behind the fine-tuning contract. Parameters
// are immutable; training only ever updates the head.
class FeatureExtractor {
public:
    virtual ~FeatureExtractor() = default;
    virtual std::string name() const = 0;
    virtual int feature_dim() const = 0;
    virtual PreprocessSpec preprocess() const = 0;
    virtual std::vector<double> extract(const Image& image) const = 0;
    // flat view of every frozen parameter; empty when there are none
    virtual std::span<const double> frozen_parameters() const = 0;
};

// Mean-RGB probe for desk-scale runs: three features, nothing frozen, no
// pretrained weights required.
std::unique_ptr<FeatureExtractor> make_toy_linear_extractor();

// Seeded random projection with a pretrained backbone's shapes and
// model-card preprocessing. Stands in for the real network wherever
// exported weights are not available (CI, tests).
struct StubExtractorSpec {
    std::string arch_name;
    std::uint64_t seed = 0;
    int feature_dim = 0;
    int input_side = 224;
    int pool_grid = 16;
    double mean[3] = {0, 0, 0};
    double stddev[3] = {1, 1, 1};
};

StubExtractorSpec default_stub_spec(Arch arch, std::uint64_t seed);
std::vector<std::uint8_t> serialize_extractor_file(const StubExtractorSpec& spec);
std::unique_ptr<FeatureExtractor> load_extractor_file(std::span<const std::uint8_t> bytes);

struct ParameterCensus {
    std::int64_t frozen_count = 0;
    std::int64_t trainable_count = 0;
};

// 2-logit linear head over backbone features; the only trainable part.
struct Head {
    int feature_dim = 0;
    std::vector<double> weights; // [class][feature]
    std::vector<double> bias;    // [class]

    void init_seeded(int dim, std::uint64_t seed);
    std::array<double, 2> logits(std::span<const double> features) const;
    int predict(std::span<const double> features) const; // argmax, ties to class 0
};

struct TrainableModel {
    std::shared_ptr<const FeatureExtractor> backbone;
    Head head;
    ParameterCensus census;
};

// Resolves the descriptor to a frozen backbone plus a fresh head. The
// pretrained architectures require <weights_dir>/<arch>.fx; the error
// message explains how to provide one.
TrainableModel prepare_backbone(const ModelBackendDescriptor& descriptor);

struct TrainConfig {
    int epochs = 20;
    std::uint64_t seed = 1;
    int batch_size = 32;
    double learning_rate = 1e-3;
    double momentum = 0.9;
    std::string optimizer_id = "sgd-momentum";
};

struct EpochMetrics {
    int epoch = 0; // 1-based
    double train_loss = 0;
    double train_error = 0;
    double val_error = 0;
    double val_accuracy = 0;
    double wall_seconds = 0;
};

struct CheckpointRef {
    int epoch = 0;
    std::filesystem::path path;
    double val_accuracy = 0;
};

using ImageLoader = std::function<std::optional<Image>(const std::string& asset_id)>;

struct FineTuneResult {
    std::vector<EpochMetrics> metrics;
    std::vector<CheckpointRef> checkpoints;
    std::vector<std::string> skipped_assets; // undecodable at feature time
};

// Seeded SGD-with-momentum over the head only. One checkpoint per epoch
// is written under <run_dir>/checkpoints/. Toy-backbone runs are
// bit-reproducible for equal seeds.
FineTuneResult fine_tune(TrainableModel& model, const std::vector<dataset::LabeledExample>& train_split,
                         const std::vector<dataset::LabeledExample>& val_split,
                         const ImageLoader& load_image, const TrainConfig& config,
                         const std::filesystem::path& run_dir);

// argmax validation accuracy, earliest epoch on ties
CheckpointRef select_best(const std::vector<EpochMetrics>& metrics,
                          const std::vector<CheckpointRef>& checkpoints);

// `epoch,train_error,val_error` rows for the error-vs-epoch plots
std::string export_curves(const std::vector<EpochMetrics>& metrics);

std::string serialize_metrics_csv(const std::vector<EpochMetrics>& metrics,
                                  const std::string& config_digest);
std::vector<EpochMetrics> parse_metrics_csv(const std::string& text);
std::string serialize_timing_csv(const std::vector<EpochMetrics>& metrics,
                                 const std::string& config_digest);

struct Checkpoint {
    std::string arch_name;
    Head head;
};

std::vector<std::uint8_t> serialize_checkpoint(const std::string& arch_name, const Head& head);
std::optional<Checkpoint> parse_checkpoint(std::span<const std::uint8_t> bytes);
Checkpoint load_checkpoint(const std::filesystem::path& path);

// Cross-entropy on 2-class logits plus its analytic head gradient; the
// gradient is what SGD consumes and what the finite-difference check in
// the tests differentiates against.
double cross_entropy(const Head& head, std::span<const double> features, int label);
void accumulate_gradient(const Head& head, std::span<const double> features, int label,
                         std::span<double> grad_weights, std::span<double> grad_bias);

} // namespace proedscan::training
