#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vrcmf/confidence.hpp"

namespace vrcmf {

/// The six model variants. ConvMF+ is ConvMF with confidence weighting.
enum class Variant { pmf, convmf, convmf_plus, rconvmf, vconvmf, vrconvmf };

Variant parse_variant(std::string_view name);
std::string_view to_string(Variant v);

enum class TextModel { none, cnn, rcnn };

TextModel text_model(Variant v);
bool uses_visual(Variant v);
/// True when the item prior comes from a trainable network.
bool learns_prior(Variant v);

struct TrainConfig {
    Variant variant = Variant::pmf;
    std::size_t k = 50;
    double lambda_u = 100.0;
    double lambda_v = 10.0;
    double lambda_w = 1e-4;

    bool confidence = false;
    ConfidenceParams confidence_params;

    std::size_t iterations = 30;
    std::size_t repeats = 5;
    std::uint64_t seed = 1;
    std::size_t threads = 1;

    // network optimizer
    double learning_rate = 0.05;
    std::size_t batch_size = 128;
    double dropout = 0.3;
    std::size_t network_epochs = 1;

    // text branch
    std::size_t embed_dim = 200;
    std::vector<std::size_t> cnn_windows{3, 4, 5};
    std::size_t cnn_maps = 100;
    std::size_t projection_hidden = 200;
    std::size_t rcnn_context_dim = 100;
    std::size_t rcnn_hidden = 100;
    std::size_t context_window = 1;
    /// Width of the text feature fed to the fusion head; 0 means k.
    std::size_t text_dim = 0;

    // text preprocessing and embedding pretraining
    std::size_t vocab_cap = 6000;
    std::size_t max_doc_length = 400;
    bool glove_warm_start = false;
    std::size_t glove_window = 50;
    std::size_t glove_epochs = 25;
    double glove_x_max = 100.0;
    double glove_beta = 0.75;
    double glove_learning_rate = 0.05;

    std::vector<int> visual_levels{2, 3, 4, 5};

    /// Clamp predictions to [1, r_max] when evaluating.
    bool clamp = false;

    /// Confidence weighting in effect (always on for ConvMF+).
    bool confidence_enabled() const { return confidence || variant == Variant::convmf_plus; }
    std::size_t effective_text_dim() const;

    /// Throws on inconsistent values.
    void validate() const;
};

/// Applies one `key = value` setting; unknown keys are an error.
void apply_setting(TrainConfig& config, std::string_view key, std::string_view value);

/// Reads `key = value` lines; `#` starts a comment.
void load_config(std::istream& in, TrainConfig& config, const std::string& source = "<config>");
void load_config(const std::string& path, TrainConfig& config);

/// Every setting in a stable order, suitable for apply_setting.
std::vector<std::pair<std::string, std::string>> config_settings(const TrainConfig& config);

}  // namespace vrcmf
