#include "vrcmf/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <istream>
#include <map>

#include "vrcmf/error.hpp"
#include "vrcmf/format.hpp"

namespace vrcmf {

namespace {

struct VariantName {
    Variant variant;
    std::string_view name;
};

constexpr VariantName kVariantNames[] = {
    {Variant::pmf, "PMF"},         {Variant::convmf, "ConvMF"},   {Variant::convmf_plus, "ConvMF+"},
    {Variant::rconvmf, "RConvMF"}, {Variant::vconvmf, "VConvMF"}, {Variant::vrconvmf, "VRConvMF"},
};

std::string lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return out;
}

double to_double(std::string_view key, std::string_view value) {
    auto v = parse_double(value);
    if (!v) throw Error("setting '" + std::string(key) + "' expects a number, got '" + std::string(value) + "'");
    return *v;
}

std::size_t to_count(std::string_view key, std::string_view value) {
    auto v = parse_int(value);
    if (!v || *v < 0)
        throw Error("setting '" + std::string(key) + "' expects a non-negative integer, got '" + std::string(value) + "'");
    return static_cast<std::size_t>(*v);
}

std::uint64_t to_seed(std::string_view key, std::string_view value) {
    value = trim(value);
    std::uint64_t v = 0;
    auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || end != value.data() + value.size() || value.empty())
        throw Error("setting '" + std::string(key) + "' expects an unsigned 64-bit integer, got '" + std::string(value) + "'");
    return v;
}

bool to_bool(std::string_view key, std::string_view value) {
    auto v = lower(trim(value));
    if (v == "1" || v == "true" || v == "on" || v == "yes") return true;
    if (v == "0" || v == "false" || v == "off" || v == "no") return false;
    throw Error("setting '" + std::string(key) + "' expects on/off, got '" + std::string(value) + "'");
}

template <typename T, typename Parse>
std::vector<T> to_list(std::string_view value, Parse parse) {
    std::vector<T> out;
    for (auto part : split(value, ",")) {
        part = trim(part);
        if (!part.empty()) out.push_back(parse(part));
    }
    return out;
}

template <typename T>
std::string join(const std::vector<T>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(values[i]);
    }
    return out;
}

using Setter = std::function<void(TrainConfig&, std::string_view, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& setters() {
    static const std::map<std::string, Setter, std::less<>> table = {
        {"variant", [](TrainConfig& c, auto, auto v) { c.variant = parse_variant(v); }},
        {"k", [](TrainConfig& c, auto k, auto v) { c.k = to_count(k, v); }},
        {"lambda_u", [](TrainConfig& c, auto k, auto v) { c.lambda_u = to_double(k, v); }},
        {"lambda_v", [](TrainConfig& c, auto k, auto v) { c.lambda_v = to_double(k, v); }},
        {"lambda_w", [](TrainConfig& c, auto k, auto v) { c.lambda_w = to_double(k, v); }},
        {"confidence", [](TrainConfig& c, auto k, auto v) { c.confidence = to_bool(k, v); }},
        {"alpha", [](TrainConfig& c, auto k, auto v) { c.confidence_params.alpha = to_double(k, v); }},
        {"distance", [](TrainConfig& c, auto, auto v) { c.confidence_params.distance = parse_distance(v); }},
        {"r_max", [](TrainConfig& c, auto k, auto v) { c.confidence_params.r_max = to_double(k, v); }},
        {"iterations", [](TrainConfig& c, auto k, auto v) { c.iterations = to_count(k, v); }},
        {"repeats", [](TrainConfig& c, auto k, auto v) { c.repeats = to_count(k, v); }},
        {"seed", [](TrainConfig& c, auto k, auto v) { c.seed = to_seed(k, v); }},
        {"threads", [](TrainConfig& c, auto k, auto v) { c.threads = to_count(k, v); }},
        {"learning_rate", [](TrainConfig& c, auto k, auto v) { c.learning_rate = to_double(k, v); }},
        {"batch_size", [](TrainConfig& c, auto k, auto v) { c.batch_size = to_count(k, v); }},
        {"dropout", [](TrainConfig& c, auto k, auto v) { c.dropout = to_double(k, v); }},
        {"network_epochs", [](TrainConfig& c, auto k, auto v) { c.network_epochs = to_count(k, v); }},
        {"embed_dim", [](TrainConfig& c, auto k, auto v) { c.embed_dim = to_count(k, v); }},
        {"cnn_windows", [](TrainConfig& c, auto k, auto v) {
             c.cnn_windows = to_list<std::size_t>(v, [&](std::string_view p) { return to_count(k, p); });
         }},
        {"cnn_maps", [](TrainConfig& c, auto k, auto v) { c.cnn_maps = to_count(k, v); }},
        {"projection_hidden", [](TrainConfig& c, auto k, auto v) { c.projection_hidden = to_count(k, v); }},
        {"rcnn_context_dim", [](TrainConfig& c, auto k, auto v) { c.rcnn_context_dim = to_count(k, v); }},
        {"rcnn_hidden", [](TrainConfig& c, auto k, auto v) { c.rcnn_hidden = to_count(k, v); }},
        {"context_window", [](TrainConfig& c, auto k, auto v) { c.context_window = to_count(k, v); }},
        {"text_dim", [](TrainConfig& c, auto k, auto v) { c.text_dim = to_count(k, v); }},
        {"vocab_cap", [](TrainConfig& c, auto k, auto v) { c.vocab_cap = to_count(k, v); }},
        {"max_doc_length", [](TrainConfig& c, auto k, auto v) { c.max_doc_length = to_count(k, v); }},
        {"glove_warm_start", [](TrainConfig& c, auto k, auto v) { c.glove_warm_start = to_bool(k, v); }},
        {"glove_window", [](TrainConfig& c, auto k, auto v) { c.glove_window = to_count(k, v); }},
        {"glove_epochs", [](TrainConfig& c, auto k, auto v) { c.glove_epochs = to_count(k, v); }},
        {"glove_x_max", [](TrainConfig& c, auto k, auto v) { c.glove_x_max = to_double(k, v); }},
        {"glove_beta", [](TrainConfig& c, auto k, auto v) { c.glove_beta = to_double(k, v); }},
        {"glove_learning_rate", [](TrainConfig& c, auto k, auto v) { c.glove_learning_rate = to_double(k, v); }},
        {"visual_levels", [](TrainConfig& c, auto k, auto v) {
             c.visual_levels = to_list<int>(v, [&](std::string_view p) { return static_cast<int>(to_count(k, p)); });
         }},
        {"clamp", [](TrainConfig& c, auto k, auto v) { c.clamp = to_bool(k, v); }},
    };
    return table;
}

}  // namespace

Variant parse_variant(std::string_view name) {
    auto key = lower(trim(name));
    for (const auto& v : kVariantNames)
        if (lower(v.name) == key) return v.variant;
    if (key == "convmf-plus" || key == "convmf_plus") return Variant::convmf_plus;
    throw Error("unknown model variant '" + std::string(name) +
                "' (expected PMF, ConvMF, ConvMF+, RConvMF, VConvMF or VRConvMF)");
}

std::string_view to_string(Variant v) {
    for (const auto& n : kVariantNames)
        if (n.variant == v) return n.name;
    return "PMF";
}

TextModel text_model(Variant v) {
    switch (v) {
        case Variant::convmf:
        case Variant::convmf_plus:
        case Variant::vconvmf: return TextModel::cnn;
        case Variant::rconvmf:
        case Variant::vrconvmf: return TextModel::rcnn;
        case Variant::pmf: return TextModel::none;
    }
    return TextModel::none;
}

bool uses_visual(Variant v) { return v == Variant::vconvmf || v == Variant::vrconvmf; }

bool learns_prior(Variant v) { return v != Variant::pmf; }

std::size_t TrainConfig::effective_text_dim() const { return text_dim == 0 ? k : text_dim; }

void TrainConfig::validate() const {
    if (k < 1) throw Error("k must be >= 1");
    if (!(lambda_u > 0.0) || !(lambda_v > 0.0) || !(lambda_w > 0.0)) throw Error("lambda values must be > 0");
    if (iterations < 1) throw Error("iterations >= 1 required");
    if (repeats < 1) throw Error("repeats >= 1 required");
    if (confidence_params.alpha < 0.0) throw Error("alpha must be >= 0");
    if (!(confidence_params.r_max > 0.0)) throw Error("r_max must be > 0");
    if (batch_size < 1) throw Error("batch_size must be >= 1");
    if (!(dropout >= 0.0 && dropout < 1.0)) throw Error("dropout must be in [0, 1)");
    if (!(learning_rate > 0.0)) throw Error("learning_rate must be > 0");
    if (context_window < 1 || context_window % 2 == 0) throw Error("context_window must be odd and >= 1");
    if (context_window > 19) throw Error("context_window must be <= 19");
    if (cnn_windows.empty()) throw Error("cnn_windows must not be empty");
    if (visual_levels.empty() && uses_visual(variant)) throw Error("visual_levels must not be empty");
}

void apply_setting(TrainConfig& config, std::string_view key, std::string_view value) {
    key = trim(key);
    value = trim(value);
    auto it = setters().find(key);
    if (it == setters().end()) throw Error("unknown setting '" + std::string(key) + "'");
    it->second(config, key, value);
}

void load_config(std::istream& in, TrainConfig& config, const std::string& source) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view(line);
        if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
        view = trim(view);
        if (view.empty()) continue;
        auto eq = view.find('=');
        if (eq == std::string_view::npos) throw ParseError(source, line_no, "expected key = value");
        try {
            apply_setting(config, view.substr(0, eq), view.substr(eq + 1));
        } catch (const ParseError&) {
            throw;
        } catch (const Error& e) {
            throw ParseError(source, line_no, e.what());
        }
    }
}

void load_config(const std::string& path, TrainConfig& config) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config file '" + path + "'");
    load_config(in, config, path);
}

std::vector<std::pair<std::string, std::string>> config_settings(const TrainConfig& c) {
    auto b = [](bool v) { return std::string(v ? "on" : "off"); };
    auto d = [](double v) { return format_roundtrip(v); };
    return {
        {"variant", std::string(to_string(c.variant))},
        {"k", std::to_string(c.k)},
        {"lambda_u", d(c.lambda_u)},
        {"lambda_v", d(c.lambda_v)},
        {"lambda_w", d(c.lambda_w)},
        {"confidence", b(c.confidence)},
        {"alpha", d(c.confidence_params.alpha)},
        {"distance", std::string(to_string(c.confidence_params.distance))},
        {"r_max", d(c.confidence_params.r_max)},
        {"iterations", std::to_string(c.iterations)},
        {"repeats", std::to_string(c.repeats)},
        {"seed", std::to_string(c.seed)},
        {"threads", std::to_string(c.threads)},
        {"learning_rate", d(c.learning_rate)},
        {"batch_size", std::to_string(c.batch_size)},
        {"dropout", d(c.dropout)},
        {"network_epochs", std::to_string(c.network_epochs)},
        {"embed_dim", std::to_string(c.embed_dim)},
        {"cnn_windows", join(c.cnn_windows)},
        {"cnn_maps", std::to_string(c.cnn_maps)},
        {"projection_hidden", std::to_string(c.projection_hidden)},
        {"rcnn_context_dim", std::to_string(c.rcnn_context_dim)},
        {"rcnn_hidden", std::to_string(c.rcnn_hidden)},
        {"context_window", std::to_string(c.context_window)},
        {"text_dim", std::to_string(c.text_dim)},
        {"vocab_cap", std::to_string(c.vocab_cap)},
        {"max_doc_length", std::to_string(c.max_doc_length)},
        {"glove_warm_start", b(c.glove_warm_start)},
        {"glove_window", std::to_string(c.glove_window)},
        {"glove_epochs", std::to_string(c.glove_epochs)},
        {"glove_x_max", d(c.glove_x_max)},
        {"glove_beta", d(c.glove_beta)},
        {"glove_learning_rate", d(c.glove_learning_rate)},
        {"visual_levels", join(c.visual_levels)},
        {"clamp", b(c.clamp)},
    };
}

}  // namespace vrcmf
