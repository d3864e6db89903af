#include "vrcmf/model_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "vrcmf/binary_io.hpp"
#include "vrcmf/error.hpp"
#include "vrcmf/metrics.hpp"

namespace vrcmf {

namespace {
constexpr std::string_view kMagic = "vrcmf-model";
constexpr int kVersion = 1;

void write_ids(BinaryWriter& w, const IdMap& ids) {
    w.write<std::uint64_t>(ids.size());
    for (const auto& id : ids.ids()) w.write_string(id);
}

IdMap read_ids(BinaryReader& r) {
    IdMap ids;
    const auto count = r.read<std::uint64_t>();
    for (std::uint64_t i = 0; i < count; ++i) ids.add(r.read_string());
    if (ids.size() != count) throw ParseError("model artifact has duplicate identifiers");
    return ids;
}
}  // namespace

std::size_t ModelArtifact::user_index(const std::string& id) const {
    auto idx = users.find(id);
    if (!idx) throw Error("unknown user id '" + id + "'");
    return *idx;
}

std::size_t ModelArtifact::item_index(const std::string& id) const {
    auto idx = items.find(id);
    if (!idx) throw Error("unknown item id '" + id + "'");
    return *idx;
}

double ModelArtifact::predict(const std::string& user, const std::string& item, bool clamp) const {
    return vrcmf::predict(factors, user_index(user), item_index(item), clamp, config.confidence_params.r_max);
}

void save_model(std::ostream& out, const ModelArtifact& model) {
    out << kMagic << ' ' << kVersion << '\n';
    BinaryWriter w(out);
    const auto settings = config_settings(model.config);
    w.write<std::uint64_t>(settings.size());
    for (const auto& [key, value] : settings) {
        w.write_string(key);
        w.write_string(value);
    }
    w.write<std::uint64_t>(model.vocab_size);
    w.write<std::uint64_t>(model.visual_dim);
    w.write<std::uint64_t>(model.best_iteration);
    write_ids(w, model.users);
    write_ids(w, model.items);
    w.write_matrix(model.factors.users);
    w.write_matrix(model.factors.items);
    const auto params = model.network.params();
    w.write<std::uint64_t>(params.size());
    for (const auto& p : params) {
        w.write_string(std::string(p.name));
        w.write_vector(Eigen::Map<const Eigen::VectorXd>(p.values.data(), static_cast<Eigen::Index>(p.values.size())));
    }
    if (!out) throw Error("failed writing model artifact");
}

ModelArtifact load_model(std::istream& in, const std::string& source) {
    std::string magic;
    int version = 0;
    in >> magic >> version;
    if (!in || magic != kMagic) throw ParseError(source + ": not a model artifact");
    if (version != kVersion)
        throw ParseError(source + ": unsupported model version " + std::to_string(version));
    if (in.get() != '\n') throw ParseError(source + ": malformed model header");

    BinaryReader r(in, source);
    ModelArtifact m;
    const auto count = r.read<std::uint64_t>();
    for (std::uint64_t i = 0; i < count; ++i) {
        auto key = r.read_string();
        auto value = r.read_string();
        apply_setting(m.config, key, value);
    }
    m.vocab_size = r.read<std::uint64_t>();
    m.visual_dim = r.read<std::uint64_t>();
    m.best_iteration = r.read<std::uint64_t>();
    m.users = read_ids(r);
    m.items = read_ids(r);
    m.factors.users = r.read_matrix();
    m.factors.items = r.read_matrix();
    const auto k = static_cast<Eigen::Index>(m.config.k);
    if (m.factors.users.rows() != k || m.factors.items.rows() != k ||
        m.factors.users.cols() != static_cast<Eigen::Index>(m.users.size()) ||
        m.factors.items.cols() != static_cast<Eigen::Index>(m.items.size()))
        throw ParseError(source + ": factor shapes do not match the stored configuration");

    if (learns_prior(m.config.variant)) {
        m.network = PriorNetwork::zeros(m.config, {m.config.variant, m.config.k, m.vocab_size, m.visual_dim});
    } else {
        m.network.variant = m.config.variant;
    }
    auto params = m.network.params();
    if (r.read<std::uint64_t>() != params.size()) throw ParseError(source + ": network layout mismatch");
    for (auto& p : params) {
        auto name = r.read_string();
        auto values = r.read_vector();
        if (name != p.name || static_cast<std::size_t>(values.size()) != p.values.size())
            throw ParseError(source + ": network tensor '" + name + "' does not match the stored configuration");
        std::copy(values.data(), values.data() + values.size(), p.values.begin());
    }
    return m;
}

void save_model(const std::string& path, const ModelArtifact& model) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write model artifact '" + path + "'");
    save_model(out, model);
}

ModelArtifact load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open model artifact '" + path + "'");
    return load_model(in, path);
}

}  // namespace vrcmf
