#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string_view>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>

#include "vrcmf/error.hpp"

namespace vrcmf {

/// A named, flat view of one parameter tensor. Weight containers expose
/// their tensors through `params()` in a fixed order so generic code
/// (optimizer steps, norms, finite-difference checks) can walk them.
template <typename T>
struct BasicParamView {
    std::string_view name;
    std::span<T> values;
};

using ParamView = BasicParamView<double>;
using ConstParamView = BasicParamView<const double>;

template <typename M>
auto flat(M& m) {
    using T = std::conditional_t<std::is_const_v<std::remove_reference_t<M>>, const double, double>;
    return std::span<T>(m.data(), static_cast<std::size_t>(m.size()));
}

template <typename W>
double squared_norm(const W& weights) {
    double s = 0.0;
    for (const auto& p : weights.params())
        for (double v : p.values) s += v * v;
    return s;
}

template <typename W>
bool all_finite(const W& weights) {
    for (const auto& p : weights.params())
        for (double v : p.values)
            if (!std::isfinite(v)) return false;
    return true;
}

/// dst += alpha * src; both must share a layout.
template <typename W>
void add_scaled(W& dst, double alpha, const W& src) {
    auto d = dst.params();
    auto s = src.params();
    if (d.size() != s.size()) throw Error("parameter layouts differ");
    for (std::size_t t = 0; t < d.size(); ++t) {
        if (d[t].values.size() != s[t].values.size()) throw Error("parameter layouts differ");
        for (std::size_t i = 0; i < d[t].values.size(); ++i) d[t].values[i] += alpha * s[t].values[i];
    }
}

template <typename W>
std::size_t parameter_count(const W& weights) {
    std::size_t n = 0;
    for (const auto& p : weights.params()) n += p.values.size();
    return n;
}

}  // namespace vrcmf
