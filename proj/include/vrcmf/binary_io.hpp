#pragma once

#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>

#include "vrcmf/error.hpp"

namespace vrcmf {

static_assert(std::endian::native == std::endian::little,
              "binary artifacts are little-endian");

class BinaryWriter {
public:
    explicit BinaryWriter(std::ostream& out) : out_(out) {}

    template <typename T>
        requires std::is_arithmetic_v<T>
    void write(T value) {
        out_.write(reinterpret_cast<const char*>(&value), sizeof(T));
    }

    void write_string(const std::string& s) {
        write<std::uint64_t>(s.size());
        out_.write(s.data(), static_cast<std::streamsize>(s.size()));
    }

    void write_matrix(const Eigen::MatrixXd& m) {
        write<std::uint64_t>(static_cast<std::uint64_t>(m.rows()));
        write<std::uint64_t>(static_cast<std::uint64_t>(m.cols()));
        out_.write(reinterpret_cast<const char*>(m.data()),
                   static_cast<std::streamsize>(sizeof(double) * m.size()));
    }

    void write_vector(const Eigen::VectorXd& v) {
        write<std::uint64_t>(static_cast<std::uint64_t>(v.size()));
        out_.write(reinterpret_cast<const char*>(v.data()),
                   static_cast<std::streamsize>(sizeof(double) * v.size()));
    }

private:
    std::ostream& out_;
};

class BinaryReader {
public:
    BinaryReader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

    template <typename T>
        requires std::is_arithmetic_v<T>
    T read() {
        T value{};
        in_.read(reinterpret_cast<char*>(&value), sizeof(T));
        check();
        return value;
    }

    std::string read_string() {
        auto size = read<std::uint64_t>();
        guard_size(size);
        std::string s(size, '\0');
        in_.read(s.data(), static_cast<std::streamsize>(size));
        check();
        return s;
    }

    Eigen::MatrixXd read_matrix() {
        auto rows = read<std::uint64_t>();
        auto cols = read<std::uint64_t>();
        guard_size(rows * cols);
        Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
        in_.read(reinterpret_cast<char*>(m.data()),
                 static_cast<std::streamsize>(sizeof(double) * m.size()));
        check();
        return m;
    }

    Eigen::VectorXd read_vector() {
        auto size = read<std::uint64_t>();
        guard_size(size);
        Eigen::VectorXd v(static_cast<Eigen::Index>(size));
        in_.read(reinterpret_cast<char*>(v.data()),
                 static_cast<std::streamsize>(sizeof(double) * v.size()));
        check();
        return v;
    }

private:
    void check() {
        if (!in_) throw ParseError(source_ + ": truncated binary data");
    }
    void guard_size(std::uint64_t n) {
        if (n > (std::uint64_t{1} << 34)) throw ParseError(source_ + ": implausible block size");
    }

    std::istream& in_;
    std::string source_;
};

}  // namespace vrcmf
