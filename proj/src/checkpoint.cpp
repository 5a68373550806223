// Copyright 2026 The dcai-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include "dcai/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <type_traits>

#include "json.hpp"
#include <zlib.h>

namespace dcai {
namespace {

constexpr std::uint8_t kMagic[4] = {'D', 'C', 'A', 'I'};
constexpr std::size_t kHeaderSize = 4 + 2 + 1 + 8;

enum class KindCode : std::uint8_t { perceptron = 1, naive_bayes = 2, nearest_centroid = 3, sparse_nearest_centroid = 4 };

class ByteWriter {
public:
    template <typename T>
        requires std::is_integral_v<T>
    void put(T value) {
        auto u = static_cast<std::make_unsigned_t<T>>(value);
        for (std::size_t i = 0; i < sizeof(T); ++i) {
            bytes_.push_back(static_cast<std::uint8_t>(u & 0xFFu));
            if constexpr (sizeof(T) > 1) u >>= 8;
        }
    }
    void put_double(double value) { put(std::bit_cast<std::uint64_t>(value)); }

    template <typename Derived>
    void put_doubles(const Eigen::DenseBase<Derived>& v) {
        for (Eigen::Index i = 0; i < v.size(); ++i) put_double(v.derived().coeff(i));
    }
    template <typename Derived>
    void put_ints(const Eigen::DenseBase<Derived>& v) {
        for (Eigen::Index i = 0; i < v.size(); ++i) put<std::int64_t>(v.derived().coeff(i));
    }

    std::vector<std::uint8_t>& bytes() { return bytes_; }

private:
    std::vector<std::uint8_t> bytes_;
};

class ByteReader {
public:
    explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    template <typename T>
        requires std::is_integral_v<T>
    T get() {
        if (bytes_.size() - pos_ < sizeof(T)) throw CheckpointError("checkpoint truncated");
        std::make_unsigned_t<T> u = 0;
        for (std::size_t i = 0; i < sizeof(T); ++i)
            u |= static_cast<std::make_unsigned_t<T>>(bytes_[pos_ + i]) << (8 * i);
        pos_ += sizeof(T);
        return static_cast<T>(u);
    }
    double get_double() { return std::bit_cast<double>(get<std::uint64_t>()); }

    std::size_t dimension() {
        const auto d = get<std::uint64_t>();
        // Every coordinate takes at least 8 bytes, so this bounds allocation on corrupt input.
        if (d == 0 || d > remaining() / 8 + 1) throw CheckpointError("checkpoint dimension out of range");
        return static_cast<std::size_t>(d);
    }

    void get_doubles(Eigen::VectorXd& v) {
        for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = get_double();
    }
    template <typename Derived>
    void get_ints(Eigen::DenseBase<Derived>& v) {
        for (Eigen::Index i = 0; i < v.size(); ++i) v.derived().coeffRef(i) = get<std::int64_t>();
    }

    std::size_t remaining() const { return bytes_.size() - pos_; }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

std::uint32_t checksum(std::span<const std::uint8_t> bytes) {
    return static_cast<std::uint32_t>(
        crc32(crc32(0L, Z_NULL, 0), bytes.data(), static_cast<uInt>(bytes.size())));
}

void write_payload(ByteWriter& w, const PerceptronModel& m) {
    w.put<std::uint8_t>(static_cast<std::uint8_t>(m.layout));
    w.put<std::uint64_t>(m.dimension());
    w.put_double(m.learning_rate);
    w.put_double(m.bias);
    w.put_doubles(m.weights);
}

void write_payload(ByteWriter& w, const NaiveBayesModel& m) {
    w.put<std::uint64_t>(m.dimension());
    w.put_double(m.smoothing);
    for (int c = 0; c < 2; ++c) {
        w.put<std::int64_t>(m.class_counts[c]);
        w.put<std::int64_t>(m.total_feature_counts[c]);
        w.put_ints(m.feature_counts.row(c));
    }
}

void write_payload(ByteWriter& w, const NearestCentroidModel& m) {
    w.put<std::uint64_t>(m.dimension());
    for (int c = 0; c < 2; ++c) {
        w.put<std::int64_t>(m.class_sample_counts[c]);
        w.put_doubles(m.centroids[c]);
    }
}

void write_payload(ByteWriter& w, const SparseNearestCentroidModel& m) {
    w.put<std::uint64_t>(m.dimension());
    for (int c = 0; c < 2; ++c) {
        w.put<std::int64_t>(m.class_sample_counts[c]);
        w.put_double(m.squared_magnitudes[c]);
        w.put_doubles(m.values[c]);
        w.put_ints(m.denominators[c]);
    }
}

KindCode code_of(const Model& model) {
    switch (model.index()) {
        case 0: return KindCode::perceptron;
        case 1: return KindCode::naive_bayes;
        case 2: return KindCode::nearest_centroid;
        default: return KindCode::sparse_nearest_centroid;
    }
}

std::int64_t non_negative(std::int64_t v) {
    if (v < 0) throw CheckpointError("negative count in checkpoint");
    return v;
}

Model read_payload(KindCode code, ByteReader& r) {
    switch (code) {
        case KindCode::perceptron: {
            const auto layout = r.get<std::uint8_t>();
            if (layout > 1) throw CheckpointError("bad layout in checkpoint");
            const auto d = r.dimension();
            const double lr = r.get_double();
            if (!(lr > 0.0)) throw CheckpointError("bad learning rate in checkpoint");
            PerceptronModel m(d, lr, static_cast<Layout>(layout));
            m.bias = r.get_double();
            r.get_doubles(m.weights);
            return m;
        }
        case KindCode::naive_bayes: {
            const auto d = r.dimension();
            const double alpha = r.get_double();
            if (!(alpha > 0.0)) throw CheckpointError("bad smoothing in checkpoint");
            NaiveBayesModel m(d, alpha);
            for (int c = 0; c < 2; ++c) {
                m.class_counts[c] = non_negative(r.get<std::int64_t>());
                m.total_feature_counts[c] = non_negative(r.get<std::int64_t>());
                auto row = m.feature_counts.row(c);
                r.get_ints(row);
            }
            return m;
        }
        case KindCode::nearest_centroid: {
            NearestCentroidModel m(r.dimension());
            for (int c = 0; c < 2; ++c) {
                m.class_sample_counts[c] = non_negative(r.get<std::int64_t>());
                r.get_doubles(m.centroids[c]);
            }
            return m;
        }
        case KindCode::sparse_nearest_centroid: {
            SparseNearestCentroidModel m(r.dimension());
            for (int c = 0; c < 2; ++c) {
                m.class_sample_counts[c] = non_negative(r.get<std::int64_t>());
                m.squared_magnitudes[c] = r.get_double();
                r.get_doubles(m.values[c]);
                r.get_ints(m.denominators[c]);
            }
            return m;
        }
    }
    throw CheckpointError("unknown model kind in checkpoint");
}

template <typename Derived>
nlohmann::json to_array(const Eigen::DenseBase<Derived>& v) {
    auto out = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v.derived().coeff(i));
    return out;
}

}  // namespace

ModelCheckpoint snapshot(const Model& model) {
    ByteWriter payload;
    std::visit([&](const auto& m) { write_payload(payload, m); }, model);

    ByteWriter out;
    for (auto b : kMagic) out.put<std::uint8_t>(b);
    out.put<std::uint16_t>(kCheckpointVersion);
    out.put<std::uint8_t>(static_cast<std::uint8_t>(code_of(model)));
    out.put<std::uint64_t>(payload.bytes().size());
    auto& bytes = out.bytes();
    bytes.insert(bytes.end(), payload.bytes().begin(), payload.bytes().end());
    out.put<std::uint32_t>(checksum(payload.bytes()));
    return std::move(bytes);
}

Model restore(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < kHeaderSize + 4) throw CheckpointError("checkpoint truncated");
    if (std::memcmp(bytes.data(), kMagic, 4) != 0) throw CheckpointError("bad checkpoint magic");
    ByteReader header(bytes.subspan(4, kHeaderSize - 4));
    const auto version = header.get<std::uint16_t>();
    if (version != kCheckpointVersion) throw CheckpointError("unsupported checkpoint version " + std::to_string(version));
    const auto code = header.get<std::uint8_t>();
    if (code < 1 || code > 4) throw CheckpointError("unknown model kind in checkpoint");
    const auto length = header.get<std::uint64_t>();
    if (length != bytes.size() - kHeaderSize - 4) throw CheckpointError("checkpoint length mismatch");

    const auto payload = bytes.subspan(kHeaderSize, static_cast<std::size_t>(length));
    ByteReader trailer(bytes.subspan(kHeaderSize + static_cast<std::size_t>(length)));
    if (trailer.get<std::uint32_t>() != checksum(payload)) throw CheckpointError("checkpoint checksum mismatch");

    ByteReader r(payload);
    Model model = read_payload(static_cast<KindCode>(code), r);
    if (r.remaining() != 0) throw CheckpointError("trailing bytes in checkpoint payload");
    return model;
}

std::string to_text(const Model& model) {
    nlohmann::json j;
    const auto spec = spec_of(model);
    j["kind"] = to_string(spec.kind);
    j["layout"] = to_string(spec.layout);
    j["dimension"] = spec.dimension;
    if (const auto* p = std::get_if<PerceptronModel>(&model)) {
        j["learning_rate"] = p->learning_rate;
        j["bias"] = p->bias;
        j["weights"] = to_array(p->weights);
    } else if (const auto* nb = std::get_if<NaiveBayesModel>(&model)) {
        j["smoothing"] = nb->smoothing;
        j["class_counts"] = nb->class_counts;
        j["total_feature_counts"] = nb->total_feature_counts;
        j["feature_counts"] = {to_array(nb->feature_counts.row(0)), to_array(nb->feature_counts.row(1))};
    } else if (const auto* ncc = std::get_if<NearestCentroidModel>(&model)) {
        j["class_sample_counts"] = ncc->class_sample_counts;
        j["centroids"] = {to_array(ncc->centroids[0]), to_array(ncc->centroids[1])};
    } else if (const auto* s = std::get_if<SparseNearestCentroidModel>(&model)) {
        j["class_sample_counts"] = s->class_sample_counts;
        j["squared_magnitudes"] = s->squared_magnitudes;
        j["values"] = {to_array(s->values[0]), to_array(s->values[1])};
        j["denominators"] = {to_array(s->denominators[0]), to_array(s->denominators[1])};
    }
    return j.dump(2);
}

}  // namespace dcai
