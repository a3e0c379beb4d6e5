#pragma once

#include <fstream>

#include "pqc/common.hpp"
#include "pqc/grid.hpp"

namespace pqc {

enum class TargetKind : uint8_t { SupervisedQ = 0, ExpertLabel = 1, TDTransition = 2 };

// One unit of supervision. Exactly one target kind applies:
//   SupervisedQ:  value = supervised q target for `action`
//   ExpertLabel:  action is the expert's label (value unused)
//   TDTransition: value = reward, next/terminal describe the transition;
//                 expert_action carries the label for margin/cross-entropy terms
struct Experience {
    long long scene_id = 0;
    Cell cell;
    uint8_t action = 0;
    TargetKind kind = TargetKind::SupervisedQ;
    double value = 0.0;
    Cell next;
    uint8_t terminal = 0;
    int8_t expert_action = -1;
    double priority = 0.0;
};

struct Dataset {
    std::vector<Experience> records;
    std::string scene_set_id;
    std::string generator_config;
};

// --- Dataset file: header with provenance, then fixed-width binary records ---

inline constexpr uint64_t kDatasetMagic = 0x4154414443515000ull;

inline void save_dataset(const Dataset& d, const std::string& path) {
    std::vector<std::uint8_t> buf;
    put_pod(buf, kDatasetMagic);
    put_pod(buf, static_cast<uint32_t>(1));
    auto put_str = [&](const std::string& s) {
        put_pod(buf, static_cast<uint32_t>(s.size()));
        put_bytes(buf, s.data(), s.size());
    };
    put_str(d.scene_set_id);
    put_str(d.generator_config);
    put_pod(buf, static_cast<uint64_t>(d.records.size()));
    for (const auto& e : d.records) {
        put_pod(buf, static_cast<int64_t>(e.scene_id));
        put_pod(buf, static_cast<int32_t>(e.cell.ix));
        put_pod(buf, static_cast<int32_t>(e.cell.iy));
        put_pod(buf, static_cast<int32_t>(e.cell.iz));
        put_pod(buf, e.action);
        put_pod(buf, static_cast<uint8_t>(e.kind));
        put_pod(buf, e.terminal);
        put_pod(buf, e.expert_action);
        put_pod(buf, e.value);
        put_pod(buf, static_cast<int32_t>(e.next.ix));
        put_pod(buf, static_cast<int32_t>(e.next.iy));
        put_pod(buf, static_cast<int32_t>(e.next.iz));
        put_pod(buf, e.priority);
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw FormatError("cannot open for write: " + path);
    f.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
}

inline Dataset load_dataset(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw FormatError("cannot open: " + path);
    std::vector<std::uint8_t> buf((std::istreambuf_iterator<char>(f)),
                                  std::istreambuf_iterator<char>());
    ByteReader r(buf);
    if (r.get<uint64_t>() != kDatasetMagic) throw FormatError("dataset: bad magic");
    if (r.get<uint32_t>() != 1) throw FormatError("dataset: unsupported version");
    Dataset d;
    auto get_str = [&] {
        uint32_t n = r.get<uint32_t>();
        std::string s(n, '\0');
        r.get_raw(s.data(), n);
        return s;
    };
    d.scene_set_id = get_str();
    d.generator_config = get_str();
    uint64_t n = r.get<uint64_t>();
    d.records.resize(n);
    for (auto& e : d.records) {
        e.scene_id = r.get<int64_t>();
        e.cell.ix = r.get<int32_t>();
        e.cell.iy = r.get<int32_t>();
        e.cell.iz = r.get<int32_t>();
        e.action = r.get<uint8_t>();
        e.kind = static_cast<TargetKind>(r.get<uint8_t>());
        e.terminal = r.get<uint8_t>();
        e.expert_action = r.get<int8_t>();
        e.value = r.get<double>();
        e.next.ix = r.get<int32_t>();
        e.next.iy = r.get<int32_t>();
        e.next.iz = r.get<int32_t>();
        e.priority = r.get<double>();
    }
    if (!r.exhausted()) throw FormatError("dataset: trailing bytes");
    return d;
}

}  // namespace pqc
