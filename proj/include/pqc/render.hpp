#pragma once

#include <cstdint>
#include <fstream>

#include "pqc/env.hpp"
#include "pqc/scene.hpp"

namespace pqc {

struct RenderConfig {
    int window_half_cells = 8;  // window spans (2k+1) x (2k+1) cells
    int width = 32;
    int height = 32;
    int band_rows = 2;            // rows of channel 1 carrying the height band
    double depth_min = -0.02;     // hole bottoms
    double depth_max = 0.12;      // above the tallest grid
    double dropout_prob = 0.0;    // optional pixel-dropout noise, off by default

    int channels() const { return 2; }
    int obs_size() const { return channels() * height * width; }

    uint64_t fingerprint(const GridSpec& g) const {
        std::string key = "render1|" + std::to_string(window_half_cells) + "|" +
                          std::to_string(width) + "x" + std::to_string(height) + "|" +
                          std::to_string(band_rows) + "|" + fmt_g9(depth_min) + "|" +
                          fmt_g9(depth_max) + "|" + fmt_g9(dropout_prob) + "|" +
                          std::to_string(g.nx) + "," + std::to_string(g.ny) + "," +
                          std::to_string(g.nz) + "," + fmt_g9(g.cell_size);
        return fnv1a(key);
    }
};

// Egocentric depth observation, values in [0, 1]. Channel 0 is the scene under
// an orthographic top-down camera; channel 1 carries the grasped-object
// cross-section plus a constant band encoding the gripper height.
struct Observation {
    int channels = 2, height = 32, width = 32;
    std::vector<float> data;

    float at(int c, int y, int x) const {
        return data[static_cast<size_t>((c * height + y) * width + x)];
    }
    float& at(int c, int y, int x) {
        return data[static_cast<size_t>((c * height + y) * width + x)];
    }
};

inline Observation render(const Scene& scene, const Cell& s, const RenderConfig& cfg) {
    if (!scene.grid.in_bounds(s)) throw InvalidState("render: cell out of bounds");
    const GridSpec& g = scene.grid;
    Observation obs;
    obs.channels = cfg.channels();
    obs.height = cfg.height;
    obs.width = cfg.width;
    obs.data.assign(static_cast<size_t>(cfg.obs_size()), 0.0f);

    const Vec3 c = g.cell_center(s);
    const Vec3 ext = g.extent();
    const double span = (2 * cfg.window_half_cells + 1) * g.cell_size;
    const double range = cfg.depth_max - cfg.depth_min;
    auto depth_value = [&](double z_top) {
        double n = (z_top - cfg.depth_min) / range;
        return static_cast<float>(1.0 - std::clamp(n, 0.0, 1.0));
    };

    const double hole_r2 = scene.task == TaskKind::PegInsertion
                               ? scene.peg.hole_diameter * scene.peg.hole_diameter / 4
                               : 0.0;

    for (int row = 0; row < cfg.height; ++row) {
        double wy = c.y + ((row + 0.5) / cfg.height - 0.5) * span;
        for (int col = 0; col < cfg.width; ++col) {
            double wx = c.x + ((col + 0.5) / cfg.width - 0.5) * span;
            if (wx < 0 || wx > ext.x || wy < 0 || wy > ext.y) continue;  // out of bounds: 0
            double z_top = 0.0;  // floor
            if (scene.task == TaskKind::PegInsertion) {
                double dx = wx - scene.peg.hole_x, dy = wy - scene.peg.hole_y;
                if (dx * dx + dy * dy <= hole_r2) z_top = -scene.peg.hole_depth;
            }
            scene.for_each_box([&](const Box& b) {
                if (b.contains_xy(wx, wy)) z_top = std::max(z_top, b.top());
            });
            obs.at(0, row, col) = depth_value(z_top);
        }
    }

    // grasped-object cross-section at the gripper's current height
    const float foot_value = depth_value(c.z);
    const double fx = c.x + (scene.task == TaskKind::PegInsertion ? scene.peg.offset_x
                                                                  : scene.blocks.offset_x);
    const double fy = c.y + (scene.task == TaskKind::PegInsertion ? scene.peg.offset_y
                                                                  : scene.blocks.offset_y);
    for (int row = 0; row < cfg.height; ++row) {
        double wy = c.y + ((row + 0.5) / cfg.height - 0.5) * span;
        for (int col = 0; col < cfg.width; ++col) {
            double wx = c.x + ((col + 0.5) / cfg.width - 0.5) * span;
            bool inside;
            if (scene.task == TaskKind::PegInsertion) {
                double dx = wx - fx, dy = wy - fy;
                inside = dx * dx + dy * dy <= scene.peg.peg_diameter * scene.peg.peg_diameter / 4;
            } else {
                inside = std::abs(wx - fx) <= scene.blocks.grasped_size.x / 2 &&
                         std::abs(wy - fy) <= scene.blocks.grasped_size.y / 2;
            }
            if (inside) obs.at(1, row, col) = foot_value;
        }
    }

    // gripper-height band: orthographic projection loses z, restore it explicitly
    const float band = static_cast<float>((s.iz + 0.5) / g.nz);
    for (int row = 0; row < std::min(cfg.band_rows, cfg.height); ++row)
        for (int col = 0; col < cfg.width; ++col) obs.at(1, row, col) = band;

    if (cfg.dropout_prob > 0.0) {
        for (int i = 0; i < cfg.height * cfg.width; ++i) {
            uint64_t h = mix_seed(static_cast<uint64_t>(scene.id),
                                  static_cast<uint64_t>(g.index(s)), static_cast<uint64_t>(i));
            if (static_cast<double>(h >> 11) * 0x1.0p-53 < cfg.dropout_prob)
                obs.data[static_cast<size_t>(i)] = 0.0f;
        }
    }
    return obs;
}

// Dense per-scene observation store; lookups are bit-identical to fresh renders.
struct ObservationCache {
    long long scene_id = 0;
    GridSpec grid;
    RenderConfig cfg;
    uint64_t fp = 0;
    std::vector<float> data;  // n_cells * obs_size, in cell-index order

    const float* lookup_ptr(const Cell& c) const {
        return data.data() + static_cast<size_t>(grid.index(c)) * cfg.obs_size();
    }

    Observation lookup(const Cell& c) const {
        Observation o;
        o.channels = cfg.channels();
        o.height = cfg.height;
        o.width = cfg.width;
        const float* p = lookup_ptr(c);
        o.data.assign(p, p + cfg.obs_size());
        return o;
    }
};

inline ObservationCache build_cache(const Scene& scene, const RenderConfig& cfg) {
    ObservationCache cache;
    cache.scene_id = scene.id;
    cache.grid = scene.grid;
    cache.cfg = cfg;
    cache.fp = cfg.fingerprint(scene.grid);
    cache.data.resize(static_cast<size_t>(scene.grid.n_cells()) * cfg.obs_size());
    for (long long i = 0; i < scene.grid.n_cells(); ++i) {
        Observation o = render(scene, scene.grid.cell_at(i), cfg);
        std::copy(o.data.begin(), o.data.end(),
                  cache.data.begin() + static_cast<size_t>(i) * cfg.obs_size());
    }
    return cache;
}

// --- Cache file format: header (magic, version, scene id, dims, fingerprint)
// --- followed by a row-major 32-bit float payload.

inline constexpr uint64_t kCacheMagic = 0x4548434143435150ull;  // "PQCCACHE"

inline void save_cache(const ObservationCache& cache, const std::string& path) {
    std::vector<std::uint8_t> buf;
    put_pod(buf, kCacheMagic);
    put_pod(buf, static_cast<uint32_t>(1));
    put_pod(buf, static_cast<int64_t>(cache.scene_id));
    put_pod(buf, static_cast<int32_t>(cache.grid.nx));
    put_pod(buf, static_cast<int32_t>(cache.grid.ny));
    put_pod(buf, static_cast<int32_t>(cache.grid.nz));
    put_pod(buf, cache.grid.cell_size);
    put_pod(buf, static_cast<int32_t>(cache.cfg.channels()));
    put_pod(buf, static_cast<int32_t>(cache.cfg.height));
    put_pod(buf, static_cast<int32_t>(cache.cfg.width));
    put_pod(buf, cache.fp);
    put_pod(buf, static_cast<uint64_t>(cache.data.size()));
    put_bytes(buf, cache.data.data(), cache.data.size() * sizeof(float));
    std::ofstream f(path, std::ios::binary);
    if (!f) throw FormatError("cannot open for write: " + path);
    f.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
}

inline ObservationCache load_cache(const std::string& path, const Scene& scene,
                                   const RenderConfig& cfg) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw FormatError("cannot open: " + path);
    std::vector<std::uint8_t> buf((std::istreambuf_iterator<char>(f)),
                                  std::istreambuf_iterator<char>());
    ByteReader r(buf);
    if (r.get<uint64_t>() != kCacheMagic) throw FormatError("cache: bad magic");
    if (r.get<uint32_t>() != 1) throw FormatError("cache: unsupported version");
    ObservationCache cache;
    cache.scene_id = r.get<int64_t>();
    cache.grid.nx = r.get<int32_t>();
    cache.grid.ny = r.get<int32_t>();
    cache.grid.nz = r.get<int32_t>();
    cache.grid.cell_size = r.get<double>();
    int32_t ch = r.get<int32_t>(), hh = r.get<int32_t>(), ww = r.get<int32_t>();
    cache.fp = r.get<uint64_t>();
    cache.cfg = cfg;
    uint64_t n = r.get<uint64_t>();
    if (cache.scene_id != scene.id) throw FormatError("cache: scene id mismatch");
    if (cache.fp != cfg.fingerprint(scene.grid))
        throw FormatError("cache: render-config fingerprint mismatch");
    if (ch != cfg.channels() || hh != cfg.height || ww != cfg.width)
        throw FormatError("cache: dimension mismatch");
    if (n != static_cast<uint64_t>(scene.grid.n_cells()) * cfg.obs_size())
        throw FormatError("cache: payload size mismatch");
    cache.data.resize(n);
    r.get_raw(cache.data.data(), n * sizeof(float));
    if (!r.exhausted()) throw FormatError("cache: trailing bytes");
    return cache;
}

}  // namespace pqc
