#include "sgf/checkpoint.hpp"

#include <algorithm>
#include <cstring>
#include <filesystem>
#include <fstream>

namespace sgf {

namespace {

constexpr char kMagic[8] = {'S', 'G', 'F', 'C', 'K', 'P', 'T', '1'};

void put_u32(std::ostream& os, std::uint32_t v) {
    char b[4];
    for (int i = 0; i < 4; ++i) b[i] = char((v >> (8 * i)) & 0xff);
    os.write(b, 4);
}
void put_u64(std::ostream& os, std::uint64_t v) {
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = char((v >> (8 * i)) & 0xff);
    os.write(b, 8);
}
void put_i32(std::ostream& os, std::int32_t v) { put_u32(os, std::uint32_t(v)); }
void put_f64(std::ostream& os, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    put_u64(os, bits);
}

std::uint32_t get_u32(std::istream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    if (!is) throw std::runtime_error("checkpoint: truncated file");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t(b[i]) << (8 * i);
    return v;
}
std::uint64_t get_u64(std::istream& is) {
    unsigned char b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    if (!is) throw std::runtime_error("checkpoint: truncated file");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(b[i]) << (8 * i);
    return v;
}
std::int32_t get_i32(std::istream& is) { return std::int32_t(get_u32(is)); }
double get_f64(std::istream& is) {
    std::uint64_t bits = get_u64(is);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

}  // namespace

std::uint64_t fnv1a64(const void* data, std::size_t size) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::size_t i = 0; i < size; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t config_digest(const SimConfig& cfg) {
    const std::string s = cfg.canonical_string();
    return fnv1a64(s.data(), s.size());
}

void write_checkpoint(const std::string& path, const SimConfig& cfg, const NoisePath& noise,
                      const SpectralField& state, std::uint64_t node_index) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("checkpoint: cannot open for writing: " + path);

    os.write(kMagic, sizeof(kMagic));
    put_u32(os, kCheckpointVersion);
    put_u64(os, config_digest(cfg));
    put_f64(os, noise.nodes()[std::size_t(node_index)]);
    put_u64(os, node_index);

    // Non-zero amplitudes of the current state.
    std::vector<std::pair<WaveVector, Complex>> amps;
    state.for_each([&](WaveVector k, Complex a) {
        if (a != Complex{}) amps.emplace_back(k, a);
    });
    put_u32(os, std::uint32_t(amps.size()));
    for (const auto& [k, a] : amps) {
        put_i32(os, k.k1);
        put_i32(os, k.k2);
    }
    for (const auto& [k, a] : amps) {
        put_f64(os, a.real());
        put_f64(os, a.imag());
    }

    put_u64(os, noise.seed());
    put_u64(os, noise.stream_id());
    put_f64(os, noise.horizon());
    put_f64(os, noise.base_dt());
    put_f64(os, noise.dt());
    put_u32(os, std::uint32_t(noise.refinement_history().size()));
    for (int f : noise.refinement_history()) put_i32(os, f);

    std::vector<Jump> remaining;
    const double now = noise.nodes()[std::size_t(node_index)];
    for (const Jump& j : noise.jumps())
        if (j.time > now) remaining.push_back(j);
    put_u32(os, std::uint32_t(remaining.size()));
    for (const Jump& j : remaining) {
        put_f64(os, j.time);
        put_i32(os, j.mark);
    }
    if (!os) throw std::runtime_error("checkpoint: write failed: " + path);
}

Checkpoint read_checkpoint(const std::string& path, const SimConfig& cfg) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("checkpoint: cannot open: " + path);

    char magic[8];
    is.read(magic, 8);
    if (!is || std::memcmp(magic, kMagic, 8) != 0)
        throw std::runtime_error("checkpoint: bad magic");
    const std::uint32_t version = get_u32(is);
    if (version != kCheckpointVersion)
        throw std::runtime_error("checkpoint: version mismatch (got " + std::to_string(version) +
                                 ", expected " + std::to_string(kCheckpointVersion) + ")");

    Checkpoint c;
    c.config_digest = get_u64(is);
    if (c.config_digest != config_digest(cfg))
        throw std::runtime_error("checkpoint: config digest mismatch");

    c.time = get_f64(is);
    c.node_index = get_u64(is);

    const std::uint32_t n_modes = get_u32(is);
    std::vector<WaveVector> ks(n_modes);
    for (auto& k : ks) {
        k.k1 = get_i32(is);
        k.k2 = get_i32(is);
    }
    c.state = SpectralField(cfg.level.box(), cfg.params.alpha);
    for (const auto& k : ks) {
        double re = get_f64(is);
        double im = get_f64(is);
        c.state.set(k, Complex{re, im});
    }

    c.seed = get_u64(is);
    c.stream_id = get_u64(is);
    c.horizon = get_f64(is);
    c.base_dt = get_f64(is);
    c.dt = get_f64(is);
    const std::uint32_t n_factors = get_u32(is);
    c.refinement_history.resize(n_factors);
    for (auto& f : c.refinement_history) f = get_i32(is);

    const std::uint32_t n_jumps = get_u32(is);
    c.remaining_jumps.resize(n_jumps);
    for (auto& j : c.remaining_jumps) {
        j.time = get_f64(is);
        j.mark = get_i32(is);
    }
    return c;
}

NoisePath restore_noise(const Checkpoint& ckpt, const SimConfig& cfg) {
    NoisePath noise = regenerate_noise({ckpt.horizon, ckpt.base_dt}, cfg.coeffs->marks(),
                                       ckpt.seed, ckpt.stream_id, ckpt.refinement_history);
    if (noise.dt() != ckpt.dt)
        throw std::runtime_error("checkpoint: regenerated noise dt mismatch");
    std::vector<Jump> remaining;
    for (const Jump& j : noise.jumps())
        if (j.time > ckpt.time) remaining.push_back(j);
    if (remaining.size() != ckpt.remaining_jumps.size())
        throw std::runtime_error("checkpoint: remaining jump count mismatch");
    for (std::size_t i = 0; i < remaining.size(); ++i)
        if (remaining[i].time != ckpt.remaining_jumps[i].time ||
            remaining[i].mark != ckpt.remaining_jumps[i].mark)
            throw std::runtime_error("checkpoint: remaining jumps mismatch");
    return noise;
}

VerificationReport checkpoint_roundtrip(const SimConfig& cfg, const NoisePath& noise,
                                        double t_split) {
    if (!(t_split > 0.0 && t_split < cfg.horizon))
        throw std::invalid_argument("checkpoint_roundtrip: t_split must lie in (0, horizon)");
    cfg.validate();

    const Trajectory uninterrupted = simulate_path(cfg, noise);

    // Split at the first node >= t_split.
    const auto& nodes = noise.nodes();
    auto it = std::lower_bound(nodes.begin(), nodes.end(), t_split);
    const std::size_t split_node = std::size_t(it - nodes.begin());

    Trajectory first;
    SpectralField u0 = project_level(cfg.initial, cfg.level);
    SpectralField at_split = continue_path(cfg, noise, std::move(u0), 0, first, split_node);

    const auto tmp = std::filesystem::temp_directory_path() /
                     ("sgf_ckpt_" + std::to_string(config_digest(cfg)) + ".bin");
    write_checkpoint(tmp.string(), cfg, noise, at_split, split_node);
    Checkpoint ckpt = read_checkpoint(tmp.string(), cfg);
    NoisePath restored = restore_noise(ckpt, cfg);
    std::filesystem::remove(tmp);

    Trajectory resumed = std::move(first);
    continue_path(cfg, restored, ckpt.state, ckpt.node_index, resumed);

    bool equal = resumed.records.size() == uninterrupted.records.size() &&
                 restored == noise && ckpt.state == at_split;
    std::size_t first_diff = resumed.records.size();
    if (equal) {
        for (std::size_t i = 0; i < resumed.records.size(); ++i) {
            if (!(resumed.records[i] == uninterrupted.records[i])) {
                equal = false;
                first_diff = i;
                break;
            }
        }
    }

    VerificationReport rep;
    rep.name = "checkpoint_roundtrip";
    rep.provenance = "split-restore-continue equals the uninterrupted run bit for bit";
    rep.metrics["records_compared"] = double(uninterrupted.records.size());
    rep.metrics["split_node"] = double(split_node);
    rep.metrics["first_difference"] = equal ? -1.0 : double(first_diff);
    rep.tolerances["difference"] = 0.0;
    rep.status = equal ? VerificationReport::Status::pass : VerificationReport::Status::fail;
    return rep;
}

}  // namespace sgf
