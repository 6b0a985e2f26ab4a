// Artifact plumbing: MNIST IDX ingestion, the versioned text checkpoint
// format, PGM image grids, and locale-independent number formatting for CSV
// emission. All file writes go through an atomic temp-then-rename path.
//
// Checkpoint format ("qlgckpt 1"), line-oriented text:
//   qlgckpt 1
//   kind <model-kind>
//   seed <uint64>
//   config <key> <value>          (zero or more)
//   param <name> <rank> <d0> ... <d_rank-1>
//   <one hex-float value per line, product(dims) lines>
//   ...more param blocks...
//   end
// Hex-float encoding makes save -> load -> save byte-identical.

#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "qlg/errors.hpp"
#include "qlg/models.hpp"

namespace qlg {

// ---------------------------------------------------------------------------
// Number formatting (locale-independent, shortest round-trip).

inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline std::string format_hexfloat(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::hex);
    return std::string(buf, res.ptr);
}

inline double parse_hexfloat(std::string_view s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v, std::chars_format::hex);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw FormatError("bad hex-float value: '" + std::string(s) + "'");
    return v;
}

// ---------------------------------------------------------------------------
// Files.

inline std::vector<unsigned char> read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("read failed for " + path.string());
    return bytes;
}

inline std::string read_text_file(const std::filesystem::path& path) {
    const auto bytes = read_file_bytes(path);
    return std::string(bytes.begin(), bytes.end());
}

// Write-to-temp-then-rename; `content` may hold arbitrary bytes.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw IoError("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("rename to " + path.string() + " failed: " + ec.message());
}

// ---------------------------------------------------------------------------
// MNIST IDX.

struct Dataset {
    std::size_t count = 0;
    std::vector<double> pixels;  // count * 784, row-major, in [0,1]
    std::vector<int> labels;     // count entries, 0-9

    std::span<const double> image(std::size_t i) const {
        return std::span<const double>(pixels).subspan(i * kImagePixels, kImagePixels);
    }
};

namespace detail {
inline std::uint32_t be_u32(const unsigned char* p) {
    return (std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) | (std::uint32_t(p[2]) << 8) |
           std::uint32_t(p[3]);
}
}  // namespace detail

// Big-endian IDX pair: images magic 0x00000803 (count, rows, cols, bytes),
// labels magic 0x00000801 (count, bytes). Pixels come out as byte/255.
inline Dataset load_mnist_idx(const std::filesystem::path& images_path,
                              const std::filesystem::path& labels_path) {
    const auto img = read_file_bytes(images_path);
    if (img.size() < 16) throw LengthError("image file too short: " + images_path.string());
    if (detail::be_u32(img.data()) != 0x00000803u)
        throw FormatError("bad image magic in " + images_path.string());
    const std::size_t n = detail::be_u32(img.data() + 4);
    const std::size_t rows = detail::be_u32(img.data() + 8);
    const std::size_t cols = detail::be_u32(img.data() + 12);
    if (rows != kImageSide || cols != kImageSide)
        throw FormatError("expected 28x28 images in " + images_path.string());
    if (img.size() != 16 + n * rows * cols)
        throw LengthError("image payload size mismatch in " + images_path.string());

    const auto lab = read_file_bytes(labels_path);
    if (lab.size() < 8) throw LengthError("label file too short: " + labels_path.string());
    if (detail::be_u32(lab.data()) != 0x00000801u)
        throw FormatError("bad label magic in " + labels_path.string());
    const std::size_t n_lab = detail::be_u32(lab.data() + 4);
    if (lab.size() != 8 + n_lab) throw LengthError("label payload size mismatch in " +
                                                   labels_path.string());
    if (n_lab != n) throw ConsistencyError("image/label counts differ: " + std::to_string(n) +
                                           " vs " + std::to_string(n_lab));

    Dataset ds;
    ds.count = n;
    ds.pixels.resize(n * kImagePixels);
    ds.labels.resize(n);
    for (std::size_t i = 0; i < n * kImagePixels; ++i) ds.pixels[i] = img[16 + i] / 255.0;
    for (std::size_t i = 0; i < n; ++i) {
        const unsigned char b = lab[8 + i];
        if (b > 9) throw ConsistencyError("label byte out of range at index " + std::to_string(i));
        ds.labels[i] = b;
    }
    return ds;
}

// Order-preserving subset with the given label.
inline Dataset filter_class(const Dataset& ds, int label) {
    if (label < 0 || label > 9) throw DomainError("class label must be 0-9");
    Dataset out;
    for (std::size_t i = 0; i < ds.count; ++i) {
        if (ds.labels[i] != label) continue;
        const auto im = ds.image(i);
        out.pixels.insert(out.pixels.end(), im.begin(), im.end());
        out.labels.push_back(label);
        ++out.count;
    }
    if (out.count == 0) throw DataError("no images with label " + std::to_string(label));
    return out;
}

// ---------------------------------------------------------------------------
// Checkpoints.

struct ParamBlock {
    std::string name;
    std::vector<std::size_t> shape;
    std::vector<double> values;
};

struct Checkpoint {
    int version = 1;
    std::string kind;
    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, std::string>> config;  // ordered
    std::vector<ParamBlock> blocks;

    const ParamBlock* find(const std::string& name) const {
        for (const auto& b : blocks)
            if (b.name == name) return &b;
        return nullptr;
    }

    std::string config_value(const std::string& key) const {
        for (const auto& [k, v] : config)
            if (k == key) return v;
        throw FormatError("checkpoint missing config key '" + key + "'");
    }

    std::size_t scalar_count() const {
        std::size_t n = 0;
        for (const auto& b : blocks) n += b.values.size();
        return n;
    }
};

inline std::string checkpoint_to_text(const Checkpoint& ck) {
    std::string out = "qlgckpt 1\n";
    out += "kind " + ck.kind + "\n";
    out += "seed " + std::to_string(ck.seed) + "\n";
    for (const auto& [k, v] : ck.config) out += "config " + k + " " + v + "\n";
    for (const auto& b : ck.blocks) {
        out += "param " + b.name + " " + std::to_string(b.shape.size());
        std::size_t numel = 1;
        for (std::size_t d : b.shape) {
            out += " " + std::to_string(d);
            numel *= d;
        }
        out += "\n";
        if (numel != b.values.size()) throw ShapeError("param block shape/value mismatch");
        for (double v : b.values) out += format_hexfloat(v) + "\n";
    }
    out += "end\n";
    return out;
}

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && line[i] == ' ') ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

template <class T>
inline T parse_uint(std::string_view s, const char* what) {
    T v{};
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw FormatError(std::string("bad ") + what + ": '" + std::string(s) + "'");
    return v;
}

}  // namespace detail

inline Checkpoint checkpoint_from_text(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        lines.push_back(text.substr(pos, nl - pos));
        pos = nl + 1;
    }
    if (lines.empty()) throw FormatError("empty checkpoint");

    auto header = detail::split_ws(lines[0]);
    if (header.size() != 2 || header[0] != "qlgckpt")
        throw FormatError("not a checkpoint file");
    const int version = static_cast<int>(detail::parse_uint<unsigned>(header[1], "version"));
    if (version != 1)
        throw VersionError("unsupported checkpoint version " + std::to_string(version));

    Checkpoint ck;
    ck.version = version;
    bool saw_kind = false, saw_seed = false, saw_end = false;
    std::size_t i = 1;
    while (i < lines.size()) {
        const std::string_view line = lines[i];
        if (line.empty()) {
            ++i;
            continue;
        }
        auto tok = detail::split_ws(line);
        if (tok[0] == "kind") {
            if (saw_kind || tok.size() != 2) throw FormatError("bad kind line");
            ck.kind = std::string(tok[1]);
            saw_kind = true;
            ++i;
        } else if (tok[0] == "seed") {
            if (saw_seed || tok.size() != 2) throw FormatError("bad seed line");
            ck.seed = detail::parse_uint<std::uint64_t>(tok[1], "seed");
            saw_seed = true;
            ++i;
        } else if (tok[0] == "config") {
            if (tok.size() != 3) throw FormatError("bad config line");
            ck.config.emplace_back(std::string(tok[1]), std::string(tok[2]));
            ++i;
        } else if (tok[0] == "param") {
            if (tok.size() < 3) throw FormatError("bad param line");
            ParamBlock b;
            b.name = std::string(tok[1]);
            const std::size_t rank = detail::parse_uint<std::size_t>(tok[2], "param rank");
            if (tok.size() != 3 + rank) throw FormatError("param rank/dims mismatch");
            std::size_t numel = 1;
            for (std::size_t d = 0; d < rank; ++d) {
                b.shape.push_back(detail::parse_uint<std::size_t>(tok[3 + d], "param dim"));
                numel *= b.shape.back();
            }
            ++i;
            b.values.reserve(numel);
            for (std::size_t v = 0; v < numel; ++v, ++i) {
                if (i >= lines.size())
                    throw FormatError("param block '" + b.name + "' truncated");
                b.values.push_back(parse_hexfloat(lines[i]));
            }
            ck.blocks.push_back(std::move(b));
        } else if (tok[0] == "end") {
            saw_end = true;
            ++i;
            break;
        } else {
            throw FormatError("unknown checkpoint directive '" + std::string(tok[0]) + "'");
        }
    }
    for (; i < lines.size(); ++i)
        if (!lines[i].empty()) throw FormatError("trailing content after end");
    if (!saw_kind || !saw_seed || !saw_end) throw FormatError("incomplete checkpoint");
    return ck;
}

inline void save_checkpoint(const Checkpoint& ck, const std::filesystem::path& path) {
    write_file_atomic(path, checkpoint_to_text(ck));
}

inline Checkpoint load_checkpoint(const std::filesystem::path& path) {
    return checkpoint_from_text(read_text_file(path));
}

// --- model <-> checkpoint conversion -----------------------------------

namespace detail {

inline void blocks_from_net(Sequential& net, Checkpoint& ck) {
    for (const auto& p : net.params())
        ck.blocks.push_back(ParamBlock{p.name, p.value->shape, p.value->data});
}

inline void blocks_into_net(const Checkpoint& ck, Sequential& net, const std::string& what) {
    for (const auto& p : net.params()) {
        const ParamBlock* b = ck.find(p.name);
        if (!b) throw FormatError(what + " checkpoint missing block '" + p.name + "'");
        if (b->shape != p.value->shape)
            throw FormatError(what + " checkpoint block '" + p.name + "' has wrong shape");
        p.value->data = b->values;
    }
}

}  // namespace detail

inline Checkpoint autoencoder_to_checkpoint(Autoencoder& ae, std::uint64_t seed) {
    Checkpoint ck;
    ck.kind = "autoencoder";
    ck.seed = seed;
    detail::blocks_from_net(ae.encoder, ck);
    detail::blocks_from_net(ae.decoder, ck);
    return ck;
}

inline Autoencoder autoencoder_from_checkpoint(const Checkpoint& ck) {
    if (ck.kind != "autoencoder") throw FormatError("checkpoint kind is not 'autoencoder'");
    Autoencoder ae;
    detail::blocks_into_net(ck, ae.encoder, "autoencoder");
    detail::blocks_into_net(ck, ae.decoder, "autoencoder");
    return ae;
}

inline Checkpoint discriminator_to_checkpoint(Discriminator& d, std::uint64_t seed) {
    Checkpoint ck;
    ck.kind = "discriminator";
    ck.seed = seed;
    detail::blocks_from_net(d.net, ck);
    return ck;
}

inline Discriminator discriminator_from_checkpoint(const Checkpoint& ck) {
    if (ck.kind != "discriminator") throw FormatError("checkpoint kind is not 'discriminator'");
    Discriminator d;
    detail::blocks_into_net(ck, d.net, "discriminator");
    return d;
}

inline Checkpoint generator_to_checkpoint(LatentGenerator& gen, std::uint64_t seed) {
    Checkpoint ck;
    ck.seed = seed;
    if (auto* q = dynamic_cast<QuantumLatentGenerator*>(&gen)) {
        const GeneratorConfig& cfg = q->config();
        ck.kind = "generator-quantum";
        ck.config.emplace_back("sub_generators", std::to_string(cfg.sub_generators));
        ck.config.emplace_back("data_qubits", std::to_string(cfg.data_qubits));
        ck.config.emplace_back("ancilla_qubits", std::to_string(cfg.ancilla_qubits));
        ck.config.emplace_back("layers", std::to_string(cfg.layers));
        ck.config.emplace_back("noise_lo", format_hexfloat(cfg.noise_lo));
        ck.config.emplace_back("noise_hi", format_hexfloat(cfg.noise_hi));
        ck.blocks.push_back(ParamBlock{
            "theta",
            {static_cast<std::size_t>(cfg.sub_generators), static_cast<std::size_t>(cfg.layers),
             static_cast<std::size_t>(cfg.total_qubits())},
            q->params().theta});
    } else if (auto* c = dynamic_cast<ClassicalGenerator*>(&gen)) {
        ck.kind = "generator-classical";
        detail::blocks_from_net(c->net(), ck);
    } else {
        throw FormatError("unknown generator implementation");
    }
    return ck;
}

inline std::unique_ptr<LatentGenerator> generator_from_checkpoint(const Checkpoint& ck) {
    if (ck.kind == "generator-quantum") {
        GeneratorConfig cfg;
        cfg.sub_generators =
            static_cast<int>(detail::parse_uint<unsigned>(ck.config_value("sub_generators"),
                                                          "sub_generators"));
        cfg.data_qubits = static_cast<int>(
            detail::parse_uint<unsigned>(ck.config_value("data_qubits"), "data_qubits"));
        cfg.ancilla_qubits = static_cast<int>(
            detail::parse_uint<unsigned>(ck.config_value("ancilla_qubits"), "ancilla_qubits"));
        cfg.layers =
            static_cast<int>(detail::parse_uint<unsigned>(ck.config_value("layers"), "layers"));
        cfg.noise_lo = parse_hexfloat(ck.config_value("noise_lo"));
        cfg.noise_hi = parse_hexfloat(ck.config_value("noise_hi"));
        auto gen = std::make_unique<QuantumLatentGenerator>(cfg);
        const ParamBlock* b = ck.find("theta");
        if (!b) throw FormatError("generator checkpoint missing block 'theta'");
        const std::vector<std::size_t> want{static_cast<std::size_t>(cfg.sub_generators),
                                            static_cast<std::size_t>(cfg.layers),
                                            static_cast<std::size_t>(cfg.total_qubits())};
        if (b->shape != want) throw FormatError("generator checkpoint block 'theta' wrong shape");
        gen->params().theta = b->values;
        return gen;
    }
    if (ck.kind == "generator-classical") {
        auto gen = std::make_unique<ClassicalGenerator>();
        detail::blocks_into_net(ck, gen->net(), "generator");
        return gen;
    }
    throw FormatError("checkpoint kind '" + ck.kind + "' is not a generator");
}

// ---------------------------------------------------------------------------
// PGM image grids.

inline constexpr std::size_t kGridSeparator = 2;  // pixels between tiles, value 255

// Tiles `count` 28x28 images (flat count*784 buffer, values in [0,1])
// row-major into a binary PGM (P5, maxval 255). A "# count N" header comment
// records how many tiles are real so grids round-trip through
// load_image_grid even when the last row is partial.
inline void save_image_grid(const std::vector<double>& pixels, std::size_t count,
                            std::size_t cols, const std::filesystem::path& path) {
    if (count == 0) throw SizeError("save_image_grid: no images");
    if (cols == 0) throw SizeError("save_image_grid: cols must be >= 1");
    if (pixels.size() != count * kImagePixels)
        throw ShapeError("save_image_grid: pixel buffer does not match count");
    if (cols > count) cols = count;
    const std::size_t rows = (count + cols - 1) / cols;
    const std::size_t cell = kImageSide + kGridSeparator;
    const std::size_t width = cols * cell - kGridSeparator;
    const std::size_t height = rows * cell - kGridSeparator;

    std::vector<unsigned char> canvas(width * height, 255);  // separators white
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
            const std::size_t idx = r * cols + c;
            const std::size_t y0 = r * cell, x0 = c * cell;
            for (std::size_t y = 0; y < kImageSide; ++y)
                for (std::size_t x = 0; x < kImageSide; ++x) {
                    double v = 0.0;  // unused trailing cells stay black
                    if (idx < count) v = pixels[idx * kImagePixels + y * kImageSide + x];
                    v = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
                    canvas[(y0 + y) * width + (x0 + x)] =
                        static_cast<unsigned char>(v * 255.0 + 0.5);
                }
        }

    std::string out = "P5\n# count " + std::to_string(count) + "\n" + std::to_string(width) + " " +
                      std::to_string(height) + "\n255\n";
    out.append(reinterpret_cast<const char*>(canvas.data()), canvas.size());
    write_file_atomic(path, out);
}

struct ImageGrid {
    std::size_t count = 0;
    std::vector<double> pixels;  // count * 784
};

// Inverse of save_image_grid for grids written by it.
inline ImageGrid load_image_grid(const std::filesystem::path& path) {
    const auto bytes = read_file_bytes(path);
    std::size_t pos = 0;
    std::size_t declared_count = 0;

    auto next_token = [&]() -> std::string {
        while (pos < bytes.size()) {
            const char ch = static_cast<char>(bytes[pos]);
            if (ch == '#') {  // comment to end of line; may carry "# count N"
                std::size_t eol = pos;
                while (eol < bytes.size() && bytes[eol] != '\n') ++eol;
                const std::string comment(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                                          bytes.begin() + static_cast<std::ptrdiff_t>(eol));
                const auto tok = detail::split_ws(std::string_view(comment).substr(1));
                if (tok.size() == 2 && tok[0] == "count")
                    declared_count = detail::parse_uint<std::size_t>(tok[1], "grid count");
                pos = eol;
            } else if (ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n') {
                ++pos;
            } else {
                break;
            }
        }
        std::size_t start = pos;
        while (pos < bytes.size()) {
            const char ch = static_cast<char>(bytes[pos]);
            if (ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n' || ch == '#') break;
            ++pos;
        }
        if (start == pos) throw FormatError("truncated PGM header in " + path.string());
        return std::string(bytes.begin() + static_cast<std::ptrdiff_t>(start),
                           bytes.begin() + static_cast<std::ptrdiff_t>(pos));
    };

    if (next_token() != "P5") throw FormatError("not a binary PGM: " + path.string());
    const auto width = detail::parse_uint<std::size_t>(next_token(), "PGM width");
    const auto height = detail::parse_uint<std::size_t>(next_token(), "PGM height");
    const auto maxval = detail::parse_uint<std::size_t>(next_token(), "PGM maxval");
    if (maxval != 255) throw FormatError("expected maxval 255 in " + path.string());
    if (pos >= bytes.size() || !(bytes[pos] == '\n' || bytes[pos] == ' ' || bytes[pos] == '\r' ||
                                 bytes[pos] == '\t'))
        throw FormatError("bad PGM header terminator in " + path.string());
    ++pos;  // single whitespace byte before the raster

    const std::size_t cell = kImageSide + kGridSeparator;
    if ((width + kGridSeparator) % cell != 0 || (height + kGridSeparator) % cell != 0)
        throw FormatError("PGM dimensions are not a 28x28 tile grid in " + path.string());
    const std::size_t cols = (width + kGridSeparator) / cell;
    const std::size_t rows = (height + kGridSeparator) / cell;
    if (bytes.size() - pos != width * height)
        throw LengthError("PGM payload size mismatch in " + path.string());

    std::size_t count = declared_count == 0 ? rows * cols : declared_count;
    if (count > rows * cols) throw FormatError("declared count exceeds grid capacity");

    ImageGrid grid;
    grid.count = count;
    grid.pixels.resize(count * kImagePixels);
    for (std::size_t idx = 0; idx < count; ++idx) {
        const std::size_t r = idx / cols, c = idx % cols;
        const std::size_t y0 = r * cell, x0 = c * cell;
        for (std::size_t y = 0; y < kImageSide; ++y)
            for (std::size_t x = 0; x < kImageSide; ++x)
                grid.pixels[idx * kImagePixels + y * kImageSide + x] =
                    bytes[pos + (y0 + y) * width + (x0 + x)] / 255.0;
    }
    return grid;
}

}  // namespace qlg
