// Concrete networks of the pipeline: the convolutional autoencoder whose
// encoder emits a row-normalized 5x8 latent matrix, the 40-64-16-1
// discriminator, the latent-generator interface with its quantum and
// parameter-matched classical implementations, and the random-decoder
// baseline.

#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "qlg/errors.hpp"
#include "qlg/generator.hpp"
#include "qlg/latent.hpp"
#include "qlg/nn.hpp"
#include "qlg/rng.hpp"

namespace qlg {

inline constexpr std::size_t kImageSide = 28;
inline constexpr std::size_t kImagePixels = kImageSide * kImageSide;
inline constexpr std::size_t kLatentRows = 5;
inline constexpr std::size_t kLatentCols = 8;
inline constexpr std::size_t kLatentDim = kLatentRows * kLatentCols;

// Encoder: conv(1->8,k3,s2,p1) ReLU conv(8->16,k3,s2,p1) ReLU flatten
// dense(784->40) ReLU row-normalize(5x8). The ReLU before normalization
// guarantees non-negative latent mass; normalization makes each row a
// probability distribution.
// Decoder: dense(40->784) ReLU reshape(16,7,7) tconv(16->8,k3,s2,p1,op1)
// ReLU tconv(8->1,k3,s2,p1,op1) sigmoid.
struct Autoencoder {
    Sequential encoder;
    Sequential decoder;

    Autoencoder() {
        encoder.add<Conv2d>("enc.conv1", 1, 8, 3, 2, 1);
        encoder.add<ReLU>("enc.act1");
        encoder.add<Conv2d>("enc.conv2", 8, 16, 3, 2, 1);
        encoder.add<ReLU>("enc.act2");
        encoder.add<Flatten>("enc.flat");
        encoder.add<Dense>("enc.fc", 16 * 7 * 7, kLatentDim);
        encoder.add<ReLU>("enc.act3");
        encoder.add<RowNormalize>("enc.norm", kLatentRows, kLatentCols);

        decoder.add<Dense>("dec.fc", kLatentDim, 16 * 7 * 7);
        decoder.add<ReLU>("dec.act1");
        decoder.add<Reshape>("dec.unflat", std::vector<std::size_t>{16, 7, 7});
        decoder.add<TConv2d>("dec.tconv1", 16, 8, 3, 2, 1, 1);
        decoder.add<ReLU>("dec.act2");
        decoder.add<TConv2d>("dec.tconv2", 8, 1, 3, 2, 1, 1);
        decoder.add<Sigmoid>("dec.act3");
    }

    void init_params(Rng& rng) {
        encoder.init_params(rng);
        decoder.init_params(rng);
    }

    // [batch, 1, 28, 28] -> [batch, 40]; every 8-entry row group sums to 1.
    Tensor encode(const Tensor& images) {
        check_image_batch(images);
        return encoder.forward(images);
    }

    // [batch, 40] -> [batch, 1, 28, 28] with pixels in [0, 1].
    Tensor decode(const Tensor& latents) {
        if (latents.rank() != 2 || latents.dim(1) != kLatentDim)
            throw ShapeError("decode: expected [batch, 40] latents");
        return decoder.forward(latents);
    }

    Tensor reconstruct(const Tensor& images) { return decode(encode(images)); }

    static void check_image_batch(const Tensor& images) {
        if (images.rank() != 4 || images.dim(1) != 1 || images.dim(2) != kImageSide ||
            images.dim(3) != kImageSide)
            throw ShapeError("expected [batch, 1, 28, 28] images");
    }
};

// Extracts sample b of a [batch, 40] latent tensor as a 5x8 matrix.
inline LatentMatrix latent_from_tensor(const Tensor& latents, std::size_t b) {
    if (latents.rank() != 2 || latents.dim(1) != kLatentDim || b >= latents.dim(0))
        throw ShapeError("latent_from_tensor: bad tensor or index");
    LatentMatrix m(static_cast<int>(kLatentRows), static_cast<int>(kLatentCols));
    for (std::size_t i = 0; i < kLatentDim; ++i) m.values[i] = latents.data[b * kLatentDim + i];
    return m;
}

inline Tensor latent_to_tensor(const LatentMatrix& m) {
    if (static_cast<std::size_t>(m.rows) * m.cols != kLatentDim)
        throw ShapeError("latent_to_tensor: expected a 5x8 matrix");
    Tensor t = Tensor::zeros({1, kLatentDim});
    t.data = m.values;
    return t;
}

// Dense 40 -> 64 -> 16 -> 1 with ReLU, ReLU, sigmoid: 3681 parameters.
struct Discriminator {
    Sequential net;

    Discriminator() {
        net.add<Dense>("disc.fc1", kLatentDim, 64);
        net.add<ReLU>("disc.act1");
        net.add<Dense>("disc.fc2", 64, 16);
        net.add<ReLU>("disc.act2");
        net.add<Dense>("disc.fc3", 16, 1);
        net.add<Sigmoid>("disc.act3");
    }

    void init_params(Rng& rng) { net.init_params(rng); }

    // [batch, 40] -> [batch, 1] confidence in (0,1); 1 means "real".
    Tensor forward(const Tensor& latents) {
        if (latents.rank() != 2 || latents.dim(1) != kLatentDim)
            throw ShapeError("discriminate: expected [batch, 40] input");
        return net.forward(latents);
    }
};

// A latent generator maps a noise vector to a 5x8 latent matrix and can take
// one SGD step given the loss gradient with respect to its 40 outputs. The
// training loop is agnostic to which implementation it drives.
class LatentGenerator {
  public:
    virtual ~LatentGenerator() = default;
    virtual std::string kind() const = 0;
    virtual std::size_t noise_dim() const = 0;
    virtual std::size_t param_count() const = 0;
    virtual void init_params(Rng& rng) = 0;
    virtual LatentMatrix generate(const NoiseVector& z) = 0;
    // Shot-based forward pass; evaluation/generation only.
    virtual LatentMatrix generate_sampled(const NoiseVector& z, int shots, std::uint64_t seed) = 0;
    // One SGD step on the gradient summed over the batch: zs holds b noise
    // vectors, upstream holds b*40 row-major entries of dL/dy (any batch
    // averaging is expected to be baked into upstream already).
    virtual void train_step(const std::vector<NoiseVector>& zs,
                            const std::vector<double>& upstream, double lr, int n_threads) = 0;
};

// Single-sample convenience wrapper over the batch interface.
inline void train_step_single(LatentGenerator& gen, const NoiseVector& z,
                              const std::vector<double>& upstream, double lr, int n_threads) {
    gen.train_step(std::vector<NoiseVector>{z}, upstream, lr, n_threads);
}

class QuantumLatentGenerator : public LatentGenerator {
  public:
    explicit QuantumLatentGenerator(GeneratorConfig cfg = GeneratorConfig{})
        : cfg_(cfg), params_(GeneratorParams::zeros(cfg)) {}

    std::string kind() const override { return "quantum"; }
    std::size_t noise_dim() const override { return static_cast<std::size_t>(cfg_.total_qubits()); }
    std::size_t param_count() const override { return params_.count(); }

    void init_params(Rng& rng) override { params_ = GeneratorParams::random(cfg_, rng); }

    LatentMatrix generate(const NoiseVector& z) override { return run_generator(params_, z, cfg_); }

    LatentMatrix generate_sampled(const NoiseVector& z, int shots, std::uint64_t seed) override {
        return run_generator_sampled(params_, z, cfg_, shots, seed);
    }

    void train_step(const std::vector<NoiseVector>& zs, const std::vector<double>& upstream,
                    double lr, int n_threads) override {
        const std::size_t width = static_cast<std::size_t>(cfg_.sub_generators) * cfg_.row_width();
        if (zs.empty() || upstream.size() != zs.size() * width)
            throw ShapeError("train_step: upstream size does not match batch");
        std::vector<double> g_sum(params_.count(), 0.0);
        for (std::size_t b = 0; b < zs.size(); ++b) {
            LatentMatrix up(cfg_.sub_generators, cfg_.row_width());
            up.values.assign(upstream.begin() + static_cast<std::ptrdiff_t>(b * width),
                             upstream.begin() + static_cast<std::ptrdiff_t>((b + 1) * width));
            const std::vector<double> g =
                generator_gradient(params_, zs[b], cfg_, up, ForwardMode::analytic, n_threads);
            for (std::size_t i = 0; i < g.size(); ++i) g_sum[i] += g[i];
        }
        for (std::size_t i = 0; i < g_sum.size(); ++i) params_.theta[i] -= lr * g_sum[i];
    }

    const GeneratorConfig& config() const { return cfg_; }
    GeneratorParams& params() { return params_; }
    const GeneratorParams& params() const { return params_; }

  private:
    GeneratorConfig cfg_;
    GeneratorParams params_;
};

// Parameter-matched classical baseline: bias-free dense 4 -> 10 -> 2 -> 40
// (ReLU hidden activations, sigmoid output, row normalization), for
// 4*10 + 10*2 + 2*40 = 140 trainable scalars — the same count as the
// default quantum generator.
class ClassicalGenerator : public LatentGenerator {
  public:
    ClassicalGenerator() {
        net_.add<Dense>("gen.fc1", kNoiseDim, 10, false);
        net_.add<ReLU>("gen.act1");
        net_.add<Dense>("gen.fc2", 10, 2, false);
        net_.add<ReLU>("gen.act2");
        net_.add<Dense>("gen.fc3", 2, kLatentDim, false);
        net_.add<Sigmoid>("gen.act3");
        net_.add<RowNormalize>("gen.norm", kLatentRows, kLatentCols);
    }

    std::string kind() const override { return "classical"; }
    std::size_t noise_dim() const override { return kNoiseDim; }
    std::size_t param_count() const override { return net_.param_count(); }

    void init_params(Rng& rng) override { net_.init_params(rng); }

    LatentMatrix generate(const NoiseVector& z) override {
        return latent_from_tensor(net_.forward(noise_tensor(z)), 0);
    }

    LatentMatrix generate_sampled(const NoiseVector&, int, std::uint64_t) override {
        throw UnsupportedModeError("classical generator has no shot-based mode");
    }

    void train_step(const std::vector<NoiseVector>& zs, const std::vector<double>& upstream,
                    double lr, int) override {
        if (zs.empty() || upstream.size() != zs.size() * kLatentDim)
            throw ShapeError("train_step: upstream size does not match batch");
        net_.zero_grad();
        net_.forward(noise_batch_tensor(zs));
        Tensor gy = Tensor::zeros({zs.size(), kLatentDim});
        gy.data = upstream;
        net_.backward(gy);
        net_.sgd_step(lr);
    }

    Sequential& net() { return net_; }

  private:
    static constexpr std::size_t kNoiseDim = 4;

    static Tensor noise_tensor(const NoiseVector& z) {
        if (z.size() != kNoiseDim) throw ShapeError("classical generator expects 4 noise values");
        Tensor t = Tensor::zeros({1, kNoiseDim});
        t.data.assign(z.begin(), z.end());
        return t;
    }

    static Tensor noise_batch_tensor(const std::vector<NoiseVector>& zs) {
        Tensor t = Tensor::zeros({zs.size(), kNoiseDim});
        for (std::size_t b = 0; b < zs.size(); ++b) {
            if (zs[b].size() != kNoiseDim)
                throw ShapeError("classical generator expects 4 noise values");
            for (std::size_t i = 0; i < kNoiseDim; ++i) t.data[b * kNoiseDim + i] = zs[b][i];
        }
        return t;
    }

    Sequential net_;
};

// Baseline sample: decode a uniformly random row-normalized latent matrix.
// Deterministic per seed.
inline Tensor random_decoder_sample(Autoencoder& ae, std::uint64_t seed) {
    Rng rng(seed);
    LatentMatrix raw(static_cast<int>(kLatentRows), static_cast<int>(kLatentCols));
    for (double& v : raw.values) v = rng.uniform();
    return ae.decode(latent_to_tensor(normalize_rows(raw)));
}

}  // namespace qlg
