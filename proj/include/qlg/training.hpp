// The two training phases: autoencoder pretraining on all classes (minibatch
// SGD on reconstruction MSE), then per-class adversarial training of a latent
// generator against the discriminator (1:1 alternating steps, batch size 1 by
// default, non-saturating generator loss), with periodic pixel-space FD
// snapshots recorded into a trace.

#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "qlg/dataio.hpp"
#include "qlg/eval.hpp"
#include "qlg/models.hpp"
#include "qlg/rng.hpp"

namespace qlg {

struct TrainConfig {
    double ae_lr = 0.05;
    std::size_t ae_batch = 20;
    std::size_t ae_epochs = 100;
    double gen_lr = 0.3;
    double disc_lr = 0.01;
    std::size_t gan_batch = 1;
    std::size_t gan_iterations = 490;
    int class_label = 0;
    std::uint64_t seed = 0;
    std::size_t eval_every = 10;    // FD snapshot interval (iterations)
    std::size_t eval_samples = 200; // generated vs real sample-set size per snapshot
    int n_threads = 1;

    // Zero learning rates and zero epoch/iteration counts are permitted: they
    // are the documented no-op cases (parameters unchanged).
    void validate() const {
        if (ae_lr < 0.0 || gen_lr < 0.0 || disc_lr < 0.0)
            throw DomainError("learning rates must be >= 0");
        if (ae_batch < 1 || gan_batch < 1) throw SizeError("batch sizes must be >= 1");
        if (eval_every < 1) throw SizeError("eval_every must be >= 1");
        if (eval_samples < 2) throw SizeError("eval_samples must be >= 2");
        if (class_label < 0 || class_label > 9) throw DomainError("class label must be 0-9");
        if (n_threads < 1) throw SizeError("n_threads must be >= 1");
    }
};

// Seed-stream assignment (via derive_seed): 0 generator init, 1 discriminator
// init, 2 per-iteration noise, 3 real-sample selection, 4 evaluation sets.
inline constexpr std::uint64_t kStreamGenInit = 0;
inline constexpr std::uint64_t kStreamDiscInit = 1;
inline constexpr std::uint64_t kStreamNoise = 2;
inline constexpr std::uint64_t kStreamData = 3;
inline constexpr std::uint64_t kStreamEval = 4;

struct TraceRow {
    std::size_t iter = 0;
    bool has_losses = false;
    double loss_d = 0.0;
    double loss_g = 0.0;
    bool has_fd = false;
    double fd = 0.0;
    double wall_ms = 0.0;  // informational; not part of the CSV
};

struct TrainTrace {
    std::vector<TraceRow> rows;
};

// CSV columns: iter,loss_d,loss_g,fd — header row, "." decimals, empty field
// where a value is absent (losses on the iteration-0 row, FD between
// snapshots). Wall-clock stays out so seeded runs emit identical bytes.
inline std::string trace_to_csv(const TrainTrace& trace) {
    std::string out = "iter,loss_d,loss_g,fd\n";
    for (const TraceRow& r : trace.rows) {
        out += std::to_string(r.iter);
        out += ',';
        if (r.has_losses) out += format_double(r.loss_d);
        out += ',';
        if (r.has_losses) out += format_double(r.loss_g);
        out += ',';
        if (r.has_fd) out += format_double(r.fd);
        out += '\n';
    }
    return out;
}

namespace detail {

inline Tensor image_batch(const Dataset& data, const std::vector<std::size_t>& indices,
                          std::size_t first, std::size_t count) {
    Tensor x = Tensor::zeros({count, 1, kImageSide, kImageSide});
    for (std::size_t b = 0; b < count; ++b) {
        const auto im = data.image(indices[first + b]);
        std::copy(im.begin(), im.end(), x.data.begin() + static_cast<std::ptrdiff_t>(b * kImagePixels));
    }
    return x;
}

inline void check_finite(double loss, const char* what) {
    if (!std::isfinite(loss)) throw DomainError(std::string(what) + " loss is not finite");
}

}  // namespace detail

struct AeTrainResult {
    std::vector<double> epoch_losses;  // mean per-pixel MSE per epoch
};

// Minibatch SGD on MSE(decode(encode(x)), x). Parameters are trained in
// place; callers initialize `ae` (e.g. ae.init_params) beforehand.
inline AeTrainResult train_autoencoder(Autoencoder& ae, const Dataset& data,
                                       const TrainConfig& cfg) {
    cfg.validate();
    if (data.count == 0) throw DataError("train_autoencoder: empty dataset");

    Rng shuffle_rng(derive_seed(cfg.seed, kStreamData));
    std::vector<std::size_t> indices(data.count);
    std::iota(indices.begin(), indices.end(), std::size_t{0});

    AeTrainResult result;
    for (std::size_t epoch = 0; epoch < cfg.ae_epochs; ++epoch) {
        shuffle(indices, shuffle_rng);
        double loss_sum = 0.0;
        std::size_t seen = 0;
        for (std::size_t first = 0; first < data.count; first += cfg.ae_batch) {
            const std::size_t b = std::min(cfg.ae_batch, data.count - first);
            const Tensor x = detail::image_batch(data, indices, first, b);
            const Tensor lat = ae.encoder.forward(x);
            const Tensor recon = ae.decoder.forward(lat);
            Tensor grad;
            const double loss = mse_loss(recon, x, &grad);
            detail::check_finite(loss, "autoencoder");
            // The step optimizes the per-image summed reconstruction error
            // (batch-averaged); the element-mean gradient is a factor 784 too
            // small for the configured rates to leave the mean-image plateau.
            // Reported losses stay per-pixel means.
            for (double& g : grad.data) g *= static_cast<double>(kImagePixels);
            ae.encoder.zero_grad();
            ae.decoder.zero_grad();
            const Tensor glat = ae.decoder.backward(grad);
            ae.encoder.backward(glat);
            ae.decoder.sgd_step(cfg.ae_lr);
            ae.encoder.sgd_step(cfg.ae_lr);
            loss_sum += loss * static_cast<double>(b);
            seen += b;
        }
        result.epoch_losses.push_back(loss_sum / static_cast<double>(seen));
    }
    return result;
}

// Mean per-pixel reconstruction MSE over a dataset (no parameter updates).
inline double mean_reconstruction_mse(Autoencoder& ae, const Dataset& data,
                                      std::size_t batch = 100) {
    if (data.count == 0) throw DataError("mean_reconstruction_mse: empty dataset");
    std::vector<std::size_t> indices(data.count);
    std::iota(indices.begin(), indices.end(), std::size_t{0});
    double loss_sum = 0.0;
    for (std::size_t first = 0; first < data.count; first += batch) {
        const std::size_t b = std::min(batch, data.count - first);
        const Tensor x = detail::image_batch(data, indices, first, b);
        loss_sum += mse_loss(ae.reconstruct(x), x) * static_cast<double>(b);
    }
    return loss_sum / static_cast<double>(data.count);
}

// One discriminator update: BCE(D(real),1) + BCE(D(fake),0), single SGD step;
// returns the pre-step loss. The fake latents enter as constants.
inline double discriminator_step(Discriminator& disc, const Tensor& real_latent,
                                 const Tensor& fake_latent, double lr) {
    disc.net.zero_grad();
    Tensor grad;

    const Tensor p_real = disc.forward(real_latent);
    Tensor ones = Tensor::zeros(p_real.shape);
    std::fill(ones.data.begin(), ones.data.end(), 1.0);
    const double loss_real = bce_loss(p_real, ones, &grad);
    disc.net.backward(grad);

    const Tensor p_fake = disc.forward(fake_latent);
    const Tensor zeros = Tensor::zeros(p_fake.shape);
    const double loss_fake = bce_loss(p_fake, zeros, &grad);
    disc.net.backward(grad);

    disc.net.sgd_step(lr);
    return loss_real + loss_fake;
}

// One generator update against a frozen discriminator using the
// non-saturating loss L_G = BCE(D(G(z)), 1); returns the pre-step loss.
inline double generator_step(LatentGenerator& gen, Discriminator& disc,
                             const std::vector<NoiseVector>& zs, double lr, int n_threads) {
    const std::size_t b = zs.size();
    Tensor fake = Tensor::zeros({b, kLatentDim});
    for (std::size_t i = 0; i < b; ++i) {
        const LatentMatrix y = gen.generate(zs[i]);
        std::copy(y.values.begin(), y.values.end(),
                  fake.data.begin() + static_cast<std::ptrdiff_t>(i * kLatentDim));
    }

    disc.net.zero_grad();  // discriminator gradients are scratch here; no step
    const Tensor p = disc.forward(fake);
    Tensor ones = Tensor::zeros(p.shape);
    std::fill(ones.data.begin(), ones.data.end(), 1.0);
    Tensor grad;
    const double loss = bce_loss(p, ones, &grad);
    const Tensor gx = disc.net.backward(grad);  // dL/d(latent), [b, 40]

    gen.train_step(zs, gx.data, lr, n_threads);
    return loss;
}

inline void init_gan_models(LatentGenerator& gen, Discriminator& disc, std::uint64_t seed) {
    Rng gen_rng(derive_seed(seed, kStreamGenInit));
    gen.init_params(gen_rng);
    Rng disc_rng(derive_seed(seed, kStreamDiscInit));
    disc.init_params(disc_rng);
}

// Decodes n latent matrices to flat pixels (n * 784).
inline std::vector<double> decode_latents(Autoencoder& ae, const std::vector<LatentMatrix>& lats,
                                          std::size_t batch = 50) {
    std::vector<double> pixels(lats.size() * kImagePixels);
    for (std::size_t first = 0; first < lats.size(); first += batch) {
        const std::size_t b = std::min(batch, lats.size() - first);
        Tensor t = Tensor::zeros({b, kLatentDim});
        for (std::size_t i = 0; i < b; ++i)
            std::copy(lats[first + i].values.begin(), lats[first + i].values.end(),
                      t.data.begin() + static_cast<std::ptrdiff_t>(i * kLatentDim));
        const Tensor out = ae.decode(t);
        std::copy(out.data.begin(), out.data.end(),
                  pixels.begin() + static_cast<std::ptrdiff_t>(first * kImagePixels));
    }
    return pixels;
}

// Adversarial training on one class's latent representations. `gen` and
// `disc` train in place (see init_gan_models); `ae` stays frozen and supplies
// encodings plus the decoder for FD snapshots. FD is recorded before training
// (iteration 0) and after every eval_every-th iteration.
inline TrainTrace train_qgan(LatentGenerator& gen, Discriminator& disc, Autoencoder& ae,
                             const Dataset& class_data, const TrainConfig& cfg) {
    cfg.validate();
    if (class_data.count == 0) throw DataError("train_qgan: empty class dataset");

    Rng noise_rng(derive_seed(cfg.seed, kStreamNoise));
    Rng data_rng(derive_seed(cfg.seed, kStreamData));
    Rng eval_rng(derive_seed(cfg.seed, kStreamEval));

    const GeneratorConfig noise_cfg;  // noise dimension/range of the default pipeline
    if (gen.noise_dim() != static_cast<std::size_t>(noise_cfg.total_qubits()))
        throw ShapeError("train_qgan: generator noise dimension != 4");

    // Encode every class image once (the autoencoder is frozen).
    std::vector<double> real_latents(class_data.count * kLatentDim);
    {
        std::vector<std::size_t> all(class_data.count);
        std::iota(all.begin(), all.end(), std::size_t{0});
        const std::size_t batch = 100;
        for (std::size_t first = 0; first < class_data.count; first += batch) {
            const std::size_t b = std::min(batch, class_data.count - first);
            const Tensor lat = ae.encode(detail::image_batch(class_data, all, first, b));
            std::copy(lat.data.begin(), lat.data.end(),
                      real_latents.begin() + static_cast<std::ptrdiff_t>(first * kLatentDim));
        }
    }

    // Fixed evaluation sets: a real-image subset and a noise set, both drawn
    // once up front from the eval stream.
    const std::size_t n_eval = std::min(cfg.eval_samples, class_data.count);
    std::vector<std::size_t> eval_indices(class_data.count);
    std::iota(eval_indices.begin(), eval_indices.end(), std::size_t{0});
    shuffle(eval_indices, eval_rng);
    eval_indices.resize(n_eval);
    std::vector<double> real_eval_pixels(n_eval * kImagePixels);
    for (std::size_t i = 0; i < n_eval; ++i) {
        const auto im = class_data.image(eval_indices[i]);
        std::copy(im.begin(), im.end(),
                  real_eval_pixels.begin() + static_cast<std::ptrdiff_t>(i * kImagePixels));
    }
    std::vector<NoiseVector> eval_noise(n_eval);
    for (auto& z : eval_noise) z = sample_noise(noise_cfg, eval_rng);

    const auto t0 = std::chrono::steady_clock::now();
    auto wall_ms = [&t0]() {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();
    };

    auto fd_snapshot = [&]() {
        std::vector<LatentMatrix> lats;
        lats.reserve(n_eval);
        for (const NoiseVector& z : eval_noise) lats.push_back(gen.generate(z));
        const std::vector<double> gen_pixels = decode_latents(ae, lats);
        return fd_pixels(real_eval_pixels, n_eval, gen_pixels, n_eval).fd;
    };

    TrainTrace trace;
    trace.rows.push_back(TraceRow{0, false, 0.0, 0.0, true, fd_snapshot(), wall_ms()});

    for (std::size_t iter = 1; iter <= cfg.gan_iterations; ++iter) {
        // One fresh noise vector per batch slot per iteration, used for both
        // the discriminator's fake batch and the generator update.
        std::vector<NoiseVector> zs(cfg.gan_batch);
        for (auto& z : zs) z = sample_noise(noise_cfg, noise_rng);

        Tensor real = Tensor::zeros({cfg.gan_batch, kLatentDim});
        for (std::size_t b = 0; b < cfg.gan_batch; ++b) {
            const std::size_t pick = static_cast<std::size_t>(data_rng.integer(class_data.count));
            std::copy(real_latents.begin() + static_cast<std::ptrdiff_t>(pick * kLatentDim),
                      real_latents.begin() + static_cast<std::ptrdiff_t>((pick + 1) * kLatentDim),
                      real.data.begin() + static_cast<std::ptrdiff_t>(b * kLatentDim));
        }

        Tensor fake = Tensor::zeros({cfg.gan_batch, kLatentDim});
        for (std::size_t b = 0; b < cfg.gan_batch; ++b) {
            const LatentMatrix y = gen.generate(zs[b]);
            std::copy(y.values.begin(), y.values.end(),
                      fake.data.begin() + static_cast<std::ptrdiff_t>(b * kLatentDim));
        }

        const double loss_d = discriminator_step(disc, real, fake, cfg.disc_lr);
        const double loss_g = generator_step(gen, disc, zs, cfg.gen_lr, cfg.n_threads);
        detail::check_finite(loss_d, "discriminator");
        detail::check_finite(loss_g, "generator");

        TraceRow row{iter, true, loss_d, loss_g, false, 0.0, 0.0};
        if (iter % cfg.eval_every == 0) {
            row.has_fd = true;
            row.fd = fd_snapshot();
        }
        row.wall_ms = wall_ms();
        trace.rows.push_back(row);
    }
    return trace;
}

}  // namespace qlg
