#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "qlg/models.hpp"
#include "qlg/rng.hpp"

using namespace qlg;
using Catch::Approx;

namespace {

Tensor random_images(std::size_t n, Rng& rng) {
    Tensor t = Tensor::zeros({n, 1, kImageSide, kImageSide});
    for (double& v : t.data) v = rng.uniform();
    return t;
}

}  // namespace

TEST_CASE("model parameter budgets", "[models]") {
    Discriminator disc;
    CHECK(disc.net.param_count() == 3681);

    ClassicalGenerator cgen;
    CHECK(cgen.param_count() == 140);
    CHECK(cgen.noise_dim() == 4);

    QuantumLatentGenerator qgen{GeneratorConfig{}};
    CHECK(qgen.param_count() == 140);
    CHECK(qgen.noise_dim() == 4);

    CHECK(qgen.kind() == std::string("quantum"));
    CHECK(cgen.kind() == std::string("classical"));
}

TEST_CASE("encoder output rows are unit-sum distributions", "[models]") {
    Autoencoder ae;
    Rng rng(21);
    ae.init_params(rng);

    const Tensor x = random_images(3, rng);
    const Tensor enc = ae.encode(x);
    REQUIRE(enc.shape == std::vector<std::size_t>{3, kLatentDim});
    for (std::size_t b = 0; b < 3; ++b) {
        const LatentMatrix h = latent_from_tensor(enc, b);
        REQUIRE(h.rows == kLatentRows);
        REQUIRE(h.cols == kLatentCols);
        for (int r = 0; r < h.rows; ++r) {
            CHECK(h.row_sum(r) == Approx(1.0).margin(1e-12));
            for (int c = 0; c < h.cols; ++c) CHECK(h.at(r, c) >= 0.0);
        }
    }

    // zero-initialized network feeds zeros into the normalizer -> uniform rows
    Autoencoder zero_ae;
    const LatentMatrix hu = latent_from_tensor(zero_ae.encode(random_images(1, rng)), 0);
    for (int c = 0; c < hu.cols; ++c) CHECK(hu.at(0, c) == Approx(1.0 / kLatentCols));

    // deterministic: same input twice gives identical latents
    const Tensor enc2 = ae.encode(x);
    CHECK(enc.data == enc2.data);

    CHECK_THROWS_AS(ae.encode(Tensor::zeros({1, 1, 27, 28})), ShapeError);
    CHECK_THROWS_AS(ae.encode(Tensor::zeros({1, 2, 28, 28})), ShapeError);
}

TEST_CASE("decoder maps latents to unit-interval images", "[models]") {
    Autoencoder ae;
    Rng rng(22);
    ae.init_params(rng);

    Tensor lat = Tensor::zeros({2, kLatentDim});
    for (double& v : lat.data) v = rng.uniform();
    const Tensor img = ae.decode(lat);
    REQUIRE(img.shape == std::vector<std::size_t>{2, 1, kImageSide, kImageSide});
    for (double v : img.data) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }

    // zero weights -> sigmoid(0) everywhere
    Autoencoder zero_ae;
    const Tensor half = zero_ae.decode(Tensor::zeros({1, kLatentDim}));
    for (double v : half.data) CHECK(v == Approx(0.5));

    CHECK_THROWS_AS(ae.decode(Tensor::zeros({1, kLatentDim + 1})), ShapeError);
}

TEST_CASE("reconstruct composes encode and decode", "[models]") {
    Autoencoder ae;
    Rng rng(23);
    ae.init_params(rng);
    const Tensor x = random_images(2, rng);
    const Tensor direct = ae.decode(ae.encode(x));
    const Tensor recon = ae.reconstruct(x);
    CHECK(recon.data == direct.data);
}

TEST_CASE("latent matrix / tensor round trip", "[models]") {
    Rng rng(24);
    LatentMatrix m(kLatentRows, kLatentCols);
    for (double& v : m.values) v = rng.uniform();
    const Tensor t = latent_to_tensor(m);
    REQUIRE(t.shape == std::vector<std::size_t>{1, kLatentDim});
    const LatentMatrix back = latent_from_tensor(t, 0);
    CHECK(back.values == m.values);

    CHECK_THROWS_AS(latent_from_tensor(t, 1), ShapeError);
    CHECK_THROWS_AS(latent_to_tensor(LatentMatrix(2, 8)), ShapeError);
}

TEST_CASE("discriminator outputs probabilities", "[models]") {
    Discriminator disc;
    Rng rng(25);

    // zero-initialized network scores 0.5
    Tensor lat = Tensor::zeros({4, kLatentDim});
    for (double& v : lat.data) v = rng.uniform();
    Tensor score = disc.forward(lat);
    REQUIRE(score.shape == std::vector<std::size_t>{4, 1});
    for (double v : score.data) CHECK(v == Approx(0.5));

    disc.init_params(rng);
    score = disc.forward(lat);
    for (double v : score.data) {
        CHECK(v > 0.0);
        CHECK(v < 1.0);
    }

    CHECK_THROWS_AS(disc.forward(Tensor::zeros({1, 39})), ShapeError);
}

TEST_CASE("quantum latent generator wraps the circuit family", "[models]") {
    GeneratorConfig cfg;
    QuantumLatentGenerator gen(cfg);
    Rng rng(26);
    gen.init_params(rng);

    const NoiseVector z = sample_noise(cfg, rng);
    const LatentMatrix direct = run_generator(gen.params(), z, cfg);
    const LatentMatrix via = gen.generate(z);
    CHECK(via.values == direct.values);
    REQUIRE(via.rows == cfg.sub_generators);
    REQUIRE(via.cols == cfg.row_width());
    for (int r = 0; r < via.rows; ++r) CHECK(via.row_sum(r) == Approx(1.0).margin(1e-12));
}

TEST_CASE("classical generator emits normalized rows and rejects shot mode", "[models]") {
    ClassicalGenerator gen;
    Rng rng(27);
    gen.init_params(rng);

    NoiseVector z(gen.noise_dim());
    for (double& v : z) v = rng.uniform(0.0, 3.141592653589793);
    const LatentMatrix h = gen.generate(z);
    REQUIRE(h.rows == kLatentRows);
    REQUIRE(h.cols == kLatentCols);
    for (int r = 0; r < h.rows; ++r) CHECK(h.row_sum(r) == Approx(1.0).margin(1e-12));

    CHECK_THROWS_AS(gen.generate_sampled(z, 1024, 7), UnsupportedModeError);
}

TEST_CASE("random decoder baseline is seed-deterministic", "[models]") {
    Autoencoder ae;
    Rng rng(28);
    ae.init_params(rng);

    const Tensor a = random_decoder_sample(ae, 99);
    const Tensor b = random_decoder_sample(ae, 99);
    const Tensor c = random_decoder_sample(ae, 100);
    REQUIRE(a.shape == std::vector<std::size_t>{1, 1, kImageSide, kImageSide});
    CHECK(a.data == b.data);
    CHECK(a.data != c.data);
    for (double v : a.data) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
}
