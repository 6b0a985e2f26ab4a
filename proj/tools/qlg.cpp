// Command-line surface for the latent-space quantum GAN pipeline:
// dataset ingestion, autoencoder / adversarial training, sample generation,
// baselines and Frechet-distance reports. All file I/O happens here; the
// library headers stay pure.
#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "qlg/dataio.hpp"
#include "qlg/training.hpp"

namespace {

using namespace qlg;

Dataset load_dataset(const std::string& dir) {
    const std::filesystem::path d(dir);
    return load_mnist_idx(d / "train-images-idx3-ubyte", d / "train-labels-idx1-ubyte");
}

std::size_t grid_cols(std::size_t count) { return std::min<std::size_t>(count, 10); }

struct TrainAeOpts {
    std::string data = "data";
    std::string out;
    std::size_t epochs = 100;
    double lr = 0.05;
    std::size_t batch = 20;
    std::uint64_t seed = 0;
};

int cmd_train_ae(const TrainAeOpts& o) {
    const Dataset ds = load_dataset(o.data);
    std::cout << "loaded " << ds.count << " images from " << o.data << "\n";

    Autoencoder ae;
    Rng init_rng(derive_seed(o.seed, kStreamGenInit));
    ae.init_params(init_rng);

    TrainConfig cfg;
    cfg.ae_epochs = o.epochs;
    cfg.ae_lr = o.lr;
    cfg.ae_batch = o.batch;
    cfg.seed = o.seed;

    const AeTrainResult res = train_autoencoder(ae, ds, cfg);
    for (std::size_t e = 0; e < res.epoch_losses.size(); ++e)
        std::cout << "epoch " << (e + 1) << " mse " << format_double(res.epoch_losses[e]) << "\n";

    save_checkpoint(autoencoder_to_checkpoint(ae, o.seed), o.out);
    std::cout << "wrote " << o.out << "\n";
    return 0;
}

struct TrainQganOpts {
    std::string ae;
    std::string data = "data";
    std::string out;
    std::string trace;
    std::string generator = "quantum";
    int class_label = 0;
    std::size_t iters = 490;
    double gen_lr = 0.3;
    double disc_lr = 0.01;
    std::uint64_t seed = 0;
    int threads = 1;
};

int cmd_train_qgan(const TrainQganOpts& o) {
    Autoencoder ae = autoencoder_from_checkpoint(load_checkpoint(o.ae));
    const Dataset cls = filter_class(load_dataset(o.data), o.class_label);
    std::cout << "class " << o.class_label << ": " << cls.count << " images\n";

    std::unique_ptr<LatentGenerator> gen;
    if (o.generator == "quantum")
        gen = std::make_unique<QuantumLatentGenerator>(GeneratorConfig{});
    else
        gen = std::make_unique<ClassicalGenerator>();
    Discriminator disc;
    init_gan_models(*gen, disc, o.seed);

    TrainConfig cfg;
    cfg.gan_iterations = o.iters;
    cfg.gen_lr = o.gen_lr;
    cfg.disc_lr = o.disc_lr;
    cfg.class_label = o.class_label;
    cfg.seed = o.seed;
    cfg.n_threads = o.threads;

    const TrainTrace trace = train_qgan(*gen, disc, ae, cls, cfg);
    write_file_atomic(o.trace, trace_to_csv(trace));
    save_checkpoint(generator_to_checkpoint(*gen, o.seed), o.out);

    const TraceRow& first = trace.rows.front();
    const TraceRow& last = trace.rows.back();
    std::cout << "fd " << format_double(first.fd) << " -> ";
    if (last.has_fd)
        std::cout << format_double(last.fd);
    else
        std::cout << "(no snapshot at final iteration)";
    std::cout << " over " << o.iters << " iterations\n";
    std::cout << "wrote " << o.out << " and " << o.trace << "\n";
    return 0;
}

struct GenerateOpts {
    std::string ae;
    std::string gen;
    std::string out;
    std::size_t count = 0;
    std::int64_t shots = 2048;
    bool shots_given = false;
    std::uint64_t seed = 0;
};

int cmd_generate(const GenerateOpts& o) {
    Autoencoder ae = autoencoder_from_checkpoint(load_checkpoint(o.ae));
    auto gen = generator_from_checkpoint(load_checkpoint(o.gen));

    GeneratorConfig noise_cfg;
    if (auto* q = dynamic_cast<QuantumLatentGenerator*>(gen.get())) noise_cfg = q->config();
    const bool sampled = (o.shots > 0) && (gen->kind() == std::string("quantum") || o.shots_given);

    Rng noise_rng(derive_seed(o.seed, kStreamNoise));
    const std::uint64_t shot_root = derive_seed(o.seed, kStreamEval);
    std::vector<LatentMatrix> lats;
    lats.reserve(o.count);
    for (std::size_t i = 0; i < o.count; ++i) {
        const NoiseVector z = sample_noise(noise_cfg, noise_rng);
        if (z.size() != gen->noise_dim()) throw ShapeError("noise dimension mismatch");
        if (sampled)
            lats.push_back(gen->generate_sampled(z, o.shots, derive_seed(shot_root, i)));
        else
            lats.push_back(gen->generate(z));
    }

    const std::vector<double> pixels = decode_latents(ae, lats);
    save_image_grid(pixels, o.count, grid_cols(o.count), o.out);
    std::cout << "wrote " << o.count << " image(s) to " << o.out
              << (sampled ? " (" + std::to_string(o.shots) + " shots)" : " (analytic)") << "\n";
    return 0;
}

struct FdOpts {
    std::string data = "data";
    int real_class = 0;
    std::vector<std::string> gen_images;
    std::string out;
};

int cmd_fd(const FdOpts& o) {
    const Dataset cls = filter_class(load_dataset(o.data), o.real_class);

    std::vector<double> gen_pixels;
    std::size_t n_gen = 0;
    for (const std::string& path : o.gen_images) {
        const ImageGrid grid = load_image_grid(path);
        gen_pixels.insert(gen_pixels.end(), grid.pixels.begin(), grid.pixels.end());
        n_gen += grid.count;
    }

    const FdReport rep = fd_pixels(cls.pixels, cls.count, gen_pixels, n_gen);
    std::string csv = "class,iteration,n_real,n_gen,fd\n";
    csv += std::to_string(o.real_class) + ",," + std::to_string(rep.n_real) + "," +
           std::to_string(rep.n_gen) + "," + format_double(rep.fd) + "\n";
    write_file_atomic(o.out, csv);
    std::cout << "fd " << format_double(rep.fd) << " (" << rep.n_real << " real vs " << rep.n_gen
              << " generated)\n";
    return 0;
}

struct BaselineOpts {
    std::string ae;
    std::string out;
    std::size_t count = 0;
    std::uint64_t seed = 0;
};

int cmd_baseline_random_decoder(const BaselineOpts& o) {
    Autoencoder ae = autoencoder_from_checkpoint(load_checkpoint(o.ae));
    std::vector<double> pixels;
    pixels.reserve(o.count * kImagePixels);
    for (std::size_t i = 0; i < o.count; ++i) {
        const Tensor img = random_decoder_sample(ae, derive_seed(o.seed, i));
        pixels.insert(pixels.end(), img.data.begin(), img.data.end());
    }
    save_image_grid(pixels, o.count, grid_cols(o.count), o.out);
    std::cout << "wrote " << o.count << " baseline image(s) to " << o.out << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Latent-space quantum GAN: train, generate and evaluate"};
    app.require_subcommand(1);

    TrainAeOpts ae_opts;
    CLI::App* sub_ae = app.add_subcommand("train-ae", "Train the convolutional autoencoder");
    sub_ae->add_option("--data", ae_opts.data, "Directory with MNIST IDX files")
        ->capture_default_str();
    sub_ae->add_option("--out", ae_opts.out, "Output checkpoint path")->required();
    sub_ae->add_option("--epochs", ae_opts.epochs)->capture_default_str();
    sub_ae->add_option("--lr", ae_opts.lr)->capture_default_str();
    sub_ae->add_option("--batch", ae_opts.batch)->capture_default_str();
    sub_ae->add_option("--seed", ae_opts.seed)->capture_default_str();

    TrainQganOpts qgan_opts;
    CLI::App* sub_qgan =
        app.add_subcommand("train-qgan", "Adversarially train a latent generator");
    sub_qgan->add_option("--ae", qgan_opts.ae, "Autoencoder checkpoint")->required();
    sub_qgan->add_option("--data", qgan_opts.data, "Directory with MNIST IDX files")
        ->capture_default_str();
    sub_qgan->add_option("--class", qgan_opts.class_label, "Digit class to model")
        ->capture_default_str();
    sub_qgan->add_option("--out", qgan_opts.out, "Output generator checkpoint")->required();
    sub_qgan->add_option("--trace", qgan_opts.trace, "Training-trace CSV path")->required();
    sub_qgan->add_option("--iters", qgan_opts.iters)->capture_default_str();
    sub_qgan->add_option("--gen-lr", qgan_opts.gen_lr)->capture_default_str();
    sub_qgan->add_option("--disc-lr", qgan_opts.disc_lr)->capture_default_str();
    sub_qgan->add_option("--seed", qgan_opts.seed)->capture_default_str();
    sub_qgan->add_option("--generator", qgan_opts.generator, "quantum or classical")
        ->check(CLI::IsMember({"quantum", "classical"}))
        ->capture_default_str();
    sub_qgan->add_option("--threads", qgan_opts.threads, "Parameter-shift worker threads")
        ->capture_default_str();

    GenerateOpts gen_opts;
    CLI::App* sub_gen = app.add_subcommand("generate", "Decode generator samples to a PGM grid");
    sub_gen->add_option("--ae", gen_opts.ae, "Autoencoder checkpoint")->required();
    sub_gen->add_option("--gen", gen_opts.gen, "Generator checkpoint")->required();
    sub_gen->add_option("--count", gen_opts.count, "Number of images")->required();
    sub_gen->add_option("--out", gen_opts.out, "Output PGM path")->required();
    CLI::Option* shots_opt =
        sub_gen->add_option("--shots", gen_opts.shots, "Measurement shots; 0 = analytic")
            ->capture_default_str();
    sub_gen->add_option("--seed", gen_opts.seed)->capture_default_str();

    FdOpts fd_opts;
    CLI::App* sub_fd = app.add_subcommand("fd", "Frechet distance of generated images vs a class");
    sub_fd->add_option("--data", fd_opts.data, "Directory with MNIST IDX files")
        ->capture_default_str();
    sub_fd->add_option("--real-class", fd_opts.real_class, "Digit class for the real side")
        ->required();
    sub_fd->add_option("--gen-images", fd_opts.gen_images, "PGM grid(s) of generated images")
        ->required()
        ->expected(-1);
    sub_fd->add_option("--out", fd_opts.out, "Output CSV path")->required();

    BaselineOpts base_opts;
    CLI::App* sub_base = app.add_subcommand("baseline", "Reference baselines");
    sub_base->require_subcommand(1);
    CLI::App* sub_rd = sub_base->add_subcommand(
        "random-decoder", "Decode uniform row-normalized latents without a generator");
    sub_rd->add_option("--ae", base_opts.ae, "Autoencoder checkpoint")->required();
    sub_rd->add_option("--count", base_opts.count, "Number of images")->required();
    sub_rd->add_option("--out", base_opts.out, "Output PGM path")->required();
    sub_rd->add_option("--seed", base_opts.seed)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << e.what() << "\n\n" << app.help();
        return 2;
    }

    gen_opts.shots_given = shots_opt->count() > 0;

    try {
        if (sub_ae->parsed()) return cmd_train_ae(ae_opts);
        if (sub_qgan->parsed()) return cmd_train_qgan(qgan_opts);
        if (sub_gen->parsed()) return cmd_generate(gen_opts);
        if (sub_fd->parsed()) return cmd_fd(fd_opts);
        if (sub_base->parsed() && sub_rd->parsed()) return cmd_baseline_random_decoder(base_opts);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    std::cerr << "no subcommand selected\n";
    return 2;
}
