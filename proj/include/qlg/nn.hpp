// Minimal reverse-mode layer stack: dense, 2-D convolution, 2-D transposed
// convolution, ReLU, sigmoid, flatten/reshape, row normalization, MSE and BCE
// losses, plain SGD. Backpropagation is hand-written per layer; networks are
// fixed sequential pipelines (no graph tracing).
//
// Conventions: every tensor carries a leading batch dimension, data is
// row-major double precision, conv weights are [out_ch, in_ch, k, k] and
// transposed-conv weights are [in_ch, out_ch, k, k] (so a conv and its
// adjoint can share one weight buffer).

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "qlg/errors.hpp"
#include "qlg/rng.hpp"

namespace qlg {

struct Tensor {
    std::vector<std::size_t> shape;
    std::vector<double> data;
    std::vector<double> grad;  // allocated only for trainable parameters

    Tensor() = default;

    static Tensor zeros(std::vector<std::size_t> shape) {
        Tensor t;
        t.shape = std::move(shape);
        t.data.assign(t.shape_numel(), 0.0);
        return t;
    }

    static Tensor from(std::vector<std::size_t> shape, std::vector<double> values) {
        Tensor t;
        t.shape = std::move(shape);
        t.data = std::move(values);
        if (t.data.size() != t.shape_numel()) throw ShapeError("tensor data does not match shape");
        return t;
    }

    std::size_t shape_numel() const {
        std::size_t n = 1;
        for (std::size_t d : shape) n *= d;
        return n;
    }

    std::size_t numel() const { return data.size(); }
    std::size_t dim(std::size_t i) const { return shape.at(i); }
    std::size_t rank() const { return shape.size(); }

    void ensure_grad() {
        if (grad.size() != data.size()) grad.assign(data.size(), 0.0);
    }
    void zero_grad() {
        if (!grad.empty()) std::fill(grad.begin(), grad.end(), 0.0);
    }

    bool all_finite() const {
        for (double v : data)
            if (!std::isfinite(v)) return false;
        return true;
    }
};

struct NamedParam {
    std::string name;
    Tensor* value;
};

class Layer {
  public:
    virtual ~Layer() = default;
    virtual Tensor forward(const Tensor& x) = 0;
    virtual Tensor backward(const Tensor& gy) = 0;
    virtual void collect_params(const std::string& prefix, std::vector<NamedParam>& out) {
        (void)prefix;
        (void)out;
    }
    virtual void init_params(Rng& rng) { (void)rng; }
    virtual std::string kind() const = 0;

  protected:
    void require_forward(bool have) const {
        if (!have) throw StateError(kind() + ": backward called before forward");
    }
};

namespace detail {
inline double fan_in_uniform(Rng& rng, std::size_t fan_in) {
    const double bound = std::sqrt(1.0 / static_cast<double>(fan_in));
    return rng.uniform(-bound, bound);
}
}  // namespace detail

class Dense : public Layer {
  public:
    Dense(std::size_t in, std::size_t out, bool with_bias = true)
        : in_(in), out_(out), with_bias_(with_bias) {
        w_ = Tensor::zeros({in, out});
        b_ = Tensor::zeros({out});
        w_.ensure_grad();
        b_.ensure_grad();
    }

    void init_params(Rng& rng) override {
        for (double& v : w_.data) v = detail::fan_in_uniform(rng, in_);
    }

    Tensor forward(const Tensor& x) override {
        if (x.rank() != 2 || x.dim(1) != in_) throw ShapeError("dense: expected [batch, " +
                                                               std::to_string(in_) + "] input");
        x_ = x;
        const std::size_t batch = x.dim(0);
        Tensor y = Tensor::zeros({batch, out_});
        for (std::size_t b = 0; b < batch; ++b) {
            const double* xr = &x.data[b * in_];
            double* yr = &y.data[b * out_];
            if (with_bias_)
                for (std::size_t o = 0; o < out_; ++o) yr[o] = b_.data[o];
            for (std::size_t i = 0; i < in_; ++i) {
                const double xv = xr[i];
                const double* wr = &w_.data[i * out_];
                for (std::size_t o = 0; o < out_; ++o) yr[o] += xv * wr[o];
            }
        }
        have_forward_ = true;
        return y;
    }

    Tensor backward(const Tensor& gy) override {
        require_forward(have_forward_);
        if (gy.rank() != 2 || gy.dim(0) != x_.dim(0) || gy.dim(1) != out_)
            throw ShapeError("dense: upstream gradient shape mismatch");
        const std::size_t batch = x_.dim(0);
        Tensor gx = Tensor::zeros(x_.shape);
        for (std::size_t b = 0; b < batch; ++b) {
            const double* xr = &x_.data[b * in_];
            const double* gyr = &gy.data[b * out_];
            double* gxr = &gx.data[b * in_];
            for (std::size_t i = 0; i < in_; ++i) {
                const double* wr = &w_.data[i * out_];
                double* gwr = &w_.grad[i * out_];
                double acc = 0.0;
                for (std::size_t o = 0; o < out_; ++o) {
                    acc += gyr[o] * wr[o];
                    gwr[o] += xr[i] * gyr[o];
                }
                gxr[i] = acc;
            }
            if (with_bias_)
                for (std::size_t o = 0; o < out_; ++o) b_.grad[o] += gyr[o];
        }
        return gx;
    }

    void collect_params(const std::string& prefix, std::vector<NamedParam>& out) override {
        out.push_back({prefix + ".weight", &w_});
        if (with_bias_) out.push_back({prefix + ".bias", &b_});
    }

    std::string kind() const override { return "dense"; }

    Tensor& weight() { return w_; }
    Tensor& bias() { return b_; }

  private:
    std::size_t in_, out_;
    bool with_bias_;
    Tensor w_, b_, x_;
    bool have_forward_ = false;
};

class Conv2d : public Layer {
  public:
    Conv2d(std::size_t in_ch, std::size_t out_ch, std::size_t kernel, std::size_t stride,
           std::size_t pad)
        : cin_(in_ch), cout_(out_ch), k_(kernel), s_(stride), p_(pad) {
        if (stride == 0) throw ShapeError("conv2d: stride must be >= 1");
        w_ = Tensor::zeros({cout_, cin_, k_, k_});
        b_ = Tensor::zeros({cout_});
        w_.ensure_grad();
        b_.ensure_grad();
    }

    void init_params(Rng& rng) override {
        for (double& v : w_.data) v = detail::fan_in_uniform(rng, cin_ * k_ * k_);
    }

    Tensor forward(const Tensor& x) override {
        check_input(x);
        x_ = x;
        const std::size_t batch = x.dim(0), h = x.dim(2), w = x.dim(3);
        const std::size_t ho = (h + 2 * p_ - k_) / s_ + 1;
        const std::size_t wo = (w + 2 * p_ - k_) / s_ + 1;
        Tensor y = Tensor::zeros({batch, cout_, ho, wo});
        for (std::size_t b = 0; b < batch; ++b)
            for (std::size_t co = 0; co < cout_; ++co)
                for (std::size_t i = 0; i < ho; ++i)
                    for (std::size_t j = 0; j < wo; ++j) {
                        double acc = b_.data[co];
                        for (std::size_t ci = 0; ci < cin_; ++ci)
                            for (std::size_t u = 0; u < k_; ++u) {
                                const std::ptrdiff_t hi =
                                    static_cast<std::ptrdiff_t>(i * s_ + u) -
                                    static_cast<std::ptrdiff_t>(p_);
                                if (hi < 0 || hi >= static_cast<std::ptrdiff_t>(h)) continue;
                                for (std::size_t v = 0; v < k_; ++v) {
                                    const std::ptrdiff_t wi =
                                        static_cast<std::ptrdiff_t>(j * s_ + v) -
                                        static_cast<std::ptrdiff_t>(p_);
                                    if (wi < 0 || wi >= static_cast<std::ptrdiff_t>(w)) continue;
                                    acc += w_.data[((co * cin_ + ci) * k_ + u) * k_ + v] *
                                           x.data[((b * cin_ + ci) * h + hi) * w + wi];
                                }
                            }
                        y.data[((b * cout_ + co) * ho + i) * wo + j] = acc;
                    }
        have_forward_ = true;
        return y;
    }

    Tensor backward(const Tensor& gy) override {
        require_forward(have_forward_);
        const std::size_t batch = x_.dim(0), h = x_.dim(2), w = x_.dim(3);
        const std::size_t ho = (h + 2 * p_ - k_) / s_ + 1;
        const std::size_t wo = (w + 2 * p_ - k_) / s_ + 1;
        if (gy.shape != std::vector<std::size_t>{batch, cout_, ho, wo})
            throw ShapeError("conv2d: upstream gradient shape mismatch");
        Tensor gx = Tensor::zeros(x_.shape);
        for (std::size_t b = 0; b < batch; ++b)
            for (std::size_t co = 0; co < cout_; ++co)
                for (std::size_t i = 0; i < ho; ++i)
                    for (std::size_t j = 0; j < wo; ++j) {
                        const double g = gy.data[((b * cout_ + co) * ho + i) * wo + j];
                        b_.grad[co] += g;
                        for (std::size_t ci = 0; ci < cin_; ++ci)
                            for (std::size_t u = 0; u < k_; ++u) {
                                const std::ptrdiff_t hi =
                                    static_cast<std::ptrdiff_t>(i * s_ + u) -
                                    static_cast<std::ptrdiff_t>(p_);
                                if (hi < 0 || hi >= static_cast<std::ptrdiff_t>(h)) continue;
                                for (std::size_t v = 0; v < k_; ++v) {
                                    const std::ptrdiff_t wi =
                                        static_cast<std::ptrdiff_t>(j * s_ + v) -
                                        static_cast<std::ptrdiff_t>(p_);
                                    if (wi < 0 || wi >= static_cast<std::ptrdiff_t>(w)) continue;
                                    const std::size_t wi_idx =
                                        ((co * cin_ + ci) * k_ + u) * k_ + v;
                                    const std::size_t xi_idx = ((b * cin_ + ci) * h + hi) * w + wi;
                                    w_.grad[wi_idx] += x_.data[xi_idx] * g;
                                    gx.data[xi_idx] += w_.data[wi_idx] * g;
                                }
                            }
                    }
        return gx;
    }

    void collect_params(const std::string& prefix, std::vector<NamedParam>& out) override {
        out.push_back({prefix + ".weight", &w_});
        out.push_back({prefix + ".bias", &b_});
    }

    std::string kind() const override { return "conv2d"; }

    Tensor& weight() { return w_; }
    Tensor& bias() { return b_; }

  private:
    void check_input(const Tensor& x) const {
        if (x.rank() != 4 || x.dim(1) != cin_) throw ShapeError("conv2d: expected [b, c, h, w]");
        if (x.dim(2) + 2 * p_ < k_ || x.dim(3) + 2 * p_ < k_)
            throw ShapeError("conv2d: kernel larger than padded input");
    }

    std::size_t cin_, cout_, k_, s_, p_;
    Tensor w_, b_, x_;
    bool have_forward_ = false;
};

// Gradient-of-convolution operator: scatter-adds strided kernel copies.
class TConv2d : public Layer {
  public:
    TConv2d(std::size_t in_ch, std::size_t out_ch, std::size_t kernel, std::size_t stride,
            std::size_t pad, std::size_t out_pad)
        : cin_(in_ch), cout_(out_ch), k_(kernel), s_(stride), p_(pad), op_(out_pad) {
        if (stride == 0) throw ShapeError("tconv2d: stride must be >= 1");
        if (op_ >= s_) throw ShapeError("tconv2d: output_padding must be < stride");
        w_ = Tensor::zeros({cin_, cout_, k_, k_});
        b_ = Tensor::zeros({cout_});
        w_.ensure_grad();
        b_.ensure_grad();
    }

    void init_params(Rng& rng) override {
        for (double& v : w_.data) v = detail::fan_in_uniform(rng, cin_ * k_ * k_);
    }

    std::pair<std::size_t, std::size_t> output_dims(std::size_t h, std::size_t w) const {
        const std::ptrdiff_t ho = static_cast<std::ptrdiff_t>((h - 1) * s_ + k_ + op_) -
                                  static_cast<std::ptrdiff_t>(2 * p_);
        const std::ptrdiff_t wo = static_cast<std::ptrdiff_t>((w - 1) * s_ + k_ + op_) -
                                  static_cast<std::ptrdiff_t>(2 * p_);
        if (ho < 1 || wo < 1) throw ShapeError("tconv2d: non-positive output dims");
        return {static_cast<std::size_t>(ho), static_cast<std::size_t>(wo)};
    }

    Tensor forward(const Tensor& x) override {
        if (x.rank() != 4 || x.dim(1) != cin_) throw ShapeError("tconv2d: expected [b, c, h, w]");
        x_ = x;
        const std::size_t batch = x.dim(0), h = x.dim(2), w = x.dim(3);
        const auto [ho, wo] = output_dims(h, w);
        Tensor y = Tensor::zeros({batch, cout_, ho, wo});
        for (std::size_t b = 0; b < batch; ++b)
            for (std::size_t co = 0; co < cout_; ++co) {
                double* yc = &y.data[(b * cout_ + co) * ho * wo];
                for (std::size_t i = 0; i < ho * wo; ++i) yc[i] = b_.data[co];
            }
        for (std::size_t b = 0; b < batch; ++b)
            for (std::size_t ci = 0; ci < cin_; ++ci)
                for (std::size_t i = 0; i < h; ++i)
                    for (std::size_t j = 0; j < w; ++j) {
                        const double xv = x.data[((b * cin_ + ci) * h + i) * w + j];
                        for (std::size_t co = 0; co < cout_; ++co)
                            for (std::size_t u = 0; u < k_; ++u) {
                                const std::ptrdiff_t oi = static_cast<std::ptrdiff_t>(i * s_ + u) -
                                                          static_cast<std::ptrdiff_t>(p_);
                                if (oi < 0 || oi >= static_cast<std::ptrdiff_t>(ho)) continue;
                                for (std::size_t v = 0; v < k_; ++v) {
                                    const std::ptrdiff_t oj =
                                        static_cast<std::ptrdiff_t>(j * s_ + v) -
                                        static_cast<std::ptrdiff_t>(p_);
                                    if (oj < 0 || oj >= static_cast<std::ptrdiff_t>(wo)) continue;
                                    y.data[((b * cout_ + co) * ho + oi) * wo + oj] +=
                                        w_.data[((ci * cout_ + co) * k_ + u) * k_ + v] * xv;
                                }
                            }
                    }
        have_forward_ = true;
        return y;
    }

    Tensor backward(const Tensor& gy) override {
        require_forward(have_forward_);
        const std::size_t batch = x_.dim(0), h = x_.dim(2), w = x_.dim(3);
        const auto [ho, wo] = output_dims(h, w);
        if (gy.shape != std::vector<std::size_t>{batch, cout_, ho, wo})
            throw ShapeError("tconv2d: upstream gradient shape mismatch");
        Tensor gx = Tensor::zeros(x_.shape);
        for (std::size_t b = 0; b < batch; ++b)
            for (std::size_t co = 0; co < cout_; ++co) {
                const double* gyc = &gy.data[(b * cout_ + co) * ho * wo];
                for (std::size_t i = 0; i < ho * wo; ++i) b_.grad[co] += gyc[i];
            }
        for (std::size_t b = 0; b < batch; ++b)
            for (std::size_t ci = 0; ci < cin_; ++ci)
                for (std::size_t i = 0; i < h; ++i)
                    for (std::size_t j = 0; j < w; ++j) {
                        const std::size_t xi_idx = ((b * cin_ + ci) * h + i) * w + j;
                        double acc = 0.0;
                        for (std::size_t co = 0; co < cout_; ++co)
                            for (std::size_t u = 0; u < k_; ++u) {
                                const std::ptrdiff_t oi = static_cast<std::ptrdiff_t>(i * s_ + u) -
                                                          static_cast<std::ptrdiff_t>(p_);
                                if (oi < 0 || oi >= static_cast<std::ptrdiff_t>(ho)) continue;
                                for (std::size_t v = 0; v < k_; ++v) {
                                    const std::ptrdiff_t oj =
                                        static_cast<std::ptrdiff_t>(j * s_ + v) -
                                        static_cast<std::ptrdiff_t>(p_);
                                    if (oj < 0 || oj >= static_cast<std::ptrdiff_t>(wo)) continue;
                                    const std::size_t wi_idx =
                                        ((ci * cout_ + co) * k_ + u) * k_ + v;
                                    const double g =
                                        gy.data[((b * cout_ + co) * ho + oi) * wo + oj];
                                    acc += w_.data[wi_idx] * g;
                                    w_.grad[wi_idx] += x_.data[xi_idx] * g;
                                }
                            }
                        gx.data[xi_idx] = acc;
                    }
        return gx;
    }

    void collect_params(const std::string& prefix, std::vector<NamedParam>& out) override {
        out.push_back({prefix + ".weight", &w_});
        out.push_back({prefix + ".bias", &b_});
    }

    std::string kind() const override { return "tconv2d"; }

    Tensor& weight() { return w_; }
    Tensor& bias() { return b_; }

  private:
    std::size_t cin_, cout_, k_, s_, p_, op_;
    Tensor w_, b_, x_;
    bool have_forward_ = false;
};

class ReLU : public Layer {
  public:
    Tensor forward(const Tensor& x) override {
        x_ = x;
        Tensor y = x;
        for (double& v : y.data) v = v > 0.0 ? v : 0.0;
        have_forward_ = true;
        return y;
    }
    Tensor backward(const Tensor& gy) override {
        require_forward(have_forward_);
        if (gy.data.size() != x_.data.size()) throw ShapeError("relu: gradient size mismatch");
        Tensor gx = gy;
        for (std::size_t i = 0; i < gx.data.size(); ++i)
            if (x_.data[i] <= 0.0) gx.data[i] = 0.0;
        return gx;
    }
    std::string kind() const override { return "relu"; }

  private:
    Tensor x_;
    bool have_forward_ = false;
};

class Sigmoid : public Layer {
  public:
    Tensor forward(const Tensor& x) override {
        Tensor y = x;
        for (double& v : y.data) v = 1.0 / (1.0 + std::exp(-v));
        y_ = y;
        have_forward_ = true;
        return y;
    }
    Tensor backward(const Tensor& gy) override {
        require_forward(have_forward_);
        if (gy.data.size() != y_.data.size()) throw ShapeError("sigmoid: gradient size mismatch");
        Tensor gx = gy;
        for (std::size_t i = 0; i < gx.data.size(); ++i) {
            const double s = y_.data[i];
            gx.data[i] *= s * (1.0 - s);
        }
        return gx;
    }
    std::string kind() const override { return "sigmoid"; }

  private:
    Tensor y_;
    bool have_forward_ = false;
};

// [batch, ...] -> [batch, prod(...)]
class Flatten : public Layer {
  public:
    Tensor forward(const Tensor& x) override {
        if (x.rank() < 2) throw ShapeError("flatten: need a batch dimension");
        in_shape_ = x.shape;
        Tensor y = x;
        y.shape = {x.dim(0), x.numel() / x.dim(0)};
        have_forward_ = true;
        return y;
    }
    Tensor backward(const Tensor& gy) override {
        require_forward(have_forward_);
        Tensor gx = gy;
        gx.shape = in_shape_;
        if (gx.shape_numel() != gx.data.size()) throw ShapeError("flatten: gradient size mismatch");
        return gx;
    }
    std::string kind() const override { return "flatten"; }

  private:
    std::vector<std::size_t> in_shape_;
    bool have_forward_ = false;
};

// [batch, n] -> [batch, dims...] with prod(dims) == n.
class Reshape : public Layer {
  public:
    explicit Reshape(std::vector<std::size_t> per_sample) : per_sample_(std::move(per_sample)) {}

    Tensor forward(const Tensor& x) override {
        std::size_t per = 1;
        for (std::size_t d : per_sample_) per *= d;
        if (x.rank() < 2 || x.numel() / x.dim(0) != per)
            throw ShapeError("reshape: per-sample element count mismatch");
        in_shape_ = x.shape;
        Tensor y = x;
        y.shape.assign(1, x.dim(0));
        y.shape.insert(y.shape.end(), per_sample_.begin(), per_sample_.end());
        have_forward_ = true;
        return y;
    }
    Tensor backward(const Tensor& gy) override {
        require_forward(have_forward_);
        Tensor gx = gy;
        gx.shape = in_shape_;
        if (gx.shape_numel() != gx.data.size()) throw ShapeError("reshape: gradient size mismatch");
        return gx;
    }
    std::string kind() const override { return "reshape"; }

  private:
    std::vector<std::size_t> per_sample_;
    std::vector<std::size_t> in_shape_;
    bool have_forward_ = false;
};

// Normalizes consecutive groups of `cols` entries to unit sum. Rows whose
// mass is below eps come out uniform and pass no gradient.
class RowNormalize : public Layer {
  public:
    RowNormalize(std::size_t rows, std::size_t cols, double eps = 1e-9)
        : rows_(rows), cols_(cols), eps_(eps) {}

    Tensor forward(const Tensor& x) override {
        if (x.rank() != 2 || x.dim(1) != rows_ * cols_)
            throw ShapeError("row_normalize: expected [batch, rows*cols]");
        for (double v : x.data)
            if (v < 0.0) throw DomainError("row_normalize: negative entry");
        x_ = x;
        Tensor y = x;
        const std::size_t batch = x.dim(0);
        sums_.assign(batch * rows_, 0.0);
        for (std::size_t b = 0; b < batch; ++b)
            for (std::size_t r = 0; r < rows_; ++r) {
                double s = 0.0;
                const std::size_t base = (b * rows_ + r) * cols_;
                for (std::size_t c = 0; c < cols_; ++c) s += x.data[base + c];
                sums_[b * rows_ + r] = s;
                if (s < eps_) {
                    for (std::size_t c = 0; c < cols_; ++c) y.data[base + c] = 1.0 / cols_;
                } else {
                    for (std::size_t c = 0; c < cols_; ++c) y.data[base + c] = x.data[base + c] / s;
                }
            }
        y_ = y;
        have_forward_ = true;
        return y;
    }

    // y_c = x_c / S  =>  gx_c = (gy_c - <gy, y>) / S for live rows.
    Tensor backward(const Tensor& gy) override {
        require_forward(have_forward_);
        if (gy.data.size() != x_.data.size())
            throw ShapeError("row_normalize: gradient size mismatch");
        Tensor gx = Tensor::zeros(x_.shape);
        const std::size_t batch = x_.dim(0);
        for (std::size_t b = 0; b < batch; ++b)
            for (std::size_t r = 0; r < rows_; ++r) {
                const double s = sums_[b * rows_ + r];
                if (s < eps_) continue;
                const std::size_t base = (b * rows_ + r) * cols_;
                double dot = 0.0;
                for (std::size_t c = 0; c < cols_; ++c) dot += gy.data[base + c] * y_.data[base + c];
                for (std::size_t c = 0; c < cols_; ++c)
                    gx.data[base + c] = (gy.data[base + c] - dot) / s;
            }
        return gx;
    }

    std::string kind() const override { return "row_normalize"; }

  private:
    std::size_t rows_, cols_;
    double eps_;
    Tensor x_, y_;
    std::vector<double> sums_;
    bool have_forward_ = false;
};

class Sequential {
  public:
    Sequential() = default;

    template <class L, class... Args>
    L& add(const std::string& name, Args&&... args) {
        auto layer = std::make_unique<L>(std::forward<Args>(args)...);
        L& ref = *layer;
        names_.push_back(name);
        layers_.push_back(std::move(layer));
        return ref;
    }

    Tensor forward(const Tensor& x) {
        Tensor t = x;
        for (auto& l : layers_) t = l->forward(t);
        return t;
    }

    Tensor backward(const Tensor& gy) {
        Tensor g = gy;
        for (auto it = layers_.rbegin(); it != layers_.rend(); ++it) g = (*it)->backward(g);
        return g;
    }

    void init_params(Rng& rng) {
        for (auto& l : layers_) l->init_params(rng);
    }

    std::vector<NamedParam> params() {
        std::vector<NamedParam> out;
        for (std::size_t i = 0; i < layers_.size(); ++i)
            layers_[i]->collect_params(names_[i], out);
        return out;
    }

    // logically const: collect_params only exposes pointers
    std::size_t param_count() const {
        std::size_t n = 0;
        for (const auto& p : const_cast<Sequential*>(this)->params()) n += p.value->numel();
        return n;
    }

    void zero_grad() {
        for (const auto& p : params()) p.value->zero_grad();
    }

    // p <- p - lr * g, no momentum.
    void sgd_step(double lr) {
        for (const auto& p : params()) {
            Tensor& t = *p.value;
            if (t.grad.empty()) continue;
            for (std::size_t i = 0; i < t.data.size(); ++i) t.data[i] -= lr * t.grad[i];
        }
    }

    std::size_t size() const { return layers_.size(); }
    Layer& layer(std::size_t i) { return *layers_.at(i); }

  private:
    std::vector<std::string> names_;
    std::vector<std::unique_ptr<Layer>> layers_;
};

// Mean over all elements of the squared difference.
inline double mse_loss(const Tensor& pred, const Tensor& target, Tensor* grad = nullptr) {
    if (pred.shape != target.shape) throw ShapeError("mse: shape mismatch");
    const double n = static_cast<double>(pred.numel());
    double acc = 0.0;
    if (grad) *grad = Tensor::zeros(pred.shape);
    for (std::size_t i = 0; i < pred.numel(); ++i) {
        const double d = pred.data[i] - target.data[i];
        acc += d * d;
        if (grad) grad->data[i] = 2.0 * d / n;
    }
    return acc / n;
}

constexpr double kBceClamp = 1e-7;

// -[y log p + (1-y) log(1-p)] averaged over elements; probabilities are
// clamped to [kBceClamp, 1-kBceClamp] so a saturated sigmoid cannot produce
// infinities. Clamped coordinates pass no gradient.
inline double bce_loss(const Tensor& pred, const Tensor& label, Tensor* grad = nullptr) {
    if (pred.shape != label.shape) throw ShapeError("bce: shape mismatch");
    const double n = static_cast<double>(pred.numel());
    double acc = 0.0;
    if (grad) *grad = Tensor::zeros(pred.shape);
    for (std::size_t i = 0; i < pred.numel(); ++i) {
        const double raw = pred.data[i];
        const double p = std::min(1.0 - kBceClamp, std::max(kBceClamp, raw));
        const double y = label.data[i];
        acc -= y * std::log(p) + (1.0 - y) * std::log(1.0 - p);
        if (grad && raw > kBceClamp && raw < 1.0 - kBceClamp)
            grad->data[i] = (-y / p + (1.0 - y) / (1.0 - p)) / n;
    }
    return acc / n;
}

// Order-sensitive digest of all parameter values; used to assert that a
// training phase left a network untouched.
inline std::uint64_t param_checksum(Sequential& net) {
    std::uint64_t h = 1469598103934665603ULL;
    for (const auto& p : net.params())
        for (double v : p.value->data) {
            std::uint64_t bits;
            static_assert(sizeof(bits) == sizeof(v));
            __builtin_memcpy(&bits, &v, sizeof(bits));
            h ^= bits;
            h *= 1099511628211ULL;
        }
    return h;
}

}  // namespace qlg
