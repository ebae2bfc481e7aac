#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace drlh {

enum class Activation { relu, linear };
enum class Mode { train, eval };

struct LayerSpec {
    std::size_t input_dim = 0;
    std::size_t output_dim = 0;
    Activation activation = Activation::relu;
    double dropout_rate = 0.0;

    friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

/// Hidden relu layers of the given widths (each with `dropout`), then a
/// linear head with num_actions outputs and no dropout.
std::vector<LayerSpec> make_architecture(std::size_t input_dim, std::size_t num_actions,
                                         const std::vector<std::size_t>& hidden = {512, 512},
                                         double dropout = 0.2);

struct DenseLayer {
    Eigen::MatrixXd weights;  // output_dim x input_dim
    Eigen::VectorXd biases;
    LayerSpec spec;
};

struct Gradients {
    std::vector<Eigen::MatrixXd> weights;
    std::vector<Eigen::VectorXd> biases;
};

class QNetwork;

/// Activations recorded by a train-mode forward pass. Samples are columns.
struct ForwardCache {
    const QNetwork* owner = nullptr;
    std::uint64_t version = 0;
    std::vector<Eigen::MatrixXd> inputs;  // input to each layer
    std::vector<Eigen::MatrixXd> pre;     // pre-activation of each layer
    std::vector<Eigen::MatrixXd> masks;   // inverted-dropout scale per unit, empty if rate 0
};

/// Fully-connected action-value approximator Q(s, .) with inverted dropout.
///
/// Train-mode forward passes draw dropout masks from `mask_seed` and divide
/// kept activations by the keep probability, so eval mode needs no scaling.
/// The network has no hidden mutable state: forward() is a pure function of
/// (parameters, input, mode, mask_seed).
class QNetwork {
public:
    QNetwork() = default;

    /// Weights ~ U(-1/sqrt(in), 1/sqrt(in)), biases zero. Throws BadArchitecture.
    static QNetwork init(const std::vector<LayerSpec>& specs, std::uint64_t seed);

    std::size_t input_dim() const { return layers_.front().spec.input_dim; }
    std::size_t output_dim() const { return layers_.back().spec.output_dim; }
    std::size_t num_parameters() const;
    const std::vector<DenseLayer>& layers() const { return layers_; }
    std::vector<DenseLayer>& mutable_layers() { return layers_; }
    std::vector<LayerSpec> architecture() const;

    /// Single-sample forward. Fills `cache` when given (train mode only).
    Eigen::VectorXd forward(std::span<const double> x, Mode mode, std::uint64_t mask_seed = 0,
                            ForwardCache* cache = nullptr) const;

    /// Batched forward over the columns of `x` (input_dim x batch).
    Eigen::MatrixXd forward_batch(const Eigen::MatrixXd& x, Mode mode, std::uint64_t mask_seed = 0,
                                  ForwardCache* cache = nullptr) const;

    /// Gradient of sum(Q .* dq) w.r.t. every parameter, dq shaped like the
    /// output of the cached pass. Throws StaleCache.
    Gradients backward(const ForwardCache& cache, const Eigen::MatrixXd& dq) const;
    Gradients backward(const ForwardCache& cache, std::span<const double> dq) const;

    /// p <- p - learning_rate * g. Throws ShapeMismatch.
    void sgd_update(const Gradients& grads, double learning_rate);

    /// Format: "DRLHQN1\n", one architecture line, then every layer's weights
    /// (row-major, output x input) followed by its biases as little-endian
    /// IEEE-754 doubles.
    void save(std::ostream& os) const;
    void save(const std::string& path) const;
    /// Throws BadMagic, CorruptModelFile.
    static QNetwork load(std::istream& is);
    static QNetwork load(const std::string& path);
    /// Also checks the input and output widths. Throws ArchitectureMismatch.
    static QNetwork load(const std::string& path, std::size_t input_dim, std::size_t output_dim);

    std::uint64_t version() const { return version_; }

private:
    std::vector<DenseLayer> layers_;
    std::uint64_t version_ = 0;
};

/// Zero gradients shaped like `net`.
Gradients zero_gradients(const QNetwork& net);

/// Index of the largest entry, smallest index on ties.
std::size_t argmax(const Eigen::Ref<const Eigen::VectorXd>& q);

}  // namespace drlh
