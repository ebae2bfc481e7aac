#include "drlh/qnetwork.hpp"

#include "drlh/errors.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

namespace drlh {

namespace {

constexpr char kMagic[] = "DRLHQN1";

double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

const char* activation_name(Activation a) { return a == Activation::relu ? "relu" : "linear"; }

void write_f64(std::ostream& os, double v)
{
    std::uint64_t u;
    std::memcpy(&u, &v, sizeof u);
    unsigned char bytes[8];
    for (int i = 0; i < 8; ++i)
        bytes[i] = static_cast<unsigned char>(u >> (8 * i));
    os.write(reinterpret_cast<const char*>(bytes), 8);
}

double read_f64(std::istream& is)
{
    unsigned char bytes[8];
    if (!is.read(reinterpret_cast<char*>(bytes), 8))
        throw CorruptModelFile("parameter block ends early");
    std::uint64_t u = 0;
    for (int i = 0; i < 8; ++i)
        u |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
    double v;
    std::memcpy(&v, &u, sizeof v);
    return v;
}

void validate_specs(const std::vector<LayerSpec>& specs)
{
    if (specs.empty())
        throw BadArchitecture("network needs at least one layer");
    for (std::size_t i = 0; i < specs.size(); ++i) {
        const auto& s = specs[i];
        if (s.input_dim < 1 || s.output_dim < 1)
            throw BadArchitecture("layer " + std::to_string(i) + " has a zero dimension");
        if (!(s.dropout_rate >= 0.0 && s.dropout_rate < 1.0))
            throw BadArchitecture("layer " + std::to_string(i) + " dropout rate outside [0, 1)");
        if (i > 0 && specs[i - 1].output_dim != s.input_dim)
            throw BadArchitecture("layer " + std::to_string(i) + " input " + std::to_string(s.input_dim) +
                                  " does not match previous output " + std::to_string(specs[i - 1].output_dim));
    }
    const auto& last = specs.back();
    if (last.activation != Activation::linear || last.dropout_rate != 0.0)
        throw BadArchitecture("output layer must be linear without dropout");
}

}  // namespace

std::vector<LayerSpec> make_architecture(std::size_t input_dim, std::size_t num_actions,
                                         const std::vector<std::size_t>& hidden, double dropout)
{
    std::vector<LayerSpec> specs;
    std::size_t in = input_dim;
    for (auto width : hidden) {
        specs.push_back({in, width, Activation::relu, dropout});
        in = width;
    }
    specs.push_back({in, num_actions, Activation::linear, 0.0});
    return specs;
}

QNetwork QNetwork::init(const std::vector<LayerSpec>& specs, std::uint64_t seed)
{
    validate_specs(specs);
    std::mt19937_64 rng(seed);
    QNetwork net;
    for (const auto& s : specs) {
        DenseLayer layer;
        layer.spec = s;
        layer.weights.resize(static_cast<Eigen::Index>(s.output_dim), static_cast<Eigen::Index>(s.input_dim));
        const double scale = 1.0 / std::sqrt(static_cast<double>(s.input_dim));
        // Row-major fill order so the draw sequence matches the file layout.
        for (Eigen::Index r = 0; r < layer.weights.rows(); ++r)
            for (Eigen::Index c = 0; c < layer.weights.cols(); ++c)
                layer.weights(r, c) = (2.0 * unit_uniform(rng) - 1.0) * scale;
        layer.biases = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(s.output_dim));
        net.layers_.push_back(std::move(layer));
    }
    return net;
}

std::size_t QNetwork::num_parameters() const
{
    std::size_t n = 0;
    for (const auto& l : layers_)
        n += static_cast<std::size_t>(l.weights.size() + l.biases.size());
    return n;
}

std::vector<LayerSpec> QNetwork::architecture() const
{
    std::vector<LayerSpec> out;
    for (const auto& l : layers_)
        out.push_back(l.spec);
    return out;
}

Eigen::VectorXd QNetwork::forward(std::span<const double> x, Mode mode, std::uint64_t mask_seed,
                                  ForwardCache* cache) const
{
    const Eigen::Map<const Eigen::MatrixXd> column(x.data(), static_cast<Eigen::Index>(x.size()), 1);
    return forward_batch(column, mode, mask_seed, cache).col(0);
}

Eigen::MatrixXd QNetwork::forward_batch(const Eigen::MatrixXd& x, Mode mode, std::uint64_t mask_seed,
                                        ForwardCache* cache) const
{
    if (layers_.empty())
        throw BadArchitecture("network has no layers");
    if (static_cast<std::size_t>(x.rows()) != input_dim())
        throw DimensionMismatch("input has " + std::to_string(x.rows()) + " rows, network expects " +
                                std::to_string(input_dim()));
    const bool train = mode == Mode::train;
    if (cache) {
        *cache = ForwardCache{};
        cache->owner = this;
        cache->version = version_;
    }

    std::mt19937_64 rng(mask_seed);
    Eigen::MatrixXd a = x;
    for (const auto& layer : layers_) {
        Eigen::MatrixXd z = layer.weights * a;
        z.colwise() += layer.biases;
        if (cache && train) {
            cache->inputs.push_back(std::move(a));
            cache->pre.push_back(z);
        }
        a = layer.spec.activation == Activation::relu ? Eigen::MatrixXd(z.cwiseMax(0.0)) : std::move(z);
        if (train && layer.spec.dropout_rate > 0.0) {
            const double keep = 1.0 - layer.spec.dropout_rate;
            Eigen::MatrixXd mask(a.rows(), a.cols());
            for (Eigen::Index c = 0; c < mask.cols(); ++c)
                for (Eigen::Index r = 0; r < mask.rows(); ++r)
                    mask(r, c) = unit_uniform(rng) < keep ? 1.0 / keep : 0.0;
            a = a.cwiseProduct(mask);
            if (cache)
                cache->masks.push_back(std::move(mask));
        } else if (cache && train) {
            cache->masks.emplace_back();
        }
    }
    return a;
}

Gradients QNetwork::backward(const ForwardCache& cache, const Eigen::MatrixXd& dq) const
{
    if (cache.owner != this || cache.version != version_ || cache.inputs.size() != layers_.size())
        throw StaleCache("cache does not come from a train-mode pass of this network's current parameters");
    const Eigen::Index batch = cache.inputs.front().cols();
    if (dq.rows() != static_cast<Eigen::Index>(output_dim()) || dq.cols() != batch)
        throw DimensionMismatch("dq shape does not match the cached output");

    Gradients g;
    g.weights.resize(layers_.size());
    g.biases.resize(layers_.size());
    Eigen::MatrixXd delta = dq;
    for (std::size_t i = layers_.size(); i-- > 0;) {
        const auto& layer = layers_[i];
        if (cache.masks[i].size() != 0)
            delta = delta.cwiseProduct(cache.masks[i]);
        if (layer.spec.activation == Activation::relu)
            delta = delta.cwiseProduct((cache.pre[i].array() > 0.0).cast<double>().matrix());
        g.weights[i].noalias() = delta * cache.inputs[i].transpose();
        g.biases[i] = delta.rowwise().sum();
        if (i > 0)
            delta = layer.weights.transpose() * delta;
    }
    return g;
}

Gradients QNetwork::backward(const ForwardCache& cache, std::span<const double> dq) const
{
    const Eigen::Map<const Eigen::MatrixXd> column(dq.data(), static_cast<Eigen::Index>(dq.size()), 1);
    return backward(cache, Eigen::MatrixXd(column));
}

void QNetwork::sgd_update(const Gradients& grads, double learning_rate)
{
    if (grads.weights.size() != layers_.size() || grads.biases.size() != layers_.size())
        throw ShapeMismatch("gradient layer count differs from the network");
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        if (grads.weights[i].rows() != layers_[i].weights.rows() ||
            grads.weights[i].cols() != layers_[i].weights.cols() ||
            grads.biases[i].size() != layers_[i].biases.size())
            throw ShapeMismatch("gradient shape differs at layer " + std::to_string(i));
    }
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        layers_[i].weights -= learning_rate * grads.weights[i];
        layers_[i].biases -= learning_rate * grads.biases[i];
    }
    ++version_;
}

void QNetwork::save(std::ostream& os) const
{
    os << kMagic << '\n';
    std::ostringstream arch;
    arch.precision(17);
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        const auto& s = layers_[i].spec;
        if (i)
            arch << ' ';
        arch << s.input_dim << ':' << s.output_dim << ':' << activation_name(s.activation) << ':'
             << s.dropout_rate;
    }
    os << arch.str() << '\n';
    for (const auto& l : layers_) {
        for (Eigen::Index r = 0; r < l.weights.rows(); ++r)
            for (Eigen::Index c = 0; c < l.weights.cols(); ++c)
                write_f64(os, l.weights(r, c));
        for (Eigen::Index r = 0; r < l.biases.size(); ++r)
            write_f64(os, l.biases(r));
    }
}

void QNetwork::save(const std::string& path) const
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw IoError("cannot open '" + path + "' for writing");
    save(os);
    if (!os)
        throw IoError("write failed for '" + path + "'");
}

QNetwork QNetwork::load(std::istream& is)
{
    std::string magic;
    if (!std::getline(is, magic))
        throw CorruptModelFile("empty model file");
    if (magic != kMagic)
        throw BadMagic("model file does not start with DRLHQN1");
    std::string arch_line;
    if (!std::getline(is, arch_line))
        throw CorruptModelFile("missing architecture line");

    std::vector<LayerSpec> specs;
    std::istringstream arch(arch_line);
    std::string token;
    while (arch >> token) {
        LayerSpec s;
        std::istringstream ts(token);
        std::string in, out, act, rate;
        if (!std::getline(ts, in, ':') || !std::getline(ts, out, ':') || !std::getline(ts, act, ':') ||
            !std::getline(ts, rate))
            throw CorruptModelFile("bad layer descriptor '" + token + "'");
        try {
            s.input_dim = std::stoull(in);
            s.output_dim = std::stoull(out);
            s.dropout_rate = std::stod(rate);
        } catch (const std::exception&) {
            throw CorruptModelFile("bad layer descriptor '" + token + "'");
        }
        if (act == "relu")
            s.activation = Activation::relu;
        else if (act == "linear")
            s.activation = Activation::linear;
        else
            throw CorruptModelFile("unknown activation '" + act + "'");
        specs.push_back(s);
    }
    try {
        validate_specs(specs);
    } catch (const BadArchitecture& e) {
        throw CorruptModelFile(e.what());
    }

    QNetwork net;
    for (const auto& s : specs) {
        DenseLayer l;
        l.spec = s;
        l.weights.resize(static_cast<Eigen::Index>(s.output_dim), static_cast<Eigen::Index>(s.input_dim));
        l.biases.resize(static_cast<Eigen::Index>(s.output_dim));
        for (Eigen::Index r = 0; r < l.weights.rows(); ++r)
            for (Eigen::Index c = 0; c < l.weights.cols(); ++c)
                l.weights(r, c) = read_f64(is);
        for (Eigen::Index r = 0; r < l.biases.size(); ++r)
            l.biases(r) = read_f64(is);
        if (!l.weights.allFinite() || !l.biases.allFinite())
            throw CorruptModelFile("non-finite parameter");
        net.layers_.push_back(std::move(l));
    }
    if (is.peek() != std::char_traits<char>::eof())
        throw CorruptModelFile("trailing bytes after the parameter block");
    return net;
}

QNetwork QNetwork::load(const std::string& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw IoError("cannot open '" + path + "'");
    return load(is);
}

QNetwork QNetwork::load(const std::string& path, std::size_t input_dim, std::size_t output_dim)
{
    QNetwork net = load(path);
    if (net.input_dim() != input_dim || net.output_dim() != output_dim)
        throw ArchitectureMismatch("model maps " + std::to_string(net.input_dim()) + " -> " +
                                   std::to_string(net.output_dim()) + ", expected " + std::to_string(input_dim) +
                                   " -> " + std::to_string(output_dim));
    return net;
}

Gradients zero_gradients(const QNetwork& net)
{
    Gradients g;
    for (const auto& l : net.layers()) {
        g.weights.push_back(Eigen::MatrixXd::Zero(l.weights.rows(), l.weights.cols()));
        g.biases.push_back(Eigen::VectorXd::Zero(l.biases.size()));
    }
    return g;
}

std::size_t argmax(const Eigen::Ref<const Eigen::VectorXd>& q)
{
    std::size_t best = 0;
    for (Eigen::Index i = 1; i < q.size(); ++i)
        if (q(i) > q(static_cast<Eigen::Index>(best)))
            best = static_cast<std::size_t>(i);
    return best;
}

}  // namespace drlh
