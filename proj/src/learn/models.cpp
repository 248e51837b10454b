#include "mircorpus/learn/models.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "mircorpus/csv.hpp"
#include "mircorpus/error.hpp"

namespace mircorpus::learn {

namespace {

constexpr const char* kModelMagic = "mircorpus-model 1";

double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

std::vector<double> to_vector(const features::FeatureVector& x) { return {x.begin(), x.end()}; }

Matrix design_matrix(const SegmentDataset& ds)
{
    Matrix x;
    x.reserve(ds.rows.size());
    for (const auto& r : ds.rows) x.push_back(to_vector(r.features));
    return x;
}

int argmax(std::span<const double> v)
{
    return static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());  // first maximum
}

void check_input(const MlpModel& model, std::span<const double> x)
{
    if (x.size() != model.inputs)
        throw Error(ErrorCode::length_mismatch, "mlp: expected " + std::to_string(model.inputs) + " inputs, got " +
                                                    std::to_string(x.size()));
}

// Hidden activations and output probabilities.
void forward(const MlpModel& m, std::span<const double> x, std::vector<double>& h, std::vector<double>& p)
{
    h.assign(m.hidden, 0.0);
    for (std::size_t j = 0; j < m.hidden; ++j) {
        double a = m.b1[j];
        const double* w = &m.w1[j * m.inputs];
        for (std::size_t i = 0; i < m.inputs; ++i) a += w[i] * x[i];
        h[j] = logistic(a);
    }
    std::vector<double> z(m.outputs);
    for (std::size_t k = 0; k < m.outputs; ++k) {
        double a = m.b2[k];
        const double* w = &m.w2[k * m.hidden];
        for (std::size_t j = 0; j < m.hidden; ++j) a += w[j] * h[j];
        z[k] = a;
    }
    p = softmax(z);
}

void write_values(std::ostream& out, const char* tag, std::span<const double> values)
{
    out << tag;
    for (double v : values) out << ' ' << csv::sig(v, 17);
    out << '\n';
}

std::vector<double> read_values(std::istream& in, const std::string& tag, std::size_t count,
                                const std::filesystem::path& path)
{
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorCode::parse, path.string() + ": missing '" + tag + "' line");
    std::istringstream fields(line);
    std::string got;
    fields >> got;
    if (got != tag) throw Error(ErrorCode::parse, path.string() + ": expected '" + tag + "', found '" + got + "'");
    std::vector<double> values;
    std::string token;
    while (fields >> token) values.push_back(csv::to_double(token, path.string() + " " + tag));
    if (values.size() != count)
        throw Error(ErrorCode::parse, path.string() + ": '" + tag + "' has " + std::to_string(values.size()) +
                                          " values, expected " + std::to_string(count));
    return values;
}

struct Header {
    std::string type;
    std::uint64_t seed = 0;
    int epochs = 0;
    std::vector<std::string> classes;
};

void write_header(std::ostream& out, const std::string& type, std::uint64_t seed, int epochs,
                  const std::vector<std::string>& classes)
{
    out << kModelMagic << '\n'
        << "type " << type << '\n'
        << "seed " << seed << '\n'
        << "epochs " << epochs << '\n'
        << "classes " << csv::join(classes) << '\n';
}

Header read_header(std::istream& in, const std::filesystem::path& path)
{
    std::string line;
    if (!std::getline(in, line) || line != kModelMagic)
        throw Error(ErrorCode::malformed_header, path.string() + ": not a mircorpus model file");
    Header h;
    auto field = [&](const std::string& key) {
        if (!std::getline(in, line) || line.rfind(key + " ", 0) != 0)
            throw Error(ErrorCode::malformed_header, path.string() + ": missing '" + key + "'");
        return line.substr(key.size() + 1);
    };
    h.type = field("type");
    h.seed = static_cast<std::uint64_t>(std::stoull(field("seed")));
    h.epochs = static_cast<int>(csv::to_long(field("epochs"), path.string()));
    h.classes = csv::split_line(field("classes"));
    return h;
}

std::ifstream open_model(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::io, "cannot read " + path.string());
    return in;
}

}  // namespace

MlpModel MlpModel::zeros(std::size_t inputs, std::size_t hidden, std::size_t outputs)
{
    MlpModel m;
    m.inputs = inputs;
    m.hidden = hidden;
    m.outputs = outputs;
    m.w1.assign(hidden * inputs, 0.0);
    m.b1.assign(hidden, 0.0);
    m.w2.assign(outputs * hidden, 0.0);
    m.b2.assign(outputs, 0.0);
    return m;
}

MlpModel MlpModel::random(std::size_t inputs, std::size_t hidden, std::size_t outputs, std::uint64_t seed)
{
    MlpModel m = zeros(inputs, hidden, outputs);
    m.seed = seed;
    std::mt19937_64 rng(seed);
    for (auto* params : {&m.w1, &m.b1, &m.w2, &m.b2})
        for (double& w : *params) w = -0.05 + 0.1 * unit_uniform(rng());
    return m;
}

std::vector<double> softmax(std::span<const double> logits)
{
    const double top = *std::max_element(logits.begin(), logits.end());
    std::vector<double> p(logits.size());
    double sum = 0.0;
    for (std::size_t k = 0; k < logits.size(); ++k) sum += p[k] = std::exp(logits[k] - top);
    for (double& v : p) v /= sum;
    return p;
}

std::vector<double> mlp_forward(const MlpModel& model, std::span<const double> x)
{
    check_input(model, x);
    std::vector<double> h, p;
    forward(model, x, h, p);
    return p;
}

double mlp_loss(const MlpModel& model, const Matrix& x, std::span<const int> y)
{
    if (x.size() != y.size() || x.empty())
        throw Error(ErrorCode::length_mismatch, "mlp_loss: inputs and labels differ in length or are empty");
    std::vector<double> h, p;
    double loss = 0.0;
    for (std::size_t n = 0; n < x.size(); ++n) {
        check_input(model, x[n]);
        forward(model, x[n], h, p);
        loss -= std::log(std::max(p[static_cast<std::size_t>(y[n])], 1e-300));
    }
    return loss / static_cast<double>(x.size());
}

MlpModel mlp_gradient(const MlpModel& model, const Matrix& x, std::span<const int> y)
{
    if (x.size() != y.size() || x.empty())
        throw Error(ErrorCode::length_mismatch, "mlp_gradient: inputs and labels differ in length or are empty");
    MlpModel g = MlpModel::zeros(model.inputs, model.hidden, model.outputs);
    std::vector<double> h, p, dh(model.hidden);
    const double inv_n = 1.0 / static_cast<double>(x.size());
    for (std::size_t n = 0; n < x.size(); ++n) {
        check_input(model, x[n]);
        forward(model, x[n], h, p);
        p[static_cast<std::size_t>(y[n])] -= 1.0;  // dL/dz
        std::fill(dh.begin(), dh.end(), 0.0);
        for (std::size_t k = 0; k < model.outputs; ++k) {
            const double dz = p[k] * inv_n;
            g.b2[k] += dz;
            for (std::size_t j = 0; j < model.hidden; ++j) {
                g.w2[k * model.hidden + j] += dz * h[j];
                dh[j] += model.w2[k * model.hidden + j] * dz;
            }
        }
        for (std::size_t j = 0; j < model.hidden; ++j) {
            const double da = dh[j] * h[j] * (1.0 - h[j]);
            g.b1[j] += da;
            double* row = &g.w1[j * model.inputs];
            for (std::size_t i = 0; i < model.inputs; ++i) row[i] += da * x[n][i];
        }
    }
    return g;
}

MlpModel train_mlp(const SegmentDataset& train, const MlpTraining& options, std::vector<double>* loss_history)
{
    if (train.rows.empty()) throw Error(ErrorCode::insufficient_data, "train_mlp: empty training set");
    if (train.class_count() < 2) throw Error(ErrorCode::invalid_argument, "train_mlp: need at least 2 classes");
    if (options.epochs < 0) throw Error(ErrorCode::invalid_argument, "train_mlp: negative epoch count");

    const Matrix x = design_matrix(train);
    const auto y = labels_of(train);
    for (int label : y)
        if (label < 0 || static_cast<std::size_t>(label) >= train.class_count())
            throw Error(ErrorCode::invalid_argument, "train_mlp: label out of range");

    MlpModel model = MlpModel::random(features::kFeatureCount, options.hidden, train.class_count(), options.seed);
    model.epochs = options.epochs;
    model.classes = train.classes;
    if (loss_history) loss_history->assign(1, mlp_loss(model, x, y));
    for (int epoch = 0; epoch < options.epochs; ++epoch) {
        const MlpModel g = mlp_gradient(model, x, y);
        for (std::size_t i = 0; i < model.w1.size(); ++i) model.w1[i] -= options.learning_rate * g.w1[i];
        for (std::size_t i = 0; i < model.b1.size(); ++i) model.b1[i] -= options.learning_rate * g.b1[i];
        for (std::size_t i = 0; i < model.w2.size(); ++i) model.w2[i] -= options.learning_rate * g.w2[i];
        for (std::size_t i = 0; i < model.b2.size(); ++i) model.b2[i] -= options.learning_rate * g.b2[i];
        if (loss_history) loss_history->push_back(mlp_loss(model, x, y));
    }
    return model;
}

int predict_mlp(const MlpModel& model, std::span<const double> x) { return argmax(mlp_forward(model, x)); }

int predict_mlp(const MlpModel& model, const features::FeatureVector& x)
{
    return predict_mlp(model, std::span<const double>(x.data(), x.size()));
}

NbModel train_nb(const SegmentDataset& train, std::vector<std::size_t> subset)
{
    if (subset.empty())
        for (std::size_t k = 0; k < features::kFeatureCount; ++k) subset.push_back(k);
    for (std::size_t k : subset)
        if (k >= features::kFeatureCount) throw Error(ErrorCode::invalid_argument, "train_nb: feature out of range");
    const std::size_t classes = train.class_count();
    if (classes == 0) throw Error(ErrorCode::invalid_argument, "train_nb: no classes");

    std::vector<long> counts(classes, 0);
    for (const auto& r : train.rows) {
        if (r.label < 0 || static_cast<std::size_t>(r.label) >= classes)
            throw Error(ErrorCode::invalid_argument, "train_nb: label out of range");
        ++counts[static_cast<std::size_t>(r.label)];
    }
    for (std::size_t c = 0; c < classes; ++c)
        if (counts[c] < 2)
            throw Error(ErrorCode::insufficient_data, "naive Bayes needs at least 2 training rows per class; class '" +
                                                          train.classes[c] + "' has " + std::to_string(counts[c]));

    NbModel m;
    m.subset = subset;
    m.classes = train.classes;
    m.priors.resize(classes);
    m.means.assign(classes, std::vector<double>(subset.size(), 0.0));
    m.variances.assign(classes, std::vector<double>(subset.size(), 0.0));
    for (const auto& r : train.rows)
        for (std::size_t j = 0; j < subset.size(); ++j)
            m.means[static_cast<std::size_t>(r.label)][j] += r.features[subset[j]];
    for (std::size_t c = 0; c < classes; ++c) {
        m.priors[c] = static_cast<double>(counts[c]) / static_cast<double>(train.rows.size());
        for (double& v : m.means[c]) v /= static_cast<double>(counts[c]);
    }
    for (const auto& r : train.rows) {
        const auto c = static_cast<std::size_t>(r.label);
        for (std::size_t j = 0; j < subset.size(); ++j) {
            const double d = r.features[subset[j]] - m.means[c][j];
            m.variances[c][j] += d * d;
        }
    }
    for (std::size_t c = 0; c < classes; ++c)
        for (double& v : m.variances[c]) v = std::max(v / static_cast<double>(counts[c]), kVarianceFloor);
    return m;
}

std::vector<double> nb_log_posterior(const NbModel& model, const features::FeatureVector& x)
{
    std::vector<double> scores(model.priors.size());
    for (std::size_t c = 0; c < scores.size(); ++c) {
        double s = std::log(model.priors[c]);
        for (std::size_t j = 0; j < model.subset.size(); ++j) {
            const double var = model.variances[c][j];
            const double d = x[model.subset[j]] - model.means[c][j];
            s += -0.5 * std::log(2.0 * std::numbers::pi * var) - d * d / (2.0 * var);
        }
        scores[c] = s;
    }
    return scores;
}

int predict_nb(const NbModel& model, const features::FeatureVector& x) { return argmax(nb_log_posterior(model, x)); }

std::vector<int> labels_of(const SegmentDataset& ds)
{
    std::vector<int> y;
    y.reserve(ds.rows.size());
    for (const auto& r : ds.rows) y.push_back(r.label);
    return y;
}

std::vector<int> predict_all(const MlpModel& model, const SegmentDataset& ds)
{
    std::vector<int> out;
    for (const auto& r : ds.rows) out.push_back(predict_mlp(model, r.features));
    return out;
}

std::vector<int> predict_all(const NbModel& model, const SegmentDataset& ds)
{
    std::vector<int> out;
    for (const auto& r : ds.rows) out.push_back(predict_nb(model, r.features));
    return out;
}

GreedyResult greedy_select(const SegmentDataset& train, const SegmentDataset& test, std::size_t max_features)
{
    if (test.rows.empty()) throw Error(ErrorCode::insufficient_data, "greedy_select: empty test set");
    const auto truth = labels_of(test);
    GreedyResult result;
    std::vector<bool> used(features::kFeatureCount, false);
    std::vector<std::size_t> current;
    const std::size_t stages = std::min(max_features, features::kFeatureCount);
    for (std::size_t stage = 0; stage < stages; ++stage) {
        double best = -1.0;
        std::size_t pick = 0;
        for (std::size_t k = 0; k < features::kFeatureCount; ++k) {
            if (used[k]) continue;
            auto candidate = current;
            candidate.push_back(k);
            const double acc = accuracy(predict_all(train_nb(train, candidate), test), truth);
            if (acc > best) {
                best = acc;
                pick = k;
            }
        }
        used[pick] = true;
        current.push_back(pick);
        result.order.push_back(pick);
        result.stage_accuracy.push_back(best);
        if (best > result.best_accuracy || result.best_subset.empty()) {
            result.best_accuracy = best;
            result.best_subset = current;
        }
    }
    return result;
}

GreedyResult greedy_select(const SegmentDataset& ds, std::size_t max_features, std::uint64_t seed)
{
    const auto [train, test] = song_preserving_split(ds, 0.5, seed);
    return greedy_select(train, test, max_features);
}

void save_model(const std::filesystem::path& path, const MlpModel& model)
{
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::io, "cannot write " + path.string());
    write_header(out, "mlp", model.seed, model.epochs, model.classes);
    out << "shape " << model.inputs << ' ' << model.hidden << ' ' << model.outputs << '\n';
    write_values(out, "w1", model.w1);
    write_values(out, "b1", model.b1);
    write_values(out, "w2", model.w2);
    write_values(out, "b2", model.b2);
}

void save_model(const std::filesystem::path& path, const NbModel& model)
{
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::io, "cannot write " + path.string());
    write_header(out, "nb", 0, 0, model.classes);
    out << "subset";
    for (std::size_t k : model.subset) out << ' ' << k;
    out << '\n';
    write_values(out, "priors", model.priors);
    for (std::size_t c = 0; c < model.priors.size(); ++c) {
        write_values(out, "mean", model.means[c]);
        write_values(out, "variance", model.variances[c]);
    }
}

MlpModel load_mlp(const std::filesystem::path& path)
{
    auto in = open_model(path);
    const Header h = read_header(in, path);
    if (h.type != "mlp") throw Error(ErrorCode::malformed_header, path.string() + ": not an mlp model");
    std::string tag;
    std::size_t inputs = 0, hidden = 0, outputs = 0;
    std::string line;
    std::getline(in, line);
    std::istringstream shape(line);
    if (!(shape >> tag >> inputs >> hidden >> outputs) || tag != "shape")
        throw Error(ErrorCode::parse, path.string() + ": bad shape line");
    MlpModel m = MlpModel::zeros(inputs, hidden, outputs);
    m.seed = h.seed;
    m.epochs = h.epochs;
    m.classes = h.classes;
    m.w1 = read_values(in, "w1", hidden * inputs, path);
    m.b1 = read_values(in, "b1", hidden, path);
    m.w2 = read_values(in, "w2", outputs * hidden, path);
    m.b2 = read_values(in, "b2", outputs, path);
    return m;
}

NbModel load_nb(const std::filesystem::path& path)
{
    auto in = open_model(path);
    const Header h = read_header(in, path);
    if (h.type != "nb") throw Error(ErrorCode::malformed_header, path.string() + ": not a naive Bayes model");
    NbModel m;
    m.classes = h.classes;
    std::string line, tag;
    std::getline(in, line);
    std::istringstream subset(line);
    subset >> tag;
    if (tag != "subset") throw Error(ErrorCode::parse, path.string() + ": missing subset line");
    std::size_t k;
    while (subset >> k) m.subset.push_back(k);
    m.priors = read_values(in, "priors", m.classes.size(), path);
    for (std::size_t c = 0; c < m.classes.size(); ++c) {
        m.means.push_back(read_values(in, "mean", m.subset.size(), path));
        m.variances.push_back(read_values(in, "variance", m.subset.size(), path));
    }
    return m;
}

}  // namespace mircorpus::learn
