#ifndef QCL_DATASET_HPP
#define QCL_DATASET_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace qcl {

// n x p feature matrix (row major) with dense class labels 0..g-1.
// class_ids keeps the original label values so predictions can be reported
// in the caller's vocabulary.
class Dataset {
  public:
    Dataset(std::vector<double> features, std::vector<int> labels, int p,
            std::vector<int> class_ids = {})
        : features_(std::move(features)), labels_(std::move(labels)), p_(p) {
        if (p_ < 1) throw std::invalid_argument("Dataset: p must be >= 1");
        if (labels_.empty() || features_.size() != labels_.size() * static_cast<std::size_t>(p_))
            throw std::invalid_argument("Dataset: feature/label size mismatch");
        for (double v : features_)
            if (!std::isfinite(v)) throw std::invalid_argument("Dataset: non-finite feature");

        int g = 0;
        for (int c : labels_) {
            if (c < 0) throw std::invalid_argument("Dataset: negative class id");
            g = std::max(g, c + 1);
        }
        if (g < 2) throw std::invalid_argument("Dataset: need at least 2 classes");
        if (static_cast<int>(labels_.size()) < g)
            throw std::invalid_argument("Dataset: fewer observations than classes");
        counts_.assign(static_cast<std::size_t>(g), 0);
        for (int c : labels_) ++counts_[static_cast<std::size_t>(c)];
        for (int k = 0; k < g; ++k)
            if (counts_[static_cast<std::size_t>(k)] == 0)
                throw std::invalid_argument("Dataset: class id gap");

        if (class_ids.empty()) {
            class_ids_.resize(static_cast<std::size_t>(g));
            for (int k = 0; k < g; ++k) class_ids_[static_cast<std::size_t>(k)] = k;
        } else {
            if (static_cast<int>(class_ids.size()) != g)
                throw std::invalid_argument("Dataset: class_ids size mismatch");
            class_ids_ = std::move(class_ids);
        }
    }

    // Builds a dataset from arbitrary integer labels, remapping them to
    // 0..g-1 in ascending order of the original values.
    static Dataset relabeled(std::vector<double> features, const std::vector<int>& raw_labels,
                             int p) {
        std::map<int, int> dense;
        for (int c : raw_labels) dense.emplace(c, 0);
        int next = 0;
        std::vector<int> ids;
        ids.reserve(dense.size());
        for (auto& [orig, idx] : dense) {
            idx = next++;
            ids.push_back(orig);
        }
        std::vector<int> labels;
        labels.reserve(raw_labels.size());
        for (int c : raw_labels) labels.push_back(dense[c]);
        return Dataset(std::move(features), std::move(labels), p, std::move(ids));
    }

    int n() const { return static_cast<int>(labels_.size()); }
    int p() const { return p_; }
    int g() const { return static_cast<int>(counts_.size()); }

    std::span<const double> row(int i) const {
        return {features_.data() + static_cast<std::size_t>(i) * p_, static_cast<std::size_t>(p_)};
    }
    double at(int i, int j) const {
        return features_[static_cast<std::size_t>(i) * p_ + static_cast<std::size_t>(j)];
    }
    const std::vector<int>& labels() const { return labels_; }
    const std::vector<int>& class_ids() const { return class_ids_; }
    const std::vector<std::size_t>& class_counts() const { return counts_; }
    const std::vector<double>& features() const { return features_; }

    std::vector<double> column(int j) const {
        std::vector<double> col(labels_.size());
        for (std::size_t i = 0; i < labels_.size(); ++i)
            col[i] = features_[i * p_ + static_cast<std::size_t>(j)];
        return col;
    }

    std::vector<double> class_column(int k, int j) const {
        std::vector<double> col;
        col.reserve(counts_[static_cast<std::size_t>(k)]);
        for (std::size_t i = 0; i < labels_.size(); ++i)
            if (labels_[i] == k) col.push_back(features_[i * p_ + static_cast<std::size_t>(j)]);
        return col;
    }

    // A copy with every column divided by scales[j] (all > 0) and multiplied
    // by signs[j] when given. Labels untouched.
    Dataset transformed(const std::vector<double>& scales, const std::vector<int>* signs) const {
        if (static_cast<int>(scales.size()) != p_)
            throw std::invalid_argument("Dataset::transformed: scales length mismatch");
        if (signs && static_cast<int>(signs->size()) != p_)
            throw std::invalid_argument("Dataset::transformed: signs length mismatch");
        std::vector<double> out(features_.size());
        for (std::size_t i = 0; i < labels_.size(); ++i)
            for (int j = 0; j < p_; ++j) {
                double v = features_[i * p_ + static_cast<std::size_t>(j)] / scales[static_cast<std::size_t>(j)];
                if (signs) v *= (*signs)[static_cast<std::size_t>(j)];
                out[i * p_ + static_cast<std::size_t>(j)] = v;
            }
        return Dataset(std::move(out), labels_, p_, class_ids_);
    }

  private:
    std::vector<double> features_;
    std::vector<int> labels_;
    int p_;
    std::vector<int> class_ids_;
    std::vector<std::size_t> counts_;
};

}  // namespace qcl

#endif  // QCL_DATASET_HPP
