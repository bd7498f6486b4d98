#include "stormcast/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "stormcast/errors.hpp"
#include "stormcast/rng.hpp"

namespace stormcast {

void SplitConfig::validate() const {
    if (!(test_fraction > 0.0) || !(test_fraction < 1.0))
        throw std::invalid_argument("test_fraction must be in (0, 1)");
}

TrainTestSplit stratified_split(const std::vector<LabeledExample>& examples,
                                const SplitConfig& cfg) {
    cfg.validate();

    std::vector<size_t> by_class[2];
    for (size_t i = 0; i < examples.size(); ++i)
        by_class[examples[i].label == StormClass::storm ? 1 : 0].push_back(i);

    if (by_class[0].empty() || by_class[1].empty())
        throw DataError("both classes must be present to split");

    std::vector<uint8_t> is_test(examples.size(), 0);
    Rng rng(cfg.seed);
    for (auto& members : by_class) {
        if (members.size() < 2)
            throw DataError("a class has fewer than 2 members");
        const auto n = members.size();
        size_t want = static_cast<size_t>(std::llround(cfg.test_fraction * double(n)));
        want = std::clamp<size_t>(want, 1, n - 1);
        rng.shuffle(members);
        for (size_t i = 0; i < want; ++i) is_test[members[i]] = 1;
    }

    TrainTestSplit split;
    for (size_t i = 0; i < examples.size(); ++i)
        (is_test[i] ? split.test : split.train).push_back(examples[i]);
    return split;
}

void SmoteConfig::validate() const {
    if (k_neighbors < 1) throw std::invalid_argument("k_neighbors must be >= 1");
    if (!(target_ratio > 0.0)) throw std::invalid_argument("target_ratio must be > 0");
}

SmoteOutput smote(const std::vector<FeatureVector>& minority, size_t majority_count,
                  const SmoteConfig& cfg) {
    cfg.validate();
    if (minority.size() <= static_cast<size_t>(cfg.k_neighbors))
        throw DataError("SMOTE needs more than k_neighbors=" +
                        std::to_string(cfg.k_neighbors) + " minority samples, got " +
                        std::to_string(minority.size()));

    const size_t target =
        static_cast<size_t>(std::ceil(cfg.target_ratio * double(majority_count)));
    SmoteOutput out;
    if (target <= minority.size()) return out;
    const size_t n_new = target - minority.size();

    const size_t dim = minority[0].size();
    for (const auto& v : minority)
        if (v.size() != dim) throw std::invalid_argument("inconsistent feature dimensions");

    // k nearest minority neighbors per sample, self excluded, ties by index.
    const size_t k = static_cast<size_t>(cfg.k_neighbors);
    std::vector<std::vector<int>> knn(minority.size());
    std::vector<std::pair<double, int>> dists;
    for (size_t i = 0; i < minority.size(); ++i) {
        dists.clear();
        for (size_t j = 0; j < minority.size(); ++j) {
            if (j == i) continue;
            double d2 = 0.0;
            for (size_t f = 0; f < dim; ++f) {
                const double diff = minority[i][f] - minority[j][f];
                d2 += diff * diff;
            }
            dists.emplace_back(d2, static_cast<int>(j));
        }
        std::sort(dists.begin(), dists.end());
        knn[i].reserve(k);
        for (size_t j = 0; j < k; ++j) knn[i].push_back(dists[j].second);
    }

    Rng rng(cfg.seed);
    out.synthetic.reserve(n_new);
    for (size_t s = 0; s < n_new; ++s) {
        const int base = static_cast<int>(s % minority.size());
        const int nn = knn[static_cast<size_t>(base)][rng.next_below(k)];
        const double u = rng.next_unit();

        FeatureVector v(dim);
        const auto& a = minority[static_cast<size_t>(base)];
        const auto& b = minority[static_cast<size_t>(nn)];
        for (size_t f = 0; f < dim; ++f) v[f] = a[f] + u * (b[f] - a[f]);
        for (size_t f : cfg.binary_indices)
            if (f < dim) v[f] = v[f] < 0.5 ? 0.0 : 1.0;

        out.synthetic.push_back(std::move(v));
        out.parents.emplace_back(base, nn);
        out.interpolation.push_back(u);
    }
    return out;
}

} // namespace stormcast
