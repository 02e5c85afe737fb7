#include "tilekmc/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "tilekmc/complexity.hpp"

namespace tilekmc {

DistanceMatrix::DistanceMatrix(int n, DistanceMetric metric) : n_(n), metric_(metric) {
    if (n < 1) raise(Errc::invalid_argument, "distance matrix needs n >= 1");
    entries_.assign(static_cast<std::size_t>(n) * n, 0.0);
}

std::size_t DistanceMatrix::index(int i, int j) const {
    if (i < 0 || j < 0 || i >= n_ || j >= n_)
        raise(Errc::invalid_argument, "distance matrix index out of range");
    return static_cast<std::size_t>(i) * n_ + j;
}

void DistanceMatrix::set(int i, int j, double value) {
    entries_[index(i, j)] = value;
    entries_[index(j, i)] = value;
}

void DistanceMatrix::validate() const {
    for (int i = 0; i < n_; ++i) {
        for (int j = 0; j < n_; ++j) {
            const double d = at(i, j);
            if (!std::isfinite(d)) raise(Errc::degenerate_matrix, "non-finite distance");
            if (std::abs(d - at(j, i)) > 1e-9)
                raise(Errc::degenerate_matrix, "distance matrix is not symmetric");
        }
        if (metric_ == DistanceMetric::euclidean_ratio && at(i, i) != 0.0)
            raise(Errc::degenerate_matrix, "euclidean diagonal must be zero");
    }
}

DistanceMatrix DistanceMatrix::from_ratios(std::span<const double> ratios) {
    DistanceMatrix m(static_cast<int>(ratios.size()), DistanceMetric::euclidean_ratio);
    for (int i = 0; i < m.size(); ++i)
        for (int j = i + 1; j < m.size(); ++j)
            m.set(i, j, std::abs(ratios[static_cast<std::size_t>(i)] -
                                 ratios[static_cast<std::size_t>(j)]));
    return m;
}

DistanceMatrix DistanceMatrix::from_ncd(const std::vector<std::vector<std::uint8_t>>& payloads) {
    DistanceMatrix m(static_cast<int>(payloads.size()), DistanceMetric::ncd);
    for (int i = 0; i < m.size(); ++i) {
        const auto& pi = payloads[static_cast<std::size_t>(i)];
        m.set(i, i, ncd(pi, pi));
        for (int j = i + 1; j < m.size(); ++j) {
            const auto& pj = payloads[static_cast<std::size_t>(j)];
            m.set(i, j, 0.5 * (ncd(pi, pj) + ncd(pj, pi)));
        }
    }
    return m;
}

Dendrogram hcluster(const DistanceMatrix& matrix, Linkage linkage) {
    (void)linkage; // average is the only linkage; kept in the signature as a config point
    const int n = matrix.size();
    if (n < 2) raise(Errc::degenerate_matrix, "clustering needs >= 2 points");
    matrix.validate();

    struct Cluster {
        int id;       // leaf id or n + merge index
        int min_leaf; // deterministic tie-break key
        int size;
    };
    std::vector<Cluster> active;
    active.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) active.push_back({i, i, 1});

    // Working copy of pairwise distances between active clusters,
    // updated with the Lance-Williams average-linkage rule.
    std::vector<std::vector<double>> dist(static_cast<std::size_t>(n),
                                          std::vector<double>(static_cast<std::size_t>(n), 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) dist[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = matrix.at(i, j);

    Dendrogram out{n, {}};
    out.merges.reserve(static_cast<std::size_t>(n) - 1);

    for (int step = 0; step < n - 1; ++step) {
        // Find the closest pair; ties resolved by lowest (smaller min
        // leaf, larger min leaf) of the two clusters.
        double best = std::numeric_limits<double>::infinity();
        std::size_t bi = 0, bj = 0;
        int best_lo = std::numeric_limits<int>::max();
        int best_hi = std::numeric_limits<int>::max();
        for (std::size_t i = 0; i < active.size(); ++i) {
            for (std::size_t j = i + 1; j < active.size(); ++j) {
                const double d = dist[i][j];
                const int lo = std::min(active[i].min_leaf, active[j].min_leaf);
                const int hi = std::max(active[i].min_leaf, active[j].min_leaf);
                if (d < best || (d == best && (lo < best_lo || (lo == best_lo && hi < best_hi)))) {
                    best = d;
                    bi = i;
                    bj = j;
                    best_lo = lo;
                    best_hi = hi;
                }
            }
        }

        const Cluster a = active[bi];
        const Cluster b = active[bj];
        out.merges.push_back({std::min(a.id, b.id), std::max(a.id, b.id), best});

        // Replace cluster bi with the merge; drop bj.
        const double wa = static_cast<double>(a.size);
        const double wb = static_cast<double>(b.size);
        for (std::size_t k = 0; k < active.size(); ++k) {
            if (k == bi || k == bj) continue;
            const double d = (wa * dist[bi][k] + wb * dist[bj][k]) / (wa + wb);
            dist[bi][k] = d;
            dist[k][bi] = d;
        }
        active[bi] = {n + step, std::min(a.min_leaf, b.min_leaf), a.size + b.size};

        const std::size_t last = active.size() - 1;
        if (bj != last) {
            active[bj] = active[last];
            for (std::size_t k = 0; k < active.size(); ++k) {
                dist[bj][k] = dist[last][k];
                dist[k][bj] = dist[k][last];
            }
            dist[bj][bj] = 0.0;
        }
        active.pop_back();
    }
    return out;
}

std::vector<int> cut(const Dendrogram& dendrogram, int k) {
    const int n = dendrogram.leaves;
    if (k < 1 || k > n) raise(Errc::bad_k, "cut needs 1 <= k <= leaf count");

    // Union-find over the first n - k merges.
    std::vector<int> parent(static_cast<std::size_t>(n) + dendrogram.merges.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&parent, &find](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    };

    for (int m = 0; m < n - k; ++m) {
        const Merge& merge = dendrogram.merges[static_cast<std::size_t>(m)];
        const int root = n + m;
        parent[static_cast<std::size_t>(find(merge.a))] = root;
        parent[static_cast<std::size_t>(find(merge.b))] = root;
    }

    // Label clusters 0..k-1 by ascending smallest leaf id.
    std::map<int, int> min_leaf_of_root;
    for (int leaf = 0; leaf < n; ++leaf) {
        const int root = find(leaf);
        auto it = min_leaf_of_root.find(root);
        if (it == min_leaf_of_root.end()) min_leaf_of_root[root] = leaf;
    }
    std::map<int, int> label_of_root; // ordered by min leaf = insertion by leaf scan
    int next = 0;
    for (int leaf = 0; leaf < n; ++leaf) {
        const int root = find(leaf);
        if (!label_of_root.contains(root)) label_of_root[root] = next++;
    }

    std::vector<int> labels(static_cast<std::size_t>(n));
    for (int leaf = 0; leaf < n; ++leaf)
        labels[static_cast<std::size_t>(leaf)] = label_of_root[find(leaf)];
    return labels;
}

std::vector<int> ncd_group(const std::vector<std::vector<std::uint8_t>>& payloads,
                           std::span<const double> ratios, int k) {
    if (payloads.size() < 2) raise(Errc::too_few_points, "ncd_group needs >= 2 records");
    if (payloads.size() != ratios.size())
        raise(Errc::invalid_argument, "payload/ratio count mismatch");

    const DistanceMatrix matrix = DistanceMatrix::from_ncd(payloads);
    std::vector<int> labels = cut(hcluster(matrix), k);

    // Reorder labels by ascending mean compression ratio.
    std::vector<double> total(static_cast<std::size_t>(k), 0.0);
    std::vector<int> count(static_cast<std::size_t>(k), 0);
    for (std::size_t i = 0; i < ratios.size(); ++i) {
        total[static_cast<std::size_t>(labels[i])] += ratios[i];
        ++count[static_cast<std::size_t>(labels[i])];
    }
    std::vector<int> order(static_cast<std::size_t>(k));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        const double ma = count[static_cast<std::size_t>(a)]
                              ? total[static_cast<std::size_t>(a)] / count[static_cast<std::size_t>(a)]
                              : 0.0;
        const double mb = count[static_cast<std::size_t>(b)]
                              ? total[static_cast<std::size_t>(b)] / count[static_cast<std::size_t>(b)]
                              : 0.0;
        return ma < mb;
    });
    std::vector<int> relabel(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) relabel[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = i;
    for (int& label : labels) label = relabel[static_cast<std::size_t>(label)];
    return labels;
}

namespace {

std::string sanitize(const std::string& name) {
    std::string out;
    for (char c : name)
        out += (c == '(' || c == ')' || c == ',' || c == ':' || c == ';' || c == ' ') ? '_' : c;
    return out;
}

void write_node(std::ostringstream& os, const Dendrogram& d,
                std::span<const std::string> names, int id) {
    if (id < d.leaves) {
        if (!names.empty())
            os << sanitize(names[static_cast<std::size_t>(id)]);
        else
            os << "L" << id;
        return;
    }
    const Merge& m = d.merges[static_cast<std::size_t>(id - d.leaves)];
    os << '(';
    write_node(os, d, names, m.a);
    os << ',';
    write_node(os, d, names, m.b);
    os << "):" << m.height;
}

} // namespace

std::string to_newick(const Dendrogram& dendrogram, std::span<const std::string> leaf_names) {
    if (!leaf_names.empty() && static_cast<int>(leaf_names.size()) != dendrogram.leaves)
        raise(Errc::invalid_argument, "leaf name count mismatch");
    std::ostringstream os;
    const int root = dendrogram.leaves + static_cast<int>(dendrogram.merges.size()) - 1;
    write_node(os, dendrogram, leaf_names, dendrogram.merges.empty() ? 0 : root);
    os << ';';
    return os.str();
}

} // namespace tilekmc
