#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tilekmc/errors.hpp"

namespace tilekmc {

enum class DistanceMetric { euclidean_ratio, ncd };

/// Symmetric n x n distance matrix. NCD entries are symmetrized by
/// averaging when built; the diagonal carries measured self-distances
/// for NCD (small but nonzero with a real compressor) and zeros for
/// euclidean metrics. Clustering never reads the diagonal.
class DistanceMatrix {
public:
    DistanceMatrix(int n, DistanceMetric metric);

    int size() const { return n_; }
    DistanceMetric metric() const { return metric_; }

    double at(int i, int j) const { return entries_[index(i, j)]; }
    void set(int i, int j, double value); // symmetric assignment

    /// Throws unless entries are finite, symmetric within 1e-9, and the
    /// diagonal is 0 for euclidean metrics.
    void validate() const;

    /// Pairwise |ratio_i - ratio_j| distances.
    static DistanceMatrix from_ratios(std::span<const double> ratios);

    /// Pairwise NCD over byte payloads, symmetrized by averaging
    /// ncd(i,j) and ncd(j,i); the diagonal holds ncd(i,i).
    static DistanceMatrix from_ncd(const std::vector<std::vector<std::uint8_t>>& payloads);

private:
    std::size_t index(int i, int j) const;

    int n_;
    DistanceMetric metric_;
    std::vector<double> entries_;
};

/// One agglomerative merge: clusters a and b (leaves are 0..n-1, the
/// i-th merge creates cluster n+i) joined at the given height.
struct Merge {
    int a = 0;
    int b = 0;
    double height = 0.0;
};

struct Dendrogram {
    int leaves = 0;
    std::vector<Merge> merges; // n-1 merges, non-decreasing heights
};

enum class Linkage { average };

/// Agglomerative hierarchical clustering with deterministic tie-breaks:
/// among pairs at the minimal distance, the pair whose smallest leaf ids
/// are lexicographically lowest merges first.
/// Errors: degenerate_matrix (n < 2).
Dendrogram hcluster(const DistanceMatrix& matrix, Linkage linkage = Linkage::average);

/// Cuts the dendrogram into exactly k clusters. Labels are 0..k-1
/// ordered by each cluster's smallest leaf id. Errors: bad_k.
std::vector<int> cut(const Dendrogram& dendrogram, int k);

/// Clusters byte payloads by NCD and cuts at k; labels are reordered so
/// that group 0 has the lowest mean compression ratio.
std::vector<int> ncd_group(const std::vector<std::vector<std::uint8_t>>& payloads,
                           std::span<const double> ratios, int k = 2);

/// Newick-like text export with merge heights as node annotations.
std::string to_newick(const Dendrogram& dendrogram, std::span<const std::string> leaf_names);

} // namespace tilekmc
