// SPDX-License-Identifier: Apache-2.0

#ifndef UAVMM_CODEBOOK_HPP
#define UAVMM_CODEBOOK_HPP

#include "uavmm/array_channel.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace uavmm {

// Codebooks assume a half-wavelength ULA; gains are evaluated on the
// normalized angle domain [-1, 1), which the array factor repeats with period 2.

enum class CodebookKind { deact, bmw_ss };

std::string to_string(CodebookKind kind);
CodebookKind parse_codebook_kind(std::string_view name);

// Coverage of w(k, n): [-1 + 2n/M^k, -1 + 2(n+1)/M^k). Indices are 0-based.
struct AngleSlice {
    double lo = -1.0;
    double hi = 1.0;

    double center() const { return 0.5 * (lo + hi); }
    double width() const { return hi - lo; }
    bool contains(double omega) const { return omega >= lo && omega < hi; }
};

AngleSlice coverage_slice(int branching, int layer, int index);

struct Codeword {
    CVector weights;
    std::vector<bool> active_mask;
    int layer = 0;
    int index = 0;

    int size() const { return static_cast<int>(weights.size()); }
    int active_count() const;
};

class HierCodebook {
public:
    HierCodebook(int n_antennas, int branching, CodebookKind kind, std::vector<std::vector<Codeword>> layers);

    int n_antennas() const { return n_antennas_; }
    int branching() const { return branching_; }
    // Index S of the bottom layer; there are S + 1 layers.
    int depth() const { return static_cast<int>(layers_.size()) - 1; }
    CodebookKind kind() const { return kind_; }

    const std::vector<Codeword> &layer(int k) const;
    const Codeword &at(int k, int n) const;
    std::vector<int> children(int k, int n) const;
    AngleSlice slice(int k, int n) const { return coverage_slice(branching_, k, n); }

private:
    int n_antennas_;
    int branching_;
    CodebookKind kind_;
    std::vector<std::vector<Codeword>> layers_;
};

// log_base(n) when n is an exact power of base (base >= 2); domain_error otherwise.
int exact_log(int n, int base);

HierCodebook build_deact(int n_antennas, int branching);
HierCodebook build_bmw_ss(int n_antennas, int branching);
HierCodebook build_codebook(CodebookKind kind, int n_antennas, int branching);

// |sqrt(N) a(N, omega)^H w|^2 for a half-wavelength array: a pencil beam
// peaks at N.
double array_gain(const CVector &w, double omega);

struct BeamPattern {
    std::vector<double> omega;
    std::vector<double> gain_db; // -inf at exact nulls
};

// Uniform grid omega_g = -1 + 2g/grid_size; grid_size must be >= 2N.
BeamPattern beam_pattern(const Codeword &w, int grid_size);

struct CoverageStats {
    double peak_db = 0.0;           // global peak over the grid
    double min_in_slice_db = 0.0;   // worst point inside the coverage slice
    double max_in_slice_db = 0.0;
};

CoverageStats coverage_stats(const HierCodebook &cb, int layer, int index, int grid_size = 1024);

struct UnionCheckLayer {
    int layer = 0;
    int worst_index = -1;        // parent with the largest ripple; -1 for the bottom layer
    double worst_ripple_db = 0.0; // reference child peak minus parent in-slice minimum
    bool pass = true;
};

// Parent w(k, n) must keep every in-slice gain above the mean (in dB) of its
// children's in-slice peaks minus ripple_db.
std::vector<UnionCheckLayer> coverage_union_check(const HierCodebook &cb, double ripple_db, int grid_size = 1024);

} // namespace uavmm

#endif
