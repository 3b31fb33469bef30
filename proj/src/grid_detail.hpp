#ifndef MOYALSPIN_GRID_DETAIL_HPP
#define MOYALSPIN_GRID_DETAIL_HPP

#include <moyalspin/grid.hpp>

#include <functional>

namespace moyalspin::detail {

// Kernel form of the cross-Wigner transform: kernel(x_minus, x_plus) is the
// operator kernel <x_minus|A|x_plus> at flat lattice sites.
using PairKernel = std::function<cplx(std::size_t minus, std::size_t plus)>;
PhaseFunction wigner_from_pairs(const GridSpec& grid, const PairKernel& kernel);

// Lattice offset table shared by the Wigner and tilde transforms: for each
// slot s in [0, M^d), M = N/2, the signed offset j in [-M/2, M/2)^d with
// slot = j mod M.
std::vector<std::array<int, 3>> half_offsets(const GridSpec& grid);

// kernel value averaged over the sign choices of offsets sitting at -M/2,
// which share a slot with +M/2.
cplx symmetrized_pair(const GridSpec& grid, const std::array<int, 3>& q,
                      const std::array<int, 3>& j, const PairKernel& kernel);

// out[r] = sum_k exp(sign 2 pi i (r - N/2).(k - N/2)/N) in[k] on the
// N^d lattice with centred indices.
std::vector<cplx> centered_dft(std::span<const cplx> in, const GridSpec& grid, int sign);

// Flat lattice index of per-axis indices, wrapped periodically.
std::size_t wrap_flat(const GridSpec& grid, const std::array<int, 3>& idx);

}  // namespace moyalspin::detail

#endif
