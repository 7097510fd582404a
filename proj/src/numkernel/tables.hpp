#pragma once
// Shared memo tables of sigma_e(n), grown on demand.
// Readers get an immutable snapshot; growth is serialized under one lock.

#include <memory>
#include <vector>

#include "eiscrit/mpreal.hpp"

namespace eiscrit::detail {

// Entry n holds sigma_e(n); entry 0 is unused. Size is at least count + 1.
std::shared_ptr<const std::vector<long double>> sigma_table_ld(int e, long count);
std::shared_ptr<const std::vector<MpReal>> sigma_table_mp(int e, long count, int bits);

template <class T>
struct SigmaTable;
template <>
struct SigmaTable<long double> {
  static auto get(int e, long count) { return sigma_table_ld(e, count); }
};
template <>
struct SigmaTable<MpReal> {
  static auto get(int e, long count) { return sigma_table_mp(e, count, static_cast<int>(MpReal::precision())); }
};

}  // namespace eiscrit::detail
