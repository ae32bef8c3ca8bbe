#pragma once

#include <string>

#include "aptt/dense_tensor.hpp"
#include "aptt/tt_tensor.hpp"

namespace aptt {

/// Binary field dump: one text header line
///   APTT1 <D> <m> <order>\n
/// followed by m^order little-endian 64-bit floats in the project's
/// linearization (first mode fastest).  All modes must share the size m.
void write_dense_field(const std::string& path, const DenseTensor& t, int dim);
DenseTensor read_dense_field(const std::string& path, int* dim_out = nullptr);

/// Train dump: header lines
///   APTT1 TT <D> <m> <order>\n
///   <r_0> <r_1> ... <r_order>\n
/// followed by the cores in order, each as little-endian doubles with the
/// left rank index fastest.
void write_tt_field(const std::string& path, const TtTensor& t, int dim);
TtTensor read_tt_field(const std::string& path, int* dim_out = nullptr);

}  // namespace aptt
