#pragma once

#include <memory>
#include <mutex>
#include <optional>

#include "circwalk/kernels.hpp"
#include "circwalk/spectral.hpp"

namespace circwalk {

struct ChainModel::Cache {
  std::mutex mutex;
  std::unique_ptr<StateSpace> space;
  std::unique_ptr<SparseKernel> kernel;
  std::unique_ptr<Spectrum> spectrum;
  std::optional<double> gamma;
};

}  // namespace circwalk
