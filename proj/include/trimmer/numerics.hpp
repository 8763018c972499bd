#pragma once

#include "trimmer/numerics/adam.hpp"
#include "trimmer/numerics/gradcheck.hpp"
#include "trimmer/numerics/layers.hpp"
#include "trimmer/numerics/model_io.hpp"
#include "trimmer/numerics/tensor.hpp"
