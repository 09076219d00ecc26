#pragma once

#include "tucb/common.hpp"
#include "tucb/model_set.hpp"
#include "tucb/confidence.hpp"
#include "tucb/arm_statistics.hpp"
#include "tucb/policies.hpp"
#include "tucb/episode.hpp"
#include "tucb/complexity.hpp"
#include "tucb/spectral/tensor.hpp"
#include "tucb/spectral/moments.hpp"
#include "tucb/spectral/whitening.hpp"
#include "tucb/spectral/power_method.hpp"
#include "tucb/spectral/recovery.hpp"
#include "tucb/spectral/diagnostics.hpp"
#include "tucb/transfer/umucb.hpp"
#include "tucb/transfer/classify.hpp"
#include "tucb/transfer/tucb.hpp"
