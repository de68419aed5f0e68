#pragma once

#include "framefill/corpus.hpp"
#include "framefill/error.hpp"
#include "framefill/eval.hpp"
#include "framefill/frames.hpp"
#include "framefill/inventory.hpp"
#include "framefill/judgments.hpp"
#include "framefill/lm.hpp"
#include "framefill/pipeline.hpp"
#include "framefill/rng.hpp"
#include "framefill/scorers.hpp"
