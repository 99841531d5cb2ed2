#pragma once

#include "bct/assoc.hpp"
#include "bct/channel.hpp"
#include "bct/codec.hpp"
#include "bct/dilation.hpp"
#include "bct/entropy.hpp"
#include "bct/experiment.hpp"
#include "bct/rate.hpp"
#include "bct/rational.hpp"
#include "bct/report.hpp"
#include "bct/rng.hpp"
#include "bct/state.hpp"
#include "bct/system.hpp"
#include "bct/typical.hpp"
