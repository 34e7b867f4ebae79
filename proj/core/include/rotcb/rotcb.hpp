#pragma once

#include "rotcb/channel.hpp"
#include "rotcb/codebook.hpp"
#include "rotcb/correlation.hpp"
#include "rotcb/error.hpp"
#include "rotcb/experiment.hpp"
#include "rotcb/linalg.hpp"
#include "rotcb/numeric_io.hpp"
#include "rotcb/random.hpp"
#include "rotcb/simulator.hpp"
#include "rotcb/tucker.hpp"
