#pragma once

// Umbrella header for the delay-Doppler / OFDM modem toolkit and its
// quasi-banded LMMSE receiver.

#include "otfs/channel.hpp"
#include "otfs/cm_counter.hpp"
#include "otfs/complexity.hpp"
#include "otfs/equalizer.hpp"
#include "otfs/fft.hpp"
#include "otfs/grid.hpp"
#include "otfs/modem.hpp"
#include "otfs/oracle.hpp"
#include "otfs/partitioned_lu.hpp"
#include "otfs/qam.hpp"
#include "otfs/quasi_banded.hpp"
#include "otfs/random.hpp"
#include "otfs/sim.hpp"
#include "otfs/types.hpp"
