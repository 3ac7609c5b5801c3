#pragma once

#include "dephasing/bath.hpp"
#include "dephasing/controlled_decoherence.hpp"
#include "dephasing/figures.hpp"
#include "dephasing/io.hpp"
#include "dephasing/measures.hpp"
#include "dephasing/parallel.hpp"
#include "dephasing/profile.hpp"
#include "dephasing/pulse_sequence.hpp"
#include "dephasing/sweep.hpp"
#include "dephasing/validation.hpp"
