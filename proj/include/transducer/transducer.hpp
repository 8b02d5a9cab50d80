#pragma once

#include "transducer/errors.hpp"
#include "transducer/field_io.hpp"
#include "transducer/modes.hpp"
#include "transducer/network.hpp"
#include "transducer/numeric.hpp"
#include "transducer/optics.hpp"
#include "transducer/params.hpp"
#include "transducer/piezo.hpp"
#include "transducer/sfg.hpp"
#include "transducer/spectrum.hpp"
#include "transducer/transducer_graph.hpp"
