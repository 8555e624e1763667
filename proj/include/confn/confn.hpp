#pragma once

#include "confn/certificate.hpp"
#include "confn/cone.hpp"
#include "confn/constructions.hpp"
#include "confn/core.hpp"
#include "confn/descriptor.hpp"
#include "confn/engine.hpp"
#include "confn/h0.hpp"
#include "confn/lattice.hpp"
#include "confn/pipelines.hpp"
#include "confn/verify.hpp"
