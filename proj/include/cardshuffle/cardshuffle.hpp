#pragma once

#include "cardshuffle/deck.hpp"
#include "cardshuffle/enumeration.hpp"
#include "cardshuffle/error.hpp"
#include "cardshuffle/formulas.hpp"
#include "cardshuffle/linalg.hpp"
#include "cardshuffle/montecarlo.hpp"
#include "cardshuffle/rational.hpp"
#include "cardshuffle/report.hpp"
#include "cardshuffle/solver.hpp"
#include "cardshuffle/verify.hpp"
