#pragma once

#include "trustrate/campaign.hpp"
#include "trustrate/chatbot.hpp"
#include "trustrate/checkers.hpp"
#include "trustrate/corpus.hpp"
#include "trustrate/corpus_io.hpp"
#include "trustrate/defaults.hpp"
#include "trustrate/error.hpp"
#include "trustrate/rating.hpp"
#include "trustrate/report.hpp"
#include "trustrate/services.hpp"
#include "trustrate/stats.hpp"
