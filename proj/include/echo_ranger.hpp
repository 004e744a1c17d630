#pragma once

#include "echo_ranger/acoustics.hpp"
#include "echo_ranger/cli.hpp"
#include "echo_ranger/config.hpp"
#include "echo_ranger/detector.hpp"
#include "echo_ranger/error.hpp"
#include "echo_ranger/fft.hpp"
#include "echo_ranger/harness.hpp"
#include "echo_ranger/parallel.hpp"
#include "echo_ranger/signal.hpp"
#include "echo_ranger/tdoe.hpp"
#include "echo_ranger/wav.hpp"
