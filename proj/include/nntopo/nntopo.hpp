#pragma once

#include <nntopo/activation.hpp>
#include <nntopo/analytics.hpp>
#include <nntopo/distance.hpp>
#include <nntopo/error.hpp>
#include <nntopo/persistence.hpp>
#include <nntopo/pipeline.hpp>
#include <nntopo/rng.hpp>
#include <nntopo/stats.hpp>
#include <nntopo/svg.hpp>
#include <nntopo/synthetic.hpp>
