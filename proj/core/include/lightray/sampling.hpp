#pragma once

#include <random>

#include "lightray/linalg.hpp"
#include "lightray/ray_transform.hpp"

namespace lightray {

Vec random_unit_vector(int dim, std::mt19937_64& rng);

// Ray with unit omega and base point uniform in the ball of radius base_radius in R^{1+n}.
Ray random_ray(int n, double base_radius, std::mt19937_64& rng, double c = 1.0);

}  // namespace lightray
