#pragma once

#include <string>

#include "landau/cauchy.hpp"

// JSON scenario configuration:
// {
//   "variant": "CPa" | "CPb",
//   "B": 1.0, "T": 2.0, "s": 0.0,
//   "truncation": {"j_max": 3, "n_max": 3},
//   "a": {"segments": [{"t_start": 0, "t_end": 2, "poly_coeffs": [1]}],
//         "deltas": [{"t": 1, "weight": 1}], "lower_bound": 1},
//   "q": { ... same schema ... },
//   "forcing": [{"j": 0, "n": 0, "component": 1,
//                "amplitude_re": 1, "amplitude_im": 0, "frequency": 3}],
//   "data": [{"j": 0, "n": 0, "component": 1,
//             "u0_re": 1, "u0_im": 0, "u1_re": 0, "u1_im": 0}]
// }
// Polynomial coefficients are in global t (value = sum c_k t^k). "q" may be
// omitted (zero potential).

namespace landau {

CauchyProblem parse_problem_json(const std::string& text);
CauchyProblem load_problem_file(const std::string& path);

}  // namespace landau
