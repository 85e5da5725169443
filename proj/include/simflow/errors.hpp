#pragma once

#include <stdexcept>
#include <string>

namespace simflow {

// Error taxonomy maps 1:1 onto CLI exit codes (see tools/).
struct validation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct singular_evaluation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct entropy_violation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct no_root_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct integration_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct weak_form_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct extend_range_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace simflow
