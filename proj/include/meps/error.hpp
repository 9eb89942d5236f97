#pragma once

#include <stdexcept>
#include <string>

namespace meps {

// Error categories surfaced across the library and mapped to C API status
// codes. `contract` marks violated preconditions, `config` invalid build or
// experiment configuration, `numeric` domain errors (nonpositive weights,
// overflow), `unsupported` refusals (e.g. softmax in the equivalence check).
enum class Errc {
    contract,
    config,
    mapping,
    integrity,
    numeric,
    ordering,
    unsupported,
    io,
};

class Error : public std::runtime_error {
public:
    Error(Errc kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    Errc kind() const noexcept { return kind_; }

private:
    Errc kind_;
};

[[noreturn]] inline void raise(Errc kind, const std::string& message) {
    throw Error(kind, message);
}

} // namespace meps
