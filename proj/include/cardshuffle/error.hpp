#pragma once

#include <stdexcept>
#include <string>

namespace cardshuffle {

// Error codes used across the library.  Each thrown Error carries one code so
// callers (and tests) can dispatch without parsing messages.
enum class Errc {
    odd_length,
    unbalanced,
    invalid_character,
    too_large,
    not_a_d_deck,
    absorbing_input,
    out_of_range,
    not_tier1,
    empty_tier,
    singular_matrix,
    step_cap_exceeded,
};

class Error : public std::runtime_error {
  public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Errc code() const noexcept { return code_; }

  private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace cardshuffle
