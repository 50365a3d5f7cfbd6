// Exception types shared by every module.
#pragma once

#include <stdexcept>
#include <string>

namespace cachedof {

/// Base of every error the library throws.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Configuration validation.
class non_integer_t : public error {
 public:
  using error::error;
};

class transmit_cache_too_small : public error {
 public:
  using error::error;
};

class out_of_range : public error {
 public:
  using error::error;
};

/// A closed form or combinatorial routine was evaluated outside its hypotheses.
class domain_error : public error {
 public:
  using error::error;
};

class index_out_of_range : public error {
 public:
  using error::error;
};

// Linear algebra.
class singular_matrix : public error {
 public:
  using error::error;
};

class full_row_rank_exhausted : public error {
 public:
  using error::error;
};

// Delivery.
class genericity_failure : public error {
 public:
  using error::error;
};

class singular_system : public error {
 public:
  using error::error;
};

class decoding_failure : public error {
 public:
  using error::error;
};

/// Batch size does not clear the retrospective scheduler's integrality.
class divisibility_error : public error {
 public:
  divisibility_error(const std::string& what, std::size_t required_multiple)
      : error(what), required_multiple_(required_multiple) {}

  std::size_t required_multiple() const noexcept { return required_multiple_; }

 private:
  std::size_t required_multiple_;
};

class empty_grid : public error {
 public:
  using error::error;
};

}  // namespace cachedof
