#ifndef DS2CF_TYPES_HPP
#define DS2CF_TYPES_HPP

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace ds2cf {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// One exception type for the whole library; the kind maps 1:1 onto the
// C API status codes.
class Error : public std::runtime_error {
 public:
  enum class Kind {
    invalid_argument,
    parse,
    domain,
    format,
    io,
    numeric,
    not_found,
    internal,
  };

  Error(Kind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

inline void require(bool condition, Error::Kind kind, const std::string& message) {
  if (!condition) throw Error(kind, message);
}

}  // namespace ds2cf

#endif
