#pragma once

#include <stdexcept>
#include <string>

namespace zeroscope {

/// Mixin carrying a short machine-readable category; the CLI recovers it with
/// dynamic_cast when it writes the error JSON.
struct error_kind {
  virtual ~error_kind() = default;
  virtual const char* kind() const noexcept = 0;
};

namespace detail {
template <class Base, const char* Kind>
class tagged_error : public Base, public error_kind {
 public:
  explicit tagged_error(const std::string& what) : Base(what) {}
  const char* kind() const noexcept override { return Kind; }
};

inline constexpr char kDomain[] = "domain";
inline constexpr char kResource[] = "resource";
inline constexpr char kNumeric[] = "numeric";
inline constexpr char kRange[] = "range";
inline constexpr char kInconsistency[] = "inconsistency";
inline constexpr char kInvariant[] = "invariant";
inline constexpr char kIndeterminate[] = "indeterminate";
inline constexpr char kCompleteness[] = "completeness";
}  // namespace detail

using domain_error = detail::tagged_error<std::domain_error, detail::kDomain>;
using resource_error = detail::tagged_error<std::runtime_error, detail::kResource>;
using numeric_error = detail::tagged_error<std::runtime_error, detail::kNumeric>;
using range_error = detail::tagged_error<std::range_error, detail::kRange>;
using inconsistency_error = detail::tagged_error<std::logic_error, detail::kInconsistency>;
using invariant_violation = detail::tagged_error<std::logic_error, detail::kInvariant>;
using indeterminate_error = detail::tagged_error<std::runtime_error, detail::kIndeterminate>;

/// Zero-set certificate mismatch. `off_line_suspect` is set when the
/// argument-principle count exceeds the number of sign changes, which is what
/// a zero off the critical line would produce.
class completeness_error
    : public detail::tagged_error<std::runtime_error, detail::kCompleteness> {
 public:
  completeness_error(const std::string& what, bool off_line_suspect)
      : tagged_error(what), off_line_suspect_(off_line_suspect) {}
  bool off_line_suspect() const noexcept { return off_line_suspect_; }

 private:
  bool off_line_suspect_;
};

}  // namespace zeroscope
