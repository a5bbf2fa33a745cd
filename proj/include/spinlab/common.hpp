#pragma once
// Shared basics: intervals, error taxonomy, thread pool helper, hashing.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

namespace spinlab {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kPi = 3.14159265358979323846264338327950288;

// Closed/half-open interval of the real line; infinite endpoints allowed.
struct Interval {
    double lo = -kInf;
    double hi = kInf;

    bool contains(double x) const { return x >= lo && x <= hi; }
    bool contains_interior(double x) const { return x > lo && x < hi; }
    double length() const { return hi - lo; }
    bool finite() const { return std::isfinite(lo) && std::isfinite(hi); }
    double clamp(double x) const { return x < lo ? lo : (x > hi ? hi : x); }

    static Interval whole() { return {}; }
};

// Error taxonomy.  Each failure mode named by the condition that triggered it;
// callers can catch the base Error or a specific kind.
class Error : public std::runtime_error {
  public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
    const std::string& kind() const { return kind_; }

  private:
    std::string kind_;
};

#define SPINLAB_ERROR(Name)                                     \
    class Name : public Error {                                 \
      public:                                                   \
        explicit Name(const std::string& what)                  \
            : Error(#Name, what) {}                             \
    }

SPINLAB_ERROR(OutOfSupport);
SPINLAB_ERROR(UnknownPotential);
SPINLAB_ERROR(NonIntegrable);
SPINLAB_ERROR(DegenerateDensity);
SPINLAB_ERROR(OscillationBudgetExceeded);
SPINLAB_ERROR(NonAdmissible);
SPINLAB_ERROR(WindowExhausted);
SPINLAB_ERROR(NoConvergence);
SPINLAB_ERROR(NonConvexHamiltonian);
SPINLAB_ERROR(NegativeFunction);
SPINLAB_ERROR(NonPositiveFunction);
SPINLAB_ERROR(OddDimension);
SPINLAB_ERROR(GridBudgetExceeded);
SPINLAB_ERROR(EigensolveFailure);
SPINLAB_ERROR(EmptySeries);

#undef SPINLAB_ERROR

// Runs fn(i) for i in [0, n).  Tasks must be independent; each writes its own
// slot, so results are identical for any worker count.  Worker count is
// hardware concurrency capped by RENORM_LSI_THREADS.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

// FNV-1a, used to stamp output files with a config fingerprint.
std::uint64_t fnv1a64(const std::string& bytes);

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace spinlab
