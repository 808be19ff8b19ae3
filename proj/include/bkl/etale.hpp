#pragma once

// The etale algebra F_lambda (x) F_{q^m}, realized as a product of field
// powers F_{q^{l_i}}^{d_i} with d_i = gcd(n_i, m), l_i = lcm(n_i, m), inside
// one ambient field.  Provides the two norms, the absolute trace, and
// enumeration of norm fibers grouped into kernel-coset runs.

#include <functional>
#include <vector>

#include "bkl/ff.hpp"

namespace bkl {

class EtaleAlgebra {
public:
  struct Factor {
    unsigned n, d, l;  // part size, gcd(n, m), lcm(n, m)
  };

  EtaleAlgebra(const AmbientField& F, std::vector<unsigned> lambda, unsigned m);

  const AmbientField& field() const { return *F_; }
  const std::vector<unsigned>& lambda() const { return lambda_; }
  unsigned m() const { return m_; }
  unsigned n() const { return n_; }
  const std::vector<Factor>& factors() const { return factors_; }

  unsigned coord_count() const { return unsigned(coord_factor_.size()); }
  unsigned coord_factor(unsigned t) const { return coord_factor_[t]; }
  unsigned coord_slot(unsigned t) const { return coord_slot_[t]; }
  unsigned coord_l(unsigned t) const { return factors_[coord_factor_[t]].l; }

  /// |A^x|, saturating at UINT64_MAX.
  uint64_t unit_count() const;
  /// |A^x| / (q^m - 1): the size of every norm2 fiber over F_{q^m}^x.
  uint64_t fiber_size() const;
  /// Size of each kernel-coset run, (q^{l_last} - 1)/(q^m - 1).
  uint64_t run_length() const;

private:
  const AmbientField* F_;
  std::vector<unsigned> lambda_;
  unsigned m_ = 1, n_ = 0;
  std::vector<Factor> factors_;
  std::vector<unsigned> coord_factor_, coord_slot_;  // flattened, factor-major
};

/// Element as per-factor coordinate lists; coords[i][j] lies in F_{q^{l_i}}.
struct EtaleElement {
  std::vector<std::vector<Fe>> coords;
};

void validate_membership(const EtaleAlgebra& A, const EtaleElement& x);

/// Factor-wise first norm, one value in each F_{q^{n_i}}.
std::vector<Fe> norm1(const EtaleAlgebra& A, const EtaleElement& x);
/// Second norm down to F_{q^m}; on units matches det of the multiplication map.
Fe norm2(const EtaleAlgebra& A, const EtaleElement& x);
/// Absolute trace down to F_q.
Fe abs_trace(const EtaleAlgebra& A, const EtaleElement& x);

/// Enumerates {x in A^x : norm2(x) = a} grouped into runs: fn(w, w0) is
/// called once per assignment of the free coordinates, where w holds the
/// subfield dlogs of all coordinates (w.back() is a placeholder) and the last
/// coordinate ranges over g_l ^ (w0 + t * (q^m - 1)), t = 0 .. run_length()-1.
/// Iteration order is a fixed odometer over the free coordinates.
void for_each_fiber_run(const EtaleAlgebra& A, Fe a,
                        const std::function<void(std::vector<uint64_t>& w, uint64_t w0)>& fn);

/// Element-level fiber enumeration (wraps the run enumeration).
void for_each_fiber_element(const EtaleAlgebra& A, Fe a,
                            const std::function<void(const EtaleElement&)>& fn);

}  // namespace bkl
