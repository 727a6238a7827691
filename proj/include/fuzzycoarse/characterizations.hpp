#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fuzzycoarse/fuzzy_space.hpp"
#include "fuzzycoarse/numerics.hpp"
#include "fuzzycoarse/property_a.hpp"

namespace fuzzycoarse {

/// One vector per point (row x is eta_x over X) with the support window:
/// eta_x(y) != 0 only when M(x,y,T) > 1 - R.
struct Field {
  Matrix vectors;
  Scale window;

  std::size_t size() const { return vectors.rows(); }
};

/// A real kernel with an optional antisymmetric imaginary part, zero whenever
/// M(x,y,T) < 1 - R for its window.
struct Kernel {
  SymMatrix real;
  std::optional<Matrix> imag;
  Scale window;
};

/// Matrix entries <S delta_y, delta_x>, zero whenever M(x,y,t) < 1 - r.
struct PropagatedOperator {
  Matrix matrix;
  Scale window;
};

/// Record of one transform. `bound` is the certified strict upper bound on
/// `measured`; `output_eps` is what the next step receives.
struct StepCertificate {
  std::string step;
  double input_eps = 0.0;
  double bound = 0.0;
  double measured = 0.0;
  double output_eps = 0.0;
  bool passed = false;
  std::vector<std::string> notes;
};

/// Smallest eps handed to the next step.
inline constexpr double kTrackedEpsFloor = 1e-6;

/// Largest eps for which 1 - 4 eps - eps^2 > 0.
double witness_eps_limit();

// (i) -> (ii)
struct L1Step {
  Field field;
  StepCertificate cert;
};

/// zeta_x(y) = |A_x(y)|, eta_x = zeta_x / ||zeta_x||_1. The witness is verified
/// at p; the step bound is 2 p.eps and every close pair must also satisfy
/// ||eta_x - eta_y||_1 <= 2 |A_x Δ A_y| / |A_y|.
L1Step witness_to_l1(const FuzzySpace& space, const WitnessFamily& w, const ParamTuple& p);

// (ii) -> (iii)
struct L2Step {
  Field field;
  StepCertificate cert;
};

/// eta_x(y) = sqrt|xi_x(y)|, bound sqrt(eps) when the l1 field is eps-close.
L2Step l1_to_l2(const FuzzySpace& space, const Field& l1, Scale close, double eps);

// (iii) -> (iv)
struct WindowStep {
  Scale window;  // (1-R)*(1-R) at 2T
  std::size_t far_pairs = 0;
  std::size_t violations = 0;  // far pairs with a nonzero inner product
  bool support_ok = false;
  StepCertificate cert;
};

WindowStep orthogonality_window(const FuzzySpace& space, const Field& l2);

// (iv) -> (v)
struct KernelStep {
  Kernel kernel;
  double min_eigenvalue = 0.0;
  double identity_error = 0.0;  // max | |1-k| - ||eta_x-eta_y||^2/2 | over close pairs
  StepCertificate cert;
};

/// k(x,y) = <eta_x, eta_y> with the orthogonality window; bound eps^2/2.
KernelStep l2_to_kernel(const FuzzySpace& space, const Field& l2, Scale window, Scale close, double eps);

// (v) -> (vi)
struct OperatorStep {
  PropagatedOperator op;
  std::size_t ulf = 0;  // N_{R,T} for the kernel window
  std::size_t max_row_support = 0;
  double norm = 0.0;
  bool psd = false;
  StepCertificate cert;
};

OperatorStep kernel_to_operator(const FuzzySpace& space, const Kernel& k);

// (vi) -> (iii)
struct SqrtStep {
  SymMatrix s_l;
  SymMatrix s_m;
  Scale truncation_window;
  double sqrt_residual = 0.0;      // ||S_l^2 - S_k||_F
  double s_l_norm = 0.0;
  double truncation_bound = 0.0;   // min(eps, eps / (2(||S_l|| + eps)))
  double truncation_norm = 0.0;    // certified upper bound on ||S_l - S_m||
  std::size_t kept_entries = 0;
  double gram_error = 0.0;         // max |<theta_x, theta_y> - k(x,y)|
  double min_theta_sq = 0.0;       // min ||theta_x||^2
  Field field;
  StepCertificate cert;
};

/// Square root, smallest admissible truncation window over the grid, rows as
/// theta_x and unit normalization. Rejects eps >= 1/2.
SqrtStep operator_to_l2(const FuzzySpace& space, const PropagatedOperator& s_k, Scale close, double eps);

// (iii) -> (i)
struct WitnessStep {
  WitnessFamily witness;
  std::size_t ulf = 0;
  std::uint64_t N = 0;
  WitnessCertificate verification;
  StepCertificate cert;
};

/// xi = |eta|^2, zeta quantized up to j/N with N = floor(N_{R,T}/eps) + 1 and
/// A_x = {(y, j) : 0 < j <= N zeta_x(y)}; bound 8 eps/(1 - 4 eps - eps^2).
WitnessStep l2_to_witness(const FuzzySpace& space, const Field& l2, Scale close, double eps);

/// j with j - 1 < N xi <= j.
std::uint64_t quantize_up(double xi, std::uint64_t N);

// ------------------------------------------------------- kernel utilities

struct PsdCheck {
  bool psd = false;
  double min_eigenvalue = 0.0;
  double threshold = 0.0;  // -1e-8 ||k||_F
};

/// Hermitian PSD test through the real embedding [[A, -B], [B, A]].
PsdCheck kernel_psd_check(const Kernel& k);

struct ComposeResult {
  PropagatedOperator product;
  bool verified = false;
  std::size_t violations = 0;
};

/// Product S1 S2 with window (t1 + t2, (1-r1)*(1-r2)), verified entrywise.
ComposeResult propagation_compose(const FuzzySpace& space, const PropagatedOperator& s1, const PropagatedOperator& s2);

/// Count of entries that are nonzero although M(x,y,t) < 1 - r.
std::size_t window_violations(const FuzzySpace& space, const Matrix& m, Scale window);

// ------------------------------------------------------------ round trip

struct TheoreticalChain {
  std::vector<std::pair<std::string, double>> stages;  // +inf once a stage degenerates
  bool degenerate = false;
};

/// The proof's constants composed from a witness eps, with no measurement.
TheoreticalChain theoretical_chain(double witness_eps);

struct RoundTrip {
  std::vector<StepCertificate> steps;
  L1Step l1;
  L2Step l2;
  WindowStep window;
  KernelStep kernel;
  OperatorStep op;
  SqrtStep sqrt;
  WitnessStep final_witness;
  TheoreticalChain theory;
  double final_eps = 0.0;         // certified ratio bound of the final witness
  double inflation = 0.0;         // final_eps / starting eps
  bool passed = false;
};

/// (i) -> (ii) -> (iii) -> (iv) -> (v) -> (vi) -> (iii) -> (i) with measured
/// eps tracked between steps. Stops at the first rejected step.
RoundTrip characterization_round_trip(const FuzzySpace& space, const WitnessFamily& w, const ParamTuple& p);

}  // namespace fuzzycoarse
