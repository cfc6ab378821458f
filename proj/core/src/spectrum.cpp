#include "isospec/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

namespace isospec {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDuplicate = 1e-6;

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Rough growth of a characteristic function: cosh(pi |Im rho|) * max(1, |rho|).
double growth(cplx lambda) {
  const cplx rho = std::sqrt(lambda);
  return std::cosh(kPi * std::abs(rho.imag())) * std::max(1.0, std::abs(rho));
}

struct EdgeResult {
  double phase = 0.0;
  double min_ratio = INFINITY;
  bool unresolved = false;
};

// Accumulated arg change of delta along the segment z0 -> z1.
EdgeResult edge_phase(const CharFn& delta, cplx z0, cplx z1, int samples) {
  EdgeResult r;
  struct Node {
    cplx z;
    cplx f;
  };
  auto eval = [&](cplx z) {
    const cplx f = delta(z);
    if (!finite(f)) throw ContourError("count_roots: characteristic function is not finite on the contour");
    r.min_ratio = std::min(r.min_ratio, std::abs(f) / growth(z));
    return Node{z, f};
  };
  const double min_len = 1e-12 * (1.0 + std::abs(z0) + std::abs(z1));
  Node prev = eval(z0);
  for (int k = 1; k <= samples; ++k) {
    const Node next = eval(z0 + (z1 - z0) * (static_cast<double>(k) / samples));
    // Bisect until each increment is below pi/4.
    std::vector<Node> stack{next};
    while (!stack.empty()) {
      const Node target = stack.back();
      const double d = std::arg(target.f / prev.f);
      if (std::abs(d) < 0.25 * kPi) {
        r.phase += d;
        prev = target;
        stack.pop_back();
        continue;
      }
      if (std::abs(target.z - prev.z) < min_len) {
        r.unresolved = true;
        r.phase += d;
        prev = target;
        stack.pop_back();
        continue;
      }
      stack.push_back(eval(0.5 * (prev.z + target.z)));
    }
  }
  return r;
}

bool is_duplicate(cplx u, cplx v) { return std::abs(u - v) < kDuplicate * (1.0 + std::abs(u)); }

bool inside(const Rectangle& r, cplx z) {
  return z.real() >= r.lo.real() && z.real() <= r.hi.real() && z.imag() >= r.lo.imag() &&
         z.imag() <= r.hi.imag();
}

// Order by real part; real parts equal to rounding (conjugate pairs) are ordered by imaginary part.
void sort_spectrum(std::vector<cplx>& z) {
  std::sort(z.begin(), z.end(), [](cplx u, cplx v) { return u.real() < v.real(); });
  std::size_t start = 0;
  for (std::size_t k = 1; k <= z.size(); ++k) {
    if (k == z.size() || z[k].real() - z[start].real() > 1e-8 * (1.0 + std::abs(z[start]))) {
      std::sort(z.begin() + static_cast<std::ptrdiff_t>(start), z.begin() + static_cast<std::ptrdiff_t>(k),
                [](cplx u, cplx v) { return u.imag() < v.imag(); });
      start = k;
    }
  }
}

}  // namespace

std::vector<cplx> initial_guesses(int nu, int j, int count) {
  if (count < 1) throw PreconditionError("initial_guesses: count must be positive");
  std::vector<cplx> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int n = 1; n <= count; ++n) {
    double rho = j == nu ? n : n - 0.5;
    if (nu == 1 && j == 1) rho = n - 1;
    out.emplace_back(rho * rho);
  }
  return out;
}

cplx refine_root(const CharFn& delta, cplx lambda0, const NewtonOptions& options) {
  const double h = 1e-6 * (1.0 + std::abs(lambda0));
  cplx lambda = lambda0;
  cplx f = delta(lambda);
  for (int it = 0; it < options.max_iter; ++it) {
    const cplx d = (delta(lambda + h) - delta(lambda - h)) / (2.0 * h);
    if (!finite(f) || !finite(d) || d == cplx{}) break;
    const cplx step = -f / d;
    cplx cand = lambda + step;
    cplx fc = delta(cand);
    double t = 1.0;
    for (int k = 0; k < 20 && !(finite(fc) && std::abs(fc) < std::abs(f)); ++k) {
      t *= 0.5;
      cand = lambda + t * step;
      fc = delta(cand);
    }
    lambda = cand;
    f = fc;
    const double scale = options.tol * (1.0 + std::abs(lambda));
    if (std::abs(f) <= scale && t * std::abs(step) <= scale) return lambda;
  }
  throw RefinementError("refine_root: Newton iteration did not converge", lambda);
}

int count_roots(const CharFn& delta, Rectangle rect, const CountOptions& options) {
  for (int attempt = 0; attempt <= options.max_retries; ++attempt) {
    const cplx c1 = rect.lo;
    const cplx c2{rect.hi.real(), rect.lo.imag()};
    const cplx c3 = rect.hi;
    const cplx c4{rect.lo.real(), rect.hi.imag()};
    double phase = 0.0, min_ratio = INFINITY;
    bool unresolved = false;
    for (const auto& [z0, z1] : {std::pair{c1, c2}, std::pair{c2, c3}, std::pair{c3, c4}, std::pair{c4, c1}}) {
      const EdgeResult e = edge_phase(delta, z0, z1, options.samples_per_edge);
      phase += e.phase;
      min_ratio = std::min(min_ratio, e.min_ratio);
      unresolved = unresolved || e.unresolved;
    }
    const double winding = phase / (2.0 * kPi);
    const double nearest = std::round(winding);
    if (!unresolved && min_ratio > 1e-8 && std::abs(winding - nearest) < 0.1) {
      return static_cast<int>(nearest);
    }
    const cplx mid = 0.5 * (rect.lo + rect.hi);
    const double grow = 1.0 + options.dilation;
    rect = {mid + grow * (rect.lo - mid), mid + grow * (rect.hi - mid)};
  }
  throw ContourError("count_roots: contour passes through a zero after all dilations");
}

Spectrum compute_spectrum(const CharFn& delta, int nu, int j, int n_max, const SpectrumOptions& options) {
  if (n_max < 1) throw PreconditionError("compute_spectrum: n_max must be positive");
  const auto seeds = initial_guesses(nu, j, n_max + 1);
  const double rho_a = std::sqrt(seeds[static_cast<std::size_t>(n_max - 1)].real());
  const double rho_b = std::sqrt(seeds[static_cast<std::size_t>(n_max)].real());
  const double right = std::pow(0.5 * (rho_a + rho_b), 2);

  struct Root {
    cplx lambda;
    int hits;
  };
  std::vector<Root> roots;
  auto add = [&](cplx z) {
    for (auto& r : roots) {
      if (is_duplicate(r.lambda, z)) {
        ++r.hits;
        return false;
      }
    }
    roots.push_back({z, 1});
    return true;
  };
  auto try_refine = [&](cplx start) {
    try {
      add(refine_root(delta, start, options.newton));
    } catch (const RefinementError&) {
    }
  };

  for (int n = 0; n < n_max; ++n) try_refine(seeds[static_cast<std::size_t>(n)]);

  double left = options.re_floor;
  for (const auto& r : roots) {
    if (r.lambda.real() <= right && std::abs(r.lambda.imag()) <= options.im_window) {
      left = std::min(left, r.lambda.real() - 1.0);
    }
  }
  Spectrum s;
  s.window = {cplx{left, -options.im_window}, cplx{right, options.im_window}};
  s.certified_count = count_roots(delta, s.window);

  auto found = [&] {
    return static_cast<int>(std::count_if(roots.begin(), roots.end(),
                                          [&](const Root& r) { return inside(s.window, r.lambda); }));
  };

  if (found() < s.certified_count) {
    // Real-axis sign changes of Re delta.
    const int samples = std::max(400, 40 * n_max);
    const double step = (right - left) / samples;
    cplx prev = delta(left);
    for (int k = 1; k <= samples && found() < s.certified_count; ++k) {
      const double x = left + step * k;
      const cplx cur = delta(x);
      if ((prev.real() < 0.0) != (cur.real() < 0.0)) {
        const double t = prev.real() / (prev.real() - cur.real());
        try_refine(cplx{x - step + t * step, 0.0});
      }
      prev = cur;
    }
    // Coarse complex grid.
    const int columns = 4 * n_max;
    for (int level = 1; level <= 3 && found() < s.certified_count; ++level) {
      for (const double sign : {1.0, -1.0}) {
        const double im = sign * options.im_window * level / 4.0;
        for (int k = 0; k <= columns && found() < s.certified_count; ++k) {
          try_refine(cplx{left + (right - left) * k / columns, im});
        }
      }
    }
  }

  std::vector<cplx> listed;
  for (const auto& r : roots) {
    if (inside(s.window, r.lambda)) listed.push_back(r.lambda);
  }
  const int distinct = static_cast<int>(listed.size());
  if (distinct != s.certified_count) {
    // Accept repeated hits on one root as a multiple zero when that explains the count exactly.
    std::vector<cplx> clusters;
    for (const auto& r : roots) {
      if (inside(s.window, r.lambda) && r.hits > 1) clusters.push_back(r.lambda);
    }
    if (distinct > s.certified_count || s.certified_count - distinct != static_cast<int>(clusters.size())) {
      throw IncompletenessError("compute_spectrum: refined roots do not match the winding count", distinct,
                                s.certified_count);
    }
    listed.insert(listed.end(), clusters.begin(), clusters.end());
  }
  sort_spectrum(listed);
  for (std::size_t k = 0; k < listed.size(); ++k) {
    s.entries.push_back({static_cast<int>(k) + 1, listed[k], std::abs(delta(listed[k]))});
  }
  return s;
}

double compare(const Spectrum& s1, const Spectrum& s2) {
  if (s1.entries.size() != s2.entries.size()) {
    throw ComparisonError("compare: spectra have " + std::to_string(s1.entries.size()) + " and " +
                          std::to_string(s2.entries.size()) + " entries");
  }
  double worst = 0.0;
  for (std::size_t k = 0; k < s1.entries.size(); ++k) {
    const cplx l1 = s1.entries[k].lambda;
    worst = std::max(worst, std::abs(l1 - s2.entries[k].lambda) / (1.0 + std::abs(l1)));
  }
  return worst;
}

void write_csv(std::ostream& out, const Spectrum& s) {
  out << "n,re_lambda,im_lambda,residual\n";
  char buf[128];
  for (const auto& e : s.entries) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g\n", e.n, e.lambda.real(), e.lambda.imag(), e.residual);
    out << buf;
  }
}

}  // namespace isospec
