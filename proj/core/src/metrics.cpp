/*
 * kfsieve — content-aware keyframe selection for posed RGB-D streams
 *
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */

#include "kfsieve/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "kfsieve/errors.hpp"

namespace kfsieve {

namespace {

void check_dims(const ImageRgb& current, const ImageRgb& warped, const Mask& mask) {
  if (!current.same_dims(warped) || current.width() != mask.width() ||
      current.height() != mask.height()) {
    throw ValidationError("metric inputs must share dimensions");
  }
}

std::vector<double> luminance(const ImageRgb& img) {
  const auto s = img.samples();
  std::vector<double> out(img.pixel_count());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = 0.299 * s[i * 3 + 0] + 0.587 * s[i * 3 + 1] + 0.114 * s[i * 3 + 2];
  }
  return out;
}

std::vector<double> gaussian_kernel(int window, double sigma) {
  std::vector<double> k(window);
  const double r = (window - 1) / 2.0;
  double sum = 0.0;
  for (int i = 0; i < window; ++i) {
    k[i] = std::exp(-(i - r) * (i - r) / (2.0 * sigma * sigma));
    sum += k[i];
  }
  for (double& v : k) v /= sum;
  return k;
}

// Separable convolution with zero padding: out-of-bounds taps contribute
// nothing, which together with the weight-sum field implements the
// clamp-and-renormalize window semantics.
void convolve_separable(std::vector<double>& field, std::vector<double>& scratch, int width,
                        int height, const std::vector<double>& kernel) {
  const int radius = static_cast<int>(kernel.size() / 2);
  // Horizontal pass: field -> scratch.
  for (int y = 0; y < height; ++y) {
    const std::size_t row = static_cast<std::size_t>(y) * width;
    for (int x = 0; x < width; ++x) {
      const int lo = std::max(0, x - radius);
      const int hi = std::min(width - 1, x + radius);
      double acc = 0.0;
      for (int xx = lo; xx <= hi; ++xx) {
        acc += kernel[xx - x + radius] * field[row + xx];
      }
      scratch[row + x] = acc;
    }
  }
  // Vertical pass: scratch -> field.
  for (int y = 0; y < height; ++y) {
    const int lo = std::max(0, y - radius);
    const int hi = std::min(height - 1, y + radius);
    for (int x = 0; x < width; ++x) {
      double acc = 0.0;
      for (int yy = lo; yy <= hi; ++yy) {
        acc += kernel[yy - y + radius] * scratch[static_cast<std::size_t>(yy) * width + x];
      }
      field[static_cast<std::size_t>(y) * width + x] = acc;
    }
  }
}

}  // namespace

double photometric_error(const ImageRgb& current, const ImageRgb& warped, const Mask& mask) {
  check_dims(current, warped, mask);
  const auto cur = current.samples();
  const auto wrp = warped.samples();
  const auto m = mask.samples();

  double acc = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (!m[i]) continue;
    const double dr = std::abs(static_cast<double>(cur[i * 3 + 0]) - wrp[i * 3 + 0]);
    const double dg = std::abs(static_cast<double>(cur[i * 3 + 1]) - wrp[i * 3 + 1]);
    const double db = std::abs(static_cast<double>(cur[i * 3 + 2]) - wrp[i * 3 + 2]);
    acc += (dr + dg + db) / 3.0;
    ++count;
  }
  if (count == 0) throw ValidationError("photometric_error: empty mask");
  return acc / static_cast<double>(count);
}

double ssim_error(const ImageRgb& current, const ImageRgb& warped, const Mask& mask,
                  const SsimParams& params) {
  check_dims(current, warped, mask);
  if (params.window < 3 || params.window % 2 == 0) {
    throw ValidationError("ssim_error: window must be odd and >= 3");
  }

  const int width = current.width();
  const int height = current.height();
  const std::size_t n = static_cast<std::size_t>(width) * height;
  const auto m = mask.samples();

  const std::vector<double> x = luminance(current);
  const std::vector<double> y = luminance(warped);

  // Masked moment fields; pixels outside the mask are zeroed so they carry
  // no weight anywhere.
  std::vector<double> sw(n), sx(n), sy(n), sxx(n), syy(n), sxy(n);
  std::size_t valid = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!m[i]) continue;
    ++valid;
    sw[i] = 1.0;
    sx[i] = x[i];
    sy[i] = y[i];
    sxx[i] = x[i] * x[i];
    syy[i] = y[i] * y[i];
    sxy[i] = x[i] * y[i];
  }
  if (valid == 0) throw ValidationError("ssim_error: empty mask");

  const std::vector<double> kernel = gaussian_kernel(params.window, params.sigma);
  std::vector<double> scratch(n);
  convolve_separable(sw, scratch, width, height, kernel);
  convolve_separable(sx, scratch, width, height, kernel);
  convolve_separable(sy, scratch, width, height, kernel);
  convolve_separable(sxx, scratch, width, height, kernel);
  convolve_separable(syy, scratch, width, height, kernel);
  convolve_separable(sxy, scratch, width, height, kernel);

  double acc = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!m[i]) continue;
    const double wsum = sw[i];  // > 0: the center itself carries weight
    const double mu_x = sx[i] / wsum;
    const double mu_y = sy[i] / wsum;
    const double var_x = std::max(0.0, sxx[i] / wsum - mu_x * mu_x);
    const double var_y = std::max(0.0, syy[i] / wsum - mu_y * mu_y);
    const double cov = sxy[i] / wsum - mu_x * mu_y;
    const double ssim = ((2.0 * mu_x * mu_y + params.c1) * (2.0 * cov + params.c2)) /
                        ((mu_x * mu_x + mu_y * mu_y + params.c1) * (var_x + var_y + params.c2));
    acc += ssim;
    ++count;
  }
  const double mean_ssim = acc / static_cast<double>(count);
  return std::clamp(1.0 - mean_ssim, 0.0, 2.0);
}

double combine(double e_photo, double e_ssim, double alpha, double beta) {
  if (!(std::isfinite(e_photo) && e_photo >= 0.0) ||
      !(std::isfinite(e_ssim) && e_ssim >= 0.0)) {
    throw ValidationError("combine: error terms must be finite and >= 0");
  }
  return alpha * e_photo + beta * e_ssim;
}

ErrorScore hybrid_error(const Frame& current, const Frame& keyframe,
                        const SelectorConfig& cfg) {
  if (!current.intrinsics().same_dims(keyframe.intrinsics())) {
    throw ValidationError("hybrid_error: frames must share dimensions");
  }

  const WarpResult warp = warp_frame(keyframe, current.pose(), current.intrinsics());

  ErrorScore score;
  score.valid_fraction = mask_coverage(warp);
  if (score.valid_fraction == 0.0) {
    score.degenerate = true;
    return score;
  }
  score.e_photo = photometric_error(current.rgb(), warp.warped, warp.mask);
  score.e_ssim = ssim_error(current.rgb(), warp.warped, warp.mask, cfg.ssim);
  score.e_t = combine(score.e_photo, score.e_ssim, cfg.alpha, cfg.beta);
  score.degenerate = score.valid_fraction < cfg.min_valid_fraction;
  return score;
}

}  // namespace kfsieve
