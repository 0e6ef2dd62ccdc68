#include "polystab/region.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace polystab {

Region Region::disc(cplx center, double radius, bool closed) {
  if (!(radius > 0.0)) throw SchemaError("disc radius must be positive");
  Region r;
  r.kind = RegionKind::Disc;
  r.center = center;
  r.radius = radius;
  r.closed = closed;
  return r;
}

Region Region::disc_exterior(cplx center, double radius, bool closed) {
  if (radius < 0.0) throw SchemaError("disc_exterior radius must be >= 0");
  Region r;
  r.kind = RegionKind::DiscExterior;
  r.center = center;
  r.radius = radius;
  r.closed = closed;
  return r;
}

Region Region::half_plane(double phi, double offset, bool closed) {
  Region r;
  r.kind = RegionKind::HalfPlane;
  r.phi = wrap_angle(phi);
  r.offset = offset;
  r.closed = closed;
  return r;
}

Region Region::sector(double arg_lo, double arg_hi, bool closed,
                      bool contains_zero) {
  if (!(-pi < arg_lo && arg_lo < arg_hi && arg_hi <= pi))
    throw SchemaError("sector requires -pi < arg_lo < arg_hi <= pi");
  Region r;
  r.kind = RegionKind::Sector;
  r.arg_lo = arg_lo;
  r.arg_hi = arg_hi;
  r.closed = closed;
  r.contains_zero = contains_zero;
  return r;
}

RegionMargin Region::margin(cplx lambda) const {
  RegionMargin m;
  switch (kind) {
    case RegionKind::Disc:
      m.value = radius - std::abs(lambda - center);
      return m;
    case RegionKind::DiscExterior:
      m.value = std::abs(lambda - center) - radius;
      return m;
    case RegionKind::HalfPlane:
      m.value = std::imag(lambda * std::polar(1.0, phi)) - offset;
      return m;
    case RegionKind::Sector: {
      if (lambda == cplx(0.0, 0.0)) {
        m.value = 0.0;
        m.degenerate = true;
        return m;
      }
      // Angular slack measured from the sector bisector; continuous on
      // C \ {0} even when lambda crosses the principal branch cut.
      double mid = 0.5 * (arg_lo + arg_hi);
      double half = 0.5 * (arg_hi - arg_lo);
      double delta = wrap_angle(principal_arg(lambda) - mid);
      m.value = half - std::abs(delta);
      return m;
    }
  }
  return m;  // unreachable
}

bool Region::contains(cplx lambda, double tau_bnd) const {
  if (kind == RegionKind::Sector && lambda == cplx(0.0, 0.0))
    return contains_zero;
  RegionMargin m = margin(lambda);
  if (m.value > tau_bnd) return true;
  if (m.value < -tau_bnd) return false;
  return closed;
}

bool Region::boundary_sensitive(cplx lambda, double tau_bnd) const {
  if (kind == RegionKind::Sector && lambda == cplx(0.0, 0.0)) return false;
  return std::abs(margin(lambda).value) <= tau_bnd;
}

bool Region::complement_is_convex() const {
  // Half-plane complements are half-planes; a disc-exterior complement is a
  // disc. Disc and sector complements are never convex.
  return kind == RegionKind::HalfPlane || kind == RegionKind::DiscExterior;
}

Region Region::affine_pullback(cplx alpha, cplx beta) const {
  if (alpha == cplx(0.0, 0.0))
    throw SchemaError("affine_pullback requires alpha != 0");
  switch (kind) {
    case RegionKind::Disc: {
      Region r = *this;
      r.center = (center - beta) / alpha;
      r.radius = radius / std::abs(alpha);
      return r;
    }
    case RegionKind::DiscExterior: {
      Region r = *this;
      r.center = (center - beta) / alpha;
      r.radius = radius / std::abs(alpha);
      return r;
    }
    case RegionKind::HalfPlane: {
      // im((alpha l + beta) e^{i phi}) > c
      //   <=>  im(l e^{i(phi + arg alpha)}) > (c - im(beta e^{i phi}))/|alpha|
      Region r = *this;
      r.phi = wrap_angle(phi + std::arg(alpha));
      r.offset = (offset - std::imag(beta * std::polar(1.0, phi))) /
                 std::abs(alpha);
      return r;
    }
    case RegionKind::Sector: {
      if (beta != cplx(0.0, 0.0))
        throw Unrepresentable("sector pulled back by a translation is not a sector");
      double rot = std::arg(alpha);
      double lo = arg_lo - rot, hi = arg_hi - rot;
      // The result must live inside the principal branch without wrapping.
      if (!(-pi < lo && hi <= pi))
        throw Unrepresentable("sector rotation leaves the principal branch");
      Region r = *this;
      r.arg_lo = lo;
      r.arg_hi = hi;
      return r;
    }
  }
  throw NumericFailure("unreachable region kind");
}

cplx Region::interior_point() const {
  switch (kind) {
    case RegionKind::Disc:
      return center;
    case RegionKind::DiscExterior:
      return center + cplx(2.0 * radius + 1.0, 0.0);
    case RegionKind::HalfPlane:
      // offset + 1 along the inward normal i*e^{-i phi}
      return cplx(0.0, offset + 1.0) * std::polar(1.0, -phi);
    case RegionKind::Sector:
      return std::polar(1.0, 0.5 * (arg_lo + arg_hi));
  }
  throw NumericFailure("unreachable region kind");
}

cplx random_point(const Region& d, RngEngine& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  switch (d.kind) {
    case RegionKind::Disc: {
      double r = d.radius * (0.999 * std::sqrt(unit(rng)));
      return d.center + std::polar(r, 2.0 * pi * unit(rng));
    }
    case RegionKind::DiscExterior: {
      double base = d.radius > 0.0 ? d.radius : 1.0;
      double r = base * std::exp(0.01 + 3.0 * unit(rng));
      if (d.radius == 0.0) r = std::exp(3.0 * (unit(rng) - 0.5));
      return d.center + std::polar(r, 2.0 * pi * unit(rng));
    }
    case RegionKind::HalfPlane: {
      // lambda = e^{-i phi} (t + i (offset + s)), s > 0
      std::normal_distribution<double> tangent(0.0, 2.0);
      double s = -std::log(std::max(unit(rng), 1e-12));
      return cplx(tangent(rng), d.offset + s) * std::polar(1.0, -d.phi);
    }
    case RegionKind::Sector: {
      double u = 0.001 + 0.998 * unit(rng);
      double theta = d.arg_lo + u * (d.arg_hi - d.arg_lo);
      double r = std::exp(3.0 * (unit(rng) - 0.5));
      return std::polar(r, theta);
    }
  }
  throw NumericFailure("unreachable region kind");
}

cplx project_into(const Region& d, cplx lambda) {
  switch (d.kind) {
    case RegionKind::Disc: {
      cplx v = lambda - d.center;
      double a = std::abs(v);
      if (a <= d.radius) return lambda;
      return d.center + v * (d.radius / a);
    }
    case RegionKind::DiscExterior: {
      cplx v = lambda - d.center;
      double a = std::abs(v);
      if (a >= d.radius) return lambda;
      if (a == 0.0) return d.center + cplx(d.radius, 0.0);
      return d.center + v * (d.radius / a);
    }
    case RegionKind::HalfPlane: {
      double m = std::imag(lambda * std::polar(1.0, d.phi)) - d.offset;
      if (m >= 0.0) return lambda;
      // move along the inward normal i e^{-i phi} by the deficit
      return lambda + cplx(0.0, -m) * std::polar(1.0, -d.phi);
    }
    case RegionKind::Sector: {
      if (lambda == cplx(0.0, 0.0)) return lambda;
      double mid = 0.5 * (d.arg_lo + d.arg_hi);
      double half = 0.5 * (d.arg_hi - d.arg_lo);
      double delta = wrap_angle(principal_arg(lambda) - mid);
      if (std::abs(delta) <= half) return lambda;
      double clamped = mid + std::clamp(delta, -half, half);
      return std::polar(std::abs(lambda), clamped);
    }
  }
  throw NumericFailure("unreachable region kind");
}

std::string Region::describe() const {
  std::ostringstream os;
  auto oc = [&] { return closed ? "closed" : "open"; };
  switch (kind) {
    case RegionKind::Disc:
      os << oc() << " disc center (" << center.real() << "," << center.imag()
         << ") radius " << radius;
      break;
    case RegionKind::DiscExterior:
      os << oc() << " exterior of disc center (" << center.real() << ","
         << center.imag() << ") radius " << radius;
      break;
    case RegionKind::HalfPlane:
      os << oc() << " half-plane im(z e^{i " << phi << "}) > " << offset;
      break;
    case RegionKind::Sector:
      os << oc() << " sector " << arg_lo << " < Arg z < " << arg_hi
         << (contains_zero ? " (with 0)" : " (without 0)");
      break;
  }
  return os.str();
}

}  // namespace polystab
