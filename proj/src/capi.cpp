#include "expchaos/expchaos.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "expchaos/dynamics.hpp"
#include "expchaos/hyperbolic.hpp"
#include "expchaos/inverse.hpp"
#include "expchaos/render.hpp"
#include "expchaos/witness.hpp"

using namespace expchaos;

struct ec_orbit {
  OrbitRecord rec;
};

struct ec_report {
  nlohmann::json j;
};

struct ec_image {
  Image img;
};

namespace {

thread_local std::string g_last_error;

ec_status fail(ec_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

// Runs body, translating exceptions to status codes.
template <class F>
ec_status guard(F&& body) {
  try {
    body();
    g_last_error.clear();
    return EC_OK;
  } catch (const Error& e) {
    return fail(static_cast<ec_status>(e.code()), e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(EC_PARSE, e.what());
  } catch (const std::bad_alloc&) {
    return fail(EC_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(EC_INTERNAL, e.what());
  } catch (...) {
    return fail(EC_INTERNAL, "unknown exception");
  }
}

Complex cx(ec_complex z) { return {z.re, z.im}; }
ec_complex ec(Complex z) { return {z.real(), z.imag()}; }
Disc disc(ec_disc u) { return {cx(u.center), u.radius}; }

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.data(), s.size() + 1);
  return p;
}

void need(const void* p, const char* what) {
  if (!p) throw Error(ErrorCode::InvalidArgument, std::string(what) + " is null");
}

ClassifyParams classify_params(const ec_classify_params* p) {
  ClassifyParams cp;
  if (!p) return cp;
  cp.escape_re_threshold = p->escape_re_threshold;
  cp.k_consec = p->k_consec;
  cp.tol_axis = p->tol_axis;
  cp.periodic_tol = p->periodic_tol;
  cp.period_scan_limit = p->period_scan_limit;
  return cp;
}

GridSpec grid_spec(const ec_grid* g) {
  need(g, "grid");
  GridSpec s{g->re_min, g->re_max, g->im_min, g->im_max, g->width, g->height};
  return s;
}

template <class W>
ec_status make_report(ec_report** out, W&& run) {
  return guard([&] {
    need(out, "out");
    *out = nullptr;
    auto* r = new ec_report{run().report.to_json()};
    *out = r;
  });
}

const nlohmann::json& output(const ec_report* r, const char* key) {
  need(r, "report");
  need(key, "key");
  const auto& o = r->j.at("outputs");
  if (!o.contains(key)) throw Error(ErrorCode::InvalidArgument, std::string("no output '") + key + "'");
  return o.at(key);
}

}  // namespace

extern "C" {

const char* ec_last_error(void) { return g_last_error.c_str(); }

const char* ec_status_name(ec_status s) {
  if (s == EC_OK) return "Ok";
  if (s == EC_INTERNAL) return "Internal";
  if (s >= EC_INVALID_ARGUMENT && s <= EC_PARSE) return error_code_name(static_cast<ErrorCode>(s));
  return "Unknown";
}

void ec_string_free(char* s) { std::free(s); }

ec_status ec_exp_map(ec_complex z, ec_complex* out) {
  return guard([&] {
    need(out, "out");
    *out = ec(exp_map(cx(z)));
  });
}

void ec_classify_params_default(ec_classify_params* p) {
  if (!p) return;
  const ClassifyParams d;
  *p = {d.escape_re_threshold, d.k_consec, d.tol_axis, d.periodic_tol, d.period_scan_limit};
}

const char* ec_orbit_class_name(ec_orbit_class c) {
  if (c < EC_ESCAPING_CERTIFIED || c > EC_OVERFLOWED) return "Unknown";
  return orbit_class_name(static_cast<OrbitClass>(c));
}

ec_status ec_orbit_iterate(ec_complex z0, int max_steps, const ec_classify_params* params,
                           ec_orbit** out) {
  return guard([&] {
    need(out, "out");
    *out = nullptr;
    if (max_steps < 0) throw Error(ErrorCode::InvalidArgument, "max_steps must be >= 0");
    *out = new ec_orbit{iterate(cx(z0), max_steps, classify_params(params))};
  });
}

void ec_orbit_free(ec_orbit* o) { delete o; }

size_t ec_orbit_length(const ec_orbit* o) { return o ? o->rec.length() : 0; }

ec_status ec_orbit_point(const ec_orbit* o, size_t k, ec_complex* out) {
  return guard([&] {
    need(o, "orbit");
    need(out, "out");
    if (k >= o->rec.length()) throw Error(ErrorCode::InvalidArgument, "index past end of orbit");
    *out = ec(o->rec.points[k]);
  });
}

ec_status ec_orbit_shadow(const ec_orbit* o, size_t k, double* log_mod, double* arg) {
  return guard([&] {
    need(o, "orbit");
    if (k >= o->rec.length()) throw Error(ErrorCode::InvalidArgument, "index past end of orbit");
    if (log_mod) *log_mod = o->rec.shadows[k].log_mod;
    if (arg) *arg = o->rec.shadows[k].arg;
  });
}

ec_status ec_orbit_classification(const ec_orbit* o, ec_classification* out) {
  return guard([&] {
    need(o, "orbit");
    need(out, "out");
    const auto& c = o->rec.classification;
    *out = {static_cast<ec_orbit_class>(c.kind), c.period, c.at_step};
  });
}

ec_status ec_orbit_csv(const ec_orbit* o, char** out) {
  return guard([&] {
    need(o, "orbit");
    need(out, "out");
    *out = dup(o->rec.to_csv());
  });
}

ec_status ec_orbit_json(const ec_orbit* o, char** out) {
  return guard([&] {
    need(o, "orbit");
    need(out, "out");
    *out = dup(o->rec.to_json());
  });
}

ec_status ec_orbit_multiplier(const ec_orbit* o, double* log_modulus, ec_complex* value,
                              int* value_ok) {
  return guard([&] {
    need(o, "orbit");
    std::size_t n = o->rec.length();
    if (o->rec.overflow_step > 0) n = static_cast<std::size_t>(o->rec.overflow_step);
    const Multiplier m = multiplier_along(std::span<const Complex>(o->rec.points.data(), n));
    if (log_modulus) *log_modulus = m.log_modulus;
    if (value_ok) *value_ok = m.value.has_value();
    if (value) *value = ec(m.value.value_or(Complex{}));
  });
}

ec_status ec_density(const char* domain, ec_complex z, double* out) {
  return guard([&] {
    need(domain, "domain");
    need(out, "out");
    *out = density(parse_domain(domain), cx(z));
  });
}

ec_status ec_expansion_u(ec_complex zeta, double* out) {
  return guard([&] {
    need(out, "out");
    *out = expansion_U(cx(zeta));
  });
}

ec_status ec_expansion_slitneg(ec_complex zeta, double* out) {
  return guard([&] {
    need(out, "out");
    *out = expansion_slitneg(cx(zeta));
  });
}

ec_status ec_rho_for_target(ec_complex v, double* out) {
  return guard([&] {
    need(out, "out");
    *out = rho_for_target(cx(v));
  });
}

ec_status ec_find_escaping_point(ec_disc u, double t_star, int m_max, ec_report** out) {
  return make_report(out, [&] { return find_escaping_point(disc(u), t_star, m_max); });
}

ec_status ec_transitivity_witness(ec_disc u, ec_complex v, int n_min, uint64_t seed,
                                  ec_report** out) {
  return make_report(out, [&] { return transitivity_witness(disc(u), cx(v), n_min, seed); });
}

ec_status ec_find_periodic(ec_disc u, uint64_t seed, ec_report** out) {
  return make_report(out, [&] { return find_periodic(disc(u), seed); });
}

ec_status ec_sensitivity_witness(ec_disc u, double s, uint64_t seed, ec_report** out) {
  return make_report(out, [&] { return sensitivity_witness(disc(u), s, seed); });
}

ec_status ec_report_from_json(const char* text, ec_report** out) {
  return guard([&] {
    need(text, "text");
    need(out, "out");
    *out = nullptr;
    auto j = nlohmann::json::parse(text);
    WitnessReport::from_json(j);  // schema check
    *out = new ec_report{std::move(j)};
  });
}

void ec_report_free(ec_report* r) { delete r; }

ec_status ec_report_json(const ec_report* r, char** out) {
  return guard([&] {
    need(r, "report");
    need(out, "out");
    *out = dup(r->j.dump(2));
  });
}

ec_status ec_report_output_number(const ec_report* r, const char* key, double* out) {
  return guard([&] {
    need(out, "out");
    const auto& v = output(r, key);
    if (!v.is_number()) throw Error(ErrorCode::InvalidArgument, std::string("output '") + key + "' is not a number");
    *out = v.get<double>();
  });
}

ec_status ec_report_output_complex(const ec_report* r, const char* key, ec_complex* out) {
  return guard([&] {
    need(out, "out");
    const auto& v = output(r, key);
    if (!v.is_array() || v.size() != 2)
      throw Error(ErrorCode::InvalidArgument, std::string("output '") + key + "' is not a complex pair");
    *out = {v[0].get<double>(), v[1].get<double>()};
  });
}

ec_status ec_report_verify(const ec_report* r, int* ok, char** failures) {
  return guard([&] {
    need(r, "report");
    need(ok, "ok");
    const VerifyResult v = verify_report(r->j);
    *ok = v.ok;
    if (failures) *failures = dup(nlohmann::json(v.failures).dump());
  });
}

void ec_render_params_default(ec_render_params* p) {
  if (!p) return;
  const RenderParams d;
  *p = {d.max_steps, d.escape_re_threshold, EC_PALETTE_GRAYSCALE, d.threads};
}

ec_status ec_render_escape(const ec_grid* grid, const ec_render_params* params, ec_image** out) {
  return guard([&] {
    need(out, "out");
    *out = nullptr;
    RenderParams rp;
    if (params) {
      rp.max_steps = params->max_steps;
      rp.escape_re_threshold = params->escape_re_threshold;
      rp.palette = params->palette == EC_PALETTE_CLASSIFICATION ? Palette::Classification
                                                                : Palette::Grayscale;
      rp.threads = params->threads;
    }
    *out = new ec_image{render_escape_map(grid_spec(grid), rp)};
  });
}

ec_status ec_render_density(const char* domain, const ec_grid* grid, int threads, ec_image** out) {
  return guard([&] {
    need(domain, "domain");
    need(out, "out");
    *out = nullptr;
    *out = new ec_image{render_density_map(parse_domain(domain), grid_spec(grid), threads)};
  });
}

void ec_image_free(ec_image* img) { delete img; }

ec_status ec_image_size(const ec_image* img, int* width, int* height) {
  return guard([&] {
    need(img, "image");
    if (width) *width = img->img.width;
    if (height) *height = img->img.height;
  });
}

const uint8_t* ec_image_pixels(const ec_image* img) { return img ? img->img.rgb.data() : nullptr; }

ec_status ec_image_ppm(const ec_image* img, char** bytes, size_t* len) {
  return guard([&] {
    need(img, "image");
    need(bytes, "bytes");
    need(len, "len");
    const std::string s = img->img.to_ppm();
    *bytes = dup(s);
    *len = s.size();
  });
}

ec_status ec_image_write_ppm(const ec_image* img, const char* path) {
  return guard([&] {
    need(img, "image");
    need(path, "path");
    img->img.write_ppm(path);
  });
}

ec_status ec_image_hash(const ec_image* img, char out[17]) {
  return guard([&] {
    need(img, "image");
    need(out, "out");
    const std::string h = fnv1a_hex(img->img.to_ppm());
    std::memcpy(out, h.c_str(), 17);
  });
}

}  // extern "C"
