#include "ldacert/report.hpp"

#include <cmath>

#include <fmt/format.h>

#include "ldacert/bounds.hpp"

namespace ldacert {

namespace {

void write(std::string& out, const Json& j, int indent, int depth) {
  const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent) * (depth + 1), ' ') : "";
  const std::string close = indent > 0 ? std::string(static_cast<std::size_t>(indent) * depth, ' ') : "";
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{";
      out += nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) {
          out += ",";
          out += nl;
        }
        first = false;
        out += pad;
        out += Json(it.key()).dump();
        out += indent > 0 ? ": " : ":";
        write(out, it.value(), indent, depth + 1);
      }
      out += nl;
      out += close;
      out += "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[";
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += ", ";
        first = false;
        write(out, v, indent, depth + 1);
      }
      out += "]";
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? fmt::format("{:.17g}", v) : "null";
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

std::string dump_json(const Json& j, int indent) {
  std::string out;
  write(out, j, indent, 0);
  return out;
}

Json functionals_json(const FunctionalSet& F) {
  Json j;
  j["mass"] = F.mass;
  j["rho2"] = F.l2;
  j["rho43"] = F.l43;
  j["rho53"] = F.l53;
  j["grad_sqrt_rho_sq"] = F.kin;
  j["grad_rho_abs"] = F.tv;
  j["grad_rho_theta_p"] = F.thg;
  j["hartree"] = F.hartree ? Json(*F.hartree) : Json(nullptr);
  return j;
}

Json params_json(const CertParams& P) {
  Json j;
  j["p"] = P.p;
  j["theta"] = P.theta;
  j["C"] = P.C;
  j["q"] = P.q;
  j["variant"] = to_string(P.variant);
  j["kappa_nam"] = P.kinetic.kappa_nam;
  j["kappa1"] = P.kinetic.kappa1;
  j["kappa2"] = P.kinetic.kappa2;
  return j;
}

Json constants_json(const CertParams& P) {
  Json j;
  j["c_TF"] = c_tf(3);
  j["c_LO"] = kLiebOxford;
  j["c_LO_grad"] = lieb_oxford_gradient_constant();
  j["c_LO_grad_coefficient"] = kLiebOxfordGradientCoef;
  j["c_LT"] = P.kinetic.c_lt > 0.0 ? P.kinetic.c_lt : c_tf(3);
  j["c_LT_mode"] = P.kinetic.c_lt > 0.0 ? "user" : "conjectured";
  j["theta_exponent"] = theta_exponent(P);
  return j;
}

Json certificate_json(const Certificate& c) {
  Json j;
  j["params"] = params_json(c.params);
  j["constants"] = constants_json(c.params);
  Json m;
  m["name"] = c.model_name;
  m["A"] = c.model_A;
  m["B"] = c.model_B;
  m["kind"] = "model";
  j["model"] = m;
  j["density"] = c.density;
  j["functionals"] = functionals_json(c.functionals);
  j["lda"] = c.lda;
  j["band_center"] = c.center;
  j["epsilon_star"] = c.eps_star;
  Json r;
  r["bulk"] = c.rhs.bulk;
  r["kin"] = c.rhs.kin;
  r["theta"] = c.rhs.theta;
  r["total"] = c.rhs.total;
  j["rhs"] = r;
  j["band"] = Json::array({c.band_lo, c.band_hi});
  j["advisory_envelope"] = Json::array({c.envelope_lo, c.envelope_hi});
  j["flags"] = c.flags;
  return j;
}

Json scaling_json(const ScalingResult& s, const CertParams& P) {
  Json j;
  j["params"] = params_json(P);
  j["constants"] = constants_json(P);
  Json rows = Json::array();
  for (const auto& pt : s.points) {
    Json row;
    row["N"] = pt.N;
    row["epsilon"] = pt.eps;
    row["total"] = pt.total;
    rows.push_back(row);
  }
  j["points"] = rows;
  j["slope"] = s.slope;
  return j;
}

}  // namespace ldacert
